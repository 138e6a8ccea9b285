//! Differential modules: cycles, boundaries and homology, the embedding of a
//! split object, and the minimal resolution with its five certificates.

use qshape::diffmod::{bzh, eta_embedding, resolve_min_diff, DifferentialModule};
use qshape::module::direct_sum;
use qshape::{Matrix, Module, ModuleMap, PrimeField, QuiverAlgebra};

fn main() -> qshape::Result<()> {
    let f = PrimeField::new(5)?;
    let k = QuiverAlgebra::ground_field(f);
    let one = Module::simple(&k, 0)?;
    let k3 = direct_sum(&k, &[one.clone(), one.clone(), one]).module;
    let shift = Matrix::from_i64_rows(f, &[&[0, 0, 0], &[1, 0, 0], &[0, 0, 0]]);
    let d = DifferentialModule::new(k3.clone(), ModuleMap::new(k3.clone(), k3, vec![shift])?)?;
    let b = bzh(&d);
    println!(
        "(k³, e1 ↦ e2): Z dim {}, B dim {}, H dim {}",
        b.cycles.source().total_dim(),
        b.boundaries.source().total_dim(),
        b.homology().total_dim()
    );
    let eta = eta_embedding(&d)?;
    println!("η: injective {}, pushout dimension {}", eta.eta.is_mono(), eta.pushout.total_dim());

    let a = QuiverAlgebra::linear_a(f, 2)?;
    let s2 = Module::simple(&a, 1)?;
    let r = resolve_min_diff(&DifferentialModule::trivial(&s2))?;
    println!("minimal resolution of (S_2, 0): dims {:?}", r.target.underlying().dims());
    println!("certificates {:?}", r.certificates);
    Ok(())
}
