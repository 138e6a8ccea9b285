//! Morphisms in the derived category of differential modules, compared with
//! `Hom ⊕ Ext¹` from classical projective resolutions.

use qshape::classic::ext_dim;
use qshape::diffmod::{loop_category, DifferentialModule};
use qshape::module::hom_dim;
use qshape::resolve::{hom_in_derived, ResolveOptions};
use qshape::{Module, PrimeField, QuiverAlgebra};

fn main() -> qshape::Result<()> {
    let f = PrimeField::new(2)?;
    let a = QuiverAlgebra::linear_a(f, 2)?;
    let cat = loop_category(&a);
    let modules = [Module::simple(&a, 0)?, Module::simple(&a, 1)?, Module::projective(&a, 0)?];
    for m in &modules {
        for n in &modules {
            let x = DifferentialModule::trivial(m).to_diagram(&cat)?;
            let y = DifferentialModule::trivial(n).to_diagram(&cat)?;
            let h = hom_in_derived(&cat, &x, &y, &ResolveOptions::default())?;
            println!("{:?} -> {:?}: derived {} = hom {} + ext¹ {}", m.dims(), n.dims(), h.dim, hom_dim(m, n), ext_dim(m, n, 1));
        }
    }
    Ok(())
}
