//! Modules over the path algebra of `1 → 2 → 3`: projectives, injectives,
//! Krull-Schmidt decomposition and an isomorphism witness.

use qshape::decomp::{indecomposables, is_isomorphic};
use qshape::module::direct_sum;
use qshape::random::rng;
use qshape::{Module, PrimeField, QuiverAlgebra};

fn main() -> qshape::Result<()> {
    let f = PrimeField::new(3)?;
    let a = QuiverAlgebra::linear_a(f, 3)?;
    for v in 0..3 {
        println!(
            "vertex {}: P dims {:?}, I dims {:?}, S dims {:?}",
            a.vertices()[v],
            Module::projective(&a, v)?.dims(),
            Module::injective(&a, v)?.dims(),
            Module::simple(&a, v)?.dims()
        );
    }
    let parts = [Module::projective(&a, 0)?, Module::simple(&a, 1)?, Module::injective(&a, 2)?];
    let sum = direct_sum(&a, &parts).module;
    let (hidden, _) = sum.random_base_change(&mut rng(7));
    let d = indecomposables(&hidden, 0)?;
    println!("decomposed a module of dims {:?} into {} summands:", hidden.dims(), d.len());
    for s in &d.summands {
        println!("  {:?} (local endomorphism ring of dim {})", s.module.dims(), s.certificate.end_dim);
    }
    let verdict = is_isomorphic(&sum, &hidden, 0)?;
    println!("isomorphic to the original: {}", verdict.is_isomorphic());
    Ok(())
}
