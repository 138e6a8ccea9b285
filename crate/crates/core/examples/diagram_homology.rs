//! Homology of a diagram over the cyclic shape with three objects and `N = 2`,
//! computed at each object in degrees 1 and 2.

use qshape::diagram::DiagramCategory;
use qshape::random::{rng, stalk_diagram};
use qshape::shape::ShapeCategory;
use qshape::{Module, PrimeField, QuiverAlgebra};

fn main() -> qshape::Result<()> {
    let f = PrimeField::new(3)?;
    let a = QuiverAlgebra::linear_a(f, 2)?;
    let cat = DiagramCategory::new(ShapeCategory::shape_cyclic(f, 3, 2)?, a.clone())?;
    let stalk = stalk_diagram(&cat, 1, &Module::projective(&a, 0)?)?;
    let injective = cat.functor_g(0, &Module::injective(&a, 1)?)?;
    let x = cat.direct_sum(&[stalk, injective]).module.random_base_change(&mut rng(1)).0;
    println!("diagram of total dimension {}", x.total_dim());
    for q in 0..cat.num_objects() {
        for i in 1..=2 {
            println!("  H^{i} at object {q}: dims {:?}", cat.homology(q, i, &x)?.module().dims());
        }
    }
    println!("exact: {}, semiinjective: {}", cat.is_exact(&x)?, cat.is_semiinjective(&x)?);
    Ok(())
}
