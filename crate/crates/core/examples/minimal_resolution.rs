//! Minimal semiinjective resolutions: certified construction, splitting off
//! the injective part, and the comparison isomorphism between two resolutions.

use qshape::diagram::DiagramCategory;
use qshape::random::{rng, stalk_diagram};
use qshape::resolve::{comparison_iso, resolve_min, split_injective_part, ResolveOptions};
use qshape::shape::ShapeCategory;
use qshape::{PrimeField, QuiverAlgebra};

fn main() -> qshape::Result<()> {
    let f = PrimeField::new(2)?;
    let a = QuiverAlgebra::linear_a(f, 2)?;
    let cat = DiagramCategory::new(ShapeCategory::shape_cyclic(f, 3, 2)?, a)?;
    let x = stalk_diagram(&cat, 0, &qshape::Module::simple(cat.base(), 1)?)?;
    let opts = ResolveOptions::default();
    let r = resolve_min(&cat, &x, &opts)?;
    println!("x dims {:?} -> minimal resolution dims {:?}", x.dims(), r.target.dims());
    println!("certificates {:?}", r.certified);

    let padded = cat.direct_sum(&[r.target.clone(), cat.functor_g(0, &qshape::Module::injective(cat.base(), 0)?)?]);
    let split = split_injective_part(&cat, &padded.module, &opts)?;
    println!(
        "padding with an injective and splitting again: minimal {:?}, injective {:?}",
        split.minimal.dims(),
        split.injective.dims()
    );
    let moved = r.source.random_base_change(&mut rng(4)).0;
    let phi = qshape::decomp::is_isomorphic(&r.source, &moved, 0)?;
    let r2 = resolve_min(&cat, &moved, &ResolveOptions { seed: 11, ..opts })?;
    let r2 =
        qshape::resolve::Resolution { source: r.source.clone(), map: r2.map.compose(phi.witness().expect("same object")), ..r2 };
    let c = comparison_iso(&r, &r2)?;
    println!("comparison isomorphism between two independent resolutions verified: {}", c.verify(&r, &r2));
    Ok(())
}
