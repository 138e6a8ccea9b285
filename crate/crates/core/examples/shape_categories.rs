//! The built-in shapes: the loop `∂² = 0` and the cyclic quivers with
//! nilpotency `N`, with their Serre functors and periodic stalk resolutions.

use qshape::shape::ShapeCategory;
use qshape::PrimeField;

fn main() -> qshape::Result<()> {
    let f = PrimeField::new(2)?;
    for shape in [ShapeCategory::shape_loop(f), ShapeCategory::shape_cyclic(f, 3, 2)?, ShapeCategory::shape_cyclic(f, 4, 3)?] {
        println!("{:?}: period and nilpotency {:?}", shape.kind(), shape.period_and_nilpotency());
        println!("  Serre permutation {:?}, duality holds: {}", shape.serre_permutation(), shape.serre_duality_holds());
        let res = shape.stalk_resolution(0, 5)?;
        println!("  stalk resolution of object 0: terms {:?}, exact: {}", res.terms, res.is_exact());
    }
    Ok(())
}
