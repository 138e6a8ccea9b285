//! The correspondence between modules over a hereditary algebra and minimal
//! Gorenstein injective differential modules, in both directions.

use qshape::decomp::is_isomorphic;
use qshape::diffmod::{rz_h, rz_k};
use qshape::random::{hereditary_algebras, random_module, rng};
use qshape::PrimeField;

fn main() -> qshape::Result<()> {
    let f = PrimeField::new(3)?;
    let mut r = rng(5);
    for (name, a) in hereditary_algebras(f) {
        let m = random_module(&a, 6, &mut r);
        let j = rz_k(&m)?;
        let back = rz_h(&j, 0)?;
        println!(
            "{name}: M dims {:?} -> K(M) dims {:?} -> H(K(M)) ≅ M: {}",
            m.dims(),
            j.underlying().dims(),
            is_isomorphic(&back, &m, 0)?.is_isomorphic()
        );
    }
    Ok(())
}
