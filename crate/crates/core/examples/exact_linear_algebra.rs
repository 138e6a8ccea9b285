//! Exact row reduction, kernels and solving over `Q` and `F_p`.

use qshape::{Field, Matrix, PrimeField, Rationals};

fn main() {
    let q = Rationals;
    let m = Matrix::from_i64_rows(q, &[&[2, 4, 1], &[1, 2, 3], &[3, 6, 4]]);
    let (r, pivots) = m.rref();
    println!("over Q: rank {} pivots {pivots:?}\nrref {r:?}", m.rank());
    println!("kernel basis {:?}", m.kernel_basis());
    let b = m.mul_vec(&[q.from_i64(1), q.from_i64(-1), q.from_i64(2)]);
    let x = m.solve(&b).unwrap().expect("b lies in the image");
    println!("a solution of m·x = b: {}", serde_json::Value::Array(x.iter().map(|e| q.to_json(e)).collect()));

    let f = PrimeField::new(5).unwrap();
    let n = Matrix::from_i64_rows(f, &[&[1, 2], &[3, 4]]);
    let inv = n.inverse().expect("invertible mod 5");
    println!("over F5: inverse {inv:?}, check {:?}", n.mul(&inv));
}
