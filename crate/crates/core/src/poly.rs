//! Univariate polynomials over a prime field and their factorization
//! (squarefree, distinct-degree and equal-degree splitting).

use num_bigint::BigUint;
use rand::Rng;

use crate::field::Field;

/// Coefficients from the constant term upward, without trailing zeros.
pub type Poly<E> = Vec<E>;

fn trim<F: Field>(f: F, mut a: Poly<F::Elem>) -> Poly<F::Elem> {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
    a
}

pub fn degree<E>(a: &Poly<E>) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn x<F: Field>(f: F) -> Poly<F::Elem> {
    vec![f.zero(), f.one()]
}

pub fn constant<F: Field>(f: F, c: F::Elem) -> Poly<F::Elem> {
    trim(f, vec![c])
}

pub fn add<F: Field>(f: F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let out = (0..n).map(|i| f.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
    trim(f, out)
}

pub fn sub<F: Field>(f: F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let nb: Vec<_> = b.iter().map(|c| f.neg(c)).collect();
    add(f, a, &nb)
}

pub fn mul<F: Field>(f: F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem<F: Field>(f: F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> (Poly<F::Elem>, Poly<F::Elem>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(&b[db]).unwrap();
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![f.zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = f.mul(r.last().unwrap(), &lead_inv);
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = f.sub(&r[k + j], &f.mul(&c, bj));
        }
        q[k] = c;
        r.pop();
        r = trim(f, r);
    }
    (trim(f, q), r)
}

pub fn rem<F: Field>(f: F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    divrem(f, a, b).1
}

pub fn monic<F: Field>(f: F, a: &Poly<F::Elem>) -> Poly<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(l) => {
            let inv = f.inv(l).unwrap();
            a.iter().map(|c| f.mul(c, &inv)).collect()
        }
    }
}

/// Monic greatest common divisor.
pub fn gcd<F: Field>(f: F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

pub fn derivative<F: Field>(f: F, a: &Poly<F::Elem>) -> Poly<F::Elem> {
    let out = a.iter().enumerate().skip(1).map(|(i, c)| f.mul(&f.from_i64(i as i64), c)).collect();
    trim(f, out)
}

/// `base^exp mod m`.
pub fn pow_mod<F: Field>(f: F, base: &Poly<F::Elem>, exp: &BigUint, m: &Poly<F::Elem>) -> Poly<F::Elem> {
    let mut result = rem(f, &constant(f, f.one()), m);
    let base = rem(f, base, m);
    for i in (0..exp.bits()).rev() {
        result = rem(f, &mul(f, &result, &result), m);
        if exp.bit(i) {
            result = rem(f, &mul(f, &result, &base), m);
        }
    }
    result
}

fn characteristic<F: Field>(f: F) -> u64 {
    f.modulus().expect("polynomial factorization needs a prime field")
}

/// `a(x) = b(x)^p`, valid when `a' = 0`; uses `c^p = c` on the prime field.
fn pth_root<F: Field>(f: F, a: &Poly<F::Elem>) -> Poly<F::Elem> {
    let p = characteristic(f) as usize;
    a.iter().step_by(p).cloned().collect()
}

/// Squarefree decomposition: pairs `(g, e)` with `a = lc · ∏ g^e`, the `g`
/// squarefree and pairwise coprime.
pub fn squarefree<F: Field>(f: F, a: &Poly<F::Elem>) -> Vec<(Poly<F::Elem>, usize)> {
    let p = characteristic(f) as usize;
    let a = monic(f, a);
    if degree(&a).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let d = derivative(f, &a);
    if d.is_empty() {
        for (g, e) in squarefree(f, &pth_root(f, &a)) {
            out.push((g, e * p));
        }
        return out;
    }
    let mut c = gcd(f, &a, &d);
    let mut w = divrem(f, &a, &c).0;
    let mut i = 1;
    while degree(&w).unwrap_or(0) > 0 {
        let y = gcd(f, &w, &c);
        let z = divrem(f, &w, &y).0;
        if degree(&z).unwrap_or(0) > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = divrem(f, &c, &w).0;
    }
    if degree(&c).unwrap_or(0) > 0 {
        for (g, e) in squarefree(f, &pth_root(f, &c)) {
            out.push((g, e * p));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial: pairs
/// `(g, d)` where `g` is the product of all irreducible factors of degree `d`.
pub fn distinct_degree<F: Field>(f: F, a: &Poly<F::Elem>) -> Vec<(Poly<F::Elem>, usize)> {
    let p = BigUint::from(characteristic(f));
    let mut out = Vec::new();
    let mut rest = monic(f, a);
    let mut h = x(f);
    let mut d = 0;
    while degree(&rest).unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = pow_mod(f, &h, &p, &rest);
        let g = gcd(f, &rest, &sub(f, &h, &x(f)));
        if degree(&g).unwrap_or(0) > 0 {
            rest = divrem(f, &rest, &g).0;
            h = rem(f, &h, &rest);
            out.push((g, d));
        }
    }
    if let Some(dr) = degree(&rest) {
        if dr > 0 {
            out.push((rest, dr));
        }
    }
    out
}

/// Splits a monic squarefree product of irreducibles of common degree `d`.
pub fn equal_degree<F: Field, R: Rng + ?Sized>(f: F, a: &Poly<F::Elem>, d: usize, rng: &mut R) -> Vec<Poly<F::Elem>> {
    let n = degree(a).unwrap_or(0);
    if n <= d {
        return vec![monic(f, a)];
    }
    let p = characteristic(f);
    loop {
        let r: Poly<F::Elem> = trim(f, (0..n).map(|_| f.random(rng)).collect());
        if degree(&r).unwrap_or(0) == 0 {
            continue;
        }
        let candidate = if p == 2 {
            // absolute trace r + r² + ⋯ + r^{2^{d−1}}
            let mut t = r.clone();
            let mut acc = r.clone();
            for _ in 1..d {
                t = rem(f, &mul(f, &t, &t), a);
                acc = add(f, &acc, &t);
            }
            acc
        } else {
            let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
            sub(f, &pow_mod(f, &r, &e, a), &constant(f, f.one()))
        };
        let g = gcd(f, a, &candidate);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = divrem(f, a, &g).0;
            let mut out = equal_degree(f, &g, d, rng);
            out.extend(equal_degree(f, &monic(f, &h), d, rng));
            return out;
        }
    }
}

/// Monic irreducible factors with multiplicities, sorted canonically.
pub fn factor<F: Field, R: Rng + ?Sized>(f: F, a: &Poly<F::Elem>, rng: &mut R) -> Vec<(Poly<F::Elem>, usize)> {
    let mut out = Vec::new();
    for (g, e) in squarefree(f, a) {
        for (h, d) in distinct_degree(f, &g) {
            for irr in equal_degree(f, &h, d, rng) {
                out.push((irr, e));
            }
        }
    }
    out.sort_by(|(a, _), (b, _)| a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev())));
    out
}

/// Rabin-style check through distinct-degree factorization.
pub fn is_irreducible<F: Field>(f: F, a: &Poly<F::Elem>) -> bool {
    let Some(n) = degree(a) else { return false };
    if n == 0 {
        return false;
    }
    let a = monic(f, a);
    if degree(&gcd(f, &a, &derivative(f, &a))).unwrap_or(0) > 0 {
        return false;
    }
    let ddf = distinct_degree(f, &a);
    ddf.len() == 1 && ddf[0].1 == n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn expand(f: PrimeField, factors: &[(Poly<u64>, usize)]) -> Poly<u64> {
        let mut acc = vec![1];
        for (g, e) in factors {
            for _ in 0..*e {
                acc = mul(f, &acc, g);
            }
        }
        acc
    }

    #[test]
    fn irreducibility_over_f2() {
        let f = PrimeField::new(2).unwrap();
        assert!(is_irreducible(f, &vec![1, 1, 1]));
        assert!(!is_irreducible(f, &vec![1, 0, 1]));
        assert!(is_irreducible(f, &vec![1, 1, 0, 1]));
        assert!(!is_irreducible(f, &vec![1, 1, 1, 1]));
        // x^4 + x + 1
        assert!(is_irreducible(f, &vec![1, 1, 0, 0, 1]));
    }

    #[test]
    fn factor_with_multiplicities() {
        let f = PrimeField::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // (x+1)^3 (x^2+1)^2 x
        let a = expand(f, &[(vec![1, 1], 3), (vec![1, 0, 1], 2), (vec![0, 1], 1)]);
        let fac = factor(f, &a, &mut rng);
        assert_eq!(fac, vec![(vec![0, 1], 1), (vec![1, 1], 3), (vec![1, 0, 1], 2)]);
    }

    #[test]
    fn p_th_powers_in_characteristic_two() {
        let f = PrimeField::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = expand(f, &[(vec![1, 1, 1], 4), (vec![1, 1], 2)]);
        assert_eq!(factor(f, &a, &mut rng), vec![(vec![1, 1], 2), (vec![1, 1, 1], 4)]);
    }

    proptest! {
        #[test]
        fn factorization_round_trips(p in prop::sample::select(vec![2u64, 3, 5, 7]), coeffs in prop::collection::vec(0u64..7, 2..9), seed in 0u64..1000) {
            let f = PrimeField::new(p).unwrap();
            let mut a: Poly<u64> = trim(f, coeffs.iter().map(|c| c % p).collect());
            if degree(&a).unwrap_or(0) == 0 {
                a = vec![0, 1];
            }
            let a = monic(f, &a);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let fac = factor(f, &a, &mut rng);
            prop_assert_eq!(expand(f, &fac), a);
            for (g, _) in &fac {
                prop_assert!(is_irreducible(f, g));
            }
        }
    }
}
