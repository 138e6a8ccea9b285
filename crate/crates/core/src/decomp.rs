//! Endomorphism rings, Fitting decompositions, Krull–Schmidt decomposition and
//! isomorphism testing. Works for modules over any quiver algebra, hence for
//! diagrams as well.
//!
//! Decomposition needs a prime field: pieces are split along the factorization
//! of minimal polynomials of endomorphisms, and a piece is accepted once its
//! endomorphism ring is certified local.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::module::{copair, direct_sum, hom_basis, pair, random_combination, DirectSum, Module, ModuleMap};
use crate::poly::{self, Poly};

pub const DEFAULT_RETRIES: usize = 64;

/// Proof that `End(M)` is local: `radical` spans a nilpotent two-sided ideal
/// `N` (`N^nilpotency = 0`) and `End/N = F_p[generator] ≅ F_p[x]/(residue_polynomial)`
/// with the polynomial irreducible, so `End/N` is a field.
#[derive(Clone, Debug)]
pub struct LocalCertificate<F: Field> {
    pub end_dim: usize,
    pub radical: Vec<ModuleMap<F>>,
    pub nilpotency: usize,
    pub generator: ModuleMap<F>,
    pub residue_polynomial: Poly<F::Elem>,
}

impl<F: Field> LocalCertificate<F> {
    pub fn residue_degree(&self) -> usize {
        self.residue_polynomial.len() - 1
    }
}

#[derive(Clone, Debug)]
pub struct Summand<F: Field> {
    pub module: Module<F>,
    pub inclusion: ModuleMap<F>,
    pub projection: ModuleMap<F>,
    pub certificate: LocalCertificate<F>,
}

#[derive(Clone, Debug)]
pub struct Decomposition<F: Field> {
    pub original: Module<F>,
    pub summands: Vec<Summand<F>>,
    pub sum: DirectSum<F>,
    /// The isomorphism `original → ⊕ summands`.
    pub witness: ModuleMap<F>,
}

impl<F: Field> Decomposition<F> {
    /// Re-checks all identities from scratch.
    pub fn verify(&self) -> Result<()> {
        let fail = |s: &str| Err(Error::CertificationFailure(format!("decomposition witness: {s}")));
        let mut total = ModuleMap::zero(&self.original, &self.original);
        for (i, s) in self.summands.iter().enumerate() {
            if !s.inclusion.is_homomorphism() || !s.projection.is_homomorphism() {
                return fail("summand maps are not homomorphisms");
            }
            for (j, t) in self.summands.iter().enumerate() {
                let c = s.projection.compose(&t.inclusion);
                let ok = if i == j { c == s.module.identity() } else { c.is_zero() };
                if !ok {
                    return fail("projections and inclusions are not biorthogonal");
                }
            }
            total = total.add(&s.inclusion.compose(&s.projection));
        }
        if total != self.original.identity() {
            return fail("inclusion-projection composites do not sum to the identity");
        }
        if !self.witness.is_iso() {
            return fail("assembled map is not invertible");
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }
}

/// `M = ker f^n ⊕ im f^n` with `n = dim M`.
#[derive(Clone, Debug)]
pub struct FittingSplit<F: Field> {
    pub kernel: ModuleMap<F>,
    pub image: ModuleMap<F>,
    pub kernel_projection: ModuleMap<F>,
    pub image_projection: ModuleMap<F>,
}

pub fn end_ring_basis<F: Field>(m: &Module<F>) -> Vec<ModuleMap<F>> {
    hom_basis(m, m)
}

pub fn power<F: Field>(f: &ModuleMap<F>, mut e: u64) -> ModuleMap<F> {
    let mut result = f.source().identity();
    let mut base = f.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = result.compose(&base);
        }
        base = base.compose(&base);
        e >>= 1;
    }
    result
}

pub fn fitting_split<F: Field>(m: &Module<F>, f: &ModuleMap<F>) -> Result<FittingSplit<F>> {
    if f.source() != m || f.target() != m {
        return Err(Error::DimensionMismatch("fitting_split needs an endomorphism of the module".into()));
    }
    let g = power(f, m.total_dim() as u64);
    let kernel = g.kernel();
    let image = g.image();
    let sum = direct_sum(m.algebra(), &[kernel.source().clone(), image.source().clone()]);
    let inv = copair(&[kernel.clone(), image.clone()], &sum, m).inverse()?;
    Ok(FittingSplit {
        kernel_projection: sum.projections[0].compose(&inv),
        image_projection: sum.projections[1].compose(&inv),
        kernel,
        image,
    })
}

/// Minimal polynomial of an endomorphism, monic.
pub fn min_poly<F: Field>(f: &ModuleMap<F>) -> Poly<F::Elem> {
    let field = f.field();
    let id = f.source().identity();
    let len = id.flatten().len();
    let mut cols = vec![id.flatten()];
    let mut cur = id;
    loop {
        cur = cur.compose(f);
        let v = cur.flatten();
        let a = Matrix::from_columns(field, len, &cols);
        if let Ok(Some(c)) = a.solve(&v) {
            let mut p: Poly<F::Elem> = c.iter().map(|x| field.neg(x)).collect();
            p.push(field.one());
            return p;
        }
        cols.push(v);
    }
}

/// `p(f)` by Horner's rule.
pub fn eval_poly<F: Field>(p: &Poly<F::Elem>, f: &ModuleMap<F>) -> ModuleMap<F> {
    let id = f.source().identity();
    let mut acc = ModuleMap::zero(f.source(), f.source());
    for c in p.iter().rev() {
        acc = acc.compose(f).add(&id.scale(c));
    }
    acc
}

fn require_prime<F: Field>(field: F) -> Result<u64> {
    field.modulus().ok_or(Error::RationalsUnsupported)
}

/// Basis (as a subset) of the span of `vecs`, with its rank.
fn independent<F: Field>(field: F, len: usize, vecs: &[Vec<F::Elem>]) -> Vec<usize> {
    if vecs.is_empty() || len == 0 {
        return Vec::new();
    }
    Matrix::from_columns(field, len, vecs).rref().1
}

fn span_basis<F: Field>(maps: Vec<ModuleMap<F>>) -> Vec<ModuleMap<F>> {
    let Some(first) = maps.first() else { return maps };
    let field = first.field();
    let len = first.flatten().len();
    let vecs: Vec<_> = maps.iter().map(|m| m.flatten()).collect();
    independent(field, len, &vecs).into_iter().map(|i| maps[i].clone()).collect()
}

/// Smallest two-sided ideal of `End` containing `gens`, as a basis.
fn two_sided_ideal<F: Field>(end: &[ModuleMap<F>], gens: &[ModuleMap<F>]) -> Vec<ModuleMap<F>> {
    let gens = span_basis(gens.to_vec());
    let mut left = gens.clone();
    for g in &gens {
        for e in end {
            left.push(e.compose(g));
        }
    }
    let left = span_basis(left);
    let mut both = left.clone();
    for l in &left {
        for e in end {
            both.push(l.compose(e));
        }
    }
    span_basis(both)
}

/// Smallest `r` with `N^r = 0`, if reached within `bound` steps.
fn nilpotency<F: Field>(ideal: &[ModuleMap<F>], bound: usize) -> Option<usize> {
    let mut power = ideal.to_vec();
    for r in 1..=bound + 1 {
        if power.is_empty() {
            return Some(r - 1);
        }
        let mut next = Vec::new();
        for a in &power {
            for b in ideal {
                next.push(a.compose(b));
            }
        }
        power = span_basis(next.into_iter().filter(|m| !m.is_zero()).collect());
    }
    None
}

enum Attempt<F: Field> {
    Split(ModuleMap<F>),
    Local(LocalCertificate<F>),
    Undecided,
}

struct Candidate<F: Field> {
    element: ModuleMap<F>,
    irreducible: Poly<F::Elem>,
}

/// One certification round on the candidates gathered so far.
fn try_certify<F: Field>(end: &[ModuleMap<F>], candidates: &[Candidate<F>], p: u64) -> Option<LocalCertificate<F>> {
    let d = end.len();
    let k = candidates.iter().map(|c| c.irreducible.len() - 1).max()?;
    let mut gens = Vec::new();
    for c in candidates {
        gens.push(eval_poly(&c.irreducible, &c.element));
        let mut frob = c.element.clone();
        for _ in 0..k {
            frob = power(&frob, p);
        }
        gens.push(frob.sub(&c.element));
    }
    let gens: Vec<_> = gens.into_iter().filter(|g| !g.is_zero()).collect();
    let radical = if gens.is_empty() { Vec::new() } else { two_sided_ideal(end, &gens) };
    let nil = nilpotency(&radical, d)?;
    let quotient_dim = d - radical.len();
    let field = end[0].field();
    let len = end[0].flatten().len();
    for c in candidates {
        if c.irreducible.len() - 1 != quotient_dim {
            continue;
        }
        let mut vecs: Vec<_> = radical.iter().map(|r| r.flatten()).collect();
        let mut pw = c.element.source().identity();
        for _ in 0..quotient_dim {
            vecs.push(pw.flatten());
            pw = pw.compose(&c.element);
        }
        if independent(field, len, &vecs).len() == d {
            return Some(LocalCertificate {
                end_dim: d,
                radical,
                nilpotency: nil,
                generator: c.element.clone(),
                residue_polynomial: c.irreducible.clone(),
            });
        }
    }
    None
}

fn attempt<F: Field>(m: &Module<F>, end: &[ModuleMap<F>], rng: &mut ChaCha8Rng, retries: usize) -> Result<Attempt<F>> {
    let p = require_prime(m.field())?;
    let zero = ModuleMap::zero(m, m);
    let mut candidates: Vec<Candidate<F>> = Vec::new();
    let mut pool: Vec<ModuleMap<F>> = end.to_vec();
    for round in 0..=retries {
        if round > 0 {
            pool = (0..2).map(|_| random_combination(end, &zero, rng)).collect();
        }
        for f in pool.drain(..) {
            let mu = min_poly(&f);
            let factors = poly::factor(m.field(), &mu, rng);
            if factors.len() > 1 {
                let (g, e) = &factors[0];
                let mut ge = vec![m.field().one()];
                for _ in 0..*e {
                    ge = poly::mul(m.field(), &ge, g);
                }
                return Ok(Attempt::Split(eval_poly(&ge, &f)));
            }
            candidates.push(Candidate { element: f, irreducible: factors[0].0.clone() });
        }
        if let Some(cert) = try_certify(end, &candidates, p) {
            return Ok(Attempt::Local(cert));
        }
    }
    Ok(Attempt::Undecided)
}

/// Local-ring certificate for `End(m)`, or `None` if an idempotent splitting was found.
pub fn certify_indecomposable<F: Field>(m: &Module<F>, seed: u64, retries: usize) -> Result<Option<LocalCertificate<F>>> {
    if m.is_zero() {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match attempt(m, &end_ring_basis(m), &mut rng, retries)? {
        Attempt::Local(c) => Ok(Some(c)),
        Attempt::Split(_) => Ok(None),
        Attempt::Undecided => {
            Err(Error::CertificationFailure("retry budget exhausted certifying a local endomorphism ring".into()))
        }
    }
}

pub fn indecomposables<F: Field>(m: &Module<F>, seed: u64) -> Result<Decomposition<F>> {
    indecomposables_with_retries(m, seed, DEFAULT_RETRIES)
}

pub fn indecomposables_with_retries<F: Field>(m: &Module<F>, seed: u64, retries: usize) -> Result<Decomposition<F>> {
    require_prime(m.field())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stack = vec![(m.clone(), m.identity(), m.identity())];
    let mut done = Vec::new();
    while let Some((x, incl, proj)) = stack.pop() {
        if x.is_zero() {
            continue;
        }
        let end = end_ring_basis(&x);
        match attempt(&x, &end, &mut rng, retries)? {
            Attempt::Local(certificate) => done.push(Summand { module: x, inclusion: incl, projection: proj, certificate }),
            Attempt::Split(h) => {
                let s = fitting_split(&x, &h)?;
                stack.push((s.image.source().clone(), incl.compose(&s.image), s.image_projection.compose(&proj)));
                stack.push((s.kernel.source().clone(), incl.compose(&s.kernel), s.kernel_projection.compose(&proj)));
            }
            Attempt::Undecided => {
                return Err(Error::CertificationFailure(
                    "retry budget exhausted while decomposing; no certificate of indecomposability".into(),
                ))
            }
        }
    }
    done.sort_by(|a, b| (a.module.total_dim(), a.module.dims()).cmp(&(b.module.total_dim(), b.module.dims())));
    let parts: Vec<_> = done.iter().map(|s| s.module.clone()).collect();
    let sum = direct_sum(m.algebra(), &parts);
    let projs: Vec<_> = done.iter().map(|s| s.projection.clone()).collect();
    let witness = pair(&projs, m, &sum);
    let d = Decomposition { original: m.clone(), summands: done, sum, witness };
    d.verify()?;
    Ok(d)
}

/// Why two modules were certified non-isomorphic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonIsoReason {
    DimensionMismatch,
    HomRank,
    KrullSchmidt,
    Exhaustive,
}

#[derive(Clone, Debug)]
pub enum IsoVerdict<F: Field> {
    Isomorphic(ModuleMap<F>),
    NotIsomorphic(NonIsoReason),
}

impl<F: Field> IsoVerdict<F> {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic(_))
    }
    pub fn witness(&self) -> Option<&ModuleMap<F>> {
        match self {
            IsoVerdict::Isomorphic(f) => Some(f),
            IsoVerdict::NotIsomorphic(_) => None,
        }
    }
}

/// An isomorphism `a → b` between certified indecomposables, if one exists.
pub fn match_indecomposables<F: Field>(a: &Module<F>, b: &Module<F>) -> Option<ModuleMap<F>> {
    if a.dims() != b.dims() {
        return None;
    }
    let ab = hom_basis(a, b);
    let ba = hom_basis(b, a);
    for f in &ab {
        if f.is_iso() {
            return Some(f.clone());
        }
        if ba.iter().any(|g| g.compose(f).is_iso()) {
            return Some(f.clone());
        }
    }
    None
}

fn exhaustive<F: Field>(basis: &[ModuleMap<F>], zero: &ModuleMap<F>) -> Option<Option<ModuleMap<F>>> {
    let elems = zero.field().elements()?;
    let q = elems.len();
    let total = q.checked_pow(basis.len() as u32)?;
    if total > 1 << 20 {
        return None;
    }
    for idx in 0..total {
        let mut i = idx;
        let coeffs: Vec<_> = (0..basis.len())
            .map(|_| {
                let c = elems[i % q].clone();
                i /= q;
                c
            })
            .collect();
        let f = crate::module::combine(basis, &coeffs, zero);
        if f.is_iso() {
            return Some(Some(f));
        }
    }
    Some(None)
}

/// Total dimension up to which the exhaustive search is allowed.
pub const EXHAUSTIVE_DIM: usize = 10;

pub fn is_isomorphic<F: Field>(m: &Module<F>, n: &Module<F>, seed: u64) -> Result<IsoVerdict<F>> {
    is_isomorphic_with_retries(m, n, seed, DEFAULT_RETRIES)
}

pub fn is_isomorphic_with_retries<F: Field>(m: &Module<F>, n: &Module<F>, seed: u64, retries: usize) -> Result<IsoVerdict<F>> {
    if !m.same_algebra_as(n) {
        return Err(Error::MismatchedShapes);
    }
    if m.dims() != n.dims() {
        return Ok(IsoVerdict::NotIsomorphic(NonIsoReason::DimensionMismatch));
    }
    if m.is_zero() {
        return Ok(IsoVerdict::Isomorphic(ModuleMap::zero(m, n)));
    }
    let basis = hom_basis(m, n);
    if basis.is_empty() {
        return Ok(IsoVerdict::NotIsomorphic(NonIsoReason::HomRank));
    }
    for f in &basis {
        if f.is_iso() {
            return Ok(IsoVerdict::Isomorphic(f.clone()));
        }
    }
    let zero = ModuleMap::zero(m, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..retries.min(16) {
        let f = random_combination(&basis, &zero, &mut rng);
        if f.is_iso() {
            return Ok(IsoVerdict::Isomorphic(f));
        }
    }
    if m.field().modulus().is_none() {
        return Err(Error::Inconclusive("random isomorphism search exhausted over the rationals".into()));
    }
    match krull_schmidt_match(m, n, seed, retries) {
        Ok(v) => Ok(v),
        Err(e) => {
            if m.total_dim() <= EXHAUSTIVE_DIM {
                if let Some(found) = exhaustive(&basis, &zero) {
                    return Ok(match found {
                        Some(f) => IsoVerdict::Isomorphic(f),
                        None => IsoVerdict::NotIsomorphic(NonIsoReason::Exhaustive),
                    });
                }
            }
            Err(Error::Inconclusive(format!("isomorphism search failed: {e}")))
        }
    }
}

fn krull_schmidt_match<F: Field>(m: &Module<F>, n: &Module<F>, seed: u64, retries: usize) -> Result<IsoVerdict<F>> {
    let dm = indecomposables_with_retries(m, seed, retries)?;
    let dn = indecomposables_with_retries(n, seed.wrapping_add(1), retries)?;
    if dm.len() != dn.len() {
        return Ok(IsoVerdict::NotIsomorphic(NonIsoReason::KrullSchmidt));
    }
    let mut used = vec![false; dn.len()];
    let mut total = ModuleMap::zero(m, n);
    for s in &dm.summands {
        let mut found = None;
        for (j, t) in dn.summands.iter().enumerate() {
            if used[j] {
                continue;
            }
            if let Some(f) = match_indecomposables(&s.module, &t.module) {
                found = Some((j, f));
                break;
            }
        }
        let Some((j, f)) = found else {
            return Ok(IsoVerdict::NotIsomorphic(NonIsoReason::KrullSchmidt));
        };
        used[j] = true;
        total = total.add(&dn.summands[j].inclusion.compose(&f).compose(&s.projection));
    }
    if !total.is_iso() || !total.is_homomorphism() {
        return Err(Error::CertificationFailure("assembled Krull–Schmidt isomorphism is not invertible".into()));
    }
    Ok(IsoVerdict::Isomorphic(total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::quiver::QuiverAlgebra;
    use std::sync::Arc;

    fn a2(p: u64) -> Arc<QuiverAlgebra<PrimeField>> {
        QuiverAlgebra::linear_a(PrimeField::new(p).unwrap(), 2).unwrap()
    }

    fn loop_dm(p: u64, rows: &[&[i64]]) -> Module<PrimeField> {
        let f = PrimeField::new(p).unwrap();
        let alg = QuiverAlgebra::new(
            f,
            vec!["q".into()],
            vec![crate::quiver::Arrow { name: "d".into(), source: 0, target: 0 }],
            vec![crate::quiver::Relation { terms: vec![(f.one(), vec![0, 0])] }],
        )
        .unwrap();
        Module::new(alg, vec![rows.len()], vec![Matrix::from_i64_rows(f, rows)]).unwrap()
    }

    #[test]
    fn end_ring_examples() {
        let a = a2(2);
        let s = Module::simple(&a, 0).unwrap();
        assert_eq!(end_ring_basis(&s).len(), 1);
        let ss = direct_sum(&a, &[s.clone(), s.clone()]).module;
        assert_eq!(end_ring_basis(&ss).len(), 4);
        let shift = loop_dm(2, &[&[0, 0], &[1, 0]]);
        assert_eq!(end_ring_basis(&shift).len(), 2);
    }

    #[test]
    fn fitting_examples() {
        let a = a2(3);
        let m = direct_sum(&a, &[Module::projective(&a, 0).unwrap(), Module::simple(&a, 1).unwrap()]);
        let id = m.module.identity();
        let s = fitting_split(&m.module, &id).unwrap();
        assert!(s.kernel.source().is_zero());
        assert_eq!(s.image.source().total_dim(), 3);
        let s = fitting_split(&m.module, &ModuleMap::zero(&m.module, &m.module)).unwrap();
        assert!(s.image.source().is_zero());
        let e = m.inclusions[0].compose(&m.projections[0]);
        let s = fitting_split(&m.module, &e).unwrap();
        assert_eq!(s.kernel.source().dims(), &[0, 1]);
        assert_eq!(s.image.source().dims(), &[1, 1]);
        assert_eq!(s.kernel_projection.compose(&s.kernel), s.kernel.source().identity());
    }

    #[test]
    fn decomposition_examples() {
        let a = a2(2);
        let s = Module::simple(&a, 0).unwrap();
        let d = indecomposables(&s, 0).unwrap();
        assert_eq!(d.len(), 1);
        let m = direct_sum(&a, &[Module::projective(&a, 0).unwrap(), Module::simple(&a, 1).unwrap()]).module;
        let (m, _) = m
            .base_change(&[Matrix::from_i64_rows(a.field(), &[&[1]]), Matrix::from_i64_rows(a.field(), &[&[1, 1], &[0, 1]])])
            .unwrap();
        let d = indecomposables(&m, 3).unwrap();
        let mut dims: Vec<_> = d.summands.iter().map(|s| s.module.dims().to_vec()).collect();
        dims.sort();
        assert_eq!(dims, vec![vec![0, 1], vec![1, 1]]);
        let shift = loop_dm(2, &[&[0, 0], &[1, 0]]);
        assert_eq!(indecomposables(&shift, 0).unwrap().len(), 1);
    }

    #[test]
    fn nonsplit_residue_field() {
        // Kronecker module (I, C), C the companion matrix of t²+t+1: End = F_4.
        let f = PrimeField::new(2).unwrap();
        let kr = QuiverAlgebra::path_algebra(f, 2, &[(0, 1), (0, 1)]).unwrap();
        let c = Matrix::from_i64_rows(f, &[&[0, 1], &[1, 1]]);
        let m = Module::new(kr.clone(), vec![2, 2], vec![Matrix::identity(f, 2), c.clone()]).unwrap();
        let d = indecomposables(&m, 0).unwrap();
        assert_eq!(d.len(), 1);
        let cert = &d.summands[0].certificate;
        assert_eq!(cert.residue_degree(), 2);
        assert_eq!(cert.end_dim, 2);
        assert!(cert.radical.is_empty());
        let double = direct_sum(&kr, &[m.clone(), m.clone()]).module;
        let d = indecomposables(&double, 5).unwrap();
        assert_eq!(d.len(), 2);
        // C² = C + I is conjugate to C
        let m2 = Module::new(kr.clone(), vec![2, 2], vec![Matrix::identity(f, 2), c.mul(&c)]).unwrap();
        assert!(is_isomorphic(&m, &m2, 1).unwrap().is_isomorphic());
        let j = Module::new(kr, vec![2, 2], vec![Matrix::identity(f, 2), Matrix::from_i64_rows(f, &[&[1, 1], &[0, 1]])]).unwrap();
        assert!(!is_isomorphic(&m, &j, 1).unwrap().is_isomorphic());
    }

    #[test]
    fn isomorphism_examples() {
        let a = a2(3);
        let i2 = Module::injective(&a, 1).unwrap();
        assert!(is_isomorphic(&i2, &i2, 0).unwrap().is_isomorphic());
        let (j, _) =
            i2.base_change(&[Matrix::from_i64_rows(a.field(), &[&[2]]), Matrix::from_i64_rows(a.field(), &[&[1]])]).unwrap();
        let v = is_isomorphic(&i2, &j, 0).unwrap();
        let w = v.witness().unwrap();
        assert!(w.is_homomorphism());
        assert_eq!(w.inverse().unwrap().compose(w), i2.identity());
        let s = Module::simple(&a, 0).unwrap();
        assert!(matches!(is_isomorphic(&s, &i2, 0).unwrap(), IsoVerdict::NotIsomorphic(NonIsoReason::DimensionMismatch)));
        let ss = direct_sum(&a, &Module::simples(&a)).module;
        assert!(!is_isomorphic(&ss, &Module::projective(&a, 0).unwrap(), 0).unwrap().is_isomorphic());
    }
}
