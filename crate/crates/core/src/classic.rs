//! Classical module theory over a quiver algebra: radical, socle, projective
//! covers, injective envelopes, resolutions and Ext.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{column_space_contains, quotient_map, Matrix};
use crate::module::{direct_sum, hom_basis, quotient, span_rank, submodule_unchecked, Module, ModuleMap};

/// Inclusion of `rad m`, the image of the arrow ideal.
pub fn radical<F: Field>(m: &Module<F>) -> ModuleMap<F> {
    let f = m.field();
    let alg = m.algebra();
    let bases = (0..m.num_vertices())
        .map(|v| {
            let mut acc = Matrix::zeros(f, m.dim(v), 0);
            for (ai, a) in alg.arrows().iter().enumerate() {
                if a.target == v {
                    acc = acc.hstack(m.arrow_map(ai));
                }
            }
            acc.image_basis()
        })
        .collect();
    submodule_unchecked(m, bases)
}

/// Inclusion of `soc m`, the vectors killed by every arrow.
pub fn socle<F: Field>(m: &Module<F>) -> ModuleMap<F> {
    let f = m.field();
    let alg = m.algebra();
    let bases = (0..m.num_vertices())
        .map(|v| {
            let mut stacked = Matrix::zeros(f, 0, m.dim(v));
            for (ai, a) in alg.arrows().iter().enumerate() {
                if a.source == v {
                    stacked = stacked.vstack(m.arrow_map(ai));
                }
            }
            stacked.kernel_basis()
        })
        .collect();
    submodule_unchecked(m, bases)
}

/// Projection `m → m / rad m`.
pub fn top<F: Field>(m: &Module<F>) -> ModuleMap<F> {
    quotient(&radical(m))
}

/// The map `P(v) → m` sending the trivial path to `x ∈ m_v`.
pub fn map_from_projective<F: Field>(m: &Module<F>, v: usize, x: &[F::Elem]) -> ModuleMap<F> {
    let alg = m.algebra();
    let p = Module::projective(alg, v).expect("vertex in range");
    let f = m.field();
    let xm = Matrix::from_columns(f, m.dim(v), &[x.to_vec()]);
    let mut cols: Vec<Vec<Vec<F::Elem>>> = vec![Vec::new(); m.num_vertices()];
    for b in alg.paths_from(v) {
        let t = alg.basis()[b].target;
        cols[t].push(m.path_action(b).mul(&xm).column(0));
    }
    let maps = (0..m.num_vertices()).map(|w| Matrix::from_columns(f, m.dim(w), &cols[w])).collect();
    ModuleMap::from_parts(p, m.clone(), maps)
}

/// Projective cover `P → m`, an epimorphism with superfluous kernel.
/// Summands are ordered by vertex, then by the canonical top basis.
pub fn projective_cover<F: Field>(m: &Module<F>) -> ModuleMap<F> {
    projective_cover_with_tops(m).0
}

/// Projective cover together with the vertex of each indecomposable summand.
pub fn projective_cover_with_tops<F: Field>(m: &Module<F>) -> (ModuleMap<F>, Vec<usize>) {
    let alg = m.algebra();
    let rad = radical(m);
    let mut parts = Vec::new();
    let mut comps = Vec::new();
    let mut tops = Vec::new();
    for v in 0..m.num_vertices() {
        let (_, lifts) = quotient_map(m.dim(v), rad.vertex_map(v)).expect("radical basis is independent");
        for j in 0..lifts.cols() {
            let g = map_from_projective(m, v, &lifts.column(j));
            parts.push(g.source().clone());
            comps.push(g);
            tops.push(v);
        }
    }
    let sum = direct_sum(alg, &parts);
    let mut acc = ModuleMap::zero(&sum.module, m);
    for (i, g) in comps.iter().enumerate() {
        acc = acc.add(&g.compose(&sum.projections[i]));
    }
    (acc, tops)
}

/// Injective envelope `m → E(m)`: dualize, take the projective cover over
/// the opposite algebra, dualize back.
pub fn injective_envelope<F: Field>(m: &Module<F>) -> ModuleMap<F> {
    let dm = m.dual();
    let cover = projective_cover(&dm);
    let d = cover.dual();
    d.retarget(m, &d.target().clone())
}

pub fn is_injective<F: Field>(m: &Module<F>) -> bool {
    injective_envelope(m).target().total_dim() == m.total_dim()
}

pub fn is_projective<F: Field>(m: &Module<F>) -> bool {
    projective_cover(m).source().total_dim() == m.total_dim()
}

/// True iff the image of the monomorphism `u` contains the socle of its target.
pub fn is_essential<F: Field>(u: &ModuleMap<F>) -> Result<bool> {
    if !u.is_mono() {
        return Err(Error::NotAMonomorphism);
    }
    let soc = socle(u.target());
    Ok((0..u.target().num_vertices()).all(|v| column_space_contains(u.vertex_map(v), soc.vertex_map(v))))
}

/// The first `len` differentials `d_k: P_k → P_{k−1}` of a minimal projective
/// resolution, preceded by the augmentation `P_0 → m`.
pub fn projective_resolution<F: Field>(m: &Module<F>, len: usize) -> Vec<ModuleMap<F>> {
    let mut out = Vec::with_capacity(len + 1);
    let eps = projective_cover(m);
    let mut kernel = eps.kernel();
    out.push(eps);
    for _ in 0..len {
        let cover = projective_cover(kernel.source());
        let d = kernel.compose(&cover);
        kernel = cover.kernel();
        out.push(d);
    }
    out
}

/// `dim Ext^i(m, n)`, from a minimal projective resolution of `m`.
pub fn ext_dim<F: Field>(m: &Module<F>, n: &Module<F>, i: usize) -> usize {
    let res = projective_resolution(m, i + 1);
    let p_i = if i == 0 { res[0].source() } else { res[i].source() };
    let hom_i = hom_basis(p_i, n);
    let f = m.field();
    let out_rank = {
        let d_next = &res[i + 1];
        let imgs: Vec<_> = hom_i.iter().map(|h| h.compose(d_next)).collect();
        span_rank(f, &imgs)
    };
    let in_rank = if i == 0 {
        0
    } else {
        let d = &res[i];
        let prev = hom_basis(d.target(), n);
        let imgs: Vec<_> = prev.iter().map(|h| h.compose(d)).collect();
        span_rank(f, &imgs)
    };
    hom_i.len() - out_rank - in_rank
}

/// `0 → m → I_0 → I_1 → ⋯ → I_n → 0` with every embedding an injective envelope.
#[derive(Clone, Debug)]
pub struct InjectiveResolution<F: Field> {
    pub embedding: ModuleMap<F>,
    pub differentials: Vec<ModuleMap<F>>,
}

impl<F: Field> InjectiveResolution<F> {
    pub fn terms(&self) -> Vec<Module<F>> {
        if self.embedding.target().is_zero() {
            return Vec::new();
        }
        let mut t = vec![self.embedding.target().clone()];
        t.extend(self.differentials.iter().map(|d| d.target().clone()));
        t
    }

    pub fn len(&self) -> usize {
        self.differentials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.embedding.target().is_zero()
    }
}

/// Minimal injective resolution by iterated envelopes of cokernels. Requires an
/// acyclic quiver, which bounds the length by the number of vertices.
pub fn min_injective_resolution<F: Field>(m: &Module<F>) -> Result<InjectiveResolution<F>> {
    if !m.algebra().is_acyclic() {
        return Err(Error::NonAcyclicQuiver);
    }
    let embedding = injective_envelope(m);
    let mut differentials = Vec::new();
    let mut prev = embedding.clone();
    loop {
        let c = prev.cokernel();
        if c.target().is_zero() {
            break;
        }
        let e = injective_envelope(c.target());
        let d = e.compose(&c);
        differentials.push(d.clone());
        prev = d;
        if differentials.len() > m.num_vertices() + 1 {
            return Err(Error::CertificationFailure("injective resolution did not terminate".into()));
        }
    }
    Ok(InjectiveResolution { embedding, differentials })
}

/// Convenience: all indecomposable injectives of an algebra.
pub fn indecomposable_injectives<F: Field>(algebra: &Arc<crate::quiver::QuiverAlgebra<F>>) -> Vec<Module<F>> {
    (0..algebra.num_vertices()).map(|v| Module::injective(algebra, v).unwrap()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::module::hom_dim;
    use crate::quiver::QuiverAlgebra;

    fn a2() -> Arc<QuiverAlgebra<PrimeField>> {
        QuiverAlgebra::linear_a(PrimeField::new(2).unwrap(), 2).unwrap()
    }

    #[test]
    fn socle_and_radical() {
        let a = a2();
        let p1 = Module::projective(&a, 0).unwrap();
        assert_eq!(socle(&p1).source().dims(), &[0, 1]);
        assert_eq!(radical(&p1).source().dims(), &[0, 1]);
        let s = Module::simple(&a, 0).unwrap();
        assert!(radical(&s).source().is_zero());
        let ss = direct_sum(&a, &Module::simples(&a)).module;
        assert_eq!(socle(&ss).source().dims(), &[1, 1]);
    }

    #[test]
    fn envelopes() {
        let a = a2();
        let s2 = Module::simple(&a, 1).unwrap();
        let e = injective_envelope(&s2);
        assert_eq!(e.target().dims(), &[1, 1]);
        assert!(e.is_mono());
        assert!(is_essential(&e).unwrap());
        let z = Module::zero(a.clone());
        assert!(injective_envelope(&z).target().is_zero());
        let i1 = Module::injective(&a, 0).unwrap();
        let e1 = injective_envelope(&i1);
        assert!(e1.is_iso());
        assert!(!is_injective(&s2));
        assert!(is_injective(&Module::injective(&a, 1).unwrap()));
    }

    #[test]
    fn essential_examples() {
        let a = a2();
        let s = Module::simples(&a);
        let sum = direct_sum(&a, &s);
        assert!(!is_essential(&sum.inclusions[1]).unwrap());
        assert!(is_essential(&s[0].identity()).unwrap());
        assert!(matches!(is_essential(&sum.projections[0]), Err(Error::NotAMonomorphism)));
    }

    #[test]
    fn injective_resolution_of_s2() {
        let a = a2();
        let s2 = Module::simple(&a, 1).unwrap();
        let r = min_injective_resolution(&s2).unwrap();
        assert_eq!(r.embedding.target().dims(), &[1, 1]);
        assert_eq!(r.differentials.len(), 1);
        assert_eq!(r.differentials[0].target().dims(), &[1, 0]);
        let i1 = Module::injective(&a, 0).unwrap();
        assert!(min_injective_resolution(&i1).unwrap().differentials.is_empty());
        assert!(min_injective_resolution(&Module::zero(a)).unwrap().is_empty());
    }

    #[test]
    fn ext_examples() {
        let a = a2();
        let s = Module::simples(&a);
        assert_eq!(ext_dim(&s[0], &s[1], 1), 1);
        assert_eq!(ext_dim(&s[1], &s[0], 1), 0);
        assert_eq!(ext_dim(&s[0], &s[0], 0), hom_dim(&s[0], &s[0]));
        let p1 = Module::projective(&a, 0).unwrap();
        assert_eq!(ext_dim(&p1, &s[1], 1), 0);
        assert_eq!(ext_dim(&s[0], &s[1], 2), 0);
    }

    #[test]
    fn projective_cover_of_simple() {
        let a = a2();
        let s1 = Module::simple(&a, 0).unwrap();
        let c = projective_cover(&s1);
        assert_eq!(c.source().dims(), &[1, 1]);
        assert!(c.is_epi());
        assert!(is_projective(c.source()));
    }
}
