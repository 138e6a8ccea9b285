//! Shape categories `Q`: finite `k`-linear categories presented as quivers
//! with relations, with hom bases, pseudoradical and Serre permutation.
//!
//! The cyclic shape has arrows `∂_q: q → q−1 (mod m)`, so a diagram of this
//! shape is an `m`-periodic `N`-complex with a degree-lowering differential.
//! The loop shape is the one-object case `m = 1, N = 2`.

use std::sync::Arc;

use crate::classic::projective_cover_with_tops;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::module::{Module, ModuleMap};
use crate::quiver::{Arrow, Element, QuiverAlgebra, Relation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShapeKind {
    Loop,
    Cyclic {
        m: usize,
        n: usize,
    },
    /// A user-supplied finite shape. Only the dimension shadow of the Serre
    /// duality is checked; the other setup conditions are asserted, not verified.
    Custom,
}

pub struct ShapeCategory<F: Field> {
    kind: ShapeKind,
    algebra: Arc<QuiverAlgebra<F>>,
    serre: Vec<usize>,
}

impl<F: Field> std::fmt::Debug for ShapeCategory<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ShapeCategory")
            .field("kind", &self.kind)
            .field("objects", &self.num_objects())
            .field("serre", &self.serre)
            .finish()
    }
}

impl<F: Field> ShapeCategory<F> {
    /// One object `q`, one loop `∂` with `∂² = 0`.
    pub fn shape_loop(field: F) -> Arc<Self> {
        let algebra = cyclic_algebra(field, 1, 2, &["q".to_string()], &["d".to_string()]);
        Arc::new(ShapeCategory { kind: ShapeKind::Loop, algebra, serre: vec![0] })
    }

    /// Objects `0..m`, arrows `∂_q: q → q−1 (mod m)`, any `N` consecutive
    /// arrows composing to zero.
    pub fn shape_cyclic(field: F, m: usize, n: usize) -> Result<Arc<Self>> {
        if m < 1 || n < 2 {
            return Err(Error::InvalidParameters(format!("cyclic shape needs m >= 1 and N >= 2, got m={m}, N={n}")));
        }
        let objects: Vec<String> = (0..m).map(|i| i.to_string()).collect();
        let arrows: Vec<String> = (0..m).map(|i| format!("d{i}")).collect();
        let algebra = cyclic_algebra(field, m, n, &objects, &arrows);
        let serre = (0..m).map(|q| (q + m * n - (n - 1)) % m).collect();
        let shape = ShapeCategory { kind: ShapeKind::Cyclic { m, n }, algebra, serre };
        if !shape.serre_duality_holds() {
            return Err(Error::CertificationFailure("Serre permutation fails dimension duality".into()));
        }
        Ok(Arc::new(shape))
    }

    /// A user-defined finite shape. The Serre permutation is found by search
    /// over permutations satisfying `dim Q(p,q) = dim Q(q,Sp)`.
    pub fn custom(algebra: Arc<QuiverAlgebra<F>>) -> Result<Arc<Self>> {
        let n = algebra.num_vertices();
        let dims: Vec<Vec<usize>> = (0..n).map(|p| (0..n).map(|q| algebra.paths_between(p, q).len()).collect()).collect();
        let candidates: Vec<Vec<usize>> =
            (0..n).map(|p| (0..n).filter(|&s| (0..n).all(|q| dims[p][q] == dims[q][s])).collect()).collect();
        let mut serre = vec![usize::MAX; n];
        let mut used = vec![false; n];
        if !assign_permutation(&candidates, 0, &mut serre, &mut used) {
            return Err(Error::InvalidParameters("no permutation satisfies the Serre dimension duality".into()));
        }
        Ok(Arc::new(ShapeCategory { kind: ShapeKind::Custom, algebra, serre }))
    }

    pub fn kind(&self) -> ShapeKind {
        self.kind
    }

    pub fn field(&self) -> F {
        self.algebra.field()
    }

    /// The path algebra of the shape; its modules are the `k`-valued diagrams.
    pub fn algebra(&self) -> &Arc<QuiverAlgebra<F>> {
        &self.algebra
    }

    pub fn num_objects(&self) -> usize {
        self.algebra.num_vertices()
    }

    pub fn objects(&self) -> &[String] {
        self.algebra.vertices()
    }

    pub fn check_object(&self, q: usize) -> Result<()> {
        if q < self.num_objects() {
            Ok(())
        } else {
            Err(Error::UnknownObject(q))
        }
    }

    /// Period and nilpotency `(m, N)` of a built-in shape.
    pub fn period_and_nilpotency(&self) -> Option<(usize, usize)> {
        match self.kind {
            ShapeKind::Loop => Some((1, 2)),
            ShapeKind::Cyclic { m, n } => Some((m, n)),
            ShapeKind::Custom => None,
        }
    }

    /// Basis of `Q(p, q)`: path-basis indices of the shape algebra.
    pub fn hom_basis(&self, p: usize, q: usize) -> Vec<usize> {
        self.algebra.paths_between(p, q)
    }

    pub fn hom_dim(&self, p: usize, q: usize) -> usize {
        self.hom_basis(p, q).len()
    }

    /// Basis of `𝔯(p, q)`: the non-identity basis morphisms.
    pub fn pseudoradical_basis(&self, p: usize, q: usize) -> Vec<usize> {
        self.hom_basis(p, q).into_iter().filter(|&b| !self.algebra.basis()[b].is_trivial()).collect()
    }

    /// Smallest `r` with `𝔯^r = 0`.
    pub fn nilpotency_index(&self) -> usize {
        self.algebra.loewy_length()
    }

    /// `g ∘ f` for basis morphisms `f: p → q`, `g: q → r`.
    pub fn compose(&self, g: usize, f: usize) -> Element<F> {
        let one = self.field().one();
        self.algebra.then(&vec![(f, one.clone())], &vec![(g, one)])
    }

    pub fn serre(&self, q: usize) -> usize {
        self.serre[q]
    }

    pub fn serre_permutation(&self) -> &[usize] {
        &self.serre
    }

    pub fn serre_duality_holds(&self) -> bool {
        let n = self.num_objects();
        (0..n).all(|p| (0..n).all(|q| self.hom_dim(p, q) == self.hom_dim(q, self.serre[p])))
    }

    /// The `k`-linear representable `Q(q, −)` as a module over the shape algebra.
    pub fn representable(&self, q: usize) -> Result<Module<F>> {
        self.check_object(q)?;
        Module::projective(&self.algebra, q)
    }

    /// The stalk `S⟨q⟩`.
    pub fn stalk(&self, q: usize) -> Result<Module<F>> {
        self.check_object(q)?;
        Module::simple(&self.algebra, q)
    }

    /// First `len` steps of the minimal projective resolution of `S⟨obj⟩`.
    pub fn stalk_resolution(&self, obj: usize, len: usize) -> Result<StalkResolution<F>> {
        let stalk = self.stalk(obj)?;
        let (eps, tops) = projective_cover_with_tops(&stalk);
        let mut terms = vec![tops];
        let mut maps: Vec<ModuleMap<F>> = Vec::new();
        let mut connecting: Vec<Vec<Vec<Element<F>>>> = Vec::new();
        let mut kernel = eps.kernel();
        let augmentation = eps;
        for _ in 0..len {
            let (cover, tops) = projective_cover_with_tops(kernel.source());
            let d = kernel.compose(&cover);
            connecting.push(self.connecting_elements(&d, terms.last().unwrap(), &tops));
            kernel = cover.kernel();
            maps.push(d);
            terms.push(tops);
        }
        Ok(StalkResolution { object: obj, augmentation, terms, maps, connecting })
    }

    /// Reads off the matrix of shape morphisms of a map between sums of
    /// representables `⊕_l Q(t_l, −) → ⊕_k Q(s_k, −)`: entry `[k][l]` lies in `Q(s_k, t_l)`.
    fn connecting_elements(&self, d: &ModuleMap<F>, lower: &[usize], upper: &[usize]) -> Vec<Vec<Element<F>>> {
        let alg = &self.algebra;
        let f = self.field();
        // Coordinates of the target ⊕ Q(s_k, −) at vertex w: summands in order, paths s_k → w in basis order.
        let coord = |w: usize| -> Vec<(usize, usize)> {
            let mut v = Vec::new();
            for (k, &s) in lower.iter().enumerate() {
                for b in alg.paths_from(s) {
                    if alg.basis()[b].target == w {
                        v.push((k, b));
                    }
                }
            }
            v
        };
        let mut out = vec![vec![Vec::new(); upper.len()]; lower.len()];
        for (l, &t) in upper.iter().enumerate() {
            // Generators of earlier summands at vertex t come first, each summand
            // contributing all its paths ending at t; the generator is the trivial path.
            let mut col = 0;
            for (l2, &t2) in upper.iter().enumerate() {
                if l2 == l {
                    break;
                }
                col += alg.paths_from(t2).iter().filter(|&&b| alg.basis()[b].target == t).count();
            }
            let trivial_pos = alg
                .paths_from(t)
                .iter()
                .filter(|&&b| alg.basis()[b].target == t)
                .position(|&b| alg.basis()[b].is_trivial())
                .unwrap();
            let column = d.vertex_map(t).column(col + trivial_pos);
            for (row, (k, b)) in coord(t).into_iter().enumerate() {
                if !f.is_zero(&column[row]) {
                    out[k][l].push((b, column[row].clone()));
                }
            }
        }
        out
    }
}

fn assign_permutation(cands: &[Vec<usize>], p: usize, out: &mut [usize], used: &mut [bool]) -> bool {
    if p == cands.len() {
        return true;
    }
    for &s in &cands[p] {
        if !used[s] {
            used[s] = true;
            out[p] = s;
            if assign_permutation(cands, p + 1, out, used) {
                return true;
            }
            used[s] = false;
        }
    }
    false
}

fn cyclic_algebra<F: Field>(field: F, m: usize, n: usize, objects: &[String], arrow_names: &[String]) -> Arc<QuiverAlgebra<F>> {
    let arrows: Vec<Arrow> = (0..m).map(|q| Arrow { name: arrow_names[q].clone(), source: q, target: (q + m - 1) % m }).collect();
    let relations =
        (0..m).map(|q| Relation { terms: vec![(field.one(), (0..n).map(|i| (q + m * n - i) % m).collect())] }).collect();
    QuiverAlgebra::new(field, objects.to_vec(), arrows, relations).expect("cyclic presentation is admissible")
}

/// A projective resolution `⋯ → P_1 → P_0 → S⟨obj⟩` over the shape algebra.
/// `terms[j]` lists the objects of the representable summands of `P_j`;
/// `connecting[j][k][l] ∈ Q(terms[j][k], terms[j+1][l])` describes `P_{j+1} → P_j`.
#[derive(Clone, Debug)]
pub struct StalkResolution<F: Field> {
    pub object: usize,
    pub augmentation: ModuleMap<F>,
    pub terms: Vec<Vec<usize>>,
    pub maps: Vec<ModuleMap<F>>,
    pub connecting: Vec<Vec<Vec<Element<F>>>>,
}

impl<F: Field> StalkResolution<F> {
    /// True if every consecutive composite vanishes and the sequence is exact
    /// at each interior term (rank count over the shape algebra).
    pub fn is_exact(&self) -> bool {
        let mut prev = &self.augmentation;
        for d in &self.maps {
            if !prev.compose(d).is_zero() {
                return false;
            }
            if prev.kernel().source().total_dim() != d.rank() {
                return false;
            }
            prev = d;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn loop_shape() {
        let s = ShapeCategory::shape_loop(f2());
        assert_eq!(s.hom_dim(0, 0), 2);
        let d = s.pseudoradical_basis(0, 0)[0];
        assert!(s.compose(d, d).is_empty());
        assert_eq!(s.serre(0), 0);
        assert_eq!(s.nilpotency_index(), 2);
    }

    #[test]
    fn cyclic_three_two() {
        let s = ShapeCategory::shape_cyclic(f2(), 3, 2).unwrap();
        assert_eq!(s.hom_dim(0, 2), 1);
        assert_eq!(s.hom_dim(0, 1), 0);
        assert_eq!(s.hom_dim(0, 0), 1);
        assert_eq!(s.serre(0), 2);
        assert!(s.serre_duality_holds());
        assert_eq!(s.algebra().dim(), 6);
    }

    #[test]
    fn invalid_cyclic() {
        assert!(matches!(ShapeCategory::shape_cyclic(f2(), 0, 2), Err(Error::InvalidParameters(_))));
        assert!(matches!(ShapeCategory::shape_cyclic(f2(), 3, 1), Err(Error::InvalidParameters(_))));
    }

    #[test]
    fn duality_for_small_parameters() {
        for m in 1..=6 {
            for n in 2..=4 {
                let s = ShapeCategory::shape_cyclic(f2(), m, n).unwrap();
                assert!(s.serre_duality_holds(), "m={m} N={n}");
                assert_eq!(s.nilpotency_index(), n);
            }
        }
    }

    #[test]
    fn stalk_resolutions() {
        let s = ShapeCategory::shape_loop(f2());
        let r = s.stalk_resolution(0, 2).unwrap();
        assert_eq!(r.terms, vec![vec![0], vec![0], vec![0]]);
        assert!(r.is_exact());
        let c = ShapeCategory::shape_cyclic(f2(), 3, 2).unwrap();
        let r = c.stalk_resolution(0, 2).unwrap();
        assert_eq!(r.terms, vec![vec![0], vec![2], vec![1]]);
        assert!(r.is_exact());
        assert_eq!(c.stalk_resolution(0, 0).unwrap().terms.len(), 1);
        assert!(matches!(c.stalk_resolution(7, 1), Err(Error::UnknownObject(7))));
        let c = ShapeCategory::shape_cyclic(f2(), 4, 3).unwrap();
        let r = c.stalk_resolution(1, 4).unwrap();
        assert_eq!(r.terms, vec![vec![1], vec![0], vec![2], vec![1], vec![3]]);
        assert!(r.is_exact());
        // the connecting maps alternate ∂ and ∂²
        let lens: Vec<usize> = r
            .connecting
            .iter()
            .map(|m| {
                assert_eq!(m[0][0].len(), 1);
                c.algebra().basis()[m[0][0][0].0].len()
            })
            .collect();
        assert_eq!(lens, vec![1, 2, 1, 2]);
    }
}
