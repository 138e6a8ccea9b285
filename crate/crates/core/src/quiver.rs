//! Finite-dimensional algebras `kQ/I` presented by a quiver with homogeneous
//! relations.
//!
//! Paths are written in traversal order: `[a, b]` means "first `a`, then `b`",
//! which acts on a left module as the matrix product `M_b · M_a`. The algebra
//! is graded by path length, and the path basis is computed degree by degree:
//! every degree-`n` basis path is a degree-`n−1` basis path followed by one
//! arrow, and the normal form of any such extension is tabulated. Among the
//! candidate paths of a degree, the lexicographically largest ones are
//! eliminated first, so the surviving basis is the lexicographically smallest.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, Weak};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

/// `(length, source, target, terms)` of a relation after normalization.
type NormalRelation<F> = (usize, usize, usize, Vec<(<F as Field>::Elem, Vec<usize>)>);

/// Upper bound on the Loewy length accepted for a presentation.
const MAX_DEGREE: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A linear combination of paths of one common length, source and target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation<F: Field> {
    pub terms: Vec<(F::Elem, Vec<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisPath {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl BasisPath {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }
}

/// Sparse algebra element: coefficients on global basis indices.
pub type Element<F> = Vec<(usize, <F as Field>::Elem)>;

pub struct QuiverAlgebra<F: Field> {
    field: F,
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    relations: Vec<Relation<F>>,
    basis: Vec<BasisPath>,
    degree_start: Vec<usize>,
    /// `(basis index, arrow) -> normal form of "basis path, then arrow"`.
    append: HashMap<(usize, usize), Element<F>>,
    opposite: OnceLock<Arc<QuiverAlgebra<F>>>,
    opposite_of: OnceLock<Weak<QuiverAlgebra<F>>>,
}

impl<F: Field> fmt::Debug for QuiverAlgebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuiverAlgebra")
            .field("field", &self.field.spec())
            .field("vertices", &self.vertices)
            .field("arrows", &self.arrows)
            .field("relations", &self.relations.len())
            .field("dim", &self.basis.len())
            .finish()
    }
}

impl<F: Field> QuiverAlgebra<F> {
    /// Builds `kQ/I`, rejecting inhomogeneous or non-admissible relations and
    /// presentations that are not finite-dimensional.
    pub fn new(field: F, vertices: Vec<String>, arrows: Vec<Arrow>, relations: Vec<Relation<F>>) -> Result<Arc<Self>> {
        Ok(Arc::new(Self::build(field, vertices, arrows, relations)?))
    }

    /// Path algebra of a quiver without relations; must be acyclic to be finite-dimensional.
    pub fn path_algebra(field: F, n_vertices: usize, arrows: &[(usize, usize)]) -> Result<Arc<Self>> {
        let vertices = (1..=n_vertices).map(|i| i.to_string()).collect();
        let arrows =
            arrows.iter().enumerate().map(|(i, &(s, t))| Arrow { name: format!("a{}", i + 1), source: s, target: t }).collect();
        Self::new(field, vertices, arrows, Vec::new())
    }

    /// Linearly oriented `A_n`: `1 → 2 → ⋯ → n`.
    pub fn linear_a(field: F, n: usize) -> Result<Arc<Self>> {
        let arrows: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Self::path_algebra(field, n, &arrows)
    }

    /// The field itself, as the algebra of a one-vertex quiver.
    pub fn ground_field(field: F) -> Arc<Self> {
        Self::path_algebra(field, 1, &[]).expect("a point is a valid quiver")
    }

    fn build(field: F, vertices: Vec<String>, arrows: Vec<Arrow>, relations: Vec<Relation<F>>) -> Result<Self> {
        let nv = vertices.len();
        for a in &arrows {
            if a.source >= nv || a.target >= nv {
                return Err(Error::InvalidPresentation(format!("arrow {} has an endpoint outside the quiver", a.name)));
            }
        }
        let mut names = std::collections::HashSet::new();
        for a in &arrows {
            if !names.insert(a.name.as_str()) {
                return Err(Error::InvalidPresentation(format!("duplicate arrow name {}", a.name)));
            }
        }
        // Normalize relations: drop zero terms, check homogeneity and composability.
        let mut rels: Vec<NormalRelation<F>> = Vec::new();
        for (ri, rel) in relations.iter().enumerate() {
            let terms: Vec<_> = rel.terms.iter().filter(|(c, _)| !field.is_zero(c)).cloned().collect();
            if terms.is_empty() {
                continue;
            }
            let len = terms[0].1.len();
            if len < 2 {
                return Err(Error::InvalidPresentation(format!("relation {ri} has a path of length < 2")));
            }
            let mut ends = None;
            for (_, p) in &terms {
                if p.len() != len {
                    return Err(Error::InvalidPresentation(format!("relation {ri} is not homogeneous")));
                }
                let e = path_endpoints(&arrows, p)
                    .ok_or_else(|| Error::InvalidPresentation(format!("relation {ri} contains a non-composable path")))?;
                match ends {
                    None => ends = Some(e),
                    Some(prev) if prev != e => {
                        return Err(Error::InvalidPresentation(format!("relation {ri} mixes paths with different endpoints")))
                    }
                    _ => {}
                }
            }
            let (s, t) = ends.unwrap();
            rels.push((len, s, t, terms));
        }

        let mut basis: Vec<BasisPath> = (0..nv).map(|v| BasisPath { source: v, target: v, arrows: Vec::new() }).collect();
        let mut degree_start = vec![0, nv];
        let mut append: HashMap<(usize, usize), Element<F>> = HashMap::new();
        let mut out_arrows: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for (i, a) in arrows.iter().enumerate() {
            out_arrows[a.source].push(i);
        }

        let mut finished = nv == 0;
        for n in 1..=MAX_DEGREE {
            let (lo, hi) = (degree_start[n - 1], degree_start[n]);
            if lo == hi {
                finished = true;
                break;
            }
            // Candidates of degree n, sorted lexicographically by arrow word.
            let mut cands: Vec<(Vec<usize>, usize, usize)> = Vec::new();
            for b in lo..hi {
                for &a in &out_arrows[basis[b].target] {
                    let mut w = basis[b].arrows.clone();
                    w.push(a);
                    cands.push((w, b, a));
                }
            }
            cands.sort();
            let nc = cands.len();
            // Column order is descending lexicographic so pivots land on the largest words.
            let col_of: HashMap<(usize, usize), usize> =
                cands.iter().enumerate().map(|(i, (_, b, a))| ((*b, *a), nc - 1 - i)).collect();

            let mut rows: Vec<Vec<F::Elem>> = Vec::new();
            for (d, rs, _rt, terms) in &rels {
                if *d > n {
                    continue;
                }
                let k = n - d;
                let (klo, khi) = (degree_start[k], degree_start[k + 1]);
                for bw in &basis[klo..khi] {
                    if bw.target != *rs {
                        continue;
                    }
                    let mut row = vec![field.zero(); nc];
                    for (c, u) in terms {
                        let mut word = bw.arrows.clone();
                        word.extend_from_slice(u);
                        let last = *word.last().unwrap();
                        let prefix = reduce_word(field, &append, bw.source, &word[..word.len() - 1]);
                        for (b, coeff) in prefix {
                            if let Some(&col) = col_of.get(&(b, last)) {
                                let t = field.mul(c, &coeff);
                                row[col] = field.add(&row[col], &t);
                            }
                        }
                    }
                    if row.iter().any(|x| !field.is_zero(x)) {
                        rows.push(row);
                    }
                }
            }

            let (rref, pivots) = if rows.is_empty() {
                (Matrix::zeros(field, 0, nc), Vec::new())
            } else {
                let data: Vec<F::Elem> = rows.into_iter().flatten().collect();
                let m = Matrix::from_vec(field, data.len() / nc, nc, data)?;
                m.rref()
            };
            let mut pivot_row = vec![None; nc];
            for (i, &p) in pivots.iter().enumerate() {
                pivot_row[p] = Some(i);
            }
            let mut new_index = vec![usize::MAX; nc];
            for (ci, (w, _b, _a)) in cands.iter().enumerate() {
                let col = nc - 1 - ci;
                if pivot_row[col].is_none() {
                    new_index[col] = basis.len();
                    let (s, t) = path_endpoints(&arrows, w).unwrap();
                    basis.push(BasisPath { source: s, target: t, arrows: w.clone() });
                }
            }
            degree_start.push(basis.len());
            for (_, b, a) in &cands {
                let col = col_of[&(*b, *a)];
                let nf = match pivot_row[col] {
                    None => vec![(new_index[col], field.one())],
                    Some(r) => (0..nc)
                        .filter(|&j| pivot_row[j].is_none() && !field.is_zero(rref.get(r, j)))
                        .map(|j| (new_index[j], field.neg(rref.get(r, j))))
                        .collect(),
                };
                append.insert((*b, *a), nf);
            }
        }
        if !finished {
            return Err(Error::InvalidPresentation(format!(
                "path basis does not close below length {MAX_DEGREE}; relations do not contain a power of the arrow ideal"
            )));
        }
        while degree_start.len() > 1 && degree_start[degree_start.len() - 1] == degree_start[degree_start.len() - 2] {
            degree_start.pop();
        }

        let relations = rels.into_iter().map(|(_, _, _, terms)| Relation { terms }).collect();
        Ok(QuiverAlgebra {
            field,
            vertices,
            arrows,
            relations,
            basis,
            degree_start,
            append,
            opposite: OnceLock::new(),
            opposite_of: OnceLock::new(),
        })
    }

    pub fn field(&self) -> F {
        self.field
    }
    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }
    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }
    pub fn relations(&self) -> &[Relation<F>] {
        &self.relations
    }
    pub fn basis(&self) -> &[BasisPath] {
        &self.basis
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Largest path length surviving in the quotient, plus one.
    pub fn loewy_length(&self) -> usize {
        self.degree_start.len() - 1
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.num_vertices() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v.to_string()))
        }
    }

    /// Basis indices of paths starting at `v`, in basis order.
    pub fn paths_from(&self, v: usize) -> Vec<usize> {
        (0..self.basis.len()).filter(|&i| self.basis[i].source == v).collect()
    }

    /// Basis indices of paths ending at `v`, in basis order.
    pub fn paths_to(&self, v: usize) -> Vec<usize> {
        (0..self.basis.len()).filter(|&i| self.basis[i].target == v).collect()
    }

    /// Basis indices of paths from `s` to `t`.
    pub fn paths_between(&self, s: usize, t: usize) -> Vec<usize> {
        (0..self.basis.len()).filter(|&i| self.basis[i].source == s && self.basis[i].target == t).collect()
    }

    /// Normal form of "basis path `b`, then arrow `a`"; zero if not composable.
    pub fn append_arrow(&self, b: usize, a: usize) -> &[(usize, F::Elem)] {
        self.append.get(&(b, a)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Normal form of a word in the arrows starting at `source`.
    pub fn reduce(&self, source: usize, word: &[usize]) -> Element<F> {
        reduce_word(self.field, &self.append, source, word)
    }

    /// Product "first `x`, then `y`" of two elements (i.e. `y · x` as algebra elements).
    pub fn then(&self, x: &Element<F>, y: &Element<F>) -> Element<F> {
        let f = self.field;
        let mut acc: HashMap<usize, F::Elem> = HashMap::new();
        for (bx, cx) in x {
            for (by, cy) in y {
                if self.basis[*bx].target != self.basis[*by].source {
                    continue;
                }
                let c = f.mul(cx, cy);
                let word = concat(&self.basis[*bx].arrows, &self.basis[*by].arrows);
                let prod = self.reduce(self.basis[*bx].source, &word);
                for (r, cr) in prod {
                    let t = f.mul(&c, &cr);
                    let e = acc.entry(r).or_insert_with(|| f.zero());
                    *e = f.add(e, &t);
                }
            }
        }
        let mut out: Element<F> = acc.into_iter().filter(|(_, c)| !f.is_zero(c)).collect();
        out.sort_by_key(|(i, _)| *i);
        out
    }

    pub fn is_acyclic(&self) -> bool {
        let n = self.num_vertices();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.target] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for a in &self.arrows {
                if a.source == v {
                    indeg[a.target] -= 1;
                    if indeg[a.target] == 0 {
                        stack.push(a.target);
                    }
                }
            }
        }
        seen == n
    }

    /// Path algebra of an acyclic quiver with no relations.
    pub fn is_hereditary(&self) -> bool {
        self.relations.is_empty() && self.is_acyclic()
    }

    /// Same presentation (vertices, arrows, relations).
    pub fn same_presentation(&self, other: &Self) -> bool {
        self.field == other.field
            && self.vertices == other.vertices
            && self.arrows == other.arrows
            && self.relations == other.relations
    }

    /// The opposite algebra: arrows and relation words reversed.
    pub fn opposite(self: &Arc<Self>) -> Arc<Self> {
        if let Some(w) = self.opposite_of.get() {
            if let Some(orig) = w.upgrade() {
                return orig;
            }
        }
        self.opposite
            .get_or_init(|| {
                let arrows =
                    self.arrows.iter().map(|a| Arrow { name: a.name.clone(), source: a.target, target: a.source }).collect();
                let relations = self
                    .relations
                    .iter()
                    .map(|r| Relation {
                        terms: r.terms.iter().map(|(c, w)| (c.clone(), w.iter().rev().copied().collect())).collect(),
                    })
                    .collect();
                let op = Self::build(self.field, self.vertices.clone(), arrows, relations)
                    .expect("opposite of a valid presentation is valid");
                let _ = op.opposite_of.set(Arc::downgrade(self));
                Arc::new(op)
            })
            .clone()
    }
}

pub(crate) fn same_algebra<F: Field>(a: &Arc<QuiverAlgebra<F>>, b: &Arc<QuiverAlgebra<F>>) -> bool {
    Arc::ptr_eq(a, b) || a.same_presentation(b)
}

fn concat(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

fn path_endpoints(arrows: &[Arrow], word: &[usize]) -> Option<(usize, usize)> {
    let first = arrows.get(*word.first()?)?;
    let mut cur = first.target;
    for &a in &word[1..] {
        let arr = arrows.get(a)?;
        if arr.source != cur {
            return None;
        }
        cur = arr.target;
    }
    Some((first.source, cur))
}

fn reduce_word<F: Field>(field: F, append: &HashMap<(usize, usize), Element<F>>, source: usize, word: &[usize]) -> Element<F> {
    let mut cur: Element<F> = vec![(source, field.one())];
    for &a in word {
        let mut acc: HashMap<usize, F::Elem> = HashMap::new();
        for (b, c) in &cur {
            if let Some(nf) = append.get(&(*b, a)) {
                for (r, cr) in nf {
                    let t = field.mul(c, cr);
                    let e = acc.entry(*r).or_insert_with(|| field.zero());
                    *e = field.add(e, &t);
                }
            }
        }
        cur = acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        cur.sort_by_key(|(i, _)| *i);
        if cur.is_empty() {
            break;
        }
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn a2_path_algebra() {
        let a = QuiverAlgebra::linear_a(f2(), 2).unwrap();
        assert_eq!(a.dim(), 3);
        assert!(a.is_hereditary());
        assert_eq!(a.paths_from(0).len(), 2);
        assert_eq!(a.paths_from(1).len(), 1);
    }

    #[test]
    fn truncated_loop() {
        let f = f2();
        let arrows = vec![Arrow { name: "d".into(), source: 0, target: 0 }];
        let rel = Relation { terms: vec![(1, vec![0, 0])] };
        let a = QuiverAlgebra::new(f, vec!["q".into()], arrows, vec![rel]).unwrap();
        assert_eq!(a.dim(), 2);
        assert!(!a.is_acyclic());
        assert!(a.reduce(0, &[0, 0]).is_empty());
    }

    #[test]
    fn loop_without_relation_is_rejected() {
        let arrows = vec![Arrow { name: "d".into(), source: 0, target: 0 }];
        let err = QuiverAlgebra::new(f2(), vec!["q".into()], arrows, vec![]).unwrap_err();
        assert!(matches!(err, Error::InvalidPresentation(_)));
    }

    #[test]
    fn inhomogeneous_relation_is_rejected() {
        let arrows = vec![
            Arrow { name: "a".into(), source: 0, target: 1 },
            Arrow { name: "b".into(), source: 1, target: 2 },
            Arrow { name: "c".into(), source: 0, target: 2 },
        ];
        let rel = Relation { terms: vec![(1, vec![0, 1]), (1, vec![2])] };
        let err = QuiverAlgebra::new(f2(), vec!["1".into(), "2".into(), "3".into()], arrows, vec![rel]).unwrap_err();
        assert!(matches!(err, Error::InvalidPresentation(_)));
    }

    #[test]
    fn commutative_square() {
        // 0 -a-> 1 -b-> 3, 0 -c-> 2 -d-> 3 with ab = cd.
        let f = PrimeField::new(3).unwrap();
        let arrows = vec![
            Arrow { name: "a".into(), source: 0, target: 1 },
            Arrow { name: "b".into(), source: 1, target: 3 },
            Arrow { name: "c".into(), source: 0, target: 2 },
            Arrow { name: "d".into(), source: 2, target: 3 },
        ];
        let rel = Relation { terms: vec![(1, vec![0, 1]), (2, vec![2, 3])] };
        let vs = (0..4).map(|i| i.to_string()).collect();
        let a = QuiverAlgebra::new(f, vs, arrows, vec![rel]).unwrap();
        // 4 idempotents, 4 arrows, one surviving length-2 path.
        assert_eq!(a.dim(), 9);
        let ab = a.reduce(0, &[0, 1]);
        let cd = a.reduce(0, &[2, 3]);
        assert_eq!(ab.len(), 1);
        assert_eq!(cd.len(), 1);
        assert_eq!(ab[0].0, cd[0].0);
        assert_eq!(f.add(&ab[0].1, &f.mul(&2, &cd[0].1)), 0);
    }

    #[test]
    fn opposite_round_trip() {
        let a = QuiverAlgebra::linear_a(f2(), 3).unwrap();
        let op = a.opposite();
        assert_eq!(op.arrows()[0].source, 1);
        assert!(Arc::ptr_eq(&op.opposite(), &a));
        assert_eq!(op.dim(), a.dim());
    }
}
