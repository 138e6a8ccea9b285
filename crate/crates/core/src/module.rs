//! Representations of a quiver algebra and the maps between them.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{column_space_contains, quotient_map, subspace_intersection, Matrix};
use crate::quiver::{same_algebra, QuiverAlgebra};

struct ModuleData<F: Field> {
    algebra: Arc<QuiverAlgebra<F>>,
    dims: Vec<usize>,
    maps: Vec<Matrix<F>>,
}

/// A finite-dimensional left module, stored as a quiver representation:
/// one vector space per vertex and one matrix per arrow. Cloning is cheap.
#[derive(Clone)]
pub struct Module<F: Field> {
    inner: Arc<ModuleData<F>>,
}

impl<F: Field> fmt::Debug for Module<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Module").field("dims", &self.inner.dims).field("maps", &self.inner.maps).finish()
    }
}

impl<F: Field> PartialEq for Module<F> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (same_algebra(&self.inner.algebra, &other.inner.algebra)
                && self.inner.dims == other.inner.dims
                && self.inner.maps == other.inner.maps)
    }
}

impl<F: Field> Eq for Module<F> {}

impl<F: Field> Module<F> {
    /// Validates matrix shapes and that every relation acts as zero.
    pub fn new(algebra: Arc<QuiverAlgebra<F>>, dims: Vec<usize>, maps: Vec<Matrix<F>>) -> Result<Self> {
        if dims.len() != algebra.num_vertices() {
            return Err(Error::DimensionMismatch(format!("{} dimensions for {} vertices", dims.len(), algebra.num_vertices())));
        }
        if maps.len() != algebra.arrows().len() {
            return Err(Error::DimensionMismatch(format!("{} matrices for {} arrows", maps.len(), algebra.arrows().len())));
        }
        for (a, m) in algebra.arrows().iter().zip(&maps) {
            if m.rows() != dims[a.target] || m.cols() != dims[a.source] {
                return Err(Error::DimensionMismatch(format!(
                    "arrow {} needs a {}x{} matrix, got {}x{}",
                    a.name,
                    dims[a.target],
                    dims[a.source],
                    m.rows(),
                    m.cols()
                )));
            }
            if m.field() != algebra.field() {
                return Err(Error::InvalidParameters("matrix over a different field".into()));
            }
        }
        let module = Self::from_parts(algebra, dims, maps);
        if let Some(i) = module.violated_relation() {
            return Err(Error::InvalidPresentation(format!("relation {i} does not act as zero")));
        }
        Ok(module)
    }

    /// Trusted constructor for representations built from valid ones.
    pub(crate) fn from_parts(algebra: Arc<QuiverAlgebra<F>>, dims: Vec<usize>, maps: Vec<Matrix<F>>) -> Self {
        debug_assert_eq!(maps.len(), algebra.arrows().len());
        Module { inner: Arc::new(ModuleData { algebra, dims, maps }) }
    }

    fn violated_relation(&self) -> Option<usize> {
        let alg = self.algebra();
        let f = self.field();
        for (i, rel) in alg.relations().iter().enumerate() {
            let Some((_, w0)) = rel.terms.first() else { continue };
            let s = alg.arrows()[w0[0]].source;
            let t = alg.arrows()[*w0.last().unwrap()].target;
            let mut acc = Matrix::zeros(f, self.dim(t), self.dim(s));
            for (c, w) in &rel.terms {
                acc = acc.add(&self.word_action(s, w).scale(c));
            }
            if !acc.is_zero() {
                return Some(i);
            }
        }
        None
    }

    pub fn zero(algebra: Arc<QuiverAlgebra<F>>) -> Self {
        let f = algebra.field();
        let n = algebra.num_vertices();
        let maps = algebra.arrows().iter().map(|_| Matrix::zeros(f, 0, 0)).collect();
        Self::from_parts(algebra, vec![0; n], maps)
    }

    /// The one-dimensional module concentrated at `v`.
    pub fn simple(algebra: &Arc<QuiverAlgebra<F>>, v: usize) -> Result<Self> {
        algebra.check_vertex(v)?;
        let f = algebra.field();
        let mut dims = vec![0; algebra.num_vertices()];
        dims[v] = 1;
        let maps = algebra.arrows().iter().map(|a| Matrix::zeros(f, dims[a.target], dims[a.source])).collect();
        Ok(Self::from_parts(algebra.clone(), dims, maps))
    }

    pub fn simples(algebra: &Arc<QuiverAlgebra<F>>) -> Vec<Self> {
        (0..algebra.num_vertices()).map(|v| Self::simple(algebra, v).unwrap()).collect()
    }

    /// The indecomposable projective at `v`, with basis the paths starting at `v`.
    pub fn projective(algebra: &Arc<QuiverAlgebra<F>>, v: usize) -> Result<Self> {
        algebra.check_vertex(v)?;
        let f = algebra.field();
        let nv = algebra.num_vertices();
        let paths = algebra.paths_from(v);
        let mut pos = vec![usize::MAX; algebra.dim()];
        let mut dims = vec![0; nv];
        for &b in &paths {
            let t = algebra.basis()[b].target;
            pos[b] = dims[t];
            dims[t] += 1;
        }
        let maps = algebra
            .arrows()
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let mut m = Matrix::zeros(f, dims[a.target], dims[a.source]);
                for &b in &paths {
                    if algebra.basis()[b].target != a.source {
                        continue;
                    }
                    for (r, c) in algebra.append_arrow(b, ai) {
                        m.set(pos[*r], pos[b], c.clone());
                    }
                }
                m
            })
            .collect();
        Ok(Self::from_parts(algebra.clone(), dims, maps))
    }

    /// The indecomposable injective at `v`: the dual of the projective at `v`
    /// over the opposite algebra.
    pub fn injective(algebra: &Arc<QuiverAlgebra<F>>, v: usize) -> Result<Self> {
        let op = algebra.opposite();
        Ok(Self::projective(&op, v)?.dual())
    }

    pub fn algebra(&self) -> &Arc<QuiverAlgebra<F>> {
        &self.inner.algebra
    }

    pub fn field(&self) -> F {
        self.inner.algebra.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.inner.dims
    }

    pub fn dim(&self, v: usize) -> usize {
        self.inner.dims[v]
    }

    pub fn total_dim(&self) -> usize {
        self.inner.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn arrow_map(&self, a: usize) -> &Matrix<F> {
        &self.inner.maps[a]
    }

    pub fn arrow_maps(&self) -> &[Matrix<F>] {
        &self.inner.maps
    }

    pub fn num_vertices(&self) -> usize {
        self.inner.dims.len()
    }

    pub fn same_algebra_as(&self, other: &Self) -> bool {
        same_algebra(self.algebra(), other.algebra())
    }

    /// Starting offset of each vertex in the concatenated coordinate vector.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.inner
            .dims
            .iter()
            .map(|d| {
                let o = acc;
                acc += d;
                o
            })
            .collect()
    }

    /// Action of a word of arrows (traversal order) starting at `source`.
    pub fn word_action(&self, source: usize, word: &[usize]) -> Matrix<F> {
        let mut acc = Matrix::identity(self.field(), self.dim(source));
        for &a in word {
            acc = self.arrow_map(a).mul(&acc);
        }
        acc
    }

    /// Action of the basis path with global index `b`.
    pub fn path_action(&self, b: usize) -> Matrix<F> {
        let p = &self.algebra().basis()[b];
        self.word_action(p.source, &p.arrows)
    }

    /// The dual representation, a module over the opposite algebra.
    pub fn dual(&self) -> Self {
        let op = self.algebra().opposite();
        let maps = self.inner.maps.iter().map(|m| m.transpose()).collect();
        Self::from_parts(op, self.inner.dims.clone(), maps)
    }

    /// Transports the structure along invertible per-vertex matrices `p`,
    /// returning the new module and the isomorphism `self → new`.
    pub fn base_change(&self, p: &[Matrix<F>]) -> Result<(Self, ModuleMap<F>)> {
        let mut inv = Vec::with_capacity(p.len());
        for (v, m) in p.iter().enumerate() {
            if m.rows() != self.dim(v) || !m.is_square() {
                return Err(Error::DimensionMismatch("base change matrix has wrong size".into()));
            }
            inv.push(m.inverse().ok_or(Error::NotInvertible)?);
        }
        let maps = self
            .algebra()
            .arrows()
            .iter()
            .enumerate()
            .map(|(ai, a)| p[a.target].mul(self.arrow_map(ai)).mul(&inv[a.source]))
            .collect();
        let new = Self::from_parts(self.algebra().clone(), self.inner.dims.clone(), maps);
        let iso = ModuleMap::from_parts(self.clone(), new.clone(), p.to_vec());
        Ok((new, iso))
    }

    /// Random invertible base change, for tests and independent presentations.
    pub fn random_base_change<R: Rng + ?Sized>(&self, rng: &mut R) -> (Self, ModuleMap<F>) {
        let p: Vec<_> = self.dims().iter().map(|&d| random_invertible(self.field(), d, rng)).collect();
        self.base_change(&p).expect("random matrices are invertible")
    }

    pub fn identity(&self) -> ModuleMap<F> {
        let f = self.field();
        let maps = self.dims().iter().map(|&d| Matrix::identity(f, d)).collect();
        ModuleMap::from_parts(self.clone(), self.clone(), maps)
    }
}

/// A uniformly random invertible matrix (rejection sampling).
pub fn random_invertible<F: Field, R: Rng + ?Sized>(field: F, n: usize, rng: &mut R) -> Matrix<F> {
    loop {
        let m = Matrix::random(field, n, n, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

/// A homomorphism of modules, given by one matrix per vertex.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleMap<F: Field> {
    source: Module<F>,
    target: Module<F>,
    maps: Vec<Matrix<F>>,
}

impl<F: Field> fmt::Debug for ModuleMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModuleMap")
            .field("source_dims", &self.source.dims())
            .field("target_dims", &self.target.dims())
            .field("maps", &self.maps)
            .finish()
    }
}

impl<F: Field> ModuleMap<F> {
    /// Validates shapes and the commuting squares.
    pub fn new(source: Module<F>, target: Module<F>, maps: Vec<Matrix<F>>) -> Result<Self> {
        if !source.same_algebra_as(&target) {
            return Err(Error::MismatchedShapes);
        }
        if maps.len() != source.num_vertices() {
            return Err(Error::DimensionMismatch("one matrix per vertex required".into()));
        }
        for (v, m) in maps.iter().enumerate() {
            if m.rows() != target.dim(v) || m.cols() != source.dim(v) {
                return Err(Error::DimensionMismatch(format!(
                    "vertex {v} needs a {}x{} matrix, got {}x{}",
                    target.dim(v),
                    source.dim(v),
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let map = Self::from_parts(source, target, maps);
        if !map.is_homomorphism() {
            return Err(Error::InvalidParameters("matrices do not commute with the arrow maps".into()));
        }
        Ok(map)
    }

    pub(crate) fn from_parts(source: Module<F>, target: Module<F>, maps: Vec<Matrix<F>>) -> Self {
        debug_assert_eq!(maps.len(), source.num_vertices());
        ModuleMap { source, target, maps }
    }

    /// Rebuilds a map from its concatenated row-major entries.
    pub fn from_flat(source: &Module<F>, target: &Module<F>, data: &[F::Elem]) -> Self {
        let f = source.field();
        let mut pos = 0;
        let maps = (0..source.num_vertices())
            .map(|v| {
                let (r, c) = (target.dim(v), source.dim(v));
                let m = Matrix::from_vec(f, r, c, data[pos..pos + r * c].to_vec()).unwrap();
                pos += r * c;
                m
            })
            .collect();
        Self::from_parts(source.clone(), target.clone(), maps)
    }

    pub fn zero(source: &Module<F>, target: &Module<F>) -> Self {
        let f = source.field();
        let maps = (0..source.num_vertices()).map(|v| Matrix::zeros(f, target.dim(v), source.dim(v))).collect();
        Self::from_parts(source.clone(), target.clone(), maps)
    }

    pub fn source(&self) -> &Module<F> {
        &self.source
    }
    pub fn target(&self) -> &Module<F> {
        &self.target
    }
    pub fn vertex_map(&self, v: usize) -> &Matrix<F> {
        &self.maps[v]
    }
    pub fn vertex_maps(&self) -> &[Matrix<F>] {
        &self.maps
    }
    pub fn field(&self) -> F {
        self.source.field()
    }

    pub fn is_homomorphism(&self) -> bool {
        let alg = self.source.algebra();
        alg.arrows().iter().enumerate().all(|(ai, a)| {
            self.target.arrow_map(ai).mul(&self.maps[a.source]) == self.maps[a.target].mul(self.source.arrow_map(ai))
        })
    }

    pub fn flatten(&self) -> Vec<F::Elem> {
        self.maps.iter().flat_map(|m| m.entries().iter().cloned()).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert!(other.target == self.source, "composing maps with mismatched modules");
        let maps = self.maps.iter().zip(&other.maps).map(|(a, b)| a.mul(b)).collect();
        Self::from_parts(other.source.clone(), self.target.clone(), maps)
    }

    pub fn add(&self, other: &Self) -> Self {
        let maps = self.maps.iter().zip(&other.maps).map(|(a, b)| a.add(b)).collect();
        Self::from_parts(self.source.clone(), self.target.clone(), maps)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let maps = self.maps.iter().zip(&other.maps).map(|(a, b)| a.sub(b)).collect();
        Self::from_parts(self.source.clone(), self.target.clone(), maps)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let maps = self.maps.iter().map(|a| a.scale(c)).collect();
        Self::from_parts(self.source.clone(), self.target.clone(), maps)
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(|m| m.is_zero())
    }

    pub fn rank(&self) -> usize {
        self.maps.iter().map(|m| m.rank()).sum()
    }

    pub fn is_mono(&self) -> bool {
        self.rank() == self.source.total_dim()
    }

    pub fn is_epi(&self) -> bool {
        self.rank() == self.target.total_dim()
    }

    pub fn is_iso(&self) -> bool {
        self.source.dims() == self.target.dims() && self.is_mono()
    }

    pub fn inverse(&self) -> Result<Self> {
        let maps = self.maps.iter().map(|m| m.inverse().ok_or(Error::NotInvertible)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_parts(self.target.clone(), self.source.clone(), maps))
    }

    /// The same matrices between equal copies of the source and target.
    pub fn retarget(&self, source: &Module<F>, target: &Module<F>) -> Self {
        assert!(source.dims() == self.source.dims() && target.dims() == self.target.dims());
        Self::from_parts(source.clone(), target.clone(), self.maps.clone())
    }

    /// Dual map `D(target) → D(source)` over the opposite algebra.
    pub fn dual(&self) -> Self {
        let maps = self.maps.iter().map(|m| m.transpose()).collect();
        Self::from_parts(self.target.dual(), self.source.dual(), maps)
    }

    /// Inclusion of the kernel.
    pub fn kernel(&self) -> Self {
        let bases = self.maps.iter().map(|m| m.kernel_basis()).collect();
        submodule_unchecked(&self.source, bases)
    }

    /// Inclusion of the image into the target.
    pub fn image(&self) -> Self {
        let bases = self.maps.iter().map(|m| m.image_basis()).collect();
        submodule_unchecked(&self.target, bases)
    }

    /// Projection of the target onto the cokernel.
    pub fn cokernel(&self) -> Self {
        quotient(&self.image())
    }

    /// Factors `self` through a monomorphism `mono` with the same target.
    pub fn lift_through_mono(&self, mono: &Self) -> Result<Self> {
        let maps = self
            .maps
            .iter()
            .zip(&mono.maps)
            .map(|(f, m)| {
                m.solve_matrix(f)?.ok_or_else(|| Error::NoSolution("map does not factor through the monomorphism".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_parts(self.source.clone(), mono.source.clone(), maps))
    }

    /// Factors `self` through an epimorphism `epi` with the same source: `g ∘ epi = self`.
    pub fn descend_through_epi(&self, epi: &Self) -> Result<Self> {
        let maps = self
            .maps
            .iter()
            .zip(&epi.maps)
            .map(|(f, e)| {
                let g = e
                    .transpose()
                    .solve_matrix(&f.transpose())?
                    .ok_or_else(|| Error::NoSolution("map does not vanish on the kernel".into()))?;
                Ok(g.transpose())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_parts(epi.target.clone(), self.target.clone(), maps))
    }
}

/// Inclusion of the submodule with the given per-vertex bases (independent
/// columns, closed under the arrows).
pub fn submodule<F: Field>(m: &Module<F>, bases: Vec<Matrix<F>>) -> Result<ModuleMap<F>> {
    for (v, b) in bases.iter().enumerate() {
        if b.rows() != m.dim(v) {
            return Err(Error::DimensionMismatch("basis vectors have the wrong length".into()));
        }
        if b.rank() != b.cols() {
            return Err(Error::DependentColumns);
        }
    }
    let alg = m.algebra();
    let mut maps = Vec::with_capacity(alg.arrows().len());
    for (ai, a) in alg.arrows().iter().enumerate() {
        let img = m.arrow_map(ai).mul(&bases[a.source]);
        let x = bases[a.target]
            .solve_matrix(&img)?
            .ok_or_else(|| Error::InvalidParameters("subspace is not closed under the arrows".into()))?;
        maps.push(x);
    }
    let dims = bases.iter().map(|b| b.cols()).collect();
    let sub = Module::from_parts(alg.clone(), dims, maps);
    Ok(ModuleMap::from_parts(sub, m.clone(), bases))
}

pub(crate) fn submodule_unchecked<F: Field>(m: &Module<F>, bases: Vec<Matrix<F>>) -> ModuleMap<F> {
    submodule(m, bases).expect("subspace family is a submodule")
}

/// Inclusion of the smallest submodule containing the given columns.
pub fn generated_submodule<F: Field>(m: &Module<F>, gens: &[Matrix<F>]) -> ModuleMap<F> {
    let alg = m.algebra();
    let f = m.field();
    let mut spans: Vec<Matrix<F>> = (0..m.num_vertices())
        .map(|v| match gens.get(v) {
            Some(g) if g.cols() > 0 => g.image_basis(),
            _ => Matrix::zeros(f, m.dim(v), 0),
        })
        .collect();
    loop {
        let mut changed = false;
        for (ai, a) in alg.arrows().iter().enumerate() {
            if spans[a.source].cols() == 0 {
                continue;
            }
            let img = m.arrow_map(ai).mul(&spans[a.source]);
            if !column_space_contains(&spans[a.target], &img) {
                spans[a.target] = spans[a.target].hstack(&img).image_basis();
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    submodule_unchecked(m, spans)
}

/// Projection onto `target / image(inclusion)`; `inclusion` must be a monomorphism.
pub fn quotient<F: Field>(inclusion: &ModuleMap<F>) -> ModuleMap<F> {
    let m = inclusion.target();
    let alg = m.algebra();
    let mut qs = Vec::new();
    let mut ss = Vec::new();
    for v in 0..m.num_vertices() {
        let (q, s) = quotient_map(m.dim(v), inclusion.vertex_map(v)).expect("inclusion is injective");
        qs.push(q);
        ss.push(s);
    }
    let maps = alg.arrows().iter().enumerate().map(|(ai, a)| qs[a.target].mul(m.arrow_map(ai)).mul(&ss[a.source])).collect();
    let dims = qs.iter().map(|q| q.rows()).collect();
    let quot = Module::from_parts(alg.clone(), dims, maps);
    ModuleMap::from_parts(m.clone(), quot, qs)
}

/// Inclusion of the sum of two submodules of a common module.
pub fn submodule_sum<F: Field>(a: &ModuleMap<F>, b: &ModuleMap<F>) -> ModuleMap<F> {
    let bases = (0..a.target().num_vertices()).map(|v| a.vertex_map(v).hstack(b.vertex_map(v)).image_basis()).collect();
    submodule_unchecked(a.target(), bases)
}

/// Inclusion of the intersection of two submodules of a common module.
pub fn submodule_intersection<F: Field>(a: &ModuleMap<F>, b: &ModuleMap<F>) -> ModuleMap<F> {
    let bases =
        (0..a.target().num_vertices()).map(|v| subspace_intersection(a.vertex_map(v), b.vertex_map(v)).unwrap()).collect();
    submodule_unchecked(a.target(), bases)
}

/// True if the image of `a` is contained in the image of `b` (same target).
pub fn image_contained<F: Field>(a: &ModuleMap<F>, b: &ModuleMap<F>) -> bool {
    (0..a.target().num_vertices()).all(|v| column_space_contains(b.vertex_map(v), a.vertex_map(v)))
}

/// A direct sum with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum<F: Field> {
    pub module: Module<F>,
    pub inclusions: Vec<ModuleMap<F>>,
    pub projections: Vec<ModuleMap<F>>,
}

pub fn direct_sum<F: Field>(algebra: &Arc<QuiverAlgebra<F>>, parts: &[Module<F>]) -> DirectSum<F> {
    let f = algebra.field();
    let nv = algebra.num_vertices();
    let dims: Vec<usize> = (0..nv).map(|v| parts.iter().map(|p| p.dim(v)).sum()).collect();
    let maps = (0..algebra.arrows().len())
        .map(|ai| parts.iter().fold(Matrix::zeros(f, 0, 0), |acc, p| acc.block_diag(p.arrow_map(ai))))
        .collect();
    let module = Module::from_parts(algebra.clone(), dims.clone(), maps);
    let mut offsets = vec![0; nv];
    let mut inclusions = Vec::new();
    let mut projections = Vec::new();
    for p in parts {
        let mut inc = Vec::new();
        let mut proj = Vec::new();
        for v in 0..nv {
            let mut i = Matrix::zeros(f, dims[v], p.dim(v));
            let mut q = Matrix::zeros(f, p.dim(v), dims[v]);
            for k in 0..p.dim(v) {
                i.set(offsets[v] + k, k, f.one());
                q.set(k, offsets[v] + k, f.one());
            }
            offsets[v] += p.dim(v);
            inc.push(i);
            proj.push(q);
        }
        inclusions.push(ModuleMap::from_parts(p.clone(), module.clone(), inc));
        projections.push(ModuleMap::from_parts(module.clone(), p.clone(), proj));
    }
    DirectSum { module, inclusions, projections }
}

/// `⊕ f_i : ⊕ A_i → ⊕ B_i`.
pub fn direct_sum_map<F: Field>(maps: &[ModuleMap<F>], source: &DirectSum<F>, target: &DirectSum<F>) -> ModuleMap<F> {
    let mut acc = ModuleMap::zero(&source.module, &target.module);
    for (i, m) in maps.iter().enumerate() {
        acc = acc.add(&target.inclusions[i].compose(m).compose(&source.projections[i]));
    }
    acc
}

/// The map `⊕ A_i → B` given by the components `f_i: A_i → B`.
pub fn copair<F: Field>(maps: &[ModuleMap<F>], source: &DirectSum<F>, target: &Module<F>) -> ModuleMap<F> {
    let mut acc = ModuleMap::zero(&source.module, target);
    for (i, m) in maps.iter().enumerate() {
        acc = acc.add(&m.compose(&source.projections[i]));
    }
    acc
}

/// The map `A → ⊕ B_i` given by the components `f_i: A → B_i`.
pub fn pair<F: Field>(maps: &[ModuleMap<F>], source: &Module<F>, target: &DirectSum<F>) -> ModuleMap<F> {
    let mut acc = ModuleMap::zero(source, &target.module);
    for (i, m) in maps.iter().enumerate() {
        acc = acc.add(&target.inclusions[i].compose(m));
    }
    acc
}

/// Basis of `Hom(m, n)`: the null space of the intertwiner equations
/// `N_a f_s − f_t M_a = 0`, unknowns ordered vertex by vertex, row-major.
pub fn hom_basis<F: Field>(m: &Module<F>, n: &Module<F>) -> Vec<ModuleMap<F>> {
    let f = m.field();
    let alg = m.algebra();
    let nv = m.num_vertices();
    let mut off = vec![0; nv + 1];
    for v in 0..nv {
        off[v + 1] = off[v] + n.dim(v) * m.dim(v);
    }
    let unknowns = off[nv];
    if unknowns == 0 {
        return Vec::new();
    }
    let n_eq: usize = alg.arrows().iter().map(|a| n.dim(a.target) * m.dim(a.source)).sum();
    let mut sys = Matrix::zeros(f, n_eq, unknowns);
    let mut row = 0;
    for (ai, a) in alg.arrows().iter().enumerate() {
        let (s, t) = (a.source, a.target);
        let (ms, mt, nt, ns) = (m.dim(s), m.dim(t), n.dim(t), n.dim(s));
        let na = n.arrow_map(ai);
        let ma = m.arrow_map(ai);
        for i in 0..nt {
            for j in 0..ms {
                for k in 0..ns {
                    let c = na.get(i, k);
                    if !f.is_zero(c) {
                        let col = off[s] + k * ms + j;
                        let v = f.add(sys.get(row, col), c);
                        sys.set(row, col, v);
                    }
                }
                for k in 0..mt {
                    let c = ma.get(k, j);
                    if !f.is_zero(c) {
                        let col = off[t] + i * mt + k;
                        let v = f.sub(sys.get(row, col), c);
                        sys.set(row, col, v);
                    }
                }
                row += 1;
            }
        }
    }
    let k = sys.kernel_basis();
    (0..k.cols()).map(|c| ModuleMap::from_flat(m, n, &k.column(c))).collect()
}

pub fn hom_dim<F: Field>(m: &Module<F>, n: &Module<F>) -> usize {
    hom_basis(m, n).len()
}

/// `Σ c_i b_i`; the basis must be nonempty or `source`/`target` supplied via `zero`.
pub fn combine<F: Field>(basis: &[ModuleMap<F>], coeffs: &[F::Elem], zero: &ModuleMap<F>) -> ModuleMap<F> {
    let mut acc = zero.clone();
    for (b, c) in basis.iter().zip(coeffs) {
        if !zero.field().is_zero(c) {
            acc = acc.add(&b.scale(c));
        }
    }
    acc
}

/// Coefficients `c` with `Σ c_i images[i] = rhs`, free variables zero.
pub fn solve_combination<F: Field>(field: F, images: &[Vec<F::Elem>], rhs: &[F::Elem]) -> Option<Vec<F::Elem>> {
    if images.is_empty() {
        return rhs.iter().all(|x| field.is_zero(x)).then(Vec::new);
    }
    let cols: Vec<Vec<F::Elem>> = images.to_vec();
    let m = Matrix::from_columns(field, rhs.len(), &cols);
    m.solve(rhs).ok().flatten()
}

/// The element `Σ c_k candidates_k` whose image `Σ c_k images_k` equals `rhs`,
/// with free coefficients zero.
pub fn solve_in_span<F: Field>(
    candidates: &[ModuleMap<F>],
    images: &[ModuleMap<F>],
    rhs: &ModuleMap<F>,
    zero: &ModuleMap<F>,
) -> Option<ModuleMap<F>> {
    let cols: Vec<_> = images.iter().map(|m| m.flatten()).collect();
    let coeffs = solve_combination(zero.field(), &cols, &rhs.flatten())?;
    Some(combine(candidates, &coeffs, zero))
}

/// A homomorphism `g: along.target → t.target` with `g ∘ along = t`.
pub fn extend_along<F: Field>(t: &ModuleMap<F>, along: &ModuleMap<F>) -> Option<ModuleMap<F>> {
    let cands = hom_basis(along.target(), t.target());
    let images: Vec<_> = cands.iter().map(|g| g.compose(along)).collect();
    solve_in_span(&cands, &images, t, &ModuleMap::zero(along.target(), t.target()))
}

/// A homomorphism `g: t.source → along.source` with `along ∘ g = t`.
pub fn lift_along<F: Field>(t: &ModuleMap<F>, along: &ModuleMap<F>) -> Option<ModuleMap<F>> {
    let cands = hom_basis(t.source(), along.source());
    let images: Vec<_> = cands.iter().map(|g| along.compose(g)).collect();
    solve_in_span(&cands, &images, t, &ModuleMap::zero(t.source(), along.source()))
}

/// Every submodule of `m`, as inclusions, by closing the cyclic submodules
/// under sums. Finite fields only; `None` if there are more than `cap`.
pub fn all_submodules<F: Field>(m: &Module<F>, cap: usize) -> Option<Vec<ModuleMap<F>>> {
    let f = m.field();
    let elems = f.elements()?;
    let key = |inc: &ModuleMap<F>| -> Vec<Vec<F::Elem>> {
        inc.vertex_maps()
            .iter()
            .map(|b| {
                let (r, piv) = b.transpose().rref();
                r.entries()[..piv.len() * r.cols()].to_vec()
            })
            .collect()
    };
    let mut cyclic = Vec::new();
    for v in 0..m.num_vertices() {
        let d = m.dim(v);
        for lead in 0..d {
            let free = d - lead - 1;
            let count = elems.len().checked_pow(free as u32)?;
            if count > cap.saturating_mul(elems.len()) {
                return None;
            }
            for mut code in 0..count {
                let mut x = vec![f.zero(); d];
                x[lead] = f.one();
                for slot in x.iter_mut().skip(lead + 1) {
                    *slot = elems[code % elems.len()].clone();
                    code /= elems.len();
                }
                let mut gens: Vec<Matrix<F>> = m.dims().iter().map(|&n| Matrix::zeros(f, n, 0)).collect();
                gens[v] = Matrix::from_columns(f, d, &[x]);
                cyclic.push(generated_submodule(m, &gens));
            }
        }
    }
    let zero = submodule_unchecked(m, m.dims().iter().map(|&n| Matrix::zeros(f, n, 0)).collect());
    let mut seen = std::collections::HashSet::new();
    seen.insert(key(&zero));
    let mut out = vec![zero];
    let mut i = 0;
    while i < out.len() {
        for c in &cyclic {
            let s = submodule_sum(&out[i], c);
            if seen.insert(key(&s)) {
                if out.len() >= cap {
                    return None;
                }
                out.push(s);
            }
        }
        i += 1;
    }
    Some(out)
}

/// Dimension of the span of a family of maps.
pub fn span_rank<F: Field>(field: F, maps: &[ModuleMap<F>]) -> usize {
    if maps.is_empty() {
        return 0;
    }
    let cols: Vec<Vec<F::Elem>> = maps.iter().map(|m| m.flatten()).collect();
    let len = cols[0].len();
    if len == 0 {
        return 0;
    }
    Matrix::from_columns(field, len, &cols).rank()
}

/// A random element of the span of `basis`.
pub fn random_combination<F: Field, R: Rng + ?Sized>(basis: &[ModuleMap<F>], zero: &ModuleMap<F>, rng: &mut R) -> ModuleMap<F> {
    let f = zero.field();
    let coeffs: Vec<_> = basis.iter().map(|_| f.random(rng)).collect();
    combine(basis, &coeffs, zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn a2() -> Arc<QuiverAlgebra<PrimeField>> {
        QuiverAlgebra::linear_a(PrimeField::new(2).unwrap(), 2).unwrap()
    }

    #[test]
    fn projectives_of_a2() {
        let a = a2();
        let p1 = Module::projective(&a, 0).unwrap();
        assert_eq!(p1.dims(), &[1, 1]);
        assert_eq!(p1.arrow_map(0), &Matrix::identity(a.field(), 1));
        assert_eq!(Module::projective(&a, 1).unwrap().dims(), &[0, 1]);
    }

    #[test]
    fn injectives_of_a2() {
        let a = a2();
        let i2 = Module::injective(&a, 1).unwrap();
        assert_eq!(i2.dims(), &[1, 1]);
        assert!(Arc::ptr_eq(i2.algebra(), &a));
        assert_eq!(Module::injective(&a, 0).unwrap().dims(), &[1, 0]);
    }

    #[test]
    fn unknown_vertex() {
        assert!(matches!(Module::projective(&a2(), 5), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn hom_spaces() {
        let a = a2();
        let p1 = Module::projective(&a, 0).unwrap();
        let s = Module::simples(&a);
        assert_eq!(hom_dim(&p1, &p1), 1);
        assert_eq!(hom_dim(&s[1], &p1), 1);
        assert_eq!(hom_dim(&p1, &s[1]), 0);
        assert_eq!(hom_dim(&p1, &s[0]), 1);
        let ss = direct_sum(&a, &[s[0].clone(), s[0].clone()]).module;
        assert_eq!(hom_dim(&ss, &ss), 4);
    }

    #[test]
    fn kernel_image_cokernel() {
        let a = a2();
        let p1 = Module::projective(&a, 0).unwrap();
        let s1 = Module::simple(&a, 0).unwrap();
        let h = hom_basis(&p1, &s1);
        let k = h[0].kernel();
        assert_eq!(k.source().dims(), &[0, 1]);
        assert!(h[0].is_epi());
        assert!(h[0].cokernel().target().is_zero());
        let q = quotient(&k);
        assert_eq!(q.target().dims(), &[1, 0]);
    }

    #[test]
    fn dual_is_involutive() {
        let a = a2();
        let p1 = Module::projective(&a, 0).unwrap();
        assert_eq!(p1.dual().dual(), p1);
    }

    #[test]
    fn invalid_module_rejected() {
        let f = PrimeField::new(2).unwrap();
        let arrows = vec![crate::quiver::Arrow { name: "d".into(), source: 0, target: 0 }];
        let rel = crate::quiver::Relation { terms: vec![(1, vec![0, 0])] };
        let alg = QuiverAlgebra::new(f, vec!["q".into()], arrows, vec![rel]).unwrap();
        let bad = Module::new(alg.clone(), vec![1], vec![Matrix::identity(f, 1)]);
        assert!(bad.is_err());
        let ok = Module::new(alg, vec![2], vec![Matrix::from_i64_rows(f, &[&[0, 0], &[1, 0]])]);
        assert!(ok.is_ok());
    }

    #[test]
    fn submodule_lattices() {
        let a = a2();
        let p = Module::projective(&a, 0).unwrap();
        assert_eq!(all_submodules(&p, 100).unwrap().len(), 3);
        let k = QuiverAlgebra::ground_field(PrimeField::new(2).unwrap());
        let plane = Module::new(k, vec![2], vec![]).unwrap();
        assert_eq!(all_submodules(&plane, 100).unwrap().len(), 5);
        assert!(all_submodules(&plane, 3).is_none());
    }
}
