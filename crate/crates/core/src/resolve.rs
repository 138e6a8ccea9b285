//! Semiinjective and minimal semiinjective resolutions of diagrams: splitting
//! off the injective part, minimality, construction, comparison and retractions.

use crate::classic::{injective_envelope, is_injective, socle};
use crate::decomp::{indecomposables_with_retries, Decomposition, DEFAULT_RETRIES};
use crate::diagram::{Diagram, DiagramCategory, DiagramMap};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::module::{combine, copair, extend_along, hom_basis, image_contained, pair, solve_combination, DirectSum, ModuleMap};
use crate::shape::ShapeKind;

pub const DEFAULT_BOUND: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResolveOptions {
    pub seed: u64,
    /// Maximal number of coinduction steps for shapes other than the loop.
    pub bound: usize,
    pub retries: usize,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        ResolveOptions { seed: 0, bound: DEFAULT_BOUND, retries: DEFAULT_RETRIES }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Certificates {
    pub weak_equivalence: bool,
    pub semiinjective: bool,
    pub minimal: bool,
}

impl Certificates {
    pub fn all(&self) -> bool {
        self.weak_equivalence && self.semiinjective && self.minimal
    }
}

/// A weak equivalence `map: source → target` into a semiinjective object.
#[derive(Clone, Debug)]
pub struct Resolution<F: Field> {
    pub source: Diagram<F>,
    pub target: Diagram<F>,
    pub map: DiagramMap<F>,
    pub certified: Certificates,
}

impl<F: Field> Resolution<F> {
    /// Recomputes every certificate from scratch.
    pub fn recheck(&self, cat: &DiagramCategory<F>, opts: &ResolveOptions) -> Result<Certificates> {
        check_certificates(cat, &self.map, opts)
    }
}

fn check_certificates<F: Field>(cat: &DiagramCategory<F>, map: &DiagramMap<F>, opts: &ResolveOptions) -> Result<Certificates> {
    let weak_equivalence = map.is_homomorphism() && cat.is_weak_equivalence(map)?;
    let semiinjective = cat.is_semiinjective(map.target())?;
    let minimal = semiinjective && is_minimal_semiinjective_with(cat, map.target(), opts)?;
    Ok(Certificates { weak_equivalence, semiinjective, minimal })
}

/// Builds a resolution from its map, insisting that all certificates hold.
pub fn certify<F: Field>(cat: &DiagramCategory<F>, map: DiagramMap<F>, opts: &ResolveOptions) -> Result<Resolution<F>> {
    let certified = check_certificates(cat, &map, opts)?;
    if !certified.all() {
        return Err(Error::CertificateFailure(format!("resolution certificates failed: {certified:?}")));
    }
    Ok(Resolution { source: map.source().clone(), target: map.target().clone(), map, certified })
}

/// `i ≅ i′ ⊕ j′` with `j′` an injective object and `i′` minimal.
#[derive(Clone, Debug)]
pub struct InjectiveSplit<F: Field> {
    pub minimal: Diagram<F>,
    pub injective: Diagram<F>,
    /// `minimal ⊕ injective`.
    pub sum: DirectSum<F>,
    /// Isomorphism `i → minimal ⊕ injective`.
    pub iso: DiagramMap<F>,
    pub decomposition: Decomposition<F>,
    /// For each summand of the decomposition, whether it went to the injective part.
    pub exact_summands: Vec<bool>,
}

impl<F: Field> InjectiveSplit<F> {
    /// Projection `i → i′` along the injective part.
    pub fn projection(&self) -> DiagramMap<F> {
        self.sum.projections[0].compose(&self.iso)
    }
}

pub fn split_injective_part<F: Field>(
    cat: &DiagramCategory<F>,
    i: &Diagram<F>,
    opts: &ResolveOptions,
) -> Result<InjectiveSplit<F>> {
    if !cat.is_semiinjective(i)? {
        return Err(Error::NotSemiinjective);
    }
    let decomposition = indecomposables_with_retries(i, opts.seed, opts.retries)?;
    let mut exact_summands = Vec::new();
    for s in &decomposition.summands {
        let exact = cat.is_exact(&s.module)?;
        if exact && !is_injective(&s.module) {
            return Err(Error::CertificationFailure("an exact summand of a semiinjective object is not injective".into()));
        }
        exact_summands.push(exact);
    }
    let pick = |want: bool| -> (DirectSum<F>, Vec<ModuleMap<F>>) {
        let chosen: Vec<_> =
            decomposition.summands.iter().zip(&exact_summands).filter(|(_, &e)| e == want).map(|(s, _)| s).collect();
        let parts: Vec<_> = chosen.iter().map(|s| s.module.clone()).collect();
        let sum = cat.direct_sum(&parts);
        let projs = chosen.iter().map(|s| s.projection.clone()).collect();
        (sum, projs)
    };
    let (min_sum, min_projs) = pick(false);
    let (inj_sum, inj_projs) = pick(true);
    let sum = cat.direct_sum(&[min_sum.module.clone(), inj_sum.module.clone()]);
    let to_min = pair(&min_projs, i, &min_sum);
    let to_inj = pair(&inj_projs, i, &inj_sum);
    let iso = sum.inclusions[0].compose(&to_min).add(&sum.inclusions[1].compose(&to_inj));
    if !iso.is_iso() {
        return Err(Error::CertificationFailure("split_injective_part witness is not invertible".into()));
    }
    Ok(InjectiveSplit { minimal: min_sum.module, injective: inj_sum.module, sum, iso, decomposition, exact_summands })
}

pub fn is_minimal_semiinjective<F: Field>(cat: &DiagramCategory<F>, i: &Diagram<F>, seed: u64) -> Result<bool> {
    is_minimal_semiinjective_with(cat, i, &ResolveOptions { seed, ..Default::default() })
}

/// No indecomposable summand is exact. Loop-shape answers are cross-checked
/// against the socle criterion.
pub fn is_minimal_semiinjective_with<F: Field>(cat: &DiagramCategory<F>, i: &Diagram<F>, opts: &ResolveOptions) -> Result<bool> {
    if i.is_zero() {
        return Ok(true);
    }
    let verdict = if i.field().modulus().is_some() {
        split_injective_part(cat, i, opts)?.injective.is_zero()
    } else if cat.shape().kind() == ShapeKind::Loop {
        if !cat.is_semiinjective(i)? {
            return Err(Error::NotSemiinjective);
        }
        return socle_in_cycles(cat, i);
    } else {
        return Err(Error::RationalsUnsupported);
    };
    if cat.shape().kind() == ShapeKind::Loop && verdict != socle_in_cycles(cat, i)? {
        return Err(Error::CertificationFailure("socle criterion disagrees with the summand criterion".into()));
    }
    Ok(verdict)
}

/// Loop shape: `soc E(i) ⊆ ker ∂`, i.e. the cycles are essential.
pub fn socle_in_cycles<F: Field>(cat: &DiagramCategory<F>, i: &Diagram<F>) -> Result<bool> {
    if cat.shape().kind() != ShapeKind::Loop {
        return Err(Error::InvalidParameters("the socle criterion applies to the loop shape".into()));
    }
    cat.check(i)?;
    let d = cat.basis_action(i, loop_differential_index(cat));
    Ok(image_contained(&socle(d.source()), &d.kernel()))
}

pub(crate) fn loop_differential_index<F: Field>(cat: &DiagramCategory<F>) -> usize {
    let sq = cat.shape().algebra();
    sq.paths_between(0, 0).into_iter().find(|&b| sq.basis()[b].len() == 1).expect("loop arrow")
}

/// A weak equivalence `x → K` with `K` semiinjective, by coinduction into
/// injective objects followed by descent through counits.
pub fn semiinjective_replacement<F: Field>(cat: &DiagramCategory<F>, x: &Diagram<F>, bound: usize) -> Result<DiagramMap<F>> {
    cat.check(x)?;
    if !cat.base().is_acyclic() {
        return Err(Error::NonAcyclicBase);
    }
    let nq = cat.num_objects();
    // cosyzygy sequence 0 → X_j → C_j → X_{j+1} → 0
    let mut steps = Vec::new();
    let mut xj = x.clone();
    while !cat.is_semiinjective(&xj)? {
        if steps.len() >= bound {
            return Err(Error::ResolutionNotFound(bound));
        }
        let mut comps = Vec::new();
        let mut injectives = Vec::new();
        for q in 0..nq {
            let env = injective_envelope(&cat.evaluate(q, &xj));
            comps.push(cat.coadjoint_of(q, &env, &xj)?);
            injectives.push(env.target().clone());
        }
        let parts: Vec<_> = comps.iter().map(|c| c.target().clone()).collect();
        let c_sum = cat.direct_sum(&parts);
        let iota = pair(&comps, &xj, &c_sum);
        let pi = iota.cokernel();
        xj = pi.target().clone();
        steps.push((iota, pi, c_sum, injectives));
    }
    let mut phi = xj.identity();
    for (iota, pi, c_sum, injectives) in steps.into_iter().rev() {
        let k = phi.target().clone();
        let t = phi.compose(&pi);
        // P = ⊕_p F_p E_p K ↠ K
        let fe: Vec<_> = (0..nq).map(|p| cat.functor_f(p, &cat.evaluate(p, &k))).collect::<Result<_>>()?;
        let p_sum = cat.direct_sum(&fe);
        let counits: Vec<_> = (0..nq).map(|p| cat.counit(p, &k)).collect::<Result<_>>()?;
        let eps = copair(&counits, &p_sum, &k);
        let kappa = eps.kernel();
        // lift t: C → K along eps, summand by summand, through F_{p} ≅ G_{Sp}
        let mut psi_parts = Vec::new();
        for (q, inj) in injectives.iter().enumerate() {
            let p = (0..nq).find(|&p| cat.shape().serre(p) == q).expect("Serre functor is a permutation");
            let sigma = cat.serre_iso(p, inj)?;
            let tq = t.compose(&c_sum.inclusions[q]).compose(&sigma);
            let nu = cat.evaluate_map(p, &tq).compose(&cat.unit_copy(p, inj)?);
            let section = cat.evaluate_map(p, &p_sum.inclusions[p]).compose(&cat.unit_copy(p, &cat.evaluate(p, &k))?);
            let mu = section.compose(&nu);
            let psi_q = cat.adjoint_of(p, &mu, &p_sum.module)?.compose(&sigma.inverse()?);
            psi_parts.push(psi_q);
        }
        let psi = copair(&psi_parts, &c_sum, &p_sum.module);
        if eps.compose(&psi) != t {
            return Err(Error::CertificationFailure("lift through the counit does not commute".into()));
        }
        phi = psi.compose(&iota).lift_through_mono(&kappa)?;
    }
    Ok(phi)
}

/// Minimal semiinjective resolution. The loop shape over a hereditary base uses
/// the explicit differential-module construction; everything else uses
/// `semiinjective_replacement` and splits off the injective part.
pub fn resolve_min<F: Field>(cat: &DiagramCategory<F>, x: &Diagram<F>, opts: &ResolveOptions) -> Result<Resolution<F>> {
    cat.check(x)?;
    if !cat.base().is_acyclic() {
        return Err(Error::NonAcyclicBase);
    }
    if cat.shape().kind() == ShapeKind::Loop && cat.base().is_hereditary() {
        return crate::diffmod::resolve_min_loop(cat, x, opts);
    }
    resolve_min_by_replacement(cat, x, opts)
}

/// The general construction for every shape: a semiinjective replacement
/// followed by splitting off the injective part.
pub fn resolve_min_by_replacement<F: Field>(
    cat: &DiagramCategory<F>,
    x: &Diagram<F>,
    opts: &ResolveOptions,
) -> Result<Resolution<F>> {
    cat.check(x)?;
    let phi = semiinjective_replacement(cat, x, opts.bound)?;
    let split = split_injective_part(cat, phi.target(), opts)?;
    let map = split.projection().compose(&phi);
    certify(cat, map, opts)
}

/// The witness `i ∘ r.map − r′.map = homotopy ∘ envelope`.
#[derive(Clone, Debug)]
pub struct Comparison<F: Field> {
    pub iso: DiagramMap<F>,
    pub homotopy: DiagramMap<F>,
    pub envelope: DiagramMap<F>,
}

impl<F: Field> Comparison<F> {
    pub fn verify(&self, r: &Resolution<F>, r2: &Resolution<F>) -> bool {
        self.iso.is_homomorphism()
            && self.iso.is_iso()
            && self.iso.compose(&r.map).sub(&r2.map) == self.homotopy.compose(&self.envelope)
    }
}

/// The comparison map between two resolutions of one source, found by solving
/// `i ∘ x − h ∘ ι = x′` for `i ∈ Hom(I, I′)` and `h ∈ Hom(E(source), I′)`.
pub fn comparison_iso<F: Field>(r: &Resolution<F>, r2: &Resolution<F>) -> Result<Comparison<F>> {
    if r.source != r2.source {
        return Err(Error::Precondition("resolutions have different sources".into()));
    }
    let envelope = injective_envelope(&r.source);
    let i_basis = hom_basis(&r.target, &r2.target);
    let h_basis = hom_basis(envelope.target(), &r2.target);
    let n_i = i_basis.len();
    let mut images: Vec<_> = i_basis.iter().map(|b| b.compose(&r.map)).collect();
    images.extend(h_basis.iter().map(|h| h.compose(&envelope).scale(&r.source.field().neg(&r.source.field().one()))));
    let cols: Vec<_> = images.iter().map(|m| m.flatten()).collect();
    let coeffs = solve_combination(r.source.field(), &cols, &r2.map.flatten())
        .ok_or_else(|| Error::NoSolution("no comparison map between the resolutions".into()))?;
    let iso = combine(&i_basis, &coeffs[..n_i], &ModuleMap::zero(&r.target, &r2.target));
    let homotopy = combine(&h_basis, &coeffs[n_i..], &ModuleMap::zero(envelope.target(), &r2.target));
    if !iso.is_iso() {
        return Err(Error::NotInvertible);
    }
    let c = Comparison { iso, homotopy, envelope };
    if !c.verify(r, r2) {
        return Err(Error::CertificationFailure("comparison witness does not verify".into()));
    }
    Ok(c)
}

/// A retraction `g` with `g ∘ f = id` for a weak equivalence `f` out of a
/// minimal semiinjective object.
pub fn check_weq_splits<F: Field>(cat: &DiagramCategory<F>, f: &DiagramMap<F>, opts: &ResolveOptions) -> Result<DiagramMap<F>> {
    let i = f.source();
    if !cat.is_semiinjective(i)? || !is_minimal_semiinjective_with(cat, i, opts)? {
        return Err(Error::Precondition("source is not minimal semiinjective".into()));
    }
    if !cat.is_weak_equivalence(f)? {
        return Err(Error::Precondition("map is not a weak equivalence".into()));
    }
    extend_along(&i.identity(), f).ok_or(Error::NoRetraction)
}

/// `Hom_{D_Q(A)}(x, y) ≅ Hom(x, I)/∼` for a minimal resolution `y → I`.
#[derive(Clone, Debug)]
pub struct DerivedHom<F: Field> {
    pub dim: usize,
    pub representatives: Vec<DiagramMap<F>>,
    pub resolution: Resolution<F>,
}

pub fn hom_in_derived<F: Field>(
    cat: &DiagramCategory<F>,
    x: &Diagram<F>,
    y: &Diagram<F>,
    opts: &ResolveOptions,
) -> Result<DerivedHom<F>> {
    if !cat.base().is_hereditary() {
        return Err(Error::NonHereditaryBase);
    }
    cat.check(x)?;
    let resolution = resolve_min(cat, y, opts)?;
    let h = cat.hom_mod_injectives(x, &resolution.target)?;
    Ok(DerivedHom { dim: h.dim, representatives: h.representatives, resolution })
}
