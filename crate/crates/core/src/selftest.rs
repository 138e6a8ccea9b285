//! Seeded property suites. Each suite draws random instances, runs the
//! library operations on them and re-checks the results through independent
//! code paths (classical `Ext`, Krull–Schmidt matching, exhaustive submodule
//! enumeration). Used by the `selftest` command and the acceptance tests.

use std::cell::Cell;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::classic::{ext_dim, injective_envelope, is_essential, is_injective, socle};
use crate::decomp::{indecomposables, is_isomorphic, IsoVerdict};
use crate::diagram::{Diagram, DiagramCategory};
use crate::diffmod::{bzh, eta_embedding, loop_category, map_to_diagram, resolve_min_diff, rz_h, rz_k, DifferentialModule};
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::matrix::Matrix;
use crate::module::{
    all_submodules, direct_sum, generated_submodule, hom_dim, image_contained, pair, quotient, submodule_intersection, Module,
    ModuleMap,
};
use crate::quiver::{Arrow, QuiverAlgebra, Relation};
use crate::random::{
    hereditary_algebras, random_differential_module, random_hom, random_module, random_quotient_of_projectives,
    random_semiinjective, random_submodule_of_injectives, rng, stalk_diagram,
};
use crate::resolve::{
    certify, check_weq_splits, comparison_iso, hom_in_derived, is_minimal_semiinjective, resolve_min, resolve_min_by_replacement,
    socle_in_cycles, split_injective_part, Resolution, ResolveOptions,
};
use crate::shape::{ShapeCategory, ShapeKind};

/// Largest `E_q I` searched exhaustively for violating submodules.
const SEARCH_DIM: usize = 7;
const SEARCH_CAP: usize = 4000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Tiny,
    Small,
    Full,
}

impl Scale {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "tiny" => Ok(Scale::Tiny),
            "small" => Ok(Scale::Small),
            "full" => Ok(Scale::Full),
            _ => Err(Error::Parse(format!("unknown scale {s:?}; expected tiny, small or full"))),
        }
    }

    /// Instance count for a suite whose full size is `full`.
    pub fn count(self, full: usize) -> usize {
        match self {
            Scale::Tiny => (full / 25).max(2),
            Scale::Small => (full / 5).max(4),
            Scale::Full => full,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub name: &'static str,
    pub instances: usize,
    /// Instances where the checked property was not vacuous.
    pub nontrivial: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
    /// Per-group `(name, nontrivial, instances)` for suites with several properties.
    pub groups: Vec<(&'static str, usize, usize)>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} instances, {} nontrivial, {} failures, {:.2}s",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.instances,
            self.nontrivial,
            self.failures.len(),
            self.elapsed.as_secs_f64()
        )?;
        if !self.groups.is_empty() {
            let parts: Vec<_> = self.groups.iter().map(|(g, k, n)| format!("{g} {k}/{n}")).collect();
            write!(f, " [{}]", parts.join(", "))?;
        }
        for msg in self.failures.iter().take(5) {
            write!(f, "\n    {msg}")?;
        }
        Ok(())
    }
}

type Check = std::result::Result<bool, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

trait OrFail<T> {
    fn or_fail(self) -> std::result::Result<T, String>;
}

impl<T> OrFail<T> for Result<T> {
    fn or_fail(self) -> std::result::Result<T, String> {
        self.map_err(|e| format!("{}: {e}", e.name()))
    }
}

struct Tally {
    name: &'static str,
    start: Instant,
    instances: usize,
    nontrivial: usize,
    failures: Vec<String>,
    groups: Vec<(&'static str, usize, usize)>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, start: Instant::now(), instances: 0, nontrivial: 0, failures: Vec::new(), groups: Vec::new() }
    }

    fn group(&mut self, name: &'static str) {
        self.groups.push((name, 0, 0));
    }

    fn record(&mut self, label: impl fmt::Display, outcome: Check) {
        self.instances += 1;
        if let Some(g) = self.groups.last_mut() {
            g.2 += 1;
            if matches!(outcome, Ok(true)) {
                g.1 += 1;
            }
        }
        match outcome {
            Ok(true) => self.nontrivial += 1,
            Ok(false) => {}
            Err(msg) => self.failures.push(format!("{label}: {msg}")),
        }
    }

    fn finish(self) -> Outcome {
        Outcome {
            name: self.name,
            instances: self.instances,
            nontrivial: self.nontrivial,
            failures: self.failures,
            elapsed: self.start.elapsed(),
            groups: self.groups,
        }
    }
}

fn gf(p: u64) -> PrimeField {
    PrimeField::new(p).expect("small prime")
}

fn instance_rng(seed: u64, suite: u64, tag: u64, i: usize) -> ChaCha8Rng {
    rng(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (suite << 48) ^ (tag << 32) ^ i as u64)
}

/// `1 → 2 → 3` with the composite arrow path set to zero.
pub fn radical_square_zero_a3<F: Field>(field: F) -> Arc<QuiverAlgebra<F>> {
    let arrows = vec![Arrow { name: "a".into(), source: 0, target: 1 }, Arrow { name: "b".into(), source: 1, target: 2 }];
    let rel = Relation { terms: vec![(field.one(), vec![0, 1])] };
    QuiverAlgebra::new(field, vec!["1".into(), "2".into(), "3".into()], arrows, vec![rel]).expect("valid presentation")
}

fn shape_by_name(f: PrimeField, name: &str) -> Arc<ShapeCategory<PrimeField>> {
    match name {
        "loop" => ShapeCategory::shape_loop(f),
        "cyclic(2,2)" => ShapeCategory::shape_cyclic(f, 2, 2).expect("valid shape"),
        "cyclic(3,2)" => ShapeCategory::shape_cyclic(f, 3, 2).expect("valid shape"),
        "cyclic(3,3)" => ShapeCategory::shape_cyclic(f, 3, 3).expect("valid shape"),
        "cyclic(4,3)" => ShapeCategory::shape_cyclic(f, 4, 3).expect("valid shape"),
        _ => unreachable!("unknown shape {name}"),
    }
}

fn small_base(f: PrimeField, i: usize) -> Arc<QuiverAlgebra<PrimeField>> {
    if i.is_multiple_of(2) {
        QuiverAlgebra::ground_field(f)
    } else {
        QuiverAlgebra::linear_a(f, 2).expect("valid quiver")
    }
}

fn iso_witness<F: Field>(m: &Module<F>, n: &Module<F>, seed: u64) -> std::result::Result<ModuleMap<F>, String> {
    match is_isomorphic(m, n, seed).or_fail()? {
        IsoVerdict::Isomorphic(w) => {
            ensure!(w.source() == m && w.target() == n, "witness has the wrong endpoints");
            ensure!(w.is_homomorphism() && w.is_iso(), "witness is not an isomorphism");
            Ok(w)
        }
        IsoVerdict::NotIsomorphic(r) => Err(format!("not isomorphic ({r:?}), dims {:?} vs {:?}", m.dims(), n.dims())),
    }
}

fn random_exact<R: Rng>(cat: &DiagramCategory<PrimeField>, max_dim: usize, rng: &mut R) -> Result<Diagram<PrimeField>> {
    let mut parts = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let q = rng.gen_range(0..cat.num_objects());
        let m = random_module(cat.base(), (max_dim / 4).max(1), rng);
        parts.push(if rng.gen_bool(0.5) { cat.functor_f(q, &m)? } else { cat.functor_g(q, &m)? });
    }
    Ok(cat.direct_sum(&parts).module.random_base_change(rng).0)
}

/// Total-dimension-≤20 differential modules over three path algebras and two
/// fields; every minimal resolution is re-certified.
pub fn resolution_existence(n: usize, seed: u64) -> Outcome {
    let mut t = Tally::new("resolution-existence");
    for p in [2, 5] {
        for (k, (name, a)) in hereditary_algebras(gf(p)).into_iter().enumerate() {
            let cat = loop_category(&a);
            for i in 0..n {
                let mut r = instance_rng(seed, 1, p * 8 + k as u64, i);
                let outcome = (|| -> Check {
                    let d = random_differential_module(&a, 20, &mut r);
                    ensure!(d.total_dim() <= 20, "generator exceeded the dimension bound");
                    let res = resolve_min_diff(&d).or_fail()?;
                    ensure!(res.certificates.all(), "certificates {:?}", res.certificates);
                    let j = &res.target;
                    ensure!(d.is_morphism_to(j, &res.map), "map does not commute with the differentials");
                    let fx = map_to_diagram(&cat, &res.map, &d, j).or_fail()?;
                    ensure!(cat.is_weak_equivalence(&fx).or_fail()?, "not a quasi-isomorphism");
                    ensure!(is_injective(j.underlying()), "target is not termwise injective");
                    ensure!(image_contained(&socle(j.underlying()), &j.differential().kernel()), "socle is not in the cycles");
                    let opts = ResolveOptions { seed: seed ^ 0x5eed, ..Default::default() };
                    let split = split_injective_part(&cat, fx.target(), &opts).or_fail()?;
                    ensure!(split.injective.is_zero(), "target has an exact summand");
                    Ok(!j.underlying().is_zero())
                })();
                t.record(format!("F{p} {name} #{i}"), outcome);
            }
        }
    }
    t.finish()
}

/// Random semiinjective diagrams on the loop and `cyclic(3,2)` shapes split as
/// minimal ⊕ injective with a verified witness.
pub fn injective_splitting(n: usize, seed: u64) -> Outcome {
    let mut t = Tally::new("injective-splitting");
    for p in [2, 3] {
        let f = gf(p);
        for (si, shape) in ["loop", "cyclic(3,2)"].into_iter().enumerate() {
            for i in 0..n {
                let cat = DiagramCategory::new(shape_by_name(f, shape), small_base(f, i)).expect("same field");
                let mut r = instance_rng(seed, 2, p * 8 + si as u64, i);
                let outcome = (|| -> Check {
                    let x = random_semiinjective(&cat, 24, 3, &mut r).or_fail()?;
                    let opts = ResolveOptions { seed: r.gen(), ..Default::default() };
                    let sp = split_injective_part(&cat, &x, &opts).or_fail()?;
                    ensure!(
                        sp.iso.source() == &x && sp.iso.is_homomorphism() && sp.iso.is_iso(),
                        "witness is not an isomorphism"
                    );
                    ensure!(sp.iso.inverse().or_fail()?.compose(&sp.iso) == x.identity(), "witness inverse fails");
                    ensure!(cat.is_exact(&sp.injective).or_fail()?, "injective part is not exact");
                    ensure!(cat.is_injective_object(&sp.injective).or_fail()?, "injective part is not an injective object");
                    ensure!(cat.is_semiinjective(&sp.minimal).or_fail()?, "minimal part is not semiinjective");
                    let again = indecomposables(&sp.minimal, opts.seed.wrapping_add(1)).or_fail()?;
                    for s in &again.summands {
                        ensure!(!cat.is_exact(&s.module).or_fail()?, "minimal part has an exact summand");
                    }
                    if cat.shape().kind() == ShapeKind::Loop {
                        ensure!(socle_in_cycles(&cat, &sp.minimal).or_fail()?, "socle criterion rejects the minimal part");
                    }
                    Ok(!sp.minimal.is_zero() && !sp.injective.is_zero())
                })();
                t.record(format!("F{p} {shape} #{i}"), outcome);
            }
        }
    }
    t.finish()
}

/// Transports a resolution along a random change of basis of its target.
fn rebased<R: Rng>(
    cat: &DiagramCategory<PrimeField>,
    r: &Resolution<PrimeField>,
    opts: &ResolveOptions,
    rng: &mut R,
) -> Result<Resolution<PrimeField>> {
    let (_, beta) = r.target.random_base_change(rng);
    certify(cat, beta.compose(&r.map), opts)
}

/// Pairs of independently built minimal resolutions are related by an
/// invertible comparison map with an explicit homotopy witness.
pub fn comparison_uniqueness(n: usize, seed: u64) -> Outcome {
    let mut t = Tally::new("comparison-uniqueness");
    for i in 0..n {
        let mut r = instance_rng(seed, 3, 0, i);
        let f = gf(if i % 4 < 2 { 2 } else { 3 });
        let outcome = (|| -> Check {
            let (cat, x) = if i % 2 == 0 {
                let algs = hereditary_algebras(f);
                let a = algs[(i / 2) % 2].1.clone();
                let cat = loop_category(&a);
                let x = random_differential_module(&a, 10, &mut r).to_diagram(&cat).or_fail()?;
                (cat, x)
            } else {
                let cat = DiagramCategory::new(shape_by_name(f, "cyclic(3,2)"), small_base(f, i / 2)).expect("same field");
                let q = r.gen_range(0..3);
                let m = random_module(cat.base(), 3, &mut r);
                (cat.clone(), stalk_diagram(&cat, q, &m).or_fail()?)
            };
            let o1 = ResolveOptions { seed: r.gen(), ..Default::default() };
            let o2 = ResolveOptions { seed: r.gen(), ..Default::default() };
            let r1 = resolve_min(&cat, &x, &o1).or_fail()?;
            let r2 = rebased(&cat, &resolve_min_by_replacement(&cat, &x, &o2).or_fail()?, &o2, &mut r).or_fail()?;
            let c = comparison_iso(&r1, &r2).or_fail()?;
            ensure!(c.iso.is_iso(), "comparison map is not invertible");
            ensure!(c.iso.compose(&r1.map).sub(&r2.map) == c.homotopy.compose(&c.envelope), "homotopy witness fails");
            ensure!(
                c.envelope.source() == &x && c.envelope.is_mono() && is_injective(c.envelope.target()),
                "witness envelope is wrong"
            );
            Ok(!r1.target.is_zero())
        })();
        t.record(format!("#{i}"), outcome);
    }
    t.finish()
}

/// `H ∘ K ≅ id` on random modules and `K ∘ H ≅ id` on random minimal
/// Gorenstein injective differential modules, with explicit witnesses.
pub fn ringel_zhang(n: usize, seed: u64) -> Outcome {
    let mut t = Tally::new("ringel-zhang");
    t.group("HK");
    for i in 0..n {
        let mut r = instance_rng(seed, 4, 0, i);
        let f = gf(if i % 2 == 0 { 2 } else { 3 });
        let a = hereditary_algebras(f)[i % 3].1.clone();
        let outcome = (|| -> Check {
            let m = random_module(&a, 8, &mut r);
            let j = rz_k(&m).or_fail()?;
            let h = rz_h(&j, r.gen()).or_fail()?;
            iso_witness(&h, &m, r.gen())?;
            Ok(!m.is_zero())
        })();
        t.record(format!("HK #{i}"), outcome);
    }
    t.group("KH");
    for i in 0..n {
        let mut r = instance_rng(seed, 4, 1, i);
        let f = gf(if i % 2 == 0 { 2 } else { 3 });
        let a = hereditary_algebras(f)[i % 3].1.clone();
        let cat = loop_category(&a);
        let outcome = (|| -> Check {
            let d = random_differential_module(&a, 12, &mut r);
            let j0 = resolve_min_diff(&d).or_fail()?.target.to_diagram(&cat).or_fail()?;
            let jx = j0.random_base_change(&mut r).0;
            let j = DifferentialModule::from_diagram(&cat, &jx).or_fail()?;
            let h = rz_h(&j, r.gen()).or_fail()?;
            let j2 = rz_k(&h).or_fail()?.to_diagram(&cat).or_fail()?;
            iso_witness(&jx, &j2, r.gen())?;
            Ok(!jx.is_zero())
        })();
        t.record(format!("KH #{i}"), outcome);
    }
    t.finish()
}

/// Morphisms in the derived category of stalk differential modules against
/// `Hom ⊕ Ext¹` computed from projective resolutions.
pub fn derived_hom(n: usize, seed: u64) -> Outcome {
    let mut t = Tally::new("derived-hom");
    for i in 0..n {
        let mut r = instance_rng(seed, 5, 0, i);
        let f = gf(if i % 2 == 0 { 2 } else { 3 });
        let a = hereditary_algebras(f)[i % 3].1.clone();
        let cat = loop_category(&a);
        let outcome = (|| -> Check {
            let (m, nn) = if i % 4 < 2 {
                (random_submodule_of_injectives(&a, 6, &mut r), random_quotient_of_projectives(&a, 6, &mut r))
            } else {
                (random_module(&a, 6, &mut r), random_module(&a, 6, &mut r))
            };
            let x = DifferentialModule::trivial(&m).to_diagram(&cat).or_fail()?;
            let y = DifferentialModule::trivial(&nn).to_diagram(&cat).or_fail()?;
            let opts = ResolveOptions { seed: r.gen(), ..Default::default() };
            let got = hom_in_derived(&cat, &x, &y, &opts).or_fail()?.dim;
            let ext1 = ext_dim(&m, &nn, 1);
            let want = hom_dim(&m, &nn) + ext1;
            ensure!(got == want, "derived Hom has dimension {got}, Hom + Ext¹ = {want}");
            Ok(ext1 > 0)
        })();
        t.record(format!("#{i}"), outcome);
    }
    t.finish()
}

/// Exhaustive check over the submodules `M ⊆ E_q I`: whether some nonzero `M`
/// has a monic adjoint `F_q M → I`, and whether the two formulations (monic
/// adjoint, `Im F_q μ ∩ Z_q I = 0`) agree on every submodule. `None` when the
/// search is too large.
fn violating_submodule(cat: &DiagramCategory<PrimeField>, i: &Diagram<PrimeField>) -> std::result::Result<Option<bool>, String> {
    let mut found = false;
    for q in 0..cat.num_objects() {
        let eq = cat.evaluate(q, i);
        if eq.total_dim() > SEARCH_DIM {
            return Ok(None);
        }
        let Some(subs) = all_submodules(&eq, SEARCH_CAP) else { return Ok(None) };
        let z = cat.counit_kernel(q, i).or_fail()?;
        for mu in subs.iter().filter(|s| !s.source().is_zero()) {
            let adjoint_mono = cat.adjoint_of(q, mu, i).or_fail()?.is_mono();
            let fmu = cat.functor_f_map(q, mu).or_fail()?;
            let img = fmu.image().retarget(fmu.image().source(), z.target());
            let meets = !submodule_intersection(&img, &z).source().is_zero();
            ensure!(adjoint_mono != meets, "monic adjoint and trivial intersection with Z_q disagree at q = {q}");
            found |= adjoint_mono;
        }
    }
    Ok(Some(found))
}

fn minimal_object<R: Rng>(
    i: usize,
    f: PrimeField,
    rng: &mut R,
) -> std::result::Result<(Arc<DiagramCategory<PrimeField>>, Diagram<PrimeField>), String> {
    if i.is_multiple_of(2) {
        let a = hereditary_algebras(f)[(i / 2) % 2].1.clone();
        let cat = loop_category(&a);
        loop {
            let d = random_differential_module(&a, 8, rng);
            let j = resolve_min_diff(&d).or_fail()?.target;
            if !j.underlying().is_zero() {
                return Ok((cat.clone(), j.to_diagram(&cat).or_fail()?));
            }
        }
    } else {
        let cat = DiagramCategory::new(shape_by_name(f, "cyclic(3,2)"), small_base(f, i / 2)).expect("same field");
        loop {
            let x = random_semiinjective(&cat, 12, 3, rng).or_fail()?;
            let opts = ResolveOptions { seed: rng.gen(), ..Default::default() };
            let sp = split_injective_part(&cat, &x, &opts).or_fail()?;
            if !sp.minimal.is_zero() {
                return Ok((cat, sp.minimal));
            }
        }
    }
}

/// Equivalent characterisations of minimality on certified-minimal objects,
/// with non-minimal controls obtained by adding an injective object.
pub fn minimality_equivalences(n: usize, seed: u64) -> Outcome {
    let mut t = Tally::new("minimality-equivalences");
    let (searched, controls, weq_endos) = (Cell::new(0), Cell::new(0), Cell::new(0));
    for i in 0..n {
        let mut r = instance_rng(seed, 6, 0, i);
        let f = gf(if i % 4 < 2 { 2 } else { 3 });
        let outcome = (|| -> Check {
            let (cat, obj) = minimal_object(i, f, &mut r)?;
            let opts = ResolveOptions { seed: r.gen(), ..Default::default() };
            ensure!(is_minimal_semiinjective(&cat, &obj, opts.seed).or_fail()?, "object is not certified minimal");
            let mut nontrivial = false;

            // weak equivalences out of the object split
            let e = random_exact(&cat, 8, &mut r).or_fail()?;
            let sum = cat.direct_sum(&[obj.clone(), e.clone()]);
            let w = pair(&[obj.identity(), random_hom(&obj, &e, &mut r)], &obj, &sum);
            let (_, beta) = sum.module.random_base_change(&mut r);
            let w = beta.compose(&w);
            ensure!(cat.is_weak_equivalence(&w).or_fail()?, "constructed map is not a weak equivalence");
            let g = check_weq_splits(&cat, &w, &opts).or_fail()?;
            ensure!(g.compose(&w) == obj.identity(), "retraction does not split the weak equivalence");

            // endomorphisms that are weak equivalences are automorphisms
            for _ in 0..6 {
                let end = random_hom(&obj, &obj, &mut r);
                if cat.is_weak_equivalence(&end).or_fail()? {
                    ensure!(end.is_iso(), "a weak-equivalence endomorphism is not invertible");
                    if end != obj.identity() {
                        nontrivial = true;
                        weq_endos.set(weq_endos.get() + 1);
                    }
                }
            }

            // exhaustive submodule search, and the same search on a non-minimal control
            if let Some(found) = violating_submodule(&cat, &obj)? {
                ensure!(!found, "a nonzero submodule of E_q I has a monic adjoint");
                nontrivial = true;
                searched.set(searched.get() + 1);
            }
            let q = r.gen_range(0..cat.num_objects());
            let inj = crate::classic::indecomposable_injectives(cat.base());
            let g_inj = cat.functor_g(q, &inj[r.gen_range(0..inj.len())]).or_fail()?;
            let control = cat.direct_sum(&[obj.clone(), g_inj]).module;
            ensure!(
                !is_minimal_semiinjective(&cat, &control, opts.seed).or_fail()?,
                "control with an injective summand passed as minimal"
            );
            if let Some(found) = violating_submodule(&cat, &control)? {
                ensure!(found, "no violating submodule found in a non-minimal control");
                controls.set(controls.get() + 1);
            }

            if cat.shape().kind() == ShapeKind::Loop {
                let summand = split_injective_part(&cat, &obj, &opts).or_fail()?.injective.is_zero();
                ensure!(socle_in_cycles(&cat, &obj).or_fail()? == summand, "socle criterion disagrees on the object");
                let summand = split_injective_part(&cat, &control, &opts).or_fail()?.injective.is_zero();
                ensure!(socle_in_cycles(&cat, &control).or_fail()? == summand, "socle criterion disagrees on the control");
            }
            Ok(nontrivial)
        })();
        t.record(format!("#{i}"), outcome);
    }
    t.groups.push(("searched", searched.get(), n));
    t.groups.push(("searched-controls", controls.get(), n));
    t.groups.push(("weq-endomorphisms", weq_endos.get(), 6 * n));
    t.finish()
}

fn lemma_category(i: usize) -> Arc<DiagramCategory<PrimeField>> {
    let f = gf(if i.is_multiple_of(2) { 2 } else { 3 });
    let shape = ["loop", "cyclic(2,2)", "cyclic(3,2)"][(i / 2) % 3];
    let base = if (i / 6).is_multiple_of(2) { QuiverAlgebra::linear_a(f, 2) } else { QuiverAlgebra::linear_a(f, 3) };
    DiagramCategory::new(shape_by_name(f, shape), base.expect("valid quiver")).expect("same field")
}

fn random_object<R: Rng>(cat: &DiagramCategory<PrimeField>, max_dim: usize, rng: &mut R) -> Result<Diagram<PrimeField>> {
    let mut parts = vec![random_module(cat.lambda(), max_dim / 2, rng)];
    let q = rng.gen_range(0..cat.num_objects());
    let m = random_module(cat.base(), (max_dim / 4).max(1), rng);
    parts.push(match rng.gen_range(0..3) {
        0 => stalk_diagram(cat, q, &m)?,
        1 => cat.functor_f(q, &m)?,
        _ => cat.functor_g(q, &m)?,
    });
    Ok(cat.direct_sum(&parts).module.random_base_change(rng).0)
}

fn random_cyclic_sub<R: Rng>(m: &Module<PrimeField>, rng: &mut R) -> ModuleMap<PrimeField> {
    let f = m.field();
    let live: Vec<usize> = (0..m.num_vertices()).filter(|&v| m.dim(v) > 0).collect();
    let mut gens: Vec<Matrix<PrimeField>> = m.dims().iter().map(|&d| Matrix::zeros(f, d, 0)).collect();
    if !live.is_empty() {
        let v = live[rng.gen_range(0..live.len())];
        gens[v] = Matrix::random(f, m.dim(v), 1, rng);
    }
    generated_submodule(m, &gens)
}

/// Brute force: every nonzero cyclic submodule of `u.target` meets the image of `u`.
fn meets_every_cyclic(u: &ModuleMap<PrimeField>) -> Option<bool> {
    let m = u.target();
    let subs = all_submodules(m, SEARCH_CAP)?;
    let img = u.image();
    Some(subs.iter().filter(|s| !s.source().is_zero()).all(|s| !submodule_intersection(s, &img).source().is_zero()))
}

/// The adjunction lemmas: short exact sequences and weak equivalences, sums of
/// monic adjoints, essential extensions under `F_q`, monic adjoints, and
/// exactness of the cokernel of an injective envelope of an exact object.
pub fn adjunction_lemmas(n: usize, seed: u64) -> Outcome {
    let mut t = Tally::new("adjunction-lemmas");
    t.group("ses");
    for i in 0..n {
        let cat = lemma_category(i);
        let mut r = instance_rng(seed, 7, 0, i);
        let outcome = (|| -> Check {
            let x = random_object(&cat, 12, &mut r).or_fail()?;
            let k = r.gen_range(1..=2);
            let mut sub = random_cyclic_sub(&x, &mut r);
            for _ in 1..k {
                sub = crate::module::submodule_sum(&sub, &random_cyclic_sub(&x, &mut r));
            }
            let proj = quotient(&sub);
            let left = cat.is_weak_equivalence(&sub).or_fail()?;
            let right = cat.is_weak_equivalence(&proj).or_fail()?;
            ensure!(left == cat.is_exact(proj.target()).or_fail()?, "X' → X weak equivalence iff X'' exact fails");
            ensure!(right == cat.is_exact(sub.source()).or_fail()?, "X → X'' weak equivalence iff X' exact fails");
            Ok(left || right)
        })();
        t.record(format!("ses #{i}"), outcome);
    }
    t.group("coproduct");
    for i in 0..n {
        let cat = lemma_category(i);
        let mut r = instance_rng(seed, 7, 1, i);
        let outcome = (|| -> Check {
            // X = ⊕_q F_q N_q ⊕ noise; M_q sits near the copy of N_q inside E_q X
            let nq = cat.num_objects();
            let ns: Vec<_> = (0..nq).map(|_| random_module(cat.base(), 3, &mut r)).collect();
            let mut parts: Vec<_> = (0..nq).map(|q| cat.functor_f(q, &ns[q])).collect::<Result<_>>().or_fail()?;
            parts.push(random_object(&cat, 6, &mut r).or_fail()?);
            let sum = cat.direct_sum(&parts);
            let x = sum.module.clone();
            let mut adjoints = Vec::new();
            for (q, nq_module) in ns.iter().enumerate() {
                let sub = random_cyclic_sub(nq_module, &mut r);
                let copy = cat.evaluate_map(q, &sum.inclusions[q]).compose(&cat.unit_copy(q, nq_module).or_fail()?).compose(&sub);
                let noisy = copy.add(&random_hom(sub.source(), copy.target(), &mut r));
                let mut phi = cat.adjoint_of(q, &noisy, &x).or_fail()?;
                if !phi.is_mono() {
                    phi = cat.adjoint_of(q, &copy, &x).or_fail()?;
                }
                ensure!(phi.is_mono(), "adjoint of the copy inclusion is not monic");
                adjoints.push(phi);
            }
            let parts: Vec<_> = adjoints.iter().map(|a| a.source().clone()).collect();
            let dsum = cat.direct_sum(&parts);
            let phi = crate::module::copair(&adjoints, &dsum, &x);
            ensure!(phi.is_mono(), "sum of monic adjoints is not monic");
            let live = adjoints.iter().filter(|a| !a.source().is_zero()).count();
            Ok(live >= nq.min(2))
        })();
        t.record(format!("coproduct #{i}"), outcome);
    }
    t.group("essential");
    for i in 0..n {
        let cat = lemma_category(i);
        let mut r = instance_rng(seed, 7, 2, i);
        let outcome = (|| -> Check {
            let nm = random_module(cat.base(), 4, &mut r);
            let m = match r.gen_range(0..3) {
                0 => injective_envelope(&nm),
                1 => socle(&nm),
                _ => crate::module::submodule_sum(&socle(&nm), &random_cyclic_sub(&nm, &mut r)),
            };
            ensure!(is_essential(&m).or_fail()?, "input extension is not essential");
            let q = r.gen_range(0..cat.num_objects());
            let fm = cat.functor_f_map(q, &m).or_fail()?;
            ensure!(fm.is_mono(), "F_q of a monomorphism is not monic");
            ensure!(is_essential(&fm).or_fail()?, "F_q of an essential extension fails the socle test");
            if fm.target().total_dim() <= 10 {
                ensure!(meets_every_cyclic(&fm) != Some(false), "F_q of an essential extension misses a submodule");
            }
            Ok(!m.is_iso())
        })();
        t.record(format!("essential #{i}"), outcome);
    }
    t.group("adjoint");
    for i in 0..n {
        let cat = lemma_category(i);
        let mut r = instance_rng(seed, 7, 3, i);
        let outcome = (|| -> Check {
            let q = r.gen_range(0..cat.num_objects());
            let m = random_module(cat.base(), 4, &mut r);
            let other = random_object(&cat, 8, &mut r).or_fail()?;
            let fm = cat.functor_f(q, &m).or_fail()?;
            let sum = cat.direct_sum(&[fm.clone(), other]);
            let x = sum.module.clone();
            // μ: M → E_q X near the copy of M inside E_q F_q M, plus noise
            let copy = cat.evaluate_map(q, &sum.inclusions[0]).compose(&cat.unit_copy(q, &m).or_fail()?);
            let noise = random_hom(&m, &cat.evaluate(q, &x), &mut r);
            let mu = if r.gen_bool(0.5) { copy.add(&noise) } else { noise };
            let phi = cat.adjoint_of(q, &mu, &x).or_fail()?;
            if phi.is_mono() {
                ensure!(mu.is_mono(), "monic adjoint with a non-monic μ");
                return Ok(!m.is_zero());
            }
            Ok(false)
        })();
        t.record(format!("adjoint #{i}"), outcome);
    }
    t.group("envelope");
    for i in 0..n {
        let cat = lemma_category(i);
        let mut r = instance_rng(seed, 7, 4, i);
        let outcome = (|| -> Check {
            let e = random_exact(&cat, 10, &mut r).or_fail()?;
            ensure!(cat.is_exact(&e).or_fail()?, "generated object is not exact");
            let env = injective_envelope(&e);
            ensure!(cat.is_injective_object(env.target()).or_fail()?, "envelope target is not an injective object");
            ensure!(cat.is_exact(env.cokernel().target()).or_fail()?, "cokernel of the envelope is not exact");
            Ok(!env.is_iso())
        })();
        t.record(format!("envelope #{i}"), outcome);
    }
    t.finish()
}

fn homology_agrees(
    cat: &DiagramCategory<PrimeField>,
    x: &Diagram<PrimeField>,
    q: usize,
    i: usize,
    direct: &Module<PrimeField>,
    seed: u64,
) -> std::result::Result<(), String> {
    let stalk = cat.homology_via_stalk(q, i, x).or_fail()?;
    ensure!(
        stalk.module().dims() == direct.dims(),
        "H^{i}_[{q}]: direct {:?} vs stalk {:?}",
        direct.dims(),
        stalk.module().dims()
    );
    let ext = cat.homology_ext_dims(q, i, x).or_fail()?;
    ensure!(ext == direct.dims(), "H^{i}_[{q}]: direct {:?} vs Ext {ext:?}", direct.dims());
    iso_witness(direct, stalk.module(), seed)?;
    Ok(())
}

/// Direct homology (`ker / im`, amplitude formula) against the stalk-resolution
/// `Ext` computation and the classical `Ext` dimension per base vertex.
pub fn homology_consistency(n: usize, seed: u64) -> Outcome {
    let mut t = Tally::new("homology-consistency");
    for i in 0..n {
        let mut r = instance_rng(seed, 8, 0, i);
        let f = gf(if i % 2 == 0 { 2 } else { 3 });
        let a = match i % 3 {
            0 => QuiverAlgebra::ground_field(f),
            1 => hereditary_algebras(f)[0].1.clone(),
            _ => radical_square_zero_a3(f),
        };
        let cat = loop_category(&a);
        let outcome = (|| -> Check {
            let d = random_differential_module(&a, 12, &mut r);
            let x = d.to_diagram(&cat).or_fail()?;
            let h = bzh(&d).homology().clone();
            for deg in 1..=2 {
                homology_agrees(&cat, &x, 0, deg, &h, r.gen())?;
            }
            Ok(!h.is_zero())
        })();
        t.record(format!("loop #{i}"), outcome);
    }
    for (m, nn) in [(2usize, 2usize), (3, 2), (3, 3), (4, 3)] {
        for i in 0..n / 2 {
            let mut r = instance_rng(seed, 8, (m * 8 + nn) as u64, i);
            let f = gf(if i % 2 == 0 { 2 } else { 3 });
            let shape = ShapeCategory::shape_cyclic(f, m, nn).expect("valid shape");
            let cat = DiagramCategory::new(shape, small_base(f, i / 2)).expect("same field");
            let outcome = (|| -> Check {
                let x = random_object(&cat, 14, &mut r).or_fail()?;
                let mut nonzero = false;
                for q in 0..m {
                    for deg in 1..=3 {
                        let (o, amp) = cat.homology_location(q, deg).expect("built-in shape");
                        let h = cat.amplitude_homology(o, amp, &x).or_fail()?;
                        homology_agrees(&cat, &x, q, deg, h.module(), r.gen())?;
                        nonzero |= !h.is_zero();
                    }
                }
                Ok(nonzero)
            })();
            t.record(format!("cyclic({m},{nn}) #{i}"), outcome);
        }
    }
    t.finish()
}

/// Whenever `0 → B → Z → H → 0` splits, `η: (H, 0) → (M, ∂)` is a monic
/// quasi-isomorphism with exact pushout. Splitting is decided independently
/// by comparing `Z` with `B ⊕ H`.
pub fn eta_suite(n: usize, seed: u64) -> Outcome {
    let mut t = Tally::new("eta-embedding");
    for i in 0..n {
        let mut r = instance_rng(seed, 9, 0, i);
        let f = gf(if i % 2 == 0 { 2 } else { 3 });
        let a = match i % 4 {
            0 => hereditary_algebras(f)[0].1.clone(),
            1 => hereditary_algebras(f)[1].1.clone(),
            2 => hereditary_algebras(f)[2].1.clone(),
            _ => radical_square_zero_a3(f),
        };
        let cat = loop_category(&a);
        let outcome = (|| -> Check {
            let d = random_differential_module(&a, 12, &mut r);
            let b = bzh(&d);
            let z = b.cycles.source().clone();
            let bh = direct_sum(&a, &[b.boundaries.source().clone(), b.homology().clone()]).module;
            let splits = match is_isomorphic(&z, &bh, r.gen()).or_fail()? {
                IsoVerdict::Isomorphic(_) => true,
                IsoVerdict::NotIsomorphic(_) => false,
            };
            match eta_embedding(&d) {
                Ok(e) => {
                    ensure!(splits, "η constructed although Z is not B ⊕ H");
                    ensure!(e.eta.source() == b.homology() && e.eta.is_mono(), "η is not monic");
                    ensure!(b.zeta.compose(&e.section) == b.homology().identity(), "section does not split ζ");
                    let h0 = DifferentialModule::trivial(b.homology());
                    let fx = map_to_diagram(&cat, &e.eta, &h0, &d).or_fail()?;
                    ensure!(cat.is_weak_equivalence(&fx).or_fail()?, "η is not a quasi-isomorphism");
                    ensure!(bzh(&e.pushout).homology().is_zero(), "pushout has nonzero homology");
                    ensure!(d.is_morphism_to(&e.pushout, &e.pushout_map), "pushout map does not commute");
                    Ok(!b.boundaries.source().is_zero() && !b.homology().is_zero())
                }
                Err(Error::SequenceDoesNotSplit) => {
                    ensure!(!splits, "splitting exists but was not found");
                    Ok(false)
                }
                Err(e) => Err(format!("{}: {e}", e.name())),
            }
        })();
        t.record(format!("#{i}"), outcome);
    }
    t.finish()
}

pub type Suite = fn(usize, u64) -> Outcome;

/// Every suite with its full-scale instance count.
pub fn suites() -> Vec<(&'static str, Suite, usize)> {
    vec![
        ("resolution-existence", resolution_existence as Suite, 100),
        ("injective-splitting", injective_splitting, 100),
        ("comparison-uniqueness", comparison_uniqueness, 50),
        ("ringel-zhang", ringel_zhang, 50),
        ("derived-hom", derived_hom, 100),
        ("minimality-equivalences", minimality_equivalences, 50),
        ("adjunction-lemmas", adjunction_lemmas, 50),
        ("homology-consistency", homology_consistency, 100),
        ("eta-embedding", eta_suite, 100),
    ]
}

pub fn run(scale: Scale, seed: u64) -> Vec<Outcome> {
    suites().into_iter().map(|(_, suite, full)| suite(scale.count(full), seed)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_suites_pass() {
        for o in run(Scale::Tiny, 0) {
            assert!(o.passed(), "{o}");
        }
    }

    #[test]
    fn scale_counts() {
        assert_eq!(Scale::Full.count(100), 100);
        assert_eq!(Scale::Tiny.count(50), 2);
        assert!(Scale::parse("huge").is_err());
    }

    #[test]
    fn radical_square_zero_is_not_hereditary() {
        let a = radical_square_zero_a3(gf(2));
        assert!(!a.is_hereditary());
        assert_eq!(a.dim(), 5);
    }
}
