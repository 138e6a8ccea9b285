//! Seeded generators for test corpora: modules, differential modules and
//! semiinjective diagrams. All randomness comes from the caller's RNG.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classic::indecomposable_injectives;
use crate::diagram::{Diagram, DiagramCategory};
use crate::diffmod::{loop_category, DifferentialModule};
use crate::error::Result;
use crate::field::Field;
use crate::matrix::Matrix;
use crate::module::{direct_sum, generated_submodule, hom_basis, quotient, random_combination, Module, ModuleMap};
use crate::quiver::QuiverAlgebra;
use crate::resolve::semiinjective_replacement;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Path algebras used by the test suites: `1 → 2`, `1 → 2 → 3`, and the
/// four-vertex tree `1 → 2 ← 3`, `2 → 4`.
pub fn hereditary_algebras<F: Field>(field: F) -> Vec<(&'static str, Arc<QuiverAlgebra<F>>)> {
    vec![
        ("A2", QuiverAlgebra::path_algebra(field, 2, &[(0, 1)]).expect("valid quiver")),
        ("A3", QuiverAlgebra::path_algebra(field, 3, &[(0, 1), (1, 2)]).expect("valid quiver")),
        ("D4", QuiverAlgebra::path_algebra(field, 4, &[(0, 1), (2, 1), (1, 3)]).expect("valid quiver")),
    ]
}

fn random_sum<F: Field, R: Rng + ?Sized>(
    blocks: &[Module<F>],
    algebra: &Arc<QuiverAlgebra<F>>,
    budget: usize,
    rng: &mut R,
) -> Module<F> {
    let fitting: Vec<_> = blocks.iter().filter(|b| b.total_dim() <= budget && !b.is_zero()).collect();
    let mut parts = Vec::new();
    let mut used = 0;
    let target = rng.gen_range(1..=budget.max(1));
    for _ in 0..4 * blocks.len().max(1) {
        let Some(b) = fitting.choose(rng) else { break };
        if used + b.total_dim() <= target {
            used += b.total_dim();
            parts.push((*b).clone());
        }
        if used == target {
            break;
        }
    }
    direct_sum(algebra, &parts).module
}

fn random_generators<F: Field, R: Rng + ?Sized>(m: &Module<F>, count: usize, rng: &mut R) -> Vec<Matrix<F>> {
    let f = m.field();
    let mut gens: Vec<Matrix<F>> = m.dims().iter().map(|&d| Matrix::zeros(f, d, 0)).collect();
    let live: Vec<usize> = (0..m.num_vertices()).filter(|&v| m.dim(v) > 0).collect();
    for _ in 0..count {
        if let Some(&v) = live.choose(rng) {
            gens[v] = gens[v].hstack(&Matrix::random(f, m.dim(v), 1, rng));
        }
    }
    gens
}

/// A random quotient of a sum of indecomposable projectives, in a random basis.
pub fn random_quotient_of_projectives<F: Field, R: Rng + ?Sized>(
    algebra: &Arc<QuiverAlgebra<F>>,
    max_dim: usize,
    rng: &mut R,
) -> Module<F> {
    let blocks: Vec<_> = (0..algebra.num_vertices()).map(|v| Module::projective(algebra, v).expect("vertex")).collect();
    let ambient = random_sum(&blocks, algebra, max_dim, rng);
    let k = rng.gen_range(0..=2);
    let sub = generated_submodule(&ambient, &random_generators(&ambient, k, rng));
    quotient(&sub).target().random_base_change(rng).0
}

/// A random submodule of a sum of indecomposable injectives, in a random basis.
pub fn random_submodule_of_injectives<F: Field, R: Rng + ?Sized>(
    algebra: &Arc<QuiverAlgebra<F>>,
    max_dim: usize,
    rng: &mut R,
) -> Module<F> {
    let blocks = indecomposable_injectives(algebra);
    let ambient = random_sum(&blocks, algebra, max_dim, rng);
    let k = rng.gen_range(1..=3);
    generated_submodule(&ambient, &random_generators(&ambient, k, rng)).source().random_base_change(rng).0
}

/// A random module of total dimension at most `max_dim` from one of the two
/// families above, chosen uniformly.
pub fn random_module<F: Field, R: Rng + ?Sized>(algebra: &Arc<QuiverAlgebra<F>>, max_dim: usize, rng: &mut R) -> Module<F> {
    if rng.gen_bool(0.5) {
        random_quotient_of_projectives(algebra, max_dim, rng)
    } else {
        random_submodule_of_injectives(algebra, max_dim, rng)
    }
}

/// A uniformly random homomorphism `m → n`.
pub fn random_hom<F: Field, R: Rng + ?Sized>(m: &Module<F>, n: &Module<F>, rng: &mut R) -> ModuleMap<F> {
    random_combination(&hom_basis(m, n), &ModuleMap::zero(m, n), rng)
}

/// A random differential module over `base` of total dimension at most
/// `max_dim`. Mixes quotients and submodules of free objects over the loop
/// category with the family `(X ⊕ Y, (x, y) ↦ (0, φx))`, then changes basis.
pub fn random_differential_module<F: Field, R: Rng + ?Sized>(
    base: &Arc<QuiverAlgebra<F>>,
    max_dim: usize,
    rng: &mut R,
) -> DifferentialModule<F> {
    let cat = loop_category(base);
    let mut parts = Vec::new();
    let mut budget = max_dim;
    if rng.gen_bool(0.6) && budget > 0 {
        let x = random_module(cat.lambda(), budget, rng);
        budget -= x.total_dim();
        parts.push(x);
    }
    if budget > 0 {
        let split = rng.gen_range(0..=budget);
        let x = random_module(base, split, rng);
        let y = random_module(base, budget - x.total_dim(), rng);
        let phi = random_hom(&x, &y, rng);
        let sum = direct_sum(base, &[x, y]);
        let d = sum.inclusions[1].compose(&phi).compose(&sum.projections[0]);
        let dm = DifferentialModule::new(sum.module.clone(), d).expect("square-zero by construction");
        parts.push(dm.to_diagram(&cat).expect("loop category"));
    }
    let total = cat.direct_sum(&parts).module;
    let mixed = total.random_base_change(rng).0;
    DifferentialModule::from_diagram(&cat, &mixed).expect("module over the loop category algebra")
}

/// A random semiinjective diagram of total dimension at most `max_dim`: a
/// semiinjective replacement of a small random diagram (a random module over the
/// category algebra, or a stalk of a random base module), possibly with an
/// injective object `G_q(I)` added, in a random basis.
pub fn random_semiinjective<F: Field, R: Rng + ?Sized>(
    cat: &DiagramCategory<F>,
    max_dim: usize,
    bound: usize,
    rng: &mut R,
) -> Result<Diagram<F>> {
    let base_injectives = indecomposable_injectives(cat.base());
    loop {
        let seed_dim = rng.gen_range(1..=(max_dim / 4).max(2));
        let q = rng.gen_range(0..cat.num_objects());
        let m = random_module(cat.base(), seed_dim, rng);
        let x = if rng.gen_bool(0.3) { random_module(cat.lambda(), seed_dim, rng) } else { stalk_diagram(cat, q, &m)? };
        let Ok(phi) = semiinjective_replacement(cat, &x, bound) else { continue };
        let mut parts = vec![phi.target().clone()];
        if rng.gen_bool(0.5) {
            let q = rng.gen_range(0..cat.num_objects());
            let i = base_injectives.choose(rng).expect("nonempty base");
            parts.push(cat.functor_g(q, i)?);
        }
        let total: usize = parts.iter().map(|p| p.total_dim()).sum();
        if total > max_dim || total == 0 {
            continue;
        }
        let sum = cat.direct_sum(&parts).module;
        return Ok(sum.random_base_change(rng).0);
    }
}

/// `m` placed at object `q`, zero elsewhere, all shape maps zero.
pub fn stalk_diagram<F: Field>(cat: &DiagramCategory<F>, q: usize, m: &Module<F>) -> Result<Diagram<F>> {
    let zero = Module::zero(cat.base().clone());
    let objects: Vec<_> = (0..cat.num_objects()).map(|o| if o == q { m.clone() } else { zero.clone() }).collect();
    let maps: Vec<_> =
        cat.shape().algebra().arrows().iter().map(|c| ModuleMap::zero(&objects[c.source], &objects[c.target])).collect();
    cat.from_components(&objects, &maps)
}
