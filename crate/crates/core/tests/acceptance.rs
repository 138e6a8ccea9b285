//! Acceptance suite: nine seeded property criteria at full scale, one
//! pass/fail line each. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qshape::selftest::{self, Outcome};

const SEED: u64 = 0;

struct Criterion {
    number: usize,
    run: fn() -> Outcome,
    /// Wall-clock budget, if the criterion states one.
    budget: Option<Duration>,
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { number: 1, run: || selftest::resolution_existence(100, SEED), budget: Some(Duration::from_secs(120)) },
        Criterion { number: 2, run: || selftest::injective_splitting(100, SEED), budget: None },
        Criterion { number: 3, run: || selftest::comparison_uniqueness(50, SEED), budget: None },
        Criterion { number: 4, run: || selftest::ringel_zhang(50, SEED), budget: None },
        Criterion { number: 5, run: || selftest::derived_hom(100, SEED), budget: None },
        Criterion { number: 6, run: || selftest::minimality_equivalences(50, SEED), budget: None },
        Criterion { number: 7, run: || selftest::adjunction_lemmas(50, SEED), budget: None },
        Criterion { number: 8, run: || selftest::homology_consistency(100, SEED), budget: None },
        Criterion { number: 9, run: || selftest::eta_suite(100, SEED), budget: None },
    ]
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut failed = 0;
    for c in criteria() {
        let mut outcome = (c.run)();
        if let Some(budget) = c.budget {
            if outcome.elapsed > budget {
                outcome.failures.push(format!("took {:.1}s, budget {}s", outcome.elapsed.as_secs_f64(), budget.as_secs()));
            }
        }
        if !outcome.passed() {
            failed += 1;
        }
        println!("criterion {}: {outcome}", c.number);
    }
    println!("acceptance: {} of 9 criteria passed in {:.1}s", 9 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
