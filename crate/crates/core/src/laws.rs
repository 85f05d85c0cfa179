//! Seeded law harnesses for the two monads.
//!
//! Each trial draws its own sub-seed from `(seed, law, trial)`, so a report
//! depends only on its inputs.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::io::measure_to_json;
use crate::monad::{multiply, MeasureOfMeasures};
use crate::sample::{self, random_measure, random_space, random_tower};
use crate::{FinUltrametricSpace, MeasureKind};

/// Outcome of one law over a batch of trials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawResult {
    pub trials: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_counterexample: Option<Value>,
}

impl LawResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Law name to result.
pub type LawReport = BTreeMap<String, LawResult>;

pub fn all_passed(report: &LawReport) -> bool {
    report.values().all(LawResult::passed)
}

/// Sampling limits for harness instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleBudget {
    pub max_points: usize,
    pub max_outer: usize,
    pub max_inner: usize,
}

impl Default for SampleBudget {
    fn default() -> Self {
        SampleBudget {
            max_points: 6,
            max_outer: 4,
            max_inner: 4,
        }
    }
}

/// Runs `trials` instances of `check`, each with a fresh RNG; `check`
/// returns `Some(counterexample)` on failure.
pub(crate) fn run_law(
    seed: u64,
    stream: u64,
    trials: usize,
    mut check: impl FnMut(&mut sample::SampleRng) -> Option<Value>,
) -> LawResult {
    let mut result = LawResult {
        trials,
        failures: 0,
        first_counterexample: None,
    };
    for t in 0..trials {
        let mut rng = sample::rng(sample::sub_seed(seed, stream, t as u64));
        if let Some(cx) = check(&mut rng) {
            result.failures += 1;
            result.first_counterexample.get_or_insert(cx);
        }
    }
    result
}

/// Checks the left unit, right unit and associativity laws on random
/// instances. With `space = None` every trial samples its own space of at
/// most `budget.max_points` points.
pub fn check_monad_laws(
    kind: MeasureKind,
    space: Option<&Arc<FinUltrametricSpace>>,
    trials: usize,
    seed: u64,
    budget: &SampleBudget,
) -> LawReport {
    let pick_space = |rng: &mut sample::SampleRng| match space {
        Some(s) => s.clone(),
        None => {
            let n = rand::Rng::random_range(rng, 1..=budget.max_points.max(1));
            random_space(rng, n)
        }
    };
    let mut report = LawReport::new();

    // mult . J(delta) = id
    report.insert(
        "left_unit".into(),
        run_law(seed, 1, trials, |rng| {
            let x = pick_space(rng);
            let mu = random_measure(rng, kind, &x, budget.max_inner);
            let back = multiply(&MeasureOfMeasures::lift_diracs(&mu));
            (back != mu).then(|| measure_to_json(&mu))
        }),
    );

    // mult . delta_J = id
    report.insert(
        "right_unit".into(),
        run_law(seed, 2, trials, |rng| {
            let x = pick_space(rng);
            let mu = random_measure(rng, kind, &x, budget.max_inner);
            let back = multiply(&MeasureOfMeasures::dirac(&mu));
            (back != mu).then(|| measure_to_json(&mu))
        }),
    );

    // mult . J(mult) = mult . mult_J
    report.insert(
        "associativity".into(),
        run_law(seed, 3, trials, |rng| {
            let x = pick_space(rng);
            let tower = random_tower(rng, kind, &x, budget.max_outer, budget.max_inner);
            let left = multiply(&tower.multiply_inner());
            let right = multiply(&tower.multiply_outer());
            (left != right).then(|| {
                serde_json::json!({
                    "inner_first": measure_to_json(&left),
                    "outer_first": measure_to_json(&right),
                })
            })
        }),
    );

    report
}
