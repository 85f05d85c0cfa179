//! Independent oracles. None of these call into the threshold scan,
//! canonical-form comparison or group enumeration they are used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use ultrameasure::sample::{self, ValueGrid};
use ultrameasure::{ExtReal, FinUltrametricSpace, Measure, MeasureKind, Rational, TestFunction};

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qr(p: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(d))
}

pub fn abc() -> Arc<FinUltrametricSpace> {
    Arc::new(
        FinUltrametricSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                vec![q(0), q(1), q(2)],
                vec![q(1), q(0), q(2)],
                vec![q(2), q(2), q(0)],
            ],
        )
        .unwrap(),
    )
}

/// Value set for the enumeration oracle: every finite weight, one value
/// above the largest and one below the smallest. `+inf` weights are
/// represented by the value above.
pub fn oracle_values<'a>(weights: impl IntoIterator<Item = &'a ExtReal>) -> Vec<Rational> {
    let mut finite: BTreeSet<Rational> = weights
        .into_iter()
        .filter_map(|w| w.finite().cloned())
        .collect();
    finite.insert(q(0));
    let lo = finite.iter().next().unwrap() - Rational::one();
    let hi = finite.iter().next_back().unwrap() + Rational::one();
    finite.insert(lo);
    finite.insert(hi);
    finite.into_iter().collect()
}

/// Every function `points -> values`, extended by `filler` elsewhere.
/// Points outside `points` carry no atoms, so their value is immaterial.
pub fn all_functions(
    space: &Arc<FinUltrametricSpace>,
    points: &[usize],
    values: &[Rational],
) -> Vec<TestFunction> {
    let filler = values[0].clone();
    let total = values.len().pow(points.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut vals = vec![filler.clone(); space.len()];
            for &p in points {
                vals[p] = values[code % values.len()].clone();
                code /= values.len();
            }
            TestFunction::new(space.clone(), vals).unwrap()
        })
        .collect()
}

/// Direct functional: `max_i combine(w_i, phi(x_i))` from labelled atoms.
pub fn eval_atoms(kind: MeasureKind, atoms: &[(usize, ExtReal)], phi: &TestFunction) -> ExtReal {
    atoms
        .iter()
        .map(|(p, w)| {
            let v = ExtReal::Finite(phi.value(*p).clone());
            match kind {
                MeasureKind::MaxMin => w.clone().min(v),
                MeasureKind::MaxPlus => w.checked_add(&v).unwrap(),
            }
        })
        .max()
        .unwrap_or(ExtReal::NegInf)
}

pub fn raw_atoms(m: &Measure) -> Vec<(usize, ExtReal)> {
    m.weights().iter().map(|(&p, w)| (p, w.clone())).collect()
}

/// True iff the two measures give the same value on the whole
/// enumeration family.
pub fn functionally_equal(mu: &Measure, nu: &Measure) -> bool {
    let (am, an) = (raw_atoms(mu), raw_atoms(nu));
    let points: Vec<usize> = am
        .iter()
        .chain(&an)
        .map(|(p, _)| *p)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let values = oracle_values(am.iter().chain(&an).map(|(_, w)| w));
    all_functions(mu.space(), &points, &values)
        .iter()
        .all(|phi| eval_atoms(mu.kind(), &am, phi) == eval_atoms(nu.kind(), &an, phi))
}

/// Radii at, between and above the realized distances.
pub fn candidate_radii(space: &FinUltrametricSpace) -> Vec<Rational> {
    let values: BTreeSet<Rational> = space.matrix().iter().flatten().cloned().collect();
    let values: Vec<Rational> = values.into_iter().collect();
    let mut out = Vec::new();
    for w in values.windows(2) {
        out.push((&w[0] + &w[1]) / q(2));
        out.push(w[1].clone());
    }
    out.push(values.last().unwrap() + q(1));
    out
}

/// Whether `samples` random functions constant on open `r`-balls all give
/// equal values.
pub fn agree_on_random_r_constant(
    mu: &Measure,
    nu: &Measure,
    r: &Rational,
    samples: usize,
    seed: u64,
) -> bool {
    let grid = ValueGrid {
        lo: -8,
        hi: 8,
        denom: 2,
    };
    let space = mu.space();
    let blocks = space.ball_partition(r).unwrap();
    let (am, an) = (raw_atoms(mu), raw_atoms(nu));
    let mut rng = sample::rng(seed);
    (0..samples).all(|_| {
        let block_values: Vec<Rational> = (0..blocks.len()).map(|_| grid.draw(&mut rng)).collect();
        let values = (0..space.len())
            .map(|p| block_values[blocks.block_of(p)].clone())
            .collect();
        let phi = TestFunction::new(space.clone(), values).unwrap();
        eval_atoms(mu.kind(), &am, &phi) == eval_atoms(nu.kind(), &an, &phi)
    })
}

/// Distance estimate: the largest realized distance below the smallest
/// candidate radius at which every sampled function agrees.
pub fn probabilistic_distance(mu: &Measure, nu: &Measure, samples: usize, seed: u64) -> Rational {
    let space = mu.space();
    let first = candidate_radii(space)
        .into_iter()
        .find(|r| agree_on_random_r_constant(mu, nu, r, samples, seed))
        .unwrap();
    space
        .matrix()
        .iter()
        .flatten()
        .filter(|d| **d < first)
        .max()
        .cloned()
        .unwrap()
}

/// Bottleneck assignment: least `t` such that the bipartite graph
/// `{(i, j) : cost[i][j] <= t}` has a perfect matching (Kuhn's algorithm).
pub fn bottleneck_assignment(cost: &[Vec<Rational>]) -> Rational {
    let n = cost.len();
    let mut thresholds: Vec<&Rational> = cost.iter().flatten().collect();
    thresholds.sort();
    thresholds.dedup();
    for t in thresholds {
        let mut owner: Vec<Option<usize>> = vec![None; n];
        let mut matched = 0;
        for i in 0..n {
            let mut seen = vec![false; n];
            if augment(i, cost, t, &mut seen, &mut owner) {
                matched += 1;
            }
        }
        if matched == n {
            return t.clone();
        }
    }
    unreachable!("the largest threshold admits every assignment")
}

fn augment(
    i: usize,
    cost: &[Vec<Rational>],
    t: &Rational,
    seen: &mut [bool],
    owner: &mut [Option<usize>],
) -> bool {
    for j in 0..cost.len() {
        if cost[i][j] <= *t && !seen[j] {
            seen[j] = true;
            if owner[j].is_none() || augment(owner[j].unwrap(), cost, t, seen, owner) {
                owner[j] = Some(i);
                return true;
            }
        }
    }
    false
}
