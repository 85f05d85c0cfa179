//! Seeded generators for spaces, measures and maps, used by the law
//! harnesses and the test suites. Every generator is a pure function of the
//! RNG state it is handed.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::{index, IndexedRandom};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::monad::{MeasureOfMeasures, MeasureTower, OrderBijection};
use crate::ultra::quotient;
use crate::{ExtReal, FinUltrametricSpace, Measure, MeasureKind, PointMap, Rational, Weighted};

pub type SampleRng = ChaCha8Rng;

/// Independent stream for trial `trial` of harness `stream`.
pub fn sub_seed(seed: u64, stream: u64, trial: u64) -> u64 {
    // splitmix64 finalizer over the packed inputs
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(trial.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rationals `k / denom` with `lo <= k / denom <= hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueGrid {
    pub lo: i64,
    pub hi: i64,
    pub denom: i64,
}

impl Default for ValueGrid {
    fn default() -> Self {
        ValueGrid {
            lo: -6,
            hi: 6,
            denom: 2,
        }
    }
}

impl ValueGrid {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Rational {
        let k = rng.random_range(self.lo * self.denom..=self.hi * self.denom);
        Rational::new(BigInt::from(k), BigInt::from(self.denom))
    }
}

fn half(k: i64) -> Rational {
    Rational::new(BigInt::from(k), BigInt::from(2))
}

fn label(i: usize) -> String {
    const NAMES: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
    match NAMES.get(i) {
        Some(&c) => (c as char).to_string(),
        None => format!("p{i}"),
    }
}

/// Random ultrametric on `n` points, built as a dendrogram: clusters merge
/// pairwise at nondecreasing heights and the merge height is the distance.
pub fn random_space<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Arc<FinUltrametricSpace> {
    let n = n.max(1);
    let mut dist = vec![vec![Rational::from_integer(0.into()); n]; n];
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut height = half(rng.random_range(1..=4));
    while clusters.len() > 1 {
        let i = rng.random_range(0..clusters.len());
        let a = clusters.swap_remove(i);
        let j = rng.random_range(0..clusters.len());
        let b = clusters.swap_remove(j);
        for &x in &a {
            for &y in &b {
                dist[x][y] = height.clone();
                dist[y][x] = height.clone();
            }
        }
        clusters.push(a.into_iter().chain(b).collect());
        height += half(rng.random_range(0..=2));
    }
    let labels = (0..n).map(label).collect();
    Arc::new(FinUltrametricSpace::trusted(labels, dist).expect("labels are distinct"))
}

fn random_weight<R: Rng + ?Sized>(rng: &mut R, kind: MeasureKind) -> ExtReal {
    match kind {
        MeasureKind::MaxMin => {
            if rng.random_bool(0.15) {
                ExtReal::PosInf
            } else {
                ExtReal::Finite(half(rng.random_range(-6..=6)))
            }
        }
        MeasureKind::MaxPlus => ExtReal::Finite(half(rng.random_range(-8..=0))),
    }
}

/// Random weighted atoms over `0..n`: atom count uniform in
/// `1..=min(max_atoms, n)`, distinct points, one atom promoted to the unit.
pub fn random_weighted<R: Rng + ?Sized>(
    rng: &mut R,
    kind: MeasureKind,
    n: usize,
    max_atoms: usize,
) -> Weighted<usize> {
    let count = rng.random_range(1..=max_atoms.min(n).max(1));
    let points = index::sample(rng, n, count).into_vec();
    let mut raw: Vec<(usize, ExtReal)> = points
        .iter()
        .map(|&p| (p, random_weight(rng, kind)))
        .collect();
    let top = rng.random_range(0..raw.len());
    raw[top].1 = kind.unit();
    Weighted::new(kind, raw).expect("normalized by construction")
}

pub fn random_measure<R: Rng + ?Sized>(
    rng: &mut R,
    kind: MeasureKind,
    space: &Arc<FinUltrametricSpace>,
    max_atoms: usize,
) -> Measure {
    let w = random_weighted(rng, kind, space.len(), max_atoms);
    Measure::from_weighted(space.clone(), w).expect("indices in range")
}

fn promote<P: Ord + Clone, R: Rng + ?Sized>(
    rng: &mut R,
    kind: MeasureKind,
    items: Vec<P>,
) -> Weighted<P> {
    let top = rng.random_range(0..items.len());
    let raw = items.into_iter().enumerate().map(|(i, p)| {
        let w = if i == top {
            kind.unit()
        } else {
            random_weight(rng, kind)
        };
        (p, w)
    });
    // duplicates merge by max, which keeps the unit weight
    Weighted::new(kind, raw).expect("normalized by construction")
}

/// Random measure of measures: up to `max_outer` outer atoms, each a random
/// measure with up to `max_inner` atoms.
pub fn random_measure_of_measures<R: Rng + ?Sized>(
    rng: &mut R,
    kind: MeasureKind,
    space: &Arc<FinUltrametricSpace>,
    max_outer: usize,
    max_inner: usize,
) -> MeasureOfMeasures {
    let count = rng.random_range(1..=max_outer.max(1));
    let inner: Vec<Weighted<usize>> = (0..count)
        .map(|_| random_weighted(rng, kind, space.len(), max_inner))
        .collect();
    MeasureOfMeasures::from_weighted(space.clone(), promote(rng, kind, inner))
        .expect("inner measures live on the space")
}

/// Random depth-three nesting.
pub fn random_tower<R: Rng + ?Sized>(
    rng: &mut R,
    kind: MeasureKind,
    space: &Arc<FinUltrametricSpace>,
    max_outer: usize,
    max_inner: usize,
) -> MeasureTower {
    let count = rng.random_range(1..=max_outer.max(1));
    let middles: Vec<Weighted<Weighted<usize>>> = (0..count)
        .map(|_| random_measure_of_measures(rng, kind, space, max_outer, max_inner).into_weights())
        .collect();
    MeasureTower::from_weighted(space.clone(), promote(rng, kind, middles))
        .expect("inner measures live on the space")
}

/// A random nonexpanding self-map or quotient map of `space`.
///
/// Mixes three families: retractions of each open ball onto one of its
/// points (distances across balls are preserved, within balls collapse),
/// uniformly random self-maps that happen to be nonexpanding, and quotient
/// maps.
pub fn random_nonexpanding_map<R: Rng + ?Sized>(
    rng: &mut R,
    space: &Arc<FinUltrametricSpace>,
) -> PointMap {
    match rng.random_range(0..3) {
        0 => random_self_map(rng, space),
        1 => {
            let r = random_radius(rng, space);
            quotient(space, &r).expect("positive radius").1
        }
        _ => random_retraction(rng, space),
    }
}

/// A random nonexpanding self-map of `space`.
pub fn random_self_map<R: Rng + ?Sized>(rng: &mut R, space: &Arc<FinUltrametricSpace>) -> PointMap {
    for _ in 0..8 {
        let assignment = (0..space.len())
            .map(|_| rng.random_range(0..space.len()))
            .collect();
        let f = PointMap::new(space.clone(), space.clone(), assignment).expect("in range");
        if f.is_nonexpanding() {
            return f;
        }
    }
    random_retraction(rng, space)
}

fn random_retraction<R: Rng + ?Sized>(rng: &mut R, space: &Arc<FinUltrametricSpace>) -> PointMap {
    let r = random_radius(rng, space);
    let partition = space.ball_partition(&r).expect("positive radius");
    let targets: Vec<usize> = partition
        .blocks()
        .iter()
        .map(|b| *b.choose(rng).expect("blocks are nonempty"))
        .collect();
    let assignment = (0..space.len())
        .map(|x| targets[partition.block_of(x)])
        .collect();
    PointMap::new(space.clone(), space.clone(), assignment).expect("in range")
}

/// A radius at, between or just above the realized distances.
pub fn random_radius<R: Rng + ?Sized>(rng: &mut R, space: &FinUltrametricSpace) -> Rational {
    let mut candidates = Vec::new();
    let values = space.distance_values();
    for w in values.windows(2) {
        candidates.push(w[1].clone());
        candidates.push((&w[0] + &w[1]) / Rational::from_integer(2.into()));
    }
    let top = values.last().cloned().unwrap_or_default();
    candidates.push(top + Rational::from_integer(1.into()));
    candidates.choose(rng).cloned().expect("nonempty")
}

/// A member of the rational order-bijection family with small parameters.
pub fn random_order_bijection<R: Rng + ?Sized>(rng: &mut R) -> OrderBijection {
    let pick = |rng: &mut R, xs: &[i64]| half(*xs.choose(rng).expect("nonempty"));
    let breakpoint = pick(rng, &[1, 2, 4, 6]);
    let slope = pick(rng, &[1, 2, 4, 6]);
    let scale = pick(rng, &[1, 2, 4]);
    let offset = pick(rng, &[-4, -2, 0, 2, 4]);
    OrderBijection::rational(breakpoint, slope, scale, offset).expect("positive parameters")
}
