//! Max-min and max-plus measures of finite support on a finite ultrametric
//! space, and the ultrametric between them.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::sample::ValueGrid;
use crate::ultra::same_space;
use crate::{
    Error, ExtReal, FinUltrametricSpace, FiniteSubset, PointMap, Rational, Result, Weighted,
};

pub use crate::weighted::MeasureKind;

/// A canonical measure on a finite ultrametric space. Atoms are keyed by
/// point index and therefore stored in space order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure {
    space: Arc<FinUltrametricSpace>,
    weights: Weighted<usize>,
}

impl Measure {
    /// Canonicalizes atoms given by point index.
    pub fn new(
        kind: MeasureKind,
        space: Arc<FinUltrametricSpace>,
        raw: impl IntoIterator<Item = (usize, ExtReal)>,
    ) -> Result<Self> {
        let raw: Vec<_> = raw.into_iter().collect();
        if let Some((bad, _)) = raw.iter().find(|(p, _)| *p >= space.len()) {
            return Err(Error::PointIndexOutOfRange(*bad));
        }
        let weights = Weighted::new(kind, raw)?;
        Ok(Measure { space, weights })
    }

    /// Canonicalizes atoms given by point label.
    pub fn from_labels<S: AsRef<str>>(
        kind: MeasureKind,
        space: Arc<FinUltrametricSpace>,
        raw: impl IntoIterator<Item = (S, ExtReal)>,
    ) -> Result<Self> {
        let raw = raw
            .into_iter()
            .map(|(l, w)| Ok((space.index_of(l.as_ref())?, w)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(kind, space, raw)
    }

    pub fn from_weighted(
        space: Arc<FinUltrametricSpace>,
        weights: Weighted<usize>,
    ) -> Result<Self> {
        if let Some(&bad) = weights.support().find(|&&p| p >= space.len()) {
            return Err(Error::PointIndexOutOfRange(bad));
        }
        Ok(Measure { space, weights })
    }

    pub fn dirac(kind: MeasureKind, space: Arc<FinUltrametricSpace>, point: usize) -> Result<Self> {
        if point >= space.len() {
            return Err(Error::PointIndexOutOfRange(point));
        }
        Ok(Measure {
            space,
            weights: Weighted::dirac(kind, point),
        })
    }

    pub fn dirac_label(
        kind: MeasureKind,
        space: Arc<FinUltrametricSpace>,
        label: &str,
    ) -> Result<Self> {
        let point = space.index_of(label)?;
        Self::dirac(kind, space, point)
    }

    pub fn kind(&self) -> MeasureKind {
        self.weights.kind()
    }

    pub fn space(&self) -> &Arc<FinUltrametricSpace> {
        &self.space
    }

    pub fn weights(&self) -> &Weighted<usize> {
        &self.weights
    }

    pub fn into_weights(self) -> Weighted<usize> {
        self.weights
    }

    pub fn weight(&self, point: usize) -> ExtReal {
        self.weights.weight(&point)
    }

    /// Atoms as `(label, weight)` in space order.
    pub fn labelled_atoms(&self) -> Vec<(String, ExtReal)> {
        self.weights
            .iter()
            .map(|(&p, w)| (self.space.label(p).to_string(), w.clone()))
            .collect()
    }

    fn check_space(&self, other: &Arc<FinUltrametricSpace>) -> Result<()> {
        if same_space(&self.space, other) {
            Ok(())
        } else {
            Err(Error::MismatchedSpaces)
        }
    }

    /// `max_i min(a_i, phi(x_i))` or `max_i (t_i + phi(x_i))`.
    pub fn evaluate(&self, phi: &TestFunction) -> Result<ExtReal> {
        self.check_space(&phi.space)?;
        Ok(self
            .weights
            .evaluate(|&p| ExtReal::Finite(phi.values[p].clone())))
    }

    /// Largest atom weight inside `set`; `-inf` when no atom lies there.
    pub fn set_value(&self, set: &FiniteSubset) -> Result<ExtReal> {
        self.check_space(set.space())?;
        Ok(self.weights.set_value(|&p| set.contains(p)))
    }

    pub fn support(&self) -> FiniteSubset {
        FiniteSubset::new(
            self.space.clone(),
            self.weights.support().copied().collect(),
        )
        .expect("canonical measures have nonempty support")
    }

    /// Moves atoms along `f`; collisions merge by max.
    pub fn pushforward(&self, f: &PointMap) -> Result<Measure> {
        self.check_space(f.source())?;
        Ok(Measure {
            space: f.target().clone(),
            weights: self.weights.map(|&p| f.apply(p)),
        })
    }
}

/// Per-class maximum weight over the classes of `d <= threshold` on `points`.
fn signature(
    space: &FinUltrametricSpace,
    points: &[usize],
    threshold: &Rational,
    m: &Weighted<usize>,
) -> Vec<ExtReal> {
    let mut seen = vec![false; points.len()];
    let mut sig = Vec::new();
    for i in 0..points.len() {
        if seen[i] {
            continue;
        }
        let mut top = ExtReal::NegInf;
        for j in i..points.len() {
            if space.distance(points[i], points[j]) <= threshold {
                seen[j] = true;
                top = top.max(m.weight(&points[j]));
            }
        }
        sig.push(top);
    }
    sig
}

/// The ultrametric between two measures of the same kind on the same space:
/// the least `r` such that the pushforwards to the quotient by open `r`-balls
/// agree.
///
/// Agreement at radius `r` only changes when `r` crosses a realized distance,
/// so it is enough to scan the distances between support points, comparing
/// per-class maxima of the closed-threshold partition.
pub fn measure_distance(mu: &Measure, nu: &Measure) -> Result<Rational> {
    mu.check_space(&nu.space)?;
    if mu.kind() != nu.kind() {
        return Err(Error::MixedKinds);
    }
    let points: Vec<usize> = mu
        .weights
        .support()
        .chain(nu.weights.support())
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut thresholds = BTreeSet::from([Rational::zero()]);
    for (i, &x) in points.iter().enumerate() {
        for &y in &points[i + 1..] {
            thresholds.insert(mu.space.distance(x, y).clone());
        }
    }
    for t in &thresholds {
        let space = &mu.space;
        if signature(space, &points, t, &mu.weights) == signature(space, &points, t, &nu.weights) {
            return Ok(t.clone());
        }
    }
    unreachable!("at the largest threshold both signatures are the normalization weight")
}

/// A finite-valued function on the points of a space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestFunction {
    space: Arc<FinUltrametricSpace>,
    values: Vec<Rational>,
}

impl TestFunction {
    pub fn new(space: Arc<FinUltrametricSpace>, values: Vec<Rational>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::ArityMismatch {
                expected: space.len(),
                got: values.len(),
            });
        }
        Ok(TestFunction { space, values })
    }

    pub fn from_labels(
        space: Arc<FinUltrametricSpace>,
        values: &BTreeMap<String, Rational>,
    ) -> Result<Self> {
        for key in values.keys() {
            space.index_of(key)?;
        }
        let values = space
            .labels()
            .iter()
            .map(|l| {
                values
                    .get(l)
                    .cloned()
                    .ok_or_else(|| Error::IncompleteFunction(l.clone()))
            })
            .collect::<Result<_>>()?;
        Ok(TestFunction { space, values })
    }

    pub fn space(&self) -> &Arc<FinUltrametricSpace> {
        &self.space
    }

    pub fn value(&self, point: usize) -> &Rational {
        &self.values[point]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

/// Seeded function constant on each open `radius`-ball, block values drawn
/// from `grid`.
pub fn sample_r_constant_function(
    space: &Arc<FinUltrametricSpace>,
    radius: &Rational,
    seed: u64,
    grid: &ValueGrid,
) -> Result<TestFunction> {
    let partition = space.ball_partition(radius)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let block_values: Vec<Rational> = (0..partition.len()).map(|_| grid.draw(&mut rng)).collect();
    let values = (0..space.len())
        .map(|p| block_values[partition.block_of(p)].clone())
        .collect();
    TestFunction::new(space.clone(), values)
}
