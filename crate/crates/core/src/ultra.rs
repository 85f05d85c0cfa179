//! Finite ultrametric spaces, their ball partitions and quotients, max-metric
//! products, nonexpanding maps and the Hausdorff distance between subsets.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::Zero;

use crate::ext_real::is_positive;
use crate::{Error, Rational, Result};

/// Size caps for constructions that grow exponentially.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    pub product_points: usize,
    pub group_order: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            product_points: 10_000,
            group_order: 720,
        }
    }
}

/// A finite set of labelled points with an exact ultrametric.
///
/// Immutable once built. Operations that hand spaces around use
/// `Arc<FinUltrametricSpace>`.
#[derive(Debug, Clone)]
pub struct FinUltrametricSpace {
    points: Vec<String>,
    dist: Vec<Vec<Rational>>,
    index: BTreeMap<String, usize>,
}

impl PartialEq for FinUltrametricSpace {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.dist == other.dist
    }
}

impl Eq for FinUltrametricSpace {}

impl FinUltrametricSpace {
    /// Validates `dist` as an ultrametric on `points`.
    pub fn new(points: Vec<String>, dist: Vec<Vec<Rational>>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::EmptySpace);
        }
        if dist.len() != n {
            return Err(Error::DimensionMismatch {
                points: n,
                rows: dist.len(),
            });
        }
        if let Some(row) = dist.iter().find(|row| row.len() != n) {
            return Err(Error::DimensionMismatch {
                points: n,
                rows: row.len(),
            });
        }
        for (i, row) in dist.iter().enumerate() {
            for j in 0..n {
                if i == j {
                    if !row[i].is_zero() {
                        return Err(Error::NonzeroDiagonal { i });
                    }
                } else if row[j] != dist[j][i] {
                    return Err(Error::NotSymmetric { i, j });
                } else if !is_positive(&row[j]) {
                    return Err(Error::NonpositiveOffDiagonal { i, j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][j] > *std::cmp::max(&dist[i][k], &dist[k][j]) {
                        return Err(Error::StrongTriangleViolation { i, j, k });
                    }
                }
            }
        }
        Self::trusted(points, dist)
    }

    /// Builds a space whose metric is ultrametric by construction.
    /// Only label uniqueness is checked.
    pub(crate) fn trusted(points: Vec<String>, dist: Vec<Vec<Rational>>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(p.clone()));
            }
        }
        Ok(FinUltrametricSpace {
            points,
            dist,
            index,
        })
    }

    /// Space with every off-diagonal distance equal to one.
    pub fn discrete<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let points: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = points.len();
        if n == 0 {
            return Err(Error::EmptySpace);
        }
        let dist = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Rational::from_integer((i != j).into()))
                    .collect()
            })
            .collect();
        Self::trusted(points, dist)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.points
    }

    pub fn label(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    pub fn distance(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.dist
    }

    pub fn diameter(&self) -> Rational {
        self.dist
            .iter()
            .flatten()
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Sorted distinct distances, including zero.
    pub fn distance_values(&self) -> Vec<Rational> {
        let set: BTreeSet<&Rational> = self.dist.iter().flatten().collect();
        set.into_iter().cloned().collect()
    }

    /// Partition into open balls `{y : d(x,y) < r}`.
    pub fn ball_partition(&self, radius: &Rational) -> Result<Partition> {
        if !is_positive(radius) {
            return Err(Error::NonpositiveRadius);
        }
        Ok(Partition::by_relation(
            self.len(),
            radius.clone(),
            |i, j| self.dist[i][j] < *radius,
        ))
    }
}

/// The open `r`-balls of a space. Blocks are ordered by their smallest
/// member, members ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    radius: Rational,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl Partition {
    /// `related` must be an equivalence relation on `0..n`.
    pub(crate) fn by_relation(
        n: usize,
        radius: Rational,
        related: impl Fn(usize, usize) -> bool,
    ) -> Self {
        let mut block_of = vec![usize::MAX; n];
        let mut blocks = Vec::new();
        for i in 0..n {
            if block_of[i] != usize::MAX {
                continue;
            }
            let b = blocks.len();
            let members: Vec<usize> = (i..n).filter(|&j| related(i, j)).collect();
            for &j in &members {
                block_of[j] = b;
            }
            blocks.push(members);
        }
        Partition {
            radius,
            blocks,
            block_of,
        }
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, point: usize) -> usize {
        self.block_of[point]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Collapses every open `r`-ball to a point. The quotient metric is the
/// distance between any two representatives; the returned map is `q_r`.
pub fn quotient(
    space: &Arc<FinUltrametricSpace>,
    radius: &Rational,
) -> Result<(Arc<FinUltrametricSpace>, PointMap)> {
    let partition = space.ball_partition(radius)?;
    let labels = partition
        .blocks()
        .iter()
        .map(|block| {
            let mut names: Vec<&str> = block.iter().map(|&i| space.label(i)).collect();
            names.sort_unstable();
            names.join("|")
        })
        .collect();
    let reps: Vec<usize> = partition.blocks().iter().map(|b| b[0]).collect();
    let dist = reps
        .iter()
        .map(|&a| reps.iter().map(|&b| space.distance(a, b).clone()).collect())
        .collect();
    let target = Arc::new(FinUltrametricSpace::trusted(labels, dist)?);
    let assignment = (0..space.len()).map(|i| partition.block_of(i)).collect();
    let q = PointMap::new(space.clone(), target.clone(), assignment)?;
    Ok((target, q))
}

/// A max-metric product `X_1 x ... x X_k` with its coordinate bookkeeping.
///
/// Points are coordinate tuples in lexicographic order of point indices.
#[derive(Debug, Clone)]
pub struct Product {
    space: Arc<FinUltrametricSpace>,
    factors: Vec<Arc<FinUltrametricSpace>>,
}

impl Product {
    pub fn new(factors: &[Arc<FinUltrametricSpace>], budget: usize) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptySpace);
        }
        let needed = factors
            .iter()
            .try_fold(1usize, |acc, f| acc.checked_mul(f.len()))
            .unwrap_or(usize::MAX);
        if needed > budget {
            return Err(Error::BudgetExceeded {
                what: "product space",
                needed,
                budget,
            });
        }
        let tuples: Vec<Vec<usize>> = (0..needed).map(|i| decode(factors, i)).collect();
        let labels = tuples
            .iter()
            .map(|t| {
                let parts: Vec<&str> = t.iter().zip(factors).map(|(&c, f)| f.label(c)).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let dist = tuples
            .iter()
            .map(|s| {
                tuples
                    .iter()
                    .map(|t| {
                        factors
                            .iter()
                            .zip(s.iter().zip(t))
                            .map(|(f, (&a, &b))| f.distance(a, b))
                            .max()
                            .cloned()
                            .unwrap_or_else(Rational::zero)
                    })
                    .collect()
            })
            .collect();
        Ok(Product {
            space: Arc::new(FinUltrametricSpace::trusted(labels, dist)?),
            factors: factors.to_vec(),
        })
    }

    pub fn space(&self) -> &Arc<FinUltrametricSpace> {
        &self.space
    }

    pub fn factors(&self) -> &[Arc<FinUltrametricSpace>] {
        &self.factors
    }

    pub fn coords(&self, index: usize) -> Vec<usize> {
        decode(&self.factors, index)
    }

    pub fn index_of(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&c, f)| acc * f.len() + c)
    }

    /// Coordinate projection onto factor `k`.
    pub fn projection(&self, k: usize) -> Result<PointMap> {
        let assignment = (0..self.space.len()).map(|i| self.coords(i)[k]).collect();
        PointMap::new(self.space.clone(), self.factors[k].clone(), assignment)
    }
}

fn decode(factors: &[Arc<FinUltrametricSpace>], mut index: usize) -> Vec<usize> {
    let mut out = vec![0; factors.len()];
    for (slot, f) in out.iter_mut().zip(factors).rev() {
        *slot = index % f.len();
        index /= f.len();
    }
    out
}

/// Max-metric product of the given spaces.
pub fn product(
    factors: &[Arc<FinUltrametricSpace>],
    budgets: &Budgets,
) -> Result<Arc<FinUltrametricSpace>> {
    Product::new(factors, budgets.product_points).map(|p| p.space)
}

pub(crate) fn same_space(a: &Arc<FinUltrametricSpace>, b: &Arc<FinUltrametricSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A total map between the points of two finite spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointMap {
    source: Arc<FinUltrametricSpace>,
    target: Arc<FinUltrametricSpace>,
    assignment: Vec<usize>,
}

impl PointMap {
    pub fn new(
        source: Arc<FinUltrametricSpace>,
        target: Arc<FinUltrametricSpace>,
        assignment: Vec<usize>,
    ) -> Result<Self> {
        if assignment.len() != source.len() {
            return Err(Error::ArityMismatch {
                expected: source.len(),
                got: assignment.len(),
            });
        }
        if let Some(&bad) = assignment.iter().find(|&&y| y >= target.len()) {
            return Err(Error::PointIndexOutOfRange(bad));
        }
        Ok(PointMap {
            source,
            target,
            assignment,
        })
    }

    /// Builds a map from label pairs; every source label must be present.
    pub fn from_labels(
        source: Arc<FinUltrametricSpace>,
        target: Arc<FinUltrametricSpace>,
        pairs: &BTreeMap<String, String>,
    ) -> Result<Self> {
        for key in pairs.keys() {
            source.index_of(key)?;
        }
        let assignment = source
            .labels()
            .iter()
            .map(|x| {
                let y = pairs.get(x).ok_or_else(|| Error::UnknownPoint(x.clone()))?;
                target.index_of(y)
            })
            .collect::<Result<_>>()?;
        Self::new(source, target, assignment)
    }

    pub fn identity(space: Arc<FinUltrametricSpace>) -> Self {
        let assignment = (0..space.len()).collect();
        PointMap {
            source: space.clone(),
            target: space,
            assignment,
        }
    }

    pub fn constant(
        source: Arc<FinUltrametricSpace>,
        target: Arc<FinUltrametricSpace>,
        point: usize,
    ) -> Result<Self> {
        let assignment = vec![point; source.len()];
        Self::new(source, target, assignment)
    }

    pub fn source(&self) -> &Arc<FinUltrametricSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinUltrametricSpace> {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn apply(&self, x: usize) -> usize {
        self.assignment[x]
    }

    /// `other` after `self`.
    pub fn then(&self, other: &PointMap) -> Result<PointMap> {
        if !same_space(&self.target, &other.source) {
            return Err(Error::MismatchedSpaces);
        }
        let assignment = self.assignment.iter().map(|&y| other.apply(y)).collect();
        PointMap::new(self.source.clone(), other.target.clone(), assignment)
    }

    /// `d(f(x), f(y)) <= d(x, y)` for all pairs.
    pub fn is_nonexpanding(&self) -> bool {
        let n = self.source.len();
        (0..n).all(|x| {
            (x + 1..n).all(|y| {
                self.target.distance(self.apply(x), self.apply(y)) <= self.source.distance(x, y)
            })
        })
    }

    pub fn to_label_map(&self) -> BTreeMap<String, String> {
        self.assignment
            .iter()
            .enumerate()
            .map(|(x, &y)| {
                (
                    self.source.label(x).to_string(),
                    self.target.label(y).to_string(),
                )
            })
            .collect()
    }
}

/// `max_x d(f(x), g(x))`.
pub fn sup_distance(f: &PointMap, g: &PointMap) -> Result<Rational> {
    if !same_space(&f.source, &g.source) || !same_space(&f.target, &g.target) {
        return Err(Error::MismatchedSpaces);
    }
    Ok((0..f.source.len())
        .map(|x| f.target.distance(f.apply(x), g.apply(x)))
        .max()
        .cloned()
        .unwrap_or_else(Rational::zero))
}

/// A nonempty subset of a finite space, i.e. a point of its hyperspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSubset {
    space: Arc<FinUltrametricSpace>,
    members: BTreeSet<usize>,
}

impl FiniteSubset {
    pub fn new(space: Arc<FinUltrametricSpace>, members: BTreeSet<usize>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptySubset);
        }
        if let Some(&bad) = members.iter().find(|&&i| i >= space.len()) {
            return Err(Error::PointIndexOutOfRange(bad));
        }
        Ok(FiniteSubset { space, members })
    }

    pub fn from_labels<S: AsRef<str>>(
        space: Arc<FinUltrametricSpace>,
        labels: &[S],
    ) -> Result<Self> {
        let members = labels
            .iter()
            .map(|l| space.index_of(l.as_ref()))
            .collect::<Result<_>>()?;
        Self::new(space, members)
    }

    pub fn singleton(space: Arc<FinUltrametricSpace>, point: usize) -> Result<Self> {
        Self::new(space, BTreeSet::from([point]))
    }

    pub fn space(&self) -> &Arc<FinUltrametricSpace> {
        &self.space
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn contains(&self, point: usize) -> bool {
        self.members.contains(&point)
    }

    pub fn labels(&self) -> Vec<String> {
        self.members
            .iter()
            .map(|&i| self.space.label(i).to_string())
            .collect()
    }

    /// Union, the multiplication of the hyperspace monad.
    pub fn union(&self, other: &FiniteSubset) -> Result<FiniteSubset> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::MismatchedSpaces);
        }
        let members = self.members.union(&other.members).copied().collect();
        Ok(FiniteSubset {
            space: self.space.clone(),
            members,
        })
    }
}

/// Hausdorff distance between two nonempty subsets of the same space.
pub fn hausdorff_distance(a: &FiniteSubset, b: &FiniteSubset) -> Result<Rational> {
    if !same_space(&a.space, &b.space) {
        return Err(Error::MismatchedSpaces);
    }
    let space = &a.space;
    let directed = |from: &BTreeSet<usize>, to: &BTreeSet<usize>| {
        from.iter()
            .map(|&x| to.iter().map(|&y| space.distance(x, y)).min().unwrap())
            .max()
            .unwrap()
            .clone()
    };
    Ok(directed(&a.members, &b.members).max(directed(&b.members, &a.members)))
}
