//! Permutation groups, symmetric powers `SP^n_G(X)` with the bottleneck
//! ultrametric, and the extension `theta` of `SP^n_G` to max-min measures.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use crate::io::weighted_to_json;
use crate::laws::{run_law, LawReport, LawResult, SampleBudget};
use crate::sample::random_measure_of_measures;
use crate::ultra::{same_space, Product};
use crate::{
    Budgets, Error, FinUltrametricSpace, Measure, MeasureKind, MeasureOfMeasures, PointMap,
    Rational, Result, Weighted,
};

/// A permutation of `0..n` in one-line notation: `i -> images[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let distinct: BTreeSet<_> = images.iter().collect();
        if distinct.len() != n || images.iter().any(|&i| i >= n) {
            return Err(Error::InvalidPermutation(format!("{images:?}")));
        }
        Ok(Permutation(images))
    }

    /// From 1-based one-line images, as in `[2, 1, 3]`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let shifted = images
            .iter()
            .map(|&i| {
                i.checked_sub(1)
                    .ok_or_else(|| Error::InvalidPermutation(format!("{images:?}")))
            })
            .collect::<Result<_>>()?;
        Self::new(shifted)
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `(self . other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    /// `(x_1, ..., x_n) -> (x_{s(1)}, ..., x_{s(n)})`.
    pub fn permute<T: Clone>(&self, tuple: &[T]) -> Vec<T> {
        self.0.iter().map(|&i| tuple[i].clone()).collect()
    }
}

/// A subgroup of `S_n`, materialized as a sorted element list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationGroup {
    n: usize,
    elements: Vec<Permutation>,
}

impl PermutationGroup {
    /// Closure of `generators` under composition, by breadth-first search
    /// from the identity. Fails once more than `budget` elements appear.
    pub fn generate(n: usize, generators: &[Permutation], budget: usize) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != n) {
            return Err(Error::InvalidPermutation(format!(
                "{:?} does not act on {n} points",
                g.images()
            )));
        }
        let identity = Permutation::identity(n);
        let mut seen = BTreeSet::from([identity.clone()]);
        let mut queue = VecDeque::from([identity]);
        while let Some(p) = queue.pop_front() {
            for g in generators {
                let next = g.compose(&p);
                if seen.insert(next.clone()) {
                    if seen.len() > budget {
                        return Err(Error::GroupBudgetExceeded { budget });
                    }
                    queue.push_back(next);
                }
            }
        }
        Ok(PermutationGroup {
            n,
            elements: seen.into_iter().collect(),
        })
    }

    /// The full symmetric group on `n` points.
    pub fn symmetric(n: usize, budget: usize) -> Result<Self> {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(0, 1);
            gens.push(Permutation(swap));
            gens.push(Permutation((1..n).chain([0]).collect()));
        }
        Self::generate(n, &gens, budget)
    }

    pub fn trivial(n: usize) -> Self {
        PermutationGroup {
            n,
            elements: vec![Permutation::identity(n)],
        }
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    /// Lexicographically least tuple in the orbit.
    pub fn canonical<T: Ord + Clone>(&self, tuple: &[T]) -> Vec<T> {
        self.elements
            .iter()
            .map(|s| s.permute(tuple))
            .min()
            .expect("groups contain the identity")
    }

    fn check_arity(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: len,
            });
        }
        Ok(())
    }
}

/// An orbit `[x_1, ..., x_n]` stored by its least representative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrbitPoint {
    representative: Vec<usize>,
}

impl OrbitPoint {
    pub fn new(group: &PermutationGroup, tuple: &[usize]) -> Result<Self> {
        group.check_arity(tuple.len())?;
        Ok(OrbitPoint {
            representative: group.canonical(tuple),
        })
    }

    pub fn representative(&self) -> &[usize] {
        &self.representative
    }
}

/// `min over s in G of max_i d(x_i, y_{s(i)})`.
pub fn sympow_distance(
    space: &FinUltrametricSpace,
    group: &PermutationGroup,
    x: &OrbitPoint,
    y: &OrbitPoint,
) -> Result<Rational> {
    group.check_arity(x.representative.len())?;
    group.check_arity(y.representative.len())?;
    for &p in x.representative.iter().chain(&y.representative) {
        if p >= space.len() {
            return Err(Error::PointIndexOutOfRange(p));
        }
    }
    Ok(bottleneck_over_group(
        space,
        group,
        &x.representative,
        &y.representative,
    ))
}

fn bottleneck_over_group(
    space: &FinUltrametricSpace,
    group: &PermutationGroup,
    x: &[usize],
    y: &[usize],
) -> Rational {
    group
        .elements
        .iter()
        .map(|s| {
            x.iter()
                .zip(s.permute(y))
                .map(|(&a, b)| space.distance(a, b))
                .max()
                .cloned()
                .unwrap_or_default()
        })
        .min()
        .expect("groups contain the identity")
}

/// A materialized symmetric power together with the orbit map from the
/// product.
#[derive(Debug, Clone)]
pub struct SymPower {
    base: Arc<FinUltrametricSpace>,
    group: PermutationGroup,
    product: Product,
    space: Arc<FinUltrametricSpace>,
    orbits: Vec<Vec<usize>>,
    index: BTreeMap<Vec<usize>, usize>,
    orbit_map: PointMap,
}

impl SymPower {
    pub fn new(
        base: &Arc<FinUltrametricSpace>,
        group: &PermutationGroup,
        budgets: &Budgets,
    ) -> Result<Self> {
        if group.order() > budgets.group_order {
            return Err(Error::GroupBudgetExceeded {
                budget: budgets.group_order,
            });
        }
        let factors = vec![base.clone(); group.arity()];
        let product = Product::new(&factors, budgets.product_points)?;
        let reps: BTreeSet<Vec<usize>> = (0..product.space().len())
            .map(|i| group.canonical(&product.coords(i)))
            .collect();
        let orbits: Vec<Vec<usize>> = reps.into_iter().collect();
        let index: BTreeMap<Vec<usize>, usize> = orbits
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        let labels = orbits
            .iter()
            .map(|t| {
                let parts: Vec<&str> = t.iter().map(|&p| base.label(p)).collect();
                format!("[{}]", parts.join(","))
            })
            .collect();
        let dist = orbits
            .iter()
            .map(|x| {
                orbits
                    .iter()
                    .map(|y| bottleneck_over_group(base, group, x, y))
                    .collect()
            })
            .collect();
        let space = Arc::new(FinUltrametricSpace::trusted(labels, dist)?);
        let assignment = (0..product.space().len())
            .map(|i| index[&group.canonical(&product.coords(i))])
            .collect();
        let orbit_map = PointMap::new(product.space().clone(), space.clone(), assignment)?;
        Ok(SymPower {
            base: base.clone(),
            group: group.clone(),
            product,
            space,
            orbits,
            index,
            orbit_map,
        })
    }

    pub fn base(&self) -> &Arc<FinUltrametricSpace> {
        &self.base
    }

    pub fn group(&self) -> &PermutationGroup {
        &self.group
    }

    pub fn product(&self) -> &Product {
        &self.product
    }

    pub fn space(&self) -> &Arc<FinUltrametricSpace> {
        &self.space
    }

    /// `pi_G : X^n -> SP^n_G(X)`.
    pub fn orbit_map(&self) -> &PointMap {
        &self.orbit_map
    }

    pub fn orbit(&self, index: usize) -> &[usize] {
        &self.orbits[index]
    }

    pub fn orbit_index(&self, tuple: &[usize]) -> Result<usize> {
        self.group.check_arity(tuple.len())?;
        Ok(self.index[&self.group.canonical(tuple)])
    }

    /// `theta[mu_1, ..., mu_n] = J(pi_G)(mu_1 (x) ... (x) mu_n)`.
    pub fn theta(&self, measures: &[Measure]) -> Result<Measure> {
        self.group.check_arity(measures.len())?;
        let kind = measures[0].kind();
        if measures.iter().any(|m| m.kind() != kind) {
            return Err(Error::MixedKinds);
        }
        if kind != MeasureKind::MaxMin {
            return Err(Error::KindMismatch);
        }
        if measures.iter().any(|m| !same_space(m.space(), &self.base)) {
            return Err(Error::MismatchedSpaces);
        }
        let weights: Vec<_> = measures.iter().map(|m| m.weights().clone()).collect();
        let joint = theta_weighted(&self.group, &weights)?.map(|t| self.index[t]);
        Measure::from_weighted(self.space.clone(), joint)
    }
}

/// `theta` on any ordered carrier: tensor, then send each tuple to its
/// canonical orbit representative.
pub fn theta_weighted<P: Ord + Clone>(
    group: &PermutationGroup,
    factors: &[Weighted<P>],
) -> Result<Weighted<Vec<P>>> {
    group.check_arity(factors.len())?;
    Ok(Weighted::tensor_all(factors)?.map(|t| group.canonical(t)))
}

/// Checks the two extension conditions for `theta`:
///
/// * unit: `theta . SP(delta) = delta . pi_G`, on every tuple of points;
/// * multiplication: `xi . J(theta) . theta_{J} = theta . SP(xi)` on
///   `trials` random tuples of measures of measures.
pub fn check_kleisli_extension(
    group: &PermutationGroup,
    space: &Arc<FinUltrametricSpace>,
    trials: usize,
    seed: u64,
    budgets: &Budgets,
    sample_budget: &SampleBudget,
) -> Result<LawReport> {
    let sp = SymPower::new(space, group, budgets)?;
    let kind = MeasureKind::MaxMin;
    let mut report = LawReport::new();

    let tuples = sp.product.space().len();
    let mut unit = LawResult {
        trials: tuples,
        failures: 0,
        first_counterexample: None,
    };
    for i in 0..tuples {
        let coords = sp.product.coords(i);
        let diracs: Vec<Measure> = coords
            .iter()
            .map(|&x| Measure::dirac(kind, space.clone(), x))
            .collect::<Result<_>>()?;
        let left = sp.theta(&diracs)?;
        let right = Measure::dirac(kind, sp.space.clone(), sp.orbit_map.apply(i))?;
        if left != right {
            unit.failures += 1;
            unit.first_counterexample.get_or_insert_with(
                || serde_json::json!({ "tuple": space_labels(space, &coords) }),
            );
        }
    }
    report.insert("unit".into(), unit);

    let n = group.arity();
    let mut error = None;
    let mult = run_law(seed, 11, trials, |rng| {
        let ms: Vec<MeasureOfMeasures> = (0..n)
            .map(|_| {
                random_measure_of_measures(
                    rng,
                    kind,
                    space,
                    sample_budget.max_outer,
                    sample_budget.max_inner,
                )
            })
            .collect();
        match multiplication_legs(group, &ms) {
            Ok((left, right)) => (left != right).then(|| {
                serde_json::json!({
                    "left": weighted_to_json(&left, |t| orbit_label(space, t)),
                    "right": weighted_to_json(&right, |t| orbit_label(space, t)),
                })
            }),
            Err(e) => {
                error.get_or_insert(e);
                Some(serde_json::Value::Null)
            }
        }
    });
    if let Some(e) = error {
        return Err(e);
    }
    report.insert("multiplication".into(), mult);
    Ok(report)
}

/// Left and right leg of the multiplication condition.
pub type Legs = (Weighted<Vec<usize>>, Weighted<Vec<usize>>);

/// Both sides of the multiplication condition on `[M_1, ..., M_n]`, as
/// measures on canonical orbit tuples.
pub fn multiplication_legs(group: &PermutationGroup, ms: &[MeasureOfMeasures]) -> Result<Legs> {
    let outer: Vec<Weighted<Weighted<usize>>> = ms.iter().map(|m| m.weights().clone()).collect();
    // theta_{J(X)} lands on orbits of measure tuples; J(theta_X) maps each
    // to a measure on orbits of point tuples; then flatten
    let on_measure_orbits = theta_weighted(group, &outer)?;
    let mut inner_err = None;
    let lifted = on_measure_orbits.map(|tuple| {
        theta_weighted(group, tuple).unwrap_or_else(|e| {
            inner_err = Some(e);
            Weighted::dirac(MeasureKind::MaxMin, Vec::new())
        })
    });
    if let Some(e) = inner_err {
        return Err(e);
    }
    let left = lifted.flatten()?;

    let flattened: Vec<Weighted<usize>> =
        outer.iter().map(|m| m.flatten()).collect::<Result<_>>()?;
    let right = theta_weighted(group, &flattened)?;
    Ok((left, right))
}

fn space_labels(space: &FinUltrametricSpace, tuple: &[usize]) -> Vec<String> {
    tuple.iter().map(|&p| space.label(p).to_string()).collect()
}

fn orbit_label(space: &FinUltrametricSpace, tuple: &[usize]) -> String {
    format!("[{}]", space_labels(space, tuple).join(","))
}
