//! The max-min monad (`delta`, `xi`) and the max-plus monad (`delta`,
//! `zeta`), Kleisli composition, the weight-conversion family between the
//! two functors, the support morphism into the hyperspace monad, and the
//! witness that the conversion is not a monad morphism.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::measures::measure_distance;
use crate::ultra::same_space;
use crate::{
    Error, ExtReal, FinUltrametricSpace, FiniteSubset, Measure, MeasureKind, Rational, Result,
    TestFunction, Weighted,
};

/// A measure whose atoms are measures on `space`, i.e. an element of
/// `J(J(X))` or `I(I(X))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureOfMeasures {
    space: Arc<FinUltrametricSpace>,
    weights: Weighted<Weighted<usize>>,
}

impl MeasureOfMeasures {
    /// Canonicalizes outer atoms. Equal inner measures merge by max.
    pub fn new(
        kind: MeasureKind,
        space: Arc<FinUltrametricSpace>,
        outer: impl IntoIterator<Item = (Measure, ExtReal)>,
    ) -> Result<Self> {
        let mut raw = Vec::new();
        for (m, w) in outer {
            if m.kind() != kind {
                return Err(Error::MixedKinds);
            }
            if !same_space(m.space(), &space) {
                return Err(Error::MismatchedSpaces);
            }
            raw.push((m.into_weights(), w));
        }
        Ok(MeasureOfMeasures {
            space,
            weights: Weighted::new(kind, raw)?,
        })
    }

    pub fn from_weighted(
        space: Arc<FinUltrametricSpace>,
        weights: Weighted<Weighted<usize>>,
    ) -> Result<Self> {
        for inner in weights.support() {
            if inner.kind() != weights.kind() {
                return Err(Error::MixedKinds);
            }
            if let Some(&bad) = inner.support().find(|&&p| p >= space.len()) {
                return Err(Error::PointIndexOutOfRange(bad));
            }
        }
        Ok(MeasureOfMeasures { space, weights })
    }

    /// Outer Dirac measure `delta_mu`.
    pub fn dirac(mu: &Measure) -> Self {
        MeasureOfMeasures {
            space: mu.space().clone(),
            weights: Weighted::dirac(mu.kind(), mu.weights().clone()),
        }
    }

    /// `J(delta)(mu)`: every atom replaced by its Dirac measure.
    pub fn lift_diracs(mu: &Measure) -> Self {
        let kind = mu.kind();
        MeasureOfMeasures {
            space: mu.space().clone(),
            weights: mu.weights().map(|&x| Weighted::dirac(kind, x)),
        }
    }

    pub fn kind(&self) -> MeasureKind {
        self.weights.kind()
    }

    pub fn space(&self) -> &Arc<FinUltrametricSpace> {
        &self.space
    }

    pub fn weights(&self) -> &Weighted<Weighted<usize>> {
        &self.weights
    }

    pub fn into_weights(self) -> Weighted<Weighted<usize>> {
        self.weights
    }

    pub fn outer_atoms(&self) -> Vec<(Measure, ExtReal)> {
        self.weights
            .iter()
            .map(|(inner, w)| {
                let m = Measure::from_weighted(self.space.clone(), inner.clone())
                    .expect("checked on construction");
                (m, w.clone())
            })
            .collect()
    }
}

/// Monad multiplication: `xi` for max-min (outer and inner weights combined
/// by `min`), `zeta` for max-plus (combined by `+`).
pub fn multiply(m: &MeasureOfMeasures) -> Measure {
    let flat = m
        .weights
        .flatten()
        .expect("inner kinds checked on construction");
    Measure::from_weighted(m.space.clone(), flat).expect("checked on construction")
}

/// A depth-three nesting, an element of `J(J(J(X)))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureTower {
    space: Arc<FinUltrametricSpace>,
    weights: Weighted<Weighted<Weighted<usize>>>,
}

impl MeasureTower {
    pub fn from_weighted(
        space: Arc<FinUltrametricSpace>,
        weights: Weighted<Weighted<Weighted<usize>>>,
    ) -> Result<Self> {
        for middle in weights.support() {
            if middle.kind() != weights.kind() {
                return Err(Error::MixedKinds);
            }
            MeasureOfMeasures::from_weighted(space.clone(), middle.clone())?;
        }
        Ok(MeasureTower { space, weights })
    }

    pub fn kind(&self) -> MeasureKind {
        self.weights.kind()
    }

    pub fn space(&self) -> &Arc<FinUltrametricSpace> {
        &self.space
    }

    /// `xi_{J(X)}`: flatten the outer two levels.
    pub fn multiply_outer(&self) -> MeasureOfMeasures {
        MeasureOfMeasures {
            space: self.space.clone(),
            weights: self.weights.flatten().expect("kinds checked"),
        }
    }

    /// `J(xi_X)`: flatten each middle measure in place.
    pub fn multiply_inner(&self) -> MeasureOfMeasures {
        MeasureOfMeasures {
            space: self.space.clone(),
            weights: self.weights.map(|m| m.flatten().expect("kinds checked")),
        }
    }
}

/// `phi_bar(mu) = mu(phi)` on the given measures, in input order.
pub fn lift_test_function(
    phi: &TestFunction,
    measures: &[Measure],
) -> Result<Vec<(Measure, ExtReal)>> {
    measures
        .iter()
        .map(|m| Ok((m.clone(), m.evaluate(phi)?)))
        .collect()
}

/// A measure-valued map `X -> J(Y)` (or `X -> I(Y)`), a Kleisli arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    kind: MeasureKind,
    source: Arc<FinUltrametricSpace>,
    target: Arc<FinUltrametricSpace>,
    images: Vec<Weighted<usize>>,
}

impl Kernel {
    /// `images[x]` is the image of source point `x`.
    pub fn new(
        source: Arc<FinUltrametricSpace>,
        target: Arc<FinUltrametricSpace>,
        images: Vec<Measure>,
    ) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::ArityMismatch {
                expected: source.len(),
                got: images.len(),
            });
        }
        let kind = images.first().map(Measure::kind).ok_or(Error::EmptySpace)?;
        let mut out = Vec::with_capacity(images.len());
        for m in images {
            if m.kind() != kind {
                return Err(Error::MixedKinds);
            }
            if !same_space(m.space(), &target) {
                return Err(Error::MismatchedSpaces);
            }
            out.push(m.into_weights());
        }
        Ok(Kernel {
            kind,
            source,
            target,
            images: out,
        })
    }

    /// `x -> delta_x`, the Kleisli identity.
    pub fn unit(kind: MeasureKind, space: Arc<FinUltrametricSpace>) -> Self {
        let images = (0..space.len()).map(|x| Weighted::dirac(kind, x)).collect();
        Kernel {
            kind,
            source: space.clone(),
            target: space,
            images,
        }
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn source(&self) -> &Arc<FinUltrametricSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinUltrametricSpace> {
        &self.target
    }

    pub fn image(&self, x: usize) -> Measure {
        Measure::from_weighted(self.target.clone(), self.images[x].clone()).expect("checked")
    }

    /// Kleisli extension applied to a measure: `mult(J(self)(mu))`.
    pub fn extend(&self, mu: &Measure) -> Result<Measure> {
        if mu.kind() != self.kind {
            return Err(Error::MixedKinds);
        }
        if !same_space(mu.space(), &self.source) {
            return Err(Error::MismatchedSpaces);
        }
        let flat = mu.weights().bind(|&x| Ok(self.images[x].clone()))?;
        Measure::from_weighted(self.target.clone(), flat)
    }

    /// `g * f = mult . J(g) . f`, i.e. `self` first, then `next`.
    pub fn then(&self, next: &Kernel) -> Result<Kernel> {
        if self.kind != next.kind {
            return Err(Error::MixedKinds);
        }
        if !same_space(&self.target, &next.source) {
            return Err(Error::MismatchedSpaces);
        }
        let images = self
            .images
            .iter()
            .map(|m| m.bind(|&y| Ok(next.images[y].clone())))
            .collect::<Result<_>>()?;
        Ok(Kernel {
            kind: self.kind,
            source: self.source.clone(),
            target: next.target.clone(),
            images,
        })
    }
}

/// `(g * f)(x) = mult(J(g)(f(x)))`.
pub fn kleisli_compose(f: &Kernel, g: &Kernel) -> Result<Kernel> {
    f.then(g)
}

/// A strictly increasing bijection `[-inf, 0] -> [-inf, +inf]`, exact on
/// rationals.
///
/// With breakpoint `b`, slope `k`, scale `m` and offset `o`:
///
/// ```text
/// t <= -b       :  o + k (t + b)
/// -b <= t < 0   :  o + m (-b/t - 1)
/// t = 0         :  +inf
/// ```
///
/// The default (`b = k = m = 1`, `o = 0`) sends `-3, -2, -1, -1/2` to
/// `-2, -1, 0, 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderBijection {
    name: String,
    breakpoint: Rational,
    slope: Rational,
    scale: Rational,
    offset: Rational,
}

impl Default for OrderBijection {
    fn default() -> Self {
        let one = Rational::one();
        OrderBijection {
            name: "default".into(),
            breakpoint: one.clone(),
            slope: one.clone(),
            scale: one,
            offset: Rational::zero(),
        }
    }
}

impl fmt::Display for OrderBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl OrderBijection {
    pub fn rational(
        breakpoint: Rational,
        slope: Rational,
        scale: Rational,
        offset: Rational,
    ) -> Result<Self> {
        if !(breakpoint.is_positive() && slope.is_positive() && scale.is_positive()) {
            return Err(Error::Parse(
                "order bijection parameters must be positive".into(),
            ));
        }
        let name = format!(
            "piecewise(b={}, k={}, m={}, o={})",
            ExtReal::Finite(breakpoint.clone()),
            ExtReal::Finite(slope.clone()),
            ExtReal::Finite(scale.clone()),
            ExtReal::Finite(offset.clone())
        );
        Ok(OrderBijection {
            name,
            breakpoint,
            slope,
            scale,
            offset,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Max-plus weight to max-min weight.
    pub fn forward(&self, t: &ExtReal) -> Result<ExtReal> {
        let t = match t {
            ExtReal::NegInf => return Ok(ExtReal::NegInf),
            ExtReal::PosInf => return Err(Error::WeightOutOfRange(t.to_string())),
            ExtReal::Finite(t) => t,
        };
        if t.is_zero() {
            return Ok(ExtReal::PosInf);
        }
        if t.is_positive() {
            return Err(Error::WeightOutOfRange(
                ExtReal::Finite(t.clone()).to_string(),
            ));
        }
        let b = &self.breakpoint;
        let v = if *t <= -b.clone() {
            &self.offset + &self.slope * (t + b)
        } else {
            &self.offset + &self.scale * (-(b / t) - Rational::one())
        };
        Ok(ExtReal::Finite(v))
    }

    /// Max-min weight to max-plus weight.
    pub fn inverse(&self, s: &ExtReal) -> ExtReal {
        let s = match s {
            ExtReal::NegInf => return ExtReal::NegInf,
            ExtReal::PosInf => return ExtReal::zero(),
            ExtReal::Finite(s) => s,
        };
        let b = &self.breakpoint;
        let v = if *s <= self.offset {
            (s - &self.offset) / &self.slope - b
        } else {
            -(b / ((s - &self.offset) / &self.scale + Rational::one()))
        };
        ExtReal::Finite(v)
    }
}

/// The float-only weight map `t -> -ln(-t)`, used for display.
pub fn log_weight(t: &ExtReal) -> f64 {
    match t {
        ExtReal::NegInf => f64::NEG_INFINITY,
        ExtReal::PosInf => f64::NAN,
        ExtReal::Finite(_) => -(-t.to_f64()).ln(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    ToMaxMin,
    ToMaxPlus,
}

fn convert_weighted<P: Ord + Clone>(
    w: &Weighted<P>,
    alpha: &OrderBijection,
    direction: Direction,
) -> Result<Weighted<P>> {
    match (direction, w.kind()) {
        (Direction::ToMaxMin, MeasureKind::MaxPlus) => {
            let mut err = None;
            let out = w.map_weights(MeasureKind::MaxMin, |t| {
                alpha.forward(t).unwrap_or_else(|e| {
                    err = Some(e);
                    ExtReal::NegInf
                })
            });
            match err {
                Some(e) => Err(e),
                None => out,
            }
        }
        (Direction::ToMaxPlus, MeasureKind::MaxMin) => {
            w.map_weights(MeasureKind::MaxPlus, |s| alpha.inverse(s))
        }
        _ => Err(Error::KindMismatch),
    }
}

/// `g^alpha`: maps each atom weight through `alpha` (or its inverse).
pub fn convert(mu: &Measure, alpha: &OrderBijection, direction: Direction) -> Result<Measure> {
    let w = convert_weighted(mu.weights(), alpha, direction)?;
    Measure::from_weighted(mu.space().clone(), w)
}

/// Checks that `supp` commutes with the monad structure on `m`:
/// `supp(mult(M))` is the union of the inner supports, and `supp(delta_x)`
/// is `{x}` for every point.
pub fn support_morphism_check(m: &MeasureOfMeasures) -> bool {
    let flat = multiply(m).support();
    let union = m
        .outer_atoms()
        .iter()
        .map(|(inner, _)| inner.support())
        .reduce(|a, b| a.union(&b).expect("same space"));
    let units_ok = (0..m.space.len()).all(|x| {
        let d = Measure::dirac(m.kind(), m.space.clone(), x).expect("in range");
        d.support() == FiniteSubset::singleton(m.space.clone(), x).expect("in range")
    });
    union.as_ref() == Some(&flat) && units_ok
}

/// The two legs of the monad-morphism square for `g^alpha` on the fixed
/// three-point configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub input: MeasureOfMeasures,
    /// `g^alpha(zeta(M))`
    pub side1: Measure,
    /// `xi(J(g^alpha)(g^alpha(M)))`
    pub side2: Measure,
    pub distance: Rational,
}

/// `M = (-1)*delta_mu v delta_nu` over `{a, b, c}` with
/// `mu = (-2)*delta_a v delta_b` and `nu = (-3)*delta_b v delta_c`.
pub fn witness_input() -> MeasureOfMeasures {
    let x = Arc::new(FinUltrametricSpace::discrete(["a", "b", "c"]).expect("distinct labels"));
    let mp = MeasureKind::MaxPlus;
    let mu = Measure::from_labels(
        mp,
        x.clone(),
        [("a", ExtReal::int(-2)), ("b", ExtReal::zero())],
    )
    .expect("normalized");
    let nu = Measure::from_labels(
        mp,
        x.clone(),
        [("b", ExtReal::int(-3)), ("c", ExtReal::zero())],
    )
    .expect("normalized");
    MeasureOfMeasures::new(mp, x, [(mu, ExtReal::int(-1)), (nu, ExtReal::zero())])
        .expect("normalized")
}

/// Both legs differ for every injective order-preserving `alpha`: at `a`,
/// side one carries `alpha(-3)` and side two `alpha(-2)`.
pub fn non_isomorphism_witness(alpha: &OrderBijection) -> Result<Witness> {
    let m = witness_input();
    let side1 = convert(&multiply(&m), alpha, Direction::ToMaxMin)?;
    let outer = m
        .weights()
        .iter()
        .map(|(inner, w)| {
            Ok((
                convert_weighted(inner, alpha, Direction::ToMaxMin)?,
                alpha.forward(w)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let lifted = MeasureOfMeasures::from_weighted(
        m.space().clone(),
        Weighted::new(MeasureKind::MaxMin, outer)?,
    )?;
    let side2 = multiply(&lifted);
    let distance = measure_distance(&side1, &side2)?;
    Ok(Witness {
        input: m,
        side1,
        side2,
        distance,
    })
}

/// Float rendering of the witness legs under `t -> -ln(-t)`.
///
/// `min` and `max` commute with any increasing map, so side two is the
/// max-min flattening of the raw max-plus weights, mapped afterwards.
pub fn non_isomorphism_witness_log() -> (BTreeMap<String, f64>, BTreeMap<String, f64>) {
    let m = witness_input();
    let map = |w: &Weighted<usize>| -> BTreeMap<String, f64> {
        w.iter()
            .map(|(&p, t)| {
                let v = if t.is_zero() {
                    f64::INFINITY
                } else {
                    log_weight(t)
                };
                (m.space().label(p).to_string(), v)
            })
            .collect()
    };
    let side1 = map(multiply(&m).weights());
    let mut raw = Vec::new();
    for (inner, w) in m.weights().iter() {
        for (&p, v) in inner.iter() {
            raw.push((p, w.min(v).clone()));
        }
    }
    let side2 = Weighted::new(MeasureKind::MaxPlus, raw).expect("normalized");
    (side1, map(&side2))
}
