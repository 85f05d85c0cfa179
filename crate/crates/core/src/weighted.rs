//! Canonical weighted atoms over an arbitrary ordered carrier.
//!
//! [`Weighted<P>`] is the algebra shared by both monads: it does not know
//! about metrics, so the same code flattens measures, measures of measures
//! and measures on orbit tuples. Typed wrappers in [`crate::measures`] and
//! [`crate::monad`] attach the underlying space.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Error, ExtReal, Result};

/// Which idempotent semiring the weights live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    /// Weights in `[-inf, +inf]`, combined with `min`; some weight is `+inf`.
    MaxMin,
    /// Weights in `[-inf, 0]`, combined with `+`; some weight is `0`.
    MaxPlus,
}

impl MeasureKind {
    /// Weight of a Dirac atom.
    pub fn unit(self) -> ExtReal {
        match self {
            MeasureKind::MaxMin => ExtReal::PosInf,
            MeasureKind::MaxPlus => ExtReal::zero(),
        }
    }

    /// Semiring product: `min` for max-min, `+` for max-plus.
    ///
    /// `-inf` absorbs; the undefined `(+inf) + (-inf)` also yields `-inf`,
    /// which never arises between canonical weights.
    pub fn combine(self, a: &ExtReal, b: &ExtReal) -> ExtReal {
        match self {
            MeasureKind::MaxMin => a.min(b).clone(),
            MeasureKind::MaxPlus => a.checked_add(b).unwrap_or(ExtReal::NegInf),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::MaxMin => "maxmin",
            MeasureKind::MaxPlus => "maxplus",
        }
    }
}

/// A finite join `V_i w_i * delta_{p_i}` in canonical form: distinct
/// points, no `-inf` weights, normalized.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weighted<P: Ord> {
    kind: MeasureKind,
    atoms: BTreeMap<P, ExtReal>,
}

fn merge_max<P: Ord>(raw: impl IntoIterator<Item = (P, ExtReal)>) -> BTreeMap<P, ExtReal> {
    let mut atoms = BTreeMap::new();
    for (p, w) in raw {
        if w == ExtReal::NegInf {
            continue;
        }
        atoms
            .entry(p)
            .and_modify(|cur: &mut ExtReal| {
                if w > *cur {
                    *cur = w.clone();
                }
            })
            .or_insert(w);
    }
    atoms
}

impl<P: Ord + Clone> Weighted<P> {
    /// Canonicalizes raw atoms: duplicates merge by max, `-inf` atoms are
    /// dropped, then normalization is checked.
    pub fn new(kind: MeasureKind, raw: impl IntoIterator<Item = (P, ExtReal)>) -> Result<Self> {
        let raw: Vec<(P, ExtReal)> = raw.into_iter().collect();
        if raw.is_empty() {
            return Err(Error::NoAtoms);
        }
        if kind == MeasureKind::MaxPlus {
            if let Some((_, w)) = raw.iter().find(|(_, w)| *w > ExtReal::zero()) {
                return Err(Error::WeightOutOfRange(w.to_string()));
            }
        }
        let atoms = merge_max(raw);
        if atoms.is_empty() {
            return Err(Error::EmptySupport);
        }
        let top = atoms.values().max().expect("nonempty");
        if *top != kind.unit() {
            return Err(Error::NotNormalized);
        }
        Ok(Weighted { kind, atoms })
    }

    /// Callers guarantee the result is normalized.
    fn from_normalized(kind: MeasureKind, raw: impl IntoIterator<Item = (P, ExtReal)>) -> Self {
        let atoms = merge_max(raw);
        debug_assert!(atoms.values().max() == Some(&kind.unit()));
        Weighted { kind, atoms }
    }

    pub fn dirac(kind: MeasureKind, point: P) -> Self {
        Weighted {
            kind,
            atoms: BTreeMap::from([(point, kind.unit())]),
        }
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn atoms(&self) -> &BTreeMap<P, ExtReal> {
        &self.atoms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&P, &ExtReal)> {
        self.atoms.iter()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Weight at `p`, `-inf` off the support.
    pub fn weight(&self, p: &P) -> ExtReal {
        self.atoms.get(p).cloned().unwrap_or(ExtReal::NegInf)
    }

    pub fn support(&self) -> impl Iterator<Item = &P> {
        self.atoms.keys()
    }

    /// `mu(phi) = V_i w_i * phi(p_i)`.
    pub fn evaluate(&self, mut phi: impl FnMut(&P) -> ExtReal) -> ExtReal {
        self.atoms
            .iter()
            .map(|(p, w)| self.kind.combine(w, &phi(p)))
            .max()
            .unwrap_or(ExtReal::NegInf)
    }

    /// `mu(A) = V {w_i : p_i in A}`, `-inf` for an empty join.
    pub fn set_value(&self, mut contains: impl FnMut(&P) -> bool) -> ExtReal {
        self.atoms
            .iter()
            .filter(|(p, _)| contains(p))
            .map(|(_, w)| w.clone())
            .max()
            .unwrap_or(ExtReal::NegInf)
    }

    /// Pushforward along `f`; colliding atoms merge by max.
    pub fn map<Q: Ord + Clone>(&self, mut f: impl FnMut(&P) -> Q) -> Weighted<Q> {
        Weighted::from_normalized(self.kind, self.atoms.iter().map(|(p, w)| (f(p), w.clone())))
    }

    /// Kleisli extension: `V_i w_i * f(p_i)`, flattened.
    pub fn bind<Q: Ord + Clone>(
        &self,
        mut f: impl FnMut(&P) -> Result<Weighted<Q>>,
    ) -> Result<Weighted<Q>> {
        let mut raw = Vec::new();
        for (p, w) in &self.atoms {
            let inner = f(p)?;
            if inner.kind != self.kind {
                return Err(Error::MixedKinds);
            }
            raw.extend(
                inner
                    .atoms
                    .into_iter()
                    .map(|(q, v)| (q, self.kind.combine(w, &v))),
            );
        }
        Ok(Weighted::from_normalized(self.kind, raw))
    }

    /// Atom-wise weight transform onto another kind. `f` must send the
    /// source unit to the target unit and preserve order.
    pub fn map_weights(
        &self,
        kind: MeasureKind,
        mut f: impl FnMut(&ExtReal) -> ExtReal,
    ) -> Result<Self> {
        Weighted::new(kind, self.atoms.iter().map(|(p, w)| (p.clone(), f(w))))
    }

    /// `V_ij combine(a_i, b_j) * delta_{(p_i, q_j)}`.
    pub fn tensor<Q: Ord + Clone>(&self, other: &Weighted<Q>) -> Result<Weighted<(P, Q)>> {
        if self.kind != other.kind {
            return Err(Error::MixedKinds);
        }
        let raw = self.atoms.iter().flat_map(|(p, a)| {
            other
                .atoms
                .iter()
                .map(move |(q, b)| ((p.clone(), q.clone()), self.kind.combine(a, b)))
        });
        Ok(Weighted::from_normalized(self.kind, raw))
    }

    /// n-fold tensor with tuple-valued points.
    pub fn tensor_all(factors: &[Weighted<P>]) -> Result<Weighted<Vec<P>>> {
        let (first, rest) = factors.split_first().ok_or(Error::NoAtoms)?;
        let mut acc = first.map(|p| vec![p.clone()]);
        for f in rest {
            if f.kind != acc.kind {
                return Err(Error::MixedKinds);
            }
            acc = acc.bind(|tuple| {
                Ok(f.map(|p| {
                    let mut t = tuple.clone();
                    t.push(p.clone());
                    t
                }))
            })?;
        }
        Ok(acc)
    }
}

impl<Q: Ord + Clone> Weighted<Weighted<Q>> {
    /// Monad multiplication.
    pub fn flatten(&self) -> Result<Weighted<Q>> {
        self.bind(|inner| Ok(inner.clone()))
    }
}
