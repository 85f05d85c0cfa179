//! Exact idempotent measures on finite ultrametric spaces.
//!
//! Two kinds of finitely supported measures live here:
//!
//! | kind | functional | weights | normalization |
//! |------|------------|---------|---------------|
//! | [`MeasureKind::MaxMin`] | `max_i min(a_i, phi(x_i))` | `[-inf, +inf]` | some weight is `+inf` |
//! | [`MeasureKind::MaxPlus`] | `max_i (t_i + phi(x_i))` | `[-inf, 0]` | some weight is `0` |
//!
//! Both form monads (Dirac unit, flattening multiplication) on the category of
//! finite ultrametric spaces and nonexpanding maps. The space of measures is
//! itself ultrametric: two measures are within `r` of each other exactly when
//! their pushforwards to the quotient by open `r`-balls coincide.
//!
//! All arithmetic is exact ([`ExtReal`] wraps arbitrary precision rationals),
//! so every law is checked by plain equality of canonical forms.
//!
//! Only finitely supported measures on finite spaces are modelled. They are
//! dense in the completed construction, so identities checked here are the
//! ones that extend to the completion by continuity.
//!
//! ```
//! use std::sync::Arc;
//! use ultrameasure::{measures::measure_distance, FinUltrametricSpace, Measure, MeasureKind, Rational};
//!
//! let x = Arc::new(FinUltrametricSpace::discrete(["a", "b"])?);
//! let da = Measure::dirac_label(MeasureKind::MaxMin, x.clone(), "a")?;
//! let db = Measure::dirac_label(MeasureKind::MaxMin, x, "b")?;
//! assert_eq!(measure_distance(&da, &db)?, Rational::from_integer(1.into()));
//! # Ok::<(), ultrameasure::Error>(())
//! ```

mod error;
mod ext_real;

pub mod io;
pub mod laws;
pub mod measures;
pub mod monad;
pub mod sample;
pub mod sympow;
pub mod tensor;
pub mod ultra;
pub mod weighted;

pub use error::{Error, Result};
pub use ext_real::{parse_rational, ExtReal, Rational};
pub use measures::{Measure, MeasureKind, TestFunction};
pub use monad::{Kernel, MeasureOfMeasures, MeasureTower, OrderBijection};
pub use sympow::{OrbitPoint, Permutation, PermutationGroup};
pub use ultra::{Budgets, FinUltrametricSpace, FiniteSubset, Partition, PointMap};
pub use weighted::Weighted;
