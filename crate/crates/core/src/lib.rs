//! Certified computation with powers of real numbers.
//!
//! The crate is organised around a small certified-arithmetic kernel and a
//! set of number-theoretic constructions built on top of it:
//!
//! * [`dyadic`] -- exact arbitrary-precision dyadic rationals, the raw
//!   material for everything else.
//! * [`certreal`] -- midpoint/radius balls over dyadics with outward
//!   rounding, elementary functions, and refine-until-decided comparisons.
//! * [`radical`] -- sums of square-free radicals with integer coefficients
//!   and searches for small fractional parts among them.
//! * [`approx`] -- constructive rational approximation of reals by sums of
//!   radicals, with per-instance certificates.
//! * [`gaps`] -- gaps in sets of sums of two power functions, including
//!   certified next-element searches.
//! * [`metric`] -- exceptional exponents for power-free approximation:
//!   counting solutions, measuring solution sets, and constructing
//!   exponents with prescribed approximation behaviour.
//!
//! Every numeric claim that leaves this crate is backed by an interval
//! enclosure: a verdict of `Le` or `Gt` means the inequality holds for the
//! entire enclosure, and `Undecided` is reported rather than guessed when
//! the precision cap is reached.

pub mod certreal;
pub mod dyadic;
pub mod error;
pub mod radical;

pub use certreal::{BoundVerdict, CertReal, Precision};
pub use dyadic::{Dyadic, Round};
pub use error::{Error, Result};
