//! Arithmetic substrate: exact rationals, dyadic floats, interval enclosures,
//! elementary functions and certified comparisons.

pub mod dyadic;
pub mod elementary;
pub mod rational;
pub mod real;
pub mod verdict;

pub use dyadic::{Dyadic, Rounding};
pub use rational::{binomial_coeff, binomial_int, ratio, ExactRational};
pub use real::{to_certified, CertifiedReal, MIN_PRECISION};
pub use verdict::{
    assert_strict_less, certify_le, certify_lt, PrecisionSchedule, Status, Verdict,
    DEFAULT_PRECISION, PRECISION_CAP,
};
