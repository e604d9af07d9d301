use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::normal;
use crate::exactnum::rational::fmt_rational;
use crate::exactnum::{to_certified, CertifiedReal, Dyadic, Rounding};

/// Something that can be enclosed at any requested precision.
pub trait Enclose {
    fn enclose(&self, prec: u32) -> CertifiedReal;
}

impl Enclose for BigRational {
    fn enclose(&self, prec: u32) -> CertifiedReal {
        to_certified(self, prec)
    }
}

/// A fixed enclosure; asking for more precision cannot tighten it.
impl Enclose for CertifiedReal {
    fn enclose(&self, _prec: u32) -> CertifiedReal {
        self.clone()
    }
}

/// Adapter for closures `prec -> enclosure`.
pub struct Lazy<F>(pub F);

impl<F: Fn(u32) -> CertifiedReal> Enclose for Lazy<F> {
    fn enclose(&self, prec: u32) -> CertifiedReal {
        (self.0)(prec)
    }
}

fn sqrt_rational(q: &BigRational, prec: u32) -> CertifiedReal {
    if q.is_zero() {
        return CertifiedReal::zero(prec);
    }
    let wp = prec + 8;
    let lo = Dyadic::from_rational(q, wp, Rounding::Down).sqrt_round(prec, Rounding::Down);
    let hi = Dyadic::from_rational(q, wp, Rounding::Up).sqrt_round(prec, Rounding::Up);
    CertifiedReal::from_bounds(lo, hi, prec)
}

/// A positive scale given exactly: either `sqrt(q)` or the interpolation
/// `(1-λ) sqrt(a) + λ sqrt(b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scale {
    Sqrt(BigRational),
    Interp {
        lambda: BigRational,
        lo_sq: BigRational,
        hi_sq: BigRational,
    },
}

impl Scale {
    pub fn sqrt(q: BigRational) -> Scale {
        Scale::Sqrt(q)
    }

    /// `(1-λ) sqrt(lo_sq) + λ sqrt(hi_sq)`, collapsed to `Sqrt` when exact.
    pub fn interp(lambda: BigRational, lo_sq: BigRational, hi_sq: BigRational) -> Scale {
        if lambda.is_zero() || lo_sq == hi_sq {
            Scale::Sqrt(lo_sq)
        } else if lambda.is_one() {
            Scale::Sqrt(hi_sq)
        } else {
            Scale::Interp {
                lambda,
                lo_sq,
                hi_sq,
            }
        }
    }

    /// `τ²` as an exact rational when available.
    pub fn square_exact(&self) -> Option<&BigRational> {
        match self {
            Scale::Sqrt(q) => Some(q),
            Scale::Interp { .. } => None,
        }
    }

    pub fn square(&self, prec: u32) -> CertifiedReal {
        match self {
            Scale::Sqrt(q) => to_certified(q, prec),
            Scale::Interp { .. } => self.enclose(prec).sqr(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scale::Sqrt(q) => q.is_positive(),
            Scale::Interp { lo_sq, hi_sq, .. } => lo_sq.is_positive() || hi_sq.is_positive(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.enclose(64).mid_f64()
    }
}

impl Enclose for Scale {
    fn enclose(&self, prec: u32) -> CertifiedReal {
        match self {
            Scale::Sqrt(q) => sqrt_rational(q, prec),
            Scale::Interp {
                lambda,
                lo_sq,
                hi_sq,
            } => {
                let wp = prec + 4;
                let a = sqrt_rational(lo_sq, wp);
                let b = sqrt_rational(hi_sq, wp);
                let one_minus = BigRational::one() - lambda;
                a.mul_rational(&one_minus)
                    .add(&b.mul_rational(lambda))
                    .with_precision(prec)
            }
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scale::Sqrt(q) => write!(f, "sqrt({})", fmt_rational(q)),
            Scale::Interp {
                lambda,
                lo_sq,
                hi_sq,
            } => write!(
                f,
                "{}*sqrt({}) + {}*sqrt({})",
                fmt_rational(&(BigRational::one() - lambda)),
                fmt_rational(lo_sq),
                fmt_rational(lambda),
                fmt_rational(hi_sq)
            ),
        }
    }
}

/// Normal law with exact mean and scale `τ > 0`; `G(s) = Φ((s - mean)/τ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalModel {
    pub mean: BigRational,
    pub tau: Scale,
}

impl NormalModel {
    /// Panics unless `τ > 0`.
    pub fn new(mean: BigRational, tau: Scale) -> Self {
        assert!(tau.is_positive(), "normal scale must be positive");
        NormalModel { mean, tau }
    }

    /// `(s - mean) / τ`.
    pub fn standardize(&self, s: &BigRational, prec: u32) -> CertifiedReal {
        let z = s - &self.mean;
        if z.is_zero() {
            return CertifiedReal::zero(prec);
        }
        match &self.tau {
            Scale::Sqrt(q) => {
                let mag = sqrt_rational(&(&z * &z / q), prec);
                if z.is_negative() {
                    mag.neg()
                } else {
                    mag
                }
            }
            tau => to_certified(&z, prec + 4)
                .div(&tau.enclose(prec + 4))
                .with_precision(prec),
        }
    }

    /// `G(s)`.
    pub fn cdf(&self, s: &BigRational, prec: u32) -> CertifiedReal {
        normal::cdf(&self.standardize(s, prec))
    }

    /// `1 - G(s)`.
    pub fn sf(&self, s: &BigRational, prec: u32) -> CertifiedReal {
        normal::sf(&self.standardize(s, prec))
    }

    /// `G(b) - G(a)`.
    pub fn increment(&self, a: &BigRational, b: &BigRational, prec: u32) -> CertifiedReal {
        normal::increment(&self.standardize(a, prec), &self.standardize(b, prec))
    }

    /// Density of the model at `s`, `φ((s-mean)/τ)/τ`.
    pub fn pdf(&self, s: &BigRational, prec: u32) -> CertifiedReal {
        normal::pdf(&self.standardize(s, prec)).div(&self.tau.enclose(prec))
    }
}
