//! Outward-rounded interval enclosures of real numbers.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::dyadic::{Dyadic, Rounding};

/// Smallest precision accepted anywhere in the crate.
pub const MIN_PRECISION: u32 = 24;

/// An interval `[lo, hi]` that contains the real number it stands for.
///
/// Endpoints are dyadic floats kept at `precision_bits` significant bits,
/// `lo` rounded toward negative infinity and `hi` toward positive infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedReal {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl CertifiedReal {
    /// Interval from explicit endpoints. Panics when `lo > hi`.
    pub fn from_bounds(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo} > {hi}");
        let lo = lo.round(prec, Rounding::Down);
        let hi = hi.round(prec, Rounding::Up);
        CertifiedReal { lo, hi, prec }
    }

    pub fn point(x: Dyadic, prec: u32) -> Self {
        CertifiedReal::from_bounds(x.clone(), x, prec)
    }

    pub fn from_int(v: i64, prec: u32) -> Self {
        CertifiedReal::point(Dyadic::from_int(v), prec)
    }

    pub fn zero(prec: u32) -> Self {
        CertifiedReal::point(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        CertifiedReal::point(Dyadic::one(), prec)
    }

    /// Enclosure of a rational with width at most `2^(1-prec) * max(1, |x|)`.
    pub fn from_rational(x: &BigRational, prec: u32) -> Self {
        let prec = prec.max(MIN_PRECISION);
        CertifiedReal {
            lo: Dyadic::from_rational(x, prec, Rounding::Down),
            hi: Dyadic::from_rational(x, prec, Rounding::Up),
            prec,
        }
    }

    /// The smallest interval containing both `self` and `other`.
    pub fn hull(&self, other: &CertifiedReal) -> Self {
        CertifiedReal {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.prec.max(other.prec),
        }
    }

    /// Intersection, or `None` when the intervals are disjoint.
    pub fn intersect(&self, other: &CertifiedReal) -> Option<Self> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then(|| CertifiedReal {
            lo,
            hi,
            prec: self.prec.max(other.prec),
        })
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Same enclosure, tagged with (and rounded to) a different working precision.
    pub fn with_precision(&self, prec: u32) -> Self {
        CertifiedReal::from_bounds(self.lo.clone(), self.hi.clone(), prec)
    }

    /// `hi - lo`, rounded up.
    pub fn width(&self) -> Dyadic {
        self.hi.sub_round(&self.lo, 64, Rounding::Up)
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64()
    }

    pub fn mid_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    /// Exact midpoint of the endpoints.
    pub fn midpoint(&self) -> Dyadic {
        self.lo.add_exact(&self.hi).mul_pow2(-1)
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, x: &BigRational) -> bool {
        self.lo.to_rational() <= *x && *x <= self.hi.to_rational()
    }

    pub fn overlaps(&self, other: &CertifiedReal) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Certainly `> 0`.
    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Certainly `< 0`.
    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    fn p(&self, other: &CertifiedReal) -> u32 {
        self.prec.max(other.prec)
    }

    pub fn add(&self, other: &CertifiedReal) -> CertifiedReal {
        let prec = self.p(other);
        CertifiedReal {
            lo: self.lo.add_round(&other.lo, prec, Rounding::Down),
            hi: self.hi.add_round(&other.hi, prec, Rounding::Up),
            prec,
        }
    }

    pub fn sub(&self, other: &CertifiedReal) -> CertifiedReal {
        let prec = self.p(other);
        CertifiedReal {
            lo: self.lo.sub_round(&other.hi, prec, Rounding::Down),
            hi: self.hi.sub_round(&other.lo, prec, Rounding::Up),
            prec,
        }
    }

    pub fn neg(&self) -> CertifiedReal {
        CertifiedReal {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, other: &CertifiedReal) -> CertifiedReal {
        let prec = self.p(other);
        let (a, b, c, d) = (&self.lo, &self.hi, &other.lo, &other.hi);
        // Sign-based shortcuts cover the common cases with two products.
        if !a.is_negative() && !c.is_negative() {
            return CertifiedReal {
                lo: a.mul_round(c, prec, Rounding::Down),
                hi: b.mul_round(d, prec, Rounding::Up),
                prec,
            };
        }
        let cands = [(a, c), (a, d), (b, c), (b, d)];
        let lo = cands
            .iter()
            .map(|(x, y)| x.mul_round(y, prec, Rounding::Down))
            .min()
            .expect("four candidates");
        let hi = cands
            .iter()
            .map(|(x, y)| x.mul_round(y, prec, Rounding::Up))
            .max()
            .expect("four candidates");
        CertifiedReal { lo, hi, prec }
    }

    /// Quotient. Panics if `other` contains zero.
    pub fn div(&self, other: &CertifiedReal) -> CertifiedReal {
        assert!(
            !other.contains_zero(),
            "interval division by an enclosure containing zero"
        );
        let prec = self.p(other);
        let (a, b, c, d) = (&self.lo, &self.hi, &other.lo, &other.hi);
        if !a.is_negative() && c.is_positive() {
            return CertifiedReal {
                lo: a.div_round(d, prec, Rounding::Down),
                hi: b.div_round(c, prec, Rounding::Up),
                prec,
            };
        }
        let cands = [(a, c), (a, d), (b, c), (b, d)];
        let lo = cands
            .iter()
            .map(|(x, y)| x.div_round(y, prec, Rounding::Down))
            .min()
            .expect("four candidates");
        let hi = cands
            .iter()
            .map(|(x, y)| x.div_round(y, prec, Rounding::Up))
            .max()
            .expect("four candidates");
        CertifiedReal { lo, hi, prec }
    }

    pub fn sqr(&self) -> CertifiedReal {
        let prec = self.prec;
        if !self.lo.is_negative() {
            CertifiedReal {
                lo: self.lo.mul_round(&self.lo, prec, Rounding::Down),
                hi: self.hi.mul_round(&self.hi, prec, Rounding::Up),
                prec,
            }
        } else if !self.hi.is_positive() {
            self.neg().sqr()
        } else {
            let m = self.lo.abs().max(self.hi.abs());
            CertifiedReal {
                lo: Dyadic::zero(),
                hi: m.mul_round(&m, prec, Rounding::Up),
                prec,
            }
        }
    }

    pub fn abs(&self) -> CertifiedReal {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            CertifiedReal {
                lo: Dyadic::zero(),
                hi: self.lo.abs().max(self.hi.clone()),
                prec: self.prec,
            }
        }
    }

    /// Square root. Panics if the enclosure is certainly negative; a lower endpoint
    /// slightly below zero is clamped.
    pub fn sqrt(&self) -> CertifiedReal {
        assert!(!self.is_negative(), "sqrt of a negative enclosure");
        let lo = if self.lo.is_negative() {
            Dyadic::zero()
        } else {
            self.lo.sqrt_round(self.prec, Rounding::Down)
        };
        CertifiedReal {
            lo,
            hi: self.hi.sqrt_round(self.prec, Rounding::Up),
            prec: self.prec,
        }
    }

    pub fn recip(&self) -> CertifiedReal {
        CertifiedReal::one(self.prec).div(self)
    }

    pub fn mul_pow2(&self, k: i64) -> CertifiedReal {
        CertifiedReal {
            lo: self.lo.mul_pow2(k),
            hi: self.hi.mul_pow2(k),
            prec: self.prec,
        }
    }

    pub fn mul_rational(&self, q: &BigRational) -> CertifiedReal {
        self.mul(&CertifiedReal::from_rational(q, self.prec))
    }

    pub fn add_rational(&self, q: &BigRational) -> CertifiedReal {
        self.add(&CertifiedReal::from_rational(q, self.prec))
    }

    pub fn powi(&self, k: u32) -> CertifiedReal {
        match k {
            0 => CertifiedReal::one(self.prec),
            1 => self.clone(),
            _ if k.is_multiple_of(2) => self.powi(k / 2).sqr(),
            _ => self.powi(k - 1).mul(self),
        }
    }

    pub fn max(&self, other: &CertifiedReal) -> CertifiedReal {
        CertifiedReal {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            prec: self.p(other),
        }
    }

    pub fn min(&self, other: &CertifiedReal) -> CertifiedReal {
        CertifiedReal {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
            prec: self.p(other),
        }
    }

    /// Widen by `[-r, r]` for a non-negative dyadic `r`.
    pub fn pad(&self, r: &Dyadic) -> CertifiedReal {
        CertifiedReal {
            lo: self.lo.sub_round(r, self.prec, Rounding::Down),
            hi: self.hi.add_round(r, self.prec, Rounding::Up),
            prec: self.prec,
        }
    }

    /// `floor` of every point, when all points share it.
    pub fn floor_if_determined(&self) -> Option<BigInt> {
        let a = self.lo.floor();
        (a == self.hi.floor()).then_some(a)
    }

    pub fn is_zero_point(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    /// `[lo,hi]` with 17 significant digits on each side.
    pub fn format_bounds(&self) -> String {
        format!("[{:.16e},{:.16e}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_bounds())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&CertifiedReal> for &CertifiedReal {
            type Output = CertifiedReal;
            fn $method(self, rhs: &CertifiedReal) -> CertifiedReal {
                CertifiedReal::$method(self, rhs)
            }
        }
        impl $tr<CertifiedReal> for CertifiedReal {
            type Output = CertifiedReal;
            fn $method(self, rhs: CertifiedReal) -> CertifiedReal {
                CertifiedReal::$method(&self, &rhs)
            }
        }
        impl $tr<&CertifiedReal> for CertifiedReal {
            type Output = CertifiedReal;
            fn $method(self, rhs: &CertifiedReal) -> CertifiedReal {
                CertifiedReal::$method(&self, rhs)
            }
        }
        impl $tr<CertifiedReal> for &CertifiedReal {
            type Output = CertifiedReal;
            fn $method(self, rhs: CertifiedReal) -> CertifiedReal {
                CertifiedReal::$method(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for CertifiedReal {
    type Output = CertifiedReal;
    fn neg(self) -> CertifiedReal {
        CertifiedReal::neg(&self)
    }
}

impl Neg for &CertifiedReal {
    type Output = CertifiedReal;
    fn neg(self) -> CertifiedReal {
        CertifiedReal::neg(self)
    }
}

/// Rational value as an enclosure; zero maps to `[0,0]`.
pub fn to_certified(x: &BigRational, prec: u32) -> CertifiedReal {
    if x.is_zero() {
        return CertifiedReal::zero(prec.max(MIN_PRECISION));
    }
    CertifiedReal::from_rational(x, prec)
}
