//! Binary floating-point numbers `mantissa * 2^exponent` with directed rounding.
//!
//! A [`Dyadic`] is exact; rounding happens only in the `*_round` operations,
//! which take a precision (mantissa bits kept) and a [`Rounding`] direction.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Direction of rounding for inexact results.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

impl Rounding {
    pub fn flip(self) -> Self {
        match self {
            Rounding::Down => Rounding::Up,
            Rounding::Up => Rounding::Down,
        }
    }
}

/// Exact value `mant * 2^exp`.
#[derive(Clone, Debug)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

/// `floor(m / 2^s)` or `ceil(m / 2^s)`.
pub(crate) fn shr_round(m: &BigInt, s: u64, dir: Rounding) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    // `>>` on BigInt rounds toward negative infinity.
    let q = m >> s;
    match dir {
        Rounding::Down => q,
        Rounding::Up => {
            if &(&q << s) == m {
                q
            } else {
                q + 1
            }
        }
    }
}

/// `floor(a / b)` or `ceil(a / b)` for `b > 0`.
pub(crate) fn div_round(a: &BigInt, b: &BigInt, dir: Rounding) -> BigInt {
    debug_assert!(b.is_positive());
    match dir {
        Rounding::Down => a.div_floor(b),
        Rounding::Up => -((-a).div_floor(b)),
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }
    }

    pub fn zero() -> Self {
        Dyadic::new(BigInt::zero(), 0)
    }

    pub fn one() -> Self {
        Dyadic::new(BigInt::one(), 0)
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Dyadic::new(v.into(), 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic::new(BigInt::one(), e)
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite f64");
        if x == 0.0 {
            return Dyadic::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Dyadic::new(BigInt::from(m) * sign, e)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// Position of the leading bit: `2^(mag-1) <= |x| < 2^mag`. Zero maps to `i64::MIN`.
    pub fn magnitude(&self) -> i64 {
        if self.mant.is_zero() {
            i64::MIN
        } else {
            self.mant.bits() as i64 + self.exp
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic::new(self.mant.abs(), self.exp)
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic::new(-&self.mant, self.exp)
    }

    /// Multiplication by `2^k`, exact.
    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        Dyadic::new(self.mant.clone(), self.exp + k)
    }

    /// Keep at most `prec` significant bits, rounding in `dir`.
    pub fn round(&self, prec: u32, dir: Rounding) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let s = bits - prec as u64;
        Dyadic::new(shr_round(&self.mant, s, dir), self.exp + s as i64)
    }

    fn align(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
        if a.mant.is_zero() {
            return (BigInt::zero(), b.mant.clone(), b.exp);
        }
        if b.mant.is_zero() {
            return (a.mant.clone(), BigInt::zero(), a.exp);
        }
        match a.exp.cmp(&b.exp) {
            Ordering::Equal => (a.mant.clone(), b.mant.clone(), a.exp),
            Ordering::Less => (a.mant.clone(), &b.mant << (b.exp - a.exp) as u64, a.exp),
            Ordering::Greater => (&a.mant << (a.exp - b.exp) as u64, b.mant.clone(), b.exp),
        }
    }

    pub fn add_exact(&self, other: &Dyadic) -> Dyadic {
        let (x, y, e) = Dyadic::align(self, other);
        Dyadic::new(x + y, e)
    }

    pub fn sub_exact(&self, other: &Dyadic) -> Dyadic {
        self.add_exact(&other.neg())
    }

    pub fn mul_exact(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn add_round(&self, other: &Dyadic, prec: u32, dir: Rounding) -> Dyadic {
        // When exponents are far apart, the small operand only matters for the rounding
        // direction; replace it by a sticky bit to avoid huge shifts.
        if !self.is_zero() && !other.is_zero() {
            let (big, small) = if self.magnitude() >= other.magnitude() {
                (self, other)
            } else {
                (other, self)
            };
            // The sticky bit sits strictly below every bit of `big` and below the
            // rounding position, so it can never land on a rounding boundary.
            let sticky_exp = big.exp.min(big.magnitude() - prec as i64 - 4) - 1;
            if small.magnitude() <= sticky_exp {
                let sticky = Dyadic::new(BigInt::from(small.signum()), sticky_exp);
                return big.add_exact(&sticky).round(prec, dir);
            }
        }
        self.add_exact(other).round(prec, dir)
    }

    pub fn sub_round(&self, other: &Dyadic, prec: u32, dir: Rounding) -> Dyadic {
        self.add_round(&other.neg(), prec, dir)
    }

    pub fn mul_round(&self, other: &Dyadic, prec: u32, dir: Rounding) -> Dyadic {
        self.mul_exact(other).round(prec, dir)
    }

    /// Quotient rounded to `prec` bits. Panics on division by zero.
    pub fn div_round(&self, other: &Dyadic, prec: u32, dir: Rounding) -> Dyadic {
        assert!(!other.is_zero(), "Dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let (num, den) = if other.mant.is_negative() {
            (-&self.mant, -&other.mant)
        } else {
            (self.mant.clone(), other.mant.clone())
        };
        let shift = (prec as i64 + 2 + den.bits() as i64 - num.bits() as i64).max(0);
        let scaled = num << shift as u64;
        let q = div_round(&scaled, &den, dir);
        Dyadic::new(q, self.exp - other.exp - shift).round(prec, dir)
    }

    /// Square root of a non-negative value rounded to `prec` bits.
    pub fn sqrt_round(&self, prec: u32, dir: Rounding) -> Dyadic {
        assert!(!self.is_negative(), "sqrt of negative Dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // Make the exponent even and the mantissa long enough for `prec` result bits.
        let mut m = self.mant.clone();
        let mut e = self.exp;
        let want = 2 * (prec as i64 + 2);
        let have = m.bits() as i64;
        let mut shift = (want - have).max(0);
        if (e - shift) % 2 != 0 {
            shift += 1;
        }
        m <<= shift as u64;
        e -= shift;
        let r = m.sqrt();
        let r = match dir {
            Rounding::Down => r,
            Rounding::Up => {
                if &r * &r == m {
                    r
                } else {
                    r + 1
                }
            }
        };
        Dyadic::new(r, e / 2).round(prec, dir)
    }

    /// Rational value rounded to `prec` bits.
    pub fn from_rational(q: &BigRational, prec: u32, dir: Rounding) -> Dyadic {
        if q.is_zero() {
            return Dyadic::zero();
        }
        let num = q.numer();
        let den = q.denom();
        // Exact when the denominator is a power of two and the numerator fits.
        if (den & (den - BigInt::one())).is_zero() {
            let e = -(den.bits() as i64 - 1);
            return Dyadic::new(num.clone(), e).round(prec, dir);
        }
        let shift = (prec as i64 + 2 + den.bits() as i64 - num.bits() as i64).max(0);
        let scaled = num << shift as u64;
        Dyadic::new(div_round(&scaled, den, dir), -shift).round(prec, dir)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Nearest-ish `f64`, for display and heuristics only.
    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let keep = 60.min(bits);
        let top = (&self.mant >> (bits - keep) as u64).to_f64().unwrap_or(0.0);
        let e = self.exp + bits - keep;
        if e > 2000 {
            return top.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        // Split the scaling to avoid overflow in powi.
        let half = (e / 2) as i32;
        top * 2f64.powi(half) * 2f64.powi(e as i32 - half)
    }

    /// `floor(self)` as an integer.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shr_round(&self.mant, (-self.exp) as u64, Rounding::Down)
        }
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let (ma, mb) = (self.magnitude(), other.magnitude());
        if ma != mb {
            let by_mag = ma.cmp(&mb);
            return if sa > 0 { by_mag } else { by_mag.reverse() };
        }
        let (x, y, _) = Dyadic::align(self, other);
        x.cmp(&y)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}
