//! Enclosures of π, ln 2, exp and log by series with explicit remainder bounds.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dyadic::{div_round, shr_round, Dyadic, Rounding};
use super::real::CertifiedReal;

const CACHED_PRECISION: u32 = 1280;

/// `[lo, hi] * 2^-scale` with integer endpoints; used to sum series cheaply.
struct FixedSum {
    lo: BigInt,
    hi: BigInt,
    scale: u32,
}

impl FixedSum {
    fn new(scale: u32) -> Self {
        FixedSum {
            lo: BigInt::zero(),
            hi: BigInt::zero(),
            scale,
        }
    }

    fn into_real(self, prec: u32) -> CertifiedReal {
        let s = -(self.scale as i64);
        CertifiedReal::from_bounds(Dyadic::new(self.lo, s), Dyadic::new(self.hi, s), prec)
    }
}

/// `atan(1/m)` (alternating) or `atanh(1/m)` (positive) at `scale` fractional bits.
fn arc_series(m: u64, scale: u32, hyperbolic: bool) -> FixedSum {
    let mut acc = FixedSum::new(scale);
    let one = BigInt::one() << scale;
    let m = BigInt::from(m);
    let m2 = &m * &m;
    // power = m^(2k+1)
    let mut power = m.clone();
    let mut k: u64 = 0;
    loop {
        let den = &power * BigInt::from(2 * k + 1);
        let t_lo = div_round(&one, &den, Rounding::Down);
        let t_hi = div_round(&one, &den, Rounding::Up);
        if t_hi <= BigInt::one() {
            // Remaining tail is below two units in the last place.
            let tail = BigInt::from(2);
            if hyperbolic {
                acc.hi += tail;
            } else {
                acc.lo -= &tail;
                acc.hi += tail;
            }
            return acc;
        }
        if hyperbolic || k.is_multiple_of(2) {
            acc.lo += t_lo;
            acc.hi += t_hi;
        } else {
            acc.lo -= t_hi;
            acc.hi -= t_lo;
        }
        power *= &m2;
        k += 1;
    }
}

fn compute_pi(prec: u32) -> CertifiedReal {
    let scale = prec + 16;
    let wp = prec + 8;
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    let a = arc_series(5, scale, false).into_real(wp);
    let b = arc_series(239, scale, false).into_real(wp);
    a.mul_pow2(4).sub(&b.mul_pow2(2)).with_precision(prec)
}

fn compute_ln2(prec: u32) -> CertifiedReal {
    let scale = prec + 16;
    // ln 2 = 2 atanh(1/3)
    arc_series(3, scale, true)
        .into_real(prec + 8)
        .mul_pow2(1)
        .with_precision(prec)
}

struct Constants {
    pi: CertifiedReal,
    ln2: CertifiedReal,
    inv_sqrt_2pi: CertifiedReal,
}

fn constants() -> &'static Constants {
    static CELL: OnceLock<Constants> = OnceLock::new();
    CELL.get_or_init(|| {
        let pi = compute_pi(CACHED_PRECISION + 16);
        let inv_sqrt_2pi = pi.mul_pow2(1).sqrt().recip().with_precision(CACHED_PRECISION);
        Constants {
            pi: pi.with_precision(CACHED_PRECISION),
            ln2: compute_ln2(CACHED_PRECISION),
            inv_sqrt_2pi,
        }
    })
}

pub fn pi(prec: u32) -> CertifiedReal {
    if prec + 8 <= CACHED_PRECISION {
        constants().pi.with_precision(prec)
    } else {
        compute_pi(prec)
    }
}

pub fn ln2(prec: u32) -> CertifiedReal {
    if prec + 8 <= CACHED_PRECISION {
        constants().ln2.with_precision(prec)
    } else {
        compute_ln2(prec)
    }
}

/// `sqrt(2*pi)`.
pub fn sqrt_2pi(prec: u32) -> CertifiedReal {
    pi(prec + 4).mul_pow2(1).sqrt().with_precision(prec)
}

/// `1/sqrt(2*pi)`.
pub fn inv_sqrt_2pi(prec: u32) -> CertifiedReal {
    if prec + 8 <= CACHED_PRECISION {
        constants().inv_sqrt_2pi.with_precision(prec)
    } else {
        sqrt_2pi(prec + 4).recip().with_precision(prec)
    }
}

/// `1/sqrt(8*pi)`.
pub fn inv_sqrt_8pi(prec: u32) -> CertifiedReal {
    inv_sqrt_2pi(prec).mul_pow2(-1)
}

/// `d * 2^scale` rounded to an integer in `dir`.
fn to_fixed(d: &Dyadic, scale: u32, dir: Rounding) -> BigInt {
    let sh = d.exponent() + scale as i64;
    if sh >= 0 {
        d.mantissa() << sh as u64
    } else {
        shr_round(d.mantissa(), (-sh) as u64, dir)
    }
}

/// One-sided bound of `exp(r) * 2^scale` for `0 <= r <= 1/2` given as `r * 2^scale`.
fn exp_fixed_nonneg(r: &BigInt, scale: u32, dir: Rounding) -> BigInt {
    const HALVINGS: u64 = 6;
    let rr = shr_round(r, HALVINGS, dir);
    let unit = BigInt::one() << scale;
    let mut sum = unit.clone();
    let mut term = unit;
    let mut j: u64 = 1;
    loop {
        term = div_round(&shr_round(&(&term * &rr), scale as u64, dir), &BigInt::from(j), dir);
        if term.is_zero() {
            break;
        }
        sum += &term;
        if term <= BigInt::one() {
            if dir == Rounding::Up {
                // Tail after a unit-sized term with ratio below 1/100.
                sum += 2;
            }
            break;
        }
        j += 1;
    }
    for _ in 0..HALVINGS {
        sum = shr_round(&(&sum * &sum), scale as u64, dir);
    }
    sum
}

/// One-sided bound of `exp(r) * 2^scale` for `|r| <= 1/2`.
fn exp_fixed(r: &BigInt, scale: u32, dir: Rounding) -> BigInt {
    if r.is_negative() {
        let e = exp_fixed_nonneg(&(-r), scale, dir.flip());
        div_round(&(BigInt::one() << (2 * scale) as u64), &e, dir)
    } else {
        exp_fixed_nonneg(r, scale, dir)
    }
}

/// Enclosure of `exp(d)` for an exact dyadic `d`.
pub fn exp_point(d: &Dyadic, prec: u32) -> CertifiedReal {
    if d.is_zero() {
        return CertifiedReal::one(prec);
    }
    let approx = d.to_f64();
    assert!(approx.abs() < 1e15, "exp argument out of supported range");
    let k = (approx / std::f64::consts::LN_2).round() as i64;
    let kbits = 64 - k.unsigned_abs().leading_zeros();
    let scale = prec + 20 + kbits;
    let l2 = ln2(scale + 8);
    // r = d - k ln2 in fixed point, |r| <= ~0.35
    let (l_for_lo, l_for_hi) = if k >= 0 { (l2.hi(), l2.lo()) } else { (l2.lo(), l2.hi()) };
    let kd = Dyadic::from_int(k);
    let r_lo = to_fixed(d, scale, Rounding::Down)
        - to_fixed(&l_for_lo.mul_exact(&kd), scale, Rounding::Up);
    let r_hi = to_fixed(d, scale, Rounding::Up)
        - to_fixed(&l_for_hi.mul_exact(&kd), scale, Rounding::Down);
    let lo = exp_fixed(&r_lo, scale, Rounding::Down);
    let hi = exp_fixed(&r_hi, scale, Rounding::Up);
    let e = k - scale as i64;
    CertifiedReal::from_bounds(Dyadic::new(lo, e), Dyadic::new(hi, e), prec)
}

/// Enclosure of `exp(x)`; exp is increasing, so endpoints suffice.
pub fn exp(x: &CertifiedReal) -> CertifiedReal {
    let prec = x.precision();
    if x.is_point() {
        return exp_point(x.lo(), prec);
    }
    let lo = exp_point(x.lo(), prec);
    let hi = exp_point(x.hi(), prec);
    CertifiedReal::from_bounds(lo.lo().clone(), hi.hi().clone(), prec)
}

/// Enclosure of `log(d)` for an exact positive dyadic `d`.
pub fn log_point(d: &Dyadic, prec: u32) -> CertifiedReal {
    assert!(d.is_positive(), "log of a non-positive value");
    let wp = prec + 24;
    // d = y * 2^e with y in [1/sqrt2, sqrt2)
    let mut e = d.magnitude() - 1;
    let mut y = d.mul_pow2(-e);
    if y.to_f64() > std::f64::consts::SQRT_2 {
        y = y.mul_pow2(-1);
        e += 1;
    }
    let one = Dyadic::one();
    let num = CertifiedReal::point(y.sub_exact(&one), wp);
    let den = CertifiedReal::point(y.add_exact(&one), wp);
    let t = num.div(&den);
    let t2 = t.sqr();
    let tmag = t.lo().abs().max(t.hi().abs());
    let threshold = Dyadic::pow2(-(wp as i64) - 4);
    let mut power = t.clone();
    let mut sum = t.clone();
    let mut k: i64 = 1;
    if !tmag.is_zero() {
        loop {
            power = power.mul(&t2);
            let term = power.div(&CertifiedReal::from_int(2 * k + 1, wp));
            sum = sum.add(&term);
            let m = term.lo().abs().max(term.hi().abs());
            if m < threshold {
                // |t| < 0.18, so the tail is below 1.04 * |next term| <= 2|term|.
                sum = sum.pad(&m.mul_pow2(1).round(32, Rounding::Up));
                break;
            }
            k += 1;
        }
    }
    let series = sum.mul_pow2(1);
    let result = if e == 0 {
        series
    } else {
        ln2(wp).mul(&CertifiedReal::from_int(e, wp)).add(&series)
    };
    result.with_precision(prec)
}

/// Enclosure of `log(x)` for a positive enclosure.
pub fn log(x: &CertifiedReal) -> CertifiedReal {
    assert!(x.is_positive(), "log of an enclosure not certainly positive");
    let prec = x.precision();
    if x.is_point() {
        return log_point(x.lo(), prec);
    }
    let lo = log_point(x.lo(), prec);
    let hi = log_point(x.hi(), prec);
    CertifiedReal::from_bounds(lo.lo().clone(), hi.hi().clone(), prec)
}

pub fn cosh(x: &CertifiedReal) -> CertifiedReal {
    let a = exp(x);
    let b = exp(&x.neg());
    let s = a.add(&b).mul_pow2(-1);
    // cosh >= 1 everywhere.
    let one = Dyadic::one();
    if s.lo() < &one {
        CertifiedReal::from_bounds(one, s.hi().clone().max(Dyadic::one()), s.precision())
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn close(x: &CertifiedReal, v: f64, tol: f64) -> bool {
        (x.mid_f64() - v).abs() <= tol
    }

    #[test]
    fn pi_digits() {
        let p = pi(200);
        // 3.14159265358979323846264338327950288...
        let lo = BigRational::new(314159265358979323846264338327u128.into(), 100000000000000000000000000000u128.into());
        let hi = BigRational::new(314159265358979323846264338328u128.into(), 100000000000000000000000000000u128.into());
        assert!(lo < p.lo().to_rational() && p.hi().to_rational() < hi);
        assert!(p.width_f64() < 1e-58);
        assert!(close(&ln2(100), std::f64::consts::LN_2, 1e-16));
    }

    #[test]
    fn exp_and_log_values() {
        let e = exp_point(&Dyadic::one(), 128);
        assert!(close(&e, std::f64::consts::E, 1e-15));
        assert!(e.width_f64() < 1e-36);
        let big = exp_point(&Dyadic::from_int(-700), 96);
        assert!(close(&big, (-700f64).exp(), 1e-310));
        assert!(big.width_f64() / (-700f64).exp() < 1e-25);
        let l = log_point(&Dyadic::from_int(10), 96);
        assert!(close(&l, 10f64.ln(), 1e-15));
        let eps = Dyadic::pow2(-30);
        let small = log_point(&Dyadic::one().add_exact(&eps), 96);
        assert!((small.mid_f64() / eps.to_f64() - 1.0).abs() < 1e-8);
        assert!(small.width_f64() < 1e-36);
        assert!(log_point(&Dyadic::one(), 64).is_zero_point());
    }

    #[test]
    fn exp_log_roundtrip_encloses() {
        for v in [0.001, 0.37, 1.0, 2.5, 17.25] {
            let x = CertifiedReal::point(Dyadic::from_f64(v), 96);
            let back = log(&exp(&x));
            assert!(back.contains(&Dyadic::from_f64(v)), "v={v} {back}");
        }
    }

    #[test]
    fn cosh_is_even_and_above_one() {
        let x = CertifiedReal::point(Dyadic::from_f64(0.5), 96);
        let a = cosh(&x);
        let b = cosh(&x.neg());
        assert_eq!(a, b);
        assert!(close(&a, 0.5f64.cosh(), 1e-15));
    }
}
