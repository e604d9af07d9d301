//! Certified standard normal density and distribution function.
//!
//! `Φ(x) - 1/2` is summed from its alternating Taylor series for `|x| <= 3`;
//! the upper tail `1 - Φ(x)` for `x > 3` comes from Laplace's continued fraction
//! for the Mills ratio, enclosed by running the recurrence on an interval.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactnum::dyadic::{div_round, shr_round};
use crate::exactnum::elementary::{exp_point, inv_sqrt_2pi};
use crate::exactnum::{CertifiedReal, Dyadic, Rounding};

/// Switch point between the Taylor series and the continued fraction.
pub const SERIES_LIMIT: f64 = 3.0;

fn half(prec: u32) -> CertifiedReal {
    CertifiedReal::point(Dyadic::pow2(-1), prec)
}

/// `Φ(x) - 1/2` for a dyadic `0 <= x <= ~8`, from the Taylor series.
fn central_series(x: &Dyadic, prec: u32) -> CertifiedReal {
    if x.is_zero() {
        return CertifiedReal::zero(prec);
    }
    let xf = x.to_f64();
    let small = (-x.magnitude()).max(0) as u32;
    // Partial sums peak near exp(x^2/2) before cancelling.
    let guard = (xf * xf * 0.7214) as u32 + 12 + small;
    let scale = prec + guard;
    let m = x.mantissa();
    let e = x.exponent();
    let m2 = m * m;
    let shift = e + scale as i64;
    let (mut t_lo, mut t_hi) = if shift >= 0 {
        let v = m << shift as u64;
        (v.clone(), v)
    } else {
        let s = (-shift) as u64;
        (shr_round(m, s, Rounding::Down), shr_round(m, s, Rounding::Up))
    };
    let mut s_lo = BigInt::zero();
    let mut s_hi = BigInt::zero();
    let half_x2 = xf * xf / 2.0;
    let mut k: u64 = 0;
    loop {
        // t_k = x^(2k+1) / (2^k k!), term = t_k / (2k+1)
        let odd = BigInt::from(2 * k + 1);
        let term_lo = div_round(&t_lo, &odd, Rounding::Down);
        let term_hi = div_round(&t_hi, &odd, Rounding::Up);
        let small_term = term_hi <= BigInt::one();
        if k.is_multiple_of(2) {
            s_lo += term_lo;
            s_hi += term_hi;
        } else {
            s_lo -= term_hi;
            s_hi -= term_lo;
        }
        // Terms decrease from index ceil(x^2/2) on, so the alternating tail is
        // bounded by the next term, itself below one unit.
        if small_term && (k as f64) >= half_x2 {
            s_lo -= 2;
            s_hi += 2;
            break;
        }
        let den = BigInt::from(2 * (k + 1));
        let (num_lo, num_hi) = (&t_lo * &m2, &t_hi * &m2);
        if e >= 0 {
            let sh = 2 * e as u64;
            t_lo = div_round(&(num_lo << sh), &den, Rounding::Down);
            t_hi = div_round(&(num_hi << sh), &den, Rounding::Up);
        } else {
            let sh = (-2 * e) as u64;
            t_lo = div_round(&shr_round(&num_lo, sh, Rounding::Down), &den, Rounding::Down);
            t_hi = div_round(&shr_round(&num_hi, sh, Rounding::Up), &den, Rounding::Up);
        }
        k += 1;
    }
    let s = -(scale as i64);
    let sum = CertifiedReal::from_bounds(Dyadic::new(s_lo, s), Dyadic::new(s_hi, s), prec + 8);
    sum.mul(&inv_sqrt_2pi(prec + 8)).with_precision(prec)
}

/// `d * 2^scale` rounded to an integer in `dir`.
fn fixed(d: &Dyadic, scale: u32, dir: Rounding) -> BigInt {
    let sh = d.exponent() + scale as i64;
    if sh >= 0 {
        d.mantissa() << sh as u64
    } else {
        shr_round(d.mantissa(), (-sh) as u64, dir)
    }
}

/// Continued-fraction enclosure of the Mills ratio `(1-Φ(x))/φ(x)` at depth `n`,
/// as fixed-point integers scaled by `2^scale`.
fn mills_cf(x: &Dyadic, n: u64, scale: u32) -> (BigInt, BigInt) {
    let x_lo = fixed(x, scale, Rounding::Down);
    let x_hi = fixed(x, scale, Rounding::Up);
    let unit2 = BigInt::one() << (2 * scale) as u64;
    // t_k = x + (k+1)/t_{k+1}, and t_n lies in [x, x + (n+1)/x].
    let mut tl = x_lo.clone();
    let mut th = &x_hi + div_round(&(&unit2 * (n + 1)), &x_lo, Rounding::Up);
    for k in (0..n).rev() {
        let c = &unit2 * (k + 1);
        let new_lo = &x_lo + div_round(&c, &th, Rounding::Down);
        th = &x_hi + div_round(&c, &tl, Rounding::Up);
        tl = new_lo;
    }
    // The loop ends at t_0 = x + 1/t_1, and R = 1/t_0.
    (
        div_round(&unit2, &th, Rounding::Down),
        div_round(&unit2, &tl, Rounding::Up),
    )
}

/// `1 - Φ(x)` for a dyadic `x > 3` via the continued fraction, with relative
/// accuracy about `2^-prec`.
fn upper_tail_cf(x: &Dyadic, prec: u32) -> CertifiedReal {
    let wp = prec + 16;
    let xf = x.to_f64();
    // R < 1/3 here, so `wp + 2` fractional bits give about `wp` significant ones.
    let scale = wp + 2;
    // Truncation error of the n-th approximant decays roughly like exp(-2x sqrt(n)).
    let root = wp as f64 * 0.3466 / xf;
    let mut n = (root * root) as u64 + 24;
    let (rl, rh) = loop {
        let (rl, rh) = mills_cf(x, n, scale);
        let w = &rh - &rl;
        if w.bits() + (prec as u64) + 4 <= rl.bits() || n > 1 << 16 {
            break (rl, rh);
        }
        n *= 2;
    };
    let s = -(scale as i64);
    let r = CertifiedReal::from_bounds(Dyadic::new(rl, s), Dyadic::new(rh, s), wp);
    let x2 = x.mul_exact(x).mul_pow2(-1).neg();
    let dens = exp_point(&x2, wp).mul(&inv_sqrt_2pi(wp));
    dens.mul(&r).with_precision(prec)
}

fn abs_gt_limit(x: &Dyadic) -> bool {
    x.to_f64().abs() > SERIES_LIMIT
}

/// `Φ(x) - 1/2` for a dyadic point; odd in `x`.
pub fn central_point(x: &Dyadic, prec: u32) -> CertifiedReal {
    let ax = x.abs();
    let v = if abs_gt_limit(&ax) {
        half(prec).sub(&upper_tail_cf(&ax, prec))
    } else {
        central_series(&ax, prec)
    };
    if x.is_negative() {
        v.neg()
    } else {
        v
    }
}

/// `1 - Φ(x)` for a dyadic point, with relative accuracy in the upper tail.
pub fn sf_point(x: &Dyadic, prec: u32) -> CertifiedReal {
    if x.is_zero() {
        return half(prec);
    }
    if abs_gt_limit(x) {
        if x.is_positive() {
            upper_tail_cf(x, prec)
        } else {
            CertifiedReal::one(prec).sub(&upper_tail_cf(&x.neg(), prec))
        }
    } else {
        half(prec).sub(&central_point(x, prec))
    }
}

/// `Φ(x)` for a dyadic point.
pub fn cdf_point(x: &Dyadic, prec: u32) -> CertifiedReal {
    sf_point(&x.neg(), prec)
}

/// Upper bound of `|Φ'|` on `[m - w, m + w]`, or `None` when the cheap bound
/// does not apply and endpoint evaluation should be used. `tail` encloses
/// `1 - Φ(|m|)`.
fn slope_bound(m: &Dyadic, w: &Dyadic, tail: &CertifiedReal) -> Option<Dyadic> {
    let am = m.abs();
    if !abs_gt_limit(&am) {
        // 1/sqrt(2*pi) < 13/32
        return Some(Dyadic::new(BigInt::from(13), -5));
    }
    // With |m| w <= 2^-20, phi varies by less than a factor 2 on the interval.
    if am.mul_exact(w) > Dyadic::pow2(-20) {
        return None;
    }
    // Mills: phi(m) < Q(m) (m^2 + 1) / m.
    let f = am
        .mul_exact(&am)
        .add_exact(&Dyadic::one())
        .div_round(&am, 32, Rounding::Up);
    Some(tail.hi().mul_round(&f, 32, Rounding::Up).mul_pow2(1))
}

fn eval_monotone(
    x: &CertifiedReal,
    point: fn(&Dyadic, u32) -> CertifiedReal,
    increasing: bool,
) -> CertifiedReal {
    let prec = x.precision();
    if x.is_point() {
        return point(x.lo(), prec);
    }
    let m = x.midpoint();
    let w = x.hi().sub_exact(x.lo()).mul_pow2(-1);
    let at_m = point(&m, prec);
    let tail = if increasing == m.is_negative() {
        at_m.clone()
    } else {
        CertifiedReal::one(prec).sub(&at_m)
    };
    if let Some(l) = slope_bound(&m, &w, &tail) {
        let pad = l.mul_round(&w, 32, Rounding::Up);
        return at_m.pad(&pad);
    }
    let a = point(x.lo(), prec);
    let b = point(x.hi(), prec);
    if increasing {
        CertifiedReal::from_bounds(a.lo().clone(), b.hi().clone(), prec)
    } else {
        CertifiedReal::from_bounds(b.lo().clone(), a.hi().clone(), prec)
    }
}

/// Standard normal density `φ(x)`.
pub fn pdf(x: &CertifiedReal) -> CertifiedReal {
    let prec = x.precision();
    let wp = prec + 8;
    let e = if x.is_point() {
        exp_point(&x.lo().mul_exact(x.lo()).mul_pow2(-1).neg(), wp)
    } else {
        crate::exactnum::elementary::exp(&x.with_precision(wp).sqr().mul_pow2(-1).neg())
    };
    e.mul(&inv_sqrt_2pi(wp)).with_precision(prec)
}

/// Standard normal distribution function `Φ(x)`.
pub fn cdf(x: &CertifiedReal) -> CertifiedReal {
    eval_monotone(x, cdf_point, true)
}

/// Upper tail `1 - Φ(x)`, accurate relative to its size for large `x`.
pub fn sf(x: &CertifiedReal) -> CertifiedReal {
    eval_monotone(x, sf_point, false)
}

/// `Φ(x) - 1/2`, accurate relative to its size near 0.
pub fn central(x: &CertifiedReal) -> CertifiedReal {
    let prec = x.precision();
    if x.is_point() {
        return central_point(x.lo(), prec);
    }
    let m = x.midpoint();
    let w = x.hi().sub_exact(x.lo()).mul_pow2(-1);
    if !abs_gt_limit(&m) {
        let pad = Dyadic::new(BigInt::from(13), -5).mul_round(&w, 32, Rounding::Up);
        return central_point(&m, prec).pad(&pad);
    }
    let a = central_point(x.lo(), prec);
    let b = central_point(x.hi(), prec);
    CertifiedReal::from_bounds(a.lo().clone(), b.hi().clone(), prec)
}

/// `Φ(b) - Φ(a)`, computed from whichever tail keeps relative precision.
pub fn increment(a: &CertifiedReal, b: &CertifiedReal) -> CertifiedReal {
    if !a.lo().is_negative() {
        sf(a).sub(&sf(b))
    } else if !b.hi().is_positive() {
        // Φ(b) - Φ(a) = Q(-b) - Q(-a)
        sf(&b.neg()).sub(&sf(&a.neg()))
    } else {
        central(b).sub(&central(a))
    }
}
