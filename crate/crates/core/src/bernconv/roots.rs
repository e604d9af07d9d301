//! Certified enclosures of the positive real roots of an integer polynomial.
//!
//! A float iteration proposes root positions; every claim returned here is
//! backed by exact sign evaluations, or by Descartes counts when the
//! proposal cannot be certified.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::poly::{degree, eval_scaled, halve_arg, int_derivative, scale_pow2, sign_at, square_free, taylor_shift_one, variations, IntPoly};
use crate::error::{Error, Result};
use crate::exactnum::Dyadic;

/// Relative width reached by every returned enclosure.
pub const REL_BITS: u64 = 44;
const MAX_DEPTH: u64 = 600;

/// A closed interval `[lo, hi]` holding exactly one distinct root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootEnclosure {
    pub lo: Dyadic,
    pub hi: Dyadic,
    pub multiplicity: usize,
}

impl RootEnclosure {
    fn exact(t: Dyadic, multiplicity: usize) -> Self {
        RootEnclosure {
            lo: t.clone(),
            hi: t,
            multiplicity,
        }
    }
}

/// All roots of `p`, which must satisfy `p(0) != 0`, as positive real
/// enclosures. Fails unless every complex root is accounted for.
pub fn positive_roots(p: &[BigInt]) -> Result<Vec<RootEnclosure>> {
    assert!(p.first().is_some_and(|c| !c.is_zero()), "p(0) must be non-zero");
    if let Some(r) = guided(p) {
        return Ok(r);
    }
    let mut out = Vec::new();
    for (f, k) in square_free(p) {
        let roots = guided(&f)
            .or_else(|| descartes(&f))
            .ok_or_else(|| Error::FactorizationFailed(format!("factor of degree {} has non-real or non-positive roots", degree(&f))))?;
        out.extend(roots.into_iter().map(|r| RootEnclosure { multiplicity: k, ..r }));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(out)
}

/// Exponent `k` with every root below `2^k` (Cauchy bound).
fn cauchy_exp(p: &[BigInt]) -> i64 {
    let lead = p.last().unwrap().bits() as i64;
    let top = p.iter().map(|c| c.bits() as i64).max().unwrap_or(0);
    (top - lead + 2).max(1)
}

/// `p'(t)/p(t)` with running rescaling, so large `t` cannot overflow.
fn log_derivative(c: &[f64], t: f64) -> f64 {
    let d = c.len() - 1;
    let (mut p, mut dp) = (c[d], 0.0);
    let mut scale = 1.0f64;
    for i in (0..d).rev() {
        dp = dp * t + p;
        p = p * t + c[i] * scale;
        if p.abs() > 1e150 || dp.abs() > 1e150 {
            p *= 1e-150;
            dp *= 1e-150;
            scale *= 1e-150;
        }
    }
    dp / p
}

/// Aberth iteration on the real line from coefficient-ratio starting values.
fn approx_roots(p: &[BigInt]) -> Option<Vec<f64>> {
    let d = degree(p);
    let c: Vec<f64> = p.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
    if c.iter().any(|x| !x.is_finite()) || c[1..d].contains(&0.0) {
        return None;
    }
    let mut xs: Vec<f64> = (1..=d).map(|i| (c[i - 1] / c[i]).abs()).collect();
    for i in 1..d {
        if xs[i] <= xs[i - 1] {
            xs[i] = xs[i - 1] * 1.5;
        }
    }
    // Rounding noise keeps corrections from reaching zero. The proposals only
    // guide the exact checks, so an unsettled run is still worth trying.
    let mut settled = 0;
    let mut best = f64::INFINITY;
    for _ in 0..100 {
        let mut worst = 0.0f64;
        for k in 0..d {
            let x = xs[k];
            let r = log_derivative(&c, x);
            if !r.is_finite() {
                continue;
            }
            let s: f64 = (0..d).filter(|&j| j != k).map(|j| 1.0 / (x - xs[j])).sum();
            let w = 1.0 / (r - s);
            if !w.is_finite() {
                continue;
            }
            xs[k] = x - w;
            worst = worst.max((w / xs[k]).abs());
        }
        // Count sweeps that are tiny or no longer improving.
        if worst < 1e-13 || (worst < 1e-6 && worst >= best) {
            settled += 1;
            if settled == 3 {
                break;
            }
        }
        best = best.min(worst);
    }
    xs.sort_by(|a, b| a.total_cmp(b));
    let ok = xs.iter().all(|x| x.is_finite() && *x > 0.0) && xs.windows(2).all(|w| w[0] < w[1]);
    ok.then_some(xs)
}

/// `a 2^ea / (b 2^eb)` as `f64`.
fn ratio_f64(a: &BigInt, ea: i64, b: &BigInt, eb: i64) -> f64 {
    let top = |x: &BigInt| {
        let drop = (x.bits() as i64 - 60).max(0);
        ((x >> drop as u64).to_f64().unwrap_or(f64::NAN), drop)
    };
    let ((fa, da), (fb, db)) = (top(a), top(b));
    let e = (ea + da - eb - db).clamp(-2000, 2000) as i32;
    fa / fb * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
}

/// Newton steps with the residual evaluated exactly, so the proposal is
/// limited only by the final rounding to `f64`.
fn polish(p: &[BigInt], dp: &[BigInt], mut x: f64) -> f64 {
    for _ in 0..2 {
        let t = Dyadic::from_f64(x);
        let (v, ev) = eval_scaled(p, &t);
        if v.is_zero() {
            break;
        }
        let (w, ew) = eval_scaled(dp, &t);
        let step = ratio_f64(&v, ev, &w, ew);
        if !step.is_finite() || step.abs() >= x {
            break;
        }
        x -= step;
    }
    x
}

fn is_narrow(lo: &Dyadic, hi: &Dyadic) -> bool {
    hi.sub_exact(lo).mul_pow2(REL_BITS as i64) <= *lo
}

fn midpoint(a: &Dyadic, b: &Dyadic) -> Dyadic {
    if a.is_zero() {
        b.mul_pow2(-1)
    } else {
        a.add_exact(b).mul_pow2(-1)
    }
}

/// Shrinks `[a, b]`, `sign(p(a)) = sa = -sign(p(b))`, around its single root.
fn refine(p: &[BigInt], dp: &[BigInt], mut a: Dyadic, mut b: Dyadic, sa: Ordering, guess: f64) -> RootEnclosure {
    let guess = polish(p, dp, guess);
    // Try tight brackets around the float guess first, then fall back to bisection.
    for bits in [REL_BITS as i32 + 2, 36, 26] {
        let eps = 2f64.powi(-bits);
        let lo = Dyadic::from_f64(guess * (1.0 - eps));
        let hi = Dyadic::from_f64(guess * (1.0 + eps));
        if !(a < lo && lo < hi && hi < b) {
            continue;
        }
        let (slo, shi) = (sign_at(p, &lo), sign_at(p, &hi));
        if slo == Ordering::Equal {
            return RootEnclosure::exact(lo, 1);
        }
        if shi == Ordering::Equal {
            return RootEnclosure::exact(hi, 1);
        }
        if slo == sa && shi != sa {
            a = lo;
            b = hi;
            break;
        }
    }
    while !is_narrow(&a, &b) {
        let m = midpoint(&a, &b);
        match sign_at(p, &m) {
            Ordering::Equal => return RootEnclosure::exact(m, 1),
            s if s == sa => a = m,
            _ => b = m,
        }
    }
    RootEnclosure {
        lo: a,
        hi: b,
        multiplicity: 1,
    }
}

/// Separates the float proposals by points where `p` alternates in sign:
/// `d` sign changes on `(0, 2^k)` certify `d` simple positive roots.
fn guided(p: &[BigInt]) -> Option<Vec<RootEnclosure>> {
    let d = degree(p);
    if d == 0 {
        return Some(Vec::new());
    }
    let xs = approx_roots(p)?;
    let mut pts = vec![Dyadic::zero()];
    for w in xs.windows(2) {
        pts.push(Dyadic::from_f64((w[0] * w[1]).sqrt()));
    }
    pts.push(Dyadic::pow2(cauchy_exp(p)));
    if pts.windows(2).any(|w| w[0] >= w[1]) {
        return None;
    }
    let signs: Vec<Ordering> = pts.iter().map(|t| sign_at(p, t)).collect();
    if signs.contains(&Ordering::Equal) || signs.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    let dp = int_derivative(p);
    Some(
        (0..d)
            .map(|i| refine(p, &dp, pts[i].clone(), pts[i + 1].clone(), signs[i], xs[i]))
            .collect(),
    )
}

/// Vincent-Collins-Akritas bisection for a square-free `p`.
fn descartes(p: &[BigInt]) -> Option<Vec<RootEnclosure>> {
    let d = degree(p);
    let k = cauchy_exp(p);
    let mut out = Vec::new();
    // (p scaled to (0,1), numerator a, depth j): the cell (a/2^j, (a+1)/2^j) * 2^k.
    let mut stack: Vec<(IntPoly, BigInt, u64)> = vec![(scale_pow2(p, k as u64), BigInt::zero(), 0)];
    while let Some((mut q, a, j)) = stack.pop() {
        if j > MAX_DEPTH {
            return None;
        }
        let cell = |num: &BigInt| Dyadic::new(num.clone(), k - j as i64);
        if q[0].is_zero() {
            out.push(RootEnclosure::exact(cell(&a), 1));
            q.remove(0);
        }
        if degree(&q) == 0 {
            continue;
        }
        let rev: IntPoly = q.iter().rev().cloned().collect();
        match variations(&taylor_shift_one(&rev)) {
            0 => continue,
            1 if a.bits() > REL_BITS => {
                out.push(RootEnclosure {
                    lo: cell(&a),
                    hi: cell(&(&a + 1)),
                    multiplicity: 1,
                });
                continue;
            }
            _ => {}
        }
        let left = halve_arg(&q);
        let right = taylor_shift_one(&left);
        stack.push((right, &a * 2 + 1, j + 1));
        stack.push((left, &a * 2, j + 1));
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    (out.len() == d).then_some(out)
}
