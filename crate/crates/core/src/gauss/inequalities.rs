//! Certified checks of the elementary and Gaussian inequalities used by the
//! distance bounds. Each check returns one verdict per strict inequality.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::model::Enclose;
use super::normal;
use crate::error::{Error, Result};
use crate::exactnum::elementary::{cosh, exp, log, pi, sqrt_2pi};
use crate::exactnum::rational::{binomial_int, fmt_rational, int, rat};
use crate::exactnum::{certify_lt, to_certified, CertifiedReal, PrecisionSchedule, Status, Verdict};

/// One named comparison inside a certificate.
#[derive(Clone, Debug)]
pub struct Check {
    pub label: &'static str,
    pub verdict: Verdict,
}

/// Verdicts for one inequality family evaluated at one parameter point.
#[derive(Clone, Debug)]
pub struct InequalityCertificate {
    pub name: &'static str,
    pub point: String,
    pub checks: Vec<Check>,
}

impl InequalityCertificate {
    fn new(name: &'static str, point: String) -> Self {
        InequalityCertificate {
            name,
            point,
            checks: Vec::new(),
        }
    }

    fn push(&mut self, label: &'static str, verdict: Verdict) {
        self.checks.push(Check { label, verdict });
    }

    /// FAIL if any check fails, else INCONCLUSIVE if any is undecided.
    pub fn status(&self) -> Status {
        let st = |s| self.checks.iter().any(|c| c.verdict.status == s);
        if st(Status::Fail) {
            Status::Fail
        } else if st(Status::Inconclusive) {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.status() == Status::Pass
    }

    pub fn max_precision(&self) -> u32 {
        self.checks
            .iter()
            .map(|c| c.verdict.precision_used)
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for InequalityCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} [{}] {}", self.name, self.point, self.status())?;
        for c in &self.checks {
            writeln!(f, "  {:<28} {}", c.label, c.verdict)?;
        }
        Ok(())
    }
}

/// Flat row for CSV/JSON output.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRow {
    pub family: &'static str,
    pub point: String,
    pub check: &'static str,
    pub status: Status,
    pub margin_lo: f64,
    pub precision_bits: u32,
}

impl InequalityCertificate {
    pub fn rows(&self) -> Vec<CheckRow> {
        self.checks
            .iter()
            .map(|c| CheckRow {
                family: self.name,
                point: self.point.clone(),
                check: c.label,
                status: c.verdict.status,
                margin_lo: c.verdict.margin.lo().to_f64(),
                precision_bits: c.verdict.precision_used,
            })
            .collect()
    }
}

fn show(x: &dyn Enclose) -> String {
    let e = x.enclose(64);
    if e.is_point() {
        format!("{}", e.mid_f64())
    } else {
        format!("{:.12}", e.mid_f64())
    }
}

fn lt(
    sched: &PrecisionSchedule,
    f: impl Fn(u32) -> (CertifiedReal, CertifiedReal),
) -> Verdict {
    certify_lt(sched, f)
}

/// `(1+x) e^{-x} <= (1+y) e^{-y}` under one of the admissible orderings of
/// `x` and `y`, with equality exactly when `x = y`.
pub fn elementary_exp_hypothesis(x: &BigRational, y: &BigRational) -> bool {
    let zero = BigRational::zero();
    let case_a = &zero <= y && y <= &x.abs();
    let case_b = x <= y && y <= &zero;
    let neg_y = -y;
    let case_c = x - rat(2, 3) * x * x >= neg_y && neg_y >= zero;
    case_a || case_b || case_c
}

pub fn check_elementary_exp(
    x: &BigRational,
    y: &BigRational,
    sched: &PrecisionSchedule,
) -> Result<InequalityCertificate> {
    if !elementary_exp_hypothesis(x, y) {
        return Err(Error::HypothesisNotMet(format!(
            "x={}, y={} outside the admissible region",
            fmt_rational(x),
            fmt_rational(y)
        )));
    }
    let mut cert = InequalityCertificate::new(
        "elementary_exp",
        format!("x={}, y={}", fmt_rational(x), fmt_rational(y)),
    );
    let f = |t: &BigRational, p: u32| {
        let t = to_certified(t, p + 8);
        exp(&t.neg()).mul(&t.add_rational(&int(1))).with_precision(p)
    };
    let v = if x == y {
        Verdict::exact_equality(sched.start)
    } else {
        lt(sched, |p| (f(x, p), f(y, p)))
    };
    cert.push("(1+x)e^-x <= (1+y)e^-y", v);
    Ok(cert)
}

/// `exp(x²/2 - x⁴/12) < cosh x < (1 + x²/3) exp(x²/6)` for `x != 0`.
pub fn check_cosh_bounds(
    x: &dyn Enclose,
    sched: &PrecisionSchedule,
) -> Result<InequalityCertificate> {
    if x.enclose(sched.cap).contains_zero() {
        return Err(Error::HypothesisNotMet("cosh bounds need x != 0".into()));
    }
    let mut cert = InequalityCertificate::new("cosh_bounds", format!("x={}", show(x)));
    cert.push(
        "lower",
        lt(sched, |p| {
            let x = x.enclose(p + 8);
            let x2 = x.sqr();
            let arg = x2
                .mul_rational(&rat(1, 2))
                .sub(&x2.sqr().mul_rational(&rat(1, 12)));
            (exp(&arg), cosh(&x))
        }),
    );
    cert.push(
        "upper",
        lt(sched, |p| {
            let x = x.enclose(p + 8);
            let x2 = x.sqr();
            let rhs = x2
                .mul_rational(&rat(1, 3))
                .add_rational(&int(1))
                .mul(&exp(&x2.mul_rational(&rat(1, 6))));
            (cosh(&x), rhs)
        }),
    );
    Ok(cert)
}

/// `w(x) = C(2x, x) / 4^x`.
pub fn w_value(x: u64) -> BigRational {
    BigRational::new(binomial_int(2 * x, x as i64), BigInt::one() << (2 * x))
}

/// `log(sqrt(pi x) w(x))` enclosed at `prec`.
pub fn w_log_defect(x: u64, prec: u32) -> CertifiedReal {
    let wp = prec + 16;
    let pix = pi(wp).mul_rational(&int(x as i64));
    log(&pix)
        .mul_rational(&rat(1, 2))
        .add(&log(&to_certified(&w_value(x), wp)))
        .with_precision(prec)
}

/// `-1/(8x) < log(sqrt(pi x) w(x)) < -1/(8x) + 1/(192x³) <= -23/(192x)`, `x >= 1`.
pub fn check_w_bounds(x: u64, sched: &PrecisionSchedule) -> Result<InequalityCertificate> {
    if x == 0 {
        return Err(Error::HypothesisNotMet("w bounds need x >= 1".into()));
    }
    let xi = x as i64;
    let lower = rat(-1, 8 * xi);
    let upper = &lower + BigRational::new(BigInt::one(), BigInt::from(192) * BigInt::from(x).pow(3));
    let last = BigRational::new(BigInt::from(-23), BigInt::from(192) * BigInt::from(x));
    let mut cert = InequalityCertificate::new("w_bounds", format!("x={x}"));
    cert.push(
        "lower",
        lt(sched, |p| (to_certified(&lower, p), w_log_defect(x, p))),
    );
    cert.push(
        "upper",
        lt(sched, |p| (w_log_defect(x, p), to_certified(&upper, p))),
    );
    // Exact rational comparison.
    let prec = sched.start;
    let v = if upper == last {
        Verdict::exact_equality(prec)
    } else {
        let mut v = Verdict::strict_less(&to_certified(&upper, prec), &to_certified(&last, prec));
        v.margin = to_certified(&(&last - &upper), prec);
        v
    };
    cert.push("upper <= -23/(192x)", v);
    Ok(cert)
}

/// `(Φ(x + h/2) - Φ(x - h/2)) / (h φ(x))` for `h != 0`.
pub fn increment_ratio(x: &CertifiedReal, h: &CertifiedReal) -> CertifiedReal {
    let h = h.abs();
    let half = h.mul_pow2(-1);
    let inc = normal::increment(&x.sub(&half), &x.add(&half));
    inc.div(&h.mul(&normal::pdf(x)))
}

/// `exp((x²-1)h²/24 - x⁴h⁴/960) < ratio < exp((x²-1)h²/24 + h⁴/1440)`.
pub fn check_increment_bounds(
    x: &dyn Enclose,
    h: &dyn Enclose,
    sched: &PrecisionSchedule,
) -> Result<InequalityCertificate> {
    if h.enclose(sched.cap).contains_zero() {
        return Err(Error::HypothesisNotMet("increment bounds need h != 0".into()));
    }
    let mut cert =
        InequalityCertificate::new("increment_bounds", format!("x={}, h={}", show(x), show(h)));
    let parts = |p: u32| {
        let wp = p + 16;
        let (x, h) = (x.enclose(wp), h.enclose(wp));
        let (x2, h2) = (x.sqr(), h.sqr());
        let h4 = h2.sqr();
        let lead = x2.add_rational(&int(-1)).mul(&h2).mul_rational(&rat(1, 24));
        (x2, h4, lead, increment_ratio(&x, &h).with_precision(p))
    };
    cert.push(
        "lower",
        lt(sched, |p| {
            let (x2, h4, lead, r) = parts(p);
            let arg = lead.sub(&x2.sqr().mul(&h4).mul_rational(&rat(1, 960)));
            (exp(&arg), r)
        }),
    );
    cert.push(
        "upper",
        lt(sched, |p| {
            let (_, h4, lead, r) = parts(p);
            (r, exp(&lead.add(&h4.mul_rational(&rat(1, 1440)))))
        }),
    );
    Ok(cert)
}

/// `x e^{-x²/6} < sqrt(2π)(Φ(x) - 1/2) < x e^{-x²/6 + x⁴/90}` for `x > 0`.
pub fn check_phi_near_zero(
    x: &dyn Enclose,
    sched: &PrecisionSchedule,
) -> Result<InequalityCertificate> {
    if !x.enclose(sched.cap).is_positive() {
        return Err(Error::HypothesisNotMet("needs x > 0".into()));
    }
    let mut cert = InequalityCertificate::new("phi_near_zero", format!("x={}", show(x)));
    let parts = |p: u32| {
        let wp = p + 16;
        let x = x.enclose(wp);
        let x2 = x.sqr();
        let mid = sqrt_2pi(wp).mul(&normal::central(&x)).with_precision(p);
        let base = x2.mul_rational(&rat(-1, 6));
        (x, x2, base, mid)
    };
    cert.push(
        "lower",
        lt(sched, |p| {
            let (x, _, base, mid) = parts(p);
            (x.mul(&exp(&base)), mid)
        }),
    );
    cert.push(
        "upper",
        lt(sched, |p| {
            let (x, x2, base, mid) = parts(p);
            let arg = base.add(&x2.sqr().mul_rational(&rat(1, 90)));
            (mid, x.mul(&exp(&arg)))
        }),
    );
    Ok(cert)
}

/// `β(h) = (h/2) e^{-h²/8} / (sqrt(2π)(Φ(h/2) - 1/2))`, `h > 0`.
pub fn quotient_beta(h: &CertifiedReal) -> CertifiedReal {
    let half = h.mul_pow2(-1);
    let num = half.mul(&exp(&h.sqr().mul_rational(&rat(-1, 8))));
    num.div(&sqrt_2pi(h.precision()).mul(&normal::central(&half)))
}

/// `β(h) > exp(-h²/12 - h⁴/1440) > 1 - h²/12`.
pub fn check_beta_chain(h: &dyn Enclose, sched: &PrecisionSchedule) -> Result<InequalityCertificate> {
    if !h.enclose(sched.cap).is_positive() {
        return Err(Error::HypothesisNotMet("needs h > 0".into()));
    }
    let mut cert = InequalityCertificate::new("beta_chain", format!("h={}", show(h)));
    let mid = |p: u32| {
        let h = h.enclose(p + 16);
        let h2 = h.sqr();
        let arg = h2
            .mul_rational(&rat(-1, 12))
            .sub(&h2.sqr().mul_rational(&rat(1, 1440)));
        (h, h2, exp(&arg))
    };
    cert.push(
        "beta > exp(...)",
        lt(sched, |p| {
            let (h, _, m) = mid(p);
            (m, quotient_beta(&h))
        }),
    );
    cert.push(
        "exp(...) > 1 - h^2/12",
        lt(sched, |p| {
            let (_, h2, m) = mid(p);
            (h2.mul_rational(&rat(-1, 12)).add_rational(&int(1)), m)
        }),
    );
    Ok(cert)
}

/// Increment of `Φ` over `[t - h/2, t + h/2]`.
fn window(t: &CertifiedReal, h: &CertifiedReal) -> CertifiedReal {
    let half = h.mul_pow2(-1);
    normal::increment(&t.sub(&half), &t.add(&half))
}

/// For `|x| < |y|` and `h > 0`:
/// `exp(-(y²-x²)/2) < window(y)/window(x) < exp(-β(h)(y²-x²)/2)`.
pub fn check_quotient_bounds(
    x: &dyn Enclose,
    y: &dyn Enclose,
    h: &dyn Enclose,
    sched: &PrecisionSchedule,
) -> Result<InequalityCertificate> {
    let (xc, yc) = (x.enclose(sched.cap).abs(), y.enclose(sched.cap).abs());
    if !(xc.hi() < yc.lo()) {
        return Err(Error::HypothesisNotMet("needs |x| < |y|".into()));
    }
    if !h.enclose(sched.cap).is_positive() {
        return Err(Error::HypothesisNotMet("needs h > 0".into()));
    }
    let mut cert = InequalityCertificate::new(
        "quotient_bounds",
        format!("x={}, y={}, h={}", show(x), show(y), show(h)),
    );
    let parts = |p: u32| {
        let wp = p + 16;
        let (x, y, h) = (x.enclose(wp), y.enclose(wp), h.enclose(wp));
        let d = y.sqr().sub(&x.sqr()).mul_rational(&rat(-1, 2));
        let q = window(&y, &h).div(&window(&x, &h)).with_precision(p);
        (h, d, q)
    };
    cert.push(
        "lower",
        lt(sched, |p| {
            let (_, d, q) = parts(p);
            (exp(&d), q)
        }),
    );
    cert.push(
        "upper",
        lt(sched, |p| {
            let (h, d, q) = parts(p);
            (q, exp(&d.mul(&quotient_beta(&h))))
        }),
    );
    Ok(cert)
}

/// Runs every family over a fixed grid and returns all certificates.
pub fn standard_suite(sched: &PrecisionSchedule) -> Vec<InequalityCertificate> {
    let mut out = Vec::new();
    let grid: Vec<BigRational> = (-12..=12).map(|k| rat(k, 2)).collect();
    let hs: Vec<BigRational> = [rat(1, 10), rat(1, 2), int(1), int(2), int(4)].into();
    for x in &grid {
        for h in &hs {
            out.push(check_increment_bounds(x, h, sched).expect("h != 0"));
        }
        if x.is_positive() {
            out.push(check_phi_near_zero(x, sched).expect("x > 0"));
        }
        if !x.is_zero() {
            out.push(check_cosh_bounds(x, sched).expect("x != 0"));
        }
    }
    for h in &hs {
        out.push(check_beta_chain(h, sched).expect("h > 0"));
        for (x, y) in [(0, 1), (1, 2), (-1, 3), (2, -5), (0, 6)] {
            out.push(check_quotient_bounds(&int(x), &int(y), h, sched).expect("|x| < |y|"));
        }
    }
    for x in (1..=20).chain([50, 100, 500]) {
        out.push(check_w_bounds(x, sched).expect("x >= 1"));
    }
    for (x, y) in [(rat(2, 1), rat(1, 1)), (rat(-3, 1), rat(-1, 1)), (rat(1, 2), rat(-1, 3)), (rat(1, 1), rat(1, 1))] {
        out.push(check_elementary_exp(&x, &y, sched).expect("admissible"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Dyadic;

    fn sched() -> PrecisionSchedule {
        PrecisionSchedule::default()
    }

    #[test]
    fn w_values_exact() {
        assert_eq!(w_value(1), rat(1, 2));
        assert_eq!(w_value(2), rat(3, 8));
        assert_eq!(w_value(3), rat(5, 16));
    }

    #[test]
    fn w_bounds_hold_with_equality_at_one() {
        let c = check_w_bounds(1, &sched()).unwrap();
        assert!(c.passed(), "{c}");
        assert!(c.checks[2].verdict.equality);
        let c = check_w_bounds(7, &sched()).unwrap();
        assert!(c.passed() && !c.checks[2].verdict.equality, "{c}");
    }

    #[test]
    fn beta_at_one() {
        let b = quotient_beta(&CertifiedReal::one(96));
        assert!((b.mid_f64() - 0.919_4).abs() < 1e-3, "{b}");
        assert!(check_beta_chain(&int(1), &sched()).unwrap().passed());
    }

    #[test]
    fn elementary_exp_hypothesis_and_equality() {
        assert!(check_elementary_exp(&int(1), &int(2), &sched()).is_err());
        let c = check_elementary_exp(&int(3), &int(3), &sched()).unwrap();
        assert!(c.passed() && c.checks[0].verdict.equality);
        assert!(check_elementary_exp(&int(1), &rat(-1, 4), &sched()).unwrap().passed());
    }

    #[test]
    fn quotient_and_increment_bounds_sample() {
        let s = sched();
        assert!(check_increment_bounds(&rat(3, 2), &rat(1, 2), &s).unwrap().passed());
        assert!(check_increment_bounds(&int(0), &int(4), &s).unwrap().passed());
        assert!(check_quotient_bounds(&int(1), &int(-2), &rat(1, 2), &s).unwrap().passed());
        assert!(check_quotient_bounds(&int(2), &int(1), &int(1), &s).is_err());
        assert!(check_phi_near_zero(&rat(1, 10), &s).unwrap().passed());
        assert!(check_cosh_bounds(&int(0), &s).is_err());
    }

    #[test]
    fn increment_ratio_expansion() {
        // log ratio - (x²-1)h²/24 ≈ (-x⁴-4x²+2)h⁴/2880 as h -> 0.
        let x = 1.5f64;
        for h in [0.05f64, 0.1] {
            let r = increment_ratio(
                &CertifiedReal::point(Dyadic::from_f64(x), 160),
                &CertifiedReal::point(Dyadic::from_f64(h), 160),
            );
            let lr = log(&r).mid_f64() - (x * x - 1.0) * h * h / 24.0;
            let c4 = (-x.powi(4) - 4.0 * x * x + 2.0) / 2880.0;
            assert!((lr / h.powi(4) - c4).abs() < 2e-4 * (1.0 + 40.0 * h * h), "{h}: {}", lr / h.powi(4));
        }
    }
}
