use std::sync::OnceLock;

use num_rational::BigRational;

use super::distance::{BoundCheck, CaseEval, DistanceReport, SymmetricCase};
use super::tau::TauSpec;
use crate::error::Result;
use crate::exactnum::elementary::{inv_sqrt_2pi, inv_sqrt_8pi, sqrt_2pi};
use crate::exactnum::rational::rat;
use crate::exactnum::{
    to_certified, CertifiedReal, Dyadic, PrecisionSchedule, Rounding, Status, Verdict,
};
use crate::gauss::{normal, Enclose, Scale};
use crate::laws::PopulationSize;

/// Residual `sqrt(2π)(Φ(1/c) - 1/2) - 1` at a dyadic `c`.
fn exception_residual(c: &Dyadic, prec: u32) -> CertifiedReal {
    let x = CertifiedReal::point(c.clone(), prec).recip();
    sqrt_2pi(prec)
        .mul(&normal::central(&x))
        .sub(&CertifiedReal::one(prec))
}

/// Root `c` of `sqrt(2π)(Φ(1/c) - 1/2) = 1` by certified bisection, to width
/// at most `2^-bits`.
pub fn solve_exception_constant_to(bits: u32) -> CertifiedReal {
    let prec = (bits + 40).max(96);
    // The residual is decreasing in c; it is positive at 1/2 and negative at 1.
    let mut lo = Dyadic::pow2(-1);
    let mut hi = Dyadic::one();
    let target = Dyadic::pow2(-(bits as i64));
    while hi.sub_exact(&lo) > target {
        let mid = lo.add_exact(&hi).mul_pow2(-1);
        let r = exception_residual(&mid, prec);
        if r.is_positive() {
            lo = mid;
        } else if r.is_negative() {
            hi = mid;
        } else {
            // Residual undecided: the root is within the enclosure slack.
            let eps = Dyadic::pow2(-(prec as i64) + 8);
            lo = mid.sub_round(&eps, prec, Rounding::Down);
            hi = mid.add_round(&eps, prec, Rounding::Up);
            break;
        }
    }
    CertifiedReal::from_bounds(lo, hi, prec)
}

/// `c ≈ 0.7839769` to width below `10^-9`.
pub fn solve_exception_constant() -> CertifiedReal {
    solve_exception_constant_to(32)
}

fn exception_constant_cached() -> &'static CertifiedReal {
    static C: OnceLock<CertifiedReal> = OnceLock::new();
    C.get_or_init(|| solve_exception_constant_to(80))
}

/// Whether `N = 2` and `τ/σ <= c`; `None` when undecided at this precision.
pub fn exception_applies(case: &SymmetricCase, tau: &Scale, prec: u32) -> Option<bool> {
    if case.population != PopulationSize::Finite(2) {
        return Some(false);
    }
    let ratio = tau.enclose(prec + 8).div(&case.sigma(prec + 8));
    let c = exception_constant_cached();
    if ratio.hi() <= c.lo() {
        Some(true)
    } else if ratio.lo() > c.hi() {
        Some(false)
    } else {
        None
    }
}

fn is_exact_sqrt_of(tau: &Scale, q: &BigRational) -> bool {
    tau.square_exact() == Some(q)
}

fn evaluate(case: &SymmetricCase, tau: &TauSpec, prec: u32) -> Result<DistanceReport> {
    let ev = CaseEval::new(case, tau, prec)?;
    let brute = ev.brute();
    let mut checks = ev.agreement_checks(&brute);
    let d = &ev.d;
    let (fl, cl) = (case.floor_half(), case.ceil_half());

    // F(s) - G(s) < d for s > floor(n/2); G(s) - F(s-1) < d for s > ceil(n/2).
    let right = Verdict::worst(
        (fl + 1..=ev.hi()).map(|s| Verdict::strict_less(&ev.right_gap(s), d)),
        prec,
    );
    let left = Verdict::worst(
        (cl + 1..=ev.hi()).map(|s| Verdict::strict_less(&ev.left_gap(s), d)),
        prec,
    );
    checks.push(BoundCheck::pass("right_gaps_below_d", right));
    checks.push(BoundCheck::pass("left_gaps_below_d", left));

    // Both sides of |F - G| and |F(s-) - G(s-)| at every scanned integer.
    let full = Verdict::worst(
        (ev.lo()..=ev.hi()).flat_map(|s| {
            let mut v = Vec::with_capacity(2);
            if s != fl {
                v.push(Verdict::strict_less(&ev.right_gap(s).abs(), d));
            }
            if s != cl {
                v.push(Verdict::strict_less(&ev.left_gap(s).abs(), d));
            }
            v
        }),
        prec,
    );
    checks.push(BoundCheck::pass("full_scan_below_d", full));

    let sigma_d = ev.sigma.mul(d);
    let lower = normal::central(&CertifiedReal::one(prec)).mul_pow2(-1);
    // Equality exactly for odd n with τ = σ = 1/2.
    let tight = case.n % 2 == 1 && case.sigma_sq == rat(1, 4) && is_exact_sqrt_of(&ev.model.tau, &rat(1, 4));
    let v = if tight {
        Verdict::exact_equality(prec)
    } else {
        Verdict::strict_less(&lower, &sigma_d)
    };
    checks.push(BoundCheck::pass("sigma_d_lower", v));

    let exception = exception_applies(case, &ev.model.tau, prec);
    let upper = Verdict::strict_less(&sigma_d, &inv_sqrt_8pi(prec));
    let upper = match exception {
        Some(true) => BoundCheck {
            name: "sigma_d_upper",
            verdict: upper,
            expected: Status::Fail,
        },
        Some(false) => BoundCheck::pass("sigma_d_upper", upper),
        None => BoundCheck::pass(
            "sigma_d_upper",
            Verdict {
                status: Status::Inconclusive,
                ..upper
            },
        ),
    };
    checks.push(upper);

    let mut report = ev.report(tau, &brute, checks);
    report.exception = exception == Some(true);
    Ok(report)
}

/// Certifies the main distance theorem for one symmetric case and one `τ`:
/// closed form against scan, the pointwise reductions, the two-sided bound
/// on `σ d`, and the `N = 2` exception (where the upper bound must fail).
pub fn verify_theorem_main(
    case: &SymmetricCase,
    tau: &TauSpec,
    sched: &PrecisionSchedule,
) -> Result<DistanceReport> {
    let mut last = None;
    for prec in sched.steps() {
        let r = evaluate(case, tau, prec)?;
        if !r.inconclusive() {
            return Ok(r);
        }
        last = Some(r);
    }
    Ok(last.expect("schedule has a step"))
}

/// `√((N-1)/N)`, read as 1 for `N = ∞`.
fn root_ratio(population: PopulationSize, prec: u32) -> CertifiedReal {
    match population {
        PopulationSize::Finite(nn) => to_certified(&rat(nn as i64 - 1, nn as i64), prec).sqrt(),
        PopulationSize::Infinite => CertifiedReal::one(prec),
    }
}

fn remark_checks(case: &SymmetricCase, tau: &TauSpec, prec: u32) -> Result<Vec<BoundCheck>> {
    let model = case.model(tau)?;
    let wp = prec + 16;
    let t = model.tau.enclose(wp);
    let d = case.closed_distance(&model.tau, wp);
    let mut out = Vec::new();

    // τ-scaled: (Φ(√2)-1/2)/√8 <= √((N-1)/N)(Φ(√(N/(N-1)))-1/2)/2 <= τ d < 1/√(8π).
    let first = normal::central(&CertifiedReal::from_int(2, wp).sqrt())
        .div(&CertifiedReal::from_int(8, wp).sqrt());
    let rr = root_ratio(case.population, wp);
    let middle = rr.mul(&normal::central(&rr.recip())).mul_pow2(-1);
    let v = if case.population == PopulationSize::Finite(2) {
        Verdict::exact_equality(prec)
    } else {
        Verdict::strict_less(&first, &middle)
    };
    out.push(BoundCheck::pass("remark_b_first", v));

    let tight_sq = match case.population {
        PopulationSize::Finite(nn) => rat(nn as i64 - 1, 4 * nn as i64),
        PopulationSize::Infinite => rat(1, 4),
    };
    let v = if case.n % 2 == 1 && is_exact_sqrt_of(&model.tau, &tight_sq) {
        Verdict::exact_equality(prec)
    } else {
        Verdict::strict_less(&middle, &t.mul(&d))
    };
    out.push(BoundCheck::pass("remark_b_middle", v));
    out.push(BoundCheck::pass(
        "remark_b_upper",
        Verdict::strict_less(&t.mul(&d), &inv_sqrt_8pi(wp)),
    ));

    if is_exact_sqrt_of(&model.tau, &case.sigma0_sq) {
        let s0 = Scale::sqrt(case.sigma0_sq.clone()).enclose(wp);
        let bound = normal::central(&s0.mul_pow2(1).recip());
        let v = if case.n % 2 == 1 {
            Verdict::exact_equality(prec)
        } else {
            Verdict::strict_less(&d, &bound)
        };
        out.push(BoundCheck::pass("remark_c_first", v));
        out.push(BoundCheck::pass(
            "remark_c_second",
            Verdict::strict_less(&bound, &inv_sqrt_8pi(wp).div(&s0)),
        ));
    }
    for c in &mut out {
        c.verdict.precision_used = prec;
    }
    Ok(out)
}

/// The refined two-sided bounds on `d` in terms of `τ` (and of `σ₀` when
/// `τ = σ₀`), with the exact equality cases recognised.
pub fn verify_remark_bounds(
    case: &SymmetricCase,
    tau: &TauSpec,
    sched: &PrecisionSchedule,
) -> Result<Vec<BoundCheck>> {
    let mut last = Vec::new();
    for prec in sched.steps() {
        last = remark_checks(case, tau, prec)?;
        if last.iter().all(|c| c.verdict.status != Status::Inconclusive) {
            break;
        }
    }
    Ok(last)
}

/// `σ d` for `B_{n,1/2}` with `n` odd: `σ(Φ(1/(2σ)) - 1/2)`, `σ = √n/2`.
pub fn binomial_sigma_d(n: u64, prec: u32) -> CertifiedReal {
    let wp = prec + 8;
    let sigma = to_certified(&rat(n as i64, 4), wp).sqrt();
    sigma
        .mul(&normal::central(&sigma.mul_pow2(1).recip()))
        .with_precision(prec)
}

/// `2σ₀ d` in units of `1/√(2π)` for the limit sweep.
pub fn two_sigma0_d(case: &SymmetricCase, tau: &TauSpec, prec: u32) -> Result<CertifiedReal> {
    let model = case.model(tau)?;
    let d = case.closed_distance(&model.tau, prec + 8);
    let s0 = Scale::sqrt(case.sigma0_sq.clone()).enclose(prec + 8);
    Ok(s0.mul_pow2(1).mul(&d).with_precision(prec))
}

/// `1/√(2π)`, the limit of `2σ₀ d` along symmetric binomials.
pub fn anchor_h1(prec: u32) -> CertifiedReal {
    inv_sqrt_2pi(prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sched() -> PrecisionSchedule {
        PrecisionSchedule::default()
    }

    #[test]
    fn exception_constant_value() {
        let c = solve_exception_constant();
        assert!(c.width_f64() <= 1e-9);
        // Root from an independent 30-digit solver: 0.783976931203547...
        assert!((c.mid_f64() - 0.783_976_931_203_547).abs() < 1e-9, "{c}");
        let tau0 = c.mul_pow2(-1);
        assert!((tau0.mid_f64() - 0.391_988_465_601_774).abs() < 1e-9);
        let r = exception_residual(c.lo(), 160);
        assert!(r.is_positive());
        assert!(exception_residual(c.hi(), 160).is_negative());
    }

    #[test]
    fn n2_exception_at_sigma0() {
        let case = SymmetricCase::finite(2, 1).unwrap();
        let r = verify_theorem_main(&case, &TauSpec::Sigma0, &sched()).unwrap();
        assert!(r.exception);
        assert!(r.passed(), "{r}");
        assert_eq!(r.check("sigma_d_upper").unwrap().label(), "EXPECTED_FAIL");
        let rho = r.sigma_d.mul(&CertifiedReal::from_int(8, 96).mul(&crate::exactnum::elementary::pi(96)).sqrt());
        assert!((rho.mid_f64() - 1.056_16).abs() < 1e-5, "{rho}");
        for tau in [TauSpec::mid(), TauSpec::Sigma] {
            let r = verify_theorem_main(&case, &tau, &sched()).unwrap();
            assert!(!r.exception && r.passed(), "{r}");
        }
        let r = verify_theorem_main(&case, &TauSpec::Sigma, &sched()).unwrap();
        assert!(r.check("sigma_d_lower").unwrap().verdict.equality);
    }

    #[test]
    fn small_cases_pass() {
        for nn in (2..=12).step_by(2) {
            for n in 1..nn {
                let case = SymmetricCase::finite(nn, n).unwrap();
                for tau in TauSpec::default_grid() {
                    let r = verify_theorem_main(&case, &tau, &sched()).unwrap();
                    assert!(r.passed(), "{r}");
                    for c in verify_remark_bounds(&case, &tau, &sched()).unwrap() {
                        assert!(c.ok(), "{case} {tau} {} {}", c.name, c.verdict);
                    }
                }
            }
        }
    }

    #[test]
    fn remark_n4_even() {
        let case = SymmetricCase::finite(4, 2).unwrap();
        let model = case.model(&TauSpec::Sigma0).unwrap();
        let d = case.closed_distance(&model.tau, 96);
        let two_s0_d = two_sigma0_d(&case, &TauSpec::Sigma0, 96).unwrap();
        assert!(two_s0_d.contains_rational(&rat(1, 3)), "{two_s0_d} {d}");
    }

    #[test]
    fn binomial_anchor_n1() {
        let v = binomial_sigma_d(1, 96);
        assert!((v.mid_f64() - 0.170_672).abs() < 1e-6);
    }
}
