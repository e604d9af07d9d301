//! Pointwise certification of the monotonicity and bound statements behind the
//! main distance theorem.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::distance::{at_most_m, ceil_m, BoundCheck, CaseEval, SymmetricCase};
use super::tau::TauSpec;
use crate::error::Result;
use crate::exactnum::elementary::{exp, inv_sqrt_2pi};
use crate::exactnum::rational::{int, rat};
use crate::exactnum::{to_certified, CertifiedReal, PrecisionSchedule, Status, Verdict};
use crate::gauss::{normal, Enclose, Scale};

/// `a₁ = (N-2)N²/(8(N-1)³)`.
pub fn a1(population: u64) -> BigRational {
    let nn = BigInt::from(population);
    let num = (&nn - 2) * &nn * &nn;
    let m1: BigInt = &nn - 1;
    let den = BigInt::from(8) * m1.pow(3);
    BigRational::new(num, den)
}

fn checks_at(case: &SymmetricCase, tau: &TauSpec, prec: u32) -> Result<Vec<BoundCheck>> {
    let ev = CaseEval::new(case, tau, prec)?;
    let t = &ev.table;
    let n = case.n as i64;
    let mean = case.mean();
    let (fl, cl) = (case.floor_half(), case.ceil_half());
    let hi = ev.hi();
    let wp = prec + 8;
    let tau_sq = ev.model.tau.square(wp);
    let mut out = Vec::new();

    // g(s+1)/g(s) between exp(-(s-n/2)/τ²) and exp(-(1-1/(12τ²))(s-n/2)/τ²), s > n/2.
    let first_above = fl + 1;
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for s in first_above..hi {
        let z = to_certified(&(int(s) - &mean), wp).div(&tau_sq);
        let (g0, g1) = (t.step(s), t.step(s + 1));
        lower.push(Verdict::strict_less(&exp(&z.neg()).mul(&g0), &g1));
        let shrink = CertifiedReal::one(wp).sub(&tau_sq.mul_rational(&int(12)).recip());
        upper.push(Verdict::strict_less(&g1, &exp(&z.mul(&shrink).neg()).mul(&g0)));
    }
    out.push(BoundCheck::pass("g_ratio_lower", Verdict::worst(lower, prec)));
    out.push(BoundCheck::pass("g_ratio_upper", Verdict::worst(upper, prec)));

    if let (Some(r), Some(k)) = (case.half_population(), case.central_mass().map(|_| n / 2)) {
        // n even, N finite.
        let nn = 2 * r;
        let a = a1(nn);
        let fk = case.law.pmf(k);
        let sf2 = &case.sigma_sq * &fk * &fk;
        out.push(BoundCheck::pass("a1_above_eighth", Verdict::rational(&rat(1, 8), &a, true, prec)));
        out.push(BoundCheck::pass("sigma_f_above_a1", Verdict::rational(&a, &sf2, false, prec)));
        let eq_expected = case.n == 2 || case.n + 2 == nn;
        out.push(BoundCheck::pass(
            "a1_equality_case",
            Verdict::from_bool((a == sf2) == eq_expected, prec),
        ));

        let (ri, ki) = (r as i64, k);
        let s0sq = &case.sigma0_sq;
        out.push(BoundCheck::pass(
            "sigma0_sq_range",
            Verdict::from_bool(
                *s0sq == rat(ki * (ri - ki), 2 * ri) && rat(1, 4) <= *s0sq && *s0sq <= rat(ri, 8),
                prec,
            ),
        ));
        let s0 = Scale::sqrt(s0sq.clone()).enclose(wp);
        let unit = s0.mul(&crate::exactnum::elementary::sqrt_2pi(wp)).recip();
        let inv_s0sq = s0sq.recip();
        let e = |q: BigRational| exp(&to_certified(&q, wp));
        let f = to_certified(&fk, wp);
        let l1 = unit.mul(&e(rat(23, 192 * ri) - &inv_s0sq / int(16)));
        let l2 = unit.mul(&e(-&inv_s0sq / int(16)));
        let u1 = unit.mul(&e(rat(1, 8 * ri) - &inv_s0sq * rat(23, 384)));
        let u2 = unit.mul(&e(-&inv_s0sq / int(24)));
        let u3 = ev.sigma.recip().mul(&inv_sqrt_2pi(wp));
        let pairs = [
            ("f_center_lower", &l1, &f),
            ("f_center_lower_chain", &l2, &l1),
            ("f_center_upper", &f, &u1),
            ("f_center_upper_chain", &u1, &u2),
            ("f_center_upper_sigma", &u2, &u3),
        ];
        for (name, a, b) in pairs {
            out.push(BoundCheck::pass(name, Verdict::strict_less(a, b)));
        }
    }

    // f/g strictly decreasing on n/2 <= s <= (n ∧ r) + 1.
    let top = case.half_population().map_or(n, |r| n.min(r as i64)) + 1;
    let dec = (cl..top).map(|s| {
        let lhs = ev.f(s + 1).mul(&t.step(s));
        let rhs = ev.f(s).mul(&t.step(s + 1));
        Verdict::strict_less(&lhs, &rhs)
    });
    out.push(BoundCheck::pass("f_over_g_decreasing", Verdict::worst(dec, prec)));
    let below = (fl + 1..=hi).map(|s| Verdict::strict_less(&ev.f(s), &t.step(s)));
    out.push(BoundCheck::pass("f_below_g", Verdict::worst(below, prec)));

    // f(s-1)/g(s) strictly increasing on (n+1)/2 <= s <= M.
    let start = (n + 1 + 1) / 2;
    let inc = (start..)
        .take_while(|&s| at_most_m(case, s + 1))
        .map(|s| {
            let lhs = ev.f(s - 1).mul(&t.step(s + 1));
            let rhs = ev.f(s).mul(&t.step(s));
            Verdict::strict_less(&lhs, &rhs)
        });
    out.push(BoundCheck::pass("f_shift_over_g_increasing", Verdict::worst(inc, prec)));
    let gb = (cl + 1..)
        .take_while(|&s| at_most_m(case, s))
        .map(|s| Verdict::strict_less(&t.step(s), &ev.f(s - 1)));
    out.push(BoundCheck::pass("g_below_f_shift", Verdict::worst(gb, prec)));

    // G(s) - F(s-1) < φ(3/2)/σ for s >= M.
    let bound = normal::pdf(&to_certified(&rat(3, 2), wp)).div(&ev.sigma);
    let tail = (ceil_m(case)..=hi.max(ceil_m(case)))
        .map(|s| Verdict::strict_less(&ev.left_gap(s), &bound));
    out.push(BoundCheck::pass("tail_gap_bound", Verdict::worst(tail, prec)));

    for c in &mut out {
        c.verdict.precision_used = prec;
    }
    Ok(out)
}

/// Certifies, over the stated index ranges, the increment-ratio bounds, the
/// central-mass bounds for even `n`, the two monotone ratio chains and the
/// tail bound beyond `M = n/2 + 1 + (3/2)σ`.
pub fn verify_section4_monotonicity(
    case: &SymmetricCase,
    tau: &TauSpec,
    sched: &PrecisionSchedule,
) -> Result<Vec<BoundCheck>> {
    let mut last = Vec::new();
    for prec in sched.steps() {
        last = checks_at(case, tau, prec)?;
        if last.iter().all(|c| c.verdict.status != Status::Inconclusive) {
            break;
        }
    }
    Ok(last)
}

/// `h(r, k) = (3/4) log((r-k+1/2)/(r-k+1)) + (1/2) log((r-k+1/2)/(r-k))`.
pub fn h_rk(r: u64, k: u64, prec: u32) -> CertifiedReal {
    use crate::exactnum::elementary::log;
    let m = (r - k) as i64;
    let a = log(&to_certified(&rat(2 * m + 1, 2 * m + 2), prec + 8));
    let b = log(&to_certified(&rat(2 * m + 1, 2 * m), prec + 8));
    a.mul_rational(&rat(3, 4))
        .add(&b.mul_rational(&rat(1, 2)))
        .with_precision(prec)
}
