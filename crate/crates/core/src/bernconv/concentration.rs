//! Concentration of lattice laws on open windows against their variance,
//! with Lévy's sharper two-point-lattice form.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::rational::{fmt_rational, int};
use crate::exactnum::{to_certified, CertifiedReal, Status, Verdict};
use crate::laws::LatticeLaw;

const PREC: u32 = 96;

/// A lattice law placed on `spacing * Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledLaw {
    pub law: LatticeLaw,
    pub spacing: BigRational,
}

impl ScaledLaw {
    pub fn unit(law: &LatticeLaw) -> Self {
        ScaledLaw {
            law: law.clone(),
            spacing: BigRational::one(),
        }
    }

    pub fn variance(&self) -> BigRational {
        &self.spacing * &self.spacing * self.law.variance()
    }

    /// Atoms with positive mass as `(position, mass)`.
    pub fn atoms(&self) -> impl Iterator<Item = (BigRational, &BigRational)> + '_ {
        self.law
            .support()
            .filter(|(_, m)| !m.is_zero())
            .map(|(k, m)| (int(k) * &self.spacing, m))
    }
}

impl fmt::Display for ScaledLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, m)) in self.atoms().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}:{}", fmt_rational(&x), fmt_rational(m))?;
        }
        Ok(())
    }
}

/// Verdict of `a >= b` for `a >= 0` known exactly and `b = √b_sq` given
/// through its square; the margin is an enclosure of `a - b`.
fn at_least_sqrt(a: &BigRational, b_sq: &BigRational) -> Verdict {
    let a_sq = a * a;
    let margin = to_certified(a, PREC).sub(&to_certified(b_sq, PREC).sqrt());
    Verdict {
        status: if a_sq >= *b_sq { Status::Pass } else { Status::Fail },
        margin,
        precision_used: PREC,
        equality: a_sq == *b_sq,
    }
}

#[derive(Clone, Debug)]
pub struct ConcentrationReport {
    pub h: BigRational,
    /// `sup_x P(]x, x+h[)`.
    pub lhs: BigRational,
    /// `h / √(h² + 12σ²)`.
    pub rhs: CertifiedReal,
    /// Lattice index of the first atom of a maximizing window.
    pub window_start: i64,
    /// Atoms per window.
    pub window_atoms: usize,
    pub verdict: Verdict,
}

impl fmt::Display for ConcentrationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "h={} sup={} ({:.10}) >= {:.10}: {}",
            fmt_rational(&self.h),
            fmt_rational(&self.lhs),
            self.lhs.to_f64().unwrap_or(f64::NAN),
            self.rhs.mid_f64(),
            self.verdict
        )
    }
}

/// Number of lattice points an open window of length `len` can hold.
fn window_size(len: &BigRational) -> usize {
    len.ceil().to_integer().to_usize().unwrap_or(usize::MAX).max(1)
}

/// Best run of `w` consecutive atoms: `(mass, first index)`.
fn best_run(law: &LatticeLaw, w: usize) -> (BigRational, i64) {
    let m = law.masses();
    if w >= m.len() {
        return (BigRational::one(), law.offset());
    }
    let mut sum: BigRational = m[..w].iter().sum();
    let mut best = (sum.clone(), 0);
    for i in w..m.len() {
        sum += &m[i];
        sum -= &m[i - w];
        if sum > best.0 {
            best = (sum.clone(), i + 1 - w);
        }
    }
    (best.0, law.offset() + best.1 as i64)
}

/// Exact `sup_x P(]x, x+h[)`. An open window of length `L` lattice steps
/// covers at most `⌈L⌉` consecutive points and every such run is realized.
pub fn concentration(law: &ScaledLaw, h: &BigRational) -> BigRational {
    best_run(&law.law, window_size(&(h / &law.spacing))).0
}

pub fn concentration_lower_bound(law: &LatticeLaw, h: &BigRational) -> Result<ConcentrationReport> {
    concentration_lower_bound_scaled(&ScaledLaw::unit(law), h)
}

/// `sup_x P(]x, x+h[) >= h/√(h²+12σ²)`, decided exactly on squares.
pub fn concentration_lower_bound_scaled(law: &ScaledLaw, h: &BigRational) -> Result<ConcentrationReport> {
    if !h.is_positive() {
        return Err(Error::InvalidParameters("window length must be positive".into()));
    }
    let w = window_size(&(h / &law.spacing));
    let (lhs, window_start) = best_run(&law.law, w);
    let denom = h * h + int(12) * law.variance();
    let rhs_sq = h * h / &denom;
    let rhs = to_certified(h, PREC).div(&to_certified(&denom, PREC).sqrt());
    Ok(ConcentrationReport {
        h: h.clone(),
        verdict: at_least_sqrt(&lhs, &rhs_sq),
        lhs,
        rhs,
        window_start,
        window_atoms: w,
    })
}

/// `g(x) = P(]x-h, x[)/h`, the density of the law smoothed by the uniform law
/// on `]0, h[`, taken just right of each breakpoint (atoms and atoms + h),
/// where it attains all of its values. Returns `sup g`.
pub fn smoothed_density_sup(law: &ScaledLaw, h: &BigRational) -> BigRational {
    let atoms: Vec<(BigRational, BigRational)> = law.atoms().map(|(x, m)| (x, m.clone())).collect();
    let mut best = BigRational::zero();
    for (b, _) in &atoms {
        for point in [b.clone(), b + h] {
            // x = point + 0: atoms a with point - h < a <= point.
            let mass: BigRational = atoms
                .iter()
                .filter(|(a, _)| *a > &point - h && *a <= point)
                .map(|(_, m)| m)
                .sum();
            best = best.max(mass);
        }
    }
    best / h
}

/// `sup g >= 1/√(12(σ² + h²/12))`, the density form applied to the smoothed law.
pub fn smoothed_density_check(law: &ScaledLaw, h: &BigRational) -> Verdict {
    let sup = smoothed_density_sup(law, h);
    let var = law.variance() + h * h / int(12);
    at_least_sqrt(&sup, &(int(12) * var).recip())
}

/// Lévy's decomposition `c = λ/p + (1-λ)/(p+1)` with `1/(p+1) < c <= 1/p`.
pub fn levy_decompose(c: &BigRational) -> Result<(u64, BigRational)> {
    if !c.is_positive() || c > &BigRational::one() {
        return Err(Error::Degenerate(format!("concentration {} outside (0,1]", fmt_rational(c))));
    }
    let p = c.recip().floor().to_integer();
    let lambda = c * &p * (&p + BigInt::one()) - BigRational::from_integer(p.clone());
    Ok((p.to_u64().expect("small p"), lambda))
}

#[derive(Clone, Debug)]
pub struct LevyReport {
    pub h: BigRational,
    pub c: BigRational,
    pub p: u64,
    pub lambda: BigRational,
    /// `12σ²/h²`.
    pub scaled_variance: BigRational,
    /// `λp² + (1-λ)(p+1)² - 1`.
    pub levy_rhs: BigRational,
    /// `c⁻² - 1`.
    pub implied: BigRational,
    /// `12σ²/h² >= levy_rhs`.
    pub levy: Verdict,
    /// `levy_rhs >= c⁻² - 1`, the convexity step down to the weaker bound.
    pub chain: Verdict,
}

impl LevyReport {
    pub fn passed(&self) -> bool {
        self.levy.is_pass() && self.chain.is_pass()
    }
}

impl fmt::Display for LevyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "c={} p={} lambda={}: 12s2/h2={} >= {} >= {} [{}; {}]",
            fmt_rational(&self.c),
            self.p,
            fmt_rational(&self.lambda),
            fmt_rational(&self.scaled_variance),
            fmt_rational(&self.levy_rhs),
            fmt_rational(&self.implied),
            self.levy.status,
            self.chain.status
        )
    }
}

pub fn levy_sharp_check(law: &LatticeLaw, h: &BigRational) -> Result<LevyReport> {
    levy_sharp_check_scaled(&ScaledLaw::unit(law), h)
}

pub fn levy_sharp_check_scaled(law: &ScaledLaw, h: &BigRational) -> Result<LevyReport> {
    if !h.is_positive() {
        return Err(Error::InvalidParameters("window length must be positive".into()));
    }
    let c = concentration(law, h);
    let (p, lambda) = levy_decompose(&c)?;
    let pp = int(p as i64);
    let one = BigRational::one();
    let levy_rhs = &lambda * &pp * &pp + (&one - &lambda) * (&pp + &one) * (&pp + &one) - &one;
    let implied = (&c * &c).recip() - &one;
    let scaled_variance = int(12) * law.variance() / (h * h);
    Ok(LevyReport {
        h: h.clone(),
        levy: Verdict::rational(&levy_rhs, &scaled_variance, false, PREC),
        chain: Verdict::rational(&implied, &levy_rhs, false, PREC),
        c,
        p,
        lambda,
        scaled_variance,
        levy_rhs,
        implied,
    })
}

/// `(λ/p) Σ_{j<p} δ_{jh} + ((1-λ)/(p+1)) Σ_{j<=p} δ_{(j-1/2)h}` on the
/// lattice `(h/2) Z`, with its Lévy check.
#[derive(Clone, Debug)]
pub struct LevyEqualityLaw {
    pub law: ScaledLaw,
    pub report: LevyReport,
    /// `λ/p + (1-λ)/(p+1)`.
    pub expected_c: BigRational,
}

impl LevyEqualityLaw {
    /// Equality in Lévy's inequality and the expected concentration, both exact.
    pub fn verdict(&self) -> Verdict {
        let ok = self.report.c == self.expected_c && self.report.scaled_variance == self.report.levy_rhs;
        let mut v = Verdict::from_bool(ok, PREC);
        v.equality = ok;
        v
    }
}

pub fn levy_equality_law(p: u64, lambda: &BigRational, h: &BigRational) -> Result<LevyEqualityLaw> {
    if p == 0 || lambda.is_negative() || lambda > &BigRational::one() || !h.is_positive() {
        return Err(Error::InvalidParameters("need p >= 1, lambda in [0,1], h > 0".into()));
    }
    let pp = int(p as i64);
    let one = BigRational::one();
    let whole = lambda / &pp;
    let half = (&one - lambda) / (&pp + &one);
    // Index i stands for i*h/2: jh -> 2j, (j-1/2)h -> 2j-1; offset -1.
    let len = 2 * p as usize + 1;
    let mut masses = vec![BigRational::zero(); len];
    for j in 0..p as usize {
        masses[2 * j + 1] += &whole;
    }
    for j in 0..=p as usize {
        masses[2 * j] += &half;
    }
    let law = ScaledLaw {
        law: LatticeLaw::new(-1, masses)?,
        spacing: h / int(2),
    };
    let report = levy_sharp_check_scaled(&law, h)?;
    Ok(LevyEqualityLaw {
        law,
        report,
        expected_c: whole + half,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;
    use crate::laws::{binomial, hypergeometric, HypergeometricParams};

    #[test]
    fn fair_coin_is_an_equality_case() {
        let law = LatticeLaw::bernoulli(&rat(1, 2)).unwrap();
        let r = concentration_lower_bound(&law, &int(1)).unwrap();
        assert_eq!(r.lhs, rat(1, 2));
        assert!(r.verdict.is_pass() && r.verdict.equality);
        let l = levy_sharp_check(&law, &int(1)).unwrap();
        assert_eq!((l.p, l.lambda.clone()), (2, int(1)));
        assert_eq!(l.levy_rhs, int(3));
        assert!(l.levy.equality && l.passed());
    }

    #[test]
    fn windows_are_open() {
        let law = hypergeometric(&HypergeometricParams::new(2, 3, 3).unwrap());
        let r = concentration_lower_bound(&law, &int(1)).unwrap();
        assert_eq!(r.lhs, rat(3, 5));
        assert!((r.rhs.mid_f64() - 1.0 / (1.0f64 + 24.0 / 5.0).sqrt()).abs() < 1e-15);
        // Length 2 holds two neighbours, never three.
        assert_eq!(concentration_lower_bound(&law, &int(2)).unwrap().lhs, rat(4, 5));
        assert_eq!(concentration_lower_bound(&law, &rat(5, 2)).unwrap().lhs, int(1));
        let b = binomial(2, &rat(1, 2)).unwrap();
        let r = concentration_lower_bound(&b, &int(3)).unwrap();
        assert_eq!(r.lhs, int(1));
        assert!(r.verdict.is_pass() && !r.verdict.equality);
    }

    #[test]
    fn levy_on_two_three_three() {
        let law = hypergeometric(&HypergeometricParams::new(2, 3, 3).unwrap());
        let l = levy_sharp_check(&law, &int(1)).unwrap();
        assert_eq!((l.p, l.lambda.clone()), (1, rat(1, 5)));
        assert_eq!(l.levy_rhs, rat(12, 5));
        assert_eq!(l.scaled_variance, rat(24, 5));
        assert!(l.passed() && !l.levy.equality);
    }

    #[test]
    fn point_mass() {
        let l = levy_sharp_check(&LatticeLaw::dirac(0), &int(1)).unwrap();
        assert_eq!((l.p, l.lambda.clone(), l.levy_rhs.clone()), (1, int(1), int(0)));
        assert!(l.levy.equality);
    }

    #[test]
    fn equality_laws() {
        let e = levy_equality_law(1, &int(0), &int(1)).unwrap();
        assert_eq!(e.law.variance(), rat(1, 4));
        assert_eq!(e.law.to_string(), "-1/2:1/2 1/2:1/2");
        let e = levy_equality_law(2, &rat(1, 2), &int(1)).unwrap();
        assert_eq!(e.report.scaled_variance, rat(11, 2));
        assert!(e.verdict().is_pass());
        let e = levy_equality_law(1, &int(1), &int(1)).unwrap();
        assert!(e.law.law.is_dirac() && e.verdict().is_pass());
    }

    #[test]
    fn smoothing_matches_window_sup() {
        let law = ScaledLaw::unit(&hypergeometric(&HypergeometricParams::new(3, 4, 5).unwrap()));
        for h in [rat(1, 2), int(1), rat(3, 2), int(2)] {
            assert_eq!(smoothed_density_sup(&law, &h) * &h, concentration(&law, &h));
            assert!(smoothed_density_check(&law, &h).is_pass());
        }
    }
}
