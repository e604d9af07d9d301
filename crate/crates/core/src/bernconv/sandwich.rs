use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::rational::{int, rat};
use crate::exactnum::{to_certified, CertifiedReal, PrecisionSchedule, Status, Verdict};
use crate::gauss::{NormalModel, Scale};
use crate::kolmo::kolmogorov_distance_brute;
use crate::laws::LatticeLaw;

use super::factor::BernoulliFactorization;

/// `1/(2√(1+12σ²)) <= ‖F - G‖ < 0.5583/σ` for `G` the normal law with the
/// same mean and variance.
#[derive(Clone, Debug)]
pub struct SandwichReport {
    pub distance: CertifiedReal,
    pub lower_bound: CertifiedReal,
    pub upper_bound: CertifiedReal,
    pub lower: Verdict,
    pub upper: Verdict,
}

impl SandwichReport {
    pub fn passed(&self) -> bool {
        self.lower.is_pass() && self.upper.is_pass()
    }
}

impl fmt::Display for SandwichReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lower {:.10} <= d = {:.10}: {}", self.lower_bound.mid_f64(), self.distance.mid_f64(), self.lower)?;
        write!(f, "d < upper {:.10}: {}", self.upper_bound.mid_f64(), self.upper)
    }
}

fn sandwich_at(law: &LatticeLaw, prec: u32) -> SandwichReport {
    let c = law.cumulants();
    let model = NormalModel::new(c.mu.clone(), Scale::sqrt(c.sigma_sq.clone()));
    let wp = prec + 8;
    let distance = kolmogorov_distance_brute(law, &model, wp).sup;
    let inner = to_certified(&(int(1) + int(12) * &c.sigma_sq), wp).sqrt();
    let lower_bound = inner.mul_pow2(1).recip();
    let sigma = to_certified(&c.sigma_sq, wp).sqrt();
    let upper_bound = to_certified(&rat(5583, 10000), wp).div(&sigma);
    let mut lower = Verdict::strict_less(&lower_bound, &distance);
    let mut upper = Verdict::strict_less(&distance, &upper_bound);
    lower.precision_used = prec;
    upper.precision_used = prec;
    SandwichReport {
        distance,
        lower_bound,
        upper_bound,
        lower,
        upper,
    }
}

/// Checks both bounds against the brute-force distance, escalating precision
/// while either is undecided.
pub fn verify_bc_sandwich(law: &LatticeLaw, sched: &PrecisionSchedule) -> Result<SandwichReport> {
    if law.variance().is_zero() {
        return Err(Error::Degenerate("point mass has no matched normal law".into()));
    }
    let mut last = None;
    for prec in sched.steps() {
        let r = sandwich_at(law, prec);
        let done = r.lower.status != Status::Inconclusive && r.upper.status != Status::Inconclusive;
        last = Some(r);
        if done {
            break;
        }
    }
    Ok(last.expect("non-empty schedule"))
}

impl BernoulliFactorization {
    pub fn sandwich(&self, sched: &PrecisionSchedule) -> Result<SandwichReport> {
        verify_bc_sandwich(&self.law, sched)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::{hypergeometric, HypergeometricParams};

    #[test]
    fn two_three_three() {
        let law = hypergeometric(&HypergeometricParams::new(2, 3, 3).unwrap());
        let r = verify_bc_sandwich(&law, &PrecisionSchedule::default()).unwrap();
        assert!((r.distance.mid_f64() - 0.3).abs() < 1e-9, "{}", r.distance);
        assert!((r.lower_bound.mid_f64() - 1.0 / (2.0 * 5.8f64.sqrt())).abs() < 1e-12);
        assert!(r.passed());
    }

    #[test]
    fn fair_coin() {
        let law = LatticeLaw::bernoulli(&rat(1, 2)).unwrap();
        let r = verify_bc_sandwich(&law, &PrecisionSchedule::default()).unwrap();
        assert!((r.lower_bound.mid_f64() - 0.25).abs() < 1e-15);
        assert!((r.distance.mid_f64() - 0.341344746068543).abs() < 1e-12);
        assert!(r.passed());
        assert!(verify_bc_sandwich(&LatticeLaw::dirac(0), &PrecisionSchedule::default()).is_err());
    }
}
