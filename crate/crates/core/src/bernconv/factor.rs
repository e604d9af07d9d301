use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::roots::positive_roots;
use crate::error::{Error, Result};
use crate::exactnum::{to_certified, CertifiedReal, Dyadic};
use crate::laws::{hypergeometric, HypergeometricParams, LatticeLaw};

/// Working precision for the factor enclosures and the reconstruction.
pub const FACTOR_PRECISION: u32 = 64;
pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-10;
pub const MOMENT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorSource {
    Hypergeometric(HypergeometricParams),
    Pmf,
}

/// A law written as `B_{1,p_1} * ... * B_{1,p_m}`.
#[derive(Clone, Debug)]
pub struct BernoulliFactorization {
    /// Ascending enclosures of the `p_j`.
    pub probabilities: Vec<CertifiedReal>,
    pub source: FactorSource,
    pub law: LatticeLaw,
    /// Enclosure of the largest atomwise gap between the convolution and the law.
    pub reconstruction_error: CertifiedReal,
}

impl BernoulliFactorization {
    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// `sum p_j`.
    pub fn mean(&self) -> CertifiedReal {
        self.probabilities
            .iter()
            .fold(CertifiedReal::zero(FACTOR_PRECISION), |s, p| s.add(p))
    }

    /// `sum p_j (1 - p_j)`.
    pub fn variance(&self) -> CertifiedReal {
        let one = CertifiedReal::one(FACTOR_PRECISION);
        self.probabilities
            .iter()
            .fold(CertifiedReal::zero(FACTOR_PRECISION), |s, p| s.add(&p.mul(&one.sub(p))))
    }

    /// Enclosures of `|sum p_j - μ|` and `|sum p_j(1-p_j) - σ²|`.
    pub fn moment_errors(&self) -> (CertifiedReal, CertifiedReal) {
        let c = self.law.cumulants();
        let m = self.mean().sub(&to_certified(&c.mu, FACTOR_PRECISION)).abs();
        let v = self.variance().sub(&to_certified(&c.sigma_sq, FACTOR_PRECISION)).abs();
        (m, v)
    }

    /// Moments within [`MOMENT_TOLERANCE`] and reconstruction within
    /// [`RECONSTRUCTION_TOLERANCE`], both certified.
    pub fn within_tolerance(&self) -> bool {
        let (m, v) = self.moment_errors();
        let below = |x: &CertifiedReal, tol: f64| x.hi() <= &Dyadic::from_f64(tol);
        below(&m, MOMENT_TOLERANCE)
            && below(&v, MOMENT_TOLERANCE)
            && below(&self.reconstruction_error, RECONSTRUCTION_TOLERANCE)
    }

    pub fn probabilities_f64(&self) -> Vec<f64> {
        self.probabilities.iter().map(|p| p.mid_f64()).collect()
    }
}

impl fmt::Display for BernoulliFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            FactorSource::Hypergeometric(p) => writeln!(f, "{p}: {} factors", self.len())?,
            FactorSource::Pmf => writeln!(f, "pmf: {} factors", self.len())?,
        }
        for (j, p) in self.probabilities.iter().enumerate() {
            writeln!(f, "  p{:<3} {:.15}  width {:.1e}", j + 1, p.mid_f64(), p.width_f64())?;
        }
        write!(f, "  reconstruction error <= {:.3e}", self.reconstruction_error.hi().to_f64())
    }
}

/// Bernoulli factors of `H_{n,r,b}`.
pub fn factorize(params: &HypergeometricParams) -> Result<BernoulliFactorization> {
    let mut fac = factorize_law(&hypergeometric(params))?;
    fac.source = FactorSource::Hypergeometric(*params);
    Ok(fac)
}

/// Bernoulli factors of a law on `{0, 1, ...}` from the roots of its
/// generating polynomial: a root `z ≤ 0` gives `p = 1/(1 - z)`.
pub fn factorize_law(law: &LatticeLaw) -> Result<BernoulliFactorization> {
    if law.offset() < 0 {
        return Err(Error::InvalidParameters("support must lie in the non-negative integers".into()));
    }
    let prec = FACTOR_PRECISION;
    // Integer coefficients of sum m_k z^k without the factor z^offset, then z = -t.
    let den = law.masses().iter().fold(BigInt::one(), |l, m| l.lcm(m.denom()));
    let q: Vec<BigInt> = law
        .masses()
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let a = (m * &den).to_integer();
            if i % 2 == 1 {
                -a
            } else {
                a
            }
        })
        .collect();
    let mut probs = vec![CertifiedReal::one(prec); law.offset().to_usize().unwrap_or(0)];
    let one = CertifiedReal::one(prec);
    for root in positive_roots(&q)? {
        let t = CertifiedReal::from_bounds(root.lo, root.hi, prec);
        let p = one.add(&t).recip();
        probs.extend(std::iter::repeat_n(p, root.multiplicity));
    }
    probs.sort_by(|a, b| a.lo().cmp(b.lo()));
    let reconstruction_error = reconstruction_error(&probs, law, prec);
    Ok(BernoulliFactorization {
        probabilities: probs,
        source: FactorSource::Pmf,
        law: law.clone(),
        reconstruction_error,
    })
}

/// Masses of `B_{1,p_1} * ... * B_{1,p_m}` on `{0, ..., m}`.
pub fn convolve_bernoulli(probs: &[CertifiedReal], prec: u32) -> Vec<CertifiedReal> {
    let one = CertifiedReal::one(prec);
    let mut out = vec![one.clone()];
    for p in probs {
        let q = one.sub(p);
        let mut next = vec![CertifiedReal::zero(prec); out.len() + 1];
        for (k, m) in out.iter().enumerate() {
            next[k] = next[k].add(&m.mul(&q));
            next[k + 1] = m.mul(p);
        }
        out = next;
    }
    out
}

fn reconstruction_error(probs: &[CertifiedReal], law: &LatticeLaw, prec: u32) -> CertifiedReal {
    convolve_bernoulli(probs, prec)
        .iter()
        .enumerate()
        .map(|(k, m)| m.sub(&to_certified(&law.pmf(k as i64), prec)).abs())
        .reduce(|a, b| a.max(&b))
        .unwrap_or_else(|| CertifiedReal::zero(prec))
}

/// Exact law of a Bernoulli convolution with rational `p_j`.
pub fn bernoulli_convolution(probs: &[BigRational]) -> Result<LatticeLaw> {
    probs.iter().try_fold(LatticeLaw::dirac(0), |acc, p| {
        Ok(acc.convolve(&LatticeLaw::bernoulli(p)?))
    })
}

/// `true` when `p` is exactly zero or one at the enclosure level.
pub fn is_dirac_factor(p: &CertifiedReal) -> bool {
    p.is_point() && (p.lo().is_zero() || p.lo() == &Dyadic::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;
    use num_traits::Zero;

    fn h(n: u64, r: u64, b: u64) -> BernoulliFactorization {
        factorize(&HypergeometricParams::new(n, r, b).unwrap()).unwrap()
    }

    #[test]
    fn single_fair_coin() {
        let f = h(1, 1, 1);
        assert_eq!(f.len(), 1);
        assert!(f.probabilities[0].contains_rational(&rat(1, 2)));
    }

    #[test]
    fn two_two_two_quadratic() {
        // roots of 1 + 4z + z^2 are -2 ± √3, so p = 1/(3 ∓ √3).
        let f = h(2, 2, 2);
        let s3 = 3f64.sqrt();
        let expect = [1.0 / (3.0 + s3), 1.0 / (3.0 - s3)];
        for (p, e) in f.probabilities.iter().zip(expect) {
            assert!((p.mid_f64() - e).abs() < 1e-12);
        }
        let prod = f.probabilities[0].mul(&f.probabilities[1]);
        assert!((prod.mid_f64() - 1.0 / 6.0).abs() < 1e-12);
        assert!(f.within_tolerance());
    }

    #[test]
    fn three_three_three_mean() {
        let f = h(3, 3, 3);
        assert_eq!(f.len(), 3);
        assert!((f.mean().mid_f64() - 1.5).abs() < 1e-12);
        assert!(f.within_tolerance());
    }

    #[test]
    fn shifted_support_gives_unit_factors() {
        // H(5, 4, 2) lives on {3, 4}.
        let f = h(5, 4, 2);
        assert_eq!(f.law.offset(), 3);
        assert_eq!(f.probabilities.iter().filter(|p| is_dirac_factor(p)).count(), 3);
        assert!(f.within_tolerance());
    }

    #[test]
    fn binomial_has_repeated_root() {
        let law = bernoulli_convolution(&[rat(1, 3), rat(1, 3), rat(1, 3), rat(3, 4)]).unwrap();
        let f = factorize_law(&law).unwrap();
        let mids = f.probabilities_f64();
        assert!((mids[0] - 1.0 / 3.0).abs() < 1e-12 && (mids[2] - 1.0 / 3.0).abs() < 1e-12);
        assert!((mids[3] - 0.75).abs() < 1e-12);
        assert!(f.within_tolerance());
    }

    #[test]
    fn non_real_roots_are_rejected() {
        let law = LatticeLaw::new(0, vec![rat(1, 2), BigRational::zero(), rat(1, 2)]).unwrap();
        assert!(matches!(factorize_law(&law), Err(Error::FactorizationFailed(_))));
    }

    #[test]
    fn dirac_law_has_no_proper_factors() {
        let f = factorize_law(&LatticeLaw::dirac(2)).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.probabilities.iter().all(is_dirac_factor));
    }
}
