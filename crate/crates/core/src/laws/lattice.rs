use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::rational::fmt_rational;

/// Mean, variance and third central moment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumulantTriple {
    pub mu: BigRational,
    pub sigma_sq: BigRational,
    pub kappa3: BigRational,
}

/// A law on `{offset, ..., offset + len - 1}` with exact masses summing to one.
///
/// The first and last masses are positive, so `offset` and `max()` are the
/// support endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeLaw {
    offset: i64,
    masses: Vec<BigRational>,
}

impl LatticeLaw {
    /// Validates and trims zero masses at both ends.
    pub fn new(offset: i64, masses: Vec<BigRational>) -> Result<Self> {
        if masses.iter().any(|m| m.is_negative()) {
            return Err(Error::InvalidParameters("negative mass".into()));
        }
        let total: BigRational = masses.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidParameters(format!(
                "masses sum to {}, not 1",
                fmt_rational(&total)
            )));
        }
        Ok(LatticeLaw::trimmed(offset, masses))
    }

    /// Caller guarantees non-negative masses summing to one.
    pub(crate) fn trimmed(mut offset: i64, mut masses: Vec<BigRational>) -> Self {
        while masses.last().is_some_and(|m| m.is_zero()) {
            masses.pop();
        }
        let lead = masses.iter().take_while(|m| m.is_zero()).count();
        masses.drain(..lead);
        offset += lead as i64;
        debug_assert!(!masses.is_empty());
        LatticeLaw { offset, masses }
    }

    pub fn dirac(a: i64) -> Self {
        LatticeLaw {
            offset: a,
            masses: vec![BigRational::one()],
        }
    }

    /// `B_{1,p}`.
    pub fn bernoulli(p: &BigRational) -> Result<Self> {
        if p.is_negative() || p > &BigRational::one() {
            return Err(Error::InvalidParameters("p outside [0,1]".into()));
        }
        Ok(LatticeLaw::trimmed(
            0,
            vec![BigRational::one() - p, p.clone()],
        ))
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Largest support point.
    pub fn max(&self) -> i64 {
        self.offset + self.masses.len() as i64 - 1
    }

    pub fn masses(&self) -> &[BigRational] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn is_dirac(&self) -> bool {
        self.masses.len() == 1
    }

    /// `P({k})`.
    pub fn pmf(&self, k: i64) -> BigRational {
        if k < self.offset || k > self.max() {
            BigRational::zero()
        } else {
            self.masses[(k - self.offset) as usize].clone()
        }
    }

    /// `F(offset + i)` for every support index `i`; the last entry is 1.
    pub fn cdf_values(&self) -> Vec<BigRational> {
        let mut acc = BigRational::zero();
        self.masses
            .iter()
            .map(|m| {
                acc += m;
                acc.clone()
            })
            .collect()
    }

    /// `F(k) = P((-inf, k])`.
    pub fn cdf(&self, k: i64) -> BigRational {
        if k < self.offset {
            return BigRational::zero();
        }
        if k >= self.max() {
            return BigRational::one();
        }
        self.masses[..=(k - self.offset) as usize].iter().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        (self.offset..).zip(self.masses.iter())
    }

    pub fn mean(&self) -> BigRational {
        self.support()
            .map(|(k, m)| m * BigInt::from(k))
            .sum()
    }

    /// Mean, variance and third central moment from moment sums.
    pub fn cumulants(&self) -> CumulantTriple {
        let mu = self.mean();
        let mut s2 = BigRational::zero();
        let mut s3 = BigRational::zero();
        for (k, m) in self.support() {
            let c = BigRational::from_integer(BigInt::from(k)) - &mu;
            let c2 = &c * &c;
            s2 += &c2 * m;
            s3 += c2 * c * m;
        }
        CumulantTriple {
            mu,
            sigma_sq: s2,
            kappa3: s3,
        }
    }

    pub fn variance(&self) -> BigRational {
        self.cumulants().sigma_sq
    }

    /// Law of `X + a`.
    pub fn shift(&self, a: i64) -> LatticeLaw {
        LatticeLaw {
            offset: self.offset + a,
            masses: self.masses.clone(),
        }
    }

    /// Law of `n - X`.
    pub fn reflect(&self, n: i64) -> LatticeLaw {
        let mut masses = self.masses.clone();
        masses.reverse();
        LatticeLaw {
            offset: n - self.max(),
            masses,
        }
    }

    /// Symmetric about its mean, i.e. the mass sequence is a palindrome.
    pub fn is_palindrome(&self) -> bool {
        let m = &self.masses;
        (0..m.len() / 2).all(|i| m[i] == m[m.len() - 1 - i])
    }

    /// Exact convolution.
    pub fn convolve(&self, other: &LatticeLaw) -> LatticeLaw {
        let mut out = vec![BigRational::zero(); self.len() + other.len() - 1];
        for (i, a) in self.masses.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.masses.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        LatticeLaw::trimmed(self.offset + other.offset, out)
    }

    /// Largest mass.
    pub fn max_atom(&self) -> BigRational {
        self.masses.iter().max().cloned().unwrap_or_default()
    }

    /// Masses as `f64`, for display and float-side oracles.
    pub fn masses_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.masses.iter().map(|m| m.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl fmt::Display for LatticeLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, m)) in self.support().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{k}:{}", fmt_rational(m))?;
        }
        Ok(())
    }
}

/// Serializable view: offset plus masses as `num/den` strings.
#[derive(Serialize)]
pub struct LawView {
    pub offset: i64,
    pub masses: Vec<String>,
}

impl From<&LatticeLaw> for LawView {
    fn from(l: &LatticeLaw) -> Self {
        LawView {
            offset: l.offset,
            masses: l.masses.iter().map(fmt_rational).collect(),
        }
    }
}
