use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::rational::{fmt_rational, parse_rational, rat};
use crate::gauss::Scale;

/// Choice of the normal scale `τ` inside `[σ₀, σ]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TauSpec {
    Sigma0,
    Sigma,
    /// `(1-λ)σ₀ + λσ`.
    Fraction(BigRational),
    /// A fixed positive rational value.
    Explicit(BigRational),
}

impl TauSpec {
    pub fn mid() -> TauSpec {
        TauSpec::Fraction(rat(1, 2))
    }

    /// `{σ₀, (σ₀+σ)/2, σ}`.
    pub fn default_grid() -> Vec<TauSpec> {
        vec![TauSpec::Sigma0, TauSpec::mid(), TauSpec::Sigma]
    }

    /// Resolves against `σ₀²` and `σ²`, rejecting values outside `[σ₀, σ]`.
    pub fn resolve(&self, sigma0_sq: &BigRational, sigma_sq: &BigRational) -> Result<Scale> {
        let scale = match self {
            TauSpec::Sigma0 => Scale::sqrt(sigma0_sq.clone()),
            TauSpec::Sigma => Scale::sqrt(sigma_sq.clone()),
            TauSpec::Fraction(l) => {
                if l.is_negative() || l > &BigRational::one() {
                    return Err(Error::TauOutOfRange(format!("fraction {} not in [0,1]", fmt_rational(l))));
                }
                Scale::interp(l.clone(), sigma0_sq.clone(), sigma_sq.clone())
            }
            TauSpec::Explicit(v) => {
                let v2 = v * v;
                if !v.is_positive() || &v2 < sigma0_sq || &v2 > sigma_sq {
                    return Err(Error::TauOutOfRange(format!(
                        "tau = {} with sigma0^2 = {}, sigma^2 = {}",
                        fmt_rational(v),
                        fmt_rational(sigma0_sq),
                        fmt_rational(sigma_sq)
                    )));
                }
                Scale::sqrt(v2)
            }
        };
        if !scale.is_positive() {
            return Err(Error::Degenerate("zero variance".into()));
        }
        Ok(scale)
    }

    /// Position in the default grid, for stable ordering of reports.
    pub fn sort_key(&self) -> (u8, BigRational) {
        match self {
            TauSpec::Sigma0 => (0, BigRational::zero()),
            TauSpec::Fraction(l) => (1, l.clone()),
            TauSpec::Sigma => (2, BigRational::zero()),
            TauSpec::Explicit(v) => (3, v.clone()),
        }
    }
}

impl fmt::Display for TauSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauSpec::Sigma0 => f.write_str("sigma0"),
            TauSpec::Sigma => f.write_str("sigma"),
            TauSpec::Fraction(l) if *l == rat(1, 2) => f.write_str("mid"),
            TauSpec::Fraction(l) => write!(f, "frac:{}", fmt_rational(l)),
            TauSpec::Explicit(v) => f.write_str(&fmt_rational(v)),
        }
    }
}

impl FromStr for TauSpec {
    type Err = Error;

    /// `sigma0`, `mid`, `sigma`, `frac:<λ>`, or a rational value.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "sigma0" => Ok(TauSpec::Sigma0),
            "sigma" => Ok(TauSpec::Sigma),
            "mid" => Ok(TauSpec::mid()),
            _ => {
                let bad = || Error::InvalidParameters(format!("cannot parse tau '{s}'"));
                if let Some(l) = s.strip_prefix("frac:") {
                    return parse_rational(l).map(TauSpec::Fraction).ok_or_else(bad);
                }
                parse_rational(s).map(TauSpec::Explicit).ok_or_else(bad)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["sigma0", "mid", "sigma", "frac:1/4", "3/5"] {
            assert_eq!(s.parse::<TauSpec>().unwrap().to_string(), s);
        }
        assert!("bogus".parse::<TauSpec>().is_err());
    }

    #[test]
    fn explicit_range_is_checked() {
        let (s0, s) = (rat(1, 8), rat(1, 4));
        assert!(TauSpec::Explicit(rat(3, 4)).resolve(&s0, &s).is_err());
        assert!(TauSpec::Explicit(rat(2, 5)).resolve(&s0, &s).is_ok());
        assert_eq!(TauSpec::Sigma.resolve(&s0, &s).unwrap(), Scale::sqrt(rat(1, 4)));
    }
}
