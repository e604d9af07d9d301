//! Exact rational helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type ExactRational = BigRational;

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `C(a, k)` as an integer, zero when `k < 0` or `k > a`.
pub fn binomial_int(a: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > a {
        return BigInt::zero();
    }
    let k = (k as u64).min(a - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// `C(a, k)` with the convention `C(a, k) = 0` for `k` outside `0..=a`.
pub fn binomial_coeff(a: u64, k: i64) -> BigRational {
    BigRational::from_integer(binomial_int(a, k))
}

/// `a / b` with `0/0 := 0`. Panics on `x/0` for nonzero `x`.
pub fn ratio(a: &BigRational, b: &BigRational) -> BigRational {
    if b.is_zero() {
        assert!(a.is_zero(), "division of a nonzero rational by zero");
        return BigRational::zero();
    }
    a / b
}

/// Formats as `num/den`, or just `num` for integers.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `a`, `a/b` or a finite decimal such as `0.25`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.bytes().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        let whole: BigInt = if ip.is_empty() { BigInt::zero() } else { ip.parse().ok()? };
        let frac: BigInt = fp.parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let v = BigRational::new(whole * &scale + frac, scale);
        return Some(if neg { -v } else { v });
    }
    s.parse::<BigInt>().ok().map(BigRational::from_integer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial_coeff(6, 2), int(15));
        assert_eq!(binomial_coeff(5, -1), int(0));
        assert_eq!(binomial_coeff(5, 6), int(0));
        assert_eq!(binomial_coeff(0, 0), int(1));
    }

    #[test]
    fn binomial_matches_pascal_triangle() {
        let mut row = vec![BigInt::one()];
        for a in 0..=60u64 {
            for (k, v) in row.iter().enumerate() {
                assert_eq!(&binomial_int(a, k as i64), v);
            }
            let mut next = vec![BigInt::one(); row.len() + 1];
            for k in 1..row.len() {
                next[k] = &row[k - 1] + &row[k];
            }
            row = next;
        }
        assert_eq!(binomial_int(40, 20), BigInt::from(137846528820u64));
    }

    #[test]
    fn zero_over_zero() {
        assert_eq!(ratio(&int(0), &int(0)), int(0));
        assert_eq!(ratio(&int(3), &int(6)), rat(1, 2));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6"), Some(rat(1, 2)));
        assert_eq!(parse_rational("0.25"), Some(rat(1, 4)));
        assert_eq!(parse_rational("-1.5"), Some(rat(-3, 2)));
        assert_eq!(parse_rational("7"), Some(int(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(fmt_rational(&rat(3, 5)), "3/5");
        assert_eq!(fmt_rational(&int(-2)), "-2");
    }
}
