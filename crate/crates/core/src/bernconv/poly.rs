//! Integer and rational polynomials, coefficients stored lowest degree first.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactnum::Dyadic;

pub type IntPoly = Vec<BigInt>;
type RatPoly = Vec<BigRational>;

pub fn degree(p: &[BigInt]) -> usize {
    p.len().saturating_sub(1)
}

/// `p(t) = v * 2^e` at a dyadic point, returned as `(v, e)` exactly.
pub fn eval_scaled(p: &[BigInt], t: &Dyadic) -> (BigInt, i64) {
    let Some(lead) = p.last() else {
        return (BigInt::zero(), 0);
    };
    let (m, e) = (t.mantissa(), t.exponent());
    let mut acc = lead.clone();
    if e >= 0 {
        let x = m << e as u64;
        for c in p.iter().rev().skip(1) {
            acc = acc * &x + c;
        }
        (acc, 0)
    } else {
        // 2^{-e d} p(m 2^e) = sum c_i m^i 2^{-e(d-i)}.
        let s = (-e) as u64;
        for (j, c) in p.iter().rev().skip(1).enumerate() {
            acc = acc * m + (c << (s * (j as u64 + 1)));
        }
        (acc, e * degree(p) as i64)
    }
}

/// Exact sign of `p(t)` at a dyadic point.
pub fn sign_at(p: &[BigInt], t: &Dyadic) -> Ordering {
    sgn(&eval_scaled(p, t).0)
}

/// `p'` for integer coefficients.
pub fn int_derivative(p: &[BigInt]) -> IntPoly {
    p.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

fn sgn(x: &BigInt) -> Ordering {
    x.cmp(&BigInt::zero())
}

/// Sign changes in the coefficient sequence, zeros skipped.
pub fn variations(p: &[BigInt]) -> usize {
    let mut last = Ordering::Equal;
    let mut n = 0;
    for c in p {
        let s = sgn(c);
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// `p(x + 1)`.
pub fn taylor_shift_one(p: &[BigInt]) -> IntPoly {
    let mut a = p.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = a[j + 1].clone();
            a[j] += t;
        }
    }
    a
}

/// `p(2^k x)`.
pub fn scale_pow2(p: &[BigInt], k: u64) -> IntPoly {
    p.iter().enumerate().map(|(i, c)| c << (k * i as u64)).collect()
}

/// `2^d p(x/2)`.
pub fn halve_arg(p: &[BigInt]) -> IntPoly {
    let d = degree(p) as u64;
    p.iter().enumerate().map(|(i, c)| c << (d - i as u64)).collect()
}

/// Divides out the content and makes the leading coefficient positive.
pub fn primitive(p: &[BigInt]) -> IntPoly {
    let g = p.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() {
        return p.to_vec();
    }
    let neg = p.last().is_some_and(|c| c.is_negative());
    p.iter()
        .map(|c| {
            let q = c / &g;
            if neg {
                -q
            } else {
                q
            }
        })
        .collect()
}

fn trim_rat(p: &mut RatPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn to_rat(p: &[BigInt]) -> RatPoly {
    p.iter().cloned().map(BigRational::from_integer).collect()
}

fn to_int(p: &[BigRational]) -> IntPoly {
    let l = p.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: IntPoly = p.iter().map(|c| (c * &l).to_integer()).collect();
    primitive(&ints)
}

fn derivative(p: &[BigRational]) -> RatPoly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

/// Quotient and remainder of `a / b`, `b` non-zero.
fn divmod(a: &[BigRational], b: &[BigRational]) -> (RatPoly, RatPoly) {
    let mut r = a.to_vec();
    trim_rat(&mut r);
    let db = b.len() - 1;
    let lead = &b[db];
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / lead;
        for (i, c) in b.iter().enumerate() {
            let t = &f * c;
            r[shift + i] -= t;
        }
        q[shift] = f;
        r.pop();
        trim_rat(&mut r);
    }
    (q, r)
}

fn monic(p: &[BigRational]) -> RatPoly {
    let lead = p.last().unwrap().clone();
    p.iter().map(|c| c / &lead).collect()
}

fn gcd(a: &[BigRational], b: &[BigRational]) -> RatPoly {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim_rat(&mut a);
    trim_rat(&mut b);
    while !b.is_empty() {
        let (_, r) = divmod(&a, &b);
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        monic(&a)
    }
}

fn sub(a: &[BigRational], b: &[BigRational]) -> RatPoly {
    let n = a.len().max(b.len());
    let mut out: RatPoly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            x - b.get(i).cloned().unwrap_or_default()
        })
        .collect();
    trim_rat(&mut out);
    out
}

/// Yun's square-free decomposition: primitive factors `f_k` with
/// `p = c * prod f_k^k`, constant factors dropped.
pub fn square_free(p: &[BigInt]) -> Vec<(IntPoly, usize)> {
    let f = to_rat(p);
    let fp = derivative(&f);
    let a0 = gcd(&f, &fp);
    let mut b = divmod(&f, &a0).0;
    let mut c = divmod(&fp, &a0).0;
    let mut d = sub(&c, &derivative(&b));
    let mut out = Vec::new();
    let mut k = 1;
    while b.len() > 1 {
        let a = gcd(&b, &d);
        let nb = divmod(&b, &a).0;
        c = divmod(&d, &a).0;
        if a.len() > 1 {
            out.push((to_int(&a), k));
        }
        b = nb;
        d = sub(&c, &derivative(&b));
        k += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(v: &[i64]) -> IntPoly {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn shift_and_sign() {
        // (x+1)^2 from x^2.
        assert_eq!(taylor_shift_one(&ip(&[0, 0, 1])), ip(&[1, 2, 1]));
        let p = ip(&[-2, 0, 1]);
        assert_eq!(sign_at(&p, &Dyadic::from_f64(1.5)), Ordering::Greater);
        assert_eq!(sign_at(&p, &Dyadic::from_f64(1.375)), Ordering::Less);
        assert_eq!(sign_at(&ip(&[-4, 0, 1]), &Dyadic::from_int(2)), Ordering::Equal);
        assert_eq!(variations(&ip(&[1, 0, -3, 2])), 2);
    }

    #[test]
    fn yun_splits_multiplicities() {
        // (t-1)^3 (t-2) = t^4 - 5t^3 + 9t^2 - 7t + 2
        let p = ip(&[2, -7, 9, -5, 1]);
        let parts = square_free(&p);
        assert_eq!(parts, vec![(ip(&[-2, 1]), 1), (ip(&[-1, 1]), 3)]);
        assert_eq!(square_free(&ip(&[-2, 0, 1])), vec![(ip(&[-2, 0, 1]), 1)]);
    }
}
