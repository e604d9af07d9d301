//! Certified comparison outcomes with precision escalation.

use std::fmt;

use serde::Serialize;

use num_rational::BigRational;

use super::real::{to_certified, CertifiedReal, MIN_PRECISION};

pub const DEFAULT_PRECISION: u32 = 96;
pub const PRECISION_CAP: u32 = 768;
pub const PRECISION_ENV: &str = "HYPERG_PRECISION_BITS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Outcome of testing `a < b` (or `a <= b`) on enclosures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    /// Enclosure of `b - a`.
    pub margin: CertifiedReal,
    pub precision_used: u32,
    /// Set when a non-strict inequality was decided as an exact equality.
    pub equality: bool,
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }

    /// Verdict of `a < b` at the precision the enclosures already carry.
    pub fn strict_less(a: &CertifiedReal, b: &CertifiedReal) -> Verdict {
        let margin = b.sub(a);
        let status = if a.hi() < b.lo() {
            Status::Pass
        } else if b.hi() < a.lo() {
            Status::Fail
        } else {
            Status::Inconclusive
        };
        Verdict {
            status,
            precision_used: margin.precision(),
            margin,
            equality: false,
        }
    }

    /// A non-strict inequality that holds with equality, known exactly.
    pub fn exact_equality(prec: u32) -> Verdict {
        Verdict {
            status: Status::Pass,
            margin: CertifiedReal::zero(prec),
            precision_used: prec,
            equality: true,
        }
    }
}

impl Verdict {
    /// Outcome of an exactly decided predicate; the margin is zero.
    pub fn from_bool(ok: bool, prec: u32) -> Verdict {
        Verdict {
            status: if ok { Status::Pass } else { Status::Fail },
            margin: CertifiedReal::zero(prec),
            precision_used: prec,
            equality: false,
        }
    }

    /// Exact comparison `a < b` (or `a <= b` when `strict` is false) of rationals.
    pub fn rational(a: &BigRational, b: &BigRational, strict: bool, prec: u32) -> Verdict {
        let ok = if strict { a < b } else { a <= b };
        Verdict {
            status: if ok { Status::Pass } else { Status::Fail },
            margin: to_certified(&(b - a), prec),
            precision_used: prec,
            equality: a == b,
        }
    }

    /// Combines pointwise verdicts: the first FAIL, else the first
    /// INCONCLUSIVE, else the PASS with the smallest margin.
    pub fn worst<I: IntoIterator<Item = Verdict>>(verdicts: I, prec: u32) -> Verdict {
        let mut best: Option<Verdict> = None;
        for v in verdicts {
            let rank = |v: &Verdict| match v.status {
                Status::Fail => 0,
                Status::Inconclusive => 1,
                Status::Pass => 2,
            };
            best = Some(match best {
                None => v,
                Some(b) if rank(&v) < rank(&b) => v,
                Some(b) if rank(&v) == rank(&b) && v.margin.lo() < b.margin.lo() => v,
                Some(b) => b,
            });
        }
        // An empty range is vacuously true.
        best.unwrap_or_else(|| Verdict::from_bool(true, prec))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} margin={} @{}b", self.status, self.margin, self.precision_used)?;
        if self.equality {
            f.write_str(" (equality)")?;
        }
        Ok(())
    }
}

/// Precisions tried in order: `start`, `2*start`, ... up to `cap`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionSchedule {
    pub start: u32,
    pub cap: u32,
}

impl Default for PrecisionSchedule {
    fn default() -> Self {
        PrecisionSchedule {
            start: DEFAULT_PRECISION,
            cap: PRECISION_CAP,
        }
    }
}

impl PrecisionSchedule {
    pub fn starting_at(start: u32) -> Self {
        let start = start.max(MIN_PRECISION);
        PrecisionSchedule {
            start,
            cap: PRECISION_CAP.max(start),
        }
    }

    /// Default schedule, with the start taken from `HYPERG_PRECISION_BITS` if set.
    pub fn from_env() -> Self {
        std::env::var(PRECISION_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
            .map(PrecisionSchedule::starting_at)
            .unwrap_or_default()
    }

    pub fn steps(&self) -> impl Iterator<Item = u32> {
        let cap = self.cap;
        std::iter::successors(Some(self.start), move |&p| {
            (p < cap).then(|| (p * 2).min(cap))
        })
    }
}

/// Decides `a < b` where the closure yields both sides at a requested precision,
/// doubling precision while the enclosures overlap.
pub fn certify_lt<F>(schedule: &PrecisionSchedule, eval: F) -> Verdict
where
    F: Fn(u32) -> (CertifiedReal, CertifiedReal),
{
    let mut last = None;
    for prec in schedule.steps() {
        let (a, b) = eval(prec);
        let mut v = Verdict::strict_less(&a, &b);
        v.precision_used = prec;
        if v.status != Status::Inconclusive {
            return v;
        }
        last = Some(v);
    }
    last.expect("schedule has at least one step")
}

/// Decides `a <= b`; `exactly_equal` comes from an exact (rational) identity.
pub fn certify_le<F>(schedule: &PrecisionSchedule, exactly_equal: bool, eval: F) -> Verdict
where
    F: Fn(u32) -> (CertifiedReal, CertifiedReal),
{
    if exactly_equal {
        return Verdict::exact_equality(schedule.start);
    }
    certify_lt(schedule, eval)
}

/// `a < b` for two separately computable quantities.
pub fn assert_strict_less<A, B>(a: A, b: B, schedule: &PrecisionSchedule) -> Verdict
where
    A: Fn(u32) -> CertifiedReal,
    B: Fn(u32) -> CertifiedReal,
{
    certify_lt(schedule, |p| (a(p), b(p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{elementary, rational::rat, to_certified};

    fn fixed(lo: i64, hi: i64) -> impl Fn(u32) -> CertifiedReal {
        move |p| to_certified(&rat(lo, 10), p).hull(&to_certified(&rat(hi, 10), p))
    }

    #[test]
    fn ordered_intervals() {
        let s = PrecisionSchedule::default();
        assert_eq!(assert_strict_less(fixed(1, 2), fixed(3, 4), &s).status, Status::Pass);
        assert_eq!(assert_strict_less(fixed(3, 4), fixed(1, 2), &s).status, Status::Fail);
        let v = assert_strict_less(fixed(1, 3), fixed(2, 4), &s);
        assert_eq!(v.status, Status::Inconclusive);
        assert_eq!(v.precision_used, PRECISION_CAP);
    }

    #[test]
    fn inv_sqrt_8pi_below_01995() {
        let s = PrecisionSchedule::default();
        let v = assert_strict_less(
            elementary::inv_sqrt_8pi,
            |p| to_certified(&rat(1995, 10000), p),
            &s,
        );
        assert!(v.is_pass());
        assert!(v.margin.is_positive());
    }

    #[test]
    fn schedule_doubles_to_cap() {
        let steps: Vec<u32> = PrecisionSchedule::default().steps().collect();
        assert_eq!(steps, vec![96, 192, 384, 768]);
        let steps: Vec<u32> = PrecisionSchedule::starting_at(100).steps().collect();
        assert_eq!(steps, vec![100, 200, 400, 768]);
    }

    #[test]
    fn escalation_resolves_close_values() {
        // 1/3 vs 1/3 + 2^-150 needs more than 96 bits.
        let s = PrecisionSchedule::default();
        let v = certify_lt(&s, |p| {
            let a = to_certified(&rat(1, 3), p);
            let eps = crate::exactnum::Dyadic::pow2(-150);
            let b = a.clone().add(&CertifiedReal::point(eps, p));
            (to_certified(&rat(1, 3), p), b)
        });
        assert!(v.is_pass());
        assert_eq!(v.precision_used, 192);
    }
}
