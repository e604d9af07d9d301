use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::tau::TauSpec;
use crate::error::{Error, Result};
use crate::exactnum::rational::{fmt_rational, int, rat};
use crate::exactnum::{to_certified, CertifiedReal, Dyadic, Status, Verdict};
use crate::gauss::{normal, Enclose, NormalModel, Scale};
use crate::laws::{LatticeLaw, PopulationModel, PopulationSize};

/// Interval widths below this count as agreement between closed form and scan.
pub const AGREEMENT_WIDTH: f64 = 1e-12;

/// Values of `G` at consecutive integers, each stored on the side (`G` or
/// `1 - G`) where it is small so that increments keep relative precision.
pub(crate) struct NormalTable {
    lo: i64,
    mean: BigRational,
    /// `min(G(k), 1 - G(k))` for `k = lo, lo+1, ...`.
    small: Vec<CertifiedReal>,
    prec: u32,
}

impl NormalTable {
    pub(crate) fn new(model: &NormalModel, lo: i64, hi: i64, prec: u32) -> Self {
        let mean = model.mean.clone();
        let mut memo: HashMap<BigRational, CertifiedReal> = HashMap::new();
        let small = (lo..=hi)
            .map(|k| {
                let dist = (int(k) - &mean).abs();
                if dist.is_zero() {
                    return CertifiedReal::point(Dyadic::pow2(-1), prec);
                }
                memo.entry(dist.clone())
                    .or_insert_with(|| model.sf(&(&mean + &dist), prec))
                    .clone()
            })
            .collect();
        NormalTable {
            lo,
            mean,
            small,
            prec,
        }
    }

    pub(crate) fn hi(&self) -> i64 {
        self.lo + self.small.len() as i64 - 1
    }

    fn above_mean(&self, k: i64) -> bool {
        int(k) >= self.mean
    }

    fn small_at(&self, k: i64) -> &CertifiedReal {
        &self.small[(k - self.lo) as usize]
    }

    /// `G(k)`.
    pub(crate) fn cdf(&self, k: i64) -> CertifiedReal {
        let s = self.small_at(k);
        if self.above_mean(k) {
            CertifiedReal::one(self.prec).sub(s)
        } else {
            s.clone()
        }
    }

    /// `1 - G(k)`.
    pub(crate) fn sf(&self, k: i64) -> CertifiedReal {
        let s = self.small_at(k);
        if self.above_mean(k) {
            s.clone()
        } else {
            CertifiedReal::one(self.prec).sub(s)
        }
    }

    /// `g(k) = G(k) - G(k-1)`.
    pub(crate) fn step(&self, k: i64) -> CertifiedReal {
        if self.above_mean(k - 1) {
            self.small_at(k - 1).sub(self.small_at(k))
        } else if !self.above_mean(k) {
            self.small_at(k).sub(self.small_at(k - 1))
        } else {
            self.cdf(k).sub(&self.cdf(k - 1))
        }
    }
}

/// Exact distribution function of a lattice law on an integer window.
pub(crate) struct ExactCdf {
    offset: i64,
    values: Vec<BigRational>,
    masses: Vec<BigRational>,
}

impl ExactCdf {
    pub(crate) fn new(law: &LatticeLaw) -> Self {
        ExactCdf {
            offset: law.offset(),
            values: law.cdf_values(),
            masses: law.masses().to_vec(),
        }
    }

    pub(crate) fn cdf(&self, k: i64) -> BigRational {
        if k < self.offset {
            BigRational::zero()
        } else {
            let i = (k - self.offset) as usize;
            self.values.get(i).cloned().unwrap_or_else(BigRational::one)
        }
    }

    pub(crate) fn pmf(&self, k: i64) -> BigRational {
        if k < self.offset {
            return BigRational::zero();
        }
        self.masses
            .get((k - self.offset) as usize)
            .cloned()
            .unwrap_or_default()
    }

    pub(crate) fn max(&self) -> i64 {
        self.offset + self.masses.len() as i64 - 1
    }

    pub(crate) fn offset(&self) -> i64 {
        self.offset
    }
}

/// Where a supremum candidate sits: the value `F(k) - G(k)` or the left
/// limit `G(k) - F(k-1)` at `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Value,
    LeftLimit,
}

#[derive(Clone, Debug)]
pub struct BruteSup {
    pub sup: CertifiedReal,
    pub argmax: i64,
    pub side: Side,
}

fn scan(cdf: &ExactCdf, table: &NormalTable, prec: u32) -> BruteSup {
    let (lo, hi) = (table.lo, table.hi());
    let mut cands: Vec<(i64, Side, CertifiedReal)> = Vec::with_capacity(2 * (hi - lo + 1) as usize);
    for k in lo..=hi {
        let g = table.cdf(k);
        let fk = to_certified(&cdf.cdf(k), prec);
        cands.push((k, Side::Value, fk.sub(&g).abs()));
        if k > lo {
            let fprev = to_certified(&cdf.cdf(k - 1), prec);
            cands.push((k, Side::LeftLimit, g.sub(&fprev).abs()));
        }
    }
    let sup = cands
        .iter()
        .map(|c| c.2.clone())
        .reduce(|a, b| a.max(&b))
        .expect("non-empty scan");
    let (argmax, side, _) = cands
        .into_iter()
        .find(|c| c.2.hi() >= sup.lo())
        .expect("some candidate reaches the max");
    BruteSup { sup, argmax, side }
}

/// `sup_s |F(s) - G(s)|` by scanning every integer in the support widened by
/// two on each side, values and left limits. Outside that window `|F - G|`
/// is monotone, so the scan is exhaustive.
pub fn kolmogorov_distance_brute(law: &LatticeLaw, model: &NormalModel, prec: u32) -> BruteSup {
    let cdf = ExactCdf::new(law);
    let table = NormalTable::new(model, law.offset() - 2, law.max() + 2, prec);
    scan(&cdf, &table, prec)
}

/// A symmetric law with positive variance, in the notation of the normal
/// approximation `N(n/2, τ²)`.
#[derive(Clone, Debug)]
pub struct SymmetricCase {
    pub population: PopulationSize,
    /// Twice the mean.
    pub n: u64,
    pub law: LatticeLaw,
    pub sigma_sq: BigRational,
    pub sigma0_sq: BigRational,
}

impl SymmetricCase {
    pub fn new(pop: &PopulationModel) -> Result<Self> {
        let n = pop.symmetric_centre().ok_or(Error::NotSymmetric)?;
        if !pop.sigma_sq.is_positive() {
            return Err(Error::Degenerate("zero variance".into()));
        }
        Ok(SymmetricCase {
            population: pop.population,
            n,
            law: pop.law.clone(),
            sigma_sq: pop.sigma_sq.clone(),
            sigma0_sq: pop.sigma0_sq.clone(),
        })
    }

    /// `H_{n,N/2,N/2}`.
    pub fn finite(population: u64, n: u64) -> Result<Self> {
        SymmetricCase::new(&PopulationModel::symmetric_finite(population, n)?)
    }

    /// `B_{n,1/2}`.
    pub fn binomial(n: u64) -> Result<Self> {
        SymmetricCase::new(&PopulationModel::symmetric_binomial(n))
    }

    pub fn mean(&self) -> BigRational {
        rat(self.n as i64, 2)
    }

    pub fn floor_half(&self) -> i64 {
        (self.n / 2) as i64
    }

    pub fn ceil_half(&self) -> i64 {
        self.n.div_ceil(2) as i64
    }

    /// `N/2`, or `None` for `N = ∞`.
    pub fn half_population(&self) -> Option<u64> {
        match self.population {
            PopulationSize::Finite(nn) => Some(nn / 2),
            PopulationSize::Infinite => None,
        }
    }

    pub fn model(&self, tau: &TauSpec) -> Result<NormalModel> {
        let scale = tau.resolve(&self.sigma0_sq, &self.sigma_sq)?;
        Ok(NormalModel::new(self.mean(), scale))
    }

    pub fn sigma(&self, prec: u32) -> CertifiedReal {
        Scale::sqrt(self.sigma_sq.clone()).enclose(prec)
    }

    /// Exact `f(n/2)` for even `n`.
    pub fn central_mass(&self) -> Option<BigRational> {
        self.n
            .is_even()
            .then(|| self.law.pmf(self.floor_half()))
    }

    /// `d` in closed form: `Φ(1/(2τ)) - 1/2` for odd `n`, `f(n/2)/2` for even `n`.
    pub fn closed_distance(&self, tau: &Scale, prec: u32) -> CertifiedReal {
        match self.central_mass() {
            Some(m) => to_certified(&(m / int(2)), prec),
            None => {
                let wp = prec + 8;
                let x = tau.enclose(wp).mul_pow2(1).recip();
                normal::central(&x).with_precision(prec)
            }
        }
    }
}

impl fmt::Display for SymmetricCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={} n={}", self.population, self.n)
    }
}

/// One named certified claim with the outcome it is expected to have.
#[derive(Clone, Debug)]
pub struct BoundCheck {
    pub name: &'static str,
    pub verdict: Verdict,
    /// `Fail` for the documented exception, `Pass` otherwise.
    pub expected: Status,
}

impl BoundCheck {
    pub fn pass(name: &'static str, verdict: Verdict) -> Self {
        BoundCheck {
            name,
            verdict,
            expected: Status::Pass,
        }
    }

    pub fn ok(&self) -> bool {
        self.verdict.status == self.expected
    }

    /// `PASS`, `FAIL`, `INCONCLUSIVE` or `EXPECTED_FAIL`.
    pub fn label(&self) -> &'static str {
        match (self.verdict.status, self.expected) {
            (Status::Fail, Status::Fail) => "EXPECTED_FAIL",
            (Status::Pass, _) => "PASS",
            (Status::Fail, _) => "FAIL",
            (Status::Inconclusive, _) => "INCONCLUSIVE",
        }
    }
}

/// Closed form and scan of `d` for one symmetric case and one `τ`.
#[derive(Clone, Debug)]
pub struct DistanceReport {
    pub population: PopulationSize,
    pub n: u64,
    pub tau_spec: TauSpec,
    pub tau: Scale,
    pub sigma_sq: BigRational,
    pub sigma0_sq: BigRational,
    pub d_closed: CertifiedReal,
    pub d_brute: CertifiedReal,
    pub argmax_point: i64,
    pub argmax_side: Side,
    /// `σ d`.
    pub sigma_d: CertifiedReal,
    /// The case falls under the `N = 2`, `τ/σ <= c` exception.
    pub exception: bool,
    pub checks: Vec<BoundCheck>,
    pub precision: u32,
}

impl DistanceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(BoundCheck::ok)
    }

    pub fn inconclusive(&self) -> bool {
        self.checks
            .iter()
            .any(|c| c.verdict.status == Status::Inconclusive)
    }

    pub fn check(&self, name: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn tau_f64(&self) -> f64 {
        self.tau.to_f64()
    }
}

impl fmt::Display for DistanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "N={} n={} tau={} ({:.12})",
            self.population,
            self.n,
            self.tau_spec,
            self.tau_f64()
        )?;
        writeln!(
            f,
            "  sigma^2={} sigma0^2={}",
            fmt_rational(&self.sigma_sq),
            fmt_rational(&self.sigma0_sq)
        )?;
        writeln!(f, "  d (closed) = {}", self.d_closed)?;
        writeln!(f, "  d (scan)   = {}", self.d_brute)?;
        let side = match self.argmax_side {
            Side::Value => "value",
            Side::LeftLimit => "left limit",
        };
        writeln!(f, "  argmax s={} ({side})", self.argmax_point)?;
        writeln!(f, "  sigma*d = {}", self.sigma_d)?;
        if self.exception {
            writeln!(f, "  exception: N=2 and tau/sigma <= c")?;
        }
        for c in &self.checks {
            writeln!(f, "  {:<22} {:<13} margin={}", c.name, c.label(), c.verdict.margin)?;
        }
        Ok(())
    }
}

/// Everything computed once per case and precision.
pub(crate) struct CaseEval<'a> {
    pub case: &'a SymmetricCase,
    pub model: NormalModel,
    pub cdf: ExactCdf,
    pub table: NormalTable,
    pub d: CertifiedReal,
    pub sigma: CertifiedReal,
    pub prec: u32,
}

impl<'a> CaseEval<'a> {
    pub(crate) fn new(case: &'a SymmetricCase, tau: &TauSpec, prec: u32) -> Result<Self> {
        let model = case.model(tau)?;
        let cdf = ExactCdf::new(&case.law);
        let table = NormalTable::new(&model, cdf.offset() - 2, cdf.max() + 2, prec);
        let d = case.closed_distance(&model.tau, prec);
        Ok(CaseEval {
            case,
            sigma: case.sigma(prec),
            model,
            cdf,
            table,
            d,
            prec,
        })
    }

    pub(crate) fn lo(&self) -> i64 {
        self.cdf.offset() - 2
    }

    pub(crate) fn hi(&self) -> i64 {
        self.table.hi()
    }

    pub(crate) fn f(&self, k: i64) -> CertifiedReal {
        to_certified(&self.cdf.pmf(k), self.prec)
    }

    pub(crate) fn big_f(&self, k: i64) -> CertifiedReal {
        to_certified(&self.cdf.cdf(k), self.prec)
    }

    /// `G(s) - F(s-1)` with relative care above the mean.
    pub(crate) fn left_gap(&self, s: i64) -> CertifiedReal {
        if int(s) >= self.model.mean {
            let tail_f = to_certified(&(BigRational::one() - self.cdf.cdf(s - 1)), self.prec);
            tail_f.sub(&self.table.sf(s))
        } else {
            self.table.cdf(s).sub(&self.big_f(s - 1))
        }
    }

    /// `F(s) - G(s)`.
    pub(crate) fn right_gap(&self, s: i64) -> CertifiedReal {
        if int(s) >= self.model.mean {
            let tail_f = to_certified(&(BigRational::one() - self.cdf.cdf(s)), self.prec);
            self.table.sf(s).sub(&tail_f)
        } else {
            self.big_f(s).sub(&self.table.cdf(s))
        }
    }

    pub(crate) fn brute(&self) -> BruteSup {
        scan(&self.cdf, &self.table, self.prec)
    }

    /// Closed form against scan, and the location of the maximiser.
    pub(crate) fn agreement_checks(&self, brute: &BruteSup) -> Vec<BoundCheck> {
        let agree = self.d.overlaps(&brute.sup)
            && self.d.width_f64() < AGREEMENT_WIDTH
            && brute.sup.width_f64() < AGREEMENT_WIDTH;
        let mut v = Verdict::from_bool(agree, self.prec);
        v.margin = self.d.sub(&brute.sup);
        let at = brute.argmax == self.case.floor_half() && brute.side == Side::Value;
        vec![
            BoundCheck::pass("closed_vs_scan", v),
            BoundCheck::pass("argmax_floor_half", Verdict::from_bool(at, self.prec)),
        ]
    }

    pub(crate) fn report(&self, tau: &TauSpec, brute: &BruteSup, checks: Vec<BoundCheck>) -> DistanceReport {
        DistanceReport {
            population: self.case.population,
            n: self.case.n,
            tau_spec: tau.clone(),
            tau: self.model.tau.clone(),
            sigma_sq: self.case.sigma_sq.clone(),
            sigma0_sq: self.case.sigma0_sq.clone(),
            d_closed: self.d.clone(),
            d_brute: brute.sup.clone(),
            argmax_point: brute.argmax,
            argmax_side: brute.side,
            sigma_d: self.sigma.mul(&self.d),
            exception: false,
            checks,
            precision: self.prec,
        }
    }
}

/// `d` by its closed form, cross-checked against the scan.
pub fn distance_symmetric_closed(case: &SymmetricCase, tau: &TauSpec, prec: u32) -> Result<DistanceReport> {
    let ev = CaseEval::new(case, tau, prec)?;
    let brute = ev.brute();
    let checks = ev.agreement_checks(&brute);
    Ok(ev.report(tau, &brute, checks))
}

/// Exact `s <= n/2 + 1 + (3/2)σ`.
pub(crate) fn at_most_m(case: &SymmetricCase, s: i64) -> bool {
    let t = int(s) - case.mean() - int(1);
    !t.is_positive() || &t * &t * int(4) <= &case.sigma_sq * int(9)
}

/// Smallest integer `s >= n/2 + 1 + (3/2)σ`.
pub(crate) fn ceil_m(case: &SymmetricCase) -> i64 {
    let guess = (case.mean() + int(1) + rat(3, 2) * sqrt_floor(&case.sigma_sq))
        .floor()
        .to_integer()
        .to_i64()
        .unwrap_or(i64::MAX);
    let mut s = guess;
    while beyond_m(case, s - 1) {
        s -= 1;
    }
    while !beyond_m(case, s) {
        s += 1;
    }
    s
}

fn beyond_m(case: &SymmetricCase, s: i64) -> bool {
    let t = int(s) - case.mean() - int(1);
    !t.is_negative() && &t * &t * int(4) >= &case.sigma_sq * int(9)
}

fn sqrt_floor(q: &BigRational) -> BigRational {
    let v = (q.numer() / q.denom()).sqrt();
    BigRational::from_integer(v.max(BigInt::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirac_against_standard_normal() {
        let law = LatticeLaw::dirac(0);
        let m = NormalModel::new(int(0), Scale::sqrt(int(1)));
        let b = kolmogorov_distance_brute(&law, &m, 96);
        assert!(b.sup.contains(&Dyadic::pow2(-1)));
        assert_eq!((b.argmax, b.side), (0, Side::Value));
    }

    #[test]
    fn h233_at_sigma() {
        let case = SymmetricCase::finite(6, 2).unwrap();
        for tau in TauSpec::default_grid() {
            let r = distance_symmetric_closed(&case, &tau, 96).unwrap();
            assert!(r.d_closed.contains_rational(&rat(3, 10)), "{r}");
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn bernoulli_half() {
        let case = SymmetricCase::binomial(1).unwrap();
        let r = distance_symmetric_closed(&case, &TauSpec::Sigma, 96).unwrap();
        assert!((r.d_closed.mid_f64() - 0.341_344_746_068_543).abs() < 1e-15);
        assert!(r.passed());
        let r = distance_symmetric_closed(&SymmetricCase::binomial(2).unwrap(), &TauSpec::Sigma, 96).unwrap();
        assert!(r.d_closed.contains_rational(&rat(1, 4)));
    }

    #[test]
    fn asymmetric_rejected_by_closed_form() {
        let pop = PopulationModel::binomial(3, &rat(1, 3)).unwrap();
        assert_eq!(SymmetricCase::new(&pop).unwrap_err(), Error::NotSymmetric);
    }

    #[test]
    fn m_threshold() {
        let case = SymmetricCase::finite(10, 4).unwrap();
        let s = ceil_m(&case);
        assert!(!at_most_m(&case, s) || beyond_m(&case, s));
        assert!(at_most_m(&case, s - 1));
        // σ² = 4·6/36 = 2/3, M = 3 + 1.5·0.816 = 4.22.
        assert_eq!(s, 5);
    }
}
