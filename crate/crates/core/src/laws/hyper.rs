use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::lattice::{CumulantTriple, LatticeLaw};
use crate::error::{Error, Result};
use crate::exactnum::rational::{binomial_int, fmt_rational, int, ratio, rat};

/// Parameters of `H_{n,r,b}`: `n` draws without replacement from `r` red and
/// `b` blue balls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HypergeometricParams {
    pub n: u64,
    pub r: u64,
    pub b: u64,
}

impl HypergeometricParams {
    pub fn new(n: u64, r: u64, b: u64) -> Result<Self> {
        if n > r + b {
            return Err(Error::InvalidParameters(format!(
                "sample size {n} exceeds population {}",
                r + b
            )));
        }
        Ok(HypergeometricParams { n, r, b })
    }

    /// Population size `N = r + b`.
    pub fn population(&self) -> u64 {
        self.r + self.b
    }

    /// `H_{n,r,b} = H_{r,n,N-n}`.
    pub fn swapped(&self) -> Self {
        HypergeometricParams {
            n: self.r,
            r: self.n,
            b: self.population() - self.n,
        }
    }

    /// Parameters of the law of `n - X`.
    pub fn reflected(&self) -> Self {
        HypergeometricParams {
            n: self.n,
            r: self.b,
            b: self.r,
        }
    }

    /// `n ∧ r ∧ b ∧ (N - n) = 0`, i.e. the law is a point mass.
    pub fn is_degenerate(&self) -> bool {
        self.n.min(self.r).min(self.b).min(self.population() - self.n) == 0
    }

    /// Support endpoints `(n - b)_+` and `n ∧ r`.
    pub fn support(&self) -> (u64, u64) {
        (self.n.saturating_sub(self.b), self.n.min(self.r))
    }
}

impl fmt::Display for HypergeometricParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H(n={}, r={}, b={})", self.n, self.r, self.b)
    }
}

/// Exact `H_{n,r,b}` pmf, `C(r,k) C(b,n-k) / C(r+b,n)`.
pub fn hypergeometric(params: &HypergeometricParams) -> LatticeLaw {
    let HypergeometricParams { n, r, b } = *params;
    let (lo, hi) = params.support();
    let total = binomial_int(r + b, n as i64);
    // w_k = C(r,k) C(b,n-k), updated by its ratio to stay integral.
    let mut w = binomial_int(r, lo as i64) * binomial_int(b, (n - lo) as i64);
    let mut masses = Vec::with_capacity((hi - lo + 1) as usize);
    for k in lo..=hi {
        masses.push(BigRational::new(w.clone(), total.clone()));
        if k < hi {
            let num = BigInt::from(r - k) * BigInt::from(n - k);
            let den = BigInt::from(k + 1) * BigInt::from(b + k + 1 - n);
            w = w * num / den;
        }
    }
    LatticeLaw::trimmed(lo as i64, masses)
}

/// Exact `B_{n,p}` pmf.
pub fn binomial(n: u64, p: &BigRational) -> Result<LatticeLaw> {
    if p.is_negative() || p > &BigRational::one() {
        return Err(Error::InvalidParameters(format!(
            "success probability {} outside [0,1]",
            fmt_rational(p)
        )));
    }
    let q = BigRational::one() - p;
    let mut masses = Vec::with_capacity(n as usize + 1);
    let mut pk = BigRational::one();
    let qpow: Vec<BigRational> = std::iter::successors(Some(BigRational::one()), |x| Some(x * &q))
        .take(n as usize + 1)
        .collect();
    for k in 0..=n {
        let c = BigRational::from_integer(binomial_int(n, k as i64));
        masses.push(c * &pk * &qpow[(n - k) as usize]);
        pk *= p;
    }
    Ok(LatticeLaw::trimmed(0, masses))
}

/// Closed-form mean, variance and third central moment of `H_{n,r,b}`,
/// with `0/0 := 0`.
pub fn hyper_cumulants(params: &HypergeometricParams) -> CumulantTriple {
    let n = int(params.n as i64);
    let r = int(params.r as i64);
    let b = int(params.b as i64);
    let nn = &r + &b;
    let one = BigRational::one();
    let two = int(2);
    let mu = ratio(&(&n * &r), &nn);
    let core = &n * &r * &b * (&nn - &n);
    let sigma_sq = ratio(&core, &(&nn * &nn * (&nn - &one)));
    let kappa3 = ratio(
        &(&core * (&b - &r) * (&nn - &two * &n)),
        &(&nn * &nn * &nn * (&nn - &one) * (&nn - &two)),
    );
    CumulantTriple {
        mu,
        sigma_sq,
        kappa3,
    }
}

/// Outcome of the symmetry criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symmetry {
    pub symmetric: bool,
    /// The centre of symmetry (the mean) when symmetric.
    pub mean: Option<BigRational>,
}

/// `H_{n,r,b}` is symmetric about its mean iff it is degenerate or
/// `(r+b)/2 ∈ {n, r}`.
pub fn is_symmetric(params: &HypergeometricParams) -> Symmetry {
    let nn = params.population();
    let symmetric = params.is_degenerate() || nn == 2 * params.n || nn == 2 * params.r;
    Symmetry {
        symmetric,
        mean: symmetric.then(|| hyper_cumulants(params).mu),
    }
}

/// Classification of a lattice law against the hypergeometric family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Identified {
    Dirac(i64),
    Bernoulli(BigRational),
    /// `H_{small, large, N - large}` with `small <= large`; the pair `{n, r}` is
    /// only determined as a set.
    Hypergeometric { small: u64, large: u64, population: u64 },
    NotHypergeometric,
}

impl fmt::Display for Identified {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Identified::Dirac(a) => write!(f, "Dirac({a})"),
            Identified::Bernoulli(p) => write!(f, "Bernoulli({})", fmt_rational(p)),
            Identified::Hypergeometric {
                small,
                large,
                population,
            } => write!(f, "Hypergeometric({{{small},{large}}}, N={population})"),
            Identified::NotHypergeometric => f.write_str("NotHypergeometric"),
        }
    }
}

fn as_u64(q: &BigRational) -> Option<u64> {
    if q.is_integer() && !q.is_negative() {
        q.to_integer().to_u64()
    } else {
        None
    }
}

/// Recovers `{n ∧ r, n ∨ r}` and `N` from a law, or classifies it as a point
/// mass, a Bernoulli law, or not hypergeometric. Candidates are confirmed by
/// comparing full pmfs.
pub fn identify(law: &LatticeLaw) -> Identified {
    if law.is_dirac() {
        return if law.offset() >= 0 {
            Identified::Dirac(law.offset())
        } else {
            Identified::NotHypergeometric
        };
    }
    if law.offset() == 0 && law.max() == 1 {
        return Identified::Bernoulli(law.pmf(1));
    }
    if law.offset() < 0 {
        return Identified::NotHypergeometric;
    }
    // Canonical order n <= r: the right endpoint is then n.
    let n = law.max() as u64;
    let c = law.cumulants();
    let nq = int(n as i64);
    let q = &c.mu * (BigRational::one() - &c.mu / &nq);
    let v = &c.sigma_sq;
    if &q <= v {
        return Identified::NotHypergeometric;
    }
    // sigma^2 = q (N - n) / (N - 1)  =>  N = (q n - sigma^2) / (q - sigma^2)
    let population = (&q * &nq - v) / (&q - v);
    let Some(population) = as_u64(&population) else {
        return Identified::NotHypergeometric;
    };
    let Some(r) = as_u64(&(int(population as i64) * &c.mu / &nq)) else {
        return Identified::NotHypergeometric;
    };
    if r < n || r > population {
        return Identified::NotHypergeometric;
    }
    let candidate = HypergeometricParams {
        n,
        r,
        b: population - r,
    };
    if hypergeometric(&candidate) == *law {
        Identified::Hypergeometric {
            small: n,
            large: r,
            population,
        }
    } else {
        Identified::NotHypergeometric
    }
}

/// `N ∈ ℕ ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PopulationSize {
    Finite(u64),
    Infinite,
}

impl fmt::Display for PopulationSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PopulationSize::Finite(n) => write!(f, "{n}"),
            PopulationSize::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LawSource {
    Hypergeometric(HypergeometricParams),
    Binomial { n: u64, p: BigRational },
}

/// A law together with its population size parameter and usual approximate
/// variance `σ₀²`.
#[derive(Clone, Debug)]
pub struct PopulationModel {
    pub source: LawSource,
    pub law: LatticeLaw,
    pub population: PopulationSize,
    pub sigma_sq: BigRational,
    pub sigma0_sq: BigRational,
}

/// `σ₀² = (N-1)/N σ²` (`0` for `N = 0`, `σ²` for `N = ∞`).
pub fn usual_approximate_variance(sigma_sq: &BigRational, population: PopulationSize) -> BigRational {
    match population {
        PopulationSize::Finite(0) => BigRational::zero(),
        PopulationSize::Finite(n) => sigma_sq * rat(n as i64 - 1, n as i64),
        PopulationSize::Infinite => sigma_sq.clone(),
    }
}

impl PopulationModel {
    pub fn hypergeometric(params: &HypergeometricParams) -> Self {
        let law = hypergeometric(params);
        let sigma_sq = hyper_cumulants(params).sigma_sq;
        let population = PopulationSize::Finite(params.population());
        let sigma0_sq = usual_approximate_variance(&sigma_sq, population);
        let model = PopulationModel {
            source: LawSource::Hypergeometric(*params),
            law,
            population,
            sigma_sq,
            sigma0_sq,
        };
        if let Some(bound) = model.sigma0_sq_floor() {
            assert!(
                model.sigma0_sq >= bound,
                "usual approximate variance below its floor for {params}"
            );
        }
        model
    }

    pub fn binomial(n: u64, p: &BigRational) -> Result<Self> {
        let law = binomial(n, p)?;
        let sigma_sq = int(n as i64) * p * (BigRational::one() - p);
        Ok(PopulationModel {
            source: LawSource::Binomial { n, p: p.clone() },
            law,
            population: PopulationSize::Infinite,
            sigma0_sq: sigma_sq.clone(),
            sigma_sq,
        })
    }

    /// `H_{n,N/2,N/2}`.
    pub fn symmetric_finite(population: u64, n: u64) -> Result<Self> {
        if !population.is_multiple_of(2) {
            return Err(Error::InvalidParameters("population size must be even".into()));
        }
        let half = population / 2;
        Ok(PopulationModel::hypergeometric(&HypergeometricParams::new(n, half, half)?))
    }

    /// `B_{n,1/2}`.
    pub fn symmetric_binomial(n: u64) -> Self {
        PopulationModel::binomial(n, &rat(1, 2)).expect("p = 1/2 is valid")
    }

    /// Lower bound on `σ₀²` valid for symmetric finite cases `H_{n,N/2,N/2}`:
    /// `1/4` when `2 <= n <= N-2`, `3/16` when `1 <= n <= N-1` and `N >= 4`.
    /// (`N = 2`, `n = 1` has `σ₀² = 1/8`.)
    pub fn sigma0_sq_floor(&self) -> Option<BigRational> {
        let LawSource::Hypergeometric(p) = &self.source else {
            return None;
        };
        if p.r != p.b {
            return None;
        }
        let nn = p.population();
        if p.n >= 2 && p.n + 2 <= nn {
            Some(rat(1, 4))
        } else if p.n >= 1 && p.n < nn && nn >= 4 {
            Some(rat(3, 16))
        } else {
            None
        }
    }

    pub fn cumulants(&self) -> CumulantTriple {
        match &self.source {
            LawSource::Hypergeometric(p) => hyper_cumulants(p),
            LawSource::Binomial { .. } => self.law.cumulants(),
        }
    }

    pub fn mean(&self) -> BigRational {
        self.cumulants().mu
    }

    /// When the law is symmetric about its mean, twice the mean (the `n` of
    /// the centred normal approximation `N(n/2, τ²)`).
    pub fn symmetric_centre(&self) -> Option<u64> {
        let symmetric = match &self.source {
            LawSource::Hypergeometric(p) => is_symmetric(p).symmetric,
            LawSource::Binomial { p, .. } => *p == rat(1, 2) || self.law.is_dirac(),
        };
        if !symmetric {
            return None;
        }
        as_u64(&(self.mean() * int(2)))
    }

    pub fn population_f64(&self) -> f64 {
        match self.population {
            PopulationSize::Finite(n) => n as f64,
            PopulationSize::Infinite => f64::INFINITY,
        }
    }
}

/// Morgenstern's identity `h_{n,r,b}(k) b_{N,p}(n) = b_{r,p}(k) b_{b,p}(n-k)`
/// with `p = n/N`, checked exactly at every `k`.
pub fn morgenstern_identity_holds(params: &HypergeometricParams) -> bool {
    let nn = params.population();
    if nn == 0 {
        return true;
    }
    let p = rat(params.n as i64, nn as i64);
    let h = hypergeometric(params);
    let (Ok(bn), Ok(br), Ok(bb)) = (binomial(nn, &p), binomial(params.r, &p), binomial(params.b, &p))
    else {
        return false;
    };
    let lhs_factor = bn.pmf(params.n as i64);
    (0..=params.n as i64).all(|k| h.pmf(k) * &lhs_factor == br.pmf(k) * bb.pmf(params.n as i64 - k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: u64, r: u64, b: u64) -> LatticeLaw {
        hypergeometric(&HypergeometricParams::new(n, r, b).unwrap())
    }

    #[test]
    fn small_pmfs() {
        assert_eq!(h(2, 3, 3).masses(), &[rat(1, 5), rat(3, 5), rat(1, 5)]);
        assert_eq!(h(0, 5, 7), LatticeLaw::dirac(0));
        for r in 1..20i64 {
            let nn = 2 * r;
            assert_eq!(h(2, r as u64, r as u64).pmf(1), rat(nn, 2 * (nn - 1)));
        }
        assert!(HypergeometricParams::new(5, 2, 1).is_err());
    }

    #[test]
    fn binomial_pmfs() {
        let b = binomial(4, &rat(1, 2)).unwrap();
        assert_eq!(b.masses(), &[rat(1, 16), rat(4, 16), rat(6, 16), rat(4, 16), rat(1, 16)]);
        assert_eq!(binomial(3, &rat(0, 1)).unwrap(), LatticeLaw::dirac(0));
        assert!(binomial(3, &rat(3, 2)).is_err());
    }

    #[test]
    fn cumulant_examples() {
        let c = hyper_cumulants(&HypergeometricParams::new(1, 1, 1).unwrap());
        assert_eq!((c.mu, c.sigma_sq, c.kappa3), (rat(1, 2), rat(1, 4), rat(0, 1)));
        let c = hyper_cumulants(&HypergeometricParams::new(2, 1, 1).unwrap());
        assert!(c.sigma_sq.is_zero());
        for nn in (2..30u64).step_by(2) {
            for n in 0..=nn {
                let c = hyper_cumulants(&HypergeometricParams::new(n, nn / 2, nn / 2).unwrap());
                let expect = ratio(&int((n * (nn - n)) as i64), &int(4 * (nn as i64 - 1)));
                assert_eq!(c.sigma_sq, expect);
            }
        }
    }

    #[test]
    fn reflection_and_symmetry() {
        assert_eq!(h(2, 3, 1).reflect(2), h(2, 1, 3));
        let s = is_symmetric(&HypergeometricParams::new(3, 4, 4).unwrap());
        assert_eq!(s.mean, Some(rat(3, 2)));
        let s = is_symmetric(&HypergeometricParams::new(4, 3, 5).unwrap());
        assert_eq!(s.mean, Some(rat(3, 2)));
        assert!(!is_symmetric(&HypergeometricParams::new(2, 3, 5).unwrap()).symmetric);
    }

    #[test]
    fn identify_examples() {
        assert_eq!(identify(&h(1, 3, 5)), Identified::Bernoulli(rat(3, 8)));
        assert_eq!(identify(&h(4, 4, 0)), Identified::Dirac(4));
        let a = identify(&h(3, 2, 3));
        assert_eq!(a, identify(&h(2, 3, 2)));
        assert_eq!(
            a,
            Identified::Hypergeometric {
                small: 2,
                large: 3,
                population: 5
            }
        );
        assert_eq!(identify(&binomial(3, &rat(1, 2)).unwrap()), Identified::NotHypergeometric);
    }

    #[test]
    fn population_models() {
        let m = PopulationModel::hypergeometric(&HypergeometricParams::new(1, 1, 1).unwrap());
        assert_eq!(m.population, PopulationSize::Finite(2));
        assert_eq!(m.sigma0_sq, rat(1, 8));
        let m = PopulationModel::symmetric_finite(10, 3).unwrap();
        assert_eq!(m.sigma0_sq, rat(3 * 7, 40));
        assert_eq!(m.symmetric_centre(), Some(3));
        let m = PopulationModel::symmetric_binomial(7);
        assert_eq!((m.sigma_sq.clone(), m.sigma0_sq.clone()), (rat(7, 4), rat(7, 4)));
        let m = PopulationModel::hypergeometric(&HypergeometricParams::new(5, 3, 7).unwrap());
        assert_eq!(m.symmetric_centre(), Some(3));
    }

    #[test]
    fn morgenstern_small() {
        for nn in 0..12u64 {
            for r in 0..=nn {
                for n in 0..=nn {
                    let p = HypergeometricParams::new(n, r, nn - r).unwrap();
                    assert!(morgenstern_identity_holds(&p), "{p}");
                }
            }
        }
    }
}
