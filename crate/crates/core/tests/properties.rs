use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use hyperg_gauss::bernconv::{
    bernoulli_convolution, concentration_lower_bound, convolve_bernoulli, factorize, levy_sharp_check,
};
use hyperg_gauss::exactnum::elementary::{exp, log};
use hyperg_gauss::exactnum::rational::{int, rat};
use hyperg_gauss::exactnum::{to_certified, CertifiedReal, Dyadic, Status, Verdict};
use hyperg_gauss::gauss::cdf;
use hyperg_gauss::kolmo::{verify_theorem_main, Side, SymmetricCase, TauSpec};
use hyperg_gauss::laws::{
    binomial, hyper_cumulants, hypergeometric, identify, is_symmetric, HypergeometricParams, Identified,
};

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-2000i64..2000, 1i64..500).prop_map(|(p, q)| rat(p, q))
}

fn unit_rational() -> impl Strategy<Value = BigRational> {
    (0i64..=64, 1i64..=64).prop_map(|(a, b)| rat(a.min(b), b))
}

fn params(max_pop: u64) -> impl Strategy<Value = HypergeometricParams> {
    (0..=max_pop, 0..=max_pop)
        .prop_filter("population", move |(r, b)| r + b <= max_pop)
        .prop_flat_map(|(r, b)| (0..=r + b, Just(r), Just(b)))
        .prop_map(|(n, r, b)| HypergeometricParams::new(n, r, b).unwrap())
}

fn total(masses: &[BigRational]) -> BigRational {
    masses.iter().sum()
}

fn contains_exact(x: &CertifiedReal, q: &BigRational) -> bool {
    &x.lo().to_rational() <= q && q <= &x.hi().to_rational()
}

proptest! {
    #![proptest_config(cfg(256))]

    #[test]
    fn interval_ops_enclose_exact_result(a in rational(), b in rational(), prec in 60u32..200) {
        let (x, y) = (to_certified(&a, prec), to_certified(&b, prec));
        prop_assert!(contains_exact(&x.add(&y), &(&a + &b)));
        prop_assert!(contains_exact(&x.sub(&y), &(&a - &b)));
        prop_assert!(contains_exact(&x.mul(&y), &(&a * &b)));
        if !b.is_zero() {
            prop_assert!(contains_exact(&x.div(&y), &(&a / &b)));
        }
        let abs = a.abs();
        let s = to_certified(&abs, prec).sqrt();
        let (lo, hi) = (s.lo().to_rational(), s.hi().to_rational());
        prop_assert!(!lo.is_negative() || lo.is_zero() || abs.is_zero());
        prop_assert!(&lo * &lo <= abs && abs <= &hi * &hi);
    }

    #[test]
    fn exp_and_log_are_mutually_consistent(p in -400i64..400, q in 1i64..64) {
        let x = to_certified(&rat(p, q * 16), 96);
        let one = exp(&x).mul(&exp(&x.neg()));
        prop_assert!(one.contains(&Dyadic::one()), "{}", one.format_bounds());
        prop_assert!(log(&exp(&x)).overlaps(&x));
    }

    #[test]
    fn doubling_precision_never_widens(p in -600i64..600, q in 1i64..97) {
        let v = rat(p, q);
        let at = |prec: u32| {
            let x = to_certified(&v, prec);
            [exp(&x.mul_pow2(-4)), cdf(&x.mul_pow2(-6)), to_certified(&(v.abs() + int(1)), prec).sqrt()]
        };
        for (lo, hi) in at(96).iter().zip(at(192).iter()) {
            prop_assert!(lo.overlaps(hi));
            prop_assert!(hi.width().to_rational() <= lo.width().to_rational());
        }
    }

    #[test]
    fn phi_reflection_encloses_one(p in -64i64..=64, q in 1i64..=16) {
        let x = to_certified(&rat(p, q * 2), 96);
        let s = cdf(&x).add(&cdf(&x.neg()));
        prop_assert!(s.contains(&Dyadic::one()));
    }

    #[test]
    fn strict_less_pass_means_disjoint(a in rational(), b in rational(), wa in 0i64..40, wb in 0i64..40) {
        let mk = |q: &BigRational, w: i64| {
            let c = to_certified(q, 96);
            c.hull(&to_certified(&(q + rat(w, 100)), 96))
        };
        let (x, y) = (mk(&a, wa), mk(&b, wb));
        let v = Verdict::strict_less(&x, &y);
        match v.status {
            Status::Pass => prop_assert!(x.hi() < y.lo()),
            Status::Fail => prop_assert!(x.lo() >= y.hi()),
            Status::Inconclusive => prop_assert!(x.overlaps(&y)),
        }
    }
}

proptest! {
    #![proptest_config(cfg(128))]

    #[test]
    fn hypergeometric_law_identities(p in params(30)) {
        let law = hypergeometric(&p);
        prop_assert_eq!(total(law.masses()), BigRational::one());
        prop_assert_eq!(&hypergeometric(&p.swapped()), &law);
        prop_assert_eq!(hypergeometric(&p.reflected()), law.reflect(p.n as i64));
        let c = hyper_cumulants(&p);
        prop_assert_eq!(&c, &law.cumulants());
        prop_assert_eq!(is_symmetric(&p).symmetric, c.kappa3.is_zero());
        prop_assert_eq!(is_symmetric(&p).symmetric, law.is_palindrome());
        let (lo, hi) = p.support();
        prop_assert_eq!((law.offset(), law.max()), (lo as i64, hi as i64));
    }

    #[test]
    fn identify_recovers_parameters(p in params(30)) {
        let law = hypergeometric(&p);
        let got = identify(&law);
        if p.is_degenerate() {
            prop_assert_eq!(got, Identified::Dirac(law.offset()));
        } else if law.offset() == 0 && law.max() == 1 {
            prop_assert!(matches!(got, Identified::Bernoulli(_)));
        } else {
            // Only the pair {n, r} is determined: compare laws.
            match got {
                Identified::Hypergeometric { small, large, population } => {
                    prop_assert_eq!(population, p.population());
                    prop_assert!(small <= large);
                    let back = HypergeometricParams::new(small, large, population - large).unwrap();
                    prop_assert_eq!(hypergeometric(&back), law);
                }
                other => prop_assert!(false, "{} identified as {}", p, other),
            }
        }
    }

    #[test]
    fn binomial_law_identities(n in 0u64..40, p in unit_rational()) {
        let law = binomial(n, &p).unwrap();
        prop_assert_eq!(total(law.masses()), BigRational::one());
        let c = law.cumulants();
        let q = BigRational::one() - &p;
        prop_assert_eq!(&c.mu, &(int(n as i64) * &p));
        prop_assert_eq!(&c.sigma_sq, &(int(n as i64) * &p * &q));
        prop_assert_eq!(&c.kappa3, &(int(n as i64) * &p * &q * (&q - &p)));
        prop_assert_eq!(binomial(n, &q).unwrap(), law.reflect(n as i64));
    }
}

fn symmetric_case() -> impl Strategy<Value = (u64, u64)> {
    (1u64..=30).prop_flat_map(|h| (Just(2 * h), 1..2 * h))
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn distance_closed_form_matches_scan((nn, n) in symmetric_case()) {
        let case = SymmetricCase::finite(nn, n).unwrap();
        let mut ds = Vec::new();
        for tau in TauSpec::default_grid() {
            let r = verify_theorem_main(&case, &tau, &Default::default()).unwrap();
            prop_assert!(r.d_closed.overlaps(&r.d_brute));
            prop_assert!(r.passed(), "{}", r);
            let expected = match r.argmax_side {
                Side::Value => (n / 2) as i64,
                Side::LeftLimit => n.div_ceil(2) as i64,
            };
            prop_assert_eq!(r.argmax_point, expected);
            ds.push(r.d_closed);
        }
        if n % 2 == 0 {
            prop_assert!(ds.windows(2).all(|w| w[0].overlaps(&w[1])));
        } else {
            // d decreases in τ for odd n: σ₀ ≤ mid ≤ σ.
            prop_assert!(!(ds[0].hi() < ds[2].lo()));
        }
    }

    #[test]
    fn factors_reconstruct_the_law(p in params(24)) {
        let f = factorize(&p).unwrap();
        prop_assert!(f.within_tolerance());
        prop_assert_eq!(f.len() as i64, hypergeometric(&p).max());
        let rebuilt = convolve_bernoulli(&f.probabilities, 96);
        let law = hypergeometric(&p);
        for (k, m) in law.support() {
            let got = rebuilt.get(k as usize).cloned().unwrap_or_else(|| CertifiedReal::zero(96));
            prop_assert!((got.mid_f64() - m.to_f64().unwrap()).abs() < 1e-10, "k={}", k);
        }
        let ps = f.probabilities_f64();
        prop_assert!(ps.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(ps.iter().all(|x| (0.0..=1.0).contains(x)));
    }

    #[test]
    fn window_concentration_bound(
        ps in prop::collection::vec(unit_rational(), 1..12),
        hn in 1i64..=12,
        hd in 1i64..=4,
    ) {
        let law = bernoulli_convolution(&ps).unwrap();
        let h = rat(hn, hd);
        let rep = concentration_lower_bound(&law, &h).unwrap();
        prop_assert!(rep.verdict.is_pass(), "{}", rep);
        prop_assert!(rep.lhs <= BigRational::one() && rep.lhs.is_positive());
        if !law.is_dirac() {
            let levy = levy_sharp_check(&law, &h).unwrap();
            prop_assert!(levy.passed(), "{}", levy);
        }
    }
}

#[test]
fn pascal_rule() {
    use hyperg_gauss::exactnum::binomial_int;
    for a in 1..=60u64 {
        for k in 0..=a as i64 {
            assert_eq!(binomial_int(a, k), binomial_int(a - 1, k - 1) + binomial_int(a - 1, k), "C({a},{k})");
        }
    }
    assert_eq!(binomial_int(60, 30), "118264581564861424".parse::<BigInt>().unwrap());
}
