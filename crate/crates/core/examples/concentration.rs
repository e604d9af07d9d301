// Lower bounds on the largest mass an open window of length h can catch.

use hyperg_gauss::bernconv::{concentration_lower_bound, levy_equality_law, levy_sharp_check};
use hyperg_gauss::exactnum::rational::rat;
use hyperg_gauss::laws::{hypergeometric, HypergeometricParams, LatticeLaw};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let coin = LatticeLaw::bernoulli(&rat(1, 2))?;
    println!("fair coin: {}", concentration_lower_bound(&coin, &rat(1, 1))?);

    let law = hypergeometric(&HypergeometricParams::new(5, 6, 6)?);
    for h in [rat(1, 2), rat(1, 1), rat(2, 1)] {
        println!("H(5,6,6): {}", concentration_lower_bound(&law, &h)?);
        println!("          {}", levy_sharp_check(&law, &h)?);
    }

    for (p, lambda) in [(1, rat(1, 1)), (2, rat(1, 4)), (3, rat(1, 2))] {
        let e = levy_equality_law(p, &lambda, &rat(1, 1))?;
        println!("extremal p={p}: {} -> {}", e.report, e.verdict().status);
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
