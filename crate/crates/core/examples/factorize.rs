// A hypergeometric law as a sum of independent Bernoulli variables, and the
// normal approximation bounds that follow.

use hyperg_gauss::bernconv::{factorize, factorize_law};
use hyperg_gauss::exactnum::rational::rat;
use hyperg_gauss::exactnum::PrecisionSchedule;
use hyperg_gauss::laws::{HypergeometricParams, LatticeLaw};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = factorize(&HypergeometricParams::new(6, 9, 5)?)?;
    println!("{f}");
    println!("  within tolerance: {}", f.within_tolerance());
    println!("{}", f.sandwich(&PrecisionSchedule::default())?);

    // Any pmf works when its generating polynomial has real roots.
    let law = LatticeLaw::new(0, vec![rat(1, 10), rat(1, 2), rat(2, 5)])?;
    println!("{}", factorize_law(&law)?);

    // A fair coin mixture at 0 and 2 does not factor.
    let law = LatticeLaw::new(0, vec![rat(1, 2), rat(0, 1), rat(1, 2)])?;
    println!("{}", factorize_law(&law).unwrap_err());
    Ok(())
}

fn main() {
    run_example().unwrap();
}
