// Exact pmf, cumulants and symmetry of a few laws.

use hyperg_gauss::exactnum::rational::{fmt_rational, rat};
use hyperg_gauss::laws::{is_symmetric, HypergeometricParams, PopulationModel};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = HypergeometricParams::new(2, 3, 3)?;
    let model = PopulationModel::hypergeometric(&p);
    println!("{p}: {}", model.law);
    let c = model.cumulants();
    println!("  mean {} variance {} kappa3 {}", fmt_rational(&c.mu), fmt_rational(&c.sigma_sq), fmt_rational(&c.kappa3));
    println!("  sigma0^2 {} symmetric {}", fmt_rational(&model.sigma0_sq), is_symmetric(&p).symmetric);

    // Sampling half the urn is symmetric whatever the colours.
    let q = HypergeometricParams::new(5, 3, 7)?;
    println!("{q}: symmetric {}", is_symmetric(&q).symmetric);

    let b = PopulationModel::binomial(4, &rat(1, 2))?;
    println!("B(4, 1/2): {}  (N = {})", b.law, b.population);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
