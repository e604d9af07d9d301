// Recover the parameters of a hypergeometric law from its pmf alone.

use hyperg_gauss::exactnum::rational::rat;
use hyperg_gauss::laws::{hypergeometric, identify, HypergeometricParams, LatticeLaw};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (n, r, b) in [(3, 5, 4), (5, 3, 4), (7, 7, 7), (1, 3, 2), (4, 0, 6)] {
        let p = HypergeometricParams::new(n, r, b)?;
        println!("{p:<14} -> {}", identify(&hypergeometric(&p)));
    }
    // Not every law on {0, 1, 2} is hypergeometric.
    let law = LatticeLaw::new(0, vec![rat(1, 3), rat(1, 3), rat(1, 3)])?;
    println!("uniform(0..2)  -> {}", identify(&law));
    Ok(())
}

fn main() {
    run_example().unwrap();
}
