// Kolmogorov distance of symmetric laws to N(n/2, τ²), in closed form and by
// scanning every jump, with the two-sided bound on σd.

use hyperg_gauss::exactnum::PrecisionSchedule;
use hyperg_gauss::kolmo::{verify_theorem_main, SymmetricCase, TauSpec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let sched = PrecisionSchedule::default();
    let cases = [
        (SymmetricCase::finite(6, 2)?, TauSpec::Sigma),
        (SymmetricCase::binomial(9)?, TauSpec::Sigma),
        (SymmetricCase::finite(40, 17)?, TauSpec::mid()),
        // The one case where σd exceeds 1/√(8π).
        (SymmetricCase::finite(2, 1)?, TauSpec::Sigma0),
    ];
    for (case, tau) in &cases {
        let r = verify_theorem_main(case, tau, &sched)?;
        print!("{r}");
        println!("  => {}\n", if r.passed() { "ok" } else { "VIOLATION" });
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
