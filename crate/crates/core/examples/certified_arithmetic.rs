// Interval enclosures and comparisons that raise precision until decided.

use hyperg_gauss::exactnum::elementary::{exp, pi};
use hyperg_gauss::exactnum::rational::rat;
use hyperg_gauss::exactnum::{certify_lt, to_certified, PrecisionSchedule};
use hyperg_gauss::gauss::normal;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let x = to_certified(&rat(1, 3), 64);
    println!("1/3 at 64 bits: {}", x.format_bounds());
    println!("pi:             {}", pi(128).format_bounds());
    println!("Phi(1) - 1/2:   {}", normal::central(&to_certified(&rat(1, 1), 96)).format_bounds());

    // Starting from 24 bits; the schedule doubles precision while undecided.
    let sched = PrecisionSchedule::starting_at(24);
    let v = certify_lt(&sched, |p| {
        let e_pi = exp(&pi(p));
        let pi_e = hyperg_gauss::exactnum::elementary::log(&pi(p))
            .mul(&exp(&to_certified(&rat(1, 1), p)));
        (exp(&pi_e), e_pi)
    });
    println!("pi^e < e^pi: {v}");
    Ok(())
}

fn main() {
    run_example().unwrap();
}
