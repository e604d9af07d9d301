// Certified checks of the Gaussian inequalities used in the distance bounds.

use hyperg_gauss::exactnum::rational::{int, rat};
use hyperg_gauss::exactnum::PrecisionSchedule;
use hyperg_gauss::gauss::inequalities::{
    check_beta_chain, check_increment_bounds, check_w_bounds, standard_suite,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let sched = PrecisionSchedule::default();
    print!("{}", check_increment_bounds(&rat(3, 2), &int(1), &sched)?);
    print!("{}", check_beta_chain(&rat(1, 2), &sched)?);
    print!("{}", check_w_bounds(10, &sched)?);

    let suite = standard_suite(&sched);
    let failed: Vec<_> = suite.iter().filter(|c| !c.passed()).collect();
    println!("standard suite: {} certificates, {} not passed", suite.len(), failed.len());
    Ok(())
}

fn main() {
    run_example().unwrap();
}
