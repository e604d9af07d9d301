// σd for B(n, 1/2) increases to 1/√(8π) along odd n.

use hyperg_gauss::report::{inv_sqrt_8pi, limit_monotone, limit_sweep};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ns: Vec<u64> = [1, 3, 5, 11, 51, 101, 501, 1001, 4001].into();
    let rows = limit_sweep(&ns, 96)?;
    println!("1/sqrt(8 pi) = {:.15}", inv_sqrt_8pi(96).mid_f64());
    println!("{:>5} {:>17} {:>12} {:>17}", "n", "sigma*d", "gap", "2*sigma0*d");
    for r in &rows {
        println!(
            "{:>5} {:>17.15} {:>12.3e} {:>17.15}",
            r.n,
            r.sigma_d.mid_f64(),
            r.gap.mid_f64(),
            r.two_sigma0_d.mid_f64()
        );
    }
    println!("strictly increasing: {}", limit_monotone(&rows));
    Ok(())
}

fn main() {
    run_example().unwrap();
}
