// A small verification sweep written as CSV, the same report the `verify`
// subcommand produces.

use hyperg_gauss::report::{run_sweep, OutputFormat, Suite, SweepConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SweepConfig {
        n_max: 8,
        include_binomial_n_max: 5,
        bernconv_n_max: 6,
        suites: vec![Suite::Theorem, Suite::Remarks, Suite::Bernconv],
        ..Default::default()
    };
    let report = run_sweep(&cfg)?;
    for line in report.to_string(OutputFormat::Csv).lines().take(8) {
        println!("{line}");
    }
    println!("...");
    println!("{}", report.summary);
    Ok(())
}

fn main() {
    run_example().unwrap();
}
