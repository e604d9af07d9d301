//! Command-line front end. The binary only forwards its arguments to [`run`].

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::json;

use crate::bernconv::{
    concentration_lower_bound_scaled, factorize, factorize_law, levy_equality_law, levy_sharp_check_scaled,
    smoothed_density_check, ScaledLaw,
};
use crate::error::{Error, Result};
use crate::exactnum::elementary::pi;
use crate::exactnum::rational::{fmt_rational, parse_rational, rat};
use crate::exactnum::PrecisionSchedule;
use crate::gauss::inequalities::w_log_defect;
use crate::kolmo::{verify_theorem_main, SymmetricCase, TauSpec};
use crate::laws::{
    binomial, hypergeometric, identify, HypergeometricParams, LatticeLaw, LawView, PopulationModel,
};
use crate::report::{
    fmt_real, limit_monotone, limit_sweep, odd_range, run_sweep, write_limit_csv, ConfigFile, Style,
};

#[derive(Parser, Debug)]
#[command(name = "hyperg-gauss", version, about = "Exact hypergeometric laws and certified normal approximation bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact pmf, cumulants, symmetry and identification of a law.
    Pmf(PmfArgs),
    /// Kolmogorov distance of a symmetric case to N(n/2, τ²) with its bound checks.
    Distance(DistanceArgs),
    /// Sweep the selected suites and write a report.
    Verify(VerifyArgs),
    /// σd for symmetric binomials along odd n, against 1/√(8π).
    LimitSweep(LimitArgs),
    /// Bernoulli factors of a law whose generating polynomial has real roots.
    Factorize(FactorizeArgs),
    /// Concentration lower bounds and Lévy's inequality.
    Concentration(ConcentrationArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct LawArgs {
    /// Hypergeometric law H(n, r, b).
    #[arg(long, num_args = 3, value_names = ["n", "r", "b"])]
    hyper: Option<Vec<u64>>,
    /// Binomial law B(n, p) with rational p.
    #[arg(long, num_args = 2, value_names = ["n", "p"])]
    binom: Option<Vec<String>>,
}

impl LawArgs {
    fn law(&self) -> Result<(String, LatticeLaw, Option<PopulationModel>)> {
        if let Some(v) = &self.hyper {
            let p = HypergeometricParams::new(v[0], v[1], v[2])?;
            return Ok((p.to_string(), hypergeometric(&p), Some(PopulationModel::hypergeometric(&p))));
        }
        let v = self.binom.as_ref().expect("clap group");
        let n: u64 = v[0]
            .parse()
            .map_err(|_| Error::InvalidParameters(format!("bad n '{}'", v[0])))?;
        let p = parse_prob(&v[1])?;
        Ok((
            format!("B({n}, {})", fmt_rational(&p)),
            binomial(n, &p)?,
            Some(PopulationModel::binomial(n, &p)?),
        ))
    }
}

fn parse_prob(s: &str) -> Result<BigRational> {
    parse_rational(s).ok_or_else(|| Error::InvalidParameters(format!("bad rational '{s}'")))
}

#[derive(Args, Debug)]
struct PmfArgs {
    #[command(flatten)]
    law: LawArgs,
    /// Print JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct DistanceArgs {
    /// Population size of H(n, N/2, N/2).
    #[arg(long = "N", conflicts_with_all = ["binom", "hyper"])]
    population: Option<u64>,
    /// Symmetric binomial B(n, 1/2) (N = ∞).
    #[arg(long, conflicts_with = "hyper")]
    binom: bool,
    /// Any symmetric hypergeometric law H(n, r, b).
    #[arg(long, num_args = 3, value_names = ["n", "r", "b"])]
    hyper: Option<Vec<u64>>,
    /// Sample size.
    #[arg(long = "n", required_unless_present = "hyper")]
    n: Option<u64>,
    /// sigma0, mid, sigma, frac:<λ>, or a rational value.
    #[arg(long, default_value = "sigma")]
    tau: String,
    /// Also write the report as JSON to this path (`-` for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, default_value = "bounds")]
    style: String,
    #[arg(long = "precision-bits")]
    precision_bits: Option<u32>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// TOML file with sweep keys; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "N-max")]
    n_max: Option<u64>,
    /// Also sweep B(n, 1/2) for n up to this value.
    #[arg(long = "binom-max")]
    binom_max: Option<u64>,
    /// Largest r + b for the bernconv and concentration suites.
    #[arg(long = "bernconv-N-max")]
    bernconv_n_max: Option<u64>,
    /// Comma-separated τ grid, e.g. `sigma0,mid,sigma`.
    #[arg(long)]
    tau: Option<String>,
    /// Comma-separated suites or `all`.
    #[arg(long)]
    suites: Option<String>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Report path; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long = "precision-bits")]
    precision_bits: Option<u32>,
    #[arg(long)]
    style: Option<String>,
    /// Add a wall-time column (reports are then not reproducible).
    #[arg(long)]
    timings: bool,
}

#[derive(Args, Debug)]
struct LimitArgs {
    /// Odd sample sizes; default is every odd n up to --n-max.
    #[arg(long = "n", value_delimiter = ',')]
    ns: Vec<u64>,
    #[arg(long = "n-max", default_value_t = 4001)]
    n_max: u64,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long = "precision-bits", default_value_t = 96)]
    precision_bits: u32,
    /// Instead, tabulate x·log(√(πx) w(x)) for x = 1..X against log(√π/2).
    #[arg(long = "w-defect", value_name = "X")]
    w_defect: Option<u64>,
}

#[derive(Args, Debug)]
#[group(id = "source", required = true, multiple = false)]
struct FactorizeSource {
    #[arg(long, num_args = 3, value_names = ["n", "r", "b"])]
    hyper: Option<Vec<u64>>,
    /// Comma-separated masses on 0, 1, 2, ...
    #[arg(long)]
    pmf: Option<String>,
}

#[derive(Args, Debug)]
struct FactorizeArgs {
    #[command(flatten)]
    source: FactorizeSource,
    /// Also check the two-sided normal approximation bound.
    #[arg(long)]
    sandwich: bool,
}

#[derive(Args, Debug)]
struct ConcentrationArgs {
    #[arg(long, num_args = 3, value_names = ["n", "r", "b"], conflicts_with_all = ["binom", "levy"])]
    hyper: Option<Vec<u64>>,
    #[arg(long, num_args = 2, value_names = ["n", "p"], conflicts_with = "levy")]
    binom: Option<Vec<String>>,
    /// Lévy's extremal law for (p, λ).
    #[arg(long, num_args = 2, value_names = ["p", "lambda"])]
    levy: Option<Vec<String>>,
    /// Window lengths.
    #[arg(long = "h", value_delimiter = ',', default_value = "1/2,1,2")]
    h: Vec<String>,
}

/// Parses `args` (program name first) and runs the command. Returns the exit
/// code: 0 success, 1 a check failed or was undecided, 2 bad usage.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Pmf(a) => cmd_pmf(a, out),
        Command::Distance(a) => cmd_distance(a, out),
        Command::Verify(a) => cmd_verify(a, out, err),
        Command::LimitSweep(a) => cmd_limit_sweep(a, out),
        Command::Factorize(a) => cmd_factorize(a, out),
        Command::Concentration(a) => cmd_concentration(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::InvalidParameters(format!("output: {e}"))
}

fn write_to(path: &std::path::Path, text: &str, out: &mut dyn Write) -> Result<()> {
    if path.as_os_str() == "-" {
        out.write_all(text.as_bytes()).map_err(io)
    } else {
        std::fs::write(path, text).map_err(io)
    }
}

fn cmd_pmf(a: &PmfArgs, out: &mut dyn Write) -> Result<i32> {
    let (name, law, pop) = a.law.law()?;
    let pop = pop.expect("both sources carry a model");
    let c = law.cumulants();
    let symmetric = pop.symmetric_centre().is_some();
    let id = identify(&law);
    if a.json {
        let v = json!({
            "law": name,
            "pmf": LawView::from(&law),
            "mean": fmt_rational(&c.mu),
            "variance": fmt_rational(&c.sigma_sq),
            "kappa3": fmt_rational(&c.kappa3),
            "sigma0_sq": fmt_rational(&pop.sigma0_sq),
            "population": pop.population.to_string(),
            "symmetric": symmetric,
            "identified": id.to_string(),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json")).map_err(io)?;
        return Ok(0);
    }
    writeln!(out, "{name}").map_err(io)?;
    for (k, m) in law.support() {
        writeln!(out, "{k}:{}", fmt_rational(m)).map_err(io)?;
    }
    writeln!(out, "mean={}", fmt_rational(&c.mu)).map_err(io)?;
    writeln!(out, "variance={}", fmt_rational(&c.sigma_sq)).map_err(io)?;
    writeln!(out, "kappa3={}", fmt_rational(&c.kappa3)).map_err(io)?;
    writeln!(out, "sigma0_sq={}", fmt_rational(&pop.sigma0_sq)).map_err(io)?;
    writeln!(out, "N={}", pop.population).map_err(io)?;
    writeln!(out, "symmetric={symmetric}").map_err(io)?;
    writeln!(out, "identified={id}").map_err(io)?;
    Ok(0)
}

fn cmd_distance(a: &DistanceArgs, out: &mut dyn Write) -> Result<i32> {
    let style: Style = a.style.parse()?;
    let case = match (&a.hyper, a.binom, a.population, a.n) {
        (Some(v), _, _, _) => {
            let p = HypergeometricParams::new(v[0], v[1], v[2])?;
            SymmetricCase::new(&PopulationModel::hypergeometric(&p))?
        }
        (None, true, _, Some(n)) => SymmetricCase::binomial(n)?,
        (None, false, Some(nn), Some(n)) => {
            if nn % 2 == 1 {
                return Err(Error::InvalidParameters(format!("N = {nn} must be even")));
            }
            SymmetricCase::finite(nn, n)?
        }
        _ => return Err(Error::InvalidParameters("need --N or --binom, with --n".into())),
    };
    let tau: TauSpec = a.tau.parse()?;
    let sched = match a.precision_bits {
        Some(p) => PrecisionSchedule::starting_at(p),
        None => PrecisionSchedule::from_env(),
    };
    let r = verify_theorem_main(&case, &tau, &sched)?;
    let prec = r.precision;
    let rho = r.sigma_d.mul(&pi(prec).mul_pow2(3).sqrt());
    // `--json -` puts the JSON alone on stdout.
    let json_only = a.json.as_deref().is_some_and(|p| p.as_os_str() == "-");
    if !json_only {
        writeln!(out, "N={} n={} tau={} ({:.12})", r.population, r.n, r.tau_spec, r.tau_f64()).map_err(io)?;
        writeln!(out, "sigma_sq={} sigma0_sq={}", fmt_rational(&r.sigma_sq), fmt_rational(&r.sigma0_sq))
            .map_err(io)?;
        writeln!(out, "d_closed={}", fmt_real(&r.d_closed, style)).map_err(io)?;
        writeln!(out, "d_brute={}", fmt_real(&r.d_brute, style)).map_err(io)?;
        writeln!(out, "argmax={}", r.argmax_point).map_err(io)?;
        writeln!(out, "sigma_d={}", fmt_real(&r.sigma_d, style)).map_err(io)?;
        writeln!(out, "sigma_d_sqrt_8pi={}", fmt_real(&rho, style)).map_err(io)?;
        writeln!(out, "exception={}", r.exception).map_err(io)?;
        for c in &r.checks {
            writeln!(out, "{:<22} {:<13} margin={}", c.name, c.label(), fmt_real(&c.verdict.margin, style))
                .map_err(io)?;
        }
    }
    if let Some(path) = &a.json {
        let v = json!({
            "N": r.population.to_string(),
            "n": r.n,
            "tau": r.tau_spec.to_string(),
            "sigma_sq": fmt_rational(&r.sigma_sq),
            "sigma0_sq": fmt_rational(&r.sigma0_sq),
            "d_closed": fmt_real(&r.d_closed, style),
            "d_brute": fmt_real(&r.d_brute, style),
            "argmax": r.argmax_point,
            "sigma_d": fmt_real(&r.sigma_d, style),
            "sigma_d_sqrt_8pi": fmt_real(&rho, style),
            "exception": r.exception,
            "precision_bits": prec,
            "checks": r.checks.iter().map(|c| json!({
                "name": c.name,
                "status": c.label(),
                "margin": fmt_real(&c.verdict.margin, style),
            })).collect::<Vec<_>>(),
        });
        write_to(path, &(serde_json::to_string_pretty(&v).expect("json") + "\n"), out)?;
    }
    Ok(if r.passed() { 0 } else { 1 })
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let file = match &a.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let split = |s: &Option<String>| s.as_ref().map(|s| s.split(',').map(|x| x.trim().to_string()).collect());
    let flags = ConfigFile {
        n_max: a.n_max,
        include_binomial_n_max: a.binom_max,
        tau_grid: split(&a.tau),
        suites: split(&a.suites),
        bernconv_n_max: a.bernconv_n_max,
        output_path: a.output.clone(),
        output_format: a.format.clone(),
        style: a.style.clone(),
        precision_bits: a.precision_bits,
        jobs: a.jobs,
        timings: a.timings.then_some(true),
    };
    let cfg = file.overlay(flags).resolve()?;
    let report = run_sweep(&cfg)?;
    let text = report.to_string(cfg.format);
    match &cfg.output_path {
        Some(p) => std::fs::write(p, &text).map_err(io)?,
        None => out.write_all(text.as_bytes()).map_err(io)?,
    }
    writeln!(err, "{}", report.summary).map_err(io)?;
    for r in report.rows.iter().filter(|r| !r.ok()) {
        writeln!(err, "{} N={} n={} tau={} {} {}: {}", r.suite, r.population, r.n, r.tau, r.point, r.check, r.status)
            .map_err(io)?;
    }
    Ok(report.summary.exit_code())
}

fn cmd_limit_sweep(a: &LimitArgs, out: &mut dyn Write) -> Result<i32> {
    if let Some(x_max) = a.w_defect {
        return w_defect_table(x_max, out);
    }
    let ns = if a.ns.is_empty() { odd_range(a.n_max) } else { a.ns.clone() };
    let rows = limit_sweep(&ns, a.precision_bits.max(crate::exactnum::MIN_PRECISION))?;
    let mut buf = Vec::new();
    write_limit_csv(&rows, &mut buf)?;
    match &a.output {
        Some(p) => std::fs::write(p, &buf).map_err(io)?,
        None => out.write_all(&buf).map_err(io)?,
    }
    Ok(if limit_monotone(&rows) { 0 } else { 1 })
}

/// Exploratory: the values are printed, nothing about their supremum is asserted.
fn w_defect_table(x_max: u64, out: &mut dyn Write) -> Result<i32> {
    if x_max == 0 {
        return Err(Error::InvalidParameters("need X >= 1".into()));
    }
    let prec = 96;
    let target = pi(prec).sqrt().mul_pow2(-1);
    let target = crate::exactnum::elementary::log(&target);
    writeln!(out, "# x*log(sqrt(pi x) w(x)); log(sqrt(pi)/2) = {:.16e}", target.mid_f64()).map_err(io)?;
    writeln!(out, "x,value,gap").map_err(io)?;
    for x in 1..=x_max {
        let v = w_log_defect(x, prec).mul_rational(&rat(x as i64, 1));
        writeln!(out, "{x},{:.16e},{:.6e}", v.mid_f64(), v.sub(&target).mid_f64()).map_err(io)?;
    }
    Ok(0)
}

fn cmd_factorize(a: &FactorizeArgs, out: &mut dyn Write) -> Result<i32> {
    let f = if let Some(v) = &a.source.hyper {
        factorize(&HypergeometricParams::new(v[0], v[1], v[2])?)?
    } else {
        let masses = a
            .source
            .pmf
            .as_ref()
            .expect("clap group")
            .split(',')
            .map(parse_prob)
            .collect::<Result<Vec<_>>>()?;
        factorize_law(&LatticeLaw::new(0, masses)?)?
    };
    writeln!(out, "{f}").map_err(io)?;
    let (m, v) = f.moment_errors();
    writeln!(out, "  mean error <= {:.3e}, variance error <= {:.3e}", m.hi().to_f64(), v.hi().to_f64()).map_err(io)?;
    let mut ok = f.within_tolerance();
    if a.sandwich {
        if f.law.variance() == BigRational::from_integer(0.into()) {
            writeln!(out, "  sandwich: skipped for a point mass").map_err(io)?;
        } else {
            let s = f.sandwich(&PrecisionSchedule::from_env())?;
            writeln!(out, "{s}").map_err(io)?;
            ok &= s.passed();
        }
    }
    Ok(if ok { 0 } else { 1 })
}

fn cmd_concentration(a: &ConcentrationArgs, out: &mut dyn Write) -> Result<i32> {
    let hs = a.h.iter().map(|s| parse_prob(s)).collect::<Result<Vec<_>>>()?;
    let mut ok = true;
    if let Some(v) = &a.levy {
        let p: u64 = v[0]
            .parse()
            .map_err(|_| Error::InvalidParameters(format!("bad p '{}'", v[0])))?;
        let lambda = parse_prob(&v[1])?;
        for h in &hs {
            let e = levy_equality_law(p, &lambda, h)?;
            writeln!(out, "h={} law: {}", fmt_rational(h), e.law).map_err(io)?;
            writeln!(out, "  {}", e.report).map_err(io)?;
            let v = e.verdict();
            writeln!(out, "  equality: {}", v.status).map_err(io)?;
            ok &= v.is_pass();
        }
        return Ok(if ok { 0 } else { 1 });
    }
    let law = if let Some(v) = &a.hyper {
        hypergeometric(&HypergeometricParams::new(v[0], v[1], v[2])?)
    } else if let Some(v) = &a.binom {
        let n: u64 = v[0]
            .parse()
            .map_err(|_| Error::InvalidParameters(format!("bad n '{}'", v[0])))?;
        binomial(n, &parse_prob(&v[1])?)?
    } else {
        return Err(Error::InvalidParameters("need --hyper, --binom or --levy".into()));
    };
    let scaled = ScaledLaw::unit(&law);
    writeln!(out, "variance={}", fmt_rational(&law.variance())).map_err(io)?;
    for h in &hs {
        let c = concentration_lower_bound_scaled(&scaled, h)?;
        writeln!(out, "{c}").map_err(io)?;
        ok &= c.verdict.is_pass();
        if law.is_dirac() {
            continue;
        }
        let l = levy_sharp_check_scaled(&scaled, h)?;
        writeln!(out, "  {l}").map_err(io)?;
        let s = smoothed_density_check(&scaled, h);
        writeln!(out, "  smoothed density: {}", s.status).map_err(io)?;
        ok &= l.passed() && s.is_pass();
    }
    Ok(if ok { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut o = Vec::new();
        let mut e = Vec::new();
        let code = run_with(std::iter::once("hyperg-gauss").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn pmf_rows() {
        let (code, out, _) = call(&["pmf", "--hyper", "2", "3", "3"]);
        assert_eq!(code, 0);
        assert!(out.contains("0:1/5\n1:3/5\n2:1/5\n"), "{out}");
        assert!(out.contains("symmetric=true"));
        let (code, out, _) = call(&["pmf", "--binom", "1", "1/2"]);
        assert_eq!(code, 0);
        assert!(out.contains("0:1/2\n1:1/2\n"));
        assert_eq!(call(&["pmf", "--hyper", "5", "2", "1"]).0, 2);
        assert_eq!(call(&["pmf"]).0, 2);
    }

    #[test]
    fn distance_cases() {
        let (code, out, _) = call(&["distance", "--N", "6", "--n", "2", "--tau", "sigma"]);
        assert_eq!(code, 0);
        let line = out.lines().find(|l| l.starts_with("d_closed=")).unwrap();
        let (lo, hi) = line["d_closed=[".len()..line.len() - 1].split_once(',').unwrap();
        let (lo, hi): (f64, f64) = (lo.parse().unwrap(), hi.parse().unwrap());
        assert!(lo <= 0.3 && 0.3 <= hi && hi - lo < 1e-15, "{out}");
        let (code, out, _) = call(&["distance", "--N", "2", "--n", "1", "--tau", "sigma0"]);
        assert_eq!(code, 0);
        assert!(out.contains("exception=true"));
        assert!(out.contains("EXPECTED_FAIL"));
        assert_eq!(call(&["distance", "--N", "6", "--n", "2", "--tau", "7"]).0, 2);
    }
}
