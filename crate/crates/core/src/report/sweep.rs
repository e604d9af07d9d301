use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::bernconv::{concentration_lower_bound, factorize, levy_sharp_check, smoothed_density_check, ScaledLaw};
use crate::error::{Error, Result};
use crate::exactnum::rational::{fmt_rational, rat};
use crate::exactnum::{CertifiedReal, PrecisionSchedule, Status, Verdict};
use crate::gauss::inequalities::standard_suite;
use crate::kolmo::{verify_remark_bounds, verify_section4_monotonicity, verify_theorem_main, BoundCheck, SymmetricCase};
use crate::laws::{HypergeometricParams, PopulationSize};

use super::config::{OutputFormat, Suite, SweepConfig};
use super::format::{fmt_lower, fmt_real, fmt_width};

pub const REPORT_HEADER: &str = "# hyperg-gauss-report v1";

/// Window lengths used by the concentration suite.
pub fn concentration_windows() -> [BigRational; 3] {
    [rat(1, 2), rat(1, 1), rat(2, 1)]
}

/// One line of a verification report: the deciding check of one case.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseRow {
    pub suite: &'static str,
    #[serde(rename = "N")]
    pub population: String,
    pub n: String,
    pub tau: String,
    /// Extra case parameters (`r`, `b`, an inequality grid point).
    pub point: String,
    /// Name of the deciding check: the first unexpected outcome, else the
    /// tightest pass.
    pub check: String,
    pub status: &'static str,
    pub checks: usize,
    pub d: String,
    pub d_lo: String,
    pub d_width: String,
    pub sigma_sq: String,
    pub sigma0_sq: String,
    pub margin_lo: String,
    pub margin_width: String,
    pub precision_bits: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl CaseRow {
    fn blank(suite: Suite) -> Self {
        CaseRow {
            suite: suite.name(),
            population: String::new(),
            n: String::new(),
            tau: String::new(),
            point: String::new(),
            check: String::new(),
            status: "PASS",
            checks: 0,
            d: String::new(),
            d_lo: String::new(),
            d_width: String::new(),
            sigma_sq: String::new(),
            sigma0_sq: String::new(),
            margin_lo: String::new(),
            margin_width: String::new(),
            precision_bits: 0,
            wall_ms: None,
        }
    }

    pub fn ok(&self) -> bool {
        matches!(self.status, "PASS" | "EXPECTED_FAIL")
    }

    fn set_distance(&mut self, d: &CertifiedReal, style: super::Style) {
        self.d = fmt_real(d, style);
        self.d_lo = fmt_lower(d);
        self.d_width = fmt_width(d);
    }

    fn set_outcome(&mut self, checks: &[Outcome]) {
        self.checks = checks.len();
        self.precision_bits = checks.iter().map(|c| c.verdict.precision_used).max().unwrap_or(0);
        if let Some(c) = decisive(checks) {
            self.check = c.name.clone();
            self.status = c.label();
            self.margin_lo = fmt_lower(&c.verdict.margin);
            self.margin_width = fmt_width(&c.verdict.margin);
        }
    }

    fn set_error(&mut self, e: &Error) {
        self.check = format!("error: {e}");
        self.status = "FAIL";
    }
}

/// A named verdict with the status it is expected to have.
#[derive(Clone, Debug)]
struct Outcome {
    name: String,
    verdict: Verdict,
    expected: Status,
}

impl Outcome {
    fn pass(name: impl Into<String>, verdict: Verdict) -> Self {
        Outcome {
            name: name.into(),
            verdict,
            expected: Status::Pass,
        }
    }

    fn label(&self) -> &'static str {
        BoundCheck {
            name: "",
            verdict: self.verdict.clone(),
            expected: self.expected,
        }
        .label()
    }

    fn rank(&self) -> u8 {
        match self.label() {
            "FAIL" => 0,
            "INCONCLUSIVE" => 1,
            "EXPECTED_FAIL" => 2,
            _ => 3,
        }
    }
}

impl From<&BoundCheck> for Outcome {
    fn from(c: &BoundCheck) -> Self {
        Outcome {
            name: c.name.to_string(),
            verdict: c.verdict.clone(),
            expected: c.expected,
        }
    }
}

/// Lowest rank wins. Among equal ranks, inequalities beat agreement and
/// equality checks (whose margin encloses zero), then the smaller margin
/// wins, then the earlier check.
fn decisive(checks: &[Outcome]) -> Option<&Outcome> {
    checks.iter().reduce(|best, c| {
        let key = |o: &Outcome| (o.rank(), o.verdict.margin.contains_zero());
        if key(c) < key(best) || (key(c) == key(best) && c.verdict.margin.lo() < best.verdict.margin.lo()) {
            c
        } else {
            best
        }
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub cases: usize,
    pub pass: usize,
    pub expected_fail: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

impl Summary {
    pub fn from_rows(rows: &[CaseRow]) -> Self {
        let mut s = Summary {
            cases: rows.len(),
            ..Default::default()
        };
        for r in rows {
            match r.status {
                "PASS" => s.pass += 1,
                "EXPECTED_FAIL" => s.expected_fail += 1,
                "INCONCLUSIVE" => s.inconclusive += 1,
                _ => s.fail += 1,
            }
        }
        s
    }

    pub fn all_ok(&self) -> bool {
        self.fail == 0 && self.inconclusive == 0
    }

    /// 0 when every case passed (expected failures included), else 1.
    pub fn exit_code(&self) -> i32 {
        if self.all_ok() {
            0
        } else {
            1
        }
    }
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} cases: {} PASS, {} EXPECTED_FAIL, {} FAIL, {} INCONCLUSIVE",
            self.cases, self.pass, self.expected_fail, self.fail, self.inconclusive
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub config: String,
    pub rows: Vec<CaseRow>,
    pub summary: Summary,
}

impl SweepReport {
    pub fn write(&self, format: OutputFormat, out: &mut dyn Write) -> Result<()> {
        let io = |e: std::io::Error| Error::InvalidParameters(format!("write failed: {e}"));
        match format {
            OutputFormat::Csv => {
                writeln!(out, "{REPORT_HEADER}").map_err(io)?;
                writeln!(out, "# {}", self.config).map_err(io)?;
                let mut w = csv::Writer::from_writer(Vec::new());
                for r in &self.rows {
                    w.serialize(r).map_err(|e| Error::InvalidParameters(e.to_string()))?;
                }
                if self.rows.is_empty() {
                    w.write_record(CSV_COLUMNS).map_err(|e| Error::InvalidParameters(e.to_string()))?;
                }
                let bytes = w.into_inner().map_err(|e| Error::InvalidParameters(e.to_string()))?;
                out.write_all(&bytes).map_err(io)?;
            }
            OutputFormat::Json => {
                #[derive(Serialize)]
                struct Doc<'a> {
                    format: &'static str,
                    version: u32,
                    #[serde(flatten)]
                    report: &'a SweepReport,
                }
                let doc = Doc {
                    format: "hyperg-gauss-report",
                    version: 1,
                    report: self,
                };
                serde_json::to_writer_pretty(&mut *out, &doc).map_err(|e| Error::InvalidParameters(e.to_string()))?;
                writeln!(out).map_err(io)?;
            }
        }
        Ok(())
    }

    pub fn to_string(&self, format: OutputFormat) -> String {
        let mut buf = Vec::new();
        self.write(format, &mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 report")
    }
}

const CSV_COLUMNS: [&str; 17] = [
    "suite",
    "N",
    "n",
    "tau",
    "point",
    "check",
    "status",
    "checks",
    "d",
    "d_lo",
    "d_width",
    "sigma_sq",
    "sigma0_sq",
    "margin_lo",
    "margin_width",
    "precision_bits",
    "wall_ms",
];

enum Job {
    Symmetric {
        suite: Suite,
        case: Arc<SymmetricCase>,
        tau: usize,
    },
    Inequalities,
    Bernconv(HypergeometricParams),
    Concentration(HypergeometricParams),
}

/// Builds every case in report order, rejecting configurations whose `τ`
/// grid leaves `[σ₀, σ]` for some case.
fn plan(cfg: &SweepConfig) -> Result<Vec<Job>> {
    let mut cases = Vec::new();
    if cfg.suites.iter().any(|s| s.is_symmetric_sweep()) {
        for nn in cfg.populations() {
            for n in 1..nn {
                cases.push(Arc::new(SymmetricCase::finite(nn, n)?));
            }
        }
        for n in 1..=cfg.include_binomial_n_max {
            cases.push(Arc::new(SymmetricCase::binomial(n)?));
        }
        for case in &cases {
            for t in &cfg.tau_grid {
                t.resolve(&case.sigma0_sq, &case.sigma_sq)
                    .map_err(|e| Error::TauOutOfRange(format!("{e} (case {case}, tau {t})")))?;
            }
        }
    }
    let mut hyper = Vec::new();
    for nn in 2..=cfg.bernconv_n_max {
        for n in 1..nn {
            for r in 1..nn {
                hyper.push(HypergeometricParams::new(n, r, nn - r)?);
            }
        }
    }
    let mut jobs = Vec::new();
    for &suite in &cfg.suites {
        match suite {
            Suite::Theorem | Suite::Remarks | Suite::Section4 => {
                for case in &cases {
                    for tau in 0..cfg.tau_grid.len() {
                        jobs.push(Job::Symmetric {
                            suite,
                            case: case.clone(),
                            tau,
                        });
                    }
                }
            }
            Suite::Inequalities => jobs.push(Job::Inequalities),
            Suite::Bernconv => jobs.extend(hyper.iter().map(|p| Job::Bernconv(*p))),
            Suite::Concentration => jobs.extend(hyper.iter().map(|p| Job::Concentration(*p))),
        }
    }
    Ok(jobs)
}

fn symmetric_row(cfg: &SweepConfig, sched: &PrecisionSchedule, suite: Suite, case: &SymmetricCase, ti: usize) -> CaseRow {
    let tau = &cfg.tau_grid[ti];
    let mut row = CaseRow::blank(suite);
    row.population = case.population.to_string();
    row.n = case.n.to_string();
    row.tau = tau.to_string();
    row.sigma_sq = fmt_rational(&case.sigma_sq);
    row.sigma0_sq = fmt_rational(&case.sigma0_sq);
    let checks = match suite {
        Suite::Theorem => verify_theorem_main(case, tau, sched).map(|r| {
            row.set_distance(&r.d_closed, cfg.style);
            r.checks
        }),
        Suite::Remarks => verify_remark_bounds(case, tau, sched),
        _ => verify_section4_monotonicity(case, tau, sched),
    };
    if suite != Suite::Theorem {
        if let Ok(model) = case.model(tau) {
            row.set_distance(&case.closed_distance(&model.tau, sched.start), cfg.style);
        }
    }
    match checks {
        Ok(c) => row.set_outcome(&c.iter().map(Outcome::from).collect::<Vec<_>>()),
        Err(e) => row.set_error(&e),
    }
    row
}

fn hyper_row(suite: Suite, p: &HypergeometricParams) -> CaseRow {
    let mut row = CaseRow::blank(suite);
    row.population = p.population().to_string();
    row.n = p.n.to_string();
    row.point = format!("r={} b={}", p.r, p.b);
    row
}

fn bernconv_row(cfg: &SweepConfig, sched: &PrecisionSchedule, p: &HypergeometricParams) -> CaseRow {
    let mut row = hyper_row(Suite::Bernconv, p);
    let result = factorize(p).and_then(|f| {
        let s = f.sandwich(sched)?;
        Ok((f, s))
    });
    match result {
        Ok((f, s)) => {
            let c = f.law.cumulants();
            row.sigma_sq = fmt_rational(&c.sigma_sq);
            row.set_distance(&s.distance, cfg.style);
            let (m, v) = f.moment_errors();
            let tol = Verdict::from_bool(f.within_tolerance(), sched.start);
            let mut tol = tol;
            tol.margin = m.max(&v).max(&f.reconstruction_error).neg();
            row.set_outcome(&[
                Outcome::pass("factor_tolerance", tol),
                Outcome::pass("sandwich_lower", s.lower),
                Outcome::pass("sandwich_upper", s.upper),
            ]);
        }
        Err(e) => row.set_error(&e),
    }
    row
}

fn concentration_row(p: &HypergeometricParams) -> CaseRow {
    let mut row = hyper_row(Suite::Concentration, p);
    let law = crate::laws::hypergeometric(p);
    row.sigma_sq = fmt_rational(&law.variance());
    let scaled = ScaledLaw::unit(&law);
    let mut out = Vec::new();
    for h in concentration_windows() {
        let hs = fmt_rational(&h);
        let r = concentration_lower_bound(&law, &h).and_then(|c| Ok((c, levy_sharp_check(&law, &h)?)));
        match r {
            Ok((c, l)) => {
                out.push(Outcome::pass(format!("concentration h={hs}"), c.verdict));
                out.push(Outcome::pass(format!("levy h={hs}"), l.levy));
                out.push(Outcome::pass(format!("levy_chain h={hs}"), l.chain));
                out.push(Outcome::pass(format!("smoothed h={hs}"), smoothed_density_check(&scaled, &h)));
            }
            Err(e) => {
                row.set_error(&e);
                return row;
            }
        }
    }
    row.set_outcome(&out);
    row
}

fn inequality_rows(sched: &PrecisionSchedule) -> Vec<CaseRow> {
    standard_suite(sched)
        .iter()
        .map(|cert| {
            let mut row = CaseRow::blank(Suite::Inequalities);
            row.point = format!("{} {}", cert.name, cert.point);
            let checks: Vec<Outcome> = cert
                .checks
                .iter()
                .map(|c| Outcome::pass(c.label, c.verdict.clone()))
                .collect();
            row.set_outcome(&checks);
            row
        })
        .collect()
}

fn run_job(cfg: &SweepConfig, sched: &PrecisionSchedule, job: &Job) -> Vec<CaseRow> {
    let start = Instant::now();
    let mut rows = match job {
        Job::Symmetric { suite, case, tau } => vec![symmetric_row(cfg, sched, *suite, case, *tau)],
        Job::Inequalities => inequality_rows(sched),
        Job::Bernconv(p) => vec![bernconv_row(cfg, sched, p)],
        Job::Concentration(p) => vec![concentration_row(p)],
    };
    if cfg.timings {
        let ms = start.elapsed().as_millis() as u64;
        for r in &mut rows {
            r.wall_ms = Some(ms);
        }
    }
    rows
}

/// Runs every selected suite. Rows come back in plan order whatever the
/// number of workers.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let jobs = plan(cfg)?;
    let sched = cfg.schedule();
    let work = || -> Vec<CaseRow> {
        jobs.par_iter()
            .map(|j| run_job(cfg, &sched, j))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    };
    let rows = match cfg.jobs {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::InvalidParameters(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    let summary = Summary::from_rows(&rows);
    Ok(SweepReport {
        config: cfg.describe(),
        rows,
        summary,
    })
}

/// Population size of a row, `None` for rows without one.
pub fn row_population(row: &CaseRow) -> Option<PopulationSize> {
    match row.population.as_str() {
        "" => None,
        "inf" => Some(PopulationSize::Infinite),
        s => s.parse().ok().map(PopulationSize::Finite),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kolmo::TauSpec;

    fn small(suites: Vec<Suite>) -> SweepConfig {
        SweepConfig {
            n_max: 6,
            include_binomial_n_max: 3,
            bernconv_n_max: 5,
            suites,
            jobs: Some(2),
            ..Default::default()
        }
    }

    #[test]
    fn theorem_rows_with_exception() {
        let rep = run_sweep(&small(vec![Suite::Theorem])).unwrap();
        // N in {2,4,6}: 1 + 3 + 5 cases, plus 3 binomials, times 3 taus.
        assert_eq!(rep.rows.len(), 12 * 3);
        assert_eq!(rep.summary.exit_code(), 0, "{}", rep.summary);
        let first = &rep.rows[0];
        assert_eq!((first.population.as_str(), first.n.as_str(), first.tau.as_str()), ("2", "1", "sigma0"));
        assert_eq!(first.status, "EXPECTED_FAIL");
        // At N = 2 only τ = σ₀ has τ/σ = 1/√2 below the exception constant.
        assert_eq!(rep.summary.expected_fail, 1);
        assert_eq!(row_population(rep.rows.last().unwrap()), Some(PopulationSize::Infinite));
    }

    #[test]
    fn all_suites_small() {
        let rep = run_sweep(&small(Suite::ALL.to_vec())).unwrap();
        assert!(rep.summary.all_ok(), "{}\n{}", rep.summary, rep.to_string(OutputFormat::Csv));
        let csv = rep.to_string(OutputFormat::Csv);
        assert!(csv.starts_with(REPORT_HEADER));
        let json: serde_json::Value = serde_json::from_str(&rep.to_string(OutputFormat::Json)).unwrap();
        assert_eq!(json["rows"].as_array().unwrap().len(), rep.rows.len());
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let mut a = small(vec![Suite::Theorem, Suite::Bernconv]);
        let b = SweepConfig { jobs: Some(1), ..a.clone() };
        a.jobs = Some(3);
        assert_eq!(run_sweep(&a).unwrap().to_string(OutputFormat::Csv), run_sweep(&b).unwrap().to_string(OutputFormat::Csv));
    }

    #[test]
    fn explicit_tau_out_of_range() {
        let mut c = small(vec![Suite::Theorem]);
        c.tau_grid = vec![TauSpec::Explicit(rat(3, 4))];
        assert!(matches!(run_sweep(&c), Err(Error::TauOutOfRange(_))));
    }
}
