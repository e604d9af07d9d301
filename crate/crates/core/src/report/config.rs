use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exactnum::{PrecisionSchedule, MIN_PRECISION, PRECISION_CAP};
use crate::kolmo::TauSpec;

use super::format::Style;

/// Verification families a sweep can run, in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Theorem,
    Remarks,
    Section4,
    Inequalities,
    Bernconv,
    Concentration,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Theorem,
        Suite::Remarks,
        Suite::Section4,
        Suite::Inequalities,
        Suite::Bernconv,
        Suite::Concentration,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem => "theorem",
            Suite::Remarks => "remarks",
            Suite::Section4 => "section4",
            Suite::Inequalities => "inequalities",
            Suite::Bernconv => "bernconv",
            Suite::Concentration => "concentration",
        }
    }

    /// Runs over symmetric `(N, n, τ)` cases.
    pub fn is_symmetric_sweep(self) -> bool {
        matches!(self, Suite::Theorem | Suite::Remarks | Suite::Section4)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| Error::InvalidParameters(format!("unknown suite '{s}'")))
    }
}

/// Parses `theorem,remarks` or `all`.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>> {
    if s.trim() == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    let mut out = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(Suite::from_str)
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(Error::InvalidParameters("no suites selected".into()));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::InvalidParameters(format!("unknown format '{s}' (csv|json)"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

/// Everything a `verify` run depends on. Two runs with equal configs write
/// identical reports unless `timings` is set.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    /// Largest even population size for the symmetric suites.
    pub n_max: u64,
    /// Symmetric binomials `B_{n,1/2}` with `n <= include_binomial_n_max`; 0 for none.
    pub include_binomial_n_max: u64,
    pub tau_grid: Vec<TauSpec>,
    pub suites: Vec<Suite>,
    /// Largest `r + b` for the factorization and concentration suites.
    pub bernconv_n_max: u64,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
    pub style: Style,
    /// Starting precision; `None` defers to the environment.
    pub precision_bits: Option<u32>,
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
    /// Adds a wall-time column, which makes reports non-reproducible.
    pub timings: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n_max: 200,
            include_binomial_n_max: 0,
            tau_grid: TauSpec::default_grid(),
            suites: Suite::ALL.to_vec(),
            bernconv_n_max: 40,
            output_path: None,
            format: OutputFormat::Csv,
            style: Style::Bounds,
            precision_bits: None,
            jobs: None,
            timings: false,
        }
    }
}

/// Keys accepted in a config file. Every key is optional.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(rename = "N_max", alias = "n_max")]
    pub n_max: Option<u64>,
    pub include_binomial_n_max: Option<u64>,
    pub tau_grid: Option<Vec<String>>,
    pub suites: Option<Vec<String>>,
    #[serde(rename = "bernconv_N_max", alias = "bernconv_n_max")]
    pub bernconv_n_max: Option<u64>,
    pub output_path: Option<PathBuf>,
    #[serde(alias = "format")]
    pub output_format: Option<String>,
    pub style: Option<String>,
    pub precision_bits: Option<u32>,
    pub jobs: Option<usize>,
    pub timings: Option<bool>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidParameters(format!("config: {}", e.message())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameters(format!("config {}: {e}", path.display())))?;
        ConfigFile::parse(&text)
    }

    /// Overwrites every field of `self` that `other` sets.
    pub fn overlay(mut self, other: ConfigFile) -> ConfigFile {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(
            n_max,
            include_binomial_n_max,
            tau_grid,
            suites,
            bernconv_n_max,
            output_path,
            output_format,
            style,
            precision_bits,
            jobs,
            timings
        );
        self
    }

    /// Applies the set keys to the defaults and validates the result.
    pub fn resolve(self) -> Result<SweepConfig> {
        let mut c = SweepConfig::default();
        if let Some(v) = self.n_max {
            c.n_max = v;
        }
        if let Some(v) = self.include_binomial_n_max {
            c.include_binomial_n_max = v;
        }
        if let Some(v) = self.tau_grid {
            c.tau_grid = v.iter().map(|s| s.parse()).collect::<Result<_>>()?;
        }
        if let Some(v) = self.suites {
            c.suites = parse_suites(&v.join(","))?;
        }
        if let Some(v) = self.bernconv_n_max {
            c.bernconv_n_max = v;
        }
        c.output_path = self.output_path;
        if let Some(v) = self.output_format {
            c.format = v.parse()?;
        }
        if let Some(v) = self.style {
            c.style = v.parse()?;
        }
        c.precision_bits = self.precision_bits;
        c.jobs = self.jobs;
        c.timings = self.timings.unwrap_or(false);
        c.validate()?;
        Ok(c)
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameters(m));
        if self.n_max < 2 {
            return bad(format!("N_max = {} must be at least 2", self.n_max));
        }
        if self.tau_grid.is_empty() {
            return bad("empty tau grid".into());
        }
        if self.suites.is_empty() {
            return bad("no suites selected".into());
        }
        if let Some(p) = self.precision_bits {
            if !(MIN_PRECISION..=PRECISION_CAP).contains(&p) {
                return bad(format!("precision {p} outside [{MIN_PRECISION}, {PRECISION_CAP}]"));
            }
        }
        if self.jobs == Some(0) {
            return bad("jobs must be positive".into());
        }
        let mut seen = Vec::new();
        for t in &self.tau_grid {
            if seen.contains(&t) {
                return bad(format!("tau '{t}' listed twice"));
            }
            seen.push(t);
        }
        Ok(())
    }

    pub fn schedule(&self) -> PrecisionSchedule {
        match self.precision_bits {
            Some(p) => PrecisionSchedule::starting_at(p),
            None => PrecisionSchedule::from_env(),
        }
    }

    /// Even `N` in `2..=N_max`.
    pub fn populations(&self) -> impl Iterator<Item = u64> {
        (2..=self.n_max).step_by(2)
    }

    pub fn has(&self, s: Suite) -> bool {
        self.suites.contains(&s)
    }

    /// One line describing the inputs that determine the report.
    pub fn describe(&self) -> String {
        let taus: Vec<String> = self.tau_grid.iter().map(|t| t.to_string()).collect();
        let suites: Vec<&str> = self.suites.iter().map(|s| s.name()).collect();
        format!(
            "N_max={} include_binomial_n_max={} bernconv_N_max={} tau_grid={} suites={} style={} precision_bits={}",
            self.n_max,
            self.include_binomial_n_max,
            self.bernconv_n_max,
            taus.join(";"),
            suites.join(";"),
            self.style,
            self.schedule().start,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let file = ConfigFile::parse("N_max = 20\ntau_grid = [\"sigma\"]\nsuites = [\"theorem\"]\njobs = 2").unwrap();
        let flags = ConfigFile {
            n_max: Some(10),
            ..Default::default()
        };
        let c = file.overlay(flags).resolve().unwrap();
        assert_eq!(c.n_max, 10);
        assert_eq!(c.tau_grid, vec![TauSpec::Sigma]);
        assert_eq!(c.suites, vec![Suite::Theorem]);
        assert_eq!(c.jobs, Some(2));
    }

    #[test]
    fn rejects_bad_config() {
        assert!(ConfigFile::parse("unknown_key = 1").is_err());
        let c = ConfigFile {
            n_max: Some(1),
            ..Default::default()
        };
        assert!(c.resolve().is_err());
        assert!(parse_suites("theorem,bogus").is_err());
        assert_eq!(parse_suites("remarks,theorem,remarks").unwrap(), vec![Suite::Theorem, Suite::Remarks]);
    }
}
