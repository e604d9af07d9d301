//! Verification sweeps over many cases, with deterministic CSV and JSON
//! reports, and the binomial limit sweep.

pub mod config;
pub mod format;
pub mod limit;
pub mod sweep;

pub use config::{parse_suites, ConfigFile, OutputFormat, Suite, SweepConfig};
pub use format::{fmt_lower, fmt_real, fmt_width, Style};
pub use limit::{inv_sqrt_8pi, limit_monotone, limit_sweep, odd_range, write_limit_csv, LimitRow};
pub use sweep::{concentration_windows, run_sweep, CaseRow, Summary, SweepReport, REPORT_HEADER};
