use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::elementary::pi;
use crate::exactnum::rational::{fmt_rational, rat};
use crate::exactnum::{to_certified, CertifiedReal, Status, Verdict};
use crate::kolmo::binomial_sigma_d;
use crate::kolmo::theorem::anchor_h1;

use super::format::{fmt_lower, fmt_width};
use super::REPORT_HEADER;

/// `σd` for `B_{n,1/2}` along odd `n`, against its limit `1/√(8π)`.
#[derive(Clone, Debug)]
pub struct LimitRow {
    pub n: u64,
    pub sigma_d: CertifiedReal,
    pub d: CertifiedReal,
    /// `1/√(8π) - σd`.
    pub gap: CertifiedReal,
    /// `2σ₀d`, whose limit is `1/√(2π)`.
    pub two_sigma0_d: CertifiedReal,
    /// `σd` strictly above the previous row; `None` on the first row.
    pub increasing: Option<Verdict>,
}

#[derive(Serialize)]
struct CsvRow {
    n: u64,
    sigma_sq: String,
    d_lo: String,
    d_width: String,
    sigma_d_lo: String,
    sigma_d_width: String,
    gap_lo: String,
    gap_width: String,
    two_sigma0_d_lo: String,
    two_sigma0_d_width: String,
    increasing: &'static str,
}

pub fn inv_sqrt_8pi(prec: u32) -> CertifiedReal {
    pi(prec).mul_pow2(3).sqrt().recip()
}

/// Rows for the given odd `n`, in the given order.
pub fn limit_sweep(ns: &[u64], prec: u32) -> Result<Vec<LimitRow>> {
    if let Some(n) = ns.iter().find(|n| *n % 2 == 0) {
        return Err(Error::InvalidParameters(format!("limit sweep needs odd n, got {n}")));
    }
    if ns.len() > 1 && ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameters("limit sweep needs increasing n".into()));
    }
    let limit = inv_sqrt_8pi(prec);
    let mut rows: Vec<LimitRow> = Vec::with_capacity(ns.len());
    for &n in ns {
        // σ² = n/4 and σ₀ = σ for N = ∞.
        let sigma_d = binomial_sigma_d(n, prec);
        let sigma = to_certified(&rat(n as i64, 4), prec + 8).sqrt();
        let d = sigma_d.div(&sigma).with_precision(prec);
        let increasing = rows.last().map(|prev| Verdict::strict_less(&prev.sigma_d, &sigma_d));
        rows.push(LimitRow {
            n,
            gap: limit.sub(&sigma_d),
            two_sigma0_d: sigma_d.mul_pow2(1),
            d,
            sigma_d,
            increasing,
        });
    }
    Ok(rows)
}

/// `1, 3, 5, ..., n_max`.
pub fn odd_range(n_max: u64) -> Vec<u64> {
    (1..=n_max).step_by(2).collect()
}

/// `true` when every row after the first is certified strictly increasing.
pub fn limit_monotone(rows: &[LimitRow]) -> bool {
    rows.iter()
        .filter_map(|r| r.increasing.as_ref())
        .all(|v| v.status == Status::Pass)
}

pub fn write_limit_csv(rows: &[LimitRow], out: &mut dyn Write) -> Result<()> {
    let err = |e: String| Error::InvalidParameters(e);
    writeln!(out, "{REPORT_HEADER} limit-sweep").map_err(|e| err(e.to_string()))?;
    writeln!(
        out,
        "# limit sigma*d -> 1/sqrt(8pi) = {}; 2*sigma0*d -> 1/sqrt(2pi) = {}",
        fmt_lower(&inv_sqrt_8pi(96)),
        fmt_lower(&anchor_h1(96))
    )
    .map_err(|e| err(e.to_string()))?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(CsvRow {
            n: r.n,
            sigma_sq: fmt_rational(&rat(r.n as i64, 4)),
            d_lo: fmt_lower(&r.d),
            d_width: fmt_width(&r.d),
            sigma_d_lo: fmt_lower(&r.sigma_d),
            sigma_d_width: fmt_width(&r.sigma_d),
            gap_lo: fmt_lower(&r.gap),
            gap_width: fmt_width(&r.gap),
            two_sigma0_d_lo: fmt_lower(&r.two_sigma0_d),
            two_sigma0_d_width: fmt_width(&r.two_sigma0_d),
            increasing: match &r.increasing {
                None => "",
                Some(v) => match v.status {
                    Status::Pass => "true",
                    Status::Fail => "false",
                    Status::Inconclusive => "inconclusive",
                },
            },
        })
        .map_err(|e| err(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| err(e.to_string()))?;
    out.write_all(&bytes).map_err(|e| err(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_rows() {
        let rows = limit_sweep(&[1, 3, 5, 7], 96).unwrap();
        // σ = 1/2, d = Φ(1) - 1/2.
        assert!((rows[0].sigma_d.mid_f64() - 0.5 * 0.341_344_746_068_542_9).abs() < 1e-15);
        assert!(limit_monotone(&rows));
        assert!(rows.iter().all(|r| r.gap.is_positive()));
        assert!(limit_sweep(&[2], 96).is_err());
        assert!(limit_sweep(&[5, 3], 96).is_err());
        // Agrees with the general symmetric-case route.
        let case = crate::kolmo::SymmetricCase::binomial(7).unwrap();
        let t = crate::kolmo::theorem::two_sigma0_d(&case, &crate::kolmo::TauSpec::Sigma0, 96).unwrap();
        assert!(t.overlaps(&rows[3].two_sigma0_d));
    }
}
