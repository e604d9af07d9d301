use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exactnum::{CertifiedReal, Dyadic};

/// How certified reals are printed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Style {
    /// `[lo,hi]`.
    #[default]
    Bounds,
    /// `mid±width`.
    Mid,
}

impl FromStr for Style {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "bounds" => Ok(Style::Bounds),
            "mid" => Ok(Style::Mid),
            _ => Err(Error::InvalidParameters(format!("unknown style '{s}' (bounds|mid)"))),
        }
    }
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Style::Bounds => "bounds",
            Style::Mid => "mid",
        })
    }
}

/// Largest `f64` not above `d`.
pub fn f64_below(d: &Dyadic) -> f64 {
    let x = d.to_f64();
    if x.is_finite() && Dyadic::from_f64(x) > *d {
        x.next_down()
    } else {
        x
    }
}

/// Smallest `f64` not below `d`.
pub fn f64_above(d: &Dyadic) -> f64 {
    let x = d.to_f64();
    if x.is_finite() && Dyadic::from_f64(x) < *d {
        x.next_up()
    } else {
        x
    }
}

/// Lower endpoint with 17 significant digits.
pub fn fmt_lower(x: &CertifiedReal) -> String {
    format!("{:.16e}", f64_below(x.lo()))
}

/// Upper bound on the width.
pub fn fmt_width(x: &CertifiedReal) -> String {
    format!("{:.3e}", f64_above(&x.width()))
}

pub fn fmt_real(x: &CertifiedReal, style: Style) -> String {
    match style {
        Style::Bounds => format!("[{:.16e},{:.16e}]", f64_below(x.lo()), f64_above(x.hi())),
        Style::Mid => format!("{:.16e}±{}", x.mid_f64(), fmt_width(x)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;
    use crate::exactnum::to_certified;

    #[test]
    fn lower_endpoint_rounds_down() {
        let x = to_certified(&rat(1, 3), 96);
        let lo: f64 = fmt_lower(&x).parse().unwrap();
        assert!(lo <= 1.0 / 3.0);
        assert_eq!(fmt_real(&to_certified(&rat(1, 2), 64), Style::Bounds), "[5.0000000000000000e-1,5.0000000000000000e-1]");
        assert!(fmt_real(&x, Style::Mid).starts_with("3.3333333333333331e-1±"));
    }
}
