//! Function and point inputs, from JSON files or compact command-line text.

use annulus_core::{KernelId, Laurent, Rational, C64};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Laurent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Laurent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Laurent>,
    /// Multiplier given as a quotient; a polynomial `f` is used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Rational>,
    #[serde(
        default,
        with = "annulus_core::cxser::option",
        skip_serializing_if = "Option::is_none"
    )]
    pub z: Option<C64>,
    #[serde(
        default,
        with = "annulus_core::cxser::option",
        skip_serializing_if = "Option::is_none"
    )]
    pub w: Option<C64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelId>,
}

impl Inputs {
    /// Fields present in `other` replace those in `self`.
    pub fn merge(&mut self, other: Inputs) {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if other.$field.is_some() { self.$field = other.$field; })*
            };
        }
        take!(f, g, h, phi, z, w, kernel);
    }

    pub(crate) fn need_f(&self, what: &str) -> Result<&Laurent, CliError> {
        self.f
            .as_ref()
            .ok_or_else(|| CliError::Validation(format!("{what} needs input f")))
    }
}

/// Laurent polynomial from `n:re[:im]` terms separated by commas, e.g.
/// `"1:1,0:-0.5"` for `z − 0.5`; a string starting with `{` is read as JSON.
pub fn parse_terms(s: &str) -> Result<Laurent, CliError> {
    let s = s.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s)
            .map_err(|e| CliError::Parse(format!("function {s:?}: {e}")));
    }
    let mut terms = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let fields: Vec<&str> = part.split(':').collect();
        let bad = || CliError::Parse(format!("term {part:?}: expected n:re or n:re:im"));
        if !(2..=3).contains(&fields.len()) {
            return Err(bad());
        }
        let n: i32 = fields[0].trim().parse().map_err(|_| bad())?;
        let re: f64 = fields[1].trim().parse().map_err(|_| bad())?;
        let im: f64 = match fields.get(2) {
            Some(t) => t.trim().parse().map_err(|_| bad())?,
            None => 0.0,
        };
        if terms.iter().any(|(m, _)| *m == n) {
            return Err(CliError::Parse(format!("exponent {n} given twice")));
        }
        terms.push((n, Complex::new(re, im)));
    }
    Ok(Laurent::from_terms(terms))
}

/// Complex number from `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<C64, CliError> {
    let bad = || CliError::Parse(format!("complex {s:?}: expected re or re,im"));
    let mut it = s.split(',').map(str::trim);
    let re: f64 = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let im: f64 = match it.next() {
        Some(t) => t.parse().map_err(|_| bad())?,
        None => 0.0,
    };
    if it.next().is_some() {
        return Err(bad());
    }
    Ok(Complex::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compact_terms() {
        let f = parse_terms("1:1, 0:-0.5").unwrap();
        assert_eq!(f, Laurent::from_real(0, &[-0.5, 1.0]));
        let g = parse_terms("-1:0:2").unwrap();
        assert_eq!(g.coeff(-1), Complex::new(0.0, 2.0));
        assert!(parse_terms("1:1,1:2").is_err());
        assert!(parse_terms("x:1").is_err());
        assert!(parse_terms("1").is_err());
    }

    #[test]
    fn json_terms() {
        let f = parse_terms(r#"{"coeffs":[{"n":-1,"re":1.0,"im":0.0}]}"#).unwrap();
        assert_eq!(f.coeff(-1), Complex::new(1.0, 0.0));
        assert!(parse_terms(r#"{"coeffs":[],"extra":1}"#).is_err());
    }

    #[test]
    fn complex_text() {
        assert_eq!(parse_complex("0.5").unwrap(), Complex::new(0.5, 0.0));
        assert_eq!(parse_complex("0.5, -1").unwrap(), Complex::new(0.5, -1.0));
        assert!(parse_complex("1,2,3").is_err());
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(serde_json::from_str::<Inputs>(r#"{"q": 1}"#).is_err());
    }
}
