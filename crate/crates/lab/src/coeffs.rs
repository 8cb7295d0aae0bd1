//! Plain-text coefficient fields.
//!
//! ```text
//! wegner-coefficients 1
//! construction monomial
//! dimension 2
//! delta 1
//! sign 1
//! exponents 1 1
//! 0 0 : 0
//! 0 1 : 0
//! ...
//! ```
//!
//! Header lines are `key value`; every following line is one site
//! `k1 ... kd : p/q`. Sites missing from the bounding rectangle of the
//! listed sites are zero. `#` starts a comment line.

use std::fmt::Write as _;

use wegner_core::math::{format_rational, parse_rational};
use wegner_core::transform::{CoefficientField, Construction};
use wegner_core::{Rational, Rect};

use crate::error::ConfigError;

const MAGIC: &str = "wegner-coefficients";
const VERSION: u32 = 1;

pub fn write_field(field: &CoefficientField) -> String {
    let mut out = String::new();
    writeln!(out, "{MAGIC} {VERSION}").unwrap();
    writeln!(out, "construction {}", field.construction().tag()).unwrap();
    writeln!(out, "dimension {}", field.dim()).unwrap();
    writeln!(out, "delta {}", format_rational(field.delta())).unwrap();
    writeln!(out, "sign {}", field.sign()).unwrap();
    if !field.exponents().is_empty() {
        let e: Vec<String> = field.exponents().iter().map(u32::to_string).collect();
        writeln!(out, "exponents {}", e.join(" ")).unwrap();
    }
    if let Some(m) = field.window_radius() {
        writeln!(out, "radius {m}").unwrap();
    }
    for (i, value) in field.values().iter().enumerate() {
        let k: Vec<String> = field.domain().point(i).iter().map(i64::to_string).collect();
        writeln!(out, "{} : {}", k.join(" "), format_rational(value)).unwrap();
    }
    out
}

fn bad(line: usize, msg: impl std::fmt::Display) -> ConfigError {
    ConfigError::Invalid(format!("coefficient file line {line}: {msg}"))
}

pub fn parse_field(text: &str) -> Result<CoefficientField, ConfigError> {
    let mut construction = None;
    let mut dim = None;
    let mut delta = None;
    let mut sign = 1i8;
    let mut exponents = Vec::new();
    let mut radius = None;
    let mut seen_magic = false;
    let mut sites: Vec<(Vec<i64>, Rational)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((lhs, rhs)) = line.split_once(':') {
            let k = lhs
                .split_whitespace()
                .map(|c| c.parse::<i64>().map_err(|e| bad(line_no, e)))
                .collect::<Result<Vec<_>, _>>()?;
            let value = parse_rational(rhs).map_err(|e| bad(line_no, e))?;
            sites.push((k, value));
            continue;
        }
        let (key, value) = line.split_once(char::is_whitespace).ok_or_else(|| bad(line_no, "expected `key value`"))?;
        let value = value.trim();
        match key {
            MAGIC => {
                if value != VERSION.to_string() {
                    return Err(bad(line_no, format!("unsupported version {value}")));
                }
                seen_magic = true;
            }
            "construction" => {
                construction = Some(Construction::from_tag(value).ok_or_else(|| bad(line_no, format!("unknown construction {value}")))?)
            }
            "dimension" => dim = Some(value.parse::<usize>().map_err(|e| bad(line_no, e))?),
            "delta" => delta = Some(parse_rational(value).map_err(|e| bad(line_no, e))?),
            "sign" => sign = value.parse::<i8>().map_err(|e| bad(line_no, e))?,
            "exponents" => {
                exponents = value
                    .split_whitespace()
                    .map(|c| c.parse::<u32>().map_err(|e| bad(line_no, e)))
                    .collect::<Result<_, _>>()?
            }
            "radius" => radius = Some(value.parse::<u64>().map_err(|e| bad(line_no, e))?),
            _ => return Err(bad(line_no, format!("unknown header {key}"))),
        }
    }
    if !seen_magic {
        return Err(ConfigError::Invalid(format!("missing `{MAGIC} {VERSION}` header")));
    }
    let construction = construction.ok_or_else(|| ConfigError::Invalid("missing construction".into()))?;
    let dim = dim.ok_or_else(|| ConfigError::Invalid("missing dimension".into()))?;
    let delta = delta.ok_or_else(|| ConfigError::Invalid("missing delta".into()))?;
    if sites.is_empty() {
        return Err(ConfigError::Invalid("no sites".into()));
    }
    if let Some((k, _)) = sites.iter().find(|(k, _)| k.len() != dim) {
        return Err(ConfigError::Invalid(format!("site {k:?} does not have {dim} coordinates")));
    }
    let lo: Vec<i64> = (0..dim).map(|a| sites.iter().map(|(k, _)| k[a]).min().unwrap()).collect();
    let hi: Vec<i64> = (0..dim).map(|a| sites.iter().map(|(k, _)| k[a]).max().unwrap()).collect();
    let domain = Rect::new(lo, hi)?;
    let mut values = vec![Rational::from_integer(0.into()); domain.len()];
    let mut filled = vec![false; domain.len()];
    for (k, v) in sites {
        let i = domain.index_of(&k).expect("inside bounding box");
        if std::mem::replace(&mut filled[i], true) {
            return Err(ConfigError::Invalid(format!("site {k:?} listed twice")));
        }
        values[i] = v;
    }
    Ok(CoefficientField::new(domain, values, delta, construction)?.with_metadata(sign, exponents, radius))
}

#[cfg(test)]
mod tests {
    use super::*;
    use wegner_core::transform::{build_monomial_coefficients, mean_window_coefficients};
    use wegner_core::{CompactPotential, DecayingPotential, SingleSitePotential};

    #[test]
    fn monomial_round_trip() {
        let v = CompactPotential::from_profile(&[1, -1]).unwrap();
        let u = CompactPotential::product(&[v.clone(), v]).unwrap();
        let field = build_monomial_coefficients(&u, 3).unwrap();
        let text = write_field(&field);
        assert!(text.contains("2 3 : 6\n"));
        assert_eq!(parse_field(&text).unwrap(), field);
    }

    #[test]
    fn window_round_trip() {
        let u: SingleSitePotential = DecayingPotential::geometric(1.0, 0.5).unwrap().into();
        let field = mean_window_coefficients(&u, 4).unwrap();
        assert_eq!(parse_field(&write_field(&field)).unwrap(), field);
    }

    #[test]
    fn sparse_sites_are_zero() {
        let text = "wegner-coefficients 1\nconstruction monomial\ndimension 1\ndelta 1/2\n0 : 1\n3 : -2/3\n";
        let field = parse_field(text).unwrap();
        assert_eq!(field.domain().len(), 4);
        assert_eq!(field.get(&[1]), Rational::from_integer(0.into()));
        assert_eq!(field.get(&[3]), parse_rational("-2/3").unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_field("construction monomial\ndimension 1\ndelta 1\n0 : 1\n").is_err());
        assert!(parse_field("wegner-coefficients 1\nconstruction monomial\ndimension 2\ndelta 1\n0 : 1\n").is_err());
        assert!(parse_field("wegner-coefficients 1\nconstruction monomial\ndimension 1\ndelta 0\n0 : 1\n").is_err());
        assert!(parse_field("wegner-coefficients 1\nconstruction x\ndimension 1\ndelta 1\n0 : 1\n").is_err());
    }
}
