// SPDX-License-Identifier: Apache-2.0

//! Flat `name = value` configuration for [`DeviceParams`].
//!
//! Values take an optional SI prefix and unit: `delta_v = 50mV`,
//! `r_p = 12kOhm`, `i_c = 1.4uA`, `tmr = 300%`. Absent keys keep their
//! defaults; unknown or repeated keys are rejected.

use std::collections::HashSet;
use std::path::Path;

use thiserror::Error;

use crate::device::{DeviceError, DeviceParams};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `name = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: `{key}` set twice")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: cannot read `{value}` as a value in {unit}")]
    BadValue {
        line: usize,
        value: String,
        unit: &'static str,
    },
    #[error(transparent)]
    Invalid(#[from] DeviceError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

type Field = fn(&mut DeviceParams) -> &mut f64;

// key, unit symbol ("" for dimensionless), field accessor
const KEYS: [(&str, &str, Field); 17] = [
    ("delta_v", "V", |p| &mut p.delta_v),
    ("r_p", "Ohm", |p| &mut p.r_p),
    ("tmr", "", |p| &mut p.tmr),
    ("i_c", "A", |p| &mut p.i_c),
    ("t_sw", "s", |p| &mut p.t_sw),
    ("t_clk", "s", |p| &mut p.t_clk),
    ("vdd", "V", |p| &mut p.vdd),
    ("p_div", "W", |p| &mut p.p_div),
    ("c_wire", "F", |p| &mut p.c_wire),
    ("r_wire", "Ohm", |p| &mut p.r_wire),
    ("r_on", "Ohm", |p| &mut p.r_on),
    ("r_off", "Ohm", |p| &mut p.r_off),
    ("sigma_r", "", |p| &mut p.sigma_r),
    ("rho", "", |p| &mut p.rho),
    ("activity", "", |p| &mut p.activity),
    ("max_length", "m", |p| &mut p.max_length),
    ("pitch", "m", |p| &mut p.pitch),
];

impl DeviceParams {
    /// Parses a config file body on top of the defaults and validates it.
    pub fn from_config_str(text: &str) -> Result<Self, ConfigError> {
        let mut params = DeviceParams::default();
        let mut seen = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap().trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body.split_once('=').ok_or(ConfigError::Syntax { line })?;
            let (key, value) = (key.trim(), value.trim());
            let &(_, unit, field) = KEYS
                .iter()
                .find(|(k, _, _)| *k == key)
                .ok_or_else(|| ConfigError::UnknownKey {
                    line,
                    key: key.to_owned(),
                })?;
            if !seen.insert(key) {
                return Err(ConfigError::DuplicateKey {
                    line,
                    key: key.to_owned(),
                });
            }
            *field(&mut params) = parse_quantity(value, unit).ok_or_else(|| ConfigError::BadValue {
                line,
                value: value.to_owned(),
                unit: if unit.is_empty() { "dimensionless units" } else { unit },
            })?;
        }
        params.validate()?;
        Ok(params)
    }

    pub fn from_config_file(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_config_str(&text)
    }
}

/// Decimal exponent of an SI prefix.
fn prefix_exponent(c: char) -> Option<i32> {
    Some(match c {
        'f' => -15,
        'p' => -12,
        'n' => -9,
        'u' | 'µ' | 'μ' => -6,
        'm' => -3,
        'k' => 3,
        'M' => 6,
        'G' => 9,
        _ => return None,
    })
}

fn unit_matches(s: &str, unit: &str) -> bool {
    s.is_empty()
        || s == unit
        || (unit == "Ohm" && (s == "Ω" || s.eq_ignore_ascii_case("ohm")))
}

/// Parses `<number>[prefix][unit]`, or `<number>%` for dimensionless keys.
pub fn parse_quantity(s: &str, unit: &str) -> Option<f64> {
    let split = s
        .char_indices()
        .find(|&(i, c)| {
            !(c.is_ascii_digit()
                || c == '.'
                || ((c == '+' || c == '-') && (i == 0 || s[..i].ends_with(['e', 'E'])))
                || ((c == 'e' || c == 'E')
                    && s[i + 1..].starts_with(|d: char| d.is_ascii_digit() || d == '-' || d == '+')))
        })
        .map_or(s.len(), |(i, _)| i);
    let number: f64 = s[..split].parse().ok()?;
    let rest = s[split..].trim();
    if unit.is_empty() {
        return match rest {
            "" => Some(number),
            "%" => Some(number / 100.0),
            _ => None,
        };
    }
    if unit_matches(rest, unit) {
        return Some(number);
    }
    let mut chars = rest.chars();
    let exp = prefix_exponent(chars.next()?)?;
    // Dividing by an exact power of ten keeps `50m` equal to the literal `50e-3`.
    let scaled = if exp < 0 { number / 10f64.powi(-exp) } else { number * 10f64.powi(exp) };
    unit_matches(chars.as_str(), unit).then_some(scaled)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantities() {
        assert_eq!(parse_quantity("50mV", "V"), Some(50e-3));
        assert_eq!(parse_quantity("12k", "Ohm"), Some(12e3));
        assert_eq!(parse_quantity("12kOhm", "Ohm"), Some(12e3));
        assert_eq!(parse_quantity("1MΩ", "Ohm"), Some(1e6));
        assert_eq!(parse_quantity("1.4uA", "A"), Some(1.4e-6));
        assert_eq!(parse_quantity("1.4µA", "A"), Some(1.4e-6));
        assert_eq!(parse_quantity("2e-9", "s"), Some(2e-9));
        assert_eq!(parse_quantity("2e-9 s", "s"), Some(2e-9));
        assert_eq!(parse_quantity("300%", ""), Some(3.0));
        assert_eq!(parse_quantity("50um", "m"), Some(50e-6));
        assert_eq!(parse_quantity("1m", "m"), Some(1.0));
        assert_eq!(parse_quantity("5mm", "m"), Some(5e-3));
        assert_eq!(parse_quantity("50mA", "V"), None);
        assert_eq!(parse_quantity("abc", "V"), None);
        assert_eq!(parse_quantity("3x", ""), None);
    }

    #[test]
    fn config_overrides_defaults() {
        let p = DeviceParams::from_config_str("# raised threshold\ni_c = 2uA\ndelta_v = 50mV\n\n").unwrap();
        assert_eq!(p.i_c, 2e-6);
        assert_eq!(p.r_p, DeviceParams::default().r_p);
    }

    #[test]
    fn config_errors() {
        assert!(matches!(
            DeviceParams::from_config_str("bogus = 1"),
            Err(ConfigError::UnknownKey { line: 1, .. })
        ));
        assert!(matches!(
            DeviceParams::from_config_str("tmr = 3\ntmr = 2"),
            Err(ConfigError::DuplicateKey { line: 2, .. })
        ));
        assert!(matches!(
            DeviceParams::from_config_str("delta_v 50mV"),
            Err(ConfigError::Syntax { line: 1 })
        ));
        assert!(matches!(
            DeviceParams::from_config_str("rho = 1.5"),
            Err(ConfigError::Invalid(_))
        ));
        assert!(matches!(
            DeviceParams::from_config_str("r_p = 12kV"),
            Err(ConfigError::BadValue { line: 1, .. })
        ));
    }
}
