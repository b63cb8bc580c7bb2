//! Complex number literals used by model and state files.
//!
//! ```text
//! complex := real | imag | real ('+' | '-') imag | [real '*'] 'exp(' ['-'] 'i' ['*' real] '*pi)'
//! imag    := [real ['*']] 'i'
//! real    := ['-'] factor ['/' factor]
//! factor  := decimal | 'sqrt(' decimal ')'
//! ```

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

fn err(text: &str) -> Error {
    Error::Parse(format!("invalid complex literal `{text}`"))
}

fn parse_factor(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        let v: f64 = inner.trim().parse().ok()?;
        return (v >= 0.0).then(|| v.sqrt());
    }
    if s.is_empty() || s.starts_with('+') || s.starts_with('-') {
        return None;
    }
    s.parse().ok()
}

/// Parses a real literal such as `0.5`, `-1/sqrt(2)` or `sqrt(5)/2`.
pub fn parse_real(text: &str) -> Option<f64> {
    let s = text.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim_start()),
        None => (1.0, s),
    };
    let value = match split_top_level(body, '/') {
        Some((num, den)) => parse_factor(num)? / parse_factor(den)?,
        None => parse_factor(body)?,
    };
    Some(sign * value)
}

fn split_top_level(s: &str, sep: char) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (idx, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => return Some((&s[..idx], &s[idx + 1..])),
            _ => {}
        }
    }
    None
}

fn parse_exp(s: &str) -> Option<C64> {
    let inner = s.strip_prefix("exp(")?.strip_suffix(')')?.trim();
    let (sign, rest) = match inner.strip_prefix('-') {
        Some(r) => (-1.0, r.trim_start()),
        None => (1.0, inner),
    };
    let rest = rest.strip_prefix('i')?.trim_start();
    let rest = rest.strip_suffix("pi")?.trim_end();
    let coeff = if rest.is_empty() || rest == "*" {
        1.0
    } else {
        let body = rest.strip_prefix('*')?.trim();
        let body = body.strip_suffix('*')?.trim();
        parse_real(body)?
    };
    Some(C64::from_polar(1.0, sign * coeff * PI))
}

fn parse_imag(s: &str) -> Option<f64> {
    let body = s.trim().strip_suffix('i')?.trim_end();
    let body = body.strip_suffix('*').map(str::trim_end).unwrap_or(body);
    let body = body.strip_prefix('+').map(str::trim_start).unwrap_or(body);
    match body {
        "" => Some(1.0),
        "-" => Some(-1.0),
        _ => parse_real(body),
    }
}

/// Parses a complex literal; see the module docs for the grammar.
pub fn parse_complex(text: &str) -> Result<C64> {
    let s = text.trim();
    if s.is_empty() {
        return Err(err(text));
    }
    if let Some(pos) = s.find("exp(") {
        let prefix = s[..pos].trim_end();
        let unit = parse_exp(&s[pos..]).ok_or_else(|| err(text))?;
        if prefix.is_empty() {
            return Ok(unit);
        }
        if prefix == "-" {
            return Ok(-unit);
        }
        let scale = prefix.strip_suffix('*').ok_or_else(|| err(text))?;
        return Ok(unit * parse_real(scale).ok_or_else(|| err(text))?);
    }
    if !s.ends_with('i') {
        return parse_real(s).map(|re| C64::new(re, 0.0)).ok_or_else(|| err(text));
    }
    // Split at the last top-level sign that is not part of an exponent.
    let bytes = s.as_bytes();
    let mut split = None;
    let mut depth = 0i32;
    for idx in (1..bytes.len()).rev() {
        match bytes[idx] {
            b')' => depth += 1,
            b'(' => depth -= 1,
            b'+' | b'-' if depth == 0 && !matches!(bytes[idx - 1], b'e' | b'E') => {
                split = Some(idx);
                break;
            }
            _ => {}
        }
    }
    match split {
        Some(idx) => {
            let re = parse_real(&s[..idx]).ok_or_else(|| err(text))?;
            let im = parse_imag(&s[idx..]).ok_or_else(|| err(text))?;
            Ok(C64::new(re, im))
        }
        None => parse_imag(s).map(|im| C64::new(0.0, im)).ok_or_else(|| err(text)),
    }
}

/// Formats a complex number as `re+im i` with shortest round-trip decimals.
pub fn format_complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{} i", z.re, sign, z.im.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-15
    }

    #[test]
    fn real_forms() {
        assert!(close(parse_complex("0.5").unwrap(), C64::new(0.5, 0.0)));
        assert!(close(parse_complex("-1/sqrt(2)").unwrap(), C64::new(-0.5f64.sqrt(), 0.0)));
        assert!(close(parse_complex("sqrt(5)/2").unwrap(), C64::new(5f64.sqrt() / 2.0, 0.0)));
    }

    #[test]
    fn cartesian_forms() {
        assert!(close(parse_complex("1+2 i").unwrap(), C64::new(1.0, 2.0)));
        assert!(close(parse_complex("1.5e-3-2.5e2 i").unwrap(), C64::new(1.5e-3, -250.0)));
        assert!(close(parse_complex("-i").unwrap(), C64::new(0.0, -1.0)));
        assert!(close(parse_complex("0.25 i").unwrap(), C64::new(0.0, 0.25)));
    }

    #[test]
    fn polar_forms() {
        let z = parse_complex("exp(i*1/8*pi)").unwrap();
        assert!(close(z, C64::from_polar(1.0, PI / 8.0)));
        let z = parse_complex("-1*exp(-i*3/8*pi)").unwrap();
        assert!(close(z, -C64::from_polar(1.0, -3.0 * PI / 8.0)));
        assert!(close(parse_complex("exp(i*pi)").unwrap(), C64::new(-1.0, 0.0)));
    }

    #[test]
    fn format_round_trips() {
        for z in [C64::new(0.1, -0.2), C64::new(-1e-300, 3.0), C64::new(1.0 / 3.0, 2f64.sqrt())] {
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_complex("").is_err());
        assert!(parse_complex("exp(2*pi)").is_err());
        assert!(parse_complex("1+").is_err());
    }
}
