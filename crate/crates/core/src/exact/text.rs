//! Text forms used by the JSON interfaces.
//!
//! Polynomials print as `3/8*s^2 - 2*s + 1` (non-rational coefficients in
//! parentheses); rational functions as `(num)/(den)`. The parsers accept
//! exactly what the printers emit, with any single identifier as variable.

use std::str::FromStr;

use super::{ExactError, Field, Polynomial, QPoly, Rational, RationalFunction};

fn split_terms(s: &str) -> Result<Vec<(bool, String)>, ExactError> {
    let mut terms = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    let mut negative = false;
    for c in s.chars() {
        match c {
            '(' => {
                depth += 1;
                current.push(c);
            }
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(ExactError::Parse(format!("unbalanced parentheses in {s:?}")));
                }
                current.push(c);
            }
            '+' | '-' if depth == 0 => {
                if current.trim().is_empty() {
                    if c == '-' {
                        negative = !negative;
                    }
                } else {
                    terms.push((negative, std::mem::take(&mut current)));
                    negative = c == '-';
                }
            }
            _ => current.push(c),
        }
    }
    if depth != 0 {
        return Err(ExactError::Parse(format!("unbalanced parentheses in {s:?}")));
    }
    if current.trim().is_empty() {
        return Err(ExactError::Parse(format!("dangling sign in {s:?}")));
    }
    terms.push((negative, current));
    Ok(terms)
}

fn parse_monomial(s: &str, var: &mut Option<String>) -> Result<usize, ExactError> {
    let (name, exp) = match s.split_once('^') {
        Some((n, e)) => {
            let e: usize = e.trim().parse().map_err(|_| ExactError::Parse(format!("bad exponent in {s:?}")))?;
            (n.trim(), e)
        }
        None => (s.trim(), 1),
    };
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphabetic() || c == '_') {
        return Err(ExactError::Parse(format!("bad variable in {s:?}")));
    }
    match var {
        Some(v) if v != name => Err(ExactError::Parse(format!("mixed variables {v:?} and {name:?}"))),
        Some(_) => Ok(exp),
        None => {
            *var = Some(name.to_string());
            Ok(exp)
        }
    }
}

/// Parses a univariate polynomial; returns it with the variable name seen
/// (if any).
pub fn parse_polynomial<K>(s: &str) -> Result<(Polynomial<K>, Option<String>), ExactError>
where
    K: Field + FromStr<Err = ExactError>,
{
    let s = s.trim();
    if s.is_empty() {
        return Err(ExactError::Parse("empty polynomial".into()));
    }
    let mut var = None;
    let mut coeffs: Vec<K> = Vec::new();
    for (negative, term) in split_terms(s)? {
        let term = term.trim();
        let (coef, mono) = if let Some(rest) = term.strip_prefix('(') {
            let mut depth = 1;
            let close = rest
                .char_indices()
                .find(|&(_, c)| {
                    depth += match c {
                        '(' => 1,
                        ')' => -1,
                        _ => 0,
                    };
                    depth == 0
                })
                .map(|(i, _)| i)
                .ok_or_else(|| ExactError::Parse(format!("unbalanced term {term:?}")))?;
            let coef: K = rest[..close].parse()?;
            let tail = rest[close + 1..].trim();
            let mono = match tail.strip_prefix('*') {
                Some(m) => Some(m),
                None if tail.is_empty() => None,
                None => return Err(ExactError::Parse(format!("bad term {term:?}"))),
            };
            (coef, mono)
        } else if let Some((c, m)) = term.split_once('*') {
            (c.trim().parse::<K>()?, Some(m))
        } else if term.starts_with(|c: char| c.is_ascii_alphabetic()) {
            (K::one(), Some(term))
        } else {
            (term.parse::<K>()?, None)
        };
        let k = match mono {
            Some(m) => parse_monomial(m, &mut var)?,
            None => 0,
        };
        if coeffs.len() <= k {
            coeffs.resize(k + 1, K::zero());
        }
        let coef = if negative { -coef } else { coef };
        coeffs[k] = coeffs[k].clone() + coef;
    }
    Ok((Polynomial::new(coeffs), var))
}

/// Parses `(num)/(den)` or a bare polynomial.
pub fn parse_rational_function<K>(s: &str) -> Result<RationalFunction<K>, ExactError>
where
    K: Field + FromStr<Err = ExactError>,
{
    let s = s.trim();
    if let Some(rest) = s.strip_prefix('(') {
        let mut depth = 1;
        let close = rest.char_indices().find(|&(_, c)| {
            depth += match c {
                '(' => 1,
                ')' => -1,
                _ => 0,
            };
            depth == 0
        });
        if let Some((i, _)) = close {
            if let Some(den) = rest[i + 1..].trim_start().strip_prefix('/') {
                let den = den.trim();
                let den = den
                    .strip_prefix('(')
                    .and_then(|d| d.strip_suffix(')'))
                    .ok_or_else(|| ExactError::Parse(format!("denominator must be parenthesized: {s:?}")))?;
                let (n, v1) = parse_polynomial::<K>(&rest[..i])?;
                let (d, v2) = parse_polynomial::<K>(den)?;
                if let (Some(a), Some(b)) = (&v1, &v2) {
                    if a != b {
                        return Err(ExactError::Parse(format!("mixed variables in {s:?}")));
                    }
                }
                return RationalFunction::new(n, d).ok_or_else(|| ExactError::Parse(format!("zero denominator in {s:?}")));
            }
        }
    }
    let (p, _) = parse_polynomial::<K>(s)?;
    Ok(RationalFunction::from_poly(p))
}

/// Serde adapter: a rational polynomial as a JSON array of coefficient
/// strings in ascending degree.
pub mod rational_poly_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::{QPoly, Rational};

    pub fn serialize<S: Serializer>(p: &QPoly, serializer: S) -> Result<S::Ok, S::Error> {
        p.coeffs().serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<QPoly, D::Error> {
        let cs = Vec::<Rational>::deserialize(deserializer)?;
        Ok(QPoly::new(cs))
    }
}
