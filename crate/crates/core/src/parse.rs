//! Text format for constraint systems.
//!
//! One constraint per line; `#` starts a comment. Each side of `<=` / `>=`
//! is a signed sum of variables `xK` and rational literals (`3`, `-3/2`,
//! `0.25`). After moving everything to one side, at most two positive and
//! two negative variable occurrences may remain.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::bound::Bound;
use crate::constraint::{Constraint4, NormalVector, Quad};
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Scalar};

/// A parsed system: the constraints plus the number of (non-`x0`) variables.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSystem<T> {
    pub n: usize,
    pub constraints: Vec<Constraint4<T>>,
}

#[derive(Default)]
struct Linear {
    coeffs: BTreeMap<usize, i64>,
    constant: BigRational,
}

/// Parses a single constraint over variables `x1..xn`.
pub fn parse_atomic<T: Scalar>(text: &str, n: usize) -> Result<Constraint4<T>> {
    parse_line(text, 1, Some(n))
}

/// Parses a whole file. `n` is the largest variable index mentioned (at
/// least 1).
pub fn parse_system<T: Scalar>(source: &str) -> Result<ConstraintSystem<T>> {
    let mut constraints = Vec::new();
    let mut n = 1;
    for (idx, raw) in source.lines().enumerate() {
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let c: Constraint4<T> = parse_line(line, idx + 1, None)?;
        n = n.max(c.quad.max_index());
        constraints.push(c);
    }
    Ok(ConstraintSystem { n, constraints })
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(code, _)| code)
}

fn parse_line<T: Scalar>(text: &str, line: usize, n: Option<usize>) -> Result<Constraint4<T>> {
    let text = strip_comment(text);
    let syntax = |message: &str| Error::Syntax {
        line,
        message: message.to_string(),
    };

    let (lhs, rhs, flip) =
        split_relation(text).ok_or_else(|| syntax("expected exactly one `<=` or `>=`"))?;
    let lhs = parse_linear(lhs, line)?;
    let rhs = parse_linear(rhs, line)?;

    // lhs <= rhs  <=>  (lhs.vars - rhs.vars) <= rhs.const - lhs.const
    let mut coeffs = lhs.coeffs;
    for (k, c) in rhs.coeffs {
        *coeffs.entry(k).or_insert(0) -= c;
    }
    let mut bound = rhs.constant - lhs.constant;
    if flip {
        coeffs.values_mut().for_each(|c| *c = -*c);
        bound = -bound;
    }

    let max_index = coeffs
        .iter()
        .filter(|(_, &c)| c != 0)
        .map(|(&k, _)| k)
        .max()
        .unwrap_or(0);
    if let Some(n) = n {
        if max_index > n {
            return Err(Error::IndexOutOfRange {
                line,
                index: max_index,
                n,
            });
        }
    }
    let mut vector = NormalVector::zeros(max_index + 1);
    for (k, c) in coeffs {
        if k > 0 && c != 0 {
            vector.0[k] = c;
        }
    }
    let positive = vector.positive_mass();
    let negative = vector.negative_mass();
    let quad = Quad::from_vector(&vector).ok_or(Error::TooManyOccurrences {
        line,
        positive,
        negative,
    })?;
    let bound = T::from_rational(&bound).ok_or_else(|| Error::NonRationalBound {
        line,
        literal: bound.to_string(),
    })?;
    Ok(Constraint4 {
        quad,
        bound: Bound::Finite(bound),
    })
}

/// Splits at the single relation symbol. Returns `(lhs, rhs, is_geq)`.
fn split_relation(text: &str) -> Option<(&str, &str, bool)> {
    let mut found = None;
    for (sym, geq) in [("<=", false), (">=", true), ("≤", false), ("≥", true)] {
        let mut parts = text.split(sym);
        let first = parts.next()?;
        if let Some(second) = parts.next() {
            if parts.next().is_some() || found.is_some() {
                return None;
            }
            found = Some((first, second, geq));
        }
    }
    found
}

fn parse_linear(text: &str, line: usize) -> Result<Linear> {
    let syntax = |message: String| Error::Syntax { line, message };
    let mut out = Linear {
        constant: BigRational::zero(),
        ..Default::default()
    };
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut terms = 0;
    loop {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos == bytes.len() {
            break;
        }
        let mut sign = 1i64;
        let mut saw_sign = false;
        while pos < bytes.len() && matches!(bytes[pos], b'+' | b'-' | b' ' | b'\t') {
            match bytes[pos] {
                b'-' => {
                    sign = -sign;
                    saw_sign = true;
                }
                b'+' => saw_sign = true,
                _ => {}
            }
            pos += 1;
        }
        if terms > 0 && !saw_sign {
            return Err(syntax(format!(
                "expected `+` or `-` before `{}`",
                text[pos..].trim()
            )));
        }
        let start = pos;
        while pos < bytes.len() && !matches!(bytes[pos], b'+' | b'-' | b' ' | b'\t') {
            pos += 1;
        }
        // A '-' directly after '/' belongs to the literal (e.g. `3/-2`).
        while pos < bytes.len() && bytes[pos] == b'-' && pos > start && bytes[pos - 1] == b'/' {
            pos += 1;
            while pos < bytes.len() && !matches!(bytes[pos], b'+' | b'-' | b' ' | b'\t') {
                pos += 1;
            }
        }
        let token = &text[start..pos];
        if token.is_empty() {
            return Err(syntax("dangling sign".to_string()));
        }
        terms += 1;
        if let Some(index) = variable_index(token) {
            *out.coeffs.entry(index).or_insert(0) += sign;
        } else if token.starts_with(|c: char| c.is_ascii_digit() || c == '.')
            || token.chars().all(char::is_alphanumeric)
        {
            let value = parse_rational(token).ok_or_else(|| Error::NonRationalBound {
                line,
                literal: token.to_string(),
            })?;
            out.constant += if sign < 0 { -value } else { value };
        } else {
            return Err(syntax(format!("unexpected token `{token}`")));
        }
    }
    if terms == 0 {
        return Err(syntax("empty side of relation".to_string()));
    }
    Ok(out)
}

fn variable_index(token: &str) -> Option<usize> {
    let digits = token.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}
