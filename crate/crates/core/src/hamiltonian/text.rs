//! Line format `j n kind coeff`, one term per line.
//!
//! `kind` is `c`, `s` or `1` (cosine, sine, constant with `n = 0`). `#` starts
//! a comment. The pragma `#@ order J` fixes the truncation order; without it
//! the order is the largest `j` present.

use std::fmt::Write as _;

use thiserror::Error;

use super::HalfPowerSeries;
use crate::trigpoly::TrigPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self { line, column, message: message.into() }
    }
}

/// Whitespace-separated tokens of a line with 1-based start columns, up to
/// any `#`.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &body[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &body[s..]));
    }
    out
}

pub(crate) fn field<T: std::str::FromStr>(
    line: usize,
    (col, tok): (usize, &str),
    what: &str,
) -> Result<T, ParseError> {
    tok.parse().map_err(|_| ParseError::new(line, col, format!("invalid {what} `{tok}`")))
}

pub(crate) fn real(line: usize, t: (usize, &str), what: &str) -> Result<f64, ParseError> {
    let v: f64 = field(line, t, what)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ParseError::new(line, t.0, format!("non-finite {what}")))
    }
}

fn pragma_order(line: usize, raw: &str) -> Result<Option<u32>, ParseError> {
    let Some(rest) = raw.trim_start().strip_prefix("#@") else { return Ok(None) };
    let offset = raw.len() - rest.len();
    let toks: Vec<_> = tokens(rest).into_iter().map(|(c, t)| (c + offset, t)).collect();
    match toks.as_slice() {
        [(_, "order"), j] => Ok(Some(field(line, *j, "order")?)),
        [(c, _), ..] => Err(ParseError::new(line, *c, "unknown pragma")),
        [] => Err(ParseError::new(line, offset + 1, "empty pragma")),
    }
}

pub(crate) fn parse(src: &str) -> Result<HalfPowerSeries, ParseError> {
    let mut order = None;
    let mut terms: Vec<(usize, u32, TrigPoly)> = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let ln = idx + 1;
        if let Some(j) = pragma_order(ln, raw)? {
            order = Some(j);
            continue;
        }
        let toks = tokens(raw);
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 4 {
            let col = toks.get(4).map_or(raw.len() + 1, |t| t.0);
            return Err(ParseError::new(ln, col, format!("expected 4 fields `j n kind coeff`, found {}", toks.len())));
        }
        let j: u32 = field(ln, toks[0], "half-index")?;
        if j < 2 {
            return Err(ParseError::new(ln, toks[0].0, "half-index must be at least 2"));
        }
        let n: usize = field(ln, toks[1], "harmonic")?;
        let c = real(ln, toks[3], "coefficient")?;
        let p = match toks[2].1 {
            "c" | "s" if n == 0 => {
                return Err(ParseError::new(ln, toks[1].0, "harmonic must be positive for c/s terms"))
            }
            "c" => TrigPoly::cos_term(n, c),
            "s" => TrigPoly::sin_term(n, c),
            "1" if n != 0 => return Err(ParseError::new(ln, toks[1].0, "constant term must have n = 0")),
            "1" => TrigPoly::constant(c),
            other => return Err(ParseError::new(ln, toks[2].0, format!("unknown kind `{other}`, expected c, s or 1"))),
        };
        terms.push((ln, j, p));
    }
    let top = terms.iter().map(|t| t.1).max().unwrap_or(2);
    let order = order.unwrap_or(top);
    let mut h = HalfPowerSeries::new(order);
    for (ln, j, p) in terms {
        h.add_term(j, &p)
            .map_err(|_| ParseError::new(ln, 1, format!("half-index {j} exceeds declared order {order}")))?;
    }
    Ok(h)
}

pub(crate) fn write(h: &HalfPowerSeries) -> String {
    let mut out = String::new();
    writeln!(out, "#@ order {}", h.order()).unwrap();
    for (j, p) in h.terms() {
        if p.a0() != 0.0 {
            writeln!(out, "{j} 0 1 {:?}", p.a0()).unwrap();
        }
        for (n, c, s) in p.harmonics() {
            if c != 0.0 {
                writeln!(out, "{j} {n} c {c:?}").unwrap();
            }
            if s != 0.0 {
                writeln!(out, "{j} {n} s {s:?}").unwrap();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_intro_example() {
        let h = parse("# intro\n4 0 1 1\n4 1 s 1.0   # sin\n\n6 0 1 -1\n").unwrap();
        assert_eq!(h.order(), 6);
        assert_eq!(h.term(4).unwrap(), &TrigPoly::new(1.0, &[], &[1.0]));
        assert_eq!(h.term(6).unwrap(), &TrigPoly::constant(-1.0));
    }

    #[test]
    fn repeated_lines_accumulate() {
        let h = parse("4 4 c -1\n4 4 c -1\n4 0 1 2").unwrap();
        assert_eq!(h.term(4).unwrap().cos_coeff(4), -2.0);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("4 0 1 1\n5 2 x 3").unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));
        let e = parse("  4 0 1 abc").unwrap_err();
        assert_eq!((e.line, e.column), (1, 9));
        let e = parse("1 0 1 1").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        let e = parse("4 0 1").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse("#@ order 4\n6 0 1 1").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse("4 0 c 1").unwrap_err();
        assert_eq!(e.column, 3);
    }

    #[test]
    fn roundtrip_is_exact() {
        let h = parse("#@ order 9\n4 4 c -1\n4 0 1 1\n6 3 s 0.1\n6 0 1 -0.30000000000000004\n").unwrap();
        let back = parse(&write(&h)).unwrap();
        assert_eq!(back, h);
        assert_eq!(back.order(), 9);
    }
}
