//! The text ideal format and the partition JSON certificate format.
//!
//! An ideal file is line-oriented: `#` starts a comment, blank lines are
//! skipped, the first significant line is `vars: <n>`, then a `gens:` line,
//! then one monomial per line such as `x1*x3^2`. Indices are 1-based.

use std::fmt::Write as _;

use thiserror::Error;

use crate::ideal::{IdealError, MonomialIdeal};
use crate::monomial::Monomial;
use crate::partition::IntervalPartition;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}, col {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error("partition JSON: {0}")]
    Json(String),
}

impl FormatError {
    fn at(line: usize, col: usize, msg: impl Into<String>) -> Self {
        FormatError::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }
}

/// A parsed ideal together with non-fatal notes (redundant generators are
/// dropped by minimalization, not errors).
#[derive(Clone, Debug)]
pub struct ParsedIdeal {
    pub ideal: MonomialIdeal,
    pub warnings: Vec<String>,
}

/// Parses the text ideal format. Errors carry 1-based line and column.
pub fn parse_ideal(input: &str) -> Result<ParsedIdeal, FormatError> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, raw.trim()))
        .filter(|(_, s)| !s.is_empty() && !s.starts_with('#'));
    let mut last_line = 0usize;

    let Some((line, header)) = lines.next() else {
        return Err(FormatError::at(1, 1, "empty input: expected `vars: <n>`"));
    };
    last_line = last_line.max(line);
    let Some(rest) = header.strip_prefix("vars:") else {
        return Err(FormatError::at(
            line,
            1,
            format!("expected `vars: <n>`, found `{header}`"),
        ));
    };
    let num_vars: usize = rest.trim().parse().map_err(|_| {
        FormatError::at(line, header.len() - rest.len() + 1, "invalid variable count")
    })?;
    if num_vars == 0 {
        return Err(FormatError::at(line, 1, "need at least one variable"));
    }

    let Some((line, gens_line)) = lines.next() else {
        return Err(FormatError::at(last_line, 1, "missing `gens:` line"));
    };
    last_line = last_line.max(line);
    if gens_line != "gens:" {
        return Err(FormatError::at(
            line,
            1,
            format!("expected `gens:`, found `{gens_line}`"),
        ));
    }

    let mut gens = Vec::new();
    for (line, text) in lines {
        last_line = last_line.max(line);
        gens.push(parse_monomial(text, num_vars, line)?);
    }
    if gens.is_empty() {
        return Err(FormatError::at(
            last_line,
            1,
            "no generators: expected at least one monomial line",
        ));
    }

    let parsed = gens.len();
    let ideal = MonomialIdeal::new(num_vars, gens)?;
    let mut warnings = Vec::new();
    if ideal.gens().len() < parsed {
        warnings.push(format!(
            "{} of {} generators were redundant and dropped",
            parsed - ideal.gens().len(),
            parsed
        ));
    }
    Ok(ParsedIdeal { ideal, warnings })
}

/// Parses one monomial line: `x<i>` factors with optional `^<e>`, joined by
/// `*`. Repeating a variable accumulates its exponent.
fn parse_monomial(text: &str, num_vars: usize, line: usize) -> Result<Monomial, FormatError> {
    let bytes = text.as_bytes();
    let mut exps = vec![0u32; num_vars];
    let mut pos = 0usize;
    loop {
        // One factor: 'x', an index, optionally '^' and an exponent.
        if pos >= bytes.len() || bytes[pos] != b'x' {
            return Err(FormatError::at(
                line,
                pos + 1,
                "expected a factor like `x3` or `x3^2`",
            ));
        }
        pos += 1;
        let (index, width) = parse_number(bytes, pos)
            .ok_or_else(|| FormatError::at(line, pos + 1, "expected a variable index after `x`"))?;
        pos += width;
        if index == 0 || index as usize > num_vars {
            return Err(FormatError::at(
                line,
                pos - width + 1,
                format!("variable x{index} out of range 1..={num_vars}"),
            ));
        }
        let mut exp = 1u32;
        if pos < bytes.len() && bytes[pos] == b'^' {
            pos += 1;
            let (e, width) = parse_number(bytes, pos)
                .ok_or_else(|| FormatError::at(line, pos + 1, "expected an exponent after `^`"))?;
            pos += width;
            if e == 0 {
                return Err(FormatError::at(
                    line,
                    pos - width + 1,
                    "exponent must be at least 1",
                ));
            }
            exp = e;
        }
        let slot = &mut exps[index as usize - 1];
        *slot = slot.checked_add(exp).ok_or_else(|| {
            FormatError::at(line, pos, format!("exponent overflow at x{index}"))
        })?;
        if pos == bytes.len() {
            break;
        }
        if bytes[pos] != b'*' {
            return Err(FormatError::at(
                line,
                pos + 1,
                format!("expected `*` or end of line, found `{}`", text[pos..].chars().next().unwrap()),
            ));
        }
        pos += 1;
    }
    Ok(Monomial::new(exps))
}

/// Reads digits at `pos`, returning the value and how many bytes it used.
fn parse_number(bytes: &[u8], pos: usize) -> Option<(u32, usize)> {
    let end = bytes[pos.min(bytes.len())..]
        .iter()
        .position(|b| !b.is_ascii_digit())
        .map(|off| pos + off)
        .unwrap_or(bytes.len());
    if end == pos {
        return None;
    }
    let s = std::str::from_utf8(&bytes[pos..end]).ok()?;
    let v = s.parse().ok()?;
    Some((v, end - pos))
}

/// Writes the canonical text form: header, `gens:`, one minimal generator
/// per line in the canonical order. `parse_ideal` round-trips it.
pub fn write_ideal(ideal: &MonomialIdeal) -> String {
    let mut out = format!("vars: {}\ngens:\n", ideal.num_vars());
    for g in ideal.gens() {
        let mut first = true;
        for j in g.support() {
            if !first {
                out.push('*');
            }
            first = false;
            let e = g.exponent(j);
            if e == 1 {
                let _ = write!(out, "x{}", j + 1);
            } else {
                let _ = write!(out, "x{}^{}", j + 1, e);
            }
        }
        out.push('\n');
    }
    out
}

/// Serializes a partition as `{"intervals":[{"from":[...],"to":[...]},…]}`.
pub fn partition_to_json(partition: &IntervalPartition) -> String {
    serde_json::to_string_pretty(partition).expect("partition serialization cannot fail")
}

pub fn partition_from_json(input: &str) -> Result<IntervalPartition, FormatError> {
    serde_json::from_str(input).map_err(|e| FormatError::Json(e.to_string()))
}
