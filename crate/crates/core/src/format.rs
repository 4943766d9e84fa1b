//! Text formats for spaces and maps.
//!
//! Space files:
//!
//! ```text
//! points: 3
//! labels: a b c
//! matrix:
//! 0 2 6
//! 2 0 1
//! 6 1 0
//! ```
//!
//! `labels:` is optional. Map sections start with `map:` followed by one
//! `<point> -> <target> <target> ...` line per point. Blank lines and
//! lines starting with `#` are ignored everywhere.

use std::collections::BTreeSet;
use std::fmt::Write;

use thiserror::Error;

use crate::fixed_point::{FixedPointError, SetValuedMap};
use crate::rational::Rational;
use crate::space::{validate_space, FiniteSpace, InvalidSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unexpected end of input: {0}")]
    Truncated(String),
    #[error(transparent)]
    Invalid(#[from] InvalidSpace),
    #[error(transparent)]
    Map(#[from] FixedPointError),
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn keyed<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    line.strip_prefix(key)
        .and_then(|rest| rest.trim_start().strip_prefix(':'))
        .map(str::trim)
}

/// Parses a space file. Content after the matrix is only allowed inside a
/// trailing `map:` section.
pub fn parse_space(text: &str) -> Result<FiniteSpace, FormatError> {
    let mut lines = content_lines(text).peekable();

    let (line_no, first) = lines
        .next()
        .ok_or_else(|| FormatError::Truncated("missing `points:` line".into()))?;
    let n: usize = keyed(first, "points")
        .ok_or_else(|| parse_err(line_no, "expected `points: <n>`"))?
        .parse()
        .map_err(|_| parse_err(line_no, "point count must be a non-negative integer"))?;

    let mut labels = None;
    if let Some(rest) = lines.peek().and_then(|&(_, l)| keyed(l, "labels")) {
        labels = Some(
            rest.split_whitespace()
                .map(String::from)
                .collect::<Vec<_>>(),
        );
        lines.next();
    }

    let (line_no, header) = lines
        .next()
        .ok_or_else(|| FormatError::Truncated("missing `matrix:` line".into()))?;
    if keyed(header, "matrix") != Some("") {
        return Err(parse_err(line_no, "expected `matrix:`"));
    }

    let mut matrix = Vec::with_capacity(n);
    for row in 0..n {
        let (line_no, l) = lines.next().ok_or_else(|| {
            FormatError::Truncated(format!("matrix has {row} rows, expected {n}"))
        })?;
        let entries = l
            .split_whitespace()
            .map(|tok| {
                tok.parse::<Rational>()
                    .map_err(|e| parse_err(line_no, e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        matrix.push(entries);
    }

    if let Some((line_no, l)) = lines.next() {
        if keyed(l, "map") != Some("") {
            return Err(parse_err(
                line_no,
                format!("unexpected content after matrix: `{l}`"),
            ));
        }
    }

    Ok(validate_space(labels, matrix)?)
}

/// Renders a space in the file format, rationals in lowest terms.
pub fn write_space(space: &FiniteSpace) -> String {
    let mut out = String::new();
    writeln!(out, "points: {}", space.len()).unwrap();
    writeln!(out, "labels: {}", space.labels().join(" ")).unwrap();
    writeln!(out, "matrix:").unwrap();
    for row in space.matrix() {
        let cells: Vec<String> = row.iter().map(Rational::to_string).collect();
        writeln!(out, "{}", cells.join(" ")).unwrap();
    }
    out
}

fn point_index(space: &FiniteSpace, label: &str, line: usize) -> Result<usize, FormatError> {
    space
        .index_of(label)
        .ok_or_else(|| parse_err(line, format!("unknown point `{label}`")))
}

/// Parses the `map:` section of `text` against the labels of `space`.
/// Every point must appear exactly once on the left of an arrow.
pub fn parse_map(text: &str, space: &FiniteSpace) -> Result<SetValuedMap, FormatError> {
    let mut lines = content_lines(text).skip_while(|(_, l)| keyed(l, "map") != Some(""));
    if lines.next().is_none() {
        return Err(FormatError::Truncated("missing `map:` section".into()));
    }

    let mut targets: Vec<Option<BTreeSet<usize>>> = vec![None; space.len()];
    for (line_no, l) in lines {
        let Some((lhs, rhs)) = l.split_once("->") else {
            // A line without an arrow ends the section.
            break;
        };
        let point = point_index(space, lhs.trim(), line_no)?;
        let image = rhs
            .split_whitespace()
            .map(|t| point_index(space, t, line_no))
            .collect::<Result<BTreeSet<_>, _>>()?;
        if image.is_empty() {
            return Err(parse_err(
                line_no,
                format!("point `{}` has an empty target list", lhs.trim()),
            ));
        }
        if targets[point].replace(image).is_some() {
            return Err(parse_err(
                line_no,
                format!("point `{}` mapped twice", lhs.trim()),
            ));
        }
    }

    let targets = targets
        .into_iter()
        .enumerate()
        .map(|(p, t)| {
            t.ok_or_else(|| {
                FormatError::Truncated(format!("no image given for point `{}`", space.label(p)))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SetValuedMap::new(targets, space.len())?)
}

pub fn write_map(space: &FiniteSpace, map: &SetValuedMap) -> String {
    let mut out = String::from("map:\n");
    for (p, image) in map.targets().iter().enumerate() {
        let names: Vec<&str> = image.iter().map(|&t| space.label(t)).collect();
        writeln!(out, "{} -> {}", space.label(p), names.join(" ")).unwrap();
    }
    out
}
