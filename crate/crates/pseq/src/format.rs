//! Text formats.
//!
//! A sequence file is two lines:
//!
//! ```text
//! p=3 N=8
//! 2,1,0,1,1,2,0,2
//! ```
//!
//! The header has exactly one space between its fields, the data line has
//! no spaces, and the final newline is optional. Numbers are plain decimal
//! without sign or leading zeros, so [`seq_emit`] reproduces any valid
//! input byte for byte.
//!
//! Streams (search results, families) are a one-line JSON header followed
//! by sequence records, each record preceded by a blank line.

use pseq_core::gf::{is_prime, MAX_PRIME};
use pseq_core::Sequence;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("input is not valid UTF-8")]
    NotUtf8,
    #[error("malformed header, expected `p=<prime> N=<period>`")]
    MalformedHeader,
    #[error("invalid number `{0}`")]
    InvalidNumber(String),
    #[error("p={0} is not a prime below {MAX_PRIME}")]
    NotPrime(u64),
    #[error("period must be at least 1")]
    ZeroPeriod,
    #[error("missing data line")]
    MissingData,
    #[error("entry {value} is not a residue mod {p}")]
    EntryOutOfRange { value: u64, p: u32 },
    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("unexpected content after the data line")]
    TrailingContent,
}

fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

/// Strict unsigned decimal: digits only, no leading zeros.
fn parse_decimal(s: &str) -> Option<u64> {
    let canonical =
        !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) && (s == "0" || !s.starts_with('0'));
    if canonical {
        s.parse().ok()
    } else {
        None
    }
}

fn parse_header(header: &str) -> Result<(u32, usize), ParseError> {
    let malformed = |column| err(1, column, ParseErrorKind::MalformedHeader);
    let rest = header.strip_prefix("p=").ok_or(malformed(1))?;
    let (p_text, n_part) = rest.split_once(' ').ok_or(malformed(header.len() + 1))?;
    let n_column = 3 + p_text.len() + 1;
    let n_text = n_part.strip_prefix("N=").ok_or(malformed(n_column))?;

    let p = parse_decimal(p_text)
        .ok_or_else(|| err(1, 3, ParseErrorKind::InvalidNumber(p_text.to_string())))?;
    if p >= MAX_PRIME as u64 || !is_prime(p) {
        return Err(err(1, 3, ParseErrorKind::NotPrime(p)));
    }
    let n = parse_decimal(n_text)
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| {
            err(
                1,
                n_column + 2,
                ParseErrorKind::InvalidNumber(n_text.to_string()),
            )
        })?;
    if n == 0 {
        return Err(err(1, n_column + 2, ParseErrorKind::ZeroPeriod));
    }
    Ok((p as u32, n))
}

/// Parses and validates one sequence file.
pub fn seq_parse(bytes: &[u8]) -> Result<Sequence, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let before = &bytes[..e.valid_up_to()];
        let line = 1 + before.iter().filter(|&&b| b == b'\n').count();
        let column = 1 + before.iter().rev().take_while(|&&b| b != b'\n').count();
        err(line, column, ParseErrorKind::NotUtf8)
    })?;
    seq_parse_str(text)
}

pub fn seq_parse_str(text: &str) -> Result<Sequence, ParseError> {
    let (header, body) = text
        .split_once('\n')
        .ok_or_else(|| err(2, 1, ParseErrorKind::MissingData))?;
    let (p, n) = parse_header(header)?;
    let data_line = body.strip_suffix('\n').unwrap_or(body);
    if data_line.contains('\n') {
        return Err(err(3, 1, ParseErrorKind::TrailingContent));
    }
    if data_line.is_empty() {
        return Err(err(2, 1, ParseErrorKind::MissingData));
    }

    let mut data = Vec::with_capacity(n);
    let mut column = 1;
    for token in data_line.split(',') {
        if data.len() == n {
            return Err(err(
                2,
                column,
                ParseErrorKind::LengthMismatch {
                    expected: n,
                    found: data_line.split(',').count(),
                },
            ));
        }
        let value = parse_decimal(token)
            .ok_or_else(|| err(2, column, ParseErrorKind::InvalidNumber(token.to_string())))?;
        if value >= p as u64 {
            return Err(err(2, column, ParseErrorKind::EntryOutOfRange { value, p }));
        }
        data.push(value as u32);
        column += token.len() + 1;
    }
    if data.len() != n {
        return Err(err(
            2,
            column - 1,
            ParseErrorKind::LengthMismatch {
                expected: n,
                found: data.len(),
            },
        ));
    }
    Ok(Sequence::new(p, data).expect("validated while parsing"))
}

/// Serializes a sequence, always with a trailing newline.
pub fn seq_emit(a: &Sequence) -> String {
    let mut out = format!("p={} N={}\n", a.p(), a.period());
    let mut first = true;
    for v in a.data() {
        if !first {
            out.push(',');
        }
        first = false;
        out.push_str(&v.to_string());
    }
    out.push('\n');
    out
}

/// A JSON header line followed by blank-line separated records.
pub fn emit_stream<H: Serialize>(header: &H, records: &[Sequence]) -> String {
    let mut out = serde_json::to_string(header).expect("header serializes");
    out.push('\n');
    for r in records {
        out.push('\n');
        out.push_str(&seq_emit(r));
    }
    out
}

#[derive(Debug, Error)]
pub enum StreamError {
    #[error("stream header: {0}")]
    Header(#[from] serde_json::Error),
    #[error("record {index}: {source}")]
    Record { index: usize, source: ParseError },
    #[error("stream is empty")]
    Empty,
}

/// Inverse of [`emit_stream`].
pub fn parse_stream(text: &str) -> Result<(serde_json::Value, Vec<Sequence>), StreamError> {
    let (header, rest) = match text.split_once('\n') {
        Some(parts) => parts,
        None if !text.is_empty() => (text, ""),
        None => return Err(StreamError::Empty),
    };
    let header = serde_json::from_str(header)?;
    let records = rest
        .split("\n\n")
        .map(|chunk| chunk.trim_start_matches('\n'))
        .filter(|chunk| !chunk.is_empty())
        .enumerate()
        .map(|(index, chunk)| {
            seq_parse_str(chunk).map_err(|source| StreamError::Record { index, source })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((header, records))
}
