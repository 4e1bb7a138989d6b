//! Level files.
//!
//! Text form: the first data line holds `n`, followed by `n` lines of `n`
//! whitespace-separated integers. `#` starts a comment; blank lines are
//! skipped. The JSON form is `{"n": 2, "m": [[0, 0], [1, 0]]}` and is
//! detected by a leading `{`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::level::LevelMatrix;

pub fn parse_level(input: &str) -> Result<LevelMatrix> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}

fn parse_json(input: &str) -> Result<LevelMatrix> {
    serde_json::from_str(input).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// `(line, column, token)` with 1-based positions.
fn tokens(line_no: usize, line: &str) -> Vec<(usize, usize, &str)> {
    let content = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (idx, ch) in content.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(idx),
            (true, Some(s)) => {
                out.push((line_no, s + 1, &content[s..idx]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((line_no, s + 1, &content[s..]));
    }
    out
}

fn parse_int<T: std::str::FromStr>(line: usize, column: usize, tok: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        column,
        message: format!("expected an integer, found `{tok}`"),
    })
}

fn parse_text(input: &str) -> Result<LevelMatrix> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| tokens(i + 1, l))
        .filter(|t| !t.is_empty());

    let header = lines.next().ok_or(Error::Parse {
        line: 1,
        column: 1,
        message: "empty input".into(),
    })?;
    let (line, column, tok) = header[0];
    if header.len() != 1 {
        let (l, c, _) = header[1];
        return Err(Error::Parse {
            line: l,
            column: c,
            message: "the first line must contain only n".into(),
        });
    }
    let n: usize = parse_int(line, column, tok)?;
    if n == 0 {
        return Err(Error::Parse {
            line,
            column,
            message: "n must be at least 1".into(),
        });
    }

    let mut entries = Vec::with_capacity(n * n);
    let mut last_line = line;
    for row in 0..n {
        let toks = lines.next().ok_or(Error::Parse {
            line: last_line + 1,
            column: 1,
            message: format!("expected {n} rows, found {row}"),
        })?;
        last_line = toks[0].0;
        if toks.len() != n {
            let (l, c) = if toks.len() > n {
                (toks[n].0, toks[n].1)
            } else {
                let (l, c, t) = toks[toks.len() - 1];
                (l, c + t.len())
            };
            return Err(Error::Parse {
                line: l,
                column: c,
                message: format!("row {} has {} entries, expected {n}", row + 1, toks.len()),
            });
        }
        for (l, c, t) in toks {
            entries.push(parse_int(l, c, t)?);
        }
    }
    if let Some(extra) = lines.next() {
        let (l, c, _) = extra[0];
        return Err(Error::Parse {
            line: l,
            column: c,
            message: "trailing data after the last row".into(),
        });
    }
    LevelMatrix::new(n, entries)
}

/// Renders the text form accepted by [`parse_level`].
pub fn to_text(m: &LevelMatrix) -> String {
    let mut out = format!("{}\n", m.n());
    for i in 0..m.n() {
        let row: Vec<String> = m.row(i).iter().map(i64::to_string).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn to_json(m: &LevelMatrix) -> String {
    serde_json::to_string(m).expect("levels always serialize")
}

/// Parses a whitespace- or comma-separated integer vector such as `0,1,1`.
pub fn parse_vector(input: &str) -> Result<Vec<i64>> {
    let trimmed = input.trim().trim_start_matches('[').trim_end_matches(']');
    trimmed
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .enumerate()
        .map(|(i, s)| {
            s.parse().map_err(|_| Error::Parse {
                line: 1,
                column: i + 1,
                message: format!("expected an integer, found `{s}`"),
            })
        })
        .collect()
}
