//! Reader and writer for the alist sparse-matrix format.
//!
//! Layout, one item per line:
//!
//! ```text
//! n m
//! max_col_degree max_row_degree
//! <n column degrees>
//! <m row degrees>
//! <n lines: 1-based check indices of each column>
//! <m lines: 1-based variable indices of each row>
//! ```
//!
//! Zero entries in the adjacency lists are padding and are skipped.

use std::path::Path;

use super::{CodeError, ParityCheckCode};

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate().peekable(),
            last: 0,
        }
    }

    /// Next non-blank line as `(1-based line number, parsed integers)`.
    fn next_ints(&mut self, what: &str) -> Result<(usize, Vec<usize>), CodeError> {
        for (idx, raw) in self.inner.by_ref() {
            let line = idx + 1;
            self.last = line;
            let body = raw.trim();
            if body.is_empty() {
                continue;
            }
            let ints = body
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| CodeError::Alist {
                        line,
                        msg: format!("expected a non-negative integer in {what}, found {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            return Ok((line, ints));
        }
        Err(CodeError::Alist {
            line: self.last + 1,
            msg: format!("unexpected end of input, expected {what}"),
        })
    }

    fn trailing(&mut self) -> Option<usize> {
        self.inner
            .by_ref()
            .find(|(_, l)| !l.trim().is_empty())
            .map(|(i, _)| i + 1)
    }
}

fn exact(line: usize, ints: Vec<usize>, count: usize, what: &str) -> Result<Vec<usize>, CodeError> {
    if ints.len() != count {
        return Err(CodeError::Alist {
            line,
            msg: format!("{what}: expected {count} values, found {}", ints.len()),
        });
    }
    Ok(ints)
}

/// Reads one adjacency line: drops zero padding, converts to 0-based and
/// validates range, duplicates and degree.
fn adjacency(
    lines: &mut Lines<'_>,
    what: &str,
    degree: usize,
    bound: usize,
) -> Result<(usize, Vec<usize>), CodeError> {
    let (line, ints) = lines.next_ints(what)?;
    let mut out = Vec::with_capacity(degree);
    for v in ints.into_iter().filter(|&v| v != 0) {
        if v > bound {
            return Err(CodeError::Alist {
                line,
                msg: format!("{what}: index {v} out of range 1..={bound}"),
            });
        }
        if out.contains(&(v - 1)) {
            return Err(CodeError::Alist {
                line,
                msg: format!("{what}: duplicate index {v}"),
            });
        }
        out.push(v - 1);
    }
    if out.len() != degree {
        return Err(CodeError::Alist {
            line,
            msg: format!(
                "{what}: degree mismatch, declared {degree}, found {}",
                out.len()
            ),
        });
    }
    Ok((line, out))
}

/// Parses alist text into a code.
pub fn parse_alist(text: &str) -> Result<ParityCheckCode, CodeError> {
    let text = text.replace("\r\n", "\n").replace('\r', "\n");
    let mut lines = Lines::new(&text);

    let (line, header) = lines.next_ints("header")?;
    let header = exact(line, header, 2, "header \"n m\"")?;
    let (n, m) = (header[0], header[1]);
    if m == 0 || m >= n {
        return Err(CodeError::Alist {
            line,
            msg: format!("malformed header: need 1 <= m < n, got n={n}, m={m}"),
        });
    }

    let (line, maxima) = lines.next_ints("maximum degrees")?;
    let maxima = exact(line, maxima, 2, "maximum degrees")?;
    let (max_col, max_row) = (maxima[0], maxima[1]);

    let (line, col_deg) = lines.next_ints("column degrees")?;
    let col_deg = exact(line, col_deg, n, "column degrees")?;
    if let Some(d) = col_deg.iter().find(|&&d| d > max_col) {
        return Err(CodeError::Alist {
            line,
            msg: format!("column degree {d} exceeds declared maximum {max_col}"),
        });
    }
    let (line, row_deg) = lines.next_ints("row degrees")?;
    let row_deg = exact(line, row_deg, m, "row degrees")?;
    if let Some(d) = row_deg.iter().find(|&&d| d > max_row) {
        return Err(CodeError::Alist {
            line,
            msg: format!("row degree {d} exceeds declared maximum {max_row}"),
        });
    }

    let mut cols = Vec::with_capacity(n);
    for (i, &d) in col_deg.iter().enumerate() {
        cols.push(adjacency(&mut lines, &format!("column {}", i + 1), d, m)?);
    }
    let mut rows = Vec::with_capacity(m);
    for (j, &d) in row_deg.iter().enumerate() {
        rows.push(adjacency(&mut lines, &format!("row {}", j + 1), d, n)?.1);
    }
    if let Some(line) = lines.trailing() {
        return Err(CodeError::Alist {
            line,
            msg: "unexpected content after the last row list".into(),
        });
    }

    let code = ParityCheckCode::from_checks(n, rows).map_err(|e| CodeError::Alist {
        line: 1,
        msg: e.to_string(),
    })?;
    for (i, (line, list)) in cols.iter().enumerate() {
        let mut sorted = list.clone();
        sorted.sort_unstable();
        if sorted != code.var_neighbors()[i] {
            return Err(CodeError::Alist {
                line: *line,
                msg: format!("column {} disagrees with the row lists", i + 1),
            });
        }
    }
    Ok(code)
}

/// Reads and parses an alist file.
pub fn read_alist(path: impl AsRef<Path>) -> Result<ParityCheckCode, CodeError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| CodeError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    parse_alist(&text)
}

/// Renders a code as alist text. Only empty lists are zero-padded.
pub fn render_alist(code: &ParityCheckCode) -> String {
    fn join(it: impl Iterator<Item = usize>) -> String {
        it.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
    }
    let cols = code.var_neighbors();
    let rows = code.check_neighbors();
    let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = format!("{} {}\n{max_col} {max_row}\n", code.n(), code.m());
    out += &join(cols.iter().map(Vec::len));
    out.push('\n');
    out += &join(rows.iter().map(Vec::len));
    out.push('\n');
    for list in cols.iter().chain(rows) {
        if list.is_empty() {
            out += "0";
        } else {
            out += &join(list.iter().map(|v| v + 1));
        }
        out.push('\n');
    }
    out
}
