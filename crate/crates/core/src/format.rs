//! Line-oriented text formats.
//!
//! QUBO files:
//!
//! ```text
//! # comment
//! qubo <n> <nnz>
//! <i> <j> <coeff>      (nnz lines, diagonal when i == j)
//! ```
//!
//! Graph files:
//!
//! ```text
//! graph <n> <m>
//! <u> <v>              (m lines)
//! ```
//!
//! Everything after a `#` on a line is ignored, as are blank lines. Only exact
//! integers are accepted.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mis::MisGraph;
use crate::qubo::QuboMatrix;

/// Content lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(idx, line)| {
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        }
        .trim();
        (!line.is_empty()).then_some((idx + 1, line))
    })
}

fn field<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Parse { line, msg: format!("missing {what}") })?;
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("invalid {what} {tok:?}") })
}

fn no_trailing<'a>(mut toks: impl Iterator<Item = &'a str>, line: usize) -> Result<()> {
    match toks.next() {
        Some(extra) => Err(Error::Parse { line, msg: format!("unexpected token {extra:?}") }),
        None => Ok(()),
    }
}

fn header(lines: &mut dyn Iterator<Item = (usize, &str)>, keyword: &str) -> Result<(usize, usize)> {
    let (line, text) =
        lines.next().ok_or_else(|| Error::Parse { line: 0, msg: format!("missing `{keyword}` header") })?;
    let mut toks = text.split_whitespace();
    if toks.next() != Some(keyword) {
        return Err(Error::Parse { line, msg: format!("expected `{keyword} <n> <count>` header") });
    }
    let n = field(toks.next(), line, "variable count")?;
    let count = field(toks.next(), line, "entry count")?;
    no_trailing(toks, line)?;
    Ok((n, count))
}

pub fn parse_qubo(text: &str, hardware_faithful: bool) -> Result<QuboMatrix> {
    let mut lines = content_lines(text);
    let (n, nnz) = header(&mut lines, "qubo")?;
    let mut entries = Vec::with_capacity(nnz);
    for (line, body) in lines {
        if entries.len() == nnz {
            return Err(Error::Parse { line, msg: format!("more than the declared {nnz} entries") });
        }
        let mut toks = body.split_whitespace();
        let i: usize = field(toks.next(), line, "row index")?;
        let j: usize = field(toks.next(), line, "column index")?;
        let c: i64 = field(toks.next(), line, "coefficient")?;
        no_trailing(toks, line)?;
        if i >= n || j >= n {
            return Err(Error::Parse { line, msg: format!("index out of range for n={n}") });
        }
        entries.push((i, j, c));
    }
    if entries.len() != nnz {
        return Err(Error::Parse { line: 0, msg: format!("declared {nnz} entries, found {}", entries.len()) });
    }
    QuboMatrix::build(n, &entries, hardware_faithful)
}

pub fn format_qubo(q: &QuboMatrix) -> String {
    let entries = q.entries();
    let mut out = format!("qubo {} {}\n", q.n(), entries.len());
    for (i, j, c) in entries {
        writeln!(out, "{i} {j} {c}").unwrap();
    }
    out
}

pub fn parse_graph(text: &str) -> Result<MisGraph> {
    let mut lines = content_lines(text);
    let (n, m) = header(&mut lines, "graph")?;
    let mut edges = Vec::with_capacity(m);
    for (line, body) in lines {
        if edges.len() == m {
            return Err(Error::Parse { line, msg: format!("more than the declared {m} edges") });
        }
        let mut toks = body.split_whitespace();
        let u: usize = field(toks.next(), line, "endpoint")?;
        let v: usize = field(toks.next(), line, "endpoint")?;
        no_trailing(toks, line)?;
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::Parse { line: 0, msg: format!("declared {m} edges, found {}", edges.len()) });
    }
    MisGraph::from_edges(n, &edges)
}

pub fn format_graph(g: &MisGraph) -> String {
    let mut out = format!("graph {} {}\n", g.n(), g.edges().len());
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}
