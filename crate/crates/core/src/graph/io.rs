//! Edge-list text format.
//!
//! ```text
//! # comment
//! n m
//! u v
//! ...
//! ```
//!
//! Vertices are 0-indexed; lines starting with `#` and blank lines are
//! ignored. Writers always emit `u < v` in lexicographic order.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Graph, GraphError};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("empty edge list (missing `n m` header)")]
    MissingHeader,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("header announces {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize), ParseError> {
    let mut it = text.split_whitespace();
    let mut next = || -> Result<usize, ParseError> {
        let tok = it.next().ok_or_else(|| ParseError::Syntax {
            line,
            message: "expected two integers".into(),
        })?;
        tok.parse().map_err(|_| ParseError::Syntax {
            line,
            message: format!("not a non-negative integer: {tok:?}"),
        })
    };
    let pair = (next()?, next()?);
    if it.next().is_some() {
        return Err(ParseError::Syntax {
            line,
            message: "trailing tokens".into(),
        });
    }
    Ok(pair)
}

pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let (n, m) = parse_pair(hline, header)?;
    let edges = lines
        .map(|(i, l)| parse_pair(i, l))
        .collect::<Result<Vec<_>, _>>()?;
    if edges.len() != m {
        return Err(ParseError::EdgeCount {
            expected: m,
            found: edges.len(),
        });
    }
    Ok(Graph::from_edges(n, edges)?)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").expect("writing to a String");
    }
    out
}
