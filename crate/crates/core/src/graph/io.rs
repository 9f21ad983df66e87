//! Plain-text edge lists.
//!
//! ```text
//! # optional comments, only before the header
//! n m
//! u v
//! ...
//! ```
//!
//! Writers always emit the canonical form (`u < v`, lexicographic order,
//! single spaces, trailing newline). The reader additionally tolerates
//! surrounding whitespace and either edge orientation.

use std::io::{BufRead, Write};

use super::{Graph, NodeId};
use crate::error::{Error, Result};

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Parse {
            line: lineno,
            msg: format!("missing {what}"),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("bad {what} {tok:?}"),
        })
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line: lineno,
            msg: "trailing fields".into(),
        });
    }
    Ok((a, b))
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    read_edge_list(text.as_bytes())
}

pub fn read_edge_list(reader: impl BufRead) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            msg: e.to_string(),
        })?;
        let trimmed = line.trim();
        match header {
            None if trimmed.starts_with('#') || trimmed.is_empty() => continue,
            None => {
                let (n, m) = parse_pair(trimmed, lineno)?;
                edges.reserve(m);
                header = Some((n, m));
            }
            Some(_) if trimmed.is_empty() => continue,
            Some(_) => edges.push(parse_pair(trimmed, lineno)?),
        }
    }
    let (n, m) = header.ok_or(Error::Parse {
        line: 0,
        msg: "missing `n m` header".into(),
    })?;
    if edges.len() != m {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Graph::from_edge_list(n, &edges)
}

pub fn write_edge_list(g: &Graph, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "{} {}", g.node_count(), g.edge_count())?;
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}
