//! Short-form graph6 encoding (orders 1 through 62).

use thiserror::Error;

use crate::graph::{Graph, GraphError};

/// Optional header some generators emit before the first graph.
pub const HEADER: &str = ">>graph6<<";

/// Largest order expressible by the single-byte size prefix.
pub const MAX_SHORT_ORDER: usize = 62;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("byte {offset}: {reason}")]
    Parse { offset: usize, reason: String },
    #[error("order {0} needs the long graph6 form, which is not supported")]
    UnsupportedOrder(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn parse_err(offset: usize, reason: impl Into<String>) -> Graph6Error {
    Graph6Error::Parse {
        offset,
        reason: reason.into(),
    }
}

/// Decodes one graph6 line. Surrounding whitespace and a leading
/// `>>graph6<<` header are ignored.
pub fn parse_graph6(line: &str) -> Result<Graph, Graph6Error> {
    let trimmed = line.trim();
    let (body, base) = match trimmed.strip_prefix(HEADER) {
        Some(rest) => (rest, line.find(HEADER).unwrap_or(0) + HEADER.len()),
        None => (trimmed, line.len() - line.trim_start().len()),
    };
    let bytes = body.as_bytes();
    let Some(&first) = bytes.first() else {
        return Err(parse_err(base, "missing order prefix"));
    };
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(parse_err(
                base + i,
                format!("character {:?} outside the graph6 range", b as char),
            ));
        }
    }
    if first == 126 {
        return Err(parse_err(base, "long-form order prefix is not supported"));
    }
    let order = (first - 63) as usize;
    if order == 0 {
        return Err(parse_err(base, "order prefix encodes an empty graph"));
    }
    let bits = order * (order - 1) / 2;
    let expected = bits.div_ceil(6);
    let data = &bytes[1..];
    if data.len() != expected {
        let offset = base + 1 + data.len().min(expected);
        return Err(parse_err(
            offset,
            format!("order {order} needs {expected} data bytes, found {}", data.len()),
        ));
    }

    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..order {
        for i in 0..j {
            let byte = data[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    if k % 6 != 0 {
        let pad = (data[k / 6] - 63) & ((1 << (6 - k % 6)) - 1);
        if pad != 0 {
            return Err(parse_err(base + 1 + k / 6, "nonzero padding bits"));
        }
    }
    Ok(Graph::from_edges(order, edges)?)
}

/// Encodes `g` in short-form graph6.
pub fn to_graph6(g: &Graph) -> Result<String, Graph6Error> {
    let n = g.order();
    if n > MAX_SHORT_ORDER {
        return Err(Graph6Error::UnsupportedOrder(n));
    }
    let mut out = String::with_capacity(1 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    out.push((n as u8 + 63) as char);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push((acc + 63) as char);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(((acc << (6 - filled)) + 63) as char);
    }
    Ok(out)
}
