//! Library of standard graph families.

use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NamedGraphError {
    #[error("unknown graph family {0:?}")]
    UnknownName(String),
    #[error("{family} needs a parameter of at least {min}, got {got:?}")]
    Domain {
        family: &'static str,
        min: usize,
        got: Option<usize>,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Registered family names, in lookup order.
pub const FAMILIES: &[&str] = &[
    "complete",
    "cycle",
    "path",
    "petersen",
    "complete_bipartite",
    "prism",
    "star",
];

/// Looks up a family by name. `complete_bipartite` with parameter `p` is `K_{p,p}`
/// and `star` with parameter `p` is `K_{1,p}`; `petersen` ignores the parameter.
pub fn named_graph(name: &str, parameter: Option<usize>) -> Result<Graph, NamedGraphError> {
    let need = |family: &'static str, min: usize| match parameter {
        Some(p) if p >= min => Ok(p),
        got => Err(NamedGraphError::Domain { family, min, got }),
    };
    match name {
        "complete" => complete(need("complete", 1)?),
        "cycle" => cycle(need("cycle", 3)?),
        "path" => path(need("path", 1)?),
        "petersen" => Ok(petersen()),
        "complete_bipartite" => {
            let p = need("complete_bipartite", 1)?;
            complete_bipartite(p, p)
        }
        "prism" => prism(need("prism", 3)?),
        "star" => star(need("star", 1)?),
        other => Err(NamedGraphError::UnknownName(other.to_string())),
    }
}

pub fn complete(n: usize) -> Result<Graph, NamedGraphError> {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    Ok(Graph::from_edges(n, edges)?.with_label(format!("K{n}")))
}

pub fn cycle(n: usize) -> Result<Graph, NamedGraphError> {
    if n < 3 {
        return Err(NamedGraphError::Domain {
            family: "cycle",
            min: 3,
            got: Some(n),
        });
    }
    let edges = (0..n).map(|v| (v, (v + 1) % n));
    Ok(Graph::from_edges(n, edges)?.with_label(format!("C{n}")))
}

pub fn path(n: usize) -> Result<Graph, NamedGraphError> {
    let edges = (1..n).map(|v| (v - 1, v));
    Ok(Graph::from_edges(n, edges)?.with_label(format!("P{n}")))
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|v| (v, (v + 1) % 5));
    let spokes = (0..5).map(|v| (v, v + 5));
    let inner = (0..5).map(|v| (5 + v, 5 + (v + 2) % 5));
    Graph::from_edges(10, outer.chain(spokes).chain(inner))
        .expect("petersen edges are valid")
        .with_label("petersen")
}

pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph, NamedGraphError> {
    let edges = (0..a).flat_map(|u| (0..b).map(move |v| (u, a + v)));
    Ok(Graph::from_edges(a + b, edges)?.with_label(format!("K{a},{b}")))
}

/// `C_n` times `K_2`.
pub fn prism(n: usize) -> Result<Graph, NamedGraphError> {
    if n < 3 {
        return Err(NamedGraphError::Domain {
            family: "prism",
            min: 3,
            got: Some(n),
        });
    }
    let rings = (0..n).flat_map(|v| [(v, (v + 1) % n), (n + v, n + (v + 1) % n), (v, n + v)]);
    Ok(Graph::from_edges(2 * n, rings)?.with_label(format!("prism{n}")))
}

pub fn star(leaves: usize) -> Result<Graph, NamedGraphError> {
    let g = complete_bipartite(1, leaves)?;
    Ok(g.with_label(format!("K1,{leaves}")))
}

/// A fixed assortment of named graphs, used by tests and demos.
pub fn library() -> Vec<Graph> {
    let mut out = vec![petersen()];
    for n in 1..=6 {
        out.push(complete(n).unwrap());
        out.push(path(n).unwrap());
    }
    for n in 3..=8 {
        out.push(cycle(n).unwrap());
    }
    for n in 3..=5 {
        out.push(prism(n).unwrap());
    }
    for n in 1..=5 {
        out.push(star(n).unwrap());
    }
    for (a, b) in [(2, 2), (2, 3), (3, 3), (3, 4)] {
        out.push(complete_bipartite(a, b).unwrap());
    }
    out
}
