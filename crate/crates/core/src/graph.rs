//! Simple undirected graphs on at most 64 vertices.
//!
//! Adjacency is a dense symmetric bit relation: row `v` is a `u64` whose bit
//! `u` is set iff `u` and `v` are adjacent. Every search in [`crate::invariants`]
//! works directly on these masks.

use std::fmt;

use thiserror::Error;

/// Largest order representable by the bit-row adjacency.
pub const MAX_ORDER: usize = 64;

/// A set of vertices encoded as a bit mask.
pub type VertexSet = u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph order must be at least 1")]
    EmptyGraph,
    #[error("order {0} exceeds the supported maximum of {MAX_ORDER}")]
    OrderTooLarge(usize),
    #[error("edge ({0}, {1}) is a self-loop")]
    SelfLoop(usize, usize),
    #[error("edge ({u}, {v}) references a vertex outside 0..{order}")]
    VertexOutOfRange { u: usize, v: usize, order: usize },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    order: usize,
    rows: Vec<u64>,
    label: Option<String>,
}

impl Graph {
    /// The edgeless graph on `order` vertices.
    pub fn empty(order: usize) -> Result<Self, GraphError> {
        if order == 0 {
            return Err(GraphError::EmptyGraph);
        }
        if order > MAX_ORDER {
            return Err(GraphError::OrderTooLarge(order));
        }
        Ok(Graph {
            order,
            rows: vec![0; order],
            label: None,
        })
    }

    /// Builds a graph from an edge list. Repeated edges are merged.
    pub fn from_edges<I>(order: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(order)?;
        for (u, v) in edges {
            if u >= order || v >= order {
                return Err(GraphError::VertexOutOfRange { u, v, order });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u, v));
            }
            g.rows[u] |= 1 << v;
            g.rows[v] |= 1 << u;
        }
        Ok(g)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Mask with one bit per vertex.
    pub fn vertex_mask(&self) -> VertexSet {
        if self.order == 64 {
            u64::MAX
        } else {
            (1u64 << self.order) - 1
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order && v < self.order && self.rows[u] >> v & 1 == 1
    }

    /// Open neighbourhood of `v`.
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.rows[v]
    }

    /// Closed neighbourhood of `v`.
    pub fn closed_neighbors(&self, v: usize) -> VertexSet {
        self.rows[v] | 1 << v
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.count_ones() as usize)
    }

    pub fn min_degree(&self) -> usize {
        self.degrees().min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.order).flat_map(move |u| iter_bits(self.rows[u] >> u >> 1).map(move |d| (u, u + 1 + d)))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("label", &self.label)
            .field("order", &self.order)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Iterates the indices of the set bits of `mask`, lowest first.
pub fn iter_bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}
