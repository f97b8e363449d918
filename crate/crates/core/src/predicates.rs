//! Boolean structural properties of graphs.

use std::collections::BTreeMap;

use crate::graph::{iter_bits, Graph, VertexSet};

pub type PredicateFn = fn(&Graph) -> bool;

#[derive(Debug, Clone, Copy)]
pub struct Predicate {
    pub name: &'static str,
    /// Adjective used when rendering hypotheses ("claw-free").
    pub display: &'static str,
    pub eval: PredicateFn,
}

/// Named set of predicates evaluated on every corpus graph.
#[derive(Debug, Clone)]
pub struct PredicateRegistry {
    entries: Vec<Predicate>,
}

const BUILTIN: &[Predicate] = &[
    Predicate {
        name: "connected",
        display: "connected",
        eval: is_connected,
    },
    Predicate {
        name: "bipartite",
        display: "bipartite",
        eval: is_bipartite,
    },
    Predicate {
        name: "regular",
        display: "regular",
        eval: is_regular,
    },
    Predicate {
        name: "cubic",
        display: "cubic",
        eval: is_cubic,
    },
    Predicate {
        name: "claw_free",
        display: "claw-free",
        eval: is_claw_free,
    },
    Predicate {
        name: "has_isolated_vertex",
        display: "isolate-containing",
        eval: has_isolated_vertex,
    },
    Predicate {
        name: "is_tree",
        display: "tree",
        eval: is_tree,
    },
];

impl Default for PredicateRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl PredicateRegistry {
    pub fn builtin() -> Self {
        PredicateRegistry {
            entries: BUILTIN.to_vec(),
        }
    }

    pub fn empty() -> Self {
        PredicateRegistry { entries: Vec::new() }
    }

    /// Adds or replaces a predicate.
    pub fn register(&mut self, predicate: Predicate) {
        match self.entries.iter_mut().find(|p| p.name == predicate.name) {
            Some(slot) => *slot = predicate,
            None => self.entries.push(predicate),
        }
    }

    /// Restricts the registry to `names`, in the given order. Unknown names are returned as `Err`.
    pub fn select<S: AsRef<str>>(&self, names: &[S]) -> Result<Self, String> {
        let entries = names
            .iter()
            .map(|n| self.get(n.as_ref()).copied().ok_or_else(|| n.as_ref().to_string()))
            .collect::<Result<_, _>>()?;
        Ok(PredicateRegistry { entries })
    }

    pub fn get(&self, name: &str) -> Option<&Predicate> {
        self.entries.iter().find(|p| p.name == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Predicate> {
        self.entries.iter()
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.iter().map(|p| p.name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Evaluates every builtin predicate on `g`.
pub fn boolean_predicates(g: &Graph) -> BTreeMap<&'static str, bool> {
    BUILTIN.iter().map(|p| (p.name, (p.eval)(g))).collect()
}

/// Adjective for a predicate name, falling back to the name itself.
pub fn display_name(name: &str) -> &str {
    BUILTIN.iter().find(|p| p.name == name).map_or(name, |p| p.display)
}

fn reachable(g: &Graph, start: usize) -> VertexSet {
    let mut seen: VertexSet = 1 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0;
        for v in iter_bits(frontier) {
            next |= g.neighbors(v);
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen
}

pub fn is_connected(g: &Graph) -> bool {
    reachable(g, 0) == g.vertex_mask()
}

pub fn is_bipartite(g: &Graph) -> bool {
    let mut side = vec![None::<bool>; g.order()];
    for s in 0..g.order() {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            let su = side[u].unwrap();
            for v in iter_bits(g.neighbors(u)) {
                match side[v] {
                    None => {
                        side[v] = Some(!su);
                        stack.push(v);
                    }
                    Some(sv) if sv == su => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

pub fn is_regular(g: &Graph) -> bool {
    let d = g.degree(0);
    g.degrees().all(|x| x == d)
}

pub fn is_cubic(g: &Graph) -> bool {
    g.degrees().all(|d| d == 3)
}

/// No vertex has three pairwise non-adjacent neighbours.
pub fn is_claw_free(g: &Graph) -> bool {
    (0..g.order()).all(|center| {
        let nb = g.neighbors(center);
        iter_bits(nb).all(|a| {
            let rest = nb & !g.closed_neighbors(a) & above(a);
            iter_bits(rest).all(|b| rest & !g.closed_neighbors(b) & above(b) == 0)
        })
    })
}

/// Vertices with index strictly greater than `v`.
fn above(v: usize) -> VertexSet {
    u64::MAX.checked_shl(v as u32 + 1).unwrap_or(0)
}

pub fn has_isolated_vertex(g: &Graph) -> bool {
    g.degrees().any(|d| d == 0)
}

pub fn is_tree(g: &Graph) -> bool {
    g.size() + 1 == g.order() && is_connected(g)
}
