//! Exact numerical graph invariants.
//!
//! Every NP-hard invariant is solved by exhaustive search with pruning over
//! vertex bit masks, so values are exact. Solvers return cardinalities only.
//! Comfortable ranges are n ≤ 16 for the zero forcing and total domination
//! searches and n ≤ 20 for independence, cover and matching.

use thiserror::Error;

use crate::graph::{iter_bits, Graph, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("{invariant} is undefined: {reason}")]
    Undefined {
        invariant: &'static str,
        reason: &'static str,
    },
}

pub type InvariantFn = fn(&Graph) -> Result<u64, InvariantError>;

#[derive(Debug, Clone, Copy)]
pub struct Invariant {
    pub name: &'static str,
    /// Symbol used in rendered inequalities, e.g. `γ_t` renders as `γ_t(G)`.
    pub symbol: &'static str,
    pub aliases: &'static [&'static str],
    pub eval: InvariantFn,
}

fn total(f: fn(&Graph) -> usize) -> impl Fn(&Graph) -> Result<u64, InvariantError> {
    move |g| Ok(f(g) as u64)
}

macro_rules! exact {
    ($f:path) => {{
        fn wrapped(g: &Graph) -> Result<u64, InvariantError> {
            total($f)(g)
        }
        wrapped as InvariantFn
    }};
}

const BUILTIN: &[Invariant] = &[
    Invariant {
        name: "order",
        symbol: "n",
        aliases: &["n"],
        eval: exact!(Graph::order),
    },
    Invariant {
        name: "size",
        symbol: "m",
        aliases: &["m", "e", "edges"],
        eval: exact!(Graph::size),
    },
    Invariant {
        name: "min_degree",
        symbol: "δ",
        aliases: &["delta", "δ"],
        eval: exact!(Graph::min_degree),
    },
    Invariant {
        name: "max_degree",
        symbol: "Δ",
        aliases: &["Delta", "Δ"],
        eval: exact!(Graph::max_degree),
    },
    Invariant {
        name: "independence_number",
        symbol: "α",
        aliases: &["alpha", "α"],
        eval: exact!(independence_number),
    },
    Invariant {
        name: "matching_number",
        symbol: "μ",
        aliases: &["mu", "μ"],
        eval: exact!(matching_number),
    },
    Invariant {
        name: "domination_number",
        symbol: "γ",
        aliases: &["gamma", "γ"],
        eval: exact!(domination_number),
    },
    Invariant {
        name: "total_domination_number",
        symbol: "γ_t",
        aliases: &["gamma_t", "γ_t"],
        eval: |g| total_domination_number(g).map(|v| v as u64),
    },
    Invariant {
        name: "independent_domination_number",
        symbol: "i",
        aliases: &["i"],
        eval: exact!(independent_domination_number),
    },
    Invariant {
        name: "min_maximal_matching",
        symbol: "μ*",
        aliases: &["mu_star", "μ*"],
        eval: exact!(min_maximal_matching),
    },
    Invariant {
        name: "zero_forcing_number",
        symbol: "Z",
        aliases: &["Z", "zero_forcing"],
        eval: exact!(zero_forcing_number),
    },
    Invariant {
        name: "vertex_cover_number",
        symbol: "β",
        aliases: &["beta", "β"],
        eval: exact!(vertex_cover_number),
    },
];

/// Named set of numerical invariants.
#[derive(Debug, Clone)]
pub struct InvariantRegistry {
    entries: Vec<Invariant>,
}

impl Default for InvariantRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl InvariantRegistry {
    pub fn builtin() -> Self {
        InvariantRegistry {
            entries: BUILTIN.to_vec(),
        }
    }

    pub fn empty() -> Self {
        InvariantRegistry { entries: Vec::new() }
    }

    pub fn register(&mut self, invariant: Invariant) {
        match self.entries.iter_mut().find(|i| i.name == invariant.name) {
            Some(slot) => *slot = invariant,
            None => self.entries.push(invariant),
        }
    }

    /// Canonical name for a name or alias.
    pub fn resolve(&self, name: &str) -> Option<&'static str> {
        self.entries
            .iter()
            .find(|i| i.name == name || i.aliases.contains(&name))
            .map(|i| i.name)
    }

    /// Restricts the registry to `names` (canonical or alias), in the given order.
    /// The first unknown name is returned as `Err`.
    pub fn select<S: AsRef<str>>(&self, names: &[S]) -> Result<Self, String> {
        let mut entries: Vec<Invariant> = Vec::with_capacity(names.len());
        for n in names {
            let canonical = self.resolve(n.as_ref()).ok_or_else(|| n.as_ref().to_string())?;
            if !entries.iter().any(|e| e.name == canonical) {
                entries.push(*self.get(canonical).unwrap());
            }
        }
        Ok(InvariantRegistry { entries })
    }

    pub fn get(&self, name: &str) -> Option<&Invariant> {
        self.entries.iter().find(|i| i.name == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Invariant> {
        self.entries.iter()
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.iter().map(|i| i.name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Rendering symbol for an invariant name or alias, falling back to the name itself.
pub fn symbol(name: &str) -> &str {
    BUILTIN
        .iter()
        .find(|i| i.name == name || i.aliases.contains(&name))
        .map_or(name, |i| i.symbol)
}

// ---------------------------------------------------------------------------
// Independence and vertex cover

/// Maximum size of a pairwise non-adjacent vertex set.
pub fn independence_number(g: &Graph) -> usize {
    let mut best = 0;
    max_independent(g, g.vertex_mask(), 0, &mut best);
    best
}

fn max_independent(g: &Graph, cand: VertexSet, size: usize, best: &mut usize) {
    if size + cand.count_ones() as usize <= *best {
        return;
    }
    let Some((v, deg)) = max_degree_in(g, cand) else {
        *best = size;
        return;
    };
    if deg == 0 {
        *best = size + cand.count_ones() as usize;
        return;
    }
    max_independent(g, cand & !g.closed_neighbors(v), size + 1, best);
    max_independent(g, cand & !(1 << v), size, best);
}

/// Vertex of largest degree within the induced subgraph on `cand`.
fn max_degree_in(g: &Graph, cand: VertexSet) -> Option<(usize, usize)> {
    iter_bits(cand)
        .map(|v| (v, (g.neighbors(v) & cand).count_ones() as usize))
        .max_by_key(|&(v, d)| (d, std::cmp::Reverse(v)))
}

/// Minimum size of a vertex set meeting every edge.
pub fn vertex_cover_number(g: &Graph) -> usize {
    let mut best = g.order();
    min_cover(g, g.vertex_mask(), 0, &mut best);
    best
}

fn min_cover(g: &Graph, cand: VertexSet, size: usize, best: &mut usize) {
    if size >= *best {
        return;
    }
    let Some((v, deg)) = max_degree_in(g, cand) else {
        *best = size;
        return;
    };
    if deg == 0 {
        *best = size;
        return;
    }
    let edges: usize = iter_bits(cand)
        .map(|u| (g.neighbors(u) & cand).count_ones() as usize)
        .sum::<usize>()
        / 2;
    if size + edges.div_ceil(deg) >= *best {
        return;
    }
    min_cover(g, cand & !(1 << v), size + 1, best);
    let nb = g.neighbors(v) & cand;
    min_cover(g, cand & !nb & !(1 << v), size + nb.count_ones() as usize, best);
}

// ---------------------------------------------------------------------------
// Matchings

const NONE: usize = usize::MAX;

/// Maximum matching size via Edmonds' blossom algorithm.
pub fn matching_number(g: &Graph) -> usize {
    let n = g.order();
    let mut mate = vec![NONE; n];
    for (u, v) in g.edges() {
        if mate[u] == NONE && mate[v] == NONE {
            mate[u] = v;
            mate[v] = u;
        }
    }
    for root in 0..n {
        if mate[root] != NONE {
            continue;
        }
        let mut search = BlossomSearch::new(g, &mate);
        if let Some(end) = search.augmenting_path(root) {
            let parent = search.parent;
            let mut v = end;
            while v != NONE {
                let pv = parent[v];
                let next = mate[pv];
                mate[v] = pv;
                mate[pv] = v;
                v = next;
            }
        }
    }
    mate.iter().filter(|&&m| m != NONE).count() / 2
}

struct BlossomSearch<'a> {
    g: &'a Graph,
    mate: &'a [usize],
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    blossom: Vec<bool>,
    queue: std::collections::VecDeque<usize>,
}

impl<'a> BlossomSearch<'a> {
    fn new(g: &'a Graph, mate: &'a [usize]) -> Self {
        let n = g.order();
        BlossomSearch {
            g,
            mate,
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            blossom: vec![false; n],
            queue: Default::default(),
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.g.order()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.blossom[self.base[v]] = true;
            self.blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    fn augmenting_path(&mut self, root: usize) -> Option<usize> {
        self.used[root] = true;
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for to in iter_bits(self.g.neighbors(v)) {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.blossom.iter_mut().for_each(|b| *b = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..self.g.order() {
                        if self.blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }
}

/// Minimum size of a matching that no edge can extend.
pub fn min_maximal_matching(g: &Graph) -> usize {
    let max_cover = (2 * g.max_degree()).saturating_sub(1).max(1);
    (0..=g.order() / 2)
        .find(|&k| extend_to_maximal(g, g.vertex_mask(), k, max_cover))
        .expect("a maximum matching is maximal")
}

fn free_edge_count(g: &Graph, free: VertexSet) -> usize {
    iter_bits(free)
        .map(|u| (g.neighbors(u) & free).count_ones() as usize)
        .sum::<usize>()
        / 2
}

/// Can at most `budget` more edges among `free` vertices leave no free edge?
fn extend_to_maximal(g: &Graph, free: VertexSet, budget: usize, max_cover: usize) -> bool {
    let Some(u) = iter_bits(free).find(|&u| g.neighbors(u) & free != 0) else {
        return true;
    };
    if budget == 0 || free_edge_count(g, free) > budget * max_cover {
        return false;
    }
    // Some chosen edge must cover u or v, or the edge uv stays free.
    let v = (g.neighbors(u) & free).trailing_zeros() as usize;
    for w in iter_bits(g.neighbors(u) & free) {
        if extend_to_maximal(g, free & !(1 << u) & !(1 << w), budget - 1, max_cover) {
            return true;
        }
    }
    for w in iter_bits(g.neighbors(v) & free & !(1 << u)) {
        if extend_to_maximal(g, free & !(1 << v) & !(1 << w), budget - 1, max_cover) {
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Domination

/// Minimum size of a set whose closed neighbourhoods cover every vertex.
pub fn domination_number(g: &Graph) -> usize {
    let nbhd: Vec<VertexSet> = (0..g.order()).map(|v| g.closed_neighbors(v)).collect();
    (1..=g.order())
        .find(|&k| can_cover(&nbhd, g.vertex_mask(), k))
        .expect("the whole vertex set dominates")
}

/// Minimum size of a set whose open neighbourhoods cover every vertex.
/// Undefined when `g` has an isolated vertex.
pub fn total_domination_number(g: &Graph) -> Result<usize, InvariantError> {
    if g.min_degree() == 0 {
        return Err(InvariantError::Undefined {
            invariant: "total_domination_number",
            reason: "graph has an isolated vertex",
        });
    }
    let nbhd: Vec<VertexSet> = (0..g.order()).map(|v| g.neighbors(v)).collect();
    Ok((2..=g.order())
        .find(|&k| can_cover(&nbhd, g.vertex_mask(), k))
        .expect("the whole vertex set totally dominates"))
}

/// Can at most `budget` sets from `nbhd` cover `uncovered`?
fn can_cover(nbhd: &[VertexSet], uncovered: VertexSet, budget: usize) -> bool {
    if uncovered == 0 {
        return true;
    }
    if budget == 0 {
        return false;
    }
    let reach = nbhd
        .iter()
        .map(|&s| (s & uncovered).count_ones() as usize)
        .max()
        .unwrap_or(0);
    if (uncovered.count_ones() as usize) > budget * reach {
        return false;
    }
    // Branch on the uncovered vertex with the fewest covering choices.
    let chooser = |u: usize| {
        nbhd.iter()
            .enumerate()
            .filter(move |&(_, s)| *s >> u & 1 == 1)
            .map(|(w, _)| w)
    };
    let u = iter_bits(uncovered).min_by_key(|&u| chooser(u).count()).unwrap();
    chooser(u).any(|w| can_cover(nbhd, uncovered & !nbhd[w], budget - 1))
}

/// Minimum size of a maximal independent set.
pub fn independent_domination_number(g: &Graph) -> usize {
    (1..=g.order())
        .find(|&k| independent_cover(g, g.vertex_mask(), k))
        .expect("a maximal independent set exists")
}

/// A vertex is eligible for the independent set exactly when it is still
/// undominated, so one mask tracks both.
fn independent_cover(g: &Graph, undominated: VertexSet, budget: usize) -> bool {
    if undominated == 0 {
        return true;
    }
    if budget == 0 {
        return false;
    }
    let reach = iter_bits(undominated)
        .map(|w| (g.closed_neighbors(w) & undominated).count_ones() as usize)
        .max()
        .unwrap_or(0);
    if (undominated.count_ones() as usize) > budget * reach {
        return false;
    }
    let u = iter_bits(undominated)
        .min_by_key(|&u| (g.closed_neighbors(u) & undominated).count_ones())
        .unwrap();
    iter_bits(g.closed_neighbors(u) & undominated)
        .any(|w| independent_cover(g, undominated & !g.closed_neighbors(w), budget - 1))
}

// ---------------------------------------------------------------------------
// Zero forcing

/// Least fixed point of the colour change rule: a blue vertex with exactly
/// one non-blue neighbour turns that neighbour blue.
pub fn forcing_closure(g: &Graph, blue: VertexSet) -> VertexSet {
    let mut blue = blue & g.vertex_mask();
    loop {
        let mut grown = blue;
        for v in iter_bits(blue) {
            let white = g.neighbors(v) & !grown;
            if white.count_ones() == 1 {
                grown |= white;
            }
        }
        if grown == blue {
            return blue;
        }
        blue = grown;
    }
}

/// Minimum size of an initial blue set whose forcing closure is every vertex.
pub fn zero_forcing_number(g: &Graph) -> usize {
    let n = g.order();
    let all = g.vertex_mask();
    // Z(G) ≥ δ(G): the first force needs a blue vertex with all but one neighbour blue.
    let lower = g.min_degree().max(1);
    (lower..=n)
        .find(|&k| subsets_of_size(n, k).any(|s| forcing_closure(g, s) == all))
        .expect("the full vertex set forces itself")
}

/// All `k`-subsets of `0..n` as masks, in increasing numeric order.
pub fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = VertexSet> {
    let limit: u128 = 1 << n;
    let mut next: Option<u128> = (k <= n).then(|| (1u128 << k) - 1);
    std::iter::from_fn(move || {
        let x = next?;
        if x >= limit {
            return None;
        }
        next = if x == 0 {
            None
        } else {
            let c = x & x.wrapping_neg();
            let r = x + c;
            Some((((r ^ x) >> 2) / c) | r)
        };
        Some(x as u64)
    })
}
