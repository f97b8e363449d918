//! Exhaustive reference implementations and corpus helpers shared by the
//! integration tests. Everything here enumerates subsets directly and only
//! uses `Graph::order` and `Graph::has_edge`.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use conjecturing::engine::{dalmatian_filter, generality_filter, generate, sort_conjectures};
use conjecturing::features::{BooleanColumn, NumericColumn};
use conjecturing::fit::{fit_linear_bound, FitPoint};
use conjecturing::graph6::parse_graph6;
use conjecturing::{Conjecture, Direction, EngineConfig, FeatureTable, Graph, Rational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Bundled corpora live in the core crate; this module is also compiled
/// into the CLI tests.
pub fn data_path(name: &str) -> String {
    let here = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let dir = if here.join("data").is_dir() {
        here.join("data")
    } else {
        here.join("../core/data")
    };
    dir.join(name).to_string_lossy().into_owned()
}

pub fn load_g6(name: &str) -> Vec<Graph> {
    let text = std::fs::read_to_string(data_path(name)).expect("bundled corpus");
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| {
            parse_graph6(l)
                .unwrap_or_else(|e| panic!("{name} line {}: {e}", i + 1))
                .with_label(format!("{name}:{}", i + 1))
        })
        .collect()
}

/// `count` graphs with 1..=max_order vertices and varying edge density.
pub fn random_graphs(seed: u64, count: usize, max_order: usize) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let n = rng.gen_range(1..=max_order);
            let p: f64 = rng.gen_range(0.1..0.9);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, edges).unwrap().with_label(format!("rand{k}"))
        })
        .collect()
}

fn members(s: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| s >> v & 1 == 1).collect()
}

fn all_subsets(n: usize) -> impl Iterator<Item = u64> {
    0..(1u64 << n)
}

fn min_subset(g: &Graph, ok: impl Fn(&[usize]) -> bool) -> Option<usize> {
    all_subsets(g.order())
        .map(|s| members(s, g.order()))
        .filter(|s| ok(s))
        .map(|s| s.len())
        .min()
}

fn independent(g: &Graph, s: &[usize]) -> bool {
    s.iter().all(|&u| s.iter().all(|&v| !g.has_edge(u, v)))
}

fn dominating(g: &Graph, s: &[usize]) -> bool {
    (0..g.order()).all(|v| s.contains(&v) || s.iter().any(|&u| g.has_edge(u, v)))
}

fn totally_dominating(g: &Graph, s: &[usize]) -> bool {
    (0..g.order()).all(|v| s.iter().any(|&u| g.has_edge(u, v)))
}

fn edge_list(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.order();
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if g.has_edge(u, v) {
                out.push((u, v));
            }
        }
    }
    out
}

pub fn alpha(g: &Graph) -> usize {
    all_subsets(g.order())
        .map(|s| members(s, g.order()))
        .filter(|s| independent(g, s))
        .map(|s| s.len())
        .max()
        .unwrap()
}

pub fn beta(g: &Graph) -> usize {
    let edges = edge_list(g);
    min_subset(g, |s| edges.iter().all(|&(u, v)| s.contains(&u) || s.contains(&v))).unwrap()
}

pub fn gamma(g: &Graph) -> usize {
    min_subset(g, |s| dominating(g, s)).unwrap()
}

pub fn gamma_t(g: &Graph) -> Option<usize> {
    min_subset(g, |s| totally_dominating(g, s))
}

pub fn independent_domination(g: &Graph) -> usize {
    min_subset(g, |s| independent(g, s) && dominating(g, s)).unwrap()
}

/// Every matching, as a list of edges.
pub fn matchings(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    fn rec(
        edges: &[(usize, usize)],
        used: &mut Vec<bool>,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let Some((&(u, v), rest)) = edges.split_first() else {
            out.push(cur.clone());
            return;
        };
        rec(rest, used, cur, out);
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            cur.push((u, v));
            rec(rest, used, cur, out);
            cur.pop();
            used[u] = false;
            used[v] = false;
        }
    }
    let mut out = Vec::new();
    rec(&edge_list(g), &mut vec![false; g.order()], &mut Vec::new(), &mut out);
    out
}

pub fn mu(g: &Graph) -> usize {
    matchings(g).iter().map(Vec::len).max().unwrap()
}

pub fn mu_star(g: &Graph) -> usize {
    let edges = edge_list(g);
    matchings(g)
        .into_iter()
        .filter(|m| {
            let covered = |x: usize| m.iter().any(|&(a, b)| a == x || b == x);
            edges.iter().all(|&(u, v)| covered(u) || covered(v))
        })
        .map(|m| m.len())
        .min()
        .unwrap()
}

/// Applies the color change rule until nothing changes.
pub fn closure(g: &Graph, blue: &[usize]) -> Vec<bool> {
    let n = g.order();
    let mut colored = vec![false; n];
    for &v in blue {
        colored[v] = true;
    }
    loop {
        let mut changed = false;
        for v in 0..n {
            if !colored[v] {
                continue;
            }
            let white: Vec<usize> = (0..n).filter(|&u| g.has_edge(v, u) && !colored[u]).collect();
            if white.len() == 1 {
                colored[white[0]] = true;
                changed = true;
            }
        }
        if !changed {
            return colored;
        }
    }
}

pub fn zero_forcing(g: &Graph) -> usize {
    min_subset(g, |s| closure(g, s).iter().all(|&b| b)).unwrap()
}

pub fn is_connected(g: &Graph) -> bool {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for (u, s) in seen.iter_mut().enumerate() {
            if g.has_edge(v, u) && !*s {
                *s = true;
                stack.push(u);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Some 2-coloring with no monochromatic edge exists.
pub fn two_colorable(g: &Graph) -> bool {
    let edges = edge_list(g);
    all_subsets(g.order()).any(|c| edges.iter().all(|&(u, v)| (c >> u & 1) != (c >> v & 1)))
}

/// Some vertex has three pairwise non-adjacent neighbours.
pub fn has_induced_claw(g: &Graph) -> bool {
    let n = g.order();
    (0..n).any(|c| {
        let nb: Vec<usize> = (0..n).filter(|&u| g.has_edge(c, u)).collect();
        nb.iter().enumerate().any(|(i, &a)| {
            nb[i + 1..].iter().enumerate().any(|(j, &b)| {
                nb[i + 1 + j + 1..]
                    .iter()
                    .any(|&d| !g.has_edge(a, b) && !g.has_edge(a, d) && !g.has_edge(b, d))
            })
        })
    })
}

/// Whether some closed walk of odd length exists; for simple graphs this is
/// equivalent to an odd cycle. Checked by powers of the adjacency relation.
pub fn has_odd_cycle(g: &Graph) -> bool {
    let n = g.order();
    // reach[k][u][v]: a walk of length k from u to v exists.
    let mut reach: Vec<Vec<bool>> = (0..n).map(|u| (0..n).map(|v| u == v).collect()).collect();
    for k in 1..=2 * n + 1 {
        let next: Vec<Vec<bool>> = (0..n)
            .map(|u| {
                (0..n)
                    .map(|v| (0..n).any(|w| reach[u][w] && g.has_edge(w, v)))
                    .collect()
            })
            .collect();
        reach = next;
        if k % 2 == 1 && (0..n).any(|u| reach[u][u]) {
            return true;
        }
    }
    false
}

fn feasible(coords: &[(i64, i64)], m: Rational, b: Rational, dir: Direction) -> bool {
    coords.iter().all(|&(x, y)| {
        let fx = m * Rational::from(x) + b;
        let y = Rational::from(y);
        match dir {
            Direction::Upper => y <= fx,
            Direction::Lower => y >= fx,
        }
    })
}

fn touches(coords: &[(i64, i64)], m: Rational, b: Rational) -> usize {
    coords
        .iter()
        .filter(|&&(x, y)| m * Rational::from(x) + b == Rational::from(y))
        .count()
}

/// Largest touch count over every non-vertical line through one or two
/// input points that bounds all points from the given side.
pub fn brute_force_max_touch(coords: &[(i64, i64)], dir: Direction) -> usize {
    let mut best = 0;
    for &(x1, y1) in coords {
        let b = Rational::from(y1);
        if feasible(coords, Rational::from(0), b, dir) {
            best = best.max(touches(coords, Rational::from(0), b));
        }
        for &(x2, y2) in coords {
            if x1 == x2 {
                continue;
            }
            let m = Rational::new(y2 - y1, x2 - x1);
            let b = Rational::from(y1) - m * Rational::from(x1);
            if feasible(coords, m, b, dir) {
                best = best.max(touches(coords, m, b));
            }
        }
    }
    best
}

pub fn fit_points(coords: &[(i64, i64)]) -> Vec<FitPoint> {
    coords
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| FitPoint::new(x, y, i))
        .collect()
}

/// Fits `coords` in direction `dir` and compares with the brute force.
pub fn check_fit(coords: &[(i64, i64)], dir: Direction) -> Result<(), String> {
    let fit = fit_linear_bound(&fit_points(coords), dir).ok_or("no fit")?;
    let f = fit.function;
    if !feasible(coords, f.slope, f.intercept, dir) {
        return Err(format!("{coords:?} {dir}: infeasible {f:?}"));
    }
    if fit.touch_number == 0 || fit.touch_number != touches(coords, f.slope, f.intercept) {
        return Err(format!("{coords:?} {dir}: bad touch number {}", fit.touch_number));
    }
    let best = brute_force_max_touch(coords, dir);
    if fit.touch_number != best {
        return Err(format!(
            "{coords:?} {dir}: touch {} but {best} attainable",
            fit.touch_number
        ));
    }
    Ok(())
}

/// A random table with columns x0.. and predicates p0..; x0 may have gaps.
pub fn table_strategy() -> impl Strategy<Value = FeatureTable> {
    (3usize..=10, 2usize..=3, 1usize..=3).prop_flat_map(|(rows, ncols, nbools)| {
        (
            prop::collection::vec(prop::collection::vec(0u64..6, rows), ncols),
            prop::collection::vec(any::<bool>(), rows),
            prop::collection::vec(prop::collection::vec(any::<bool>(), rows), nbools),
        )
            .prop_map(move |(nums, gaps, bools)| {
                let numeric = nums
                    .into_iter()
                    .enumerate()
                    .map(|(j, col)| NumericColumn {
                        name: format!("x{j}"),
                        values: col
                            .into_iter()
                            .zip(&gaps)
                            .map(|(v, &gap)| (j != 0 || !gap || v > 0).then_some(v))
                            .collect(),
                    })
                    .collect();
                let boolean = bools
                    .into_iter()
                    .enumerate()
                    .map(|(j, values)| BooleanColumn {
                        name: format!("p{j}"),
                        values,
                    })
                    .collect();
                let labels = (0..rows).map(|i| format!("o{i}")).collect();
                FeatureTable::new(labels, numeric, boolean).unwrap()
            })
    })
}

/// No filters, no truncation, every hypothesis.
pub fn open_config() -> EngineConfig {
    EngineConfig {
        min_support: 1,
        filters: BTreeSet::new(),
        top_k: usize::MAX,
        ..EngineConfig::default()
    }
}

/// Same target, direction and bound; constant bounds match across columns.
pub fn same_claim(a: &Conjecture, b: &Conjecture) -> bool {
    a.target == b.target && a.bound == b.bound && (a.other == b.other || a.bound.slope == Rational::from(0))
}

pub fn check_generality(table: &FeatureTable) -> Result<(), String> {
    let raw = generate(table, &open_config()).map_err(|e| e.to_string())?;
    let kept = generality_filter(raw.clone(), table).map_err(|e| e.to_string())?;
    let support = |c: &Conjecture| table.support(&c.hypothesis).unwrap();
    if let Some(c) = kept.iter().find(|c| !raw.contains(c)) {
        return Err(format!("{c} appeared from nowhere"));
    }
    for (i, a) in kept.iter().enumerate() {
        for b in &kept[i + 1..] {
            if same_claim(a, b) {
                let (sa, sb) = (support(a), support(b));
                if sa.is_subset(&sb) || sb.is_subset(&sa) {
                    return Err(format!("nested supports: {a} / {b}"));
                }
            }
        }
    }
    for c in raw.iter().filter(|c| !kept.contains(c)) {
        let sc = support(c);
        if !kept.iter().any(|k| same_claim(k, c) && sc.is_subset(&support(k))) {
            return Err(format!("{c} dropped without a more general witness"));
        }
    }
    Ok(())
}

pub fn check_dalmatian(table: &FeatureTable) -> Result<(), String> {
    let sorted = sort_conjectures(generate(table, &open_config()).map_err(|e| e.to_string())?);
    let accepted = dalmatian_filter(sorted.clone());
    let mut unions: HashMap<(String, Direction), BTreeSet<String>> = HashMap::new();
    let mut next = accepted.iter().peekable();
    for c in &sorted {
        let union = unions.entry((c.target.clone(), c.direction())).or_default();
        let before = union.len();
        let fresh = c.touch_set.iter().any(|l| !union.contains(l));
        if next.peek() == Some(&c) {
            next.next();
            union.extend(c.touch_set.iter().cloned());
            if union.len() <= before {
                return Err(format!("{c} accepted without growing the union"));
            }
        } else if fresh {
            return Err(format!("{c} rejected but touches a new object"));
        }
    }
    match next.next() {
        Some(c) => Err(format!("{c} accepted out of order")),
        None => Ok(()),
    }
}

pub fn check_sort(table: &FeatureTable) -> Result<(), String> {
    let raw = generate(table, &open_config()).map_err(|e| e.to_string())?;
    let sorted = sort_conjectures(raw.clone());
    for w in sorted.windows(2) {
        if w[0].touch_number < w[1].touch_number {
            return Err(format!("{} before {}", w[0], w[1]));
        }
        if w[0].touch_number == w[1].touch_number && w[0].support_size < w[1].support_size {
            return Err(format!("support order broken at {}", w[1]));
        }
    }
    let mut reversed = raw;
    reversed.reverse();
    if sort_conjectures(reversed) != sorted {
        return Err("sort depends on input order".into());
    }
    Ok(())
}
