//! DIMACS `.col` files, seeded random graphs and the built-in fixtures.

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Parses a DIMACS edge file: `c` comment lines, one `p edge <n> <m>` line
/// and `e <u> <v>` edge lines. Duplicate edges collapse; the declared edge
/// count is not enforced.
pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut g: Option<Graph> = None;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            None | Some("c") => continue,
            Some("p") => {
                if g.is_some() {
                    return Err(err("second problem line".into()));
                }
                let format = tokens.next().ok_or_else(|| err("missing format in problem line".into()))?;
                if format != "edge" && format != "col" {
                    return Err(err(format!("unsupported format {format:?}")));
                }
                let n: usize =
                    tokens.next().and_then(|t| t.parse().ok()).ok_or_else(|| err("missing or bad vertex count".into()))?;
                g = Some(Graph::new(n));
            }
            Some("e") => {
                let graph = g.as_mut().ok_or_else(|| err("edge before problem line".into()))?;
                let mut end = || -> Result<usize> {
                    tokens.next().and_then(|t| t.parse().ok()).ok_or_else(|| err("edge needs two vertices".into()))
                };
                let (u, v) = (end()?, end()?);
                graph.add_edge(u, v).map_err(|e| err(e.to_string()))?;
            }
            Some(other) => return Err(err(format!("unknown line type {other:?}"))),
        }
    }
    g.ok_or_else(|| Error::Parse { line: text.lines().count().max(1), msg: "missing problem line".into() })
}

pub fn write_dimacs(g: &Graph, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            out.push_str(&format!("c {line}\n"));
        }
    }
    out.push_str(&format!("p edge {} {}\n", g.n(), g.num_edges()));
    for (u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

/// `G(n, p)` with `p = density / 100`. The generator is SplitMix64 seeded with
/// `seed` (`state += 0x9E3779B97F4A7C15`, output mixed with the constants
/// `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB`). Pairs `u < v` are visited
/// in lexicographic order and pair `{u, v}` is an edge iff
/// `(next >> 11) · 2⁻⁵³ < p`.
pub fn random_graph(n: usize, density: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=100.0).contains(&density) {
        return Err(Error::InvalidConfig(format!("density {density} outside [0, 100]")));
    }
    let p = density / 100.0;
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut g = Graph::new(n);
    for u in 1..=n {
        for v in u + 1..=n {
            let r = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            if r < p {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

pub const FIXTURES: [&str; 4] = ["k33", "c5", "fig1", "fig2"];

/// The 11-vertex graph with a 7-vertex core: vertex 1 and 2 joined to all of
/// `2..=7`, the cycle `3-4-5-6-7-3`, and the path `3-8-9-10-11`.
pub fn fig1() -> Graph {
    let mut edges = Vec::new();
    edges.extend((2..=7).map(|v| (1, v)));
    edges.extend((3..=7).map(|v| (2, v)));
    edges.extend([(3, 4), (4, 5), (5, 6), (6, 7), (3, 7), (3, 8), (8, 9), (9, 10), (10, 11)]);
    Graph::from_edges(11, &edges).unwrap()
}

/// The 11-vertex star-plus-path graph: `1` joined to `2..=6` and the path
/// `2-7-8-9-10-11`.
pub fn fig2() -> Graph {
    let mut edges: Vec<(usize, usize)> = (2..=6).map(|v| (1, v)).collect();
    edges.extend([(2, 7), (7, 8), (8, 9), (9, 10), (10, 11)]);
    Graph::from_edges(11, &edges).unwrap()
}

pub fn fixture(name: &str) -> Option<Graph> {
    match name {
        "k33" => Some(Graph::complete_bipartite(3, 3)),
        "c5" => Some(Graph::cycle(5)),
        "fig1" => Some(fig1()),
        "fig2" => Some(fig2()),
        _ => None,
    }
}
