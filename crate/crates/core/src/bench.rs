//! Benchmark batteries: one root cut loop (optionally a full solve) per
//! instance and strategy, fanned out over threads.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::graph::Graph;
use crate::io::random_graph;
use crate::lp::EngineChoice;
use crate::separation::Strategy;
use crate::solver::{cut_and_branch, root_cut_loop, round_bound, Limits, SolveConfig, SolveStatus};

pub const CSV_HEADER: [&str; 11] =
    ["instance", "n", "density", "strategy", "impr", "time", "cuts", "solved", "nodes", "total_time", "error"];

#[derive(Clone, Debug)]
pub struct BenchInstance {
    pub id: String,
    pub graph: Graph,
    /// Generator density in percent, when the instance is random.
    pub density: Option<f64>,
}

impl BenchInstance {
    pub fn random(n: usize, density: f64, seed: u64) -> Result<Self> {
        Ok(BenchInstance {
            id: format!("r{n}_d{density}_s{seed}"),
            graph: random_graph(n, density, seed)?,
            density: Some(density),
        })
    }
}

/// All `(density, seed)` combinations at `n` vertices.
pub fn random_battery(n: usize, densities: &[f64], seeds: impl IntoIterator<Item = u64> + Clone) -> Result<Vec<BenchInstance>> {
    let mut out = Vec::new();
    for &d in densities {
        for seed in seeds.clone() {
            out.push(BenchInstance::random(n, d, seed)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub strategies: Vec<Strategy>,
    pub rounds: usize,
    /// Run branch and bound after the root loop.
    pub solve: bool,
    pub limits: Limits,
    pub engine: EngineChoice,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            strategies: (1..=7).filter_map(Strategy::standard).collect(),
            rounds: 30,
            solve: false,
            limits: Limits::default(),
            engine: EngineChoice::Embedded,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub density: Option<f64>,
    pub strategy: String,
    /// `⌈LB_last⌉ − ⌈LB_0⌉` over the root loop.
    pub impr: i64,
    /// Seconds until the best rounded bound was first reached.
    pub time: f64,
    /// Cuts added until the best rounded bound was first reached.
    pub cuts: usize,
    /// Solved to optimality (with `solve`), or root bound meeting the
    /// initial upper bound (without).
    pub solved: bool,
    pub nodes: usize,
    pub total_time: f64,
    pub error: Option<String>,
}

fn run_one(inst: &BenchInstance, strategy: &Strategy, config: &BenchConfig) -> BenchRow {
    let start = Instant::now();
    let mut row = BenchRow {
        instance: inst.id.clone(),
        n: inst.graph.n(),
        density: inst.density,
        strategy: strategy.to_string(),
        impr: 0,
        time: 0.0,
        cuts: 0,
        solved: false,
        nodes: 0,
        total_time: 0.0,
        error: None,
    };
    let outcome = if config.solve {
        let sc = SolveConfig {
            strategy: strategy.clone(),
            rounds: config.rounds,
            limits: config.limits,
            engine: config.engine.clone(),
        };
        cut_and_branch(&inst.graph, &sc).map(|r| {
            row.solved = r.status == SolveStatus::Optimal;
            row.nodes = r.nodes;
            r.root
        })
    } else {
        root_cut_loop(&inst.graph, strategy, config.rounds, &config.engine).map(|(bounds, r)| {
            row.solved = round_bound(r.final_bound()) >= bounds.ub as i64;
            Some(r)
        })
    };
    match outcome {
        Ok(Some(r)) => {
            row.impr = r.impr;
            row.time = r.time_to_best;
            row.cuts = r.cuts_to_best;
        }
        // Presolved instances have no root loop.
        Ok(None) => {}
        Err(e) => row.error = Some(e.to_string()),
    }
    row.total_time = start.elapsed().as_secs_f64();
    row
}

/// One row per `(instance, strategy)`, ordered by instance then strategy.
/// Failures are recorded in the row and the battery continues.
pub fn run_benchmark(instances: &[BenchInstance], config: &BenchConfig) -> Vec<BenchRow> {
    let jobs: Vec<(&BenchInstance, &Strategy)> =
        instances.iter().flat_map(|i| config.strategies.iter().map(move |s| (i, s))).collect();
    jobs.into_par_iter().map(|(i, s)| run_one(i, s, config)).collect()
}

/// Mean of the numeric columns per `(density, strategy)`, in order of first
/// appearance. `solved` becomes the solved fraction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchAverage {
    pub density: Option<f64>,
    pub strategy: String,
    pub count: usize,
    pub impr: f64,
    pub time: f64,
    pub cuts: f64,
    pub solved: f64,
    pub nodes: f64,
    pub total_time: f64,
}

pub fn averages(rows: &[BenchRow]) -> Vec<BenchAverage> {
    let mut keys: Vec<(Option<f64>, String)> = Vec::new();
    for r in rows {
        let key = (r.density, r.strategy.clone());
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(density, strategy)| {
            let group: Vec<&BenchRow> =
                rows.iter().filter(|r| r.density == density && r.strategy == strategy && r.error.is_none()).collect();
            let count = group.len();
            let mean = |f: &dyn Fn(&BenchRow) -> f64| {
                if count == 0 {
                    0.0
                } else {
                    group.iter().map(|r| f(r)).sum::<f64>() / count as f64
                }
            };
            BenchAverage {
                density,
                strategy,
                count,
                impr: mean(&|r| r.impr as f64),
                time: mean(&|r| r.time),
                cuts: mean(&|r| r.cuts as f64),
                solved: mean(&|r| f64::from(u8::from(r.solved))),
                nodes: mean(&|r| r.nodes as f64),
                total_time: mean(&|r| r.total_time),
            }
        })
        .collect()
}

fn density_cell(d: Option<f64>) -> String {
    d.map(|d| format!("{d:.1}")).unwrap_or_default()
}

/// Writes the rows and then one `avg` row per `(density, strategy)`.
pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.instance.clone(),
            r.n.to_string(),
            density_cell(r.density),
            r.strategy.clone(),
            r.impr.to_string(),
            format!("{:.4}", r.time),
            r.cuts.to_string(),
            u8::from(r.solved).to_string(),
            r.nodes.to_string(),
            format!("{:.4}", r.total_time),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    for a in averages(rows) {
        let n = rows.iter().find(|r| r.density == a.density).map(|r| r.n.to_string()).unwrap_or_default();
        w.write_record([
            "avg".to_string(),
            n,
            density_cell(a.density),
            a.strategy.clone(),
            format!("{:.3}", a.impr),
            format!("{:.4}", a.time),
            format!("{:.3}", a.cuts),
            format!("{:.3}", a.solved),
            format!("{:.3}", a.nodes),
            format!("{:.4}", a.total_time),
            String::new(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonReport<'a> {
    rows: &'a [BenchRow],
    averages: Vec<BenchAverage>,
}

pub fn to_json(rows: &[BenchRow]) -> Result<String> {
    Ok(serde_json::to_string_pretty(&JsonReport { rows, averages: averages(rows) })?)
}
