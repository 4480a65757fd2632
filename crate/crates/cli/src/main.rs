use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use eqcol_core::bench::{random_battery, run_benchmark, to_json, write_csv, BenchConfig, BenchInstance};
use eqcol_core::cuts::CutRow;
use eqcol_core::graph::Graph;
use eqcol_core::io::{fixture, parse_dimacs, random_graph, write_dimacs, FIXTURES};
use eqcol_core::lp::EngineChoice;
use eqcol_core::polytope::{verify_dimension, verify_face, FaceStatus};
use eqcol_core::separation::Strategy;
use eqcol_core::solver::{cut_and_branch, root_cut_loop, Limits, SolveConfig, SolveStatus};
use eqcol_core::Error;

const EXIT_PARSE: u8 = 2;
const EXIT_CONFIG: u8 = 3;
const EXIT_TIME_LIMIT: u8 = 4;

/// Equitable coloring by cut-and-branch, with polytope verification tools.
#[derive(Parser)]
#[command(name = "eqcol", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the equitable chromatic number.
    Solve(SolveArgs),
    /// Run the root cutting-plane loop only and report the bound trajectory.
    Cutloop(CutloopArgs),
    /// Check the dimension formula and classify cut rows as faces or facets.
    Verify(VerifyArgs),
    /// Root-loop (or full solve) battery over random graphs, written as CSV.
    Bench(BenchArgs),
    /// Write a random graph in DIMACS format.
    Gen(GenArgs),
    /// Solve one LP file with the embedded engine (external engine protocol).
    #[command(hide = true)]
    LpSolve { problem: PathBuf, solution: PathBuf },
}

#[derive(Args)]
struct EngineArgs {
    /// LP engine: `embedded`, or a program called as
    /// `program [lp-arg..] <problem-file> <solution-file>`.
    #[arg(long, default_value = "embedded")]
    engine: String,
    /// Extra argument for an external engine (repeatable).
    #[arg(long = "lp-arg", allow_hyphen_values = true)]
    lp_args: Vec<String>,
}

impl EngineArgs {
    fn choice(&self) -> EngineChoice {
        if self.engine == "embedded" {
            EngineChoice::Embedded
        } else {
            EngineChoice::External { program: self.engine.clone().into(), args: self.lp_args.clone() }
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// DIMACS file, `random:N,DENSITY,SEED` or `fixture:NAME`.
    input: String,
    #[arg(long, default_value = "S4")]
    strategy: Strategy,
    #[arg(long, default_value_t = 30)]
    rounds: usize,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    node_limit: Option<usize>,
    #[command(flatten)]
    engine: EngineArgs,
    /// Write the report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the best coloring, one `vertex color` line per vertex.
    #[arg(long)]
    coloring: Option<PathBuf>,
    /// Write the root cuts, one per line.
    #[arg(long)]
    cuts: Option<PathBuf>,
}

#[derive(Args)]
struct CutloopArgs {
    input: String,
    #[arg(long, default_value = "S4")]
    strategy: Strategy,
    #[arg(long, default_value_t = 30)]
    rounds: usize,
    #[command(flatten)]
    engine: EngineArgs,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    cuts: Option<PathBuf>,
    /// Print one line per added cut.
    #[arg(long)]
    log: bool,
}

#[derive(Args)]
struct VerifyArgs {
    input: String,
    /// Skip the dimension check.
    #[arg(long)]
    no_dimension: bool,
    /// A cut row in text form (repeatable).
    #[arg(long = "cut")]
    cut_rows: Vec<String>,
    /// File with one cut row per line (`#` starts a comment).
    #[arg(long)]
    cuts: Option<PathBuf>,
    /// Face points generated per row beyond exhaustive enumeration.
    #[arg(long)]
    effort: Option<usize>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 30)]
    n: usize,
    #[arg(long, value_delimiter = ',', default_value = "30,50,70,90")]
    densities: Vec<f64>,
    /// Seed range `A..B` (inclusive) or a comma list.
    #[arg(long, default_value = "1..10")]
    seeds: String,
    #[arg(long, value_delimiter = ',', default_value = "S1,S2,S3,S4,S5,S6,S7")]
    strategies: Vec<Strategy>,
    #[arg(long, default_value_t = 30)]
    rounds: usize,
    /// Branch and bound after the root loop.
    #[arg(long)]
    solve: bool,
    /// Per-run time limit in seconds (with `--solve`).
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    node_limit: Option<usize>,
    /// Extra DIMACS instances to include.
    #[arg(long = "file")]
    files: Vec<PathBuf>,
    #[command(flatten)]
    engine: EngineArgs,
    /// CSV output (stdout when omitted).
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    density: f64,
    #[arg(long)]
    seed: u64,
    /// Output file (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn load_graph(spec: &str) -> Result<Graph> {
    if let Some(rest) = spec.strip_prefix("random:") {
        let parts: Vec<&str> = rest.split(',').collect();
        let [n, d, seed] = parts[..] else {
            return Err(Error::InvalidConfig(format!("random spec {rest:?} is not N,DENSITY,SEED")).into());
        };
        let bad = |what: &str| Error::InvalidConfig(format!("bad {what} in random spec {rest:?}"));
        let n: usize = n.trim().parse().map_err(|_| bad("vertex count"))?;
        let d: f64 = d.trim().parse().map_err(|_| bad("density"))?;
        let seed: u64 = seed.trim().parse().map_err(|_| bad("seed"))?;
        return Ok(random_graph(n, d, seed)?);
    }
    if let Some(name) = spec.strip_prefix("fixture:") {
        return fixture(name)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown fixture {name:?}; known: {}", FIXTURES.join(", "))).into());
    }
    let text = fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
    parse_dimacs(&text).with_context(|| format!("parsing {spec}"))
}

fn limits(time: Option<f64>, nodes: Option<usize>) -> Result<Limits> {
    let time = match time {
        Some(t) if !(t.is_finite() && t >= 0.0) => bail!(Error::InvalidConfig(format!("time limit {t} must be non-negative"))),
        t => t.map(Duration::from_secs_f64),
    };
    Ok(Limits { time, nodes })
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cuts_text(cuts: &[CutRow]) -> String {
    cuts.iter().map(|c| format!("{c}\n")).collect()
}

fn solve(args: SolveArgs) -> Result<ExitCode> {
    let g = load_graph(&args.input)?;
    let config = SolveConfig {
        strategy: args.strategy,
        rounds: args.rounds,
        limits: limits(args.time_limit, args.node_limit)?,
        engine: args.engine.choice(),
    };
    let r = cut_and_branch(&g, &config)?;
    match r.chi_eq {
        Some(chi) => println!("chi_eq {chi}"),
        None => println!("time limit: {} <= chi_eq <= {}", r.lower_bound, r.best),
    }
    println!(
        "initial bounds [{}, {}], nodes {}, {:.3}s{}",
        r.initial_lb,
        r.initial_ub,
        r.nodes,
        r.total_seconds,
        if r.presolved { ", presolved" } else { "" }
    );
    if let Some(root) = &r.root {
        println!("root: impr {}, {} cuts, bound {:.4}", root.impr, root.cuts.len(), root.final_bound());
    }
    if let Some(p) = &args.json {
        fs::write(p, serde_json::to_string_pretty(&r)?)?;
    }
    if let Some(p) = &args.coloring {
        let text: String = r.incumbent.colors().iter().enumerate().map(|(i, c)| format!("{} {c}\n", i + 1)).collect();
        fs::write(p, text)?;
    }
    if let Some(p) = &args.cuts {
        fs::write(p, r.root.as_ref().map(|root| cuts_text(&root.cuts)).unwrap_or_default())?;
    }
    Ok(if r.status == SolveStatus::TimeLimit { ExitCode::from(EXIT_TIME_LIMIT) } else { ExitCode::SUCCESS })
}

fn cutloop(args: CutloopArgs) -> Result<ExitCode> {
    let g = load_graph(&args.input)?;
    let (bounds, r) = root_cut_loop(&g, &args.strategy, args.rounds, &args.engine.choice())?;
    println!("bounds [{}, {}], strategy {}", bounds.lb, bounds.ub, args.strategy);
    println!("round\tlb\tcuts\tseconds");
    for (i, lb) in r.lb_trajectory.iter().enumerate() {
        println!("{i}\t{lb:.6}\t{}\t{:.4}", r.cuts_trajectory[i], r.time_trajectory[i]);
    }
    println!("impr {}, time {:.4}s, cuts {}", r.impr, r.time_to_best, r.cuts_to_best);
    if args.log {
        for line in &r.log {
            println!("{line}");
        }
    }
    if let Some(p) = &args.json {
        fs::write(p, serde_json::to_string_pretty(&r)?)?;
    }
    if let Some(p) = &args.cuts {
        fs::write(p, cuts_text(&r.cuts))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let g = load_graph(&args.input)?;
    let mut ok = true;
    if !args.no_dimension {
        let r = verify_dimension(&g)?;
        println!(
            "dimension: {:?} path, dim {}, rank {} over {} points, equations {}: {}",
            r.path,
            r.dim_ecp,
            r.rank,
            r.points,
            if r.equations_hold { "hold" } else { "fail" },
            if r.holds() { "ok" } else { "MISMATCH" }
        );
        ok &= r.holds();
    }
    let mut rows = Vec::new();
    for text in &args.cut_rows {
        rows.push(CutRow::parse(text)?);
    }
    if let Some(p) = &args.cuts {
        let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = match CutRow::parse(line) {
                Err(Error::Parse { msg, .. }) => Err(Error::Parse { line: i + 1, msg }),
                other => other,
            };
            rows.push(row.with_context(|| format!("parsing {}", p.display()))?);
        }
    }
    for row in &rows {
        if row.n != g.n() {
            bail!(Error::InvalidConfig(format!("row has n = {}, graph has {} vertices", row.n, g.n())));
        }
        let v = verify_face(&g, row, args.effort)?;
        println!("{}", v.report(&args.input, row));
        ok &= v.status != FaceStatus::Invalid;
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn parse_seeds(spec: &str) -> Result<Vec<u64>> {
    let bad = || Error::InvalidConfig(format!("bad seed list {spec:?}"));
    if let Some((a, b)) = spec.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
        return Ok((a..=b).collect());
    }
    spec.split(',').map(|s| s.trim().parse().map_err(|_| bad().into())).collect()
}

fn bench(args: BenchArgs) -> Result<ExitCode> {
    let seeds = parse_seeds(&args.seeds)?;
    let mut instances = if args.n == 0 { Vec::new() } else { random_battery(args.n, &args.densities, seeds)? };
    for f in &args.files {
        let graph = load_graph(&f.display().to_string())?;
        let id = f.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| f.display().to_string());
        instances.push(BenchInstance { id, graph, density: None });
    }
    let config = BenchConfig {
        strategies: args.strategies,
        rounds: args.rounds,
        solve: args.solve,
        limits: limits(args.time_limit, args.node_limit)?,
        engine: args.engine.choice(),
    };
    let rows = run_benchmark(&instances, &config);
    let mut csv = Vec::new();
    write_csv(&rows, &mut csv)?;
    write_output(args.csv.as_deref(), &String::from_utf8(csv)?)?;
    if let Some(p) = &args.json {
        fs::write(p, to_json(&rows)?)?;
    }
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        eprintln!("{failed} of {} runs failed; see the error column", rows.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn gen(args: GenArgs) -> Result<ExitCode> {
    let g = random_graph(args.n, args.density, args.seed)?;
    let comment = format!("random graph n={} density={} seed={} (SplitMix64)", args.n, args.density, args.seed);
    write_output(args.output.as_deref(), &write_dimacs(&g, Some(&comment)))?;
    Ok(ExitCode::SUCCESS)
}

fn lp_solve(problem: &Path, solution: &Path) -> Result<ExitCode> {
    use eqcol_simplex::format::{read_problem, write_solution};
    let text = fs::read_to_string(problem).with_context(|| format!("reading {}", problem.display()))?;
    let p = read_problem(&text)?;
    let sol = eqcol_simplex::solve(&p)?;
    fs::write(solution, write_solution(&sol))?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve(a) => solve(a),
        Command::Cutloop(a) => cutloop(a),
        Command::Verify(a) => verify(a),
        Command::Bench(a) => bench(a),
        Command::Gen(a) => gen(a),
        Command::LpSolve { problem, solution } => lp_solve(&problem, &solution),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::Parse { .. }) => EXIT_PARSE,
        Some(Error::InvalidConfig(_) | Error::Infeasible(_) | Error::TooLarge(_) | Error::Assumptions(_)) => EXIT_CONFIG,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
