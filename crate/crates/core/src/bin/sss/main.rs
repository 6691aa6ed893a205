//! `sss`: suite generation, benchmarking, verification, SSS* traces,
//! strategy listings and single-move queries.

mod dot;

use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use sss_core::game::fmt_score;
use sss_core::othello::{self, Board, OthelloGame};
use sss_core::search::{SssSearch, StepRecord};
use sss_core::synthetic::{parse_u64, SyntheticTree};
use sss_core::verify::{self, BenchOptions, Suite, VerifyConfig, VerifyError};
use sss_core::{Engine, Game, SearchConfig, SearchError};

const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Parser)]
#[command(name = "sss", version, about = "SSS*, alpha-beta and MT-SSS* game-tree search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a suite of Othello positions by seeded random playouts.
    GenSuite(GenSuiteArgs),
    /// Count leaf evaluations of each engine over a suite; write CSV and print a summary.
    Bench(BenchArgs),
    /// Run the property suites on seeded synthetic trees.
    Verify(VerifyArgs),
    /// Print every SSS* step on a synthetic tree or an Othello position.
    Trace(TraceArgs),
    /// Enumerate the strategies of a small synthetic tree.
    Strategies(StrategiesArgs),
    /// Search one Othello position and print the chosen move.
    BestMove(BestMoveArgs),
}

#[derive(Args)]
struct GenSuiteArgs {
    #[arg(long, value_parser = parse_seed)]
    seed: u64,
    #[arg(long)]
    count: usize,
    #[arg(long)]
    min_ply: u32,
    #[arg(long)]
    max_ply: u32,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct SearchArgs {
    /// Transposition table entries, a power of two.
    #[arg(long, default_value_t = sss_core::transposition::DEFAULT_CAPACITY)]
    tt_capacity: usize,
    /// Leaf evaluations allowed per search before it is abandoned.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig { tt_capacity: self.tt_capacity, node_budget: Some(self.node_budget) }
    }
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    suite: PathBuf,
    /// Comma-separated: minimax, ab, ab_enhanced, sss, mt_sss.
    #[arg(long, value_delimiter = ',', required = true)]
    engines: Vec<Engine>,
    /// `A..B` (inclusive) or a single depth.
    #[arg(long, value_parser = parse_depths)]
    depths: RangeInclusive<u32>,
    #[arg(short, long)]
    output: PathBuf,
    #[command(flatten)]
    search: SearchArgs,
    /// Record wall-clock time in `elapsed_ns` (otherwise 0, for reproducible CSV).
    #[arg(long)]
    timing: bool,
    /// Evaluate positions one at a time.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = VerifyConfig::default().trees)]
    trees: usize,
    #[arg(long, default_value_t = VerifyConfig::default().max_depth, value_parser = clap::value_parser!(u32).range(1..))]
    max_depth: u32,
    #[arg(long, value_parser = parse_seed, default_value_t = VerifyConfig::default().seed)]
    seed: u64,
    /// Allow tied leaf values; dominance may then fail.
    #[arg(long)]
    tie_leaves: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("root").required(true).args(["tree", "position"])))]
struct TraceArgs {
    /// Synthetic tree spec, e.g. `w=2,d=4,seed=7`.
    #[arg(long)]
    tree: Option<String>,
    /// Othello position text, or `start`.
    #[arg(long, requires = "depth")]
    position: Option<String>,
    /// Search depth; defaults to the full depth of a synthetic tree.
    #[arg(long)]
    depth: Option<u32>,
    /// Write the searched tree as a DOT graph.
    #[arg(long)]
    dot: Option<PathBuf>,
    #[arg(long, default_value_t = 100_000)]
    max_steps: u64,
}

#[derive(Args)]
struct StrategiesArgs {
    #[arg(long)]
    tree: String,
}

#[derive(Args)]
struct BestMoveArgs {
    /// Othello position text, or `start`.
    #[arg(long)]
    position: String,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    depth: u32,
    #[arg(long, default_value = "mt_sss")]
    engine: Engine,
    #[command(flatten)]
    search: SearchArgs,
}

/// Maps to the process exit status.
enum Failure {
    Usage(String),
    Disagreement(String),
    Position(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Other(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Disagreement(_) => 3,
            Failure::Position(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Disagreement(m) | Failure::Position(m) | Failure::Other(m) => m,
        }
    }
}

fn other(e: impl Display) -> Failure {
    Failure::Other(e.to_string())
}

fn io_err(path: &std::path::Path) -> impl Fn(io::Error) -> Failure + '_ {
    move |e| Failure::Other(format!("{}: {e}", path.display()))
}

fn parse_seed(s: &str) -> Result<u64, String> {
    parse_u64(s).ok_or_else(|| format!("invalid seed {s:?}"))
}

fn parse_depths(s: &str) -> Result<RangeInclusive<u32>, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("invalid depth range {s:?}, expected A..B"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let d = num(s)?;
            (d, d)
        }
    };
    if a < 1 || a > b || b > verify::MAX_BENCH_DEPTH {
        return Err(format!("depth range {a}..{b} must lie within 1..{}", verify::MAX_BENCH_DEPTH));
    }
    Ok(a..=b)
}

fn parse_board(text: &str) -> Result<Board, Failure> {
    if text == "start" {
        return Ok(othello::initial_board());
    }
    othello::parse_position(text).map_err(|e| Failure::Position(format!("invalid position: {e}")))
}

fn search_failure(e: SearchError) -> Failure {
    match e {
        SearchError::TerminalRoot => Failure::Position("position is terminal".into()),
        e => other(e),
    }
}

fn cmd_gen_suite(a: GenSuiteArgs) -> Result<(), Failure> {
    let suite = verify::gen_suite(a.seed, a.count, a.min_ply, a.max_ply).map_err(|e| match e {
        VerifyError::PlyRange { .. } => Failure::Usage(e.to_string()),
        e => other(e),
    })?;
    fs::write(&a.output, suite.to_text()).map_err(io_err(&a.output))?;
    println!("wrote {} positions (seed {:#x}) to {}", suite.len(), a.seed, a.output.display());
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(&a.suite).map_err(io_err(&a.suite))?;
    let suite = Suite::parse(&text).map_err(|e| Failure::Position(format!("{}: {e}", a.suite.display())))?;
    let opts = BenchOptions { search: a.search.config(), parallel: !a.sequential, timing: a.timing };
    let records = verify::run_suite(&suite, &a.engines, a.depths.clone(), &opts).map_err(|e| match e {
        VerifyError::Disagreement { .. } => Failure::Disagreement(e.to_string()),
        VerifyError::DepthRange(..) => Failure::Usage(e.to_string()),
        e => other(e),
    })?;
    let file = fs::File::create(&a.output).map_err(io_err(&a.output))?;
    verify::write_csv(&records, io::BufWriter::new(file)).map_err(other)?;
    println!(
        "{} positions, engines {}, depths {}..{}: {} records written to {}",
        suite.len(),
        a.engines.iter().map(|e| e.name()).collect::<Vec<_>>().join(","),
        a.depths.start(),
        a.depths.end(),
        records.len(),
        a.output.display()
    );
    if !records.is_empty() {
        println!();
        print!("{}", verify::summarize(&records).map_err(other)?);
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Failure> {
    let config = VerifyConfig { trees: a.trees, max_depth: a.max_depth, seed: a.seed, tie_leaves: a.tie_leaves };
    let report = verify::run_verify(&config).map_err(other)?;
    print!("{report}");
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Other("one or more properties failed".into()))
    }
}

fn run_trace<G: Game>(
    game: &G,
    root: &G::State,
    depth: u32,
    max_steps: u64,
    out: &mut impl Write,
) -> Result<Vec<StepRecord>, Failure> {
    let mut search = SssSearch::new(game, root, depth, None);
    let mut records = Vec::new();
    while let Some(rec) = search.step().map_err(search_failure)? {
        writeln!(out, "{rec}").map_err(other)?;
        records.push(rec);
        if !search.is_done() && records.len() as u64 >= max_steps {
            return Err(other(SearchError::StepBudgetExceeded(max_steps)));
        }
    }
    Ok(records)
}

fn cmd_trace(a: TraceArgs) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let graph = if let Some(spec) = &a.tree {
        let tree = SyntheticTree::from_spec(spec).map_err(|e| Failure::Usage(e.to_string()))?;
        let depth = a.depth.unwrap_or(tree.depth()).min(tree.depth());
        let records = run_trace(&tree, &tree.root(), depth, a.max_steps, &mut out)?;
        dot::tree_graph(&tree, depth, &records)
    } else {
        let board = parse_board(a.position.as_deref().expect("clap group"))?;
        let game = OthelloGame::rooted_at(&board);
        if game.is_terminal(&board) {
            return Err(Failure::Position("position is terminal".into()));
        }
        let records = run_trace(&game, &board, a.depth.expect("clap requires"), a.max_steps, &mut out)?;
        dot::visited_graph(&records)
    };
    out.flush().map_err(other)?;
    if let Some(path) = &a.dot {
        fs::write(path, graph).map_err(io_err(path))?;
    }
    Ok(())
}

fn cmd_strategies(a: StrategiesArgs) -> Result<(), Failure> {
    let tree = SyntheticTree::from_spec(&a.tree).map_err(|e| Failure::Usage(e.to_string()))?;
    let all = verify::enumerate_strategies(&tree).map_err(other)?;
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let noun = if all.len() == 1 { "strategy" } else { "strategies" };
    writeln!(out, "{} {noun}", all.len()).map_err(other)?;
    let mut best = None;
    for (i, s) in all.iter().enumerate() {
        let v = verify::strategy_value(&tree, s);
        best = best.max(Some(v));
        let choices: Vec<String> = s.move_choices.iter().map(|(p, c)| format!("{p}->{c}")).collect();
        let leaves: Vec<String> = s.leaf_paths.iter().map(|p| format!("{p}={}", tree.leaf_value(p))).collect();
        writeln!(out, "{:>4} value {v:>6}  choices [{}]  leaves [{}]", i + 1, choices.join(" "), leaves.join(" "))
            .map_err(other)?;
    }
    let report = verify::strategy_theorem(&tree).map_err(other)?;
    writeln!(
        out,
        "max-of-min {}  minimax {}  {}",
        fmt_score(best.expect("at least one strategy")),
        fmt_score(report.minimax),
        if report.holds() { "equal" } else { "DIFFERENT" }
    )
    .map_err(other)?;
    out.flush().map_err(other)
}

fn cmd_best_move(a: BestMoveArgs) -> Result<(), Failure> {
    let board = parse_board(&a.position)?;
    let game = OthelloGame::rooted_at(&board);
    if game.is_terminal(&board) {
        return Err(Failure::Position("position is terminal".into()));
    }
    let r = a.engine.search(&game, &board, a.depth, &a.search.config()).map_err(search_failure)?;
    let mv = r.best_move.expect("non-terminal root has a best move");
    let s = r.stats;
    println!("{mv}");
    println!(
        "engine {} depth {} value {} leaf_evals {} interior_expansions {} tt_probes {} tt_hits {} open_peak {} gamma_iterations {}",
        a.engine,
        a.depth,
        r.value,
        s.leaf_evals,
        s.interior_expansions,
        s.tt_probes,
        s.tt_hits,
        s.open_peak,
        s.gamma_iterations
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::GenSuite(a) => cmd_gen_suite(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Trace(a) => cmd_trace(a),
        Command::Strategies(a) => cmd_strategies(a),
        Command::BestMove(a) => cmd_best_move(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("sss: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
