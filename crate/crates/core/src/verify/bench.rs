//! Leaf-count benchmark over a suite of Othello positions.

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::VerifyError;
use crate::game::{Game, Score};
use crate::othello::{self, Board, Move, OthelloGame};
use crate::search::{Engine, SearchConfig};

pub const CSV_HEADER: [&str; 13] = [
    "position_id",
    "engine",
    "depth",
    "leaf_evals",
    "leaf_evals_final_iter",
    "interior_expansions",
    "tt_probes",
    "tt_hits",
    "open_peak",
    "gamma_iterations",
    "elapsed_ns",
    "root_value",
    "best_move",
];

/// Largest playout length a suite may ask for.
pub const MAX_SUITE_PLY: u32 = 58;

pub const MAX_BENCH_DEPTH: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteParams {
    pub seed: u64,
    pub count: usize,
    pub min_ply: u32,
    pub max_ply: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Suite {
    pub positions: Vec<(usize, Board)>,
    /// Present when the suite was generated rather than read from a file.
    pub params: Option<SuiteParams>,
}

impl Suite {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// One position per line, newline-terminated.
    pub fn to_text(&self) -> String {
        self.positions.iter().map(|(_, b)| othello::format_position(b) + "\n").collect()
    }

    /// Blank lines and `#` comments are skipped; ids number the positions from 0.
    pub fn parse(text: &str) -> Result<Suite, VerifyError> {
        let mut positions = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let board =
                othello::parse_position(line).map_err(|source| VerifyError::SuiteLine { line: lineno + 1, source })?;
            positions.push((positions.len(), board));
        }
        Ok(Suite { positions, params: None })
    }
}

/// Seeded random playouts from the start position. Each position is played to
/// a ply drawn uniformly from `min_ply..=max_ply`; playouts that end the game
/// early or stop on a forced pass are re-rolled.
pub fn gen_suite(seed: u64, count: usize, min_ply: u32, max_ply: u32) -> Result<Suite, VerifyError> {
    if min_ply > max_ply || max_ply > MAX_SUITE_PLY {
        return Err(VerifyError::PlyRange { min_ply, max_ply });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positions = Vec::with_capacity(count);
    while positions.len() < count {
        let ply = rng.gen_range(min_ply..=max_ply);
        let mut board = othello::initial_board();
        let mut ok = true;
        for _ in 0..ply {
            match othello::legal_moves(&board).choose(&mut rng) {
                Some(&mv) => board = othello::apply_move(&board, mv).expect("legal move"),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && othello::legal_moves(&board).first().is_some_and(|m| *m != Move::Pass) {
            positions.push((positions.len(), board));
        }
    }
    Ok(Suite { positions, params: Some(SuiteParams { seed, count, min_ply, max_ply }) })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRecord {
    pub position_id: usize,
    pub engine: Engine,
    pub depth: u32,
    pub leaf_evals: u64,
    pub leaf_evals_final_iter: u64,
    pub interior_expansions: u64,
    pub tt_probes: u64,
    pub tt_hits: u64,
    pub open_peak: u64,
    pub gamma_iterations: u64,
    pub elapsed_ns: u64,
    pub root_value: Score,
    pub best_move: String,
}

#[derive(Debug, Clone, Copy)]
pub struct BenchOptions {
    pub search: SearchConfig,
    /// Evaluate positions on the rayon pool. Output is identical either way.
    pub parallel: bool,
    /// Record wall-clock time; otherwise `elapsed_ns` is written as 0 so
    /// repeated runs produce identical output.
    pub timing: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions { search: SearchConfig::default(), parallel: true, timing: false }
    }
}

/// Runs every engine at every depth on one root, checking that all engines
/// agree on the value at each depth.
pub fn bench_position<G>(
    game: &G,
    root: &G::State,
    position_id: usize,
    engines: &[Engine],
    depths: RangeInclusive<u32>,
    opts: &BenchOptions,
) -> Result<Vec<BenchRecord>, VerifyError>
where
    G: Game,
    G::Move: fmt::Display,
{
    let mut out = Vec::new();
    for depth in depths {
        let mut first: Option<(Engine, Score)> = None;
        for &engine in engines {
            let r = engine.search(game, root, depth, &opts.search).map_err(|source| VerifyError::Search {
                position_id,
                engine,
                depth,
                source,
            })?;
            match first {
                None => first = Some((engine, r.value)),
                Some((e, v)) if v != r.value => {
                    return Err(VerifyError::Disagreement {
                        position_id,
                        depth,
                        engine_a: e,
                        value_a: v,
                        engine_b: engine,
                        value_b: r.value,
                    })
                }
                Some(_) => {}
            }
            let s = r.stats;
            out.push(BenchRecord {
                position_id,
                engine,
                depth,
                leaf_evals: s.leaf_evals,
                leaf_evals_final_iter: s.leaf_evals_final_iter,
                interior_expansions: s.interior_expansions,
                tt_probes: s.tt_probes,
                tt_hits: s.tt_hits,
                open_peak: s.open_peak,
                gamma_iterations: s.gamma_iterations,
                elapsed_ns: if opts.timing { s.elapsed_ns } else { 0 },
                root_value: r.value,
                best_move: r.best_move.map_or_else(|| "-".to_string(), |m| m.to_string()),
            });
        }
    }
    Ok(out)
}

/// One record per (position, depth, engine), in that nesting order.
pub fn run_suite(
    suite: &Suite,
    engines: &[Engine],
    depths: RangeInclusive<u32>,
    opts: &BenchOptions,
) -> Result<Vec<BenchRecord>, VerifyError> {
    if *depths.start() < 1 || *depths.end() > MAX_BENCH_DEPTH || depths.is_empty() {
        return Err(VerifyError::DepthRange(*depths.start(), *depths.end()));
    }
    let run = |&(id, board): &(usize, Board)| {
        bench_position(&OthelloGame::rooted_at(&board), &board, id, engines, depths.clone(), opts)
    };
    let per_position: Vec<Result<Vec<BenchRecord>, VerifyError>> = if opts.parallel {
        suite.positions.par_iter().map(run).collect()
    } else {
        suite.positions.iter().map(run).collect()
    };
    let mut out = Vec::new();
    for r in per_position {
        out.extend(r?);
    }
    Ok(out)
}

pub fn write_csv<W: io::Write>(records: &[BenchRecord], writer: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.position_id.to_string(),
            r.engine.name().to_string(),
            r.depth.to_string(),
            r.leaf_evals.to_string(),
            r.leaf_evals_final_iter.to_string(),
            r.interior_expansions.to_string(),
            r.tt_probes.to_string(),
            r.tt_hits.to_string(),
            r.open_peak.to_string(),
            r.gamma_iterations.to_string(),
            r.elapsed_ns.to_string(),
            r.root_value.to_string(),
            r.best_move.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn geometric_mean(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.into_iter().fold((0.0, 0usize), |(s, n), v| (s + v.ln(), n + 1));
    (n > 0).then(|| (sum / n as f64).exp())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Growth {
    /// (d, mean over positions of leaf(d+1)/leaf(d))
    pub transitions: Vec<(u32, f64)>,
    /// Mean factor for steps from an even depth to the following odd depth.
    pub even_to_odd: Option<f64>,
    pub odd_to_even: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    /// depth -> engine -> geometric mean of summed leaf evaluations
    pub geo_means: BTreeMap<u32, BTreeMap<Engine, f64>>,
    pub growth: BTreeMap<Engine, Growth>,
}

impl Summary {
    pub fn ratio(&self, depth: u32, num: Engine, den: Engine) -> Option<f64> {
        let m = self.geo_means.get(&depth)?;
        Some(m.get(&num)? / m.get(&den)?)
    }

    pub fn depths(&self) -> impl Iterator<Item = u32> + '_ {
        self.geo_means.keys().copied()
    }
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

pub fn summarize(records: &[BenchRecord]) -> Result<Summary, VerifyError> {
    if records.is_empty() {
        return Err(VerifyError::NoRecords);
    }
    let mut leafs: BTreeMap<(Engine, u32), Vec<f64>> = BTreeMap::new();
    let mut by_cell: BTreeMap<(Engine, usize, u32), u64> = BTreeMap::new();
    for r in records {
        leafs.entry((r.engine, r.depth)).or_default().push(r.leaf_evals.max(1) as f64);
        by_cell.insert((r.engine, r.position_id, r.depth), r.leaf_evals.max(1));
    }
    let mut geo_means: BTreeMap<u32, BTreeMap<Engine, f64>> = BTreeMap::new();
    for ((engine, depth), v) in &leafs {
        geo_means.entry(*depth).or_default().insert(*engine, geometric_mean(v.iter().copied()).unwrap());
    }

    let mut factors: BTreeMap<(Engine, u32), Vec<f64>> = BTreeMap::new();
    for (&(engine, pos, depth), &n) in &by_cell {
        if let Some(&next) = by_cell.get(&(engine, pos, depth + 1)) {
            factors.entry((engine, depth)).or_default().push(next as f64 / n as f64);
        }
    }
    let mut growth: BTreeMap<Engine, Growth> = BTreeMap::new();
    let mut parity: BTreeMap<(Engine, bool), Vec<f64>> = BTreeMap::new();
    for (&(engine, depth), f) in &factors {
        let m = mean(f).unwrap();
        growth
            .entry(engine)
            .or_insert_with(|| Growth { transitions: Vec::new(), even_to_odd: None, odd_to_even: None })
            .transitions
            .push((depth, m));
        parity.entry((engine, depth % 2 == 0)).or_default().extend(f.iter().copied());
    }
    for (engine, g) in growth.iter_mut() {
        g.even_to_odd = parity.get(&(*engine, true)).and_then(|v| mean(v));
        g.odd_to_even = parity.get(&(*engine, false)).and_then(|v| mean(v));
    }
    Ok(Summary { geo_means, growth })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.3}"))
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let engines: Vec<Engine> = {
            let mut e: Vec<Engine> = self.geo_means.values().flat_map(|m| m.keys().copied()).collect();
            e.sort();
            e.dedup();
            e
        };
        writeln!(f, "geometric mean leaf evaluations per depth")?;
        write!(f, "{:>5}", "depth")?;
        for e in &engines {
            write!(f, " {:>14}", e.name())?;
        }
        let ratio = engines.contains(&Engine::MtSss) && engines.contains(&Engine::AlphaBetaEnhanced);
        if ratio {
            write!(f, " {:>22}", "mt_sss/ab_enhanced")?;
        }
        writeln!(f)?;
        for (depth, m) in &self.geo_means {
            write!(f, "{depth:>5}")?;
            for e in &engines {
                write!(f, " {:>14}", m.get(e).map_or_else(|| "-".to_string(), |v| format!("{v:.1}")))?;
            }
            if ratio {
                write!(f, " {:>22}", fmt_opt(self.ratio(*depth, Engine::MtSss, Engine::AlphaBetaEnhanced)))?;
            }
            writeln!(f)?;
        }
        writeln!(f)?;
        writeln!(f, "growth factor leaf(d+1)/leaf(d), mean over positions")?;
        for (engine, g) in &self.growth {
            let steps: Vec<String> = g.transitions.iter().map(|(d, m)| format!("{d}->{}: {m:.3}", d + 1)).collect();
            writeln!(f, "{:>12}  {}", engine.name(), steps.join("  "))?;
            let verdict = match (g.even_to_odd, g.odd_to_even) {
                (Some(a), Some(b)) if a > b => "even->odd exceeds odd->even",
                (Some(_), Some(_)) => "even->odd does not exceed odd->even",
                _ => "not enough depths to compare",
            };
            writeln!(
                f,
                "{:>12}  even->odd {}  odd->even {}  ({verdict})",
                "",
                fmt_opt(g.even_to_odd),
                fmt_opt(g.odd_to_even)
            )?;
        }
        Ok(())
    }
}
