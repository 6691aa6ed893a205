//! Strategy theory checks, property suites over synthetic trees and the
//! Othello benchmark harness.

mod bench;
mod properties;
mod strategy;

use thiserror::Error;

use crate::game::Score;
use crate::othello::OthelloError;
use crate::search::{Engine, SearchError};
use crate::synthetic::TreeError;

pub use bench::{
    bench_position, gen_suite, geometric_mean, run_suite, summarize, write_csv, BenchOptions, BenchRecord, Growth,
    Suite, SuiteParams, Summary, CSV_HEADER, MAX_BENCH_DEPTH, MAX_SUITE_PLY,
};
pub use properties::{
    check_dominance, check_mt_equivalence, check_open_peak, check_oracle, check_strategies, check_tt_brackets,
    open_peak_bound, oracle_trees, run_tree, run_verify, strategy_trees, PropertyOutcome, TreeRun, VerifyConfig,
    VerifyReport,
};
pub use strategy::{
    check_strategy_theorem, cluster_cover, enumerate_strategies, strategy_count, strategy_theorem, strategy_value,
    Strategy, TheoremReport, STRATEGY_GUARD,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("tree has more than {0} strategies")]
    StrategyGuard(u64),
    #[error("ply range {min_ply}..{max_ply} is invalid (need min <= max <= {MAX_SUITE_PLY})")]
    PlyRange { min_ply: u32, max_ply: u32 },
    #[error("depth range {0}..{1} is outside 1..{MAX_BENCH_DEPTH}")]
    DepthRange(u32, u32),
    #[error("suite line {line}: {source}")]
    SuiteLine { line: usize, source: OthelloError },
    #[error("position {position_id}, engine {engine}, depth {depth}: {source}")]
    Search { position_id: usize, engine: Engine, depth: u32, source: SearchError },
    #[error(
        "engines disagree on position {position_id} at depth {depth}: \
         {engine_a} = {value_a}, {engine_b} = {value_b}"
    )]
    Disagreement { position_id: usize, depth: u32, engine_a: Engine, value_a: Score, engine_b: Engine, value_b: Score },
    #[error("no benchmark records to summarize")]
    NoRecords,
    #[error(transparent)]
    Tree(#[from] TreeError),
}
