//! The five searchers and their shared result/instrumentation types.

mod alphabeta;
mod enhanced;
mod history;
mod minimax;
mod sss;

use std::cell::RefCell;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::game::{Game, Player, Score};
use crate::open_list::OpenError;
use crate::transposition::{TtError, DEFAULT_CAPACITY};

pub use alphabeta::alphabeta;
pub use enhanced::{alphabeta_enhanced, mt_sss, mt_sss_traced, EnhancedSearch};
pub use history::HistoryTable;
pub use minimax::minimax;
pub use sss::{gamma_step, sss_star, Node, Snapshot, SssSearch, StepCase, StepRecord};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Leaf evaluations summed over every iteration and pass.
    pub leaf_evals: u64,
    /// Leaf evaluations in the last iterative-deepening iteration.
    pub leaf_evals_final_iter: u64,
    pub interior_expansions: u64,
    pub tt_probes: u64,
    pub tt_hits: u64,
    pub tt_stores: u64,
    pub open_peak: u64,
    pub gamma_iterations: u64,
    pub elapsed_ns: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult<M> {
    pub value: Score,
    pub best_move: Option<M>,
    pub stats: SearchStats,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("root window ({alpha}, {beta}) is empty")]
    BadWindow { alpha: Score, beta: Score },
    #[error("depth must be at least {min}, got {depth}")]
    BadDepth { depth: u32, min: u32 },
    #[error("root position is terminal")]
    TerminalRoot,
    #[error("node budget of {0} leaf evaluations exceeded")]
    BudgetExceeded(u64),
    #[error("SSS* step budget of {0} steps exceeded")]
    StepBudgetExceeded(u64),
    #[error("OPEN list inconsistency: {0}")]
    Open(#[from] OpenError),
    #[error("gamma operator invariant violated: {0}")]
    GammaViolation(String),
    #[error("transposition table: {0}")]
    Tt(#[from] TtError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub tt_capacity: usize,
    /// Abort once a single search evaluates more leaves than this.
    pub node_budget: Option<u64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { tt_capacity: DEFAULT_CAPACITY, node_budget: None }
    }
}

/// Leaf/interior counting with an optional budget.
#[derive(Debug, Default)]
pub struct Meter {
    pub stats: SearchStats,
    budget: Option<u64>,
}

impl Meter {
    pub fn new(budget: Option<u64>) -> Self {
        Meter { stats: SearchStats::default(), budget }
    }

    pub fn leaf(&mut self) -> Result<(), SearchError> {
        self.stats.leaf_evals += 1;
        match self.budget {
            Some(b) if self.stats.leaf_evals > b => Err(SearchError::BudgetExceeded(b)),
            _ => Ok(()),
        }
    }

    pub fn interior(&mut self) {
        self.stats.interior_expansions += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Engine {
    Minimax,
    AlphaBeta,
    AlphaBetaEnhanced,
    Sss,
    MtSss,
}

impl Engine {
    pub const ALL: [Engine; 5] =
        [Engine::Minimax, Engine::AlphaBeta, Engine::AlphaBetaEnhanced, Engine::Sss, Engine::MtSss];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Minimax => "minimax",
            Engine::AlphaBeta => "ab",
            Engine::AlphaBetaEnhanced => "ab_enhanced",
            Engine::Sss => "sss",
            Engine::MtSss => "mt_sss",
        }
    }

    /// Full-window search of `root` to `depth` plies.
    pub fn search<G: Game>(
        self,
        game: &G,
        root: &G::State,
        depth: u32,
        config: &SearchConfig,
    ) -> Result<SearchResult<G::Move>, SearchError> {
        use crate::game::INF;
        match self {
            Engine::Minimax => minimax(game, root, depth, config.node_budget),
            Engine::AlphaBeta => alphabeta(game, root, depth, -INF, INF, config.node_budget),
            Engine::AlphaBetaEnhanced => alphabeta_enhanced(game, root, depth, config),
            Engine::Sss => sss_star(game, root, depth, config.node_budget),
            Engine::MtSss => mt_sss(game, root, depth, config),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown engine {0:?} (expected minimax, ab, ab_enhanced, sss or mt_sss)")]
pub struct UnknownEngine(pub String);

impl FromStr for Engine {
    type Err = UnknownEngine;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Engine::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| UnknownEngine(s.to_string()))
    }
}

/// A move whose subtree carries the root value, as chosen by `engine`.
pub fn pick_best_move<G: Game>(
    game: &G,
    root: &G::State,
    depth: u32,
    engine: Engine,
    config: &SearchConfig,
) -> Result<G::Move, SearchError> {
    if depth < 1 {
        return Err(SearchError::BadDepth { depth, min: 1 });
    }
    if game.is_terminal(root) {
        return Err(SearchError::TerminalRoot);
    }
    let r = engine.search(game, root, depth, config)?;
    Ok(r.best_move.expect("non-terminal root searched to depth >= 1 has a best move"))
}

/// Wraps a game and records the key of every state passed to `eval`.
pub struct Recorder<'g, G: Game> {
    inner: &'g G,
    evaluated: RefCell<Vec<u64>>,
}

impl<'g, G: Game> Recorder<'g, G> {
    pub fn new(inner: &'g G) -> Self {
        Recorder { inner, evaluated: RefCell::new(Vec::new()) }
    }

    pub fn evaluated(&self) -> Vec<u64> {
        self.evaluated.borrow().clone()
    }

    pub fn clear(&self) {
        self.evaluated.borrow_mut().clear();
    }
}

impl<G: Game> Game for Recorder<'_, G> {
    type State = G::State;
    type Move = G::Move;

    fn moves(&self, s: &G::State) -> Vec<G::Move> {
        self.inner.moves(s)
    }

    fn apply(&self, s: &G::State, mv: G::Move) -> G::State {
        self.inner.apply(s, mv)
    }

    fn eval(&self, s: &G::State) -> Score {
        self.evaluated.borrow_mut().push(self.inner.key(s));
        self.inner.eval(s)
    }

    fn key(&self, s: &G::State) -> u64 {
        self.inner.key(s)
    }

    fn player(&self, s: &G::State) -> Player {
        self.inner.player(s)
    }

    fn is_terminal(&self, s: &G::State) -> bool {
        self.inner.is_terminal(s)
    }

    fn history_slot(&self, mv: G::Move) -> Option<usize> {
        self.inner.history_slot(mv)
    }
}
