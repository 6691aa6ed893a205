//! Alpha-beta with a transposition table, history heuristic and iterative
//! deepening, plus MT-SSS*: the same search driven by null windows.

use std::time::Instant;

use super::{HistoryTable, Meter, SearchConfig, SearchError, SearchResult};
use crate::game::{Game, Player, Score, INF};
use crate::transposition::TranspositionTable;

/// Searcher state shared across iterations and null-window passes.
pub struct EnhancedSearch<'g, G: Game> {
    game: &'g G,
    tt: TranspositionTable<G::Move>,
    history: HistoryTable,
    meter: Meter,
    /// Root move order for the next full-window iteration.
    root_order: Option<Vec<G::Move>>,
}

impl<'g, G: Game> EnhancedSearch<'g, G> {
    pub fn new(game: &'g G, config: &SearchConfig) -> Result<Self, SearchError> {
        Ok(EnhancedSearch {
            game,
            tt: TranspositionTable::new(config.tt_capacity)?,
            history: HistoryTable::new(),
            meter: Meter::new(config.node_budget),
            root_order: None,
        })
    }

    pub fn tt(&self) -> &TranspositionTable<G::Move> {
        &self.tt
    }

    pub fn history(&self) -> &HistoryTable {
        &self.history
    }

    fn begin_iteration(&mut self) {
        self.flush_tt_counters();
        self.tt.new_epoch();
    }

    /// Statistics cover one top-level call; the TT and history carry over.
    fn reset_stats(&mut self) {
        self.tt.new_epoch();
        self.meter.stats = Default::default();
    }

    fn flush_tt_counters(&mut self) {
        let c = self.tt.counters();
        self.meter.stats.tt_probes += c.probes;
        self.meter.stats.tt_hits += c.hits;
        self.meter.stats.tt_stores += c.stores;
    }

    fn finish(&mut self, value: Score, best_move: Option<G::Move>, start: Instant) -> SearchResult<G::Move> {
        self.flush_tt_counters();
        self.tt.new_epoch();
        self.meter.stats.elapsed_ns = start.elapsed().as_nanos() as u64;
        let stats = std::mem::take(&mut self.meter.stats);
        SearchResult { value, best_move, stats }
    }

    /// Iterative deepening from 1 to `depth`, full window at every iteration.
    pub fn alphabeta_id(&mut self, root: &G::State, depth: u32) -> Result<SearchResult<G::Move>, SearchError> {
        if depth < 1 {
            return Err(SearchError::BadDepth { depth, min: 1 });
        }
        self.reset_stats();
        let start = Instant::now();
        let (mut value, mut best) = (0, None);
        for d in 1..=depth {
            self.begin_iteration();
            let before = self.meter.stats.leaf_evals;
            let mut root_scores = Vec::new();
            value = self.node(root, d, -INF, INF, Some(&mut root_scores))?;
            self.meter.stats.leaf_evals_final_iter = self.meter.stats.leaf_evals - before;
            best = root_scores.iter().find(|(_, v)| *v == value).map(|&(m, _)| m);
            // stable: ties keep this iteration's order
            let maximizing = self.game.player(root) == Player::Max;
            root_scores.sort_by_key(|&(_, v)| if maximizing { -v } else { v });
            self.root_order = Some(root_scores.into_iter().map(|(m, _)| m).collect());
        }
        Ok(self.finish(value, best, start))
    }

    /// MT-SSS*: null-window passes at `(γ-1, γ)` from γ = +INF downwards until
    /// a pass fails high, inside an iterative-deepening loop. Returns the
    /// result and the γ sequence of the final iteration.
    pub fn mt_sss(&mut self, root: &G::State, depth: u32) -> Result<(SearchResult<G::Move>, Vec<Score>), SearchError> {
        if depth < 1 {
            return Err(SearchError::BadDepth { depth, min: 1 });
        }
        self.reset_stats();
        let start = Instant::now();
        let (mut g, mut best, mut gammas) = (INF, None, Vec::new());
        for d in 1..=depth {
            self.begin_iteration();
            let before = self.meter.stats.leaf_evals;
            gammas.clear();
            g = INF;
            loop {
                let gamma = g;
                gammas.push(gamma);
                let mut root_scores = Vec::new();
                g = self.node(root, d, gamma - 1, gamma, Some(&mut root_scores))?;
                self.meter.stats.gamma_iterations += 1;
                if g >= gamma {
                    best = root_scores.iter().find(|(_, v)| *v >= gamma).map(|&(m, _)| m);
                    break;
                }
            }
            debug_assert_eq!(Some(&g), gammas.last());
            self.meter.stats.leaf_evals_final_iter = self.meter.stats.leaf_evals - before;
        }
        Ok((self.finish(g, best, start), gammas))
    }

    fn ordered_moves(&self, s: &G::State, tt_move: Option<G::Move>, at_root: bool) -> Vec<G::Move> {
        let mut moves = self.game.moves(s);
        if at_root {
            if let Some(order) = &self.root_order {
                if order.len() == moves.len() && moves.iter().all(|m| order.contains(m)) {
                    return order.clone();
                }
            }
        }
        let side = self.game.player(s);
        // stable sort keeps natural order among equal history scores
        moves.sort_by_key(|&m| {
            let h = self.game.history_slot(m).map_or(0, |slot| self.history.score(side, slot));
            std::cmp::Reverse(h)
        });
        if let Some(tm) = tt_move {
            if let Some(i) = moves.iter().position(|&m| m == tm) {
                moves[..=i].rotate_right(1);
            }
        }
        moves
    }

    fn node(
        &mut self,
        s: &G::State,
        depth: u32,
        alpha: Score,
        beta: Score,
        mut root_scores: Option<&mut Vec<(G::Move, Score)>>,
    ) -> Result<Score, SearchError> {
        let at_root = root_scores.is_some();
        let key = self.game.key(s);
        let mut tt_move = None;
        if let Some(hit) = self.tt.probe(key, depth) {
            tt_move = hit.best_move;
            // bounds are only used at exactly this depth, so every engine
            // returns the fixed-depth minimax value
            if let Some(b) = hit.bounds.filter(|b| b.depth == depth && !at_root) {
                if b.lower >= beta {
                    return Ok(b.lower);
                }
                if b.upper <= alpha {
                    return Ok(b.upper);
                }
                if b.lower == b.upper {
                    return Ok(b.lower);
                }
            }
        }

        if depth == 0 || self.game.is_terminal(s) {
            self.meter.leaf()?;
            let v = self.game.eval(s);
            self.tt.store(key, depth, v, v, None)?;
            return Ok(v);
        }
        self.meter.interior();

        let side = self.game.player(s);
        let maximizing = side == Player::Max;
        let (mut a, mut b) = (alpha, beta);
        let mut g = if maximizing { -INF } else { INF };
        let mut best = None;
        let mut cutoff = false;
        for mv in self.ordered_moves(s, tt_move, at_root) {
            let child = self.game.apply(s, mv);
            let v = self.node(&child, depth - 1, a, b, None)?;
            if let Some(rs) = root_scores.as_deref_mut() {
                rs.push((mv, v));
            }
            if (maximizing && v > g) || (!maximizing && v < g) {
                g = v;
                best = Some(mv);
            }
            if maximizing {
                if g >= beta {
                    cutoff = true;
                    break;
                }
                a = a.max(g);
            } else {
                if g <= alpha {
                    cutoff = true;
                    break;
                }
                b = b.min(g);
            }
        }
        if cutoff {
            if let Some(slot) = best.and_then(|m| self.game.history_slot(m)) {
                self.history.reward(side, slot, depth);
            }
        }

        let (lower, upper) = if g <= alpha {
            (-INF, g)
        } else if g >= beta {
            (g, INF)
        } else {
            (g, g)
        };
        self.tt.store(key, depth, lower, upper, best)?;
        Ok(g)
    }
}

pub fn alphabeta_enhanced<G: Game>(
    game: &G,
    root: &G::State,
    depth: u32,
    config: &SearchConfig,
) -> Result<SearchResult<G::Move>, SearchError> {
    EnhancedSearch::new(game, config)?.alphabeta_id(root, depth)
}

pub fn mt_sss<G: Game>(
    game: &G,
    root: &G::State,
    depth: u32,
    config: &SearchConfig,
) -> Result<SearchResult<G::Move>, SearchError> {
    Ok(mt_sss_traced(game, root, depth, config)?.0)
}

/// `mt_sss` plus the γ sequence of its final iteration.
pub fn mt_sss_traced<G: Game>(
    game: &G,
    root: &G::State,
    depth: u32,
    config: &SearchConfig,
) -> Result<(SearchResult<G::Move>, Vec<Score>), SearchError> {
    EnhancedSearch::new(game, config)?.mt_sss(root, depth)
}
