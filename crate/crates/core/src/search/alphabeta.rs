use std::time::Instant;

use super::{Meter, SearchError, SearchResult};
use crate::game::{Game, Player, Score, INF};

/// Vanilla fail-soft alpha-beta, children in natural order.
///
/// A value inside `(alpha, beta)` is exact; one at or below `alpha` is an
/// upper bound and one at or above `beta` a lower bound on the minimax value.
pub fn alphabeta<G: Game>(
    game: &G,
    root: &G::State,
    depth: u32,
    alpha: Score,
    beta: Score,
    budget: Option<u64>,
) -> Result<SearchResult<G::Move>, SearchError> {
    if alpha >= beta {
        return Err(SearchError::BadWindow { alpha, beta });
    }
    let start = Instant::now();
    let mut meter = Meter::new(budget);
    let mut best_move = None;
    let value = search(game, root, depth, alpha, beta, &mut meter, Some(&mut best_move))?;
    meter.stats.leaf_evals_final_iter = meter.stats.leaf_evals;
    meter.stats.elapsed_ns = start.elapsed().as_nanos() as u64;
    Ok(SearchResult { value, best_move, stats: meter.stats })
}

fn search<G: Game>(
    game: &G,
    s: &G::State,
    depth: u32,
    mut alpha: Score,
    mut beta: Score,
    meter: &mut Meter,
    mut best_move: Option<&mut Option<G::Move>>,
) -> Result<Score, SearchError> {
    if depth == 0 || game.is_terminal(s) {
        meter.leaf()?;
        return Ok(game.eval(s));
    }
    meter.interior();
    let maximizing = game.player(s) == Player::Max;
    let mut g = if maximizing { -INF } else { INF };
    for mv in game.moves(s) {
        let v = search(game, &game.apply(s, mv), depth - 1, alpha, beta, meter, None)?;
        if maximizing {
            if v > g {
                g = v;
                if let Some(b) = best_move.as_deref_mut() {
                    *b = Some(mv);
                }
            }
            if g >= beta {
                break;
            }
            alpha = alpha.max(g);
        } else {
            if v < g {
                g = v;
                if let Some(b) = best_move.as_deref_mut() {
                    *b = Some(mv);
                }
            }
            if g <= alpha {
                break;
            }
            beta = beta.min(g);
        }
    }
    Ok(g)
}
