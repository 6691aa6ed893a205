use std::time::Instant;

use super::{Meter, SearchError, SearchResult};
use crate::game::{Game, Player, Score, INF};

/// Exhaustive minimax without pruning. Serves as the oracle for the other engines.
pub fn minimax<G: Game>(
    game: &G,
    root: &G::State,
    depth: u32,
    budget: Option<u64>,
) -> Result<SearchResult<G::Move>, SearchError> {
    let start = Instant::now();
    let mut meter = Meter::new(budget);
    let mut best_move = None;
    let value = if depth == 0 || game.is_terminal(root) {
        meter.leaf()?;
        game.eval(root)
    } else {
        meter.interior();
        let maximizing = game.player(root) == Player::Max;
        let mut best = if maximizing { -INF } else { INF };
        for mv in game.moves(root) {
            let v = value_of(game, &game.apply(root, mv), depth - 1, &mut meter)?;
            if (maximizing && v > best) || (!maximizing && v < best) {
                best = v;
                best_move = Some(mv);
            }
        }
        best
    };
    meter.stats.leaf_evals_final_iter = meter.stats.leaf_evals;
    meter.stats.elapsed_ns = start.elapsed().as_nanos() as u64;
    Ok(SearchResult { value, best_move, stats: meter.stats })
}

fn value_of<G: Game>(game: &G, s: &G::State, depth: u32, meter: &mut Meter) -> Result<Score, SearchError> {
    if depth == 0 || game.is_terminal(s) {
        meter.leaf()?;
        return Ok(game.eval(s));
    }
    meter.interior();
    let children = game.moves(s).into_iter().map(|mv| game.apply(s, mv));
    let mut best = if game.player(s) == Player::Max { -INF } else { INF };
    for c in children {
        let v = value_of(game, &c, depth - 1, meter)?;
        best = match game.player(s) {
            Player::Max => best.max(v),
            Player::Min => best.min(v),
        };
    }
    Ok(best)
}
