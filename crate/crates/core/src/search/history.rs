use crate::game::Player;

/// Per-side, per-square cutoff counters used to order untried moves.
#[derive(Debug, Clone)]
pub struct HistoryTable {
    scores: [[u64; 64]; 2],
}

impl Default for HistoryTable {
    fn default() -> Self {
        HistoryTable { scores: [[0; 64]; 2] }
    }
}

impl HistoryTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn score(&self, side: Player, slot: usize) -> u64 {
        self.scores[side.index()][slot]
    }

    /// Credits a cutoff found with `depth` plies remaining.
    pub fn reward(&mut self, side: Player, slot: usize, depth: u32) {
        let d = u64::from(depth);
        let s = &mut self.scores[side.index()][slot];
        *s = s.saturating_add(d * d);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rewards_accumulate_by_depth_squared() {
        let mut h = HistoryTable::new();
        h.reward(Player::Max, 3, 4);
        h.reward(Player::Max, 3, 2);
        assert_eq!(h.score(Player::Max, 3), 20);
        assert_eq!(h.score(Player::Min, 3), 0);
    }
}
