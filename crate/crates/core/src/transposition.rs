//! Fixed-capacity transposition table holding two-sided value bounds.
//!
//! Each slot keeps a `lower..=upper` interval on the value of one position at
//! one remaining depth. Null-window passes refine the interval from both sides,
//! so nothing learned by an earlier pass is lost.

use thiserror::Error;

use crate::game::{Score, INF};

pub const DEFAULT_CAPACITY: usize = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TtError {
    #[error("store with lower bound {lower} above upper bound {upper}")]
    InvertedBounds { lower: Score, upper: Score },
    #[error("capacity {0} is not a non-zero power of two")]
    BadCapacity(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TtEntry<M> {
    pub key: u64,
    pub depth: u32,
    pub lower: Score,
    pub upper: Score,
    pub best_move: Option<M>,
    pub epoch: u32,
}

/// Stored bounds, with the depth they were searched to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub depth: u32,
    pub lower: Score,
    pub upper: Score,
}

/// Result of a probe that matched the full key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeHit<M> {
    /// Present only when the stored depth covers the requested one.
    pub bounds: Option<Bounds>,
    pub best_move: Option<M>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TtCounters {
    pub probes: u64,
    pub hits: u64,
    pub stores: u64,
}

#[derive(Debug, Clone)]
pub struct TranspositionTable<M> {
    entries: Vec<Option<TtEntry<M>>>,
    mask: u64,
    epoch: u32,
    counters: TtCounters,
}

impl<M: Copy> TranspositionTable<M> {
    pub fn new(capacity: usize) -> Result<Self, TtError> {
        if capacity == 0 || !capacity.is_power_of_two() {
            return Err(TtError::BadCapacity(capacity));
        }
        Ok(TranspositionTable {
            entries: vec![None; capacity],
            mask: capacity as u64 - 1,
            epoch: 0,
            counters: TtCounters::default(),
        })
    }

    pub fn capacity(&self) -> usize {
        self.entries.len()
    }

    pub fn epoch(&self) -> u32 {
        self.epoch
    }

    /// Counters since the last `new_epoch`.
    pub fn counters(&self) -> TtCounters {
        self.counters
    }

    fn slot(&self, key: u64) -> usize {
        (key & self.mask) as usize
    }

    pub fn entry(&self, key: u64) -> Option<&TtEntry<M>> {
        self.entries[self.slot(key)].as_ref().filter(|e| e.key == key)
    }

    /// Counts as a hit whenever the full key matches; the bounds are only
    /// returned when the stored depth is at least `depth`.
    pub fn probe(&mut self, key: u64, depth: u32) -> Option<ProbeHit<M>> {
        self.counters.probes += 1;
        let e = self.entries[self.slot(key)].as_ref().filter(|e| e.key == key)?;
        self.counters.hits += 1;
        let bounds = (e.depth >= depth).then_some(Bounds { depth: e.depth, lower: e.lower, upper: e.upper });
        Some(ProbeHit { bounds, best_move: e.best_move })
    }

    /// Replaces the slot when it is empty, stale, or shallower-or-equal. The
    /// same key at the same depth intersects the stored interval instead.
    pub fn store(
        &mut self,
        key: u64,
        depth: u32,
        lower: Score,
        upper: Score,
        best_move: Option<M>,
    ) -> Result<(), TtError> {
        if lower > upper {
            return Err(TtError::InvertedBounds { lower, upper });
        }
        let epoch = self.epoch;
        let slot = self.slot(key);
        let new = TtEntry { key, depth, lower: lower.max(-INF), upper: upper.min(INF), best_move, epoch };
        match &mut self.entries[slot] {
            Some(e) if e.key == key && e.depth == depth => {
                let lower = e.lower.max(new.lower);
                let upper = e.upper.min(new.upper);
                if lower > upper {
                    return Err(TtError::InvertedBounds { lower, upper });
                }
                e.lower = lower;
                e.upper = upper;
                e.epoch = epoch;
                if best_move.is_some() {
                    e.best_move = best_move;
                }
            }
            Some(e) if e.epoch >= epoch && depth < e.depth => return Ok(()),
            slot => *slot = Some(new),
        }
        self.counters.stores += 1;
        Ok(())
    }

    /// Starts a new search generation: older entries become replaceable and
    /// the counters restart from zero.
    pub fn new_epoch(&mut self) {
        self.epoch += 1;
        self.counters = TtCounters::default();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Tt = TranspositionTable<u8>;

    #[test]
    fn exact_round_trip() {
        let mut tt = Tt::new(16).unwrap();
        tt.store(42, 5, 10, 10, Some(3)).unwrap();
        let hit = tt.probe(42, 5).unwrap();
        assert_eq!(hit.bounds, Some(Bounds { depth: 5, lower: 10, upper: 10 }));
        assert_eq!(hit.best_move, Some(3));
    }

    #[test]
    fn shallow_entry_gives_move_only() {
        let mut tt = Tt::new(16).unwrap();
        tt.store(42, 3, 0, 5, Some(7)).unwrap();
        let hit = tt.probe(42, 5).unwrap();
        assert_eq!(hit.bounds, None);
        assert_eq!(hit.best_move, Some(7));
    }

    #[test]
    fn empty_table_misses() {
        let mut tt = Tt::new(16).unwrap();
        assert_eq!(tt.probe(1, 0), None);
        assert_eq!(tt.counters(), TtCounters { probes: 1, hits: 0, stores: 0 });
    }

    #[test]
    fn same_key_and_depth_intersects() {
        let mut tt = Tt::new(16).unwrap();
        tt.store(9, 4, -INF, 50, None).unwrap();
        tt.store(9, 4, 30, INF, Some(1)).unwrap();
        let e = tt.entry(9).unwrap();
        assert_eq!((e.lower, e.upper, e.best_move), (30, 50, Some(1)));
    }

    #[test]
    fn replacement_policy() {
        let mut tt = Tt::new(16).unwrap();
        // 1 and 17 share slot 1
        tt.store(1, 4, 0, 0, None).unwrap();
        tt.store(17, 6, 1, 1, None).unwrap();
        assert!(tt.entry(1).is_none());
        assert_eq!(tt.entry(17).unwrap().depth, 6);
        tt.store(1, 2, 2, 2, None).unwrap();
        assert!(tt.entry(1).is_none(), "shallower store in the same epoch must not replace");
        assert_eq!(tt.entry(17).unwrap().lower, 1);
        // a colliding key never reads back another key's data
        assert_eq!(tt.probe(1, 0), None);
    }

    #[test]
    fn epochs() {
        let mut tt = Tt::new(16).unwrap();
        tt.store(1, 8, 0, 0, Some(2)).unwrap();
        let e0 = tt.epoch();
        tt.new_epoch();
        assert!(tt.epoch() > e0);
        assert_eq!(tt.counters(), TtCounters::default());
        // still probeable until overwritten
        assert!(tt.probe(1, 8).unwrap().bounds.is_some());
        tt.store(17, 1, 5, 5, None).unwrap();
        assert!(tt.entry(1).is_none());
        assert_eq!(tt.entry(17).unwrap().lower, 5);
    }

    #[test]
    fn rejects_inverted_bounds_and_bad_capacity() {
        let mut tt = Tt::new(16).unwrap();
        assert_eq!(tt.store(1, 1, 5, 4, None), Err(TtError::InvertedBounds { lower: 5, upper: 4 }));
        assert!(matches!(Tt::new(12), Err(TtError::BadCapacity(12))));
        assert!(matches!(Tt::new(0), Err(TtError::BadCapacity(0))));
    }

    #[test]
    fn hits_never_exceed_probes() {
        let mut tt = Tt::new(4).unwrap();
        for k in 0..50u64 {
            tt.store(k * 7, (k % 5) as u32, 0, 1, None).unwrap();
            tt.probe(k * 3, 1);
        }
        let c = tt.counters();
        assert!(c.hits <= c.probes);
    }
}
