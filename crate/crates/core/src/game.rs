//! The game abstraction shared by every searcher.

use std::borrow::Borrow;
use std::fmt;

/// Heuristic or terminal value, always from the root player's (MAX) point of view.
pub type Score = i32;

/// Strictly greater than any value a game can produce.
pub const INF: Score = 1_000_000;

/// Largest magnitude the Othello heuristic may return for a non-terminal position.
pub const HEURISTIC_LIMIT: Score = 99_999;

/// Largest magnitude of a terminal (game over) value.
pub const TERMINAL_LIMIT: Score = 64_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    Max,
    Min,
}

impl Player {
    pub fn opposite(self) -> Player {
        match self {
            Player::Max => Player::Min,
            Player::Min => Player::Max,
        }
    }

    /// 0 for MAX, 1 for MIN. Used to index per-side tables.
    pub fn index(self) -> usize {
        match self {
            Player::Max => 0,
            Player::Min => 1,
        }
    }
}

/// Uniform facade over a concrete game.
///
/// `moves` must be deterministic for a given state; searchers treat its
/// ordering as the natural (left-to-right) child order. An empty move list
/// means the state is terminal. `eval` is from MAX's point of view, where MAX
/// is the side to move at the search root.
pub trait Game {
    type State: Clone;
    type Move: Copy + Eq + fmt::Debug;

    fn moves(&self, state: &Self::State) -> Vec<Self::Move>;
    fn apply(&self, state: &Self::State, mv: Self::Move) -> Self::State;
    fn eval(&self, state: &Self::State) -> Score;
    fn key(&self, state: &Self::State) -> u64;
    fn player(&self, state: &Self::State) -> Player;

    fn is_terminal(&self, state: &Self::State) -> bool {
        self.moves(state).is_empty()
    }

    /// Slot in a 64-entry per-side history table, if the move has one.
    fn history_slot(&self, mv: Self::Move) -> Option<usize>;
}

/// Node name: the sequence of child indices leading from the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DeweyPath(Vec<u32>);

impl DeweyPath {
    pub fn root() -> Self {
        DeweyPath(Vec::new())
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, index: u32) -> DeweyPath {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(index);
        DeweyPath(v)
    }

    pub fn parent(&self) -> Option<DeweyPath> {
        let (_, init) = self.0.split_last()?;
        Some(DeweyPath(init.to_vec()))
    }

    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// True iff `self` is a proper prefix of `other`.
    pub fn is_proper_prefix_of(&self, other: &DeweyPath) -> bool {
        self.0.len() < other.0.len() && other.0.starts_with(&self.0)
    }

    /// Ancestors from the parent up to the root.
    pub fn ancestors(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.0.len()).rev().map(move |n| &self.0[..n])
    }
}

// Hash/Eq/Ord of the newtype agree with those of the slice.
impl Borrow<[u32]> for DeweyPath {
    fn borrow(&self) -> &[u32] {
        &self.0
    }
}

impl From<Vec<u32>> for DeweyPath {
    fn from(v: Vec<u32>) -> Self {
        DeweyPath(v)
    }
}

impl From<&[u32]> for DeweyPath {
    fn from(v: &[u32]) -> Self {
        DeweyPath(v.to_vec())
    }
}

impl fmt::Display for DeweyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Formats a score, spelling out the infinities.
pub fn fmt_score(s: Score) -> String {
    match s {
        INF => "+INF".to_string(),
        s if s == -INF => "-INF".to_string(),
        s => s.to_string(),
    }
}
