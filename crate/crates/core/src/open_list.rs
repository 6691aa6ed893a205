//! The OPEN list: a max-priority queue of `<name, LIVE/SOLVED, merit>` states.
//!
//! Ties on merit go to the lexicographically smallest path, i.e. the leftmost
//! node in the tree.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::game::{fmt_score, DeweyPath, Player, Score};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SssStatus {
    Live,
    Solved,
}

impl fmt::Display for SssStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SssStatus::Live => "LIVE",
            SssStatus::Solved => "SOLVED",
        })
    }
}

/// One OPEN entry. `payload` lets the searcher re-expand the node without
/// replaying moves from the root.
#[derive(Debug, Clone)]
pub struct SssState<T> {
    pub path: DeweyPath,
    pub status: SssStatus,
    pub merit: Score,
    pub player: Player,
    pub payload: T,
}

impl<T> SssState<T> {
    pub fn summary(&self) -> StateSummary {
        StateSummary { path: self.path.clone(), status: self.status, merit: self.merit }
    }
}

/// The `<name, status, merit>` triple without the payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSummary {
    pub path: DeweyPath,
    pub status: SssStatus,
    pub merit: Score,
}

impl fmt::Display for StateSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.path, self.status, fmt_score(self.merit))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OpenError {
    #[error("OPEN already holds a state for {0}")]
    DuplicatePath(DeweyPath),
    #[error("OPEN holds {ancestor} while pushing its descendant {path}")]
    AncestorPresent { ancestor: DeweyPath, path: DeweyPath },
    #[error("pop from an empty OPEN list")]
    Empty,
}

struct Entry<T>(SssState<T>);

impl<T> PartialEq for Entry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T> Eq for Entry<T> {}

impl<T> PartialOrd for Entry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T> Ord for Entry<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.merit.cmp(&other.0.merit).then_with(|| other.0.path.cmp(&self.0.path))
    }
}

pub struct OpenList<T> {
    heap: BinaryHeap<Entry<T>>,
    paths: HashSet<DeweyPath>,
    peak: usize,
}

impl<T> Default for OpenList<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> OpenList<T> {
    pub fn new() -> Self {
        OpenList { heap: BinaryHeap::new(), paths: HashSet::new(), peak: 0 }
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    /// Largest size ever reached.
    pub fn peak(&self) -> usize {
        self.peak
    }

    pub fn contains(&self, path: &DeweyPath) -> bool {
        self.paths.contains(path)
    }

    /// Rejects a path already present or one whose ancestor is present.
    pub fn push(&mut self, state: SssState<T>) -> Result<(), OpenError> {
        if self.paths.contains(&state.path) {
            return Err(OpenError::DuplicatePath(state.path));
        }
        let ancestor = state.path.ancestors().find(|a| self.paths.contains(*a)).map(DeweyPath::from);
        if let Some(ancestor) = ancestor {
            return Err(OpenError::AncestorPresent { ancestor, path: state.path });
        }
        self.paths.insert(state.path.clone());
        self.heap.push(Entry(state));
        self.peak = self.peak.max(self.heap.len());
        Ok(())
    }

    pub fn pop_max(&mut self) -> Result<SssState<T>, OpenError> {
        let Entry(s) = self.heap.pop().ok_or(OpenError::Empty)?;
        self.paths.remove(&s.path);
        Ok(s)
    }

    pub fn peek(&self) -> Option<&SssState<T>> {
        self.heap.peek().map(|e| &e.0)
    }

    /// True if some state lies strictly below `prefix`.
    pub fn has_descendant(&self, prefix: &DeweyPath) -> bool {
        self.paths.iter().any(|p| prefix.is_proper_prefix_of(p))
    }

    /// Removes every state strictly below `prefix`; returns how many went.
    pub fn purge_descendants(&mut self, prefix: &DeweyPath) -> usize {
        let before = self.heap.len();
        self.heap.retain(|e| !prefix.is_proper_prefix_of(&e.0.path));
        if self.heap.len() != before {
            self.paths.retain(|p| !prefix.is_proper_prefix_of(p));
        }
        before - self.heap.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &SssState<T>> {
        self.heap.iter().map(|e| &e.0)
    }
}
