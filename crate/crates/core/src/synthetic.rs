//! Uniform synthetic game trees with seeded, distinct leaf values.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::game::{DeweyPath, Game, Player, Score};

/// Upper bound on the leaf count `w^d`.
pub const MAX_LEAVES: u64 = 1 << 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("branching factor must be at least 1")]
    ZeroBranching,
    #[error("tree with branching {w} and depth {d} exceeds {MAX_LEAVES} leaves")]
    TooLarge { w: u32, d: u32 },
    #[error("expected {expected} leaf values, got {got}")]
    LeafCount { expected: usize, got: usize },
    #[error("bad tree spec {0:?}, expected w=<n>,d=<n>,seed=<n>")]
    BadSpec(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntheticTree {
    w: u32,
    d: u32,
    seed: u64,
    leaves: Vec<Score>,
}

fn leaf_count(w: u32, d: u32) -> Result<u64, TreeError> {
    if w == 0 {
        return Err(TreeError::ZeroBranching);
    }
    let mut n: u64 = 1;
    for _ in 0..d {
        n = n.saturating_mul(u64::from(w));
        if n > MAX_LEAVES {
            return Err(TreeError::TooLarge { w, d });
        }
    }
    Ok(n)
}

/// Tree whose leaves are a seeded permutation of `0..w^d`.
pub fn gen_tree(w: u32, d: u32, seed: u64) -> Result<SyntheticTree, TreeError> {
    let n = leaf_count(w, d)?;
    let mut leaves: Vec<Score> = (0..n as Score).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    leaves.shuffle(&mut rng);
    Ok(SyntheticTree { w, d, seed, leaves })
}

impl SyntheticTree {
    /// Tree with explicit leaf values, left to right. Values need not be distinct.
    pub fn from_leaves(w: u32, d: u32, leaves: Vec<Score>) -> Result<Self, TreeError> {
        let n = leaf_count(w, d)? as usize;
        if leaves.len() != n {
            return Err(TreeError::LeafCount { expected: n, got: leaves.len() });
        }
        Ok(SyntheticTree { w, d, seed: 0, leaves })
    }

    /// Parses `w=2,d=4,seed=7` (seed may be hex with a `0x` prefix).
    pub fn from_spec(spec: &str) -> Result<Self, TreeError> {
        let bad = || TreeError::BadSpec(spec.to_string());
        let (mut w, mut d, mut seed) = (None, None, None);
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(bad)?;
            match k.trim() {
                "w" => w = Some(v.trim().parse::<u32>().map_err(|_| bad())?),
                "d" => d = Some(v.trim().parse::<u32>().map_err(|_| bad())?),
                "seed" => seed = Some(parse_u64(v.trim()).ok_or_else(bad)?),
                _ => return Err(bad()),
            }
        }
        gen_tree(w.ok_or_else(bad)?, d.ok_or_else(bad)?, seed.unwrap_or(0))
    }

    pub fn branching(&self) -> u32 {
        self.w
    }

    pub fn depth(&self) -> u32 {
        self.d
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn leaves(&self) -> &[Score] {
        &self.leaves
    }

    pub fn root(&self) -> SynNode {
        SynNode { depth: 0, index: 0 }
    }

    /// Value of the leaf at `path`, which must have length `d`.
    pub fn leaf_value(&self, path: &DeweyPath) -> Score {
        assert_eq!(path.len(), self.d as usize, "not a leaf path");
        self.leaves[self.node_at(path).index as usize]
    }

    pub fn node_at(&self, path: &DeweyPath) -> SynNode {
        let index = path.indices().iter().fold(0u64, |acc, &c| acc * u64::from(self.w) + u64::from(c));
        SynNode { depth: path.len() as u32, index }
    }

    pub fn path_of(&self, node: SynNode) -> DeweyPath {
        let mut v = vec![0u32; node.depth as usize];
        let mut idx = node.index;
        for slot in v.iter_mut().rev() {
            *slot = (idx % u64::from(self.w)) as u32;
            idx /= u64::from(self.w);
        }
        DeweyPath::from(v)
    }

    /// MAX moves at even depths (the root is MAX).
    pub fn player_at_depth(depth: u32) -> Player {
        if depth.is_multiple_of(2) {
            Player::Max
        } else {
            Player::Min
        }
    }

    /// All leaf paths in left-to-right order.
    pub fn leaf_paths(&self) -> impl Iterator<Item = DeweyPath> + '_ {
        (0..self.leaves.len() as u64).map(move |index| self.path_of(SynNode { depth: self.d, index }))
    }
}

/// Decimal, or hex with a `0x` prefix; `_` separators allowed.
pub fn parse_u64(s: &str) -> Option<u64> {
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16).ok(),
        None => s.replace('_', "").parse().ok(),
    }
}

/// A node of a synthetic tree: its depth and its left-to-right index on that level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SynNode {
    pub depth: u32,
    pub index: u64,
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Game for SyntheticTree {
    type State = SynNode;
    type Move = u32;

    fn moves(&self, s: &SynNode) -> Vec<u32> {
        if s.depth >= self.d {
            Vec::new()
        } else {
            (0..self.w).collect()
        }
    }

    fn apply(&self, s: &SynNode, mv: u32) -> SynNode {
        debug_assert!(mv < self.w && s.depth < self.d);
        SynNode { depth: s.depth + 1, index: s.index * u64::from(self.w) + u64::from(mv) }
    }

    /// Leaf value at the leaves; the leftmost leaf below an interior node otherwise.
    fn eval(&self, s: &SynNode) -> Score {
        let below = u64::from(self.w).pow(self.d - s.depth);
        self.leaves[(s.index * below) as usize]
    }

    fn key(&self, s: &SynNode) -> u64 {
        // mix64 is a bijection, so distinct nodes get distinct keys
        mix64((u64::from(s.depth) << 40) | s.index)
    }

    fn player(&self, s: &SynNode) -> Player {
        Self::player_at_depth(s.depth)
    }

    fn is_terminal(&self, s: &SynNode) -> bool {
        s.depth >= self.d
    }

    fn history_slot(&self, mv: u32) -> Option<usize> {
        (mv < 64).then_some(mv as usize)
    }
}
