//! Strategies and clusters on uniform synthetic trees.
//!
//! A strategy fixes one MAX move at every MAX node it reaches and keeps every
//! MIN reply; its value is the smallest leaf it contains. The minimax value is
//! the largest strategy value, which is what SSS* searches for.

use std::collections::{BTreeMap, BTreeSet};

use crate::game::{DeweyPath, Player, Score};
use crate::search::minimax;
use crate::synthetic::SyntheticTree;

use super::VerifyError;

/// Enumeration refuses trees with more strategies than this.
pub const STRATEGY_GUARD: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Strategy {
    pub leaf_paths: BTreeSet<DeweyPath>,
    /// MAX node path -> chosen child index.
    pub move_choices: BTreeMap<DeweyPath, u32>,
}

/// Number of strategies of a uniform tree, or `None` past the guard.
pub fn strategy_count(tree: &SyntheticTree) -> Option<u64> {
    let w = u64::from(tree.branching());
    let mut count: u64 = 1;
    for depth in (0..tree.depth()).rev() {
        count = match SyntheticTree::player_at_depth(depth) {
            Player::Max => count.checked_mul(w)?,
            Player::Min => count.checked_pow(tree.branching())?,
        };
        if count > STRATEGY_GUARD {
            return None;
        }
    }
    Some(count)
}

pub fn enumerate_strategies(tree: &SyntheticTree) -> Result<Vec<Strategy>, VerifyError> {
    strategy_count(tree).ok_or(VerifyError::StrategyGuard(STRATEGY_GUARD))?;
    Ok(build(tree, DeweyPath::root()))
}

fn build(tree: &SyntheticTree, path: DeweyPath) -> Vec<Strategy> {
    if path.len() as u32 == tree.depth() {
        return vec![Strategy { leaf_paths: BTreeSet::from([path]), move_choices: BTreeMap::new() }];
    }
    let w = tree.branching();
    match SyntheticTree::player_at_depth(path.len() as u32) {
        Player::Max => (0..w)
            .flat_map(|c| {
                let here = path.clone();
                build(tree, path.child(c)).into_iter().map(move |mut s| {
                    s.move_choices.insert(here.clone(), c);
                    s
                })
            })
            .collect(),
        Player::Min => {
            (0..w).fold(vec![Strategy { leaf_paths: BTreeSet::new(), move_choices: BTreeMap::new() }], |acc, c| {
                let sub = build(tree, path.child(c));
                acc.iter()
                    .flat_map(|a| {
                        sub.iter().map(move |b| {
                            let mut s = a.clone();
                            s.leaf_paths.extend(b.leaf_paths.iter().cloned());
                            s.move_choices.extend(b.move_choices.iter().map(|(k, v)| (k.clone(), *v)));
                            s
                        })
                    })
                    .collect()
            })
        }
    }
}

pub fn strategy_value(tree: &SyntheticTree, strategy: &Strategy) -> Score {
    strategy.leaf_paths.iter().map(|p| tree.leaf_value(p)).min().expect("a strategy has at least one leaf")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremReport {
    pub strategies: usize,
    pub max_of_min: Score,
    pub minimax: Score,
    /// (leaf, strategy index) pairs where the leaf is below the strategy value.
    pub bound_violations: usize,
}

impl TheoremReport {
    pub fn holds(&self) -> bool {
        self.max_of_min == self.minimax && self.bound_violations == 0
    }
}

/// Compares the best strategy value with minimax, and checks that every leaf
/// bounds from above the value of every strategy containing it.
pub fn strategy_theorem(tree: &SyntheticTree) -> Result<TheoremReport, VerifyError> {
    let strategies = enumerate_strategies(tree)?;
    let mut max_of_min = Score::MIN;
    let mut bound_violations = 0;
    for s in &strategies {
        let v = strategy_value(tree, s);
        max_of_min = max_of_min.max(v);
        bound_violations += s.leaf_paths.iter().filter(|p| tree.leaf_value(p) < v).count();
    }
    let mm = minimax(tree, &tree.root(), tree.depth(), None).expect("no budget").value;
    Ok(TheoremReport { strategies: strategies.len(), max_of_min, minimax: mm, bound_violations })
}

pub fn check_strategy_theorem(tree: &SyntheticTree) -> Result<bool, VerifyError> {
    Ok(strategy_theorem(tree)?.holds())
}

/// Leaves reached by taking every MAX move and the first MIN move: one
/// representative leaf per cluster, together meeting every strategy.
pub fn cluster_cover(tree: &SyntheticTree) -> BTreeSet<DeweyPath> {
    let mut out = BTreeSet::new();
    let mut stack = vec![DeweyPath::root()];
    while let Some(p) = stack.pop() {
        if p.len() as u32 == tree.depth() {
            out.insert(p);
            continue;
        }
        match SyntheticTree::player_at_depth(p.len() as u32) {
            Player::Max => stack.extend((0..tree.branching()).map(|c| p.child(c))),
            Player::Min => stack.push(p.child(0)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::gen_tree;

    fn tree_3529() -> SyntheticTree {
        SyntheticTree::from_leaves(2, 2, vec![3, 5, 2, 9]).unwrap()
    }

    #[test]
    fn binary_depth_four_has_eight_strategies() {
        let t = gen_tree(2, 4, 7).unwrap();
        let all = enumerate_strategies(&t).unwrap();
        assert_eq!(all.len(), 8);
        assert_eq!(strategy_count(&t), Some(8));
        let distinct: BTreeSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), 8);
        for leaf in t.leaf_paths() {
            let n = all.iter().filter(|s| s.leaf_paths.contains(&leaf)).count();
            assert_eq!(n, 2, "leaf {leaf}");
        }
        for s in &all {
            assert_eq!(s.leaf_paths.len(), 4);
        }
    }

    #[test]
    fn counts_for_small_shapes() {
        for d in 0..5 {
            assert_eq!(enumerate_strategies(&gen_tree(1, d, 0).unwrap()).unwrap().len(), 1);
        }
        assert_eq!(enumerate_strategies(&gen_tree(3, 2, 0).unwrap()).unwrap().len(), 3);
    }

    #[test]
    fn guard() {
        // 1024 strategies below depth 1, raised to the 4th by the MIN node
        let t = gen_tree(4, 6, 0).unwrap();
        assert_eq!(strategy_count(&t), None);
        assert_eq!(enumerate_strategies(&t), Err(VerifyError::StrategyGuard(STRATEGY_GUARD)));
    }

    #[test]
    fn values_on_hand_tree() {
        let t = tree_3529();
        let all = enumerate_strategies(&t).unwrap();
        let by_choice = |c: u32| {
            all.iter().find(|s| s.move_choices[&DeweyPath::root()] == c).map(|s| strategy_value(&t, s)).unwrap()
        };
        assert_eq!(by_choice(0), 3);
        assert_eq!(by_choice(1), 2);
        let r = strategy_theorem(&t).unwrap();
        assert_eq!((r.max_of_min, r.minimax), (3, 3));
        assert!(r.holds());
        let chain = SyntheticTree::from_leaves(1, 3, vec![42]).unwrap();
        let only = &enumerate_strategies(&chain).unwrap()[0];
        assert_eq!(strategy_value(&chain, only), 42);
        assert!(check_strategy_theorem(&chain).unwrap());
    }

    #[test]
    fn cover_sizes_and_coverage() {
        let t = gen_tree(2, 4, 7).unwrap();
        let cover = cluster_cover(&t);
        assert_eq!(cover.len(), 4);
        for s in enumerate_strategies(&t).unwrap() {
            assert!(s.leaf_paths.intersection(&cover).next().is_some());
        }
        let t2 = gen_tree(2, 2, 0).unwrap();
        let c2: Vec<String> = cluster_cover(&t2).iter().map(|p| p.to_string()).collect();
        assert_eq!(c2, vec!["0.0", "1.0"]);
    }
}
