//! Property suites over seeded synthetic trees.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::strategy::strategy_theorem;
use super::VerifyError;
use crate::game::{Score, INF};
use crate::search::{
    alphabeta, minimax, mt_sss_traced, sss_star, Engine, EnhancedSearch, Recorder, SearchConfig, SearchError,
};
use crate::synthetic::{gen_tree, SynNode, SyntheticTree};

pub const DEFAULT_VERIFY_SEED: u64 = 0x5EED;

/// Largest leaf count among oracle trees.
pub const ORACLE_LEAF_LIMIT: u64 = 65_536;

const DOMINANCE_TREES: usize = 500;
const STRATEGY_TREES: usize = 200;
const BRACKET_TREES: usize = 200;
const BRACKET_LEAF_LIMIT: u64 = 1024;
const SHOWN_FAILURES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub trees: usize,
    pub max_depth: u32,
    pub seed: u64,
    /// Halve leaf values so that ties occur. Breaks the dominance precondition.
    pub tie_leaves: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { trees: 1000, max_depth: 16, seed: DEFAULT_VERIFY_SEED, tie_leaves: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl PropertyOutcome {
    fn new(name: &'static str) -> Self {
        PropertyOutcome { name, checked: 0, failures: Vec::new(), notes: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for PropertyOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(f, "{verdict} {} ({} trees, {} failures)", self.name, self.checked, self.failures.len())?;
        for n in &self.notes {
            writeln!(f, "    {n}")?;
        }
        for fail in self.failures.iter().take(SHOWN_FAILURES) {
            writeln!(f, "    failure: {fail}")?;
        }
        if self.failures.len() > SHOWN_FAILURES {
            writeln!(f, "    ... {} more", self.failures.len() - SHOWN_FAILURES)?;
        }
        Ok(())
    }
}

fn tree_label(t: &SyntheticTree) -> String {
    format!("w={},d={},seed={}", t.branching(), t.depth(), t.seed())
}

fn halve_leaves(t: SyntheticTree) -> SyntheticTree {
    let leaves = t.leaves().iter().map(|v| v / 2).collect();
    SyntheticTree::from_leaves(t.branching(), t.depth(), leaves).expect("same shape")
}

fn max_depth_for(w: u32, limit: u64) -> u32 {
    let mut d = 0;
    while u64::from(w).pow(d + 1) <= limit {
        d += 1;
    }
    d
}

/// Tree `i` has branching `[2, 3, 4][i % 3]`, a seeded depth with at most
/// 65,536 leaves (capped by `max_depth`) and leaf seed `seed + i`.
pub fn oracle_trees(
    count: usize,
    max_depth: u32,
    seed: u64,
    tie_leaves: bool,
) -> Result<Vec<SyntheticTree>, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let w = [2, 3, 4][i % 3];
            let dmax = max_depth_for(w, ORACLE_LEAF_LIMIT).min(max_depth).max(1);
            let d = rng.gen_range(1..=dmax);
            let t = gen_tree(w, d, seed.wrapping_add(i as u64))?;
            Ok(if tie_leaves { halve_leaves(t) } else { t })
        })
        .collect()
}

/// Small trees for strategy enumeration: branching 1 to 3, depth 1 to 4.
pub fn strategy_trees(count: usize, max_depth: u32, seed: u64) -> Result<Vec<SyntheticTree>, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5742_4154);
    (0..count)
        .map(|i| {
            let w = 1 + (i % 3) as u32;
            let d = rng.gen_range(1..=max_depth.clamp(1, 4));
            Ok(gen_tree(w, d, seed.wrapping_add(i as u64))?)
        })
        .collect()
}

fn tt_capacity_for(t: &SyntheticTree) -> usize {
    let leaves = t.leaves().len();
    (4 * leaves).next_power_of_two().clamp(1 << 6, 1 << 20)
}

/// Per-tree results from every engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeRun {
    pub label: String,
    pub w: u32,
    pub d: u32,
    pub oracle: Score,
    /// (engine, root value, leaf evaluations), minimax excluded.
    pub results: Vec<(Engine, Score, u64)>,
    pub mt_final_iter_leaves: u64,
    /// γ values of the last MT-SSS* iteration.
    pub gammas: Vec<Score>,
    pub sss_open_peak: u64,
}

impl TreeRun {
    pub fn result(&self, engine: Engine) -> Option<(Score, u64)> {
        self.results.iter().find(|r| r.0 == engine).map(|r| (r.1, r.2))
    }
}

pub fn run_tree(t: &SyntheticTree) -> Result<TreeRun, SearchError> {
    let root = t.root();
    let d = t.depth();
    let cfg = SearchConfig { tt_capacity: tt_capacity_for(t), node_budget: None };
    let oracle = minimax(t, &root, d, None)?.value;
    let mut results = Vec::with_capacity(4);
    let ab = alphabeta(t, &root, d, -INF, INF, None)?;
    results.push((Engine::AlphaBeta, ab.value, ab.stats.leaf_evals));
    let (mut mt_final_iter_leaves, mut gammas) = (0, Vec::new());
    // the enhanced engines need depth >= 1
    if d >= 1 {
        let abe = Engine::AlphaBetaEnhanced.search(t, &root, d, &cfg)?;
        results.push((Engine::AlphaBetaEnhanced, abe.value, abe.stats.leaf_evals));
        let (mt, g) = mt_sss_traced(t, &root, d, &cfg)?;
        results.push((Engine::MtSss, mt.value, mt.stats.leaf_evals));
        mt_final_iter_leaves = mt.stats.leaf_evals_final_iter;
        gammas = g;
    }
    let sss = sss_star(t, &root, d, None)?;
    results.push((Engine::Sss, sss.value, sss.stats.leaf_evals));
    Ok(TreeRun {
        label: tree_label(t),
        w: t.branching(),
        d,
        oracle,
        results,
        mt_final_iter_leaves,
        gammas,
        sss_open_peak: sss.stats.open_peak,
    })
}

pub fn check_oracle(runs: &[TreeRun]) -> PropertyOutcome {
    let mut out = PropertyOutcome::new("oracle-equivalence");
    out.checked = runs.len();
    for r in runs {
        for &(engine, value, _) in &r.results {
            if value != r.oracle {
                out.failures.push(format!("{}: {engine} = {value}, minimax = {}", r.label, r.oracle));
            }
        }
    }
    out.notes.push(format!("engines checked against minimax: {}", engine_list(runs)));
    out
}

fn engine_list(runs: &[TreeRun]) -> String {
    let mut names: Vec<&str> = runs.iter().flat_map(|r| r.results.iter().map(|x| x.0.name())).collect();
    names.sort_unstable();
    names.dedup();
    names.join(", ")
}

fn strictly_decreasing(v: &[Score]) -> bool {
    v.windows(2).all(|p| p[1] < p[0])
}

pub fn check_mt_equivalence(runs: &[TreeRun]) -> PropertyOutcome {
    let mut out = PropertyOutcome::new("mt_sss-equivalence");
    // (w, d) -> (trees, sss leaves, mt leaves, mt final-iteration leaves)
    let mut table: BTreeMap<(u32, u32), (u64, u64, u64, u64)> = BTreeMap::new();
    for r in runs {
        let (Some((sv, sl)), Some((mv, ml))) = (r.result(Engine::Sss), r.result(Engine::MtSss)) else {
            continue;
        };
        out.checked += 1;
        if sv != mv {
            out.failures.push(format!("{}: sss = {sv}, mt_sss = {mv}", r.label));
        }
        if !strictly_decreasing(&r.gammas) {
            out.failures.push(format!("{}: gamma sequence not strictly decreasing: {:?}", r.label, r.gammas));
        }
        if r.gammas.last() != Some(&mv) {
            out.failures.push(format!("{}: final gamma {:?} differs from value {mv}", r.label, r.gammas.last()));
        }
        let e = table.entry((r.w, r.d)).or_default();
        *e = (e.0 + 1, e.1 + sl, e.2 + ml, e.3 + r.mt_final_iter_leaves);
    }
    out.notes.push("mean leaf evaluations per tree shape:".into());
    out.notes
        .push(format!("{:>3} {:>3} {:>6} {:>12} {:>12} {:>16}", "w", "d", "trees", "sss", "mt_sss", "mt_sss final"));
    for ((w, d), (n, s, m, mf)) in table {
        let n_f = n as f64;
        out.notes.push(format!(
            "{w:>3} {d:>3} {n:>6} {:>12.1} {:>12.1} {:>16.1}",
            s as f64 / n_f,
            m as f64 / n_f,
            mf as f64 / n_f
        ));
    }
    out
}

/// `2 * w^ceil(d/2)`.
pub fn open_peak_bound(w: u32, d: u32) -> u64 {
    2 * u64::from(w).pow(d.div_ceil(2))
}

pub fn check_open_peak(runs: &[TreeRun]) -> PropertyOutcome {
    let mut out = PropertyOutcome::new("open-peak-bound");
    // (w, d) -> largest peak seen
    let mut peaks: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for r in runs {
        out.checked += 1;
        let bound = open_peak_bound(r.w, r.d);
        if r.sss_open_peak > bound {
            out.failures.push(format!("{}: OPEN peak {} > {bound}", r.label, r.sss_open_peak));
        }
        let p = peaks.entry((r.w, r.d)).or_default();
        *p = (*p).max(r.sss_open_peak);
    }
    out.notes.push("largest OPEN peak per tree shape (bound 2*w^ceil(d/2)):".into());
    for ((w, d), p) in peaks {
        out.notes.push(format!("w={w} d={d}: peak {p}, bound {}", open_peak_bound(w, d)));
    }
    out
}

/// Leaves evaluated by SSS* must all be evaluated by full-window alpha-beta
/// in the same child order.
pub fn check_dominance(trees: &[SyntheticTree]) -> Result<PropertyOutcome, SearchError> {
    let mut out = PropertyOutcome::new("dominance");
    let (mut sss_total, mut ab_total) = (0usize, 0usize);
    for t in trees {
        out.checked += 1;
        let rec = Recorder::new(t);
        sss_star(&rec, &t.root(), t.depth(), None)?;
        let sss: HashSet<u64> = rec.evaluated().into_iter().collect();
        rec.clear();
        alphabeta(&rec, &t.root(), t.depth(), -INF, INF, None)?;
        let ab: HashSet<u64> = rec.evaluated().into_iter().collect();
        sss_total += sss.len();
        ab_total += ab.len();
        let extra = sss.difference(&ab).count();
        if extra > 0 {
            out.failures.push(format!("{}: {extra} leaves evaluated by sss but not by ab", tree_label(t)));
        }
    }
    out.notes.push(format!("distinct leaves evaluated: sss {sss_total}, ab {ab_total}"));
    Ok(out)
}

pub fn check_strategies(trees: &[SyntheticTree]) -> Result<PropertyOutcome, VerifyError> {
    let mut out = PropertyOutcome::new("strategy-theorem");
    let mut strategies = 0;
    for t in trees {
        out.checked += 1;
        let r = strategy_theorem(t)?;
        strategies += r.strategies;
        if r.max_of_min != r.minimax {
            out.failures.push(format!(
                "{}: max of strategy values {} != minimax {}",
                tree_label(t),
                r.max_of_min,
                r.minimax
            ));
        }
        if r.bound_violations > 0 {
            out.failures.push(format!("{}: {} leaves below their strategy value", tree_label(t), r.bound_violations));
        }
    }
    out.notes.push(format!("strategies enumerated: {strategies}"));
    Ok(out)
}

/// Every TT entry left by the enhanced engines brackets the minimax value of
/// its node searched to the stored depth.
pub fn check_tt_brackets(trees: &[SyntheticTree]) -> Result<PropertyOutcome, SearchError> {
    let mut out = PropertyOutcome::new("tt-brackets");
    let mut entries = 0;
    for t in trees.iter().filter(|t| t.leaves().len() as u64 <= BRACKET_LEAF_LIMIT).take(BRACKET_TREES) {
        out.checked += 1;
        let cfg = SearchConfig { tt_capacity: tt_capacity_for(t), node_budget: None };
        for mt in [false, true] {
            let mut s = EnhancedSearch::new(t, &cfg)?;
            if mt {
                s.mt_sss(&t.root(), t.depth())?;
            } else {
                s.alphabeta_id(&t.root(), t.depth())?;
            }
            for depth in 0..=t.depth() {
                for index in 0..u64::from(t.branching()).pow(depth) {
                    let node = SynNode { depth, index };
                    let Some(e) = s.tt().entry(crate::game::Game::key(t, &node)) else { continue };
                    entries += 1;
                    let v = minimax(t, &node, e.depth, None)?.value;
                    if !(e.lower <= v && v <= e.upper) {
                        out.failures.push(format!(
                            "{} node {}: [{}, {}] at depth {} misses {v}",
                            tree_label(t),
                            t.path_of(node),
                            e.lower,
                            e.upper,
                            e.depth
                        ));
                    }
                }
            }
        }
    }
    out.notes.push(format!("entries checked: {entries}"));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub outcomes: Vec<PropertyOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(PropertyOutcome::passed)
    }

    pub fn outcome(&self, name: &str) -> Option<&PropertyOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(
            f,
            "verify: trees={} max-depth={} seed={:#x}{}",
            c.trees,
            c.max_depth,
            c.seed,
            if c.tie_leaves { " tie-leaves" } else { "" }
        )?;
        for o in &self.outcomes {
            write!(f, "{o}")?;
        }
        writeln!(f, "{}", if self.all_passed() { "ALL PASS" } else { "SOME FAILED" })
    }
}

/// Runs all suites. Dominance uses the first 500 oracle trees, the strategy
/// theorem 200 small trees, both capped by `config.trees`.
pub fn run_verify(config: &VerifyConfig) -> Result<VerifyReport, VerifyError> {
    let search_err = |source| VerifyError::Search { position_id: 0, engine: Engine::Sss, depth: 0, source };
    let trees = oracle_trees(config.trees, config.max_depth, config.seed, config.tie_leaves)?;
    let runs = trees.iter().map(run_tree).collect::<Result<Vec<_>, _>>().map_err(search_err)?;
    let small = strategy_trees(config.trees.min(STRATEGY_TREES), config.max_depth, config.seed)?;
    let outcomes = vec![
        check_oracle(&runs),
        check_dominance(&trees[..config.trees.min(DOMINANCE_TREES)]).map_err(search_err)?,
        check_strategies(&small)?,
        check_mt_equivalence(&runs),
        check_open_peak(&runs),
        check_tt_brackets(&trees).map_err(search_err)?,
    ];
    Ok(VerifyReport { config: *config, outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_sets_are_seeded_and_bounded() {
        let a = oracle_trees(30, 16, 9, false).unwrap();
        assert_eq!(a, oracle_trees(30, 16, 9, false).unwrap());
        for (i, t) in a.iter().enumerate() {
            assert_eq!(t.branching(), [2, 3, 4][i % 3]);
            assert!(t.depth() >= 1 && t.leaves().len() as u64 <= ORACLE_LEAF_LIMIT);
        }
        assert!(oracle_trees(12, 3, 9, false).unwrap().iter().all(|t| t.depth() <= 3));
        let s = strategy_trees(40, 16, 1).unwrap();
        assert!(s.iter().all(|t| t.branching() <= 3 && t.depth() <= 4));
        let tied = oracle_trees(3, 4, 9, true).unwrap();
        assert!(tied.iter().any(|t| {
            let mut v = t.leaves().to_vec();
            v.sort_unstable();
            v.windows(2).any(|p| p[0] == p[1])
        }));
    }

    #[test]
    fn open_bound() {
        assert_eq!(open_peak_bound(2, 4), 8);
        assert_eq!(open_peak_bound(3, 3), 18);
        assert_eq!(open_peak_bound(4, 0), 2);
    }

    #[test]
    fn small_run_passes() {
        let report = run_verify(&VerifyConfig { trees: 12, max_depth: 4, ..Default::default() }).unwrap();
        assert!(report.all_passed(), "{report}");
        assert_eq!(report.outcomes.len(), 6);
        let text = report.to_string();
        assert!(text.contains("PASS oracle-equivalence (12 trees, 0 failures)"), "{text}");
        assert!(text.trim_end().ends_with("ALL PASS"));
    }

    #[test]
    fn failures_are_reported() {
        let t = gen_tree(2, 3, 4).unwrap();
        let mut run = run_tree(&t).unwrap();
        run.results[0].1 += 1;
        run.gammas = vec![INF, 3, 3];
        run.sss_open_peak = 100;
        let o = check_oracle(std::slice::from_ref(&run));
        assert!(!o.passed());
        assert!(o.to_string().starts_with("FAIL oracle-equivalence"));
        assert!(!check_mt_equivalence(std::slice::from_ref(&run)).passed());
        assert!(!check_open_peak(std::slice::from_ref(&run)).passed());
    }
}
