//! DOT rendering of an SSS* trace.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use sss_core::game::fmt_score;
use sss_core::open_list::SssStatus;
use sss_core::search::{StepCase, StepRecord};
use sss_core::synthetic::SyntheticTree;
use sss_core::{DeweyPath, Game, Player, Score};

const EVALUATED: &str = "pink";
const SOLVED: &str = "lightblue";
const VISITED: &str = "lightyellow";
const UNVISITED: &str = "gray90";

#[derive(Default)]
struct Marks {
    evaluated: BTreeSet<DeweyPath>,
    /// Final merit of each node pushed as SOLVED.
    solved: BTreeMap<DeweyPath, Score>,
    visited: BTreeSet<DeweyPath>,
}

fn marks(records: &[StepRecord]) -> Marks {
    let mut m = Marks::default();
    for r in records {
        m.visited.insert(r.popped.path.clone());
        if r.case == StepCase::F3 {
            m.evaluated.insert(r.popped.path.clone());
        }
        for p in &r.pushed {
            m.visited.insert(p.path.clone());
            if p.status == SssStatus::Solved {
                m.solved.insert(p.path.clone(), p.merit);
            }
        }
    }
    m
}

fn node_id(p: &DeweyPath) -> String {
    let mut s = String::from("n");
    for i in p.indices() {
        write!(s, "_{i}").unwrap();
    }
    s
}

fn fill(m: &Marks, p: &DeweyPath) -> &'static str {
    if m.evaluated.contains(p) {
        EVALUATED
    } else if m.solved.contains_key(p) {
        SOLVED
    } else if m.visited.contains(p) {
        VISITED
    } else {
        UNVISITED
    }
}

fn header(out: &mut String) {
    out.push_str("digraph sss {\n");
    writeln!(
        out,
        "  // {EVALUATED}: evaluated leaf, {SOLVED}: solved interior, {VISITED}: visited, {UNVISITED}: never visited"
    )
    .unwrap();
    out.push_str("  node [style=filled, fontname=\"Helvetica\"];\n");
}

/// Every node of `tree` down to `depth`. MAX nodes are boxes.
pub fn tree_graph(tree: &SyntheticTree, depth: u32, records: &[StepRecord]) -> String {
    let m = marks(records);
    let mut out = String::new();
    header(&mut out);
    let mut stack = vec![DeweyPath::root()];
    let mut edges = Vec::new();
    while let Some(p) = stack.pop() {
        let level = p.len() as u32;
        let shape = match SyntheticTree::player_at_depth(level) {
            Player::Max => "box",
            Player::Min => "ellipse",
        };
        let mut label = p.to_string();
        if level == depth {
            write!(label, "\\n{}", tree.eval(&tree.node_at(&p))).unwrap();
        } else if let Some(v) = m.solved.get(&p) {
            write!(label, "\\n= {}", fmt_score(*v)).unwrap();
        }
        writeln!(out, "  {} [label=\"{label}\", shape={shape}, fillcolor={}];", node_id(&p), fill(&m, &p)).unwrap();
        if level < depth {
            for c in (0..tree.branching()).rev() {
                let child = p.child(c);
                edges.push((node_id(&p), node_id(&child)));
                stack.push(child);
            }
        }
    }
    edges.sort();
    for (a, b) in edges {
        writeln!(out, "  {a} -> {b};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// Only the nodes the search touched; used when the full tree is too large.
pub fn visited_graph(records: &[StepRecord]) -> String {
    let m = marks(records);
    let mut out = String::new();
    header(&mut out);
    for p in &m.visited {
        let mut label = p.to_string();
        if let Some(v) = m.solved.get(p) {
            write!(label, "\\n= {}", fmt_score(*v)).unwrap();
        }
        writeln!(out, "  {} [label=\"{label}\", fillcolor={}];", node_id(p), fill(&m, p)).unwrap();
    }
    for p in &m.visited {
        if let Some(parent) = p.parent() {
            writeln!(out, "  {} -> {};", node_id(&parent), node_id(p)).unwrap();
        }
    }
    out.push_str("}\n");
    out
}
