//! Stockman's SSS* over an explicit OPEN list.
//!
//! Each step pops the head of OPEN and applies one case of the Γ operator:
//!
//! | case | popped state                               | action                                   |
//! |------|--------------------------------------------|------------------------------------------|
//! | F1   | LIVE, MAX to move, expandable              | push every child LIVE, same merit        |
//! | F2   | LIVE, MIN to move, expandable              | push the first child LIVE, same merit    |
//! | F3   | LIVE, terminal or at the depth limit       | push itself SOLVED at min(eval, merit)   |
//! | B1   | SOLVED root                                | done, value = merit                      |
//! | B2   | SOLVED, parent MAX to move                 | push parent SOLVED, purge its subtree    |
//! | B3   | SOLVED, parent MIN, untried next sibling   | push next sibling LIVE, same merit       |
//! | B4   | SOLVED, parent MIN, last sibling           | push parent SOLVED, same merit           |
//!
//! MAX means "the root's side is to move", so passes need no special casing.

use std::fmt;
use std::rc::Rc;
use std::time::Instant;

use super::{Meter, SearchError, SearchResult, SearchStats};
use crate::game::{fmt_score, DeweyPath, Game, Player, Score, INF};
use crate::open_list::{OpenList, SssState, SssStatus, StateSummary};

/// A node's state with a link to its parent's, shared between OPEN entries.
#[derive(Debug)]
pub struct Snapshot<S> {
    pub state: S,
    pub parent: Option<Rc<Snapshot<S>>>,
}

pub type Node<S> = Rc<Snapshot<S>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepCase {
    F1,
    F2,
    F3,
    B1,
    B2,
    B3,
    B4,
}

impl fmt::Display for StepCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub step: u64,
    pub case: StepCase,
    pub popped: StateSummary,
    pub pushed: Vec<StateSummary>,
    pub purged: usize,
    pub open_len: usize,
    /// Set when case B1 fires.
    pub final_value: Option<Score>,
}

impl fmt::Display for StepRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {} {} pop {} push [", self.step, self.case, self.popped)?;
        for (i, p) in self.pushed.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "] purged {} open {}", self.purged, self.open_len)?;
        if let Some(v) = self.final_value {
            write!(f, " value {}", fmt_score(v))?;
        }
        Ok(())
    }
}

fn violation(msg: impl Into<String>) -> SearchError {
    SearchError::GammaViolation(msg.into())
}

/// Applies one Γ case to the head of `open`. `step` is the number recorded
/// in the returned record.
pub fn gamma_step<G: Game>(
    game: &G,
    open: &mut OpenList<Node<G::State>>,
    depth_limit: u32,
    meter: &mut Meter,
    step: u64,
) -> Result<StepRecord, SearchError> {
    let head = open.pop_max()?;
    let popped = head.summary();
    let mut pushed = Vec::new();
    let mut purged = 0;
    let mut final_value = None;

    let push = |open: &mut OpenList<Node<G::State>>,
                pushed: &mut Vec<StateSummary>,
                s: SssState<Node<G::State>>|
     -> Result<(), SearchError> {
        pushed.push(s.summary());
        open.push(s)?;
        Ok(())
    };

    let case = match head.status {
        SssStatus::Live => {
            let state = &head.payload.state;
            let at_limit = head.path.len() as u32 >= depth_limit;
            if at_limit || game.is_terminal(state) {
                meter.leaf()?;
                let merit = game.eval(state).min(head.merit);
                push(open, &mut pushed, SssState { status: SssStatus::Solved, merit, ..head })?;
                StepCase::F3
            } else {
                meter.interior();
                let moves = game.moves(state);
                let (case, take) = match head.player {
                    Player::Max => (StepCase::F1, moves.len()),
                    Player::Min => (StepCase::F2, 1),
                };
                for (i, &mv) in moves.iter().enumerate().take(take) {
                    let child = game.apply(state, mv);
                    let player = game.player(&child);
                    let payload = Rc::new(Snapshot { state: child, parent: Some(head.payload.clone()) });
                    let s = SssState {
                        path: head.path.child(i as u32),
                        status: SssStatus::Live,
                        merit: head.merit,
                        player,
                        payload,
                    };
                    push(open, &mut pushed, s)?;
                }
                case
            }
        }
        SssStatus::Solved => match (head.path.parent(), head.payload.parent.clone()) {
            (None, _) => {
                final_value = Some(head.merit);
                StepCase::B1
            }
            (Some(parent_path), Some(parent)) => {
                let parent_player = game.player(&parent.state);
                let solved_parent = |payload: Node<G::State>| SssState {
                    path: parent_path.clone(),
                    status: SssStatus::Solved,
                    merit: head.merit,
                    player: parent_player,
                    payload,
                };
                match parent_player {
                    Player::Max => {
                        purged = open.purge_descendants(&parent_path);
                        push(open, &mut pushed, solved_parent(parent))?;
                        StepCase::B2
                    }
                    Player::Min => {
                        let idx = head.path.last().expect("non-root path") as usize;
                        let moves = game.moves(&parent.state);
                        if idx + 1 < moves.len() {
                            let sib = game.apply(&parent.state, moves[idx + 1]);
                            let player = game.player(&sib);
                            let s = SssState {
                                path: parent_path.child(idx as u32 + 1),
                                status: SssStatus::Live,
                                merit: head.merit,
                                player,
                                payload: Rc::new(Snapshot { state: sib, parent: Some(parent) }),
                            };
                            push(open, &mut pushed, s)?;
                            StepCase::B3
                        } else {
                            if open.has_descendant(&parent_path) {
                                return Err(violation(format!(
                                    "MIN node {parent_path} solved while OPEN still holds its descendants"
                                )));
                            }
                            push(open, &mut pushed, solved_parent(parent))?;
                            StepCase::B4
                        }
                    }
                }
            }
            (Some(p), None) => return Err(violation(format!("state below {p} has no parent snapshot"))),
        },
    };

    Ok(StepRecord { step, case, popped, pushed, purged, open_len: open.len(), final_value })
}

/// A running SSS* search that can be stepped for tracing.
pub struct SssSearch<'g, G: Game> {
    game: &'g G,
    open: OpenList<Node<G::State>>,
    root_moves: Vec<G::Move>,
    depth_limit: u32,
    meter: Meter,
    steps: u64,
    value: Option<Score>,
    best_index: Option<u32>,
}

impl<'g, G: Game> SssSearch<'g, G> {
    pub fn new(game: &'g G, root: &G::State, depth_limit: u32, budget: Option<u64>) -> Self {
        let mut open = OpenList::new();
        open.push(SssState {
            path: DeweyPath::root(),
            status: SssStatus::Live,
            merit: INF,
            player: game.player(root),
            payload: Rc::new(Snapshot { state: root.clone(), parent: None }),
        })
        .expect("fresh OPEN list");
        SssSearch {
            game,
            open,
            root_moves: game.moves(root),
            depth_limit,
            meter: Meter::new(budget),
            steps: 0,
            value: None,
            best_index: None,
        }
    }

    pub fn open(&self) -> &OpenList<Node<G::State>> {
        &self.open
    }

    pub fn is_done(&self) -> bool {
        self.value.is_some()
    }

    pub fn value(&self) -> Option<Score> {
        self.value
    }

    pub fn stats(&self) -> SearchStats {
        let mut s = self.meter.stats;
        s.open_peak = self.open.peak() as u64;
        s.leaf_evals_final_iter = s.leaf_evals;
        s
    }

    /// Performs one Γ step. Returns `None` once the root is solved.
    pub fn step(&mut self) -> Result<Option<StepRecord>, SearchError> {
        if self.is_done() {
            return Ok(None);
        }
        self.steps += 1;
        let rec = gamma_step(self.game, &mut self.open, self.depth_limit, &mut self.meter, self.steps)?;
        if rec.case == StepCase::B2 && rec.popped.path.len() == 1 {
            self.best_index = rec.popped.path.last();
        }
        if let Some(v) = rec.final_value {
            self.value = Some(v);
        }
        Ok(Some(rec))
    }

    pub fn best_move(&self) -> Option<G::Move> {
        self.best_index.map(|i| self.root_moves[i as usize])
    }

    pub fn run(mut self) -> Result<SearchResult<G::Move>, SearchError> {
        let start = Instant::now();
        while self.step()?.is_some() {}
        let mut stats = self.stats();
        stats.elapsed_ns = start.elapsed().as_nanos() as u64;
        Ok(SearchResult { value: self.value.expect("loop ends at B1"), best_move: self.best_move(), stats })
    }
}

pub fn sss_star<G: Game>(
    game: &G,
    root: &G::State,
    depth: u32,
    budget: Option<u64>,
) -> Result<SearchResult<G::Move>, SearchError> {
    SssSearch::new(game, root, depth, budget).run()
}
