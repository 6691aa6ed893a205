//! Game-tree search: Stockman's SSS*, vanilla and enhanced alpha-beta, and
//! MT-SSS*, over Othello-Reversi and seeded synthetic trees.
//!
//! The [`verify`] module checks the strategy/cluster theory SSS* rests on and
//! runs the leaf-count benchmark over a suite of Othello positions.

pub mod game;
pub mod open_list;
pub mod othello;
pub mod search;
pub mod synthetic;
pub mod transposition;
pub mod verify;

pub use game::{DeweyPath, Game, Player, Score, INF};
pub use search::{Engine, SearchConfig, SearchError, SearchResult, SearchStats};
