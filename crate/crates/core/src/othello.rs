//! Othello-Reversi on two 64-bit occupancy masks.
//!
//! Square index is `rank * 8 + file` with a1 = 0, so b1 = 1 and a2 = 8.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::game::{Game, Player, Score};

const NOT_FILE_A: u64 = 0xfefe_fefe_fefe_fefe;
const NOT_FILE_H: u64 = 0x7f7f_7f7f_7f7f_7f7f;
const CORNERS: u64 = (1 << 0) | (1 << 7) | (1 << 56) | (1 << 63);

/// Seed for the Zobrist codes ("5EED 0TELLO").
pub const ZOBRIST_SEED: u64 = 0x5EED_07E1_1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn opposite(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Square(u8),
    Pass,
}

impl Move {
    pub fn square(self) -> Option<u8> {
        match self {
            Move::Square(s) => Some(s),
            Move::Pass => None,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Move::Pass => f.write_str("pass"),
            Move::Square(s) => {
                let file = (b'a' + s % 8) as char;
                write!(f, "{}{}", file, s / 8 + 1)
            }
        }
    }
}

impl FromStr for Move {
    type Err = OthelloError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("pass") {
            return Ok(Move::Pass);
        }
        let b = s.as_bytes();
        if b.len() != 2 {
            return Err(OthelloError::BadMoveText(s.to_string()));
        }
        let file = b[0].to_ascii_lowercase().wrapping_sub(b'a');
        let rank = b[1].wrapping_sub(b'1');
        if file >= 8 || rank >= 8 {
            return Err(OthelloError::BadMoveText(s.to_string()));
        }
        Ok(Move::Square(rank * 8 + file))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OthelloError {
    #[error("illegal move {0}")]
    IllegalMove(Move),
    #[error("position text must be 66 characters (64 squares, space, side), got {0}")]
    BadLength(usize),
    #[error("unexpected character {ch:?} at offset {offset}")]
    BadChar { offset: usize, ch: char },
    #[error("bad move text {0:?}")]
    BadMoveText(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Board {
    pub black: u64,
    pub white: u64,
    pub side_to_move: Color,
}

#[inline]
fn shift(b: u64, dir: usize) -> u64 {
    match dir {
        0 => b << 8,                // north
        1 => b >> 8,                // south
        2 => (b << 1) & NOT_FILE_A, // east
        3 => (b >> 1) & NOT_FILE_H, // west
        4 => (b << 9) & NOT_FILE_A, // north-east
        5 => (b << 7) & NOT_FILE_H, // north-west
        6 => (b >> 7) & NOT_FILE_A, // south-east
        _ => (b >> 9) & NOT_FILE_H, // south-west
    }
}

/// Squares where `own` may play against `opp`.
pub fn move_mask(own: u64, opp: u64) -> u64 {
    let empty = !(own | opp);
    let mut moves = 0;
    for dir in 0..8 {
        let mut x = shift(own, dir) & opp;
        for _ in 0..5 {
            x |= shift(x, dir) & opp;
        }
        moves |= shift(x, dir) & empty;
    }
    moves
}

fn flips(own: u64, opp: u64, sq: u8) -> u64 {
    let bit = 1u64 << sq;
    let mut all = 0;
    for dir in 0..8 {
        let mut line = 0;
        let mut x = shift(bit, dir);
        while x & opp != 0 {
            line |= x;
            x = shift(x, dir);
        }
        if x & own != 0 {
            all |= line;
        }
    }
    all
}

pub fn initial_board() -> Board {
    Board { black: (1 << 28) | (1 << 35), white: (1 << 27) | (1 << 36), side_to_move: Color::Black }
}

impl Board {
    pub fn own_opp(&self) -> (u64, u64) {
        match self.side_to_move {
            Color::Black => (self.black, self.white),
            Color::White => (self.white, self.black),
        }
    }

    pub fn discs(&self, color: Color) -> u64 {
        match color {
            Color::Black => self.black,
            Color::White => self.white,
        }
    }

    pub fn disc_count(&self) -> u32 {
        (self.black | self.white).count_ones()
    }

    pub fn with_side(self, side: Color) -> Board {
        Board { side_to_move: side, ..self }
    }

    /// Exchanges the disc colors and the side to move.
    pub fn swap_colors(&self) -> Board {
        Board { black: self.white, white: self.black, side_to_move: self.side_to_move.opposite() }
    }

    /// Mask of squares the side to move can play.
    pub fn move_mask(&self) -> u64 {
        let (own, opp) = self.own_opp();
        move_mask(own, opp)
    }

    pub fn legal_moves(&self) -> Vec<Move> {
        legal_moves(self)
    }

    pub fn is_terminal(&self) -> bool {
        is_terminal(self)
    }

    pub fn apply(&self, mv: Move) -> Result<Board, OthelloError> {
        apply_move(self, mv)
    }
}

/// Legal moves in ascending square order; `[Pass]` when only the opponent
/// can move; empty when the game is over.
pub fn legal_moves(board: &Board) -> Vec<Move> {
    let (own, opp) = board.own_opp();
    let mut mask = move_mask(own, opp);
    if mask == 0 {
        return if move_mask(opp, own) != 0 { vec![Move::Pass] } else { Vec::new() };
    }
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(Move::Square(mask.trailing_zeros() as u8));
        mask &= mask - 1;
    }
    out
}

pub fn is_terminal(board: &Board) -> bool {
    let (own, opp) = board.own_opp();
    move_mask(own, opp) == 0 && move_mask(opp, own) == 0
}

pub fn apply_move(board: &Board, mv: Move) -> Result<Board, OthelloError> {
    let (own, opp) = board.own_opp();
    let (own, opp) = match mv {
        Move::Pass => {
            if move_mask(own, opp) != 0 || move_mask(opp, own) == 0 {
                return Err(OthelloError::IllegalMove(mv));
            }
            (own, opp)
        }
        Move::Square(sq) => {
            if sq >= 64 || (own | opp) & (1 << sq) != 0 {
                return Err(OthelloError::IllegalMove(mv));
            }
            let f = flips(own, opp, sq);
            if f == 0 {
                return Err(OthelloError::IllegalMove(mv));
            }
            (own | f | (1 << sq), opp & !f)
        }
    };
    let side = board.side_to_move;
    let (black, white) = match side {
        Color::Black => (own, opp),
        Color::White => (opp, own),
    };
    Ok(Board { black, white, side_to_move: side.opposite() })
}

/// Game over: 1000 per disc of differential. Otherwise corners (x100),
/// mobility (x10) and discs (x1), all from `perspective`.
pub fn evaluate(board: &Board, perspective: Color) -> Score {
    let own = board.discs(perspective);
    let opp = board.discs(perspective.opposite());
    let disc_diff = own.count_ones() as Score - opp.count_ones() as Score;
    let own_mob = move_mask(own, opp).count_ones() as Score;
    let opp_mob = move_mask(opp, own).count_ones() as Score;
    if own_mob == 0 && opp_mob == 0 {
        return disc_diff * 1_000;
    }
    let corner_diff = (own & CORNERS).count_ones() as Score - (opp & CORNERS).count_ones() as Score;
    100 * corner_diff + 10 * (own_mob - opp_mob) + disc_diff
}

const fn splitmix64(state: u64) -> (u64, u64) {
    let state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    (state, z ^ (z >> 31))
}

struct ZobristCodes {
    squares: [[u64; 64]; 2],
    white_to_move: u64,
}

const fn zobrist_codes() -> ZobristCodes {
    let mut squares = [[0u64; 64]; 2];
    let mut state = ZOBRIST_SEED;
    let mut color = 0;
    while color < 2 {
        let mut sq = 0;
        while sq < 64 {
            let (s, z) = splitmix64(state);
            state = s;
            squares[color][sq] = z;
            sq += 1;
        }
        color += 1;
    }
    let (_, white_to_move) = splitmix64(state);
    ZobristCodes { squares, white_to_move }
}

static ZOBRIST: ZobristCodes = zobrist_codes();

pub fn zobrist_key(board: &Board) -> u64 {
    let mut key = 0;
    for (color, mut mask) in [(0, board.black), (1, board.white)] {
        while mask != 0 {
            key ^= ZOBRIST.squares[color][mask.trailing_zeros() as usize];
            mask &= mask - 1;
        }
    }
    if board.side_to_move == Color::White {
        key ^= ZOBRIST.white_to_move;
    }
    key
}

/// 64 characters over `X` (black), `O` (white), `-`, a space, then the side to move.
pub fn format_position(board: &Board) -> String {
    let mut s = String::with_capacity(66);
    for sq in 0..64 {
        let bit = 1u64 << sq;
        s.push(if board.black & bit != 0 {
            'X'
        } else if board.white & bit != 0 {
            'O'
        } else {
            '-'
        });
    }
    s.push(' ');
    s.push(match board.side_to_move {
        Color::Black => 'X',
        Color::White => 'O',
    });
    s
}

pub fn parse_position(text: &str) -> Result<Board, OthelloError> {
    let chars: Vec<char> = text.chars().collect();
    if chars.len() != 66 {
        return Err(OthelloError::BadLength(chars.len()));
    }
    let (mut black, mut white) = (0u64, 0u64);
    for (offset, &ch) in chars[..64].iter().enumerate() {
        match ch {
            'X' => black |= 1 << offset,
            'O' => white |= 1 << offset,
            '-' => {}
            _ => return Err(OthelloError::BadChar { offset, ch }),
        }
    }
    if chars[64] != ' ' {
        return Err(OthelloError::BadChar { offset: 64, ch: chars[64] });
    }
    let side_to_move = match chars[65] {
        'X' => Color::Black,
        'O' => Color::White,
        ch => return Err(OthelloError::BadChar { offset: 65, ch }),
    };
    Ok(Board { black, white, side_to_move })
}

impl fmt::Display for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_position(self))
    }
}

impl FromStr for Board {
    type Err = OthelloError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_position(s)
    }
}

/// Maps a square through one of the 8 symmetries of the square board.
/// `sym` bit 0 mirrors files, bit 1 mirrors ranks, bit 2 transposes.
pub fn transform_square(sq: u8, sym: u8) -> u8 {
    let (mut r, mut f) = (sq / 8, sq % 8);
    if sym & 4 != 0 {
        std::mem::swap(&mut r, &mut f);
    }
    if sym & 1 != 0 {
        f = 7 - f;
    }
    if sym & 2 != 0 {
        r = 7 - r;
    }
    r * 8 + f
}

fn transform_mask(mask: u64, sym: u8) -> u64 {
    (0..64u8).filter(|&sq| mask & (1 << sq) != 0).fold(0, |acc, sq| acc | 1 << transform_square(sq, sym))
}

pub fn transform_board(board: &Board, sym: u8) -> Board {
    Board {
        black: transform_mask(board.black, sym),
        white: transform_mask(board.white, sym),
        side_to_move: board.side_to_move,
    }
}

/// Othello seen through the search interface. MAX is `max_color`.
#[derive(Debug, Clone, Copy)]
pub struct OthelloGame {
    pub max_color: Color,
}

impl OthelloGame {
    /// Adapter whose MAX is the side to move at `root`.
    pub fn rooted_at(root: &Board) -> Self {
        OthelloGame { max_color: root.side_to_move }
    }
}

impl Game for OthelloGame {
    type State = Board;
    type Move = Move;

    fn moves(&self, state: &Board) -> Vec<Move> {
        legal_moves(state)
    }

    fn apply(&self, state: &Board, mv: Move) -> Board {
        apply_move(state, mv).expect("searcher applied an illegal move")
    }

    fn eval(&self, state: &Board) -> Score {
        evaluate(state, self.max_color)
    }

    fn key(&self, state: &Board) -> u64 {
        zobrist_key(state)
    }

    fn player(&self, state: &Board) -> Player {
        if state.side_to_move == self.max_color {
            Player::Max
        } else {
            Player::Min
        }
    }

    fn is_terminal(&self, state: &Board) -> bool {
        is_terminal(state)
    }

    fn history_slot(&self, mv: Move) -> Option<usize> {
        mv.square().map(usize::from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn squares(moves: &[Move]) -> Vec<u8> {
        moves.iter().filter_map(|m| m.square()).collect()
    }

    #[test]
    fn initial_position() {
        let b = initial_board();
        assert_eq!(b.black.count_ones(), 2);
        assert_eq!(b.white.count_ones(), 2);
        assert_eq!(b.black & b.white, 0);
        assert_eq!(b.side_to_move, Color::Black);
        assert!(!is_terminal(&b));
        assert_eq!(squares(&legal_moves(&b)), vec![19, 26, 37, 44]);
        let names: Vec<String> = legal_moves(&b).iter().map(|m| m.to_string()).collect();
        assert_eq!(names, vec!["d3", "c4", "f5", "e6"]);
    }

    #[test]
    fn first_move_flips_d4() {
        let b = apply_move(&initial_board(), Move::Square(19)).unwrap();
        assert_eq!(b.black, (1 << 19) | (1 << 27) | (1 << 28) | (1 << 35));
        assert_eq!(b.white, 1 << 36);
        assert_eq!(b.side_to_move, Color::White);
    }

    #[test]
    fn illegal_moves_are_rejected() {
        let b = initial_board();
        assert_eq!(apply_move(&b, Move::Square(0)), Err(OthelloError::IllegalMove(Move::Square(0))));
        assert_eq!(apply_move(&b, Move::Square(27)), Err(OthelloError::IllegalMove(Move::Square(27))));
        assert_eq!(apply_move(&b, Move::Pass), Err(OthelloError::IllegalMove(Move::Pass)));
    }

    #[test]
    fn full_board_is_terminal() {
        let b = Board { black: u64::MAX >> 24, white: !(u64::MAX >> 24), side_to_move: Color::Black };
        assert!(legal_moves(&b).is_empty());
        assert!(is_terminal(&b));
        // 40 black, 24 white
        assert_eq!(evaluate(&b, Color::Black), 16_000);
        assert_eq!(evaluate(&b, Color::White), -16_000);
    }

    #[test]
    fn initial_eval_is_zero() {
        assert_eq!(evaluate(&initial_board(), Color::Black), 0);
        assert_eq!(evaluate(&initial_board(), Color::White), 0);
    }

    #[test]
    fn zobrist_basics() {
        let b = initial_board();
        assert_ne!(zobrist_key(&b), zobrist_key(&b.with_side(Color::White)));
        // every 4-ply line from the start, grouped by the position it reaches
        let mut by_board: std::collections::HashMap<Board, Vec<u64>> = Default::default();
        let mut frontier = vec![b];
        for _ in 0..4 {
            frontier = frontier
                .iter()
                .flat_map(|p| legal_moves(p).into_iter().map(move |m| apply_move(p, m).unwrap()))
                .collect();
        }
        for p in &frontier {
            by_board.entry(*p).or_default().push(zobrist_key(p));
        }
        assert!(by_board.values().any(|keys| keys.len() > 1), "no transposition found");
        for keys in by_board.values() {
            assert!(keys.iter().all(|&k| k == keys[0]));
        }
        let pass_twice = Board { black: 1 << 9, white: 1 << 20, side_to_move: Color::Black };
        assert_eq!(zobrist_key(&pass_twice.with_side(Color::White).with_side(Color::Black)), zobrist_key(&pass_twice));
    }

    #[test]
    fn position_text() {
        let b = initial_board();
        let s = format_position(&b);
        assert_eq!(s.len(), 66);
        for (off, ch) in s.char_indices() {
            let expect = match off {
                28 | 35 => 'X',
                27 | 36 => 'O',
                64 => ' ',
                65 => 'X',
                _ => '-',
            };
            assert_eq!(ch, expect, "offset {off}");
        }
        assert_eq!(parse_position(&s), Ok(b));
        assert_eq!(parse_position(&s[..63]), Err(OthelloError::BadLength(63)));
        let mut bad = s.clone();
        bad.replace_range(3..4, "Q");
        assert_eq!(parse_position(&bad), Err(OthelloError::BadChar { offset: 3, ch: 'Q' }));
    }

    #[test]
    fn move_text_round_trip() {
        for sq in 0..64u8 {
            let m = Move::Square(sq);
            assert_eq!(m.to_string().parse::<Move>().unwrap(), m);
        }
        assert_eq!("pass".parse::<Move>().unwrap(), Move::Pass);
        assert!("z9".parse::<Move>().is_err());
    }

    #[test]
    fn transform_square_group() {
        for sym in 0..8 {
            let mut seen = [false; 64];
            for sq in 0..64 {
                seen[transform_square(sq, sym) as usize] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
        // mirror files: a1 -> h1
        assert_eq!(transform_square(0, 1), 7);
        // transpose: b1 -> a2
        assert_eq!(transform_square(1, 4), 8);
    }
}
