//! Othello rules checked against a naive square-by-square scanner.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sss_core::othello::{
    apply_move, evaluate, format_position, initial_board, is_terminal, legal_moves, parse_position, transform_board,
    transform_square, zobrist_key, Board, Color, Move,
};

const DIRS: [(i32, i32); 8] = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)];

fn at(mask: u64, r: i32, f: i32) -> bool {
    mask & (1u64 << (r * 8 + f)) != 0
}

/// Discs flipped by `own` playing `sq`, found by walking each ray.
fn naive_flips(own: u64, opp: u64, sq: u8) -> u64 {
    if (own | opp) & (1 << sq) != 0 {
        return 0;
    }
    let (r0, f0) = (i32::from(sq / 8), i32::from(sq % 8));
    let mut total = 0;
    for (dr, df) in DIRS {
        let (mut r, mut f, mut line) = (r0 + dr, f0 + df, 0u64);
        while (0..8).contains(&r) && (0..8).contains(&f) && at(opp, r, f) {
            line |= 1 << (r * 8 + f);
            r += dr;
            f += df;
        }
        if line != 0 && (0..8).contains(&r) && (0..8).contains(&f) && at(own, r, f) {
            total |= line;
        }
    }
    total
}

fn own_opp(b: &Board) -> (u64, u64) {
    match b.side_to_move {
        Color::Black => (b.black, b.white),
        Color::White => (b.white, b.black),
    }
}

fn naive_squares(own: u64, opp: u64) -> Vec<u8> {
    (0..64).filter(|&sq| naive_flips(own, opp, sq) != 0).collect()
}

fn squares(moves: &[Move]) -> Vec<u8> {
    moves.iter().filter_map(|m| m.square()).collect()
}

/// Positions from seeded random playouts, including the final ones.
fn random_positions(seed: u64, games: usize) -> Vec<Board> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..games {
        let mut b = initial_board();
        loop {
            out.push(b);
            let moves = legal_moves(&b);
            let Some(&mv) = moves.choose(&mut rng) else { break };
            b = apply_move(&b, mv).unwrap();
        }
    }
    out
}

#[test]
fn moves_and_flips_match_naive_scanner() {
    for b in random_positions(1, 60) {
        let (own, opp) = own_opp(&b);
        let naive = naive_squares(own, opp);
        let moves = legal_moves(&b);
        if naive.is_empty() {
            let opp_can = !naive_squares(opp, own).is_empty();
            assert_eq!(moves, if opp_can { vec![Move::Pass] } else { vec![] }, "{}", format_position(&b));
            continue;
        }
        assert_eq!(squares(&moves), naive, "{}", format_position(&b));
        for sq in naive {
            let after = apply_move(&b, Move::Square(sq)).unwrap();
            let f = naive_flips(own, opp, sq);
            let (new_own, new_opp) = (own | f | (1 << sq), opp & !f);
            let expected = match b.side_to_move {
                Color::Black => (new_own, new_opp),
                Color::White => (new_opp, new_own),
            };
            assert_eq!((after.black, after.white), expected);
            assert_eq!(after.side_to_move, b.side_to_move.opposite());
        }
    }
}

#[test]
fn forced_pass() {
    // white a1, black b1, black to move: black cannot flank, white can play c1
    let b = Board { black: 1 << 1, white: 1 << 0, side_to_move: Color::Black };
    assert_eq!(legal_moves(&b), vec![Move::Pass]);
    assert!(!is_terminal(&b));
    let after = apply_move(&b, Move::Pass).unwrap();
    assert_eq!((after.black, after.white, after.side_to_move), (b.black, b.white, Color::White));
    assert_eq!(squares(&legal_moves(&after)), vec![2]);
    assert!(apply_move(&after, Move::Pass).is_err());
}

#[test]
fn both_sides_blocked_with_empty_squares() {
    let b = Board { black: 1 | (1 << 63), white: 0, side_to_move: Color::White };
    assert!(is_terminal(&b));
    assert!(legal_moves(&b).is_empty());
    assert!(apply_move(&b, Move::Pass).is_err());
    assert_eq!(evaluate(&b, Color::Black), 2000);
    assert_eq!(evaluate(&b, Color::White), -2000);
}

#[test]
fn passes_occur_in_random_games() {
    let passes = random_positions(2, 200).iter().filter(|b| legal_moves(b) == vec![Move::Pass]).count();
    assert!(passes > 0);
}

#[test]
fn dihedral_symmetry() {
    for b in random_positions(3, 10) {
        for sym in 0..8 {
            let t = transform_board(&b, sym);
            let mut expected: Vec<u8> = squares(&legal_moves(&b)).iter().map(|&s| transform_square(s, sym)).collect();
            expected.sort_unstable();
            assert_eq!(squares(&legal_moves(&t)), expected);
            assert_eq!(evaluate(&t, Color::Black), evaluate(&b, Color::Black));
            assert_eq!(is_terminal(&t), is_terminal(&b));
            for m in legal_moves(&b).into_iter().filter_map(|m| m.square()) {
                let lhs = apply_move(&t, Move::Square(transform_square(m, sym))).unwrap();
                let rhs = transform_board(&apply_move(&b, Move::Square(m)).unwrap(), sym);
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn color_symmetry() {
    for b in random_positions(4, 10) {
        let s = b.swap_colors();
        assert_eq!(legal_moves(&s), legal_moves(&b));
        assert_eq!(evaluate(&s, Color::White), evaluate(&b, Color::Black));
        assert_eq!(s.swap_colors(), b);
    }
}

#[test]
fn evaluation_is_zero_sum() {
    for b in random_positions(5, 20) {
        assert_eq!(evaluate(&b, Color::Black), -evaluate(&b, Color::White));
    }
}

#[test]
fn each_placement_adds_one_disc() {
    for b in random_positions(6, 20) {
        for m in legal_moves(&b) {
            let after = apply_move(&b, m).unwrap();
            let added = if m == Move::Pass { 0 } else { 1 };
            assert_eq!(after.disc_count(), b.disc_count() + added);
            assert_eq!(after.black & after.white, 0);
        }
    }
}

#[test]
fn text_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut all = random_positions(7, 20);
    all.shuffle(&mut rng);
    for b in all.iter().take(100) {
        let text = format_position(b);
        assert_eq!(text.len(), 66);
        assert_eq!(parse_position(&text).unwrap(), *b);
    }
}

#[test]
fn zobrist_ignores_move_order_but_not_side() {
    let b = initial_board();
    let w = b.with_side(Color::White);
    assert_ne!(zobrist_key(&b), zobrist_key(&w));
    let positions = random_positions(8, 10);
    let distinct_boards: std::collections::HashSet<_> =
        positions.iter().map(|b| (b.black, b.white, b.side_to_move)).collect();
    let distinct_keys: std::collections::HashSet<_> = positions.iter().map(zobrist_key).collect();
    assert_eq!(distinct_boards.len(), distinct_keys.len());
}

#[test]
fn opening_moves() {
    assert_eq!(squares(&legal_moves(&initial_board())), vec![19, 26, 37, 44]);
    let text: Vec<String> = legal_moves(&initial_board()).iter().map(|m| m.to_string()).collect();
    assert_eq!(text, ["d3", "c4", "f5", "e6"]);
}
