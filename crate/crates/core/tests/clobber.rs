use std::collections::{HashSet, VecDeque};

use clobber_cgt::{BoardGraph, Clobber, Move, Occupancy, Player};

fn every_occupancy(n: usize) -> impl Iterator<Item = Occupancy> {
    (0..4usize.pow(n as u32)).map(move |code| {
        let cells = (0..n).map(|i| (code >> (2 * i) & 3) as u8).collect();
        Occupancy::new(cells, 3).unwrap()
    })
}

fn reachable(game: &Clobber, start: &Occupancy) -> Vec<Occupancy> {
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(occ) = queue.pop_front() {
        for id in 1..=3 {
            for next in game.successors(&occ, Player::from_index(id)) {
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen.into_iter().collect()
}

fn games() -> Vec<(String, Clobber)> {
    let mut out: Vec<(String, Clobber)> = (2..=7)
        .map(|n| (format!("line {n}"), Clobber::new(BoardGraph::line(n), 3).unwrap()))
        .collect();
    out.push(("grid 2x3".into(), Clobber::new(BoardGraph::grid(2, 3), 3).unwrap()));
    out
}

#[test]
fn stuck_players_stay_stuck() {
    for (name, game) in games() {
        let n = game.graph().vertex_count();
        for occ in every_occupancy(n) {
            for id in 1..=3 {
                let p = Player::from_index(id);
                if game.has_move(&occ, p) {
                    continue;
                }
                for later in reachable(&game, &occ) {
                    assert!(!game.has_move(&later, p), "{name}: {p} moves again in {later}");
                }
            }
        }
    }
}

#[test]
fn moves_remove_one_token_and_keep_empty_cells() {
    for (name, game) in games() {
        let n = game.graph().vertex_count();
        for occ in every_occupancy(n) {
            for id in 1..=3 {
                for mv in game.legal_moves(&occ, Player::from_index(id)) {
                    let next = game.apply_move(&occ, mv).unwrap();
                    assert_eq!(next.token_count() + 1, occ.token_count(), "{name}: {occ} {mv:?}");
                    for (before, after) in occ.cells().iter().zip(next.cells()) {
                        assert!(*before != 0 || *after == 0, "{name}: {occ} -> {next}");
                    }
                }
            }
        }
    }
}

#[test]
fn mirrored_lines_have_mirrored_moves() {
    for n in 2..=7 {
        let game = Clobber::new(BoardGraph::line(n), 3).unwrap();
        for occ in every_occupancy(n) {
            let rev = occ.reversed();
            for id in 1..=3 {
                let p = Player::from_index(id);
                let mut mirrored: Vec<Move> = game
                    .legal_moves(&occ, p)
                    .into_iter()
                    .map(|m| Move::new(n - 1 - m.from, n - 1 - m.to))
                    .collect();
                mirrored.sort();
                let mut direct = game.legal_moves(&rev, p);
                direct.sort();
                assert_eq!(mirrored, direct, "{occ} for {p}");
            }
        }
    }
}
