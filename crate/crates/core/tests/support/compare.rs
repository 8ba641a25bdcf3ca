//! Random games and a field-by-field comparison of the library against the
//! brute-force oracle.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use avclub_core::stability::build_club_graph;
use avclub_core::{equilibrium, Coalition, CompleteGame, JointAction, PayoffMatrix};
use rand::Rng;

use super::oracle::{self, Game, Members};

pub fn random_game<R: Rng>(rng: &mut R, n: usize, lowest: i32) -> Game {
    let payoffs: HashMap<_, _> = oracle::all_actions(n)
        .into_iter()
        .map(|a| (a, (0..n).map(|_| f64::from(rng.gen_range(lowest..=0))).collect()))
        .collect();
    Game { n, payoffs }
}

pub fn to_action(a: &[u8]) -> JointAction {
    let bits = a.iter().enumerate().fold(0u64, |b, (k, &r)| b | (u64::from(r) << k));
    JointAction::from_bits(a.len(), bits).unwrap()
}

pub fn to_members(c: Coalition) -> Members {
    c.members().collect()
}

pub fn to_matrix(game: &Game) -> PayoffMatrix {
    let mut g = PayoffMatrix::all_autonomous(game.n).unwrap();
    for (a, row) in &game.payoffs {
        g.insert(to_action(a), row.clone()).unwrap();
    }
    g
}

/// Compares every operation on every action and every root; returns the
/// first disagreement.
pub fn compare(game: &Game) -> Result<(), String> {
    let g = to_matrix(game);
    let lib = CompleteGame::new(&g).map_err(|e| e.to_string())?;
    for a in oracle::all_actions(game.n) {
        let x = to_action(&a);
        let got: Vec<Members> = lib.improving_coalitions(x).unwrap().into_iter().map(to_members).collect();
        let want = game.improving(&a);
        if got != want {
            return Err(format!("improving coalitions at {x}: {got:?} vs {want:?}"));
        }
        if lib.is_nash(x).unwrap() != game.is_nash(&a) || equilibrium::is_nash(&g, x).unwrap() != game.is_nash(&a) {
            return Err(format!("is_nash at {x}"));
        }
        if lib.is_strong(x).unwrap() != game.is_strong(&a) {
            return Err(format!("is_strong at {x}"));
        }
        let clubs: Vec<Members> = lib.clubs_at(x).unwrap().into_iter().map(to_members).collect();
        if clubs != game.clubs(&a) {
            return Err(format!("clubs at {x}: {clubs:?} vs {:?}", game.clubs(&a)));
        }
    }
    for root in oracle::all_coalitions(game.n) {
        let c: Coalition = root.iter().copied().collect();
        let graph = build_club_graph(&g, c).unwrap();
        let want = game.graph(&root);
        let nodes: BTreeSet<Members> = graph.nodes().iter().map(|n| to_members(n.coalition)).collect();
        let edges: BTreeSet<(Members, Members, usize)> =
            graph.edges().iter().map(|e| (to_members(e.from), to_members(e.to), e.joiner)).collect();
        if nodes != want.nodes || edges != want.edges {
            return Err(format!("graph from {c}"));
        }
        let report = graph.terminal_coalitions();
        let terminal = game.terminal(&want);
        let leaves: Vec<Members> = report.leaves.iter().map(|c| to_members(*c)).collect();
        let violations: Vec<Members> = report.violations.iter().map(|c| to_members(*c)).collect();
        let want_leaves: Vec<Members> = terminal.keys().cloned().collect();
        let want_violations: Vec<Members> = terminal.iter().filter(|(_, ok)| !**ok).map(|(c, _)| c.clone()).collect();
        let mut sorted_leaves = leaves.clone();
        sorted_leaves.sort();
        let mut sorted_violations = violations.clone();
        sorted_violations.sort();
        if sorted_leaves != want_leaves || sorted_violations != want_violations {
            return Err(format!("terminal coalitions from {c}: {leaves:?} vs {want_leaves:?}"));
        }
        for node in graph.nodes() {
            let m = to_members(node.coalition);
            if node.internally_stable != game.internally_stable(&m)
                || node.externally_stable != game.joiners(&m).is_empty()
                || node.is_nash_state != game.is_nash(&oracle::indicator(game.n, &m))
            {
                return Err(format!("node flags at {}", node.coalition));
            }
        }
    }
    Ok(())
}

/// `count` seeded games cycling through 2, 3 and 4 players. Every other
/// game draws from a narrow payoff range so ties are common.
pub fn run_batch(seed: u64, count: usize) -> Result<usize, String> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for i in 0..count {
        let n = 2 + i % 3;
        let lowest = if i % 2 == 0 { -100 } else { -4 };
        let game = random_game(&mut rng, n, lowest);
        compare(&game).map_err(|e| format!("game {i} ({n} players): {e}"))?;
    }
    Ok(count)
}
