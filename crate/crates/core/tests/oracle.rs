mod support;

use support::compare::{compare, random_game, run_batch};
use support::oracle::{self, Game};

#[test]
fn matches_oracle_on_seeded_games() {
    assert_eq!(run_batch(0x5eed_0001, 1200), Ok(1200));
}

#[test]
fn matches_oracle_on_degenerate_games() {
    for n in 1..=4 {
        let flat = Game { n, payoffs: oracle::all_actions(n).into_iter().map(|a| (a, vec![-10.0; n])).collect() };
        compare(&flat).unwrap();
    }
}

#[test]
fn oracle_coalition_order_is_size_then_members() {
    let cs = oracle::all_coalitions(3);
    assert_eq!(cs, vec![vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]]);
}

#[test]
fn five_player_games_match_too() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
    for _ in 0..20 {
        compare(&random_game(&mut rng, 5, -6)).unwrap();
    }
}
