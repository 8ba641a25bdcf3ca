mod support;

use avclub_core::stability::{build_club_graph, is_externally_stable, is_internally_stable, joiners};
use avclub_core::traffic::{generate_payoff_matrix, signal_plan, simulate, SignalPlan};
use avclub_core::{Coalition, CompleteGame, EquilibriumTag, JointAction, PayoffMatrix, ScenarioConfig, SupplyMode};
use proptest::prelude::*;
use rand::SeedableRng;
use support::compare::{random_game, to_matrix};

fn game_strategy() -> impl Strategy<Value = PayoffMatrix> {
    (1usize..=5, any::<u64>(), prop_oneof![Just(-100), Just(-3)]).prop_map(|(n, seed, lowest)| {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        to_matrix(&random_game(&mut rng, n, lowest))
    })
}

fn scenario_strategy() -> impl Strategy<Value = ScenarioConfig> {
    (
        3usize..=9,
        0.0f64..4.0,
        10.0f64..30.0,
        1.0f64..25.0,
        0.5f64..3.0,
        0u32..50,
        prop::collection::vec(any::<bool>(), 9),
    )
        .prop_map(|(n_total, h, ff0, extra, sat, offset, human)| {
            let av_ids: Vec<usize> = (0..n_total).filter(|v| !human[*v] || *v == 0).collect();
            ScenarioConfig {
                n_total,
                av_ids,
                departure_headway: h,
                free_flow_r0_to_j: ff0,
                free_flow_r1_to_j: ff0 + extra,
                saturation_headway: sat,
                phase_offset: f64::from(offset),
                ..ScenarioConfig::default()
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn strong_implies_nash(g in game_strategy()) {
        let game = CompleteGame::new(&g).unwrap();
        for c in game.classify_all() {
            if c.class.tag == EquilibriumTag::StrongNash {
                prop_assert!(game.is_nash(c.action).unwrap());
            }
            prop_assert_eq!(c.class.tag == EquilibriumTag::NotNash, !game.is_nash(c.action).unwrap());
        }
    }

    #[test]
    fn deviation_is_an_involution(n in 1usize..=20, xb in any::<u64>(), cb in any::<u64>()) {
        let mask = (1u64 << n) - 1;
        let x = JointAction::from_bits(n, xb & mask).unwrap();
        let c = Coalition::from_bits(cb & mask);
        let y = x.deviate(c).unwrap();
        prop_assert_eq!(y.deviate(c).unwrap(), x);
        for k in 0..n {
            prop_assert_eq!(y.route(k) != x.route(k), c.contains(k));
        }
    }

    #[test]
    fn classification_ignores_positive_affine_rescaling(g in game_strategy(), a in 0.1f64..10.0, b in -100.0f64..=0.0) {
        let scaled = g.map_payoffs(|_, v| a * v + b).unwrap();
        let before = CompleteGame::new(&g).unwrap().classify_all();
        let after = CompleteGame::new(&scaled).unwrap().classify_all();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn graph_invariants_hold(g in game_strategy(), root_bits in 1u64..32) {
        let n = g.n_av();
        let root = Coalition::from_bits(root_bits & ((1 << n) - 1));
        prop_assume!(!root.is_empty());
        let game = CompleteGame::new(&g).unwrap();
        let graph = build_club_graph(&g, root).unwrap();
        prop_assert!(graph.nodes().len() <= 1 << (n - root.len()));
        for node in graph.nodes() {
            let j = node.coalition;
            prop_assert!(root.is_subset(j));
            let nash = game.is_nash(JointAction::indicator(n, j).unwrap()).unwrap();
            prop_assert_eq!(node.internally_stable && node.externally_stable, nash);
            prop_assert_eq!(is_internally_stable(&g, j).unwrap(), node.internally_stable);
            prop_assert_eq!(joiners(&g, j).unwrap().is_empty(), is_externally_stable(&g, j).unwrap());
        }
        for e in graph.edges() {
            prop_assert_eq!(e.from.with(e.joiner), e.to);
            prop_assert!(!e.from.contains(e.joiner));
        }
        prop_assert!(graph.terminal_coalitions().violations.is_empty());
        prop_assert_eq!(build_club_graph(&g, root).unwrap(), graph);
    }

    #[test]
    fn routes_discharge_first_in_first_out(cfg in scenario_strategy(), xb in any::<u64>(), adapted in any::<bool>()) {
        let x = JointAction::from_bits(cfg.n_av(), xb & ((1 << cfg.n_av()) - 1)).unwrap();
        let plan = if adapted { SignalPlan::ADAPTED } else { SignalPlan::BASE };
        let out = simulate(&cfg, x, plan);
        for r in 0..2u8 {
            let exits: Vec<f64> = (0..cfg.n_total)
                .filter(|v| out.routes[*v] == r)
                .map(|v| v as f64 * cfg.departure_headway + out.travel_times[v])
                .collect();
            // quantization can reorder exits that are less than one quantum apart
            prop_assert!(exits.windows(2).all(|w| w[0] <= w[1] + cfg.payoff_quantum), "{:?}", exits);
        }
    }

    #[test]
    fn static_supply_is_congestion_monotone(cfg in scenario_strategy()) {
        let cfg = cfg.with_mode(SupplyMode::Static);
        assert_static_monotone(&cfg);
    }
}

/// Under a fixed plan a vehicle that joins a route never speeds up anyone
/// already on it, and never slows down anyone on the route it left.
fn assert_static_monotone(cfg: &ScenarioConfig) {
    let g = generate_payoff_matrix(cfg).unwrap();
    let n = cfg.n_av();
    for x in JointAction::all(n) {
        for k in 0..n {
            if x.route(k) == 1 {
                continue;
            }
            let y = x.deviate(Coalition::singleton(k)).unwrap();
            let (rx, ry) = (cfg.routes(x), cfg.routes(y));
            for v in 0..cfg.n_total {
                if v == cfg.av_ids[k] {
                    continue;
                }
                let (tx, ty) = (-g.column_payoff(x, v).unwrap(), -g.column_payoff(y, v).unwrap());
                assert_eq!(rx[v], ry[v]);
                if rx[v] == 1 {
                    assert!(ty >= tx, "vehicle {v} sped up on Route 1 when AV {k} joined at {x}");
                } else {
                    assert!(ty <= tx, "vehicle {v} slowed on Route 0 when AV {k} left at {x}");
                }
            }
        }
    }
}

#[test]
fn default_scenario_static_supply_is_monotone() {
    assert_static_monotone(&ScenarioConfig::default().with_mode(SupplyMode::Static));
}

#[test]
fn adaptive_supply_admits_a_fifo_violation() {
    // A vehicle alone on Route 1 waits for the short southern green; with two
    // more Route-1 vehicles the long green serves it earlier.
    let cfg = ScenarioConfig::default();
    let n = cfg.n_av();
    let mut found = None;
    'search: for k in 0..n {
        let alone = JointAction::indicator(n, Coalition::singleton(k)).unwrap();
        let t1 = simulate(&cfg, alone, signal_plan(1, cfg.supply_mode)).travel_times[cfg.av_ids[k]];
        for a in 0..n {
            for b in a + 1..n {
                if a == k || b == k {
                    continue;
                }
                let three = JointAction::indicator(n, Coalition::from([k, a, b])).unwrap();
                let t3 = simulate(&cfg, three, signal_plan(3, cfg.supply_mode)).travel_times[cfg.av_ids[k]];
                if t3 < t1 {
                    found = Some((k, a, b, t1, t3));
                    break 'search;
                }
            }
        }
    }
    assert!(found.is_some(), "no vehicle is faster on Route 1 with three users than alone");
}
