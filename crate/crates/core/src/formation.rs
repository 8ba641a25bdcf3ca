//! Day-by-day replay of club formation.
//!
//! Day 0 is the all-Route-0 equilibrium; overnight the leader invites a club.
//! On day 1 the club switches while the signal still runs yesterday's plan;
//! on day 2 the signal has adapted. From day 3 on, autonomous players outside
//! the club respond myopically, at most one switch per day, scanning players
//! in ascending order from where the previous scan stopped. A responder
//! compares both routes against yesterday's profile under the plan that
//! yesterday's demand produces. Club members hold Route 1 throughout.

use alloc::vec::Vec;

use crate::action::{Coalition, JointAction};
use crate::equilibrium::CompleteGame;
use crate::error::{Error, Result};
use crate::stability::{build_club_graph, se_candidates};
use crate::traffic::{evaluate_lagged_day, signal_plan, ScenarioConfig, SignalPlan, SupplyMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetSelection {
    /// The smallest club (size, then members) containing the leader.
    FirstClubContainingLeader,
    /// A strong-equilibrium leaf of the club graph in which every member
    /// gains over the initial equilibrium; the root club otherwise.
    StabilitySeeking,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormationPolicy {
    pub leader: usize,
    pub target_selection: TargetSelection,
    /// Last day index of the replay.
    pub max_days: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DayEvent {
    Equilibrium,
    InvitationSent { leader: usize, club: Coalition },
    ClubDeviates { club: Coalition },
    SignalAdapts { from: SignalPlan, to: SignalPlan },
    BestResponse { player: usize, from: u8, to: u8 },
    Converged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DayRecord {
    pub day: usize,
    pub joint_action: JointAction,
    pub plan: SignalPlan,
    /// Payoff of every vehicle on that day.
    pub payoffs: Vec<f64>,
    pub events: Vec<DayEvent>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub club: Coalition,
    pub days: Vec<DayRecord>,
    pub converged: bool,
}

impl Trajectory {
    pub fn final_action(&self) -> JointAction {
        self.days.last().expect("a trajectory has at least day 0").joint_action
    }
}

fn clubs_with_leader(game: &CompleteGame<'_>, leader: usize) -> Result<Vec<Coalition>> {
    if leader >= game.n_av() {
        return Err(Error::PlayerOutOfRange { player: leader, n_av: game.n_av() });
    }
    let clubs: Vec<_> = game.find_clubs(game.x0())?.into_iter().filter(|c| c.contains(leader)).collect();
    if clubs.is_empty() {
        return Err(Error::NoClubForLeader { leader });
    }
    Ok(clubs)
}

/// The coalition the leader invites.
pub fn choose_club(game: &CompleteGame<'_>, policy: &FormationPolicy) -> Result<Coalition> {
    let clubs = clubs_with_leader(game, policy.leader)?;
    if policy.target_selection == TargetSelection::StabilitySeeking {
        let x0 = game.x0();
        for &root in &clubs {
            let graph = build_club_graph(game.matrix(), root)?;
            for leaf in se_candidates(game, &graph)? {
                let at = JointAction::indicator(game.n_av(), leaf)?;
                if leaf.members().all(|j| game.payoff(at, j) > game.payoff(x0, j)) {
                    return Ok(leaf);
                }
            }
        }
    }
    Ok(clubs[0])
}

/// Replay formation until no free player wants to switch or `max_days` is reached.
pub fn run_formation(cfg: &ScenarioConfig, game: &CompleteGame<'_>, policy: &FormationPolicy) -> Result<Trajectory> {
    if cfg.supply_mode != SupplyMode::Adaptive {
        return Err(Error::NotAdaptive);
    }
    if cfg.av_ids != game.matrix().av_ids() || cfg.n_total != game.matrix().n_players() {
        return Err(Error::LengthMismatch { expected: game.matrix().n_av(), found: cfg.n_av() });
    }
    let club = choose_club(game, policy)?;
    let x0 = game.x0();

    let record = |day: usize, today: JointAction, yesterday: JointAction, events: Vec<DayEvent>| {
        let out = evaluate_lagged_day(cfg, today, yesterday);
        DayRecord { day, joint_action: today, plan: out.plan, payoffs: out.payoffs(), events }
    };

    let mut days = Vec::new();
    days.push(record(
        0,
        x0,
        x0,
        alloc::vec![DayEvent::Equilibrium, DayEvent::InvitationSent { leader: policy.leader, club }],
    ));
    if policy.max_days == 0 {
        return Ok(Trajectory { club, days, converged: false });
    }

    let deviated = JointAction::indicator(game.n_av(), club)?;
    days.push(record(1, deviated, x0, alloc::vec![DayEvent::ClubDeviates { club }]));
    if policy.max_days == 1 {
        return Ok(Trajectory { club, days, converged: false });
    }

    let before = signal_plan(x0.route1_count(), cfg.supply_mode);
    let after = signal_plan(deviated.route1_count(), cfg.supply_mode);
    let events = if before != after {
        alloc::vec![DayEvent::SignalAdapts { from: before, to: after }]
    } else {
        Vec::new()
    };
    days.push(record(2, deviated, deviated, events));

    let free: Vec<usize> = (0..game.n_av()).filter(|&k| !club.contains(k)).collect();
    let mut cursor = 0;
    let mut yesterday = deviated;
    let mut converged = false;

    for day in 3..=policy.max_days {
        let mut switched = None;
        for step in 0..free.len() {
            let player = free[(cursor + step) % free.len()];
            let column = cfg.av_ids[player];
            let alt = yesterday.deviate(Coalition::singleton(player))?;
            let stay_time = evaluate_lagged_day(cfg, yesterday, yesterday).travel_times[column];
            let alt_time = evaluate_lagged_day(cfg, alt, yesterday).travel_times[column];
            if alt_time < stay_time {
                cursor = (cursor + step + 1) % free.len();
                switched = Some((player, alt));
                break;
            }
        }
        match switched {
            Some((player, alt)) => {
                let from = yesterday.route(player);
                days.push(record(day, alt, yesterday, alloc::vec![DayEvent::BestResponse {
                    player,
                    from,
                    to: 1 - from,
                }]));
                yesterday = alt;
            }
            None => {
                days.push(record(day, yesterday, yesterday, alloc::vec![DayEvent::Converged]));
                converged = true;
                break;
            }
        }
    }

    Ok(Trajectory { club, days, converged })
}
