//! JSON Lines log of a formation replay: one `meta` record, then one record
//! per day.

use std::io::Write;

use avclub_core::{DayEvent, DayRecord, FormationPolicy, PayoffMatrix, SignalPlan, TargetSelection, Trajectory};
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub fn policy_name(t: TargetSelection) -> &'static str {
    match t {
        TargetSelection::FirstClubContainingLeader => "first",
        TargetSelection::StabilitySeeking => "stable",
    }
}

fn plan(p: SignalPlan) -> Value {
    json!({ "green_west": p.green_west, "green_south": p.green_south })
}

fn event(e: &DayEvent) -> Value {
    match *e {
        DayEvent::Equilibrium => json!({ "kind": "equilibrium" }),
        DayEvent::InvitationSent { leader, club } => {
            json!({ "kind": "invitation_sent", "leader": leader, "club": club.to_vec() })
        }
        DayEvent::ClubDeviates { club } => json!({ "kind": "club_deviates", "club": club.to_vec() }),
        DayEvent::SignalAdapts { from, to } => json!({ "kind": "signal_adapts", "from": plan(from), "to": plan(to) }),
        DayEvent::BestResponse { player, from, to } => {
            json!({ "kind": "best_response", "player": player, "from": from, "to": to })
        }
        DayEvent::Converged => json!({ "kind": "converged" }),
    }
}

fn mean(v: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = v.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        s / n as f64
    }
}

fn day(d: &DayRecord, g: &PayoffMatrix) -> Value {
    let av: Vec<f64> = g.av_ids().iter().map(|&c| d.payoffs[c]).collect();
    json!({
        "type": "day",
        "day": d.day,
        "joint_action": d.joint_action.to_string(),
        "plan": plan(d.plan),
        "av_payoffs": av,
        "mean_payoff_av": mean(av.iter().copied()),
        "mean_payoff_all": mean(d.payoffs.iter().copied()),
        "events": d.events.iter().map(event).collect::<Vec<_>>(),
    })
}

pub fn write_formation_log<W: Write>(
    t: &Trajectory,
    policy: &FormationPolicy,
    g: &PayoffMatrix,
    scenario_hash: &str,
    mut out: W,
) -> Result<()> {
    let meta = json!({
        "type": "meta",
        "scenario_hash": scenario_hash,
        "leader": policy.leader,
        "policy": policy_name(policy.target_selection),
        "max_days": policy.max_days,
        "club": t.club.to_vec(),
        "converged": t.converged,
        "final_action": t.final_action().to_string(),
        "day_index_note": "days 0 to 2 are fixed; later days apply at most one best-response switch each, which is a modeling choice of this tool",
    });
    let io = |e| Error::Io { path: "<formation log>".into(), source: e };
    writeln!(out, "{meta}").map_err(io)?;
    for d in &t.days {
        writeln!(out, "{}", day(d, g)).map_err(io)?;
    }
    Ok(())
}
