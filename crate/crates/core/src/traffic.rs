//! Point-queue model of the two-route network.
//!
//! All vehicles leave origin A in a fixed order and meet at junction J,
//! Route 0 through the Western inlet and Route 1 through the Southern one.
//! Each inlet is a vertical queue served first-in-first-out at saturation
//! headway, and only while its phase of the signal is green. The signal runs
//! a 50 s cycle: West green, 5 s intergreen, South green, 5 s intergreen.
//! Cycle time 0 is the start of West green, shifted by the scenario's phase
//! offset relative to the departure clock.

use alloc::vec;
use alloc::vec::Vec;

use crate::action::JointAction;
use crate::equilibrium::DEFAULT_ENUMERATION_CAP;
use crate::error::{Error, Result};
use crate::matrix::PayoffMatrix;

pub const CYCLE: u32 = 50;
pub const INTERGREEN: u32 = 5;
/// Route-1 vehicles needed before the Southern inlet gets the long green.
pub const ADAPTATION_THRESHOLD: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SupplyMode {
    Static,
    Adaptive,
}

impl SupplyMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            SupplyMode::Static => "static",
            SupplyMode::Adaptive => "adaptive",
        }
    }
}

impl core::str::FromStr for SupplyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "static" => Ok(SupplyMode::Static),
            "adaptive" => Ok(SupplyMode::Adaptive),
            other => Err(Error::Parse(alloc::format!("unknown supply mode {other:?}"))),
        }
    }
}

/// Green split of one signal cycle, in whole seconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignalPlan {
    pub green_west: u32,
    pub green_south: u32,
}

impl SignalPlan {
    pub const BASE: SignalPlan = SignalPlan { green_west: 21, green_south: 19 };
    pub const ADAPTED: SignalPlan = SignalPlan { green_west: 9, green_south: 31 };

    /// `[start, end)` of the green window of a route's inlet within the cycle.
    pub fn green_window(&self, route: u8) -> (f64, f64) {
        if route == 0 {
            (0.0, self.green_west as f64)
        } else {
            let start = (self.green_west + INTERGREEN) as f64;
            (start, start + self.green_south as f64)
        }
    }
}

/// Plan for a day given the Route-1 demand it reacts to.
pub fn signal_plan(route1_demand: usize, mode: SupplyMode) -> SignalPlan {
    match mode {
        SupplyMode::Adaptive if route1_demand >= ADAPTATION_THRESHOLD => SignalPlan::ADAPTED,
        _ => SignalPlan::BASE,
    }
}

/// Network geometry, demand and signal settings of a scenario.
///
/// Vehicles are numbered by departure order; vehicle `v` leaves at
/// `v * departure_headway`. Autonomous player `k` drives vehicle `av_ids[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub n_total: usize,
    pub av_ids: Vec<usize>,
    pub departure_headway: f64,
    pub free_flow_r0_to_j: f64,
    pub free_flow_r1_to_j: f64,
    pub free_flow_j_to_b: f64,
    pub saturation_headway: f64,
    pub payoff_quantum: f64,
    /// Cycle time at departure clock 0, in `[0, 50)`.
    pub phase_offset: f64,
    pub supply_mode: SupplyMode,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            n_total: 15,
            av_ids: (0..10).collect(),
            departure_headway: 2.0,
            free_flow_r0_to_j: 20.0,
            free_flow_r1_to_j: 30.0,
            free_flow_j_to_b: 5.0,
            saturation_headway: 2.0,
            payoff_quantum: 1.0,
            phase_offset: 0.0,
            supply_mode: SupplyMode::Adaptive,
        }
    }
}

impl ScenarioConfig {
    pub fn n_av(&self) -> usize {
        self.av_ids.len()
    }

    pub fn with_mode(&self, supply_mode: SupplyMode) -> Self {
        ScenarioConfig { supply_mode, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        let times = [
            self.departure_headway,
            self.free_flow_r0_to_j,
            self.free_flow_r1_to_j,
            self.free_flow_j_to_b,
            self.saturation_headway,
            self.phase_offset,
        ];
        if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return bad("times must be finite and non-negative");
        }
        if self.free_flow_r1_to_j <= self.free_flow_r0_to_j {
            return bad("Route 1 must be longer than Route 0");
        }
        if !(self.payoff_quantum.is_finite() && self.payoff_quantum > 0.0) {
            return bad("payoff quantum must be positive");
        }
        if self.phase_offset >= CYCLE as f64 {
            return bad("phase offset must lie within one cycle");
        }
        PayoffMatrix::new(self.n_total, self.av_ids.clone()).map(|_| ())
    }

    fn departure(&self, v: usize) -> f64 {
        v as f64 * self.departure_headway
    }

    /// Route of every vehicle; humans stay on Route 0.
    pub fn routes(&self, x: JointAction) -> Vec<u8> {
        assert_eq!(x.len(), self.n_av(), "joint action does not match the scenario");
        let mut routes = vec![0u8; self.n_total];
        for (k, &v) in self.av_ids.iter().enumerate() {
            routes[v] = x.route(k);
        }
        routes
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOutcome {
    pub plan: SignalPlan,
    /// Route of each vehicle.
    pub routes: Vec<u8>,
    /// Quantised travel time of each vehicle, seconds.
    pub travel_times: Vec<f64>,
    pub route_counts: [usize; 2],
    /// Mean travel time per route, `None` for an unused route.
    pub route_mean_times: [Option<f64>; 2],
}

impl SimOutcome {
    pub fn payoffs(&self) -> Vec<f64> {
        self.travel_times.iter().map(|t| -t).collect()
    }
}

/// Earliest instant `>= t` inside the cycle window `[start, end)`.
fn next_green(t: f64, offset: f64, (start, end): (f64, f64)) -> f64 {
    let cycle = CYCLE as f64;
    let mut phase = (t + offset) % cycle;
    if phase < 0.0 {
        phase += cycle;
    }
    if phase >= start && phase < end {
        t
    } else if phase < start {
        t + (start - phase)
    } else {
        t + (cycle - phase + start)
    }
}

/// Round `t` to a multiple of `quantum`, producing the same double a decimal
/// parser would return for the printed value.
pub fn quantize(t: f64, quantum: f64) -> f64 {
    let mut scale = 1.0;
    for _ in 0..9 {
        let scaled = quantum * scale;
        if (scaled - round_half_up(scaled)).abs() < 1e-9 * scale.max(1.0) {
            break;
        }
        scale *= 10.0;
    }
    let steps = round_half_up(t / quantum);
    steps * round_half_up(quantum * scale) / scale
}

fn round_half_up(v: f64) -> f64 {
    if v >= 0.0 {
        (v + 0.5) as i64 as f64
    } else {
        -((-v + 0.5) as i64 as f64)
    }
}

/// Travel times of every vehicle for the joint action `x` under `plan`.
pub fn simulate(cfg: &ScenarioConfig, x: JointAction, plan: SignalPlan) -> SimOutcome {
    let routes = cfg.routes(x);
    let mut travel_times = vec![0.0; cfg.n_total];
    let mut counts = [0usize; 2];
    let mut sums = [0.0f64; 2];
    let mut last_discharge: [Option<f64>; 2] = [None, None];

    for (v, &r) in routes.iter().enumerate() {
        let route = r as usize;
        let depart = cfg.departure(v);
        let leg = if r == 0 { cfg.free_flow_r0_to_j } else { cfg.free_flow_r1_to_j };
        let ready = match last_discharge[route] {
            Some(prev) => (depart + leg).max(prev + cfg.saturation_headway),
            None => depart + leg,
        };
        let discharge = next_green(ready, cfg.phase_offset, plan.green_window(r));
        last_discharge[route] = Some(discharge);
        let tt = quantize(discharge + cfg.free_flow_j_to_b - depart, cfg.payoff_quantum);
        travel_times[v] = tt;
        counts[route] += 1;
        sums[route] += tt;
    }

    let mean = |r: usize| (counts[r] > 0).then(|| sums[r] / counts[r] as f64);
    SimOutcome {
        plan,
        routes,
        travel_times,
        route_counts: counts,
        route_mean_times: [mean(0), mean(1)],
    }
}

/// Travel times when today's plan reacts to yesterday's Route-1 demand.
pub fn evaluate_lagged_day(cfg: &ScenarioConfig, today: JointAction, yesterday: JointAction) -> SimOutcome {
    simulate(cfg, today, signal_plan(yesterday.route1_count(), cfg.supply_mode))
}

/// Payoff matrix over every joint action, each simulated under the plan its
/// own Route-1 demand settles on.
pub fn generate_payoff_matrix(cfg: &ScenarioConfig) -> Result<PayoffMatrix> {
    generate_payoff_matrix_with_cap(cfg, DEFAULT_ENUMERATION_CAP)
}

pub fn generate_payoff_matrix_with_cap(cfg: &ScenarioConfig, cap: usize) -> Result<PayoffMatrix> {
    cfg.validate()?;
    if cfg.n_av() > cap || cfg.n_av() >= 32 {
        return Err(Error::EnumerationCap { n_av: cfg.n_av(), cap });
    }
    let mut g = PayoffMatrix::new(cfg.n_total, cfg.av_ids.clone())?;
    for x in JointAction::all(cfg.n_av()) {
        let plan = signal_plan(x.route1_count(), cfg.supply_mode);
        g.insert(x, simulate(cfg, x, plan).payoffs())?;
    }
    Ok(g)
}
