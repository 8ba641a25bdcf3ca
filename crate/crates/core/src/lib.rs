//! Coalitional routing games with connected autonomous vehicles.
//!
//! A binary two-route game is described by a [`PayoffMatrix`]: one payoff
//! vector (negative travel times) per joint action of the autonomous players.
//! On top of it this crate provides
//!
//! - [`equilibrium`]: Nash / strong Nash classification and exhaustive search
//!   for improving coalitions and clubs,
//! - [`stability`]: internal and external club stability, joiner sets and the
//!   club dynamics graph with its terminal coalitions,
//! - [`traffic`]: a deterministic point-queue model of the two-route network
//!   with a fixed-cycle, demand-adaptive signal, used to generate matrices,
//! - [`formation`]: a day-by-day replay of club formation,
//! - [`calibration`]: a grid search for scenarios in which clubs emerge.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod action;
pub mod calibration;
pub mod equilibrium;
pub mod error;
pub mod formation;
pub mod matrix;
pub mod stability;
pub mod traffic;

pub use action::{Coalition, JointAction, MAX_AV};
pub use equilibrium::{
    Classification, CompleteGame, EquilibriumClass, EquilibriumTag, KnownVerdict,
    DEFAULT_ENUMERATION_CAP,
};
pub use error::{Error, Result};
pub use formation::{DayEvent, DayRecord, FormationPolicy, TargetSelection, Trajectory};
pub use matrix::PayoffMatrix;
pub use stability::{ClubGraph, ClubNode, JoinEdge, TerminalReport};
pub use traffic::{ScenarioConfig, SignalPlan, SimOutcome, SupplyMode};
