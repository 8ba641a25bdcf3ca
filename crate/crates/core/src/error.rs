use alloc::string::String;
use core::fmt;

use crate::action::JointAction;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A player index does not address an autonomous player of the game.
    PlayerOutOfRange { player: usize, n_av: usize },
    /// Two joint actions (or an action and a matrix) disagree on the number of players.
    LengthMismatch { expected: usize, found: usize },
    /// A required row is absent from a partial matrix.
    IncompleteMatrix { action: JointAction },
    /// The row exists but the payoff of this player is unknown.
    MissingPayoff { action: JointAction, player: usize },
    /// A payoff is NaN, infinite or positive.
    InvalidPayoff { action: JointAction, column: usize, value: f64 },
    /// A row has the wrong number of payoffs.
    RowArity { action: JointAction, expected: usize, found: usize },
    DuplicateAction { action: JointAction },
    /// Exhaustive enumeration refused above the configured cap.
    EnumerationCap { n_av: usize, cap: usize },
    /// A club search was started from an action that is not a Nash equilibrium.
    NotNash { action: JointAction },
    NoClubForLeader { leader: usize },
    NotAdaptive,
    InvalidConfig(String),
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::PlayerOutOfRange { player, n_av } => {
                write!(f, "player {player} out of range for {n_av} autonomous players")
            }
            Error::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} players, found {found}")
            }
            Error::IncompleteMatrix { action } => {
                write!(f, "payoff matrix has no row for joint action {action}")
            }
            Error::MissingPayoff { action, player } => {
                write!(f, "payoff of player {player} unknown at joint action {action}")
            }
            Error::InvalidPayoff { action, column, value } => write!(
                f,
                "payoff {value} in column {column} of {action} must be finite and <= 0"
            ),
            Error::RowArity { action, expected, found } => {
                write!(f, "row {action} has {found} payoffs, expected {expected}")
            }
            Error::DuplicateAction { action } => write!(f, "duplicate joint action {action}"),
            Error::EnumerationCap { n_av, cap } => write!(
                f,
                "{n_av} autonomous players exceeds the enumeration cap of {cap}; \
                 raise the cap explicitly if 2^{n_av} actions are really wanted"
            ),
            Error::NotNash { action } => {
                write!(f, "joint action {action} is not a Nash equilibrium")
            }
            Error::NoClubForLeader { leader } => write!(f, "no club contains leader {leader}"),
            Error::NotAdaptive => f.write_str("club formation requires adaptive supply"),
            Error::InvalidConfig(msg) => write!(f, "invalid scenario: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
