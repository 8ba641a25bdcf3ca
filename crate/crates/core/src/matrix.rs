use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::action::{Coalition, JointAction, MAX_AV};
use crate::error::{Error, Result};

/// Payoffs of every vehicle, per joint action of the autonomous players.
///
/// Columns are vehicles `0..n_players`; autonomous player `k` owns column
/// `av_ids[k]`, the remaining columns are human drivers fixed to Route 0.
/// Payoffs are negative travel times and must be finite and `<= 0`.
///
/// A matrix may be partial: rows can be absent and, in fixtures, single cells
/// may be unknown. Lookups of absent data fail with an error naming the
/// joint action instead of guessing.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffMatrix {
    n_players: usize,
    av_ids: Vec<usize>,
    rows: BTreeMap<JointAction, Vec<Option<f64>>>,
}

impl PayoffMatrix {
    pub fn new(n_players: usize, av_ids: Vec<usize>) -> Result<Self> {
        if av_ids.len() > MAX_AV {
            return Err(Error::InvalidConfig(alloc::format!(
                "{} autonomous players, at most {MAX_AV} supported",
                av_ids.len()
            )));
        }
        let mut seen = Vec::with_capacity(av_ids.len());
        for &id in &av_ids {
            if id >= n_players {
                return Err(Error::InvalidConfig(alloc::format!(
                    "autonomous vehicle {id} outside 0..{n_players}"
                )));
            }
            if seen.contains(&id) {
                return Err(Error::InvalidConfig(alloc::format!("vehicle {id} listed twice")));
            }
            seen.push(id);
        }
        Ok(PayoffMatrix { n_players, av_ids, rows: BTreeMap::new() })
    }

    /// A game where every vehicle is an autonomous player.
    pub fn all_autonomous(n: usize) -> Result<Self> {
        Self::new(n, (0..n).collect())
    }

    pub fn n_players(&self) -> usize {
        self.n_players
    }

    pub fn n_av(&self) -> usize {
        self.av_ids.len()
    }

    pub fn av_ids(&self) -> &[usize] {
        &self.av_ids
    }

    pub fn is_autonomous(&self, column: usize) -> bool {
        self.av_ids.contains(&column)
    }

    /// Coalition of every autonomous player.
    pub fn players(&self) -> Coalition {
        Coalition::grand(self.n_av())
    }

    pub fn x0(&self) -> JointAction {
        JointAction::zeros(self.n_av())
    }

    pub fn insert(&mut self, x: JointAction, payoffs: Vec<f64>) -> Result<()> {
        self.insert_partial(x, payoffs.into_iter().map(Some).collect())
    }

    /// Insert a row whose cells may be unknown (`None`).
    pub fn insert_partial(&mut self, x: JointAction, payoffs: Vec<Option<f64>>) -> Result<()> {
        if x.len() != self.n_av() {
            return Err(Error::LengthMismatch { expected: self.n_av(), found: x.len() });
        }
        if payoffs.len() != self.n_players {
            return Err(Error::RowArity { action: x, expected: self.n_players, found: payoffs.len() });
        }
        for (column, v) in payoffs.iter().enumerate() {
            if let Some(v) = *v {
                if !v.is_finite() || v > 0.0 {
                    return Err(Error::InvalidPayoff { action: x, column, value: v });
                }
            }
        }
        if self.rows.contains_key(&x) {
            return Err(Error::DuplicateAction { action: x });
        }
        self.rows.insert(x, payoffs);
        Ok(())
    }

    pub fn contains(&self, x: JointAction) -> bool {
        self.rows.contains_key(&x)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, x: JointAction) -> Result<&[Option<f64>]> {
        self.rows.get(&x).map(Vec::as_slice).ok_or(Error::IncompleteMatrix { action: x })
    }

    /// Rows in increasing joint-action order.
    pub fn rows(&self) -> impl Iterator<Item = (JointAction, &[Option<f64>])> {
        self.rows.iter().map(|(x, r)| (*x, r.as_slice()))
    }

    /// Payoff of autonomous player `k` at `x`.
    pub fn payoff(&self, x: JointAction, k: usize) -> Result<f64> {
        let column = *self
            .av_ids
            .get(k)
            .ok_or(Error::PlayerOutOfRange { player: k, n_av: self.n_av() })?;
        self.row(x)?[column].ok_or(Error::MissingPayoff { action: x, player: k })
    }

    /// Payoff of the vehicle in `column`, autonomous or human.
    pub fn column_payoff(&self, x: JointAction, column: usize) -> Result<f64> {
        let row = self.row(x)?;
        row.get(column)
            .copied()
            .flatten()
            .ok_or(Error::MissingPayoff { action: x, player: column })
    }

    /// Payoff of `k` if the row and cell are both known.
    pub fn known_payoff(&self, x: JointAction, k: usize) -> Option<f64> {
        self.payoff(x, k).ok()
    }

    /// First joint action (in integer order) whose row is absent or has an
    /// unknown cell, if any.
    pub fn first_gap(&self) -> Option<JointAction> {
        if self.n_av() >= 64 {
            return Some(self.x0());
        }
        JointAction::all(self.n_av()).find(|x| match self.rows.get(x) {
            None => true,
            Some(r) => r.iter().any(Option::is_none),
        })
    }

    /// All `2^n_av` rows present with every cell known.
    pub fn is_complete(&self) -> bool {
        self.n_av() < 64 && self.rows.len() == 1usize << self.n_av() && self.first_gap().is_none()
    }

    /// Average payoff over the autonomous players at `x`.
    pub fn mean_av_payoff(&self, x: JointAction) -> Result<f64> {
        let mut sum = 0.0;
        for k in 0..self.n_av() {
            sum += self.payoff(x, k)?;
        }
        Ok(sum / self.n_av() as f64)
    }

    /// Sum of the payoffs of every vehicle at `x`.
    pub fn total_payoff(&self, x: JointAction) -> Result<f64> {
        let mut sum = 0.0;
        for column in 0..self.n_players {
            sum += self.column_payoff(x, column)?;
        }
        Ok(sum)
    }

    /// Rebuild the matrix with every known cell passed through `f(column, value)`.
    pub fn map_payoffs(&self, f: impl Fn(usize, f64) -> f64) -> Result<Self> {
        let mut out = PayoffMatrix::new(self.n_players, self.av_ids.clone())?;
        for (x, row) in self.rows() {
            let mapped = row.iter().enumerate().map(|(c, v)| v.map(|v| f(c, v))).collect();
            out.insert_partial(x, mapped)?;
        }
        Ok(out)
    }
}
