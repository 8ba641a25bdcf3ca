//! Nash and strong Nash classification by exhaustive coalition search.
//!
//! Improvement tests are strict (`<`): a coalition only counts as improving
//! if every member strictly gains. Nash and the first club condition use the
//! weak inequality, so ties keep an action stable.
//!
//! Operations that need every deviation target priced go through
//! [`CompleteGame`], which validates the matrix once and keeps a dense table.
//! The free functions that accept partial matrices look rows up on demand and
//! report the first absent row.

use alloc::vec::Vec;

use crate::action::{Coalition, JointAction};
use crate::error::{Error, Result};
use crate::matrix::PayoffMatrix;

/// Default guard on the number of autonomous players for exhaustive operations.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EquilibriumTag {
    NotNash,
    Nash,
    StrongNash,
}

impl EquilibriumTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            EquilibriumTag::NotNash => "NOT_NASH",
            EquilibriumTag::Nash => "NASH",
            EquilibriumTag::StrongNash => "STRONG_NASH",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriumClass {
    pub tag: EquilibriumTag,
    /// Every improving coalition, in canonical order. Empty iff strong Nash.
    pub improving: Vec<Coalition>,
}

impl EquilibriumClass {
    fn from_improving(improving: Vec<Coalition>) -> Self {
        let tag = if improving.is_empty() {
            EquilibriumTag::StrongNash
        } else if improving.iter().any(|c| c.len() == 1) {
            EquilibriumTag::NotNash
        } else {
            EquilibriumTag::Nash
        };
        EquilibriumClass { tag, improving }
    }
}

/// One joint action with its class and whether a club could form from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub action: JointAction,
    pub class: EquilibriumClass,
    pub club_found: bool,
}

/// Result of a check restricted to the players whose rows are known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnownVerdict {
    /// The condition holds for every checked player.
    pub holds: bool,
    pub checked: Coalition,
    /// Players skipped because a needed row or cell is missing.
    pub skipped: Coalition,
}

/// Payoff gain of one member when a coalition deviates jointly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemberDelta {
    pub player: usize,
    pub before: f64,
    pub after: f64,
}

impl MemberDelta {
    pub fn improves(&self) -> bool {
        self.before < self.after
    }
}

/// A validated complete matrix with a dense payoff table over autonomous players.
#[derive(Debug, Clone)]
pub struct CompleteGame<'a> {
    matrix: &'a PayoffMatrix,
    n_av: usize,
    table: Vec<f64>,
}

impl<'a> CompleteGame<'a> {
    pub fn new(matrix: &'a PayoffMatrix) -> Result<Self> {
        Self::with_cap(matrix, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(matrix: &'a PayoffMatrix, cap: usize) -> Result<Self> {
        let n_av = matrix.n_av();
        if n_av > cap || n_av >= 32 {
            return Err(Error::EnumerationCap { n_av, cap });
        }
        let mut table = Vec::with_capacity((1usize << n_av) * n_av);
        for x in JointAction::all(n_av) {
            let row = matrix.row(x)?;
            for (k, &column) in matrix.av_ids().iter().enumerate() {
                table.push(row[column].ok_or(Error::MissingPayoff { action: x, player: k })?);
            }
        }
        if let Some(x) = matrix.first_gap() {
            // a human cell is unknown
            return Err(Error::IncompleteMatrix { action: x });
        }
        Ok(CompleteGame { matrix, n_av, table })
    }

    pub fn matrix(&self) -> &'a PayoffMatrix {
        self.matrix
    }

    pub fn n_av(&self) -> usize {
        self.n_av
    }

    pub fn x0(&self) -> JointAction {
        JointAction::zeros(self.n_av)
    }

    #[inline]
    fn g(&self, bits: u64, k: usize) -> f64 {
        self.table[bits as usize * self.n_av + k]
    }

    pub fn payoff(&self, x: JointAction, k: usize) -> f64 {
        self.g(x.bits(), k)
    }

    fn check(&self, x: JointAction) -> Result<()> {
        if x.len() != self.n_av {
            return Err(Error::LengthMismatch { expected: self.n_av, found: x.len() });
        }
        Ok(())
    }

    /// Every member strictly gains when `c` deviates from `x`.
    #[inline]
    fn improves(&self, x: u64, c: u64) -> bool {
        let y = x ^ c;
        let mut rest = c;
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            if self.g(x, k) >= self.g(y, k) {
                return false;
            }
            rest &= rest - 1;
        }
        true
    }

    /// Every non-empty coalition whose joint deviation from `x` strictly
    /// improves each member, in canonical (size, then lexicographic) order.
    pub fn improving_coalitions(&self, x: JointAction) -> Result<Vec<Coalition>> {
        self.improving_coalitions_min(x, 1)
    }

    /// As [`Self::improving_coalitions`], restricted to `|C| >= min_size`.
    pub fn improving_coalitions_min(&self, x: JointAction, min_size: usize) -> Result<Vec<Coalition>> {
        self.check(x)?;
        let xb = x.bits();
        let mut out: Vec<Coalition> = (1..1u64 << self.n_av)
            .filter(|c| c.count_ones() as usize >= min_size && self.improves(xb, *c))
            .map(Coalition::from_bits)
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// No player gains by switching alone.
    pub fn is_nash(&self, x: JointAction) -> Result<bool> {
        self.check(x)?;
        let xb = x.bits();
        Ok((0..self.n_av).all(|k| self.g(xb, k) >= self.g(xb ^ 1 << k, k)))
    }

    /// No coalition has a joint deviation that strictly improves all its members.
    pub fn is_strong(&self, x: JointAction) -> Result<bool> {
        self.check(x)?;
        let xb = x.bits();
        Ok(!(1..1u64 << self.n_av).any(|c| self.improves(xb, c)))
    }

    pub fn classify(&self, x: JointAction) -> Result<EquilibriumClass> {
        Ok(EquilibriumClass::from_improving(self.improving_coalitions(x)?))
    }

    /// Both club conditions for `club` departing from `x`: no member gains by
    /// switching alone, and every member strictly gains when all switch.
    pub fn is_club(&self, x: JointAction, club: Coalition) -> Result<bool> {
        self.check(x)?;
        x.check(club)?;
        Ok(club.len() >= 2 && self.club_bits(x.bits(), club.bits()))
    }

    fn club_bits(&self, x: u64, c: u64) -> bool {
        let mut rest = c;
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            if self.g(x ^ 1 << k, k) > self.g(x, k) {
                return false;
            }
            rest &= rest - 1;
        }
        self.improves(x, c)
    }

    /// Clubs relative to an arbitrary action, without requiring it to be Nash.
    pub fn clubs_at(&self, x: JointAction) -> Result<Vec<Coalition>> {
        self.check(x)?;
        let xb = x.bits();
        let mut out: Vec<Coalition> = (1..1u64 << self.n_av)
            .filter(|c| c.count_ones() >= 2 && self.club_bits(xb, *c))
            .map(Coalition::from_bits)
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    fn club_exists_at(&self, x: u64) -> bool {
        (1..1u64 << self.n_av).any(|c| c.count_ones() >= 2 && self.club_bits(x, c))
    }

    /// Every club that may form from the Nash equilibrium `x0`.
    pub fn find_clubs(&self, x0: JointAction) -> Result<Vec<Coalition>> {
        if !self.is_nash(x0)? {
            return Err(Error::NotNash { action: x0 });
        }
        self.clubs_at(x0)
    }

    /// Classify every joint action, in increasing integer order.
    pub fn classify_all(&self) -> Vec<Classification> {
        JointAction::all(self.n_av)
            .map(|x| {
                let class = EquilibriumClass::from_improving(
                    self.improving_coalitions(x).expect("action length matches"),
                );
                let club_found = self.club_exists_at(x.bits());
                Classification { action: x, class, club_found }
            })
            .collect()
    }

    /// `x` maximises the total payoff of all vehicles.
    pub fn is_system_optimal(&self, x: JointAction) -> Result<bool> {
        self.check(x)?;
        let here = self.matrix.total_payoff(x)?;
        for y in JointAction::all(self.n_av) {
            if self.matrix.total_payoff(y)? > here {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Flip the route of every member of `c`.
pub fn deviate(x: JointAction, c: Coalition) -> Result<JointAction> {
    x.deviate(c)
}

pub fn improving_coalitions(g: &PayoffMatrix, x: JointAction) -> Result<Vec<Coalition>> {
    CompleteGame::new(g)?.improving_coalitions(x)
}

pub fn is_strong(g: &PayoffMatrix, x: JointAction) -> Result<bool> {
    CompleteGame::new(g)?.is_strong(x)
}

pub fn find_clubs(g: &PayoffMatrix, x0: JointAction) -> Result<Vec<Coalition>> {
    CompleteGame::new(g)?.find_clubs(x0)
}

pub fn classify_all(g: &PayoffMatrix) -> Result<Vec<Classification>> {
    Ok(CompleteGame::new(g)?.classify_all())
}

/// Nash test that only needs `x` and its single-flip neighbours.
pub fn is_nash(g: &PayoffMatrix, x: JointAction) -> Result<bool> {
    for k in 0..x.len() {
        let here = g.payoff(x, k)?;
        let there = g.payoff(x.deviate(Coalition::singleton(k))?, k)?;
        if here < there {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Nash test over the players whose own rows are known at `x` and at their
/// single-flip neighbour; the rest are reported as skipped.
pub fn is_nash_known(g: &PayoffMatrix, x: JointAction) -> KnownVerdict {
    known_verdict(Coalition::grand(x.len()), |k| {
        let flip = x.deviate(Coalition::singleton(k)).ok()?;
        Some(g.known_payoff(x, k)? >= g.known_payoff(flip, k)?)
    })
}

pub(crate) fn known_verdict(over: Coalition, mut test: impl FnMut(usize) -> Option<bool>) -> KnownVerdict {
    let mut v = KnownVerdict { holds: true, checked: Coalition::EMPTY, skipped: Coalition::EMPTY };
    for k in over.members() {
        match test(k) {
            Some(ok) => {
                v.checked = v.checked.with(k);
                v.holds &= ok;
            }
            None => v.skipped = v.skipped.with(k),
        }
    }
    v
}

/// Payoffs of each member of `c` before and after `c` deviates jointly from `x`.
pub fn member_deltas(g: &PayoffMatrix, x: JointAction, c: Coalition) -> Result<Vec<MemberDelta>> {
    let y = x.deviate(c)?;
    c.members()
        .map(|k| Ok(MemberDelta { player: k, before: g.payoff(x, k)?, after: g.payoff(y, k)? }))
        .collect()
}

/// Second club condition: the joint deviation strictly improves every member.
pub fn joint_deviation_profitable(g: &PayoffMatrix, x: JointAction, c: Coalition) -> Result<bool> {
    Ok(member_deltas(g, x, c)?.iter().all(MemberDelta::improves))
}

/// First club condition: no member gains by deviating alone.
pub fn unilateral_unprofitable(g: &PayoffMatrix, x: JointAction, c: Coalition) -> Result<bool> {
    for k in c.members() {
        let alone = x.deviate(Coalition::singleton(k))?;
        if g.payoff(alone, k)? > g.payoff(x, k)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Both club conditions on a possibly partial matrix.
pub fn is_club(g: &PayoffMatrix, x: JointAction, c: Coalition) -> Result<bool> {
    Ok(c.len() >= 2 && unilateral_unprofitable(g, x, c)? && joint_deviation_profitable(g, x, c)?)
}
