//! Club stability and the club dynamics graph.
//!
//! For a club `I` the graph grows `I` one outsider at a time: an edge
//! `J -> J ∪ {j}` exists whenever `j` strictly gains by joining `J`. Nodes
//! are deduplicated, so a coalition reachable along several join orders has
//! several parents. Leaving moves are not edges; they belong to the
//! day-by-day dynamics in [`crate::formation`].
//!
//! All conditions quantify over autonomous players only; human drivers
//! cannot change route.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use crate::action::{Coalition, JointAction};
use crate::equilibrium::{self, known_verdict, CompleteGame, KnownVerdict};
use crate::error::{Error, Result};
use crate::matrix::PayoffMatrix;

fn indicator(g: &PayoffMatrix, c: Coalition) -> Result<JointAction> {
    JointAction::indicator(g.n_av(), c)
}

/// No member gains by leaving: `g_i(1_I) >= g_i(1_{I\{i}})` for all `i` in `I`.
pub fn is_internally_stable(g: &PayoffMatrix, club: Coalition) -> Result<bool> {
    let here = indicator(g, club)?;
    for i in club.members() {
        if g.payoff(here, i)? < g.payoff(indicator(g, club.without(i))?, i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// No outsider gains by joining: `g_j(1_I) >= g_j(1_{I∪{j}})` for all `j` not in `I`.
pub fn is_externally_stable(g: &PayoffMatrix, club: Coalition) -> Result<bool> {
    Ok(joiners(g, club)?.is_empty())
}

/// Outsiders that strictly gain by joining `club`.
pub fn joiners(g: &PayoffMatrix, club: Coalition) -> Result<Coalition> {
    let here = indicator(g, club)?;
    let outsiders = Coalition::from_bits(g.players().bits() & !club.bits());
    let mut out = Coalition::EMPTY;
    for j in outsiders.members() {
        if g.payoff(here, j)? < g.payoff(indicator(g, club.with(j))?, j)? {
            out = out.with(j);
        }
    }
    Ok(out)
}

/// Outsiders known to gain by joining `club`, and outsiders whose gain cannot
/// be decided because a payoff is missing.
pub fn joiners_known(g: &PayoffMatrix, club: Coalition) -> Result<(Coalition, Coalition)> {
    let here = indicator(g, club)?;
    let outsiders = Coalition::from_bits(g.players().bits() & !club.bits());
    let (mut gain, mut unknown) = (Coalition::EMPTY, Coalition::EMPTY);
    for j in outsiders.members() {
        let joined = indicator(g, club.with(j))?;
        match (g.known_payoff(here, j), g.known_payoff(joined, j)) {
            (Some(a), Some(b)) if a < b => gain = gain.with(j),
            (Some(_), Some(_)) => {}
            _ => unknown = unknown.with(j),
        }
    }
    Ok((gain, unknown))
}

/// Internal stability checked only for members whose rows are known.
pub fn internal_stability_known(g: &PayoffMatrix, club: Coalition) -> KnownVerdict {
    let here = indicator(g, club).ok();
    known_verdict(club, |i| {
        let left = indicator(g, club.without(i)).ok()?;
        Some(g.known_payoff(here?, i)? >= g.known_payoff(left, i)?)
    })
}

/// External stability checked only for outsiders whose rows are known.
pub fn external_stability_known(g: &PayoffMatrix, club: Coalition) -> KnownVerdict {
    let here = indicator(g, club).ok();
    let outsiders = Coalition::from_bits(g.players().bits() & !club.bits());
    known_verdict(outsiders, |j| {
        let joined = indicator(g, club.with(j)).ok()?;
        Some(g.known_payoff(here?, j)? >= g.known_payoff(joined, j)?)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClubNode {
    pub coalition: Coalition,
    pub internally_stable: bool,
    pub externally_stable: bool,
    /// `1_J` is a Nash equilibrium among autonomous players.
    pub is_nash_state: bool,
}

/// `from ∪ {joiner} = to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct JoinEdge {
    pub from: Coalition,
    pub to: Coalition,
    pub joiner: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClubGraph {
    root: Coalition,
    nodes: Vec<ClubNode>,
    edges: Vec<JoinEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TerminalReport {
    pub leaves: Vec<Coalition>,
    /// Leaves that are neither a Nash state nor internally unstable. Always
    /// empty for graphs built from a consistent matrix.
    pub violations: Vec<Coalition>,
}

impl ClubGraph {
    pub fn root(&self) -> Coalition {
        self.root
    }

    /// Nodes in canonical coalition order (by size, then members).
    pub fn nodes(&self) -> &[ClubNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[JoinEdge] {
        &self.edges
    }

    pub fn node(&self, c: Coalition) -> Option<&ClubNode> {
        self.nodes.binary_search_by(|n| n.coalition.cmp(&c)).ok().map(|i| &self.nodes[i])
    }

    pub fn children(&self, c: Coalition) -> impl Iterator<Item = &JoinEdge> {
        self.edges.iter().filter(move |e| e.from == c)
    }

    pub fn parents(&self, c: Coalition) -> impl Iterator<Item = &JoinEdge> {
        self.edges.iter().filter(move |e| e.to == c)
    }

    pub fn is_leaf(&self, c: Coalition) -> bool {
        self.children(c).next().is_none()
    }

    /// Leaves of the graph, checking on each that `1_J` is Nash or `J` is
    /// internally unstable.
    pub fn terminal_coalitions(&self) -> TerminalReport {
        let mut report = TerminalReport::default();
        for n in &self.nodes {
            if self.is_leaf(n.coalition) {
                report.leaves.push(n.coalition);
                if !(n.is_nash_state || !n.internally_stable) {
                    report.violations.push(n.coalition);
                }
            }
        }
        report
    }
}

/// Breadth-first closure of the join relation starting at `root`.
pub fn build_club_graph(g: &PayoffMatrix, root: Coalition) -> Result<ClubGraph> {
    if root.is_empty() {
        return Err(Error::InvalidConfig("club graph root must be non-empty".into()));
    }
    JointAction::zeros(g.n_av()).check(root)?;

    let mut nodes: BTreeMap<Coalition, ClubNode> = BTreeMap::new();
    let mut edges = BTreeSet::new();
    let mut queue = VecDeque::from([root]);
    let mut queued = BTreeSet::from([root]);

    while let Some(c) = queue.pop_front() {
        let plus = joiners(g, c)?;
        for j in plus.members() {
            let next = c.with(j);
            edges.insert(JoinEdge { from: c, to: next, joiner: j });
            if queued.insert(next) {
                queue.push_back(next);
            }
        }
        let node = ClubNode {
            coalition: c,
            internally_stable: is_internally_stable(g, c)?,
            externally_stable: plus.is_empty(),
            is_nash_state: equilibrium::is_nash(g, indicator(g, c)?)?,
        };
        nodes.insert(c, node);
    }

    Ok(ClubGraph { root, nodes: nodes.into_values().collect(), edges: edges.into_iter().collect() })
}

/// Leaves `J` of the graph at which no coalition can improve, i.e. `1_J` is a
/// strong equilibrium.
pub fn se_candidates(game: &CompleteGame<'_>, graph: &ClubGraph) -> Result<Vec<Coalition>> {
    let mut out = Vec::new();
    for leaf in graph.terminal_coalitions().leaves {
        if game.is_strong(JointAction::indicator(game.n_av(), leaf)?)? {
            out.push(leaf);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn constant(n: usize) -> PayoffMatrix {
        let mut g = PayoffMatrix::all_autonomous(n).unwrap();
        for x in JointAction::all(n) {
            g.insert(x, vec![-7.0; n]).unwrap();
        }
        g
    }

    #[test]
    fn singleton_is_internally_stable_under_constant_payoffs() {
        let g = constant(3);
        assert!(is_internally_stable(&g, Coalition::singleton(1)).unwrap());
    }

    #[test]
    fn grand_coalition_graph_is_a_single_node() {
        let g = constant(3);
        let graph = build_club_graph(&g, Coalition::grand(3)).unwrap();
        assert_eq!(graph.nodes().len(), 1);
        assert!(graph.edges().is_empty());
        assert!(is_externally_stable(&g, Coalition::grand(3)).unwrap());
        let report = graph.terminal_coalitions();
        assert_eq!(report.leaves, vec![Coalition::grand(3)]);
        assert!(report.violations.is_empty());
        let game = CompleteGame::new(&g).unwrap();
        assert_eq!(se_candidates(&game, &graph).unwrap(), vec![Coalition::grand(3)]);
    }

    #[test]
    fn bush_dedups_nodes_with_two_parents() {
        // Player 2 gains by joining {0} regardless of player 1, and vice versa.
        let n = 3;
        let mut g = PayoffMatrix::all_autonomous(n).unwrap();
        for x in JointAction::all(n) {
            let row = (0..n).map(|k| if k > 0 && x.route(k) == 1 { -1.0 } else { -5.0 }).collect();
            g.insert(x, row).unwrap();
        }
        let graph = build_club_graph(&g, Coalition::singleton(0)).unwrap();
        assert_eq!(graph.nodes().len(), 4);
        assert_eq!(graph.edges().len(), 4);
        assert_eq!(graph.parents(Coalition::from([0, 1, 2])).count(), 2);
        assert_eq!(graph.terminal_coalitions().leaves, vec![Coalition::from([0, 1, 2])]);
    }

    #[test]
    fn known_joiners_skip_missing_cells() {
        let mut g = PayoffMatrix::all_autonomous(3).unwrap();
        g.insert_partial("100".parse().unwrap(), vec![Some(-5.0), Some(-5.0), None]).unwrap();
        g.insert_partial("110".parse().unwrap(), vec![Some(-4.0), Some(-4.0), None]).unwrap();
        let (gain, unknown) = joiners_known(&g, Coalition::singleton(0)).unwrap();
        assert_eq!(gain, Coalition::singleton(1));
        assert_eq!(unknown, Coalition::singleton(2));
    }

    #[test]
    fn rejects_empty_or_foreign_root() {
        let g = constant(2);
        assert!(build_club_graph(&g, Coalition::EMPTY).is_err());
        assert!(matches!(
            build_club_graph(&g, Coalition::singleton(5)),
            Err(Error::PlayerOutOfRange { .. })
        ));
    }
}
