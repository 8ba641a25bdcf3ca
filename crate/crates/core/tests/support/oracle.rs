//! Brute-force reference for the game-theoretic operations, written without
//! the library's bit tricks: actions are byte vectors, coalitions sorted
//! member lists, and the club graph a recursive closure.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

pub type Action = Vec<u8>;
pub type Members = Vec<usize>;

#[derive(Debug, Clone)]
pub struct Game {
    pub n: usize,
    /// Payoff of each player, indexed by action.
    pub payoffs: HashMap<Action, Vec<f64>>,
}

pub fn all_actions(n: usize) -> Vec<Action> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|a: Action| {
                let mut z = a.clone();
                z.push(0);
                let mut o = a;
                o.push(1);
                [z, o]
            })
            .collect();
    }
    out
}

/// Non-empty subsets of `0..n`, by size and then lexicographically.
pub fn all_coalitions(n: usize) -> Vec<Members> {
    fn rec(start: usize, n: usize, cur: &mut Members, out: &mut Vec<Members>) {
        for i in start..n {
            cur.push(i);
            out.push(cur.clone());
            rec(i + 1, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

pub fn flip(x: &Action, c: &[usize]) -> Action {
    let mut y = x.clone();
    for &i in c {
        y[i] = 1 - y[i];
    }
    y
}

pub fn indicator(n: usize, c: &[usize]) -> Action {
    flip(&vec![0; n], c)
}

impl Game {
    pub fn g(&self, x: &Action, i: usize) -> f64 {
        self.payoffs[x][i]
    }

    pub fn improving(&self, x: &Action) -> Vec<Members> {
        all_coalitions(self.n)
            .into_iter()
            .filter(|c| {
                let y = flip(x, c);
                c.iter().all(|&i| self.g(&y, i) > self.g(x, i))
            })
            .collect()
    }

    pub fn is_nash(&self, x: &Action) -> bool {
        (0..self.n).all(|i| self.g(&flip(x, &[i]), i) <= self.g(x, i))
    }

    pub fn is_strong(&self, x: &Action) -> bool {
        self.improving(x).is_empty()
    }

    pub fn clubs(&self, x: &Action) -> Vec<Members> {
        all_coalitions(self.n)
            .into_iter()
            .filter(|c| {
                let y = flip(x, c);
                c.len() >= 2
                    && c.iter().all(|&i| self.g(&flip(x, &[i]), i) <= self.g(x, i))
                    && c.iter().all(|&i| self.g(&y, i) > self.g(x, i))
            })
            .collect()
    }

    pub fn internally_stable(&self, club: &[usize]) -> bool {
        let here = indicator(self.n, club);
        club.iter().all(|&i| {
            let rest: Members = club.iter().copied().filter(|&j| j != i).collect();
            self.g(&here, i) >= self.g(&indicator(self.n, &rest), i)
        })
    }

    pub fn joiners(&self, club: &[usize]) -> Members {
        let here = indicator(self.n, club);
        (0..self.n)
            .filter(|j| !club.contains(j))
            .filter(|&j| {
                let mut bigger = club.to_vec();
                bigger.push(j);
                self.g(&indicator(self.n, &bigger), j) > self.g(&here, j)
            })
            .collect()
    }

    pub fn graph(&self, root: &[usize]) -> Graph {
        fn visit(game: &Game, c: Members, graph: &mut Graph) {
            if !graph.nodes.insert(c.clone()) {
                return;
            }
            for j in game.joiners(&c) {
                let mut next = c.clone();
                next.push(j);
                next.sort_unstable();
                graph.edges.insert((c.clone(), next.clone(), j));
                visit(game, next, graph);
            }
        }
        let mut graph = Graph::default();
        let mut root = root.to_vec();
        root.sort_unstable();
        visit(self, root, &mut graph);
        graph
    }

    /// Leaves of the graph and, for each, whether the leaf obeys
    /// "Nash or internally unstable".
    pub fn terminal(&self, graph: &Graph) -> BTreeMap<Members, bool> {
        graph
            .nodes
            .iter()
            .filter(|c| !graph.edges.iter().any(|(from, _, _)| from == *c))
            .map(|c| (c.clone(), self.is_nash(&indicator(self.n, c)) || !self.internally_stable(c)))
            .collect()
    }
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Graph {
    pub nodes: BTreeSet<Members>,
    pub edges: BTreeSet<(Members, Members, usize)>,
}
