//! Directed graphs on player sets with restriction, reachability, and
//! dominance queries.
//!
//! Reachability is recomputed for every restriction. Two routines do it:
//! a frontier expansion from a single player (used by [`Digraph::successors`]
//! and [`Digraph::dominates`]) and a bitset Warshall closure over a whole
//! coalition (used by [`Digraph::undominated`] and the per-mask tables the
//! counting engines build).

use rayon::prelude::*;
use thiserror::Error;

use crate::coalition::{Coalition, PlayerId, MAX_PLAYERS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("n: player count {0} is outside the supported range 1..={MAX_PLAYERS}")]
    PlayerCount(usize),
    #[error("edges[{index}]: endpoint {endpoint} of ({from},{to}) is outside 1..={n}")]
    EndpointOutOfRange {
        index: usize,
        from: usize,
        to: usize,
        endpoint: usize,
        n: usize,
    },
    #[error("edges[{index}]: ({player},{player}) is a self-loop")]
    SelfLoop { index: usize, player: usize },
    #[error("coalition {coalition} contains players outside 1..={n}")]
    CoalitionOutOfRange { coalition: Coalition, n: usize },
    #[error("player {player} is not a member of {coalition}")]
    NotAMember {
        player: PlayerId,
        coalition: Coalition,
    },
    #[error("player {0} cannot be compared with itself")]
    SamePlayer(PlayerId),
    #[error("the coalition is empty")]
    EmptyCoalition,
}

/// A directed graph `(N, edges)` with `N = {1, ..., n}`.
///
/// Immutable after construction. Self-loops are rejected and duplicate edges
/// collapse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    out: Vec<Coalition>,
}

impl Digraph {
    /// Builds a digraph from 1-based `(from, to)` pairs.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if !(1..=MAX_PLAYERS).contains(&n) {
            return Err(GraphError::PlayerCount(n));
        }
        let mut out = vec![Coalition::EMPTY; n];
        for (index, (from, to)) in edges.into_iter().enumerate() {
            for endpoint in [from, to] {
                if !(1..=n).contains(&endpoint) {
                    return Err(GraphError::EndpointOutOfRange {
                        index,
                        from,
                        to,
                        endpoint,
                        n,
                    });
                }
            }
            if from == to {
                return Err(GraphError::SelfLoop {
                    index,
                    player: from,
                });
            }
            let head = PlayerId::new(to).expect("validated above");
            out[from - 1] = out[from - 1].with(head);
        }
        Ok(Self { n, out })
    }

    /// The directed cycle `(1, 2, ..., n, 1)`. Needs `n >= 2`.
    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        Self::new(n, (1..=n).map(|i| (i, i % n + 1)))
    }

    /// The directed path `1 -> 2 -> ... -> n`.
    pub fn path(n: usize) -> Result<Self, GraphError> {
        Self::new(n, (1..n).map(|i| (i, i + 1)))
    }

    pub fn edgeless(n: usize) -> Result<Self, GraphError> {
        Self::new(n, std::iter::empty())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn players(&self) -> Coalition {
        Coalition::full(self.n)
    }

    /// Looks up a 1-based player label in this graph.
    pub fn player(&self, index: usize) -> Option<PlayerId> {
        PlayerId::new(index).filter(|p| p.index() <= self.n)
    }

    pub fn out_neighbors(&self, p: PlayerId) -> Coalition {
        self.out[p.slot()]
    }

    /// All edges, ordered by tail then head.
    pub fn edges(&self) -> Vec<(PlayerId, PlayerId)> {
        self.restrict(self.players()).edges()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|s| s.len()).sum()
    }

    /// Induced subgraph on `members`. Player labels are kept as they are.
    pub fn restrict(&self, members: Coalition) -> Restriction<'_> {
        Restriction {
            graph: self,
            members: members & self.players(),
        }
    }

    /// Players of `s` other than `i` that `i` reaches inside the restriction
    /// to `s`.
    pub fn successors(&self, s: Coalition, i: PlayerId) -> Result<Coalition, GraphError> {
        self.check_member(s, i)?;
        Ok(self.restrict(s).reach(i).without(i))
    }

    /// [`successors`](Self::successors) plus `i` itself.
    pub fn closed_successors(&self, s: Coalition, i: PlayerId) -> Result<Coalition, GraphError> {
        Ok(self.successors(s, i)?.with(i))
    }

    /// Whether `i` dominates `j` inside the restriction to `s`: `i` reaches
    /// `j` but `j` does not reach `i`.
    pub fn dominates(&self, s: Coalition, i: PlayerId, j: PlayerId) -> Result<bool, GraphError> {
        if i == j {
            return Err(GraphError::SamePlayer(i));
        }
        let from_i = self.successors(s, i)?;
        let from_j = self.successors(s, j)?;
        Ok(from_i.contains(j) && !from_j.contains(i))
    }

    /// Members of `s` that no other member dominates inside the restriction
    /// to `s`. Never empty for nonempty `s`.
    pub fn undominated(&self, s: Coalition) -> Result<Coalition, GraphError> {
        self.check_coalition(s)?;
        if s.is_empty() {
            return Err(GraphError::EmptyCoalition);
        }
        Ok(self.undominated_unchecked(s))
    }

    /// Undominated set for every mask `0..2^n`, indexed by mask. Entry 0 is
    /// empty.
    pub fn undominated_table(&self) -> Vec<Coalition> {
        (0..1u32 << self.n)
            .into_par_iter()
            .map(|mask| self.undominated_unchecked(Coalition::from_mask(mask)))
            .collect()
    }

    /// True when every player has in- and out-degree one and the edges form
    /// a single cycle through all players.
    pub fn is_single_cycle(&self) -> bool {
        if self.n < 2 || self.out.iter().any(|s| s.len() != 1) {
            return false;
        }
        let heads = self.out.iter().fold(Coalition::EMPTY, |acc, &s| acc | s);
        if heads != self.players() {
            return false;
        }
        let start = PlayerId::from_slot(0);
        let mut at = start;
        for step in 1..=self.n {
            at = self.out[at.slot()].first().expect("out-degree one");
            if at == start {
                return step == self.n;
            }
        }
        false
    }

    pub(crate) fn undominated_unchecked(&self, s: Coalition) -> Coalition {
        let reach = self.closure(s);
        s.iter()
            .filter(|&i| {
                let reached_by = s
                    .iter()
                    .filter(|j| reach[j.slot()].contains(i))
                    .collect::<Coalition>();
                reached_by.is_subset(reach[i.slot()].with(i))
            })
            .collect()
    }

    /// Transitive closure of the restriction to `s`, one row per slot.
    /// Rows for players outside `s` stay empty.
    fn closure(&self, s: Coalition) -> [Coalition; MAX_PLAYERS] {
        let mut reach = [Coalition::EMPTY; MAX_PLAYERS];
        for p in s {
            reach[p.slot()] = self.out[p.slot()] & s;
        }
        for k in s {
            let via = reach[k.slot()];
            for i in s {
                if reach[i.slot()].contains(k) {
                    reach[i.slot()] |= via;
                }
            }
        }
        reach
    }

    fn check_coalition(&self, s: Coalition) -> Result<(), GraphError> {
        if s.is_subset(self.players()) {
            Ok(())
        } else {
            Err(GraphError::CoalitionOutOfRange {
                coalition: s,
                n: self.n,
            })
        }
    }

    fn check_member(&self, s: Coalition, i: PlayerId) -> Result<(), GraphError> {
        self.check_coalition(s)?;
        if s.contains(i) {
            Ok(())
        } else {
            Err(GraphError::NotAMember {
                player: i,
                coalition: s,
            })
        }
    }
}

/// The digraph restricted to a coalition. Borrowed view; nothing is copied.
#[derive(Debug, Clone, Copy)]
pub struct Restriction<'g> {
    graph: &'g Digraph,
    members: Coalition,
}

impl Restriction<'_> {
    pub fn members(&self) -> Coalition {
        self.members
    }

    /// Out-neighbors of `p` that lie in the restriction. Empty when `p` is
    /// not a member.
    pub fn out_neighbors(&self, p: PlayerId) -> Coalition {
        if self.members.contains(p) {
            self.graph.out[p.slot()] & self.members
        } else {
            Coalition::EMPTY
        }
    }

    pub fn edges(&self) -> Vec<(PlayerId, PlayerId)> {
        self.members
            .iter()
            .flat_map(|a| self.out_neighbors(a).iter().map(move |b| (a, b)))
            .collect()
    }

    /// Players reachable from `p` by a nonempty directed path. Contains `p`
    /// only when `p` lies on a cycle.
    pub fn reach(&self, p: PlayerId) -> Coalition {
        let mut seen = Coalition::EMPTY;
        let mut frontier = self.out_neighbors(p);
        while !frontier.is_empty() {
            seen |= frontier;
            let next = frontier
                .iter()
                .fold(Coalition::EMPTY, |acc, q| acc | self.graph.out[q.slot()]);
            frontier = next & (self.members - seen);
        }
        seen
    }
}
