//! Entry orders, consistency with a digraph, and enumeration and counting of
//! the consistent orders.
//!
//! An order is consistent when every entering player is undominated among
//! the players already entered plus itself. The undominated set of a
//! coalition does not depend on the order its members entered in, so both
//! counting and pruning work on per-mask tables.

use std::fmt::{self, Display, Formatter};
use std::sync::Arc;

use thiserror::Error;

use crate::coalition::{Coalition, PlayerId};
use crate::digraph::Digraph;
use crate::game::CharacteristicFunction;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermutationError {
    #[error("permutation has {found} entries, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("permutation entry {position}: player {player} is outside 1..={n}")]
    PlayerOutOfRange {
        position: usize,
        player: usize,
        n: usize,
    },
    #[error("permutation repeats player {0}")]
    Repeated(usize),
    #[error("permutation is over {found} players but the {what} has {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
}

/// A permutation of `{1, ..., n}` written as the sequence in which players
/// enter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EntryOrder(Vec<PlayerId>);

/// Players entered strictly before a given player, and the same set with
/// that player added.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrefixSets {
    pub before: Coalition,
    pub with_player: Coalition,
}

impl EntryOrder {
    /// Validates a 1-based entry sequence over `n` players.
    pub fn new(n: usize, sequence: &[usize]) -> Result<Self, PermutationError> {
        if sequence.len() != n {
            return Err(PermutationError::Length {
                expected: n,
                found: sequence.len(),
            });
        }
        let mut seen = Coalition::EMPTY;
        let mut players = Vec::with_capacity(n);
        for (position, &index) in sequence.iter().enumerate() {
            let p = PlayerId::new(index).filter(|p| p.index() <= n).ok_or(
                PermutationError::PlayerOutOfRange {
                    position: position + 1,
                    player: index,
                    n,
                },
            )?;
            if seen.contains(p) {
                return Err(PermutationError::Repeated(index));
            }
            seen = seen.with(p);
            players.push(p);
        }
        Ok(Self(players))
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn players(&self) -> &[PlayerId] {
        &self.0
    }

    /// 1-based labels in entry order.
    pub fn indices(&self) -> Vec<usize> {
        self.0.iter().map(|p| p.index()).collect()
    }

    /// 1-based entry step of `p`.
    pub fn position(&self, p: PlayerId) -> Option<usize> {
        self.0.iter().position(|&q| q == p).map(|k| k + 1)
    }

    pub fn prefix_sets(&self, p: PlayerId) -> Option<PrefixSets> {
        let k = self.position(p)?;
        let before: Coalition = self.0[..k - 1].iter().copied().collect();
        Some(PrefixSets {
            before,
            with_player: before.with(p),
        })
    }
}

impl Display for EntryOrder {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

/// Whether every player in `order` enters undominated by the players that
/// entered before it, within the restriction to those players plus itself.
pub fn is_consistent(g: &Digraph, order: &EntryOrder) -> Result<bool, PermutationError> {
    check_dimension("digraph", g.n(), order)?;
    let mut entered = Coalition::EMPTY;
    for &i in order.players() {
        let with_i = entered.with(i);
        for j in entered {
            if g.dominates(with_i, j, i).expect("members of with_i") {
                return Ok(false);
            }
        }
        entered = with_i;
    }
    Ok(true)
}

/// Every consistent order of `g` exactly once, in lexicographic order.
pub fn enumerate_consistent(g: &Digraph) -> ConsistentOrders {
    ConsistentOrders::new(Arc::new(CountTables::new(g)))
}

/// Number of consistent orders of `g`, computed without enumerating them.
pub fn count_consistent(g: &Digraph) -> u64 {
    CountTables::new(g).total()
}

/// `v(prefix ∪ {i}) - v(prefix)` for every player `i`, indexed by slot.
pub fn marginal_vector(
    v: &CharacteristicFunction,
    order: &EntryOrder,
) -> Result<Vec<f64>, PermutationError> {
    check_dimension("game", v.n(), order)?;
    let mut marginals = vec![0.0; order.n()];
    add_marginals(v, order.players(), &mut marginals);
    Ok(marginals)
}

pub(crate) fn add_marginals(v: &CharacteristicFunction, order: &[PlayerId], sums: &mut [f64]) {
    let mut entered = Coalition::EMPTY;
    let mut worth = 0.0;
    for &p in order {
        entered = entered.with(p);
        let next = v.value(entered);
        sums[p.slot()] += next - worth;
        worth = next;
    }
}

fn check_dimension(
    what: &'static str,
    expected: usize,
    order: &EntryOrder,
) -> Result<(), PermutationError> {
    if order.n() == expected {
        Ok(())
    } else {
        Err(PermutationError::DimensionMismatch {
            what,
            expected,
            found: order.n(),
        })
    }
}

/// Per-mask counts of consistent prefixes and completions.
///
/// `prefix(S)` counts the consistent ways to enter exactly the players of
/// `S`; `suffix(T)` counts the consistent ways to enter the remaining
/// players once `T` has entered. `prefix(N) = suffix(∅)` is the number of
/// consistent orders.
#[derive(Debug, Clone)]
pub struct CountTables {
    n: usize,
    undominated: Vec<Coalition>,
    prefix: Vec<u64>,
    suffix: Vec<u64>,
}

impl CountTables {
    pub fn new(g: &Digraph) -> Self {
        let n = g.n();
        let undominated = g.undominated_table();
        let size = 1usize << n;
        let full = size - 1;

        let mut prefix = vec![0u64; size];
        prefix[0] = 1;
        for mask in 1..size {
            prefix[mask] = undominated[mask]
                .iter()
                .map(|i| prefix[mask & !(i.bit() as usize)])
                .try_fold(0u64, u64::checked_add)
                .expect("prefix count overflow");
        }

        let mut suffix = vec![0u64; size];
        suffix[full] = 1;
        for mask in (0..full).rev() {
            suffix[mask] = (Coalition::from_mask(full as u32) - Coalition::from_mask(mask as u32))
                .iter()
                .filter_map(|j| {
                    let next = mask | j.bit() as usize;
                    undominated[next].contains(j).then_some(suffix[next])
                })
                .try_fold(0u64, u64::checked_add)
                .expect("suffix count overflow");
        }

        Self {
            n,
            undominated,
            prefix,
            suffix,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of consistent orders.
    pub fn total(&self) -> u64 {
        self.prefix[self.prefix.len() - 1]
    }

    pub fn prefix(&self, s: Coalition) -> u64 {
        self.prefix[s.mask() as usize]
    }

    pub fn suffix(&self, t: Coalition) -> u64 {
        self.suffix[t.mask() as usize]
    }

    pub fn undominated(&self, s: Coalition) -> Coalition {
        self.undominated[s.mask() as usize]
    }

    /// Whether `p` may enter after `entered` and still leave a consistent
    /// completion.
    pub(crate) fn can_enter(&self, entered: Coalition, p: PlayerId) -> bool {
        let next = entered.with(p);
        !entered.contains(p) && self.undominated(next).contains(p) && self.suffix(next) > 0
    }
}

/// Backtracking iterator over consistent orders in lexicographic order.
///
/// Branches are pruned as soon as no consistent completion remains, so
/// every extension step leads to at least one yielded order.
#[derive(Debug, Clone)]
pub struct ConsistentOrders {
    tables: Arc<CountTables>,
    order: Vec<PlayerId>,
    entered: Coalition,
    cursor: Vec<usize>,
    root: usize,
    started: bool,
    done: bool,
}

impl ConsistentOrders {
    pub(crate) fn new(tables: Arc<CountTables>) -> Self {
        let n = tables.n();
        Self {
            tables,
            order: Vec::with_capacity(n),
            entered: Coalition::EMPTY,
            cursor: vec![0; n + 1],
            root: 0,
            started: false,
            done: false,
        }
    }

    /// Consistent orders whose first player is `first`. Yields nothing if
    /// no consistent order starts that way.
    pub(crate) fn starting_with(tables: Arc<CountTables>, first: PlayerId) -> Self {
        let feasible = tables.can_enter(Coalition::EMPTY, first);
        let mut it = Self::new(tables);
        it.order.push(first);
        it.entered = Coalition::singleton(first);
        it.root = 1;
        it.done = !feasible;
        it
    }

    /// Advances to the next order and borrows it.
    pub fn next_order(&mut self) -> Option<&[PlayerId]> {
        if self.advance() {
            Some(&self.order)
        } else {
            None
        }
    }

    fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        let n = self.tables.n();
        if self.started {
            if self.order.len() == self.root {
                self.done = true;
                return false;
            }
            self.pop();
        }
        self.started = true;
        loop {
            let depth = self.order.len();
            if depth == n {
                return true;
            }
            let mut chosen = None;
            while self.cursor[depth] < n {
                let p = PlayerId::from_slot(self.cursor[depth]);
                self.cursor[depth] += 1;
                if self.tables.can_enter(self.entered, p) {
                    chosen = Some(p);
                    break;
                }
            }
            match chosen {
                Some(p) => {
                    self.order.push(p);
                    self.entered = self.entered.with(p);
                    self.cursor[depth + 1] = 0;
                }
                None if depth == self.root => {
                    self.done = true;
                    return false;
                }
                None => self.pop(),
            }
        }
    }

    fn pop(&mut self) {
        let p = self.order.pop().expect("nonempty stack");
        self.entered = self.entered.without(p);
    }
}

impl Iterator for ConsistentOrders {
    type Item = EntryOrder;

    fn next(&mut self) -> Option<EntryOrder> {
        self.next_order().map(|seq| EntryOrder(seq.to_vec()))
    }
}
