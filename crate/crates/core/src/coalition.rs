//! Players and coalitions as fixed-width bitmasks.
//!
//! Player `p` (1-based) occupies bit `p - 1`. Every mask in this crate has
//! the same meaning at every level of restriction, so sub-coalitions never
//! need re-indexing.

use std::fmt::{self, Display, Formatter};
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Sub, SubAssign};

/// Largest supported player count. Masks fit in a `u32` and `20!` fits in
/// a `u64`.
pub const MAX_PLAYERS: usize = 20;

/// A 1-based player label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlayerId(u8);

impl PlayerId {
    /// Returns `None` unless `1 <= index <= MAX_PLAYERS`.
    pub fn new(index: usize) -> Option<Self> {
        (1..=MAX_PLAYERS)
            .contains(&index)
            .then_some(Self(index as u8))
    }

    /// Player occupying the 0-based bit `slot`.
    pub(crate) fn from_slot(slot: usize) -> Self {
        debug_assert!(slot < MAX_PLAYERS);
        Self(slot as u8 + 1)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// 0-based bit position.
    pub fn slot(self) -> usize {
        self.0 as usize - 1
    }

    pub(crate) fn bit(self) -> u32 {
        1 << self.slot()
    }
}

impl Display for PlayerId {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of players.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coalition(u32);

impl Coalition {
    pub const EMPTY: Self = Self(0);

    pub const fn from_mask(mask: u32) -> Self {
        Self(mask)
    }

    pub const fn mask(self) -> u32 {
        self.0
    }

    /// The grand coalition `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_PLAYERS);
        Self(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(p: PlayerId) -> Self {
        Self(p.bit())
    }

    pub fn from_players<I: IntoIterator<Item = PlayerId>>(players: I) -> Self {
        players.into_iter().fold(Self::EMPTY, |s, p| s.with(p))
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, p: PlayerId) -> bool {
        self.0 & p.bit() != 0
    }

    #[must_use]
    pub fn with(self, p: PlayerId) -> Self {
        Self(self.0 | p.bit())
    }

    #[must_use]
    pub fn without(self, p: PlayerId) -> Self {
        Self(self.0 & !p.bit())
    }

    pub const fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Lowest-numbered member.
    pub fn first(self) -> Option<PlayerId> {
        (self.0 != 0).then(|| PlayerId::from_slot(self.0.trailing_zeros() as usize))
    }

    /// Members in ascending order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }
}

impl IntoIterator for Coalition {
    type Item = PlayerId;
    type IntoIter = Members;

    fn into_iter(self) -> Members {
        self.iter()
    }
}

impl FromIterator<PlayerId> for Coalition {
    fn from_iter<I: IntoIterator<Item = PlayerId>>(iter: I) -> Self {
        Self::from_players(iter)
    }
}

/// Ascending iterator over the members of a [`Coalition`].
#[derive(Clone, Debug)]
pub struct Members(u32);

impl Iterator for Members {
    type Item = PlayerId;

    fn next(&mut self) -> Option<PlayerId> {
        if self.0 == 0 {
            return None;
        }
        let slot = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(PlayerId::from_slot(slot))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

impl Display for Coalition {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, p) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl BitOr for Coalition {
    type Output = Self;

    fn bitor(self, rhs: Self) -> Self {
        Self(self.0 | rhs.0)
    }
}

impl BitOrAssign for Coalition {
    fn bitor_assign(&mut self, rhs: Self) {
        self.0 |= rhs.0;
    }
}

impl BitAnd for Coalition {
    type Output = Self;

    fn bitand(self, rhs: Self) -> Self {
        Self(self.0 & rhs.0)
    }
}

impl BitAndAssign for Coalition {
    fn bitand_assign(&mut self, rhs: Self) {
        self.0 &= rhs.0;
    }
}

impl Sub for Coalition {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self(self.0 & !rhs.0)
    }
}

impl SubAssign for Coalition {
    fn sub_assign(&mut self, rhs: Self) {
        self.0 &= !rhs.0;
    }
}
