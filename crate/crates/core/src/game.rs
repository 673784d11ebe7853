//! Characteristic functions `v: 2^N -> R` with `v(∅) = 0`.

use thiserror::Error;

use crate::coalition::{Coalition, MAX_PLAYERS};

/// Largest magnitude at which every integer is exactly representable as an
/// `f64`.
const EXACT_INTEGER_LIMIT: f64 = 9_007_199_254_740_992.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GameError {
    #[error("n: player count {0} is outside the supported range 1..={MAX_PLAYERS}")]
    PlayerCount(usize),
    #[error("{field}: expected {expected} entries, found {found}")]
    Length {
        field: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{field}[0]: the empty coalition must be worth 0, found {value}")]
    NonzeroEmpty { field: &'static str, value: f64 },
    #[error("{field}[{index}]: payoff {value} is not finite")]
    NonFinite {
        field: &'static str,
        index: usize,
        value: f64,
    },
}

/// How a game stores its payoffs.
#[derive(Debug, Clone, PartialEq)]
pub enum GameKind {
    /// One payoff per coalition, indexed by mask.
    Explicit(Vec<f64>),
    /// `v(S) = f[|S|]`.
    Symmetric(Vec<f64>),
    /// `v(S) = |S|^k` for nonempty `S`, and `v(∅) = 0` for every `k`
    /// including `k = 0`.
    Power(u32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicFunction {
    n: usize,
    kind: GameKind,
}

impl CharacteristicFunction {
    /// Explicit game from a table of `2^n` payoffs indexed by coalition mask.
    pub fn explicit(n: usize, table: Vec<f64>) -> Result<Self, GameError> {
        check_n(n)?;
        check_payoffs("table", &table, 1 << n)?;
        Ok(Self {
            n,
            kind: GameKind::Explicit(table),
        })
    }

    /// Size-symmetric game `v(S) = f[|S|]` from `n + 1` entries.
    pub fn symmetric(n: usize, f: Vec<f64>) -> Result<Self, GameError> {
        check_n(n)?;
        check_payoffs("f", &f, n + 1)?;
        Ok(Self {
            n,
            kind: GameKind::Symmetric(f),
        })
    }

    /// `v(S) = |S|^k`.
    pub fn power(n: usize, k: u32) -> Result<Self, GameError> {
        check_n(n)?;
        Ok(Self {
            n,
            kind: GameKind::Power(k),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &GameKind {
        &self.kind
    }

    pub fn value(&self, s: Coalition) -> f64 {
        debug_assert!(s.is_subset(Coalition::full(self.n)));
        match &self.kind {
            GameKind::Explicit(table) => table[s.mask() as usize],
            GameKind::Symmetric(f) => f[s.len()],
            GameKind::Power(k) => power_of(s.len(), *k),
        }
    }

    /// `f[s]` for `s = 0..=n` when the payoff depends only on coalition size.
    pub fn size_profile(&self) -> Option<Vec<f64>> {
        match &self.kind {
            GameKind::Explicit(_) => None,
            GameKind::Symmetric(f) => Some(f.clone()),
            GameKind::Power(k) => Some((0..=self.n).map(|s| power_of(s, *k)).collect()),
        }
    }

    /// Every payoff, indexed by mask.
    pub fn table(&self) -> Vec<f64> {
        match &self.kind {
            GameKind::Explicit(table) => table.clone(),
            _ => (0..1u32 << self.n)
                .map(|m| self.value(Coalition::from_mask(m)))
                .collect(),
        }
    }

    /// Payoffs as exact integers, indexed by mask, when every payoff is an
    /// integer no larger than 2^53 in magnitude.
    pub fn integer_table(&self) -> Option<Vec<i128>> {
        let distinct = match &self.kind {
            GameKind::Explicit(table) => table.clone(),
            _ => self.size_profile().expect("symmetric kinds"),
        };
        if !distinct.iter().all(|&x| as_exact_integer(x).is_some()) {
            return None;
        }
        Some(
            self.table()
                .into_iter()
                .map(|x| as_exact_integer(x).expect("checked above"))
                .collect(),
        )
    }
}

fn power_of(size: usize, k: u32) -> f64 {
    if size == 0 {
        return 0.0;
    }
    match i32::try_from(k) {
        Ok(k) => (size as f64).powi(k),
        Err(_) => (size as f64).powf(k as f64),
    }
}

fn as_exact_integer(x: f64) -> Option<i128> {
    (x.is_finite() && x.fract() == 0.0 && x.abs() <= EXACT_INTEGER_LIMIT).then_some(x as i128)
}

fn check_n(n: usize) -> Result<(), GameError> {
    if (1..=MAX_PLAYERS).contains(&n) {
        Ok(())
    } else {
        Err(GameError::PlayerCount(n))
    }
}

fn check_payoffs(field: &'static str, values: &[f64], expected: usize) -> Result<(), GameError> {
    if values.len() != expected {
        return Err(GameError::Length {
            field,
            expected,
            found: values.len(),
        });
    }
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, x)| !x.is_finite()) {
        return Err(GameError::NonFinite {
            field,
            index,
            value,
        });
    }
    if values[0] != 0.0 {
        return Err(GameError::NonzeroEmpty {
            field,
            value: values[0],
        });
    }
    Ok(())
}
