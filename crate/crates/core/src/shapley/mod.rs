//! Shapley value of a digraph game: the average marginal contribution
//! vector over the entry orders consistent with the digraph.
//!
//! Four engines compute it:
//!
//! * [`shapley_enumeration`] walks every consistent order (factorial cost).
//! * [`shapley_subset_dp`] weights each marginal contribution
//!   `v(S ∪ {i}) - v(S)` by the number of consistent orders that enter `S`
//!   and then `i`, using prefix and suffix counts over coalition masks.
//! * [`shapley_closed_form`] returns `f(n)/n` per player for a size-symmetric
//!   game on a single directed cycle.
//! * [`shapley_oracle`] filters all `n!` orders and averages. Reference only.

mod closed_form;
mod dp;
mod enumeration;
mod oracle;

pub use closed_form::{shapley_closed_form, shapley_cycle_closed_form};
pub use dp::shapley_subset_dp;
pub use enumeration::shapley_enumeration;
pub use oracle::shapley_oracle;

use std::fmt::{self, Display, Formatter};
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::Digraph;
use crate::game::{CharacteristicFunction, GameError};

/// Largest `n` the enumeration engine accepts without [`Guard::Override`].
pub const ENUMERATION_LIMIT: usize = 10;
/// Largest `n` the oracle accepts without [`Guard::Override`].
pub const ORACLE_LIMIT: usize = 8;
/// `auto` picks the subset DP above this size.
pub const AUTO_ENUMERATION_MAX: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Engine {
    #[serde(rename = "enum")]
    Enumeration,
    #[serde(rename = "dp")]
    SubsetDp,
    #[serde(rename = "closed-form")]
    ClosedForm,
    #[serde(rename = "oracle")]
    Oracle,
}

impl Engine {
    pub fn label(self) -> &'static str {
        match self {
            Engine::Enumeration => "enum",
            Engine::SubsetDp => "dp",
            Engine::ClosedForm => "closed-form",
            Engine::Oracle => "oracle",
        }
    }
}

impl Display for Engine {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Engine selection, with `Auto` resolving by player count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EngineChoice {
    #[default]
    Auto,
    Fixed(Engine),
}

impl EngineChoice {
    pub fn resolve(self, n: usize) -> Engine {
        match self {
            EngineChoice::Auto if n > AUTO_ENUMERATION_MAX => Engine::SubsetDp,
            EngineChoice::Auto => Engine::Enumeration,
            EngineChoice::Fixed(engine) => engine,
        }
    }
}

impl FromStr for EngineChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "auto" => EngineChoice::Auto,
            "enum" => EngineChoice::Fixed(Engine::Enumeration),
            "dp" => EngineChoice::Fixed(Engine::SubsetDp),
            "closed-form" => EngineChoice::Fixed(Engine::ClosedForm),
            "oracle" => EngineChoice::Fixed(Engine::Oracle),
            other => return Err(format!("unknown engine `{other}`")),
        })
    }
}

/// Whether factorial-cost size limits apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Guard {
    #[default]
    Enforce,
    Override,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShapleyError {
    #[error("the game has {game} players but the digraph has {graph}")]
    DimensionMismatch { game: usize, graph: usize },
    #[error("the {engine} engine is limited to n <= {limit} (got n = {n}) unless the guard is overridden")]
    GuardExceeded {
        engine: Engine,
        n: usize,
        limit: usize,
    },
    #[error("the closed form needs a digraph that is a single directed cycle")]
    NotACycle,
    #[error("the closed form needs a symmetric or power game")]
    NotSymmetric,
    #[error(transparent)]
    Profile(#[from] GameError),
    #[error("internal error: {engine} engine found no consistent permutation")]
    NoConsistentOrder { engine: Engine },
}

/// Allocation vector plus the number of consistent orders it averages over.
///
/// `allocation[p - 1]` is player `p`'s payoff. `exact` holds the same
/// allocation as reduced fractions when the engine tracked it, which it does
/// for integer-valued games whose weighted sums fit in `i128`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapleyOutcome {
    pub engine: Engine,
    pub permutation_count: u64,
    pub allocation: Vec<f64>,
    #[serde(skip)]
    pub exact: Option<Vec<Ratio<i128>>>,
}

impl ShapleyOutcome {
    /// Outcome from per-player sums over all consistent orders. Exact sums,
    /// when present, are numerators over `permutation_count`.
    fn from_sums(
        engine: Engine,
        permutation_count: u64,
        sums: Vec<f64>,
        exact_sums: Option<Vec<i128>>,
    ) -> Result<Self, ShapleyError> {
        let count = permutation_count as f64;
        let allocation = sums.into_iter().map(|s| s / count).collect();
        Self::from_allocation(engine, permutation_count, allocation, exact_sums)
    }

    fn from_allocation(
        engine: Engine,
        permutation_count: u64,
        allocation: Vec<f64>,
        exact_sums: Option<Vec<i128>>,
    ) -> Result<Self, ShapleyError> {
        if permutation_count == 0 {
            return Err(ShapleyError::NoConsistentOrder { engine });
        }
        let denom = i128::from(permutation_count);
        let exact = exact_sums.map(|sums| sums.into_iter().map(|s| Ratio::new(s, denom)).collect());
        Ok(Self {
            engine,
            permutation_count,
            allocation,
            exact,
        })
    }

    /// Componentwise agreement within `tol`, scaled by magnitude above 1.
    pub fn agrees_with(&self, other: &ShapleyOutcome, tol: f64) -> bool {
        self.permutation_count == other.permutation_count
            && self.allocation.len() == other.allocation.len()
            && self
                .allocation
                .iter()
                .zip(&other.allocation)
                .all(|(a, b)| (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0))
    }
}

/// Dispatches to the chosen engine.
pub fn shapley(
    v: &CharacteristicFunction,
    g: &Digraph,
    choice: EngineChoice,
    guard: Guard,
) -> Result<ShapleyOutcome, ShapleyError> {
    match choice.resolve(g.n()) {
        Engine::Enumeration => shapley_enumeration(v, g, guard),
        Engine::SubsetDp => shapley_subset_dp(v, g),
        Engine::ClosedForm => shapley_closed_form(v, g),
        Engine::Oracle => shapley_oracle(v, g, guard),
    }
}

fn check_dimensions(v: &CharacteristicFunction, g: &Digraph) -> Result<(), ShapleyError> {
    if v.n() == g.n() {
        Ok(())
    } else {
        Err(ShapleyError::DimensionMismatch {
            game: v.n(),
            graph: g.n(),
        })
    }
}

fn check_guard(engine: Engine, n: usize, limit: usize, guard: Guard) -> Result<(), ShapleyError> {
    if guard == Guard::Enforce && n > limit {
        Err(ShapleyError::GuardExceeded { engine, n, limit })
    } else {
        Ok(())
    }
}
