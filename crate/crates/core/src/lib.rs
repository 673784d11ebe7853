//! Shapley values of digraph games.
//!
//! A digraph game pairs a transferable-utility game `v` with a directed
//! graph on the same players. An entry order is admissible when each player
//! enters undominated by those already in, and the Shapley value averages
//! marginal contribution vectors over the admissible orders.

pub mod coalition;
pub mod digraph;
pub mod format;
pub mod game;
pub mod permutation;
pub mod shapley;

pub use coalition::{Coalition, PlayerId, MAX_PLAYERS};
pub use digraph::{Digraph, GraphError, Restriction};
pub use game::{CharacteristicFunction, GameError, GameKind};
pub use permutation::{
    count_consistent, enumerate_consistent, is_consistent, marginal_vector, ConsistentOrders,
    CountTables, EntryOrder, PermutationError, PrefixSets,
};
pub use shapley::{
    shapley, shapley_closed_form, shapley_cycle_closed_form, shapley_enumeration, shapley_oracle,
    shapley_subset_dp, Engine, EngineChoice, Guard, ShapleyError, ShapleyOutcome,
};
