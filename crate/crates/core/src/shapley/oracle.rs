use itertools::Itertools;

use super::{
    check_dimensions, check_guard, Engine, Guard, ShapleyError, ShapleyOutcome, ORACLE_LIMIT,
};
use crate::digraph::Digraph;
use crate::game::CharacteristicFunction;
use crate::permutation::{is_consistent, marginal_vector, EntryOrder};

/// Reference value: all `n!` orders, filtered by [`is_consistent`], with
/// their marginal vectors averaged.
pub fn shapley_oracle(
    v: &CharacteristicFunction,
    g: &Digraph,
    guard: Guard,
) -> Result<ShapleyOutcome, ShapleyError> {
    check_dimensions(v, g)?;
    check_guard(Engine::Oracle, g.n(), ORACLE_LIMIT, guard)?;
    let n = g.n();
    let mut count = 0u64;
    let mut sums = vec![0.0; n];
    for seq in (1..=n).permutations(n) {
        let order = EntryOrder::new(n, &seq).expect("a permutation of 1..=n");
        if !is_consistent(g, &order).expect("same n") {
            continue;
        }
        count += 1;
        let marginals = marginal_vector(v, &order).expect("same n");
        for (s, m) in sums.iter_mut().zip(marginals) {
            *s += m;
        }
    }
    ShapleyOutcome::from_sums(Engine::Oracle, count, sums, None)
}
