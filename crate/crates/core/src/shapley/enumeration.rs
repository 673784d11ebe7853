use std::sync::Arc;

use rayon::prelude::*;

use super::{
    check_dimensions, check_guard, Engine, Guard, ShapleyError, ShapleyOutcome, ENUMERATION_LIMIT,
};
use crate::coalition::{Coalition, PlayerId};
use crate::digraph::Digraph;
use crate::game::CharacteristicFunction;
use crate::permutation::{add_marginals, ConsistentOrders, CountTables};

/// Sums of marginal vectors over one top-level branch of the search.
struct BranchSums {
    count: u64,
    sums: Vec<f64>,
    exact: Option<Vec<i128>>,
}

/// Averages the marginal vectors of every consistent order.
///
/// Top-level branches (one per first player) run in parallel and are
/// combined in player order, so results do not depend on the thread count.
pub fn shapley_enumeration(
    v: &CharacteristicFunction,
    g: &Digraph,
    guard: Guard,
) -> Result<ShapleyOutcome, ShapleyError> {
    check_dimensions(v, g)?;
    check_guard(Engine::Enumeration, g.n(), ENUMERATION_LIMIT, guard)?;
    let n = g.n();
    let tables = Arc::new(CountTables::new(g));
    let integers = v.integer_table();

    let branches: Vec<BranchSums> = g
        .players()
        .iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|first| walk_branch(v, integers.as_deref(), tables.clone(), first))
        .collect();

    let mut count = 0u64;
    let mut sums = vec![0.0; n];
    let mut exact = integers.as_ref().map(|_| vec![0i128; n]);
    for branch in branches {
        count = count
            .checked_add(branch.count)
            .expect("order count overflow");
        for (total, s) in sums.iter_mut().zip(&branch.sums) {
            *total += s;
        }
        exact = match (exact, branch.exact) {
            (Some(acc), Some(part)) => acc
                .iter()
                .zip(&part)
                .map(|(a, b)| a.checked_add(*b))
                .collect(),
            _ => None,
        };
    }
    ShapleyOutcome::from_sums(Engine::Enumeration, count, sums, exact)
}

fn walk_branch(
    v: &CharacteristicFunction,
    integers: Option<&[i128]>,
    tables: Arc<CountTables>,
    first: PlayerId,
) -> BranchSums {
    let n = tables.n();
    let mut orders = ConsistentOrders::starting_with(tables, first);
    let mut count = 0u64;
    let mut sums = vec![0.0; n];
    let mut exact = integers.map(|_| vec![0i128; n]);
    while let Some(order) = orders.next_order() {
        count += 1;
        add_marginals(v, order, &mut sums);
        if let (Some(acc), Some(table)) = (exact.as_mut(), integers) {
            if !add_integer_marginals(table, order, acc) {
                exact = None;
            }
        }
    }
    BranchSums { count, sums, exact }
}

fn add_integer_marginals(table: &[i128], order: &[PlayerId], acc: &mut [i128]) -> bool {
    let mut entered = Coalition::EMPTY;
    for &p in order {
        let before = table[entered.mask() as usize];
        entered = entered.with(p);
        let gain = table[entered.mask() as usize] - before;
        match acc[p.slot()].checked_add(gain) {
            Some(s) => acc[p.slot()] = s,
            None => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn three_cycle_squares() {
        let g = Digraph::cycle(3).unwrap();
        let v = CharacteristicFunction::power(3, 2).unwrap();
        let out = shapley_enumeration(&v, &g, Guard::Enforce).unwrap();
        assert_eq!(out.permutation_count, 3);
        assert_eq!(out.allocation, vec![3.0; 3]);
        assert_eq!(out.exact, Some(vec![Ratio::from_integer(3); 3]));
    }

    #[test]
    fn five_cycle_fourth_powers() {
        let g = Digraph::cycle(5).unwrap();
        let v = CharacteristicFunction::power(5, 4).unwrap();
        let out = shapley_enumeration(&v, &g, Guard::Enforce).unwrap();
        assert_eq!(out.permutation_count, 5);
        for x in out.allocation {
            assert!((x - 125.0).abs() < 1e-12);
        }
    }

    #[test]
    fn path_squares() {
        // Only (3,2,1) is consistent: player 3 adds 1, player 2 adds 3,
        // player 1 adds 5.
        let g = Digraph::path(3).unwrap();
        let v = CharacteristicFunction::power(3, 2).unwrap();
        let out = shapley_enumeration(&v, &g, Guard::Enforce).unwrap();
        assert_eq!(out.permutation_count, 1);
        assert_eq!(out.allocation, vec![5.0, 3.0, 1.0]);
    }

    #[test]
    fn guard_and_dimensions() {
        let g = Digraph::edgeless(11).unwrap();
        let v = CharacteristicFunction::power(11, 1).unwrap();
        assert_eq!(
            shapley_enumeration(&v, &g, Guard::Enforce),
            Err(ShapleyError::GuardExceeded {
                engine: Engine::Enumeration,
                n: 11,
                limit: 10
            })
        );
        let small = CharacteristicFunction::power(3, 1).unwrap();
        assert!(matches!(
            shapley_enumeration(&small, &g, Guard::Override),
            Err(ShapleyError::DimensionMismatch { game: 3, graph: 11 })
        ));
    }

    #[test]
    fn guard_override_runs() {
        let g = Digraph::cycle(11).unwrap();
        let v = CharacteristicFunction::power(11, 2).unwrap();
        let out = shapley_enumeration(&v, &g, Guard::Override).unwrap();
        assert_eq!(out.permutation_count, 11);
        assert_eq!(out.exact, Some(vec![Ratio::from_integer(11); 11]));
    }

    #[test]
    fn fractional_exact_value() {
        let g = Digraph::cycle(3).unwrap();
        let v = CharacteristicFunction::power(3, 0).unwrap();
        let out = shapley_enumeration(&v, &g, Guard::Enforce).unwrap();
        assert_eq!(out.exact, Some(vec![Ratio::new(1, 3); 3]));
    }
}
