use rayon::prelude::*;

use super::{check_dimensions, Engine, ShapleyError, ShapleyOutcome};
use crate::coalition::{Coalition, PlayerId};
use crate::digraph::Digraph;
use crate::game::CharacteristicFunction;
use crate::permutation::CountTables;

/// Shapley value from prefix and suffix counts over coalition masks.
///
/// Player `i` enters right after exactly `S` in `prefix(S) * suffix(S ∪ {i})`
/// consistent orders whenever `i` is undominated in `S ∪ {i}`, so
///
/// ```text
/// Sh_i = Σ_{S ∌ i} prefix(S) · suffix(S ∪ {i}) · (v(S ∪ {i}) − v(S)) / prefix(N)
/// ```
///
/// Cost is `O(2^n · n)` on top of building the tables. Each player's sum is
/// reduced in mask order, so results are reproducible across thread counts.
pub fn shapley_subset_dp(
    v: &CharacteristicFunction,
    g: &Digraph,
) -> Result<ShapleyOutcome, ShapleyError> {
    check_dimensions(v, g)?;
    let tables = CountTables::new(g);
    let total = tables.total();
    if total == 0 {
        return Err(ShapleyError::NoConsistentOrder {
            engine: Engine::SubsetDp,
        });
    }
    let values = v.table();
    let integers = v.integer_table();

    let per_player: Vec<(f64, Option<i128>)> = g
        .players()
        .iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|i| player_sum(&tables, &values, integers.as_deref(), total, i))
        .collect();

    let (allocation, exact): (Vec<f64>, Vec<Option<i128>>) = per_player.into_iter().unzip();
    let exact = exact.into_iter().collect::<Option<Vec<_>>>();
    ShapleyOutcome::from_allocation(Engine::SubsetDp, total, allocation, exact)
}

fn player_sum(
    tables: &CountTables,
    values: &[f64],
    integers: Option<&[i128]>,
    total: u64,
    i: PlayerId,
) -> (f64, Option<i128>) {
    let others = Coalition::full(tables.n()).without(i);
    let total = total as f64;
    let mut share = 0.0;
    let mut exact = integers.map(|_| 0i128);
    // Subsets of `others` in ascending mask order.
    let mut sub = 0u32;
    loop {
        let s = Coalition::from_mask(sub);
        let with_i = s.with(i);
        if tables.undominated(with_i).contains(i) {
            let weight = u128::from(tables.prefix(s)) * u128::from(tables.suffix(with_i));
            if weight != 0 {
                let lo = s.mask() as usize;
                let hi = with_i.mask() as usize;
                share += (weight as f64 / total) * (values[hi] - values[lo]);
                if let Some(table) = integers {
                    exact = exact.and_then(|acc| {
                        i128::try_from(weight)
                            .ok()?
                            .checked_mul(table[hi] - table[lo])?
                            .checked_add(acc)
                    });
                }
            }
        }
        if sub == others.mask() {
            break;
        }
        sub = (sub.wrapping_sub(others.mask())) & others.mask();
    }
    (share, exact)
}
