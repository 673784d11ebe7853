use super::{check_dimensions, Engine, ShapleyError, ShapleyOutcome};
use crate::digraph::Digraph;
use crate::game::CharacteristicFunction;

/// Shapley value of `v(S) = f[|S|]` on the directed cycle `(1, ..., n, 1)`:
/// every player gets `f[n] / n`.
///
/// On a cycle the consistent orders are the `n` rotations of the reversed
/// cycle, and across them each player enters once at every position, so its
/// marginal contributions telescope to `f[n] - f[0]`.
pub fn shapley_cycle_closed_form(f: &[f64], n: usize) -> Result<Vec<f64>, ShapleyError> {
    CharacteristicFunction::symmetric(n, f.to_vec())?;
    Ok(vec![f[n] / n as f64; n])
}

/// Closed form as an engine. Fails unless `g` is a single directed cycle
/// through every player and `v` depends only on coalition size.
pub fn shapley_closed_form(
    v: &CharacteristicFunction,
    g: &Digraph,
) -> Result<ShapleyOutcome, ShapleyError> {
    check_dimensions(v, g)?;
    if !g.is_single_cycle() {
        return Err(ShapleyError::NotACycle);
    }
    let profile = v.size_profile().ok_or(ShapleyError::NotSymmetric)?;
    let n = g.n();
    let allocation = shapley_cycle_closed_form(&profile, n)?;
    // n consistent orders; each player's numerator over n is f[n].
    let exact = v.integer_table().map(|t| vec![t[t.len() - 1]; n]);
    ShapleyOutcome::from_allocation(Engine::ClosedForm, n as u64, allocation, exact)
}
