//! Inverse statics: pressures that best produce a target wrench.

use nalgebra::{DMatrix, DVector};

use crate::assembly::{Assembly, DofSelection, PlatformState};
use crate::bvls::{min_norm_among_minimizers, solve_box_lsq};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PressureSolution {
    /// One pressure per FREE, Pa, always inside `[0, p_max]`.
    pub pressures: Vec<f64>,
    /// Projected wrench produced by `pressures`.
    pub achieved: Vec<f64>,
    /// `||achieved - target||` in target units.
    pub residual: f64,
    pub feasible: bool,
}

/// Minimizes `||J_x^T p - target||` over `0 <= p <= p_max` on the selected DOFs.
///
/// Among minimizers the pressure vector of least Euclidean norm is returned.
/// `feasible` holds when `residual <= tol * max(1, ||target||)`. Targets outside
/// the zonotope are not an error; the result is the closest attainable wrench.
pub fn solve_pressures(
    assembly: &Assembly,
    state: PlatformState,
    dofs: &DofSelection,
    target: &[f64],
    tol: f64,
) -> Result<PressureSolution> {
    if target.len() != dofs.len() {
        return Err(Error::DimensionMismatch {
            expected: dofs.len(),
            got: target.len(),
        });
    }
    let jac = assembly.assembly_jacobian(state)?.projected(dofs);
    let p_max = assembly.p_max();
    let n = p_max.len();
    let k = dofs.len();

    // Work in pressure fractions so every variable lives in [0, 1].
    let gens = DMatrix::from_fn(k, n, |r, c| jac[(c, r)] * p_max[c]);
    let b = DVector::from_column_slice(target);
    let lower = DVector::zeros(n);
    let upper = DVector::from_element(n, 1.0);
    let first = solve_box_lsq(&gens, &b, &lower, &upper);
    let pmax_ref = p_max.iter().cloned().fold(0.0, f64::max);
    let weights = DVector::from_iterator(n, p_max.iter().map(|p| p / pmax_ref));
    let fractions = min_norm_among_minimizers(&gens, &first.x, &lower, &upper, &weights);

    let pressures: Vec<f64> = fractions
        .iter()
        .zip(&p_max)
        .map(|(a, pm)| (a * pm).clamp(0.0, *pm))
        .collect();
    let achieved: Vec<f64> = (0..k)
        .map(|c| (0..n).map(|i| jac[(i, c)] * pressures[i]).sum())
        .collect();
    let residual = achieved
        .iter()
        .zip(target)
        .map(|(a, t)| (a - t).powi(2))
        .sum::<f64>()
        .sqrt();
    let feasible = residual <= tol * b.norm().max(1.0);
    Ok(PressureSolution {
        pressures,
        achieved,
        residual,
        feasible,
    })
}
