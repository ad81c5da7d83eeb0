//! Bounded-variable least squares.
//!
//! `min ||A x - b||^2` subject to `lower <= x <= upper`, solved with an
//! active-set method in the style of Lawson-Hanson NNLS generalized to two
//! bounds. Free-variable subproblems use the SVD pseudo-inverse, so
//! rank-deficient systems get the minimum-norm completion.
//!
//! [`min_norm_among_minimizers`] then picks, among all boxed minimizers, the
//! one of least weighted norm.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Lower,
    Upper,
    Free,
}

#[derive(Debug, Clone)]
pub struct BoxLsq {
    pub x: DVector<f64>,
    pub iterations: usize,
    /// False when the iteration cap was hit before the optimality test passed.
    pub converged: bool,
}

fn pinv_solve(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    if a.ncols() == 0 {
        return DVector::zeros(0);
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if smax == 0.0 {
        return DVector::zeros(a.ncols());
    }
    let eps = smax * 1e-12 * (a.nrows().max(a.ncols()) as f64);
    svd.solve(b, eps).expect("u and v were computed")
}

fn columns(a: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(a.nrows(), idx.len(), |r, c| a[(r, idx[c])])
}

/// Right-hand side with every variable outside `free` moved across.
fn reduced_rhs(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    x: &DVector<f64>,
    free: &[usize],
) -> DVector<f64> {
    let mut rhs = b.clone();
    for j in 0..x.len() {
        if !free.contains(&j) && x[j] != 0.0 {
            rhs -= a.column(j) * x[j];
        }
    }
    rhs
}

/// Solves the box-constrained least-squares problem.
///
/// `lower` must be finite; `upper` may be `+inf`. Ties among entering
/// candidates go to the lowest index.
pub fn solve_box_lsq(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    lower: &DVector<f64>,
    upper: &DVector<f64>,
) -> BoxLsq {
    let n = a.ncols();
    assert_eq!(a.nrows(), b.len());
    assert!(lower.len() == n && upper.len() == n);
    debug_assert!(lower.iter().all(|v| v.is_finite()));

    let mut x = lower.clone();
    let mut status = vec![Status::Lower; n];
    let mut blocked = vec![false; n];

    let a_norm = a.norm();
    let bound_scale = lower
        .iter()
        .chain(upper.iter())
        .filter(|v| v.is_finite())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = b.norm().max(a_norm * bound_scale);
    // Gradient noise in column j scales with that column's norm, so small
    // columns next to huge ones still get a meaningful optimality test.
    let tol: Vec<f64> = (0..n)
        .map(|j| 1e-13 * a.column(j).norm() * scale.max(f64::MIN_POSITIVE))
        .collect();
    let max_iter = 30 * (n + 1) + 100;

    let mut iterations = 0;
    let mut converged = false;
    if a_norm == 0.0 {
        return BoxLsq {
            x,
            iterations,
            converged: true,
        };
    }

    'outer: while iterations < max_iter {
        iterations += 1;
        let w = a.tr_mul(&(b - a * &x));

        let mut entering: Option<(usize, f64)> = None;
        for j in 0..n {
            if blocked[j] {
                continue;
            }
            let push = match status[j] {
                Status::Lower if upper[j] > lower[j] => w[j],
                Status::Upper if upper[j] > lower[j] => -w[j],
                _ => continue,
            };
            if push > tol[j] && entering.is_none_or(|(_, best)| push > best) {
                entering = Some((j, push));
            }
        }
        let Some((j, _)) = entering else {
            converged = true;
            break;
        };
        let from = status[j];
        status[j] = Status::Free;

        let mut first = true;
        loop {
            if iterations >= max_iter {
                break 'outer;
            }
            let free: Vec<usize> = (0..n).filter(|&i| status[i] == Status::Free).collect();
            let rhs = reduced_rhs(a, b, &x, &free);
            let z = pinv_solve(&columns(a, &free), &rhs);

            if first {
                first = false;
                let k = free.iter().position(|&i| i == j).unwrap();
                let improves = match from {
                    Status::Lower => z[k] > x[j],
                    _ => z[k] < x[j],
                };
                if !improves {
                    status[j] = from;
                    blocked[j] = true;
                    continue 'outer;
                }
            }

            let mut alpha: f64 = 1.0;
            let mut limited = false;
            for (k, &i) in free.iter().enumerate() {
                let step = z[k] - x[i];
                let t = if z[k] < lower[i] {
                    (lower[i] - x[i]) / step
                } else if z[k] > upper[i] {
                    (upper[i] - x[i]) / step
                } else {
                    continue;
                };
                alpha = alpha.min(t.clamp(0.0, 1.0));
                limited = true;
            }
            for (k, &i) in free.iter().enumerate() {
                x[i] += alpha * (z[k] - x[i]);
            }
            blocked.iter_mut().for_each(|b| *b = false);
            if !limited {
                break;
            }
            iterations += 1;
            // Variables that reached (or numerically crossed) a bound leave the free set.
            for (k, &i) in free.iter().enumerate() {
                let range = (upper[i] - lower[i]).clamp(f64::MIN_POSITIVE, 1.0);
                let near = 1e-14 * range.max(x[i].abs());
                if z[k] < lower[i] && x[i] <= lower[i] + near {
                    x[i] = lower[i];
                    status[i] = Status::Lower;
                } else if z[k] > upper[i] && x[i] >= upper[i] - near {
                    x[i] = upper[i];
                    status[i] = Status::Upper;
                }
            }
        }
    }

    for i in 0..n {
        x[i] = x[i].clamp(lower[i], upper[i]);
    }
    BoxLsq {
        x,
        iterations,
        converged,
    }
}

/// Norm of the projected gradient `x - clamp(x - grad, lower, upper)` of
/// `1/2 ||A x - b||^2`. Zero exactly at a KKT point.
pub fn kkt_violation(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    lower: &DVector<f64>,
    upper: &DVector<f64>,
    x: &DVector<f64>,
) -> f64 {
    let grad = a.tr_mul(&(a * x - b));
    let mut acc = 0.0;
    for i in 0..x.len() {
        let moved = (x[i] - grad[i]).clamp(lower[i], upper[i]);
        acc += (x[i] - moved).powi(2);
    }
    acc.sqrt()
}

/// Among boxed `x` with `A x = A x0`, returns the one minimizing `||diag(weights) x||`.
///
/// `x0` must be a boxed least-squares minimizer; its fitted value `A x0` is the
/// equality target. Falls back to `x0` if the refined point does not
/// reproduce the fit.
pub fn min_norm_among_minimizers(
    a: &DMatrix<f64>,
    x0: &DVector<f64>,
    lower: &DVector<f64>,
    upper: &DVector<f64>,
    weights: &DVector<f64>,
) -> DVector<f64> {
    let (m, n) = a.shape();
    let fit = a * x0;
    let a_norm = a.norm();
    if a_norm == 0.0 || n == 0 {
        return x0.clone();
    }

    // Penalized problem identifies the active bounds...
    let wmax = weights.max();
    let rho = 1e6 * wmax / a_norm;
    let mut stacked = DMatrix::zeros(m + n, n);
    stacked.view_mut((0, 0), (m, n)).copy_from(&(a * rho));
    for i in 0..n {
        stacked[(m + i, i)] = weights[i];
    }
    let mut rhs = DVector::zeros(m + n);
    rhs.rows_mut(0, m).copy_from(&(&fit * rho));
    let penalized = solve_box_lsq(&stacked, &rhs, lower, upper).x;

    // ...then the equality is enforced exactly on that active set.
    let fit_tol = 1e-12 * (fit.norm() + a_norm * x0.amax());
    let mut free = Vec::new();
    let mut fixed = penalized.clone();
    for i in 0..n {
        let range = (upper[i] - lower[i]).min(1.0);
        let near = 1e-9 * range.max(f64::MIN_POSITIVE);
        if penalized[i] <= lower[i] + near {
            fixed[i] = lower[i];
        } else if penalized[i] >= upper[i] - near {
            fixed[i] = upper[i];
        } else {
            free.push(i);
        }
    }
    let rhs = reduced_rhs(a, &fit, &fixed, &free);
    let mut scaled = columns(a, &free);
    for (c, &i) in free.iter().enumerate() {
        scaled.column_mut(c).unscale_mut(weights[i]);
    }
    let u = pinv_solve(&scaled, &rhs);
    let mut polished = fixed;
    let mut in_box = true;
    for (c, &i) in free.iter().enumerate() {
        let v = u[c] / weights[i];
        let slack = 1e-12 * (upper[i] - lower[i]).min(v.abs().max(1.0));
        in_box &= v >= lower[i] - slack && v <= upper[i] + slack;
        polished[i] = v.clamp(lower[i], upper[i]);
    }

    let weighted_norm = |x: &DVector<f64>| x.component_mul(weights).norm();
    let reproduces = |x: &DVector<f64>| (a * x - &fit).norm() <= fit_tol;
    // The polished point satisfies the equality exactly, so it wins whenever valid.
    let refined = if in_box && reproduces(&polished) {
        polished
    } else if reproduces(&penalized) {
        penalized
    } else {
        return x0.clone();
    };
    if weighted_norm(&refined) <= weighted_norm(x0) {
        refined
    } else {
        x0.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    #[test]
    fn small_columns_beside_a_huge_one() {
        // generator norms spanning six decades; the exact fit uses all three
        let a = DMatrix::from_row_slice(
            2,
            3,
            &[
                -11.40114035681849,
                3751356.8423408633,
                10.728475828012431,
                0.6164491192605416,
                46137267.05906089,
                0.005523908127113748,
            ],
        );
        let x_star = v(&[0.98, 0.5, 0.11]);
        let b = &a * &x_star;
        let r = solve_box_lsq(&a, &b, &v(&[0.0; 3]), &v(&[1.0; 3]));
        assert!(
            (&a * &r.x - &b).norm() <= 1e-8 * a.norm(),
            "{}",
            (&a * &r.x - &b).norm()
        );
    }

    #[test]
    fn unconstrained_interior_solution() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 4.0]);
        let r = solve_box_lsq(&a, &v(&[1.0, 1.0]), &v(&[0.0, 0.0]), &v(&[1.0, 1.0]));
        assert!(r.converged);
        assert!((r.x[0] - 0.5).abs() < 1e-14 && (r.x[1] - 0.25).abs() < 1e-14);
    }

    #[test]
    fn clamps_to_upper_and_lower() {
        let a = DMatrix::identity(3, 3);
        let b = v(&[2.0, -1.0, 0.5]);
        let (lo, hi) = (v(&[0.0; 3]), v(&[1.0; 3]));
        let r = solve_box_lsq(&a, &b, &lo, &hi);
        assert!((&r.x - v(&[1.0, 0.0, 0.5])).amax() < 1e-15);
        assert!(kkt_violation(&a, &b, &lo, &hi, &r.x) < 1e-14);
    }

    #[test]
    fn nonnegative_with_infinite_upper() {
        // Columns (1,0), (1,1), b = (-1, 1): both pulls cancel at x = 0.
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let b = v(&[-1.0, 1.0]);
        let lo = v(&[0.0, 0.0]);
        let hi = v(&[f64::INFINITY, f64::INFINITY]);
        let r = solve_box_lsq(&a, &b, &lo, &hi);
        assert!(kkt_violation(&a, &b, &lo, &hi, &r.x) < 1e-14);
        assert!(r.x[0].abs() < 1e-15 && (r.x[1] - 0.0).abs() < 1e-15);
    }

    #[test]
    fn rank_deficient_min_norm() {
        // Two identical columns: any x0 + x1 = 1 fits, min-norm splits evenly.
        let a = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        let b = v(&[1.0]);
        let (lo, hi) = (v(&[0.0, 0.0]), v(&[1.0, 1.0]));
        let w = v(&[1.0, 1.0]);
        let r = solve_box_lsq(&a, &b, &lo, &hi);
        assert!(((&a * &r.x)[0] - 1.0).abs() < 1e-14);
        let x = min_norm_among_minimizers(&a, &r.x, &lo, &hi, &w);
        assert!(
            (x[0] - 0.5).abs() < 1e-12 && (x[1] - 0.5).abs() < 1e-12,
            "{x}"
        );
    }

    #[test]
    fn min_norm_respects_bounds() {
        // x0 + x1 = 1.5 with x1 <= 0.5 and heavy weight on x0 still needs x0 >= 1.
        let a = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        let (lo, hi) = (v(&[0.0, 0.0]), v(&[2.0, 0.5]));
        let x0 = v(&[1.5, 0.0]);
        let x = min_norm_among_minimizers(&a, &x0, &lo, &hi, &v(&[10.0, 1.0]));
        assert!(
            (x[0] - 1.0).abs() < 1e-12 && (x[1] - 0.5).abs() < 1e-12,
            "{x}"
        );
    }
}
