//! Dense-tableau simplex solver for small linear programs.
//!
//! Solves `maximize c·x subject to A·x ≤ b, x ≥ 0` where every entry of `b`
//! is nonnegative, so the origin is a basic feasible starting point and no
//! phase-1 is needed. That is exactly the shape of the polymatroid rate-point
//! LPs this crate needs (at most ~2·(2^10 − 1) constraints on 10 variables),
//! for which a dense tableau is trivially fast and has no external
//! dependencies.
//!
//! Pivoting uses Dantzig's rule (most negative reduced cost) for speed and
//! falls back to Bland's rule after a generous iteration budget so that
//! degenerate vertices — common for polymatroid constraint sets, where many
//! subset constraints meet — cannot cycle forever.

use crate::{Error, Result};

/// Tuning knobs for [`maximize`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct SimplexOptions {
    /// Hard cap on pivots before giving up.
    pub max_iters: usize,
    /// Numerical tolerance for reduced costs and pivot elements.
    pub tol: f64,
    /// Pivot count after which Dantzig's rule yields to Bland's rule.
    pub bland_after: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            max_iters: 50_000,
            tol: 1e-9,
            bland_after: 5_000,
        }
    }
}

/// An optimal vertex and its objective value.
#[derive(Debug, Clone)]
pub(crate) struct SimplexSolution {
    pub objective: f64,
    pub x: Vec<f64>,
}

/// Maximize `c·x` subject to `rows[i]·x ≤ b[i]` and `x ≥ 0`.
///
/// Requires `b[i] ≥ 0` for all i. Errors are internal: this solver is only
/// fed LPs that are feasible and bounded by construction, so any failure
/// indicates a caller bug.
pub(crate) fn maximize(
    c: &[f64],
    rows: &[Vec<f64>],
    b: &[f64],
    opts: SimplexOptions,
) -> Result<SimplexSolution> {
    let n = c.len();
    let m = rows.len();
    if m == 0 {
        return Err(Error::Internal("simplex: no constraints given".into()));
    }
    if b.len() != m || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Internal("simplex: dimension mismatch".into()));
    }
    if let Some(bad) = b.iter().find(|v| **v < 0.0 || !v.is_finite()) {
        return Err(Error::Internal(format!(
            "simplex: right-hand side {bad} is negative or not finite"
        )));
    }

    // Tableau: m rows × (n structural + m slack + 1 rhs) columns, plus a
    // separate objective row of reduced costs. Slack j starts basic in row j.
    let width = n + m + 1;
    let rhs = n + m;
    let mut t = vec![0.0f64; m * width];
    for (i, row) in rows.iter().enumerate() {
        t[i * width..i * width + n].copy_from_slice(row);
        t[i * width + n + i] = 1.0;
        t[i * width + rhs] = b[i];
    }
    let mut obj = vec![0.0f64; width];
    for j in 0..n {
        obj[j] = -c[j];
    }
    // Column index of the variable that is basic in each row.
    let mut basis: Vec<usize> = (n..n + m).collect();

    for iter in 0..opts.max_iters {
        let bland = iter >= opts.bland_after;

        // Entering column: most negative reduced cost (Dantzig), or the
        // first negative one (Bland) once the fallback kicks in.
        let mut enter = None;
        let mut best = -opts.tol;
        for (j, &oc) in obj.iter().enumerate().take(n + m) {
            if oc < best {
                enter = Some(j);
                if bland {
                    break;
                }
                best = oc;
            }
        }
        let Some(enter) = enter else {
            // Optimal: read off the structural variables.
            let mut x = vec![0.0f64; n];
            for (i, &bj) in basis.iter().enumerate() {
                if bj < n {
                    x[bj] = t[i * width + rhs];
                }
            }
            // The objective row maintains z − c·x_nonbasic = obj[rhs], so at
            // an optimum (all nonbasic at 0) the rhs entry is z itself.
            return Ok(SimplexSolution {
                objective: obj[rhs],
                x,
            });
        };

        // Leaving row: minimum ratio test; ties go to the row whose basic
        // variable has the smallest index (Bland's anti-cycling tie-break).
        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for i in 0..m {
            let a = t[i * width + enter];
            if a > opts.tol {
                let ratio = t[i * width + rhs] / a;
                let better = ratio < best_ratio - opts.tol
                    || (ratio < best_ratio + opts.tol
                        && leave.is_some_and(|l| basis[i] < basis[l]));
                if better {
                    best_ratio = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            return Err(Error::Internal(
                "simplex: objective is unbounded, which the rate-point LP cannot be".into(),
            ));
        };

        // Pivot on (leave, enter): normalize the pivot row, then eliminate
        // the entering column everywhere else.
        let pivot = t[leave * width + enter];
        for v in &mut t[leave * width..(leave + 1) * width] {
            *v /= pivot;
        }
        for i in 0..m {
            if i == leave {
                continue;
            }
            let factor = t[i * width + enter];
            if factor != 0.0 {
                for j in 0..width {
                    t[i * width + j] -= factor * t[leave * width + j];
                }
            }
        }
        let factor = obj[enter];
        if factor != 0.0 {
            for j in 0..width {
                obj[j] -= factor * t[leave * width + j];
            }
        }
        basis[leave] = enter;
    }

    Err(Error::Internal(
        "simplex: iteration limit reached without convergence".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(c: &[f64], rows: &[Vec<f64>], b: &[f64]) -> SimplexSolution {
        maximize(c, rows, b, SimplexOptions::default()).unwrap()
    }

    #[test]
    fn one_dimensional_cap() {
        // max x s.t. x ≤ 3.5
        let s = solve(&[1.0], &[vec![1.0]], &[3.5]);
        assert!((s.objective - 3.5).abs() < 1e-12);
        assert!((s.x[0] - 3.5).abs() < 1e-12);
    }

    #[test]
    fn textbook_two_variable_problem() {
        // max 3x + 5y s.t. x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), value 36.
        let s = solve(
            &[3.0, 5.0],
            &[vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]],
            &[4.0, 12.0, 18.0],
        );
        assert!((s.objective - 36.0).abs() < 1e-9);
        assert!((s.x[0] - 2.0).abs() < 1e-9);
        assert!((s.x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_constraints_terminate() {
        // Duplicate and redundant rows force degenerate pivots.
        let s = solve(
            &[1.0, 1.0],
            &[
                vec![1.0, 0.0],
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0, 1.0],
                vec![1.0, 1.0],
            ],
            &[1.0, 1.0, 1.0, 1.5, 1.5],
        );
        assert!((s.objective - 1.5).abs() < 1e-9);
    }

    #[test]
    fn unbounded_is_reported() {
        // max x with only a constraint on y.
        let r = maximize(
            &[1.0, 0.0],
            &[vec![0.0, 1.0]],
            &[1.0],
            SimplexOptions::default(),
        );
        assert!(r.is_err());
    }

    #[test]
    fn negative_rhs_is_rejected() {
        let r = maximize(&[1.0], &[vec![1.0]], &[-0.5], SimplexOptions::default());
        assert!(r.is_err());
    }

    #[test]
    fn zero_objective_stays_at_origin() {
        let s = solve(&[0.0, 0.0], &[vec![1.0, 1.0]], &[2.0]);
        assert_eq!(s.objective, 0.0);
        assert_eq!(s.x, vec![0.0, 0.0]);
    }
}
