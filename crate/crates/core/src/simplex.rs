//! Dense phase-1 simplex for tiny convex-combination feasibility problems.
//!
//! The only question this module answers: given points `v_1..v_m` in `R^d`,
//! is a target `p` expressible as `sum λ_i v_i` with `λ >= 0` and
//! `sum λ_i <= 1`? (The slack in the sum constraint is the weight placed on
//! the origin, so this is membership in `conv({0} ∪ {v_i})`.)
//!
//! Problems here have d <= 6 and at most a couple hundred points, so a dense
//! tableau with Bland's rule is plenty. The phase-1 optimum is the L1
//! constraint residual; the caller compares it against its own tolerance.

const PIVOT_EPS: f64 = 1e-11;

/// Minimal L1 residual of `sum λ_i v_i = target`, `λ >= 0`, `sum λ_i <= 1`.
///
/// Returns 0 (up to round-off) iff `target` lies in the hull of the points
/// and the origin. Never fails; an iteration cap returns the best value seen.
pub fn hull_residual(points: &[Vec<f64>], target: &[f64]) -> f64 {
    let m = points.len();
    let d = target.len();
    let n_rows = d + 1; // d equalities + the sum row
    let n_cols = m + 1 + d; // λ, slack, artificials

    // tableau[r] = coefficients row, rhs[r] = right-hand side (kept >= 0)
    let mut a = vec![vec![0.0_f64; n_cols]; n_rows];
    let mut rhs = vec![0.0_f64; n_rows];
    for (r, &t) in target.iter().enumerate() {
        let flip = if t < 0.0 { -1.0 } else { 1.0 };
        for (i, v) in points.iter().enumerate() {
            a[r][i] = flip * v[r];
        }
        a[r][m + 1 + r] = 1.0; // artificial
        rhs[r] = flip * t;
    }
    // sum row: sum λ + s = 1
    for i in 0..m {
        a[d][i] = 1.0;
    }
    a[d][m] = 1.0;
    rhs[d] = 1.0;

    // basis: artificials on the equality rows, slack on the sum row
    let mut basis: Vec<usize> = (0..d).map(|r| m + 1 + r).collect();
    basis.push(m);

    // objective row for min(sum of artificials), priced out against the basis
    let mut obj = vec![0.0_f64; n_cols];
    for c in m + 1..n_cols {
        obj[c] = 1.0;
    }
    let mut obj_val = 0.0;
    for r in 0..d {
        for c in 0..n_cols {
            obj[c] -= a[r][c];
        }
        obj_val -= rhs[r];
    }

    let max_iters = 200 * (n_cols + n_rows);
    for _ in 0..max_iters {
        // Bland: smallest column index with negative reduced cost
        let Some(enter) = (0..n_cols).find(|&c| obj[c] < -PIVOT_EPS) else {
            break;
        };
        // ratio test, ties broken by smallest basis index (Bland)
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for r in 0..n_rows {
            if a[r][enter] > PIVOT_EPS {
                let ratio = rhs[r] / a[r][enter];
                if ratio < best - PIVOT_EPS
                    || (ratio < best + PIVOT_EPS
                        && leave.is_none_or(|l| basis[r] < basis[l]))
                {
                    best = ratio;
                    leave = Some(r);
                }
            }
        }
        let Some(lr) = leave else {
            break; // unbounded cannot happen here, but bail safely
        };
        // pivot on (lr, enter)
        let piv = a[lr][enter];
        for c in 0..n_cols {
            a[lr][c] /= piv;
        }
        rhs[lr] /= piv;
        for r in 0..n_rows {
            if r != lr {
                let f = a[r][enter];
                if f != 0.0 {
                    for c in 0..n_cols {
                        a[r][c] -= f * a[lr][c];
                    }
                    rhs[r] -= f * rhs[lr];
                }
            }
        }
        let f = obj[enter];
        if f != 0.0 {
            for c in 0..n_cols {
                obj[c] -= f * a[lr][c];
            }
            obj_val -= f * rhs[lr];
        }
        basis[lr] = enter;
    }

    (-obj_val).max(0.0)
}

/// Membership in `conv({0} ∪ points)` at the given residual tolerance.
pub fn in_hull_with_origin(points: &[Vec<f64>], target: &[f64], tol: f64) -> bool {
    hull_residual(points, target) <= tol
}
