//! Convex bodies `P` in the nonnegative orthant and their support geometry.
//!
//! Two kinds of body are supported: polytopes given by a generating vertex
//! list (the body is the convex hull of the vertices together with the
//! origin), and the orthant piece of an `l^q` ball for `1 <= q <= inf`.
//! The support function of the `l^q` piece is the dual `l^{q'}` norm of the
//! componentwise positive part, `1/q + 1/q' = 1`.
//!
//! Membership in a polytope is decided by a small linear feasibility problem
//! over convex-combination coefficients (residual tolerance
//! [`MEMBERSHIP_TOL`]); extreme-point cleanup removes points within
//! [`EXTREME_CLEANUP_TOL`] of being convex combinations of the others, with
//! ties resolved toward the lexicographically smallest representative.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex;

/// Residual tolerance for polytope membership tests.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
/// Residual tolerance for extreme-point cleanup.
pub const EXTREME_CLEANUP_TOL: f64 = 1e-12;
/// Largest integer tried by the cone condition search.
pub const CONE_CAP: u32 = 1_000_000;
/// Budget for halfspace-intersection vertex enumeration in dimension >= 3.
const VERTEX_ENUM_BUDGET: f64 = 2e7;

/// An element of `P`: a vector of nonnegative real exponents. Components
/// need not be integers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiIndex(Vec<f64>);

impl MultiIndex {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.iter().any(|&c| !(c >= 0.0)) {
            return Err(Error::InvalidParameter(
                "multi-index components must be nonnegative".into(),
            ));
        }
        Ok(MultiIndex(components))
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

#[derive(Clone, Debug)]
enum BodyKind {
    Polytope { vertices: Vec<Vec<f64>> },
    /// `{x >= 0 : sum x_j^q <= 1}`; `q = f64::INFINITY` is the unit cube.
    LqBall { q: f64 },
}

/// A compact convex subset of the nonnegative orthant containing the origin.
#[derive(Clone, Debug)]
pub struct ConvexBody {
    dim: usize,
    kind: BodyKind,
}

/// Dual exponent: `1/q + 1/q' = 1`, with `q = 1 <-> q' = inf`.
pub fn dual_exponent(q: f64) -> f64 {
    if q == 1.0 {
        f64::INFINITY
    } else if q.is_infinite() {
        1.0
    } else {
        q / (q - 1.0)
    }
}

/// `l^{q'}` norm of the componentwise positive part, scaled to avoid
/// overflow for large inputs.
fn lq_dual_norm(x: &[f64], q: f64) -> f64 {
    let qd = dual_exponent(q);
    let pos = x.iter().map(|&v| v.max(0.0));
    if qd.is_infinite() {
        return pos.fold(0.0, f64::max);
    }
    if qd == 1.0 {
        return pos.sum();
    }
    let m = x.iter().map(|&v| v.max(0.0)).fold(0.0, f64::max);
    if m == 0.0 {
        return 0.0;
    }
    let s: f64 = x
        .iter()
        .map(|&v| (v.max(0.0) / m).powf(qd))
        .sum();
    m * s.powf(1.0 / qd)
}

/// Inner product skipping zero coefficients, so that `0 * (-inf)` coming
/// from logarithms of vanishing moduli contributes nothing.
fn dot_skip_zero(coeff: &[f64], x: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&c, &v) in coeff.iter().zip(x) {
        if c != 0.0 {
            acc += c * v;
        }
    }
    acc
}

impl ConvexBody {
    /// Polytope body: convex hull of the origin and the given vertices.
    pub fn polytope(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::InvalidParameter(
                "polytope needs at least one vertex".into(),
            ));
        };
        let dim = first.len();
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be >= 1".into()));
        }
        for v in &vertices {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
            if v.iter().any(|&c| !(c >= 0.0)) {
                return Err(Error::InvalidParameter(
                    "vertex coordinates must be nonnegative".into(),
                ));
            }
        }
        Ok(ConvexBody {
            dim,
            kind: BodyKind::Polytope { vertices },
        })
    }

    /// Orthant piece of the unit `l^q` ball.
    pub fn lq_ball(dim: usize, q: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be >= 1".into()));
        }
        if !(q >= 1.0) {
            return Err(Error::InvalidParameter(format!("q must be >= 1, got {q}")));
        }
        Ok(ConvexBody {
            dim,
            kind: BodyKind::LqBall { q },
        })
    }

    /// The standard simplex (unit `l^1` piece) as a polytope.
    pub fn simplex(dim: usize) -> Self {
        let mut vertices = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut v = vec![0.0; dim];
            v[j] = 1.0;
            vertices.push(v);
        }
        ConvexBody::polytope(vertices).expect("simplex is valid")
    }

    /// The unit square `[0,1]^2` as a polytope.
    pub fn unit_square() -> Self {
        ConvexBody::polytope(vec![
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ])
        .expect("square is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_polytope(&self) -> bool {
        matches!(self.kind, BodyKind::Polytope { .. })
    }

    /// `q` exponent for `l^q` bodies.
    pub fn lq_exponent(&self) -> Option<f64> {
        match self.kind {
            BodyKind::LqBall { q } => Some(q),
            _ => None,
        }
    }

    /// Generating vertices for polytope bodies.
    pub fn vertices(&self) -> Option<&[Vec<f64>]> {
        match &self.kind {
            BodyKind::Polytope { vertices } => Some(vertices),
            _ => None,
        }
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Support function `sup_{y in P} <x, y>`. Always >= 0 since `0 in P`.
    ///
    /// `-inf` components are allowed (they arise from logarithms of zero
    /// moduli); a zero vertex coefficient neutralizes them.
    pub fn support_value(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        match &self.kind {
            BodyKind::Polytope { vertices } => Ok(vertices
                .iter()
                .map(|v| dot_skip_zero(v, x))
                .fold(0.0, f64::max)),
            BodyKind::LqBall { q } => Ok(lq_dual_norm(x, *q)),
        }
    }

    /// Membership test; polytopes via linear feasibility, `l^q` bodies via
    /// the defining inequality. Tolerance [`MEMBERSHIP_TOL`].
    pub fn membership(&self, point: &[f64]) -> Result<bool> {
        self.check_dim(point)?;
        if point.iter().any(|&c| c < -MEMBERSHIP_TOL) {
            return Ok(false);
        }
        match &self.kind {
            BodyKind::Polytope { vertices } => {
                Ok(simplex::in_hull_with_origin(vertices, point, MEMBERSHIP_TOL))
            }
            BodyKind::LqBall { q } => {
                let clamped: Vec<f64> = point.iter().map(|&c| c.max(0.0)).collect();
                let lhs = if q.is_infinite() {
                    clamped.iter().fold(0.0, |a: f64, &b| a.max(b))
                } else if *q == 1.0 {
                    clamped.iter().sum()
                } else {
                    clamped.iter().map(|&c| c.powf(*q)).sum()
                };
                Ok(lhs <= 1.0 + MEMBERSHIP_TOL)
            }
        }
    }

    /// Extreme points of `conv({0} ∪ vertices)`, origin omitted, sorted
    /// lexicographically. Errors on `l^q` bodies (infinitely many).
    pub fn extreme_points(&self) -> Result<Vec<MultiIndex>> {
        let BodyKind::Polytope { vertices } = &self.kind else {
            return Err(Error::UnsupportedKind(
                "extreme_points requires a polytope (l^q bodies have infinitely many)",
            ));
        };
        let cleaned = cleanup_extreme(vertices, EXTREME_CLEANUP_TOL);
        cleaned
            .into_iter()
            .map(MultiIndex::new)
            .collect::<Result<Vec<_>>>()
    }

    /// Raw axis intercepts `a_j = sup{t >= 0 : t e_j in P}`; zeros allowed.
    fn axis_intercepts_raw(&self) -> Result<Vec<f64>> {
        match &self.kind {
            BodyKind::LqBall { .. } => Ok(vec![1.0; self.dim]),
            BodyKind::Polytope { .. } => {
                // For a hull with the origin, a positive intercept is itself
                // an extreme point supported on the axis; read it off there.
                let extr = self.extreme_points()?;
                let mut out = vec![0.0; self.dim];
                for p in &extr {
                    let c = p.components();
                    for j in 0..self.dim {
                        let on_axis = c
                            .iter()
                            .enumerate()
                            .all(|(k, &v)| k == j || v <= 1e-12);
                        if on_axis && c[j] > out[j] {
                            out[j] = c[j];
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    /// Axis intercepts; all strictly positive, else the cone condition is
    /// unsatisfiable and this errors.
    pub fn axis_intercepts(&self) -> Result<Vec<f64>> {
        let raw = self.axis_intercepts_raw()?;
        if let Some(axis) = raw.iter().position(|&a| a <= 1e-12) {
            return Err(Error::ConeConditionUnsatisfiable { axis });
        }
        Ok(raw)
    }

    /// Smallest positive integer `k` with `Σ ⊆ kP`, decided by membership of
    /// the scaled simplex corners `e_j / k`. Capped at [`CONE_CAP`].
    pub fn cone_condition(&self) -> Result<u32> {
        self.cone_condition_with_cap(CONE_CAP)
    }

    pub fn cone_condition_with_cap(&self, cap: u32) -> Result<u32> {
        let intercepts = self.axis_intercepts()?; // degenerate -> error
        let lower = intercepts
            .iter()
            .map(|&a| ((1.0 / a) - 1e-9).ceil().max(1.0) as u32)
            .max()
            .unwrap_or(1);
        let mut k = lower;
        while k <= cap {
            let mut ok = true;
            for j in 0..self.dim {
                let mut e = vec![0.0; self.dim];
                e[j] = 1.0 / k as f64;
                if !self.membership(&e)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(k);
            }
            k += 1;
        }
        Err(Error::ConeCapExceeded { cap })
    }

    /// Outer polytope `P_n ⊇ P` from supporting halfspaces in a
    /// deterministic direction set plus the orthant constraints.
    ///
    /// Directions are the normalized nonnegative integer compositions of `n`,
    /// so the sets are nested under doubling (`P_{2n} ⊆ P_n`). For polytope
    /// inputs the facet normals are added, making `P_n = P` exactly.
    pub fn outer_polytope_approximation(&self, n: u32) -> Result<ConvexBody> {
        if n < 1 {
            return Err(Error::InvalidParameter(
                "approximation level must be >= 1".into(),
            ));
        }
        let d = self.dim;
        let mut dirs = composition_directions(n, d);
        if let BodyKind::Polytope { vertices } = &self.kind {
            dirs.extend(facet_normals(vertices, d));
        }
        dedupe_vectors(&mut dirs, 1e-12);

        // supporting halfspaces <u, x> <= phi_P(u), plus x_j >= 0
        let mut halfspaces: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dirs.len() + d);
        for u in dirs {
            let c = self.support_value(&u)?;
            halfspaces.push((u, c));
        }
        for j in 0..d {
            let mut u = vec![0.0; d];
            u[j] = -1.0;
            halfspaces.push((u, 0.0));
        }

        let verts = if d == 2 {
            clip_polygon(&halfspaces, self)
        } else {
            enumerate_vertices(&halfspaces, d)?
        };
        let mut verts: Vec<Vec<f64>> = verts
            .into_iter()
            .filter(|v| v.iter().any(|&c| c.abs() > 1e-10))
            .map(|v| v.iter().map(|&c| c.max(0.0)).collect())
            .collect();
        dedupe_vectors(&mut verts, 1e-9);
        let cleaned = cleanup_extreme(&verts, EXTREME_CLEANUP_TOL);
        ConvexBody::polytope(cleaned)
    }
}

/// Remove duplicates (L-inf within `tol`) keeping the lexicographically
/// smallest, then drop points that are convex combinations of the others
/// and the origin. Result is sorted lexicographically.
fn cleanup_extreme(points: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut cands: Vec<Vec<f64>> = points
        .iter()
        .filter(|v| v.iter().any(|&c| c > 1e-12))
        .cloned()
        .collect();
    cands.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cands.dedup_by(|a, b| {
        a.iter()
            .zip(b.iter())
            .all(|(x, y)| (x - y).abs() <= tol.max(1e-12))
    });

    let mut keep: Vec<bool> = vec![true; cands.len()];
    for i in 0..cands.len() {
        let others: Vec<Vec<f64>> = cands
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i && keep[*j])
            .map(|(_, v)| v.clone())
            .collect();
        let scale = 1.0 + cands[i].iter().map(|c| c.abs()).sum::<f64>();
        if simplex::hull_residual(&others, &cands[i]) <= tol * scale {
            keep[i] = false;
        }
    }
    cands
        .into_iter()
        .zip(keep)
        .filter_map(|(v, k)| k.then_some(v))
        .collect()
}

/// Normalized nonnegative integer compositions of `n` into `d` parts.
fn composition_directions(n: u32, d: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; d];
    fn rec(n_left: u32, pos: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<f64>>) {
        if pos == current.len() - 1 {
            current[pos] = n_left;
            let norm = current
                .iter()
                .map(|&c| (c as f64) * (c as f64))
                .sum::<f64>()
                .sqrt();
            if norm > 0.0 {
                out.push(current.iter().map(|&c| c as f64 / norm).collect());
            }
            return;
        }
        for k in 0..=n_left {
            current[pos] = k;
            rec(n_left - k, pos + 1, current, out);
        }
    }
    rec(n, 0, &mut current, &mut out);
    out
}

fn dedupe_vectors(vecs: &mut Vec<Vec<f64>>, tol: f64) {
    vecs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vecs.dedup_by(|a, b| a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() <= tol));
}

/// Unit facet normals of `conv({0} ∪ vertices)` by subset enumeration;
/// degenerate hulls yield none. Practical for d <= 6 with small vertex lists.
fn facet_normals(vertices: &[Vec<f64>], d: usize) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = vec![vec![0.0; d]];
    pts.extend(vertices.iter().cloned());
    dedupe_vectors(&mut pts, 1e-12);
    let m = pts.len();
    if m < d {
        return Vec::new();
    }
    let mut normals: Vec<Vec<f64>> = Vec::new();
    let mut subset = vec![0usize; d];
    combinations(m, d, &mut subset, 0, 0, &mut |sel: &[usize]| {
        let base = &pts[sel[0]];
        let rows: Vec<Vec<f64>> = sel[1..]
            .iter()
            .map(|&i| {
                pts[i]
                    .iter()
                    .zip(base.iter())
                    .map(|(a, b)| a - b)
                    .collect()
            })
            .collect();
        let Some(mut n) = nullspace_direction(&rows, d) else {
            return;
        };
        let c = dot_skip_zero(&n, base);
        // orient so every point is on the <= side
        let mut max_excess: f64 = 0.0;
        let mut min_excess: f64 = 0.0;
        for p in &pts {
            let e = dot_skip_zero(&n, p) - c;
            max_excess = max_excess.max(e);
            min_excess = min_excess.min(e);
        }
        if max_excess <= 1e-9 {
            // already oriented
        } else if min_excess >= -1e-9 {
            for v in n.iter_mut() {
                *v = -*v;
            }
        } else {
            return; // not a supporting hyperplane
        }
        normals.push(n);
    });
    dedupe_vectors(&mut normals, 1e-9);
    normals
}

/// All `k`-subsets of `0..m`, visitor style.
fn combinations(
    m: usize,
    k: usize,
    buf: &mut Vec<usize>,
    pos: usize,
    start: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if pos == k {
        visit(buf);
        return;
    }
    for i in start..m {
        if m - i < k - pos {
            break;
        }
        buf[pos] = i;
        combinations(m, k, buf, pos + 1, i + 1, visit);
    }
}

/// One-dimensional nullspace of a (d-1) x d system, unit length.
fn nullspace_direction(rows: &[Vec<f64>], d: usize) -> Option<Vec<f64>> {
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let r = a.len();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..d {
        // partial pivot
        let (best, mag) = (row..r)
            .map(|i| (i, a[i][col].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())?;
        if mag < 1e-12 {
            continue;
        }
        a.swap(row, best);
        let p = a[row][col];
        for c in 0..d {
            a[row][c] /= p;
        }
        for i in 0..r {
            if i != row {
                let f = a[i][col];
                if f != 0.0 {
                    for c in 0..d {
                        a[i][c] -= f * a[row][c];
                    }
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == r {
            break;
        }
    }
    if pivot_cols.len() != d - 1 {
        return None; // degenerate subset
    }
    let free_col = (0..d).find(|c| !pivot_cols.contains(c))?;
    let mut n = vec![0.0; d];
    n[free_col] = 1.0;
    for (ri, &pc) in pivot_cols.iter().enumerate() {
        n[pc] = -a[ri][free_col];
    }
    let norm = n.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in n.iter_mut() {
        *v /= norm;
    }
    Some(n)
}

/// Intersection polygon of the halfspaces in the plane, by successive
/// clipping of a bounding box. Returns polygon vertices.
fn clip_polygon(halfspaces: &[(Vec<f64>, f64)], body: &ConvexBody) -> Vec<Vec<f64>> {
    let b1 = body.support_value(&[1.0, 0.0]).unwrap_or(1.0);
    let b2 = body.support_value(&[0.0, 1.0]).unwrap_or(1.0);
    let b = 2.0 * b1.max(b2) + 1.0;
    let mut poly: Vec<[f64; 2]> = vec![[0.0, 0.0], [b, 0.0], [b, b], [0.0, b]];
    for (u, c) in halfspaces {
        if poly.is_empty() {
            break;
        }
        let mut out: Vec<[f64; 2]> = Vec::with_capacity(poly.len() + 1);
        for i in 0..poly.len() {
            let a = poly[i];
            let bpt = poly[(i + 1) % poly.len()];
            let da = u[0] * a[0] + u[1] * a[1] - c;
            let db = u[0] * bpt[0] + u[1] * bpt[1] - c;
            if da <= 1e-12 {
                out.push(a);
            }
            if (da > 1e-12) != (db > 1e-12) {
                let t = da / (da - db);
                out.push([a[0] + t * (bpt[0] - a[0]), a[1] + t * (bpt[1] - a[1])]);
            }
        }
        poly = out;
    }
    poly.into_iter().map(|p| vec![p[0], p[1]]).collect()
}

/// Vertex enumeration by solving all d x d halfspace subsystems. Guarded by
/// a budget so pathological direction counts error out instead of hanging.
fn enumerate_vertices(halfspaces: &[(Vec<f64>, f64)], d: usize) -> Result<Vec<Vec<f64>>> {
    let h = halfspaces.len();
    let mut budget = 1.0f64;
    for i in 0..d {
        budget *= (h - i) as f64 / (i + 1) as f64;
    }
    if budget > VERTEX_ENUM_BUDGET {
        return Err(Error::InvalidParameter(format!(
            "approximation level too large for dimension {d}: {h} halfspaces"
        )));
    }
    let mut verts = Vec::new();
    let mut subset = vec![0usize; d];
    combinations(h, d, &mut subset, 0, 0, &mut |sel: &[usize]| {
        let mut a: Vec<Vec<f64>> = Vec::with_capacity(d);
        let mut rhs = Vec::with_capacity(d);
        for &i in sel {
            a.push(halfspaces[i].0.clone());
            rhs.push(halfspaces[i].1);
        }
        let Some(x) = solve_square(&mut a, &mut rhs) else {
            return;
        };
        let feasible = halfspaces
            .iter()
            .all(|(u, c)| dot_skip_zero(u, &x) <= c + 1e-9);
        if feasible {
            verts.push(x);
        }
    });
    Ok(verts)
}

fn solve_square(a: &mut [Vec<f64>], rhs: &mut [f64]) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let (best, mag) = (col..n)
            .map(|i| (i, a[i][col].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())?;
        if mag < 1e-10 {
            return None;
        }
        a.swap(col, best);
        rhs.swap(col, best);
        for i in 0..n {
            if i != col {
                let f = a[i][col] / a[col][col];
                if f != 0.0 {
                    for c in col..n {
                        a[i][c] -= f * a[col][c];
                    }
                    rhs[i] -= f * rhs[col];
                }
            }
        }
    }
    Some((0..n).map(|i| rhs[i] / a[i][i]).collect())
}
