//! Eigenvalues and determinants of small Hermitian matrices.
//!
//! Sizes here are the complex dimension of the ambient space (at most 6), so
//! a cyclic Jacobi iteration with a fresh `R† A R` per rotation is simpler
//! than anything clever and is deterministic: fixed pivot order, fixed sweep
//! count criterion, ascending sort at the end.

use num_complex::Complex64;

type C = Complex64;

fn idx(n: usize, r: usize, c: usize) -> usize {
    r * n + c
}

/// Eigenvalues of a Hermitian matrix (row-major entries), ascending.
pub fn eigenvalues_ascending(n: usize, entries: &[C]) -> Vec<f64> {
    assert_eq!(entries.len(), n * n);
    match n {
        0 => Vec::new(),
        1 => vec![entries[0].re],
        2 => {
            let a = entries[0].re;
            let d = entries[3].re;
            let b2 = entries[1].norm_sqr();
            let tr = a + d;
            let disc = ((a - d) * 0.5).hypot(b2.sqrt());
            vec![0.5 * tr - disc, 0.5 * tr + disc]
        }
        _ => jacobi(n, entries),
    }
}

/// Determinant of a Hermitian matrix; real by symmetry.
pub fn det(n: usize, entries: &[C]) -> f64 {
    match n {
        0 => 1.0,
        1 => entries[0].re,
        2 => entries[0].re * entries[3].re - entries[1].norm_sqr(),
        3 => {
            let e = |r: usize, c: usize| entries[idx(3, r, c)];
            let d = e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
                - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
                + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
            d.re
        }
        _ => eigenvalues_ascending(n, entries).iter().product(),
    }
}

fn off_norm(n: usize, a: &[C]) -> f64 {
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[idx(n, r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(n: usize, entries: &[C]) -> Vec<f64> {
    let mut a = entries.to_vec();
    let scale = (0..n)
        .map(|r| a[idx(n, r, r)].re.abs())
        .fold(1.0_f64, f64::max);
    for _sweep in 0..60 {
        if off_norm(n, &a) <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[idx(n, p, q)];
                if apq.norm() <= 1e-300 {
                    continue;
                }
                // phase so that the (p,q) entry becomes real, then a real
                // rotation in the (p,q) plane
                let w = apq / apq.norm(); // e^{i phi}
                let app = a[idx(n, p, p)].re;
                let aqq = a[idx(n, q, q)].re;
                let b = apq.norm();
                let tau = (aqq - app) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // unitary R = identity except R[p][p]=c, R[p][q]=-s*conj(w)?
                // Build it explicitly: first D = diag(.., 1 at p, conj(w) at q)
                // makes the entry real, then G rotates; R = D * G.
                let mut r_mat = vec![C::new(0.0, 0.0); n * n];
                for k in 0..n {
                    r_mat[idx(n, k, k)] = C::new(1.0, 0.0);
                }
                r_mat[idx(n, p, p)] = C::new(c, 0.0);
                r_mat[idx(n, p, q)] = C::new(s, 0.0);
                r_mat[idx(n, q, p)] = w.conj() * (-s);
                r_mat[idx(n, q, q)] = w.conj() * c;

                // A <- R† A R, computed fresh (n <= 6)
                let mut ar = vec![C::new(0.0, 0.0); n * n];
                for r in 0..n {
                    for cc in 0..n {
                        let mut acc = C::new(0.0, 0.0);
                        for k in 0..n {
                            acc += a[idx(n, r, k)] * r_mat[idx(n, k, cc)];
                        }
                        ar[idx(n, r, cc)] = acc;
                    }
                }
                for r in 0..n {
                    for cc in 0..n {
                        let mut acc = C::new(0.0, 0.0);
                        for k in 0..n {
                            acc += r_mat[idx(n, k, r)].conj() * ar[idx(n, k, cc)];
                        }
                        a[idx(n, r, cc)] = acc;
                    }
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|r| a[idx(n, r, r)].re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eigs
}
