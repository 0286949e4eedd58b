//! Complex Hessians by central finite differences on the 2d real
//! coordinates:
//!
//! ```text
//! ∂²/∂z_j ∂z̄_k = 1/4 [ (∂_{x_j x_k} + ∂_{y_j y_k}) + i (∂_{x_j y_k} - ∂_{y_j x_k}) ]
//! ```
//!
//! Cross stencils are evaluated in a canonical axis order, so the raw
//! finite-difference matrix is Hermitian to the bit; the symmetrization step
//! `H <- (H + H†)/2` stays as a guard and its pre-symmetrization asymmetry
//! is reported.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::hermitian;

/// Default finite-difference step scale: `h = 1e-4 * (1 + |z|)`.
pub const DEFAULT_FD_SCALE: f64 = 1e-4;

pub fn default_step(z: &[Complex64]) -> f64 {
    let norm = z.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
    DEFAULT_FD_SCALE * (1.0 + norm)
}

/// A d x d complex Hessian, exactly Hermitian after symmetrization.
#[derive(Clone, Debug)]
pub struct HermitianForm {
    dim: usize,
    entries: Vec<Complex64>,
    asymmetry: f64,
}

impl HermitianForm {
    /// Symmetrize raw row-major entries, recording the largest deviation
    /// `|h_jk - conj(h_kj)|` seen before symmetrization.
    pub fn from_raw(dim: usize, raw: Vec<Complex64>) -> Result<Self> {
        if raw.len() != dim * dim {
            return Err(Error::InvalidParameter(format!(
                "expected {} entries, got {}",
                dim * dim,
                raw.len()
            )));
        }
        let mut entries = raw.clone();
        let mut asym = 0.0f64;
        for j in 0..dim {
            for k in 0..dim {
                let a = raw[j * dim + k];
                let b = raw[k * dim + j].conj();
                asym = asym.max((a - b).norm());
                entries[j * dim + k] = (a + b) * 0.5;
            }
        }
        Ok(HermitianForm {
            dim,
            entries,
            asymmetry: asym,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        self.entries[j * self.dim + k]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Largest `|h_jk - conj(h_kj)|` before symmetrization.
    pub fn raw_asymmetry(&self) -> f64 {
        self.asymmetry
    }

    pub fn eigenvalues_ascending(&self) -> Vec<f64> {
        hermitian::eigenvalues_ascending(self.dim, &self.entries)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues_ascending()[0]
    }

    pub fn det(&self) -> f64 {
        hermitian::det(self.dim, &self.entries)
    }
}

/// Second difference along one real coordinate.
fn second_diff(f: &ScalarField, z: &[Complex64], axis: usize, h: f64, f0: f64) -> f64 {
    let shift = |s: f64| {
        let mut w = z.to_vec();
        if axis.is_multiple_of(2) {
            w[axis / 2] += Complex64::new(s, 0.0);
        } else {
            w[axis / 2] += Complex64::new(0.0, s);
        }
        w
    };
    (f.eval(&shift(h)) + f.eval(&shift(-h)) - 2.0 * f0) / (h * h)
}

/// Mixed second difference along two distinct real coordinates, evaluated
/// with the axes in canonical (sorted) order so that `cross(a,b)` and
/// `cross(b,a)` are the same floating-point value.
fn cross_diff(f: &ScalarField, z: &[Complex64], a: usize, b: usize, h: f64) -> f64 {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let shift = |sa: f64, sb: f64| {
        let mut w = z.to_vec();
        for (axis, s) in [(a, sa), (b, sb)] {
            if axis.is_multiple_of(2) {
                w[axis / 2] += Complex64::new(s, 0.0);
            } else {
                w[axis / 2] += Complex64::new(0.0, s);
            }
        }
        w
    };
    (f.eval(&shift(h, h)) - f.eval(&shift(h, -h)) - f.eval(&shift(-h, h))
        + f.eval(&shift(-h, -h)))
        / (4.0 * h * h)
}

/// Finite-difference complex Hessian at `z` with step `h`.
///
/// Errors when `z` lies outside the field's declared smooth region.
pub fn complex_hessian(f: &ScalarField, z: &[Complex64], h: f64) -> Result<HermitianForm> {
    if z.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: z.len(),
        });
    }
    if !(h > 0.0) {
        return Err(Error::InvalidParameter("fd step must be positive".into()));
    }
    if !f.is_smooth_at(z) {
        return Err(Error::UntrustedDerivative);
    }
    let d = f.dim();
    let f0 = f.eval(z);
    let mut raw = vec![Complex64::new(0.0, 0.0); d * d];
    for j in 0..d {
        for k in 0..d {
            let (xj, yj) = (2 * j, 2 * j + 1);
            let (xk, yk) = (2 * k, 2 * k + 1);
            let re = if j == k {
                0.25 * (second_diff(f, z, xj, h, f0) + second_diff(f, z, yj, h, f0))
            } else {
                0.25 * (cross_diff(f, z, xj, xk, h) + cross_diff(f, z, yj, yk, h))
            };
            let im = 0.25 * (cross_diff(f, z, xj, yk, h) - cross_diff(f, z, yj, xk, h));
            raw[j * d + k] = Complex64::new(re, im);
        }
    }
    HermitianForm::from_raw(d, raw)
}

/// Raw determinant of the complex Hessian (no dimensional constant; mass
/// reports carry the `4^d d!` normalization instead).
pub fn ma_density(f: &ScalarField, z: &[Complex64], h: f64) -> Result<f64> {
    Ok(complex_hessian(f, z, h)?.det())
}

#[derive(Clone, Debug)]
pub struct PshReport {
    pub all_positive: bool,
    /// Global minimum eigenvalue across the checked points.
    pub min_eigenvalue: f64,
    /// Point attaining the minimum.
    pub argmin: Vec<Complex64>,
}

/// True iff the minimum eigenvalue of the finite-difference complex Hessian
/// exceeds `tol` at every point.
pub fn strict_psh_check(
    f: &ScalarField,
    points: &[Vec<Complex64>],
    h: Option<f64>,
    tol: f64,
) -> Result<PshReport> {
    if points.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut min_eig = f64::INFINITY;
    let mut argmin = points[0].clone();
    for z in points {
        let step = h.unwrap_or_else(|| default_step(z));
        let eig = complex_hessian(f, z, step)?.min_eigenvalue();
        if eig < min_eig {
            min_eig = eig;
            argmin = z.clone();
        }
    }
    Ok(PshReport {
        all_positive: min_eig > tol,
        min_eigenvalue: min_eig,
        argmin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::ConvexBody;
    use crate::potential::PotentialSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn u0_field(dim: usize) -> ScalarField {
        ScalarField::new(dim, |z: &[Complex64]| {
            0.5 * (1.0 + z.iter().map(|w| w.norm_sqr()).sum::<f64>()).ln()
        })
    }

    #[test]
    fn hessian_of_squared_modulus_is_identity() {
        let f = ScalarField::new(1, |z: &[Complex64]| z[0].norm_sqr());
        for z in [c(0.0, 0.0), c(1.5, -2.0), c(-0.3, 0.7)] {
            let h = complex_hessian(&f, &[z], 1e-4).unwrap();
            assert!((h.entry(0, 0) - c(1.0, 0.0)).norm() < 1e-7);
        }
    }

    #[test]
    fn hessian_of_kahler_potential_at_zero() {
        let h = complex_hessian(&u0_field(1), &[c(0.0, 0.0)], 1e-4).unwrap();
        assert!((h.entry(0, 0).re - 0.5).abs() < 1e-8);
        assert!(h.entry(0, 0).im.abs() < 1e-12);
    }

    #[test]
    fn pluriharmonic_hessian_vanishes() {
        // quadratics have no truncation error, so a large step keeps the
        // stencil cancellation clear of round-off
        let f = ScalarField::new(1, |z: &[Complex64]| (z[0] * z[0]).re);
        for z in [c(0.4, 0.9), c(-2.0, 1.0)] {
            let h = complex_hessian(&f, &[z], 0.125).unwrap();
            assert!(h.entry(0, 0).norm() < 1e-10);
        }
    }

    #[test]
    fn u0_fd_matches_analytic_hessian_in_two_vars() {
        // analytic: H_jk = delta_jk / (2(1+S)) - conj(z_j) z_k / (2(1+S)^2)
        let f = u0_field(2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let z = [
                c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
                c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
            ];
            let s = z[0].norm_sqr() + z[1].norm_sqr();
            let h = complex_hessian(&f, &z, default_step(&z)).unwrap();
            for j in 0..2 {
                for k in 0..2 {
                    let kron = if j == k { 1.0 } else { 0.0 };
                    let exact = Complex64::new(kron / (2.0 * (1.0 + s)), 0.0)
                        - z[j].conj() * z[k] / (2.0 * (1.0 + s) * (1.0 + s));
                    assert!(
                        (h.entry(j, k) - exact).norm() <= 1e-6 * (1.0 + exact.norm()),
                        "entry {j}{k}: {} vs {exact}",
                        h.entry(j, k)
                    );
                }
            }
        }
    }

    #[test]
    fn ma_density_examples() {
        // d=2 Kahler potential at 0: Hessian is I/2, det 1/4
        let d = ma_density(&u0_field(2), &[c(0.0, 0.0), c(0.0, 0.0)], 1e-4).unwrap();
        assert!((d - 0.25).abs() < 1e-6);

        let plh = ScalarField::new(1, |z: &[Complex64]| (z[0] * z[0]).re);
        let d = ma_density(&plh, &[c(1.0, 0.5)], 1e-4).unwrap();
        assert!(d.abs() < 1e-8);

        // logarithmic indicator of the simplex is flat off the corner loci
        let ind = ScalarField::indicator(ConvexBody::simplex(2));
        let z = [c(2.0, 0.0), c(3.0, 0.0)];
        let d = ma_density(&ind, &z, default_step(&z)).unwrap();
        assert!(d.abs() < 1e-6, "{d}");
    }

    #[test]
    fn hessian_is_exactly_hermitian_and_raw_asymmetry_tiny() {
        let f = ScalarField::new(2, |z: &[Complex64]| {
            (1.0 + z[0].norm_sqr() + 0.5 * (z[0] * z[1].conj()).re + z[1].norm_sqr()).ln()
        });
        let z = [c(0.3, -0.2), c(0.8, 0.1)];
        let h = complex_hessian(&f, &z, 1e-4).unwrap();
        assert!(h.raw_asymmetry() <= 1e-9);
        for j in 0..2 {
            for k in 0..2 {
                assert_eq!(h.entry(j, k), h.entry(k, j).conj());
            }
        }
    }

    #[test]
    fn fd_error_scales_quadratically() {
        let f = u0_field(1);
        let z = [c(0.7, -0.2)];
        let s = z[0].norm_sqr();
        let exact = 0.5 / ((1.0 + s) * (1.0 + s));
        let err = |h: f64| {
            (complex_hessian(&f, &z, h).unwrap().entry(0, 0).re - exact).abs()
        };
        let ratio = err(0.05) / err(0.025);
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn strict_psh_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u_sigma = ScalarField::from_potential(
            PotentialSpec::smooth(ConvexBody::simplex(2)).resolve().unwrap(),
        );
        let points: Vec<Vec<Complex64>> = (0..100)
            .map(|_| {
                vec![
                    c(rng.gen_range(-7.0..7.0), rng.gen_range(-7.0..7.0)),
                    c(rng.gen_range(-7.0..7.0), rng.gen_range(-7.0..7.0)),
                ]
            })
            .collect();
        let rep = strict_psh_check(&u_sigma, &points, None, 1e-12).unwrap();
        assert!(rep.all_positive, "min eig {}", rep.min_eigenvalue);

        // indicator is flat away from axes and corner loci: min eig ~ 0
        let ind = ScalarField::indicator(ConvexBody::simplex(2));
        let pts = vec![vec![c(2.0, 0.0), c(3.5, 0.0)], vec![c(0.2, 0.1), c(4.0, 1.0)]];
        let rep = strict_psh_check(&ind, &pts, None, 1e-6).unwrap();
        assert!(!rep.all_positive);
        assert!(rep.min_eigenvalue.abs() < 1e-4);

        let neg = ScalarField::new(1, |z: &[Complex64]| -z[0].norm_sqr());
        let rep = strict_psh_check(&neg, &[vec![c(0.3, 0.1)]], None, 0.0).unwrap();
        assert!(!rep.all_positive && rep.min_eigenvalue < -0.9);

        assert!(matches!(
            strict_psh_check(&neg, &[], None, 0.0),
            Err(Error::EmptySamples)
        ));
    }

    #[test]
    fn smooth_region_is_enforced() {
        let f = ScalarField::new(1, |z: &[Complex64]| z[0].norm())
            .with_smooth_region(|z: &[Complex64]| z[0].norm() > 0.5);
        assert!(matches!(
            complex_hessian(&f, &[c(0.1, 0.0)], 1e-4),
            Err(Error::UntrustedDerivative)
        ));
        assert!(complex_hessian(&f, &[c(1.0, 0.0)], 1e-4).is_ok());
    }
}
