//! Identity checkers for products and quotient-rule positivity, plus the
//! domination-principle harness.

use num_complex::Complex64;

use crate::body::dual_exponent;
use crate::calculus::hessian::HermitianForm;
use crate::error::{Error, Result};
use crate::exec;
use crate::field::ScalarField;
use crate::grid::GridSpec;
use crate::univariate::PlanarSet;

/// First Wirtinger derivative of a real-valued field by central
/// differences: `f_z = (f_x - i f_y) / 2`.
fn fd_wirtinger(f: &ScalarField, z: Complex64, h: f64) -> Complex64 {
    let fx = (f.eval(&[z + Complex64::new(h, 0.0)]) - f.eval(&[z - Complex64::new(h, 0.0)]))
        / (2.0 * h);
    let fy = (f.eval(&[z + Complex64::new(0.0, h)]) - f.eval(&[z - Complex64::new(0.0, h)]))
        / (2.0 * h);
    Complex64::new(0.5 * fx, -0.5 * fy)
}

/// `f_{z z̄} = Δf / 4` by the five-point stencil.
fn fd_dz_dzbar(f: &ScalarField, z: Complex64, h: f64) -> f64 {
    let f0 = f.eval(&[z]);
    let lap = (f.eval(&[z + Complex64::new(h, 0.0)])
        + f.eval(&[z - Complex64::new(h, 0.0)])
        + f.eval(&[z + Complex64::new(0.0, h)])
        + f.eval(&[z - Complex64::new(0.0, h)])
        - 4.0 * f0)
        / (h * h);
    0.25 * lap
}

#[derive(Clone, Copy, Debug)]
pub struct LogSumLaplacianReport {
    /// `[u u_{zz̄} - |u_z|² + v v_{zz̄} - |v_z|²] + extra_term`
    pub numerator: f64,
    /// `u v_{zz̄} + v u_{zz̄} - 2 Re(u_z v_z̄)`
    pub extra_term: f64,
    /// `Δ log(u + v)`
    pub laplacian: f64,
}

/// Quotient-rule decomposition of `Δ log(u+v)` at a point where `u, v > 0`.
/// With `log u` strictly subharmonic and `log v` subharmonic all three
/// reported quantities are positive.
pub fn log_sum_laplacian_check(
    u: &ScalarField,
    v: &ScalarField,
    z: Complex64,
    h: f64,
) -> Result<LogSumLaplacianReport> {
    if u.dim() != 1 || v.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: u.dim().max(v.dim()),
        });
    }
    let (u0, v0) = (u.eval(&[z]), v.eval(&[z]));
    if !(u0 > 0.0 && v0 > 0.0) {
        return Err(Error::PreconditionViolated(format!(
            "u and v must be positive at z, got u={u0}, v={v0}"
        )));
    }
    let uz = fd_wirtinger(u, z, h);
    let vz = fd_wirtinger(v, z, h);
    let uzz = fd_dz_dzbar(u, z, h);
    let vzz = fd_dz_dzbar(v, z, h);
    let extra = u0 * vzz + v0 * uzz - 2.0 * (uz * vz.conj()).re;
    let own = u0 * uzz - uz.norm_sqr() + v0 * vzz - vz.norm_sqr();
    let log_sum = ScalarField::new(1, {
        let (u, v) = (u.clone(), v.clone());
        move |w: &[Complex64]| (u.eval(w) + v.eval(w)).ln()
    });
    let laplacian = 4.0 * fd_dz_dzbar(&log_sum, z, h);
    Ok(LogSumLaplacianReport {
        numerator: own + extra,
        extra_term: extra,
        laplacian,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct CrossGradientReport {
    /// `(u v_z - v u_z)(u v_z̄ - v u_z̄)`, nonnegative by construction.
    pub lhs: f64,
    /// `u²|v_z|² + v²|u_z|² - uv (u_z v_z̄ + v_z u_z̄)`
    pub rhs: f64,
    pub residual: f64,
}

/// Residual of the product-derivative identity; both sides are assembled
/// from the same finite-difference first derivatives, so the residual is
/// pure floating-point noise whenever the identity holds.
pub fn cross_gradient_identity_check(
    u: &ScalarField,
    v: &ScalarField,
    z: Complex64,
    h: f64,
) -> Result<CrossGradientReport> {
    if u.dim() != 1 || v.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: u.dim().max(v.dim()),
        });
    }
    let (u0, v0) = (u.eval(&[z]), v.eval(&[z]));
    let uz = fd_wirtinger(u, z, h);
    let vz = fd_wirtinger(v, z, h);
    let cross = u0 * vz - v0 * uz;
    let lhs = (cross * cross.conj()).re;
    let rhs = u0 * u0 * vz.norm_sqr() + v0 * v0 * uz.norm_sqr()
        - u0 * v0 * (uz * vz.conj() + vz * uz.conj()).re;
    Ok(CrossGradientReport {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

/// Partial derivatives of `phi(x, y) = (x^p + y^p)^{1/p}` with `p = q'`.
fn lq_phi_partials(x: f64, y: f64, p: f64) -> (f64, f64, f64, f64, f64) {
    let s = x.powf(p) + y.powf(p);
    let phi_x = s.powf(1.0 / p - 1.0) * x.powf(p - 1.0);
    let phi_y = s.powf(1.0 / p - 1.0) * y.powf(p - 1.0);
    let common = (p - 1.0) * s.powf(1.0 / p - 2.0);
    let phi_xx = common * x.powf(p - 2.0) * y.powf(p);
    let phi_yy = common * y.powf(p - 2.0) * x.powf(p);
    let phi_xy = -common * x.powf(p - 1.0) * y.powf(p - 1.0);
    (phi_x, phi_y, phi_xx, phi_yy, phi_xy)
}

/// Closed-form 2x2 complex Hessian of `v(z,w) = phi(V_E(z), V_F(w))` for the
/// `l^{q'}` composition, assembled from the chain rule with the factor Green
/// functions harmonic off their sets:
///
/// ```text
/// v_{z z̄} = phi_xx |(V_E)_z|²     v_{z w̄} = phi_xy (V_E)_z conj((V_F)_w)
/// v_{w w̄} = phi_yy |(V_F)_w|²
/// ```
pub fn product_hessian_closed_form(
    q: f64,
    e_set: &PlanarSet,
    f_set: &PlanarSet,
    z: Complex64,
    w: Complex64,
) -> Result<HermitianForm> {
    if !(q > 1.0) || q.is_infinite() {
        return Err(Error::NotSmoothBody);
    }
    if e_set.distance(z) <= 1e-12 || f_set.distance(w) <= 1e-12 {
        return Err(Error::NotDifferentiableHere);
    }
    let x = e_set.green_value(z);
    let y = f_set.green_value(w);
    if x == 0.0 && y == 0.0 {
        return Err(Error::InvalidParameter(
            "phi is not differentiable at (0,0): both Green values vanish".into(),
        ));
    }
    let p = dual_exponent(q);
    let ge = e_set.green_gradient(z)?;
    let gf = f_set.green_gradient(w)?;
    // on a plateau (z strictly inside a disk, V_E = 0 locally) the
    // composition is v = phi(0, V_F) = V_F, harmonic off F: zero Hessian;
    // the generic partials would hit 0^{q'-2} there
    if x == 0.0 || y == 0.0 {
        let zero = Complex64::new(0.0, 0.0);
        return HermitianForm::from_raw(2, vec![zero, zero, zero, zero]);
    }
    let (_, _, phi_xx, phi_yy, phi_xy) = lq_phi_partials(x, y, p);
    let h11 = Complex64::new(phi_xx * ge.norm_sqr(), 0.0);
    let h22 = Complex64::new(phi_yy * gf.norm_sqr(), 0.0);
    let h12 = ge * gf.conj() * phi_xy;
    HermitianForm::from_raw(2, vec![h11, h12, h12.conj(), h22])
}

/// Conclusion test of the domination principle: asserts `u <= v + tol` on
/// the support samples (the hypothesis), then checks it on the whole grid.
pub fn domination_check(
    u: &ScalarField,
    v: &ScalarField,
    support_samples: &[Vec<Complex64>],
    grid: &GridSpec,
    tol: f64,
) -> Result<bool> {
    if u.dim() != v.dim() || u.dim() != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            got: grid.dim(),
        });
    }
    for s in support_samples {
        let (us, vs) = (u.eval(s), v.eval(s));
        if us > vs + tol {
            return Err(Error::PreconditionViolated(format!(
                "u > v + tol on a support sample: u={us}, v={vs}, tol={tol}"
            )));
        }
    }
    let n = grid.total_points();
    let ok = exec::map_indexed(n, exec::default_mode(), |i| {
        let z = grid.point(i);
        u.eval(&z) <= v.eval(&z) + tol
    });
    Ok(ok.into_iter().all(|b| b))
}
