//! Named invariant suites: seeded, deterministic, serializable.
//!
//! Each check reports a measured margin and the bound it was held against;
//! a suite passes when every check does. Reports serialize to JSON with a
//! stable field order, so identical `(suite, seed, tolerances)` inputs give
//! byte-identical reports.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::body::{dual_exponent, ConvexBody};
use crate::calculus::hessian::{self, complex_hessian, default_step};
use crate::calculus::identities::{log_sum_laplacian_check, product_hessian_closed_form, cross_gradient_identity_check};
use crate::calculus::scan::ma_vanishing_scan;
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::GridSpec;
use crate::potential::{self, PotentialSpec};
use crate::product::{self, ProductSetSpec};
use crate::sample;
use crate::univariate::PlanarSet;
use crate::{NORMALIZATION_NOTE, SCHEMA};

pub const SUITE_NAMES: [&str; 5] = ["support-fn", "potential", "hessian", "product", "identities"];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// The quantity the check measured (a max error, a min eigenvalue, ...).
    pub measured: f64,
    /// The bound it was compared against.
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: String,
    pub suite: String,
    pub seed: u64,
    pub normalization: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Tolerance override: entry in the map wins over the default.
fn tol(tolerances: &BTreeMap<String, f64>, name: &str, default: f64) -> f64 {
    tolerances.get(name).copied().unwrap_or(default)
}

/// Checks where larger measured is worse: pass iff `measured <= bound`.
fn upper(name: &str, measured: f64, bound: f64) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed: measured <= bound,
        measured,
        bound,
    }
}

/// Checks where the measured margin must stay strictly above the bound.
fn lower(name: &str, measured: f64, bound: f64) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed: measured > bound,
        measured,
        bound,
    }
}

pub fn run_suite(
    suite: &str,
    seed: u64,
    tolerances: &BTreeMap<String, f64>,
) -> Result<SuiteReport> {
    let checks = match suite {
        "support-fn" => support_fn_checks(seed, tolerances),
        "potential" => potential_checks(seed, tolerances),
        "hessian" => hessian_checks(seed, tolerances),
        "product" => product_checks(seed, tolerances),
        "identities" => identities_checks(seed, tolerances)?,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown suite '{other}'; available: {SUITE_NAMES:?}"
            )))
        }
    };
    Ok(SuiteReport {
        schema: SCHEMA.to_string(),
        suite: suite.to_string(),
        seed,
        normalization: NORMALIZATION_NOTE.to_string(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn support_fn_checks(seed: u64, t: &BTreeMap<String, f64>) -> Vec<CheckResult> {
    let mut checks = Vec::new();
    let ball2 = ConvexBody::lq_ball(2, 2.0).unwrap();

    let d345 = (ball2.support_value(&[3.0, 4.0]).unwrap() - 5.0).abs();
    checks.push(upper("lq-q2-3-4-5", d345, tol(t, "lq-q2-3-4-5", 1e-12)));

    let mut rng = sample::rng(seed ^ 0x5f01);
    let mut worst = 0.0f64;
    for q in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
        let ball = ConvexBody::lq_ball(2, q).unwrap();
        let p = dual_exponent(q);
        for _ in 0..2000 {
            let x = sample::nonneg_vector(&mut rng, 2, 10.0);
            let reference = if p.is_infinite() {
                x.iter().cloned().fold(0.0, f64::max)
            } else {
                x.iter().map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p)
            };
            let got = ball.support_value(&x).unwrap();
            worst = worst.max((got - reference).abs() / (1.0 + reference));
        }
    }
    checks.push(upper("lq-dual-formula", worst, tol(t, "lq-dual-formula", 1e-12)));

    let square = ConvexBody::unit_square();
    let mut rng = sample::rng(seed ^ 0x5f02);
    let mut homog = 0.0f64;
    let mut convexity = 0.0f64;
    let mut x_monotone = 0.0f64;
    let mut body_monotone = 0.0f64;
    let sigma = ConvexBody::simplex(2);
    for _ in 0..500 {
        let x = [
            rng.gen_range_f(-5.0, 5.0),
            rng.gen_range_f(-5.0, 5.0),
        ];
        let y = [
            rng.gen_range_f(-5.0, 5.0),
            rng.gen_range_f(-5.0, 5.0),
        ];
        let s = rng.gen_range_f(0.0, 8.0);
        let sx = square.support_value(&x).unwrap();
        let sy = square.support_value(&y).unwrap();
        homog = homog.max(
            (square.support_value(&[s * x[0], s * x[1]]).unwrap() - s * sx).abs()
                / (1.0 + (s * sx).abs()),
        );
        let mid = square
            .support_value(&[(x[0] + y[0]) / 2.0, (x[1] + y[1]) / 2.0])
            .unwrap();
        convexity = convexity.max(mid - 0.5 * (sx + sy));
        let xp = [x[0].abs(), x[1].abs()];
        let bump = [xp[0] + s, xp[1]];
        x_monotone = x_monotone
            .max(square.support_value(&xp).unwrap() - square.support_value(&bump).unwrap());
        body_monotone =
            body_monotone.max(sigma.support_value(&x).unwrap() - sx);
    }
    checks.push(upper("homogeneity", homog, tol(t, "homogeneity", 1e-12)));
    checks.push(upper("convexity", convexity, tol(t, "convexity", 1e-12)));
    checks.push(upper("x-monotonicity", x_monotone, tol(t, "x-monotonicity", 1e-12)));
    checks.push(upper(
        "body-monotonicity",
        body_monotone,
        tol(t, "body-monotonicity", 1e-12),
    ));

    let mut rng = sample::rng(seed ^ 0x5f03);
    let mut det_worst = 0.0f64;
    for q in [1.5, 2.0, 3.0] {
        let ball = ConvexBody::lq_ball(2, q).unwrap();
        let mut checked = 0;
        while checked < 100 {
            let x = [rng.gen_range_f(0.25, 3.0), rng.gen_range_f(0.25, 3.0)];
            if x[0].hypot(x[1]) < 0.5 {
                continue;
            }
            checked += 1;
            let h = 1e-4 * (1.0 + x[0].hypot(x[1]));
            let f = |p: [f64; 2]| ball.support_value(&p).unwrap();
            let fxx = (f([x[0] + h, x[1]]) - 2.0 * f(x) + f([x[0] - h, x[1]])) / (h * h);
            let fyy = (f([x[0], x[1] + h]) - 2.0 * f(x) + f([x[0], x[1] - h])) / (h * h);
            let fxy = (f([x[0] + h, x[1] + h]) - f([x[0] + h, x[1] - h])
                - f([x[0] - h, x[1] + h])
                + f([x[0] - h, x[1] - h]))
                / (4.0 * h * h);
            det_worst = det_worst.max((fxx * fyy - fxy * fxy).abs());
        }
    }
    checks.push(upper(
        "degenerate-real-hessian",
        det_worst,
        tol(t, "degenerate-real-hessian", 1e-6),
    ));

    let poly = ConvexBody::polytope(vec![
        vec![1.0, 0.0],
        vec![0.5, 0.5],
        vec![0.0, 1.0],
        vec![0.9, 0.8],
    ])
    .unwrap();
    let extr = poly.extreme_points().unwrap();
    let mut rng = sample::rng(seed ^ 0x5f04);
    let mut extr_worst = 0.0f64;
    for _ in 0..1000 {
        let x = [rng.gen_range_f(-3.0, 3.0), rng.gen_range_f(-3.0, 3.0)];
        let via = extr
            .iter()
            .map(|p| {
                p.components()
                    .iter()
                    .zip(x.iter())
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
            })
            .fold(0.0f64, f64::max);
        let direct = poly.support_value(&x).unwrap();
        extr_worst = extr_worst.max((via - direct).abs() / (1.0 + direct.abs()));
    }
    checks.push(upper(
        "extreme-points-support",
        extr_worst,
        tol(t, "extreme-points-support", 1e-9),
    ));
    checks
}

fn potential_checks(seed: u64, t: &BTreeMap<String, f64>) -> Vec<CheckResult> {
    let mut checks = Vec::new();

    let mut rng = sample::rng(seed ^ 0xa101);
    let spec1 = PotentialSpec::smooth(ConvexBody::simplex(1));
    let samples1: Vec<Vec<Complex64>> = (0..4000)
        .map(|_| sample::complex_vector(&mut rng, 1, 1e-2, 1e6))
        .collect();
    let gap1 = potential::gap_bound_check(&spec1, &samples1).unwrap();
    let bound1 = 0.5 * 2.0f64.ln() * (1.0 + 1e-12);
    checks.push(upper("gap-bound-simplex-d1", gap1, tol(t, "gap-bound-simplex-d1", bound1)));

    let spec_sq = PotentialSpec::smooth(ConvexBody::unit_square());
    let samples2: Vec<Vec<Complex64>> = (0..4000)
        .map(|_| sample::complex_vector(&mut rng, 2, 1e-2, 1e6))
        .collect();
    let gap2 = potential::gap_bound_check(&spec_sq, &samples2).unwrap();
    let bound2 = 0.5 * 4.0f64.ln() * (1.0 + 1e-12);
    checks.push(upper("gap-bound-square", gap2, tol(t, "gap-bound-square", bound2)));

    let sq = ConvexBody::unit_square();
    let resolved = PotentialSpec::smooth(sq.clone()).resolve().unwrap();
    let mut split_worst = 0.0f64;
    for _ in 0..500 {
        let z = sample::complex_box(&mut rng, 2, -4.0, 4.0);
        let eps = 0.01 + 0.98 * rng.gen_range_f(0.0, 1.0);
        let (u, v) = potential::epsilon_split(&sq, eps, &z).unwrap();
        let rhs = (2.0 * resolved.eval(&z)).exp();
        split_worst = split_worst.max(((u + v) - rhs).abs() / rhs);
    }
    checks.push(upper("split-consistency", split_worst, tol(t, "split-consistency", 1e-12)));

    let mut torus_worst = 0.0f64;
    for _ in 0..500 {
        let z = sample::torus_point(&mut rng, 2);
        torus_worst = torus_worst.max(potential::indicator_h(&sq, &z).unwrap().abs());
    }
    checks.push(upper("torus-zero", torus_worst, tol(t, "torus-zero", 0.0)));

    let line = PotentialSpec::smooth(ConvexBody::simplex(1)).resolve().unwrap();
    let mut u0_worst = 0.0f64;
    for _ in 0..500 {
        let z = sample::complex_log_uniform(&mut rng, 1e-3, 1e3);
        let expected = 0.5 * (1.0 + z.norm_sqr()).ln();
        u0_worst = u0_worst.max((line.eval(&[z]) - expected).abs() / (1.0 + expected));
    }
    checks.push(upper("u0-closed-form-d1", u0_worst, tol(t, "u0-closed-form-d1", 1e-13)));

    // outer approximations: support sup-gap decreases through 16, 32, 64
    let ball = ConvexBody::lq_ball(2, 2.0).unwrap();
    let gap_at = |n: u32| {
        let pn = ball.outer_polytope_approximation(n).unwrap();
        let mut g = 0.0f64;
        for i in 0..2000 {
            let th = std::f64::consts::TAU * (i as f64 + 0.5) / 2000.0;
            let x = [th.cos(), th.sin()];
            g = g.max(pn.support_value(&x).unwrap() - ball.support_value(&x).unwrap());
        }
        g
    };
    let (g16, g32, g64) = (gap_at(16), gap_at(32), gap_at(64));
    let margin = (g16 - g32).min(g32 - g64);
    checks.push(lower("approx-gap-monotone", margin, tol(t, "approx-gap-monotone", 0.0)));
    checks
}

fn hessian_checks(seed: u64, t: &BTreeMap<String, f64>) -> Vec<CheckResult> {
    let mut checks = Vec::new();
    let mut rng = sample::rng(seed ^ 0xb201);

    let smooth = ScalarField::new(2, |z: &[Complex64]| {
        (1.0 + z[0].norm_sqr() + 0.5 * (z[0] * z[1].conj()).re + z[1].norm_sqr()).ln()
    });
    let mut asym_worst = 0.0f64;
    for _ in 0..50 {
        let z = sample::complex_box(&mut rng, 2, -2.0, 2.0);
        asym_worst = asym_worst.max(
            complex_hessian(&smooth, &z, default_step(&z))
                .unwrap()
                .raw_asymmetry(),
        );
    }
    checks.push(upper("hermitian-asymmetry", asym_worst, tol(t, "hermitian-asymmetry", 1e-9)));

    let u0 = ScalarField::new(1, |z: &[Complex64]| 0.5 * (1.0 + z[0].norm_sqr()).ln());
    let z = [Complex64::new(0.7, -0.2)];
    let s = z[0].norm_sqr();
    let exact = 0.5 / ((1.0 + s) * (1.0 + s));
    let err = |h: f64| (complex_hessian(&u0, &z, h).unwrap().entry(0, 0).re - exact).abs();
    let ratio = err(0.05) / err(0.025);
    checks.push(CheckResult {
        name: "fd-order".to_string(),
        passed: (3.5..=4.5).contains(&ratio),
        measured: ratio,
        bound: tol(t, "fd-order", 4.5),
    });

    let u0d2 = ScalarField::new(2, |z: &[Complex64]| {
        0.5 * (1.0 + z[0].norm_sqr() + z[1].norm_sqr()).ln()
    });
    let mut fd_worst = 0.0f64;
    for _ in 0..50 {
        let z = sample::complex_box(&mut rng, 2, -3.0, 3.0);
        let s = z[0].norm_sqr() + z[1].norm_sqr();
        let h = complex_hessian(&u0d2, &z, default_step(&z)).unwrap();
        for j in 0..2 {
            for k in 0..2 {
                let kron = if j == k { 1.0 } else { 0.0 };
                let exact = Complex64::new(kron / (2.0 * (1.0 + s)), 0.0)
                    - z[j].conj() * z[k] / (2.0 * (1.0 + s) * (1.0 + s));
                fd_worst = fd_worst.max((h.entry(j, k) - exact).norm() / (1.0 + exact.norm()));
            }
        }
    }
    checks.push(upper("u0-analytic-agreement", fd_worst, tol(t, "u0-analytic-agreement", 1e-6)));

    let u_sigma = ScalarField::from_potential(
        PotentialSpec::smooth(ConvexBody::simplex(2)).resolve().unwrap(),
    );
    let pts: Vec<Vec<Complex64>> = (0..100)
        .map(|_| sample::complex_box(&mut rng, 2, -7.0, 7.0))
        .collect();
    let rep = hessian::strict_psh_check(&u_sigma, &pts, None, 0.0).unwrap();
    checks.push(lower("strict-psh-simplex-d2", rep.min_eigenvalue, tol(t, "strict-psh-simplex-d2", 0.0)));

    let u_square = ScalarField::from_potential(
        PotentialSpec::smooth(ConvexBody::unit_square()).resolve().unwrap(),
    );
    let mut pts: Vec<Vec<Complex64>> = (0..80)
        .map(|_| sample::complex_box(&mut rng, 2, -7.0, 7.0))
        .collect();
    for k in 0..20 {
        // points on the coordinate axes, where the naive split degenerates
        let w = sample::complex_log_uniform(&mut rng, 0.1, 7.0);
        if k % 2 == 0 {
            pts.push(vec![w, Complex64::new(0.0, 0.0)]);
        } else {
            pts.push(vec![Complex64::new(0.0, 0.0), w]);
        }
    }
    let rep = hessian::strict_psh_check(&u_square, &pts, None, 0.0).unwrap();
    checks.push(lower("strict-psh-square-axes", rep.min_eigenvalue, tol(t, "strict-psh-square-axes", 0.0)));

    let ind = ScalarField::indicator(ConvexBody::simplex(2));
    let mut null_worst = 0.0f64;
    let mut accepted = 0;
    while accepted < 50 {
        let z = sample::complex_vector(&mut rng, 2, 0.3, 8.0);
        let (a, b) = (z[0].norm().ln().max(0.0), z[1].norm().ln().max(0.0));
        // keep clear of the corner loci where the max switches branch
        if (a - b).abs() < 0.1 || a.min(b) < 0.1 && a.max(b) < 0.1 {
            continue;
        }
        if (z[0].norm() - 1.0).abs() < 0.1 || (z[1].norm() - 1.0).abs() < 0.1 {
            continue;
        }
        accepted += 1;
        null_worst = null_worst.max(
            hessian::ma_density(&ind, &z, default_step(&z)).unwrap().abs(),
        );
    }
    checks.push(upper("indicator-ma-null", null_worst, tol(t, "indicator-ma-null", 1e-6)));
    checks
}

fn product_checks(seed: u64, t: &BTreeMap<String, f64>) -> Vec<CheckResult> {
    let mut checks = Vec::new();
    let mut rng = sample::rng(seed ^ 0xc301);

    let interval = PlanarSet::interval(-1.0, 1.0).unwrap();
    let cube = ProductSetSpec::new(vec![interval.clone(), interval.clone()]).unwrap();
    let torus = ProductSetSpec::new(vec![PlanarSet::circle(), PlanarSet::circle()]).unwrap();
    let disks = ProductSetSpec::new(vec![
        PlanarSet::disk(Complex64::new(0.1, 0.2), 0.8).unwrap(),
        PlanarSet::disk(Complex64::new(-0.3, 0.0), 1.2).unwrap(),
    ])
    .unwrap();
    let families = [&torus, &cube, &disks];

    let mut consistency = 0.0f64;
    for q in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
        let body = ConvexBody::lq_ball(2, q).unwrap();
        for sets in families {
            for _ in 0..1000 {
                let z = sample::complex_box(&mut rng, 2, -5.0, 5.0);
                let a = product::lq_closed_form(q, sets, &z).unwrap();
                let b = product::p_extremal(&body, sets, &z).unwrap();
                consistency = consistency.max((a - b).abs() / (1.0 + a));
            }
        }
    }
    checks.push(upper("closed-form-consistency", consistency, tol(t, "closed-form-consistency", 1e-10)));

    let body2 = ConvexBody::lq_ball(2, 2.0).unwrap();
    let mut zero_worst = 0.0f64;
    for _ in 0..500 {
        let x1: f64 = rng.gen_range_f(-1.0, 1.0);
        let th: f64 = rng.gen_range_f(0.0, std::f64::consts::TAU);
        let z = [
            Complex64::new(x1, 0.0),
            Complex64::new(th.cos(), th.sin()),
        ];
        let sets = ProductSetSpec::new(vec![interval.clone(), PlanarSet::circle()]).unwrap();
        zero_worst = zero_worst.max(product::p_extremal(&body2, &sets, &z).unwrap().abs());
    }
    checks.push(upper("zero-on-product-set", zero_worst, tol(t, "zero-on-product-set", 1e-12)));

    let mut torus_worst = 0.0f64;
    for body in [
        ConvexBody::simplex(2),
        ConvexBody::unit_square(),
        ConvexBody::lq_ball(2, 3.0).unwrap(),
    ] {
        for _ in 0..300 {
            let z = sample::complex_box(&mut rng, 2, -5.0, 5.0);
            let a = product::torus_extremal(&body, &z).unwrap();
            let b = potential::indicator_h(&body, &z).unwrap();
            let c_val = product::p_extremal(&body, &torus, &z).unwrap();
            torus_worst = torus_worst
                .max((a - b).abs())
                .max((a - c_val).abs() / (1.0 + a));
        }
    }
    checks.push(upper("torus-identity", torus_worst, tol(t, "torus-identity", 1e-13)));

    let mut mono_worst = 0.0f64;
    let (small, large) = (ConvexBody::simplex(2), ConvexBody::unit_square());
    for _ in 0..300 {
        let z = sample::complex_box(&mut rng, 2, -6.0, 6.0);
        mono_worst = mono_worst.max(
            product::p_extremal(&small, &cube, &z).unwrap()
                - product::p_extremal(&large, &cube, &z).unwrap(),
        );
    }
    checks.push(upper("body-monotonicity", mono_worst, tol(t, "body-monotonicity", 1e-12)));

    let mut gap_worst = 0.0f64;
    for _ in 0..1000 {
        let z = sample::complex_vector(&mut rng, 2, 1e2, 1e6);
        let v = product::p_extremal(&body2, &cube, &z).unwrap();
        let h = potential::indicator_h(&body2, &z).unwrap();
        gap_worst = gap_worst.max((v - h).abs());
    }
    checks.push(upper("growth-gap-bounded", gap_worst, tol(t, "growth-gap-bounded", 2.0)));
    checks
}

fn identities_checks(seed: u64, t: &BTreeMap<String, f64>) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();
    let mut rng = sample::rng(seed ^ 0xd401);

    let paraboloid = |c0: f64, c1: f64, a: Complex64| {
        ScalarField::new(1, move |z: &[Complex64]| c0 + c1 * (z[0] - a).norm_sqr())
    };

    let mut cross_rel = 0.0f64;
    let mut cross_lhs_min = f64::INFINITY;
    for _ in 0..2000 {
        let u = paraboloid(
            rng.gen_range_f(0.2, 3.0),
            rng.gen_range_f(0.1, 2.0),
            Complex64::new(rng.gen_range_f(-1.0, 1.0), rng.gen_range_f(-1.0, 1.0)),
        );
        let v = paraboloid(
            rng.gen_range_f(0.2, 3.0),
            rng.gen_range_f(0.0, 2.0),
            Complex64::new(rng.gen_range_f(-1.0, 1.0), rng.gen_range_f(-1.0, 1.0)),
        );
        let z = Complex64::new(rng.gen_range_f(-3.0, 3.0), rng.gen_range_f(-3.0, 3.0));
        let rep = cross_gradient_identity_check(&u, &v, z, 1e-4)?;
        cross_rel = cross_rel.max(rep.residual / (1.0 + rep.lhs.abs()));
        cross_lhs_min = cross_lhs_min.min(rep.lhs);
    }
    checks.push(upper("cross-gradient-residual", cross_rel, tol(t, "cross-gradient-residual", 1e-8)));
    checks.push(lower("cross-gradient-lhs-nonneg", cross_lhs_min, tol(t, "cross-gradient-lhs-nonneg", -1e-10)));

    let mut trio_min_suite = f64::INFINITY;
    for _ in 0..500 {
        // log u strictly subharmonic, log v subharmonic
        let u = paraboloid(
            rng.gen_range_f(0.2, 2.0),
            rng.gen_range_f(0.2, 2.0),
            Complex64::new(rng.gen_range_f(-1.0, 1.0), rng.gen_range_f(-1.0, 1.0)),
        );
        let v = paraboloid(
            rng.gen_range_f(0.1, 2.0),
            rng.gen_range_f(0.0, 2.0),
            Complex64::new(rng.gen_range_f(-1.0, 1.0), rng.gen_range_f(-1.0, 1.0)),
        );
        let z = Complex64::new(rng.gen_range_f(-2.0, 2.0), rng.gen_range_f(-2.0, 2.0));
        let rep = log_sum_laplacian_check(&u, &v, z, 1e-4)?;
        trio_min_suite = trio_min_suite
            .min(rep.numerator)
            .min(rep.extra_term)
            .min(rep.laplacian);
    }
    checks.push(lower("log-sum-laplacian-positivity", trio_min_suite, tol(t, "log-sum-laplacian-positivity", 0.0)));

    let interval = PlanarSet::interval(-1.0, 1.0).unwrap();
    let circle = PlanarSet::circle();
    let mut cf_worst = 0.0f64;
    for q in [1.5, 2.0, 3.0] {
        for set in [&interval, &circle] {
            let sets = ProductSetSpec::new(vec![set.clone(), set.clone()]).unwrap();
            let field = ScalarField::lq_form(q, sets);
            let mut accepted = 0;
            while accepted < 50 {
                let z = sample::complex_box(&mut rng, 2, -3.0, 3.0);
                if set.distance(z[0]) < 0.2 || set.distance(z[1]) < 0.2 {
                    continue;
                }
                if set.green_value(z[0]) < 0.05 || set.green_value(z[1]) < 0.05 {
                    continue; // disk/circle interiors: gradient route is 0
                }
                accepted += 1;
                let closed = product_hessian_closed_form(q, set, set, z[0], z[1])?;
                let fd = complex_hessian(&field, &z, default_step(&z))?;
                for j in 0..2 {
                    for k in 0..2 {
                        let (a, b) = (closed.entry(j, k), fd.entry(j, k));
                        cf_worst = cf_worst.max((a - b).norm() / (1.0 + a.norm()));
                    }
                }
            }
        }
    }
    checks.push(upper("product-hessian-closed-form", cf_worst, tol(t, "product-hessian-closed-form", 1e-4)));

    let body = ConvexBody::lq_ball(2, 2.0).unwrap();
    let sets = ProductSetSpec::new(vec![interval.clone(), interval]).unwrap();
    let grid = GridSpec::square(2, -3.0, 3.0, 9).unwrap();
    let scan = ma_vanishing_scan(&body, &sets, &grid, 1e-4, 1e-6)?;
    checks.push(upper("det-vanishing-mini", scan.max_abs_det, tol(t, "det-vanishing-mini", 1e-6)));
    Ok(checks)
}

/// Small extension so suite code reads uniformly.
trait RngRangeExt {
    fn gen_range_f(&mut self, lo: f64, hi: f64) -> f64;
}
impl RngRangeExt for rand_chacha::ChaCha8Rng {
    fn gen_range_f(&mut self, lo: f64, hi: f64) -> f64 {
        use rand::Rng;
        self.gen_range(lo..hi)
    }
}
