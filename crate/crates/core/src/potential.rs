//! The logarithmic indicator `H_P` and the smooth potential `u_P`.
//!
//! For a polytope `P` with extreme points `Extr(P)` (origin omitted),
//!
//! ```text
//! H_P(z) = phi_P(log+|z_1|, ..., log+|z_d|)
//! u_P(z) = 1/2 log(1 + sum_{J in Extr(P)} |z^J|^2)
//! ```
//!
//! `u_P` is smooth, strictly plurisubharmonic, and stays within
//! `1/2 log(1 + #Extr(P))` of `H_P` (log-sum-exp against max). Non-polytope
//! bodies are resolved through an outer polytope approximation first.
//!
//! `H_P` is canonically defined through clipped logarithms `log+`; the
//! unclipped variant (plain `log`, with `0 * log 0 = 0`) is exposed as
//! [`indicator_h_unclipped`] for comparison. The two agree on lower-set-like
//! bodies and differ when an extreme point sits strictly inside the orthant.
//!
//! Moduli are taken in log space once monomial values could overflow
//! (total exponent times log-modulus beyond [`LOG_SPACE_THRESHOLD`]),
//! re-exponentiated inside a log-sum-exp form; otherwise the direct product
//! formula is used.

use num_complex::Complex64;

use crate::body::{ConvexBody, MultiIndex};
use crate::error::{Error, Result};

/// Default outer-approximation level used to resolve `l^q` bodies.
pub const DEFAULT_APPROX_LEVEL: u32 = 64;

/// Switch to log-sum-exp once `2 * max_J(sum j_k) * max log+|z_k|` exceeds
/// this (direct squared monomials stay far below f64 overflow under it).
pub const LOG_SPACE_THRESHOLD: f64 = 600.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PotentialVariant {
    /// `H_P`
    Indicator,
    /// `u_P`
    SmoothPotential,
    /// first component of the epsilon split
    EpsilonSplitU,
    /// second component of the epsilon split
    EpsilonSplitV,
}

/// Declarative description of a potential evaluation; resolve once, then
/// evaluate many times.
#[derive(Clone, Debug)]
pub struct PotentialSpec {
    pub body: ConvexBody,
    pub variant: PotentialVariant,
    pub epsilon: Option<f64>,
    pub approx_level: Option<u32>,
}

impl PotentialSpec {
    pub fn smooth(body: ConvexBody) -> Self {
        PotentialSpec {
            body,
            variant: PotentialVariant::SmoothPotential,
            epsilon: None,
            approx_level: None,
        }
    }

    pub fn smooth_at_level(body: ConvexBody, level: u32) -> Self {
        PotentialSpec {
            approx_level: Some(level),
            ..PotentialSpec::smooth(body)
        }
    }

    pub fn resolve(&self) -> Result<ResolvedPotential> {
        let split = matches!(
            self.variant,
            PotentialVariant::EpsilonSplitU | PotentialVariant::EpsilonSplitV
        );
        if split != self.epsilon.is_some() {
            return Err(Error::InvalidParameter(
                "epsilon must be present exactly for the epsilon-split variants".into(),
            ));
        }
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "epsilon must lie in (0,1), got {eps}"
                )));
            }
        }
        let body = if self.body.is_polytope() || self.variant == PotentialVariant::Indicator
        {
            // the indicator needs no extreme points; keep the exact body
            self.body.clone()
        } else {
            let level = self.approx_level.unwrap_or(DEFAULT_APPROX_LEVEL);
            self.body.outer_polytope_approximation(level)?
        };
        let (terms, axis) = if body.is_polytope() {
            let terms = body.extreme_points()?;
            let axis = if split {
                body.axis_intercepts()?
            } else {
                Vec::new()
            };
            (terms, axis)
        } else {
            (Vec::new(), Vec::new())
        };
        let max_total_exponent = terms
            .iter()
            .map(|j| j.components().iter().sum::<f64>())
            .fold(0.0, f64::max);
        Ok(ResolvedPotential {
            body,
            variant: self.variant,
            epsilon: self.epsilon.unwrap_or(0.0),
            terms,
            axis,
            max_total_exponent,
        })
    }
}

/// A potential with its extreme-point data precomputed.
#[derive(Clone, Debug)]
pub struct ResolvedPotential {
    body: ConvexBody,
    variant: PotentialVariant,
    epsilon: f64,
    terms: Vec<MultiIndex>,
    axis: Vec<f64>,
    max_total_exponent: f64,
}

impl ResolvedPotential {
    pub fn body(&self) -> &ConvexBody {
        &self.body
    }

    pub fn extreme_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[MultiIndex] {
        &self.terms
    }

    /// Evaluate the resolved variant. Panics on dimension mismatch (the
    /// callable is hot; validate dimensions at spec resolution sites).
    pub fn eval(&self, z: &[Complex64]) -> f64 {
        assert_eq!(z.len(), self.body.dim(), "dimension mismatch");
        match self.variant {
            PotentialVariant::Indicator => indicator_h(&self.body, z).expect("dim checked"),
            PotentialVariant::SmoothPotential => self.smooth_value(z),
            PotentialVariant::EpsilonSplitU => self.split_values(z).0,
            PotentialVariant::EpsilonSplitV => self.split_values(z).1,
        }
    }

    /// `1/2 log(1 + sum |z^J|^2)` over the resolved extreme points.
    pub fn smooth_value(&self, z: &[Complex64]) -> f64 {
        let log_scale: f64 = z
            .iter()
            .map(|w| w.norm().max(1.0).ln())
            .fold(0.0, f64::max);
        if 2.0 * self.max_total_exponent * log_scale <= LOG_SPACE_THRESHOLD {
            let sum: f64 = self
                .terms
                .iter()
                .map(|j| {
                    let m = monomial_modulus(j, z);
                    m * m
                })
                .sum();
            0.5 * sum.ln_1p()
        } else {
            // log-sum-exp over log(|z^J|^2) and the constant term log 1 = 0
            let logs: Vec<f64> = self
                .terms
                .iter()
                .map(|j| log_squared_monomial_modulus(j, z))
                .collect();
            let m = logs.iter().cloned().fold(0.0_f64, f64::max);
            let sum: f64 = (-m).exp()
                + logs
                    .iter()
                    .filter(|l| l.is_finite())
                    .map(|l| (l - m).exp())
                    .sum::<f64>();
            0.5 * (m + sum.ln())
        }
    }

    fn split_values(&self, z: &[Complex64]) -> (f64, f64) {
        let total: f64 = self
            .terms
            .iter()
            .map(|j| {
                let m = monomial_modulus(j, z);
                m * m
            })
            .sum();
        let axis_sq: f64 = self
            .axis
            .iter()
            .zip(z.iter())
            .map(|(&a, w)| w.norm().powf(a).powi(2))
            .sum();
        let keep = 1.0 - self.epsilon;
        (1.0 + keep * axis_sq, total - keep * axis_sq)
    }
}

/// `|z^J| = prod |z_k|^{j_k}` with `0^0 = 1`.
pub fn monomial_modulus(j: &MultiIndex, z: &[Complex64]) -> f64 {
    j.components()
        .iter()
        .zip(z.iter())
        .map(|(&jk, w)| w.norm().powf(jk))
        .product()
}

/// `log(|z^J|^2)`; `-inf` when some modulus vanishes against a positive
/// exponent, and exactly 0 for the empty product.
pub fn log_squared_monomial_modulus(j: &MultiIndex, z: &[Complex64]) -> f64 {
    let mut acc = 0.0;
    for (&jk, w) in j.components().iter().zip(z.iter()) {
        if jk != 0.0 {
            let m = w.norm();
            if m == 0.0 {
                return f64::NEG_INFINITY;
            }
            acc += jk * m.ln();
        }
    }
    2.0 * acc
}

/// Canonical logarithmic indicator `phi_P(log+|z_1|, ..., log+|z_d|)`.
pub fn indicator_h(body: &ConvexBody, z: &[Complex64]) -> Result<f64> {
    let x: Vec<f64> = z
        .iter()
        .map(|w| {
            let m = w.norm();
            if m <= 1.0 {
                0.0
            } else {
                m.ln()
            }
        })
        .collect();
    body.support_value(&x)
}

/// Unclipped variant `phi_P(log|z_1|, ..., log|z_d|)`; `log 0` enters as
/// `-inf` and is neutralized by zero exponents.
pub fn indicator_h_unclipped(body: &ConvexBody, z: &[Complex64]) -> Result<f64> {
    let x: Vec<f64> = z.iter().map(|w| w.norm().ln()).collect();
    body.support_value(&x)
}

/// Convenience wrapper: resolve and evaluate `u_P` once.
pub fn potential_u(spec: &PotentialSpec, z: &[Complex64]) -> Result<f64> {
    let resolved = PotentialSpec {
        variant: PotentialVariant::SmoothPotential,
        epsilon: None,
        ..spec.clone()
    }
    .resolve()?;
    if z.len() != resolved.body.dim() {
        return Err(Error::DimensionMismatch {
            expected: resolved.body.dim(),
            got: z.len(),
        });
    }
    Ok(resolved.smooth_value(z))
}

/// Max of `|u_P - H_P|` over the samples. Both functions are evaluated on
/// the resolved polytope, so the `1/2 log(1+m)` bound applies with
/// `m = extreme_count()`.
pub fn gap_bound_check(spec: &PotentialSpec, samples: &[Vec<Complex64>]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let resolved = PotentialSpec {
        variant: PotentialVariant::SmoothPotential,
        epsilon: None,
        ..spec.clone()
    }
    .resolve()?;
    let mut max_gap = 0.0_f64;
    for z in samples {
        if z.len() != resolved.body.dim() {
            return Err(Error::DimensionMismatch {
                expected: resolved.body.dim(),
                got: z.len(),
            });
        }
        let u = resolved.smooth_value(z);
        let h = indicator_h(&resolved.body, z)?;
        max_gap = max_gap.max((u - h).abs());
    }
    Ok(max_gap)
}

/// The epsilon split `(u_eps, v_eps)` with
/// `u_eps + v_eps = 1 + sum_{J in Extr(P)} |z^J|^2 = exp(2 u_P)`.
pub fn epsilon_split(
    body: &ConvexBody,
    epsilon: f64,
    z: &[Complex64],
) -> Result<(f64, f64)> {
    if !body.is_polytope() {
        return Err(Error::UnsupportedKind("epsilon split requires a polytope"));
    }
    if z.len() != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: z.len(),
        });
    }
    let resolved = PotentialSpec {
        body: body.clone(),
        variant: PotentialVariant::EpsilonSplitU,
        epsilon: Some(epsilon),
        approx_level: None,
    }
    .resolve()?;
    Ok(resolved.split_values(z))
}
