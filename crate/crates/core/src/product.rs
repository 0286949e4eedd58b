//! Extremal functions of product sets: the support function of the body
//! composed with the factor Green functions,
//!
//! ```text
//! V_{P, E_1 x ... x E_d}(z) = phi_P(V_{E_1}(z_1), ..., V_{E_d}(z_d)).
//! ```
//!
//! For `l^q` bodies this collapses to the `l^{q'}` norm of the factor
//! values; [`lq_closed_form`] computes that norm directly (explicit max and
//! sum branches at `q = 1` and `q = inf`) as an independent route against
//! [`p_extremal`] with the `l^q` body.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::body::{dual_exponent, ConvexBody};
use crate::error::{Error, Result};
use crate::potential;
use crate::univariate::PlanarSet;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductSetSpec {
    pub factors: Vec<PlanarSet>,
}

impl ProductSetSpec {
    pub fn new(factors: Vec<PlanarSet>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter(
                "product set needs at least one factor".into(),
            ));
        }
        Ok(ProductSetSpec { factors })
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    /// All factors contain their coordinate: the zero set of the extremal
    /// function.
    pub fn contains(&self, z: &[Complex64]) -> bool {
        self.factors
            .iter()
            .zip(z.iter())
            .all(|(s, &w)| s.contains(w))
    }
}

/// `phi_P` applied to the factor Green values. Zero exactly on the product
/// set; requires the body to satisfy the cone condition for the growth
/// statements to hold.
pub fn p_extremal(body: &ConvexBody, sets: &ProductSetSpec, z: &[Complex64]) -> Result<f64> {
    if sets.dim() != body.dim() || z.len() != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: if sets.dim() != body.dim() {
                sets.dim()
            } else {
                z.len()
            },
        });
    }
    let greens: Vec<f64> = sets
        .factors
        .iter()
        .zip(z.iter())
        .map(|(s, &w)| s.green_value(w))
        .collect();
    body.support_value(&greens)
}

/// Extremal function of the unit torus: coincides with the logarithmic
/// indicator `H_P` (each circle factor contributes `log+|z_j|`).
pub fn torus_extremal(body: &ConvexBody, z: &[Complex64]) -> Result<f64> {
    potential::indicator_h(body, z)
}

/// `[V_{E_1}(z_1)^{q'} + ... + V_{E_d}(z_d)^{q'}]^{1/q'}`, with the max
/// branch at `q = 1` and the sum branch at `q = inf`.
pub fn lq_closed_form(q: f64, sets: &ProductSetSpec, z: &[Complex64]) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(Error::InvalidParameter(format!("q must be >= 1, got {q}")));
    }
    if z.len() != sets.dim() {
        return Err(Error::DimensionMismatch {
            expected: sets.dim(),
            got: z.len(),
        });
    }
    let values: Vec<f64> = sets
        .factors
        .iter()
        .zip(z.iter())
        .map(|(s, &w)| s.green_value(w))
        .collect();
    if q == 1.0 {
        return Ok(values.into_iter().fold(0.0, f64::max));
    }
    if q.is_infinite() {
        return Ok(values.into_iter().sum());
    }
    let p = dual_exponent(q);
    let m = values.iter().cloned().fold(0.0, f64::max);
    if m == 0.0 {
        return Ok(0.0);
    }
    let s: f64 = values.iter().map(|v| (v / m).powf(p)).sum();
    Ok(m * s.powf(1.0 / p))
}
