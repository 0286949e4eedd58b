//! Rectangular sampling grids in `C^d`.
//!
//! Each complex axis carries independent real and imaginary windows and
//! point counts. Flattened ("row-major") order runs the real coordinates as
//! `(x_1, y_1, x_2, y_2, ...)` with the last one fastest.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    /// Real window `[lo, hi]`.
    pub x: (f64, f64),
    /// Imaginary window `[lo, hi]`.
    pub y: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl AxisSpec {
    pub fn new(x: (f64, f64), y: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidParameter("grid counts must be >= 2".into()));
        }
        if !(x.0 < x.1) || !(y.0 < y.1) {
            return Err(Error::InvalidParameter("grid ranges must be ordered".into()));
        }
        Ok(AxisSpec { x, y, nx, ny })
    }

    pub fn square(lo: f64, hi: f64, n: usize) -> Result<Self> {
        AxisSpec::new((lo, hi), (lo, hi), n, n)
    }

    pub fn step_x(&self) -> f64 {
        (self.x.1 - self.x.0) / (self.nx - 1) as f64
    }

    pub fn step_y(&self) -> f64 {
        (self.y.1 - self.y.0) / (self.ny - 1) as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub axes: Vec<AxisSpec>,
}

impl GridSpec {
    pub fn new(axes: Vec<AxisSpec>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidParameter("grid needs at least one axis".into()));
        }
        Ok(GridSpec { axes })
    }

    /// Square window `[lo,hi] x [lo,hi]` with `n` points per real axis, on
    /// every complex axis.
    pub fn square(dim: usize, lo: f64, hi: f64, n: usize) -> Result<Self> {
        let axis = AxisSpec::square(lo, hi, n)?;
        GridSpec::new(vec![axis; dim])
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// The common step shared by every real axis; integration and
    /// finite-difference routines require uniformity.
    pub fn step(&self) -> Result<f64> {
        let s = self.axes[0].step_x();
        for a in &self.axes {
            for t in [a.step_x(), a.step_y()] {
                if (t - s).abs() > 1e-9 * s.max(t) {
                    return Err(Error::InvalidParameter(format!(
                        "grid step must be uniform across axes ({t} vs {s})"
                    )));
                }
            }
        }
        Ok(s)
    }

    pub fn total_points(&self) -> usize {
        self.axes.iter().map(|a| a.nx * a.ny).product()
    }

    /// Sizes of the flattened index, slowest first: `nx_1, ny_1, nx_2, ...`.
    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().flat_map(|a| [a.nx, a.ny]).collect()
    }

    /// Point of the flattened index (last real coordinate fastest).
    pub fn point(&self, flat: usize) -> Vec<Complex64> {
        let shape = self.shape();
        let mut idx = vec![0usize; shape.len()];
        let mut rest = flat;
        for k in (0..shape.len()).rev() {
            idx[k] = rest % shape[k];
            rest /= shape[k];
        }
        self.axes
            .iter()
            .enumerate()
            .map(|(j, a)| {
                Complex64::new(
                    a.x.0 + idx[2 * j] as f64 * a.step_x(),
                    a.y.0 + idx[2 * j + 1] as f64 * a.step_y(),
                )
            })
            .collect()
    }
}
