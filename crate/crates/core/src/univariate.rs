//! Closed-form Green functions (with pole at infinity) of model planar sets
//! and their equilibrium measures.
//!
//! The model families: a real interval `[a,b]`, a closed disk, and the unit
//! circle. All three are regular, so the extremal function needs no
//! upper-semicontinuous regularization. Values are normalized so the
//! function vanishes on the set and grows like `log|ζ|` at infinity; total
//! equilibrium mass is `2π` under the `Δ log|ζ| = 2π δ_0` convention.
//!
//! Interval values pull back to `[-1,1]` and use `log|t + sqrt(t^2-1)|`
//! with the branch fixed so `|t + sqrt(t^2-1)| >= 1`: take the principal
//! square root `s` and flip to `t - s` whenever `|t + s| < 1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::calculus::mass::{self, MassReport};
use crate::error::{Error, Result};
use crate::exec;
use crate::grid::GridSpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PlanarSet {
    Interval { a: f64, b: f64 },
    Disk { center: (f64, f64), r: f64 },
    Circle,
}

/// Region of a point relative to a set, with an exclusion collar of the
/// given margin around the non-smooth locus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetRegion {
    Inside,
    Outside,
    Collar,
}

/// Exterior inverse-Joukowski branch: `w = t ± sqrt(t^2-1)` with `|w| >= 1`.
fn joukowski_out(t: Complex64) -> Complex64 {
    let s = (t * t - Complex64::new(1.0, 0.0)).sqrt();
    let w = t + s;
    if w.norm() < 1.0 {
        t - s
    } else {
        w
    }
}

impl PlanarSet {
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(
                "interval endpoints must be finite and ordered".into(),
            ));
        }
        Ok(PlanarSet::Interval { a, b })
    }

    pub fn disk(center: Complex64, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::InvalidParameter("disk radius must be positive".into()));
        }
        Ok(PlanarSet::Disk {
            center: (center.re, center.im),
            r,
        })
    }

    pub fn circle() -> Self {
        PlanarSet::Circle
    }

    /// Euclidean distance to the set (0 on it).
    pub fn distance(&self, zeta: Complex64) -> f64 {
        match *self {
            PlanarSet::Interval { a, b } => {
                let x = zeta.re.clamp(a, b);
                (zeta - Complex64::new(x, 0.0)).norm()
            }
            PlanarSet::Disk { center, r } => {
                let d = (zeta - Complex64::new(center.0, center.1)).norm();
                (d - r).max(0.0)
            }
            PlanarSet::Circle => (zeta.norm() - 1.0).abs(),
        }
    }

    pub fn contains(&self, zeta: Complex64) -> bool {
        self.distance(zeta) <= 1e-12
    }

    /// Classify against the non-smooth locus of the Green function: the
    /// segment/circle itself and, for the disk, its boundary circle.
    pub fn region(&self, zeta: Complex64, margin: f64) -> SetRegion {
        match *self {
            PlanarSet::Interval { a, b } => {
                if zeta.im.abs() <= 1e-12
                    && zeta.re >= a + margin
                    && zeta.re <= b - margin
                {
                    SetRegion::Inside
                } else if self.distance(zeta) >= margin {
                    SetRegion::Outside
                } else {
                    SetRegion::Collar
                }
            }
            PlanarSet::Disk { center, r } => {
                let d = (zeta - Complex64::new(center.0, center.1)).norm();
                if d <= r - margin {
                    SetRegion::Inside
                } else if d >= r + margin {
                    SetRegion::Outside
                } else {
                    SetRegion::Collar
                }
            }
            PlanarSet::Circle => {
                let d = (zeta.norm() - 1.0).abs();
                if d <= 1e-12 {
                    SetRegion::Inside
                } else if d >= margin {
                    SetRegion::Outside
                } else {
                    SetRegion::Collar
                }
            }
        }
    }

    /// Bounding box `(x_lo, x_hi, y_lo, y_hi)` of the set.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        match *self {
            PlanarSet::Interval { a, b } => (a, b, 0.0, 0.0),
            PlanarSet::Disk { center, r } => {
                (center.0 - r, center.0 + r, center.1 - r, center.1 + r)
            }
            PlanarSet::Circle => (-1.0, 1.0, -1.0, 1.0),
        }
    }

    /// Green function value; `>= 0`, zero exactly on the set.
    pub fn green_value(&self, zeta: Complex64) -> f64 {
        match *self {
            PlanarSet::Interval { a, b } => {
                let t = (zeta * 2.0 - Complex64::new(a + b, 0.0)) / (b - a);
                joukowski_out(t).norm().ln().max(0.0)
            }
            PlanarSet::Disk { center, r } => {
                let m = (zeta - Complex64::new(center.0, center.1)).norm() / r;
                if m <= 1.0 {
                    0.0
                } else {
                    m.ln()
                }
            }
            PlanarSet::Circle => {
                let m = zeta.norm();
                if m <= 1.0 {
                    0.0
                } else {
                    m.ln()
                }
            }
        }
    }

    /// Wirtinger derivative `∂V/∂ζ`, analytic closed forms. Points on the
    /// non-smooth locus error; deep inside a disk the gradient is plain 0.
    pub fn green_gradient(&self, zeta: Complex64) -> Result<Complex64> {
        const EDGE: f64 = 1e-12;
        match *self {
            PlanarSet::Interval { a, b } => {
                if self.distance(zeta) <= EDGE {
                    return Err(Error::NotDifferentiableHere);
                }
                let t = (zeta * 2.0 - Complex64::new(a + b, 0.0)) / (b - a);
                let s = (t * t - Complex64::new(1.0, 0.0)).sqrt();
                let sigma = if (t + s).norm() < 1.0 { -s } else { s };
                Ok(Complex64::new(1.0, 0.0) / (sigma * (b - a)))
            }
            PlanarSet::Disk { center, r } => {
                let w = zeta - Complex64::new(center.0, center.1);
                let d = w.norm();
                if (d - r).abs() <= EDGE {
                    return Err(Error::NotDifferentiableHere);
                }
                if d < r {
                    Ok(Complex64::new(0.0, 0.0))
                } else {
                    Ok(Complex64::new(0.5, 0.0) / w)
                }
            }
            PlanarSet::Circle => {
                let d = zeta.norm();
                if (d - 1.0).abs() <= EDGE {
                    return Err(Error::NotDifferentiableHere);
                }
                if d < 1.0 {
                    Ok(Complex64::new(0.0, 0.0))
                } else {
                    Ok(Complex64::new(0.5, 0.0) / zeta)
                }
            }
        }
    }

    /// Total mass of the distributional Laplacian of the Green function,
    /// estimated on the grid after Gaussian mollification of the sampled
    /// values. Converges to `2π`.
    pub fn equilibrium_mass(&self, grid: &GridSpec, smoothing: f64) -> Result<MassReport> {
        if grid.dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: grid.dim(),
            });
        }
        let step = grid.step()?;
        if step > smoothing / 2.0 {
            return Err(Error::GridTooCoarse {
                step,
                limit: smoothing / 2.0,
            });
        }
        let (x_lo, x_hi, y_lo, y_hi) = self.bounding_box();
        let m = 5.0 * smoothing;
        let axis = &grid.axes[0];
        if axis.x.0 > x_lo - m || axis.x.1 < x_hi + m || axis.y.0 > y_lo - m || axis.y.1 < y_hi + m
        {
            return Err(Error::GridMarginTooSmall {
                required: m,
                axis_note: format!(
                    "set box [{x_lo},{x_hi}]x[{y_lo},{y_hi}] vs grid [{},{}]x[{},{}]",
                    axis.x.0, axis.x.1, axis.y.0, axis.y.1
                ),
            });
        }
        let set = self.clone();
        mass::laplacian_mass(
            &move |z: Complex64| set.green_value(z),
            grid,
            smoothing,
            exec::default_mode(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::AxisSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn chebyshev() -> PlanarSet {
        PlanarSet::interval(-1.0, 1.0).unwrap()
    }

    #[test]
    fn green_examples() {
        assert_eq!(chebyshev().green_value(c(0.0, 0.0)), 0.0);
        let v = chebyshev().green_value(c(2.0, 0.0));
        assert!((v - (2.0 + 3.0_f64.sqrt()).ln()).abs() < 1e-14);
        assert!((v - 1.3169578969248166).abs() < 1e-12);
        assert!((PlanarSet::circle().green_value(c(2.0, 0.0)) - 2.0_f64.ln()).abs() < 1e-15);
        let disk = PlanarSet::disk(c(0.0, 0.0), 1.0).unwrap();
        assert_eq!(disk.green_value(c(0.5, 0.0)), 0.0);
    }

    #[test]
    fn gradient_examples() {
        let g = PlanarSet::circle().green_gradient(c(2.0, 0.0)).unwrap();
        assert!((g - c(0.25, 0.0)).norm() < 1e-15);

        // interval gradient against central finite differences
        let set = chebyshev();
        let z = c(2.0, 0.0);
        let g = set.green_gradient(z).unwrap();
        let h = 1e-5;
        let vx = (set.green_value(z + c(h, 0.0)) - set.green_value(z - c(h, 0.0))) / (2.0 * h);
        let vy = (set.green_value(z + c(0.0, h)) - set.green_value(z - c(0.0, h))) / (2.0 * h);
        let fd = c(0.5 * vx, -0.5 * vy);
        assert!((g - fd).norm() <= 1e-6 * g.norm(), "{g} vs {fd}");

        // disk interior: zero gradient, not an error
        let disk = PlanarSet::disk(c(0.0, 0.0), 1.0).unwrap();
        assert_eq!(disk.green_gradient(c(0.5, 0.0)).unwrap(), c(0.0, 0.0));
        assert!(matches!(
            disk.green_gradient(c(1.0, 0.0)),
            Err(Error::NotDifferentiableHere)
        ));
        assert!(matches!(
            chebyshev().green_gradient(c(0.3, 0.0)),
            Err(Error::NotDifferentiableHere)
        ));
    }

    #[test]
    fn gradient_matches_fd_away_from_sets() {
        let sets = [
            chebyshev(),
            PlanarSet::disk(c(0.3, -0.2), 0.8).unwrap(),
            PlanarSet::circle(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for set in &sets {
            let mut done = 0;
            while done < 200 {
                let z = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
                if set.distance(z) < 0.1 {
                    continue;
                }
                // skip disk interiors: gradient 0, fd 0, ratio undefined
                let g = set.green_gradient(z).unwrap();
                if g.norm() == 0.0 {
                    continue;
                }
                done += 1;
                let h = 1e-5 * (1.0 + z.norm());
                let vx =
                    (set.green_value(z + c(h, 0.0)) - set.green_value(z - c(h, 0.0))) / (2.0 * h);
                let vy =
                    (set.green_value(z + c(0.0, h)) - set.green_value(z - c(0.0, h))) / (2.0 * h);
                let fd = c(0.5 * vx, -0.5 * vy);
                assert!((g - fd).norm() <= 1e-6 * g.norm().max(1e-12), "{set:?} {z}");
            }
        }
    }

    #[test]
    fn branch_modulus_at_least_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100_000 {
            let t = c(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
            assert!(joukowski_out(t).norm() >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn nonnegative_and_zero_on_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let interval = chebyshev();
        for _ in 0..1000 {
            let z = c(rng.gen_range(-1.0..1.0), 0.0);
            assert!(interval.green_value(z).abs() <= 1e-12);
        }
        let disk = PlanarSet::disk(c(0.1, 0.1), 0.5).unwrap();
        for _ in 0..1000 {
            let r: f64 = rng.gen_range(0.0..0.5);
            let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let z = c(0.1 + r * th.cos(), 0.1 + r * th.sin());
            assert_eq!(disk.green_value(z), 0.0);
        }
        for _ in 0..1000 {
            let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            assert_eq!(PlanarSet::circle().green_value(c(th.cos(), th.sin())), 0.0);
        }
    }

    #[test]
    fn logarithmic_growth() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let sets = [
            chebyshev(),
            PlanarSet::disk(c(0.0, 0.0), 1.0).unwrap(),
            PlanarSet::circle(),
        ];
        let r = 1e4;
        for set in &sets {
            for _ in 0..10 {
                let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let w = c(th.cos(), th.sin());
                let a = set.green_value(w * r) - r.ln();
                let b = set.green_value(w * (2.0 * r)) - (2.0 * r).ln();
                assert!((a - b).abs() <= 1e-3, "{set:?}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn interval_symmetries_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let set = chebyshev();
        for _ in 0..1000 {
            let z = c(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
            let v = set.green_value(z);
            assert_eq!(v, set.green_value(-z));
            assert_eq!(v, set.green_value(z.conj()));
        }
    }

    #[test]
    fn equilibrium_masses_near_two_pi() {
        let step = 1.0 / 128.0;
        let smoothing = 4.0 * step;
        let two_pi = std::f64::consts::TAU;

        let interval = chebyshev();
        let nx = (2.4 / step) as usize + 1;
        let ny = (0.5 / step) as usize + 1;
        let grid = GridSpec::new(vec![AxisSpec::new(
            (-1.2, -1.2 + step * (nx - 1) as f64),
            (-0.25, -0.25 + step * (ny - 1) as f64),
            nx,
            ny,
        )
        .unwrap()])
        .unwrap();
        let report = interval.equilibrium_mass(&grid, smoothing).unwrap();
        assert!(
            (report.total - two_pi).abs() <= 0.02 * two_pi,
            "interval mass {}",
            report.total
        );

        let n = (3.0 / step) as usize + 1;
        let grid = GridSpec::new(vec![AxisSpec::new(
            (-1.5, -1.5 + step * (n - 1) as f64),
            (-1.5, -1.5 + step * (n - 1) as f64),
            n,
            n,
        )
        .unwrap()])
        .unwrap();
        for set in [
            PlanarSet::circle(),
            PlanarSet::disk(c(0.0, 0.0), 1.0).unwrap(),
        ] {
            let report = set.equilibrium_mass(&grid, smoothing).unwrap();
            assert!(
                (report.total - two_pi).abs() <= 0.02 * two_pi,
                "{set:?} mass {}",
                report.total
            );
        }
    }

    #[test]
    fn equilibrium_mass_error_paths() {
        let set = PlanarSet::circle();
        let grid = GridSpec::square(1, -1.5, 1.5, 65).unwrap();
        // step ~ 0.047 > smoothing/2 with smoothing 0.05
        assert!(matches!(
            set.equilibrium_mass(&grid, 0.05),
            Err(Error::GridTooCoarse { .. })
        ));
        // margin too small: window barely covers the circle
        let tight = GridSpec::square(1, -1.05, 1.05, 129).unwrap();
        assert!(matches!(
            set.equilibrium_mass(&tight, 0.1),
            Err(Error::GridMarginTooSmall { .. })
        ));
    }
}
