//! Grid scans: Monge-Ampere determinant vanishing off a product set, and
//! mass-support exploration for smooth `l^q` compositions.

use num_complex::Complex64;

use crate::body::ConvexBody;
use crate::calculus::hessian::complex_hessian;
use crate::calculus::mass::{self, MassReport};
use crate::error::{Error, Result};
use crate::exec;
use crate::field::ScalarField;
use crate::grid::GridSpec;
use crate::product::ProductSetSpec;
use crate::univariate::SetRegion;

/// Off-set region types scanned by [`ma_vanishing_scan`].
pub const REGION_LABELS: [&str; 3] = ["both-outside", "z-in-w-out", "z-out-w-in"];

#[derive(Clone, Debug)]
pub struct ScanReport {
    /// Largest `|det H|` over all scanned points.
    pub max_abs_det: f64,
    /// Point attaining it.
    pub location: Vec<Complex64>,
    /// Largest `|det H|` per region type, [`REGION_LABELS`] order.
    pub max_by_region: [f64; 3],
    /// Points scanned per region type.
    pub counts: [usize; 3],
    /// Points excluded by the collar around set boundaries.
    pub excluded: usize,
}

/// Scan `|det H|` of the extremal function of a product of two planar sets
/// over every grid point outside the product set, excluding a collar of
/// `5h` around set boundaries. For smooth bodies (`q > 1`) the determinant
/// vanishes off the product set; the report carries the worst violation.
pub fn ma_vanishing_scan(
    body: &ConvexBody,
    sets: &ProductSetSpec,
    grid: &GridSpec,
    h: f64,
    _tol: f64,
) -> Result<ScanReport> {
    let Some(q) = body.lq_exponent() else {
        return Err(Error::NotSmoothBody);
    };
    if q <= 1.0 {
        return Err(Error::NotSmoothBody);
    }
    if sets.factors.len() != 2 || grid.dim() != 2 || body.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: sets.factors.len().min(grid.dim()),
        });
    }
    // the composed field is evaluated straddling the factor sets at in-set
    // points; the collar logic below owns the trust decision, not the
    // field's own smoothness predicate
    let field = ScalarField::lq_form(q, sets.clone()).without_smooth_region();
    let margin = 5.0 * h;
    let (e_set, f_set) = (&sets.factors[0], &sets.factors[1]);

    let n = grid.total_points();
    struct Hit {
        region: usize,
        det: f64,
        point: Vec<Complex64>,
    }
    let results: Vec<Option<Hit>> = exec::map_indexed(n, exec::default_mode(), |i| {
        let z = grid.point(i);
        let r1 = e_set.region(z[0], margin);
        let r2 = f_set.region(z[1], margin);
        let region = match (r1, r2) {
            (SetRegion::Collar, _) | (_, SetRegion::Collar) => return None,
            (SetRegion::Inside, SetRegion::Inside) => return None, // inside E x F
            (SetRegion::Outside, SetRegion::Outside) => 0,
            (SetRegion::Inside, SetRegion::Outside) => 1,
            (SetRegion::Outside, SetRegion::Inside) => 2,
        };
        let det = complex_hessian(&field, &z, h)
            .expect("field has no smoothness predicate")
            .det();
        Some(Hit {
            region,
            det: det.abs(),
            point: z,
        })
    });

    let mut report = ScanReport {
        max_abs_det: 0.0,
        location: Vec::new(),
        max_by_region: [0.0; 3],
        counts: [0; 3],
        excluded: 0,
    };
    for r in results {
        match r {
            None => report.excluded += 1,
            Some(hit) => {
                report.counts[hit.region] += 1;
                if hit.det > report.max_by_region[hit.region] {
                    report.max_by_region[hit.region] = hit.det;
                }
                if hit.det > report.max_abs_det {
                    report.max_abs_det = hit.det;
                    report.location = hit.point;
                }
            }
        }
    }
    if report.counts.iter().all(|&c| c == 0) {
        return Err(Error::PreconditionViolated(
            "grid is entirely inside the product set (or its collar)".into(),
        ));
    }
    Ok(report)
}

/// Monge-Ampere mass heatmap of the `l^{q'}` composition over a
/// neighborhood of the product set, with the fraction of mass within
/// `3 * smoothing` of it. Exploratory output: no claim is made that the
/// reported support neighborhood is the true support.
pub fn support_explore(
    q: f64,
    sets: &ProductSetSpec,
    grid: &GridSpec,
    smoothing: f64,
) -> Result<MassReport> {
    if !(q > 1.0) {
        // the q = 1 composition is a max, not smooth; measure it through
        // ma_mass on the max-form directly
        return Err(Error::NotSmoothBody);
    }
    if sets.factors.len() != 2 || grid.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: sets.factors.len().min(grid.dim()),
        });
    }
    let field = ScalarField::lq_form(q, sets.clone()).without_smooth_region();
    let (e_set, f_set) = (sets.factors[0].clone(), sets.factors[1].clone());
    let dist = move |z: &[Complex64]| {
        let d1 = e_set.distance(z[0]);
        let d2 = f_set.distance(z[1]);
        d1.hypot(d2)
    };
    mass::monge_ampere_mass_2c(
        &|z| field.eval(z),
        grid,
        smoothing,
        exec::default_mode(),
        Some((&dist, 3.0 * smoothing)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::univariate::PlanarSet;

    fn cube_sets() -> ProductSetSpec {
        let i = PlanarSet::interval(-1.0, 1.0).unwrap();
        ProductSetSpec::new(vec![i.clone(), i]).unwrap()
    }

    #[test]
    fn scan_rejects_non_smooth_bodies() {
        let grid = GridSpec::square(2, -3.0, 3.0, 9).unwrap();
        let sigma_ball = ConvexBody::lq_ball(2, 1.0).unwrap();
        assert!(matches!(
            ma_vanishing_scan(&sigma_ball, &cube_sets(), &grid, 1e-4, 1e-6),
            Err(Error::NotSmoothBody)
        ));
        let polytope = ConvexBody::simplex(2);
        assert!(matches!(
            ma_vanishing_scan(&polytope, &cube_sets(), &grid, 1e-4, 1e-6),
            Err(Error::NotSmoothBody)
        ));
    }

    #[test]
    fn scan_on_cube_finds_vanishing_determinant() {
        let body = ConvexBody::lq_ball(2, 2.0).unwrap();
        // 13 points per real axis over [-3,3]: includes y = 0 lines, hence
        // genuine in-set points on both factors
        let grid = GridSpec::square(2, -3.0, 3.0, 13).unwrap();
        let report = ma_vanishing_scan(&body, &cube_sets(), &grid, 1e-4, 1e-6).unwrap();
        assert!(report.counts.iter().all(|&c| c > 0), "{:?}", report.counts);
        assert!(report.max_abs_det <= 1e-6, "max det {}", report.max_abs_det);
        assert!(report.excluded > 0);
    }

    #[test]
    fn scan_grid_inside_set_is_rejected() {
        let body = ConvexBody::lq_ball(2, 2.0).unwrap();
        // a tiny window strictly inside [-1,1]^2 around the real points
        let grid = GridSpec::new(vec![
            crate::grid::AxisSpec::new((-0.4, 0.4), (-1e-7, 1e-7), 5, 3).unwrap(),
            crate::grid::AxisSpec::new((-0.4, 0.4), (-1e-7, 1e-7), 5, 3).unwrap(),
        ])
        .unwrap();
        let r = ma_vanishing_scan(&body, &cube_sets(), &grid, 1e-4, 1e-6);
        assert!(matches!(r, Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn explore_refuses_q_one() {
        let grid = GridSpec::square(2, -2.0, 2.0, 9).unwrap();
        assert!(matches!(
            support_explore(1.0, &cube_sets(), &grid, 0.5),
            Err(Error::NotSmoothBody)
        ));
    }
}
