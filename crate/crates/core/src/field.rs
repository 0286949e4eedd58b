//! Real-valued fields on `C^d`, the common currency of the calculus layer.

use std::sync::Arc;

use num_complex::Complex64;

use crate::body::ConvexBody;
use crate::potential::{self, ResolvedPotential};
use crate::product::ProductSetSpec;

type EvalFn = dyn Fn(&[Complex64]) -> f64 + Send + Sync;
type RegionFn = dyn Fn(&[Complex64]) -> bool + Send + Sync;

/// An evaluation callable plus dimension and an optional smoothness region
/// (where finite-difference derivatives are trustworthy).
#[derive(Clone)]
pub struct ScalarField {
    dim: usize,
    eval: Arc<EvalFn>,
    smooth: Option<Arc<RegionFn>>,
}

impl std::fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarField")
            .field("dim", &self.dim)
            .field("smooth_region", &self.smooth.is_some())
            .finish()
    }
}

impl ScalarField {
    pub fn new<F>(dim: usize, eval: F) -> Self
    where
        F: Fn(&[Complex64]) -> f64 + Send + Sync + 'static,
    {
        ScalarField {
            dim,
            eval: Arc::new(eval),
            smooth: None,
        }
    }

    pub fn with_smooth_region<G>(mut self, region: G) -> Self
    where
        G: Fn(&[Complex64]) -> bool + Send + Sync + 'static,
    {
        self.smooth = Some(Arc::new(region));
        self
    }

    /// Same evaluations with the smoothness predicate dropped; scanners that
    /// manage their own exclusion collars use this.
    pub fn without_smooth_region(mut self) -> Self {
        self.smooth = None;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, z: &[Complex64]) -> f64 {
        debug_assert_eq!(z.len(), self.dim);
        (self.eval)(z)
    }

    /// True when no region is declared or the point is inside it.
    pub fn is_smooth_at(&self, z: &[Complex64]) -> bool {
        self.smooth.as_ref().is_none_or(|r| r(z))
    }

    /// The smooth potential `u_P` as a field.
    pub fn from_potential(resolved: ResolvedPotential) -> Self {
        let dim = resolved.body().dim();
        ScalarField::new(dim, move |z| resolved.eval(z))
    }

    /// The logarithmic indicator `H_P` as a field. No smoothness region is
    /// attached; callers doing finite differences should restrict to points
    /// where the maximizing vertex is locally unique.
    pub fn indicator(body: ConvexBody) -> Self {
        let dim = body.dim();
        ScalarField::new(dim, move |z| {
            potential::indicator_h(&body, z).expect("dimension checked at call sites")
        })
    }

    /// Extremal function of a product set as a field.
    pub fn p_extremal(body: ConvexBody, sets: ProductSetSpec) -> Self {
        let dim = body.dim();
        let smooth_sets = sets.clone();
        ScalarField::new(dim, move |z| {
            crate::product::p_extremal(&body, &sets, z).expect("validated at construction")
        })
        .with_smooth_region(move |z| {
            smooth_sets
                .factors
                .iter()
                .zip(z.iter())
                .all(|(s, &w)| s.distance(w) > 0.0)
        })
    }

    /// The closed-form `l^{q'}` composition of factor Green functions.
    pub fn lq_form(q: f64, sets: ProductSetSpec) -> Self {
        let dim = sets.factors.len();
        let smooth_sets = sets.clone();
        ScalarField::new(dim, move |z| {
            crate::product::lq_closed_form(q, &sets, z).expect("validated at construction")
        })
        .with_smooth_region(move |z| {
            smooth_sets
                .factors
                .iter()
                .zip(z.iter())
                .all(|(s, &w)| s.distance(w) > 0.0)
        })
    }
}
