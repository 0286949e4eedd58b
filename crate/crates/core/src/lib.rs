// Negated comparisons are deliberate NaN-rejecting guards, and ranged loops
// index dense tableaus where iterator chains obscure the pivot arithmetic.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

//! Numerical toolkit for plurisubharmonic growth classes attached to a convex
//! body `P` in the nonnegative orthant.
//!
//! The crate has three layers:
//!
//! * geometry of the body itself: support functions, extreme points, cone
//!   condition, outer polytope approximations ([`body`]);
//! * the model functions of the growth class: the logarithmic indicator
//!   `H_P`, the smooth potential `u_P`, univariate Green functions of model
//!   planar sets, and extremal functions of product sets ([`potential`],
//!   [`univariate`], [`product`]);
//! * finite-difference Wirtinger calculus used to verify their structural
//!   identities: complex Hessians, Monge-Ampere densities and masses,
//!   strict-plurisubharmonicity checks ([`calculus`]).
//!
//! Everything is a pure function of immutable inputs. Grid scans parallelize
//! over rows behind the `parallel` feature (rayon); reductions always run in
//! a fixed order so results are identical across thread counts.
//!
//! Mass normalization convention used throughout: `Δ log|ζ| = 2π δ_0`, and in
//! dimension `d` the Monge-Ampere mass of a grid cell is
//! `4^d d! det H · (cell volume)` where `H` is the complex Hessian. With this
//! convention the equilibrium measure of a single planar set has total mass
//! `2π` and the product measure over `d` factors has total mass `(2π)^d`.

pub mod body;
pub mod calculus;
pub mod error;
pub mod exec;
pub mod field;
pub mod grid;
pub mod potential;
pub mod product;
pub mod sample;
pub mod suites;
pub mod univariate;

mod hermitian;
mod simplex;

pub use body::{ConvexBody, MultiIndex};
pub use calculus::hessian::HermitianForm;
pub use calculus::mass::MassReport;
pub use error::Error;
pub use field::ScalarField;
pub use grid::{AxisSpec, GridSpec};
pub use potential::{PotentialSpec, PotentialVariant, ResolvedPotential};
pub use product::ProductSetSpec;
pub use univariate::PlanarSet;

/// One-line statement of the Laplacian/Monge-Ampere normalization, embedded
/// in every mass report and emitted file header.
pub const NORMALIZATION_NOTE: &str =
    "Delta log|zeta| = 2*pi*delta_0; cell mass = 4^d * d! * det(complex Hessian) * cell volume";

/// Schema tag stamped on all JSON artifacts.
pub const SCHEMA: &str = "pextremal/1";
