//! Finite-difference Wirtinger calculus: complex Hessians, Monge-Ampere
//! densities and masses, strict-plurisubharmonicity checks, and the
//! structural identity checkers used by the verification suites.

pub mod hessian;
pub mod identities;
pub mod mass;
pub mod scan;

pub use hessian::{complex_hessian, ma_density, strict_psh_check, HermitianForm, PshReport};
pub use identities::{
    domination_check, product_hessian_closed_form, log_sum_laplacian_check, cross_gradient_identity_check,
    LogSumLaplacianReport, CrossGradientReport,
};
pub use mass::{ma_mass, MassReport};
pub use scan::{ma_vanishing_scan, support_explore, ScanReport};
