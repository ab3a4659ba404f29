//! Numerical laboratory for Jacobi trigonometric expansions.
//!
//! The crate evaluates the four Jacobi trigonometric orthonormal systems on
//! (0,π) and (−π,π) together with the auxiliary Q family, integrates against
//! the associated measures, computes expansion coefficients and Hardy-type
//! sums, builds the atoms used to probe sharpness of admissible exponents,
//! evaluates Poisson–Jacobi kernels, and checks the Hilb and Darboux
//! asymptotics.

pub mod analysis;
pub mod asymptotics;
pub mod atoms;
pub mod bases;
pub mod error;
pub mod expansion;
pub mod fit;
pub mod kernels;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
