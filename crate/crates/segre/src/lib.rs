//! Exact residual-intersection calculus for Segre classes.
//!
//! The crate computes Segre classes `s(W, Z)` of schemes supported on
//! unions of regularly embedded components, from the Chern classes of the
//! normal bundles of the components and of their intersections. All
//! arithmetic is exact (arbitrary-precision rationals); every identity the
//! formulas rely on is also available as a runnable cross-check.
//!
//! Module map:
//! - [`graded`]: truncated graded polynomial arithmetic, the substrate
//! - [`bundle`]: formal vector bundles and Chern/Segre class algebra
//! - [`residual`]: the residual product `⊙`, the Q-polynomial, and the
//!   Γ blowup-correction class
//! - [`union`]: the union formulas (transverse pair, inclusion-exclusion,
//!   blowup-residual) and the divisor residual formulas
//! - [`linear`]: linear-subspace scenes in projective space and the
//!   independent blowup-pushforward oracle
//! - [`scene`]: the JSON scene format, formula dispatch, and reports
//! - [`suite`]: the randomized identity suite behind `segre verify`

pub mod bundle;
pub mod error;
pub mod graded;
pub mod linear;
pub mod residual;
pub mod scene;
pub mod suite;
pub mod union;

pub use bundle::BundleData;
pub use error::{Error, Result};
pub use graded::{rat, ratio, regrade, DimClass, GradedClass, Rational};
