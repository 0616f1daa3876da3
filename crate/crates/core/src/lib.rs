//! Numerical and exact-arithmetic toolkit relating the Thurston norm and the
//! harmonic (L²) norm on the first cohomology of closed hyperbolic 3-manifolds.
//!
//! The crate is organised bottom-up:
//!
//! - [`quad`]: adaptive Gauss–Kronrod and fixed Gauss–Legendre rules.
//! - [`specfun`]: the radial harmonic functions ψ_ℓ on hyperbolic space, their
//!   mode norms, and the sharp gradient constant ν(r).
//! - [`ballfield`]: real spherical harmonics, harmonic functions and 1-forms on
//!   hyperbolic balls, and 3D quadrature over balls.
//! - [`tubefield`]: Margulis tube geometry and the invariant harmonic form dz/ε.
//! - [`bounds`] and [`polytope`]: the inequality engine relating volume,
//!   injectivity radius, Thurston and harmonic norms; polytope (dual) norms.
//! - [`homalg`]: exact integer matrices and lattices for the genus-2 gluing
//!   construction.
//! - [`fibering`]: two-generator one-relator words and Brown's criterion.
//! - [`families`]: parametric models of the three example families.
//! - [`verify`]: named invariant suites, shared with the command-line tool.

pub mod ballfield;
pub mod bounds;
pub mod error;
pub mod families;
pub mod fibering;
mod hypergeom;
pub mod homalg;
pub mod polytope;
pub mod quad;
pub mod specfun;
pub mod tubefield;
pub mod verify;

pub use error::{Error, Result};
