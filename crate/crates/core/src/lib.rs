//! Numerical laboratory for positive solutions of `-Δu = f(u)` with Dirichlet
//! data on convex domains of the round sphere, the Euclidean plane and the
//! hyperbolic plane.
//!
//! The crate is `no_std` (with `alloc`) unless the default `std` feature is
//! enabled. Everything here is pure computation; file formats, reports and
//! the command-line front end live in the `curvlab` crate.
//!
//! Modules, bottom-up:
//!
//! * [`geometry`]: charts, metrics, geodesics and Killing fields of the three
//!   model surfaces, plus ambient (embedded) representations used internally.
//! * [`domain`]: star-shaped domains given by a radial Fourier profile about a
//!   pole, boundary curvature, convexity predicates and tangency counting.
//! * [`pde`]: the mapped polar grid, the Laplace–Beltrami operator and the
//!   torsion / eigenvalue / semilinear / stability solvers.
//! * [`morse`]: derivative jets, the P-function, critical points, local
//!   degrees and the audits built on them.
//! * [`revolution`]: radial Sturm–Liouville problems on manifolds of
//!   revolution of any dimension.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod domain;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod morse;
pub mod pde;
pub mod revolution;

pub use error::{Error, Result};
