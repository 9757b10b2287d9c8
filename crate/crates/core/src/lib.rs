//! Robin eigenvalues of the Hermite (Ornstein-Uhlenbeck) operator.
//!
//! The crate is `no_std` and only needs `alloc`. It provides
//!
//! * scalar special functions (`erf`, `erfinv`, `1/Γ`, the Hermite-function series),
//! * Gaussian measure and perimeter of half-spaces and planar domains,
//! * the half-line eigenproblem `-w'' + t w' = λ w`, `w'(σ) + β w(σ) = 0`,
//!   solved through the Riccati transform `β(t) = -w'/w`,
//! * a Gaussian-weighted P1 finite element solver for planar domains,
//! * the level-set functional used to compare a domain with its Gaussian
//!   symmetrization.
//!
//! IO, file formats, the corpus harness and the CLI live in the companion
//! `hermite-robin` crate.

#![no_std]
#![forbid(unsafe_code)]
// NaN-rejecting guards and index-heavy kernels are intended
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::excessive_precision)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod geometry;
pub mod levelset;
pub mod linalg;
pub mod mesh;
pub mod ode;
pub mod quadrature;
pub mod solver_1d;
pub mod solver_2d;
pub mod special;

pub use error::{Error, Result};
pub use geometry::{BoundarySegment, Domain2D, DomainKind, HalfSpace, Point, Segment, SegmentFlag};
pub use levelset::{FunctionalValue, LevelSetDecomposition};
pub use mesh::Mesh2D;
pub use solver_1d::{Eigenpair1D, HalfLineProblem, RiccatiTrace};
pub use solver_2d::SpectralResult2D;
pub use special::SeriesEval;
