//! Linear separability certificates for labeled point sets, and synthesis of
//! projections that hide one binary property while keeping the others
//! linearly separable.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`] and [`geometry`] hold dense vector/matrix kernels, orthonormal
//!   systems, affine flats and projections.
//! * [`lp`] is a small dense two-phase simplex solver.
//! * [`separability`] decides (strict) linear separability with certificates,
//!   reduces intersecting pairs to Kirchberger witnesses, and provides the
//!   `(1,∞)` and brute-force `(b,c)` predicates.
//! * [`synthesis`] builds separation-preserving projections that destroy the
//!   separability of the hidden property.
//! * [`overlap`] measures and maximizes the overlap of the hidden property
//!   after projection.
//! * [`constructions`] generates the explicit counterexamples and random
//!   fixtures, and [`io`] / [`cli`] expose everything on the command line.

pub mod cli;
pub mod constructions;
pub mod data;
pub mod error;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod overlap;
pub mod separability;
pub mod synthesis;

pub use data::LabeledPointSet;
pub use error::{Error, Result};
pub use geometry::{AffineMap, Flat, FlatIntersection, OrthoBasis};
pub use separability::{Hyperplane, SeparationResult};

use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by every module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Unit-norm / orthogonality slack for orthonormal systems.
    pub orth: f64,
    /// Pivot threshold for rank decisions.
    pub rank: f64,
    /// Distance slack for geometric incidence (point on flat, recombination).
    pub geom: f64,
    /// Feasibility and strictness threshold for linear programs.
    pub lp: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            orth: 1e-10,
            rank: 1e-9,
            geom: 1e-8,
            lp: 1e-9,
        }
    }
}
