//! Exact computations with curved differential graded (CDG) categories,
//! modules over them, and the associated bar, cobar, and Hochschild
//! complexes of the second kind.
//!
//! All arithmetic is exact, over `Q` or a prime field `F_p`.  The crate is
//! organized bottom-up:
//!
//! - [`grading`], [`scalar`], [`matrix`], [`complex`]: degrees and signs,
//!   exact scalars, sparse linear algebra, finite complexes;
//! - [`category`], [`functor`]: small CDG-categories, their constructions
//!   (opposite, tensor, connection changes), and CDG-functors;
//! - [`module`]: CDG- and QDG-modules, hom complexes, tensor products,
//!   free modules, cones;
//! - [`bicomplex`]: curved bicomplexes and the explicit bar, cobar, and
//!   Hochschild bicomplexes with their sign conventions;
//! - [`resolution`], [`engines`], [`report`]: projective resolutions,
//!   derived functors of the first and second kind, and homology reports;
//! - [`io`]: JSON serialization of every structure and report.

pub mod bicomplex;
pub mod category;
pub mod complex;
pub mod engines;
pub mod error;
pub mod functor;
pub mod grading;
pub mod io;
pub mod matrix;
pub mod module;
pub mod report;
pub mod resolution;
pub mod sample;
pub mod scalar;

pub use error::{CdgError, Result};
pub use grading::{Degree, GradingGroup, GradingMorphism};
pub use scalar::{Field, Scalar};
