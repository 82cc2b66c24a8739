//! Divides in the unit disk, their links in the three-sphere, fibered surfaces and monodromy.

pub mod alexander;
pub mod analysis;
pub mod crossings;
pub mod diagram;
pub mod divide;
pub mod error;
pub mod fiber;
pub mod fibration;
pub mod geom;
pub mod harmonic;
pub mod invariants;
pub mod lift;
pub mod matrix;
pub mod monodromy;
pub mod planar;
pub mod poly;
pub mod projection;
pub mod random;
pub mod spline;
pub mod sum;
pub mod svg;
pub mod transversal;

pub use error::{Error, Result};
