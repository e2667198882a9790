//! Hilbert bases and Hilbert series of pointed rational cones.
//!
//! The cone is triangulated into half-open simplicial cones. Each simplex is
//! evaluated by enumerating the lattice points of its fundamental
//! parallelepiped; simplices with large determinant can first be split by
//! stellar subdivision at lattice points found by an exact integer program
//! or by a lattice overcone.

pub mod arith;
pub mod collector;
pub mod cone;
pub mod error;
pub mod hull;
pub mod pipeline;
pub mod scalar;
pub mod series;
pub mod simplex;
pub mod simplicial;
pub mod subdivide;

pub use arith::{IntMat, IntVec};
pub use collector::{ComputationResult, StatsRecord};
pub use cone::{build_cone, Cone, ConeInput};
pub use error::{Error, Result};
pub use pipeline::{compute, compute_traced, ComputeOptions, Trace};
pub use series::HilbertSeries;
pub use simplicial::{OrderVector, SimplicialCone};
pub use subdivide::{Strategy, SubdivisionConfig};
