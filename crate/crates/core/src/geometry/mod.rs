//! Exact lattice and polyhedral geometry.

mod cone;
pub(crate) mod dd;
mod expvec;
mod lattice;
mod polytope;

pub use cone::{cone_from_generators, PolyCone};
pub use expvec::{minkowski_power, minkowski_sum, ExpVec, PointSet, EXPVEC_CAPACITY};
pub use lattice::{lattice_summary, smith_invariants, LatticeBuilder, LatticeSummary};
pub use polytope::{simplex, Halfspace, Polytope, DEFAULT_MAX_DIM};
