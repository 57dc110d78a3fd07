//! Exact rational polyhedral computation.
//!
//! * [`lp`]: two-phase simplex with Farkas certificates.
//! * [`dd`]: double-description vertex enumeration.
//! * [`hull3`]: exact convex hulls and volumes in three dimensions.

pub mod dd;
pub mod error;
pub mod hrep;
pub mod hull3;
pub mod linalg;
pub mod lp;
pub mod rational;

pub use dd::{extreme_rays, vertex_enumerate, vertex_enumerate_with, DdOptions};
pub use error::PolytopeError;
pub use hrep::{Facet, HPolytope, VPolytope};
pub use hull3::{convex_hull_3d, polyhedron_volume, Hull3};
pub use lp::{feasible_point, lp_minimize, minimize_standard, FarkasCertificate, Feasibility, LpSolution};
pub use rational::Rational;
