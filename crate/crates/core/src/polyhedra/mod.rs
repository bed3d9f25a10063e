//! Rational polyhedral cones and polytopes with exact arithmetic.

mod cone;
pub mod dd;
mod polytope;
mod relation;

pub use cone::Cone;
pub use polytope::HPolytope;
pub use relation::{half_open_point_from_relation, half_open_witness, half_open_witness_with};
