//! Exact integer and rational linear algebra: matrices over Z, Smith and
//! Hermite normal forms, integer kernels, and a rational simplex solver.

mod lp;
mod matrix;
mod snf;

pub use lp::{LinearProgram, LpOutcome};
pub use matrix::{
    gcd_vec, int, primitive, rat, rat_inverse, rat_rank, rat_solve, rational_json, to_i64, IntMatrix, Rational,
};
pub use snf::{hermite_rows, kernel_lattice, smith_normal_form, solve_integer, Snf};
