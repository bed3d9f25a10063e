//! Decompositions of Frobenius pushforwards of line bundles and the
//! Frobenius support with its densities.

mod decomposition;
mod intervals;
mod support;

pub use decomposition::{
    frobenius_power, multiplicity, numerical_multiplicities, pushforward_decomposition, trace_kernel_decomposition,
    twisted_decomposition, Decomposition, ENUMERATION_BUDGET,
};
pub use intervals::InertBlowdown;
pub use support::{
    alpha, big_pairing_check, f_effective_cones, fsupp, fsupp_classes, in_half_open_zonotope, signatures, volume_check, FEffectiveCones,
    FSuppEntry, Signatures, VolumeCheck,
};
