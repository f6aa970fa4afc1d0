//! Superdirective beamforming for uniform rectangular arrays (URAs) of
//! isotropic elements.
//!
//! The crate models an M×N grid of elements in the xz-plane, builds the
//! sinc-kernel mutual-coupling matrix from the element spacings, and computes
//! maximum-directivity (superdirective) excitation weights in closed form via
//! a Cholesky solve. Independent spherical-quadrature oracles and a
//! generalized-eigenvalue cross-check are included so every closed-form result
//! can be validated numerically.

pub mod array;
pub mod coupling;
pub mod directivity;
pub mod error;
pub mod oracle;
pub mod quadrature;
pub mod sweep;

pub use array::{
    array_output, spatial_frequencies, steering_vector, ArrayGeometry, Direction, ElementIndex,
    ExcitationVector,
};
pub use coupling::{sinc, CouplingMatrix};
pub use directivity::{
    average_max_directivity, directivity, eigen_crosscheck, eigen_crosscheck_full, max_directivity,
    optimal_excitation, DirectivityResult, Normalization, OptimalExcitation,
};
pub use error::{Error, Result};
pub use oracle::{coupling_entry_oracle, directivity_quadrature_oracle};
pub use sweep::{endfire_plane_cut, pattern_grid, spacing_sweep, PatternGrid, PatternKind, SpacingCut, SweepResult};

pub use num_complex::Complex64;
