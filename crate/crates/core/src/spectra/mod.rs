//! Quantum side: Hamiltonian and Q matrices, diagonalization and eigenstate
//! statistics.

pub mod cache;
mod eigen;
mod entropy;
pub mod inertia;
mod levels;
mod operator;

pub use eigen::{
    degenerate_groups, diagonalize, eigenvalues, q_labels, select_near, select_window, EigenSystem,
    DEGENERACY_TOLERANCE, SYMMETRY_TOLERANCE,
};
pub use entropy::{entropy_parts, running_mean, shannon_profile, EntropyProfile, EntropyRecord, SMOOTHING_WINDOW};
pub use levels::{middle_third, q_sector_levels, spacing_ratio, spacing_ratio_of, SpacingStats, MIN_LEVELS};
pub use operator::{build_hamiltonian, build_q, ModelParams, SparseMatrix};

