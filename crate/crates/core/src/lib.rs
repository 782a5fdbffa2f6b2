//! Numerics for parameter estimation with Gaussian continuous-variable
//! states: the covariance-matrix formalism, classical and quantum Fisher
//! information for a squeezing-estimation protocol, the analytic bound
//! curves, seeded scatter experiments over random state families, and an
//! independent truncated-Fock-space referee.

pub mod classical;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod info;
pub mod qfi;
pub mod sampler;
pub mod symplectic;

pub use error::{Error, Result};
pub use gaussian::{
    check_physical, mean_photon_numbers, purity, symplectic_eigenvalues, CovarianceMatrix,
    DisplacementVector, GaussianState,
};
pub use info::{
    bures_distance_sq, coherence, entropy, gaussian_fidelity, hellinger_distance_sq,
    log_negativity, EntanglementReport,
};
pub use qfi::{
    avg_qfi, avg_qfi_vs_logneg, bound_curve, qfi_at_theta, quantum_crb, BoundFamily, QfiConfig,
    QfiReport,
};
pub use sampler::{sample, scatter_experiment, ScatterRow, StateClassSpec, StateFamily};
pub use symplectic::{
    apply, embed_on_mode_a, partial_trace, partial_transpose_b, rotation, squeezer, Mode,
    SymplecticMatrix,
};
