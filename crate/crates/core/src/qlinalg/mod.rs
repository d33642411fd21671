//! Small dense complex linear algebra, quantum state and unitary types,
//! Bloch-sphere maps, and reproducible random sampling.

pub mod matrix;
pub mod random;
pub mod state;

pub use matrix::{
    exp_i_hermitian, hermitian_eigen, identity, pauli_dot, phase_insensitive_fidelity,
    psd_diagnostics, sigma_x, sigma_y, sigma_z, ComplexMatrix, ComplexVector, PsdDiagnostics,
};
pub use random::{haar_random_unitary, haar_unitary, seeded_rng, stream_rng};
pub use state::{
    bloch_rotation_matrix, bloch_to_state, expectation, rotation_axis, rotation_between,
    rotation_unitary, state_to_bloch, BlochVector, DensityMatrix, PureState, UnitaryOp,
};
