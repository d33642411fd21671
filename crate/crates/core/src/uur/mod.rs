//! The unitary uncertainty relation `det G >= 0` for any number of
//! unitaries, its two- and three-unitary Bargmann forms, the
//! Robertson–Schrödinger limit and the qubit corollaries.

mod bargmann;
mod gram;
mod pair;
mod qubit;
mod robertson;

pub use bargmann::{bargmann_invariant, principal_arg, BargmannValue};
pub use gram::{
    gram_matrix, permutation_expansion_det, schwarz_matrix_check, uur_evaluate, GramMatrix,
    UurReport,
};
pub use pair::{uur_bargmann_n3, uur_bargmann_pair, uur_pair, variance_unitary, BargmannN3};
pub use qubit::{qubit_tight_relation, QubitTightReport};
pub use robertson::{
    covariance_hermitian, rs_limit_probe, rs_pair, variance_hermitian, RsLimitRow, RsLimitTable,
};

/// `|det G|` below this counts as saturation.
pub const DET_SATURATION_TOL: f64 = 1e-9;
/// Smallest eigenvalue of `G` allowed before positivity is declared broken.
pub const PSD_TOL: f64 = 1e-10;
/// Slack tolerance for the two-unitary and Robertson–Schrödinger forms.
pub const RELATION_TOL: f64 = 1e-10;
/// Bargmann moduli below this leave the phase undefined.
pub const BARGMANN_CUTOFF: f64 = 1e-12;
