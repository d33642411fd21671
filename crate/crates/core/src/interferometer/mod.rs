//! A virtual two-arm polarisation interferometer: waveplate unitaries,
//! photon-counting fringes, fringe fits, and reconstruction of
//! visibilities and Bargmann phases from the fits.

mod config;
mod fit;
mod reconstruct;
mod scan;
mod waveplate;

pub use config::{check_grid, uniform_phase_grid, InterferometerConfig, MIN_GRID_POINTS};
pub use fit::{
    fit_fringe, fit_fringe_with, FitOptions, FringeFit, Parameterisation, PHASE_IDENTIFIABILITY,
};
pub use reconstruct::{
    bargmann_phase_from_fits, phase_difference, relation_from_fits, relation_from_scans,
    simulate_scan_set, RelationKind, ScanSet,
};
pub use scan::{prepared_state, simulate_scan, ArmOp, ArmSetting, FringePoint, FringeScan};
pub use waveplate::{hwp, mean_output, qwp, waveplate_stack_unitary, Convention, WaveplateStack};
