//! The overlap uncertainty relation for three and four pure states, its
//! Fubini–Study geometry and the minimum-uncertainty-state search.

mod area;
mod mus;
mod triple;

pub use area::{bargmann_area_check, spherical_triangle_area, AreaCheck};
pub use mus::{mus_residual, mus_scan, AxisHit, Branch, MusFamily, MusGridPoint, MusSolutionSet};
pub use triple::{
    fubini_study_angle, geodesic_check, in_polytope, our4_evaluate, our_evaluate,
    trace_triangle_evaluate, transition_probability, GeodesicBranch, GeodesicCheck, OurReport,
    OverlapTriple, TraceTriangleReport,
};

/// Saturation tolerance for the overlap relations.
pub const OUR_TOL: f64 = 1e-10;
/// Residual below which a state counts as minimum-uncertainty.
pub const FAMILY_TOL: f64 = 1e-9;
