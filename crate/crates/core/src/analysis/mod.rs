//! Observables computed from propagated fields.

mod charge;
mod current;
pub mod csv;
mod gouy;
mod orientation;
mod overlap;
mod profile;

pub use charge::{topological_charge, winding_scan, ChargeReport, LOOP_POINTS, WINDING_TOLERANCE};
pub use current::{current_density, CurrentField};
pub use gouy::{
    gouy_analytic, gouy_phase_axis, gouy_phase_component, relative_gouy_analytic,
    wide_gaussian_reference, GouyProfile, GouyReference,
};
pub use orientation::{
    intensity_moments, lobe_orientation, orientation_difference, LobeOrientation, SecondMoments,
    ISOTROPY_THRESHOLD,
};
pub use overlap::{
    converter_decomposition, converter_frame, inner_product, mode_overlap, FrameDecomposition,
};
pub use profile::{central_contrast, radial_profile, ring_radius};

/// Wraps an angle into (−π, π].
pub(crate) fn wrap_phase(a: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let w = a - TAU * (a / TAU).round();
    if w <= -PI {
        w + TAU
    } else {
        w
    }
}
