use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::field::SampledField;

/// Points on the discrete winding loop.
pub const LOOP_POINTS: usize = 256;
/// Largest accepted distance between raw turns and the nearest integer.
pub const WINDING_TOLERANCE: f64 = 0.2;

/// Phase winding around the grid origin on one circular loop.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChargeReport {
    pub winding: i32,
    pub radius: f64,
    /// Σ of wrapped phase steps around the loop, radians.
    pub raw: f64,
}

/// Counter-clockwise phase winding of `field` on a circle of `radius` about the origin.
///
/// The field is bilinearly interpolated at [`LOOP_POINTS`] points; consecutive phase steps
/// are wrapped to (−π, π] and summed.
pub fn topological_charge(field: &SampledField, radius: f64) -> Result<ChargeReport> {
    let g = field.grid();
    let min = 3.0 * g.pitch();
    let max = (g.center() as f64 - 2.0) * g.pitch();
    if !(radius >= min && radius <= max) {
        return Err(Error::LoopRadius { radius, min, max });
    }
    let samples: Vec<_> = (0..LOOP_POINTS)
        .map(|i| {
            let t = TAU * i as f64 / LOOP_POINTS as f64;
            field
                .sample_bilinear(radius * t.cos(), radius * t.sin())
                .expect("loop lies inside the grid")
        })
        .collect();
    let peak = field.max_abs();
    let weakest = samples.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    let ratio = if peak > 0.0 { weakest / peak } else { 0.0 };
    if !(ratio > 1e-6) {
        return Err(Error::StarvedLoop { radius, ratio });
    }
    let raw: f64 = (0..LOOP_POINTS)
        .map(|i| (samples[(i + 1) % LOOP_POINTS] * samples[i].conj()).arg())
        .sum();
    let turns = raw / TAU;
    let winding = turns.round();
    if (turns - winding).abs() >= WINDING_TOLERANCE {
        return Err(Error::WindingRejected { radius, turns });
    }
    Ok(ChargeReport {
        winding: winding as i32,
        radius,
        raw,
    })
}

/// [`topological_charge`] at several radii.
pub fn winding_scan(field: &SampledField, radii: &[f64]) -> Vec<Result<ChargeReport>> {
    radii.iter().map(|&r| topological_charge(field, r)).collect()
}
