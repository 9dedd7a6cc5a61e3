use num_complex::Complex64;

use super::wrap_phase;
use crate::error::{Error, Result};
use crate::field::SampledField;
use crate::grid::{Grid, Plane};
use crate::optics::{scan_observation_planes, GaussianBeamSpec, LensParams};
use crate::physics::BeamPhysics;

/// On-axis phase along z, unwrapped.
#[derive(Clone, Debug, PartialEq)]
pub struct GouyProfile {
    pub z_values: Vec<f64>,
    pub phase: Vec<f64>,
}

impl GouyProfile {
    pub fn len(&self) -> usize {
        self.z_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z_values.is_empty()
    }

    /// Phase at the plane closest to `z`.
    pub fn phase_near(&self, z: f64) -> Option<f64> {
        self.z_values
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - z).abs().total_cmp(&(b.1 - z).abs()))
            .map(|(i, _)| self.phase[i])
    }
}

/// What is subtracted from the measured axial phase at each plane.
#[derive(Clone, Copy, Debug)]
pub enum GouyReference<'a> {
    /// Nothing: the propagator carries no exp(ikz) term, so a plane wave has zero phase.
    PlaneWave,
    /// The on-axis phase of a reference stack propagated through the same optics,
    /// typically [`wide_gaussian_reference`].
    Fields(&'a [SampledField]),
}

/// Unwrapped on-axis phase of every plane in `stack` minus the reference phase.
pub fn gouy_phase_axis(
    stack: &[SampledField],
    z_values: &[f64],
    reference: GouyReference<'_>,
) -> Result<GouyProfile> {
    gouy_phase_component(stack, z_values, (0, 0), reference)
}

/// Gouy phase of the HG_(n,m) component, read from the on-axis derivative ∂xⁿ ∂yᵐ ψ.
///
/// An HG_nm beam has a node of that order on axis; its lowest non-vanishing Taylor
/// coefficient carries exactly the mode's Gouy phase, up to a constant (−i)^(n+m).
/// Derivatives use centered finite differences, so orders above 2 are not supported.
pub fn gouy_phase_component(
    stack: &[SampledField],
    z_values: &[f64],
    order: (u32, u32),
    reference: GouyReference<'_>,
) -> Result<GouyProfile> {
    if stack.len() != z_values.len() {
        return Err(Error::domain(format!(
            "{} fields but {} z values",
            stack.len(),
            z_values.len()
        )));
    }
    if order.0 > 2 || order.1 > 2 {
        return Err(Error::domain("axial derivative order above 2 is not supported"));
    }
    let reference_phase: Vec<f64> = match reference {
        GouyReference::PlaneWave => vec![0.0; stack.len()],
        GouyReference::Fields(r) => {
            if r.len() != stack.len() {
                return Err(Error::domain("reference stack length differs from the field stack"));
            }
            r.iter()
                .zip(z_values)
                .enumerate()
                .map(|(i, (f, &z))| axial_value(f, (0, 0), i, z).map(|v| v.arg()))
                .collect::<Result<_>>()?
        }
    };
    let mut phase = Vec::with_capacity(stack.len());
    let mut prev: Option<f64> = None;
    for (i, (f, &z)) in stack.iter().zip(z_values).enumerate() {
        let raw = axial_value(f, order, i, z)?.arg() - reference_phase[i];
        let next = match prev {
            None => wrap_phase(raw),
            Some(p) => p + wrap_phase(raw - p),
        };
        phase.push(next);
        prev = Some(next);
    }
    Ok(GouyProfile {
        z_values: z_values.to_vec(),
        phase,
    })
}

fn stencil(order: u32) -> &'static [(isize, f64)] {
    match order {
        0 => &[(0, 1.0)],
        1 => &[(-1, -0.5), (1, 0.5)],
        _ => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
    }
}

fn axial_value(f: &SampledField, order: (u32, u32), index: usize, z: f64) -> Result<Complex64> {
    let c = f.grid().center() as isize;
    let mut acc = Complex64::new(0.0, 0.0);
    for &(dx, wx) in stencil(order.0) {
        for &(dy, wy) in stencil(order.1) {
            acc += f.get((c + dx) as usize, (c + dy) as usize) * (wx * wy);
        }
    }
    // acc is the derivative times pitch^(n+m); compare it with the field peak directly.
    if acc.norm() < 1e-9 * f.max_abs() || acc.norm() == 0.0 {
        return Err(Error::OnAxisNode { index, z });
    }
    Ok(acc)
}

/// Reference stack: a Gaussian pupil three reciprocal pixels wide, i.e. a beam filling a
/// sizeable fraction of the real-space field of view, propagated with the same optics.
pub fn wide_gaussian_reference(
    grid: &Grid,
    lens: &LensParams,
    physics: &BeamPhysics,
    z_values: &[f64],
) -> Result<Vec<SampledField>> {
    grid.ensure_plane(Plane::Reciprocal)?;
    let width = 3.0 * grid.pitch();
    let pupil = SampledField::from_fn(*grid, |qx, qy| {
        Complex64::new((-(qx * qx + qy * qy) / (width * width)).exp(), 0.0)
    })?
    .normalize()?;
    scan_observation_planes(&pupil, lens, physics, z_values)
}

/// Gouy phase of an astigmatic HG_nm beam:
/// (n + ½) atan((z − z_x)/z_R) + (m + ½) atan((z − z_y)/z_R).
pub fn gouy_analytic(n: u32, m: u32, z: f64, beam: &GaussianBeamSpec) -> f64 {
    (n as f64 + 0.5) * ((z - beam.z_x) / beam.z_r).atan()
        + (m as f64 + 0.5) * ((z - beam.z_y) / beam.z_r).atan()
}

/// Gouy phase of HG10 minus that of HG01:
/// atan((z − z_x)/z_R) − atan((z − z_y)/z_R).
pub fn relative_gouy_analytic(z: f64, beam: &GaussianBeamSpec) -> f64 {
    gouy_analytic(1, 0, z, beam) - gouy_analytic(0, 1, z, beam)
}
