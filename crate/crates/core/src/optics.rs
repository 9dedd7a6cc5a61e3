//! Lens model and propagators.
//!
//! A field `ψ1(q)` in the front focal plane (FFP) of a lens with focal length `f`, placed a
//! distance `z1` before the FFP, is observed a distance `z2` behind the back focal plane as
//!
//! ```text
//! ψ2(x) = exp(i k x² z1 / 2f²) · (1/2π) ∫ ψ1(q) exp(i χ(q)) exp(i q² z2 / 2k) exp(−i q·x) d²q
//! χ(q)  = df (q_x² − q_y²) / 2k + Cs q⁴ / 4k³
//! ```
//!
//! The 1/2π makes the map unitary. With z1 = z2 = 0 it is the Fourier transform of
//! `ψ1 · exp(iχ)`. The integral is evaluated with the centered unitary DFT, so the output
//! grid is the conjugate of the input grid (pitch 2π / (n · dq)).

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{CenteredFft2, Direction};
use crate::field::SampledField;
use crate::grid::{Grid, Plane};
use crate::par;
use crate::physics::BeamPhysics;
use crate::sources::{ApertureSpec, LineFoci};

/// Intensity FWHM of the Airy disk in units of λ/α.
pub const AIRY_FWHM_FACTOR: f64 = 0.5145;

/// Lens and plane offsets, all in meters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LensParams {
    /// Focal length.
    pub f: f64,
    /// Astigmatic defocus; stigmatic axes along x and y.
    pub df: f64,
    /// Spherical aberration coefficient.
    pub cs: f64,
    /// Source offset before the FFP.
    pub z1: f64,
    /// Observation offset after the BFP.
    pub z2: f64,
}

impl LensParams {
    pub fn new(f: f64, df: f64, cs: f64) -> Result<Self> {
        let lens = LensParams {
            f,
            df,
            cs,
            z1: 0.0,
            z2: 0.0,
        };
        lens.validate()?;
        Ok(lens)
    }

    pub fn with_z1(self, z1: f64) -> Self {
        LensParams { z1, ..self }
    }

    pub fn with_z2(self, z2: f64) -> Self {
        LensParams { z2, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.f > 0.0) || !self.f.is_finite() {
            return Err(Error::domain(format!("focal length must be positive, got {}", self.f)));
        }
        if !(self.cs >= 0.0) || !self.cs.is_finite() {
            return Err(Error::domain(format!("Cs must be non-negative, got {}", self.cs)));
        }
        if !(self.df.is_finite() && self.z1.is_finite() && self.z2.is_finite()) {
            return Err(Error::domain("df, z1 and z2 must be finite"));
        }
        Ok(())
    }

    /// Observation offsets z2 at which the x and y line foci form.
    ///
    /// The x factor sees a total quadratic phase q_x² (z2 + df) / 2k, so it focuses at
    /// z2 = −df; the y factor focuses at z2 = +df.
    pub fn line_foci(&self) -> LineFoci {
        LineFoci {
            x: -self.df,
            y: self.df,
        }
    }
}

/// χ(q) = df (q_x² − q_y²) / 2k + Cs |q|⁴ / 4k³, unwrapped radians.
pub fn aberration_phase(q: (f64, f64), lens: &LensParams, physics: &BeamPhysics) -> f64 {
    let k = physics.wavenumber();
    let (qx2, qy2) = (q.0 * q.0, q.1 * q.1);
    let q2 = qx2 + qy2;
    lens.df * (qx2 - qy2) / (2.0 * k) + lens.cs * q2 * q2 / (4.0 * k * k * k)
}

/// Precomputed transfer function for one lens setting on one FFP grid.
pub struct PropagationPlan {
    input: Grid,
    output: Grid,
    transfer: Vec<Complex64>,
    prefactor: Option<Vec<Complex64>>,
    fft: CenteredFft2,
}

impl PropagationPlan {
    pub fn new(grid: &Grid, lens: &LensParams, physics: &BeamPhysics) -> Result<Self> {
        grid.ensure_plane(Plane::Reciprocal)?;
        lens.validate()?;
        let n = grid.n();
        let output = grid.conjugate();
        let k = physics.wavenumber();
        // Unitary DFT times dq/dx keeps Σ|ψ|² pitch² invariant.
        let scale = grid.pitch() / output.pitch();
        let (lens, grid_c) = (*lens, *grid);
        let transfer = SampledField::from_fn(grid_c, move |qx, qy| {
            let q2 = qx * qx + qy * qy;
            let phase = aberration_phase((qx, qy), &lens, physics) + q2 * lens.z2 / (2.0 * k);
            Complex64::from_polar(scale, phase)
        })?
        .into_data();
        let prefactor = if lens.z1 != 0.0 {
            let c = k * lens.z1 / (2.0 * lens.f * lens.f);
            Some(
                SampledField::from_fn(output, move |x, y| Complex64::from_polar(1.0, c * (x * x + y * y)))?
                    .into_data(),
            )
        } else {
            None
        };
        Ok(PropagationPlan {
            input: *grid,
            output,
            transfer,
            prefactor,
            fft: CenteredFft2::new(n),
        })
    }

    pub fn output_grid(&self) -> &Grid {
        &self.output
    }

    pub fn apply(&self, field: &SampledField) -> Result<SampledField> {
        self.input.ensure_matches(field.grid())?;
        let n = self.input.n();
        let mut data = field.data().to_vec();
        par::for_each_row_mut(&mut data, n, |iy, row| {
            let t = &self.transfer[iy * n..(iy + 1) * n];
            for (v, t) in row.iter_mut().zip(t) {
                *v *= t;
            }
        });
        self.fft.process(&mut data, Direction::Forward);
        if let Some(pre) = &self.prefactor {
            par::for_each_row_mut(&mut data, n, |iy, row| {
                let p = &pre[iy * n..(iy + 1) * n];
                for (v, p) in row.iter_mut().zip(p) {
                    *v *= p;
                }
            });
        }
        SampledField::new(self.output, data)
    }
}

/// Propagates an FFP field to the observation plane `lens.z2` behind the BFP.
pub fn propagate_ffp_to_bfp(
    field: &SampledField,
    lens: &LensParams,
    physics: &BeamPhysics,
) -> Result<SampledField> {
    PropagationPlan::new(field.grid(), lens, physics)?.apply(field)
}

/// One propagated field per observation offset; `lens.z2` is replaced by each entry.
pub fn scan_observation_planes(
    field: &SampledField,
    lens: &LensParams,
    physics: &BeamPhysics,
    z2_values: &[f64],
) -> Result<Vec<SampledField>> {
    if let Some(z) = z2_values.iter().find(|z| !z.is_finite()) {
        return Err(Error::domain(format!("observation offset {z} is not finite")));
    }
    par::try_map_slice(z2_values, |&z2| {
        propagate_ffp_to_bfp(field, &lens.with_z2(z2), physics)
    })
}

/// Gaussian beam waist, Rayleigh range and astigmatic line-focus positions, meters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianBeamSpec {
    pub w0: f64,
    pub z_r: f64,
    pub z_x: f64,
    pub z_y: f64,
}

impl GaussianBeamSpec {
    pub fn stigmatic(w0: f64, physics: &BeamPhysics) -> Result<Self> {
        Ok(GaussianBeamSpec {
            w0,
            z_r: gaussian_rayleigh_range(w0, physics)?,
            z_x: 0.0,
            z_y: 0.0,
        })
    }

    pub fn with_line_foci(self, foci: LineFoci) -> Self {
        GaussianBeamSpec {
            z_x: foci.x,
            z_y: foci.y,
            ..self
        }
    }
}

/// z_R = π w0² / λ.
pub fn gaussian_rayleigh_range(w0: f64, physics: &BeamPhysics) -> Result<f64> {
    if !(w0 > 0.0) || !w0.is_finite() {
        return Err(Error::domain(format!("beam waist must be positive, got {w0}")));
    }
    Ok(PI * w0 * w0 / physics.wavelength())
}

/// Intensity FWHM of a Gaussian beam with waist w0: w0 √(2 ln 2).
pub fn gaussian_fwhm(w0: f64) -> f64 {
    w0 * (2.0 * LN_2).sqrt()
}

/// Intensity FWHM of the Airy disk focused from aperture `ap`.
pub fn airy_fwhm(ap: &ApertureSpec, physics: &BeamPhysics) -> f64 {
    AIRY_FWHM_FACTOR * physics.wavelength() / ap.semi_angle(physics)
}

/// Gaussian beam whose focal intensity FWHM equals that of the aperture's Airy disk,
/// with line foci at z_x = +z_R, z_y = −z_R (the converter setting).
pub fn airy_fwhm_match(ap: &ApertureSpec, physics: &BeamPhysics) -> GaussianBeamSpec {
    let w0 = airy_fwhm(ap, physics) / (2.0 * LN_2).sqrt();
    let z_r = PI * w0 * w0 / physics.wavelength();
    GaussianBeamSpec {
        w0,
        z_r,
        z_x: z_r,
        z_y: -z_r,
    }
}

/// The aperture for which [`airy_fwhm_match`] yields a Rayleigh range of `target_zr`.
pub fn calibrate_aperture(target_zr: f64, physics: &BeamPhysics) -> Result<ApertureSpec> {
    if !(target_zr > 0.0) || !target_zr.is_finite() {
        return Err(Error::domain(format!(
            "target Rayleigh range must be positive, got {target_zr}"
        )));
    }
    let w0 = (target_zr * physics.wavelength() / PI).sqrt();
    let alpha = AIRY_FWHM_FACTOR * physics.wavelength() / gaussian_fwhm(w0);
    ApertureSpec::from_semi_angle(alpha, physics)
}
