use num_complex::Complex64;

use super::gouy::gouy_analytic;
use crate::error::Result;
use crate::field::SampledField;
use crate::optics::{GaussianBeamSpec, LensParams};
use crate::par;
use crate::physics::BeamPhysics;
use crate::sources::{analytic_mode, ModeSpec};

/// ⟨a|b⟩ = Σ conj(a)·b·pitch².
pub fn inner_product(a: &SampledField, b: &SampledField) -> Result<Complex64> {
    a.grid().ensure_matches(b.grid())?;
    let n = a.grid().n();
    let dx2 = a.grid().pitch().powi(2);
    let rows = par::map_range(n, |iy| {
        let ra = &a.data()[iy * n..(iy + 1) * n];
        let rb = &b.data()[iy * n..(iy + 1) * n];
        ra.iter().zip(rb).map(|(x, y)| x.conj() * y).sum::<Complex64>()
    });
    Ok(rows.into_iter().sum::<Complex64>() * dx2)
}

/// ⟨mode|field⟩ for the analytic mode sampled on the field's grid.
pub fn mode_overlap(field: &SampledField, spec: &ModeSpec, physics: &BeamPhysics) -> Result<Complex64> {
    let mode = analytic_mode(spec, field.grid(), physics)?;
    inner_product(&mode, field)
}

/// First-order HG mode of the astigmatic Gaussian beam behind `lens`, rotated by `theta`.
///
/// The beam has waist `w0` with its x and y waists at the lens line foci, evaluated in
/// the observation plane `lens.z2`. The frame is cos θ·HG10 + sin θ·HG01 with each
/// component's Gouy phase removed, i.e. the shape an ideal converter produces from the
/// matching LG mode. θ = ±π/4 gives the two diagonal HG frames.
pub fn converter_frame(
    grid: &crate::grid::Grid,
    physics: &BeamPhysics,
    w0: f64,
    lens: &LensParams,
    theta: f64,
) -> Result<SampledField> {
    let foci = lens.line_foci();
    let beam = GaussianBeamSpec::stigmatic(w0, physics)?.with_line_foci(foci);
    let z = lens.z2;
    let component = |n: u32, m: u32| -> Result<SampledField> {
        let spec = ModeSpec::hg(n, m, w0).at_plane(z).with_line_foci(foci.x, foci.y);
        let gouy = gouy_analytic(n, m, z, &beam);
        Ok(analytic_mode(&spec, grid, physics)?.map(|v| v * Complex64::from_polar(1.0, -gouy)))
    };
    let hg10 = component(1, 0)?;
    let hg01 = component(0, 1)?;
    hg10.combine(
        Complex64::new(theta.cos(), 0.0),
        &hg01,
        Complex64::new(theta.sin(), 0.0),
    )?
    .normalize()
}

/// Projection of a converter output onto the two diagonal HG frames.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameDecomposition {
    /// ⟨frame(+π/4)|field⟩
    pub plus: Complex64,
    /// ⟨frame(−π/4)|field⟩
    pub minus: Complex64,
    /// Power outside both frames: ‖field‖² − |plus|² − |minus|².
    pub residual: f64,
}

impl FrameDecomposition {
    /// Larger of the two frame powers.
    pub fn best_power(&self) -> f64 {
        self.plus.norm_sqr().max(self.minus.norm_sqr())
    }

    /// Angle (±π/4) of the dominant frame.
    pub fn best_angle(&self) -> f64 {
        if self.plus.norm_sqr() >= self.minus.norm_sqr() {
            std::f64::consts::FRAC_PI_4
        } else {
            -std::f64::consts::FRAC_PI_4
        }
    }
}

/// Decomposes `field` on the ±π/4 converter frames of waist `w0` behind `lens`.
pub fn converter_decomposition(
    field: &SampledField,
    physics: &BeamPhysics,
    w0: f64,
    lens: &LensParams,
) -> Result<FrameDecomposition> {
    use std::f64::consts::FRAC_PI_4;
    let g = field.grid();
    let plus = inner_product(&converter_frame(g, physics, w0, lens, FRAC_PI_4)?, field)?;
    let minus = inner_product(&converter_frame(g, physics, w0, lens, -FRAC_PI_4)?, field)?;
    Ok(FrameDecomposition {
        plus,
        minus,
        residual: field.total_power() - plus.norm_sqr() - minus.norm_sqr(),
    })
}
