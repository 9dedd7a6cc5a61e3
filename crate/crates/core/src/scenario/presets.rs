//! Built-in scenarios: figure reproductions, the Gouy checks and the convergence pair.
//!
//! All figure presets use n = 1024 over a 10 nm field of view; images are cropped to the
//! central 5 nm. The condenser focal length is not known, so f = 1 mm throughout; nothing
//! observed in the back focal plane depends on it.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use super::config::{parse_scenario, Scenario};
use super::expect::Expectation;
use super::run::{run_checked, RunReport};
use crate::error::Result;

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub text: &'static str,
    pub expectations: &'static [Expectation],
}

impl Preset {
    pub fn scenario(&self) -> Result<Scenario> {
        parse_scenario(self.text)
    }

    pub fn run(&self) -> Result<RunReport> {
        run_checked(&self.scenario()?, self.expectations)
    }
}

const FIG3_CONVERTER: &[Expectation] = &[Expectation::Diagonal { tol: 0.05 }, Expectation::Lossless { tol: 1e-9 }];

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig3_df0",
        summary: "m = -1 vortex, no astigmatism: focused vortex ring",
        text: "\
name = fig3_df0
voltage_kv = 200 kV
grid_n = 1024
fov_nm = 10 nm
source.kind = vortex
source.m = -1
aperture.calibrate_zr_nm = 220 nm
lens.f_mm = 1 mm
lens.df_nm = 0 nm
lens.cs_mm = 1.2 mm
analyses = orientation, ring, winding, circulation
out.dir = runs/fig3_df0
",
        expectations: &[
            Expectation::Isotropic,
            Expectation::WindingBand { winding: -1, from: 0.3, to: 0.7 },
            Expectation::CirculationFollowsWinding,
            Expectation::Lossless { tol: 1e-9 },
        ],
    },
    Preset {
        name: "fig3_m_minus1",
        summary: "m = -1 vortex through the converter, df = 220 nm",
        text: "\
name = fig3_m_minus1
voltage_kv = 200 kV
grid_n = 1024
fov_nm = 10 nm
source.kind = vortex
source.m = -1
aperture.calibrate_zr_nm = 220 nm
lens.f_mm = 1 mm
lens.df_nm = 220 nm
lens.cs_mm = 1.2 mm
analyses = orientation, overlap, relative_gouy
out.dir = runs/fig3_m_minus1
",
        expectations: FIG3_CONVERTER,
    },
    Preset {
        name: "fig3_m_plus1",
        summary: "m = +1 vortex through the converter, df = 220 nm",
        text: "\
name = fig3_m_plus1
voltage_kv = 200 kV
grid_n = 1024
fov_nm = 10 nm
source.kind = vortex
source.m = 1
aperture.calibrate_zr_nm = 220 nm
lens.f_mm = 1 mm
lens.df_nm = 220 nm
lens.cs_mm = 1.2 mm
analyses = orientation, overlap, relative_gouy
out.dir = runs/fig3_m_plus1
",
        expectations: FIG3_CONVERTER,
    },
    Preset {
        name: "fig4_df700",
        summary: "m = +1 vortex with df = 700 nm: lobes persist",
        text: "\
name = fig4_df700
voltage_kv = 200 kV
grid_n = 1024
fov_nm = 10 nm
source.kind = vortex
source.m = 1
aperture.calibrate_zr_nm = 220 nm
lens.f_mm = 1 mm
lens.df_nm = 700 nm
lens.cs_mm = 1.2 mm
analyses = orientation, ring, winding, overlap
out.dir = runs/fig4_df700
",
        expectations: &[Expectation::MinAnisotropy(1.5), Expectation::Lossless { tol: 1e-9 }],
    },
    Preset {
        name: "fig5_plate_only",
        summary: "plane wave + Hilbert plate, no astigmatism: two lobes",
        // The plate edge runs along q_x = q_y, offset by half a diagonal sample spacing
        // (0.0887 mrad at 200 kV) so that no aperture sample lies on the edge itself.
        text: "\
name = fig5_plate_only
voltage_kv = 200 kV
grid_n = 1024
fov_nm = 10 nm
source.kind = plane
aperture.calibrate_zr_nm = 220 nm
plate.enabled = true
plate.axis = diagonal
plate.offset = 0.0887 mrad
plate.phase_pi = 1
plate.intensity_transmission = 1
lens.f_mm = 1 mm
lens.df_nm = 0 nm
lens.cs_mm = 1.2 mm
analyses = orientation, overlap
out.dir = runs/fig5_plate_only
",
        expectations: &[
            Expectation::Orientation { angle: -FRAC_PI_4, tol: 0.05 },
            Expectation::Lossless { tol: 1e-9 },
        ],
    },
    Preset {
        name: "fig6_generator_ideal",
        summary: "plane wave + ideal Hilbert plate + df = z_R: vortex generator",
        text: "\
name = fig6_generator_ideal
voltage_kv = 200 kV
grid_n = 1024
fov_nm = 10 nm
source.kind = plane
aperture.calibrate_zr_nm = 220 nm
plate.enabled = true
plate.axis = diagonal
plate.offset = 0.0887 mrad
plate.phase_pi = 1
plate.intensity_transmission = 1
lens.f_mm = 1 mm
lens.df_nm = 220 nm
lens.cs_mm = 1.2 mm
analyses = orientation, ring, winding, circulation, overlap
out.dir = runs/fig6_generator_ideal
",
        expectations: &[
            Expectation::WindingBand { winding: 1, from: 0.3, to: 0.7 },
            Expectation::MaxCentralContrast(0.01),
            Expectation::CirculationFollowsWinding,
            Expectation::Lossless { tol: 1e-9 },
        ],
    },
    Preset {
        name: "fig7_generator_degraded",
        summary: "86 kV generator with 20 % plate absorption, df = 500 nm, defocus 400 nm",
        // Only the defocus magnitude is known; z2 = -400 nm picks a sign.
        // The aperture is the 200 kV calibration (z_R = 220 nm there) reused at 86 kV.
        text: "\
name = fig7_generator_degraded
voltage_kv = 86 kV
grid_n = 1024
fov_nm = 10 nm
source.kind = plane
aperture.alpha_mrad = 2.615 mrad
plate.enabled = true
plate.axis = diagonal
plate.offset = 0.1420 mrad
plate.phase_pi = 1
plate.intensity_transmission = 0.8
lens.f_mm = 1 mm
lens.df_nm = 500 nm
lens.cs_mm = 1.2 mm
lens.z2_nm = -400 nm
analyses = orientation, ring, winding, circulation
out.dir = runs/fig7_generator_degraded
",
        expectations: &[
            Expectation::WindingSomewhere { abs: 1 },
            Expectation::PlateAbsorption { transmission: 0.8, tol: 1e-9 },
        ],
    },
    Preset {
        name: "gouy_gaussian",
        summary: "stigmatic Gaussian through ±3 z_R against arctan(z/z_R)",
        text: "\
name = gouy_gaussian
voltage_kv = 200 kV
grid_n = 1024
fov_nm = 10 nm
source.kind = mode
source.mode = HG00
source.w0_nm = 0.41908 nm
lens.f_mm = 1 mm
lens.df_nm = 0 nm
lens.cs_mm = 0 mm
analyses = gouy
out.dir = runs/gouy_gaussian
",
        expectations: &[Expectation::MaxGouyDeviation(0.02), Expectation::Lossless { tol: 1e-9 }],
    },
    Preset {
        name: "gouy_astigmatic",
        summary: "Gaussian LG01 through df = z_R: π/2 converter and HG output",
        text: "\
name = gouy_astigmatic
voltage_kv = 200 kV
grid_n = 1024
fov_nm = 10 nm
source.kind = mode
source.mode = LG01
source.w0_nm = 0.41908 nm
lens.f_mm = 1 mm
lens.df_nm = 220 nm
lens.cs_mm = 0 mm
analyses = orientation, overlap, relative_gouy
out.dir = runs/gouy_astigmatic
",
        expectations: &[
            Expectation::RelativeGouy { value: FRAC_PI_2, tol: 0.05 },
            Expectation::MinFramePower(0.99),
            Expectation::Lossless { tol: 1e-9 },
        ],
    },
    Preset {
        name: "converge_n512",
        summary: "fig3_m_plus1 on a 512 grid",
        text: "\
name = converge_n512
voltage_kv = 200 kV
grid_n = 512
fov_nm = 10 nm
source.kind = vortex
source.m = 1
aperture.calibrate_zr_nm = 220 nm
lens.f_mm = 1 mm
lens.df_nm = 220 nm
lens.cs_mm = 1.2 mm
analyses = orientation, overlap, relative_gouy
out.dir = runs/converge_n512
",
        expectations: FIG3_CONVERTER,
    },
    Preset {
        name: "converge_n2048",
        summary: "fig3_m_plus1 on a 2048 grid",
        text: "\
name = converge_n2048
voltage_kv = 200 kV
grid_n = 2048
fov_nm = 10 nm
source.kind = vortex
source.m = 1
aperture.calibrate_zr_nm = 220 nm
lens.f_mm = 1 mm
lens.df_nm = 220 nm
lens.cs_mm = 1.2 mm
analyses = orientation, overlap, relative_gouy
out.dir = runs/converge_n2048
",
        expectations: FIG3_CONVERTER,
    },
];

/// The presets reproducing figures (the acceptance suite's "full preset suite").
pub const FIGURE_PRESETS: [&str; 7] = [
    "fig3_df0",
    "fig3_m_minus1",
    "fig3_m_plus1",
    "fig4_df700",
    "fig5_plate_only",
    "fig6_generator_ideal",
    "fig7_generator_degraded",
];

pub fn preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}
