use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::field::SampledField;

/// Minimum eigenvalue ratio of the intensity second-moment tensor for a defined orientation.
pub const ISOTROPY_THRESHOLD: f64 = 1.2;

/// Intensity centroid and central second moments (meters, meters²).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecondMoments {
    pub cx: f64,
    pub cy: f64,
    pub xx: f64,
    pub yy: f64,
    pub xy: f64,
}

impl SecondMoments {
    /// Eigenvalues of the 2×2 moment tensor, larger first.
    pub fn principal(&self) -> (f64, f64) {
        let mean = 0.5 * (self.xx + self.yy);
        let d = (0.25 * (self.xx - self.yy).powi(2) + self.xy * self.xy).sqrt();
        (mean + d, mean - d)
    }

    /// Major-axis angle in (−π/2, π/2].
    pub fn angle(&self) -> f64 {
        let a = 0.5 * (2.0 * self.xy).atan2(self.xx - self.yy);
        if a <= -FRAC_PI_2 {
            a + PI
        } else {
            a
        }
    }
}

pub fn intensity_moments(field: &SampledField) -> SecondMoments {
    let g = field.grid();
    let n = g.n();
    let rows: Vec<[f64; 6]> = crate::par::map_range(n, |iy| {
        let y = g.coord(iy);
        let mut acc = [0.0; 6];
        for ix in 0..n {
            let x = g.coord(ix);
            let i = field.get(ix, iy).norm_sqr();
            acc[0] += i;
            acc[1] += i * x;
            acc[2] += i * y;
            acc[3] += i * x * x;
            acc[4] += i * y * y;
            acc[5] += i * x * y;
        }
        acc
    });
    let s = rows.iter().fold([0.0; 6], |mut a, r| {
        for k in 0..6 {
            a[k] += r[k];
        }
        a
    });
    let total = s[0];
    if total == 0.0 {
        return SecondMoments { cx: 0.0, cy: 0.0, xx: 0.0, yy: 0.0, xy: 0.0 };
    }
    let (cx, cy) = (s[1] / total, s[2] / total);
    SecondMoments {
        cx,
        cy,
        xx: s[3] / total - cx * cx,
        yy: s[4] / total - cy * cy,
        xy: s[5] / total - cx * cy,
    }
}

/// Principal-axis angle of a lobed intensity pattern and its anisotropy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LobeOrientation {
    /// Radians in (−π/2, π/2].
    pub angle: f64,
    /// Ratio of the larger to the smaller second-moment eigenvalue (≥ 1).
    pub anisotropy: f64,
}

/// Orientation of the intensity's major axis; errors on near-isotropic patterns.
pub fn lobe_orientation(field: &SampledField) -> Result<LobeOrientation> {
    let m = intensity_moments(field);
    let (major, minor) = m.principal();
    let anisotropy = if minor > 0.0 { major / minor } else if major > 0.0 { f64::INFINITY } else { 1.0 };
    if !(anisotropy >= ISOTROPY_THRESHOLD) {
        return Err(Error::NoOrientation {
            anisotropy,
            threshold: ISOTROPY_THRESHOLD,
        });
    }
    Ok(LobeOrientation {
        angle: m.angle(),
        anisotropy,
    })
}

/// Angle between two axes (defined modulo π), in [0, π/2].
pub fn orientation_difference(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}
