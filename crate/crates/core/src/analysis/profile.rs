use crate::error::{Error, Result};
use crate::field::SampledField;

/// Azimuthally averaged intensity in one-pixel radial bins around the origin.
///
/// Each sample is shared between the two bins bracketing its radius, in proportion to
/// its distance from them; bins extend to the largest circle inside the grid.
pub fn radial_profile(field: &SampledField) -> Vec<f64> {
    let g = field.grid();
    let n = g.n();
    let c = g.center() as f64;
    let bins = g.center();
    let mut sum = vec![0.0; bins];
    let mut weight = vec![0.0; bins];
    for iy in 0..n {
        for ix in 0..n {
            let r = (ix as f64 - c).hypot(iy as f64 - c);
            let b = r.floor() as usize;
            let t = r - b as f64;
            let v = field.get(ix, iy).norm_sqr();
            for (k, w) in [(b, 1.0 - t), (b + 1, t)] {
                if k < bins {
                    sum[k] += w * v;
                    weight[k] += w;
                }
            }
        }
    }
    sum.iter().zip(&weight).map(|(s, &w)| if w > 0.0 { s / w } else { 0.0 }).collect()
}

/// Radius (m) of the brightest ring.
///
/// A least-squares parabola is fitted to the contiguous run of profile bins above 90 % of
/// the maximum (at least the peak bin and its two neighbours); its vertex is the radius.
/// Flat-topped rings thus give a stable answer under grid refinement.
pub fn ring_radius(field: &SampledField) -> Result<f64> {
    let prof = radial_profile(field);
    let (peak, &value) = prof
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::domain("empty grid"))?;
    if value <= 0.0 {
        return Err(Error::ZeroPower);
    }
    let pitch = field.grid().pitch();
    if peak == 0 || peak + 1 >= prof.len() {
        return Ok(peak as f64 * pitch);
    }
    let level = 0.9 * value;
    let mut lo = peak - 1;
    while lo > 0 && prof[lo - 1] >= level {
        lo -= 1;
    }
    let mut hi = peak + 1;
    while hi + 1 < prof.len() && prof[hi + 1] >= level {
        hi += 1;
    }
    // normal equations for y = a + b u + c u², u centered on the peak bin
    let mut m = [[0.0; 3]; 3];
    let mut rhs = [0.0; 3];
    for (i, &y) in prof.iter().enumerate().take(hi + 1).skip(lo) {
        let u = i as f64 - peak as f64;
        let basis = [1.0, u, u * u];
        for r in 0..3 {
            rhs[r] += basis[r] * y;
            for c in 0..3 {
                m[r][c] += basis[r] * basis[c];
            }
        }
    }
    let [_, b, c] = solve3(m, rhs);
    let shift = if c < 0.0 { -b / (2.0 * c) } else { 0.0 };
    let span = (peak - lo).max(hi - peak) as f64;
    Ok((peak as f64 + shift.clamp(-span, span)) * pitch)
}

fn solve3(mut m: [[f64; 3]; 3], mut v: [f64; 3]) -> [f64; 3] {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())).unwrap();
        m.swap(col, pivot);
        v.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            v[row] -= f * v[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let s: f64 = (row + 1..3).map(|k| m[row][k] * x[k]).sum();
        x[row] = (v[row] - s) / m[row][row];
    }
    x
}

/// On-axis intensity relative to the peak intensity.
pub fn central_contrast(field: &SampledField) -> f64 {
    let peak = field.data().iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
    if peak == 0.0 {
        0.0
    } else {
        field.on_axis().norm_sqr() / peak
    }
}
