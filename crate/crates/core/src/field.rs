//! Sampled complex wavefields and the raw `VXF1` dump format.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid, Plane};
use crate::par;

/// Complex scalar wavefunction on a square [`Grid`].
///
/// Samples are stored row-major: `data[iy * n + ix]`, with `ix` along x (or q_x).
/// Fields are immutable; every operation returns a new field.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    grid: Grid,
    data: Vec<Complex64>,
}

impl SampledField {
    pub fn new(grid: Grid, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::domain(format!(
                "{} samples supplied for a {}x{} grid",
                data.len(),
                grid.n(),
                grid.n()
            )));
        }
        if let Some(i) = data.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::domain(format!(
                "non-finite sample at index ({}, {})",
                i % grid.n(),
                i / grid.n()
            )));
        }
        Ok(SampledField { grid, data })
    }

    pub fn zeros(grid: Grid) -> Self {
        SampledField {
            grid,
            data: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Samples `f(x, y)` at every grid coordinate.
    pub fn from_fn<F>(grid: Grid, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Complex64 + Sync + Send,
    {
        let n = grid.n();
        let mut data = vec![Complex64::new(0.0, 0.0); grid.len()];
        par::for_each_row_mut(&mut data, n, |iy, row| {
            let y = grid.coord(iy);
            for (ix, v) in row.iter_mut().enumerate() {
                *v = f(grid.coord(ix), y);
            }
        });
        SampledField::new(grid, data)
    }

    pub(crate) fn from_raw(grid: Grid, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), grid.len());
        SampledField { grid, data }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn get(&self, ix: usize, iy: usize) -> Complex64 {
        self.data[iy * self.grid.n() + ix]
    }

    /// Value at the grid origin.
    pub fn on_axis(&self) -> Complex64 {
        let c = self.grid.center();
        self.get(c, c)
    }

    /// Σ|ψ|² · pitch².
    pub fn total_power(&self) -> f64 {
        let n = self.grid.n();
        let dx = self.grid.pitch();
        par::sum_rows(n, |iy| {
            self.data[iy * n..(iy + 1) * n]
                .iter()
                .map(|v| v.norm_sqr())
                .sum::<f64>()
        }) * dx
            * dx
    }

    /// Rescales to unit total power, leaving every sample phase untouched.
    pub fn normalize(&self) -> Result<SampledField> {
        let p = self.total_power();
        if !(p > 0.0) {
            return Err(Error::ZeroPower);
        }
        Ok(self.scaled(1.0 / p.sqrt()))
    }

    pub fn scaled(&self, s: f64) -> SampledField {
        self.map(|v| v * s)
    }

    pub fn map<F>(&self, f: F) -> SampledField
    where
        F: Fn(Complex64) -> Complex64 + Sync + Send,
    {
        let n = self.grid.n();
        let mut data = self.data.clone();
        par::for_each_row_mut(&mut data, n, |_, row| {
            for v in row.iter_mut() {
                *v = f(*v);
            }
        });
        SampledField::from_raw(self.grid, data)
    }

    /// |ψ|² per sample, row-major.
    pub fn intensity(&self) -> Vec<f64> {
        self.data.iter().map(|v| v.norm_sqr()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// max |a - b| / max |a|: sample-wise disagreement relative to the peak of `self`.
    pub fn max_relative_difference(&self, other: &SampledField) -> Result<f64> {
        self.grid.ensure_matches(&other.grid)?;
        let peak = self.max_abs();
        let diff = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        Ok(if peak > 0.0 { diff / peak } else { diff })
    }

    /// Sample-wise linear combination `a·self + b·other`.
    pub fn combine(&self, a: Complex64, other: &SampledField, b: Complex64) -> Result<SampledField> {
        self.grid.ensure_matches(&other.grid)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(SampledField::from_raw(self.grid, data))
    }

    /// Bilinear interpolation at physical coordinates (x, y); `None` outside the grid.
    pub fn sample_bilinear(&self, x: f64, y: f64) -> Option<Complex64> {
        let n = self.grid.n();
        let c = self.grid.center() as f64;
        let fx = x / self.grid.pitch() + c;
        let fy = y / self.grid.pitch() + c;
        if !(fx >= 0.0 && fy >= 0.0) {
            return None;
        }
        let (ix, iy) = (fx.floor() as usize, fy.floor() as usize);
        if ix + 1 >= n || iy + 1 >= n {
            return None;
        }
        let (tx, ty) = (fx - ix as f64, fy - iy as f64);
        let v00 = self.get(ix, iy);
        let v10 = self.get(ix + 1, iy);
        let v01 = self.get(ix, iy + 1);
        let v11 = self.get(ix + 1, iy + 1);
        Some(
            v00 * ((1.0 - tx) * (1.0 - ty))
                + v10 * (tx * (1.0 - ty))
                + v01 * ((1.0 - tx) * ty)
                + v11 * (tx * ty),
        )
    }

    /// Writes the `VXF1` dump: a text header line `VXF1 n pitch plane`, then n² little-endian
    /// `(re, im)` f64 pairs in row-major order.
    pub fn write_vxf<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "VXF1 {} {:e} {}",
            self.grid.n(),
            self.grid.pitch(),
            self.grid.plane().tag()
        )?;
        let mut buf = Vec::with_capacity(self.data.len() * 16);
        for v in &self.data {
            buf.extend_from_slice(&v.re.to_le_bytes());
            buf.extend_from_slice(&v.im.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_vxf<R: BufRead>(mut r: R) -> Result<SampledField> {
        let mut header = String::new();
        r.read_line(&mut header)?;
        let parts: Vec<&str> = header.trim_end_matches('\n').split(' ').collect();
        let bad = |what: &str| Error::Dump(format!("{what} in header {:?}", header.trim_end()));
        if parts.len() != 4 || parts[0] != "VXF1" {
            return Err(bad("missing VXF1 magic or wrong token count"));
        }
        let n: usize = parts[1].parse().map_err(|_| bad("bad size"))?;
        let pitch: f64 = parts[2].parse().map_err(|_| bad("bad pitch"))?;
        let plane = Plane::from_tag(parts[3]).ok_or_else(|| bad("bad plane tag"))?;
        let grid = Grid::new(n, pitch, plane)?;
        let mut bytes = vec![0u8; grid.len() * 16];
        r.read_exact(&mut bytes)
            .map_err(|e| Error::Dump(format!("truncated sample block: {e}")))?;
        let mut trailing = [0u8; 1];
        if r.read(&mut trailing)? != 0 {
            return Err(Error::Dump("trailing bytes after sample block".into()));
        }
        let data = bytes
            .chunks_exact(16)
            .map(|c| {
                Complex64::new(
                    f64::from_le_bytes(c[..8].try_into().unwrap()),
                    f64::from_le_bytes(c[8..].try_into().unwrap()),
                )
            })
            .collect();
        SampledField::new(grid, data).map_err(|e| Error::Dump(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid(n: usize, dx: f64) -> Grid {
        Grid::new(n, dx, Plane::RealSpace).unwrap()
    }

    fn blob(g: Grid) -> SampledField {
        SampledField::from_fn(g, |x, y| {
            Complex64::from_polar((-(x * x + 2.0 * y * y)).exp(), 0.7 * x - y)
        })
        .unwrap()
    }

    #[test]
    fn zero_field_has_zero_power_and_cannot_normalize() {
        let f = SampledField::zeros(grid(16, 1.0));
        assert_eq!(f.total_power(), 0.0);
        assert!(matches!(f.normalize(), Err(Error::ZeroPower)));
    }

    #[test]
    fn single_unit_sample_has_unit_power() {
        let g = grid(16, 1.0);
        let mut data = vec![Complex64::new(0.0, 0.0); g.len()];
        data[37] = Complex64::from_polar(1.0, 2.0);
        assert!((SampledField::new(g, data).unwrap().total_power() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_finite_samples() {
        let g = grid(16, 1.0);
        let mut data = vec![Complex64::new(0.0, 0.0); g.len()];
        data[3] = Complex64::new(f64::NAN, 0.0);
        assert!(SampledField::new(g, data).is_err());
    }

    #[test]
    fn normalize_removes_scale_and_is_idempotent() {
        let f = blob(grid(64, 0.1));
        let a = f.normalize().unwrap();
        let b = f.scaled(5.0).normalize().unwrap();
        assert!((a.total_power() - 1.0).abs() < 1e-12);
        assert!(a.max_relative_difference(&b).unwrap() < 1e-15);
        assert!(a.max_relative_difference(&a.normalize().unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn bilinear_hits_samples_exactly() {
        let f = blob(grid(32, 0.2));
        let g = *f.grid();
        assert_eq!(f.sample_bilinear(g.coord(10), g.coord(20)), Some(f.get(10, 20)));
        assert!(f.sample_bilinear(g.coord(31) + 0.01, 0.0).is_none());
    }

    #[test]
    fn vxf_round_trip_and_header() {
        let f = blob(grid(16, 3.3e-11));
        let mut buf = Vec::new();
        f.write_vxf(&mut buf).unwrap();
        assert!(buf.starts_with(b"VXF1 16 3.3e-11 real\n"));
        let back = SampledField::read_vxf(&buf[..]).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn vxf_rejects_truncation_and_bad_magic() {
        let f = blob(grid(16, 1.0));
        let mut buf = Vec::new();
        f.write_vxf(&mut buf).unwrap();
        assert!(SampledField::read_vxf(&buf[..buf.len() - 1]).is_err());
        let mut longer = buf.clone();
        longer.push(0);
        assert!(SampledField::read_vxf(&longer[..]).is_err());
        buf[0] = b'X';
        assert!(SampledField::read_vxf(&buf[..]).is_err());
    }

    proptest! {
        #[test]
        fn normalize_preserves_phases(scale in 1e-6f64..1e6, dx in 1e-12f64..1e-9) {
            let g = grid(16, dx);
            let f = SampledField::from_fn(g, |x, y| {
                Complex64::from_polar(scale * (1.0 + (x / dx).sin().abs()), (y / dx) * 0.37 - 1.0)
            }).unwrap();
            let nf = f.normalize().unwrap();
            prop_assert!((nf.total_power() - 1.0).abs() < 1e-12);
            for (a, b) in f.data().iter().zip(nf.data()) {
                let d = (a.arg() - b.arg()).abs();
                prop_assert!(d < 1e-12);
            }
        }
    }
}
