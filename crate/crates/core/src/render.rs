//! Image output: grayscale PGM, false-color and phase-wheel PNG.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::field::SampledField;
use crate::grid::Plane;

/// Square window of samples centered on the grid origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub start: usize,
    pub size: usize,
}

impl Window {
    /// The whole grid, or the centered `side`-meter square if given.
    pub fn for_field(field: &SampledField, side: Option<f64>) -> Result<Window> {
        let g = field.grid();
        let n = g.n();
        let Some(side) = side else {
            return Ok(Window { start: 0, size: n });
        };
        let size = (side / g.pitch()).round() as usize;
        if !(side > 0.0) || size == 0 || size > n {
            return Err(Error::domain(format!(
                "crop side {side:e} m does not fit a {:e} m grid",
                g.extent()
            )));
        }
        let start = g.center().saturating_sub(size / 2).min(n - size);
        Ok(Window { start, size })
    }

    fn pixels<'a>(&self, field: &'a SampledField) -> impl Iterator<Item = num_complex::Complex64> + 'a {
        let (s, k) = (self.start, self.size);
        (s..s + k).flat_map(move |iy| (s..s + k).map(move |ix| field.get(ix, iy)))
    }
}

fn ensure_real(field: &SampledField) -> Result<()> {
    field.grid().ensure_plane(Plane::RealSpace)
}

fn gray_levels(field: &SampledField, win: Window) -> Vec<u8> {
    let rho: Vec<f64> = win.pixels(field).map(|v| v.norm_sqr()).collect();
    let max = rho.iter().copied().fold(0.0, f64::max);
    rho.iter()
        .map(|&r| if max > 0.0 { (255.0 * r / max).round() as u8 } else { 0 })
        .collect()
}

/// Sidecar text file next to an image: `<image>.txt`.
pub fn sidecar_path(image: &Path) -> PathBuf {
    let mut s = image.as_os_str().to_owned();
    s.push(".txt");
    PathBuf::from(s)
}

fn write_sidecar(image: &Path, field: &SampledField, win: Window) -> Result<PathBuf> {
    let path = sidecar_path(image);
    let side = win.size as f64 * field.grid().pitch();
    std::fs::write(&path, format!("side_m = {side:e}\npixels = {}\n", win.size))?;
    Ok(path)
}

/// Writes |ψ|² as a binary 8-bit PGM scaled linearly to [0, max], plus its side-length sidecar.
///
/// Returns the paths written.
pub fn render_intensity(field: &SampledField, path: &Path, crop: Option<f64>) -> Result<Vec<PathBuf>> {
    ensure_real(field)?;
    let win = Window::for_field(field, crop)?;
    let mut w = BufWriter::new(File::create(path)?);
    write!(w, "P5\n{} {}\n255\n", win.size, win.size)?;
    w.write_all(&gray_levels(field, win))?;
    w.flush()?;
    Ok(vec![path.to_path_buf(), write_sidecar(path, field, win)?])
}

/// Black → red → yellow → white ramp.
fn heat(t: f64) -> [u8; 3] {
    let t = t.clamp(0.0, 1.0) * 3.0;
    let ch = |x: f64| (255.0 * x.clamp(0.0, 1.0)).round() as u8;
    [ch(t), ch(t - 1.0), ch(t - 2.0)]
}

/// HSV with full saturation; `h` in degrees.
pub fn hsv_to_rgb(h: f64, v: f64) -> [u8; 3] {
    let h = h.rem_euclid(360.0) / 60.0;
    let x = 1.0 - (h % 2.0 - 1.0).abs();
    let (r, g, b) = match h as u32 {
        0 => (1.0, x, 0.0),
        1 => (x, 1.0, 0.0),
        2 => (0.0, 1.0, x),
        3 => (0.0, x, 1.0),
        4 => (x, 0.0, 1.0),
        _ => (1.0, 0.0, x),
    };
    let ch = |c: f64| (255.0 * c * v.clamp(0.0, 1.0)).round() as u8;
    [ch(r), ch(g), ch(b)]
}

fn write_png(path: &Path, size: usize, rgb: &[u8]) -> Result<()> {
    let w = BufWriter::new(File::create(path)?);
    let mut enc = png::Encoder::new(w, size as u32, size as u32);
    enc.set_color(png::ColorType::Rgb);
    enc.set_depth(png::BitDepth::Eight);
    let mut writer = enc.write_header()?;
    writer.write_image_data(rgb)?;
    writer.finish()?;
    Ok(())
}

/// False-color PNG of |ψ|², plus sidecar.
pub fn render_intensity_png(field: &SampledField, path: &Path, crop: Option<f64>) -> Result<Vec<PathBuf>> {
    ensure_real(field)?;
    let win = Window::for_field(field, crop)?;
    let rgb: Vec<u8> = gray_levels(field, win)
        .into_iter()
        .flat_map(|g| heat(g as f64 / 255.0))
        .collect();
    write_png(path, win.size, &rgb)?;
    Ok(vec![path.to_path_buf(), write_sidecar(path, field, win)?])
}

/// Phase-wheel PNG: hue from arg ψ (−π → 0°, π → 360°), value from |ψ|/max|ψ|.
/// Samples with ρ < 1e-12·max ρ are black.
pub fn render_phase(field: &SampledField, path: &Path, crop: Option<f64>) -> Result<Vec<PathBuf>> {
    ensure_real(field)?;
    let win = Window::for_field(field, crop)?;
    let amax = win.pixels(field).map(|v| v.norm()).fold(0.0, f64::max);
    let rgb: Vec<u8> = win
        .pixels(field)
        .flat_map(|v| {
            if amax == 0.0 || v.norm_sqr() < 1e-12 * amax * amax {
                [0, 0, 0]
            } else {
                hsv_to_rgb((v.arg() + PI) / (2.0 * PI) * 360.0, v.norm() / amax)
            }
        })
        .collect();
    write_png(path, win.size, &rgb)?;
    Ok(vec![path.to_path_buf(), write_sidecar(path, field, win)?])
}
