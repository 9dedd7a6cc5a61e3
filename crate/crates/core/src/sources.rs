//! Input wavefields: aperture-limited plane waves and vortices in the front focal plane,
//! analytic Laguerre-Gauss / Hermite-Gauss modes, and the half-plane (Hilbert) phase plate.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::SampledField;
use crate::grid::{Grid, Plane};
use crate::physics::BeamPhysics;

/// Circular aperture in the front focal plane, radius `q_max` in 1/m (semi-angle α = q_max / k).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApertureSpec {
    q_max: f64,
}

impl ApertureSpec {
    pub fn new(q_max: f64) -> Result<Self> {
        if !(q_max > 0.0) || !q_max.is_finite() {
            return Err(Error::domain(format!(
                "aperture radius must be positive and finite, got {q_max}"
            )));
        }
        Ok(ApertureSpec { q_max })
    }

    pub fn from_semi_angle(alpha: f64, physics: &BeamPhysics) -> Result<Self> {
        ApertureSpec::new(alpha * physics.wavenumber())
    }

    pub fn q_max(&self) -> f64 {
        self.q_max
    }

    /// Convergence semi-angle α = q_max / k, radians.
    pub fn semi_angle(&self, physics: &BeamPhysics) -> f64 {
        self.q_max / physics.wavenumber()
    }

    /// Errors unless the aperture fits strictly inside the grid's Nyquist radius.
    pub fn check_grid(&self, grid: &Grid) -> Result<()> {
        let nyquist = grid.nyquist_radius();
        if self.q_max >= nyquist {
            return Err(Error::ApertureBeyondNyquist {
                q_max: self.q_max,
                nyquist,
            });
        }
        Ok(())
    }
}

/// Aperture filled with a vortex `exp(i m φ_q)`, φ_q = atan2(q_y, q_x), normalized to unit power.
///
/// Samples exactly on the rim get half weight. For `m != 0` the singular q = 0 sample is
/// set to zero (the azimuthal mean of the vortex phase factor).
pub fn vortex_aperture(m: i32, grid: &Grid, ap: &ApertureSpec) -> Result<SampledField> {
    grid.ensure_plane(Plane::Reciprocal)?;
    ap.check_grid(grid)?;
    let q_max = ap.q_max();
    let tol = 1e-9 * grid.pitch();
    SampledField::from_fn(*grid, move |qx, qy| {
        let r = qx.hypot(qy);
        let weight = if (r - q_max).abs() <= tol {
            0.5
        } else if r < q_max {
            1.0
        } else {
            0.0
        };
        if weight == 0.0 || (m != 0 && r == 0.0) {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(weight, m as f64 * qy.atan2(qx))
    })?
    .normalize()
}

/// Uniformly illuminated aperture (charge-0 vortex).
pub fn plane_aperture(grid: &Grid, ap: &ApertureSpec) -> Result<SampledField> {
    vortex_aperture(0, grid, ap)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModeFamily {
    HermiteGauss,
    LaguerreGauss,
}

/// Positions of the astigmatic line foci along the optic axis, meters.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LineFoci {
    pub x: f64,
    pub y: f64,
}

/// Analytic paraxial mode descriptor.
///
/// `theta` rotates the mode counter-clockwise about the optic axis (HG10 with θ = π/4 has
/// its lobes along x = y). `z` is the evaluation plane; `foci` places the waists of the x and
/// y factors of an HG mode independently (astigmatic beam). LG modes must be stigmatic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeSpec {
    pub family: ModeFamily,
    pub n: u32,
    pub m: u32,
    pub w0: f64,
    pub theta: f64,
    pub z: f64,
    pub foci: LineFoci,
}

impl ModeSpec {
    pub fn hg(n: u32, m: u32, w0: f64) -> Self {
        ModeSpec {
            family: ModeFamily::HermiteGauss,
            n,
            m,
            w0,
            theta: 0.0,
            z: 0.0,
            foci: LineFoci::default(),
        }
    }

    pub fn lg(n: u32, m: u32, w0: f64) -> Self {
        ModeSpec {
            family: ModeFamily::LaguerreGauss,
            ..ModeSpec::hg(n, m, w0)
        }
    }

    pub fn rotated(self, theta: f64) -> Self {
        ModeSpec { theta, ..self }
    }

    pub fn at_plane(self, z: f64) -> Self {
        ModeSpec { z, ..self }
    }

    pub fn with_line_foci(self, x: f64, y: f64) -> Self {
        ModeSpec {
            foci: LineFoci { x, y },
            ..self
        }
    }

    /// Total mode order N = n + m (sets the Gouy phase of LG modes).
    pub fn order(&self) -> u32 {
        self.n + self.m
    }

    /// Topological charge n − m carried by LG_nm in Beijersbergen's labelling (zero for HG).
    ///
    /// With LG10 = (HG10 − i HG01)/√2 the azimuthal factor of LG_nm is `exp(−i (n−m) φ)`,
    /// so the counter-clockwise winding measured by
    /// [`topological_charge`](crate::analysis::topological_charge) is [`Self::winding`].
    pub fn topological_charge(&self) -> i32 {
        match self.family {
            ModeFamily::HermiteGauss => 0,
            ModeFamily::LaguerreGauss => self.n as i32 - self.m as i32,
        }
    }

    /// Counter-clockwise phase winding about the axis.
    pub fn winding(&self) -> i32 {
        -self.topological_charge()
    }

    /// Parses labels such as `HG10` or `LG01` (single-digit indices).
    pub fn parse_label(label: &str, w0: f64) -> Option<ModeSpec> {
        let b = label.as_bytes();
        if b.len() != 4 || !b[2].is_ascii_digit() || !b[3].is_ascii_digit() {
            return None;
        }
        let (n, m) = ((b[2] - b'0') as u32, (b[3] - b'0') as u32);
        match &label[..2] {
            "HG" | "hg" => Some(ModeSpec::hg(n, m, w0)),
            "LG" | "lg" => Some(ModeSpec::lg(n, m, w0)),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.w0 > 0.0) || !self.w0.is_finite() {
            return Err(Error::domain(format!("waist must be positive, got {}", self.w0)));
        }
        if !(self.theta.is_finite() && self.z.is_finite() && self.foci.x.is_finite() && self.foci.y.is_finite()) {
            return Err(Error::domain("mode rotation, plane and foci must be finite"));
        }
        if self.family == ModeFamily::LaguerreGauss && self.foci.x != self.foci.y {
            return Err(Error::domain("LG modes are defined for stigmatic beams only"));
        }
        Ok(())
    }
}

impl fmt::Display for ModeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            ModeFamily::HermiteGauss => "HG",
            ModeFamily::LaguerreGauss => "LG",
        };
        write!(f, "{fam}{}{}", self.n, self.m)
    }
}

/// Physicists' Hermite polynomial H_n(x).
pub fn hermite(n: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalized Laguerre polynomial L_p^a(x).
pub fn laguerre(p: u32, a: f64, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 + a - x);
    if p == 0 {
        return prev;
    }
    for k in 1..p {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Gaussian-beam state of one transverse axis at distance `dz` from its waist.
#[derive(Clone, Copy)]
struct BeamState {
    width: f64,
    /// Coefficient c of the curvature phase `-c s²`.
    curvature: f64,
    gouy: f64,
}

impl BeamState {
    fn new(w0: f64, z_r: f64, k: f64, dz: f64) -> Self {
        BeamState {
            width: w0 * (1.0 + (dz / z_r).powi(2)).sqrt(),
            curvature: k * dz / (2.0 * (dz * dz + z_r * z_r)),
            gouy: (dz / z_r).atan(),
        }
    }

    fn waist(width: f64) -> Self {
        BeamState {
            width,
            curvature: 0.0,
            gouy: 0.0,
        }
    }

    /// Unit-norm 1-D Hermite-Gauss factor with its Gouy phase (n + 1/2)·ψ.
    fn hermite_gauss(&self, n: u32, s: f64) -> Complex64 {
        let w = self.width;
        let amp = (2.0 / PI).powf(0.25) / (2f64.powi(n as i32) * factorial(n) * w).sqrt()
            * hermite(n, 2f64.sqrt() * s / w)
            * (-(s * s) / (w * w)).exp();
        Complex64::from_polar(amp, -self.curvature * s * s + (n as f64 + 0.5) * self.gouy)
    }
}

/// Samples an analytic mode on `grid` and renormalizes it to unit power on that grid.
///
/// On a real-space grid this is the paraxial LG/HG beam at plane `spec.z`. On a reciprocal
/// grid it is the front-focal-plane field that the lens maps onto the waist mode: the
/// same mode with waist 2/w0 times i^(n+m); only `z = 0` and zero foci are accepted there.
pub fn analytic_mode(spec: &ModeSpec, grid: &Grid, physics: &BeamPhysics) -> Result<SampledField> {
    spec.validate()?;
    let k = physics.wavenumber();
    let z_r = PI * spec.w0 * spec.w0 / physics.wavelength();
    let width = match grid.plane() {
        Plane::RealSpace => spec.w0,
        Plane::Reciprocal => {
            if spec.z != 0.0 || spec.foci != LineFoci::default() {
                return Err(Error::domain(
                    "front-focal-plane modes are only defined at their waist (z = 0, no line foci)",
                ));
            }
            2.0 / spec.w0
        }
    };
    if width < 4.0 * grid.pitch() || grid.extent() < 8.0 * width {
        return Err(Error::UnresolvedWaist {
            width,
            pitch: grid.pitch(),
            extent: grid.extent(),
        });
    }

    let (sx, sy, common) = match grid.plane() {
        Plane::RealSpace => (
            BeamState::new(spec.w0, z_r, k, spec.z - spec.foci.x),
            BeamState::new(spec.w0, z_r, k, spec.z - spec.foci.y),
            Complex64::new(1.0, 0.0),
        ),
        Plane::Reciprocal => (
            BeamState::waist(width),
            BeamState::waist(width),
            Complex64::i().powu(spec.order()),
        ),
    };
    let (cos_t, sin_t) = (spec.theta.cos(), spec.theta.sin());
    let spec = *spec;
    let field = SampledField::from_fn(*grid, move |x, y| {
        let u = x * cos_t + y * sin_t;
        let v = -x * sin_t + y * cos_t;
        let value = match spec.family {
            ModeFamily::HermiteGauss => sx.hermite_gauss(spec.n, u) * sy.hermite_gauss(spec.m, v),
            ModeFamily::LaguerreGauss => laguerre_gauss(spec.n, spec.m, &sx, u, v),
        };
        common * value
    })?;
    field.normalize()
}

fn laguerre_gauss(n: u32, m: u32, s: &BeamState, u: f64, v: f64) -> Complex64 {
    let p = n.min(m);
    let l = n.abs_diff(m);
    let signed_l = n as f64 - m as f64;
    let w = s.width;
    let r2 = u * u + v * v;
    let rho = 2.0 * r2 / (w * w);
    let norm = (2.0 * factorial(p) / (PI * factorial(p + l))).sqrt() / w;
    let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
    let amp = sign * norm * rho.sqrt().powi(l as i32) * laguerre(p, l as f64, rho) * (-r2 / (w * w)).exp();
    let phase = -signed_l * v.atan2(u) - s.curvature * r2 + (n + m + 1) as f64 * s.gouy;
    Complex64::from_polar(amp, phase)
}

/// Orientation of a phase-plate edge in the front focal plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlateEdge {
    /// Edge along the q_x axis (line q_y = offset); covers q_y > offset.
    X,
    /// Edge along the q_y axis (line q_x = offset); covers q_x > offset.
    Y,
    /// Edge along q_x = q_y; covers (q_y − q_x)/√2 > offset.
    Diagonal,
    /// Edge along q_x = −q_y; covers (q_x + q_y)/√2 > offset.
    AntiDiagonal,
}

impl PlateEdge {
    pub fn parse(s: &str) -> Option<PlateEdge> {
        match s {
            "x" => Some(PlateEdge::X),
            "y" => Some(PlateEdge::Y),
            "diagonal" => Some(PlateEdge::Diagonal),
            "antidiagonal" => Some(PlateEdge::AntiDiagonal),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PlateEdge::X => "x",
            PlateEdge::Y => "y",
            PlateEdge::Diagonal => "diagonal",
            PlateEdge::AntiDiagonal => "antidiagonal",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlateSide {
    Open,
    Covered,
    Edge,
}

/// Half-plane phase plate: the covered side is multiplied by `t · exp(i phase)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhasePlateSpec {
    edge: PlateEdge,
    offset: f64,
    phase: f64,
    transmission: f64,
}

impl PhasePlateSpec {
    /// `offset` is the signed distance of the edge from the axis in 1/m, `transmission` the
    /// amplitude transmission t of the covered side.
    pub fn new(edge: PlateEdge, offset: f64, phase: f64, transmission: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&transmission) {
            return Err(Error::domain(format!(
                "plate amplitude transmission must lie in [0, 1], got {transmission}"
            )));
        }
        if !offset.is_finite() || !phase.is_finite() {
            return Err(Error::domain("plate offset and phase must be finite"));
        }
        Ok(PhasePlateSpec {
            edge,
            offset,
            phase: phase.rem_euclid(TAU),
            transmission,
        })
    }

    /// π-shifting plate whose covered side transmits `intensity_transmission` of the power.
    pub fn hilbert(edge: PlateEdge, offset: f64, intensity_transmission: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&intensity_transmission) {
            return Err(Error::domain(format!(
                "intensity transmission must lie in [0, 1], got {intensity_transmission}"
            )));
        }
        PhasePlateSpec::new(edge, offset, PI, intensity_transmission.sqrt())
    }

    pub fn edge(&self) -> PlateEdge {
        self.edge
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Phase shift of the covered side, in [0, 2π).
    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn transmission(&self) -> f64 {
        self.transmission
    }

    /// Complex factor applied to the covered side.
    pub fn covered_factor(&self) -> Complex64 {
        Complex64::from_polar(self.transmission, self.phase)
    }

    /// Factor for samples exactly on the edge: the mean of the open and covered factors.
    pub fn edge_factor(&self) -> Complex64 {
        (Complex64::new(1.0, 0.0) + self.covered_factor()) * 0.5
    }

    fn signed_distance(&self, qx: f64, qy: f64) -> f64 {
        let d = match self.edge {
            PlateEdge::X => qy,
            PlateEdge::Y => qx,
            PlateEdge::Diagonal => (qy - qx) * FRAC_1_SQRT_2,
            PlateEdge::AntiDiagonal => (qx + qy) * FRAC_1_SQRT_2,
        };
        d - self.offset
    }

    pub fn side(&self, grid: &Grid, ix: usize, iy: usize) -> PlateSide {
        let d = self.signed_distance(grid.coord(ix), grid.coord(iy));
        if d.abs() <= 1e-9 * grid.pitch() {
            PlateSide::Edge
        } else if d > 0.0 {
            PlateSide::Covered
        } else {
            PlateSide::Open
        }
    }

    fn factor_at(&self, grid: &Grid, ix: usize, iy: usize) -> Complex64 {
        match self.side(grid, ix, iy) {
            PlateSide::Open => Complex64::new(1.0, 0.0),
            PlateSide::Covered => self.covered_factor(),
            PlateSide::Edge => self.edge_factor(),
        }
    }

    /// Splits the incident power of `field` by plate region.
    pub fn power_budget(&self, field: &SampledField) -> PlateBudget {
        let g = *field.grid();
        let n = g.n();
        let dx2 = g.pitch() * g.pitch();
        let mut budget = PlateBudget::default();
        for iy in 0..n {
            let mut row = [0.0; 3];
            for ix in 0..n {
                let p = field.get(ix, iy).norm_sqr();
                match self.side(&g, ix, iy) {
                    PlateSide::Open => row[0] += p,
                    PlateSide::Covered => row[1] += p,
                    PlateSide::Edge => row[2] += p,
                }
            }
            budget.open += row[0] * dx2;
            budget.covered += row[1] * dx2;
            budget.edge += row[2] * dx2;
        }
        budget.covered_loss = budget.covered * (1.0 - self.covered_factor().norm_sqr());
        budget.edge_loss = budget.edge * (1.0 - self.edge_factor().norm_sqr());
        budget
    }
}

/// Incident power per plate region and the power each region removes.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PlateBudget {
    pub open: f64,
    pub covered: f64,
    pub edge: f64,
    /// Power absorbed on the covered side, (1 − t²)·covered.
    pub covered_loss: f64,
    /// Power removed on edge samples by the mean-factor rule.
    pub edge_loss: f64,
}

impl PlateBudget {
    pub fn incident(&self) -> f64 {
        self.open + self.covered + self.edge
    }

    pub fn transmitted(&self) -> f64 {
        self.incident() - self.covered_loss - self.edge_loss
    }

    /// Fraction of incident power falling on the covered side.
    pub fn covered_fraction(&self) -> f64 {
        self.covered / self.incident()
    }
}

/// Applies the plate to a front-focal-plane field.
pub fn hilbert_plate(field: &SampledField, plate: &PhasePlateSpec) -> Result<SampledField> {
    let g = *field.grid();
    g.ensure_plane(Plane::Reciprocal)?;
    let n = g.n();
    let data = field
        .data()
        .iter()
        .enumerate()
        .map(|(i, v)| v * plate.factor_at(&g, i % n, i / n))
        .collect();
    SampledField::new(g, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn physics() -> BeamPhysics {
        BeamPhysics::from_kv(200.0).unwrap()
    }

    fn real_grid() -> Grid {
        Grid::new(256, 2.5e-11, Plane::RealSpace).unwrap()
    }

    fn qgrid() -> Grid {
        Grid::new(64, 1.0, Plane::Reciprocal).unwrap()
    }

    const W0: f64 = 4.2e-10;

    fn mode(spec: ModeSpec) -> SampledField {
        analytic_mode(&spec, &real_grid(), &physics()).unwrap()
    }

    fn overlap(a: &SampledField, b: &SampledField) -> Complex64 {
        let dx2 = a.grid().pitch().powi(2);
        a.data().iter().zip(b.data()).map(|(x, y)| x.conj() * y).sum::<Complex64>() * dx2
    }

    #[test]
    fn polynomials_match_closed_forms() {
        for x in [-1.3, 0.0, 0.4, 2.2] {
            assert!((hermite(2, x) - (4.0 * x * x - 2.0)).abs() < 1e-12);
            assert!((hermite(3, x) - (8.0 * x.powi(3) - 12.0 * x)).abs() < 1e-12);
            assert!((laguerre(1, 1.0, x) - (2.0 - x)).abs() < 1e-12);
            assert!((laguerre(2, 0.0, x) - (x * x - 4.0 * x + 2.0) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn aperture_m0_is_flat_top_hat() {
        let ap = ApertureSpec::new(20.0).unwrap();
        let f = vortex_aperture(0, &qgrid(), &ap).unwrap();
        let first = f.on_axis();
        assert!(first.im == 0.0 && first.re > 0.0);
        for v in f.data() {
            assert!(v.norm() == 0.0 || ((v - first).norm() < 1e-15 || (v - first * 0.5).norm() < 1e-15));
        }
        assert!((f.total_power() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn aperture_vortex_phase_follows_azimuth() {
        let ap = ApertureSpec::new(20.0).unwrap();
        let g = qgrid();
        let f = vortex_aperture(1, &g, &ap).unwrap();
        let v = f.get(32, 32 + 5);
        assert!((v.arg() - PI / 2.0).abs() < 1e-12);
        assert_eq!(f.on_axis(), Complex64::new(0.0, 0.0));
        for m in -3..=3 {
            assert!((vortex_aperture(m, &g, &ap).unwrap().total_power() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn aperture_beyond_nyquist_is_rejected() {
        let ap = ApertureSpec::new(32.0).unwrap();
        assert!(matches!(
            vortex_aperture(1, &qgrid(), &ap),
            Err(Error::ApertureBeyondNyquist { .. })
        ));
        let real = Grid::new(64, 1.0, Plane::RealSpace).unwrap();
        assert!(matches!(vortex_aperture(1, &real, &ApertureSpec::new(2.0).unwrap()), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn hg00_at_waist_is_real_positive_gaussian() {
        let f = mode(ModeSpec::hg(0, 0, W0));
        for v in f.data() {
            assert!(v.im.abs() <= 1e-15 * f.max_abs());
            assert!(v.re >= 0.0);
        }
    }

    #[test]
    fn lg10_is_hg10_minus_i_hg01() {
        let hg10 = mode(ModeSpec::hg(1, 0, W0));
        let hg01 = mode(ModeSpec::hg(0, 1, W0));
        let s = FRAC_1_SQRT_2;
        let lg10 = hg10.combine(Complex64::new(s, 0.0), &hg01, Complex64::new(0.0, -s)).unwrap();
        let lg01 = hg10.combine(Complex64::new(s, 0.0), &hg01, Complex64::new(0.0, s)).unwrap();
        assert!(mode(ModeSpec::lg(1, 0, W0)).max_relative_difference(&lg10).unwrap() < 1e-10);
        assert!(mode(ModeSpec::lg(0, 1, W0)).max_relative_difference(&lg01).unwrap() < 1e-10);
    }

    #[test]
    fn hg_modes_are_orthogonal() {
        let a = mode(ModeSpec::hg(1, 0, W0));
        let b = mode(ModeSpec::hg(0, 1, W0));
        assert!(overlap(&a, &b).norm() < 1e-12);
    }

    #[test]
    fn rotated_first_order_modes_are_diagonal_superpositions() {
        let hg10 = mode(ModeSpec::hg(1, 0, W0));
        let hg01 = mode(ModeSpec::hg(0, 1, W0));
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let diag = hg10.combine(s, &hg01, s).unwrap();
        let r10 = mode(ModeSpec::hg(1, 0, W0).rotated(PI / 4.0));
        let r01 = mode(ModeSpec::hg(0, 1, W0).rotated(-PI / 4.0));
        assert!(r10.max_relative_difference(&diag).unwrap() < 1e-10);
        assert!(r01.max_relative_difference(&diag).unwrap() < 1e-10);
    }

    /// Beijersbergen et al.'s expansion LG_nm = Σ_k i^k b(n, m, k) HG_{N−k, k}.
    fn beijersbergen_b(n: u32, m: u32, k: u32) -> f64 {
        let big_n = n + m;
        // coefficient of t^k in (1 − t)^n (1 + t)^m
        let mut poly = vec![1.0f64];
        for _ in 0..n {
            poly = mul(&poly, &[1.0, -1.0]);
        }
        for _ in 0..m {
            poly = mul(&poly, &[1.0, 1.0]);
        }
        let c = poly.get(k as usize).copied().unwrap_or(0.0);
        (factorial(big_n - k) * factorial(k) / (2f64.powi(big_n as i32) * factorial(n) * factorial(m))).sqrt() * c
    }

    fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    #[test]
    fn higher_lg_modes_follow_the_hg_expansion() {
        for (n, m) in [(1, 1), (2, 0), (0, 2), (2, 1)] {
            let big_n = n + m;
            let mut acc = SampledField::zeros(real_grid());
            for k in 0..=big_n {
                let c = Complex64::i().powu(k) * beijersbergen_b(n, m, k);
                let hg = mode(ModeSpec::hg(big_n - k, k, W0));
                acc = acc.combine(Complex64::new(1.0, 0.0), &hg, c).unwrap();
            }
            let lg = mode(ModeSpec::lg(n, m, W0));
            let err = lg.max_relative_difference(&acc).unwrap();
            assert!(err < 1e-9, "LG{n}{m}: {err}");
        }
    }

    #[test]
    fn charge_and_winding_conventions() {
        assert_eq!(ModeSpec::lg(1, 0, W0).topological_charge(), 1);
        assert_eq!(ModeSpec::lg(1, 0, W0).winding(), -1);
        assert_eq!(ModeSpec::lg(0, 2, W0).winding(), 2);
        assert_eq!(ModeSpec::hg(3, 1, W0).topological_charge(), 0);
        assert_eq!(ModeSpec::parse_label("LG01", W0), Some(ModeSpec::lg(0, 1, W0)));
        assert_eq!(ModeSpec::parse_label("HG1", W0), None);
    }

    #[test]
    fn unresolvable_waists_are_rejected() {
        let g = real_grid();
        assert!(matches!(
            analytic_mode(&ModeSpec::hg(0, 0, 2.0 * g.pitch()), &g, &physics()),
            Err(Error::UnresolvedWaist { .. })
        ));
        assert!(analytic_mode(&ModeSpec::hg(0, 0, g.extent() / 4.0), &g, &physics()).is_err());
        assert!(analytic_mode(&ModeSpec::hg(0, 0, 0.0), &g, &physics()).is_err());
        assert!(analytic_mode(&ModeSpec::lg(1, 0, W0).with_line_foci(1e-7, -1e-7), &g, &physics()).is_err());
    }

    #[test]
    fn off_focus_mode_carries_gouy_phase() {
        let p = physics();
        let z_r = PI * W0 * W0 / p.wavelength();
        let f = mode(ModeSpec::hg(0, 0, W0).at_plane(z_r));
        assert!((f.on_axis().arg() - PI / 4.0).abs() < 1e-12);
        let f = mode(ModeSpec::hg(0, 0, W0).with_line_foci(-z_r, z_r));
        assert!(f.on_axis().arg().abs() < 1e-12);
    }

    fn uniform_disk(g: &Grid, r: f64) -> SampledField {
        plane_aperture(g, &ApertureSpec::new(r).unwrap()).unwrap()
    }

    #[test]
    fn lossless_plate_flips_half_plane_and_keeps_power() {
        let g = qgrid();
        let f = uniform_disk(&g, 20.0);
        let plate = PhasePlateSpec::hilbert(PlateEdge::Y, 0.5, 1.0).unwrap();
        let out = hilbert_plate(&f, &plate).unwrap();
        assert!((out.total_power() - f.total_power()).abs() < 1e-15);
        for iy in 0..64 {
            for ix in 0..64 {
                let expected = if g.coord(ix) > 0.5 { -f.get(ix, iy) } else { f.get(ix, iy) };
                assert!((out.get(ix, iy) - expected).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn plate_outside_aperture_is_identity() {
        let g = qgrid();
        let f = uniform_disk(&g, 10.0);
        let plate = PhasePlateSpec::hilbert(PlateEdge::X, 15.5, 0.3).unwrap();
        assert_eq!(hilbert_plate(&f, &plate).unwrap(), f);
    }

    #[test]
    fn absorbing_plate_scales_covered_intensity() {
        let g = qgrid();
        let f = uniform_disk(&g, 20.0);
        let plate = PhasePlateSpec::hilbert(PlateEdge::Y, 0.5, 0.8).unwrap();
        assert!((plate.transmission() - 0.8f64.sqrt()).abs() < 1e-15);
        let out = hilbert_plate(&f, &plate).unwrap();
        let (ix, iy) = (40, 32);
        assert!((out.get(ix, iy).norm_sqr() / f.get(ix, iy).norm_sqr() - 0.8).abs() < 1e-12);
        let budget = plate.power_budget(&f);
        assert_eq!(budget.edge, 0.0);
        let expected = 1.0 - (1.0 - 0.8) * budget.covered_fraction();
        assert!((out.total_power() - expected).abs() < 1e-12);
    }

    #[test]
    fn edge_samples_take_the_mean_factor() {
        let g = qgrid();
        let f = uniform_disk(&g, 20.0);
        let plate = PhasePlateSpec::hilbert(PlateEdge::Diagonal, 0.0, 0.8).unwrap();
        let out = hilbert_plate(&f, &plate).unwrap();
        let c = g.center();
        let expected = f.get(c + 3, c + 3) * plate.edge_factor();
        assert!((out.get(c + 3, c + 3) - expected).norm() < 1e-15);
        assert_eq!(plate.side(&g, c + 2, c + 5), PlateSide::Covered);
        let budget = plate.power_budget(&f);
        assert!((out.total_power() - budget.transmitted()).abs() < 1e-12);
    }

    #[test]
    fn plate_parameters_are_validated() {
        assert!(PhasePlateSpec::new(PlateEdge::X, 0.0, PI, 1.2).is_err());
        assert!(PhasePlateSpec::hilbert(PlateEdge::X, 0.0, -0.1).is_err());
        let p = PhasePlateSpec::new(PlateEdge::X, 0.0, 5.0 * PI, 1.0).unwrap();
        assert!((p.phase() - PI).abs() < 1e-12);
    }
}
