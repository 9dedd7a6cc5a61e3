//! Flat `key = value` scenario documents.
//!
//! Every dimensional value carries its unit (`200 kV`, `220 nm`, `1.2 mm`, `2.6 mrad`);
//! a missing or different unit is an error. `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::sources::{ModeFamily, ModeSpec, PlateEdge};

/// Observables a scenario can request.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Analysis {
    /// Principal axis and anisotropy of the output intensity.
    Orientation,
    /// Ring radius of the azimuthally averaged intensity and on-axis contrast.
    Ring,
    /// Loop windings at fractions of the ring radius.
    Winding,
    /// Current circulation at half the ring radius.
    Circulation,
    /// Projection on the two diagonal converter frames.
    Overlap,
    /// On-axis phase against the Gaussian Gouy law over ±3 z_R.
    Gouy,
    /// HG10 minus HG01 Gouy phase in the observation plane.
    RelativeGouy,
}

impl Analysis {
    pub const ALL: [Analysis; 7] = [
        Analysis::Orientation,
        Analysis::Ring,
        Analysis::Winding,
        Analysis::Circulation,
        Analysis::Overlap,
        Analysis::Gouy,
        Analysis::RelativeGouy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Analysis::Orientation => "orientation",
            Analysis::Ring => "ring",
            Analysis::Winding => "winding",
            Analysis::Circulation => "circulation",
            Analysis::Overlap => "overlap",
            Analysis::Gouy => "gouy",
            Analysis::RelativeGouy => "relative_gouy",
        }
    }

    pub fn parse(s: &str) -> Option<Analysis> {
        Analysis::ALL.into_iter().find(|a| a.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OutputFormat {
    Pgm,
    Png,
    Csv,
    Vxf,
}

impl OutputFormat {
    pub const ALL: [OutputFormat; 4] = [OutputFormat::Pgm, OutputFormat::Png, OutputFormat::Csv, OutputFormat::Vxf];

    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Pgm => "pgm",
            OutputFormat::Png => "png",
            OutputFormat::Csv => "csv",
            OutputFormat::Vxf => "vxf",
        }
    }

    pub fn parse(s: &str) -> Option<OutputFormat> {
        OutputFormat::ALL.into_iter().find(|f| f.name() == s)
    }
}

/// Front-focal-plane source.
#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    /// Aperture filled with exp(imφ).
    Vortex { m: i32 },
    /// Uniform aperture.
    Plane,
    /// Gaussian-beam mode whose waist `w0_nm` sits in the observation plane family.
    Mode { label: String, w0_nm: f64 },
}

impl Source {
    pub fn kind(&self) -> &'static str {
        match self {
            Source::Vortex { .. } => "vortex",
            Source::Plane => "plane",
            Source::Mode { .. } => "mode",
        }
    }

    /// The mode spec of a `Mode` source, waist in meters.
    pub fn mode_spec(&self) -> Option<ModeSpec> {
        match self {
            Source::Mode { label, w0_nm } => ModeSpec::parse_label(label, w0_nm * 1e-9),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ApertureChoice {
    /// Semi-angle in mrad.
    Alpha { mrad: f64 },
    /// Semi-angle chosen so the Airy-matched Gaussian has this Rayleigh range (nm).
    CalibrateRayleigh { nm: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlateConfig {
    pub axis: PlateEdge,
    /// Edge distance from the axis as a scattering angle, mrad.
    pub offset_mrad: f64,
    /// Phase of the covered side in units of π.
    pub phase_pi: f64,
    pub intensity_transmission: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LensConfig {
    pub f_mm: f64,
    pub df_nm: f64,
    pub cs_mm: f64,
    pub z1_nm: f64,
    pub z2_nm: f64,
}

/// A validated scenario, values in the units of their config keys.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub voltage_kv: f64,
    pub grid_n: usize,
    pub fov_nm: f64,
    pub source: Source,
    pub aperture: Option<ApertureChoice>,
    pub plate: Option<PlateConfig>,
    pub lens: LensConfig,
    pub analyses: Vec<Analysis>,
    pub out_dir: PathBuf,
    pub formats: Vec<OutputFormat>,
}

const KEYS: [&str; 23] = [
    "name",
    "voltage_kv",
    "grid_n",
    "fov_nm",
    "source.kind",
    "source.m",
    "source.mode",
    "source.w0_nm",
    "aperture.alpha_mrad",
    "aperture.calibrate_zr_nm",
    "plate.enabled",
    "plate.axis",
    "plate.offset",
    "plate.phase_pi",
    "plate.intensity_transmission",
    "lens.f_mm",
    "lens.df_nm",
    "lens.cs_mm",
    "lens.z1_nm",
    "lens.z2_nm",
    "analyses",
    "out.dir",
    "out.formats",
];

const REQUIRED: [&str; 8] = [
    "name",
    "voltage_kv",
    "grid_n",
    "fov_nm",
    "source.kind",
    "lens.df_nm",
    "lens.cs_mm",
    "analyses",
];

fn unit_of(key: &str) -> Option<&'static str> {
    match key {
        "voltage_kv" => Some("kV"),
        "plate.offset" => Some("mrad"),
        k if k.ends_with("_nm") => Some("nm"),
        k if k.ends_with("_mm") => Some("mm"),
        k if k.ends_with("_mrad") => Some("mrad"),
        _ => None,
    }
}

struct Entries {
    map: BTreeMap<&'static str, (usize, String)>,
    last_line: usize,
}

impl Entries {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.map.remove(key)
    }

    fn line_of(&self, key: &str) -> usize {
        self.map.get(key).map_or(self.last_line, |e| e.0)
    }

    fn quantity(&mut self, key: &str) -> Result<Option<f64>> {
        let Some((line, raw)) = self.take(key) else {
            return Ok(None);
        };
        let unit = unit_of(key).expect("dimensional key");
        let err = |msg: String| Error::Parse { line, msg };
        let (num, got) = raw
            .split_once(char::is_whitespace)
            .map(|(a, b)| (a.trim(), b.trim()))
            .unwrap_or((raw.as_str(), ""));
        if got.is_empty() {
            return Err(err(format!("`{key}` needs a unit: write `{raw} {unit}`")));
        }
        if got != unit {
            return Err(err(format!("`{key}` must be given in {unit}, found `{got}`")));
        }
        let v: f64 = num
            .parse()
            .map_err(|_| err(format!("`{key}`: `{num}` is not a number")))?;
        if !v.is_finite() {
            return Err(err(format!("`{key}` must be finite")));
        }
        Ok(Some(v))
    }

    fn number<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, raw)) => raw.parse().map(Some).map_err(|_| Error::Parse {
                line,
                msg: format!("`{key}`: cannot parse `{raw}`"),
            }),
        }
    }
}

fn inconsistent(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn positive(line: usize, key: &str, v: f64) -> Result<f64> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(inconsistent(line, format!("`{key}` must be positive, got {v}")))
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut map = BTreeMap::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (k, v) = content.split_once('=').ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected `key = value`, found `{content}`"),
        })?;
        let (k, v) = (k.trim(), v.trim());
        let key = *KEYS.iter().find(|&&known| known == k).ok_or_else(|| Error::Parse {
            line,
            msg: format!("unknown key `{k}`"),
        })?;
        if let Some((first, _)) = map.get(key) {
            return Err(Error::Parse {
                line,
                msg: format!("duplicate key `{key}` (first given on line {first})"),
            });
        }
        if v.is_empty() {
            return Err(Error::Parse { line, msg: format!("`{key}` has no value") });
        }
        map.insert(key, (line, v.to_string()));
    }
    let missing: Vec<&str> = REQUIRED.iter().copied().filter(|k| !map.contains_key(k)).collect();
    if !missing.is_empty() {
        return Err(Error::Parse {
            line: last_line,
            msg: format!("missing required keys: {}", missing.join(", ")),
        });
    }
    let mut e = Entries { map, last_line };

    let name = e.take("name").map(|(_, v)| v).unwrap();
    if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        return Err(inconsistent(1, format!("name `{name}` may only use letters, digits, `_` and `-`")));
    }
    let l = e.line_of("voltage_kv");
    let voltage_kv = positive(l, "voltage_kv", e.quantity("voltage_kv")?.unwrap())?;
    let l = e.line_of("grid_n");
    let grid_n: usize = e.number("grid_n")?.unwrap();
    if grid_n < crate::grid::Grid::MIN_SIZE || !grid_n.is_power_of_two() {
        return Err(inconsistent(l, format!("`grid_n` must be a power of two ≥ 16, got {grid_n}")));
    }
    let l = e.line_of("fov_nm");
    let fov_nm = positive(l, "fov_nm", e.quantity("fov_nm")?.unwrap())?;

    let (kind_line, kind) = e.take("source.kind").unwrap();
    let m_line = e.line_of("source.m");
    let m: Option<i32> = e.number("source.m")?;
    let mode_line = e.line_of("source.mode");
    let mode = e.take("source.mode").map(|(_, v)| v);
    let w0_line = e.line_of("source.w0_nm");
    let w0 = e.quantity("source.w0_nm")?;
    let source = match kind.as_str() {
        "vortex" => Source::Vortex {
            m: m.ok_or_else(|| inconsistent(kind_line, "vortex source needs `source.m`"))?,
        },
        "plane" => {
            if m.is_some() {
                return Err(inconsistent(m_line, "`source.m` only applies to vortex sources"));
            }
            Source::Plane
        }
        "mode" => {
            if m.is_some() {
                return Err(inconsistent(m_line, "`source.m` only applies to vortex sources"));
            }
            let label = mode.clone().ok_or_else(|| inconsistent(kind_line, "mode source needs `source.mode`"))?;
            let w0_nm = w0.ok_or_else(|| inconsistent(kind_line, "mode source needs `source.w0_nm`"))?;
            positive(w0_line, "source.w0_nm", w0_nm)?;
            if ModeSpec::parse_label(&label, w0_nm).is_none() {
                return Err(inconsistent(mode_line, format!("unknown mode label `{label}` (expected e.g. HG10, LG01)")));
            }
            Source::Mode { label, w0_nm }
        }
        other => return Err(inconsistent(kind_line, format!("unknown source kind `{other}` (vortex, plane, mode)"))),
    };
    if !matches!(source, Source::Mode { .. }) {
        if mode.is_some() {
            return Err(inconsistent(mode_line, "`source.mode` only applies to mode sources"));
        }
        if w0.is_some() {
            return Err(inconsistent(w0_line, "`source.w0_nm` only applies to mode sources"));
        }
    }

    let alpha_line = e.line_of("aperture.alpha_mrad");
    let alpha = e.quantity("aperture.alpha_mrad")?;
    let zr_line = e.line_of("aperture.calibrate_zr_nm");
    let zr = e.quantity("aperture.calibrate_zr_nm")?;
    let aperture = match (alpha, zr) {
        (Some(_), Some(_)) => {
            return Err(inconsistent(
                alpha_line.max(zr_line),
                "give either `aperture.alpha_mrad` or `aperture.calibrate_zr_nm`, not both",
            ))
        }
        (Some(a), None) => Some(ApertureChoice::Alpha { mrad: positive(alpha_line, "aperture.alpha_mrad", a)? }),
        (None, Some(z)) => Some(ApertureChoice::CalibrateRayleigh {
            nm: positive(zr_line, "aperture.calibrate_zr_nm", z)?,
        }),
        (None, None) => None,
    };
    match (&source, aperture) {
        (Source::Mode { .. }, Some(_)) => {
            return Err(inconsistent(alpha_line.min(zr_line), "mode sources do not use an aperture"))
        }
        (Source::Vortex { .. } | Source::Plane, None) => {
            return Err(inconsistent(
                kind_line,
                "aperture sources need `aperture.alpha_mrad` or `aperture.calibrate_zr_nm`",
            ))
        }
        _ => {}
    }

    let enabled_line = e.line_of("plate.enabled");
    let enabled = match e.take("plate.enabled") {
        None => false,
        Some((_, v)) if v == "true" => true,
        Some((_, v)) if v == "false" => false,
        Some((line, v)) => return Err(inconsistent(line, format!("`plate.enabled` is true or false, found `{v}`"))),
    };
    let axis_line = e.line_of("plate.axis");
    let axis = e.take("plate.axis").map(|(_, v)| v);
    let offset = e.quantity("plate.offset")?;
    let phase_pi: Option<f64> = e.number("plate.phase_pi")?;
    let t_line = e.line_of("plate.intensity_transmission");
    let transmission: Option<f64> = e.number("plate.intensity_transmission")?;
    let plate = if enabled {
        if matches!(source, Source::Mode { .. }) {
            return Err(inconsistent(enabled_line, "a phase plate needs an aperture source (vortex or plane)"));
        }
        let axis = axis.ok_or_else(|| inconsistent(enabled_line, "plate needs `plate.axis`"))?;
        let axis = PlateEdge::parse(&axis).ok_or_else(|| {
            inconsistent(axis_line, format!("unknown plate axis `{axis}` (x, y, diagonal, antidiagonal)"))
        })?;
        let t = transmission.unwrap_or(1.0);
        if !(0.0..=1.0).contains(&t) {
            return Err(inconsistent(t_line, format!("intensity transmission must lie in [0, 1], got {t}")));
        }
        Some(PlateConfig {
            axis,
            offset_mrad: offset.unwrap_or(0.0),
            phase_pi: phase_pi.unwrap_or(1.0),
            intensity_transmission: t,
        })
    } else {
        if axis.is_some() || offset.is_some() || phase_pi.is_some() || transmission.is_some() {
            return Err(inconsistent(enabled_line, "plate.* keys given but `plate.enabled` is not true"));
        }
        None
    };

    let f_line = e.line_of("lens.f_mm");
    let lens = LensConfig {
        f_mm: positive(f_line, "lens.f_mm", e.quantity("lens.f_mm")?.unwrap_or(1.0))?,
        df_nm: e.quantity("lens.df_nm")?.unwrap(),
        cs_mm: e.quantity("lens.cs_mm")?.unwrap(),
        z1_nm: e.quantity("lens.z1_nm")?.unwrap_or(0.0),
        z2_nm: e.quantity("lens.z2_nm")?.unwrap_or(0.0),
    };

    let (an_line, an) = e.take("analyses").unwrap();
    let analyses = parse_list(&an, an_line, "analysis", Analysis::parse)?;
    for a in &analyses {
        let needs_aperture = *a == Analysis::Overlap && matches!(source, Source::Plane) && plate.is_none();
        if needs_aperture {
            return Err(inconsistent(an_line, "`overlap` needs a vortex, mode or phase-plated source"));
        }
        if *a == Analysis::Gouy && !matches!(source, Source::Mode { .. }) {
            return Err(inconsistent(an_line, "`gouy` needs a mode source"));
        }
    }
    if let Some(ModeFamily::LaguerreGauss) = source.mode_spec().map(|s| s.family) {
        if analyses.contains(&Analysis::Gouy) {
            return Err(inconsistent(an_line, "`gouy` compares against HG modes; use an HG source"));
        }
    }
    let out_dir = e
        .take("out.dir")
        .map(|(_, v)| PathBuf::from(v))
        .unwrap_or_else(|| PathBuf::from("runs").join(&name));
    let formats = match e.take("out.formats") {
        None => OutputFormat::ALL.to_vec(),
        Some((line, v)) => parse_list(&v, line, "format", OutputFormat::parse)?,
    };

    debug_assert!(e.map.is_empty(), "unconsumed keys: {:?}", e.map.keys());
    Ok(Scenario {
        name,
        voltage_kv,
        grid_n,
        fov_nm,
        source,
        aperture,
        plate,
        lens,
        analyses,
        out_dir,
        formats,
    })
}

fn parse_list<T: PartialEq>(raw: &str, line: usize, what: &str, parse: fn(&str) -> Option<T>) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for item in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let v = parse(item).ok_or_else(|| inconsistent(line, format!("unknown {what} `{item}`")))?;
        if out.contains(&v) {
            return Err(inconsistent(line, format!("{what} `{item}` listed twice")));
        }
        out.push(v);
    }
    Ok(out)
}

fn join<T>(items: &[T], name: fn(&T) -> &'static str) -> String {
    items.iter().map(name).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Scenario {
    /// The full document with every default filled in; parses back to the same scenario.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        let _ = writeln!(s, "name = {}", self.name);
        let _ = writeln!(s, "voltage_kv = {} kV", self.voltage_kv);
        let _ = writeln!(s, "grid_n = {}", self.grid_n);
        let _ = writeln!(s, "fov_nm = {} nm", self.fov_nm);
        let _ = writeln!(s, "source.kind = {}", self.source.kind());
        match &self.source {
            Source::Vortex { m } => {
                let _ = writeln!(s, "source.m = {m}");
            }
            Source::Plane => {}
            Source::Mode { label, w0_nm } => {
                let _ = writeln!(s, "source.mode = {label}");
                let _ = writeln!(s, "source.w0_nm = {w0_nm} nm");
            }
        }
        match self.aperture {
            Some(ApertureChoice::Alpha { mrad }) => {
                let _ = writeln!(s, "aperture.alpha_mrad = {mrad} mrad");
            }
            Some(ApertureChoice::CalibrateRayleigh { nm }) => {
                let _ = writeln!(s, "aperture.calibrate_zr_nm = {nm} nm");
            }
            None => {}
        }
        match &self.plate {
            Some(p) => {
                let _ = writeln!(s, "plate.enabled = true");
                let _ = writeln!(s, "plate.axis = {}", p.axis.name());
                let _ = writeln!(s, "plate.offset = {} mrad", p.offset_mrad);
                let _ = writeln!(s, "plate.phase_pi = {}", p.phase_pi);
                let _ = writeln!(s, "plate.intensity_transmission = {}", p.intensity_transmission);
            }
            None => {
                let _ = writeln!(s, "plate.enabled = false");
            }
        }
        let l = &self.lens;
        let _ = writeln!(s, "lens.f_mm = {} mm", l.f_mm);
        let _ = writeln!(s, "lens.df_nm = {} nm", l.df_nm);
        let _ = writeln!(s, "lens.cs_mm = {} mm", l.cs_mm);
        let _ = writeln!(s, "lens.z1_nm = {} nm", l.z1_nm);
        let _ = writeln!(s, "lens.z2_nm = {} nm", l.z2_nm);
        let _ = writeln!(s, "analyses = {}", join(&self.analyses, |a| a.name()));
        let _ = writeln!(s, "out.dir = {}", self.out_dir.display());
        let _ = writeln!(s, "out.formats = {}", join(&self.formats, |f| f.name()));
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const BASE: &str = "\
name = t
voltage_kv = 200 kV
grid_n = 256
fov_nm = 10 nm
source.kind = vortex
source.m = -1
aperture.calibrate_zr_nm = 220 nm
lens.df_nm = 220 nm
lens.cs_mm = 1.2 mm
analyses = orientation, winding
";

    fn err_line(text: &str) -> (usize, String) {
        match parse_scenario(text) {
            Err(Error::Parse { line, msg }) => (line, msg),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn base_document_with_defaults() {
        let s = parse_scenario(BASE).unwrap();
        assert_eq!(s.source, Source::Vortex { m: -1 });
        assert_eq!(s.lens, LensConfig { f_mm: 1.0, df_nm: 220.0, cs_mm: 1.2, z1_nm: 0.0, z2_nm: 0.0 });
        assert_eq!(s.out_dir, PathBuf::from("runs/t"));
        assert_eq!(s.formats, OutputFormat::ALL.to_vec());
        assert_eq!(s.plate, None);
        let echoed = s.to_string();
        assert!(echoed.contains("lens.f_mm = 1 mm\n"));
        assert_eq!(parse_scenario(&echoed).unwrap(), s);
    }

    #[test]
    fn empty_document_lists_required_keys() {
        let (_, msg) = err_line("");
        for k in REQUIRED {
            assert!(msg.contains(k), "{msg}");
        }
    }

    #[test]
    fn duplicate_quantity_in_other_unit() {
        let text = format!("{BASE}lens.df_nm = 2.2e-7 m\n");
        let (line, msg) = err_line(&text);
        assert_eq!(line, 11);
        assert!(msg.contains("duplicate key `lens.df_nm`") && msg.contains("line 8"), "{msg}");
    }

    #[test]
    fn units_are_mandatory_and_checked() {
        let (line, msg) = err_line(&BASE.replace("220 nm\nlens", "220\nlens"));
        assert_eq!(line, 7);
        assert!(msg.contains("needs a unit"), "{msg}");
        let (line, msg) = err_line(&BASE.replace("1.2 mm", "1.2 m"));
        assert_eq!(line, 9);
        assert!(msg.contains("in mm"), "{msg}");
        let (_, msg) = err_line(&BASE.replace("200 kV", "200 kv"));
        assert!(msg.contains("in kV"));
    }

    #[test]
    fn unknown_keys_and_values_carry_lines() {
        assert_eq!(err_line(&format!("{BASE}lens.df = 1 nm\n")).0, 11);
        assert_eq!(err_line(&format!("{BASE}just text\n")).0, 11);
        assert_eq!(err_line(&BASE.replace("orientation, winding", "orientation, spin")).0, 10);
        assert_eq!(err_line(&BASE.replace("grid_n = 256", "grid_n = 300")).0, 3);
        assert_eq!(err_line(&BASE.replace("source.kind = vortex", "source.kind = laser")).0, 5);
    }

    #[test]
    fn inconsistent_combinations() {
        // vortex without m
        assert!(err_line(&BASE.replace("source.m = -1\n", "")).1.contains("source.m"));
        // both aperture forms
        assert!(err_line(&format!("{BASE}aperture.alpha_mrad = 2 mrad\n")).1.contains("not both"));
        // plate keys without enabling the plate
        assert_eq!(err_line(&format!("{BASE}plate.axis = x\n")).0, 11);
        // plate on a mode source
        let mode = BASE
            .replace("source.kind = vortex\nsource.m = -1\n", "source.kind = mode\nsource.mode = HG00\nsource.w0_nm = 0.42 nm\n")
            .replace("aperture.calibrate_zr_nm = 220 nm\n", "");
        parse_scenario(&mode).unwrap();
        assert!(err_line(&format!("{mode}plate.enabled = true\nplate.axis = x\n")).1.contains("aperture source"));
        // mode source with aperture
        assert!(err_line(&format!("{mode}aperture.alpha_mrad = 2 mrad\n")).1.contains("do not use an aperture"));
        // gouy on a vortex source
        assert!(err_line(&BASE.replace("winding", "gouy")).1.contains("mode source"));
        assert!(err_line(&BASE.replace("winding", "orientation")).1.contains("twice"));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = format!("# header\n\n{}", BASE.replace("grid_n = 256", "grid_n = 256   # small"));
        assert_eq!(parse_scenario(&text).unwrap().grid_n, 256);
    }

    fn arb_scenario() -> impl Strategy<Value = Scenario> {
        (
            -3i32..=3,
            4u32..=11,
            0.5f64..50.0,
            -800.0f64..800.0,
            0.0f64..3.0,
            proptest::option::of((0usize..4, -0.5f64..0.5, 0.0f64..=1.0)),
            proptest::sample::subsequence(Analysis::ALL[..5].to_vec(), 1..5),
        )
            .prop_map(|(m, log_n, fov, df, cs, plate, analyses)| Scenario {
                name: "p".into(),
                voltage_kv: 86.0,
                grid_n: 1 << log_n,
                fov_nm: fov,
                source: Source::Vortex { m },
                aperture: Some(ApertureChoice::Alpha { mrad: fov / 7.0 }),
                plate: plate.map(|(axis, offset_mrad, t)| PlateConfig {
                    axis: [PlateEdge::X, PlateEdge::Y, PlateEdge::Diagonal, PlateEdge::AntiDiagonal][axis],
                    offset_mrad,
                    phase_pi: 1.0,
                    intensity_transmission: t,
                }),
                lens: LensConfig { f_mm: 1.0, df_nm: df, cs_mm: cs, z1_nm: 0.0, z2_nm: -df / 3.0 },
                analyses,
                out_dir: PathBuf::from("out/p"),
                formats: vec![OutputFormat::Csv],
            })
    }

    proptest! {
        #[test]
        fn echo_round_trips(s in arb_scenario()) {
            prop_assert_eq!(parse_scenario(&s.to_string()).unwrap(), s);
        }
    }
}
