use std::f64::consts::PI;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};

use super::config::{Analysis, ApertureChoice, OutputFormat, Scenario, Source};
use super::expect::{Expectation, ExpectationOutcome};
use crate::analysis::{
    self, central_contrast, converter_decomposition, current_density, gouy_analytic, gouy_phase_component,
    lobe_orientation, relative_gouy_analytic, ring_radius, winding_scan, ChargeReport, FrameDecomposition,
    GouyProfile, GouyReference, LobeOrientation,
};
use crate::error::{Error, Result};
use crate::field::SampledField;
use crate::grid::Grid;
use crate::optics::{
    airy_fwhm_match, calibrate_aperture, gaussian_rayleigh_range, propagate_ffp_to_bfp, scan_observation_planes,
    GaussianBeamSpec, LensParams,
};
use crate::physics::BeamPhysics;
use crate::render;
use crate::sources::{analytic_mode, hilbert_plate, vortex_aperture, ApertureSpec, ModeSpec, PhasePlateSpec, PlateBudget};

/// Loop radii for the winding scan, as fractions of the ring radius.
pub const WINDING_FRACTIONS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// Planes of the Gouy scan, evenly spaced over ±3 z_R.
pub const GOUY_PLANES: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OrientationResult {
    Oriented(LobeOrientation),
    /// Anisotropy below the orientation threshold.
    Isotropic { anisotropy: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RingResult {
    pub radius: f64,
    pub central_contrast: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WindingProbe {
    pub fraction: f64,
    pub radius: f64,
    /// The loop's report, or why it was rejected.
    pub outcome: std::result::Result<ChargeReport, String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GouyCheck {
    pub profile: GouyProfile,
    pub analytic: Vec<f64>,
    pub max_deviation: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelativeGouy {
    pub numeric: f64,
    pub analytic: f64,
}

/// Everything the requested analyses measured.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Observables {
    pub orientation: Option<OrientationResult>,
    pub ring: Option<RingResult>,
    pub windings: Vec<WindingProbe>,
    pub circulation: Option<f64>,
    pub frames: Option<FrameDecomposition>,
    pub gouy: Option<GouyCheck>,
    pub relative_gouy: Option<RelativeGouy>,
}

impl Observables {
    /// Windings of the loops that passed, with their radius fraction.
    pub fn clean_windings(&self) -> impl Iterator<Item = (f64, i32)> + '_ {
        self.windings
            .iter()
            .filter_map(|p| p.outcome.as_ref().ok().map(|r| (p.fraction, r.winding)))
    }

    /// Scalar observables by name, in a fixed order.
    pub fn scalars(&self) -> Vec<(String, f64)> {
        let mut out = Vec::new();
        match self.orientation {
            Some(OrientationResult::Oriented(o)) => {
                out.push(("orientation.angle_rad".into(), o.angle));
                out.push(("orientation.anisotropy".into(), o.anisotropy));
            }
            Some(OrientationResult::Isotropic { anisotropy }) => {
                out.push(("orientation.anisotropy".into(), anisotropy));
            }
            None => {}
        }
        if let Some(r) = self.ring {
            out.push(("ring.radius_m".into(), r.radius));
            out.push(("ring.central_contrast".into(), r.central_contrast));
        }
        for p in &self.windings {
            if let Ok(r) = &p.outcome {
                out.push((format!("winding.{:.1}", p.fraction), r.winding as f64));
            }
        }
        if let Some(c) = self.circulation {
            out.push(("circulation".into(), c));
        }
        if let Some(d) = self.frames {
            out.push(("overlap.plus45_power".into(), d.plus.norm_sqr()));
            out.push(("overlap.minus45_power".into(), d.minus.norm_sqr()));
            out.push(("overlap.residual".into(), d.residual));
        }
        if let Some(g) = &self.gouy {
            out.push(("gouy.max_deviation_rad".into(), g.max_deviation));
        }
        if let Some(r) = self.relative_gouy {
            out.push(("relative_gouy.numeric_rad".into(), r.numeric));
            out.push(("relative_gouy.analytic_rad".into(), r.analytic));
        }
        out
    }
}

/// Power at each stage of the chain (input normalized to 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLedger {
    pub input: f64,
    pub plate: Option<PlateBudget>,
    /// Power entering the lens.
    pub after_plate: f64,
    pub output: f64,
}

impl PowerLedger {
    /// |output − after_plate|: what the propagator itself gained or lost.
    pub fn propagation_error(&self) -> f64 {
        (self.output - self.after_plate).abs()
    }

    /// Input minus the losses the plate accounts for.
    pub fn expected_output(&self) -> f64 {
        match &self.plate {
            Some(b) => self.input - b.covered_loss - b.edge_loss,
            None => self.input,
        }
    }
}

/// The optical chain of a scenario in SI units.
#[derive(Clone, Debug)]
pub struct Setup {
    pub physics: BeamPhysics,
    pub real: Grid,
    pub reciprocal: Grid,
    pub aperture: Option<ApertureSpec>,
    pub plate: Option<PhasePlateSpec>,
    pub lens: LensParams,
    pub mode: Option<ModeSpec>,
    /// Waist of the Gaussian frame used by overlap and relative Gouy analyses.
    pub frame_w0: f64,
}

impl Setup {
    pub fn new(s: &Scenario) -> Result<Setup> {
        let physics = BeamPhysics::from_kv(s.voltage_kv)?;
        let real = Grid::real_space(s.grid_n, s.fov_nm * 1e-9)?;
        let reciprocal = real.conjugate();
        let aperture = match s.aperture {
            Some(ApertureChoice::Alpha { mrad }) => Some(ApertureSpec::from_semi_angle(mrad * 1e-3, &physics)?),
            Some(ApertureChoice::CalibrateRayleigh { nm }) => Some(calibrate_aperture(nm * 1e-9, &physics)?),
            None => None,
        };
        let k = physics.wavenumber();
        let plate = s
            .plate
            .map(|p| {
                PhasePlateSpec::new(
                    p.axis,
                    p.offset_mrad * 1e-3 * k,
                    p.phase_pi * PI,
                    p.intensity_transmission.sqrt(),
                )
            })
            .transpose()?;
        let l = &s.lens;
        let lens = LensParams::new(l.f_mm * 1e-3, l.df_nm * 1e-9, l.cs_mm * 1e-3)?
            .with_z1(l.z1_nm * 1e-9)
            .with_z2(l.z2_nm * 1e-9);
        lens.validate()?;
        let mode = s.source.mode_spec();
        let frame_w0 = match (&mode, &aperture) {
            (Some(m), _) => m.w0,
            (None, Some(ap)) => airy_fwhm_match(ap, &physics).w0,
            (None, None) => unreachable!("validated scenarios have an aperture or a mode"),
        };
        Ok(Setup {
            physics,
            real,
            reciprocal,
            aperture,
            plate,
            lens,
            mode,
            frame_w0,
        })
    }

    /// The front-focal-plane field before the plate, unit power.
    pub fn source_field(&self, source: &Source) -> Result<SampledField> {
        match source {
            Source::Vortex { m } => vortex_aperture(*m, &self.reciprocal, self.aperture.as_ref().unwrap()),
            Source::Plane => vortex_aperture(0, &self.reciprocal, self.aperture.as_ref().unwrap()),
            Source::Mode { .. } => analytic_mode(self.mode.as_ref().unwrap(), &self.reciprocal, &self.physics),
        }
    }
}

/// Fields and measurements of one scenario, before anything is written.
#[derive(Clone, Debug)]
pub struct Simulation {
    pub setup: Setup,
    pub pupil: SampledField,
    pub output: SampledField,
    pub observables: Observables,
    pub ledger: PowerLedger,
}

pub fn simulate(s: &Scenario) -> Result<Simulation> {
    simulate_inner(s).map_err(|e| e.in_scenario(&s.name))
}

fn simulate_inner(s: &Scenario) -> Result<Simulation> {
    let setup = Setup::new(s)?;
    let source = setup.source_field(&s.source)?;
    let input = source.total_power();
    let (pupil, budget) = match &setup.plate {
        Some(p) => (hilbert_plate(&source, p)?, Some(p.power_budget(&source))),
        None => (source.clone(), None),
    };
    let after_plate = pupil.total_power();
    let output = propagate_ffp_to_bfp(&pupil, &setup.lens, &setup.physics)?;
    let ledger = PowerLedger {
        input,
        plate: budget,
        after_plate,
        output: output.total_power(),
    };
    let observables = measure(s, &setup, &pupil, &output)?;
    Ok(Simulation {
        setup,
        pupil,
        output,
        observables,
        ledger,
    })
}

fn measure(s: &Scenario, setup: &Setup, pupil: &SampledField, output: &SampledField) -> Result<Observables> {
    let wants = |a: Analysis| s.analyses.contains(&a);
    let mut obs = Observables::default();
    if wants(Analysis::Orientation) {
        obs.orientation = Some(match lobe_orientation(output) {
            Ok(o) => OrientationResult::Oriented(o),
            Err(Error::NoOrientation { anisotropy, .. }) => OrientationResult::Isotropic { anisotropy },
            Err(e) => return Err(e),
        });
    }
    if wants(Analysis::Ring) || wants(Analysis::Winding) || wants(Analysis::Circulation) {
        let radius = ring_radius(output)?;
        obs.ring = Some(RingResult {
            radius,
            central_contrast: central_contrast(output),
        });
        if wants(Analysis::Winding) {
            let radii: Vec<f64> = WINDING_FRACTIONS.iter().map(|f| f * radius).collect();
            obs.windings = WINDING_FRACTIONS
                .iter()
                .zip(&radii)
                .zip(winding_scan(output, &radii))
                .map(|((&fraction, &radius), r)| WindingProbe {
                    fraction,
                    radius,
                    outcome: r.map_err(|e| e.to_string()),
                })
                .collect();
        }
        if wants(Analysis::Circulation) {
            obs.circulation = current_density(output).circulation(0.5 * radius);
        }
    }
    if wants(Analysis::Overlap) {
        obs.frames = Some(converter_decomposition(output, &setup.physics, setup.frame_w0, &setup.lens)?);
    }
    if wants(Analysis::Gouy) {
        obs.gouy = Some(gouy_check(setup, pupil)?);
    }
    if wants(Analysis::RelativeGouy) {
        obs.relative_gouy = Some(relative_gouy(setup)?);
    }
    Ok(obs)
}

fn gouy_check(setup: &Setup, pupil: &SampledField) -> Result<GouyCheck> {
    let mode = setup.mode.as_ref().expect("gouy requires a mode source");
    let (n, m) = (mode.n, mode.m);
    let z_r = gaussian_rayleigh_range(mode.w0, &setup.physics)?;
    let z: Vec<f64> = (0..GOUY_PLANES)
        .map(|i| -3.0 * z_r + 6.0 * z_r * i as f64 / (GOUY_PLANES - 1) as f64)
        .collect();
    let stack = scan_observation_planes(pupil, &setup.lens, &setup.physics, &z)?;
    let profile = gouy_phase_component(&stack, &z, (n, m), GouyReference::PlaneWave)?;
    let beam = GaussianBeamSpec::stigmatic(mode.w0, &setup.physics)?.with_line_foci(setup.lens.line_foci());
    let analytic: Vec<f64> = z.iter().map(|&z| gouy_analytic(n, m, z, &beam)).collect();
    let max_deviation = profile
        .phase
        .iter()
        .zip(&analytic)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(GouyCheck {
        profile,
        analytic,
        max_deviation,
    })
}

fn relative_gouy(setup: &Setup) -> Result<RelativeGouy> {
    let z2 = setup.lens.z2;
    let phase = |n: u32, m: u32| -> Result<f64> {
        let pupil = analytic_mode(&ModeSpec::hg(n, m, setup.frame_w0), &setup.reciprocal, &setup.physics)?;
        let out = propagate_ffp_to_bfp(&pupil, &setup.lens, &setup.physics)?;
        Ok(gouy_phase_component(&[out], &[z2], (n, m), GouyReference::PlaneWave)?.phase[0])
    };
    let numeric = analysis::wrap_phase(phase(1, 0)? - phase(0, 1)?);
    let beam = GaussianBeamSpec::stigmatic(setup.frame_w0, &setup.physics)?.with_line_foci(setup.lens.line_foci());
    Ok(RelativeGouy {
        numeric,
        analytic: relative_gouy_analytic(z2, &beam),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    /// Path relative to the run directory.
    pub file: String,
    pub sha256: String,
}

/// Result of [`run_scenario`].
#[derive(Clone, Debug)]
pub struct RunReport {
    pub scenario: Scenario,
    pub wall_time: Duration,
    pub observables: Observables,
    pub ledger: PowerLedger,
    pub expectations: Vec<ExpectationOutcome>,
    /// Every file written except `report.txt`, sorted by name.
    pub manifest: Vec<ManifestEntry>,
    pub report_path: PathBuf,
    pub report_sha256: String,
    pub output: SampledField,
}

impl RunReport {
    pub fn all_expectations_met(&self) -> bool {
        self.expectations.iter().all(|e| e.passed)
    }
}

pub const REPORT_FILE: &str = "report.txt";

pub fn sha256_file(path: &Path) -> Result<String> {
    Ok(hex::encode(Sha256::digest(fs::read(path)?)))
}

/// Runs the chain, writes the declared outputs to `s.out_dir` and returns the report.
pub fn run_scenario(s: &Scenario) -> Result<RunReport> {
    run_checked(s, &[])
}

/// [`run_scenario`] with expectations evaluated and written into the report.
pub fn run_checked(s: &Scenario, expectations: &[Expectation]) -> Result<RunReport> {
    let start = Instant::now();
    let sim = simulate(s)?;
    let outcomes: Vec<ExpectationOutcome> = expectations.iter().map(|e| e.check(&sim)).collect();
    let manifest = write_outputs(s, &sim).map_err(|e| e.in_scenario(&s.name))?;
    let text = report_text(s, &sim, &outcomes, &manifest);
    let report_path = s.out_dir.join(REPORT_FILE);
    fs::write(&report_path, &text).map_err(|e| Error::from(e).in_scenario(&s.name))?;
    Ok(RunReport {
        scenario: s.clone(),
        wall_time: start.elapsed(),
        observables: sim.observables,
        ledger: sim.ledger,
        expectations: outcomes,
        manifest,
        report_path,
        report_sha256: hex::encode(Sha256::digest(text.as_bytes())),
        output: sim.output,
    })
}

fn write_outputs(s: &Scenario, sim: &Simulation) -> Result<Vec<ManifestEntry>> {
    let dir = &s.out_dir;
    fs::create_dir_all(dir)?;
    let crop = Some(0.5 * s.fov_nm * 1e-9);
    let mut written: Vec<PathBuf> = Vec::new();
    let out = &sim.output;
    let obs = &sim.observables;
    for format in &s.formats {
        match format {
            OutputFormat::Pgm => written.extend(render::render_intensity(out, &dir.join("intensity.pgm"), crop)?),
            OutputFormat::Png => {
                written.extend(render::render_intensity_png(out, &dir.join("intensity.png"), crop)?);
                written.extend(render::render_phase(out, &dir.join("phase.png"), crop)?);
            }
            OutputFormat::Csv => {
                if !obs.windings.is_empty() {
                    let reports: Vec<ChargeReport> =
                        obs.windings.iter().filter_map(|p| p.outcome.clone().ok()).collect();
                    let p = dir.join("winding.csv");
                    analysis::csv::write_winding(BufWriter::new(fs::File::create(&p)?), &reports)?;
                    written.push(p);
                }
                if let Some(d) = obs.frames {
                    let p = dir.join("overlaps.csv");
                    let rows = vec![("frame_plus45".to_string(), d.plus), ("frame_minus45".to_string(), d.minus)];
                    analysis::csv::write_overlaps(BufWriter::new(fs::File::create(&p)?), &rows)?;
                    written.push(p);
                }
                if let Some(g) = &obs.gouy {
                    let p = dir.join("gouy.csv");
                    analysis::csv::write_gouy(BufWriter::new(fs::File::create(&p)?), &g.profile)?;
                    written.push(p);
                }
            }
            OutputFormat::Vxf => {
                let p = dir.join("field.vxf");
                out.write_vxf(BufWriter::new(fs::File::create(&p)?))?;
                written.push(p);
            }
        }
    }
    let mut manifest = written
        .iter()
        .map(|p| {
            Ok(ManifestEntry {
                file: p.strip_prefix(dir).unwrap_or(p).display().to_string(),
                sha256: sha256_file(p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    manifest.sort_by(|a, b| a.file.cmp(&b.file));
    Ok(manifest)
}

/// The deterministic report: echoed config, results, ledger, expectations, manifest.
/// Wall time is left out so that identical inputs give identical bytes.
fn report_text(s: &Scenario, sim: &Simulation, outcomes: &[ExpectationOutcome], manifest: &[ManifestEntry]) -> String {
    use std::fmt::Write;
    let mut t = String::new();
    let _ = writeln!(t, "[scenario]");
    t.push_str(&s.to_string());
    let _ = writeln!(t, "\n[results]");
    for (k, v) in sim.observables.scalars() {
        let _ = writeln!(t, "{k} = {v:e}");
    }
    for p in &sim.observables.windings {
        if let Err(msg) = &p.outcome {
            let _ = writeln!(t, "winding.{:.1} = rejected: {msg}", p.fraction);
        }
    }
    let l = &sim.ledger;
    let _ = writeln!(t, "\n[power]");
    let _ = writeln!(t, "input = {:e}", l.input);
    if let Some(b) = &l.plate {
        let _ = writeln!(t, "plate.open = {:e}", b.open);
        let _ = writeln!(t, "plate.covered = {:e}", b.covered);
        let _ = writeln!(t, "plate.edge = {:e}", b.edge);
        let _ = writeln!(t, "plate.covered_loss = {:e}", b.covered_loss);
        let _ = writeln!(t, "plate.edge_loss = {:e}", b.edge_loss);
    }
    let _ = writeln!(t, "after_plate = {:e}", l.after_plate);
    let _ = writeln!(t, "output = {:e}", l.output);
    let _ = writeln!(t, "propagation_error = {:e}", l.propagation_error());
    if !outcomes.is_empty() {
        let _ = writeln!(t, "\n[expectations]");
        for o in outcomes {
            let _ = writeln!(t, "{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.label, o.detail);
        }
    }
    let _ = writeln!(t, "\n[outputs]");
    for m in manifest {
        let _ = writeln!(t, "{}  {}", m.sha256, m.file);
    }
    t
}

/// Contents of a finished run directory.
#[derive(Clone, Debug)]
pub struct RunDirectory {
    pub report: String,
    pub manifest: Vec<ManifestEntry>,
    /// Manifest files whose current checksum differs or that are missing.
    pub mismatches: Vec<String>,
    pub failed_expectations: Vec<String>,
}

/// Reads `report.txt` from a run directory and re-checks the listed checksums.
pub fn inspect_run_dir(dir: &Path) -> Result<RunDirectory> {
    let report = fs::read_to_string(dir.join(REPORT_FILE))?;
    let mut manifest = Vec::new();
    let mut failed = Vec::new();
    let mut section = "";
    for (i, line) in report.lines().enumerate() {
        if line.starts_with('[') {
            section = line;
            continue;
        }
        match section {
            "[outputs]" if !line.is_empty() => {
                let (sum, file) = line.split_once("  ").ok_or_else(|| Error::Parse {
                    line: i + 1,
                    msg: "manifest lines are `<sha256>  <file>`".into(),
                })?;
                manifest.push(ManifestEntry {
                    file: file.to_string(),
                    sha256: sum.to_string(),
                });
            }
            "[expectations]" if line.starts_with("FAIL") => failed.push(line.to_string()),
            _ => {}
        }
    }
    let mismatches = manifest
        .iter()
        .filter(|m| sha256_file(&dir.join(&m.file)).map_or(true, |s| s != m.sha256))
        .map(|m| m.file.clone())
        .collect();
    Ok(RunDirectory {
        report,
        manifest,
        mismatches,
        failed_expectations: failed,
    })
}
