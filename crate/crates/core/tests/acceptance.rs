//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p vxsim-core --test acceptance`. The process exits non-zero if
//! any criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, TAU};
use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use vxsim::analysis::{mode_overlap, orientation_difference};
use vxsim::optics::{propagate_ffp_to_bfp, LensParams};
use vxsim::scenario::{preset, run_checked, OrientationResult, RunReport, Scenario, FIGURE_PRESETS};
use vxsim::sources::{analytic_mode, vortex_aperture, ApertureSpec, ModeSpec};
use vxsim::{BeamPhysics, Grid, Plane, SampledField};

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn run_preset(name: &str, dir: &Path, grid: Option<usize>) -> RunReport {
    let p = preset(name).unwrap();
    let mut s: Scenario = p.scenario().unwrap();
    s.out_dir = dir.join(format!("{name}_{}", grid.unwrap_or(s.grid_n)));
    if let Some(n) = grid {
        s.grid_n = n;
    }
    run_checked(&s, p.expectations).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn angle(r: &RunReport) -> Option<f64> {
    match r.observables.orientation {
        Some(OrientationResult::Oriented(o)) => Some(o.angle),
        _ => None,
    }
}

fn anisotropy(r: &RunReport) -> f64 {
    match r.observables.orientation {
        Some(OrientationResult::Oriented(o)) => o.anisotropy,
        Some(OrientationResult::Isotropic { anisotropy }) => anisotropy,
        None => f64::NAN,
    }
}

fn max_error(a: &SampledField, b: &SampledField) -> f64 {
    a.data().iter().zip(b.data()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / a.max_abs()
}

fn mode_algebra() -> Verdict {
    let start = Instant::now();
    let p = BeamPhysics::from_kv(200.0).unwrap();
    let g = Grid::real_space(512, 10e-9).unwrap();
    let w0 = 0.42e-9;
    let mode = |s: ModeSpec| analytic_mode(&s, &g, &p).unwrap();
    let (hg10, hg01) = (mode(ModeSpec::hg(1, 0, w0)), mode(ModeSpec::hg(0, 1, w0)));
    let (lg10, lg01) = (mode(ModeSpec::lg(1, 0, w0)), mode(ModeSpec::lg(0, 1, w0)));
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let i = Complex64::i();
    let lg10_err = max_error(&lg10, &hg10.combine(s, &hg01, -i * s).unwrap());
    let lg01_err = max_error(&lg01, &hg10.combine(s, &hg01, i * s).unwrap());
    let a = mode_overlap(&lg10, &ModeSpec::hg(1, 0, w0), &p).unwrap();
    let b = mode_overlap(&lg10, &ModeSpec::hg(0, 1, w0), &p).unwrap();
    let da = (a - s).norm();
    let db = (b + i * s).norm();
    let secs = start.elapsed().as_secs_f64();
    verdict(
        lg10_err < 1e-10 && lg01_err < 1e-10 && da < 1e-10 && db < 1e-10 && secs < 1.0,
        format!(
            "LG10 from HG err {lg10_err:.1e}, LG01 from HG err {lg01_err:.1e}, <HG10|LG10> off {da:.1e}, <HG01|LG10> off {db:.1e}, {secs:.2} s"
        ),
    )
}

fn gouy_law(dir: &Path) -> Verdict {
    let start = Instant::now();
    let stig = run_preset("gouy_gaussian", dir, None);
    let g = stig.observables.gouy.as_ref().unwrap();
    let astig = run_preset("gouy_astigmatic", dir, None);
    let rel = astig.observables.relative_gouy.unwrap();
    let secs = start.elapsed().as_secs_f64();
    let d = (rel.numeric - FRAC_PI_2).abs();
    verdict(
        g.profile.len() == 25 && g.max_deviation <= 0.02 && d <= 0.05 && secs < 30.0,
        format!(
            "max |Δ| {:.1e} rad over {} planes, Δφ(z=0, df=z_R) = {:.4} rad, {secs:.1} s",
            g.max_deviation,
            g.profile.len(),
            rel.numeric
        ),
    )
}

fn mode_conversion(plus: &RunReport, minus: &RunReport) -> Verdict {
    let frames = plus.observables.frames.unwrap();
    let power = frames.best_power();
    let (ap, am) = (angle(plus), angle(minus));
    let (Some(ap), Some(am)) = (ap, am) else {
        return verdict(false, "no lobe orientation".into());
    };
    let magnitude_err = (ap.abs() - FRAC_PI_4).abs();
    let perp_err = (orientation_difference(ap, am) - FRAC_PI_2).abs();
    verdict(
        power >= 0.85 && magnitude_err <= 0.05 && perp_err <= 0.05,
        format!(
            "frame power {power:.4} (bar 0.85), orientation {ap:.4} rad (|·| − π/4 = {magnitude_err:.4}), \
             m = −1 at {am:.4} rad (perpendicularity error {perp_err:.4})"
        ),
    )
}

fn robustness(r: &RunReport) -> Verdict {
    let a = anisotropy(r);
    let windings: Vec<String> = r.observables.clean_windings().map(|(_, w)| format!("{w:+}")).collect();
    verdict(
        a >= 1.5 && angle(r).is_some(),
        format!("anisotropy {a:.3}, loop windings [{}]", windings.join(" ")),
    )
}

fn generator(r: &RunReport) -> Verdict {
    let o = &r.observables;
    let ring = o.ring.unwrap();
    let band: Vec<i32> = o
        .windings
        .iter()
        .filter(|p| (0.3 - 1e-9..=0.7 + 1e-9).contains(&p.fraction))
        .map(|p| p.outcome.as_ref().map_or(0, |c| c.winding))
        .collect();
    let w_half = o
        .windings
        .iter()
        .find(|p| (p.fraction - 0.5).abs() < 1e-9)
        .and_then(|p| p.outcome.as_ref().ok())
        .map_or(0, |c| c.winding);
    let circ = o.circulation.unwrap_or(0.0);
    verdict(
        ring.central_contrast <= 0.01
            && !band.is_empty()
            && band.iter().all(|&w| w == 1)
            && circ.signum() == (w_half as f64).signum(),
        format!(
            "central/peak {:.2e}, windings at 0.3–0.7 R {band:?}, circulation {circ:.3e}",
            ring.central_contrast
        ),
    )
}

fn degraded(r: &RunReport) -> Verdict {
    let hits: Vec<String> = r
        .observables
        .clean_windings()
        .filter(|(_, w)| w.abs() == 1)
        .map(|(f, w)| format!("{w:+}@{f:.1}R"))
        .collect();
    verdict(!hits.is_empty(), format!("windings {}", hits.join(" ")))
}

/// Riemann sum of the propagation integral at every output sample.
fn direct_oracle_error() -> f64 {
    let p = BeamPhysics::from_kv(200.0).unwrap();
    let g = Grid::new(64, 6.0e8, Plane::Reciprocal).unwrap();
    let pupil = vortex_aperture(1, &g, &ApertureSpec::new(18.5 * g.pitch()).unwrap()).unwrap();
    let lens = LensParams::new(1e-3, 220e-9, 1.2e-3).unwrap().with_z2(-100e-9);
    let fast = propagate_ffp_to_bfp(&pupil, &lens, &p).unwrap();
    let (n, k, dq) = (64usize, p.wavenumber(), g.pitch());
    let dx = TAU / (n as f64 * dq);
    let mut worst: f64 = 0.0;
    for iy in 0..n {
        for ix in 0..n {
            let (x, y) = ((ix as f64 - 32.0) * dx, (iy as f64 - 32.0) * dx);
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n * n {
                let (qx, qy) = (g.coord(j % n), g.coord(j / n));
                let q2 = qx * qx + qy * qy;
                let chi = lens.df * (qx * qx - qy * qy) / (2.0 * k) + lens.cs * q2 * q2 / (4.0 * k.powi(3));
                let phase = chi + q2 * lens.z2 / (2.0 * k) - (qx * x + qy * y);
                sum += pupil.data()[j] * Complex64::from_polar(1.0, phase);
            }
            worst = worst.max((sum * dq * dq / TAU - fast.get(ix, iy)).norm());
        }
    }
    worst / fast.max_abs()
}

fn convergence_scalars(r: &RunReport) -> Vec<(String, f64)> {
    r.observables
        .scalars()
        .into_iter()
        .filter(|(k, v)| {
            k.starts_with("orientation.")
                || k.starts_with("winding.")
                || k == "relative_gouy.numeric_rad"
                || k == "ring.radius_m"
                || (k.ends_with("_power") && *v > 1e-3)
        })
        .collect()
}

fn integrity(suite: &[RunReport], dir: &Path) -> Verdict {
    let oracle = direct_oracle_error();
    let worst_power = suite.iter().map(|r| r.ledger.propagation_error()).fold(0.0, f64::max);
    let mut worst_change: (f64, String) = (0.0, String::new());
    let mut compared = 0;
    for r in suite {
        let fine = run_preset(&r.scenario.name, dir, Some(2048));
        let coarse = convergence_scalars(r);
        let fine = convergence_scalars(&fine);
        for (k, v) in &coarse {
            let Some((_, w)) = fine.iter().find(|(kk, _)| kk == k) else {
                worst_change = (f64::INFINITY, format!("{}:{k} missing at 2048", r.scenario.name));
                continue;
            };
            compared += 1;
            let rel = (v - w).abs() / v.abs().max(1e-300);
            if rel > worst_change.0 {
                worst_change = (rel, format!("{}:{k}", r.scenario.name));
            }
        }
    }
    verdict(
        oracle < 1e-10 && worst_power < 1e-12 && worst_change.0 < 0.01,
        format!(
            "oracle err {oracle:.1e}, worst propagation power error {worst_power:.1e}, \
             1024→2048 worst change {:.2e} ({}) over {compared} scalars",
            worst_change.0, worst_change.1
        ),
    )
}

fn determinism(first: &[RunReport], first_secs: f64, dir: &Path) -> Verdict {
    let again: Vec<RunReport> = FIGURE_PRESETS.iter().map(|n| run_preset(n, dir, None)).collect();
    let same = first
        .iter()
        .zip(&again)
        .all(|(a, b)| a.report_sha256 == b.report_sha256 && a.manifest == b.manifest);
    verdict(
        same && first_secs < 120.0,
        format!(
            "{} presets checksum-identical: {same}, suite wall time {first_secs:.1} s on {} threads",
            first.len(),
            std::thread::available_parallelism().map_or(1, |n| n.get())
        ),
    )
}

fn main() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();

    let start = Instant::now();
    let suite: Vec<RunReport> = FIGURE_PRESETS.iter().map(|n| run_preset(n, dir, None)).collect();
    let suite_secs = start.elapsed().as_secs_f64();
    let by_name = |n: &str| suite.iter().find(|r| r.scenario.name == n).unwrap();

    let results = [
        ("1 mode algebra", mode_algebra()),
        ("2 Gouy phase law", gouy_law(dir)),
        ("3 mode conversion", mode_conversion(by_name("fig3_m_plus1"), by_name("fig3_m_minus1"))),
        ("4 conversion robustness", robustness(by_name("fig4_df700"))),
        ("5 vortex generator", generator(by_name("fig6_generator_ideal"))),
        ("6 degraded generator", degraded(by_name("fig7_generator_degraded"))),
        ("7 numerical integrity", integrity(&suite, dir)),
        ("8 determinism and performance", determinism(&suite, suite_secs, dir)),
    ];
    let mut failed = 0;
    for (name, v) in &results {
        println!("criterion {name}: {} ({})", if v.passed { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.passed);
    }
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
