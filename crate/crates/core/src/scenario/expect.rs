use std::f64::consts::FRAC_PI_4;

use super::run::{OrientationResult, Simulation};
use crate::analysis::orientation_difference;

/// A check a preset makes on its own results.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Expectation {
    /// Lobe axis within `tol` of `angle` (modulo π).
    Orientation { angle: f64, tol: f64 },
    /// Lobe axis within `tol` of either diagonal.
    Diagonal { tol: f64 },
    /// Intensity too isotropic to define an orientation.
    Isotropic,
    MinAnisotropy(f64),
    /// Every loop with radius fraction in `[from, to]` passes with this winding.
    WindingBand { winding: i32, from: f64, to: f64 },
    /// At least one loop passes with winding ±`abs`.
    WindingSomewhere { abs: i32 },
    MaxCentralContrast(f64),
    /// Circulation at half the ring radius has the sign of the winding there.
    CirculationFollowsWinding,
    /// Output power equals input power within `tol`.
    Lossless { tol: f64 },
    /// Output = input − (1 − T)·covered power within `tol`, T the plate's intensity transmission.
    PlateAbsorption { transmission: f64, tol: f64 },
    MaxGouyDeviation(f64),
    RelativeGouy { value: f64, tol: f64 },
    MinFramePower(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpectationOutcome {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

fn outcome(label: impl Into<String>, passed: bool, detail: String) -> ExpectationOutcome {
    ExpectationOutcome {
        label: label.into(),
        passed,
        detail,
    }
}

fn missing(label: &str, what: &str) -> ExpectationOutcome {
    outcome(label, false, format!("{what} was not measured"))
}

impl Expectation {
    pub fn label(&self) -> String {
        match self {
            Expectation::Orientation { angle, tol } => format!("orientation {angle:.4} ± {tol} rad"),
            Expectation::Diagonal { tol } => format!("orientation ±π/4 ± {tol} rad"),
            Expectation::Isotropic => "no orientation".into(),
            Expectation::MinAnisotropy(a) => format!("anisotropy ≥ {a}"),
            Expectation::WindingBand { winding, from, to } => {
                format!("winding {winding:+} for loops at {from}–{to} of the ring radius")
            }
            Expectation::WindingSomewhere { abs } => format!("winding ±{abs} on some loop"),
            Expectation::MaxCentralContrast(c) => format!("central intensity ≤ {c} of peak"),
            Expectation::CirculationFollowsWinding => "circulation sign matches winding".into(),
            Expectation::Lossless { tol } => format!("power conserved to {tol:e}"),
            Expectation::PlateAbsorption { transmission, tol } => {
                format!("output = 1 − {:.3}·covered fraction ± {tol:e}", 1.0 - transmission)
            }
            Expectation::MaxGouyDeviation(d) => format!("Gouy phase within {d} rad of the law"),
            Expectation::RelativeGouy { value, tol } => format!("relative Gouy phase {value:.4} ± {tol} rad"),
            Expectation::MinFramePower(p) => format!("best converter frame power ≥ {p}"),
        }
    }

    pub fn check(&self, sim: &Simulation) -> ExpectationOutcome {
        let label = self.label();
        let obs = &sim.observables;
        match *self {
            Expectation::Orientation { angle, tol } => match obs.orientation {
                Some(OrientationResult::Oriented(o)) => {
                    let d = orientation_difference(o.angle, angle);
                    outcome(label, d <= tol, format!("angle {:.4} rad, off by {d:.4}", o.angle))
                }
                Some(OrientationResult::Isotropic { anisotropy }) => {
                    outcome(label, false, format!("isotropic (anisotropy {anisotropy:.3})"))
                }
                None => missing(&label, "orientation"),
            },
            Expectation::Diagonal { tol } => match obs.orientation {
                Some(OrientationResult::Oriented(o)) => {
                    let d = orientation_difference(o.angle, FRAC_PI_4).min(orientation_difference(o.angle, -FRAC_PI_4));
                    outcome(label, d <= tol, format!("angle {:.4} rad, off by {d:.4}", o.angle))
                }
                Some(OrientationResult::Isotropic { anisotropy }) => {
                    outcome(label, false, format!("isotropic (anisotropy {anisotropy:.3})"))
                }
                None => missing(&label, "orientation"),
            },
            Expectation::Isotropic => match obs.orientation {
                Some(OrientationResult::Isotropic { anisotropy }) => {
                    outcome(label, true, format!("anisotropy {anisotropy:.4}"))
                }
                Some(OrientationResult::Oriented(o)) => {
                    outcome(label, false, format!("oriented at {:.4} rad (anisotropy {:.3})", o.angle, o.anisotropy))
                }
                None => missing(&label, "orientation"),
            },
            Expectation::MinAnisotropy(min) => {
                let a = match obs.orientation {
                    Some(OrientationResult::Oriented(o)) => o.anisotropy,
                    Some(OrientationResult::Isotropic { anisotropy }) => anisotropy,
                    None => return missing(&label, "orientation"),
                };
                outcome(label, a >= min, format!("anisotropy {a:.4}"))
            }
            Expectation::WindingBand { winding, from, to } => {
                let band: Vec<_> = obs
                    .windings
                    .iter()
                    .filter(|p| p.fraction >= from - 1e-9 && p.fraction <= to + 1e-9)
                    .collect();
                if band.is_empty() {
                    return missing(&label, "winding in this band");
                }
                let got: Vec<String> = band
                    .iter()
                    .map(|p| match &p.outcome {
                        Ok(r) => format!("{:+}", r.winding),
                        Err(_) => "rejected".into(),
                    })
                    .collect();
                let ok = band.iter().all(|p| matches!(&p.outcome, Ok(r) if r.winding == winding));
                outcome(label, ok, format!("windings [{}]", got.join(", ")))
            }
            Expectation::WindingSomewhere { abs } => {
                let hits: Vec<String> = obs
                    .clean_windings()
                    .filter(|(_, w)| w.abs() == abs)
                    .map(|(f, w)| format!("{w:+} at {f:.1}"))
                    .collect();
                let detail = if hits.is_empty() { "none".into() } else { hits.join(", ") };
                outcome(label, !hits.is_empty(), detail)
            }
            Expectation::MaxCentralContrast(max) => match obs.ring {
                Some(r) => outcome(label, r.central_contrast <= max, format!("{:.3e}", r.central_contrast)),
                None => missing(&label, "ring"),
            },
            Expectation::CirculationFollowsWinding => {
                let w = obs
                    .windings
                    .iter()
                    .find(|p| (p.fraction - 0.5).abs() < 1e-9)
                    .and_then(|p| p.outcome.as_ref().ok());
                match (obs.circulation, w) {
                    (Some(c), Some(r)) => outcome(
                        label,
                        r.winding != 0 && c.signum() == (r.winding as f64).signum(),
                        format!("circulation {c:.4e}, winding {:+}", r.winding),
                    ),
                    _ => missing(&label, "circulation or winding at 0.5"),
                }
            }
            Expectation::Lossless { tol } => {
                let d = (sim.ledger.output - sim.ledger.input).abs();
                outcome(label, d <= tol, format!("|out − in| = {d:.3e}"))
            }
            Expectation::PlateAbsorption { transmission, tol } => match &sim.ledger.plate {
                Some(b) => {
                    let expected = sim.ledger.input - (1.0 - transmission) * b.covered;
                    let d = (sim.ledger.output - expected).abs();
                    outcome(
                        label,
                        d <= tol,
                        format!("covered fraction {:.6}, output {:.9}, off by {d:.3e}", b.covered_fraction(), sim.ledger.output),
                    )
                }
                None => missing(&label, "plate budget"),
            },
            Expectation::MaxGouyDeviation(max) => match &obs.gouy {
                Some(g) => outcome(label, g.max_deviation <= max, format!("max deviation {:.4e} rad", g.max_deviation)),
                None => missing(&label, "Gouy scan"),
            },
            Expectation::RelativeGouy { value, tol } => match obs.relative_gouy {
                Some(r) => {
                    let d = (r.numeric - value).abs();
                    outcome(label, d <= tol, format!("numeric {:.4}, analytic {:.4}", r.numeric, r.analytic))
                }
                None => missing(&label, "relative Gouy phase"),
            },
            Expectation::MinFramePower(min) => match obs.frames {
                Some(d) => outcome(
                    label,
                    d.best_power() >= min,
                    format!("+45: {:.4}, −45: {:.4}, residual {:.4}", d.plus.norm_sqr(), d.minus.norm_sqr(), d.residual),
                ),
                None => missing(&label, "frame overlap"),
            },
        }
    }
}
