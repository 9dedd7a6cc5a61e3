//! Tabular exports with a fixed header row (RFC 4180).

use std::io::Write;

use num_complex::Complex64;

use super::{ChargeReport, GouyProfile};
use crate::error::Result;

pub const GOUY_HEADER: [&str; 2] = ["z_m", "phase_rad"];
pub const WINDING_HEADER: [&str; 3] = ["radius_m", "winding", "raw_rad"];
pub const OVERLAP_HEADER: [&str; 4] = ["mode", "re", "im", "power"];

pub fn write_gouy<W: Write>(w: W, profile: &GouyProfile) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(GOUY_HEADER)?;
    for (z, p) in profile.z_values.iter().zip(&profile.phase) {
        out.write_record([format!("{z:e}"), format!("{p:e}")])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_winding<W: Write>(w: W, reports: &[ChargeReport]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(WINDING_HEADER)?;
    for r in reports {
        out.write_record([format!("{:e}", r.radius), r.winding.to_string(), format!("{:e}", r.raw)])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_overlaps<W: Write>(w: W, rows: &[(String, Complex64)]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(OVERLAP_HEADER)?;
    for (name, v) in rows {
        out.write_record([
            name.clone(),
            format!("{:e}", v.re),
            format!("{:e}", v.im),
            format!("{:e}", v.norm_sqr()),
        ])?;
    }
    out.flush()?;
    Ok(())
}
