use std::f64::consts::PI;

use crate::constants::{ELECTRON_MASS, ELEMENTARY_CHARGE, PLANCK, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

/// Relativistic de Broglie wavelength (m) of an electron accelerated through `voltage_kv` kilovolts.
pub fn wavelength_from_kv(voltage_kv: f64) -> Result<f64> {
    if !(voltage_kv > 0.0) || !voltage_kv.is_finite() {
        return Err(Error::domain(format!(
            "accelerating voltage must be positive and finite, got {voltage_kv} kV"
        )));
    }
    let ev = ELEMENTARY_CHARGE * voltage_kv * 1e3;
    let rest = ELECTRON_MASS * SPEED_OF_LIGHT * SPEED_OF_LIGHT;
    Ok(PLANCK / (2.0 * ELECTRON_MASS * ev * (1.0 + ev / (2.0 * rest))).sqrt())
}

/// Beam energy and the wavelength/wavenumber derived from it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BeamPhysics {
    voltage_kv: f64,
    wavelength: f64,
    wavenumber: f64,
}

impl BeamPhysics {
    pub fn from_kv(voltage_kv: f64) -> Result<Self> {
        let wavelength = wavelength_from_kv(voltage_kv)?;
        Ok(BeamPhysics {
            voltage_kv,
            wavelength,
            wavenumber: 2.0 * PI / wavelength,
        })
    }

    pub fn voltage_kv(&self) -> f64 {
        self.voltage_kv
    }

    /// Electron wavelength in meters.
    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// k = 2π/λ in 1/m.
    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }
}
