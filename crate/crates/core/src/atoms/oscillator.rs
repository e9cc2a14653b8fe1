use serde::Serialize;

use crate::constants::{HBAR, K_B};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatorParams {
    /// rad/s.
    pub omega0: f64,
    /// Ohms.
    pub z0: f64,
    /// Webers.
    pub phi_zpf: f64,
    /// Coulombs.
    pub q_zpf: f64,
}

pub fn lc_quantize(l: f64, c: f64) -> Result<OscillatorParams> {
    if !(l > 0.0 && c > 0.0 && l.is_finite() && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("L and C must be positive, got L={l}, C={c}")));
    }
    let z0 = (l / c).sqrt();
    Ok(OscillatorParams {
        omega0: 1.0 / (l * c).sqrt(),
        z0,
        phi_zpf: (HBAR * z0 / 2.0).sqrt(),
        q_zpf: (HBAR / (2.0 * z0)).sqrt(),
    })
}

/// coth(x) with x = +∞ mapped to 1.
pub(crate) fn coth(x: f64) -> f64 {
    if x > 20.0 {
        1.0
    } else {
        1.0 / x.tanh()
    }
}

/// Thermal ⟨φ²⟩ (Wb²) and ⟨q²⟩ (C²) of an LC oscillator; T = 0 gives the
/// zero-point values.
pub fn thermal_variances(l: f64, c: f64, temperature: f64) -> Result<(f64, f64)> {
    if !(temperature >= 0.0) {
        return Err(Error::InvalidArgument(format!("temperature must be non-negative, got {temperature}")));
    }
    let p = lc_quantize(l, c)?;
    let factor = if temperature == 0.0 { 1.0 } else { coth(HBAR * p.omega0 / (2.0 * K_B * temperature)) };
    Ok((p.phi_zpf.powi(2) * factor, p.q_zpf.powi(2) * factor))
}
