use serde::Serialize;

use super::{AdmittanceModel, ImpedanceModel};
use crate::constants::{HBAR, K_B};
use crate::error::{Error, Result};

fn positive_temperature(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("temperature must be positive, got {t}")))
    }
}

/// Classical current noise 2k_BT Re Y(ω), A²/(rad/s).
pub fn nyquist_current_psd(y: &AdmittanceModel, temperature: f64, omega: f64) -> Result<f64> {
    positive_temperature(temperature)?;
    Ok(2.0 * K_B * temperature * y.eval(omega)?.re)
}

/// Classical voltage noise 2k_BT Re Z(ω), V²/(rad/s).
pub fn johnson_voltage_psd(z: &ImpedanceModel, temperature: f64, omega: f64) -> Result<f64> {
    positive_temperature(temperature)?;
    Ok(2.0 * K_B * temperature * z.eval(omega)?.re)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantumPsd {
    /// Wb²/(rad/s); infinite at ω = 0 for T > 0.
    pub s_phiphi: f64,
    /// V²/(rad/s).
    pub s_vv: f64,
}

/// S_VV = ħω[coth(βħω/2) + 1] Re Z = 2ħω Re Z/(1 − e^{−βħω}), S_φφ = S_VV/ω².
/// Positive ω is emission into the circuit, negative ω absorption by the
/// bath. T = 0 is the limit β → ∞.
pub fn quantum_psd(z: &ImpedanceModel, temperature: f64, omega: f64) -> Result<QuantumPsd> {
    if !(temperature >= 0.0 && temperature.is_finite()) || !omega.is_finite() {
        return Err(Error::InvalidArgument("need T ≥ 0 and finite ω".into()));
    }
    let re = z.eval(omega)?.re;
    if re < 0.0 {
        return Err(Error::Passivity { omega, re });
    }
    let s_vv = if omega == 0.0 {
        2.0 * K_B * temperature * re
    } else if temperature == 0.0 {
        if omega > 0.0 {
            2.0 * HBAR * omega * re
        } else {
            0.0
        }
    } else {
        let x = HBAR * omega / (K_B * temperature);
        let denom = -(-x).exp_m1();
        if denom.is_infinite() {
            0.0
        } else {
            2.0 * HBAR * omega * re / denom
        }
    };
    let s_phiphi = if omega == 0.0 {
        if s_vv > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    } else {
        s_vv / (omega * omega)
    };
    Ok(QuantumPsd { s_phiphi, s_vv })
}
