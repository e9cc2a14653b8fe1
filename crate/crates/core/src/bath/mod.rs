//! Dissipation: Caldeira-Leggett discretization of admittances, classical
//! and quantum noise spectral densities, and the damped LC oscillator.

mod damped;
mod psd;

pub use damped::{
    damped_lc_variance_closed, damped_lc_variance_quadrature, DampedLc, DampedLcParams, DampedLcVariances,
};
pub use psd::{johnson_voltage_psd, nyquist_current_psd, quantum_psd, QuantumPsd};

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::netlist::{Branch, BranchKind, CircuitGraph};

/// The engineering imaginary unit j = −i.
pub const J: Complex64 = Complex64 { re: 0.0, im: -1.0 };

/// Real-valued response function of angular frequency.
pub type ResponseFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Admittance Y(ω) in siemens. Negative frequencies follow Y(−ω) = Y(ω)*.
#[derive(Clone)]
pub enum AdmittanceModel {
    /// y = 1/(R + jL_cω) with L_c = R/ω_c; ω_c = ∞ gives a pure conductance.
    Ohmic {
        r: f64,
        omega_c: f64,
    },
    /// A single inductor, Y = 1/(jωL).
    Inductor {
        l: f64,
    },
    /// Samples (ω ≥ 0 ascending, Y), linearly interpolated.
    Tabulated(Vec<(f64, Complex64)>),
    Callable(ResponseFn),
}

impl fmt::Debug for AdmittanceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdmittanceModel::Ohmic { r, omega_c } => write!(f, "Ohmic {{ r: {r}, omega_c: {omega_c} }}"),
            AdmittanceModel::Inductor { l } => write!(f, "Inductor {{ l: {l} }}"),
            AdmittanceModel::Tabulated(s) => write!(f, "Tabulated({} samples)", s.len()),
            AdmittanceModel::Callable(_) => write!(f, "Callable"),
        }
    }
}

fn interpolate(samples: &[(f64, Complex64)], omega: f64) -> Result<Complex64> {
    let (first, last) = (samples[0].0, samples[samples.len() - 1].0);
    if omega < first || omega > last {
        return Err(Error::InvalidArgument(format!(
            "ω = {omega:e} rad/s outside the tabulated range [{first:e}, {last:e}]"
        )));
    }
    let k = samples.partition_point(|s| s.0 < omega);
    if k == 0 {
        return Ok(samples[0].1);
    }
    let (w0, y0) = samples[k - 1];
    let (w1, y1) = samples[k];
    Ok(y0 + (y1 - y0) * ((omega - w0) / (w1 - w0)))
}

impl AdmittanceModel {
    pub fn ohmic(r: f64, omega_c: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite() && omega_c > 0.0) {
            return Err(Error::InvalidArgument("ohmic admittance needs R > 0 and ω_c > 0".into()));
        }
        Ok(AdmittanceModel::Ohmic { r, omega_c })
    }

    pub fn conductance(r: f64) -> Result<Self> {
        Self::ohmic(r, f64::INFINITY)
    }

    /// Validates ordering and passivity of the samples.
    pub fn tabulated(mut samples: Vec<(f64, Complex64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidArgument("tabulated admittance needs at least two samples".into()));
        }
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in samples.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidArgument(format!("duplicate frequency {:e}", w[0].0)));
            }
        }
        for &(omega, y) in &samples {
            if !(omega >= 0.0 && omega.is_finite() && y.re.is_finite() && y.im.is_finite()) {
                return Err(Error::InvalidArgument(format!("bad sample at ω = {omega}")));
            }
            if y.re < -1e-12 * y.norm() {
                return Err(Error::Passivity { omega, re: y.re });
            }
        }
        Ok(AdmittanceModel::Tabulated(samples))
    }

    pub fn eval(&self, omega: f64) -> Result<Complex64> {
        if omega < 0.0 {
            return Ok(self.eval(-omega)?.conj());
        }
        Ok(match self {
            AdmittanceModel::Ohmic { r, omega_c } => 1.0 / (*r * (1.0 - Complex64::i() * (omega / omega_c))),
            AdmittanceModel::Inductor { l } => 1.0 / (J * omega * *l),
            AdmittanceModel::Tabulated(s) => interpolate(s, omega)?,
            AdmittanceModel::Callable(f) => f(omega),
        })
    }
}

/// Impedance Z(ω) in ohms.
#[derive(Clone)]
pub enum ImpedanceModel {
    Resistor {
        r: f64,
    },
    /// Z = R + jL_cω with L_c = R/ω_c, so Re Z = R at every frequency.
    SeriesRl {
        r: f64,
        omega_c: f64,
    },
    /// Parallel L, C and an ohmic admittance with cutoff: the damped LC.
    DampedLc {
        l: f64,
        c: f64,
        r: f64,
        omega_c: f64,
    },
    /// Z = 1/Y.
    Admittance(AdmittanceModel),
    Callable(ResponseFn),
}

impl fmt::Debug for ImpedanceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImpedanceModel::Resistor { r } => write!(f, "Resistor {{ r: {r} }}"),
            ImpedanceModel::SeriesRl { r, omega_c } => write!(f, "SeriesRl {{ r: {r}, omega_c: {omega_c} }}"),
            ImpedanceModel::DampedLc { l, c, r, omega_c } => {
                write!(f, "DampedLc {{ l: {l}, c: {c}, r: {r}, omega_c: {omega_c} }}")
            }
            ImpedanceModel::Admittance(y) => write!(f, "Admittance({y:?})"),
            ImpedanceModel::Callable(_) => write!(f, "Callable"),
        }
    }
}

impl ImpedanceModel {
    pub fn eval(&self, omega: f64) -> Result<Complex64> {
        if omega < 0.0 {
            return Ok(self.eval(-omega)?.conj());
        }
        Ok(match self {
            ImpedanceModel::Resistor { r } => Complex64::from(*r),
            ImpedanceModel::SeriesRl { r, omega_c } => *r + J * (omega * *r / *omega_c),
            ImpedanceModel::DampedLc { l, c, r, omega_c } => {
                let y = AdmittanceModel::Ohmic { r: *r, omega_c: *omega_c }.eval(omega)?;
                1.0 / (1.0 / (J * omega * *l) + J * omega * *c + y)
            }
            ImpedanceModel::Admittance(y) => 1.0 / y.eval(omega)?,
            ImpedanceModel::Callable(f) => f(omega),
        })
    }
}

/// One series L_m C_m branch of the comb.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BathOscillator {
    pub m: usize,
    /// rad/s.
    pub omega: f64,
    /// Siemens.
    pub y: f64,
    /// Farads.
    pub c: f64,
    /// Henries.
    pub l: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BathDiscretization {
    pub oscillators: Vec<BathOscillator>,
    /// Henries; `None` when jωY vanishes or diverges at zero frequency.
    pub l0: Option<f64>,
    pub delta_omega: f64,
}

/// Decides whether lim_{ω→0} jωY(ω) is finite and non-zero from two low
/// frequencies ω_a < ω_b, extrapolating jωY linearly to ω = 0.
fn zero_frequency_inductance(w_a: f64, y_a: Complex64, w_b: f64, y_b: Complex64) -> Option<f64> {
    let g_a = J * w_a * y_a;
    let g_b = J * w_b * y_b;
    if !(g_a.norm().is_finite() && g_b.norm().is_finite()) {
        return None;
    }
    let g0 = g_a - (g_b - g_a) * (w_a / (w_b - w_a));
    if g0.re > 1e-3 * g_b.norm() && g0.im.abs() < 1e-2 * g0.re {
        Some(1.0 / g0.re)
    } else {
        None
    }
}

/// Replaces Re Y by a comb of series LC oscillators at ω_m = mΔω, m = 1 …
/// ⌊ω_max/Δω⌋, with y_m = (2Δω/πω_m)Re Y(ω_m), C_m = y_m/ω_m, L_m = 1/(y_mω_m).
/// Frequencies with Re Y = 0 contribute no oscillator.
pub fn discretize(y: &AdmittanceModel, delta_omega: f64, omega_max: f64) -> Result<BathDiscretization> {
    if !(delta_omega > 0.0 && delta_omega.is_finite()) || !(omega_max >= 0.0 && omega_max.is_finite()) {
        return Err(Error::InvalidArgument("Δω must be positive and ω_max finite".into()));
    }
    let l0 = match y {
        AdmittanceModel::Tabulated(s) => {
            zero_frequency_inductance(s[0].0.max(f64::MIN_POSITIVE), s[0].1, s[1].0, s[1].1)
        }
        _ => {
            let (wa, wb) = (delta_omega / 10.0, delta_omega);
            zero_frequency_inductance(wa, y.eval(wa)?, wb, y.eval(wb)?)
        }
    };
    let count = (omega_max / delta_omega).floor() as usize;
    let mut oscillators = Vec::with_capacity(count);
    for m in 1..=count {
        let omega = m as f64 * delta_omega;
        let re = y.eval(omega)?.re;
        if re < 0.0 {
            return Err(Error::Passivity { omega, re });
        }
        if re == 0.0 {
            continue;
        }
        let ym = 2.0 * delta_omega / (std::f64::consts::PI * omega) * re;
        oscillators.push(BathOscillator { m, omega, y: ym, c: ym / omega, l: 1.0 / (ym * omega) });
    }
    Ok(BathDiscretization { oscillators, l0, delta_omega })
}

/// Y(z) = i/(L₀z) + Σ [jL_m z + 1/(jC_m z)]⁻¹ at z = ω + iη.
pub fn reconstruct(bath: &BathDiscretization, omega: f64, eta: f64) -> Result<Complex64> {
    if !(eta > 0.0) {
        return Err(Error::InvalidArgument("η must be positive".into()));
    }
    let z = Complex64::new(omega, eta);
    let mut y = match bath.l0 {
        Some(l0) => Complex64::i() / (l0 * z),
        None => Complex64::from(0.0),
    };
    for o in &bath.oscillators {
        y += 1.0 / (J * o.l * z + 1.0 / (J * o.c * z));
    }
    Ok(y)
}

impl BathDiscretization {
    /// Appends the comb to `graph` at `node`: for each m a fresh node
    /// `{prefix}{m}` joined to ground by C_m and to `node` by L_m, plus L₀
    /// from `node` to ground when present.
    pub fn attach(&self, graph: &CircuitGraph, node: &str, prefix: &str) -> Result<CircuitGraph> {
        if !graph.nodes().contains(node) || node == graph.ground() {
            return Err(Error::InvalidArgument(format!("`{node}` is not a non-ground node of the circuit")));
        }
        let mut out = graph.clone();
        let ground = graph.ground().to_string();
        if let Some(l0) = self.l0 {
            out.push_branch(Branch::new(format!("L{prefix}0"), BranchKind::Inductor, node, ground.as_str(), l0))?;
        }
        for o in &self.oscillators {
            let mid = format!("{prefix}{}", o.m);
            if graph.nodes().contains(&mid) {
                return Err(Error::InvalidArgument(format!("node `{mid}` already exists")));
            }
            out.push_branch(Branch::new(
                format!("C{prefix}{}", o.m),
                BranchKind::Capacitor,
                mid.as_str(),
                ground.as_str(),
                o.c,
            ))?;
            out.push_branch(Branch::new(format!("L{prefix}{}", o.m), BranchKind::Inductor, node, mid.as_str(), o.l))?;
        }
        Ok(out)
    }
}
