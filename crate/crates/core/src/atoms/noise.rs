use serde::Serialize;

use super::basis::{levels, levels_unchecked, Truncation};
use super::AtomSpec;
use crate::constants::HBAR;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// Reduced external flux, radians.
    PhiExt,
    /// Offset charge, units of 2e.
    Ng,
}

impl SweepParameter {
    pub fn apply(self, spec: &AtomSpec, value: f64) -> AtomSpec {
        match self {
            SweepParameter::PhiExt => spec.with_phi_ext(value),
            SweepParameter::Ng => spec.with_ng(value),
        }
    }

    pub fn get(self, spec: &AtomSpec) -> f64 {
        match self {
            SweepParameter::PhiExt => spec.phi_ext,
            SweepParameter::Ng => spec.n_g,
        }
    }
}

const INITIAL_STEP: f64 = 1e-2;
const MIN_STEP: f64 = 1e-6;
const AGREEMENT: f64 = 1e-6;

/// ∂ω_ij/∂parameter in rad/s per unit (per radian of ϕ_ext, per 2e of n_g).
///
/// Central differences at steps h and h/2 must agree to 10⁻⁶ relative, or
/// to within the round-off of the eigenvalues; h is halved from 10⁻² until
/// they do. The returned value is the Richardson combination of the two.
pub fn sensitivity(spec: &AtomSpec, param: SweepParameter, pair: (usize, usize), trunc: Truncation) -> Result<f64> {
    let (i, j) = pair;
    let k = i.max(j) + 1;
    let nominal = levels(spec, k, trunc)?;
    let x0 = param.get(spec);
    let omega = |x: f64| -> Result<f64> {
        let e = levels_unchecked(&param.apply(spec, x), k, trunc)?;
        Ok((e[j] - e[i]) / HBAR)
    };
    let energy_scale = nominal.iter().fold(spec.ec.max(spec.ej).max(spec.el), |m, e| m.max(e.abs()));
    let noise = 64.0 * f64::EPSILON * energy_scale / HBAR;

    let central = |h: f64| -> Result<f64> { Ok((omega(x0 + h)? - omega(x0 - h)?) / (2.0 * h)) };
    let mut h = INITIAL_STEP;
    let mut coarse = central(h)?;
    while h / 2.0 >= MIN_STEP {
        let fine = central(h / 2.0)?;
        let floor = noise / (h / 2.0);
        if (coarse - fine).abs() <= AGREEMENT * fine.abs() + floor {
            return Ok((4.0 * fine - coarse) / 3.0);
        }
        coarse = fine;
        h /= 2.0;
    }
    Err(Error::NonConvergence(format!("difference quotient did not settle down to step {h:e}")))
}

/// Proportional dephasing estimate; the absolute prefactor is not defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dephasing {
    /// The bracketed combination, 1/s up to an unspecified prefactor.
    pub value: f64,
    pub proportional: bool,
}

/// E_L > 0: [∂ω/∂ϕ_ext]²((ħω/E_L)² S_qq + S_ϕϕ).
/// E_L = 0: [∂ω/∂n_g]² S_qq.
///
/// Spectral densities are of the dimensionless charge (units of 2e) and
/// reduced flux, per unit angular frequency; `omega` is in rad/s.
pub fn dephasing_rate(
    spec: &AtomSpec,
    d_omega: f64,
    omega: f64,
    s_qq: Option<f64>,
    s_phiphi: Option<f64>,
) -> Result<Dephasing> {
    spec.check()?;
    let value = if spec.el > 0.0 {
        let (sqq, spp) = match (s_qq, s_phiphi) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::InvalidArgument("E_L > 0 needs both S_qq and S_phiphi".into())),
        };
        d_omega.powi(2) * ((HBAR * omega / spec.el).powi(2) * sqq + spp)
    } else {
        let sqq = s_qq.ok_or_else(|| Error::InvalidArgument("E_L = 0 needs S_qq".into()))?;
        d_omega.powi(2) * sqq
    };
    Ok(Dephasing { value, proportional: true })
}
