use nalgebra::DVector;

use super::generalized_modes;
use super::model::HamiltonianModel;
use crate::error::{Error, Result};

/// Largest ω·dt accepted by [`simulate_classical`].
pub const MAX_PHASE_STEP: f64 = 0.1;
/// Largest accepted relative energy excursion.
pub const MAX_ENERGY_DRIFT: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub phi: Vec<DVector<f64>>,
    pub q: Vec<DVector<f64>>,
    pub energy: Vec<f64>,
    /// max |E(t) − E(0)| / scale, where scale is the excitation energy above U(0).
    pub max_relative_drift: f64,
}

/// Kick-drift-kick leapfrog on Hamilton's equations. The step is refused
/// unless dt times the stiffest possible mode frequency stays below 0.1, and
/// the run fails if energy wanders by more than one part in 10⁶.
pub fn simulate_classical(
    model: &HamiltonianModel,
    phi0: &DVector<f64>,
    q0: &DVector<f64>,
    dt: f64,
    steps: usize,
) -> Result<Trajectory> {
    let n = model.dim();
    if phi0.len() != n || q0.len() != n {
        return Err(Error::InvalidArgument(format!("initial state must have {n} components")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument("time step must be positive".into()));
    }
    let w_max = generalized_modes(&model.cap, &model.stiffness_bound())?.frequencies.last().copied().unwrap_or(0.0);
    if dt * w_max >= MAX_PHASE_STEP {
        return Err(Error::InvalidArgument(format!(
            "time step {dt:e} s too large: dt·ω_max = {:.3} must stay below {MAX_PHASE_STEP}",
            dt * w_max
        )));
    }

    let e0 = model.energy(phi0, q0);
    let u_ref = model.potential(&DVector::zeros(n));
    let scale = (e0 - u_ref).abs().max(1e-12 * e0.abs().max(u_ref.abs())).max(f64::MIN_POSITIVE);

    let mut traj = Trajectory {
        times: Vec::with_capacity(steps + 1),
        phi: Vec::with_capacity(steps + 1),
        q: Vec::with_capacity(steps + 1),
        energy: Vec::with_capacity(steps + 1),
        max_relative_drift: 0.0,
    };
    let (mut phi, mut q) = (phi0.clone(), q0.clone());
    let mut grad = model.potential_gradient(&phi);
    traj.times.push(0.0);
    traj.phi.push(phi.clone());
    traj.q.push(q.clone());
    traj.energy.push(e0);
    for k in 1..=steps {
        q -= &grad * (0.5 * dt);
        phi += model.velocity(&q) * dt;
        grad = model.potential_gradient(&phi);
        q -= &grad * (0.5 * dt);
        let e = model.energy(&phi, &q);
        let drift = (e - e0).abs() / scale;
        traj.max_relative_drift = traj.max_relative_drift.max(drift);
        if !(drift <= MAX_ENERGY_DRIFT) {
            return Err(Error::NonConvergence(format!(
                "relative energy drift {drift:.3e} at step {k} exceeds {MAX_ENERGY_DRIFT:e}; reduce the time step"
            )));
        }
        traj.times.push(k as f64 * dt);
        traj.phi.push(phi.clone());
        traj.q.push(q.clone());
        traj.energy.push(e);
    }
    Ok(traj)
}
