//! Quantized single-degree-of-freedom circuits: LC oscillators, Josephson
//! atoms in the charge and Fock bases, SQUID and array reductions, and
//! noise sensitivities.

mod basis;
mod noise;
mod oscillator;
mod reduce;
mod regime;

pub use basis::{
    charge_basis_hamiltonian, fock_basis_hamiltonian, hamiltonian, levels, levels_unchecked, spectrum, Basis,
    OperatorMatrix, Truncation, CONVERGENCE_TOL,
};
pub use noise::{dephasing_rate, sensitivity, Dephasing, SweepParameter};
pub use oscillator::{lc_quantize, thermal_variances, OscillatorParams};
pub use reduce::{
    array_reduce, combine_junctions, snail_taylor, squid_reduce, three_wave_search, ArrayReduction, MixingPoint,
    SquidReduction,
};
pub use regime::{classify_regime, QubitFamily, RegimeReport};

use serde::Serialize;

use crate::constants::{charging_energy, inductive_energy, E_CHARGE, REDUCED_FLUX_QUANTUM};
use crate::error::{Error, Result};
use crate::hamlag::build_hamiltonian;
use crate::netlist::{spanning_tree, CircuitGraph};

/// H = 4E_C(n − n_g)² − E_J cos ϕ + E_L/2 (ϕ − ϕ_ext)².
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtomSpec {
    /// Joules.
    pub ec: f64,
    /// Joules.
    pub ej: f64,
    /// Joules; zero without a shunt inductor.
    pub el: f64,
    /// Offset charge in units of 2e.
    pub n_g: f64,
    /// Reduced external flux, radians.
    pub phi_ext: f64,
}

impl AtomSpec {
    pub fn new(ec: f64, ej: f64, el: f64) -> Result<Self> {
        let spec = AtomSpec { ec, ej, el, n_g: 0.0, phi_ext: 0.0 };
        spec.check()?;
        Ok(spec)
    }

    pub fn with_ng(mut self, n_g: f64) -> Self {
        self.n_g = n_g;
        self
    }

    pub fn with_phi_ext(mut self, phi_ext: f64) -> Self {
        self.phi_ext = phi_ext;
        self
    }

    pub(crate) fn check(&self) -> Result<()> {
        if !(self.ec > 0.0 && self.ec.is_finite()) {
            return Err(Error::InvalidArgument(format!("E_C must be positive, got {}", self.ec)));
        }
        if !(self.ej >= 0.0 && self.ej.is_finite()) || !(self.el >= 0.0 && self.el.is_finite()) {
            return Err(Error::InvalidArgument("E_J and E_L must be non-negative".into()));
        }
        if !(self.n_g.is_finite() && self.phi_ext.is_finite()) {
            return Err(Error::InvalidArgument("offsets must be finite".into()));
        }
        Ok(())
    }

    /// Reduces a circuit with a single non-ground node. Parallel junctions
    /// merge into one cosine by phasor sum, parallel inductors into E_L, and
    /// the inductive and Josephson offsets into a single ϕ_ext.
    pub fn from_circuit(graph: &CircuitGraph) -> Result<Self> {
        let model = build_hamiltonian(graph, &spanning_tree(graph)?)?;
        if model.dim() != 1 {
            return Err(Error::InvalidArgument(format!(
                "an atom needs exactly one non-ground node, circuit has {}",
                model.dim()
            )));
        }
        let ec = charging_energy(model.cap[(0, 0)]);
        let k = model.quad_flux[(0, 0)];
        let el = if k > 0.0 { inductive_energy(1.0 / k) } else { 0.0 };
        let junctions: Vec<(f64, f64)> =
            model.josephson_terms.iter().map(|t| (t.ej, t.incidence[0] * t.offset / REDUCED_FLUX_QUANTUM)).collect();
        let (ej, theta) = combine_junctions(&junctions);
        let phi_ext = if el > 0.0 { theta - model.linear_flux[0] * REDUCED_FLUX_QUANTUM / el } else { theta };
        let spec = AtomSpec { ec, ej, el, n_g: model.offset_charges[0] / (2.0 * E_CHARGE), phi_ext };
        spec.check()?;
        Ok(spec)
    }
}
