//! Quantization of lumped-element superconducting circuits.
//!
//! The crate takes a textual netlist of capacitors, inductors and Josephson
//! elements and produces node-variable Hamiltonians, normal modes, quantum
//! operator matrices and spectra of single-junction artificial atoms, together
//! with the dissipation machinery needed to reason about noise: Caldeira-Leggett
//! discretization of admittances, classical and quantum fluctuation-dissipation
//! spectral densities, variances of the damped LC oscillator and the RWA
//! input-output relations of a driven cavity.
//!
//! All quantities are SI unless a name says otherwise.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod atoms;
pub mod bath;
pub mod constants;
pub mod error;
pub mod hamlag;
pub mod inout;
pub mod netlist;
pub mod quad;
pub mod special;

pub use error::{Error, Result};

pub use atoms::{AtomSpec, Basis, OperatorMatrix, OscillatorParams, SquidReduction};
pub use bath::{AdmittanceModel, BathDiscretization, DampedLc, DampedLcParams, DampedLcVariances, ImpedanceModel};
pub use hamlag::{CircuitMatrices, HamiltonianModel, NormalModes};
pub use inout::{CavityParams, Damping, DriveSpec};
pub use netlist::{Branch, BranchKind, CircuitGraph, NodeClassification, SpanningTree, ValidationReport};

pub use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64;
