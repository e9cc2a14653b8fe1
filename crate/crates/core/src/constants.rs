//! Physical constants (exact SI 2019 values where defined).

use std::f64::consts::PI;

/// Elementary charge, C.
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// Planck constant, J·s.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = PLANCK / (2.0 * PI);
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Flux quantum h/2e, Wb.
pub const FLUX_QUANTUM: f64 = PLANCK / (2.0 * E_CHARGE);
/// Reduced flux quantum ħ/2e, Wb.
pub const REDUCED_FLUX_QUANTUM: f64 = HBAR / (2.0 * E_CHARGE);
/// Resistance quantum h/(2e)², Ω.
pub const RESISTANCE_QUANTUM: f64 = PLANCK / (4.0 * E_CHARGE * E_CHARGE);
/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Josephson inductance φ₀²/E_J for a junction of energy `ej` (joules).
pub fn josephson_inductance(ej: f64) -> f64 {
    REDUCED_FLUX_QUANTUM * REDUCED_FLUX_QUANTUM / ej
}

/// Charging energy e²/2C, J.
pub fn charging_energy(capacitance: f64) -> f64 {
    E_CHARGE * E_CHARGE / (2.0 * capacitance)
}

/// Inductive energy φ₀²/L, J.
pub fn inductive_energy(inductance: f64) -> f64 {
    REDUCED_FLUX_QUANTUM * REDUCED_FLUX_QUANTUM / inductance
}

/// Energy → frequency in Hz (E/h).
pub fn joules_to_hz(energy: f64) -> f64 {
    energy / PLANCK
}

/// Frequency in Hz → energy (h·f).
pub fn hz_to_joules(freq: f64) -> f64 {
    freq * PLANCK
}
