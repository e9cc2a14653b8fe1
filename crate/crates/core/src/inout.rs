//! Driven, damped linear oscillator in the rotating-wave approximation:
//! intracavity amplitude, reflected field and thermal occupation.

use num_complex::Complex64;
use serde::Serialize;

use crate::constants::{HBAR, K_B};
use crate::error::{Error, Result};

/// Largest γ_a/ω_a for which the rotating-wave treatment is accepted.
pub const MAX_DAMPING_RATIO: f64 = 0.1;

/// Sign ζ in √γ_a a = a_in − ζ a_out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Damping {
    /// ζ = +1.
    Series,
    /// ζ = −1.
    Parallel,
}

impl Damping {
    pub fn zeta(self) -> f64 {
        match self {
            Damping::Series => 1.0,
            Damping::Parallel => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CavityParams {
    /// rad/s.
    pub omega_a: f64,
    /// Energy damping rate, 1/s.
    pub gamma_a: f64,
    pub damping: Damping,
    /// Characteristic impedance, ohms.
    pub z_a: f64,
}

impl CavityParams {
    pub fn new(omega_a: f64, gamma_a: f64, damping: Damping, z_a: f64) -> Result<Self> {
        if !(omega_a > 0.0 && gamma_a > 0.0 && z_a > 0.0) {
            return Err(Error::InvalidArgument("ω_a, γ_a and Z_a must be positive".into()));
        }
        if gamma_a / omega_a >= MAX_DAMPING_RATIO {
            return Err(Error::InvalidArgument(format!(
                "γ_a/ω_a = {:.3} is outside the underdamped regime where the rotating-wave treatment holds",
                gamma_a / omega_a
            )));
        }
        Ok(CavityParams { omega_a, gamma_a, damping, z_a })
    }

    /// Parallel LC loaded by a resistance R, see [`loaded_damping`].
    pub fn loaded_lc(l: f64, c: f64, r: f64) -> Result<Self> {
        let (omega_a, gamma_a) = loaded_damping(l, c, r)?;
        Self::new(omega_a, gamma_a, Damping::Parallel, (l / c).sqrt())
    }

    /// Q = ω_a/γ_a.
    pub fn quality_factor(&self) -> f64 {
        self.omega_a / self.gamma_a
    }

    /// κ = 1/2Q, the damping parameter of the classical damped oscillator.
    pub fn kappa(&self) -> f64 {
        0.5 / self.quality_factor()
    }
}

/// (ω_a, γ_a) of an LC loaded by R in parallel: γ_a = ω_a Z_a/R, so that
/// Q = R/Z_a. No rotating-wave restriction applies to this mapping.
pub fn loaded_damping(l: f64, c: f64, r: f64) -> Result<(f64, f64)> {
    if !(l > 0.0 && c > 0.0 && r > 0.0) {
        return Err(Error::InvalidArgument("L, C and R must be positive".into()));
    }
    let omega_a = 1.0 / (l * c).sqrt();
    Ok((omega_a, omega_a * (l / c).sqrt() / r))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriveSpec {
    /// Input field amplitude, √(photons/s).
    #[serde(serialize_with = "ser_complex")]
    pub amplitude: Complex64,
    /// rad/s.
    pub omega_d: f64,
    /// Thermal photon number of the input line.
    pub thermal_n: f64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq([z.re, z.im])
}

impl DriveSpec {
    pub fn new(amplitude: Complex64, omega_d: f64, thermal_n: f64) -> Result<Self> {
        if !(thermal_n >= 0.0) {
            return Err(Error::InvalidArgument("thermal photon number must be non-negative".into()));
        }
        Ok(DriveSpec { amplitude, omega_d, thermal_n })
    }
}

/// ⟨a⟩ = √γ_a·a_in/(i(ω_a − ω_d) + γ_a/2), in the frame of the drive.
pub fn steady_state(cavity: &CavityParams, drive: &DriveSpec) -> Complex64 {
    let denom = Complex64::new(0.5 * cavity.gamma_a, cavity.omega_a - drive.omega_d);
    cavity.gamma_a.sqrt() * drive.amplitude / denom
}

/// a_out = ζ(a_in − √γ_a a).
pub fn input_output(a_in: Complex64, a: Complex64, cavity: &CavityParams) -> Complex64 {
    cavity.damping.zeta() * (a_in - cavity.gamma_a.sqrt() * a)
}

/// ⟨a⟩(t) = a_ss + (a₀ − a_ss)·exp(−(iΔ + γ_a/2)t), Δ = ω_a − ω_d.
pub fn transient(cavity: &CavityParams, drive: &DriveSpec, a0: Complex64, times: &[f64]) -> Vec<Complex64> {
    let ss = steady_state(cavity, drive);
    let rate = Complex64::new(0.5 * cavity.gamma_a, cavity.omega_a - drive.omega_d);
    times.iter().map(|&t| ss + (a0 - ss) * (-rate * t).exp()).collect()
}

/// Mean photon number: coherent part plus the thermal population.
pub fn occupation(cavity: &CavityParams, drive: &DriveSpec) -> f64 {
    steady_state(cavity, drive).norm_sqr() + drive.thermal_n
}

/// Bose-Einstein N_T(ω) = 1/(e^{ħω/k_BT} − 1); negative ω obeys
/// N_T(−ω) = −N_T(ω) − 1.
pub fn thermal_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if omega == 0.0 || !omega.is_finite() {
        return Err(Error::InvalidArgument("N_T has a pole at ω = 0".into()));
    }
    if !(temperature >= 0.0 && temperature.is_finite()) {
        return Err(Error::InvalidArgument("temperature must be non-negative".into()));
    }
    if temperature == 0.0 {
        return Ok(if omega > 0.0 { 0.0 } else { -1.0 });
    }
    Ok(1.0 / (HBAR * omega / (K_B * temperature)).exp_m1())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cavity(damping: Damping) -> CavityParams {
        CavityParams::new(2.0 * std::f64::consts::PI * 5e9, 2e6, damping, 50.0).unwrap()
    }

    fn drive(amp: f64, detuning: f64) -> DriveSpec {
        let c = cavity(Damping::Series);
        DriveSpec::new(Complex64::new(amp, 0.0), c.omega_a - detuning, 0.0).unwrap()
    }

    #[test]
    fn resonant_amplitude() {
        let c = cavity(Damping::Series);
        let a = steady_state(&c, &drive(3.0, 0.0));
        assert!((a - 2.0 * 3.0 / c.gamma_a.sqrt()).norm() < 1e-15);
        assert_eq!(steady_state(&c, &drive(0.0, 1e5)).norm(), 0.0);
    }

    #[test]
    fn half_power_at_half_linewidth() {
        let c = cavity(Damping::Series);
        let on = steady_state(&c, &drive(1.0, 0.0)).norm_sqr();
        for d in [c.gamma_a / 2.0, -c.gamma_a / 2.0] {
            let off = steady_state(&c, &drive(1.0, d)).norm_sqr();
            assert!((off / on - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn linewidth_from_half_maximum_crossing() {
        let c = cavity(Damping::Parallel);
        let on = steady_state(&c, &drive(1.0, 0.0)).norm_sqr();
        let (mut lo, mut hi) = (0.0, 10.0 * c.gamma_a);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if steady_state(&c, &drive(1.0, mid)).norm_sqr() > 0.5 * on {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((2.0 * lo / c.gamma_a - 1.0).abs() < 1e-6);
    }

    #[test]
    fn reflection_cases() {
        for damping in [Damping::Series, Damping::Parallel] {
            let c = cavity(damping);
            let z = damping.zeta();
            let a_in = Complex64::new(0.3, -0.4);
            assert_eq!(input_output(a_in, Complex64::from(0.0), &c), z * a_in);
            let d = DriveSpec::new(a_in, c.omega_a, 0.0).unwrap();
            let out = input_output(a_in, steady_state(&c, &d), &c);
            assert!((out + z * a_in).norm() < 1e-12);
        }
    }

    #[test]
    fn transient_decay_and_limit() {
        let c = cavity(Damping::Series);
        let free = DriveSpec::new(Complex64::from(0.0), c.omega_a + 3e5, 0.0).unwrap();
        let ts: Vec<f64> = (0..50).map(|k| k as f64 * 1e-7).collect();
        let a = transient(&c, &free, Complex64::from(1.0), &ts);
        for (t, v) in ts.iter().zip(&a) {
            assert!((v.norm() - (-c.gamma_a * t / 2.0).exp()).abs() < 1e-14);
            assert!((v.norm_sqr() - (-c.gamma_a * t).exp()).abs() < 1e-14);
        }
        let d = drive(2.0, 4e5);
        let late = transient(&c, &d, Complex64::new(5.0, 1.0), &[1e-4])[0];
        let ss = steady_state(&c, &d);
        assert!((late - ss).norm() < 1e-12 * ss.norm());
    }

    #[test]
    fn thermal_values() {
        let t = 0.1;
        let w = K_B * t / HBAR;
        assert!((thermal_occupation(w, t).unwrap() - 1.0 / (std::f64::consts::E - 1.0)).abs() < 1e-14);
        assert_eq!(thermal_occupation(w, 0.0).unwrap(), 0.0);
        assert!(thermal_occupation(0.0, t).is_err());
    }

    #[test]
    fn loaded_quality_factor() {
        // Z₀ = 10 Ω (1 nH, 10 pF) loaded by 100 Ω.
        let (w, g) = loaded_damping(1e-9, 10e-12, 100.0).unwrap();
        assert!((w / g - 10.0).abs() < 1e-12);
        let c = CavityParams::loaded_lc(1e-9, 10e-12, 1000.0).unwrap();
        assert!((c.quality_factor() - 100.0).abs() < 1e-10);
        assert!((c.kappa() - 0.005).abs() < 1e-14);
        // Q = 10 is the edge of the rotating-wave regime.
        assert!(CavityParams::loaded_lc(1e-9, 10e-12, 50.0).is_err());
    }

    proptest! {
        #[test]
        fn reflection_is_unitary(detuning in -1e8f64..1e8, re in -2.0f64..2.0, im in -2.0f64..2.0) {
            let c = cavity(Damping::Series);
            let a_in = Complex64::new(re, im);
            let d = DriveSpec::new(a_in, c.omega_a - detuning, 0.0).unwrap();
            let out = input_output(a_in, steady_state(&c, &d), &c);
            prop_assert!((out.norm() - a_in.norm()).abs() < 1e-12 * a_in.norm().max(1e-300));
        }

        #[test]
        fn negative_frequency_identity(w in 1e6f64..1e12, t in 1e-3f64..10.0) {
            let s = thermal_occupation(w, t).unwrap() + thermal_occupation(-w, t).unwrap();
            prop_assert!((s + 1.0).abs() < 1e-9);
        }
    }
}
