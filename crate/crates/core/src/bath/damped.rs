//! Equilibrium fluctuations of an LC oscillator shunted by an ohmic
//! admittance y(ω) = 1/(R(1 − iω/ω_c)).
//!
//! Internally everything is dimensionless: ħ = ω₀ = Z₀ = 1, so frequencies
//! are x = ω/ω₀, θ = k_BT/ħω₀, κ = Z₀/2R and w = ω_c/ω₀. Flux variances come
//! out in units of ħZ₀ and charge variances in units of ħ/Z₀.
//!
//! With these units the response is z(x) = 1/(1/(jx) + jx + 2κ/(1 − ix/w)),
//! whose poles are the roots of ν³ + wν² + (1 + 2κw)ν + w. Writing r_i for
//! minus those roots and G(r) = Ψ(1 + r/2πθ) (ln r at θ = 0), the Matsubara
//! sums collapse to second divided differences over the three r_i:
//!
//!   ⟨Φ²⟩ = θ − (1/π)·[(w − r)G(r)][r₁, r₂, r₃]
//!   ⟨Q²⟩ = ⟨Φ²⟩ + Δ,   Δ = (2κw/π)·[rG(r)][r₁, r₂, r₃]
//!
//! As w → ∞ the roots tend to κ ± √(κ² − 1) and w − 2κ, which gives the
//! familiar large-cutoff forms built from Ψ(1 + λ±) and Ψ(1 + λ_c).

use num_complex::Complex64;
use serde::Serialize;

use super::J;
use crate::constants::{HBAR, K_B};
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_to_infinity, QuadOptions};
use crate::special::digamma_complex;

use std::f64::consts::PI;

/// Parallel L, C and ohmic R with cutoff ω_c, at temperature T.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DampedLc {
    pub l: f64,
    pub c: f64,
    pub r: f64,
    pub omega_c: f64,
    pub temperature: f64,
}

/// Dimensionless parameters of the damped oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DampedLcParams {
    pub theta: f64,
    pub kappa: f64,
    /// (κ ± √(κ² − 1))/2πθ; complex conjugates when κ < 1, absent at θ = 0.
    #[serde(serialize_with = "ser_complex_opt")]
    pub lambda_plus: Option<Complex64>,
    #[serde(serialize_with = "ser_complex_opt")]
    pub lambda_minus: Option<Complex64>,
    /// (ħω₀/2πk_BT)(ω_c/ω₀ − 2κ); absent at θ = 0.
    pub lambda_c: Option<f64>,
    /// Excess ⟨Q²⟩ − ⟨Φ²⟩/Z₀², coulombs².
    pub delta: f64,
}

fn ser_complex_opt<S: serde::Serializer>(v: &Option<Complex64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(z) => s.collect_seq([z.re, z.im]),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DampedLcVariances {
    /// Wb².
    pub phi2: f64,
    /// C².
    pub q2: f64,
    pub params: DampedLcParams,
}

const NEAR_DEGENERATE: f64 = 1e-3;
const CONTOUR_POINTS: usize = 64;

/// G(r) = Ψ(1 + r/ν₁), or ln r when ν₁ = 2πθ = 0.
fn g_fn(r: Complex64, nu1: f64) -> Result<Complex64> {
    if nu1 == 0.0 {
        Ok(r.ln())
    } else {
        digamma_complex(1.0 + r / nu1)
    }
}

/// f[p₁, p₂]. Close points go through the Cauchy integral on a circle
/// around their midpoint, which stays accurate through coincidence.
fn divided_difference2<F>(f: &F, p1: Complex64, p2: Complex64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let scale = p1.norm().max(p2.norm());
    if (p1 - p2).norm() >= NEAR_DEGENERATE * scale {
        return Ok((f(p1)? - f(p2)?) / (p1 - p2));
    }
    let center = 0.5 * (p1 + p2);
    let radius = 0.5 * center.norm();
    let mut sum = Complex64::from(0.0);
    for k in 0..CONTOUR_POINTS {
        let e = Complex64::from_polar(radius, 2.0 * PI * k as f64 / CONTOUR_POINTS as f64);
        let z = center + e;
        sum += f(z)? * e / ((z - p1) * (z - p2));
    }
    Ok(sum / CONTOUR_POINTS as f64)
}

/// f[p₁, p₂, p₃], pairing the two closest points first.
fn divided_difference3<F>(f: &F, p: [Complex64; 3]) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let pairs = [(0, 1, 2), (0, 2, 1), (1, 2, 0)];
    let &(a, b, c) =
        pairs.iter().min_by(|x, y| (p[x.0] - p[x.1]).norm().total_cmp(&(p[y.0] - p[y.1]).norm())).expect("three pairs");
    let ab = divided_difference2(f, p[a], p[b])?;
    let bc = divided_difference2(f, p[b], p[c])?;
    Ok((ab - bc) / (p[a] - p[c]))
}

/// Minus the roots of ν³ + wν² + (1 + 2κw)ν + w.
fn pole_rates(kappa: f64, w: f64) -> [Complex64; 3] {
    let b = 1.0 + 2.0 * kappa * w;
    let p = |v: Complex64| ((v + w) * v + b) * v + w;
    let dp = |v: Complex64| (3.0 * v + 2.0 * w) * v + b;
    // P(−w) = −2κw² < 0 < P(0) = w brackets a real root.
    let (mut lo, mut hi) = (-w, 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if p(Complex64::from(mid)).re < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let real = 0.5 * (lo + hi);
    // Deflate to ν² + b₁ν + b₀.
    let b1 = w + real;
    let b0 = b + real * b1;
    let disc = Complex64::from(b1 * b1 - 4.0 * b0).sqrt();
    let q = -0.5 * (b1 + if b1 >= 0.0 { disc } else { -disc });
    let mut roots = [Complex64::from(real), q, if q.norm() > 0.0 { b0 / q } else { Complex64::from(0.0) }];
    for v in roots.iter_mut() {
        for _ in 0..4 {
            let d = dp(*v);
            if d.norm() == 0.0 {
                break;
            }
            *v -= p(*v) / d;
        }
    }
    roots.map(|v| -v)
}

fn real_part(z: Complex64, what: &str) -> Result<f64> {
    if z.im.abs() > 1e-10 * z.re.abs() + 1e-300 {
        return Err(Error::Internal(format!("{what} has an imaginary part {:.3e} next to {:.3e}", z.im, z.re)));
    }
    Ok(z.re)
}

/// ln(κ + √(κ² − 1))/√(κ² − 1), continued as arccos κ/√(1 − κ²) below κ = 1.
fn log_factor(kappa: f64) -> f64 {
    let d = kappa - 1.0;
    if d.abs() < 1e-6 {
        1.0 - d / 3.0
    } else if kappa > 1.0 {
        let s = (kappa * kappa - 1.0).sqrt();
        (kappa + s).ln() / s
    } else {
        kappa.acos() / (1.0 - kappa * kappa).sqrt()
    }
}

/// Dimensionless (⟨Φ²⟩, Δ) from the three-pole form.
fn exact_dimensionless(kappa: f64, theta: f64, w: f64) -> Result<(f64, f64)> {
    let nu1 = 2.0 * PI * theta;
    let roots = pole_rates(kappa, w);
    let h = |r: Complex64| Ok((w - r) * g_fn(r, nu1)?);
    let rg = |r: Complex64| Ok(r * g_fn(r, nu1)?);
    let phi = theta - real_part(divided_difference3(&h, roots)?, "⟨Φ²⟩")? / PI;
    let delta = 2.0 * kappa * w / PI * real_part(divided_difference3(&rg, roots)?, "Δ")?;
    Ok((phi, delta))
}

/// Dimensionless (⟨Φ²⟩, Δ) in the large-cutoff limit.
fn large_cutoff_dimensionless(kappa: f64, theta: f64, w: f64) -> Result<(f64, f64)> {
    let nu1 = 2.0 * PI * theta;
    let s = Complex64::from(kappa * kappa - 1.0).sqrt();
    let (rp, rm) = (kappa + s, kappa - s);
    let g = |r: Complex64| g_fn(r, nu1);
    let rg = |r: Complex64| Ok(r * g_fn(r, nu1)?);
    let phi = theta + real_part(divided_difference2(&g, rp, rm)?, "⟨Φ²⟩")? / PI;
    let rc = w - 2.0 * kappa;
    if !(rc > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "the large-cutoff form needs ω_c/ω₀ > 2κ (got {w} ≤ {})",
            2.0 * kappa
        )));
    }
    let bracket = 2.0 * g(Complex64::from(rc))? - 2.0 * divided_difference2(&rg, rp, rm)?;
    let delta = kappa / PI * real_part(bracket, "Δ")?;
    Ok((phi, delta))
}

/// Re z(x) for the normalized damped oscillator, computed as Re D/|D|².
fn re_z(kappa: f64, w: f64, x: f64) -> f64 {
    let y = 2.0 * kappa / (1.0 - Complex64::i() * (x / w));
    let d = 1.0 / (J * x) + J * x + y;
    d.re / d.norm_sqr()
}

/// Dimensionless (⟨Φ²⟩, ⟨Q²⟩) by direct quadrature of the fluctuation-dissipation integrals.
fn quadrature_dimensionless(kappa: f64, theta: f64, w: f64) -> Result<(f64, f64)> {
    let coth = |x: f64| if theta == 0.0 { 1.0 } else { 1.0 / (x / (2.0 * theta)).tanh() };
    let flux = |x: f64| {
        if x == 0.0 {
            // Re z ≈ 2κx² and coth ≈ 2θ/x near zero.
            4.0 * kappa * theta
        } else {
            coth(x) * re_z(kappa, w, x) / x
        }
    };
    let charge = |x: f64| if x == 0.0 { 0.0 } else { x * coth(x) * re_z(kappa, w, x) };
    let omega_max = 50.0f64.max(20.0 * w).max(50.0 * theta);
    let mut breaks: Vec<f64> = (-8..=8).map(|k| 10f64.powi(k)).collect();
    breaks.extend([1.0, w]);
    let opts = QuadOptions { rel_tol: 1e-9, abs_tol: 0.0, max_intervals: 20_000 };
    let head_phi = integrate(flux, 0.0, omega_max, &breaks, opts)?.value;
    let tail_phi = integrate_to_infinity(flux, omega_max, opts)?.value;
    let head_q = integrate(charge, 0.0, omega_max, &breaks, opts)?.value;
    let tail_q = integrate_to_infinity(charge, omega_max, opts)?.value;
    Ok(((head_phi + tail_phi) / PI, (head_q + tail_q) / PI))
}

impl DampedLc {
    pub fn new(l: f64, c: f64, r: f64, omega_c: f64, temperature: f64) -> Result<Self> {
        for (name, v) in [("L", l), ("C", c), ("R", r), ("omega_c", omega_c)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::InvalidArgument(format!("temperature must be non-negative, got {temperature}")));
        }
        Ok(DampedLc { l, c, r, omega_c, temperature })
    }

    /// Builds the circuit from ω₀, Z₀ and the dimensionless κ, θ, ω_c/ω₀.
    pub fn from_dimensionless(omega0: f64, z0: f64, kappa: f64, theta: f64, cutoff_ratio: f64) -> Result<Self> {
        if !(kappa > 0.0) {
            return Err(Error::InvalidArgument("κ must be positive".into()));
        }
        Self::new(
            z0 / omega0,
            1.0 / (z0 * omega0),
            z0 / (2.0 * kappa),
            cutoff_ratio * omega0,
            theta * HBAR * omega0 / K_B,
        )
    }

    pub fn omega0(&self) -> f64 {
        1.0 / (self.l * self.c).sqrt()
    }

    pub fn z0(&self) -> f64 {
        (self.l / self.c).sqrt()
    }

    pub fn kappa(&self) -> f64 {
        1.0 / (2.0 * self.r * self.c * self.omega0())
    }

    pub fn theta(&self) -> f64 {
        K_B * self.temperature / (HBAR * self.omega0())
    }

    pub fn cutoff_ratio(&self) -> f64 {
        self.omega_c / self.omega0()
    }

    fn params(&self, delta: f64) -> DampedLcParams {
        let (kappa, theta, w) = (self.kappa(), self.theta(), self.cutoff_ratio());
        let s = Complex64::from(kappa * kappa - 1.0).sqrt();
        let nu1 = 2.0 * PI * theta;
        DampedLcParams {
            theta,
            kappa,
            lambda_plus: (theta > 0.0).then(|| (kappa + s) / nu1),
            lambda_minus: (theta > 0.0).then(|| (kappa - s) / nu1),
            lambda_c: (theta > 0.0).then(|| (w - 2.0 * kappa) / nu1),
            delta: delta * HBAR / self.z0(),
        }
    }

    fn variances_si(&self, phi: f64, delta: f64) -> DampedLcVariances {
        let z0 = self.z0();
        DampedLcVariances { phi2: phi * HBAR * z0, q2: (phi + delta) * HBAR / z0, params: self.params(delta) }
    }

    /// Closed form exact at finite cutoff.
    pub fn closed_form(&self) -> Result<DampedLcVariances> {
        let (phi, delta) = exact_dimensionless(self.kappa(), self.theta(), self.cutoff_ratio())?;
        Ok(self.variances_si(phi, delta))
    }

    /// Closed form in the limit ω_c ≫ ω₀, κω₀, k_BT/ħ, keeping only the
    /// logarithmic cutoff dependence of ⟨Q²⟩ through Ψ(1 + λ_c).
    pub fn closed_form_large_cutoff(&self) -> Result<DampedLcVariances> {
        let (phi, delta) = large_cutoff_dimensionless(self.kappa(), self.theta(), self.cutoff_ratio())?;
        Ok(self.variances_si(phi, delta))
    }

    /// (⟨Φ²⟩, ⟨Q²⟩) by adaptive quadrature of (ħ/π)∫₀^∞ coth(βħω/2) Re Z(ω) ω^{∓1} dω.
    pub fn quadrature(&self) -> Result<(f64, f64)> {
        let (phi, q) = quadrature_dimensionless(self.kappa(), self.theta(), self.cutoff_ratio())?;
        let z0 = self.z0();
        Ok((phi * HBAR * z0, q * HBAR / z0))
    }

    /// θ → 0, ω_c → ∞: (ħZ₀/2)·2F(κ)/π with F the logarithmic factor.
    pub fn low_temperature_phi2(&self) -> f64 {
        HBAR * self.z0() / 2.0 * 2.0 * log_factor(self.kappa()) / PI
    }

    /// θ → 0: (ħ/2Z₀)[(4κ/π) ln(ω_c/ω₀) + (1 − 2κ²)·2F(κ)/π].
    pub fn low_temperature_q2(&self) -> f64 {
        let k = self.kappa();
        HBAR / (2.0 * self.z0())
            * (4.0 * k / PI * self.cutoff_ratio().ln() + (1.0 - 2.0 * k * k) * 2.0 * log_factor(k) / PI)
    }

    /// κ ≫ 1, θ → 0: (ħZ₀/2)(2 ln 2κ)/(πκ).
    pub fn strong_damping_phi2(&self) -> f64 {
        let k = self.kappa();
        HBAR * self.z0() / 2.0 * 2.0 * (2.0 * k).ln() / (PI * k)
    }

    /// κ ≫ 1, θ → 0: (ħ/2Z₀)(4κ/π) ln(ω_c/2κω₀).
    pub fn strong_damping_q2(&self) -> f64 {
        let k = self.kappa();
        HBAR / (2.0 * self.z0()) * 4.0 * k / PI * (self.cutoff_ratio() / (2.0 * k)).ln()
    }

    /// √(⟨Φ²⟩⟨Q²⟩) ≈ (ħ/π)[2 ln 2κ · ln(ω_c/2κω₀)]^½ for κ ≫ 1, θ → 0.
    pub fn uncertainty_ellipse(&self) -> f64 {
        let k = self.kappa();
        HBAR / PI * (2.0 * (2.0 * k).ln() * (self.cutoff_ratio() / (2.0 * k)).ln()).sqrt()
    }
}

/// Exact closed-form (⟨Φ²⟩, ⟨Q²⟩, parameters).
pub fn damped_lc_variance_closed(l: f64, c: f64, r: f64, omega_c: f64, temperature: f64) -> Result<DampedLcVariances> {
    DampedLc::new(l, c, r, omega_c, temperature)?.closed_form()
}

/// (⟨Φ²⟩, ⟨Q²⟩) by quadrature.
pub fn damped_lc_variance_quadrature(l: f64, c: f64, r: f64, omega_c: f64, temperature: f64) -> Result<(f64, f64)> {
    DampedLc::new(l, c, r, omega_c, temperature)?.quadrature()
}
