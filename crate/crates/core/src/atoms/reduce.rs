use num_complex::Complex64;
use serde::Serialize;

use crate::constants::REDUCED_FLUX_QUANTUM;
use crate::error::{Error, Result};

/// A symmetric-or-not DC SQUID seen as one junction: the pair
/// −E₁cos(φ + x) − E₂cos(φ − x), x = Φ_ext/2φ₀, equals −ej_eff·cos(φ − phase_offset).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SquidReduction {
    pub ej_eff: f64,
    /// Radians.
    pub phase_offset: f64,
    /// (E₂ − E₁)/(E₁ + E₂).
    pub d: f64,
}

pub fn squid_reduce(ej1: f64, ej2: f64, flux_ext: f64) -> Result<SquidReduction> {
    if !(ej1 >= 0.0 && ej2 >= 0.0) || ej1 + ej2 <= 0.0 || !flux_ext.is_finite() {
        return Err(Error::InvalidArgument("junction energies must be non-negative and not both zero".into()));
    }
    let sum = ej1 + ej2;
    let d = (ej2 - ej1) / sum;
    let x = flux_ext / (2.0 * REDUCED_FLUX_QUANTUM);
    let (s, c) = x.sin_cos();
    // √(cos²x + d²sin²x) is the tan-free form of |cos x|·√(1 + d²tan²x);
    // atan2 picks the branch that keeps the reduced cosine exact for cos x < 0.
    Ok(SquidReduction { ej_eff: sum * c.hypot(d * s), phase_offset: (d * s).atan2(c), d })
}

/// Parallel junctions Σ E_k cos(φ + θ_k) = E·cos(φ + θ); returns (E, θ).
pub fn combine_junctions(terms: &[(f64, f64)]) -> (f64, f64) {
    let z: Complex64 = terms.iter().map(|&(e, th)| Complex64::from_polar(e, th)).sum();
    if z.norm() == 0.0 {
        (0.0, 0.0)
    } else {
        (z.norm(), z.arg())
    }
}

/// Chain of M identical junctions sharing the phase φ equally.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArrayReduction {
    pub ej: f64,
    pub m: usize,
    /// M φ₀²/E_J, henries.
    pub l_eff: f64,
    /// exp(−√(8E_J/E_C)) when E_C is known; the linear-inductance picture
    /// needs this to be small.
    pub phase_slip_factor: Option<f64>,
}

impl ArrayReduction {
    /// −M E_J cos(φ/M), φ in radians.
    pub fn potential(&self, phi: f64) -> f64 {
        let m = self.m as f64;
        -m * self.ej * (phi / m).cos()
    }

    /// Bound on the quartic remainder of the quadratic expansion.
    pub fn quartic_bound(&self, phi: f64) -> f64 {
        self.ej * phi.powi(4) / (24.0 * (self.m as f64).powi(3))
    }
}

pub fn array_reduce(ej: f64, m: usize, ec: Option<f64>) -> Result<ArrayReduction> {
    if m < 1 || !(ej > 0.0) {
        return Err(Error::InvalidArgument("array needs M ≥ 1 and E_J > 0".into()));
    }
    if let Some(ec) = ec {
        if !(ec > 0.0) {
            return Err(Error::InvalidArgument("E_C must be positive".into()));
        }
    }
    Ok(ArrayReduction {
        ej,
        m,
        l_eff: m as f64 * REDUCED_FLUX_QUANTUM.powi(2) / ej,
        phase_slip_factor: ec.map(|ec| (-(8.0 * ej / ec).sqrt()).exp()),
    })
}

/// Taylor coefficients of a loop of one small junction (α E_J) and n large
/// ones (E_J), U/E_J = −α cos φ − n cos((φ_ext − φ)/n), about its minimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingPoint {
    pub alpha: f64,
    pub phi_ext: f64,
    pub phi_min: f64,
    /// U⁽ᵏ⁾(φ_min)/(k! E_J) for k = 2, 3, 4.
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

fn snail_derivs(alpha: f64, n: f64, phi_ext: f64, phi: f64) -> [f64; 5] {
    let u = (phi_ext - phi) / n;
    [
        -alpha * phi.cos() - n * u.cos(),
        alpha * phi.sin() - u.sin(),
        alpha * phi.cos() + u.cos() / n,
        -alpha * phi.sin() + u.sin() / (n * n),
        -alpha * phi.cos() - u.cos() / (n * n * n),
    ]
}

/// Expansion about the global minimum, located on a grid over one full
/// period of the loop and polished by Newton steps.
pub fn snail_taylor(alpha: f64, n: usize, phi_ext: f64) -> Result<MixingPoint> {
    if n < 1 || !(alpha > 0.0) {
        return Err(Error::InvalidArgument("need n ≥ 1 and α > 0".into()));
    }
    let nf = n as f64;
    let span = 2.0 * std::f64::consts::PI * nf;
    let grid = 4000 * n.min(10);
    let mut best = (f64::INFINITY, 0.0);
    for i in 0..grid {
        let phi = phi_ext - 0.5 * span + span * i as f64 / grid as f64;
        let u = snail_derivs(alpha, nf, phi_ext, phi)[0];
        if u < best.0 {
            best = (u, phi);
        }
    }
    let mut phi = best.1;
    for _ in 0..50 {
        let d = snail_derivs(alpha, nf, phi_ext, phi);
        if d[2] <= 0.0 {
            break;
        }
        let step = d[1] / d[2];
        phi -= step;
        if step.abs() < 1e-15 * phi.abs().max(1.0) {
            break;
        }
    }
    let d = snail_derivs(alpha, nf, phi_ext, phi);
    Ok(MixingPoint { alpha, phi_ext, phi_min: phi, c2: d[2] / 2.0, c3: d[3] / 6.0, c4: d[4] / 24.0 })
}

/// Exploratory: external fluxes where the quartic coefficient vanishes while
/// the cubic one does not, found by sign changes of c4 on the flux grid and
/// refined by bisection.
pub fn three_wave_search(n: usize, alphas: &[f64], fluxes: &[f64]) -> Result<Vec<MixingPoint>> {
    let mut out = Vec::new();
    for &alpha in alphas {
        let pts: Vec<MixingPoint> = fluxes.iter().map(|&f| snail_taylor(alpha, n, f)).collect::<Result<_>>()?;
        for w in pts.windows(2) {
            if w[0].c4.signum() == w[1].c4.signum() || w[0].c2 <= 0.0 || w[1].c2 <= 0.0 {
                continue;
            }
            let (mut lo, mut hi) = (w[0].phi_ext, w[1].phi_ext);
            let lo_sign = w[0].c4.signum();
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if snail_taylor(alpha, n, mid)?.c4.signum() == lo_sign {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let p = snail_taylor(alpha, n, 0.5 * (lo + hi))?;
            // A jump of the global minimum also flips c4; keep genuine zeros.
            if p.c4.abs() < 1e-6 && p.c3.abs() > 1e-6 {
                out.push(p);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::FLUX_QUANTUM;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// Amplitude of the first Fourier harmonic of the two-cosine sum.
    fn dft_amplitude(e1: f64, e2: f64, x: f64) -> f64 {
        let n = 64;
        let (mut re, mut im) = (0.0, 0.0);
        for k in 0..n {
            let p = 2.0 * PI * k as f64 / n as f64;
            let h = e1 * (p + x).cos() + e2 * (p - x).cos();
            re += h * p.cos();
            im += h * p.sin();
        }
        2.0 * re.hypot(im) / n as f64
    }

    #[test]
    fn symmetric_cases() {
        let e = 1e-23;
        let r = squid_reduce(e, e, 0.0).unwrap();
        assert!((r.ej_eff - 2.0 * e).abs() < 1e-37 && r.phase_offset == 0.0);
        let r = squid_reduce(e, e, FLUX_QUANTUM / 2.0).unwrap();
        assert!(r.ej_eff < 1e-15 * e);
    }

    #[test]
    fn asymmetric_quarter_flux_matches_grid_maximum() {
        let e = 1.0;
        let x = PI / 4.0;
        let r = squid_reduce(e, 2.0 * e, FLUX_QUANTUM / 4.0).unwrap();
        let max = (0..200_000)
            .map(|k| {
                let p = 2.0 * PI * k as f64 / 200_000.0;
                e * (p + x).cos() + 2.0 * e * (p - x).cos()
            })
            .fold(f64::MIN, f64::max);
        assert!((r.ej_eff - max).abs() < 1e-8);
    }

    #[test]
    fn pole_of_tangent_is_the_limit() {
        let r = squid_reduce(1.0, 3.0, FLUX_QUANTUM / 2.0).unwrap();
        assert!((r.ej_eff - 4.0 * 0.5).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn single_cosine_is_exact(e1 in 0.0f64..2.0, e2 in 0.01f64..2.0, f in -2.0f64..2.0, phi in -PI..PI) {
            let r = squid_reduce(e1, e2, f * FLUX_QUANTUM).unwrap();
            let x = f * PI;
            let two = e1 * (phi + x).cos() + e2 * (phi - x).cos();
            prop_assert!((two - r.ej_eff * (phi - r.phase_offset).cos()).abs() < 1e-12 * (e1 + e2));
            prop_assert!((r.ej_eff - dft_amplitude(e1, e2, x)).abs() < 1e-10 * (e1 + e2));
        }
    }

    #[test]
    fn combine_matches_squid() {
        let r = squid_reduce(1.0, 2.5, 0.37 * FLUX_QUANTUM).unwrap();
        let x = 0.37 * PI;
        let (e, th) = combine_junctions(&[(1.0, x), (2.5, -x)]);
        assert!((e - r.ej_eff).abs() < 1e-14);
        assert!((th + r.phase_offset).abs() < 1e-14);
    }

    #[test]
    fn array_quadratic_expansion() {
        let a = array_reduce(1.0, 100, Some(0.01)).unwrap();
        let phi = 0.1;
        let quad = -100.0 + phi * phi / 200.0;
        assert!((a.potential(phi) - quad).abs() <= a.quartic_bound(phi));
        assert_eq!(array_reduce(1.0, 1, None).unwrap().potential(0.3), -(0.3f64).cos());
        let l1 = array_reduce(2e-23, 1, None).unwrap().l_eff;
        let l10 = array_reduce(2e-23, 10, None).unwrap().l_eff;
        assert!((l10 / l1 - 10.0).abs() < 1e-14);
        assert!((a.phase_slip_factor.unwrap() - (-(800.0f64).sqrt()).exp()).abs() < 1e-25);
    }

    #[test]
    fn snail_has_kerr_free_point() {
        let fluxes: Vec<f64> = (0..=60).map(|k| 2.0 * PI * k as f64 / 60.0).collect();
        let pts = three_wave_search(3, &[0.29], &fluxes).unwrap();
        assert!(!pts.is_empty());
        for p in pts {
            assert!(p.c2 > 0.0 && p.c3.abs() > 1e-3);
        }
    }

    #[test]
    fn snail_taylor_matches_finite_differences() {
        let p = snail_taylor(0.2, 3, 1.1).unwrap();
        let u = |phi: f64| -0.2 * phi.cos() - 3.0 * ((1.1 - phi) / 3.0).cos();
        let h = 1e-3;
        let x = p.phi_min;
        let d2 = (u(x + h) - 2.0 * u(x) + u(x - h)) / (h * h);
        assert!((d2 / 2.0 - p.c2).abs() < 1e-6);
        assert!(((u(x + h) - u(x - h)) / (2.0 * h)).abs() < 1e-5);
        let d3 = (u(x + 2.0 * h) - 2.0 * u(x + h) + 2.0 * u(x - h) - u(x - 2.0 * h)) / (2.0 * h.powi(3));
        assert!((d3 / 6.0 - p.c3).abs() < 1e-4);
    }
}
