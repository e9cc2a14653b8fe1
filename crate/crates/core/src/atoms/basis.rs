use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use super::AtomSpec;
use crate::constants::{E_CHARGE, REDUCED_FLUX_QUANTUM};
use crate::error::{Error, Result};

/// Relative tolerance of the truncation convergence check.
pub const CONVERGENCE_TOL: f64 = 1e-9;
const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Basis {
    /// Cooper-pair number states n ∈ [−n_cut, n_cut].
    Charge { n_cut: usize },
    /// Oscillator number states 0..n_max of the LC part, characteristic
    /// impedance `z_char` in ohms.
    Fock { n_max: usize, z_char: f64 },
}

impl Basis {
    pub fn dim(&self) -> usize {
        match *self {
            Basis::Charge { n_cut } => 2 * n_cut + 1,
            Basis::Fock { n_max, .. } => n_max,
        }
    }
}

/// Dense Hermitian matrix in joules together with the basis it acts on.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    basis: Basis,
    data: DMatrix<Complex64>,
}

impl OperatorMatrix {
    /// Checks the dimension against the basis and hermiticity to 10⁻¹²
    /// relative to the largest entry.
    pub fn new(basis: Basis, data: DMatrix<Complex64>) -> Result<Self> {
        let n = basis.dim();
        if data.nrows() != n || data.ncols() != n {
            return Err(Error::InvalidArgument(format!(
                "matrix is {}x{}, basis needs {n}x{n}",
                data.nrows(),
                data.ncols()
            )));
        }
        let scale = data.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let skew = (&data - data.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if skew > HERMITIAN_TOL * scale {
            return Err(Error::Internal(format!("operator is not Hermitian (deviation {skew:e})")));
        }
        Ok(OperatorMatrix { basis, data })
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn data(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }
}

/// Truncation sizes for the two bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncation {
    pub n_cut: usize,
    pub n_max: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { n_cut: 30, n_max: 60 }
    }
}

impl Truncation {
    /// The enlarged truncation used to confirm convergence.
    pub fn refined(&self) -> Self {
        Truncation { n_cut: 2 * self.n_cut, n_max: self.n_max + 10 }
    }
}

/// 4E_C(n−n_g)² on the diagonal, −E_J/2 on the first off-diagonals.
pub fn charge_basis_hamiltonian(spec: &AtomSpec, n_cut: usize) -> Result<OperatorMatrix> {
    spec.check()?;
    if spec.el != 0.0 {
        return Err(Error::InvalidArgument("E_L > 0 needs the Fock basis".into()));
    }
    if n_cut < 1 {
        return Err(Error::InvalidArgument("n_cut must be at least 1".into()));
    }
    let dim = 2 * n_cut + 1;
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..dim {
        let n = i as f64 - n_cut as f64;
        h[(i, i)] = Complex64::from(4.0 * spec.ec * (n - spec.n_g).powi(2));
        if i + 1 < dim {
            h[(i, i + 1)] = Complex64::from(-0.5 * spec.ej);
            h[(i + 1, i)] = Complex64::from(-0.5 * spec.ej);
        }
    }
    OperatorMatrix::new(Basis::Charge { n_cut }, h)
}

/// ħω_LC(c†c + ½) − E_J cos(ϕ̂ − ϕ_ext), with ϕ̂ = ϕ_zpf(c + c†) and the
/// cosine evaluated through the eigendecomposition of the truncated ϕ̂.
/// The offset charge is a gauge choice once E_L > 0 and does not enter.
pub fn fock_basis_hamiltonian(spec: &AtomSpec, n_max: usize) -> Result<OperatorMatrix> {
    spec.check()?;
    if spec.el <= 0.0 {
        return Err(Error::InvalidArgument("the Fock basis needs E_L > 0".into()));
    }
    if n_max < 4 {
        return Err(Error::InvalidArgument("n_max must be at least 4".into()));
    }
    let hw = (8.0 * spec.ec * spec.el).sqrt();
    let zpf = (2.0 * spec.ec / spec.el).powf(0.25);
    let mut phi = DMatrix::<f64>::zeros(n_max, n_max);
    for k in 1..n_max {
        let v = zpf * (k as f64).sqrt();
        phi[(k - 1, k)] = v;
        phi[(k, k - 1)] = v;
    }
    let eig = SymmetricEigen::new(phi);
    let cos_diag = eig.eigenvalues.map(|x| (x - spec.phi_ext).cos());
    let u = &eig.eigenvectors;
    let cos_op = u * DMatrix::from_diagonal(&cos_diag) * u.transpose();
    let mut h = cos_op * (-spec.ej);
    for k in 0..n_max {
        h[(k, k)] += hw * (k as f64 + 0.5);
    }
    let h = (&h + h.transpose()) * 0.5;
    // L = φ₀²/E_L, C = e²/2E_C, Z = √(L/C).
    let z_char = (REDUCED_FLUX_QUANTUM.powi(2) / spec.el * 2.0 * spec.ec / (E_CHARGE * E_CHARGE)).sqrt();
    OperatorMatrix::new(Basis::Fock { n_max, z_char }, h.map(Complex64::from))
}

/// Picks the basis from E_L.
pub fn hamiltonian(spec: &AtomSpec, trunc: Truncation) -> Result<OperatorMatrix> {
    if spec.el > 0.0 {
        fock_basis_hamiltonian(spec, trunc.n_max)
    } else {
        charge_basis_hamiltonian(spec, trunc.n_cut)
    }
}

/// The k lowest eigenvalues, ascending, in joules.
pub fn spectrum(op: &OperatorMatrix, k: usize) -> Result<Vec<f64>> {
    if k > op.dim() {
        return Err(Error::InvalidArgument(format!("requested {k} levels from a {}-dimensional matrix", op.dim())));
    }
    let eig = SymmetricEigen::try_new(op.data.clone(), f64::EPSILON, 100_000)
        .ok_or_else(|| Error::NonConvergence("Hermitian eigensolver did not converge".into()))?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values.truncate(k);
    Ok(values)
}

/// Lowest k levels without the convergence check.
pub fn levels_unchecked(spec: &AtomSpec, k: usize, trunc: Truncation) -> Result<Vec<f64>> {
    spectrum(&hamiltonian(spec, trunc)?, k)
}

/// Lowest k levels, confirmed against the refined truncation: each level
/// must agree to 10⁻⁹ relative (floor E_C).
pub fn levels(spec: &AtomSpec, k: usize, trunc: Truncation) -> Result<Vec<f64>> {
    let coarse = levels_unchecked(spec, k, trunc)?;
    let fine = levels_unchecked(spec, k, trunc.refined())?;
    for (i, (a, b)) in coarse.iter().zip(&fine).enumerate() {
        let scale = a.abs().max(b.abs()).max(spec.ec);
        if (a - b).abs() > CONVERGENCE_TOL * scale {
            return Err(Error::NonConvergence(format!(
                "level {i} moved by {:.3e} relative when the truncation grew from {:?} to {:?}",
                (a - b).abs() / scale,
                trunc,
                trunc.refined()
            )));
        }
    }
    Ok(coarse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const EC: f64 = 1e-24;

    #[test]
    fn one_by_one() {
        let op = OperatorMatrix::new(
            Basis::Fock { n_max: 1, z_char: 50.0 },
            DMatrix::from_element(1, 1, Complex64::from(3.5)),
        )
        .unwrap();
        assert_eq!(spectrum(&op, 1).unwrap(), vec![3.5]);
        assert!(spectrum(&op, 2).is_err());
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = DMatrix::<Complex64>::zeros(3, 3);
        m[(0, 1)] = Complex64::new(0.0, 1.0);
        m[(1, 0)] = Complex64::new(0.0, 1.0);
        assert!(OperatorMatrix::new(Basis::Charge { n_cut: 1 }, m).is_err());
    }

    #[test]
    fn charging_parabola() {
        let s = AtomSpec::new(EC, 0.0, 0.0).unwrap();
        let e = levels(&s, 5, Truncation::default()).unwrap();
        let expect = [0.0, 4.0, 4.0, 16.0, 16.0];
        for (a, b) in e.iter().zip(expect) {
            assert!((a / EC - b).abs() < 1e-12);
        }
    }

    #[test]
    fn degeneracy_split_by_ej() {
        let ej = 1e-3 * EC;
        let s = AtomSpec::new(EC, ej, 0.0).unwrap().with_ng(0.5);
        let e = levels(&s, 2, Truncation::default()).unwrap();
        assert!(((e[1] - e[0]) / ej - 1.0).abs() < 1e-3);
    }

    #[test]
    fn harmonic_fock_spectrum() {
        let s = AtomSpec::new(EC, 0.0, 0.4 * EC).unwrap();
        let e = levels(&s, 6, Truncation::default()).unwrap();
        let hw = (8.0 * EC * 0.4 * EC).sqrt();
        for (n, v) in e.iter().enumerate() {
            assert!((v / (hw * (n as f64 + 0.5)) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn wrong_basis_is_refused() {
        let s = AtomSpec::new(EC, 1.0 * EC, 0.5 * EC).unwrap();
        assert!(charge_basis_hamiltonian(&s, 10).is_err());
        assert!(fock_basis_hamiltonian(&AtomSpec::new(EC, EC, 0.0).unwrap(), 10).is_err());
    }

    #[test]
    fn transmon_truncation_converged() {
        let s = AtomSpec::new(EC, 50.0 * EC, 0.0).unwrap().with_ng(0.3);
        let a = levels_unchecked(&s, 4, Truncation { n_cut: 30, n_max: 60 }).unwrap();
        let b = levels_unchecked(&s, 4, Truncation { n_cut: 60, n_max: 60 }).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-9 * x.abs());
        }
    }

    /// Asymptotic Mathieu expansion of the transmon levels, q = E_J/2E_C, s = 2n+1:
    /// E/E_C = −2q + 2s√q − (s²+1)/8 − (s³+3s)/(2⁷√q) − (5s⁴+34s²+9)/(2¹²q).
    fn mathieu_level(n: usize, ratio: f64) -> f64 {
        let q = ratio / 2.0;
        let s = 2.0 * n as f64 + 1.0;
        -2.0 * q + 2.0 * s * q.sqrt()
            - (s * s + 1.0) / 8.0
            - (s.powi(3) + 3.0 * s) / (128.0 * q.sqrt())
            - (5.0 * s.powi(4) + 34.0 * s * s + 9.0) / (4096.0 * q)
    }

    #[test]
    fn transmon_anharmonicity() {
        // The leading-order value −E_C is only good to ~15% at this ratio; the
        // higher-order asymptotic series is the sharper oracle.
        let s = AtomSpec::new(EC, 50.0 * EC, 0.0).unwrap();
        let e = levels(&s, 3, Truncation::default()).unwrap();
        let alpha = ((e[2] - e[1]) - (e[1] - e[0])) / EC;
        let oracle = mathieu_level(2, 50.0) - 2.0 * mathieu_level(1, 50.0) + mathieu_level(0, 50.0);
        assert!((alpha / oracle - 1.0).abs() < 0.02, "alpha/E_C = {alpha}, oracle {oracle}");
        assert!(alpha < -1.0 && alpha > -1.2);
        let omega = (e[1] - e[0]) / EC;
        assert!((omega / (mathieu_level(1, 50.0) - mathieu_level(0, 50.0)) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn fluxonium_heavy_junction_resembles_transmon() {
        // E_J ≫ E_L with the neighbouring fluxon wells (E_L(2π)²/2 above) still
        // above the plasma energy: the first transition is a plasmon of the
        // central well of curvature E_J + E_L.
        let (ej, el) = (20.0 * EC, 1.0 * EC);
        let s = AtomSpec::new(EC, ej, el).unwrap();
        // The central well is narrower than the LC zero-point width, so the
        // Fock basis needs more states than the default.
        let e = levels(&s, 2, Truncation { n_cut: 30, n_max: 140 }).unwrap();
        let oracle = (8.0 * EC * (ej + el)).sqrt() - EC * ej / (ej + el);
        assert!(((e[1] - e[0]) / oracle - 1.0).abs() < 0.02, "{}", (e[1] - e[0]) / oracle);
    }

    #[test]
    fn levels_converge_monotonically_in_truncation() {
        let s = AtomSpec::new(EC, 20.0 * EC, 0.0).unwrap().with_ng(0.2);
        let sizes = [8, 16, 32];
        let runs: Vec<Vec<f64>> =
            sizes.iter().map(|&n| levels_unchecked(&s, 3, Truncation { n_cut: n, n_max: 60 }).unwrap()).collect();
        let (coarse, mid, fine) = (&runs[0], &runs[1], &runs[2]);
        for k in 0..3 {
            let d1 = (coarse[k] - fine[k]).abs();
            let d2 = (mid[k] - fine[k]).abs();
            assert!(d2 <= d1 + 1e-12 * EC);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn integer_charge_translation(ratio in 0.1f64..30.0, ng in -1.0f64..1.0) {
            let s = AtomSpec::new(EC, ratio * EC, 0.0).unwrap();
            let a = levels_unchecked(&s.with_ng(ng), 4, Truncation::default()).unwrap();
            let b = levels_unchecked(&s.with_ng(ng + 1.0), 4, Truncation::default()).unwrap();
            let c = levels_unchecked(&s.with_ng(-ng), 4, Truncation::default()).unwrap();
            let d = levels_unchecked(&s.with_ng(1.0 - ng), 4, Truncation::default()).unwrap();
            for k in 0..4 {
                let scale = a[k].abs().max(EC);
                prop_assert!((a[k] - b[k]).abs() < 1e-10 * scale);
                prop_assert!((a[k] - c[k]).abs() < 1e-10 * scale);
                prop_assert!((a[k] - d[k]).abs() < 1e-10 * scale);
            }
        }

        #[test]
        fn flux_periodic_and_even(ej in 0.5f64..8.0, el in 0.2f64..2.0, x in -3.0f64..3.0) {
            let s = AtomSpec::new(EC, ej * EC, el * EC).unwrap();
            let t = Truncation { n_cut: 30, n_max: 80 };
            let a = levels_unchecked(&s.with_phi_ext(x), 3, t).unwrap();
            let c = levels_unchecked(&s.with_phi_ext(-x), 3, t).unwrap();
            for k in 0..3 {
                prop_assert!((a[k] - c[k]).abs() < 1e-9 * a[k].abs().max(EC));
            }
        }
    }

    #[test]
    fn flux_period_is_two_pi() {
        let s = AtomSpec::new(EC, 4.0 * EC, 1.0 * EC).unwrap();
        let t = Truncation::default();
        for x in [0.3, 1.7] {
            let a = levels_unchecked(&s.with_phi_ext(x), 3, t).unwrap();
            let b = levels_unchecked(&s.with_phi_ext(x + 2.0 * std::f64::consts::PI), 3, t).unwrap();
            for k in 0..3 {
                assert!((a[k] - b[k]).abs() < 1e-8 * a[k].abs().max(EC), "{a:?} {b:?}");
            }
        }
    }
}
