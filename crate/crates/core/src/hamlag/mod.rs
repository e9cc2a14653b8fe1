//! Capacitance and inverse-inductance matrices, node-variable Hamiltonians,
//! normal modes and a symplectic integrator for the classical dynamics.

mod dynamics;
mod model;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::constants::josephson_inductance;
use crate::error::{Error, Result};
use crate::netlist::{spanning_tree, BranchKind, CircuitGraph, SpanningTree};

pub use dynamics::{simulate_classical, Trajectory};
pub use model::{build_hamiltonian, HamiltonianModel, JosephsonTerm};

/// Eigenvalues of the mode problem below this fraction of the largest one
/// count as zero modes.
pub const ZERO_MODE_TOL: f64 = 1e-12;

/// Reduced (ground eliminated) circuit matrices.
#[derive(Debug, Clone)]
pub struct CircuitMatrices {
    /// Non-ground nodes; row/column order of the reduced matrices.
    pub node_order: Vec<String>,
    /// Farads, symmetric positive definite.
    pub cap: DMatrix<f64>,
    /// Inverse henries, symmetric positive semidefinite.
    pub inv_ind: DMatrix<f64>,
    /// Full P×P matrices, ground first, then `node_order`.
    pub full_cap: DMatrix<f64>,
    pub full_inv_ind: DMatrix<f64>,
    pub tree: SpanningTree,
}

/// Options for [`build_matrices_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct MatrixOptions {
    /// Fold Josephson branches into `inv_ind` as linear inductors L_J = φ₀²/E_J.
    pub linearize_josephson: bool,
}

/// Signed incidence of a branch on the reduced node order: +1 on `node_a`,
/// −1 on `node_b`, nothing on ground.
pub(crate) fn incidence(node_order: &[String], node_a: &str, node_b: &str) -> DVector<f64> {
    let mut v = DVector::zeros(node_order.len());
    if let Some(i) = node_order.iter().position(|n| n == node_a) {
        v[i] += 1.0;
    }
    if let Some(i) = node_order.iter().position(|n| n == node_b) {
        v[i] -= 1.0;
    }
    v
}

fn stamp(m: &mut DMatrix<f64>, i: usize, j: usize, g: f64) {
    m[(i, i)] += g;
    m[(j, j)] += g;
    m[(i, j)] -= g;
    m[(j, i)] -= g;
}

pub fn build_matrices(graph: &CircuitGraph) -> Result<CircuitMatrices> {
    build_matrices_with(graph, MatrixOptions::default())
}

/// Diagonal entries are +Σ of the incident element values, off-diagonal
/// entries −value, so both forms are positive (semi)definite.
pub fn build_matrices_with(graph: &CircuitGraph, opts: MatrixOptions) -> Result<CircuitMatrices> {
    let tree = spanning_tree(graph)?;
    let node_order = graph.node_order();
    let mut full_order = vec![graph.ground().to_string()];
    full_order.extend(node_order.iter().cloned());
    let p = full_order.len();
    let index = |n: &str| full_order.iter().position(|m| m == n).expect("node in graph");

    let mut full_cap = DMatrix::zeros(p, p);
    let mut full_inv_ind = DMatrix::zeros(p, p);
    for b in graph.branches() {
        let (i, j) = (index(&b.node_a), index(&b.node_b));
        match b.kind {
            BranchKind::Capacitor => stamp(&mut full_cap, i, j, b.value),
            BranchKind::Inductor => stamp(&mut full_inv_ind, i, j, 1.0 / b.value),
            BranchKind::Josephson if opts.linearize_josephson => {
                stamp(&mut full_inv_ind, i, j, 1.0 / josephson_inductance(b.value))
            }
            BranchKind::Josephson => {}
        }
    }
    let cap = full_cap.view((1, 1), (p - 1, p - 1)).into_owned();
    let inv_ind = full_inv_ind.view((1, 1), (p - 1, p - 1)).into_owned();
    if cap.clone().cholesky().is_none() {
        return Err(Error::Internal("reduced capacitance matrix is not positive definite".into()));
    }
    Ok(CircuitMatrices { node_order, cap, inv_ind, full_cap, full_inv_ind, tree })
}

/// Normal modes of the linearized circuit.
#[derive(Debug, Clone, Serialize)]
pub struct NormalModes {
    /// rad/s, ascending; zero modes included as 0.
    pub frequencies: Vec<f64>,
    /// Columns are the mode shapes in node-flux space, same order as `frequencies`.
    #[serde(skip)]
    pub mode_vectors: DMatrix<f64>,
    /// Number of non-zero modes M.
    pub count: usize,
}

pub fn normal_modes(mats: &CircuitMatrices) -> Result<NormalModes> {
    generalized_modes(&mats.cap, &mats.inv_ind)
}

/// Solves K v = ω² C v through the Cholesky factor of C so the eigenproblem
/// stays symmetric.
pub fn generalized_modes(cap: &DMatrix<f64>, stiffness: &DMatrix<f64>) -> Result<NormalModes> {
    let n = cap.nrows();
    if n == 0 {
        return Ok(NormalModes { frequencies: vec![], mode_vectors: DMatrix::zeros(0, 0), count: 0 });
    }
    let chol =
        cap.clone().cholesky().ok_or_else(|| Error::Internal("capacitance matrix is not positive definite".into()))?;
    let l = chol.l();
    let l_inv = l
        .clone()
        .solve_lower_triangular(&DMatrix::identity(n, n))
        .ok_or_else(|| Error::Internal("singular Cholesky factor".into()))?;
    let a = &l_inv * stiffness * l_inv.transpose();
    let a = (&a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(a, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::NonConvergence("mode eigensolver did not converge".into()))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let max = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let back = l_inv.transpose();
    let mut frequencies = Vec::with_capacity(n);
    let mut vectors = DMatrix::zeros(n, n);
    let mut count = 0;
    for (k, &i) in order.iter().enumerate() {
        let w2 = eig.eigenvalues[i];
        if max > 0.0 && w2 > ZERO_MODE_TOL * max {
            frequencies.push(w2.sqrt());
            count += 1;
        } else {
            frequencies.push(0.0);
        }
        vectors.set_column(k, &(&back * eig.eigenvectors.column(i)));
    }
    Ok(NormalModes { frequencies, mode_vectors: vectors, count })
}

impl NormalModes {
    /// Non-zero mode frequencies only.
    pub fn nonzero(&self) -> Vec<f64> {
        self.frequencies.iter().copied().filter(|w| *w > 0.0).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_netlist;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn single_lc() {
        let g = parse_netlist("C1 0 1 10p\nL1 0 1 1n").unwrap();
        let m = build_matrices(&g).unwrap();
        assert_eq!(m.cap, DMatrix::from_element(1, 1, 10e-12));
        assert!((m.inv_ind[(0, 0)] - 1e9).abs() < 1e-3);
        let modes = normal_modes(&m).unwrap();
        assert_eq!(modes.count, 1);
        let f = modes.frequencies[0] / (2.0 * PI);
        assert!((f / 1.591_549_430_9e9 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn figure_five_capacitance() {
        let (c1, c2, c3) = (1.0e-12, 2.0e-12, 3.5e-12);
        let text = format!("C1 0 a {c1:e}\nC2 0 b {c2:e}\nC3 a b {c3:e}\nL1 0 a 1n\nL2 0 b 2n\nL3 a b 3n");
        let m = build_matrices(&parse_netlist(&text).unwrap()).unwrap();
        assert_eq!(m.node_order, vec!["a", "b"]);
        let expect = DMatrix::from_row_slice(2, 2, &[c1 + c3, -c3, -c3, c2 + c3]);
        assert!((&m.cap - expect).norm() < 1e-27);
        assert!((m.cap.determinant() - (c1 * c2 + c1 * c3 + c2 * c3)).abs() < 1e-36);
    }

    #[test]
    fn two_uncoupled_oscillators_are_block_diagonal() {
        let m = build_matrices(&parse_netlist("C1 0 a 1p\nL1 0 a 1n\nC2 0 b 2p\nL2 0 b 2n").unwrap()).unwrap();
        assert_eq!(m.cap[(0, 1)], 0.0);
        assert_eq!(m.inv_ind[(0, 1)], 0.0);
    }

    #[test]
    fn full_matrices_have_zero_row_sums() {
        let m =
            build_matrices(&parse_netlist("C1 0 a 1p\nC2 0 b 1p\nC3 a b 1p\nL1 0 a 1n\nL3 a b 1n").unwrap()).unwrap();
        let ones = DVector::from_element(3, 1.0);
        assert!((&m.full_cap * &ones).amax() < 1e-27);
        assert!((&m.full_inv_ind * &ones).amax() < 1e-6);
    }

    #[test]
    fn free_node_gives_zero_mode() {
        let m = build_matrices(&parse_netlist("C1 0 a 1p\nL1 0 a 1n\nC2 a b 1p").unwrap()).unwrap();
        let modes = normal_modes(&m).unwrap();
        assert_eq!(modes.frequencies.len(), 2);
        assert_eq!(modes.frequencies[0], 0.0);
        assert_eq!(modes.count, 1);
    }

    #[test]
    fn figure_five_modes_match_symbolic_two_by_two() {
        // All C = 1 pF, all L = 1 nH. With C = [[2c,-c],[-c,2c]], K = [[2/l,-1/l],[-1/l,2/l]],
        // C⁻¹K = (1/lc)·I on both the symmetric and antisymmetric vectors, so the
        // two modes are degenerate at ω = 1/√(lc).
        let text = "C1 0 a 1p\nC2 0 b 1p\nC3 a b 1p\nL1 0 a 1n\nL2 0 b 1n\nL3 a b 1n";
        let modes = normal_modes(&build_matrices(&parse_netlist(text).unwrap()).unwrap()).unwrap();
        let w = 1.0 / (1e-9f64 * 1e-12).sqrt();
        assert_eq!(modes.count, 2);
        for f in &modes.frequencies {
            assert!((f / w - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn figure_five_modes_general_values() {
        // Independent route: characteristic polynomial det(K − ω²C) = 0 solved
        // as a quadratic in ω².
        let (c1, c2, c3, l1, l2, l3): (f64, f64, f64, f64, f64, f64) = (1e-12, 2e-12, 0.5e-12, 1e-9, 3e-9, 2e-9);
        let text = format!("C1 0 a {c1:e}\nC2 0 b {c2:e}\nC3 a b {c3:e}\nL1 0 a {l1:e}\nL2 0 b {l2:e}\nL3 a b {l3:e}");
        let modes = normal_modes(&build_matrices(&parse_netlist(&text).unwrap()).unwrap()).unwrap();
        let (ca, cb, cab) = (c1 + c3, c2 + c3, c3);
        let (ka, kb, kab) = (1.0 / l1 + 1.0 / l3, 1.0 / l2 + 1.0 / l3, 1.0 / l3);
        let a = ca * cb - cab * cab;
        let b = -(ka * cb + kb * ca - 2.0 * kab * cab);
        let c = ka * kb - kab * kab;
        let disc = (b * b - 4.0 * a * c).sqrt();
        let lo = ((-b - disc) / (2.0 * a)).sqrt();
        let hi = ((-b + disc) / (2.0 * a)).sqrt();
        assert!((modes.frequencies[0] / lo - 1.0).abs() < 1e-12);
        assert!((modes.frequencies[1] / hi - 1.0).abs() < 1e-12);
    }

    fn random_circuit(n: usize, seeds: &[f64]) -> String {
        // node i>0 attaches by a capacitor to a parent in 0..i; extra capacitors
        // and inductors follow the seed stream.
        let mut s = seeds.iter().cycle();
        let mut next = || *s.next().unwrap();
        let mut lines = Vec::new();
        for i in 1..=n {
            let parent = ((next() * i as f64) as usize).min(i - 1);
            lines.push(format!("C{i} {parent} {i} {:e}", 1e-12 * (0.5 + 2.0 * next())));
            lines.push(format!(
                "L{i} {} {i} {:e}",
                ((next() * i as f64) as usize).min(i - 1),
                1e-9 * (0.5 + 2.0 * next())
            ));
        }
        for k in 0..n {
            let a = (next() * (n + 1) as f64) as usize % (n + 1);
            let b = (next() * (n + 1) as f64) as usize % (n + 1);
            if a != b {
                lines.push(format!("Cx{k} {a} {b} {:e}", 1e-12 * (0.1 + next())));
            }
        }
        lines.join("\n")
    }

    proptest! {
        #[test]
        fn tree_size_and_positive_definite_cap(n in 1usize..7, seeds in proptest::collection::vec(0.0f64..1.0, 8..40)) {
            let g = parse_netlist(&random_circuit(n, &seeds)).unwrap();
            let m = build_matrices(&g).unwrap();
            prop_assert_eq!(m.tree.tree_branches.len(), g.nodes().len() - 1);
            prop_assert!(m.cap.clone().cholesky().is_some());
            let t2 = spanning_tree(&g).unwrap();
            prop_assert_eq!(&t2, &m.tree);
        }

        #[test]
        fn render_then_parse_round_trips(n in 1usize..6, seeds in proptest::collection::vec(0.0f64..1.0, 8..40), off in -1e-15f64..1e-15) {
            let mut g = parse_netlist(&random_circuit(n, &seeds)).unwrap();
            g.push_branch(crate::netlist::Branch::new("Jx", BranchKind::Josephson, "0", "1", 3.3e-24).with_offset(off)).unwrap();
            let again = parse_netlist(&g.render()).unwrap();
            prop_assert_eq!(again, g);
        }
    }
}
