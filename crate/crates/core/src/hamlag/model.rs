use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::{incidence, CircuitMatrices};
use crate::constants::REDUCED_FLUX_QUANTUM;
use crate::error::{Error, Result};
use crate::netlist::{BranchKind, CircuitGraph, SpanningTree};

/// Condition numbers of the capacitance matrix above this are refused.
pub const MAX_CONDITION: f64 = 1e12;

/// One −E_J cos((incidence·φ + offset)/φ₀) term.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct JosephsonTerm {
    pub name: String,
    /// Joules.
    pub ej: f64,
    #[serde(serialize_with = "ser_vec")]
    pub incidence: DVector<f64>,
    /// Webers.
    pub offset: f64,
}

/// H(φ, q) = ½(q−q̃)ᵀC⁻¹(q−q̃) + ½φᵀKφ + bᵀφ − Σ E_J cos((sᵀφ+Φ̃)/φ₀) + c₀.
#[derive(Debug, Clone)]
pub struct HamiltonianModel {
    pub node_order: Vec<String>,
    pub cap: DMatrix<f64>,
    pub inv_cap: DMatrix<f64>,
    /// K: Σ over inductors of incidence outer products divided by L.
    pub quad_flux: DMatrix<f64>,
    /// b: Σ over inductors of Φ̃·incidence/L, amperes.
    pub linear_flux: DVector<f64>,
    pub josephson_terms: Vec<JosephsonTerm>,
    /// Coulombs per node.
    pub offset_charges: DVector<f64>,
    /// Σ Φ̃²/2L, joules.
    pub constant: f64,
}

fn ser_vec<S: Serializer>(v: &DVector<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter())
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

impl Serialize for HamiltonianModel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HamiltonianModel", 7)?;
        st.serialize_field("node_order", &self.node_order)?;
        st.serialize_field("inv_cap", &rows(&self.inv_cap))?;
        st.serialize_field("quad_flux", &rows(&self.quad_flux))?;
        st.serialize_field("linear_flux", &self.linear_flux.iter().collect::<Vec<_>>())?;
        st.serialize_field("josephson_terms", &self.josephson_terms)?;
        st.serialize_field("offset_charges", &self.offset_charges.iter().collect::<Vec<_>>())?;
        st.serialize_field("constant", &self.constant)?;
        st.end()
    }
}

/// Inverts C through its Cholesky factor after checking the condition number.
pub(crate) fn checked_inverse(cap: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = cap.nrows();
    let eig = SymmetricEigen::new(cap.clone());
    let max = eig.eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
    let min = eig.eigenvalues.iter().cloned().fold(f64::MAX, f64::min);
    if n > 0 && (min <= 0.0 || max / min > MAX_CONDITION) {
        return Err(Error::IllConditioned(if min > 0.0 { max / min } else { f64::INFINITY }));
    }
    let chol =
        cap.clone().cholesky().ok_or_else(|| Error::Internal("capacitance matrix is not positive definite".into()))?;
    let inv = chol.solve(&DMatrix::identity(n, n));
    Ok((&inv + inv.transpose()) * 0.5)
}

/// Builds the node-flux Hamiltonian. Offsets on inductive branches are
/// external fluxes (branch flux = φ_a − φ_b + Φ̃), offsets on capacitors are
/// charges added to `node_b` and removed from `node_a`.
pub fn build_hamiltonian(graph: &CircuitGraph, tree: &SpanningTree) -> Result<HamiltonianModel> {
    for name in &tree.tree_branches {
        match graph.branch(name) {
            Some(b) if b.kind == BranchKind::Capacitor => {}
            _ => return Err(Error::InvalidArgument(format!("tree branch {name} is not a capacitor of this circuit"))),
        }
    }
    let mats = super::build_matrices(graph)?;
    model_from_matrices(graph, &mats)
}

pub(crate) fn model_from_matrices(graph: &CircuitGraph, mats: &CircuitMatrices) -> Result<HamiltonianModel> {
    let order = &mats.node_order;
    let n = order.len();
    let inv_cap = checked_inverse(&mats.cap)?;
    let mut linear_flux = DVector::zeros(n);
    let mut offset_charges = DVector::zeros(n);
    let mut josephson_terms = Vec::new();
    let mut constant = 0.0;
    for b in graph.branches() {
        let s = incidence(order, &b.node_a, &b.node_b);
        match b.kind {
            BranchKind::Capacitor => offset_charges -= s * b.offset,
            BranchKind::Inductor => {
                linear_flux += s * (b.offset / b.value);
                constant += b.offset * b.offset / (2.0 * b.value);
            }
            BranchKind::Josephson => josephson_terms.push(JosephsonTerm {
                name: b.name.clone(),
                ej: b.value,
                incidence: s,
                offset: b.offset,
            }),
        }
    }
    Ok(HamiltonianModel {
        node_order: order.clone(),
        cap: mats.cap.clone(),
        inv_cap,
        quad_flux: mats.inv_ind.clone(),
        linear_flux,
        josephson_terms,
        offset_charges,
        constant,
    })
}

impl HamiltonianModel {
    pub fn dim(&self) -> usize {
        self.node_order.len()
    }

    pub fn kinetic(&self, q: &DVector<f64>) -> f64 {
        let dq = q - &self.offset_charges;
        0.5 * dq.dot(&(&self.inv_cap * &dq))
    }

    pub fn potential(&self, phi: &DVector<f64>) -> f64 {
        let mut u = 0.5 * phi.dot(&(&self.quad_flux * phi)) + self.linear_flux.dot(phi) + self.constant;
        for t in &self.josephson_terms {
            u -= t.ej * ((t.incidence.dot(phi) + t.offset) / REDUCED_FLUX_QUANTUM).cos();
        }
        u
    }

    pub fn energy(&self, phi: &DVector<f64>, q: &DVector<f64>) -> f64 {
        self.kinetic(q) + self.potential(phi)
    }

    /// ∂U/∂φ, i.e. minus the current injected by the inductive elements.
    pub fn potential_gradient(&self, phi: &DVector<f64>) -> DVector<f64> {
        let mut g = &self.quad_flux * phi + &self.linear_flux;
        for t in &self.josephson_terms {
            let arg = (t.incidence.dot(phi) + t.offset) / REDUCED_FLUX_QUANTUM;
            g += &t.incidence * (t.ej / REDUCED_FLUX_QUANTUM * arg.sin());
        }
        g
    }

    /// dφ/dt = ∂H/∂q.
    pub fn velocity(&self, q: &DVector<f64>) -> DVector<f64> {
        &self.inv_cap * (q - &self.offset_charges)
    }

    /// Hessian of the potential at φ.
    pub fn potential_hessian(&self, phi: &DVector<f64>) -> DMatrix<f64> {
        let mut h = self.quad_flux.clone();
        for t in &self.josephson_terms {
            let arg = (t.incidence.dot(phi) + t.offset) / REDUCED_FLUX_QUANTUM;
            let k = t.ej / (REDUCED_FLUX_QUANTUM * REDUCED_FLUX_QUANTUM) * arg.cos();
            h += &t.incidence * t.incidence.transpose() * k;
        }
        h
    }

    /// Second-order expansion of the Josephson terms about φ = 0 folded into
    /// the quadratic form.
    pub fn linearized_quad_flux(&self) -> DMatrix<f64> {
        self.potential_hessian(&DVector::zeros(self.dim()))
    }

    /// Largest stiffness the potential can present anywhere: every cosine
    /// at full curvature.
    pub(crate) fn stiffness_bound(&self) -> DMatrix<f64> {
        let mut h = self.quad_flux.clone();
        for t in &self.josephson_terms {
            h += &t.incidence * t.incidence.transpose() * (t.ej / (REDUCED_FLUX_QUANTUM * REDUCED_FLUX_QUANTUM));
        }
        h
    }
}
