use std::f64::consts::PI;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use circuitq::atoms::{
    classify_regime, hamiltonian, levels, sensitivity, AtomSpec, RegimeReport, SweepParameter, Truncation,
};
use circuitq::bath::{
    discretize, johnson_voltage_psd, nyquist_current_psd, quantum_psd, AdmittanceModel, DampedLc, ImpedanceModel,
};
use circuitq::constants::{joules_to_hz, PLANCK};
use circuitq::hamlag::{build_hamiltonian, build_matrices_with, normal_modes, MatrixOptions};
use circuitq::inout::{input_output, steady_state, CavityParams, Damping, DriveSpec};
use circuitq::netlist::{parse_netlist, spanning_tree, CircuitGraph};
use circuitq::{Basis, Complex64, DMatrix};

use crate::output::{emit, to_json, Cell, Table};
use crate::{
    BathArgs, Cli, CliError, Command, DampingArg, FdtArgs, Format, Quantity, QuantizeArgs, ScatterArgs, SpectrumArgs,
    SweepArgs, SweepParam, TruncationArgs, VarianceArgs,
};

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let text = match &cli.command {
        Command::Quantize(a) => quantize(a, cli.format)?,
        Command::Spectrum(a) => spectrum(a, cli.format)?,
        Command::Sweep(a) => table_out(sweep(a)?, cli.format)?,
        Command::Bath(a) => table_out(bath(a)?, cli.format)?,
        Command::Fdt(a) => table_out(fdt(a)?, cli.format)?,
        Command::Variance(a) => table_out(variance(a)?, cli.format)?,
        Command::Scatter(a) => table_out(scatter(a)?, cli.format)?,
    };
    emit(&text, cli.output.as_deref())
}

fn table_out(t: Table, format: Option<Format>) -> Result<String, CliError> {
    match format.unwrap_or(Format::Csv) {
        Format::Csv => t.to_csv(),
        Format::Json => t.to_json(),
    }
}

fn read_netlist(path: &Path) -> Result<CircuitGraph, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_netlist(&text)?)
}

fn grid(from: f64, to: f64, points: usize) -> Result<Vec<f64>, CliError> {
    match points {
        0 => Err(CliError::Usage("--points must be at least 1".into())),
        1 => Ok(vec![from]),
        n => Ok((0..n).map(|i| from + (to - from) * i as f64 / (n - 1) as f64).collect()),
    }
}

fn truncation(t: TruncationArgs) -> Truncation {
    Truncation { n_cut: t.n_cut, n_max: t.n_max }
}

#[derive(Serialize)]
struct JunctionOut {
    name: String,
    ej_hz: f64,
    incidence: Vec<f64>,
    offset_wb: f64,
}

#[derive(Serialize)]
struct HamiltonianOut {
    node_order: Vec<String>,
    inv_cap: Vec<Vec<f64>>,
    quad_flux: Vec<Vec<f64>>,
    linear_flux: Vec<f64>,
    josephson_terms: Vec<JunctionOut>,
    offset_charges: Vec<f64>,
    constant_hz: f64,
}

#[derive(Serialize)]
struct ModesOut {
    frequencies_hz: Vec<f64>,
    count: usize,
    linearized: bool,
}

#[derive(Serialize)]
struct QuantizeOut {
    ground: String,
    spanning_tree: Vec<String>,
    closure_branches: Vec<String>,
    hamiltonian: HamiltonianOut,
    modes: ModesOut,
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn quantize(a: &QuantizeArgs, format: Option<Format>) -> Result<String, CliError> {
    if format == Some(Format::Csv) {
        return Err(CliError::Usage("quantize emits JSON only".into()));
    }
    let g = read_netlist(&a.netlist)?;
    let tree = spanning_tree(&g)?;
    let h = build_hamiltonian(&g, &tree)?;
    let mats = build_matrices_with(&g, MatrixOptions { linearize_josephson: a.linearize })?;
    let modes = normal_modes(&mats)?;
    let out = QuantizeOut {
        ground: g.ground().to_string(),
        spanning_tree: tree.tree_branches.clone(),
        closure_branches: tree.closure_branches.clone(),
        hamiltonian: HamiltonianOut {
            node_order: h.node_order.clone(),
            inv_cap: rows(&h.inv_cap),
            quad_flux: rows(&h.quad_flux),
            linear_flux: h.linear_flux.iter().copied().collect(),
            josephson_terms: h
                .josephson_terms
                .iter()
                .map(|t| JunctionOut {
                    name: t.name.clone(),
                    ej_hz: joules_to_hz(t.ej),
                    incidence: t.incidence.iter().copied().collect(),
                    offset_wb: t.offset,
                })
                .collect(),
            offset_charges: h.offset_charges.iter().copied().collect(),
            constant_hz: joules_to_hz(h.constant),
        },
        modes: ModesOut {
            frequencies_hz: modes.frequencies.iter().map(|w| w / (2.0 * PI)).collect(),
            count: modes.count,
            linearized: a.linearize,
        },
    };
    to_json(&out)
}

#[derive(Serialize)]
struct AtomOut {
    ec_hz: f64,
    ej_hz: f64,
    el_hz: f64,
    n_g: f64,
    phi_ext: f64,
}

#[derive(Serialize)]
struct SpectrumOut {
    atom: AtomOut,
    basis: Basis,
    regime: RegimeReport,
    levels_hz: Vec<f64>,
    transitions_hz: Vec<f64>,
}

fn atom_out(s: &AtomSpec) -> AtomOut {
    AtomOut {
        ec_hz: joules_to_hz(s.ec),
        ej_hz: joules_to_hz(s.ej),
        el_hz: joules_to_hz(s.el),
        n_g: s.n_g,
        phi_ext: s.phi_ext,
    }
}

fn spectrum(a: &SpectrumArgs, format: Option<Format>) -> Result<String, CliError> {
    if a.levels == 0 {
        return Err(CliError::Usage("--levels must be at least 1".into()));
    }
    let spec = AtomSpec::from_circuit(&read_netlist(&a.netlist)?)?;
    let trunc = truncation(a.truncation);
    let e = levels(&spec, a.levels, trunc)?;
    let levels_hz: Vec<f64> = e.iter().map(|&x| joules_to_hz(x)).collect();
    let transitions_hz: Vec<f64> = e.iter().map(|&x| (x - e[0]) / PLANCK).collect();
    if format == Some(Format::Csv) {
        let mut t = Table::new(["level", "energy_hz", "transition_hz"]);
        for (k, (l, f)) in levels_hz.iter().zip(&transitions_hz).enumerate() {
            t.push(vec![(k as f64).into(), (*l).into(), (*f).into()]);
        }
        return t.to_csv();
    }
    let basis = hamiltonian(&spec, trunc)?.basis();
    to_json(&SpectrumOut { atom: atom_out(&spec), basis, regime: classify_regime(&spec), levels_hz, transitions_hz })
}

fn sweep(a: &SweepArgs) -> Result<Table, CliError> {
    if a.levels < 2 {
        return Err(CliError::Usage("--levels must be at least 2 for the ω_01 sensitivity".into()));
    }
    let base = AtomSpec::from_circuit(&read_netlist(&a.netlist)?)?;
    let param = match a.param {
        SweepParam::PhiExt => SweepParameter::PhiExt,
        SweepParam::Ng => SweepParameter::Ng,
    };
    let trunc = truncation(a.truncation);
    let values = grid(a.from, a.to, a.points)?;
    let results: Vec<Result<Vec<Cell>, circuitq::Error>> = values
        .par_iter()
        .map(|&x| {
            let spec = param.apply(&base, x);
            let e = levels(&spec, a.levels, trunc)?;
            let d = sensitivity(&spec, param, (0, 1), trunc)?;
            let mut row: Vec<Cell> = vec![x.into()];
            row.extend(e.iter().map(|&v| Cell::Num(joules_to_hz(v))));
            row.push((d / (2.0 * PI)).into());
            Ok(row)
        })
        .collect();
    let mut columns = vec!["param_value".to_string()];
    columns.extend((0..a.levels).map(|k| format!("E{k}_hz")));
    columns.push("df01_dparam_hz".into());
    let mut t = Table::new(columns);
    for r in results {
        t.push(r?);
    }
    Ok(t)
}

fn read_admittance_table(path: &Path) -> Result<AdmittanceModel, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let headers = reader.headers().map_err(|e| CliError::Io(e.to_string()))?.clone();
    let expected = ["omega_rad_s", "re_Y_S", "im_Y_S"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(CliError::Core(circuitq::Error::InvalidArgument(format!(
            "admittance table header must be {}",
            expected.join(",")
        ))));
    }
    let mut samples = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Io(e.to_string()))?;
        let num = |k: usize| -> Result<f64, CliError> {
            rec.get(k).and_then(|s| s.parse().ok()).ok_or_else(|| {
                CliError::Core(circuitq::Error::Syntax {
                    line: i + 2,
                    message: format!("column {} is not a number", k + 1),
                })
            })
        };
        samples.push((num(0)?, Complex64::new(num(1)?, num(2)?)));
    }
    Ok(AdmittanceModel::tabulated(samples)?)
}

fn ohmic(r: f64, omega_c: Option<f64>) -> Result<AdmittanceModel, CliError> {
    Ok(match omega_c {
        Some(wc) => AdmittanceModel::ohmic(r, wc)?,
        None => AdmittanceModel::conductance(r)?,
    })
}

fn bath(a: &BathArgs) -> Result<Table, CliError> {
    let y = match (&a.source.r, &a.source.table) {
        (Some(r), None) => ohmic(*r, a.omega_c)?,
        (None, Some(p)) => read_admittance_table(p)?,
        _ => return Err(CliError::Usage("give exactly one of --R and --table".into())),
    };
    let b = discretize(&y, a.delta_omega, a.omega_max)?;
    let mut t = Table::new(["m", "omega_m", "C_m", "L_m"]);
    t.meta.push(("L0".into(), Cell::Num(b.l0.unwrap_or(f64::INFINITY))));
    for o in &b.oscillators {
        t.push(vec![(o.m as f64).into(), o.omega.into(), o.c.into(), o.l.into()]);
    }
    Ok(t)
}

fn fdt(a: &FdtArgs) -> Result<Table, CliError> {
    let admittance = match (a.r, &a.table) {
        (Some(r), None) => ohmic(r, a.omega_c)?,
        (None, Some(p)) => read_admittance_table(p)?,
        _ => return Err(CliError::Usage("give exactly one of --R and --table".into())),
    };
    let z = match (a.l, a.c, a.r) {
        (Some(l), Some(c), Some(r)) => {
            ImpedanceModel::DampedLc { l, c, r, omega_c: a.omega_c.unwrap_or(f64::INFINITY) }
        }
        (Some(_), Some(_), None) => return Err(CliError::Usage("--L and --C need --R".into())),
        (Some(_), _, _) | (_, Some(_), _) => return Err(CliError::Usage("--L and --C go together with --R".into())),
        _ => ImpedanceModel::Admittance(admittance.clone()),
    };
    let mut t = Table::new(["omega_rad_s", "S_value"]);
    for w in grid(a.from, a.to, a.points)? {
        let s = match (a.quantity, a.classical) {
            (Quantity::Vv, false) => quantum_psd(&z, a.temperature, w)?.s_vv,
            (Quantity::Phiphi, false) => quantum_psd(&z, a.temperature, w)?.s_phiphi,
            (Quantity::Vv, true) => johnson_voltage_psd(&z, a.temperature, w)?,
            (Quantity::Ii, _) => nyquist_current_psd(&admittance, a.temperature, w)?,
            (Quantity::Phiphi, true) => {
                return Err(CliError::Usage("--classical applies to voltage noise only".into()))
            }
        };
        t.push(vec![w.into(), s.into()]);
    }
    Ok(t)
}

fn variance(a: &VarianceArgs) -> Result<Table, CliError> {
    let lc = DampedLc::new(a.l, a.c, a.r, a.wc_ratio / (a.l * a.c).sqrt(), a.temperature)?;
    let closed = lc.closed_form()?;
    let (phi2, q2) = lc.quadrature()?;
    let mut t = Table::new(["quantity", "closed_form", "quadrature", "relative_difference"]);
    for (name, c, q) in [("phi2", closed.phi2, phi2), ("q2", closed.q2, q2)] {
        t.push(vec![name.into(), c.into(), q.into(), ((c - q) / q).abs().into()]);
    }
    t.meta.push(("kappa".into(), lc.kappa().into()));
    t.meta.push(("theta".into(), lc.theta().into()));
    Ok(t)
}

fn scatter(a: &ScatterArgs) -> Result<Table, CliError> {
    let damping = match a.damping {
        DampingArg::Series => Damping::Series,
        DampingArg::Parallel => Damping::Parallel,
    };
    let cavity = match (a.f0, a.gamma, a.l, a.c, a.r) {
        (Some(f0), Some(g), None, None, None) => CavityParams::new(2.0 * PI * f0, g, damping, a.z)?,
        (None, None, Some(l), Some(c), Some(r)) => CavityParams::loaded_lc(l, c, r)?,
        _ => return Err(CliError::Usage("give either --f0 and --gamma, or --L, --C and --R".into())),
    };
    let a_in = Complex64::from(a.amplitude);
    let mut t = Table::new(["detuning_rad_s", "re_a", "im_a", "re_aout", "im_aout"]);
    for x in grid(-a.span, a.span, a.points)? {
        let detuning = x * cavity.gamma_a;
        let drive = DriveSpec::new(a_in, cavity.omega_a + detuning, 0.0)?;
        let amp = steady_state(&cavity, &drive);
        let out = input_output(a_in, amp, &cavity);
        t.push(vec![detuning.into(), amp.re.into(), amp.im.into(), out.re.into(), out.im.into()]);
    }
    Ok(t)
}
