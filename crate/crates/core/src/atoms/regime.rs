use serde::Serialize;

use super::AtomSpec;

/// The filled cells of the E_J/E_C versus E_L/(E_J − E_L) classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QubitFamily {
    CooperPairBox,
    Quantronium,
    Fluxonium,
    Transmon,
    FluxQubit,
    PhaseQubit,
}

impl QubitFamily {
    pub fn label(self) -> &'static str {
        match self {
            QubitFamily::CooperPairBox => "Cooper-pair box",
            QubitFamily::Quantronium => "quantronium",
            QubitFamily::Fluxonium => "fluxonium",
            QubitFamily::Transmon => "transmon",
            QubitFamily::FluxQubit => "flux qubit",
            QubitFamily::PhaseQubit => "phase qubit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeReport {
    pub ej_over_ec: f64,
    /// E_L/(E_J − E_L); infinite when E_J ≤ E_L.
    pub el_ratio: f64,
    /// Nearest filled cell; the table has no sharp boundaries.
    pub nearest: QubitFamily,
    pub row: &'static str,
    pub column: &'static str,
}

const ROWS: [(&str, f64); 4] = [("<<1", 0.1), ("~1", 1.0), (">>1", 50.0), (">>>1", 1e4)];
// The zero column sits at 10⁻³ on the log axis.
const COLS: [(&str, f64); 4] = [("0", 1e-3), ("<<1", 0.05), ("~1", 1.0), (">>1", 20.0)];
const CELLS: [(usize, usize, QubitFamily); 6] = [
    (0, 0, QubitFamily::CooperPairBox),
    (1, 0, QubitFamily::Quantronium),
    (1, 1, QubitFamily::Fluxonium),
    (2, 0, QubitFamily::Transmon),
    (2, 3, QubitFamily::FluxQubit),
    (3, 2, QubitFamily::PhaseQubit),
];

fn log_coord(x: f64, floor: f64) -> f64 {
    if x.is_infinite() {
        1e6f64.log10()
    } else {
        x.max(floor).log10()
    }
}

/// Reports both ratios and the nearest filled cell by Euclidean distance in
/// log₁₀ coordinates.
pub fn classify_regime(spec: &AtomSpec) -> RegimeReport {
    let ej_over_ec = spec.ej / spec.ec;
    let el_ratio = if spec.ej > spec.el { spec.el / (spec.ej - spec.el) } else { f64::INFINITY };
    let x = log_coord(ej_over_ec, 1e-3);
    let y = log_coord(el_ratio, 1e-3);
    let (r, c, nearest) = CELLS
        .iter()
        .copied()
        .min_by(|a, b| {
            let da = (x - ROWS[a.0].1.log10()).powi(2) + (y - COLS[a.1].1.log10()).powi(2);
            let db = (x - ROWS[b.0].1.log10()).powi(2) + (y - COLS[b.1].1.log10()).powi(2);
            da.total_cmp(&db)
        })
        .expect("table is not empty");
    RegimeReport { ej_over_ec, el_ratio, nearest, row: ROWS[r].0, column: COLS[c].0 }
}
