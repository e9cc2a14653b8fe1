//! End-to-end use of the public API: netlist text through to modes and spectra.

use circuitq::atoms::{levels, Truncation};
use circuitq::bath::discretize;
use circuitq::constants::{charging_energy, FLUX_QUANTUM};
use circuitq::hamlag::{build_matrices, normal_modes};
use circuitq::netlist::parse_netlist;
use circuitq::{AdmittanceModel, AtomSpec};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn modes_of(text: &str) -> Vec<f64> {
    normal_modes(&build_matrices(&parse_netlist(text).unwrap()).unwrap()).unwrap().nonzero()
}

/// Each node carries C and L to ground; neighbours share a coupling capacitor.
fn chain(caps: &[f64], inds: &[f64], coupling: f64) -> Vec<String> {
    let mut lines = Vec::new();
    for (k, (c, l)) in caps.iter().zip(inds).enumerate() {
        lines.push(format!("C{k} 0 n{k} {c:e}"));
        lines.push(format!("L{k} 0 n{k} {l:e}"));
        if k > 0 {
            lines.push(format!("CC{k} n{} n{k} {coupling:e}", k - 1));
        }
    }
    lines
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn mode_frequencies_ignore_line_order(
        (caps, inds) in (2usize..6).prop_flat_map(|n| (
            prop::collection::vec(0.5e-12..5e-12, n),
            prop::collection::vec(0.5e-9..5e-9, n),
        )),
        coupling in 0.01e-12..1e-12,
        seed in any::<u64>(),
    ) {
        let lines = chain(&caps, &inds, coupling);
        let reference = modes_of(&lines.join("\n"));
        prop_assert_eq!(reference.len(), caps.len());

        let mut shuffled = lines.clone();
        shuffled.shuffle(&mut StdRng::seed_from_u64(seed));
        let permuted = modes_of(&shuffled.join("\n"));
        for (a, b) in permuted.iter().zip(&reference) {
            prop_assert!(rel(*a, *b) < 1e-12);
        }
    }

    #[test]
    fn weak_coupling_leaves_bare_resonances(caps in prop::collection::vec(1e-12..2e-12, 3), l in 1e-9..2e-9) {
        let inds = [l, 1.5 * l, 2.2 * l];
        let mut bare: Vec<f64> = caps.iter().zip(&inds).map(|(c, l): (&f64, &f64)| 1.0 / (l * c).sqrt()).collect();
        bare.sort_by(f64::total_cmp);
        let coupled = modes_of(&chain(&caps, &inds, 1e-18).join("\n"));
        for (a, b) in coupled.iter().zip(&bare) {
            prop_assert!(rel(*a, *b) < 1e-5);
        }
    }
}

#[test]
fn netlist_atom_matches_direct_spec() {
    let ec = charging_energy(5e-15);
    let text = format!("C1 0 1 5f\nJ1 0 1 Ej={:e}\nL1 0 1 300n offset={:e}", 4.0 * ec, 0.5 * FLUX_QUANTUM);
    let from_netlist = AtomSpec::from_circuit(&parse_netlist(&text).unwrap()).unwrap();
    let trunc = Truncation { n_cut: 30, n_max: 120 };
    let a = levels(&from_netlist, 4, trunc).unwrap();
    let direct = AtomSpec::new(ec, 4.0 * ec, from_netlist.el).unwrap().with_phi_ext(std::f64::consts::PI);
    let b = levels(&direct, 4, trunc).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-9 * ec, "{x} vs {y}");
    }
}

#[test]
fn attached_bath_adds_one_mode_per_oscillator() {
    let graph = parse_netlist("C1 0 a 1p\nL1 0 a 1n").unwrap();
    let bath = discretize(&AdmittanceModel::conductance(1e4).unwrap(), 2e9, 6e10).unwrap();
    let loaded = bath.attach(&graph, "a", "b").unwrap();
    let modes = normal_modes(&build_matrices(&loaded).unwrap()).unwrap();
    assert_eq!(modes.count, 1 + bath.oscillators.len());

    // A weak bath barely moves the resonance; the nearest mode stays within
    // a few comb spacings of 1/√(LC).
    let w0 = 1.0 / (1e-9f64 * 1e-12).sqrt();
    let nearest = modes.nonzero().into_iter().map(|w| (w - w0).abs()).fold(f64::INFINITY, f64::min);
    assert!(nearest < 2.0 * bath.delta_omega, "closest mode is {nearest:e} rad/s away");
}
