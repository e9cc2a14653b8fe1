//! Benchmarks for the numerical kernels of `circuitq`; see `benches/numerics.rs`.
//!
//! Run with `cargo bench -p circuitq-bench`.

/// A capacitively coupled chain of `n` LC resonators, ground node `0`.
pub fn ladder_netlist(n: usize) -> String {
    let mut text = String::new();
    for k in 1..=n {
        text.push_str(&format!("C{k} 0 n{k} {}p\nL{k} 0 n{k} {}n\n", 1.0 + 0.1 * k as f64, 2.0 + 0.3 * k as f64));
        if k > 1 {
            text.push_str(&format!("CC{k} n{} n{k} 0.2p\n", k - 1));
        }
    }
    text
}
