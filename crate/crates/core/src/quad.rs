//! Adaptive Gauss–Kronrod (G10/K21) quadrature.

// Nodes and weights are quoted verbatim from the published tables.
#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_600_525_389,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

/// Gauss weights for the nodes XGK[1], XGK[3], …, XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { rel_tol: 1e-7, abs_tol: 0.0, max_intervals: 4000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Estimated absolute error.
    pub error: f64,
    pub evaluations: usize,
}

fn kronrod21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(10).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]`, splitting first at the given interior
/// `breakpoints` (points outside the interval are ignored).
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    opts: QuadOptions,
) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument("integration bounds must be finite".into()));
    }
    if a == b {
        return Ok(QuadResult { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&p| p > lo && p < hi).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = vec![lo];
    edges.extend(cuts);
    edges.push(hi);

    // (a, b, value, error)
    let mut intervals: Vec<(f64, f64, f64, f64)> = Vec::new();
    let mut evaluations = 0;
    for w in edges.windows(2) {
        let (v, e) = kronrod21(&mut f, w[0], w[1]);
        evaluations += 21;
        intervals.push((w[0], w[1], v, e));
    }

    loop {
        let total: f64 = intervals.iter().map(|i| i.2).sum();
        let err: f64 = intervals.iter().map(|i| i.3).sum();
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if !(total.is_finite() && err.is_finite()) {
            return Err(Error::NonConvergence("integrand produced non-finite values".into()));
        }
        if err <= target {
            return Ok(QuadResult { value: sign * total, error: err, evaluations });
        }
        if intervals.len() >= opts.max_intervals {
            return Err(Error::NonConvergence(format!(
                "quadrature did not reach tolerance: value {total:.6e}, error estimate {err:.3e} after {} intervals",
                intervals.len()
            )));
        }
        let (idx, _) = intervals.iter().enumerate().max_by(|x, y| x.1 .3.total_cmp(&y.1 .3)).expect("non-empty");
        let (a0, b0, _, _) = intervals.swap_remove(idx);
        let mid = 0.5 * (a0 + b0);
        if mid <= a0 || mid >= b0 {
            return Err(Error::NonConvergence(format!(
                "interval around {a0:.6e} cannot be subdivided further; error estimate {err:.3e}"
            )));
        }
        let (v1, e1) = kronrod21(&mut f, a0, mid);
        let (v2, e2) = kronrod21(&mut f, mid, b0);
        evaluations += 42;
        intervals.push((a0, mid, v1, e1));
        intervals.push((mid, b0, v2, e2));
    }
}

/// Integrates `f` over `[a, ∞)` for `a > 0` through the substitution x = a/t.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, opts: QuadOptions) -> Result<QuadResult> {
    if !(a > 0.0) {
        return Err(Error::InvalidArgument("semi-infinite integration needs a positive lower bound".into()));
    }
    integrate(
        |t| {
            if t <= 0.0 {
                0.0
            } else {
                let x = a / t;
                let v = f(x) * a / (t * t);
                if v.is_finite() {
                    v
                } else {
                    0.0
                }
            }
        },
        0.0,
        1.0,
        &[],
        opts,
    )
}
