//! Digamma function over the reals and the complex plane.
//!
//! Both versions shift the argument upward with ψ(z+1) = ψ(z) + 1/z until
//! Re z ≥ 10 and then sum the Bernoulli asymptotic series; arguments with
//! Re z < ½ go through the reflection formula first.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// B₂ₖ/(2k) for k = 1..7.
const ASYMPTOTIC: [f64; 7] =
    [1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0];

const SHIFT_TO: f64 = 10.0;

fn pole_error(x: f64) -> Error {
    Error::InvalidArgument(format!("digamma has a pole at {x}"))
}

/// ψ(x) for real `x`. Non-positive integers are poles and return an error.
pub fn digamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::InvalidArgument("digamma of NaN".into()));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(pole_error(x));
    }
    if x < 0.5 {
        // ψ(x) = ψ(1 − x) − π cot(πx)
        return Ok(digamma(1.0 - x)? - PI / (PI * x).tan());
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < SHIFT_TO {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut pow = inv2;
    let mut series = 0.0;
    for c in ASYMPTOTIC {
        series += c * pow;
        pow *= inv2;
    }
    Ok(acc + x.ln() - 0.5 / x - series)
}

/// ψ(z) for complex `z`, same algorithm as [`digamma`].
pub fn digamma_complex(z: Complex64) -> Result<Complex64> {
    if z.re.is_nan() || z.im.is_nan() {
        return Err(Error::InvalidArgument("digamma of NaN".into()));
    }
    if z.im == 0.0 {
        return digamma(z.re).map(Complex64::from);
    }
    if z.re < 0.5 {
        let one = Complex64::new(1.0, 0.0);
        let pz = z * PI;
        return Ok(digamma_complex(one - z)? - PI * pz.cos() / pz.sin());
    }
    let mut z = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while z.re < SHIFT_TO {
        acc -= z.inv();
        z += 1.0;
    }
    let inv2 = (z * z).inv();
    let mut pow = inv2;
    let mut series = Complex64::new(0.0, 0.0);
    for c in ASYMPTOTIC {
        series += pow * c;
        pow *= inv2;
    }
    Ok(acc + z.ln() - z.inv() * 0.5 - series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::EULER_GAMMA;
    use proptest::prelude::*;

    #[test]
    fn digamma_at_one_is_minus_euler_gamma() {
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-14);
        assert!((digamma(1.0).unwrap() + 0.5772156649).abs() < 1e-10);
    }

    #[test]
    fn digamma_at_half() {
        let expected = -EULER_GAMMA - 2.0 * 2f64.ln();
        assert!((digamma(0.5).unwrap() - expected).abs() < 1e-13);
    }

    #[test]
    fn poles_are_errors() {
        for x in [0.0, -1.0, -7.0] {
            assert!(digamma(x).is_err());
        }
    }

    #[test]
    fn reflection_region() {
        // ψ(−½) = ψ(½) + 2
        let expected = -EULER_GAMMA - 2.0 * 2f64.ln() + 2.0;
        assert!((digamma(-0.5).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn imaginary_axis_closed_form() {
        // Im ψ(iy) = 1/(2y) + (π/2) coth(πy)
        for y in [0.3, 1.0, 4.5, 30.0] {
            let v = digamma_complex(Complex64::new(0.0, y)).unwrap();
            let expected = 0.5 / y + 0.5 * PI / (PI * y).tanh();
            assert!((v.im - expected).abs() < 1e-12 * expected.max(1.0), "y={y}");
            // Im ψ(1+iy) = −1/(2y) + (π/2) coth(πy)
            let w = digamma_complex(Complex64::new(1.0, y)).unwrap();
            let expected = -0.5 / y + 0.5 * PI / (PI * y).tanh();
            assert!((w.im - expected).abs() < 1e-12 * expected.abs().max(1.0), "y={y}");
        }
    }

    #[test]
    fn complex_agrees_with_real_on_axis() {
        for x in [0.1, 0.7, 3.3, 12.0, 250.0] {
            let r = digamma(x).unwrap();
            let c = digamma_complex(Complex64::new(x, 1e-300)).unwrap();
            assert!((c.re - r).abs() < 1e-13 * r.abs().max(1.0));
        }
    }

    proptest! {
        #[test]
        fn recurrence_holds(x in 0.01f64..200.0) {
            let lhs = digamma(x + 1.0).unwrap();
            let rhs = digamma(x).unwrap() + 1.0 / x;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0) + 1e-12 / x.min(1.0) * 1e-2);
        }

        #[test]
        fn complex_recurrence_and_conjugation(re in -5.0f64..40.0, im in -30.0f64..30.0) {
            prop_assume!(im.abs() > 1e-3);
            let z = Complex64::new(re, im);
            let lhs = digamma_complex(z + 1.0).unwrap();
            let rhs = digamma_complex(z).unwrap() + z.inv();
            prop_assert!((lhs - rhs).norm() <= 1e-11 * lhs.norm().max(1.0));
            let c = digamma_complex(z.conj()).unwrap();
            prop_assert!((c - digamma_complex(z).unwrap().conj()).norm() <= 1e-13 * c.norm().max(1.0));
        }
    }
}
