//! Registered test functions with closed-form Mellin transforms.

use num_complex::Complex64;

use super::gamma::gamma;
use crate::error::{Error, Result};

/// An admissible weight phi on the nonnegative reals.
#[derive(Debug, Clone, Copy)]
pub struct TestFunction {
    pub name: &'static str,
    pub eval: fn(f64) -> f64,
    pub mellin_closed: fn(Complex64) -> Complex64,
    /// phi^(j)(0) = 0 for j <= vanishing_order.
    pub vanishing_order: u32,
    /// Open interval of Re(u) on which the Mellin integral converges.
    pub mellin_strip: (f64, f64),
    /// Interval outside which |phi| is below 1e-16 of its maximum.
    pub effective_support: (f64, f64),
}

impl TestFunction {
    #[inline]
    pub fn evaluate(&self, x: f64) -> f64 {
        (self.eval)(x)
    }
}

fn gauss13(x: f64) -> f64 {
    x.powi(13) * (-x * x).exp()
}

fn gauss13_mellin(u: Complex64) -> Complex64 {
    0.5 * gamma((u + 13.0) * 0.5).expect("Mellin strip is checked by the caller")
}

fn exp13(x: f64) -> f64 {
    x.powi(13) * (-x).exp()
}

fn exp13_mellin(u: Complex64) -> Complex64 {
    gamma(u + 13.0).expect("Mellin strip is checked by the caller")
}

pub const GAUSS13: TestFunction = TestFunction {
    name: "gauss13",
    eval: gauss13,
    mellin_closed: gauss13_mellin,
    vanishing_order: 12,
    mellin_strip: (-13.0, f64::INFINITY),
    effective_support: (1e-2, 12.0),
};

pub const EXP13: TestFunction = TestFunction {
    name: "exp13",
    eval: exp13,
    mellin_closed: exp13_mellin,
    vanishing_order: 12,
    mellin_strip: (-13.0, f64::INFINITY),
    effective_support: (1e-2, 120.0),
};

pub const REGISTRY: [TestFunction; 2] = [GAUSS13, EXP13];

pub fn test_function(name: &str) -> Result<TestFunction> {
    REGISTRY
        .iter()
        .find(|f| f.name == name)
        .copied()
        .ok_or_else(|| Error::InvalidArgument(format!("unknown test function '{name}'")))
}

/// The closed-form Mellin transform, restricted to the strip of convergence.
pub fn mellin(f: &TestFunction, u: Complex64) -> Result<Complex64> {
    let (lo, hi) = f.mellin_strip;
    if !(u.re > lo && u.re < hi) {
        return Err(Error::MellinStrip { re: u.re, lo, hi });
    }
    Ok((f.mellin_closed)(u))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_at_one() {
        let u = Complex64::new(1.0, 0.0);
        assert!((mellin(&GAUSS13, u).unwrap().re - 360.0).abs() < 1e-10);
        assert!((mellin(&EXP13, u).unwrap().re / 6_227_020_800.0 - 1.0).abs() < 1e-13);
        assert!(matches!(mellin(&GAUSS13, Complex64::new(-14.0, 0.0)), Err(Error::MellinStrip { .. })));
        assert!(test_function("nope").is_err());
    }

    #[test]
    fn vanishing_at_origin() {
        for f in REGISTRY {
            assert_eq!(f.evaluate(0.0), 0.0);
            // a function vanishing to order 13 is below h^13 times a modest constant at h
            let h = 1e-3;
            assert!(f.evaluate(h).abs() < 2.0 * h.powi(13));
        }
    }
}
