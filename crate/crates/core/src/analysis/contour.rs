//! Trapezoidal quadrature along vertical lines Re(u) = xi.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::summation::ComplexKahan;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourSpec {
    pub xi: f64,
    pub half_height: f64,
    pub step: f64,
    /// Filled in by the integrator: estimate of the discarded |Im u| > T mass.
    pub tail_estimate: f64,
}

impl ContourSpec {
    pub fn new(xi: f64, half_height: f64, step: f64) -> Self {
        Self { xi, half_height, step, tail_estimate: 0.0 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ContourResult {
    pub value: Complex64,
    pub spec: ContourSpec,
}

/// Relative size of the last sample above which the integrand counts as non-decaying.
pub const TAIL_TOLERANCE: f64 = 1e-12;

/// (1/2 pi i) times the integral of f over Re(u) = xi, as (h / 2 pi) sum_k f(xi + i k h).
pub fn vertical_line_integral<F: FnMut(Complex64) -> Complex64>(mut f: F, spec: ContourSpec) -> Result<ContourResult> {
    let h = spec.step;
    let k_max = (spec.half_height / h).ceil() as i64;
    let mut acc = ComplexKahan::new();
    let mut peak = 0.0f64;
    let mut edge = [0.0f64; 4];
    for k in -k_max..=k_max {
        let v = f(Complex64::new(spec.xi, k as f64 * h));
        peak = peak.max(v.norm());
        match k {
            k if k == -k_max => edge[0] = v.norm(),
            k if k == -k_max + 1 => edge[1] = v.norm(),
            k if k == k_max - 1 => edge[2] = v.norm(),
            k if k == k_max => edge[3] = v.norm(),
            _ => {}
        }
        acc.add(v);
    }
    let value = acc.value() * (h / (2.0 * PI));
    let last = edge[0].max(edge[3]);
    if last > TAIL_TOLERANCE * peak.max(f64::MIN_POSITIVE) && peak > 0.0 {
        return Err(Error::ContourTail { last, height: spec.half_height });
    }
    // geometric extrapolation of the edge decay on each side
    let side = |outer: f64, inner: f64| {
        let r = if inner > 0.0 { (outer / inner).min(0.999) } else { 0.0 };
        outer * r / (1.0 - r)
    };
    let tail = (side(edge[0], edge[1]) + side(edge[3], edge[2])) * h / (2.0 * PI);
    Ok(ContourResult { value, spec: ContourSpec { tail_estimate: tail, ..spec } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::gamma::gamma;

    #[test]
    fn cahen_mellin() {
        for x in [1.0f64, 0.3, 4.0] {
            let f = |u: Complex64| gamma(u).unwrap() * (-u * x.ln()).exp();
            let r = vertical_line_integral(f, ContourSpec::new(2.0, 80.0, 0.1)).unwrap();
            assert!((r.value.re - (-x).exp()).abs() < 1e-12, "x={x}");
            assert!(r.value.im.abs() < 1e-14);
        }
    }

    #[test]
    fn step_halving_is_stable() {
        let f = |u: Complex64| gamma(u).unwrap();
        let a = vertical_line_integral(f, ContourSpec::new(1.5, 80.0, 0.2)).unwrap();
        let b = vertical_line_integral(f, ContourSpec::new(1.5, 80.0, 0.1)).unwrap();
        assert!((a.value - b.value).norm() < 1e-10);
    }

    #[test]
    fn non_decaying_integrand_is_rejected() {
        let f = |_u: Complex64| Complex64::new(1.0, 0.0);
        assert!(matches!(
            vertical_line_integral(f, ContourSpec::new(0.0, 10.0, 0.1)),
            Err(Error::ContourTail { .. })
        ));
    }
}
