//! Kuznetsov weights phi_h, phi_plus and the reciprocity kernel Phi.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::bessel::{bessel_j_imag, bessel_j_int};
use crate::analysis::contour::{vertical_line_integral, ContourSpec};
use crate::analysis::gamma::ln_gamma;
use crate::analysis::quad::integrate_complex;
use crate::analysis::testfn::{mellin, TestFunction};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TransformValue {
    pub value: f64,
    /// Imaginary part left over after combining the complex kernel.
    pub imag_residue: f64,
    pub quad_error: f64,
    pub note: Option<&'static str>,
}

/// phi_h(l) = integral of J_{l-1}(x) phi(x) dx / x.
pub fn phi_h(f: &TestFunction, l: u32) -> Result<TransformValue> {
    if l < 2 || l % 2 == 1 {
        return Err(Error::InvalidArgument(format!("phi_h needs even l >= 2, got {l}")));
    }
    let hi = f.effective_support.1;
    let r = integrate_complex(
        |x| {
            if x == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            Complex64::new(bessel_j_int(l - 1, x) * f.evaluate(x) / x, 0.0)
        },
        0.0,
        hi,
        1e-14,
        1e-13,
    );
    Ok(TransformValue { value: r.value.re, imag_residue: r.value.im, quad_error: r.error, note: None })
}

fn phi_plus_raw(f: &TestFunction, t: f64) -> Result<(Complex64, f64)> {
    let hi = f.effective_support.1;
    if hi > 50.0 {
        return Err(Error::BesselRange(format!(
            "{} needs x up to {hi}, beyond the imaginary-order Bessel range",
            f.name
        )));
    }
    let mut err = None;
    let r = integrate_complex(
        |x| {
            if x < 1e-3 {
                return Complex64::new(0.0, 0.0);
            }
            match (bessel_j_imag(t, x), bessel_j_imag(-t, x)) {
                (Ok(a), Ok(b)) => (a - b) * (f.evaluate(x) / x),
                (Err(e), _) | (_, Err(e)) => {
                    err = Some(e);
                    Complex64::new(0.0, 0.0)
                }
            }
        },
        0.0,
        hi,
        1e-14,
        1e-13,
    );
    if let Some(e) = err {
        return Err(e);
    }
    let pre = Complex64::new(0.0, 1.0) / (2.0 * (PI * t).sinh());
    Ok((pre * r.value, r.error / (2.0 * (PI * t).sinh().abs())))
}

/// Below this |t| the removable singularity is handled by extrapolation.
const PHI_PLUS_SMALL_T: f64 = 1e-3;

/// phi_plus(t) = (i / 2 sinh pi t) integral of (J_{2it} - J_{-2it})(x) phi(x) dx / x.
pub fn phi_plus(f: &TestFunction, t: f64) -> Result<TransformValue> {
    if t.abs() > 20.0 {
        return Err(Error::BesselRange(format!("phi_plus needs |t| <= 20, got {t}")));
    }
    if t.abs() >= PHI_PLUS_SMALL_T {
        let (v, e) = phi_plus_raw(f, t)?;
        return Ok(TransformValue { value: v.re, imag_residue: v.im, quad_error: e, note: None });
    }
    // even in t: one Richardson step on h^2 removes the leading error
    let h = 1e-2;
    let (a, ea) = phi_plus_raw(f, h)?;
    let (b, eb) = phi_plus_raw(f, h / 2.0)?;
    let v = (4.0 * b - a) / 3.0;
    Ok(TransformValue {
        value: v.re,
        imag_residue: v.im,
        quad_error: ea + eb,
        note: Some("small |t| evaluated by Richardson extrapolation from t = 1e-2, 5e-3"),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct PhiTransformParams {
    pub testfn: TestFunction,
    pub weight: u32,
    pub s: Complex64,
    /// Fixes the abscissa instead of choosing it per argument.
    pub xi: Option<f64>,
}

impl PhiTransformParams {
    pub fn new(testfn: TestFunction, s: Complex64) -> Self {
        Self { testfn, weight: 12, s, xi: None }
    }

    /// Open interval of abscissas free of poles: the Mellin strip on the left and the
    /// first numerator pole Re u = k + 1 - 2 sigma on the right.
    pub fn pole_window(&self) -> Result<(f64, f64)> {
        let lo = self.testfn.mellin_strip.0;
        let hi = (self.weight as f64 + 1.0 - 2.0 * self.s.re).min(self.testfn.mellin_strip.1);
        if !(hi > lo) {
            return Err(Error::NoAdmissibleContour { lo, hi });
        }
        Ok((lo, hi))
    }

    /// ln of phi~(u) 2^-u [Gamma((k+1)/2 - s - u/2) / Gamma((k-1)/2 + s + u/2)]^2.
    fn ln_integrand_weight(&self, u: Complex64) -> Result<Complex64> {
        let k = self.weight as f64;
        let num = ln_gamma((k + 1.0) / 2.0 - self.s - u / 2.0)?;
        let den = ln_gamma((k - 1.0) / 2.0 + self.s + u / 2.0)?;
        let m = mellin(&self.testfn, u)?;
        Ok(m.ln() - u * std::f64::consts::LN_2 + 2.0 * (num - den))
    }

    /// The Mellin-Barnes integrand at u for argument x.
    pub fn integrand(&self, u: Complex64, x: f64) -> Result<Complex64> {
        let e = u + 4.0 * self.s - 2.0;
        Ok((self.ln_integrand_weight(u)? + e * (0.5 * x).ln()).exp())
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhiCapValue {
    pub re: f64,
    pub im: f64,
    pub xi: f64,
    pub tail_estimate: f64,
    /// Sum of absolute values of the quadrature terms; rounding error is about eps times this.
    pub l1: f64,
}

impl PhiCapValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Precomputed trapezoid weights on one vertical line.
#[derive(Debug, Clone)]
struct LineKernel {
    xi: f64,
    step: f64,
    k_min: i64,
    /// w_k = (h / 2 pi) phi~(u_k) 2^-u_k G(u_k)^2 for k = k_min, k_min + 1, ...
    weights: Vec<Complex64>,
    abs_sum: f64,
    edge: f64,
}

/// Relative magnitude below which trapezoid nodes are discarded.
const NODE_CUTOFF: f64 = 1e-19;
const MAX_HEIGHT: f64 = 4000.0;

impl LineKernel {
    fn new(p: &PhiTransformParams, xi: f64, step: f64) -> Result<Self> {
        let w_at = |k: i64| -> Result<Complex64> {
            let u = Complex64::new(xi, k as f64 * step);
            Ok((p.ln_integrand_weight(u)?).exp() * (step / (2.0 * PI)))
        };
        let mut pos = vec![w_at(0)?];
        let mut neg = Vec::new();
        let mut peak = pos[0].norm();
        let mut k = 1i64;
        loop {
            let a = w_at(k)?;
            let b = w_at(-k)?;
            peak = peak.max(a.norm()).max(b.norm());
            pos.push(a);
            neg.push(b);
            if k as f64 * step > 10.0 && a.norm().max(b.norm()) < NODE_CUTOFF * peak {
                break;
            }
            if k as f64 * step > MAX_HEIGHT {
                return Err(Error::ContourTail { last: a.norm().max(b.norm()) / peak, height: MAX_HEIGHT });
            }
            k += 1;
        }
        let edge = pos.last().unwrap().norm().max(neg.last().unwrap().norm());
        let k_min = -(neg.len() as i64);
        let mut weights: Vec<Complex64> = neg.into_iter().rev().collect();
        weights.extend(pos);
        let abs_sum = weights.iter().map(|w| w.norm()).sum();
        Ok(Self { xi, step, k_min, weights, abs_sum, edge })
    }

    /// Sum_k w_k (x/2)^(u_k + 4s - 2).
    fn eval(&self, s: Complex64, x: f64) -> PhiCapValue {
        let l = (0.5 * x).ln();
        let base = ((self.xi + 4.0 * s - 2.0) * l).exp();
        let rot = Complex64::from_polar(1.0, self.step * l);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut z = Complex64::new(0.0, 0.0);
        for (j, w) in self.weights.iter().enumerate() {
            // reseed the rotation periodically so rounding drift stays at a few ulps
            if j % 64 == 0 {
                z = Complex64::from_polar(1.0, (self.k_min + j as i64) as f64 * self.step * l);
            } else {
                z *= rot;
            }
            acc += w * z;
        }
        let v = acc * base;
        PhiCapValue {
            re: v.re,
            im: v.im,
            xi: self.xi,
            tail_estimate: 10.0 * self.edge * base.norm(),
            l1: self.abs_sum * base.norm(),
        }
    }
}

/// Evaluates Phi at arbitrary x, selecting for each x the abscissa whose trapezoid sum has
/// the smallest L1 norm among a ladder of pole-free candidates.
#[derive(Debug, Clone)]
pub struct PhiKernel {
    params: PhiTransformParams,
    lines: Vec<LineKernel>,
}

impl PhiKernel {
    /// `ln_x_max` bounds ln(x/2) over the arguments this kernel will see; it sizes the step.
    pub fn new(params: PhiTransformParams, ln_x_max: f64) -> Result<Self> {
        let (lo, hi) = params.pole_window()?;
        let candidates: Vec<f64> = match params.xi {
            Some(xi) => {
                if !(xi > lo && xi < hi) {
                    return Err(Error::NoAdmissibleContour { lo, hi });
                }
                vec![xi]
            }
            None => {
                let mut v = Vec::new();
                let mut xi = (hi - 2.0).min(8.0).max(0.5 * (lo + hi));
                while xi > lo + 0.99 {
                    v.push(xi);
                    xi -= 2.0;
                }
                if v.is_empty() {
                    v.push(0.5 * (lo + hi));
                }
                v
            }
        };
        let lines = candidates
            .iter()
            .map(|&xi| {
                let d = (xi - lo).min(hi - xi).min(2.0);
                let step = (2.0 * PI * d / (40.0 + d * ln_x_max.abs())).min(0.2);
                LineKernel::new(&params, xi, step)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { params, lines })
    }

    pub fn params(&self) -> &PhiTransformParams {
        &self.params
    }

    pub fn eval(&self, x: f64) -> PhiCapValue {
        let l = (0.5 * x).ln();
        let best = self
            .lines
            .iter()
            .min_by(|a, b| {
                let ca = a.abs_sum.ln() + a.xi * l;
                let cb = b.abs_sum.ln() + b.xi * l;
                ca.partial_cmp(&cb).unwrap()
            })
            .unwrap();
        best.eval(self.params.s, x)
    }

    pub fn abscissas(&self) -> Vec<f64> {
        self.lines.iter().map(|l| l.xi).collect()
    }
}

/// Phi(x) for a single argument.
pub fn phi_cap(params: &PhiTransformParams, x: f64) -> Result<PhiCapValue> {
    if !(x > 0.0) {
        return Err(Error::InvalidArgument(format!("Phi needs x > 0, got {x}")));
    }
    let kernel = PhiKernel::new(*params, (0.5 * x).ln().abs().max(1.0))?;
    Ok(kernel.eval(x))
}

/// Phi(x) on one explicit line through the generic vertical-line integrator.
pub fn phi_cap_on_line(params: &PhiTransformParams, x: f64, xi: f64, half_height: f64, step: f64) -> Result<PhiCapValue> {
    let (lo, hi) = params.pole_window()?;
    if !(xi > lo && xi < hi) {
        return Err(Error::NoAdmissibleContour { lo, hi });
    }
    let mut err = None;
    let mut abs_sum = 0.0;
    let r = vertical_line_integral(
        |u| match params.integrand(u, x) {
            Ok(v) => {
                abs_sum += v.norm();
                v
            }
            Err(e) => {
                err = Some(e);
                Complex64::new(0.0, 0.0)
            }
        },
        ContourSpec::new(xi, half_height, step),
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(PhiCapValue { re: r.value.re, im: r.value.im, xi, tail_estimate: r.spec.tail_estimate, l1: abs_sum * step / (2.0 * PI) })
}

/// Phi tabulated on a geometric grid, read back by 4-point Lagrange interpolation in ln x.
#[derive(Debug, Clone)]
pub struct PhiCache {
    pub s: Complex64,
    ln_lo: f64,
    dl: f64,
    values: Vec<Complex64>,
    /// Abscissa used at each tabulated node.
    pub xi_at_node: Vec<f64>,
    pub x_lo: f64,
    pub x_hi: f64,
}

impl PhiCache {
    pub const DEFAULT_LOG_STEP: f64 = 1e-3;

    pub fn build(params: PhiTransformParams, x_lo: f64, x_hi: f64, dl: f64) -> Result<Self> {
        if !(x_lo > 0.0 && x_hi > x_lo) {
            return Err(Error::InvalidArgument(format!("bad Phi cache range [{x_lo}, {x_hi}]")));
        }
        let kernel = PhiKernel::new(params, (0.5 * x_hi).ln().abs().max((0.5 * x_lo).ln().abs()).max(1.0))?;
        let ln_lo = x_lo.ln() - 2.0 * dl;
        let n = ((x_hi.ln() - ln_lo) / dl).ceil() as usize + 3;
        let mut values = Vec::with_capacity(n);
        let mut xi_at_node = Vec::with_capacity(n);
        for i in 0..n {
            let v = kernel.eval((ln_lo + i as f64 * dl).exp());
            values.push(v.value());
            xi_at_node.push(v.xi);
        }
        Ok(Self { s: params.s, ln_lo, dl, values, xi_at_node, x_lo, x_hi })
    }

    #[inline]
    pub fn eval(&self, x: f64) -> Complex64 {
        let pos = (x.ln() - self.ln_lo) / self.dl;
        let i = (pos.floor() as isize).clamp(1, self.values.len() as isize - 3) as usize;
        let t = pos - i as f64;
        // Lagrange weights on nodes i-1, i, i+1, i+2
        let w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
        let w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        let w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
        let w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
        let v = &self.values;
        v[i - 1] * w0 + v[i] * w1 + v[i + 1] * w2 + v[i + 2] * w3
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Distinct abscissas used across the grid, in ascending x order.
    pub fn contours_used(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for &xi in &self.xi_at_node {
            if out.last() != Some(&xi) {
                out.push(xi);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayFit {
    pub order: u32,
    pub exponent: f64,
    pub constant: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub pass: bool,
    pub value_at_zero: f64,
    pub fits: Vec<DecayFit>,
    /// Description of the first violated condition.
    pub failure: Option<String>,
}

/// Decay exponent the certification requires of f, f', f''.
pub const REQUIRED_DECAY: f64 = -2.1;
const CERT_RANGE: (f64, f64) = (0.0, 100.0);
const FIT_RANGE: (f64, f64) = (20.0, 100.0);

/// Numerically certifies f(0) = 0 and |f^(j)(x)| <= C (1 + x)^(-2-eps) for j = 0, 1, 2 on [0, 100].
///
/// `s_strip` is recorded by callers for provenance; the check itself is pointwise in x.
pub fn certify_admissible<F: Fn(f64) -> f64>(f: F, _s_strip: (f64, f64)) -> AdmissibilityReport {
    let n = 2000usize;
    let xs: Vec<f64> = (0..=n)
        .map(|i| CERT_RANGE.0 + (CERT_RANGE.1 - CERT_RANGE.0) * i as f64 / n as f64)
        .collect();
    let h = 1e-3;
    let vals: Vec<[f64; 3]> = xs
        .iter()
        .map(|&x| {
            let (xm, xp) = (if x - h < 0.0 { 0.0 } else { x - h }, x + h);
            let (fm, f0, fp) = (f(xm), f(x), f(xp));
            let d1 = (fp - fm) / (xp - xm);
            let d2 = if x - h < 0.0 {
                (f(x + 2.0 * h) - 2.0 * fp + f0) / (h * h)
            } else {
                (fp - 2.0 * f0 + fm) / (h * h)
            };
            [f0, d1, d2]
        })
        .collect();
    let scale = vals.iter().map(|v| v[0].abs()).fold(0.0, f64::max);
    let value_at_zero = vals[0][0];
    let mut failure = None;
    if !(value_at_zero.abs() <= 1e-8 * scale.max(1e-300)) || scale == 0.0 && value_at_zero != 0.0 {
        failure = Some(format!("f(0) = {value_at_zero:e} does not vanish"));
    }
    let mut fits = Vec::new();
    for order in 0..3u32 {
        let g: Vec<f64> = vals.iter().map(|v| v[order as usize].abs()).collect();
        // decreasing envelope sup_{y >= x} |g(y)| so oscillation does not bias the fit
        let mut env = vec![0.0; g.len()];
        let mut run = 0.0f64;
        for i in (0..g.len()).rev() {
            run = run.max(g[i]);
            env[i] = run;
        }
        let pts: Vec<(f64, f64)> = xs
            .iter()
            .zip(&env)
            .filter(|(&x, &e)| x >= FIT_RANGE.0 && x <= FIT_RANGE.1 && e > 0.0)
            .map(|(&x, &e)| ((1.0 + x).ln(), e.ln()))
            .collect();
        let exponent = if pts.len() < 2 {
            f64::NEG_INFINITY
        } else {
            let m = pts.len() as f64;
            let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
            let (mx, my) = (sx / m, sy / m);
            let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2)));
            sxy / sxx
        };
        let constant = xs
            .iter()
            .zip(&g)
            .map(|(&x, &v)| v * (1.0 + x).powf(-REQUIRED_DECAY))
            .fold(0.0, f64::max);
        if failure.is_none() && !(exponent <= REQUIRED_DECAY) {
            failure = Some(format!("derivative of order {order} decays like (1+x)^{exponent:.3}"));
        }
        if failure.is_none() && !constant.is_finite() {
            failure = Some(format!("derivative of order {order} is not finite on [0, 100]"));
        }
        fits.push(DecayFit { order, exponent, constant });
    }
    AdmissibilityReport { pass: failure.is_none(), value_at_zero, fits, failure }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::testfn::GAUSS13;

    fn params(s: f64) -> PhiTransformParams {
        PhiTransformParams::new(GAUSS13, Complex64::new(s, 0.0))
    }

    #[test]
    fn pole_window_at_default_point() {
        assert_eq!(params(1.5).pole_window().unwrap(), (-13.0, 10.0));
        assert!(matches!(params(13.5).pole_window(), Err(Error::NoAdmissibleContour { .. })));
    }

    #[test]
    fn kernel_matches_generic_line_integral() {
        let p = params(1.5);
        for x in [0.5, 5.0, 30.0, 400.0] {
            let a = phi_cap(&p, x).unwrap();
            let b = phi_cap_on_line(&p, x, a.xi, 400.0, 0.05).unwrap();
            assert!((a.value() - b.value()).norm() < 1e-9 * a.l1.max(b.value().norm()), "x={x}: {a:?} {b:?}");
        }
    }

    #[test]
    fn contour_independence_example() {
        let p = params(1.5);
        let a = phi_cap_on_line(&p, 5.0, 2.0, 300.0, 0.05).unwrap();
        let b = phi_cap_on_line(&p, 5.0, 6.0, 300.0, 0.05).unwrap();
        assert!((a.value() - b.value()).norm() < 1e-8 * a.value().norm());
    }

    #[test]
    fn real_for_real_s() {
        let v = phi_cap(&params(1.5), 12.0).unwrap();
        assert!(v.im.abs() < 1e-12 * v.re.abs());
    }

    #[test]
    fn cache_interpolates() {
        let p = params(1.5);
        let cache = PhiCache::build(p, 0.3, 200.0, PhiCache::DEFAULT_LOG_STEP).unwrap();
        let kernel = PhiKernel::new(p, 5.0).unwrap();
        for x in [0.4123, 3.3, 17.77, 88.1, 199.0] {
            let a = cache.eval(x);
            let b = kernel.eval(x).value();
            assert!((a - b).norm() < 1e-7 * b.norm().max(1e-6), "x={x}: {a} {b}");
        }
    }

    #[test]
    fn phi_h_and_plus_are_real() {
        let v = phi_h(&GAUSS13, 2).unwrap();
        assert_eq!(v.imag_residue, 0.0);
        let w = phi_plus(&GAUSS13, 1.0).unwrap();
        assert!(w.imag_residue.abs() < 1e-10);
        let w0 = phi_plus(&GAUSS13, 0.0).unwrap();
        assert!(w0.note.is_some() && w0.value.is_finite());
    }

    #[test]
    fn certification_controls() {
        assert!(certify_admissible(|x| GAUSS13.evaluate(x), (0.5, 1.3)).pass);
        let r = certify_admissible(|_| 1.0, (0.5, 1.3));
        assert!(!r.pass && r.failure.unwrap().contains("f(0)"));
    }
}
