//! Bessel functions of the first kind: integer order and purely imaginary order.

use num_complex::Complex64;

use super::gamma::gamma;
use crate::error::{Error, Result};

/// Ascending series for J_l(x).
fn j_int_series(l: u32, x: f64) -> f64 {
    let h = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=l {
        term *= h / k as f64;
    }
    let q = -h * h;
    let mut sum = term;
    let mut k = 0u32;
    loop {
        k += 1;
        term *= q / (k as f64 * (k + l) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) && k as f64 > h {
            break;
        }
        if k > 500 {
            break;
        }
    }
    sum
}

/// Miller's backward recurrence normalised by J_0 + 2 sum J_2k = 1.
fn j_int_miller(l: u32, x: f64) -> f64 {
    let top = l.max(x as u32) as f64 + 20.0 + 12.0 * x.cbrt();
    let mut n = top as u32;
    n += n % 2;
    let (mut jp1, mut j) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    let mut want = 0.0;
    for k in (1..=n).rev() {
        let jm1 = 2.0 * k as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        let idx = k - 1;
        if idx == l {
            want = j;
        }
        if idx > 0 && idx % 2 == 0 {
            norm += 2.0 * j;
        }
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            want *= 1e-250;
        }
    }
    norm += j;
    want / norm
}

/// J_l(x) for integer l >= 0 and 0 <= x <= 1e4.
pub fn bessel_j_int(l: u32, x: f64) -> f64 {
    assert!(x >= 0.0, "x must be nonnegative");
    if x == 0.0 {
        return if l == 0 { 1.0 } else { 0.0 };
    }
    if x <= 8.0 || (l as f64) > 2.0 * x {
        j_int_series(l, x)
    } else {
        j_int_miller(l, x)
    }
}

/// Series for J_nu(x) normalised so the prefactor (x/2)^nu / Gamma(nu+1) is separate.
fn j_complex_series_core(nu: Complex64, x: f64, terms: usize) -> Complex64 {
    let q = -0.25 * x * x;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..terms {
        term *= q / (k as f64 * (nu + k as f64));
        sum += term;
    }
    sum
}

fn series_terms(x: f64) -> usize {
    // the terms (x^2/4)^k / k!^2 fall below 1e-18 of the peak well before this
    (2.0 * x + 30.0) as usize
}

/// Miller recurrence for complex order nu, normalised by
/// (x/2)^nu = sum_k (nu + 2k) Gamma(nu + k) / k! J_{nu+2k}(x).
fn j_complex_miller(nu: Complex64, x: f64) -> Result<Complex64> {
    let n = ((x + 30.0 + 12.0 * x.cbrt()) as usize) | 1;
    let n = n + 1;
    let (mut fp1, mut f) = (Complex64::new(0.0, 0.0), Complex64::new(1e-250, 0.0));
    // weights relative to Gamma(nu + 1): w_0 = 1, w_k = (nu + 2k) (nu+1)_{k-1} / k!
    let mut w = vec![Complex64::new(1.0, 0.0); n / 2 + 1];
    for k in 1..w.len() {
        let mut r = Complex64::new(1.0, 0.0);
        for j in 1..k {
            r *= (nu + j as f64) / j as f64;
        }
        w[k] = (nu + 2.0 * k as f64) * r / k as f64;
    }
    let mut norm = Complex64::new(0.0, 0.0);
    for k in (1..=n).rev() {
        let fm1 = 2.0 * (nu + k as f64) / x * f - fp1;
        fp1 = f;
        f = fm1;
        let idx = k - 1;
        if idx % 2 == 0 && idx > 0 {
            norm += w[idx / 2] * f;
        }
        if f.norm() > 1e250 {
            f *= 1e-250;
            fp1 *= 1e-250;
            norm *= 1e-250;
        }
    }
    norm += f;
    // bring both to unit scale first: complex division squares the modulus
    let m = norm.norm();
    let (f, norm) = (f / m, norm / m);
    Ok(f / norm * (nu * (0.5 * x).ln()).exp() / gamma(nu + 1.0)?)
}

/// J_{2it}(x) for |t| <= 20 and 0 < x <= 50.
pub fn bessel_j_imag(t: f64, x: f64) -> Result<Complex64> {
    if !(t.abs() <= 20.0) || !(x > 0.0 && x <= 50.0) {
        return Err(Error::BesselRange(format!("t = {t}, x = {x} (need |t| <= 20, 0 < x <= 50)")));
    }
    let nu = Complex64::new(0.0, 2.0 * t);
    if x <= 10.0 {
        let pre = (nu * (0.5 * x).ln()).exp() / gamma(nu + 1.0)?;
        Ok(pre * j_complex_series_core(nu, x, series_terms(x)))
    } else {
        j_complex_miller(nu, x)
    }
}
