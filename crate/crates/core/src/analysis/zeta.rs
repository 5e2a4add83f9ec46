//! Riemann zeta with finitely many Euler factors removed.

use num_complex::Complex64;

use crate::arith::factorize;
use crate::error::{Error, Result};

/// Borwein's acceleration of the alternating eta series.
fn eta_borwein(s: Complex64, n: usize) -> Complex64 {
    // d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0 / n as f64;
    let mut acc = 0.0;
    for i in 0..=n {
        if i > 0 {
            let i_f = i as f64;
            term *= 4.0 * (n as f64 + i_f - 1.0) * (n as f64 - i_f + 1.0) / ((2.0 * i_f - 1.0) * 2.0 * i_f);
        }
        acc += term;
        d.push(n as f64 * acc);
    }
    let dn = d[n];
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (dn - d[k]) * (-s * ((k + 1) as f64).ln()).exp();
    }
    sum / dn
}

const BERNOULLI_2J: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Euler-Maclaurin, used where 1 - 2^(1-s) degenerates on the line Re s = 1.
fn zeta_euler_maclaurin(s: Complex64) -> Complex64 {
    let n = 30usize;
    let nf = n as f64;
    let mut sum: Complex64 = (1..n).map(|k| (-s * (k as f64).ln()).exp()).sum();
    let n_s = (-s * nf.ln()).exp();
    sum += n_s * nf / (s - 1.0) + 0.5 * n_s;
    let mut rising = s;
    let mut pow = n_s / nf;
    let mut fact = 2.0;
    for (j, &b) in BERNOULLI_2J.iter().enumerate() {
        sum += b / fact * rising * pow;
        let k = 2.0 * j as f64;
        rising *= (s + k + 1.0) * (s + k + 2.0);
        pow /= nf * nf;
        fact *= (k + 3.0) * (k + 4.0);
    }
    sum
}

pub fn zeta(s: Complex64) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::ZetaPole);
    }
    if s.re < 0.0 {
        return Err(Error::InvalidArgument(format!("zeta needs Re(s) >= 0, got {s}")));
    }
    let factor = 1.0 - (Complex64::new((1.0 - s.re) * std::f64::consts::LN_2, -s.im * std::f64::consts::LN_2)).exp();
    if factor.norm() < 1e-3 {
        return Ok(zeta_euler_maclaurin(s));
    }
    let n = 40 + (1.2 * s.im.abs()).ceil() as usize;
    Ok(eta_borwein(s, n.min(400)) / factor)
}

/// zeta(s) prod_{p | N} (1 - p^-s).
pub fn zeta_restricted(s: Complex64, level: u64) -> Result<Complex64> {
    let mut z = zeta(s)?;
    for (p, _) in factorize(level) {
        z *= 1.0 - (-s * (p as f64).ln()).exp();
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classical_values() {
        assert!((zeta(c(2.0, 0.0)).unwrap().re - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta(c(4.0, 0.0)).unwrap().re - PI.powi(4) / 90.0).abs() < 1e-14);
        assert!((zeta(c(0.5, 0.0)).unwrap().re + 1.460_354_508_809_586_8).abs() < 1e-13);
        assert!((zeta_restricted(c(2.0, 0.0), 6).unwrap().re - PI * PI / 9.0).abs() < 1e-14);
        assert_eq!(zeta(c(1.0, 0.0)).unwrap_err(), Error::ZetaPole);
    }

    #[test]
    fn first_zero_and_line_one() {
        let z = zeta(c(0.5, 14.134_725_141_734_693)).unwrap();
        assert!(z.norm() < 1e-12);
        // 1 - 2^(1-s) vanishes at s = 1 + 2 pi i / ln 2; both evaluators must agree nearby
        let s = c(1.0, 2.0 * PI / std::f64::consts::LN_2 + 0.01);
        let a = zeta_euler_maclaurin(s);
        let b = eta_borwein(s, 60) / (1.0 - (c(0.0, -s.im * std::f64::consts::LN_2)).exp());
        assert!((a - b).norm() < 1e-9);
    }

    #[test]
    fn euler_maclaurin_against_borwein() {
        for s in [c(3.0, 1.0), c(0.7, -5.0), c(2.5, 20.0)] {
            let a = zeta_euler_maclaurin(s);
            let b = zeta(s).unwrap();
            assert!((a - b).norm() < 1e-12 * b.norm().max(1.0), "s={s}");
        }
    }
}
