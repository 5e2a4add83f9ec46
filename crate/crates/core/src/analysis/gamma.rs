//! Complex Gamma via a 14-term Lanczos series (g = 671/128) with reflection.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_2PI_SCALED: f64 = 2.506_628_274_631_000_5;
const LN_PI: f64 = 1.144_729_885_849_400_2;

fn ln_gamma_right(z: Complex64) -> Complex64 {
    let tmp = z + 5.242_187_5;
    let head = (z + 0.5) * tmp.ln() - tmp;
    let mut ser = Complex64::new(0.999_999_999_999_997_092, 0.0);
    let mut y = z;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    head + (SQRT_2PI_SCALED * ser / z).ln()
}

/// ln sin(pi z), accurate for large |Im z| where sin itself overflows.
pub(crate) fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() < 20.0 {
        return (z * PI).sin().ln();
    }
    if z.im < 0.0 {
        return ln_sin_pi(z.conj()).conj();
    }
    // sin(w) = (i/2) e^(-iw) (1 - e^(2iw)), and e^(2iw) is tiny for Im w > 0
    let i = Complex64::i();
    let w = z * PI;
    -i * w + (i * 0.5).ln() + (1.0 - (2.0 * i * w).exp()).ln()
}

fn nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// ln Gamma(z) up to an additive multiple of 2 pi i.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if nonpositive_integer(z) {
        return Err(Error::GammaPole(z.re));
    }
    if z.re >= 0.5 {
        Ok(ln_gamma_right(z))
    } else {
        Ok(LN_PI - ln_sin_pi(z) - ln_gamma_right(1.0 - z))
    }
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    if nonpositive_integer(z) {
        return Err(Error::GammaPole(z.re));
    }
    if z.re >= 0.5 {
        Ok(ln_gamma_right(z).exp())
    } else {
        let s = (z * PI).sin();
        if z.im.abs() < 20.0 {
            Ok(PI / (s * ln_gamma_right(1.0 - z).exp()))
        } else {
            Ok((LN_PI - ln_sin_pi(z) - ln_gamma_right(1.0 - z)).exp())
        }
    }
}

pub fn gamma_real(x: f64) -> Result<f64> {
    gamma(Complex64::new(x, 0.0)).map(|z| z.re)
}

/// Gamma(a) / Gamma(b) evaluated in log space.
pub fn gamma_ratio(a: Complex64, b: Complex64) -> Result<Complex64> {
    Ok((ln_gamma(a)? - ln_gamma(b)?).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn integers_and_half() {
        assert!((gamma_real(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma_real(5.0).unwrap() - 24.0).abs() < 1e-12);
        assert!((gamma_real(0.5).unwrap() - PI.sqrt()).abs() < 1e-14);
        assert!((gamma_real(-0.5).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!((gamma_real(14.0).unwrap() / 6_227_020_800.0 - 1.0).abs() < 1e-13);
        assert_eq!(gamma(c(-3.0, 0.0)).unwrap_err(), Error::GammaPole(-3.0));
        assert_eq!(gamma(c(0.0, 0.0)).unwrap_err(), Error::GammaPole(0.0));
    }

    #[test]
    fn modulus_on_critical_line() {
        // |Gamma(1/2 + it)|^2 = pi / cosh(pi t)
        for t in [0.3, 2.0, 15.0, 60.0] {
            let g = gamma(c(0.5, t)).unwrap();
            let want = PI / (PI * t).cosh();
            assert!((g.norm_sqr() / want - 1.0).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn large_imaginary_reflection_is_finite() {
        let z = c(-7.3, 150.0);
        let g = gamma(z).unwrap();
        let rec = gamma(z + 1.0).unwrap();
        assert!(g.norm().is_finite() && g.norm() > 0.0);
        assert!((rec / (z * g) - 1.0).norm() < 1e-11);
    }
}
