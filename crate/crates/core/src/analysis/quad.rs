//! Adaptive Gauss-Kronrod (7, 15) quadrature.

use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_870_0,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(mid);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = half * XGK[j];
        let s = f(mid - x) + f(mid + x);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    (k * half, ((k - g) * half).norm())
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
}

/// Maximum number of subintervals kept by the global adaptive scheme.
pub const MAX_INTERVALS: usize = 2000;

/// Integrates a complex-valued f over [a, b] until the estimated error is below
/// max(abs_tol, rel_tol |I|), bisecting the worst subinterval each step.
pub fn integrate_complex<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> QuadResult {
    let (v, e) = kronrod(&mut f, a, b);
    let mut parts = vec![(a, b, v, e)];
    let mut total_err = e;
    let mut total = v;
    while parts.len() < MAX_INTERVALS {
        if total_err <= abs_tol.max(rel_tol * total.norm()) {
            break;
        }
        let (i, _) = parts
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, p)| if p.3 > best.1 { (i, p.3) } else { best });
        let (lo, hi, v0, e0) = parts[i];
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (vl, el) = kronrod(&mut f, lo, mid);
        let (vr, er) = kronrod(&mut f, mid, hi);
        total += vl + vr - v0;
        total_err += el + er - e0;
        parts[i] = (lo, mid, vl, el);
        parts.push((mid, hi, vr, er));
    }
    // final sum in left-to-right order for reproducibility
    parts.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    for (_, _, v, e) in parts {
        value += v;
        error += e;
    }
    QuadResult { value, error }
}

pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> (f64, f64) {
    let r = integrate_complex(|x| Complex64::new(f(x), 0.0), a, b, abs_tol, rel_tol);
    (r.value.re, r.error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_and_peaks() {
        let (v, _) = integrate(|x| x.powi(5), 0.0, 2.0, 1e-14, 0.0);
        assert!((v - 64.0 / 6.0).abs() < 1e-12);
        let (v, _) = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12, 1e-14);
        let want = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((v / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_complex() {
        let r = integrate_complex(|x| Complex64::new(0.0, 40.0 * x).exp(), 0.0, 1.0, 1e-14, 0.0);
        let want = (Complex64::new(0.0, 40.0).exp() - 1.0) / Complex64::new(0.0, 40.0);
        assert!((r.value - want).norm() < 1e-13);
    }
}
