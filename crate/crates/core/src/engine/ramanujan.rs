//! sum over (c,q) = 1 of S(0,n;c) c^-2u, against its Euler product.

use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::zeta;
use crate::arith::{factorize, gcd, is_prime};
use crate::error::{Error, Result};
use crate::exp_sums::ramanujan_sum;
use crate::summation::ComplexKahan;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RamanujanSeries {
    /// The partial sum over c <= C.
    pub value: Complex64,
    /// Bound on the omitted c > C.
    pub tail_bound: f64,
    /// The full series in closed form: the local factors at primes dividing n,
    /// times 1/zeta(2u) with the factor at q removed.
    pub closed_form: Complex64,
}

/// Local factor at l of sum over k of c_(l^k)(n) l^(-kw), where l^a exactly divides n.
fn local_factor(l: u64, a: u32, w: Complex64) -> Complex64 {
    let lf = l as f64;
    let pw = |k: u32| (-w * (k as f64 * lf.ln())).exp();
    let mut f = Complex64::new(1.0, 0.0);
    for k in 1..=a {
        f += (lf.powi(k as i32) - lf.powi(k as i32 - 1)) * pw(k);
    }
    f - lf.powi(a as i32) * pw(a + 1)
}

pub fn ramanujan_dirichlet_series(n: u64, q: u64, u: Complex64, c_cut: u64) -> Result<RamanujanSeries> {
    if u.re <= 1.0 {
        return Err(Error::SeriesDiverges(u.re));
    }
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if n == 0 || c_cut == 0 {
        return Err(Error::InvalidArgument("n and C must be positive".into()));
    }
    let w = 2.0 * u;
    let mut acc = ComplexKahan::new();
    for c in (1..=c_cut).filter(|&c| gcd(c, q) == 1) {
        let r = ramanujan_sum(n as i64, c);
        if r != 0 {
            acc.add(r as f64 * (-w * (c as f64).ln()).exp());
        }
    }
    // |c_c(n)| <= sigma(n), and the sum of c^-2sigma over c > C is below C^(1-2sigma)/(2sigma-1)
    let sigma_n: u64 = crate::arith::divisors(n).iter().sum();
    let tail_bound = sigma_n as f64 * (c_cut as f64).powf(1.0 - w.re) / (w.re - 1.0);

    let mut closed = 1.0 / zeta(w)? / (1.0 - (-w * (q as f64).ln()).exp());
    for (l, a) in factorize(n) {
        if l != q {
            closed *= local_factor(l, a, w) / (1.0 - (-w * (l as f64).ln()).exp());
        }
    }
    Ok(RamanujanSeries { value: acc.value(), tail_bound, closed_form: closed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_one_gives_the_inverse_restricted_zeta() {
        let r = ramanujan_dirichlet_series(1, 3, Complex64::new(2.0, 0.0), 20_000).unwrap();
        let z = crate::analysis::zeta_restricted(Complex64::new(4.0, 0.0), 3).unwrap();
        assert!((r.value - 1.0 / z).norm() < 1e-8);
        assert!((r.closed_form - 1.0 / z).norm() < 1e-14);
        assert!((r.value - r.closed_form).norm() <= r.tail_bound);
    }

    #[test]
    fn divergent_half_plane_is_rejected() {
        assert_eq!(ramanujan_dirichlet_series(1, 3, Complex64::new(1.0, 2.0), 10).unwrap_err(), Error::SeriesDiverges(1.0));
    }

    #[test]
    fn closed_form_matches_partial_sums_for_composite_n() {
        for n in [12u64, 45, 98, 360] {
            let r = ramanujan_dirichlet_series(n, 5, Complex64::new(1.7, 0.4), 50_000).unwrap();
            assert!((r.value - r.closed_form).norm() <= r.tail_bound, "n = {n}");
            assert!((r.value - r.closed_form).norm() < 1e-5, "n = {n}");
        }
    }
}
