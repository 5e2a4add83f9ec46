//! The named aggregates: S(p,q;s,W), K(m,n,N;W) and the spectral-moment proxies.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::aggregate::{aggregate, AggregateValue, Lattice, Stratum};
use super::policy::{SpectralPoint, TailReport, TruncationPolicy};
use super::weight::Weight;
use crate::analysis::zeta_restricted;
use crate::arith::{gcd, is_prime};
use crate::error::{Error, Result};
use crate::exp_sums::{kloosterman_cusp_pair, weil_bound};
use crate::summation::ComplexKahan;

/// Distinct primes p, q.
pub fn check_pair(p: u64, q: u64) -> Result<()> {
    if p == q {
        return Err(Error::EqualPrimes(p));
    }
    for r in [p, q] {
        if !is_prime(r) {
            return Err(Error::NotPrime(r));
        }
    }
    Ok(())
}

/// S(p,q;s,W): the sum over m, n of lambda(m) lambda(n) (mn)^-s and over (c,pq) = 1 of
/// S(m qbar, n p; c)/(c sqrt q) W(4 pi sqrt(mnp)/(c sqrt q)).
pub fn s_sum(p: u64, q: u64, s: SpectralPoint, weight: &dyn Weight, policy: &TruncationPolicy) -> Result<AggregateValue> {
    check_pair(p, q)?;
    aggregate(Lattice { level: q, twist: p, coprime_to: p * q }, s.s, weight, policy)
}

/// zeta_N(2s)^2 times the sum over m, n of lambda(m) lambda(n) (mn)^-s K(m, p_twist n, N; W).
pub fn moment_proxy(p_twist: u64, level: u64, s: SpectralPoint, weight: &dyn Weight, policy: &TruncationPolicy) -> Result<AggregateValue> {
    if p_twist == 0 || level == 0 {
        return Err(Error::InvalidArgument("twist and level must be positive".into()));
    }
    let z = zeta_restricted(2.0 * s.s, level)?;
    let raw = aggregate(Lattice { level, twist: p_twist, coprime_to: level }, s.s, weight, policy)?;
    Ok(raw.scaled(z * z))
}

/// Strata beyond c_max are summed against the Weil bound until they are this small relative to the total.
const K_TAIL_REL: f64 = 1e-17;
const K_TAIL_SPAN: u64 = 64;

/// K(m,n,N;W) = sum over (c,N) = 1 of S(Nbar m, n; c)/(c sqrt N) W(4 pi sqrt(mn)/(c sqrt N)).
pub fn k_sum(m: u64, n: u64, level: u64, weight: &dyn Weight, policy: &TruncationPolicy) -> Result<AggregateValue> {
    if m == 0 || n == 0 || level == 0 {
        return Err(Error::InvalidArgument("m, n and N must be positive".into()));
    }
    let (x_lo, x_hi) = policy.window.unwrap_or_else(|| weight.support());
    let root_n = (level as f64).sqrt();
    let arg = |c: u64| 4.0 * PI * ((m * n) as f64).sqrt() / (c as f64 * root_n);
    let envelope = |c: u64| weil_bound(m as i64, n as i64, c) * weight.eval(arg(c)).norm() / (c as f64 * root_n);

    let mut acc = ComplexKahan::new();
    let mut budget = TailReport::default();
    let mut strata = Vec::new();
    let mut c_resolved = 0;
    for c in (1..=policy.c_max).filter(|&c| gcd(c, level) == 1) {
        let x = arg(c);
        let mut st = Stratum { c, value: Complex64::new(0.0, 0.0), terms: 0, resolved: true, window_tail: 0.0, dirichlet_tail: 0.0 };
        if x >= x_lo && x <= x_hi {
            let k = kloosterman_cusp_pair(m as i64, n as i64, c, level)?;
            st.value = weight.eval(x) * (k / (c as f64 * root_n));
            st.terms = 1;
            c_resolved = c;
            acc.add(st.value);
        } else {
            st.window_tail = envelope(c);
            budget.window_tail += st.window_tail;
        }
        strata.push(st);
    }
    let value = acc.value();
    for c in (policy.c_max + 1..=K_TAIL_SPAN * policy.c_max.max(16)).filter(|&c| gcd(c, level) == 1) {
        let e = envelope(c);
        budget.c_tail += e;
        if e * (c as f64) < K_TAIL_REL * value.norm().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok(AggregateValue { value, budget, c_resolved, decay_exponent: f64::NAN, strata })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::GAUSS13;
    use crate::coeffs::lambda_table;

    fn sp(re: f64) -> SpectralPoint {
        SpectralPoint::new(Complex64::new(re, 0.0)).unwrap()
    }

    #[test]
    fn pair_validation() {
        let pol = TruncationPolicy::default();
        assert_eq!(s_sum(3, 3, sp(1.5), &GAUSS13, &pol).unwrap_err(), Error::EqualPrimes(3));
        assert_eq!(s_sum(4, 3, sp(1.5), &GAUSS13, &pol).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn empty_window_gives_zero_with_the_full_mass_as_budget() {
        let pol = TruncationPolicy { c_max: 50, window: Some((1e-9, 2e-9)), ..Default::default() };
        let v = s_sum(2, 3, sp(1.5), &GAUSS13, &pol).unwrap();
        assert_eq!(v.value, Complex64::new(0.0, 0.0));
        assert!(v.budget.window_tail > 0.0);
        let k = k_sum(1, 1, 5, &GAUSS13, &pol).unwrap();
        assert_eq!(k.value, Complex64::new(0.0, 0.0));
        assert!(k.budget.window_tail > 0.0);
    }

    #[test]
    fn k_sum_is_stable_under_doubling_c_max() {
        let pol = TruncationPolicy::default();
        let a = k_sum(1, 1, 5, &GAUSS13, &pol).unwrap();
        let b = k_sum(1, 1, 5, &GAUSS13, &pol.doubled()).unwrap();
        assert!((a.value - b.value).norm() <= 1e-8 * a.value.norm());
        assert!((a.value - b.value).norm() <= a.budget.total() + 1e-300);
    }

    #[test]
    fn k_sum_matches_a_slice_of_the_aggregate() {
        // with c <= 8 and a window, the aggregate at level 5 and twist 1 is a finite sum over m n
        let pol = TruncationPolicy { c_max: 8, window: Some((0.5, 6.0)), ..Default::default() };
        let s = sp(1.5);
        let agg = aggregate(Lattice { level: 5, twist: 1, coprime_to: 5 }, s.s, &GAUSS13, &pol).unwrap();
        let k_max = ((6.0 * 8.0 * 5f64.sqrt()) / (4.0 * PI)).powi(2) as u64;
        let lam = lambda_table(k_max as usize + 1).unwrap();
        let mut direct = Complex64::new(0.0, 0.0);
        for m in 1..=k_max {
            for n in 1..=k_max / m {
                let k = k_sum(m, n, 5, &GAUSS13, &pol).unwrap();
                direct += k.value * lam[m as usize] * lam[n as usize] * ((m * n) as f64).powf(-1.5);
            }
        }
        assert!((agg.value - direct).norm() <= 1e-11 * direct.norm(), "{} vs {}", agg.value, direct);
    }

    #[test]
    fn proxy_carries_the_zeta_factor() {
        let pol = TruncationPolicy { c_max: 60, ..Default::default() };
        let s = sp(1.5);
        let raw = aggregate(Lattice { level: 5, twist: 1, coprime_to: 5 }, s.s, &GAUSS13, &pol).unwrap();
        let z = zeta_restricted(Complex64::new(3.0, 0.0), 5).unwrap();
        let v = moment_proxy(1, 5, s, &GAUSS13, &pol).unwrap();
        assert!((v.value - raw.value * z * z).norm() < 1e-14 * v.value.norm());
        assert!(v.value.norm().is_finite() && v.budget.total().is_finite());
    }
}
