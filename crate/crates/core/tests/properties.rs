use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use recip_core::analysis::{gamma, EXP13, GAUSS13};
use recip_core::arith::gcd;
use recip_core::coeffs::divisor_tau;
use recip_core::engine::{k_sum, ramanujan_dirichlet_series, Combination, Params, TruncationPolicy, VerificationReport, Weight};
use recip_core::exp_sums::{check_crt_multiplicativity, kloosterman, weil_bound, KloostermanTable};

fn small_policy() -> TruncationPolicy {
    TruncationPolicy { c_max: 24, mn_cap: 20_000, ..Default::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kloosterman_symmetry_periodicity_and_weil(m in -500i64..500, n in -500i64..500, c in 1u64..400) {
        let s = kloosterman(m, n, c);
        prop_assert!((s - kloosterman(n, m, c)).abs() < 1e-9);
        prop_assert!((s - kloosterman(m + c as i64, n - 3 * c as i64, c)).abs() < 1e-9);
        prop_assert!(s.abs() <= weil_bound(m, n, c) + 1e-6);
        prop_assert!((s - KloostermanTable::new(c).get(m, n)).abs() < 1e-9);
    }

    #[test]
    fn crt_multiplicativity(a in -50i64..50, b in -50i64..50, c1 in 1u64..40, c2 in 1u64..40) {
        prop_assume!(gcd(c1, c2) == 1);
        prop_assert!(check_crt_multiplicativity(a, b, c1, c2).unwrap() < 1e-9);
    }

    #[test]
    fn divisor_tau_is_even_in_w(re in -2.0f64..2.0, im in -2.0f64..2.0, n in 1u64..500) {
        let w = Complex64::new(re, im);
        let (a, b) = (divisor_tau(w, n, None), divisor_tau(-w, n, None));
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn gamma_reflection(re in -6.0f64..6.0, im in 0.05f64..4.0) {
        let z = Complex64::new(re, im);
        let lhs = gamma(z).unwrap() * gamma(1.0 - z).unwrap();
        let rhs = std::f64::consts::PI / (std::f64::consts::PI * z).sin();
        assert_relative_eq!(lhs.re, rhs.re, epsilon = 1e-11 * rhs.norm(), max_relative = 1e-11);
        assert_relative_eq!(lhs.im, rhs.im, epsilon = 1e-11 * rhs.norm(), max_relative = 1e-11);
    }

    #[test]
    fn ramanujan_series_meets_its_euler_product(n in 1u64..60, qi in 0usize..4, u in 1.6f64..3.0) {
        let q = [2u64, 3, 5, 7][qi];
        let r = ramanujan_dirichlet_series(n, q, Complex64::new(u, 0.3), 4000).unwrap();
        // the tail bound covers truncation; summation rounding is on top of it
        prop_assert!((r.value - r.closed_form).norm() <= r.tail_bound + 1e-13 * r.closed_form.norm(), "{r:?}");
    }

    #[test]
    fn reports_are_consistent_and_round_trip(
        a in -1e3f64..1e3, b in -1e3f64..1e3, d in -1e-2f64..1e-2, budget in 0.0f64..1e-2, tol in 1e-9f64..1e-1,
    ) {
        let lhs = Complex64::new(a, b);
        let rhs = lhs * (1.0 + d);
        let r = VerificationReport::new("prop", lhs, rhs, budget, tol, Params::new());
        prop_assert!(r.is_consistent());
        let back: VerificationReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert_eq!(back.rel_gap.to_bits(), r.rel_gap.to_bits());
        prop_assert_eq!(back.budget.to_bits(), r.budget.to_bits());
        prop_assert_eq!(&back, &r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn k_sum_is_linear_in_the_weight(m in 1u64..6, n in 1u64..6, x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let pol = small_policy();
        let (alpha, beta) = (Complex64::new(x, 0.5), Complex64::new(-0.3, y));
        let combo = Combination { terms: vec![(alpha, &GAUSS13 as &dyn Weight), (beta, &EXP13 as &dyn Weight)] };
        let whole = k_sum(m, n, 3, &combo, &pol).unwrap().value;
        let parts = alpha * k_sum(m, n, 3, &GAUSS13, &pol).unwrap().value + beta * k_sum(m, n, 3, &EXP13, &pol).unwrap().value;
        prop_assert!((whole - parts).norm() < 1e-10 * parts.norm().max(1.0), "{whole} vs {parts}");
    }
}

#[test]
fn aggregates_are_deterministic() {
    let pol = small_policy();
    let a = k_sum(2, 3, 5, &GAUSS13, &pol).unwrap();
    let b = k_sum(2, 3, 5, &GAUSS13, &pol).unwrap();
    assert_eq!(a.value.re.to_bits(), b.value.re.to_bits());
    assert_eq!(a.value.im.to_bits(), b.value.im.to_bits());
    assert_eq!(a.budget, b.budget);
}
