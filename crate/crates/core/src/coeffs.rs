//! Ramanujan tau and divisor-type coefficients.

use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use crate::arith::{divisors, gcd};
use crate::error::{Error, Result};
use crate::ntt;

/// Exact tau(n) and normalised Hecke eigenvalues of the discriminant form.
#[derive(Debug, Clone)]
pub struct HeckeTable {
    pub weight: u32,
    pub n_max: usize,
    /// tau[n] for 0 <= n <= n_max; tau[0] = 0.
    pub tau: Vec<i128>,
    /// lambda[n] = tau(n) / n^((k-1)/2); lambda[0] = 0.
    pub lambda: Vec<f64>,
}

/// Sparse power series: (exponent, coefficient) pairs.
type Sparse = Vec<(usize, i64)>;

/// Euler's pentagonal series prod (1 - x^n) up to x^n_max.
fn pentagonal(n_max: usize) -> Sparse {
    let mut terms = vec![(0usize, 1i64)];
    let mut k = 1usize;
    loop {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let e1 = k * (3 * k - 1) / 2;
        if e1 > n_max {
            break;
        }
        terms.push((e1, sign));
        let e2 = k * (3 * k + 1) / 2;
        if e2 <= n_max {
            terms.push((e2, sign));
        }
        k += 1;
    }
    terms.sort_unstable();
    terms
}

/// Dense times sparse, truncated at n_max. Errors if any output could overflow.
fn mul_sparse(dense: &[i128], sparse: &[(usize, i64)], what: &'static str) -> Result<Vec<i128>> {
    let max_dense = dense.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
    let weight: u128 = sparse.iter().map(|&(_, c)| c.unsigned_abs() as u128).sum();
    match max_dense.checked_mul(weight) {
        Some(b) if b < i128::MAX as u128 => {}
        _ => return Err(Error::NeedsWidening(what)),
    }
    let n = dense.len();
    let mut out = vec![0i128; n];
    for &(e, c) in sparse {
        if e >= n {
            break;
        }
        let c = c as i128;
        for (o, &d) in out[e..].iter_mut().zip(&dense[..n - e]) {
            *o += c * d;
        }
    }
    Ok(out)
}

fn to_sparse(dense: &[i128], what: &'static str) -> Result<Sparse> {
    dense
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0)
        .map(|(i, &v)| i64::try_from(v).map(|v| (i, v)).map_err(|_| Error::NeedsWidening(what)))
        .collect()
}

impl HeckeTable {
    /// Expands x prod (1 - x^n)^24 exactly up to x^n_max.
    ///
    /// The cube of the pentagonal series is supported on triangular numbers, so it is
    /// computed first and the remaining seven factors are applied as sparse products.
    pub fn build(weight: u32, n_max: usize) -> Result<Self> {
        if weight != 12 {
            return Err(Error::UnsupportedWeight(weight));
        }
        // series index i holds the coefficient of x^(i+1) in Delta, i.e. of x^i in P^24
        let len = n_max.max(1);
        let p = pentagonal(len - 1);
        let mut dense = vec![0i128; len];
        for &(e, c) in &p {
            dense[e] = c as i128;
        }
        let p2 = mul_sparse(&dense, &p, "squaring the pentagonal series")?;
        let p3 = mul_sparse(&p2, &p, "cubing the pentagonal series")?;
        let cube = to_sparse(&p3, "sparsifying the cube")?;
        let mut acc = p3;
        for _ in 0..7 {
            acc = mul_sparse(&acc, &cube, "raising to the 24th power")?;
        }
        let mut tau = Vec::with_capacity(n_max + 1);
        tau.push(0);
        tau.extend_from_slice(&acc[..n_max]);
        let lambda = tau
            .iter()
            .enumerate()
            .map(|(n, &t)| if n == 0 { 0.0 } else { t as f64 / normaliser(n) })
            .collect();
        Ok(Self { weight, n_max, tau, lambda })
    }

    #[inline]
    pub fn tau(&self, n: usize) -> i128 {
        self.tau[n]
    }

    #[inline]
    pub fn lambda(&self, n: usize) -> f64 {
        self.lambda[n]
    }

    pub fn require(&self, n: usize) -> Result<()> {
        if n > self.n_max {
            Err(Error::TableTooShort { have: self.n_max, need: n })
        } else {
            Ok(())
        }
    }
}

/// n^(11/2) in floating point.
#[inline]
fn normaliser(n: usize) -> f64 {
    let x = n as f64;
    x.powi(5) * x.sqrt()
}

pub fn build_hecke_table(weight: u32, n_max: usize) -> Result<HeckeTable> {
    HeckeTable::build(weight, n_max)
}

static SHARED: Mutex<Option<Arc<HeckeTable>>> = Mutex::new(None);

/// Process-wide weight-12 table covering at least `n_max`, grown on demand.
pub fn shared_table(n_max: usize) -> Result<Arc<HeckeTable>> {
    let mut guard = SHARED.lock().unwrap();
    if let Some(t) = guard.as_ref() {
        if t.n_max >= n_max {
            return Ok(t.clone());
        }
    }
    let t = Arc::new(HeckeTable::build(12, n_max.max(1000))?);
    *guard = Some(t.clone());
    Ok(t)
}

static SHARED_LAMBDA: Mutex<Option<Arc<Vec<f64>>>> = Mutex::new(None);

/// lambda(n) for 0 <= n <= n_max as floats, from prod (1 - q^n)^24 = (sum (-1)^k (2k+1) q^(k(k+1)/2))^8
/// expanded exactly modulo three primes by transform squaring.
///
/// This reaches far beyond the exact i128 table, whose entries overflow near n = 3e6.
pub fn lambda_table(n_max: usize) -> Result<Arc<Vec<f64>>> {
    let mut guard = SHARED_LAMBDA.lock().unwrap();
    if let Some(t) = guard.as_ref() {
        if t.len() > n_max {
            return Ok(t.clone());
        }
    }
    let t = Arc::new(lambda_by_transform(n_max.max(1000)));
    *guard = Some(t.clone());
    Ok(t)
}

fn lambda_by_transform(n_max: usize) -> Vec<f64> {
    let len = n_max;
    let mut jacobi = Vec::new();
    let mut k = 0usize;
    while k * (k + 1) / 2 < len {
        let c = (2 * k + 1) as i64;
        jacobi.push((k * (k + 1) / 2, if k % 2 == 0 { c } else { -c }));
        k += 1;
    }
    // sixth power of the eta product, small enough for i64
    let mut sixth = vec![0i64; len];
    for &(e1, c1) in &jacobi {
        for &(e2, c2) in &jacobi {
            if e1 + e2 >= len {
                break;
            }
            sixth[e1 + e2] += c1 * c2;
        }
    }
    let residues: Vec<Vec<u64>> = ntt::PRIMES
        .iter()
        .map(|&(p, g)| {
            let m = ntt::Mont::new(p);
            let a: Vec<u64> = sixth.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect();
            let b = ntt::square_truncated(&m, g, &a, len);
            ntt::square_truncated(&m, g, &b, len)
        })
        .collect();
    let garner = ntt::Garner::new();
    let mut lambda = vec![0.0; n_max + 1];
    for n in 1..=n_max {
        let tau = garner.to_f64([residues[0][n - 1], residues[1][n - 1], residues[2][n - 1]]);
        lambda[n] = tau / normaliser(n);
    }
    lambda
}

/// Exact check of tau(m) tau(n) = sum over d | (m,n) of d^11 tau(mn/d^2).
pub fn verify_hecke(m: usize, n: usize, table: &HeckeTable) -> Result<bool> {
    let mn = m.checked_mul(n).ok_or(Error::NeedsWidening("forming mn"))?;
    table.require(mn)?;
    let lhs = table.tau[m]
        .checked_mul(table.tau[n])
        .ok_or(Error::NeedsWidening("multiplying tau values"))?;
    let mut rhs: i128 = 0;
    for d in divisors(gcd(m as u64, n as u64)) {
        let d11 = (d as i128).checked_pow(11).ok_or(Error::NeedsWidening("d^11"))?;
        let term = d11
            .checked_mul(table.tau[mn / (d * d) as usize])
            .ok_or(Error::NeedsWidening("Hecke summand"))?;
        rhs = rhs.checked_add(term).ok_or(Error::NeedsWidening("Hecke sum"))?;
    }
    Ok(lhs == rhs)
}

/// tau_w(n) = sum over ab = n of (a/b)^w; with `q`, n is first divided by gcd(n, q).
pub fn divisor_tau(w: Complex64, n: u64, q: Option<u64>) -> Complex64 {
    assert!(n >= 1);
    let n = match q {
        Some(q) => n / gcd(n, q),
        None => n,
    };
    if n == 1 {
        return Complex64::new(1.0, 0.0);
    }
    let ln_n = (n as f64).ln();
    divisors(n)
        .into_iter()
        .map(|a| (w * (2.0 * (a as f64).ln() - ln_n)).exp())
        .sum()
}

/// |tau(m)tau(n) - sum_{d | (m,n)} tau(mn/d^2)| for the q-restricted divisor function.
pub fn verify_divisor_hecke(w: Complex64, m: u64, n: u64, q: u64) -> f64 {
    let lhs = divisor_tau(w, m, Some(q)) * divisor_tau(w, n, Some(q));
    let rhs: Complex64 = divisors(gcd(m, n))
        .into_iter()
        .map(|d| divisor_tau(w, m * n / (d * d), Some(q)))
        .sum();
    (lhs - rhs).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// x (sum (-1)^k (2k+1) x^(k(k+1)/2))^8 by naive dense products.
    fn jacobi_oracle(n_max: usize) -> Vec<i128> {
        let mut j = vec![0i128; n_max];
        let mut k = 0usize;
        while k * (k + 1) / 2 < n_max {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            j[k * (k + 1) / 2] = sign * (2 * k as i128 + 1);
            k += 1;
        }
        let mut acc = vec![0i128; n_max];
        acc[0] = 1;
        for _ in 0..8 {
            let mut next = vec![0i128; n_max];
            for a in 0..n_max {
                for b in 0..n_max - a {
                    next[a + b] += acc[a] * j[b];
                }
            }
            acc = next;
        }
        let mut tau = vec![0i128];
        tau.extend_from_slice(&acc[..n_max - 1]);
        tau
    }

    #[test]
    fn known_values() {
        let t = HeckeTable::build(12, 40).unwrap();
        assert_eq!(t.tau(1), 1);
        assert_eq!(t.tau(2), -24);
        assert_eq!(t.tau(3), 252);
        assert_eq!(t.tau(6), -6048);
        assert_eq!(t.tau(12), -370944);
        assert!((t.lambda(1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn matches_jacobi_cube_identity() {
        let t = HeckeTable::build(12, 30).unwrap();
        let oracle = jacobi_oracle(31);
        assert_eq!(&t.tau[..=30], &oracle[..=30]);
    }

    #[test]
    fn unsupported_weight() {
        assert_eq!(HeckeTable::build(16, 10).unwrap_err(), Error::UnsupportedWeight(16));
    }

    #[test]
    fn hecke_relation_examples() {
        let t = HeckeTable::build(12, 200).unwrap();
        assert!(verify_hecke(2, 3, &t).unwrap());
        assert!(verify_hecke(2, 2, &t).unwrap());
        assert!(verify_hecke(1, 97, &t).unwrap());
        assert!(verify_hecke(12, 8, &t).unwrap());
        assert!(matches!(verify_hecke(20, 20, &t), Err(Error::TableTooShort { .. })));
    }

    #[test]
    fn divisor_tau_examples() {
        let w = Complex64::new(0.4, -1.3);
        assert_eq!(divisor_tau(w, 1, None), Complex64::new(1.0, 0.0));
        assert!((divisor_tau(Complex64::new(0.0, 0.0), 6, None).re - 4.0).abs() < 1e-14);
        assert!((divisor_tau(Complex64::new(1.0, 0.0), 2, None).re - 2.5).abs() < 1e-14);
        assert!((divisor_tau(w, 7, Some(7)) - 1.0).norm() < 1e-15);
        assert!(verify_divisor_hecke(Complex64::new(0.0, 0.3), 2, 3, 5) < 1e-12);
        assert!(verify_divisor_hecke(w, 1, 18, 3) < 1e-12);
        assert!(verify_divisor_hecke(Complex64::new(0.0, 0.0), 4, 6, 7) < 1e-12);
    }

    #[test]
    fn transform_table_matches_exact_table() {
        let exact = HeckeTable::build(12, 100_000).unwrap();
        let fast = lambda_by_transform(100_000);
        for n in 1..=100_000 {
            assert!((fast[n] - exact.lambda(n)).abs() <= 1e-14 * exact.lambda(n).abs().max(1e-3), "n={n}");
        }
    }

    #[test]
    fn transform_table_obeys_hecke_relation_past_i128_range() {
        // lambda(p) lambda(n) = lambda(pn) + lambda(n/p) [p | n], past where tau overflows i128
        let t = lambda_by_transform(4_000_001);
        for (p, n) in [(2usize, 1_999_999usize), (3, 1_333_331), (7, 571_427), (2, 2_000_000)] {
            let extra = if n % p == 0 { t[n / p] } else { 0.0 };
            assert!((t[p] * t[n] - t[p * n] - extra).abs() < 1e-11, "p={p} n={n}");
        }
    }
}
