//! Kloosterman and Ramanujan sums.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::arith::{self, gcd, reduce};
use crate::error::{Error, Result};
use crate::summation::KahanSum;

/// Inverse of `a` modulo `c`.
pub fn mod_inverse(a: i64, c: u64) -> Result<u64> {
    arith::inverse(a, c).ok_or(Error::NotCoprime { a, c })
}

/// cos(2 pi k / c) for k in 0..c.
pub(crate) fn cos_table(c: u64) -> Vec<f64> {
    (0..c).map(|k| (TAU * k as f64 / c as f64).cos()).collect()
}

/// Units of Z/cZ paired with their inverses.
pub(crate) fn units_with_inverses(c: u64) -> Vec<(u64, u64)> {
    if c == 1 {
        return vec![(0, 0)];
    }
    (1..c)
        .filter(|&d| gcd(d, c) == 1)
        .map(|d| (d, arith::inverse(d as i64, c).unwrap()))
        .collect()
}

/// S(a,b;c) by the defining sum.
pub fn kloosterman(a: i64, b: i64, c: u64) -> f64 {
    assert!(c >= 1, "modulus must be positive");
    if c == 1 {
        return 1.0;
    }
    let (a, b) = (reduce(a, c) as u128, reduce(b, c) as u128);
    let cw = c as u128;
    let mut acc = KahanSum::new();
    for d in 1..c {
        if gcd(d, c) != 1 {
            continue;
        }
        let dbar = arith::inverse(d as i64, c).unwrap() as u128;
        let k = (dbar * a + d as u128 * b) % cw;
        acc.add((TAU * k as f64 / c as f64).cos());
    }
    acc.value()
}

/// Table of S(1,r;c) for r mod c.
#[derive(Debug, Clone)]
pub struct KloostermanRow {
    pub modulus: u64,
    pub values: Vec<f64>,
    /// Bound on accumulated rounding in any entry.
    pub error_bound: f64,
}

impl KloostermanRow {
    /// S(a,b;c) for (a,c) = 1 or (b,c) = 1.
    #[inline]
    pub fn get(&self, a: i64, b: i64) -> f64 {
        let c = self.modulus;
        let idx = (reduce(a, c) as u128 * reduce(b, c) as u128 % c as u128) as usize;
        self.values[idx]
    }

    pub fn bytes(&self) -> usize {
        self.values.len() * std::mem::size_of::<f64>()
    }
}

/// Default memory cap for a single row and for the row cache.
pub const DEFAULT_ROW_CAP_BYTES: usize = 256 << 20;

/// Builds S(1,r;c) for every r with one compensated accumulator per entry.
pub fn kloosterman_row(c: u64) -> Result<KloostermanRow> {
    kloosterman_row_capped(c, DEFAULT_ROW_CAP_BYTES)
}

pub fn kloosterman_row_capped(c: u64, cap_bytes: usize) -> Result<KloostermanRow> {
    assert!(c >= 1, "modulus must be positive");
    let bytes = (c as usize).saturating_mul(std::mem::size_of::<f64>());
    if bytes > cap_bytes {
        return Err(Error::RowTooLarge { c, bytes, cap: cap_bytes });
    }
    if c == 1 {
        return Ok(KloostermanRow { modulus: 1, values: vec![1.0], error_bound: 0.0 });
    }
    let cos = cos_table(c);
    let n = c as usize;
    let mut accs = vec![KahanSum::new(); n];
    for (d, dbar) in units_with_inverses(c) {
        let d = d as usize;
        let mut idx = dbar as usize;
        for acc in accs.iter_mut() {
            acc.add(cos[idx]);
            idx += d;
            if idx >= n {
                idx -= n;
            }
        }
    }
    Ok(KloostermanRow {
        modulus: c,
        values: accs.iter().map(KahanSum::value).collect(),
        error_bound: 4.0 * f64::EPSILON * c as f64,
    })
}

/// Rows S(g,r;c) for each divisor g of c, computed by one FFT per divisor.
///
/// Together with [`ReductionTable`] this evaluates S(a,b;c) for arbitrary a, b.
#[derive(Debug, Clone)]
pub struct DivisorRows {
    pub modulus: u64,
    divisors: Vec<u64>,
    rows: Vec<Vec<f64>>,
}

impl DivisorRows {
    pub fn new(c: u64) -> Self {
        let divisors = arith::divisors(c);
        if c == 1 {
            return Self { modulus: 1, divisors, rows: vec![vec![1.0]] };
        }
        let n = c as usize;
        let units = units_with_inverses(c);
        let mut planner = FftPlanner::<f64>::new();
        let fft = planner.plan_fft_inverse(n);
        let rows = divisors
            .iter()
            .map(|&g| {
                // inverse DFT of f(d) = e(g dbar / c) on units gives sum_d e((g dbar + d r)/c)
                let mut buf = vec![Complex64::new(0.0, 0.0); n];
                for &(d, dbar) in &units {
                    let k = (g as u128 * dbar as u128 % c as u128) as f64;
                    buf[d as usize] = Complex64::from_polar(1.0, TAU * k / c as f64);
                }
                fft.process(&mut buf);
                buf.iter().map(|z| z.re).collect()
            })
            .collect();
        Self { modulus: c, divisors, rows }
    }

    /// S(g, r; c) for a divisor g of c.
    #[inline]
    pub fn get(&self, g: u64, r: u64) -> f64 {
        let i = self.divisors.binary_search(&g).expect("g must divide c");
        self.rows[i][(r % self.modulus) as usize]
    }

    pub(crate) fn row_index(&self, g: u64) -> usize {
        self.divisors.binary_search(&g).expect("g must divide c")
    }

    #[inline]
    pub(crate) fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }
}

/// For each residue a mod c, a pair (g, u) with g = gcd(a,c), u a unit and a = g u (mod c).
#[derive(Debug, Clone)]
pub struct ReductionTable {
    pub modulus: u64,
    pub gcd: Vec<u64>,
    pub unit: Vec<u64>,
}

impl ReductionTable {
    pub fn new(c: u64) -> Self {
        let n = c as usize;
        let mut g_of = vec![0u64; n];
        let mut u_of = vec![0u64; n];
        for a in 0..c {
            let g = gcd(a, c);
            let step = c / g;
            let base = (a / g) % step;
            let mut u = base;
            while gcd(u, c) != 1 {
                u += step;
            }
            g_of[a as usize] = g;
            u_of[a as usize] = u % c;
        }
        Self { modulus: c, gcd: g_of, unit: u_of }
    }
}

/// S(a,b;c) for arbitrary a, b from divisor rows.
pub fn kloosterman_general(rows: &DivisorRows, red: &ReductionTable, a: i64, b: i64) -> f64 {
    let c = rows.modulus;
    let a = reduce(a, c) as usize;
    let (g, u) = (red.gcd[a], red.unit[a]);
    let r = (u as u128 * reduce(b, c) as u128 % c as u128) as u64;
    rows.get(g, r)
}

/// S(a,b;c) for every a, b at a fixed modulus.
#[derive(Debug, Clone)]
pub struct KloostermanTable {
    pub rows: DivisorRows,
    pub red: ReductionTable,
}

impl KloostermanTable {
    pub fn new(c: u64) -> Self {
        Self { rows: DivisorRows::new(c), red: ReductionTable::new(c) }
    }

    #[inline]
    pub fn get(&self, a: i64, b: i64) -> f64 {
        kloosterman_general(&self.rows, &self.red, a, b)
    }
}

/// [`KloostermanTable`]s built on first use, for sweeps that touch many moduli repeatedly.
#[derive(Debug, Default)]
pub struct TableSet {
    tables: HashMap<u64, KloostermanTable>,
}

impl TableSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn kloosterman(&mut self, a: i64, b: i64, c: u64) -> f64 {
        self.tables.entry(c).or_insert_with(|| KloostermanTable::new(c)).get(a, b)
    }

    /// Drops every table; sweeps in ascending c call this once a modulus will not recur.
    pub fn clear(&mut self) {
        self.tables.clear();
    }
}

/// Thread-safe LRU cache of [`KloostermanRow`]s bounded by total bytes.
#[derive(Debug)]
pub struct RowCache {
    cap_bytes: usize,
    inner: Mutex<CacheInner>,
}

#[derive(Debug, Default)]
struct CacheInner {
    map: HashMap<u64, (Arc<KloostermanRow>, u64)>,
    tick: u64,
    bytes: usize,
}

impl RowCache {
    pub fn new(cap_bytes: usize) -> Self {
        Self { cap_bytes, inner: Mutex::new(CacheInner::default()) }
    }

    pub fn get(&self, c: u64) -> Result<Arc<KloostermanRow>> {
        {
            let mut g = self.inner.lock().unwrap();
            g.tick += 1;
            let t = g.tick;
            if let Some(entry) = g.map.get_mut(&c) {
                entry.1 = t;
                return Ok(entry.0.clone());
            }
        }
        // build outside the lock; a concurrent duplicate build yields an identical row
        let row = Arc::new(kloosterman_row_capped(c, self.cap_bytes)?);
        let mut g = self.inner.lock().unwrap();
        if let Some(entry) = g.map.get(&c) {
            return Ok(entry.0.clone());
        }
        while g.bytes + row.bytes() > self.cap_bytes {
            let oldest = g.map.iter().min_by_key(|(_, (_, t))| *t).map(|(&k, _)| k);
            match oldest {
                Some(k) => {
                    let (old, _) = g.map.remove(&k).unwrap();
                    g.bytes -= old.bytes();
                }
                None => break,
            }
        }
        g.tick += 1;
        let t = g.tick;
        g.bytes += row.bytes();
        g.map.insert(c, (row.clone(), t));
        Ok(row)
    }

    pub fn len(&self) -> usize {
        self.inner.lock().unwrap().map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bytes(&self) -> usize {
        self.inner.lock().unwrap().bytes
    }
}

impl Default for RowCache {
    fn default() -> Self {
        Self::new(DEFAULT_ROW_CAP_BYTES)
    }
}

/// c_c(n) = sum over d | (n,c) of mu(c/d) d.
pub fn ramanujan_sum(n: i64, c: u64) -> i64 {
    let g = gcd(n.unsigned_abs(), c);
    arith::divisors(g)
        .into_iter()
        .map(|d| arith::mobius(c / d) * d as i64)
        .sum()
}

/// S(N̄m, n; c), the Kloosterman sum attached to the cusp pair (infinity, 0) at level N.
pub fn kloosterman_cusp_pair(m: i64, n: i64, c: u64, level: u64) -> Result<f64> {
    if gcd(c, level) != 1 {
        return Err(Error::ModulusNotAllowed { c, level });
    }
    let nbar = mod_inverse(level as i64, c)? as i128;
    let a = (nbar * m as i128).rem_euclid(c as i128) as i64;
    Ok(kloosterman(a, n, c))
}

/// Weil's bound tau_0(c) gcd(m,n,c)^(1/2) c^(1/2).
pub fn weil_bound(m: i64, n: i64, c: u64) -> f64 {
    let g = gcd(gcd(m.unsigned_abs(), n.unsigned_abs()), c);
    arith::divisor_count(c) as f64 * (g as f64).sqrt() * (c as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum ClauseOutcome {
    Checked { lhs: f64, rhs: f64, gap: f64 },
    Inapplicable,
}

impl ClauseOutcome {
    fn checked(lhs: f64, rhs: f64) -> Self {
        ClauseOutcome::Checked { lhs, rhs, gap: (lhs - rhs).abs() }
    }

    pub fn gap(&self) -> Option<f64> {
        match self {
            ClauseOutcome::Checked { gap, .. } => Some(*gap),
            ClauseOutcome::Inapplicable => None,
        }
    }
}

/// The three p-reduction identities for Kloosterman sums, evaluated where they apply.
///
/// 1. p || c: S(m,pn;c) = eps S(p̄m, n; c/p), eps = -1 if p ∤ m and p - 1 if p | m.
/// 2. p^2 | c, p ∤ m: S(m,pn;c) = 0.
/// 3. S(pm,pn;p^2 c) = p S(m,n;pc).
pub fn check_kloo_lemma(m: i64, n: i64, c: u64, p: u64) -> [ClauseOutcome; 3] {
    check_kloo_lemma_with(m, n, c, p, &mut kloosterman)
}

/// [`check_kloo_lemma`] with Kloosterman sums S(a,b;c) supplied by `kloosterman`.
pub fn check_kloo_lemma_with(m: i64, n: i64, c: u64, p: u64, kloosterman: &mut impl FnMut(i64, i64, u64) -> f64) -> [ClauseOutcome; 3] {
    let pi = p as i64;
    let vp = arith::valuation(c, p);
    let p_divides_m = m.rem_euclid(pi) == 0;

    let first = if vp == 1 {
        let c1 = c / p;
        let pbar = arith::inverse(pi, c1).unwrap() as i128;
        let a = (pbar * m as i128).rem_euclid(c1 as i128) as i64;
        let eps = if p_divides_m { (p - 1) as f64 } else { -1.0 };
        ClauseOutcome::checked(kloosterman(m, pi * n, c), eps * kloosterman(a, n, c1))
    } else {
        ClauseOutcome::Inapplicable
    };

    let second = if vp >= 2 && !p_divides_m {
        ClauseOutcome::checked(kloosterman(m, pi * n, c), 0.0)
    } else {
        ClauseOutcome::Inapplicable
    };

    let third = ClauseOutcome::checked(
        kloosterman(pi * m, pi * n, p * p * c),
        p as f64 * kloosterman(m, n, p * c),
    );

    [first, second, third]
}

/// Gap in the twisted multiplicativity S(a,b;c1c2) = S(a c̄2, b c̄2; c1) S(a c̄1, b c̄1; c2).
pub fn check_crt_multiplicativity(a: i64, b: i64, c1: u64, c2: u64) -> Result<f64> {
    if gcd(c1, c2) != 1 {
        return Err(Error::NotCoprime { a: c1 as i64, c: c2 });
    }
    let c2bar = mod_inverse(c2 as i64, c1)? as i128;
    let c1bar = mod_inverse(c1 as i64, c2)? as i128;
    let tw = |x: i64, inv: i128, c: u64| (x as i128 * inv).rem_euclid(c as i128) as i64;
    let lhs = kloosterman(a, b, c1 * c2);
    let rhs = kloosterman(tw(a, c2bar, c1), tw(b, c2bar, c1), c1)
        * kloosterman(tw(a, c1bar, c2), tw(b, c1bar, c2), c2);
    Ok((lhs - rhs).abs())
}
