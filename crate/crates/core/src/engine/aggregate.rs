//! The stratified sweep behind every Kloosterman aggregate
//! sum over m,n of lambda(m) lambda(n) (mn)^-s sum over c of S(Nbar m, beta n; c)/(c sqrt N) W(4 pi sqrt(m beta n)/(c sqrt N)).

use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::policy::{TailReport, TruncationPolicy, RESOLUTION};
use super::weight::Weight;
use crate::arith::{euler_phi, factorize, gcd, inverse};
use crate::coeffs::lambda_table;
use crate::error::Result;
use crate::exp_sums::{DivisorRows, ReductionTable};
use crate::summation::ComplexKahan;

/// Which lattice of (m, n, c) is summed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Lattice {
    /// N in S(Nbar m, beta n; c)/(c sqrt N).
    pub level: u64,
    /// beta.
    pub twist: u64,
    /// c runs over integers coprime to this.
    pub coprime_to: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stratum {
    pub c: u64,
    pub value: Complex64,
    /// Number of k = mn summed.
    pub terms: usize,
    pub resolved: bool,
    pub window_tail: f64,
    pub dirichlet_tail: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateValue {
    pub value: Complex64,
    pub budget: TailReport,
    /// Largest c whose stratum was summed.
    pub c_resolved: u64,
    /// Exponent alpha of the fitted stratum envelope A c^-alpha.
    pub decay_exponent: f64,
    #[serde(skip)]
    pub strata: Vec<Stratum>,
}

impl AggregateValue {
    /// The aggregate multiplied by a constant, budgets included.
    pub fn scaled(mut self, k: Complex64) -> Self {
        self.value *= k;
        self.budget = self.budget.scaled(k.norm());
        for st in &mut self.strata {
            st.value *= k;
            st.window_tail *= k.norm();
            st.dirichlet_tail *= k.norm();
        }
        self
    }
}

/// lambda * lambda and its typical size, shared across aggregates.
pub(crate) struct ConvTable {
    pub lambda: Vec<f64>,
    pub conv: Vec<f64>,
    pub mean_abs: f64,
}

static CONV: Mutex<Option<Arc<ConvTable>>> = Mutex::new(None);

pub(crate) fn conv_table(cap: usize) -> Result<Arc<ConvTable>> {
    let mut guard = CONV.lock().unwrap();
    if let Some(t) = guard.as_ref() {
        if t.conv.len() > cap {
            return Ok(t.clone());
        }
    }
    let lambda = lambda_table(cap)?[..=cap].to_vec();
    let mut conv = vec![0.0; cap + 1];
    for d in 1..=cap {
        let ld = lambda[d];
        if ld == 0.0 {
            continue;
        }
        for m in 1..=cap / d {
            conv[d * m] += ld * lambda[m];
        }
    }
    let half = cap / 2 + 1;
    let mean_abs = conv[half..].iter().map(|x| x.abs()).sum::<f64>() / (cap + 1 - half) as f64;
    let t = Arc::new(ConvTable { lambda, conv, mean_abs });
    *guard = Some(t.clone());
    Ok(t)
}

/// Integral of f over [a, b] on a geometric grid.
fn log_integral(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if b <= a || a <= 0.0 {
        return 0.0;
    }
    let n = ((b / a).ln() * 48.0).ceil().max(2.0) as usize;
    let h = (b / a).ln() / n as f64;
    let mut acc = 0.0;
    for i in 0..=n {
        let x = a * (h * i as f64).exp();
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        acc += w * f(x) * x;
    }
    acc * h
}

struct Sweep<'a> {
    lat: Lattice,
    s: Complex64,
    weight: &'a dyn Weight,
    window: (f64, f64),
    cap: usize,
    peak: f64,
    tables: &'a ConvTable,
    powers: Vec<Complex64>,
}

impl Sweep<'_> {
    fn scale(&self, c: u64) -> f64 {
        4.0 * PI * (self.lat.twist as f64 / self.lat.level as f64).sqrt() / c as f64
    }

    /// No-cancellation estimate of the k = mn terms with argument in [xa, xb]:
    /// mean |lambda*lambda| times the root-mean-square Kloosterman size sqrt(phi(c)).
    fn mass(&self, c: u64, xa: f64, xb: f64) -> f64 {
        let scale = self.scale(c);
        let sigma = self.s.re;
        let xa = xa.max(scale);
        let integral = log_integral(
            |x| (x / scale).powf(-2.0 * sigma) * self.weight.eval(x).norm() * 2.0 * x / (scale * scale),
            xa,
            xb,
        );
        self.tables.mean_abs * (euler_phi(c) as f64).sqrt() * integral / (c as f64 * (self.lat.level as f64).sqrt())
    }

    fn stratum(&self, c: u64, buf: &mut Vec<Complex64>, bad: &mut Vec<bool>) -> Stratum {
        let scale = self.scale(c);
        let (x_lo, x_hi) = self.window;
        let k_lo = ((x_lo / scale).powi(2).ceil() as usize).max(1);
        let k_win = (x_hi / scale).powi(2).floor() as usize;
        let k_hi = k_win.min(self.cap);
        let x_cap = scale * (self.cap as f64).sqrt();
        let resolved = k_win <= self.cap || self.weight.sup_beyond(x_cap) <= RESOLUTION * self.peak;
        let window_tail = self.mass(c, 0.0, x_lo) + self.mass(c, x_hi, 1e3 * x_hi.max(x_cap));
        let dirichlet_tail = if k_win > self.cap { self.mass(c, x_cap, x_hi) } else { 0.0 };
        let mut out = Stratum { c, value: Complex64::new(0.0, 0.0), terms: 0, resolved, window_tail, dirichlet_tail };
        if !resolved || k_lo > k_hi {
            return out;
        }
        out.terms = k_hi + 1 - k_lo;
        let lam = &self.tables.lambda;
        let conv = &self.tables.conv;
        let (level, beta) = (self.lat.level, self.lat.twist);
        let norm = c as f64 * (level as f64).sqrt();
        if c == 1 {
            let mut acc = ComplexKahan::new();
            for k in k_lo..=k_hi {
                acc.add(self.powers[k] * self.weight.eval(scale * (k as f64).sqrt()) * conv[k]);
            }
            out.value = acc.value() / norm;
            return out;
        }

        buf.clear();
        buf.resize(k_hi + 1, Complex64::new(0.0, 0.0));
        for k in k_lo..=k_hi {
            buf[k] = self.powers[k] * self.weight.eval(scale * (k as f64).sqrt());
        }
        let rows = DivisorRows::new(c);
        let red = ReductionTable::new(c);
        let row1 = rows.row(rows.row_index(1));
        let nbar = inverse(level as i64, c).expect("c is coprime to the level");
        let t = (nbar as u128 * beta as u128 % c as u128) as usize;
        let cu = c as usize;

        // pairs with (m, c) = 1 or (beta n, c) = 1: S(Nbar m, beta n; c) = S(1, Nbar beta mn; c)
        let mut acc = ComplexKahan::new();
        let mut idx = (t as u128 * k_lo as u128 % c as u128) as usize;
        for k in k_lo..=k_hi {
            acc.add(buf[k] * (conv[k] * row1[idx]));
            idx += t;
            if idx >= cu {
                idx -= cu;
            }
        }

        // the remaining pairs: replace S(1, .) by the true value
        bad.clear();
        bad.resize(k_hi + 1, false);
        for (l, _) in factorize(c) {
            let l = l as usize;
            let mut j = l;
            while j <= k_hi {
                bad[j] = true;
                j += l;
            }
        }
        let all_n = gcd(beta, c) > 1;
        for m in 2..=k_hi {
            if !bad[m] {
                continue;
            }
            let (n_lo, n_hi) = (k_lo.div_ceil(m).max(1), k_hi / m);
            if n_lo > n_hi {
                continue;
            }
            let a = (nbar as u128 * m as u128 % c as u128) as usize;
            let (g, u) = (red.gcd[a], red.unit[a]);
            let row = rows.row(rows.row_index(g));
            let step1 = (u as u128 * beta as u128 % c as u128) as usize;
            let step0 = (t as u128 * m as u128 % c as u128) as usize;
            let mut r1 = (step1 as u128 * n_lo as u128 % c as u128) as usize;
            let mut r0 = (step0 as u128 * n_lo as u128 % c as u128) as usize;
            let mut inner = ComplexKahan::new();
            for n in n_lo..=n_hi {
                if all_n || bad[n] {
                    let delta = row[r1] - row1[r0];
                    inner.add(buf[m * n] * (lam[n] * delta));
                }
                r1 += step1;
                if r1 >= cu {
                    r1 -= cu;
                }
                r0 += step0;
                if r0 >= cu {
                    r0 -= cu;
                }
            }
            acc.add(inner.value() * lam[m]);
        }
        out.value = acc.value() / norm;
        out
    }
}

/// Multiple of the random-sign standard deviation reported as the c-tail.
const TAIL_SIGMAS: f64 = 3.0;

/// Estimate of the sum over strata that were not summed. The summed strata near the top
/// fix an envelope A c^-alpha (alpha by log-log regression, A by root mean square); the
/// omitted strata are then treated as terms of random sign with that envelope.
fn c_tail(strata: &[Stratum], lat: &Lattice, c_max: u64) -> (f64, f64) {
    let summed: Vec<&Stratum> = strata.iter().filter(|s| s.resolved && s.value.norm() > 0.0).collect();
    let Some(top) = summed.last().map(|s| s.c) else {
        return (0.0, f64::NAN);
    };
    let fit: Vec<(f64, f64)> = summed
        .iter()
        .filter(|s| 4 * s.c > top)
        .map(|s| ((s.c as f64).ln(), s.value.norm().ln()))
        .collect();
    let alpha = if fit.len() >= 3 {
        let n = fit.len() as f64;
        let mx = fit.iter().map(|p| p.0).sum::<f64>() / n;
        let my = fit.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = fit.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = fit.iter().map(|p| (p.0 - mx).powi(2)).sum();
        -sxy / sxx
    } else {
        1.5
    };
    // a shallow or noisy fit must not make the tail look convergent faster than the data
    let alpha = alpha.clamp(1.0, 4.0);
    let upper: Vec<f64> = summed.iter().filter(|s| 2 * s.c > top).map(|s| s.value.norm() * (s.c as f64).powf(alpha)).collect();
    let amp = (upper.iter().map(|a| a * a).sum::<f64>() / upper.len() as f64).sqrt();
    let mut var: f64 = strata.iter().filter(|s| !s.resolved).map(|s| (s.c as f64).powf(-2.0 * alpha)).sum();
    let density = euler_phi(lat.coprime_to) as f64 / lat.coprime_to as f64;
    let cm = c_max as f64 + 0.5;
    var += density * cm.powf(1.0 - 2.0 * alpha) / (2.0 * alpha - 1.0);
    (TAIL_SIGMAS * amp * var.sqrt(), alpha)
}

pub fn aggregate(lat: Lattice, s: Complex64, weight: &dyn Weight, policy: &TruncationPolicy) -> Result<AggregateValue> {
    let window = policy.window.unwrap_or_else(|| weight.support());
    let cap = policy.mn_cap;
    let tables = conv_table(cap)?;
    let powers: Vec<Complex64> = (0..=cap).map(|k| if k == 0 { 0.0.into() } else { (-s * (k as f64).ln()).exp() }).collect();
    let sweep = Sweep { lat, s, weight, window, cap, peak: weight.peak(), tables: &tables, powers };
    let cs: Vec<u64> = (1..=policy.c_max).filter(|&c| gcd(c, lat.coprime_to) == 1).collect();
    let strata: Vec<Stratum> = cs
        .par_iter()
        .map_init(|| (Vec::new(), Vec::new()), |(buf, bad), &c| sweep.stratum(c, buf, bad))
        .collect();

    let mut acc = ComplexKahan::new();
    let mut budget = TailReport::default();
    let mut c_resolved = 0;
    for st in &strata {
        if st.resolved {
            acc.add(st.value);
            budget.window_tail += st.window_tail;
            budget.dirichlet_tail += st.dirichlet_tail;
            if st.terms > 0 {
                c_resolved = st.c;
            }
        }
    }
    let (tail, alpha) = c_tail(&strata, &lat, policy.c_max);
    budget.c_tail = tail;
    Ok(AggregateValue { value: acc.value(), budget, c_resolved, decay_exponent: alpha, strata })
}
