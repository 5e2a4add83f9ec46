//! Identities checked by evaluating both sides independently.

use std::time::Instant;

use num_complex::Complex64;

use super::aggregate::AggregateValue;
use super::policy::{SpectralPoint, TruncationPolicy};
use super::report::{Params, VerificationReport};
use super::sums::{check_pair, moment_proxy, s_sum};
use super::weight::{PhiWeight, Weight};
use crate::analysis::{zeta_restricted, TestFunction};
use crate::arith::is_prime;
use crate::coeffs::lambda_table;
use crate::error::{Error, Result};
use crate::summation::ComplexKahan;
use crate::transforms::{PhiCache, PhiTransformParams};

fn cpow(base: f64, e: Complex64) -> Complex64 {
    (e * base.ln()).exp()
}

fn lambda_at(p: u64) -> Result<f64> {
    Ok(lambda_table(p as usize)?[p as usize])
}

fn base_params(p: u64, q: u64, s: Complex64, label: String, policy: &TruncationPolicy) -> Params {
    let mut params = Params::new();
    params.insert("p".into(), p.into());
    params.insert("q".into(), q.into());
    params.insert("s".into(), s.into());
    params.insert("weight".into(), label.into());
    params.insert("c_max".into(), policy.c_max.into());
    params.insert("mn_cap".into(), policy.mn_cap.into());
    if let Some((lo, hi)) = policy.window {
        params.insert("x_lo".into(), lo.into());
        params.insert("x_hi".into(), hi.into());
    }
    params
}

fn record(params: &mut Params, name: &str, v: &AggregateValue) {
    params.insert(format!("{name}.value"), v.value.into());
    params.insert(format!("{name}.budget"), v.budget.total().into());
    params.insert(format!("{name}.c_tail"), v.budget.c_tail.into());
    params.insert(format!("{name}.window_tail"), v.budget.window_tail.into());
    params.insert(format!("{name}.dirichlet_tail"), v.budget.dirichlet_tail.into());
    params.insert(format!("{name}.c_resolved"), v.c_resolved.into());
}

/// Sums of lambda(n) u(n) n^-s over n <= x, read off prefix sums.
struct Prefix(Vec<Complex64>, Vec<f64>);

impl Prefix {
    fn new(terms: impl Iterator<Item = Complex64>) -> Self {
        let mut acc = ComplexKahan::new();
        let mut abs = 0.0;
        let (mut v, mut a) = (vec![Complex64::new(0.0, 0.0)], vec![0.0]);
        for t in terms {
            acc.add(t);
            abs += t.norm();
            v.push(acc.value());
            a.push(abs);
        }
        Self(v, a)
    }

    fn at(&self, x: usize) -> Complex64 {
        self.0[x.min(self.0.len() - 1)]
    }

    fn abs_at(&self, x: usize) -> f64 {
        self.1[x.min(self.1.len() - 1)]
    }
}

/// The Dirichlet-series lemma with nu = lambda_g:
/// lambda(p) sum lambda(n)^2 n^-s = lambda(p) p^-s sum lambda(n)^2 n^-s + (1 - p^-2s) sum lambda(n) lambda(np) n^-s.
/// Both sides are cut so that they agree term by term: with B(x), A(x) the partial sums of
/// lambda(n)^2 n^-s and lambda(n) lambda(np) n^-s, LHS = lambda(p) B(M) and
/// RHS = lambda(p) p^-s B(M/p) + A(M) - p^-2s A(M/p^2).
pub fn verify_dirichlet_lemma(p: u64, s: Complex64, m_cut: usize, tolerance: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    if s.re <= 1.2 {
        return Err(Error::DirectSeriesDiverges(s.re));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let pu = p as usize;
    let lam = lambda_table(pu * m_cut)?;
    let pow = |n: usize| (-s * (n as f64).ln()).exp();
    let b = Prefix::new((1..=m_cut).map(|n| pow(n) * (lam[n] * lam[n])));
    let a = Prefix::new((1..=m_cut).map(|n| pow(n) * (lam[n] * lam[n * pu])));
    let lp = lam[pu];
    let p_s = cpow(p as f64, -s);
    let p_2s = p_s * p_s;
    let lhs = lp * b.at(m_cut);
    let rhs = lp * p_s * b.at(m_cut / pu) + a.at(m_cut) - p_2s * a.at(m_cut / (pu * pu));
    // rounding only: every term enters a Kahan sum once
    let mass = lp.abs() * b.abs_at(m_cut) + lp.abs() * p_s.norm() * b.abs_at(m_cut / pu) + (1.0 + p_2s.norm()) * a.abs_at(m_cut);
    let budget = 8.0 * f64::EPSILON * mass;
    // what cutting every sum at M instead would have left over
    let naive_rhs = lp * p_s * b.at(m_cut) + (1.0 - p_2s) * a.at(m_cut);
    let mut params = Params::new();
    params.insert("p".into(), p.into());
    params.insert("s".into(), s.into());
    params.insert("M".into(), m_cut.into());
    params.insert("truncation".into(), "matched".into());
    params.insert("boundary_terms".into(), (naive_rhs - rhs).norm().into());
    Ok(VerificationReport::new("dirichlet-lemma", lhs, rhs, budget, tolerance, params).with_runtime(start))
}

/// The four aggregates shared by the sieving identity and its rearrangement.
pub struct SieveParts {
    pub p: u64,
    pub q: u64,
    pub s: SpectralPoint,
    /// S(p,q;s,W).
    pub s_pq: AggregateValue,
    /// The twisted proxy zeta_q(2s)^2 sum lambda lambda (mn)^-s K(m, pn, q).
    pub twisted: AggregateValue,
    /// The untwisted proxies at levels q and pq.
    pub n1_q: AggregateValue,
    pub n1_pq: AggregateValue,
    params: Params,
    elapsed_ms: f64,
}

pub fn sieve_parts(p: u64, q: u64, s: SpectralPoint, weight: &dyn Weight, policy: &TruncationPolicy) -> Result<SieveParts> {
    let start = Instant::now();
    check_pair(p, q)?;
    let s_pq = s_sum(p, q, s, weight, policy)?;
    let twisted = moment_proxy(p, q, s, weight, policy)?;
    let n1_q = moment_proxy(1, q, s, weight, policy)?;
    let n1_pq = moment_proxy(1, p * q, s, weight, policy)?;
    let mut params = base_params(p, q, s.s, weight.label(), policy);
    record(&mut params, "S", &s_pq);
    record(&mut params, "N(p,q)", &twisted);
    record(&mut params, "N(1,q)", &n1_q);
    record(&mut params, "N(1,pq)", &n1_pq);
    Ok(SieveParts { p, q, s, s_pq, twisted, n1_q, n1_pq, params, elapsed_ms: start.elapsed().as_secs_f64() * 1e3 })
}

struct SieveCoefficients {
    lp_ps: Complex64,
    p_2s: Complex64,
    p_half: f64,
    zq2: Complex64,
    zpq2: Complex64,
}

impl SieveParts {
    fn coefficients(&self) -> Result<SieveCoefficients> {
        let s = self.s.s;
        let zq = zeta_restricted(2.0 * s, self.q)?;
        let zpq = zeta_restricted(2.0 * s, self.p * self.q)?;
        let p_s = cpow(self.p as f64, -s);
        Ok(SieveCoefficients {
            lp_ps: lambda_at(self.p)? * p_s,
            p_2s: p_s * p_s,
            p_half: (self.p as f64).powf(-0.5),
            zq2: zq * zq,
            zpq2: zpq * zpq,
        })
    }

    fn finish(&self, identity: &str, lhs: Complex64, rhs: Complex64, budget: f64, tolerance: f64) -> VerificationReport {
        let mut r = VerificationReport::new(identity, lhs, rhs, budget, tolerance, self.params.clone());
        r.runtime_ms = self.elapsed_ms;
        r
    }

    /// (1 + p^-2s) sum lambda lambda (mn)^-s K(m,pn,q)
    ///   = S(p,q) - p^-1/2 zeta_pq(2s)^-2 N(1,pq) + lambda(p) p^-s zeta_q(2s)^-2 N(1,q).
    pub fn sieve_report(&self, tolerance: f64) -> Result<VerificationReport> {
        let k = self.coefficients()?;
        let lhs = (1.0 + k.p_2s) * self.twisted.value / k.zq2;
        let c1 = k.p_half / k.zpq2;
        let c2 = k.lp_ps / k.zq2;
        let rhs = self.s_pq.value - c1 * self.n1_pq.value + c2 * self.n1_q.value;
        let budget = ((1.0 + k.p_2s) / k.zq2).norm() * self.twisted.budget.total()
            + self.s_pq.budget.total()
            + c1.norm() * self.n1_pq.budget.total()
            + c2.norm() * self.n1_q.budget.total();
        Ok(self.finish("sieve", lhs, rhs, budget, tolerance))
    }

    /// N(p,q) = 2 lambda(p) p^-s/(1 + p^-2s) N(1,q) - p^-1/2 N(1,pq)/(1 - p^-4s) + zeta_pq(2s)^2 S(p,q)/(1 - p^-4s),
    /// with N(p,q) = lambda(p) p^-s N(1,q) + (1 - p^-2s) times the twisted proxy.
    pub fn ng_s_report(&self, tolerance: f64) -> Result<VerificationReport> {
        let k = self.coefficients()?;
        let d4 = 1.0 - k.p_2s * k.p_2s;
        let lhs = k.lp_ps * self.n1_q.value + (1.0 - k.p_2s) * self.twisted.value;
        let a = 2.0 * k.lp_ps / (1.0 + k.p_2s);
        let b = k.p_half / d4;
        let c = k.zpq2 / d4;
        let rhs = a * self.n1_q.value - b * self.n1_pq.value + c * self.s_pq.value;
        // N(1,q) enters both sides; its net coefficient is what the error sees
        let budget = (k.lp_ps - a).norm() * self.n1_q.budget.total()
            + (1.0 - k.p_2s).norm() * self.twisted.budget.total()
            + b.norm() * self.n1_pq.budget.total()
            + c.norm() * self.s_pq.budget.total();
        Ok(self.finish("ng-s", lhs, rhs, budget, tolerance))
    }
}

pub fn verify_sieve(p: u64, q: u64, s: SpectralPoint, weight: &dyn Weight, policy: &TruncationPolicy, tolerance: f64) -> Result<VerificationReport> {
    sieve_parts(p, q, s, weight, policy)?.sieve_report(tolerance)
}

pub fn verify_ng_s(p: u64, q: u64, s: SpectralPoint, weight: &dyn Weight, policy: &TruncationPolicy, tolerance: f64) -> Result<VerificationReport> {
    sieve_parts(p, q, s, weight, policy)?.ng_s_report(tolerance)
}

/// Phi tabulation range and step for the dual side.
const PHI_X_LO: f64 = 0.3;
const PHI_X_HI: f64 = 2.5e4;
/// |Phi| below this fraction of its peak is outside the summation window.
const PHI_SUPPORT_REL: f64 = 1e-13;

/// Phi for the weight-12 form at s, tabulated over the range the dual sums reach.
pub fn phi_weight(testfn: &TestFunction, s: SpectralPoint) -> Result<PhiWeight> {
    if testfn.vanishing_order < 12 {
        return Err(Error::InvalidArgument(format!(
            "{} vanishes to order {} at 0, need at least 12",
            testfn.name, testfn.vanishing_order
        )));
    }
    let cache = PhiCache::build(PhiTransformParams::new(*testfn, s.s), PHI_X_LO, PHI_X_HI, PhiCache::DEFAULT_LOG_STEP)?;
    Ok(PhiWeight::new(cache, PHI_SUPPORT_REL))
}

/// Both sides of sqrt(q) S(p,q;s,phi) = (p/q)^(2s-1) sqrt(p) S(q,p;s,Phi), divided by sqrt(q).
pub struct ReciprocitySides {
    pub lhs: AggregateValue,
    /// S(q,p;s,Phi) times (p/q)^(2s-1) sqrt(p/q).
    pub rhs: AggregateValue,
}

pub fn reciprocity_sides(
    p: u64,
    q: u64,
    s: SpectralPoint,
    testfn: &TestFunction,
    phi: &PhiWeight,
    policy: &TruncationPolicy,
    sabotage: bool,
) -> Result<ReciprocitySides> {
    check_pair(p, q)?;
    let lhs = s_sum(p, q, s, testfn, policy)?;
    let dual = s_sum(q, p, s, phi, &policy.dual())?;
    let r = p as f64 / q as f64;
    // the sabotaged run uses the exponent 2s in place of 2s - 1
    let e = if sabotage { 2.0 * s.s } else { 2.0 * s.s - 1.0 };
    Ok(ReciprocitySides { lhs, rhs: dual.scaled(cpow(r, e) * r.sqrt()) })
}

pub fn verify_reciprocity(
    p: u64,
    q: u64,
    s: SpectralPoint,
    testfn: &TestFunction,
    policy: &TruncationPolicy,
    tolerance: f64,
    sabotage: bool,
) -> Result<VerificationReport> {
    let start = Instant::now();
    check_pair(p, q)?;
    let phi = phi_weight(testfn, s)?;
    let sides = reciprocity_sides(p, q, s, testfn, &phi, policy, sabotage)?;
    let mut params = base_params(p, q, s.s, testfn.name.to_string(), policy);
    params.insert("dual_mn_cap".into(), policy.dual_mn_cap.into());
    params.insert("sabotage".into(), (if sabotage { "exponent 2s" } else { "none" }).into());
    params.insert("phi_decay_exponent".into(), phi.decay_exponent().into());
    params.insert("phi_support_hi".into(), phi.support().1.into());
    record(&mut params, "lhs", &sides.lhs);
    record(&mut params, "rhs", &sides.rhs);
    params.insert("rhs.stratum_decay_exponent".into(), sides.rhs.decay_exponent.into());
    let budget = sides.lhs.budget.total() + sides.rhs.budget.total();
    Ok(VerificationReport::new("reciprocity", sides.lhs.value, sides.rhs.value, budget, tolerance, params)
        .with_contours(phi.cache.contours_used())
        .with_runtime(start))
}
