//! Additive twists L(s,g,d/c) of the weight-12 discriminant form and the
//! double Dirichlet series D_g(a,b,c;s).

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::analysis::gamma::gamma;
use crate::analysis::incgamma::upper_gamma;
use crate::arith::{gcd, inverse, reduce};
use crate::coeffs::shared_table;
use crate::error::{Error, Result};
use crate::summation::ComplexKahan;

const WEIGHT: u32 = 12;
const MAX_TERMS: usize = 200_000;
/// Terms below this fraction of the largest one are dropped.
const TERM_CUTOFF: f64 = 1e-18;

/// The twist x = d/c.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdditiveTwist {
    pub d: i64,
    pub c: u64,
    pub weight: u32,
}

impl AdditiveTwist {
    pub fn new(d: i64, c: u64, weight: u32) -> Result<Self> {
        if weight != WEIGHT {
            return Err(Error::UnsupportedWeight(weight));
        }
        if c == 0 || gcd(reduce(d, c), c) != 1 {
            return Err(Error::NotCoprime { a: d, c });
        }
        Ok(Self { d, c, weight })
    }

    /// The dual twist -dbar/c.
    pub fn dual(&self) -> Self {
        let dbar = inverse(self.d, self.c).expect("coprime by construction") as i64;
        Self { d: -dbar, c: self.c, weight: self.weight }
    }

    fn residue(&self) -> usize {
        reduce(self.d, self.c) as usize
    }
}

/// (-1)^(kappa/2), kept explicit for other even weights.
fn root_number(weight: u32) -> f64 {
    if (weight / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn unit_root(j: u64, c: u64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (j % c) as f64 / c as f64)
}

/// Partial Dirichlet series with a divisor-bound tail estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectValue {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// Bound for the sum over m > M of tau_0(m) m^-sigma, from the integral of ln x + 2 gamma_E.
pub fn divisor_tail(m_cut: usize, sigma: f64) -> f64 {
    let m = m_cut.max(2) as f64;
    let a = sigma - 1.0;
    m.powf(-a) * ((m.ln() + 2.0 * 0.5772156649015329 + 1.0) / a + 1.0 / (a * a)) + m.powf(-sigma) * 2.0 * m.ln()
}

/// L(s, r/c) for every residue r, by the truncated Dirichlet series.
fn family_direct(s: Complex64, c: u64, m_cut: usize) -> Result<Vec<Complex64>> {
    if s.re < 1.2 {
        return Err(Error::DirectSeriesDiverges(s.re));
    }
    let table = shared_table(m_cut)?;
    let cu = c as usize;
    let mut bins = vec![ComplexKahan::new(); cu];
    for m in 1..=m_cut {
        let term = (-s * (m as f64).ln()).exp() * table.lambda(m);
        bins[m % cu].add(term);
    }
    let bins: Vec<Complex64> = bins.iter().map(|b| b.value()).collect();
    Ok((0..c)
        .map(|r| {
            let mut acc = ComplexKahan::new();
            for (j, b) in bins.iter().enumerate() {
                acc.add(b * unit_root(j as u64 * r, c));
            }
            acc.value()
        })
        .collect())
}

pub fn l_additive_direct(s: Complex64, tw: AdditiveTwist, m_cut: usize) -> Result<DirectValue> {
    let values = family_direct(s, tw.c, m_cut)?;
    Ok(DirectValue { value: values[tw.residue()], tail_bound: divisor_tail(m_cut, s.re) })
}

/// Rotation of the Mellin contour: large |Im s| would otherwise cancel catastrophically.
fn rotation(t: f64) -> f64 {
    if t.abs() <= 4.0 {
        0.0
    } else {
        t.signum() * (0.5 * PI - 100f64.ln() / t.abs())
    }
}

/// L(s, r/c) for every unit r (other entries zero), from the split Mellin integral
/// Gamma(w) L = sum lambda(n) e(nr/c) n^-s Gamma(w, 2 pi n e^(i psi)/c)
///            + i^-kappa (2 pi/c)^(2s-1) sum lambda(n) e(-n rbar/c) n^(s-1) Gamma(kappa-w, 2 pi n e^(-i psi)/c)
/// with w = s + (kappa-1)/2.
fn family_continued(s: Complex64, c: u64) -> Result<Vec<Complex64>> {
    if s.norm() > 30.0 {
        return Err(Error::InvalidArgument(format!("continuation limited to |s| <= 30, got {s}")));
    }
    let kappa = WEIGHT as f64;
    let w = s + 0.5 * (kappa - 1.0);
    let w_dual = kappa - w;
    let psi = rotation(s.im);
    let rot = Complex64::from_polar(1.0, psi);
    let base = TAU / c as f64;
    let cu = c as usize;

    let mut need = 4 * cu + 64;
    let mut table = shared_table(need)?;
    let mut front = vec![ComplexKahan::new(); cu];
    let mut back = vec![ComplexKahan::new(); cu];
    let mut peak = 0.0f64;
    let mut quiet = 0;
    let mut n = 0usize;
    loop {
        n += 1;
        if n > MAX_TERMS {
            return Err(Error::ContinuationTail(peak));
        }
        if n > table.n_max {
            need *= 2;
            table = shared_table(need)?;
        }
        let lam = table.lambda(n);
        let ln_n = (n as f64).ln();
        let z = rot * (base * n as f64);
        let t1 = (-s * ln_n).exp() * upper_gamma(w, z)? * lam;
        let t2 = ((s - 1.0) * ln_n).exp() * upper_gamma(w_dual, z.conj())? * lam;
        front[n % cu].add(t1);
        back[n % cu].add(t2);
        let size = t1.norm() + t2.norm();
        peak = peak.max(size);
        // past the hump of the incomplete Gamma, stop after a run of negligible terms
        let past = z.norm() > 2.0 * w.norm().max(w_dual.norm()).max(1.0);
        if past && size <= TERM_CUTOFF * peak && lam != 0.0 {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else if lam != 0.0 {
            quiet = 0;
        }
    }
    let front: Vec<Complex64> = front.iter().map(|b| b.value()).collect();
    let back: Vec<Complex64> = back.iter().map(|b| b.value()).collect();
    let sign = root_number(WEIGHT);
    let dual_factor = (Complex64::new(base, 0.0).ln() * (2.0 * s - 1.0)).exp() * sign;
    let gw = gamma(w)?;
    let mut out = vec![Complex64::new(0.0, 0.0); cu];
    for r in 0..c {
        let Some(rbar) = inverse(r as i64, c) else { continue };
        let mut a = ComplexKahan::new();
        let mut b = ComplexKahan::new();
        for j in 0..cu {
            a.add(front[j] * unit_root(j as u64 * r, c));
            b.add(back[j] * unit_root((c - (j as u64 * rbar) % c) % c, c));
        }
        out[r as usize] = (a.value() + dual_factor * b.value()) / gw;
    }
    Ok(out)
}

/// Value of the entire continuation of L(s, g, d/c).
pub fn l_additive_continued(s: Complex64, tw: AdditiveTwist) -> Result<Complex64> {
    Ok(family_continued(s, tw.c)?[tw.residue()])
}

/// (-1)^(kappa/2) (2 pi/c)^(2s-1) Gamma((kappa+1)/2 - s) / Gamma((kappa-1)/2 + s).
pub fn fe_factor(s: Complex64, c: u64, weight: u32) -> Result<Complex64> {
    let k = weight as f64;
    let ln_base = (TAU / c as f64).ln();
    let ratio = gamma(0.5 * (k + 1.0) - s)? / gamma(0.5 * (k - 1.0) + s)?;
    Ok((ln_base * (2.0 * s - 1.0)).exp() * ratio * root_number(weight))
}

/// Both sides of a functional equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeComparison {
    pub lhs: Complex64,
    pub rhs: Complex64,
}

impl FeComparison {
    pub fn gap(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }
}

pub fn l_fe_compare(s: Complex64, tw: AdditiveTwist) -> Result<FeComparison> {
    let lhs = l_additive_continued(s, tw)?;
    let dual = l_additive_continued(1.0 - s, tw.dual())?;
    Ok(FeComparison { lhs, rhs: fe_factor(s, tw.c, tw.weight)? * dual })
}

pub fn l_fe_gap(s: Complex64, tw: AdditiveTwist) -> Result<f64> {
    Ok(l_fe_compare(s, tw)?.gap())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DgParams {
    pub a: i64,
    pub b: i64,
    pub c: u64,
    pub s: Complex64,
}

impl DgParams {
    pub fn new(a: i64, b: i64, c: u64, s: Complex64) -> Result<Self> {
        for x in [a, b] {
            if c == 0 || gcd(reduce(x, c), c) != 1 {
                return Err(Error::NotCoprime { a: x, c });
            }
        }
        Ok(Self { a, b, c, s })
    }

    /// Parameters (abar, bbar, c; 1-s) of the dual side.
    pub fn dual(&self) -> Self {
        let inv = |x| inverse(x, self.c).expect("coprime by construction") as i64;
        Self { a: inv(self.a), b: inv(self.b), c: self.c, s: 1.0 - self.s }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluator {
    /// Truncated Dirichlet series with the given cutoff.
    Direct(usize),
    Continued,
}

/// D_g(a,b,c;s) = sum over units d mod c of L(s, a dbar/c) L(s, b d/c).
pub fn dg(params: DgParams, evaluator: Evaluator) -> Result<Complex64> {
    let c = params.c;
    let values = match evaluator {
        Evaluator::Direct(m) => family_direct(params.s, c, m)?,
        Evaluator::Continued => family_continued(params.s, c)?,
    };
    let (a, b) = (reduce(params.a, c) as u128, reduce(params.b, c) as u128);
    let mut acc = ComplexKahan::new();
    for d in 0..c {
        let Some(dbar) = inverse(d as i64, c) else { continue };
        let x = (a * dbar as u128 % c as u128) as usize;
        let y = (b * d as u128 % c as u128) as usize;
        acc.add(values[x] * values[y]);
    }
    Ok(acc.value())
}

pub fn dg_fe_compare(params: DgParams) -> Result<FeComparison> {
    let lhs = dg(params, Evaluator::Continued)?;
    let dual = dg(params.dual(), Evaluator::Continued)?;
    let f = fe_factor(params.s, params.c, WEIGHT)?;
    Ok(FeComparison { lhs, rhs: f * f * dual })
}

pub fn dg_fe_gap(params: DgParams) -> Result<f64> {
    Ok(dg_fe_compare(params)?.gap())
}
