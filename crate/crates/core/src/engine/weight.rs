//! Weights x -> W(x) fed to the Kloosterman aggregates.

use num_complex::Complex64;

use crate::analysis::TestFunction;
use crate::transforms::PhiCache;

pub trait Weight: Sync {
    fn eval(&self, x: f64) -> Complex64;

    /// Default summation window.
    fn support(&self) -> (f64, f64);

    /// Largest |W| anywhere.
    fn peak(&self) -> f64;

    /// An upper estimate of |W(y)| over y >= x.
    fn sup_beyond(&self, x: f64) -> f64 {
        geometric_sup(|y| self.eval(y).norm(), x, 1e4 * x)
    }

    fn label(&self) -> String;
}

/// Max of f over a geometric grid on [lo, hi], 64 points per e-fold.
fn geometric_sup(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let n = ((hi / lo).ln() * 64.0).ceil().max(1.0) as usize;
    let step = (hi / lo).ln() / n as f64;
    (0..=n).map(|i| f(lo * (step * i as f64).exp())).fold(0.0, f64::max)
}

impl Weight for TestFunction {
    fn eval(&self, x: f64) -> Complex64 {
        Complex64::new(self.evaluate(x), 0.0)
    }

    fn support(&self) -> (f64, f64) {
        self.effective_support
    }

    fn peak(&self) -> f64 {
        let (lo, hi) = self.effective_support;
        geometric_sup(|y| self.evaluate(y).abs(), lo, hi)
    }

    fn label(&self) -> String {
        self.name.to_string()
    }
}

/// A tabulated Phi with its effective support read off the grid.
#[derive(Debug, Clone)]
pub struct PhiWeight {
    pub cache: PhiCache,
    peak: f64,
    support: (f64, f64),
    /// Node abscissas and suffix maxima of |Phi| on the grid.
    nodes: Vec<f64>,
    suffix_max: Vec<f64>,
}

impl PhiWeight {
    /// Window where |Phi| reaches `rel` of its peak.
    pub fn new(cache: PhiCache, rel: f64) -> Self {
        let n = 4000;
        let (lo, hi) = (cache.x_lo, cache.x_hi);
        let step = (hi / lo).ln() / n as f64;
        let nodes: Vec<f64> = (0..=n).map(|i| lo * (step * i as f64).exp()).collect();
        let mags: Vec<f64> = nodes.iter().map(|&x| cache.eval(x).norm()).collect();
        let peak = mags.iter().cloned().fold(0.0, f64::max);
        let first = mags.iter().position(|&m| m >= rel * peak).unwrap_or(0);
        let last = mags.iter().rposition(|&m| m >= rel * peak).unwrap_or(n);
        let mut suffix_max = mags.clone();
        for i in (0..n).rev() {
            suffix_max[i] = suffix_max[i].max(suffix_max[i + 1]);
        }
        let support = (nodes[first.saturating_sub(1)], nodes[(last + 1).min(n)]);
        Self { cache, peak, support, nodes, suffix_max }
    }

    /// Exponent a of the envelope |Phi(x)| ~ x^-a over the top decade of the grid.
    pub fn decay_exponent(&self) -> f64 {
        let n = self.nodes.len() - 1;
        let i = self.nodes.partition_point(|&y| y < self.nodes[n] / 10.0);
        -(self.suffix_max[n] / self.suffix_max[i]).ln() / (self.nodes[n] / self.nodes[i]).ln()
    }
}

impl Weight for PhiWeight {
    #[inline]
    fn eval(&self, x: f64) -> Complex64 {
        if x < self.cache.x_lo || x > self.cache.x_hi {
            return Complex64::new(0.0, 0.0);
        }
        self.cache.eval(x)
    }

    fn support(&self) -> (f64, f64) {
        self.support
    }

    fn peak(&self) -> f64 {
        self.peak
    }

    fn sup_beyond(&self, x: f64) -> f64 {
        let i = self.nodes.partition_point(|&y| y < x);
        // beyond the grid Phi decays like a power; the last tabulated value bounds it
        self.suffix_max.get(i.saturating_sub(1)).copied().unwrap_or(*self.suffix_max.last().unwrap())
    }

    fn label(&self) -> String {
        format!("Phi[{}]", self.cache.s)
    }
}

/// A finite linear combination of weights.
pub struct Combination<'a> {
    pub terms: Vec<(Complex64, &'a dyn Weight)>,
}

impl Weight for Combination<'_> {
    fn eval(&self, x: f64) -> Complex64 {
        self.terms.iter().map(|(a, w)| a * w.eval(x)).sum()
    }

    fn support(&self) -> (f64, f64) {
        self.terms.iter().fold((f64::INFINITY, 0.0), |(lo, hi), (_, w)| {
            let (a, b) = w.support();
            (lo.min(a), hi.max(b))
        })
    }

    fn peak(&self) -> f64 {
        self.terms.iter().map(|(a, w)| a.norm() * w.peak()).sum()
    }

    fn sup_beyond(&self, x: f64) -> f64 {
        self.terms.iter().map(|(a, w)| a.norm() * w.sup_beyond(x)).sum()
    }

    fn label(&self) -> String {
        let parts: Vec<String> = self.terms.iter().map(|(a, w)| format!("({a})*{}", w.label())).collect();
        parts.join(" + ")
    }
}
