use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A complex number as {re, im}.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Cpx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cpx {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<Cpx> for Complex64 {
    fn from(z: Cpx) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Int(i64),
    Real(f64),
    Complex(Cpx),
    Text(String),
}

impl From<i64> for Param {
    fn from(v: i64) -> Self {
        Param::Int(v)
    }
}

impl From<u64> for Param {
    fn from(v: u64) -> Self {
        Param::Int(v as i64)
    }
}

impl From<usize> for Param {
    fn from(v: usize) -> Self {
        Param::Int(v as i64)
    }
}

impl From<f64> for Param {
    /// Non-finite reals become text so that reports stay valid JSON.
    fn from(v: f64) -> Self {
        if v.is_finite() {
            Param::Real(v)
        } else {
            Param::Text(format!("{v}"))
        }
    }
}

impl From<Complex64> for Param {
    fn from(v: Complex64) -> Self {
        Param::Complex(v.into())
    }
}

impl From<&str> for Param {
    fn from(v: &str) -> Self {
        Param::Text(v.to_string())
    }
}

impl From<String> for Param {
    fn from(v: String) -> Self {
        Param::Text(v)
    }
}

pub type Params = BTreeMap<String, Param>;

/// Outcome of comparing two independently computed sides of an identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub params: Params,
    pub lhs: Cpx,
    pub rhs: Cpx,
    pub abs_gap: f64,
    pub rel_gap: f64,
    /// Truncation budget relative to the larger side.
    pub budget: f64,
    /// Contour abscissas used by any transform on either side.
    pub contours: Vec<f64>,
    pub runtime_ms: f64,
    pub pass: bool,
}

impl VerificationReport {
    /// `abs_budget` is the absolute truncation budget of lhs - rhs.
    pub fn new(identity: &str, lhs: Complex64, rhs: Complex64, abs_budget: f64, tolerance: f64, params: Params) -> Self {
        Self::with_scale(identity, lhs, rhs, abs_budget, lhs.norm().max(rhs.norm()), tolerance, params)
    }

    /// Gaps and budget measured relative to `scale` rather than to the larger side.
    pub fn with_scale(
        identity: &str,
        lhs: Complex64,
        rhs: Complex64,
        abs_budget: f64,
        scale: f64,
        tolerance: f64,
        mut params: Params,
    ) -> Self {
        let abs_gap = (lhs - rhs).norm();
        let (rel_gap, budget) = if scale > 0.0 { (abs_gap / scale, abs_budget / scale) } else { (0.0, 0.0) };
        params.insert("tolerance".into(), tolerance.into());
        params.insert("abs_budget".into(), abs_budget.into());
        params.insert("scale".into(), scale.into());
        Self {
            identity: identity.to_string(),
            params,
            lhs: lhs.into(),
            rhs: rhs.into(),
            abs_gap,
            rel_gap,
            budget,
            contours: Vec::new(),
            runtime_ms: 0.0,
            pass: Self::decide(rel_gap, budget, tolerance),
        }
    }

    /// A check that could not be evaluated.
    pub fn failed(identity: &str, err: &Error, mut params: Params) -> Self {
        params.insert("error".into(), err.kind().into());
        params.insert("message".into(), err.to_string().into());
        Self {
            identity: identity.to_string(),
            params,
            lhs: Cpx::default(),
            rhs: Cpx::default(),
            abs_gap: 0.0,
            rel_gap: 0.0,
            budget: 0.0,
            contours: Vec::new(),
            runtime_ms: 0.0,
            pass: false,
        }
    }

    pub fn decide(rel_gap: f64, budget: f64, tolerance: f64) -> bool {
        rel_gap <= tolerance.max(3.0 * budget)
    }

    pub fn tolerance(&self) -> Option<f64> {
        self.real_param("tolerance")
    }

    pub fn abs_budget(&self) -> Option<f64> {
        self.real_param("abs_budget")
    }

    pub fn real_param(&self, key: &str) -> Option<f64> {
        match self.params.get(key) {
            Some(Param::Real(t)) => Some(*t),
            Some(Param::Int(t)) => Some(*t as f64),
            _ => None,
        }
    }

    pub fn error_kind(&self) -> Option<&str> {
        match self.params.get("error") {
            Some(Param::Text(k)) => Some(k),
            _ => None,
        }
    }

    /// Whether `pass` agrees with the gaps, budget and tolerance recorded alongside it.
    pub fn is_consistent(&self) -> bool {
        match (self.error_kind(), self.tolerance()) {
            (Some(_), _) => !self.pass,
            (None, Some(t)) => self.pass == Self::decide(self.rel_gap, self.budget, t),
            (None, None) => false,
        }
    }

    pub fn with_contours(mut self, contours: Vec<f64>) -> Self {
        self.contours = contours;
        self
    }

    pub fn with_runtime(mut self, start: std::time::Instant) -> Self {
        self.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_follows_from_recorded_fields() {
        let r = VerificationReport::new("x", Complex64::new(1.0, 0.0), Complex64::new(1.002, 0.0), 1e-4, 1e-3, Params::new());
        assert!(!r.pass);
        assert!(r.is_consistent());
        let r = VerificationReport::new("x", Complex64::new(1.0, 0.0), Complex64::new(1.002, 0.0), 1e-3, 1e-3, Params::new());
        assert!(r.pass);
        assert!(r.is_consistent());
    }

    #[test]
    fn zero_against_zero_passes() {
        let r = VerificationReport::new("x", 0.0.into(), 0.0.into(), 0.0, 1e-3, Params::new());
        assert!(r.pass && r.rel_gap == 0.0);
    }

    #[test]
    fn failures_never_pass() {
        let r = VerificationReport::failed("x", &Error::EqualPrimes(2), Params::new());
        assert!(!r.pass && r.is_consistent());
        assert_eq!(r.error_kind(), Some("EqualPrimes"));
    }
}
