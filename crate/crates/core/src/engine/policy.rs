use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_S: f64 = 1.5;
pub const DEFAULT_C_MAX: u64 = 600;
pub const DEFAULT_MN_CAP: usize = 400_000;
/// mn cap for sums weighted by Phi, whose slow decay needs far more terms per stratum.
pub const DEFAULT_DUAL_MN_CAP: usize = 4_000_000;
pub const DEFAULT_TOLERANCE: f64 = 1e-3;

/// A stratum is summed only when |W| beyond its mn cutoff is below this fraction of the peak.
pub const RESOLUTION: f64 = 1e-3;

/// A point s with Re(s) > 5/4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralPoint {
    pub s: Complex64,
}

impl SpectralPoint {
    pub fn new(s: Complex64) -> Result<Self> {
        if s.re <= 1.25 {
            return Err(Error::OutsideHalfPlane(s.re));
        }
        Ok(Self { s })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationPolicy {
    pub c_max: u64,
    /// Argument window; `None` takes the weight's own support.
    pub window: Option<(f64, f64)>,
    pub mn_cap: usize,
    pub dual_mn_cap: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self { c_max: DEFAULT_C_MAX, window: None, mn_cap: DEFAULT_MN_CAP, dual_mn_cap: DEFAULT_DUAL_MN_CAP }
    }
}

impl TruncationPolicy {
    /// Every cutoff doubled.
    pub fn doubled(&self) -> Self {
        Self { c_max: 2 * self.c_max, window: self.window, mn_cap: 2 * self.mn_cap, dual_mn_cap: 2 * self.dual_mn_cap }
    }

    /// The policy applied to the Phi-weighted side.
    pub fn dual(&self) -> Self {
        Self { mn_cap: self.dual_mn_cap, window: None, ..*self }
    }
}

/// Estimated size of everything the truncation left out.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct TailReport {
    /// Strata not summed, either beyond c_max or not resolved within mn_cap.
    pub c_tail: f64,
    /// Terms with argument outside the window.
    pub window_tail: f64,
    /// Terms inside the window cut by mn_cap.
    pub dirichlet_tail: f64,
}

impl TailReport {
    pub fn total(&self) -> f64 {
        self.c_tail + self.window_tail + self.dirichlet_tail
    }

    pub fn scaled(&self, k: f64) -> Self {
        let k = k.abs();
        Self { c_tail: k * self.c_tail, window_tail: k * self.window_tail, dirichlet_tail: k * self.dirichlet_tail }
    }
}

impl std::ops::Add for TailReport {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            c_tail: self.c_tail + o.c_tail,
            window_tail: self.window_tail + o.window_tail,
            dirichlet_tail: self.dirichlet_tail + o.dirichlet_tail,
        }
    }
}
