//! Special functions, quadrature and the registry of test functions.

pub mod bessel;
pub mod contour;
pub mod gamma;
pub mod incgamma;
pub mod quad;
pub mod testfn;
pub mod zeta;

pub use bessel::{bessel_j_imag, bessel_j_int};
pub use contour::{vertical_line_integral, ContourResult, ContourSpec};
pub use gamma::{gamma, gamma_ratio, gamma_real, ln_gamma};
pub use testfn::{mellin, test_function, TestFunction, EXP13, GAUSS13, REGISTRY};
pub use zeta::{zeta, zeta_restricted};
