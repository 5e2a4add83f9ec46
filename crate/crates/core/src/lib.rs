//! Numerical verification of a reciprocity formula for sums of Kloosterman sums
//! weighted by Hecke eigenvalues of the discriminant form, together with the
//! arithmetic and analytic identities it rests on.

pub mod analysis;
pub mod arith;
pub mod coeffs;
pub mod engine;
pub mod error;
pub mod exp_sums;
pub mod lfun;
mod ntt;
pub mod summation;
pub mod transforms;

pub use error::{Error, Result};
