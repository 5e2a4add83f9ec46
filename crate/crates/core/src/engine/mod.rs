//! Kloosterman-sum aggregates and the identities relating them.

pub mod aggregate;
pub mod checks;
pub mod policy;
pub mod ramanujan;
pub mod report;
pub mod sums;
pub mod verify;
pub mod weight;

pub use aggregate::{aggregate, AggregateValue, Lattice, Stratum};
pub use policy::{SpectralPoint, TailReport, TruncationPolicy};
pub use ramanujan::{ramanujan_dirichlet_series, RamanujanSeries};
pub use report::{Cpx, Param, Params, VerificationReport};
pub use sums::{k_sum, moment_proxy, s_sum};
pub use verify::{
    phi_weight, reciprocity_sides, sieve_parts, verify_dirichlet_lemma, verify_ng_s, verify_reciprocity, verify_sieve,
    ReciprocitySides, SieveParts,
};
pub use weight::{Combination, PhiWeight, Weight};
