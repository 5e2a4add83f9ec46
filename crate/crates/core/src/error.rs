use thiserror::Error;

/// Errors raised by the verification engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{a} is not invertible modulo {c}")]
    NotCoprime { a: i64, c: u64 },
    #[error("modulus {c} is not coprime to the level {level}")]
    ModulusNotAllowed { c: u64, level: u64 },
    #[error("Kloosterman row for modulus {c} needs {bytes} bytes, cap is {cap}")]
    RowTooLarge { c: u64, bytes: usize, cap: usize },
    #[error("weight {0} is not supported (only 12)")]
    UnsupportedWeight(u32),
    #[error("exact integer overflow while {0}")]
    NeedsWidening(&'static str),
    #[error("Gamma has a pole at {0}")]
    GammaPole(f64),
    #[error("zeta has a pole at s = 1")]
    ZetaPole,
    #[error("Bessel argument out of range: {0}")]
    BesselRange(String),
    #[error("Re(u) = {re} lies outside the Mellin strip ({lo}, {hi})")]
    MellinStrip { re: f64, lo: f64, hi: f64 },
    #[error("vertical-line integrand does not decay: |f| = {last:e} at height {height}")]
    ContourTail { last: f64, height: f64 },
    #[error("no admissible contour: window ({lo}, {hi}) is empty")]
    NoAdmissibleContour { lo: f64, hi: f64 },
    #[error("Dirichlet series diverges at Re(s) = {0} (need >= 1.2)")]
    DirectSeriesDiverges(f64),
    #[error("continuation series did not reach tolerance (estimated error {0:e})")]
    ContinuationTail(f64),
    #[error("Dirichlet series diverges at Re(u) = {0} (need > 1)")]
    SeriesDiverges(f64),
    #[error("p and q must be distinct primes (got {0} twice)")]
    EqualPrimes(u64),
    #[error("Re(s) = {0} is not in the half-plane Re(s) > 5/4")]
    OutsideHalfPlane(f64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("Hecke table holds n <= {have}, need {need}")]
    TableTooShort { have: usize, need: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Short machine-readable tag, used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotCoprime { .. } => "NotCoprime",
            Error::ModulusNotAllowed { .. } => "ModulusNotAllowed",
            Error::RowTooLarge { .. } => "RowTooLarge",
            Error::UnsupportedWeight(_) => "UnsupportedWeight",
            Error::NeedsWidening(_) => "NeedsWidening",
            Error::GammaPole(_) => "GammaPole",
            Error::ZetaPole => "ZetaPole",
            Error::BesselRange(_) => "BesselRange",
            Error::MellinStrip { .. } => "MellinStrip",
            Error::ContourTail { .. } => "ContourTail",
            Error::NoAdmissibleContour { .. } => "NoAdmissibleContour",
            Error::DirectSeriesDiverges(_) => "DirectSeriesDiverges",
            Error::ContinuationTail(_) => "ContinuationTail",
            Error::SeriesDiverges(_) => "SeriesDiverges",
            Error::EqualPrimes(_) => "EqualPrimes",
            Error::OutsideHalfPlane(_) => "OutsideHalfPlane",
            Error::NotPrime(_) => "NotPrime",
            Error::TableTooShort { .. } => "TableTooShort",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
