//! Exact arithmetic for Artin-Schreier hyperelliptic curves `y^2 - y = f(x)`
//! over binary fields.
//!
//! The crate decides Newton polygons and supersingularity by brute-force
//! point counting over extension fields, and independently implements the
//! 2-adic coefficient machinery of the series `(1 + 4f)^(-1/2)`: digit-sum
//! valuations, index-tuple boxes, and bounded slope certificates. The two
//! routes cross-validate each other; the `explorer` module sweeps normal
//! forms over small fields and checks every prediction against the
//! point-counting ground truth.

pub mod boxes;
pub mod cache;
pub mod curves;
pub mod explorer;
pub mod fields;
pub mod slope_cert;
pub mod two_adic;
pub mod zeta;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("extension degree m={0} out of range 1..=32")]
    DegreeOutOfRange(u32),
    #[error("polynomial {0:#b} is not irreducible of degree {1}")]
    ReducibleModulus(u64, u32),
    #[error("source degree {src} does not divide target degree {tgt}")]
    NonDivisibleDegrees { src: u32, tgt: u32 },
    #[error("empty coefficient vector")]
    EmptyCoefficients,
    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,
    #[error("curve degenerates to genus 0 after odd reduction")]
    DegenerateCurve,
    #[error("constant term has nonzero trace; the shift y -> y + s has no root in this field")]
    ConstantNotRemovable,
    #[error("x-scaling must be nonzero")]
    ZeroScaling,
    #[error("shift polynomial degree exceeds the genus bound")]
    ShiftDegreeTooLarge,
    #[error("no degree-{0} root of the leading coefficient within the supported field sizes")]
    NoMonicScaling(usize),
    #[error("coefficient index {0} must be odd and below twice the genus")]
    KillIndexInvalid(usize),
    #[error("binomial parity precondition fails for index {0}: no shifted copy is dominated by the degree")]
    KillPreconditionFailed(usize),
    #[error("curve is not in odd reduced form")]
    NotOddReduced,
    #[error("curve is not monic")]
    NotMonic,
    #[error("extension degree {0} exceeds the supported cap")]
    ExtensionTooLarge(u32),
    #[error("precision K={0} out of range 1..=62")]
    PrecisionOutOfRange(u32),
    #[error("precision K={k} too small; requested bounds need at least {needed}")]
    PrecisionTooSmall { k: u32, needed: u32 },
    #[error("series degree {0} exceeds the cap {1}")]
    SeriesDegreeTooLarge(u64, u64),
    #[error("series parameter N={0} must be at least 1")]
    InvalidSeriesExponent(u32),
    #[error("lifted leading coefficient must be exactly 1")]
    LiftNotMonic,
    #[error("enumeration index r={0} exceeds the cap {1}")]
    EnumerationCapExceeded(u64, u64),
    #[error("genus {0} is below the minimum 3")]
    GenusTooSmall(usize),
    #[error("lambda must lie in [0, 1/2]")]
    LambdaOutOfRange,
    #[error("certificate query is missing {0}")]
    MissingQueryField(&'static str),
    #[error("slope hint must exceed 1/h for the schedule to exist")]
    ScheduleUndefined,
    #[error("sweep over {0} coefficient bits is too large")]
    SweepTooLarge(u32),
    #[error("cache entry for ({key}, {n}) already holds {old}, refusing to overwrite with {new}")]
    CacheInconsistent {
        key: String,
        n: u32,
        old: u64,
        new: u64,
    },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
