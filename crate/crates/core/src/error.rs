use thiserror::Error;

/// Every failure the library can report. Variants are grouped by the stage
/// that produces them; the CLI maps them onto exit codes via [`Error::is_internal`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // modular arithmetic
    #[error("{value} is not invertible modulo {modulus}")]
    NonInvertible { value: u64, modulus: u64 },
    #[error("discrete logarithm of 0 modulo {modulus}")]
    ZeroArgument { modulus: u64 },
    #[error("p = {p} does not divide q - 1 = {}", q - 1)]
    IncompatiblePrimes { p: u64, q: u64 },
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),

    // q-series
    #[error("coefficient rings differ: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("binary quadratic form ({a}, {b}, {c}) is not positive definite")]
    NotPositiveDefinite { a: i64, b: i64, c: i64 },
    #[error("unsupported discriminant {0}; built-in fields are -23 and -31")]
    UnsupportedDiscriminant(i64),
    #[error("half-difference of theta series is not integral at index {0}")]
    NonIntegralTheta(usize),

    // modular symbols
    #[error("Hecke index {n} is composite and shares a factor with level {level}")]
    BadIndex { n: u64, level: u64 },
    #[error("{n} does not exactly divide level {level}")]
    NotExactDivisor { n: u64, level: u64 },
    #[error("p = {p} divides the level {level}")]
    PrimeDividesLevel { p: u64, level: u64 },
    #[error("could not reach cusp-form dimension {expected} at level {level} (got {got})")]
    BasisRankDeficient { level: u64, expected: usize, got: usize },
    #[error("p-adic precision exhausted while saturating at p = {p} (depth {depth})")]
    PrecisionExhausted { p: u64, depth: u32 },
    #[error("basis has {have} coefficients but {need} are required")]
    InsufficientPrecision { have: usize, need: usize },

    // Hecke pipeline
    #[error("series is not in the span of the level {level} basis mod {p}: {reason}")]
    NotInSpan { level: u64, p: u64, reason: String },
    #[error("trace from level {from} to level {to} is not an oldform for either operator order")]
    TraceNotOldform { from: u64, to: u64 },
    #[error("Eisenstein component at (q, p) = ({q}, {p}) has dimension {rank}, not 1, after primes up to {bound}")]
    EisensteinRankNotOne { q: u64, p: u64, rank: usize, bound: u64 },
    #[error("Eisenstein projector at (q, p) = ({q}, {p}) disagrees with the Merel unit")]
    MazurMismatch { q: u64, p: u64 },
    #[error("Eisenstein eigenvalue {eigenvalue} of T_{ell} is missing from its characteristic polynomial mod {p}")]
    MissingEisensteinEigenvalue { ell: u64, eigenvalue: u64, p: u64 },

    // cubic fields
    #[error("q = {q} divides the field discriminant {disc}")]
    RamifiedPrime { q: u64, disc: i64 },
    #[error("cubic has {roots} roots modulo {q}; Frobenius is not a transposition")]
    NotTransposition { q: u64, roots: usize },

    // orchestration
    #[error("request failed validation: {0}")]
    Validation(String),
    #[error("cache error: {0}")]
    Cache(String),
}

impl Error {
    /// True for errors that indicate an inconsistency inside the pipeline
    /// rather than a bad request.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::NotInSpan { .. }
                | Error::TraceNotOldform { .. }
                | Error::EisensteinRankNotOne { .. }
                | Error::MissingEisensteinEigenvalue { .. }
                | Error::MazurMismatch { .. }
                | Error::BasisRankDeficient { .. }
                | Error::PrecisionExhausted { .. }
                | Error::InsufficientPrecision { .. }
                | Error::NonIntegralTheta(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
