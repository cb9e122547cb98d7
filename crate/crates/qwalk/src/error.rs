use crate::coin::CoinDiagnostics;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// The entries do not form a valid coin within the unitarity tolerance.
    #[error("invalid coin operator: {0}")]
    InvalidCoin(CoinDiagnostics),

    /// An initial coin state whose norm is not 1 within 1e-12.
    #[error("coin state norm is {norm}, expected 1 within 1e-12")]
    UnnormalizedCoinState { norm: f64 },

    /// A non-finite number where a finite amplitude or parameter is required.
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    /// Circle topology with fewer than 3 sites.
    #[error("circle radius M must be at least 1, got {m_max}")]
    InvalidCircle { m_max: i64 },

    /// A position outside the valid index range of the topology.
    #[error("position {position} outside [{min}, {max}]")]
    PositionOutOfRange { position: i64, min: i64, max: i64 },

    /// Asymptotic moment formulas require a coin with |a| bounded away
    /// from zero.
    #[error("asymptotic moments undefined: |a| = {a_abs} is below 1e-9")]
    DegenerateCoinAxis { a_abs: f64 },

    /// The Galton closed form diverges as sin(delta) approaches 1.
    #[error("galton moments undefined: sin(delta) = {sin_delta} too close to 1")]
    DegenerateGaltonAngle { sin_delta: f64 },

    /// A cavity design paired with a cebit encoding it cannot act on.
    #[error("cavity design {design} requires a {required} cebit, got {got}")]
    IncompatibleCebit {
        design: &'static str,
        required: &'static str,
        got: &'static str,
    },

    /// Roundtrips per walk step must be a positive integer.
    #[error("roundtrips per step f must be >= 1, got {f}")]
    InvalidSubstepCount { f: u32 },

    /// A field state with no amplitude at all.
    #[error("state has empty support")]
    EmptySupport,
}
