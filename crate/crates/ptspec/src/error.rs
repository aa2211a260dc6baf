use thiserror::Error;

/// Unified error type for the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter fails a documented precondition (range, normalization, unitarity, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Two sampled functions live on incompatible grids for the requested operation.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// An operation was asked of a model family it is not defined for.
    #[error("operation requires a {expected} family, model uses {got}")]
    WrongFamily {
        expected: &'static str,
        got: &'static str,
    },

    /// The function value vanishes (or nearly vanishes) on a search contour,
    /// so a winding number cannot be computed there.
    #[error("function vanishes on the search contour")]
    ZeroOnContour,

    /// The complex root search could not resolve the region.
    #[error("root search failed: {0}")]
    RootSearchFailed(String),

    /// The request is outside the regime where the quantity is defined
    /// (e.g. root listing for a non-discrete spectrum, resolvent at a
    /// spectral point).
    #[error("regime refusal: {0}")]
    RegimeRefusal(String),

    /// No eigenfunction exists at the requested spectral parameter.
    #[error("no eigenfunction: {0}")]
    NoEigenfunction(String),

    /// A numerical computation produced non-finite or unusable values.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
