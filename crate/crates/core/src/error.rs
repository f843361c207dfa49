use alloc::string::String;

/// Errors raised by the numerical and combinatorial routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("chart mismatch: field expects {expected:?}, point is in {found:?}")]
    ChartMismatch {
        expected: crate::fields::ChartId,
        found: crate::fields::ChartId,
    },
    #[error("singular fiber: base value vanishes (|f| = {modulus:e}), real part is identically zero on the fiber")]
    SingularFiber { modulus: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("grid configuration: {0}")]
    Configuration(String),
    #[error("precision: tail bound {bound:e} exceeds tolerance at truncation {have}; need N >= {required}")]
    Precision { bound: f64, have: usize, required: usize },
    #[error("pole: negative exponent with vanishing base at the coordinate boundary")]
    Pole,
    #[error("winding radius: min |f| on the circle is {min_modulus:e}, interpolation error {interp_error:e}")]
    Radius { min_modulus: f64, interp_error: f64 },
    #[error("winding sampling: accumulated winding {winding} is not near an integer")]
    Sampling { winding: f64 },
    #[error("degenerate field: {0} vanishes identically on the disc")]
    DegenerateField(&'static str),
    #[error("non-generic partition pair: {0}")]
    NonGeneric(String),
}

pub type Result<T> = core::result::Result<T, Error>;
