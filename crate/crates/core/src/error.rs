use thiserror::Error;

pub type Result<T> = std::result::Result<T, TomoError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TomoError {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("operator is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("trace {trace} differs from 1")]
    NotUnitTrace { trace: f64 },

    #[error("operator is not positive semi-definite (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("operator is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("POVM effects do not sum to the identity (deviation {deviation:.3e})")]
    NotComplete { deviation: f64 },

    #[error("measurement set is not informationally complete (condition number {condition:.3e})")]
    NotInformationallyComplete { condition: f64 },

    #[error("probes do not span operator space (condition number {condition:.3e})")]
    ProbesDoNotSpan { condition: f64 },

    #[error("Choi matrix is not trace preserving (deviation {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    #[error("zero shots for measurement setting {setting}")]
    ZeroShots { setting: usize },

    #[error("measurement record does not match the design: {0}")]
    MisalignedRecord(String),

    #[error(
        "state estimates come from different measurement setups; a shared precision is undefined"
    )]
    MixedSetups,

    #[error("projection did not converge after {iterations} iterations (residual {residual:.3e})")]
    ProjectionNotConverged { iterations: usize, residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl TomoError {
    /// True for failures of a mathematical precondition on otherwise
    /// well-formed input: a rank-deficient measurement or probe set, or a
    /// projection that did not converge.
    pub fn is_precondition_failure(&self) -> bool {
        matches!(
            self,
            TomoError::NotInformationallyComplete { .. }
                | TomoError::ProbesDoNotSpan { .. }
                | TomoError::ProjectionNotConverged { .. }
        )
    }
}
