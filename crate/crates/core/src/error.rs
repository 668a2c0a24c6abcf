use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field parameter {0} is not a square-free positive integer")]
    InvalidField(u64),
    #[error("one-form is identically zero")]
    ZeroForm,
    #[error("linear part has zero determinant")]
    ZeroDeterminant,
    #[error("center is not a singular point of the form")]
    NotSingular,
    #[error("dicritical blow-up at step {step}")]
    Dicritical { step: usize },
    #[error("singular point with coordinate outside the field: root of {factor}")]
    NonRepresentablePoint { factor: String },
    #[error("more than {limit} blow-ups required")]
    MaxBlowupsExceeded { limit: usize },
    #[error("jet order {jet_order} is insufficient: {what}")]
    JetOrderInsufficient { jet_order: usize, what: String },
    #[error("Camacho-Sad index requested at a saddle-node")]
    SaddleNodeIndexUnsupported,
    #[error("point does not lie on the requested component")]
    NotIncident,
    #[error("cannot compose an exact germ with a numeric one")]
    MixedModeComposition,
    #[error("logarithmic kernel has dimension {dim}")]
    AmbiguousKernel { dim: usize },
    #[error("invalid simulation parameters: {0}")]
    InvalidParameters(String),
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
}

impl Error {
    pub fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}
