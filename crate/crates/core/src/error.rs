//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown builtin function `{0}`")]
    UnknownFunction(String),

    #[error("invalid parameters for `{name}`: {reason}")]
    BadParameters { name: String, reason: String },

    #[error("cannot parse function specifier `{0}`")]
    BadFunctionSpec(String),

    #[error("integral diverges: partial integrals reached {partial:.6e} without decaying increments")]
    Divergent { partial: f64 },

    #[error("adaptive quadrature hit max depth; best estimate {best:.17e} (err ~ {err_estimate:.3e})")]
    MaxDepth { best: f64, err_estimate: f64 },

    #[error("oscillatory tail did not converge ({0})")]
    NonConvergentTail(String),

    #[error("extrapolation ladder is not Cauchy: differences {0:?}")]
    NonCauchyLadder(Vec<f64>),

    #[error("missing metadata: {0}")]
    MissingMetadata(String),

    #[error("hypothesis check failed: {0}")]
    HypothesisFailed(String),

    #[error("zeta has a pole at s = 1")]
    ZetaPole,

    #[error("linear system is singular")]
    SingularSystem,

    #[error("Nystrom residual {residual:.3e} exceeds the certified bound; increase n_nodes")]
    ResidualTooLarge { residual: f64 },

    #[error("zero grid too coarse even after {retries} refinements")]
    GridTooCoarse { retries: usize },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
