use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular matrix (det = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("q = {q} must lie in (0, 1)")]
    InvalidQ { q: f64 },

    #[error("series does not terminate and fails the ratio test")]
    Divergent,

    #[error("lower parameter hits a pole at term {term}")]
    PoleInLowerParameter { term: usize },

    #[error("{family}: invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        family: String,
        name: String,
        reason: String,
    },

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("lattice index {x} outside 0..={n}")]
    IndexOutOfRange { x: usize, n: usize },

    #[error("norm of P_{degree} fell below tolerance; precision exhausted")]
    DegenerateWeight { degree: usize },

    #[error("enumeration of C({s}, {k}) subsets exceeds the limit")]
    TooLarge { s: usize, k: usize },

    #[error("evaluation point is within tolerance of the pole at index {index}")]
    PoleHit { index: usize },

    #[error("{family} does not support {what}")]
    UnsupportedFamily { family: String, what: String },

    #[error("residue condition violated at s = {s} (residual {residual:e})")]
    ResidueViolation { s: usize, residual: f64 },

    #[error("epsilon_s vanishes at s = {s} (|eps| = {magnitude:e}); retry at doubled precision ({hint} bits)")]
    EpsilonSingular { s: usize, magnitude: f64, hint: u32 },

    #[error("parameterization degenerates at s = {s}: {expr} vanishes")]
    DegenerateParameterization { s: usize, expr: &'static str },

    #[error("painleve step singular at s = {s}: {expr} vanishes")]
    DPSingular { s: usize, expr: &'static str },

    #[error("no root of A12(x, t) at s = {s}")]
    RootNotFound { s: usize },

    #[error("kappa_1 equals kappa_2")]
    DegenerateKappa,

    #[error("empty range: s_max = {s_max} is below k = {k}")]
    EmptyRange { k: usize, s_max: usize },

    #[error("non-finite value at s = {s}")]
    NonFinite { s: usize },

    #[error("no agreement between {bits} and {} bits (relative discrepancy {discrepancy:e})", bits * 2)]
    PrecisionExhausted { bits: u32, discrepancy: f64 },
}

impl Error {
    /// Numerical failures as opposed to configuration or support errors.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularMatrix { .. }
                | Error::Divergent
                | Error::PoleInLowerParameter { .. }
                | Error::DegenerateWeight { .. }
                | Error::PoleHit { .. }
                | Error::ResidueViolation { .. }
                | Error::EpsilonSingular { .. }
                | Error::DegenerateParameterization { .. }
                | Error::DPSingular { .. }
                | Error::RootNotFound { .. }
                | Error::DegenerateKappa
                | Error::NonFinite { .. }
                | Error::PrecisionExhausted { .. }
        )
    }

    /// The step index a numerical failure refers to, if any.
    pub fn step(&self) -> Option<usize> {
        match self {
            Error::ResidueViolation { s, .. }
            | Error::EpsilonSingular { s, .. }
            | Error::DegenerateParameterization { s, .. }
            | Error::DPSingular { s, .. }
            | Error::RootNotFound { s }
            | Error::NonFinite { s } => Some(*s),
            _ => None,
        }
    }
}
