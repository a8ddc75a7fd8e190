use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("polynomial is not homogeneous of degree {degree}")]
    NotHomogeneous { degree: u32 },

    #[error("vector field does not vanish at the origin")]
    OriginNotSingular,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("curve is not invariant: no cofactor satisfies the identity at degree {degree}")]
    NotInvariant { degree: u32 },

    #[error("polynomial does not divide the wedge polynomial h")]
    NotAFactor,

    #[error("leading part is not of quadratic Lotka-Volterra shape: {0}")]
    NotLvShape(String),

    #[error("leading component has degree {degree}, expected a quadratic leading part")]
    LeadingNotQuadratic { degree: u32 },

    #[error("origin is not an isolated singular point of the leading part")]
    OriginNotIsolated,

    #[error("leading part is not polynomially integrable: {0}")]
    NotPolynomiallyIntegrable(String),

    #[error("candidate corange basis at degree {degree} does not complement the range")]
    ComplementVerificationFailure { degree: u32 },

    #[error("homological equation at degree {degree} is inconsistent")]
    HomologicalSolveFailure { degree: u32 },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Failures that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Internal(_)
                | Error::ComplementVerificationFailure { .. }
                | Error::HomologicalSolveFailure { .. }
        )
    }
}
