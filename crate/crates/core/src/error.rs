use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("insufficient truncation: need {need} coefficients, have {have}")]
    Truncation { need: usize, have: usize },
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("bound vacuous: denominator {0} is not positive")]
    Vacuous(f64),
    #[error("evaluation failed at {point}: {reason}")]
    Evaluation { point: String, reason: String },
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// True when the error (or its root cause) is a numerical inconclusiveness.
    pub fn is_inconclusive(&self) -> bool {
        match self {
            Error::Inconclusive(_) => true,
            Error::Stage { source, .. } => source.is_inconclusive(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
