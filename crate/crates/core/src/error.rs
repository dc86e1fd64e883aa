use thiserror::Error;

/// Errors raised while generating content or compiling/executing circuits.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// No value has positive weight for `segment` given the placed context.
    #[error("conflict at segment {segment}: no value available ({} placed segments in context)", context.len())]
    Conflict {
        segment: usize,
        /// `(segment, value)` pairs that were visible when the conflict arose.
        context: Vec<(usize, usize)>,
    },

    /// An identifier or value selector broke its contract.
    #[error("selector contract violated at iteration {iteration}: {detail}")]
    SelectorContract { iteration: usize, detail: String },

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A circuit was malformed, e.g. a load hit a non-ground target subspace.
    #[error("circuit contract violated: {0}")]
    Contract(String),

    #[error("gave up after {restarts} restarts, last failure: {last}")]
    ExhaustedRestarts { restarts: usize, last: Box<Error> },

    /// Failure inside one partition of a hybrid run.
    #[error("partition {partition}: {source}")]
    Partition {
        partition: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Strips `Partition` wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Partition { source, .. } => source.root(),
            other => other,
        }
    }

    pub fn is_conflict(&self) -> bool {
        matches!(self.root(), Error::Conflict { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
