use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown campaign '{0}' (known: lemma1, local-disjoint, global-disjoint, growth, away-bound, p2-bound, chebotarev)")]
    InvalidCampaignName(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{op} failed: {source}")]
    Operation {
        op: &'static str,
        #[source]
        source: asfield_core::Error,
    },

    #[error(transparent)]
    Core(#[from] asfield_core::Error),

    #[error("i/o failure: {0}")]
    IoFailure(#[from] std::io::Error),

    #[error("serialization failure: {0}")]
    Serialization(String),
}

impl CliError {
    pub(crate) fn op(op: &'static str) -> impl FnOnce(asfield_core::Error) -> CliError {
        move |source| CliError::Operation { op, source }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Serialization(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Serialization(e.to_string())
    }
}
