use thiserror::Error;

/// Problems with the experiment description; these map to exit status 2.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot parse config: {0}")]
    Parse(String),
    #[error("{kind} experiment needs `{field}`")]
    Missing { kind: &'static str, field: &'static str },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("invalid model: {0}")]
    Model(#[from] wegner_core::Error),
    #[error("unknown preset {name:?}; available: {}", available.join(", "))]
    UnknownPreset { name: String, available: Vec<&'static str> },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("cannot write records: {0}")]
    Output(String),
}
