use thiserror::Error;

/// Failures that end a run before a report is printed.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Core {
        path: String,
        source: flame_core::Error,
    },

    #[error("{path}: line {line}: {message}")]
    Input {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{0}")]
    Usage(String),

    #[error("contract violated: {0}")]
    Contract(flame_core::Error),

    #[error("size bound exceeded: {0}")]
    SizeBound(flame_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Contract(_) => 1,
            CliError::SizeBound(_) => 3,
            CliError::Core { source, .. } if is_size_bound(source) => 3,
            _ => 2,
        }
    }

    /// Sorts an error raised while computing on an already accepted input.
    pub fn from_run(err: flame_core::Error, path: &str) -> Self {
        use flame_core::Error as E;
        match err {
            E::SizeBound { .. } => CliError::SizeBound(err),
            E::NotAFlame(_) | E::NoDeficit(_) | E::NotDominated(_) | E::NotASubgraph(_) => {
                CliError::Contract(err)
            }
            other => CliError::Core {
                path: path.to_string(),
                source: other,
            },
        }
    }
}

fn is_size_bound(err: &flame_core::Error) -> bool {
    matches!(err, flame_core::Error::SizeBound { .. })
}
