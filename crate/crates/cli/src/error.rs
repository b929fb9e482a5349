use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// A flag (or its config-file mirror) holds an unusable value.
    #[error("invalid value for --{flag}: {message}")]
    InvalidFlag { flag: String, message: String },

    #[error(transparent)]
    Solver(#[from] taperbeam::Error),

    #[error("config file {path}: {message}")]
    Config { path: String, message: String },

    #[error("reference data: {0}")]
    Reference(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn flag(flag: impl Into<String>, message: impl Into<String>) -> Self {
        Self::InvalidFlag {
            flag: flag.into(),
            message: message.into(),
        }
    }

    /// Process exit code: 2 for bad input, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::InvalidFlag { .. } | Self::Config { .. } => 2,
            _ => 1,
        }
    }
}

/// Attributes a model validation error to the flag that caused it.
pub fn blame_flag(err: taperbeam::Error) -> CliError {
    use taperbeam::Error as E;
    let flag = match &err {
        E::FillingRatio(_) => "alpha",
        E::Negative { name, .. } | E::NotFinite { name, .. } => name,
        E::TaperNotPositive { .. } => "phi/--psi",
        E::OrderTooLow(_) => "order",
        E::GalerkinSize(_) => "galerkin-n",
        E::GridTooCoarse(_) => "fd-grid",
        E::Grid(_) => "points",
        E::Network(_) => "hidden-layers",
        _ => return CliError::Solver(err),
    };
    CliError::flag(flag, err.to_string())
}

pub type CliResult<T> = Result<T, CliError>;
