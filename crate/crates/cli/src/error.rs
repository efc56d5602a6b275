use thiserror::Error;

use intertwine::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}, column {column}: key `{key}`: {message}")]
    Parse { line: usize, column: usize, key: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Pass = 0,
    CheckFailed = 1,
    Invalid = 2,
    Runtime = 3,
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            Self::Parse { .. } | Self::Usage(_) | Self::Read { .. } => Exit::Invalid,
            Self::Write { .. } | Self::Core(_) => Exit::Runtime,
        }
    }
}

/// Construction-time rejections that are themselves measured residuals above a
/// tolerance; the runner turns them into failed report entries.
pub fn as_measured_failure(e: &CoreError) -> Option<(f64, f64)> {
    match *e {
        CoreError::SourceNotASolution { residual, limit } => Some((residual, limit)),
        CoreError::PainleveResidualTooLarge { residual, tol } | CoreError::ConstraintResidualTooLarge { residual, tol } => {
            Some((residual, tol))
        }
        _ => None,
    }
}
