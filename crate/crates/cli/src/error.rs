use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] typent::Error),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    /// 2 for usage and domain errors, 3 for infeasible targets, 4 when a
    /// numerical method fails to converge.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Core(typent::Error::Feasibility(_)) => 3,
            Self::Core(typent::Error::Convergence { .. } | typent::Error::Accuracy { .. }) => 4,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let core = |e| CliError::Core(e).exit_code();
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(core(typent::Error::Domain("x".into())), 2);
        assert_eq!(core(typent::Error::Dimension("x".into())), 2);
        assert_eq!(core(typent::Error::Feasibility("x".into())), 3);
        assert_eq!(
            core(typent::Error::Convergence {
                iterations: 1,
                residual: 1.0
            }),
            4
        );
        assert_eq!(
            core(typent::Error::Accuracy {
                estimate: 1.0,
                error: 1.0
            }),
            4
        );
    }
}
