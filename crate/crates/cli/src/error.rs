use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid value for `{field}`: {message}")]
    Config { field: &'static str, message: String },
    #[error(transparent)]
    Core(#[from] ctsim_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown figure `{0}` (expected fig2, fig3, fig4, fig5 or fig6)")]
    UnknownFigure(String),
    #[error("unknown quantity `{0}` (expected F_c, F_nc, C_p, eta or sv_max)")]
    UnknownQuantity(String),
    #[error("no records to write")]
    NoRecords,
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub(crate) fn config(field: &'static str, message: impl Into<String>) -> Self {
        CliError::Config {
            field,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
