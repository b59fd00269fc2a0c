use std::fmt;

/// Failure classes, each with its own process exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config keys or model parameters.
    Validation(String),
    /// Unreadable, malformed or insufficient data.
    Data(String),
    /// The library's numerical self-checks disagree with frozen values.
    Drift(String),
    /// A verification check did not meet its tolerance.
    Failed(usize),
}

impl CliError {
    /// Prefixes the message with the offending file.
    pub fn in_file(self, path: &std::path::Path) -> Self {
        let at = |m: String| format!("{}: {m}", path.display());
        match self {
            CliError::Validation(m) => CliError::Validation(at(m)),
            CliError::Data(m) => CliError::Data(at(m)),
            CliError::Drift(m) => CliError::Drift(at(m)),
            other => other,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Data(_) => 3,
            CliError::Drift(_) | CliError::Failed(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Data(m) | CliError::Drift(m) => f.write_str(m),
            CliError::Failed(n) => write!(f, "{n} check(s) failed"),
        }
    }
}

impl From<texradon::Error> for CliError {
    fn from(e: texradon::Error) -> Self {
        use texradon::Error as E;
        let msg = e.to_string();
        match e {
            E::BandLimit { .. }
            | E::IndexOutOfRange { .. }
            | E::InvalidArgument(_)
            | E::Model { .. } => CliError::Validation(msg),
            E::Calibration { .. } | E::NonScalarSymbol { .. } => CliError::Drift(msg),
            E::NonFinite { .. } | E::RankDeficient { .. } | E::Parse { .. } | E::Io(_) => {
                CliError::Data(msg)
            }
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn io_error(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}
