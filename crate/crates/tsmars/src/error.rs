use std::fmt;
use std::io;
use std::path::Path;

/// Failure category; decides the process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Data,
    Numerical,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Usage => 1,
            ErrorKind::Data => 2,
            ErrorKind::Numerical => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ErrorKind::Usage => "usage",
            ErrorKind::Data => "data",
            ErrorKind::Numerical => "numerical",
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct Error {
    pub kind: ErrorKind,
    pub message: String,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn new(kind: ErrorKind, message: impl fmt::Display) -> Self {
        Self {
            kind,
            message: message.to_string(),
        }
    }

    pub fn usage(message: impl fmt::Display) -> Self {
        Self::new(ErrorKind::Usage, message)
    }

    pub fn data(message: impl fmt::Display) -> Self {
        Self::new(ErrorKind::Data, message)
    }

    pub fn io(path: &Path, err: io::Error) -> Self {
        Self::data(format!("{}: {err}", path.display()))
    }

    /// Single line suitable for stderr: `error[kind]: message`.
    pub fn line(&self) -> String {
        let msg = self.message.replace(['\n', '\r'], " ");
        format!("error[{}]: {}", self.kind.label(), msg.trim())
    }

    /// Prefixes the message with some context.
    pub fn context(mut self, what: impl fmt::Display) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

impl From<tsmars_core::Error> for Error {
    fn from(err: tsmars_core::Error) -> Self {
        use tsmars_core::Error as E;
        let kind = match &err {
            E::InvalidConfig(_) | E::OrderOutOfRange(_) => ErrorKind::Usage,
            E::ModelTooComplex { .. }
            | E::ZeroVariance
            | E::FlatObjective
            | E::RankDeficient { .. }
            | E::Numerical(_) => ErrorKind::Numerical,
            _ => ErrorKind::Data,
        };
        Self::new(kind, err)
    }
}
