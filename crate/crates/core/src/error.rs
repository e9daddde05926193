use thiserror::Error;

/// Severity of a user-facing diagnostic. Errors abort the requested
/// operation; warnings never change numeric results.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// A diagnostic tied to a source location (1-based line and column when the
/// message originates from scene text, `0:0` otherwise).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub line: usize,
    pub col: usize,
}

impl Diagnostic {
    pub fn error(message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Error, message: message.into(), line: 0, col: 0 }
    }

    pub fn warning(message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Warning, message: message.into(), line: 0, col: 0 }
    }

    pub fn at(mut self, line: usize, col: usize) -> Self {
        self.line = line;
        self.col = col;
        self
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        if self.line > 0 {
            write!(f, "{}:{}: {}: {}", self.line, self.col, sev, self.message)
        } else {
            write!(f, "{}: {}", sev, self.message)
        }
    }
}

#[derive(Debug, Error)]
pub enum CoreError {
    /// Invalid input data; maps to a user diagnostic.
    #[error("{0}")]
    Invalid(String),
    /// Mixing two distinct irrational radicals in ring arithmetic.
    #[error("mixed-radical arithmetic: sqrt({0}) and sqrt({1}) cannot be combined")]
    MixedRadicals(u64, u64),
    /// A computed result violated one of the module invariants. This is a
    /// bug in the caller or in this library, not a user error.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl CoreError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CoreError::Invalid(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        CoreError::Internal(msg.into())
    }
}
