use std::fmt;

use topospec_core::Error as CoreError;

use crate::config::ParseError;

/// Exit status when a run completes but carries NoConvergence/NoRoots flags.
pub const EXIT_FLAGGED: i32 = 2;
/// Exit status when `verify` reports at least one FAIL line.
pub const EXIT_VERIFY_FAILED: i32 = 14;
/// Exit status for command-line usage errors.
pub const EXIT_USAGE: i32 = 64;

/// Everything that can abort a command.
#[derive(Debug)]
pub enum CliError {
    Parse(ParseError),
    Core(CoreError),
    Io(String),
    Usage(String),
}

impl CliError {
    /// A distinct exit status per error kind.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Core(e) => match e {
                CoreError::NoConvergence { .. } => EXIT_FLAGGED,
                CoreError::InvalidParameter(_) => 3,
                CoreError::NonFiniteEvaluation { .. } => 4,
                CoreError::DegreeOverflow { .. } => 5,
                CoreError::EmptyDomain => 6,
                CoreError::DegenerateMetric { .. } => 7,
                CoreError::MissingTransition => 8,
                CoreError::NoTurningPoint => 9,
                CoreError::DimensionTooLow { .. } => 10,
                CoreError::UnknownGroup(_) => 11,
                CoreError::DimensionMismatch(_) => 12,
            },
            CliError::Io(_) => 13,
            CliError::Usage(_) => EXIT_USAGE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(e) => e.fmt(f),
            CliError::Core(e) => write!(f, "{}: {e}", e.kind()),
            CliError::Io(msg) => write!(f, "I/O error: {msg}"),
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn exit_codes_are_distinct() {
        let errors = [
            CliError::Parse(ParseError {
                key: None,
                line: None,
                message: String::new(),
            }),
            CliError::Core(CoreError::NoConvergence {
                value: 0.0,
                err: 1.0,
                tol: 0.0,
            }),
            CliError::Core(CoreError::InvalidParameter(String::new())),
            CliError::Core(CoreError::NonFiniteEvaluation { point: vec![] }),
            CliError::Core(CoreError::DegreeOverflow { p: 1, q: 2, dim: 2 }),
            CliError::Core(CoreError::EmptyDomain),
            CliError::Core(CoreError::DegenerateMetric {
                point: vec![],
                reason: String::new(),
            }),
            CliError::Core(CoreError::MissingTransition),
            CliError::Core(CoreError::NoTurningPoint),
            CliError::Core(CoreError::DimensionTooLow {
                dim: 2,
                required: 4,
            }),
            CliError::Core(CoreError::UnknownGroup(String::new())),
            CliError::Core(CoreError::DimensionMismatch(String::new())),
            CliError::Io(String::new()),
            CliError::Usage(String::new()),
        ];
        let codes: BTreeSet<i32> = errors.iter().map(CliError::exit_code).collect();
        assert_eq!(codes.len(), errors.len());
        assert!(!codes.contains(&0));
        assert!(!codes.contains(&EXIT_VERIFY_FAILED));
        assert_eq!(errors[0].exit_code(), 1);
    }
}
