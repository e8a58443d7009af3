//! Diagnostics shared by the parser and the mapping pipeline.
//!
//! Every diagnostic carries a stable code so that callers and tests can match
//! on it without parsing message text.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

/// Stable machine-readable diagnostic codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Code {
    MalformedXml,
    MissingMandatoryId,
    DuplicateId,
    DuplicateName,
    DanglingRef,
    VersionMismatch,
    UnknownElement,
    CyclicHierarchy,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::MalformedXml => "MALFORMED_XML",
            Code::MissingMandatoryId => "MISSING_MANDATORY_ID",
            Code::DuplicateId => "DUPLICATE_ID",
            Code::DuplicateName => "DUPLICATE_NAME",
            Code::DanglingRef => "DANGLING_REF",
            Code::VersionMismatch => "VERSION_MISMATCH",
            Code::UnknownElement => "UNKNOWN_ELEMENT",
            Code::CyclicHierarchy => "CYCLIC_HIERARCHY",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where in the input a diagnostic points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    /// 1-based line and column in the XML source.
    LineCol { line: u32, col: u32 },
    /// Slash-joined element path inside the document model.
    Path(String),
    Unknown,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::LineCol { line, col } => write!(f, "{line}:{col}"),
            Location::Path(p) => f.write_str(p),
            Location::Unknown => f.write_str("?"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub location: Location,
    pub message: String,
}

impl Diagnostic {
    pub fn error(code: Code, location: Location, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Error, code, location, message: message.into() }
    }

    pub fn warning(code: Code, location: Location, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Warning, code, location, message: message.into() }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{sev}[{}] {}: {}", self.code, self.location, self.message)
    }
}
