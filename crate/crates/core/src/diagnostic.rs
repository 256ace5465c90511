//! Stable diagnostic codes shared by the parser and the semantic checks.

use alloc::string::String;
use core::fmt;

use crate::span::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Diagnostic codes. `P0xx` come from the parser, `S0xx` from semantic
/// analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Code {
    /// Unexpected token.
    P001,
    /// Unterminated block, or a block that may occur at most once is repeated.
    P002,
    /// Duplicate member name within a class.
    P003,
    /// Decorated name (`x'`, `x?`, `x!`) where decorations are not allowed,
    /// or an undecorated operation declaration.
    P004,
    /// Character outside the dialect's alphabet.
    P005,
    /// Integer literal does not fit in 64 bits.
    P006,
    /// Unresolved name.
    S001,
    /// Visibility entry names no member.
    S002,
    /// Duplicate definition.
    S003,
    /// Kind or type mismatch.
    S004,
    /// Cyclic operation-expression definitions.
    S006,
    /// Access to a member that is private to another class.
    S007,
    /// Name is reserved in the generated Python.
    S008,
    /// Delta list names something other than a primary state variable.
    S010,
    /// Primed name not listed in the delta list.
    S011,
    /// Output never mentioned by any predicate.
    S012,
    /// Output has no defining equality, so the method returns `None` for it.
    S013,
    /// Secondary variable without a defining equality.
    S020,
    /// Secondary variable with several defining equalities.
    S021,
    /// Secondary variable definitions depend on each other cyclically.
    S022,
    /// INIT predicate is neither `var = expr` nor `obj.INIT`.
    S030,
    /// Member objects initialize each other cyclically.
    S031,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::P001 => "P001",
            Code::P002 => "P002",
            Code::P003 => "P003",
            Code::P004 => "P004",
            Code::P005 => "P005",
            Code::P006 => "P006",
            Code::S001 => "S001",
            Code::S002 => "S002",
            Code::S003 => "S003",
            Code::S004 => "S004",
            Code::S006 => "S006",
            Code::S007 => "S007",
            Code::S008 => "S008",
            Code::S010 => "S010",
            Code::S011 => "S011",
            Code::S012 => "S012",
            Code::S013 => "S013",
            Code::S020 => "S020",
            Code::S021 => "S021",
            Code::S022 => "S022",
            Code::S030 => "S030",
            Code::S031 => "S031",
        }
    }

    pub fn default_severity(self) -> Severity {
        match self {
            Code::S012 | Code::S013 => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: Code,
    pub severity: Severity,
    pub message: String,
    pub span: SourceSpan,
}

impl Diagnostic {
    pub fn new(code: Code, message: impl Into<String>, span: SourceSpan) -> Self {
        Diagnostic {
            code,
            severity: code.default_severity(),
            message: message.into(),
            span,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}[{}]: {}",
            self.span, self.severity, self.code, self.message
        )
    }
}

/// Orders diagnostics by file, span, then code.
pub fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| (&a.span, a.code).cmp(&(&b.span, b.code)));
}
