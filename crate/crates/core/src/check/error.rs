use std::fmt;

use serde::Serialize;

/// A region of source text, as 1-based line and column pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Span {
    pub start: (usize, usize),
    pub end: (usize, usize),
}

/// Every way a declaration can be rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ErrorCode {
    SyntaxError,
    UnboundVariable,
    UnboundName,
    NotAFunction,
    NotAPair,
    NotAPath,
    NotALater,
    FaceNotCovered,
    SystemIncompatible,
    DelayedSubstMismatch,
    UniverseExpected,
    UniverseHasNoType,
    ConversionFailure,
    EndpointMismatch,
    CannotInfer,
    DuplicateDeclaration,
}

impl ErrorCode {
    pub const ALL: [ErrorCode; 16] = [
        ErrorCode::SyntaxError,
        ErrorCode::UnboundVariable,
        ErrorCode::UnboundName,
        ErrorCode::NotAFunction,
        ErrorCode::NotAPair,
        ErrorCode::NotAPath,
        ErrorCode::NotALater,
        ErrorCode::FaceNotCovered,
        ErrorCode::SystemIncompatible,
        ErrorCode::DelayedSubstMismatch,
        ErrorCode::UniverseExpected,
        ErrorCode::UniverseHasNoType,
        ErrorCode::ConversionFailure,
        ErrorCode::EndpointMismatch,
        ErrorCode::CannotInfer,
        ErrorCode::DuplicateDeclaration,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::SyntaxError => "SyntaxError",
            ErrorCode::UnboundVariable => "UnboundVariable",
            ErrorCode::UnboundName => "UnboundName",
            ErrorCode::NotAFunction => "NotAFunction",
            ErrorCode::NotAPair => "NotAPair",
            ErrorCode::NotAPath => "NotAPath",
            ErrorCode::NotALater => "NotALater",
            ErrorCode::FaceNotCovered => "FaceNotCovered",
            ErrorCode::SystemIncompatible => "SystemIncompatible",
            ErrorCode::DelayedSubstMismatch => "DelayedSubstMismatch",
            ErrorCode::UniverseExpected => "UniverseExpected",
            ErrorCode::UniverseHasNoType => "UniverseHasNoType",
            ErrorCode::ConversionFailure => "ConversionFailure",
            ErrorCode::EndpointMismatch => "EndpointMismatch",
            ErrorCode::CannotInfer => "CannotInfer",
            ErrorCode::DuplicateDeclaration => "DuplicateDeclaration",
        }
    }

    pub fn parse(s: &str) -> Option<ErrorCode> {
        ErrorCode::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, thiserror::Error)]
#[error("{code}: {message}")]
pub struct TypeError {
    pub code: ErrorCode,
    pub message: String,
    pub expected: Option<String>,
    pub actual: Option<String>,
    /// Rendering of the local context and restriction at the failure.
    pub context: String,
    pub span: Option<Span>,
}

impl TypeError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> TypeError {
        TypeError {
            code,
            message: message.into(),
            expected: None,
            actual: None,
            context: String::new(),
            span: None,
        }
    }

    pub fn with_types(mut self, expected: String, actual: String) -> TypeError {
        self.expected = Some(expected);
        self.actual = Some(actual);
        self
    }

    pub fn with_context(mut self, context: String) -> TypeError {
        self.context = context;
        self
    }

    /// Attach a span unless a more precise one is already present.
    pub fn at(mut self, span: Span) -> TypeError {
        self.span.get_or_insert(span);
        self
    }

    /// A multi-line report including expected/actual and the context.
    pub fn report(&self) -> String {
        let mut out = format!("{}: {}", self.code, self.message);
        if let (Some(e), Some(a)) = (&self.expected, &self.actual) {
            out.push_str(&format!("\n  expected: {e}\n  actual:   {a}"));
        }
        if !self.context.is_empty() {
            out.push_str(&format!("\n  in context: {}", self.context));
        }
        out
    }
}
