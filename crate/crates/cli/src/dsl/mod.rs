//! A small text format for categories, functors, presheaves, presheaf maps
//! and reflections.
//!
//! ```text
//! # composition `g.f` means g after f: f is applied first
//! category G {
//!   objects: V, E;
//!   morphisms: d0: V -> E, d1: V -> E, s: E -> V;
//!   relations: s.d0 = id(V); s.d1 = id(V);
//!   close: 16;
//! }
//! presheaf P : G {
//!   set V = {a, b};
//!   set E = {la, lb, ab};
//!   act d0 = {la -> a, lb -> b, ab -> a};
//!   act d1 = {la -> a, lb -> b, ab -> b};
//!   act s = {a -> la, b -> lb};
//! }
//! ```
//!
//! A category given by `morphisms` and `relations` is saturated (at most
//! `close` morphisms); one given with a `compose:` section is read as a
//! full composition table of its non-identity morphisms. A category may
//! also be referred to by a built-in fixture name in quotes, as in
//! `presheaf X : "delta1" { ... }`.

pub mod ast;
mod elaborate;
mod lexer;
mod parser;
mod serialize;

use std::fmt;

pub use elaborate::{elaborate, CatName, Document, Value};
pub use parser::parse;
pub use serialize::{format_name, serialize};

/// Byte range plus the 1-based line and column of its start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    SyntaxError,
    UnresolvedIdentifier,
    DuplicateDefinition,
    /// Well-formed text describing an invalid structure.
    Invalid,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagnosticKind::SyntaxError => "syntax error",
            DiagnosticKind::UnresolvedIdentifier => "unresolved identifier",
            DiagnosticKind::DuplicateDefinition => "duplicate definition",
            DiagnosticKind::Invalid => "invalid",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub message: String,
    pub span: Span,
}

impl Diagnostic {
    pub fn new(kind: DiagnosticKind, message: impl Into<String>, span: Span) -> Self {
        Diagnostic {
            kind,
            message: message.into(),
            span,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.span.line, self.span.col, self.kind, self.message)
    }
}

/// Parses and elaborates UTF-8 text.
pub fn load(text: &str) -> Result<Document, Vec<Diagnostic>> {
    let ast = parse(text).map_err(|d| vec![d])?;
    elaborate(&ast)
}

/// Like [`load`] for raw bytes; invalid UTF-8 is a syntax error.
pub fn load_bytes(bytes: &[u8]) -> Result<Document, Vec<Diagnostic>> {
    match std::str::from_utf8(bytes) {
        Ok(text) => load(text),
        Err(e) => {
            let at = e.valid_up_to();
            let before = &bytes[..at];
            let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
            let col = at - before.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1) + 1;
            Err(vec![Diagnostic::new(
                DiagnosticKind::SyntaxError,
                "input is not valid UTF-8",
                Span {
                    start: at,
                    end: at + 1,
                    line,
                    col,
                },
            )])
        }
    }
}

#[cfg(test)]
mod tests;
