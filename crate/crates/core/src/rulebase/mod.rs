//! Textual fuzzy rule bases and their compilation into crossbar networks.
//!
//! ```text
//! rulebase := decl+ rule+
//! decl     := ("var" | "out") IDENT ":" NUM ".." NUM "{" term ("," term)* "}"
//! term     := IDENT "=" "tri" "(" NUM "," NUM "," NUM ")"
//! rule     := "IF" cond ("AND" cond)* "THEN" IDENT "is" IDENT
//! cond     := IDENT "is" IDENT
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

mod compile;
mod parser;
mod validate;

use std::fmt;

use thiserror::Error;

use crate::fuzzy::{MembershipFunction, NetworkError};

pub use compile::{compile_to_network, CompileBackend};
pub use parser::parse;
pub use validate::validate;

/// The fuzzy XOR rule base shipped with the crate.
pub const XOR_RULES: &str = include_str!("../../data/xor.rules");

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Position {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DiagnosticKind {
    Syntax { expected: Vec<String>, found: String },
    UnknownName { name: String, rule: Option<usize> },
    DuplicateName { name: String },
    InvalidDeclaration,
    UncoveredCombination { terms: Vec<(String, String)> },
    UnusedTerm { variable: String, term: String },
    DuplicateRule { first: usize, second: usize },
    ConflictingRules { first: usize, second: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub pos: Option<Position>,
    pub message: String,
}

impl Diagnostic {
    pub fn severity(&self) -> Severity {
        match self.kind {
            DiagnosticKind::UncoveredCombination { .. }
            | DiagnosticKind::UnusedTerm { .. }
            | DiagnosticKind::DuplicateRule { .. } => Severity::Warning,
            _ => Severity::Error,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity() == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match (&self.kind, self.severity()) {
            (DiagnosticKind::Syntax { .. }, _) => "syntax error",
            (_, Severity::Error) => "error",
            (_, Severity::Warning) => "warning",
        };
        match self.pos {
            Some(p) => write!(f, "{p}: {level}: {}", self.message),
            None => write!(f, "{level}: {}", self.message),
        }
    }
}

/// Parse failure carrying every diagnostic found.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct ParseError {
    pub diagnostics: Vec<Diagnostic>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.diagnostics.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermDecl {
    pub name: String,
    pub shape: MembershipFunction,
    pub pos: Position,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariableDecl {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub terms: Vec<TermDecl>,
    pub pos: Position,
}

impl VariableDecl {
    pub fn term(&self, name: &str) -> Option<&TermDecl> {
        self.terms.iter().find(|t| t.name == name)
    }
}

/// `variable is term`.
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub variable: String,
    pub term: String,
    pub pos: Position,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub antecedent: Vec<Condition>,
    pub consequent: Condition,
    pub pos: Position,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IF ")?;
        for (i, c) in self.antecedent.iter().enumerate() {
            if i > 0 {
                write!(f, " AND ")?;
            }
            write!(f, "{} is {}", c.variable, c.term)?;
        }
        write!(f, " THEN {} is {}", self.consequent.variable, self.consequent.term)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleBase {
    pub inputs: Vec<VariableDecl>,
    pub outputs: Vec<VariableDecl>,
    pub rules: Vec<Rule>,
}

impl RuleBase {
    pub fn input(&self, name: &str) -> Option<&VariableDecl> {
        self.inputs.iter().find(|v| v.name == name)
    }

    pub fn output(&self, name: &str) -> Option<&VariableDecl> {
        self.outputs.iter().find(|v| v.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompileError {
    #[error("grid needs at least 2 points per variable, got {0}")]
    InvalidGrid(usize),
    #[error("activation exponent must be finite and >= 1, got {0}")]
    InvalidExponent(f64),
    #[error("rule base has errors:\n{}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"))]
    Validation(Vec<Diagnostic>),
    #[error("term {variable}.{term}: {source}")]
    Membership {
        variable: String,
        term: String,
        source: NetworkError,
    },
    #[error(transparent)]
    Network(#[from] NetworkError),
}
