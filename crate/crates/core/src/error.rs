use std::fmt;

use thiserror::Error;

/// A syntax error in formula, sequent, theory, or domain text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line for file-level parsers; `None` for single-line input.
    pub line: Option<usize>,
    /// Byte offset of the offending token within the line (or input).
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            line: None,
            offset,
            message: message.into(),
        }
    }

    pub(crate) fn at_line(mut self, line: usize, column_base: usize) -> Self {
        self.line = Some(line);
        self.offset += column_base;
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(
                f,
                "line {}, column {}: {}",
                line,
                self.offset + 1,
                self.message
            ),
            None => write!(f, "offset {}: {}", self.offset, self.message),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {0}")]
    Parse(#[from] ParseError),

    #[error("atom `{0}` is not declared in the universe")]
    UndeclaredAtom(String),

    #[error("invalid atom name `{0}`")]
    InvalidAtom(String),

    #[error("atom `{0}` declared twice")]
    DuplicateAtom(String),

    #[error("modal formula `{0}` where a nonmodal formula is required")]
    ModalFormula(String),

    #[error("universe of {atoms} atoms exceeds the capacity of {limit}")]
    Capacity { atoms: usize, limit: usize },

    #[error("theory of {rules} rules exceeds the capacity of {limit}")]
    RuleCapacity { rules: usize, limit: usize },

    #[error("renaming is not a bijection on the universe: {0}")]
    InvalidRenaming(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid Kripke model: {0}")]
    InvalidKripkeModel(String),

    #[error("invalid action domain: {0}")]
    InvalidDomain(String),

    #[error("invalid S5 model: {0}")]
    InvalidS5Model(String),

    #[error("invalid proof: {0}")]
    InvalidProof(String),

    #[error("proof search gave up after {nodes} nodes")]
    SearchExhausted { nodes: usize },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
