//! Propositional formulas with a single box modality, plus the text syntax.
//!
//! Grammar, loosest binding first: `->` (right associative), `|`, `&`,
//! prefix `!` and `[]`, then atoms, `true`, `false` and parentheses. The
//! printer emits the minimal parenthesisation, so printing and reparsing
//! yields the same tree. Unicode connectives (`¬ ∧ ∨ → □ ⊤ ⊥`) are accepted
//! on input and used by [`Formula::unicode`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, ParseError};
use crate::model::Universe;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Bottom,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn boxed(f: Formula) -> Formula {
        Formula::Box(Box::new(f))
    }

    /// `(a -> b) & (b -> a)`; the language has no primitive biconditional.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    /// Left-nested conjunction `((f1 & f2) & f3) ...`; `true` when empty.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::Bottom)
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atom(_) | Formula::Top | Formula::Bottom)
    }

    pub fn is_modal(&self) -> bool {
        match self {
            Formula::Top | Formula::Bottom | Formula::Atom(_) => false,
            Formula::Not(a) => a.is_modal(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_modal() || b.is_modal()
            }
            Formula::Box(_) => true,
        }
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Top | Formula::Bottom => {}
            Formula::Atom(name) => {
                out.insert(name.as_str());
            }
            Formula::Not(a) | Formula::Box(a) => a.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Connective nesting depth; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bottom | Formula::Atom(_) => 0,
            Formula::Not(a) | Formula::Box(a) => a.depth() + 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.depth().max(b.depth()) + 1
            }
        }
    }

    /// Nesting depth of boxes.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bottom | Formula::Atom(_) => 0,
            Formula::Not(a) => a.modal_depth(),
            Formula::Box(a) => a.modal_depth() + 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.modal_depth().max(b.modal_depth())
            }
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Top | Formula::Bottom | Formula::Atom(_) => 1,
            Formula::Not(a) | Formula::Box(a) => a.size() + 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.size() + b.size() + 1
            }
        }
    }

    /// Replaces atoms according to `map`; unmapped atoms are kept.
    pub fn rename(&self, map: &BTreeMap<String, String>) -> Formula {
        match self {
            Formula::Top => Formula::Top,
            Formula::Bottom => Formula::Bottom,
            Formula::Atom(name) => Formula::Atom(map.get(name).unwrap_or(name).clone()),
            Formula::Not(a) => Formula::not(a.rename(map)),
            Formula::Box(a) => Formula::boxed(a.rename(map)),
            Formula::And(a, b) => Formula::and(a.rename(map), b.rename(map)),
            Formula::Or(a, b) => Formula::or(a.rename(map), b.rename(map)),
            Formula::Implies(a, b) => Formula::implies(a.rename(map), b.rename(map)),
        }
    }

    /// Parses without checking atoms against a universe.
    pub fn parse(text: &str) -> Result<Formula, ParseError> {
        let mut parser = Parser::new(text, Dialect::Causal)?;
        let f = parser.formula()?;
        parser.expect_end()?;
        Ok(f)
    }

    pub fn unicode(&self) -> Unicode<'_> {
        Unicode(self)
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(_) | Formula::Box(_) => 4,
            Formula::Top | Formula::Bottom | Formula::Atom(_) => 5,
        }
    }

    pub(crate) fn write_with(
        &self,
        f: &mut fmt::Formatter<'_>,
        symbols: &Symbols,
        min_prec: u8,
    ) -> fmt::Result {
        let prec = self.precedence();
        if prec < min_prec {
            f.write_str("(")?;
        }
        match self {
            Formula::Top => f.write_str(symbols.top)?,
            Formula::Bottom => f.write_str(symbols.bottom)?,
            Formula::Atom(name) => f.write_str(name)?,
            Formula::Not(a) => {
                f.write_str(symbols.not)?;
                a.write_with(f, symbols, 4)?;
            }
            Formula::Box(a) => {
                f.write_str(symbols.boxed)?;
                a.write_with(f, symbols, 4)?;
            }
            Formula::And(a, b) => {
                a.write_with(f, symbols, 3)?;
                write!(f, " {} ", symbols.and)?;
                b.write_with(f, symbols, 4)?;
            }
            Formula::Or(a, b) => {
                a.write_with(f, symbols, 2)?;
                write!(f, " {} ", symbols.or)?;
                b.write_with(f, symbols, 3)?;
            }
            Formula::Implies(a, b) => {
                a.write_with(f, symbols, 2)?;
                write!(f, " {} ", symbols.implies)?;
                b.write_with(f, symbols, 1)?;
            }
        }
        if prec < min_prec {
            f.write_str(")")?;
        }
        Ok(())
    }
}

pub(crate) struct Symbols {
    pub top: &'static str,
    pub bottom: &'static str,
    pub not: &'static str,
    pub and: &'static str,
    pub or: &'static str,
    pub implies: &'static str,
    pub boxed: &'static str,
}

pub(crate) const ASCII: Symbols = Symbols {
    top: "true",
    bottom: "false",
    not: "!",
    and: "&",
    or: "|",
    implies: "->",
    boxed: "[]",
};

pub(crate) const UNICODE: Symbols = Symbols {
    top: "⊤",
    bottom: "⊥",
    not: "¬",
    and: "∧",
    or: "∨",
    implies: "→",
    boxed: "□",
};

pub(crate) const S5_ASCII: Symbols = Symbols {
    boxed: "C ",
    ..ASCII
};

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, &ASCII, 0)
    }
}

/// Display adapter printing with logical symbols instead of ASCII.
pub struct Unicode<'a>(&'a Formula);

impl fmt::Display for Unicode<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.write_with(f, &UNICODE, 0)
    }
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Formula::parse(s)
    }
}

/// Parses `text` and checks every atom against `universe`.
pub fn parse_formula(text: &str, universe: &Universe) -> Result<Formula, Error> {
    let f = Formula::parse(text)?;
    check_atoms(&f, universe)?;
    Ok(f)
}

pub(crate) fn check_atoms(f: &Formula, universe: &Universe) -> Result<(), Error> {
    match f.atoms().into_iter().find(|a| !universe.contains(a)) {
        Some(a) => Err(Error::UndeclaredAtom(a.to_string())),
        None => Ok(()),
    }
}

pub(crate) fn require_nonmodal(f: &Formula) -> Result<(), Error> {
    if f.is_modal() {
        Err(Error::ModalFormula(f.to_string()))
    } else {
        Ok(())
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && name != "true" && name != "false"
}

// ---------------------------------------------------------------------------
// Lexer and parser, shared with the sequent, theory and S5 readers.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Dialect {
    /// `[]` is the box.
    Causal,
    /// `C` is the S5 modality and cannot name an atom.
    S5,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Box,
    LParen,
    RParen,
    Comma,
    Turnstile,
    RuleArrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("`{name}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Box => "box operator".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Turnstile => "`|-`".into(),
            Tok::RuleArrow => "`|>`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str, dialect: Dialect) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut toks = Vec::new();
    let mut iter = text.char_indices().peekable();
    while let Some(&(pos, c)) = iter.peek() {
        if c.is_whitespace() {
            iter.next();
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut end = pos;
            while let Some(&(i, d)) = iter.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    end = i + d.len_utf8();
                    iter.next();
                } else {
                    break;
                }
            }
            let word = &text[pos..end];
            let tok = match word {
                "true" => Tok::True,
                "false" => Tok::False,
                "C" if dialect == Dialect::S5 => Tok::Box,
                _ => Tok::Ident(word.to_string()),
            };
            toks.push((tok, pos));
            continue;
        }
        iter.next();
        let next = iter.peek().map(|&(_, d)| d);
        let tok = match c {
            '!' | '¬' => Tok::Not,
            '&' | '∧' => Tok::And,
            '∨' => Tok::Or,
            '→' => Tok::Implies,
            '□' => Tok::Box,
            '⊤' => Tok::True,
            '⊥' => Tok::False,
            '⊢' => Tok::Turnstile,
            '▷' => Tok::RuleArrow,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '|' => match next {
                Some('-') => {
                    iter.next();
                    Tok::Turnstile
                }
                Some('>') => {
                    iter.next();
                    Tok::RuleArrow
                }
                _ => Tok::Or,
            },
            '-' if next == Some('>') => {
                iter.next();
                Tok::Implies
            }
            '[' if next == Some(']') => {
                iter.next();
                Tok::Box
            }
            _ => return Err(ParseError::new(pos, format!("unexpected character `{c}`"))),
        };
        toks.push((tok, pos));
    }
    toks.push((Tok::Eof, text.len()));
    Ok(toks)
}

pub(crate) struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(text: &str, dialect: Dialect) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text, dialect)?,
            pos: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    pub(crate) fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let tok = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn unexpected(&self, wanted: &str) -> ParseError {
        ParseError::new(
            self.offset(),
            format!("expected {wanted}, found {}", self.peek().describe()),
        )
    }

    pub(crate) fn expect(&mut self, tok: &Tok, wanted: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    pub(crate) fn expect_end(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    pub(crate) fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.formula()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.eat(&Tok::Or) {
            let rhs = self.conjunction()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Box => {
                self.bump();
                Ok(Formula::boxed(self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            Tok::True => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::RuleArrow => Err(ParseError::new(
                self.offset(),
                "`|>` only separates the body and head of a rule",
            )),
            _ => Err(self.unexpected("a formula")),
        }
    }

    /// Comma-separated formulas; stops before `|-` or end of input.
    pub(crate) fn formula_list(&mut self) -> Result<Vec<Formula>, ParseError> {
        let mut out = Vec::new();
        if matches!(self.peek(), Tok::Turnstile | Tok::Eof) {
            return Ok(out);
        }
        loop {
            out.push(self.formula()?);
            if !self.eat(&Tok::Comma) {
                return Ok(out);
            }
        }
    }
}
