//! Two-sided multiset sequents over the modal language and the sequent
//! calculus built on them.

mod annotate;
mod check;
mod cut;
mod interpolate;
mod proof;
mod search;
mod text;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, ParseError};
use crate::formula::{check_atoms, Dialect, Formula, Parser, Symbols, Tok, ASCII, UNICODE};
use crate::model::Universe;

pub use annotate::{annotate, formula_rank, AnnotatedProof, Annotation};
pub use check::{check_proof, check_proof_in, CheckError};
pub use cut::eliminate_cuts;
pub use interpolate::{interpolant_sets, interpolate, normal_form, NormalForm};
pub use proof::{Inference, ProofTree};
pub use search::{prove_cut_free, Prover, SearchResult, DEFAULT_NODE_BUDGET};
pub use text::parse_proof;

/// `left |- right`, with both sides kept as sorted multisets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    left: Vec<Formula>,
    right: Vec<Formula>,
}

impl Sequent {
    pub fn new(mut left: Vec<Formula>, mut right: Vec<Formula>) -> Sequent {
        left.sort();
        right.sort();
        Sequent { left, right }
    }

    /// Parses `f1, f2 |- g1, g2`; either side may be empty.
    pub fn parse(text: &str) -> Result<Sequent, ParseError> {
        let mut parser = Parser::new(text, Dialect::Causal)?;
        let left = parser.formula_list()?;
        parser.expect(&Tok::Turnstile, "`,` or `|-`")?;
        let right = parser.formula_list()?;
        parser.expect_end()?;
        Ok(Sequent::new(left, right))
    }

    /// Parses and checks the atoms against `universe`.
    pub fn parse_in(text: &str, universe: &Universe) -> Result<Sequent, Error> {
        let s = Sequent::parse(text)?;
        s.check_atoms(universe)?;
        Ok(s)
    }

    pub fn left(&self) -> &[Formula] {
        &self.left
    }

    pub fn right(&self) -> &[Formula] {
        &self.right
    }

    pub fn is_nonmodal(&self) -> bool {
        self.left.iter().chain(&self.right).all(|f| !f.is_modal())
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        for f in self.left.iter().chain(&self.right) {
            f.collect_atoms(&mut out);
        }
        out
    }

    pub(crate) fn check_atoms(&self, universe: &Universe) -> Result<(), Error> {
        self.left
            .iter()
            .chain(&self.right)
            .try_for_each(|f| check_atoms(f, universe))
    }

    pub fn unicode(&self) -> SequentDisplay<'_> {
        SequentDisplay {
            sequent: self,
            symbols: &UNICODE,
            turnstile: "⊢",
        }
    }

    pub(crate) fn with_left(&self, f: Formula) -> Sequent {
        let mut s = self.clone();
        insert_sorted(&mut s.left, f);
        s
    }

    pub(crate) fn with_right(&self, f: Formula) -> Sequent {
        let mut s = self.clone();
        insert_sorted(&mut s.right, f);
        s
    }

    pub(crate) fn without_left(&self, f: &Formula) -> Option<Sequent> {
        let mut s = self.clone();
        remove_one(&mut s.left, f).then_some(s)
    }

    pub(crate) fn without_right(&self, f: &Formula) -> Option<Sequent> {
        let mut s = self.clone();
        remove_one(&mut s.right, f).then_some(s)
    }

    pub(crate) fn count_left(&self, f: &Formula) -> usize {
        self.left.iter().filter(|g| *g == f).count()
    }

    pub(crate) fn count_right(&self, f: &Formula) -> usize {
        self.right.iter().filter(|g| *g == f).count()
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, symbols: &Symbols, turnstile: &str) -> fmt::Result {
        write_list(f, &self.left, symbols)?;
        if !self.left.is_empty() {
            f.write_str(" ")?;
        }
        f.write_str(turnstile)?;
        if !self.right.is_empty() {
            f.write_str(" ")?;
        }
        write_list(f, &self.right, symbols)
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[Formula], symbols: &Symbols) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        item.write_with(f, symbols, 0)?;
    }
    Ok(())
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, &ASCII, "|-")
    }
}

pub struct SequentDisplay<'a> {
    sequent: &'a Sequent,
    symbols: &'a Symbols,
    turnstile: &'a str,
}

impl fmt::Display for SequentDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.sequent.write(f, self.symbols, self.turnstile)
    }
}

pub(crate) fn insert_sorted(v: &mut Vec<Formula>, f: Formula) {
    let at = v.partition_point(|g| *g <= f);
    v.insert(at, f);
}

pub(crate) fn remove_one(v: &mut Vec<Formula>, f: &Formula) -> bool {
    match v.iter().position(|g| g == f) {
        Some(i) => {
            v.remove(i);
            true
        }
        None => false,
    }
}

/// `a - b` as multisets, or `None` when `b` is not contained in `a`.
pub(crate) fn multiset_minus(a: &[Formula], b: &[Formula]) -> Option<Vec<Formula>> {
    let mut out = a.to_vec();
    for f in b {
        if !remove_one(&mut out, f) {
            return None;
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        let s = Sequent::parse("q, p |- []q").unwrap();
        assert_eq!(s.left(), &[Formula::atom("p"), Formula::atom("q")]);
        assert_eq!(s.to_string(), "p, q |- []q");
        assert_eq!(s.unicode().to_string(), "p, q ⊢ □q");
        assert_eq!(Sequent::parse("|- true").unwrap().to_string(), "|- true");
        assert_eq!(Sequent::parse("p |-").unwrap().to_string(), "p |-");
        assert!(Sequent::parse("p, q").is_err());
    }
}
