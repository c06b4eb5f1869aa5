//! An argumentation consequence relation over `(head, grounds)` pairs, its
//! translation into causal box entailments, and proof extraction from the
//! sequent calculus.

mod check;
mod extract;
mod translate;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, ParseError, Result};
use crate::formula::{require_nonmodal, Dialect, Formula, Parser, Tok};
use crate::theory::strip_comment;

pub use check::{check_grounds_are_unions, check_pj_proof, PjCheckError};
pub use extract::{extract_pj_proof, tautology_proof};
pub use translate::{expand_modality, modal_translation, rule_of, verify_rule_soundness};

/// A conclusion `head` supported by a set of `grounds`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Argument {
    pub head: Formula,
    pub grounds: BTreeSet<Formula>,
}

impl Argument {
    pub fn new<I: IntoIterator<Item = Formula>>(head: Formula, grounds: I) -> Result<Argument> {
        let arg = Argument {
            head,
            grounds: grounds.into_iter().collect(),
        };
        arg.check_nonmodal()?;
        Ok(arg)
    }

    /// An argument with no grounds.
    pub fn bare(head: Formula) -> Argument {
        Argument {
            head,
            grounds: BTreeSet::new(),
        }
    }

    pub(crate) fn check_nonmodal(&self) -> Result<()> {
        require_nonmodal(&self.head)?;
        self.grounds.iter().try_for_each(require_nonmodal)
    }

    /// Parses `head <- g1, g2` (no grounds after `<-` means none).
    pub fn parse(text: &str) -> Result<Argument> {
        let arrow = text
            .find("<-")
            .ok_or_else(|| ParseError::new(text.len(), "expected `head <- grounds`"))?;
        let mut head_parser = Parser::new(&text[..arrow], Dialect::Causal)?;
        let head = head_parser.formula()?;
        head_parser.expect_end()?;
        let rest = &text[arrow + 2..];
        let shift = |mut e: ParseError| {
            e.offset += arrow + 2;
            e
        };
        let mut parser = Parser::new(rest, Dialect::Causal).map_err(shift)?;
        let grounds = if *parser.peek() == Tok::Eof {
            Vec::new()
        } else {
            parser.formula_list().map_err(shift)?
        };
        parser.expect_end().map_err(shift)?;
        Argument::new(head, grounds)
    }
}

impl fmt::Display for Argument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {{", self.head)?;
        write_set(f, &self.grounds)?;
        f.write_str("})")
    }
}

fn write_set(f: &mut fmt::Formatter<'_>, set: &BTreeSet<Formula>) -> fmt::Result {
    for (i, g) in set.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{g}")?;
    }
    Ok(())
}

/// Reads basic arguments, one `arg: head <- g1, g2` per line, with blank
/// lines and `#` comments.
pub fn parse_basics(text: &str) -> Result<BTreeSet<Argument>> {
    let mut out = BTreeSet::new();
    for (line_no, line) in text.lines().enumerate() {
        let line_no = line_no + 1;
        let content = strip_comment(line);
        if content.trim().is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        let body = content[indent..]
            .strip_prefix("arg:")
            .ok_or_else(|| Error::from(ParseError::new(indent, "expected `arg: head <- grounds`").at_line(line_no, 0)))?;
        let arg = Argument::parse(body).map_err(|e| match e {
            Error::Parse(p) => Error::Parse(p.at_line(line_no, indent + 4)),
            other => other,
        })?;
        out.insert(arg);
    }
    Ok(out)
}

/// `basics ⊢ goal`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PjSequent {
    pub basics: BTreeSet<Argument>,
    pub goal: Argument,
}

impl fmt::Display for PjSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.basics.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, " |- {}", self.goal)
    }
}

/// Inference rules. `OrEC` is classical or-elimination: from the classical
/// entailment `side ⊢ ∧left ∨ ∧right` and proofs of `(s, G1)`, `(s, G2)` it
/// concludes `(s, side ∪ (G1 − left) ∪ (G2 − right))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PjRule {
    Axiom,
    TopI,
    AndI,
    AndE1,
    AndE2,
    OrI1,
    OrI2,
    OrE,
    NotI,
    NotE,
    ImpI,
    ImpE,
    Efq,
    Raa,
    OrEC {
        side: BTreeSet<Formula>,
        left: BTreeSet<Formula>,
        right: BTreeSet<Formula>,
    },
}

impl PjRule {
    pub fn tag(&self) -> &'static str {
        match self {
            PjRule::Axiom => "Axiom",
            PjRule::TopI => "TopI",
            PjRule::AndI => "AndI",
            PjRule::AndE1 => "AndE1",
            PjRule::AndE2 => "AndE2",
            PjRule::OrI1 => "OrI1",
            PjRule::OrI2 => "OrI2",
            PjRule::OrE => "OrE",
            PjRule::NotI => "NotI",
            PjRule::NotE => "NotE",
            PjRule::ImpI => "ImpI",
            PjRule::ImpE => "ImpE",
            PjRule::Efq => "EFQ",
            PjRule::Raa => "RAA",
            PjRule::OrEC { .. } => "OrEC",
        }
    }
}

/// A proof tree; each node records its full sequent.
///
/// The constructors build nodes whose conclusions follow the rule schemas
/// from their premises; they do not check the premises.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PjProof {
    pub sequent: PjSequent,
    pub rule: PjRule,
    pub premises: Vec<PjProof>,
}

fn with(basics: &BTreeSet<Argument>, arg: Argument) -> BTreeSet<Argument> {
    let mut out = basics.clone();
    out.insert(arg);
    out
}

fn union(a: &BTreeSet<Formula>, b: &BTreeSet<Formula>) -> BTreeSet<Formula> {
    a.union(b).cloned().collect()
}

impl PjProof {
    fn node(basics: BTreeSet<Argument>, goal: Argument, rule: PjRule, premises: Vec<PjProof>) -> PjProof {
        PjProof {
            sequent: PjSequent { basics, goal },
            rule,
            premises,
        }
    }

    pub fn goal(&self) -> &Argument {
        &self.sequent.goal
    }

    pub fn basics(&self) -> &BTreeSet<Argument> {
        &self.sequent.basics
    }

    pub fn axiom(basics: &BTreeSet<Argument>, arg: Argument) -> PjProof {
        PjProof::node(basics.clone(), arg, PjRule::Axiom, vec![])
    }

    pub fn top_i(basics: &BTreeSet<Argument>) -> PjProof {
        PjProof::node(basics.clone(), Argument::bare(Formula::Top), PjRule::TopI, vec![])
    }

    pub fn and_i(a: PjProof, b: PjProof) -> PjProof {
        let goal = Argument {
            head: Formula::and(a.goal().head.clone(), b.goal().head.clone()),
            grounds: union(&a.goal().grounds, &b.goal().grounds),
        };
        PjProof::node(a.basics().clone(), goal, PjRule::AndI, vec![a, b])
    }

    /// `∧E1` or `∧E2` on a proof of a conjunction.
    pub fn and_e(p: PjProof, second: bool) -> PjProof {
        let Formula::And(l, r) = &p.goal().head else {
            panic!("and-elimination on a non-conjunction")
        };
        let head = if second { (**r).clone() } else { (**l).clone() };
        let goal = Argument {
            head,
            grounds: p.goal().grounds.clone(),
        };
        let rule = if second { PjRule::AndE2 } else { PjRule::AndE1 };
        PjProof::node(p.basics().clone(), goal, rule, vec![p])
    }

    /// `∨I1` (the proof's head on the left) or `∨I2` (on the right).
    pub fn or_i(p: PjProof, other: Formula, second: bool) -> PjProof {
        let head = if second {
            Formula::or(other, p.goal().head.clone())
        } else {
            Formula::or(p.goal().head.clone(), other)
        };
        let goal = Argument {
            head,
            grounds: p.goal().grounds.clone(),
        };
        let rule = if second { PjRule::OrI2 } else { PjRule::OrI1 };
        PjProof::node(p.basics().clone(), goal, rule, vec![p])
    }

    /// `∨E`: `major` proves `(p ∨ q, Γ)`; the cases extend the basics with
    /// `(p, Γ)` and `(q, Γ)` and prove the same head.
    pub fn or_e(major: PjProof, left: PjProof, right: PjProof) -> PjProof {
        let goal = Argument {
            head: left.goal().head.clone(),
            grounds: union(&left.goal().grounds, &right.goal().grounds),
        };
        PjProof::node(major.basics().clone(), goal, PjRule::OrE, vec![major, left, right])
    }

    /// `¬I`: from `basics, (p, ∅) ⊢ (⊥, Γ)` conclude `(¬p, Γ)`.
    pub fn not_i(basics: &BTreeSet<Argument>, p: Formula, prem: PjProof) -> PjProof {
        let goal = Argument {
            head: Formula::not(p),
            grounds: prem.goal().grounds.clone(),
        };
        PjProof::node(basics.clone(), goal, PjRule::NotI, vec![prem])
    }

    pub fn not_e(pos: PjProof, neg: PjProof) -> PjProof {
        let goal = Argument {
            head: Formula::Bottom,
            grounds: union(&pos.goal().grounds, &neg.goal().grounds),
        };
        PjProof::node(pos.basics().clone(), goal, PjRule::NotE, vec![pos, neg])
    }

    /// `→I`: from `basics, (p, ∅) ⊢ (q, Γ)` conclude `(p → q, Γ)`.
    pub fn imp_i(basics: &BTreeSet<Argument>, p: Formula, prem: PjProof) -> PjProof {
        let goal = Argument {
            head: Formula::implies(p, prem.goal().head.clone()),
            grounds: prem.goal().grounds.clone(),
        };
        PjProof::node(basics.clone(), goal, PjRule::ImpI, vec![prem])
    }

    /// `→E` from `(p, Γ)` and `(p → q, Δ)`.
    pub fn imp_e(minor: PjProof, major: PjProof) -> PjProof {
        let Formula::Implies(_, q) = &major.goal().head else {
            panic!("implication-elimination on a non-implication")
        };
        let goal = Argument {
            head: (**q).clone(),
            grounds: union(&minor.goal().grounds, &major.goal().grounds),
        };
        PjProof::node(minor.basics().clone(), goal, PjRule::ImpE, vec![minor, major])
    }

    pub fn efq(prem: PjProof, p: Formula) -> PjProof {
        let goal = Argument {
            head: p,
            grounds: prem.goal().grounds.clone(),
        };
        PjProof::node(prem.basics().clone(), goal, PjRule::Efq, vec![prem])
    }

    /// `RAA`: from `basics, (¬p, ∅) ⊢ (⊥, Γ)` conclude `(p, Γ)`.
    pub fn raa(basics: &BTreeSet<Argument>, p: Formula, prem: PjProof) -> PjProof {
        let goal = Argument {
            head: p,
            grounds: prem.goal().grounds.clone(),
        };
        PjProof::node(basics.clone(), goal, PjRule::Raa, vec![prem])
    }

    pub fn or_ec(
        side: BTreeSet<Formula>,
        left: BTreeSet<Formula>,
        right: BTreeSet<Formula>,
        a: PjProof,
        b: PjProof,
    ) -> PjProof {
        let grounds = or_ec_grounds(&side, &left, &right, &a.goal().grounds, &b.goal().grounds);
        let goal = Argument {
            head: a.goal().head.clone(),
            grounds,
        };
        PjProof::node(a.basics().clone(), goal, PjRule::OrEC { side, left, right }, vec![a, b])
    }

    /// The same proof with `arg` added to the basics of every node.
    pub fn with_basic(&self, arg: &Argument) -> PjProof {
        PjProof {
            sequent: PjSequent {
                basics: with(&self.sequent.basics, arg.clone()),
                goal: self.sequent.goal.clone(),
            },
            rule: self.rule.clone(),
            premises: self.premises.iter().map(|p| p.with_basic(arg)).collect(),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(PjProof::size).sum::<usize>()
    }

    /// All nodes in pre-order.
    pub fn nodes(&self) -> Vec<&PjProof> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(n.premises.iter().rev());
        }
        out
    }

    pub fn uses_classical_or(&self) -> bool {
        self.nodes().iter().any(|n| matches!(n.rule, PjRule::OrEC { .. }))
    }

    fn write_tree(&self, f: &mut fmt::Formatter<'_>, depth: usize, parent: Option<&BTreeSet<Argument>>) -> fmt::Result {
        write!(f, "{:indent$}{} | {}", "", self.rule.tag(), self.goal(), indent = 2 * depth)?;
        if let PjRule::OrEC { side, left, right } = &self.rule {
            f.write_str(" | {")?;
            write_set(f, side)?;
            f.write_str("} ⊢ ∧{")?;
            write_set(f, left)?;
            f.write_str("} ∨ ∧{")?;
            write_set(f, right)?;
            f.write_str("}")?;
        }
        if let Some(parent) = parent {
            let added: Vec<&Argument> = self.basics().difference(parent).collect();
            if !added.is_empty() {
                f.write_str(" | +")?;
                for a in added {
                    write!(f, " {a}")?;
                }
            }
        }
        writeln!(f)?;
        for p in &self.premises {
            p.write_tree(f, depth + 1, Some(self.basics()))?;
        }
        Ok(())
    }
}

pub(crate) fn or_ec_grounds(
    side: &BTreeSet<Formula>,
    left: &BTreeSet<Formula>,
    right: &BTreeSet<Formula>,
    g1: &BTreeSet<Formula>,
    g2: &BTreeSet<Formula>,
) -> BTreeSet<Formula> {
    let mut out = side.clone();
    out.extend(g1.difference(left).cloned());
    out.extend(g2.difference(right).cloned());
    out
}

/// One node per line, premises indented below their conclusion; basics
/// added relative to the parent node are listed after `+`.
impl fmt::Display for PjProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_tree(f, 0, None)
    }
}
