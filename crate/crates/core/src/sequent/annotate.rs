//! Ordinal annotations of proofs, instantiated with natural numbers.

use crate::formula::Formula;

use super::{Inference, ProofTree};

/// `alpha` counts finitary rule applications since the last box-left,
/// `zeta` counts box-left applications with cuts above them, and `rho`
/// bounds the rank of cut formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Annotation {
    pub alpha: usize,
    pub zeta: usize,
    pub rho: usize,
}

impl Annotation {
    pub const ZERO: Annotation = Annotation {
        alpha: 0,
        zeta: 0,
        rho: 0,
    };
}

/// A proof node paired with its least annotation.
#[derive(Debug, Clone)]
pub struct AnnotatedProof<'a> {
    pub proof: &'a ProofTree,
    pub annotation: Annotation,
    pub premises: Vec<AnnotatedProof<'a>>,
}

/// Rank of a formula: 0 for atoms, constants and boxes; negation adds one;
/// binary connectives take the maximum plus one.
pub fn formula_rank(f: &Formula) -> usize {
    match f {
        Formula::Top | Formula::Bottom | Formula::Atom(_) | Formula::Box(_) => 0,
        Formula::Not(a) => formula_rank(a) + 1,
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            formula_rank(a).max(formula_rank(b)) + 1
        }
    }
}

/// Computes the least annotation of every node, minimising `(zeta, rho, alpha)`
/// lexicographically.
///
/// A premise whose `zeta` is below the node's may be lifted to any `alpha`
/// and `rho`, so only premises at the maximal `zeta` constrain the others.
pub fn annotate(t: &ProofTree) -> AnnotatedProof<'_> {
    let premises: Vec<AnnotatedProof<'_>> = t.premises.iter().map(annotate).collect();
    let annotation = match &t.inference {
        Inference::Ax(_) | Inference::BotL | Inference::TopR => Annotation::ZERO,
        Inference::BoxL { .. } => {
            let clean = premises
                .iter()
                .all(|p| p.annotation.zeta == 0 && p.annotation.rho == 0);
            if clean {
                Annotation::ZERO
            } else {
                Annotation {
                    alpha: 0,
                    zeta: 1 + premises.iter().map(|p| p.annotation.zeta).max().unwrap_or(0),
                    rho: 0,
                }
            }
        }
        Inference::Multicut { formula, .. } => {
            let mut a = finitary(&premises);
            a.rho = a.rho.max(formula_rank(formula) + 1);
            a
        }
        _ => finitary(&premises),
    };
    AnnotatedProof {
        proof: t,
        annotation,
        premises,
    }
}

fn finitary(premises: &[AnnotatedProof<'_>]) -> Annotation {
    let zeta = premises.iter().map(|p| p.annotation.zeta).max().unwrap_or(0);
    let top = premises.iter().filter(|p| p.annotation.zeta == zeta);
    let rho = top.clone().map(|p| p.annotation.rho).max().unwrap_or(0);
    let alpha = 1 + top.map(|p| p.annotation.alpha).max().unwrap_or(0);
    Annotation { alpha, zeta, rho }
}
