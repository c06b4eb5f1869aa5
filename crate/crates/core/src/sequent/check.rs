use std::fmt;

use crate::error::Error;
use crate::formula::Formula;
use crate::kripke::Frame;
use crate::theory::CausalTheory;

use super::{multiset_minus, Inference, ProofTree, Sequent};

/// The first node (in pre-order) that fails to instantiate its rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckError {
    /// Premise indices leading from the root to the offending node.
    pub path: Vec<usize>,
    pub rule: &'static str,
    pub reason: String,
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {:?} ({}): {}", self.path, self.rule, self.reason)
    }
}

impl std::error::Error for CheckError {}

impl From<CheckError> for Error {
    fn from(e: CheckError) -> Self {
        Error::InvalidProof(e.to_string())
    }
}

/// Checks every node of `t` against the rules of the calculus for `theory`.
pub fn check_proof(t: &ProofTree, theory: &CausalTheory) -> Result<(), CheckError> {
    let frame = Frame::new(theory).map_err(|e| CheckError {
        path: Vec::new(),
        rule: t.inference.tag(),
        reason: e.to_string(),
    })?;
    check_proof_in(t, &frame)
}

/// [`check_proof`] against a prebuilt frame.
pub fn check_proof_in(t: &ProofTree, frame: &Frame) -> Result<(), CheckError> {
    let mut path = Vec::new();
    check_node(t, frame, &mut path)
}

fn check_node(t: &ProofTree, frame: &Frame, path: &mut Vec<usize>) -> Result<(), CheckError> {
    let fail = |reason: String| CheckError {
        path: path.clone(),
        rule: t.inference.tag(),
        reason,
    };
    t.conclusion
        .check_atoms(frame.universe())
        .map_err(|e| fail(e.to_string()))?;
    check_instance(t, frame).map_err(fail)?;
    for (i, premise) in t.premises.iter().enumerate() {
        path.push(i);
        check_node(premise, frame, path)?;
        path.pop();
    }
    Ok(())
}

fn premise_count(t: &ProofTree, n: usize) -> Result<(), String> {
    if t.premises.len() == n {
        Ok(())
    } else {
        Err(format!("expected {n} premises, found {}", t.premises.len()))
    }
}

fn expect_premises(t: &ProofTree, expected: &[Sequent]) -> Result<(), String> {
    premise_count(t, expected.len())?;
    for (i, (p, want)) in t.premises.iter().zip(expected).enumerate() {
        if p.conclusion != *want {
            return Err(format!(
                "premise {i} should be `{}` but is `{}`",
                want.unicode(),
                p.conclusion.unicode()
            ));
        }
    }
    Ok(())
}

fn take_left(s: &Sequent, f: &Formula) -> Result<Sequent, String> {
    s.without_left(f)
        .ok_or_else(|| format!("`{}` does not occur on the left", f.unicode()))
}

fn take_right(s: &Sequent, f: &Formula) -> Result<Sequent, String> {
    s.without_right(f)
        .ok_or_else(|| format!("`{}` does not occur on the right", f.unicode()))
}

fn wrong_shape(f: &Formula) -> String {
    format!("principal formula `{}` has the wrong connective", f.unicode())
}

fn check_instance(t: &ProofTree, frame: &Frame) -> Result<(), String> {
    let c = &t.conclusion;
    match &t.inference {
        Inference::Ax(f) => {
            premise_count(t, 0)?;
            if *c != Sequent::new(vec![f.clone()], vec![f.clone()]) {
                return Err("axiom must be exactly `A ⊢ A`".into());
            }
        }
        Inference::BotL => {
            premise_count(t, 0)?;
            if *c != Sequent::new(vec![Formula::Bottom], vec![]) {
                return Err("must be exactly `⊥ ⊢`".into());
            }
        }
        Inference::TopR => {
            premise_count(t, 0)?;
            if *c != Sequent::new(vec![], vec![Formula::Top]) {
                return Err("must be exactly `⊢ ⊤`".into());
            }
        }
        Inference::LeftWeaken(f) => expect_premises(t, &[take_left(c, f)?])?,
        Inference::RightWeaken(f) => expect_premises(t, &[take_right(c, f)?])?,
        Inference::LeftContract(f) => {
            take_left(c, f)?;
            expect_premises(t, &[c.with_left(f.clone())])?
        }
        Inference::RightContract(f) => {
            take_right(c, f)?;
            expect_premises(t, &[c.with_right(f.clone())])?
        }
        Inference::NotL(f) => {
            let Formula::Not(a) = f else { return Err(wrong_shape(f)) };
            expect_premises(t, &[take_left(c, f)?.with_right((**a).clone())])?
        }
        Inference::NotR(f) => {
            let Formula::Not(a) = f else { return Err(wrong_shape(f)) };
            expect_premises(t, &[take_right(c, f)?.with_left((**a).clone())])?
        }
        Inference::AndL(f) => {
            let Formula::And(a, b) = f else { return Err(wrong_shape(f)) };
            let rest = take_left(c, f)?;
            expect_premises(t, &[rest.with_left((**a).clone()).with_left((**b).clone())])?
        }
        Inference::AndR(f) => {
            let Formula::And(a, b) = f else { return Err(wrong_shape(f)) };
            let rest = take_right(c, f)?;
            expect_premises(
                t,
                &[rest.with_right((**a).clone()), rest.with_right((**b).clone())],
            )?
        }
        Inference::OrL(f) => {
            let Formula::Or(a, b) = f else { return Err(wrong_shape(f)) };
            let rest = take_left(c, f)?;
            expect_premises(
                t,
                &[rest.with_left((**a).clone()), rest.with_left((**b).clone())],
            )?
        }
        Inference::OrR(f) => {
            let Formula::Or(a, b) = f else { return Err(wrong_shape(f)) };
            let rest = take_right(c, f)?;
            expect_premises(t, &[rest.with_right((**a).clone()).with_right((**b).clone())])?
        }
        Inference::ImpL(f) => {
            let Formula::Implies(a, b) = f else { return Err(wrong_shape(f)) };
            let rest = take_left(c, f)?;
            expect_premises(
                t,
                &[rest.with_right((**a).clone()), rest.with_left((**b).clone())],
            )?
        }
        Inference::ImpR(f) => {
            let Formula::Implies(a, b) = f else { return Err(wrong_shape(f)) };
            let rest = take_right(c, f)?;
            expect_premises(t, &[rest.with_left((**a).clone()).with_right((**b).clone())])?
        }
        Inference::BoxR { principal, set } => {
            let Formula::Box(target) = principal else { return Err(wrong_shape(principal)) };
            let theory = frame.theory();
            if set.rules.windows(2).any(|w| w[0] >= w[1])
                || set.rules.iter().any(|&i| i >= theory.len())
            {
                return Err(format!("rule set {set} is not a sorted set of rule indices"));
            }
            let rest = take_right(c, principal)?;
            expect_premises(
                t,
                &[
                    rest.with_right(set.body_conjunction(theory)),
                    Sequent::new(set.heads(theory), vec![(**target).clone()]),
                ],
            )?
        }
        Inference::BoxL { principal, sets } => {
            let Formula::Box(target) = principal else { return Err(wrong_shape(principal)) };
            let theory = frame.theory();
            let expected = frame.explanation_sets(target).map_err(|e| e.to_string())?;
            if *sets != expected {
                return Err(format!(
                    "premise family must be indexed by all explanation sets of `{}`",
                    target.unicode()
                ));
            }
            let rest = take_left(c, principal)?;
            let premises: Vec<Sequent> = sets
                .iter()
                .map(|s| {
                    let mut left = rest.left().to_vec();
                    left.extend(s.bodies(theory));
                    Sequent::new(left, rest.right().to_vec())
                })
                .collect();
            expect_premises(t, &premises)?
        }
        Inference::Multicut {
            formula,
            left: m,
            right: n,
        } => {
            premise_count(t, 2)?;
            if *m == 0 || *n == 0 {
                return Err("cut multiplicities must be positive".into());
            }
            let p1 = &t.premises[0].conclusion;
            let p2 = &t.premises[1].conclusion;
            let right1 = multiset_minus(p1.right(), &vec![formula.clone(); *m])
                .ok_or("left premise lacks the cut formula occurrences")?;
            let left2 = multiset_minus(p2.left(), &vec![formula.clone(); *n])
                .ok_or("right premise lacks the cut formula occurrences")?;
            let mut left = p1.left().to_vec();
            left.extend(left2);
            let mut right = right1;
            right.extend(p2.right().iter().cloned());
            if *c != Sequent::new(left, right) {
                return Err("conclusion does not combine the premises' contexts".into());
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::ExplanationSet;

    fn theta1() -> CausalTheory {
        CausalTheory::from_strs(["p", "q"], ["p |> p", "p |> q"]).unwrap()
    }

    fn s(text: &str) -> Sequent {
        Sequent::parse(text).unwrap()
    }

    #[test]
    fn axiom_checks() {
        let t = theta1();
        assert!(check_proof(&ProofTree::axiom(Formula::atom("p")), &t).is_ok());
        let bad = ProofTree::leaf(s("p, q |- p"), Inference::Ax(Formula::atom("p")));
        assert!(check_proof(&bad, &t).is_err());
    }

    #[test]
    fn box_right_instance() {
        let t = theta1();
        let proof = ProofTree::new(
            s("p |- []q"),
            Inference::BoxR {
                principal: Formula::parse("[]q").unwrap(),
                set: ExplanationSet { rules: vec![1] },
            },
            vec![
                ProofTree::axiom(Formula::atom("p")),
                ProofTree::axiom(Formula::atom("q")),
            ],
        );
        assert_eq!(check_proof(&proof, &t), Ok(()));
    }

    #[test]
    fn box_left_with_no_premises() {
        let t = theta1();
        let proof = ProofTree::leaf(
            s("q, []!p |- p"),
            Inference::BoxL {
                principal: Formula::parse("[]!p").unwrap(),
                sets: vec![],
            },
        );
        assert_eq!(check_proof(&proof, &t), Ok(()));
        let wrong = ProofTree::leaf(
            s("[]q |-"),
            Inference::BoxL {
                principal: Formula::parse("[]q").unwrap(),
                sets: vec![],
            },
        );
        assert!(check_proof(&wrong, &t).is_err());
    }

    #[test]
    fn reports_path_of_bad_node() {
        let t = theta1();
        let p = Formula::atom("p");
        let proof = ProofTree::new(
            s("p |- p, q"),
            Inference::RightWeaken(p.clone()),
            vec![ProofTree::axiom(p.clone())],
        );
        let err = check_proof(&proof, &t).unwrap_err();
        assert_eq!(err.path, Vec::<usize>::new());
        let proof = ProofTree::new(
            s("p |- p, q"),
            Inference::RightWeaken(Formula::atom("q")),
            vec![ProofTree::leaf(s("p |- p"), Inference::TopR)],
        );
        let err = check_proof(&proof, &t).unwrap_err();
        assert_eq!(err.path, vec![0]);
    }

    #[test]
    fn multicut_arithmetic() {
        let t = theta1();
        let p = Formula::atom("p");
        let cut = ProofTree::new(
            s("p |- p"),
            Inference::Multicut {
                formula: p.clone(),
                left: 1,
                right: 1,
            },
            vec![ProofTree::axiom(p.clone()), ProofTree::axiom(p.clone())],
        );
        assert_eq!(check_proof(&cut, &t), Ok(()));
        let zero = ProofTree::new(
            s("p, p |- p, p"),
            Inference::Multicut {
                formula: p.clone(),
                left: 0,
                right: 0,
            },
            vec![ProofTree::axiom(p.clone()), ProofTree::axiom(p)],
        );
        assert!(check_proof(&zero, &t).is_err());
    }
}
