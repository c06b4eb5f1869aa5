//! Modal translation of argumentation sequents and the semantic soundness
//! check for single inference steps.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::formula::{check_atoms, Formula};
use crate::kripke::Frame;
use crate::model::Universe;
use crate::sequent::Sequent;
use crate::theory::{CausalRule, CausalTheory};

use super::{Argument, PjProof, PjRule, PjSequent};

/// The causal rule `∧grounds ▷ head` of an argument.
pub fn rule_of(arg: &Argument) -> CausalRule {
    CausalRule {
        body: Formula::conj(arg.grounds.iter().cloned()),
        head: arg.head.clone(),
    }
}

fn collect_atoms<'a>(args: impl IntoIterator<Item = &'a Argument>, out: &mut BTreeSet<String>) {
    let mut atoms = BTreeSet::new();
    for arg in args {
        arg.head.collect_atoms(&mut atoms);
        for g in &arg.grounds {
            g.collect_atoms(&mut atoms);
        }
    }
    out.extend(atoms.into_iter().map(str::to_string));
}

pub(crate) fn theory_over<'a>(
    universe: &Universe,
    basics: impl IntoIterator<Item = &'a Argument>,
) -> Result<CausalTheory> {
    CausalTheory::new(universe.clone(), basics.into_iter().map(rule_of).collect())
}

/// The theory with one rule per basic argument, over the atoms of the
/// sequent in alphabetical order, and the sequent `grounds ⊢ □head`.
pub fn modal_translation(s: &PjSequent) -> Result<(CausalTheory, Sequent)> {
    let mut atoms = BTreeSet::new();
    collect_atoms(s.basics.iter().chain(std::iter::once(&s.goal)), &mut atoms);
    let universe = Universe::new(atoms)?;
    s.goal.check_nonmodal()?;
    let theory = theory_over(&universe, &s.basics)?;
    Ok((theory, translated_sequent(&s.goal)))
}

pub(crate) fn translated_sequent(goal: &Argument) -> Sequent {
    Sequent::new(
        goal.grounds.iter().cloned().collect(),
        vec![Formula::boxed(goal.head.clone())],
    )
}

/// Rewrites `f`, whose box is that of `theta` extended by `extra`, into a
/// formula with the same semantic value under the box of `theta` alone:
/// `□′p` becomes `(body ∧ □(head → p′)) ∨ □p′`.
pub fn expand_modality(f: &Formula, theta: &CausalTheory, extra: &CausalRule) -> Result<Formula> {
    let u = theta.universe();
    check_atoms(f, u)?;
    check_atoms(&extra.body, u)?;
    check_atoms(&extra.head, u)?;
    Ok(alpha(f, extra))
}

fn alpha(f: &Formula, extra: &CausalRule) -> Formula {
    match f {
        Formula::Top | Formula::Bottom | Formula::Atom(_) => f.clone(),
        Formula::Not(a) => Formula::not(alpha(a, extra)),
        Formula::And(a, b) => Formula::and(alpha(a, extra), alpha(b, extra)),
        Formula::Or(a, b) => Formula::or(alpha(a, extra), alpha(b, extra)),
        Formula::Implies(a, b) => Formula::implies(alpha(a, extra), alpha(b, extra)),
        Formula::Box(a) => {
            let inner = alpha(a, extra);
            Formula::or(
                Formula::and(
                    extra.body.clone(),
                    Formula::boxed(Formula::implies(extra.head.clone(), inner.clone())),
                ),
                Formula::boxed(inner),
            )
        }
    }
}

/// `∧grounds → □head`, read in the frame of the basics it was proved from.
fn obligation(goal: &Argument) -> Formula {
    Formula::implies(
        Formula::conj(goal.grounds.iter().cloned()),
        Formula::boxed(goal.head.clone()),
    )
}

/// Whether the node's translated premises entail its translated
/// conclusion at every world of the conclusion's canonical frame.
///
/// Premises proved from extended basics are rewritten with
/// [`expand_modality`] one added argument at a time. Only the node itself is
/// examined; its premises need not be valid.
pub fn verify_rule_soundness(node: &PjProof) -> Result<bool> {
    let mut atoms = BTreeSet::new();
    for n in std::iter::once(node).chain(&node.premises) {
        collect_atoms(n.basics().iter().chain(std::iter::once(n.goal())), &mut atoms);
    }
    let mut side_obligation = None;
    if let PjRule::OrEC { side, left, right } = &node.rule {
        let lhs = Formula::conj(side.iter().cloned());
        let rhs = Formula::or(
            Formula::conj(left.iter().cloned()),
            Formula::conj(right.iter().cloned()),
        );
        let f = Formula::implies(lhs, rhs);
        let mut a = BTreeSet::new();
        f.collect_atoms(&mut a);
        atoms.extend(a.into_iter().map(str::to_string));
        side_obligation = Some(f);
    }
    let universe = Universe::new(atoms)?;
    for n in std::iter::once(node).chain(&node.premises) {
        n.goal().check_nonmodal()?;
        n.basics().iter().try_for_each(Argument::check_nonmodal)?;
    }
    let base = node.basics();
    let frame = Frame::new(&theory_over(&universe, base)?)?;

    let mut premises: Vec<Formula> = side_obligation.into_iter().collect();
    for p in &node.premises {
        if !base.is_subset(p.basics()) {
            return Err(Error::Precondition(
                "a premise drops basic arguments of the conclusion".into(),
            ));
        }
        let extras: Vec<&Argument> = p.basics().difference(base).collect();
        // Peel the added arguments off one at a time, last first.
        let mut f = obligation(p.goal());
        for k in (0..extras.len()).rev() {
            let below = theory_over(&universe, base.iter().chain(extras[..k].iter().copied()))?;
            f = expand_modality(&f, &below, &rule_of(extras[k]))?;
        }
        premises.push(f);
    }
    frame.entails(&premises, &[obligation(node.goal())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::semantic_value;

    fn f(text: &str) -> Formula {
        Formula::parse(text).unwrap()
    }

    fn arg(text: &str) -> Argument {
        Argument::parse(text).unwrap()
    }

    #[test]
    fn translation_reads_rules_directly() {
        let s = PjSequent {
            basics: [arg("q <- p")].into_iter().collect(),
            goal: arg("q <- p"),
        };
        let (theory, seq) = modal_translation(&s).unwrap();
        assert_eq!(theory.to_text(), "atoms: p q\nrule: p |> q\n");
        assert_eq!(seq, Sequent::parse("p |- []q").unwrap());

        let s = PjSequent {
            basics: [Argument::bare(Formula::Top)].into_iter().collect(),
            goal: Argument::bare(Formula::Top),
        };
        let (theory, seq) = modal_translation(&s).unwrap();
        assert_eq!(theory.rules()[0].to_string(), "true |> true");
        assert_eq!(seq.to_string(), "|- []true");
    }

    #[test]
    fn expansion_clause() {
        let theta = CausalTheory::from_strs(["p", "q"], ["p |> p", "p |> q"]).unwrap();
        let extra = CausalRule::parse("q |> p").unwrap();
        assert_eq!(expand_modality(&f("p"), &theta, &extra).unwrap(), f("p"));
        assert_eq!(
            expand_modality(&f("[]p"), &theta, &extra).unwrap(),
            f("(q & [](p -> p)) | []p")
        );
    }

    #[test]
    fn expansion_preserves_values() {
        let theta = CausalTheory::from_strs(["p", "q"], ["p |> p", "p |> q"]).unwrap();
        let extra = CausalRule::parse("q |> p").unwrap();
        let extended = theta.with_rule(extra.clone()).unwrap();
        for text in ["[]p", "[]q", "[]!p", "![](p | q)", "[][]q", "p -> []q"] {
            let g = f(text);
            let expanded = expand_modality(&g, &theta, &extra).unwrap();
            assert_eq!(
                semantic_value(&expanded, &theta).unwrap(),
                semantic_value(&g, &extended).unwrap(),
                "{text}"
            );
        }
    }

    #[test]
    fn node_soundness() {
        let theta: BTreeSet<Argument> = [arg("p <- g1"), arg("q <- g2")].into_iter().collect();
        let pq = PjProof::and_i(
            PjProof::axiom(&theta, arg("p <- g1")),
            PjProof::axiom(&theta, arg("q <- g2")),
        );
        assert!(verify_rule_soundness(&pq).unwrap());
        assert!(verify_rule_soundness(&PjProof::top_i(&theta)).unwrap());

        // Concluding q from p & q while claiming only p's grounds.
        let mut corrupted = PjProof::and_e(pq, true);
        corrupted.sequent.goal.grounds = [f("g1")].into_iter().collect();
        assert!(!verify_rule_soundness(&corrupted).unwrap());
    }
}
