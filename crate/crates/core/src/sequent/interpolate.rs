//! Interpolants for boxed conclusions and the normal form of box entailments.

use crate::error::{Error, Result};
use crate::formula::{require_nonmodal, Formula};
use crate::kripke::{ExplanationSet, Frame};
use crate::model::Model;
use crate::theory::CausalTheory;

use super::{Inference, Prover, ProofTree, SearchResult, Sequent};

/// From a cut-free proof of `Γ ⊢ □p, Δ`, pairs `(a, b)` of a conjunction of
/// rule bodies and the matching conjunction of heads, such that
/// `Γ ⊢ a1, ..., ak, Δ`, `a ⊢ □b` and `b ⊢ p`.
///
/// Every box-right on `□p` in the proof contributes its rule set. An axiom
/// on `□p` contributes every explanation set of `p`, since `□p` is then
/// passed through unanalysed.
pub fn interpolate(t: &ProofTree, target: &Formula, theory: &CausalTheory) -> Result<Vec<(Formula, Formula)>> {
    let mut pairs: Vec<(Formula, Formula)> = Vec::new();
    for set in interpolant_sets(t, target, theory)? {
        let pair = (set.body_conjunction(theory), set.head_conjunction(theory));
        if !pairs.contains(&pair) {
            pairs.push(pair);
        }
    }
    Ok(pairs)
}

/// The explanation sets behind [`interpolate`], in order of first use.
pub fn interpolant_sets(t: &ProofTree, target: &Formula, theory: &CausalTheory) -> Result<Vec<ExplanationSet>> {
    if !t.is_cut_free() {
        return Err(Error::Precondition("interpolation needs a cut-free proof".into()));
    }
    let Formula::Box(inner) = target else {
        return Err(Error::Precondition(format!("`{target}` is not a box formula")));
    };
    if !t.conclusion.right().contains(target) {
        return Err(Error::Precondition(format!(
            "`{target}` does not occur on the right of the conclusion"
        )));
    }
    let mut sets: Vec<ExplanationSet> = Vec::new();
    let mut push = |set: &ExplanationSet| {
        if !sets.contains(set) {
            sets.push(set.clone());
        }
    };
    let mut all_sets = None;
    for node in t.nodes() {
        match &node.inference {
            Inference::BoxR { principal, set } if principal == target => push(set),
            Inference::Ax(f) if f == target => {
                let all = match &all_sets {
                    Some(s) => s,
                    None => all_sets.insert(Frame::new(theory)?.explanation_sets(inner)?),
                };
                all.iter().for_each(&mut push);
            }
            _ => {}
        }
    }
    Ok(sets)
}

/// Result of [`normal_form`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalForm {
    /// `gamma ⊢ a`, `a ⊢ □b` and `b ⊢ p`, with `gamma` a subset of the premises.
    Found {
        gamma: Vec<Formula>,
        a: Formula,
        b: Formula,
    },
    /// The box entailment fails at this world.
    Unprovable(Model),
}

/// For nonmodal premises `gamma` and target `p`, finds `Γ' ⊆ Γ` and nonmodal
/// `a`, `b` with `Γ' ⊢ a`, `a ⊢ □b`, `b ⊢ p`, or a countermodel to `Γ ⊢ □p`.
pub fn normal_form(gamma: &[Formula], p: &Formula, theory: &CausalTheory) -> Result<NormalForm> {
    for g in gamma {
        require_nonmodal(g)?;
    }
    require_nonmodal(p)?;
    let target = Formula::boxed(p.clone());
    let sequent = Sequent::new(gamma.to_vec(), vec![target.clone()]);
    let mut prover = Prover::new(theory)?;
    let proof = match prover.prove(&sequent)? {
        SearchResult::Proof(proof) => proof,
        SearchResult::Countermodel(m) => return Ok(NormalForm::Unprovable(m)),
    };
    let mut pairs = interpolate(&proof, &target, theory)?;
    let frame = prover.frame();
    let entails = |left: &[Formula], right: &[Formula]| frame.entails(left, right);

    // Drop interpolants that the remaining ones make redundant.
    let mut i = 0;
    while i < pairs.len() {
        let rest: Vec<Formula> = pairs
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, (a, _))| a.clone())
            .collect();
        if entails(gamma, &rest)? {
            pairs.remove(i);
        } else {
            i += 1;
        }
    }
    let a = Formula::disj(pairs.iter().map(|(a, _)| a.clone()));
    let b = Formula::disj(pairs.iter().map(|(_, b)| b.clone()));

    let mut kept = gamma.to_vec();
    let mut i = 0;
    while i < kept.len() {
        let mut fewer = kept.clone();
        fewer.remove(i);
        if entails(&fewer, std::slice::from_ref(&a))? {
            kept = fewer;
        } else {
            i += 1;
        }
    }
    Ok(NormalForm::Found { gamma: kept, a, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequent::prove_cut_free;

    fn f(text: &str) -> Formula {
        Formula::parse(text).unwrap()
    }

    fn theta1() -> CausalTheory {
        CausalTheory::from_strs(["p", "q"], ["p |> p", "p |> q"]).unwrap()
    }

    #[test]
    fn interpolant_of_box_right() {
        let t = theta1();
        let proof = prove_cut_free(&Sequent::parse("p |- []q").unwrap(), &t).unwrap();
        let pairs = interpolate(proof.proof().unwrap(), &f("[]q"), &t).unwrap();
        assert_eq!(pairs, vec![(f("p"), f("q"))]);
    }

    #[test]
    fn interpolant_of_box_top() {
        let t = theta1();
        let proof = prove_cut_free(&Sequent::parse("|- []true").unwrap(), &t).unwrap();
        let pairs = interpolate(proof.proof().unwrap(), &f("[]true"), &t).unwrap();
        assert_eq!(pairs, vec![(Formula::Top, Formula::Top)]);
    }

    #[test]
    fn interpolant_of_hand_built_proof() {
        let t = theta1();
        let target = f("[](q | p)");
        let side = ProofTree::new(
            Sequent::parse("p |- q | p").unwrap(),
            Inference::OrR(f("q | p")),
            vec![ProofTree::axiom(f("p")).weaken(&[], &[f("q")])],
        );
        let proof = ProofTree::new(
            Sequent::parse("p |- [](q | p)").unwrap(),
            Inference::BoxR {
                principal: target.clone(),
                set: ExplanationSet { rules: vec![0] },
            },
            vec![ProofTree::axiom(f("p")), side],
        );
        assert_eq!(crate::sequent::check_proof(&proof, &t), Ok(()));
        assert_eq!(interpolate(&proof, &target, &t).unwrap(), vec![(f("p"), f("p"))]);
    }

    #[test]
    fn normal_forms() {
        let t = theta1();
        assert_eq!(
            normal_form(&[f("p")], &f("q"), &t).unwrap(),
            NormalForm::Found {
                gamma: vec![f("p")],
                a: f("p"),
                b: f("q")
            }
        );
        assert!(matches!(
            normal_form(&[f("q")], &f("q"), &t).unwrap(),
            NormalForm::Unprovable(_)
        ));
    }
}
