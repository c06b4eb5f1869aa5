//! Cut elimination.
//!
//! Cuts are removed bottom-up from the leaves: once both premises of a cut
//! are cut-free, [`reduce`] pushes the cut upwards. A cut is first moved
//! past structural rules and axioms acting on the cut formula, then past any
//! rule in which the cut formula is only context, and finally, when the cut
//! formula is principal on both sides, replaced by cuts on its immediate
//! components (for a box, on the body conjunction of the matching
//! explanation set). Recursion is on the cut formula's (modal depth, size)
//! and then on the premises' heights.

use crate::error::Result;
use crate::formula::Formula;
use crate::theory::CausalTheory;

use super::{check_proof, multiset_minus, Inference, ProofTree, Sequent};

/// Returns a cut-free proof of the same conclusion.
pub fn eliminate_cuts(t: &ProofTree, theory: &CausalTheory) -> Result<ProofTree> {
    check_proof(t, theory)?;
    Ok(eliminate(t, theory))
}

fn eliminate(t: &ProofTree, theory: &CausalTheory) -> ProofTree {
    if t.is_cut_free() {
        return t.clone();
    }
    let premises: Vec<ProofTree> = t.premises.iter().map(|p| eliminate(p, theory)).collect();
    match &t.inference {
        Inference::Multicut {
            formula,
            left,
            right,
        } => {
            let mut it = premises.into_iter();
            let p1 = it.next().expect("two premises");
            let p2 = it.next().expect("two premises");
            let out = reduce(theory, p1, p2, formula, *left, *right);
            debug_assert_eq!(out.conclusion, t.conclusion);
            out
        }
        other => ProofTree::new(t.conclusion.clone(), other.clone(), premises),
    }
}

/// The conclusion of cutting `m` copies of `x` on the right of `s1` against
/// `n` copies on the left of `s2`.
fn cut_conclusion(s1: &Sequent, s2: &Sequent, x: &Formula, m: usize, n: usize) -> Sequent {
    let left2 = multiset_minus(s2.left(), &vec![x.clone(); n]).expect("cut formula on the left");
    let right1 = multiset_minus(s1.right(), &vec![x.clone(); m]).expect("cut formula on the right");
    let mut left = s1.left().to_vec();
    left.extend(left2);
    let mut right = right1;
    right.extend(s2.right().iter().cloned());
    Sequent::new(left, right)
}

fn single(p: ProofTree) -> ProofTree {
    let mut premises = p.premises;
    debug_assert_eq!(premises.len(), 1);
    premises.pop().expect("one premise")
}

/// Cut-free proof of the cut of `m` copies of `x` from `p1`'s right side
/// against `n` copies from `p2`'s left side; both inputs are cut-free.
fn reduce(theory: &CausalTheory, p1: ProofTree, p2: ProofTree, x: &Formula, m: usize, n: usize) -> ProofTree {
    let target = cut_conclusion(&p1.conclusion, &p2.conclusion, x, m, n);
    if m == 0 {
        let extra_left = multiset_minus(p2.conclusion.left(), &vec![x.clone(); n]).expect("present");
        let extra_right = p2.conclusion.right().to_vec();
        return p1.weaken(&extra_left, &extra_right);
    }
    if n == 0 {
        let extra_left = p1.conclusion.left().to_vec();
        let extra_right = multiset_minus(p1.conclusion.right(), &vec![x.clone(); m]).expect("present");
        return p2.weaken(&extra_left, &extra_right);
    }

    // Structural rules and axioms acting on the cut formula.
    if p1.inference.principal_right() == Some(x) {
        match &p1.inference {
            Inference::Ax(_) => return p2.contract_to(&target),
            Inference::RightWeaken(_) => return reduce(theory, single(p1), p2, x, m - 1, n),
            Inference::RightContract(_) => return reduce(theory, single(p1), p2, x, m + 1, n),
            _ => {}
        }
    }
    if p2.inference.principal_left() == Some(x) {
        match &p2.inference {
            Inference::Ax(_) => return p1.contract_to(&target),
            Inference::LeftWeaken(_) => return reduce(theory, p1, single(p2), x, m, n - 1),
            Inference::LeftContract(_) => return reduce(theory, p1, single(p2), x, m, n + 1),
            _ => {}
        }
    }

    let p1_principal = p1.inference.principal_right() == Some(x)
        && (p1.inference.is_logical() || p1.inference == Inference::TopR);
    let p2_principal = p2.inference.principal_left() == Some(x)
        && (p2.inference.is_logical() || p2.inference == Inference::BotL);

    if !p1_principal {
        let side = p1.inference.side_premise();
        let premises = p1
            .premises
            .into_iter()
            .enumerate()
            .map(|(i, q)| {
                if Some(i) == side {
                    q
                } else {
                    reduce(theory, q, p2.clone(), x, m, n)
                }
            })
            .collect();
        return ProofTree::new(target, p1.inference, premises);
    }
    if !p2_principal {
        let side = p2.inference.side_premise();
        let premises = p2
            .premises
            .into_iter()
            .enumerate()
            .map(|(i, q)| {
                if Some(i) == side {
                    q
                } else {
                    reduce(theory, p1.clone(), q, x, m, n)
                }
            })
            .collect();
        return ProofTree::new(target, p2.inference, premises);
    }

    key_case(theory, p1, p2, x, m, n).contract_to(&target)
}

/// Both proofs introduce `x` by its connective's rules.
fn key_case(theory: &CausalTheory, p1: ProofTree, p2: ProofTree, x: &Formula, m: usize, n: usize) -> ProofTree {
    // Cut the remaining copies against each premise first.
    let lefts: Vec<ProofTree> = p1
        .premises
        .iter()
        .enumerate()
        .map(|(i, q)| {
            if Some(i) == p1.inference.side_premise() {
                q.clone()
            } else {
                reduce(theory, q.clone(), p2.clone(), x, m - 1, n)
            }
        })
        .collect();
    let right_at = |i: usize| reduce(theory, p1.clone(), p2.premises[i].clone(), x, m, n - 1);
    let cut1 = |a: ProofTree, b: ProofTree, f: &Formula| reduce(theory, a, b, f, 1, 1);

    match x {
        Formula::Not(a) => {
            // lefts[0]: Γ,Γ',a ⊢ Δ,Δ'   rights[0]: Γ,Γ' ⊢ a,Δ,Δ'
            let [l0]: [ProofTree; 1] = lefts.try_into().expect("one premise");
            let r0 = right_at(0);
            cut1(r0, l0, a)
        }
        Formula::And(a, b) => {
            // lefts: ⊢ a ; ⊢ b     rights[0]: a, b ⊢
            let [la, lb]: [ProofTree; 2] = lefts.try_into().expect("two premises");
            let r0 = right_at(0);
            let c = cut1(la, r0, a);
            cut1(lb, c, b)
        }
        Formula::Or(a, b) => {
            // lefts[0]: ⊢ a, b     rights: a ⊢ ; b ⊢
            let [l0]: [ProofTree; 1] = lefts.try_into().expect("one premise");
            let (ra, rb) = (right_at(0), right_at(1));
            let c = cut1(l0, ra, a);
            cut1(c, rb, b)
        }
        Formula::Implies(a, b) => {
            // lefts[0]: a ⊢ b      rights: ⊢ a ; b ⊢
            let [l0]: [ProofTree; 1] = lefts.try_into().expect("one premise");
            let (ra, rb) = (right_at(0), right_at(1));
            let c = cut1(ra, l0, a);
            cut1(c, rb, b)
        }
        Formula::Box(_) => {
            let Inference::BoxR { set, .. } = &p1.inference else {
                unreachable!("box formulas are introduced on the right by box-right")
            };
            let Inference::BoxL { sets, .. } = &p2.inference else {
                unreachable!("box formulas are introduced on the left by box-left")
            };
            let i0 = sets
                .iter()
                .position(|s| s == set)
                .expect("a box-right set is an explanation set of its target");
            let main = lefts.into_iter().next().expect("main premise");
            let matched = right_at(i0);
            let body_formulas = set.bodies(theory);
            let folded = fold_conjunction(matched, &body_formulas);
            cut1(main, folded, &Formula::conj(body_formulas))
        }
        _ => unreachable!("no key case for {x}"),
    }
}

/// From `Γ, b1, ..., bk ⊢ Δ` derives `Γ, b1 ∧ ... ∧ bk ⊢ Δ` (left-nested),
/// or `Γ, ⊤ ⊢ Δ` by weakening when `k = 0`.
fn fold_conjunction(proof: ProofTree, bodies: &[Formula]) -> ProofTree {
    if bodies.is_empty() {
        return proof.weaken(&[Formula::Top], &[]);
    }
    let mut proof = proof;
    let mut acc = bodies[0].clone();
    for b in &bodies[1..] {
        let conj = Formula::and(acc.clone(), b.clone());
        let conclusion = proof
            .conclusion
            .without_left(&acc)
            .and_then(|s| s.without_left(b))
            .expect("factors present")
            .with_left(conj.clone());
        proof = ProofTree::new(conclusion, Inference::AndL(conj.clone()), vec![proof]);
        acc = conj;
    }
    proof
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::ExplanationSet;

    fn theta1() -> CausalTheory {
        CausalTheory::from_strs(["p", "q"], ["p |> p", "p |> q"]).unwrap()
    }

    fn f(text: &str) -> Formula {
        Formula::parse(text).unwrap()
    }

    fn s(text: &str) -> Sequent {
        Sequent::parse(text).unwrap()
    }

    #[test]
    fn cut_free_input_is_unchanged() {
        let t = theta1();
        let ax = ProofTree::axiom(f("p"));
        assert_eq!(eliminate_cuts(&ax, &t).unwrap(), ax);
    }

    #[test]
    fn atomic_cut_between_axioms() {
        let t = theta1();
        let p = f("p");
        let cut = ProofTree::new(
            s("p |- p"),
            Inference::Multicut {
                formula: p.clone(),
                left: 1,
                right: 1,
            },
            vec![ProofTree::axiom(p.clone()), ProofTree::axiom(p)],
        );
        let out = eliminate_cuts(&cut, &t).unwrap();
        assert!(out.is_cut_free());
        assert_eq!(out.conclusion, cut.conclusion);
        assert_eq!(check_proof(&out, &t), Ok(()));
    }

    #[test]
    fn box_principal_cut_selects_matching_set() {
        let t = theta1();
        let bq = f("[]q");
        // p ⊢ □q by box-right with rule 1.
        let right = ProofTree::new(
            s("p |- []q"),
            Inference::BoxR {
                principal: bq.clone(),
                set: ExplanationSet { rules: vec![1] },
            },
            vec![ProofTree::axiom(f("p")), ProofTree::axiom(f("q"))],
        );
        // □q ⊢ p by box-left: sets {1} and {0,1}.
        let p = f("p");
        let left = ProofTree::new(
            s("[]q |- p"),
            Inference::BoxL {
                principal: bq.clone(),
                sets: vec![
                    ExplanationSet { rules: vec![1] },
                    ExplanationSet { rules: vec![0, 1] },
                ],
            },
            vec![
                ProofTree::axiom(p.clone()),
                ProofTree::axiom(p.clone()).weaken(&[p.clone()], &[]),
            ],
        );
        let cut = ProofTree::new(
            s("p |- p"),
            Inference::Multicut {
                formula: bq,
                left: 1,
                right: 1,
            },
            vec![right, left],
        );
        assert_eq!(check_proof(&cut, &t), Ok(()));
        let out = eliminate_cuts(&cut, &t).unwrap();
        assert!(out.is_cut_free());
        assert_eq!(out.conclusion, s("p |- p"));
        assert_eq!(check_proof(&out, &t), Ok(()));
    }

}
