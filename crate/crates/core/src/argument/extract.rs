//! Argumentation proofs from sequent-calculus proofs of box entailments.
//!
//! A cut-free proof of `Γ ⊢ □p` yields explanation sets `S_1, ..., S_n`
//! with `Γ ⊨ ∨_i ∧bodies(S_i)` and `∧heads(S_i) ⊨ p`. Each set becomes a
//! proof of `(p, U_i)`, where `U_i` collects the grounds of the arguments
//! behind `S_i`: axioms joined by `∧I`, then `→E` with a proof of the
//! tautology `∧heads(S_i) → p`. Classical or-elimination glues the cases.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::formula::{require_nonmodal, Formula};
use crate::model::Universe;
use crate::semantics::classical_entails;
use crate::sequent::{interpolant_sets, Prover, SearchResult};

use super::translate::{rule_of, theory_over, translated_sequent};
use super::{with, Argument, PjProof};

/// A checker-valid proof of `basics ⊢ (p, gamma)`, provided `gamma ⊢ □p`
/// holds for the translated theory.
///
/// Fails when the entailment does not hold, and when `gamma` is classically
/// inconsistent: the entailment is then trivially valid but grounds can only
/// be assembled from basic arguments.
pub fn extract_pj_proof(gamma: &BTreeSet<Formula>, p: &Formula, basics: &BTreeSet<Argument>) -> Result<PjProof> {
    let goal = Argument::new(p.clone(), gamma.iter().cloned())?;
    basics.iter().try_for_each(Argument::check_nonmodal)?;
    let mut atoms = BTreeSet::new();
    for arg in basics.iter().chain(std::iter::once(&goal)) {
        arg.head.collect_atoms(&mut atoms);
        arg.grounds.iter().for_each(|g| g.collect_atoms(&mut atoms));
    }
    let universe = Universe::new(atoms)?;
    let gamma_list: Vec<Formula> = gamma.iter().cloned().collect();

    if *p == Formula::Top {
        let top = PjProof::top_i(basics);
        if gamma.is_empty() {
            return Ok(top);
        }
        return Ok(glue(gamma.clone(), vec![(BTreeSet::new(), top)]));
    }
    if classical_entails(&universe, &gamma_list, &[])? {
        return Err(Error::Precondition(
            "the grounds are classically inconsistent; no argument can be assembled".into(),
        ));
    }

    let theory = theory_over(&universe, basics)?;
    let mut prover = Prover::new(&theory)?;
    let target = Formula::boxed(p.clone());
    let proof = match prover.prove(&translated_sequent(&goal))? {
        SearchResult::Proof(proof) => proof,
        SearchResult::Countermodel(m) => {
            return Err(Error::Precondition(format!(
                "the translated sequent fails at {}",
                m.display(&universe)
            )))
        }
    };
    let mut sets = interpolant_sets(&proof, &target, &theory)?;
    let frame = prover.frame();
    let mut i = 0;
    while i < sets.len() {
        let rest: Vec<Formula> = sets
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, s)| s.body_conjunction(&theory))
            .collect();
        if frame.entails(&gamma_list, &rest)? {
            sets.remove(i);
        } else {
            i += 1;
        }
    }

    // Rules may coincide for distinct arguments; any argument with the rule will do.
    let argument_for = |rule: usize| -> &Argument {
        let r = &theory.rules()[rule];
        basics
            .iter()
            .find(|a| rule_of(a) == *r)
            .expect("every rule comes from a basic argument")
    };
    let mut cases = Vec::new();
    for set in &sets {
        let mut joined: Option<PjProof> = None;
        for &r in &set.rules {
            let ax = PjProof::axiom(basics, argument_for(r).clone());
            joined = Some(match joined {
                None => ax,
                Some(acc) => PjProof::and_i(acc, ax),
            });
        }
        let joined = joined.unwrap_or_else(|| PjProof::top_i(basics));
        let head = joined.goal().head.clone();
        let case = if head == *p {
            joined
        } else {
            let taut = tautology_proof(basics, &Formula::implies(head, p.clone()))?;
            PjProof::imp_e(joined, taut)
        };
        cases.push((case.goal().grounds.clone(), case));
    }
    Ok(glue(gamma.clone(), cases))
}

/// Chains `OrEC` nodes: the first case against the disjunction of the rest.
fn glue(side: BTreeSet<Formula>, mut cases: Vec<(BTreeSet<Formula>, PjProof)>) -> PjProof {
    let (first_grounds, first) = cases.remove(0);
    if cases.is_empty() {
        return PjProof::or_ec(side, first_grounds.clone(), first_grounds, first.clone(), first);
    }
    let rest = Formula::disj(cases.iter().map(|(g, _)| Formula::conj(g.iter().cloned())));
    let rest_set: BTreeSet<Formula> = [rest].into_iter().collect();
    let rest_proof = glue(rest_set.clone(), cases);
    PjProof::or_ec(side, first_grounds, rest_set, first, rest_proof)
}

/// A proof of `(f, ∅)` for a classical tautology `f`, by case analysis on
/// its atoms and a truth-table derivation in each case.
pub fn tautology_proof(basics: &BTreeSet<Argument>, f: &Formula) -> Result<PjProof> {
    require_nonmodal(f)?;
    let atoms: Vec<String> = f.atoms().into_iter().map(str::to_string).collect();
    let universe = Universe::new(atoms.iter().map(String::as_str))?;
    if !classical_entails(&universe, &[], std::slice::from_ref(f))? {
        return Err(Error::Precondition(format!("`{f}` is not a tautology")));
    }
    Ok(split(basics, f, &atoms, &mut Vec::new()))
}

fn split(basics: &BTreeSet<Argument>, f: &Formula, atoms: &[String], values: &mut Vec<(String, bool)>) -> PjProof {
    let Some((x, rest)) = atoms.split_first() else {
        let value = |a: &str| values.iter().find(|(n, _)| n == a).expect("assigned").1;
        let (holds, proof) = kalmar(basics, f, &value);
        debug_assert!(holds);
        return proof;
    };
    let atom = Formula::atom(x.clone());
    let lem = excluded_middle(basics, &atom);
    let mut case = |v: bool| {
        let hyp = Argument::bare(if v { atom.clone() } else { Formula::not(atom.clone()) });
        values.push((x.clone(), v));
        let p = split(&with(basics, hyp), f, rest, values);
        values.pop();
        p
    };
    let yes = case(true);
    let no = case(false);
    PjProof::or_e(lem, yes, no)
}

/// `(x ∨ ¬x, ∅)` by reductio.
fn excluded_middle(basics: &BTreeSet<Argument>, x: &Formula) -> PjProof {
    let lem = Formula::or(x.clone(), Formula::not(x.clone()));
    let denial = Argument::bare(Formula::not(lem.clone()));
    let outer = with(basics, denial.clone());
    let inner = with(&outer, Argument::bare(x.clone()));
    let contradiction = PjProof::not_e(
        PjProof::or_i(PjProof::axiom(&inner, Argument::bare(x.clone())), Formula::not(x.clone()), false),
        PjProof::axiom(&inner, denial.clone()),
    );
    let not_x = PjProof::not_i(&outer, x.clone(), contradiction);
    let bottom = PjProof::not_e(PjProof::or_i(not_x, x.clone(), true), PjProof::axiom(&outer, denial));
    PjProof::raa(basics, lem, bottom)
}

/// Given hypotheses `(l, ∅)` for a literal of every atom of `f`, proves
/// `(f, ∅)` when `f` is true under them and `(¬f, ∅)` otherwise.
fn kalmar(basics: &BTreeSet<Argument>, f: &Formula, value: &dyn Fn(&str) -> bool) -> (bool, PjProof) {
    let hyp = |b: &BTreeSet<Argument>, g: &Formula| PjProof::axiom(b, Argument::bare(g.clone()));
    // Refutes `g` from a proof of the negation of one of its parts.
    let refute = |g: &Formula, body: &dyn Fn(&BTreeSet<Argument>) -> PjProof| {
        let ext = with(basics, Argument::bare(g.clone()));
        PjProof::not_i(basics, g.clone(), body(&ext))
    };
    match f {
        Formula::Top => (true, PjProof::top_i(basics)),
        Formula::Bottom => (false, refute(f, &|b| hyp(b, &Formula::Bottom))),
        Formula::Atom(name) => {
            if value(name) {
                (true, hyp(basics, f))
            } else {
                (false, hyp(basics, &Formula::not(f.clone())))
            }
        }
        Formula::Not(g) => {
            let (holds, pg) = kalmar(basics, g, value);
            if !holds {
                (true, pg)
            } else {
                let proof = refute(f, &|b| PjProof::not_e(pg.with_basic(&Argument::bare(f.clone())), hyp(b, f)));
                (false, proof)
            }
        }
        Formula::And(g, h) => {
            let (vg, pg) = kalmar(basics, g, value);
            let (vh, ph) = kalmar(basics, h, value);
            let added = Argument::bare(f.clone());
            match (vg, vh) {
                (true, true) => (true, PjProof::and_i(pg, ph)),
                (false, _) => (false, refute(f, &|b| PjProof::not_e(PjProof::and_e(hyp(b, f), false), pg.with_basic(&added)))),
                (_, false) => (false, refute(f, &|b| PjProof::not_e(PjProof::and_e(hyp(b, f), true), ph.with_basic(&added)))),
            }
        }
        Formula::Or(g, h) => {
            let (vg, pg) = kalmar(basics, g, value);
            let (vh, ph) = kalmar(basics, h, value);
            if vg {
                return (true, PjProof::or_i(pg, (**h).clone(), false));
            }
            if vh {
                return (true, PjProof::or_i(ph, (**g).clone(), true));
            }
            let added = Argument::bare(f.clone());
            let proof = refute(f, &|b| {
                let case = |part: &Formula, neg: &PjProof| {
                    let a = Argument::bare(part.clone());
                    let bb = with(b, a.clone());
                    PjProof::not_e(hyp(&bb, part), neg.with_basic(&added).with_basic(&a))
                };
                PjProof::or_e(hyp(b, f), case(g, &pg), case(h, &ph))
            });
            (false, proof)
        }
        Formula::Implies(g, h) => {
            let (vg, pg) = kalmar(basics, g, value);
            let (vh, ph) = kalmar(basics, h, value);
            let antecedent = Argument::bare((**g).clone());
            let ext = with(basics, antecedent.clone());
            if vh {
                return (true, PjProof::imp_i(basics, (**g).clone(), ph.with_basic(&antecedent)));
            }
            if !vg {
                let bottom = PjProof::not_e(hyp(&ext, g), pg.with_basic(&antecedent));
                return (true, PjProof::imp_i(basics, (**g).clone(), PjProof::efq(bottom, (**h).clone())));
            }
            let added = Argument::bare(f.clone());
            let proof = refute(f, &|b| {
                let q = PjProof::imp_e(pg.with_basic(&added), hyp(b, f));
                PjProof::not_e(q, ph.with_basic(&added))
            });
            (false, proof)
        }
        Formula::Box(_) => unreachable!("nonmodal formulas only"),
    }
}
