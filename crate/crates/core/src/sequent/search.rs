//! Cut-free backward proof search.
//!
//! Every propositional rule and box-left are invertible, so they are applied
//! eagerly. Right boxes are handled once nothing else is left to decompose:
//! the box is duplicated by contraction and discharged by one box-right per
//! inclusion-minimal explanation set, which leaves the disjunction of those
//! sets' bodies (the box's full meaning) on the right. Each step removes a
//! connective or trades a box for nonmodal bodies, so the search terminates
//! without a loop check. A failed leaf consists of atoms only and directly
//! yields a countermodel of the root sequent.

use std::collections::HashMap;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::kripke::{ExplanationSet, Frame};
use crate::model::Model;
use crate::theory::CausalTheory;

use super::{multiset_minus, Inference, ProofTree, Sequent};

/// Default bound on the number of search steps.
pub const DEFAULT_NODE_BUDGET: usize = 4_000_000;

/// Outcome of a search: a cut-free proof, or a world of the canonical model
/// satisfying the whole left side and nothing on the right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchResult {
    Proof(ProofTree),
    Countermodel(Model),
}

impl SearchResult {
    pub fn proof(&self) -> Option<&ProofTree> {
        match self {
            SearchResult::Proof(p) => Some(p),
            SearchResult::Countermodel(_) => None,
        }
    }

    pub fn countermodel(&self) -> Option<Model> {
        match self {
            SearchResult::Countermodel(m) => Some(*m),
            SearchResult::Proof(_) => None,
        }
    }

    pub fn is_proof(&self) -> bool {
        matches!(self, SearchResult::Proof(_))
    }
}

struct Sets {
    all: Vec<ExplanationSet>,
    minimal: Vec<ExplanationSet>,
}

/// A reusable prover for one theory; caches explanation sets between queries.
pub struct Prover {
    frame: Rc<Frame>,
    sets: HashMap<Formula, Rc<Sets>>,
    budget: usize,
    used: usize,
}

/// Searches for a cut-free proof of `s`.
pub fn prove_cut_free(s: &Sequent, theory: &CausalTheory) -> Result<SearchResult> {
    Prover::new(theory)?.prove(s)
}

impl Prover {
    pub fn new(theory: &CausalTheory) -> Result<Prover> {
        Ok(Prover::from_frame(Rc::new(Frame::new(theory)?)))
    }

    pub fn from_frame(frame: Rc<Frame>) -> Prover {
        Prover {
            frame,
            sets: HashMap::new(),
            budget: DEFAULT_NODE_BUDGET,
            used: 0,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Prover {
        self.budget = budget;
        self
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn prove(&mut self, s: &Sequent) -> Result<SearchResult> {
        s.check_atoms(self.frame.universe())?;
        self.used = 0;
        self.search(s.clone())
    }

    fn sets(&mut self, target: &Formula) -> Result<Rc<Sets>> {
        if let Some(sets) = self.sets.get(target) {
            return Ok(Rc::clone(sets));
        }
        let all = self.frame.explanation_sets(target)?;
        let masks: Vec<u64> = all.iter().map(ExplanationSet::mask).collect();
        let minimal = all
            .iter()
            .zip(&masks)
            .filter(|(_, &m)| !masks.iter().any(|&o| o != m && o & m == o))
            .map(|(s, _)| s.clone())
            .collect();
        let sets = Rc::new(Sets { all, minimal });
        self.sets.insert(target.clone(), Rc::clone(&sets));
        Ok(sets)
    }

    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.budget {
            Err(Error::SearchExhausted { nodes: self.budget })
        } else {
            Ok(())
        }
    }

    fn search(&mut self, s: Sequent) -> Result<SearchResult> {
        self.tick()?;

        if let Some(f) = duplicate(s.left()) {
            let premise = s.without_left(&f).expect("duplicate present");
            return self.unary(s, Inference::LeftWeaken(f), premise);
        }
        if let Some(f) = duplicate(s.right()) {
            let premise = s.without_right(&f).expect("duplicate present");
            return self.unary(s, Inference::RightWeaken(f), premise);
        }

        if s.left().contains(&Formula::Bottom) {
            return Ok(close(&s, Sequent::new(vec![Formula::Bottom], vec![]), Inference::BotL));
        }
        if s.right().contains(&Formula::Top) {
            return Ok(close(&s, Sequent::new(vec![], vec![Formula::Top]), Inference::TopR));
        }
        if let Some(f) = s.left().iter().find(|f| s.right().contains(f)) {
            let core = Sequent::new(vec![f.clone()], vec![f.clone()]);
            return Ok(close(&s, core, Inference::Ax(f.clone())));
        }
        if s.left().contains(&Formula::Top) {
            let premise = s.without_left(&Formula::Top).expect("present");
            return self.unary(s, Inference::LeftWeaken(Formula::Top), premise);
        }
        if s.right().contains(&Formula::Bottom) {
            let premise = s.without_right(&Formula::Bottom).expect("present");
            return self.unary(s, Inference::RightWeaken(Formula::Bottom), premise);
        }

        // Single-premise rules.
        for f in s.left() {
            match f {
                Formula::Not(a) => {
                    let premise = s.without_left(f).expect("present").with_right((**a).clone());
                    return self.unary(s.clone(), Inference::NotL(f.clone()), premise);
                }
                Formula::And(a, b) => {
                    let premise = s
                        .without_left(f)
                        .expect("present")
                        .with_left((**a).clone())
                        .with_left((**b).clone());
                    return self.unary(s.clone(), Inference::AndL(f.clone()), premise);
                }
                _ => {}
            }
        }
        for f in s.right() {
            match f {
                Formula::Not(a) => {
                    let premise = s.without_right(f).expect("present").with_left((**a).clone());
                    return self.unary(s.clone(), Inference::NotR(f.clone()), premise);
                }
                Formula::Or(a, b) => {
                    let premise = s
                        .without_right(f)
                        .expect("present")
                        .with_right((**a).clone())
                        .with_right((**b).clone());
                    return self.unary(s.clone(), Inference::OrR(f.clone()), premise);
                }
                Formula::Implies(a, b) => {
                    let premise = s
                        .without_right(f)
                        .expect("present")
                        .with_left((**a).clone())
                        .with_right((**b).clone());
                    return self.unary(s.clone(), Inference::ImpR(f.clone()), premise);
                }
                _ => {}
            }
        }

        // Branching rules.
        for f in s.left() {
            match f {
                Formula::Or(a, b) => {
                    let rest = s.without_left(f).expect("present");
                    let premises = vec![rest.with_left((**a).clone()), rest.with_left((**b).clone())];
                    return self.nary(s.clone(), Inference::OrL(f.clone()), premises);
                }
                Formula::Implies(a, b) => {
                    let rest = s.without_left(f).expect("present");
                    let premises = vec![rest.with_right((**a).clone()), rest.with_left((**b).clone())];
                    return self.nary(s.clone(), Inference::ImpL(f.clone()), premises);
                }
                _ => {}
            }
        }
        for f in s.right() {
            if let Formula::And(a, b) = f {
                let rest = s.without_right(f).expect("present");
                let premises = vec![rest.with_right((**a).clone()), rest.with_right((**b).clone())];
                return self.nary(s.clone(), Inference::AndR(f.clone()), premises);
            }
        }

        if let Some(f) = s.left().iter().find(|f| matches!(f, Formula::Box(_))).cloned() {
            return self.box_left(s, f);
        }
        if let Some(f) = s.right().iter().find(|f| matches!(f, Formula::Box(_))).cloned() {
            return self.box_right(s, f);
        }

        // Only atoms remain and no atom occurs on both sides.
        let universe = self.frame.universe();
        let mut world = Model::from_world(0, universe.len());
        for f in s.left() {
            if let Formula::Atom(name) = f {
                world = world.with(universe.index_of(name).expect("atoms checked"), true);
            }
        }
        Ok(SearchResult::Countermodel(world))
    }

    fn unary(&mut self, conclusion: Sequent, inference: Inference, premise: Sequent) -> Result<SearchResult> {
        Ok(match self.search(premise)? {
            SearchResult::Proof(p) => SearchResult::Proof(ProofTree::new(conclusion, inference, vec![p])),
            refuted => refuted,
        })
    }

    fn nary(&mut self, conclusion: Sequent, inference: Inference, premises: Vec<Sequent>) -> Result<SearchResult> {
        let mut proofs = Vec::with_capacity(premises.len());
        for premise in premises {
            match self.search(premise)? {
                SearchResult::Proof(p) => proofs.push(p),
                refuted => return Ok(refuted),
            }
        }
        Ok(SearchResult::Proof(ProofTree::new(conclusion, inference, proofs)))
    }

    /// Box-left with one premise per explanation set. Premises for sets that
    /// are not minimal are obtained from a minimal subset's proof by weakening.
    fn box_left(&mut self, s: Sequent, principal: Formula) -> Result<SearchResult> {
        let Formula::Box(target) = &principal else { unreachable!() };
        let sets = self.sets(target)?;
        let theory = self.frame.theory().clone();
        let rest = s.without_left(&principal).expect("present");
        let premise_for = |set: &ExplanationSet| {
            let mut left = rest.left().to_vec();
            left.extend(set.bodies(&theory));
            Sequent::new(left, rest.right().to_vec())
        };
        let mut minimal_proofs: Vec<(u64, ProofTree)> = Vec::new();
        for set in &sets.minimal {
            match self.search(premise_for(set))? {
                SearchResult::Proof(p) => minimal_proofs.push((set.mask(), p)),
                refuted => return Ok(refuted),
            }
        }
        let mut premises = Vec::with_capacity(sets.all.len());
        for set in &sets.all {
            let mask = set.mask();
            let (base_mask, base) = minimal_proofs
                .iter()
                .find(|(m, _)| m & mask == *m)
                .expect("every explanation set contains a minimal one");
            let base_set = ExplanationSet {
                rules: (0..64).filter(|i| base_mask >> i & 1 == 1).collect(),
            };
            let extra = multiset_minus(&set.bodies(&theory), &base_set.bodies(&theory))
                .expect("subset bodies");
            premises.push(base.clone().weaken(&extra, &[]));
        }
        Ok(SearchResult::Proof(ProofTree::new(
            s,
            Inference::BoxL {
                principal,
                sets: sets.all.clone(),
            },
            premises,
        )))
    }

    /// Replaces a right box by the bodies of its minimal explanation sets.
    fn box_right(&mut self, s: Sequent, principal: Formula) -> Result<SearchResult> {
        let Formula::Box(target) = &principal else { unreachable!() };
        let sets = self.sets(target)?;
        let rest = s.without_right(&principal).expect("present");
        if sets.minimal.is_empty() {
            return self.unary(s, Inference::RightWeaken(principal), rest);
        }
        let theory = self.frame.theory().clone();
        let bodies: Vec<Formula> = sets.minimal.iter().map(|set| set.body_conjunction(&theory)).collect();

        let mut sides = Vec::with_capacity(sets.minimal.len());
        for set in &sets.minimal {
            let side = Sequent::new(set.heads(&theory), vec![(**target).clone()]);
            match self.search(side)? {
                SearchResult::Proof(p) => sides.push(p),
                SearchResult::Countermodel(_) => {
                    return Err(Error::Internal(format!(
                        "heads of explanation set {set} do not prove `{target}`"
                    )))
                }
            }
        }

        let k = sets.minimal.len();
        let mut top = rest.clone();
        for body in &bodies {
            top = top.with_right(body.clone());
        }
        let mut proof = match self.search(top)? {
            SearchResult::Proof(p) => p,
            refuted => return Ok(refuted),
        };
        // Discharge the bodies one by one, newest first, each turning into a copy of the box.
        for (idx, side) in sides.into_iter().enumerate().rev() {
            let conclusion = proof
                .conclusion
                .without_right(&bodies[idx])
                .expect("body present")
                .with_right(principal.clone());
            proof = ProofTree::new(
                conclusion,
                Inference::BoxR {
                    principal: principal.clone(),
                    set: sets.minimal[idx].clone(),
                },
                vec![proof, side],
            );
        }
        for _ in 1..k {
            let conclusion = proof.conclusion.without_right(&principal).expect("copy present");
            proof = ProofTree::new(conclusion, Inference::RightContract(principal.clone()), vec![proof]);
        }
        debug_assert_eq!(proof.conclusion, s);
        Ok(SearchResult::Proof(proof))
    }
}

fn duplicate(side: &[Formula]) -> Option<Formula> {
    side.windows(2).find(|w| w[0] == w[1]).map(|w| w[0].clone())
}

/// Proves `s` from the closed leaf `core` by weakening in the rest.
fn close(s: &Sequent, core: Sequent, rule: Inference) -> SearchResult {
    let extra_left = multiset_minus(s.left(), core.left()).expect("core is contained");
    let extra_right = multiset_minus(s.right(), core.right()).expect("core is contained");
    SearchResult::Proof(ProofTree::leaf(core, rule).weaken(&extra_left, &extra_right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequent::check_proof;

    fn theta1() -> CausalTheory {
        CausalTheory::from_strs(["p", "q"], ["p |> p", "p |> q"]).unwrap()
    }

    fn prove(text: &str, t: &CausalTheory) -> SearchResult {
        prove_cut_free(&Sequent::parse(text).unwrap(), t).unwrap()
    }

    #[test]
    fn proves_box_from_body() {
        let t = theta1();
        let result = prove("p |- []q", &t);
        let proof = result.proof().expect("provable");
        assert!(proof.is_cut_free());
        assert_eq!(check_proof(proof, &t), Ok(()));
        assert_eq!(proof.inference.tag(), "BoxR");
    }

    #[test]
    fn proves_box_top_with_empty_set() {
        let t = theta1();
        let result = prove("|- []true", &t);
        let proof = result.proof().expect("provable");
        assert_eq!(
            proof.inference,
            Inference::BoxR {
                principal: Formula::parse("[]true").unwrap(),
                set: ExplanationSet { rules: vec![] }
            }
        );
        assert_eq!(check_proof(proof, &t), Ok(()));
    }

    #[test]
    fn refutes_with_countermodel() {
        let t = theta1();
        let m = prove("q |- []q", &t).countermodel().expect("not provable");
        assert_eq!(m.display(t.universe()).to_string(), "p=0,q=1");
    }

    #[test]
    fn left_boxes_use_every_explanation_set() {
        let t = theta1();
        let result = prove("[]q |- p", &t);
        let proof = result.proof().expect("provable");
        assert_eq!(check_proof(proof, &t), Ok(()));
        let result = prove("[]![]q, []!p |- ", &t);
        assert_eq!(check_proof(result.proof().unwrap(), &t), Ok(()));
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let t = theta1();
        let mut prover = Prover::new(&t).unwrap().with_budget(3);
        let err = prover.prove(&Sequent::parse("(p | q) & (q | !p), p -> q |- []q & []p, []!q").unwrap()).unwrap_err();
        assert!(matches!(err, Error::SearchExhausted { .. }));
    }
}
