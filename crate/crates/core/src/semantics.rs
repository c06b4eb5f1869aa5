//! Brute-force model-theoretic semantics of causal theories.

use crate::error::{Error, Result};
use crate::formula::{check_atoms, require_nonmodal, Formula};
use crate::model::{enumerate_models, Model, ModelSet, Universe};
use crate::theory::CausalTheory;

/// Outcome of a consequence query. `vacuous` is set when there is nothing to
/// quantify over (no explained models), in which case `holds` is true.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub vacuous: bool,
}

/// A deductively closed set of nonmodal formulas, represented by its models.
///
/// Two closed sets are equal exactly when they have the same models.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClosedSet {
    models: ModelSet,
}

impl ClosedSet {
    pub fn from_models(models: ModelSet) -> ClosedSet {
        ClosedSet { models }
    }

    /// The closure of the empty set: the tautologies.
    pub fn tautologies(width: usize) -> ClosedSet {
        ClosedSet {
            models: ModelSet::full(width),
        }
    }

    pub fn models(&self) -> &ModelSet {
        &self.models
    }

    pub fn into_models(self) -> ModelSet {
        self.models
    }

    pub fn is_consistent(&self) -> bool {
        !self.models.is_empty()
    }

    /// Whether the set contains (equivalently, entails) `f`.
    pub fn contains(&self, universe: &Universe, f: &Formula) -> Result<bool> {
        Ok(self.models.is_subset(&value_set(universe, f)?))
    }

    /// Set-theoretic intersection of closed sets; their model sets are united.
    pub fn intersection(&self, other: &ClosedSet) -> ClosedSet {
        ClosedSet {
            models: self.models.union(&other.models),
        }
    }
}

/// Classical truth of a nonmodal formula in a model.
pub fn holds(universe: &Universe, m: Model, f: &Formula) -> Result<bool> {
    require_nonmodal(f)?;
    check_atoms(f, universe)?;
    Ok(eval(universe, m, f))
}

pub(crate) fn eval(universe: &Universe, m: Model, f: &Formula) -> bool {
    match f {
        Formula::Top => true,
        Formula::Bottom => false,
        Formula::Atom(name) => m.value(universe.index_of(name).expect("atom checked")),
        Formula::Not(a) => !eval(universe, m, a),
        Formula::And(a, b) => eval(universe, m, a) && eval(universe, m, b),
        Formula::Or(a, b) => eval(universe, m, a) || eval(universe, m, b),
        Formula::Implies(a, b) => !eval(universe, m, a) || eval(universe, m, b),
        Formula::Box(_) => unreachable!("modal formulas are rejected before evaluation"),
    }
}

/// The set of models of a nonmodal formula.
pub fn value_set(universe: &Universe, f: &Formula) -> Result<ModelSet> {
    require_nonmodal(f)?;
    check_atoms(f, universe)?;
    universe.check_capacity()?;
    Ok(value_set_unchecked(universe, f))
}

pub(crate) fn value_set_unchecked(universe: &Universe, f: &Formula) -> ModelSet {
    let n = universe.len();
    match f {
        Formula::Top => ModelSet::full(n),
        Formula::Bottom => ModelSet::empty(n),
        Formula::Atom(name) => universe.atom_set(universe.index_of(name).expect("atom checked")),
        Formula::Not(a) => value_set_unchecked(universe, a).complement(),
        Formula::And(a, b) => {
            value_set_unchecked(universe, a).intersection(&value_set_unchecked(universe, b))
        }
        Formula::Or(a, b) => value_set_unchecked(universe, a).union(&value_set_unchecked(universe, b)),
        Formula::Implies(a, b) => {
            value_set_unchecked(universe, a).implication(&value_set_unchecked(universe, b))
        }
        Formula::Box(_) => unreachable!("modal formulas are rejected before evaluation"),
    }
}

/// Models of every formula in `gamma` that satisfy no formula in `delta`.
pub fn classical_countermodels(
    universe: &Universe,
    gamma: &[Formula],
    delta: &[Formula],
) -> Result<ModelSet> {
    let mut bad = ModelSet::full(universe.len());
    universe.check_capacity()?;
    for g in gamma {
        bad.intersect_with(&value_set(universe, g)?);
    }
    for d in delta {
        bad.intersect_with(&value_set(universe, d)?.complement());
    }
    Ok(bad)
}

/// Multiple-conclusion classical entailment: every model of all of `gamma`
/// satisfies some member of `delta`.
pub fn classical_entails(universe: &Universe, gamma: &[Formula], delta: &[Formula]) -> Result<bool> {
    Ok(classical_countermodels(universe, gamma, delta)?.is_empty())
}

/// Indices of the rules whose bodies hold in `m`.
pub fn fired_rules(theory: &CausalTheory, m: Model) -> Vec<usize> {
    let u = theory.universe();
    theory
        .rules()
        .iter()
        .enumerate()
        .filter(|(_, r)| eval(u, m, &r.body))
        .map(|(i, _)| i)
        .collect()
}

fn check_model(theory: &CausalTheory, m: Model) -> Result<()> {
    if m.width() != theory.universe().len() {
        return Err(Error::Precondition(format!(
            "model has {} atoms but the universe has {}",
            m.width(),
            theory.universe().len()
        )));
    }
    theory.universe().check_capacity()
}

/// The closure of the heads of the rules fired by `m`.
pub fn theory_closure(m: Model, theory: &CausalTheory) -> Result<ClosedSet> {
    check_model(theory, m)?;
    let u = theory.universe();
    let mut models = ModelSet::full(u.len());
    for i in fired_rules(theory, m) {
        models.intersect_with(&value_set_unchecked(u, &theory.rules()[i].head));
    }
    Ok(ClosedSet { models })
}

/// Every model satisfying the head of each rule whose body `m` satisfies.
pub fn causal_successors(m: Model, theory: &CausalTheory) -> Result<ModelSet> {
    check_model(theory, m)?;
    let u = theory.universe();
    let fired = fired_rules(theory, m);
    let mut out = ModelSet::empty(u.len());
    for candidate in enumerate_models(u)? {
        if fired.iter().all(|&i| eval(u, candidate, &theory.rules()[i].head)) {
            out.insert(candidate);
        }
    }
    Ok(out)
}

/// Whether `m` is the unique model of the heads it fires.
pub fn is_causally_explained(m: Model, theory: &CausalTheory) -> Result<bool> {
    Ok(theory_closure(m, theory)?.into_models() == ModelSet::singleton(m))
}

/// All causally explained models, in lexicographic order.
pub fn explained_models(theory: &CausalTheory) -> Result<Vec<Model>> {
    let frame = crate::kripke::Frame::new(theory)?;
    Ok(frame.explained_models())
}

/// Whether `f` holds in every causally explained model.
pub fn causal_consequence(theory: &CausalTheory, f: &Formula) -> Result<Verdict> {
    let target = value_set(theory.universe(), f)?;
    let explained = explained_models(theory)?;
    Ok(Verdict {
        holds: explained.iter().all(|&m| target.contains(m)),
        vacuous: explained.is_empty(),
    })
}

/// Upper bound on rule counts for operations that range over rule subsets.
pub const MAX_SUBSET_RULES: usize = 20;

pub(crate) fn check_rule_capacity(theory: &CausalTheory) -> Result<()> {
    if theory.len() > MAX_SUBSET_RULES {
        Err(Error::RuleCapacity {
            rules: theory.len(),
            limit: MAX_SUBSET_RULES,
        })
    } else {
        Ok(())
    }
}

/// The closure of every `a` such that the premises entail a disjunction of
/// rule bodies whose heads each entail `a`.
pub fn generalized_closure(s: &[Formula], theory: &CausalTheory) -> Result<ClosedSet> {
    let u = theory.universe();
    let mut premises = ModelSet::full(u.len());
    for f in s {
        premises.intersect_with(&value_set(u, f)?);
    }
    generalized_closure_of_models(&premises, theory)
}

/// [`generalized_closure`] for a premise set given by its models.
pub fn generalized_closure_of_models(premises: &ModelSet, theory: &CausalTheory) -> Result<ClosedSet> {
    check_rule_capacity(theory)?;
    let u = theory.universe();
    u.check_capacity()?;
    let bodies: Vec<ModelSet> = theory.rules().iter().map(|r| value_set_unchecked(u, &r.body)).collect();
    let heads: Vec<ModelSet> = theory.rules().iter().map(|r| value_set_unchecked(u, &r.head)).collect();
    let mut result = ModelSet::full(u.len());
    for mask in 0u32..(1u32 << theory.len()) {
        let mut covered = ModelSet::empty(u.len());
        let mut explained = ModelSet::empty(u.len());
        for i in (0..theory.len()).filter(|i| mask >> i & 1 == 1) {
            covered.union_with(&bodies[i]);
            explained.union_with(&heads[i]);
        }
        if premises.is_subset(&covered) {
            result.intersect_with(&explained);
        }
    }
    Ok(ClosedSet { models: result })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta1() -> CausalTheory {
        CausalTheory::from_strs(["p", "q"], ["p |> p", "p |> q"]).unwrap()
    }

    fn model(t: &CausalTheory, true_atoms: &[&str]) -> Model {
        Model::from_true_atoms(t.universe(), true_atoms.iter().copied()).unwrap()
    }

    fn f(text: &str) -> Formula {
        Formula::parse(text).unwrap()
    }

    #[test]
    fn truth_tables() {
        let u = Universe::new(["p", "q"]).unwrap();
        let m = Model::from_true_atoms(&u, ["p"]).unwrap();
        assert!(holds(&u, m, &f("p & !q")).unwrap());
        assert!(holds(&u, m, &Formula::Top).unwrap());
        let none = Model::from_world(0, 2);
        assert!(holds(&u, none, &f("p -> q")).unwrap());
        assert!(matches!(holds(&u, m, &f("[]p")), Err(Error::ModalFormula(_))));
    }

    #[test]
    fn entailment_examples() {
        let u = Universe::new(["p", "q"]).unwrap();
        assert!(classical_entails(&u, &[f("p"), f("p -> q")], &[f("q")]).unwrap());
        assert!(classical_entails(&u, &[], &[f("p"), f("!p")]).unwrap());
        let counter = classical_countermodels(&u, &[f("p | q")], &[f("p")]).unwrap();
        assert_eq!(counter.to_vec(), vec![Model::from_true_atoms(&u, ["q"]).unwrap()]);
    }

    #[test]
    fn closure_and_successors_for_sample_theory() {
        let t = theta1();
        let both = model(&t, &["p", "q"]);
        assert_eq!(
            theory_closure(both, &t).unwrap().models().to_vec(),
            vec![both]
        );
        assert_eq!(theory_closure(model(&t, &["q"]), &t).unwrap().models().len(), 4);
        assert_eq!(causal_successors(model(&t, &[]), &t).unwrap().len(), 4);
        assert_eq!(causal_successors(model(&t, &["p"]), &t).unwrap().to_vec(), vec![both]);
        assert!(is_causally_explained(both, &t).unwrap());
        assert!(!is_causally_explained(model(&t, &["p"]), &t).unwrap());
    }

    #[test]
    fn consequence_and_vacuity() {
        let t = theta1();
        assert_eq!(
            causal_consequence(&t, &f("p & q")).unwrap(),
            Verdict { holds: true, vacuous: false }
        );
        assert!(!causal_consequence(&t, &f("!p")).unwrap().holds);
        let empty = CausalTheory::from_strs(["p"], []).unwrap();
        assert_eq!(
            causal_consequence(&empty, &f("p")).unwrap(),
            Verdict { holds: true, vacuous: true }
        );
    }

    #[test]
    fn generalized_closure_examples() {
        let t = theta1();
        let closure = generalized_closure(&[f("p")], &t).unwrap();
        assert_eq!(closure.models().to_vec(), vec![model(&t, &["p", "q"])]);
        let empty = CausalTheory::from_strs(["p"], []).unwrap();
        assert_eq!(
            generalized_closure(&[], &empty).unwrap(),
            ClosedSet::tautologies(1)
        );
    }
}
