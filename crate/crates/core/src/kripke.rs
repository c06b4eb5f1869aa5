//! The canonical Kripke frame of a causal theory, semantic values of modal
//! formulas, explanation sets and general finite Kripke models.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{check_atoms, Formula};
use crate::model::{enumerate_models, Model, ModelSet, Universe};
use crate::semantics::{check_rule_capacity, eval, value_set_unchecked};
use crate::theory::CausalTheory;

/// Largest universe for which [`canonical_model`] materialises its relation.
pub const CANONICAL_MAX_ATOMS: usize = 12;

/// Worlds that fire the same rules share one successor set.
#[derive(Debug, Clone)]
struct Group {
    members: ModelSet,
    successors: ModelSet,
}

/// The canonical frame over all models of a theory's universe, where a
/// world's successors are the models of the heads of the rules it fires.
#[derive(Debug, Clone)]
pub struct Frame {
    theory: CausalTheory,
    heads: Vec<ModelSet>,
    groups: Vec<Group>,
    group_of: Vec<u32>,
}

impl Frame {
    pub fn new(theory: &CausalTheory) -> Result<Frame> {
        let u = theory.universe();
        u.check_capacity()?;
        let n = u.len();
        let bodies: Vec<ModelSet> = theory.rules().iter().map(|r| value_set_unchecked(u, &r.body)).collect();
        let heads: Vec<ModelSet> = theory.rules().iter().map(|r| value_set_unchecked(u, &r.head)).collect();
        let mut index: HashMap<Vec<u64>, u32> = HashMap::new();
        let mut groups: Vec<Group> = Vec::new();
        let mut group_of = Vec::with_capacity(u.world_count());
        let key_words = theory.len().div_ceil(64);
        for world in 0..u.world_count() as u32 {
            let mut key = vec![0u64; key_words];
            for (i, body) in bodies.iter().enumerate() {
                if body.contains_world(world) {
                    key[i / 64] |= 1 << (i % 64);
                }
            }
            let g = *index.entry(key).or_insert_with_key(|key| {
                let mut successors = ModelSet::full(n);
                for (i, head) in heads.iter().enumerate() {
                    if key[i / 64] >> (i % 64) & 1 == 1 {
                        successors.intersect_with(head);
                    }
                }
                groups.push(Group {
                    members: ModelSet::empty(n),
                    successors,
                });
                groups.len() as u32 - 1
            });
            groups[g as usize].members.insert(Model::from_world(world, n));
            group_of.push(g);
        }
        Ok(Frame {
            theory: theory.clone(),
            heads,
            groups,
            group_of,
        })
    }

    pub fn theory(&self) -> &CausalTheory {
        &self.theory
    }

    pub fn universe(&self) -> &Universe {
        self.theory.universe()
    }

    pub fn successors(&self, m: Model) -> &ModelSet {
        &self.groups[self.group_of[m.world() as usize] as usize].successors
    }

    /// Worlds all of whose successors lie in `target`.
    pub fn box_of(&self, target: &ModelSet) -> ModelSet {
        let mut out = ModelSet::empty(self.universe().len());
        for g in &self.groups {
            if g.successors.is_subset(target) {
                out.union_with(&g.members);
            }
        }
        out
    }

    /// The semantic value of a possibly modal formula.
    pub fn value(&self, f: &Formula) -> Result<ModelSet> {
        check_atoms(f, self.universe())?;
        Ok(self.value_unchecked(f))
    }

    pub(crate) fn value_unchecked(&self, f: &Formula) -> ModelSet {
        let u = self.universe();
        let n = u.len();
        match f {
            Formula::Top => ModelSet::full(n),
            Formula::Bottom => ModelSet::empty(n),
            Formula::Atom(name) => u.atom_set(u.index_of(name).expect("atom checked")),
            Formula::Not(a) => self.value_unchecked(a).complement(),
            Formula::And(a, b) => self.value_unchecked(a).intersection(&self.value_unchecked(b)),
            Formula::Or(a, b) => self.value_unchecked(a).union(&self.value_unchecked(b)),
            Formula::Implies(a, b) => self.value_unchecked(a).implication(&self.value_unchecked(b)),
            Formula::Box(a) => self.box_of(&self.value_unchecked(a)),
        }
    }

    /// Worlds satisfying all of `gamma` and none of `delta`.
    pub fn countermodels(&self, gamma: &[Formula], delta: &[Formula]) -> Result<ModelSet> {
        let mut bad = ModelSet::full(self.universe().len());
        for g in gamma {
            bad.intersect_with(&self.value(g)?);
        }
        for d in delta {
            bad.intersect_with(&self.value(d)?.complement());
        }
        Ok(bad)
    }

    pub fn entails(&self, gamma: &[Formula], delta: &[Formula]) -> Result<bool> {
        Ok(self.countermodels(gamma, delta)?.is_empty())
    }

    /// Worlds whose only successor is themselves, in lexicographic order.
    pub fn explained_models(&self) -> Vec<Model> {
        let mut out: Vec<Model> = self
            .groups
            .iter()
            .filter(|g| g.successors.len() == 1)
            .filter_map(|g| g.successors.first().filter(|&m| g.members.contains(m)))
            .collect();
        out.sort();
        out
    }

    /// All rule subsets whose heads jointly entail `f`, ordered by bitmask
    /// (rule `i` is bit `i`).
    pub fn explanation_sets(&self, f: &Formula) -> Result<Vec<ExplanationSet>> {
        check_rule_capacity(&self.theory)?;
        let target = self.value(f)?;
        Ok(self.explanation_sets_for(&target))
    }

    pub(crate) fn explanation_sets_for(&self, target: &ModelSet) -> Vec<ExplanationSet> {
        let mut masks = Vec::new();
        let full = ModelSet::full(self.universe().len());
        self.collect_sets(0, 0, &full, target, &mut masks);
        masks.sort_unstable();
        masks
            .into_iter()
            .map(|mask| ExplanationSet {
                rules: (0..self.theory.len()).filter(|i| mask >> i & 1 == 1).collect(),
            })
            .collect()
    }

    fn collect_sets(&self, next: usize, mask: u64, acc: &ModelSet, target: &ModelSet, out: &mut Vec<u64>) {
        if next == self.heads.len() {
            if acc.is_subset(target) {
                out.push(mask);
            }
            return;
        }
        self.collect_sets(next + 1, mask, acc, target, out);
        let narrowed = acc.intersection(&self.heads[next]);
        self.collect_sets(next + 1, mask | 1 << next, &narrowed, target, out);
    }
}

/// A set of rules, by index into the theory, whose heads entail a target.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExplanationSet {
    pub rules: Vec<usize>,
}

impl ExplanationSet {
    /// Checks that the indices are valid, sorted and distinct and that the
    /// heads entail `target` in the canonical frame.
    pub fn new(frame: &Frame, rules: Vec<usize>, target: &Formula) -> Result<ExplanationSet> {
        let set = ExplanationSet { rules };
        if set.rules.windows(2).any(|w| w[0] >= w[1])
            || set.rules.iter().any(|&i| i >= frame.theory().len())
        {
            return Err(Error::Precondition(format!("bad rule index set {set}")));
        }
        if !frame.entails(&set.heads(frame.theory()), &[target.clone()])? {
            return Err(Error::Precondition(format!(
                "heads of {set} do not entail {target}"
            )));
        }
        Ok(set)
    }

    pub fn mask(&self) -> u64 {
        self.rules.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub fn bodies(&self, theory: &CausalTheory) -> Vec<Formula> {
        self.rules.iter().map(|&i| theory.rules()[i].body.clone()).collect()
    }

    pub fn heads(&self, theory: &CausalTheory) -> Vec<Formula> {
        self.rules.iter().map(|&i| theory.rules()[i].head.clone()).collect()
    }

    pub fn body_conjunction(&self, theory: &CausalTheory) -> Formula {
        Formula::conj(self.bodies(theory))
    }

    pub fn head_conjunction(&self, theory: &CausalTheory) -> Formula {
        Formula::conj(self.heads(theory))
    }
}

impl fmt::Display for ExplanationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.rules.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// The semantic value of `f` in the canonical frame of `theory`.
pub fn semantic_value(f: &Formula, theory: &CausalTheory) -> Result<ModelSet> {
    Frame::new(theory)?.value(f)
}

/// Whether every world satisfying all of `gamma` satisfies some of `delta`.
pub fn modal_entails_semantic(gamma: &[Formula], delta: &[Formula], theory: &CausalTheory) -> Result<bool> {
    Frame::new(theory)?.entails(gamma, delta)
}

pub fn explanation_sets(f: &Formula, theory: &CausalTheory) -> Result<Vec<ExplanationSet>> {
    Frame::new(theory)?.explanation_sets(f)
}

/// Whether `m` is its own unique successor in the canonical frame.
pub fn is_explained_via_modal(m: Model, theory: &CausalTheory) -> Result<bool> {
    let frame = Frame::new(theory)?;
    Ok(*frame.successors(m) == ModelSet::singleton(m))
}

/// A finite Kripke model whose worlds are labelled by valuations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    universe: Universe,
    valuations: Vec<Model>,
    successors: Vec<Vec<usize>>,
}

impl KripkeModel {
    pub fn new(universe: Universe, valuations: Vec<Model>, edges: &[(usize, usize)]) -> Result<KripkeModel> {
        let k = valuations.len();
        if let Some(m) = valuations.iter().find(|m| m.width() != universe.len()) {
            return Err(Error::InvalidKripkeModel(format!(
                "valuation over {} atoms in a universe of {}",
                m.width(),
                universe.len()
            )));
        }
        let mut successors = vec![Vec::new(); k];
        for &(a, b) in edges {
            if a >= k || b >= k {
                return Err(Error::InvalidKripkeModel(format!(
                    "edge ({a}, {b}) leaves the {k} worlds"
                )));
            }
            successors[a].push(b);
        }
        for s in &mut successors {
            s.sort_unstable();
            s.dedup();
        }
        Ok(KripkeModel {
            universe,
            valuations,
            successors,
        })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn world_count(&self) -> usize {
        self.valuations.len()
    }

    pub fn valuation(&self, w: usize) -> Model {
        self.valuations[w]
    }

    pub fn successors(&self, w: usize) -> &[usize] {
        &self.successors[w]
    }

    pub fn relates(&self, a: usize, b: usize) -> bool {
        self.successors[a].binary_search(&b).is_ok()
    }

    /// Truth of `f` at every world, indexed by world.
    pub fn truth(&self, f: &Formula) -> Result<Vec<bool>> {
        check_atoms(f, &self.universe)?;
        Ok(self.truth_unchecked(f))
    }

    fn truth_unchecked(&self, f: &Formula) -> Vec<bool> {
        let k = self.world_count();
        match f {
            Formula::Top => vec![true; k],
            Formula::Bottom => vec![false; k],
            Formula::Atom(name) => {
                let i = self.universe.index_of(name).expect("atom checked");
                self.valuations.iter().map(|m| m.value(i)).collect()
            }
            Formula::Not(a) => self.truth_unchecked(a).into_iter().map(|v| !v).collect(),
            Formula::And(a, b) => zip_with(self.truth_unchecked(a), self.truth_unchecked(b), |x, y| x && y),
            Formula::Or(a, b) => zip_with(self.truth_unchecked(a), self.truth_unchecked(b), |x, y| x || y),
            Formula::Implies(a, b) => {
                zip_with(self.truth_unchecked(a), self.truth_unchecked(b), |x, y| !x || y)
            }
            Formula::Box(a) => {
                let inner = self.truth_unchecked(a);
                self.successors
                    .iter()
                    .map(|succ| succ.iter().all(|&v| inner[v]))
                    .collect()
            }
        }
    }

    pub fn forces(&self, w: usize, f: &Formula) -> Result<bool> {
        if w >= self.world_count() {
            return Err(Error::InvalidKripkeModel(format!("no world {w}")));
        }
        Ok(self.truth(f)?[w])
    }
}

fn zip_with(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

/// The canonical model with one world per valuation, in lexicographic order.
pub fn canonical_model(theory: &CausalTheory) -> Result<KripkeModel> {
    let u = theory.universe();
    if u.len() > CANONICAL_MAX_ATOMS {
        return Err(Error::Capacity {
            atoms: u.len(),
            limit: CANONICAL_MAX_ATOMS,
        });
    }
    let frame = Frame::new(theory)?;
    let worlds = enumerate_models(u)?;
    let mut edges = Vec::new();
    for &m in &worlds {
        for s in frame.successors(m).iter() {
            edges.push((m.world() as usize, s.world() as usize));
        }
    }
    KripkeModel::new(u.clone(), worlds, &edges)
}

/// Whether every world forces `body -> []head` for every rule.
pub fn check_causal_axioms(k: &KripkeModel, theory: &CausalTheory) -> Result<bool> {
    if k.universe() != theory.universe() {
        return Err(Error::InvalidKripkeModel(
            "model and theory have different universes".into(),
        ));
    }
    for rule in theory.rules() {
        for w in 0..k.world_count() {
            if eval(&k.universe, k.valuation(w), &rule.body)
                && !k
                    .successors(w)
                    .iter()
                    .all(|&v| eval(&k.universe, k.valuation(v), &rule.head))
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The valuation of world `w`, provided the model satisfies the rule axioms.
pub fn eta_project(k: &KripkeModel, theory: &CausalTheory, w: usize) -> Result<Model> {
    if !check_causal_axioms(k, theory)? {
        return Err(Error::Precondition(
            "model does not satisfy body -> []head for every rule".into(),
        ));
    }
    if w >= k.world_count() {
        return Err(Error::InvalidKripkeModel(format!("no world {w}")));
    }
    Ok(k.valuation(w))
}
