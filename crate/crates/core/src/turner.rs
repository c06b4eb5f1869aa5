//! S5 theories with a causal operator `C`, their explained models, and the
//! contrast between their nonmonotonic consequence and the monotone box
//! of causal theories.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, ParseError, Result};
use crate::formula::{check_atoms, Dialect, Formula, Parser, S5_ASCII};
use crate::kripke::semantic_value;
use crate::model::{enumerate_models, Model, ModelSet, Universe};
use crate::semantics::{eval, explained_models, Verdict};
use crate::theory::{split_keyword, strip_comment, CausalTheory};

/// Largest universe for which explained models are enumerated.
pub const TURNER_MAX_ATOMS: usize = 3;

/// A formula whose modality is the S5 operator `C`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct S5Formula(pub Formula);

impl S5Formula {
    /// Parses the formula grammar with `C` (or `[]`) as the modality.
    pub fn parse(text: &str) -> Result<S5Formula, ParseError> {
        let mut parser = Parser::new(text, Dialect::S5)?;
        let f = parser.formula()?;
        parser.expect_end()?;
        Ok(S5Formula(f))
    }

    pub fn formula(&self) -> &Formula {
        &self.0
    }
}

impl fmt::Display for S5Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.write_with(f, &S5_ASCII, 0)
    }
}

/// An S5 theory: axioms over a universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct S5Theory {
    universe: Universe,
    axioms: Vec<S5Formula>,
}

impl S5Theory {
    pub fn new(universe: Universe, axioms: Vec<S5Formula>) -> Result<S5Theory> {
        for a in &axioms {
            check_atoms(&a.0, &universe)?;
        }
        Ok(S5Theory { universe, axioms })
    }

    pub fn from_strs<'a>(
        atoms: impl IntoIterator<Item = &'a str>,
        axioms: impl IntoIterator<Item = &'a str>,
    ) -> Result<S5Theory> {
        let axioms = axioms
            .into_iter()
            .map(|a| S5Formula::parse(a).map_err(Error::from))
            .collect::<Result<Vec<_>>>()?;
        S5Theory::new(Universe::new(atoms)?, axioms)
    }

    /// Reads `atoms: p q` and `axiom: p -> C p` lines.
    pub fn parse(text: &str) -> Result<S5Theory> {
        let mut universe = Universe::empty();
        let mut axioms = Vec::new();
        for (line_no, line) in text.lines().enumerate() {
            let line_no = line_no + 1;
            let content = strip_comment(line);
            if content.trim().is_empty() {
                continue;
            }
            let indent = content.len() - content.trim_start().len();
            let (keyword, rest, rest_at) = split_keyword(&content[indent..])
                .ok_or_else(|| ParseError::new(indent, "expected `atoms:` or `axiom:`").at_line(line_no, 0))?;
            let rest_at = indent + rest_at;
            match keyword {
                "atoms" => {
                    for w in rest.split_whitespace() {
                        let at = rest_at + (w.as_ptr() as usize - rest.as_ptr() as usize);
                        universe
                            .push(w.to_string())
                            .map_err(|e| ParseError::new(at, e.to_string()).at_line(line_no, 0))?;
                    }
                }
                "axiom" => {
                    let f = S5Formula::parse(rest).map_err(|e| e.at_line(line_no, rest_at))?;
                    if let Some(atom) = f.0.atoms().into_iter().find(|a| !universe.contains(a)) {
                        return Err(ParseError::new(rest_at, format!("atom `{atom}` is not declared"))
                            .at_line(line_no, 0)
                            .into());
                    }
                    axioms.push(f);
                }
                other => {
                    return Err(ParseError::new(indent, format!("unknown directive `{other}:`"))
                        .at_line(line_no, 0)
                        .into())
                }
            }
        }
        S5Theory::new(universe, axioms)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn axioms(&self) -> &[S5Formula] {
        &self.axioms
    }

    /// The theory with one more axiom.
    pub fn with_axiom(&self, axiom: S5Formula) -> Result<S5Theory> {
        let mut axioms = self.axioms.clone();
        axioms.push(axiom);
        S5Theory::new(self.universe.clone(), axioms)
    }
}

impl fmt::Display for S5Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "atoms: {}", self.universe.atoms().join(" "))?;
        for a in &self.axioms {
            writeln!(f, "axiom: {a}")?;
        }
        Ok(())
    }
}

/// Worlds with valuations, partitioned into equivalence classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct S5Model {
    universe: Universe,
    valuations: Vec<Model>,
    classes: Vec<usize>,
}

impl S5Model {
    /// `classes[w]` names the equivalence class of world `w`.
    pub fn new(universe: Universe, valuations: Vec<Model>, classes: Vec<usize>) -> Result<S5Model> {
        if valuations.is_empty() {
            return Err(Error::InvalidS5Model("no worlds".into()));
        }
        if classes.len() != valuations.len() {
            return Err(Error::InvalidS5Model(format!(
                "{} worlds but {} class labels",
                valuations.len(),
                classes.len()
            )));
        }
        if let Some(v) = valuations.iter().find(|v| v.width() != universe.len()) {
            return Err(Error::InvalidS5Model(format!(
                "valuation over {} atoms in a universe of {}",
                v.width(),
                universe.len()
            )));
        }
        Ok(S5Model {
            universe,
            valuations,
            classes,
        })
    }

    /// A model whose worlds form a single class.
    pub fn cluster(universe: Universe, valuations: Vec<Model>) -> Result<S5Model> {
        let classes = vec![0; valuations.len()];
        S5Model::new(universe, valuations, classes)
    }

    pub fn world_count(&self) -> usize {
        self.valuations.len()
    }

    pub fn valuation(&self, w: usize) -> Model {
        self.valuations[w]
    }

    pub fn class_of(&self, w: usize) -> Vec<usize> {
        (0..self.valuations.len())
            .filter(|&v| self.classes[v] == self.classes[w])
            .collect()
    }
}

/// Whether `f` holds at world `w`; `C g` holds when `g` holds throughout
/// the class of `w`.
pub fn s5_holds(k: &S5Model, w: usize, f: &S5Formula) -> Result<bool> {
    if w >= k.world_count() {
        return Err(Error::Precondition(format!("no world {w}")));
    }
    check_atoms(&f.0, &k.universe)?;
    Ok(holds_at(k, w, &f.0))
}

fn holds_at(k: &S5Model, w: usize, f: &Formula) -> bool {
    match f {
        Formula::Top => true,
        Formula::Bottom => false,
        Formula::Atom(_) => eval(&k.universe, k.valuations[w], f),
        Formula::Not(a) => !holds_at(k, w, a),
        Formula::And(a, b) => holds_at(k, w, a) && holds_at(k, w, b),
        Formula::Or(a, b) => holds_at(k, w, a) || holds_at(k, w, b),
        Formula::Implies(a, b) => !holds_at(k, w, a) || holds_at(k, w, b),
        Formula::Box(a) => k.class_of(w).into_iter().all(|v| holds_at(k, v, a)),
    }
}

fn check_capacity(u: &Universe) -> Result<()> {
    if u.len() > TURNER_MAX_ATOMS {
        return Err(Error::Capacity {
            atoms: u.len(),
            limit: TURNER_MAX_ATOMS,
        });
    }
    Ok(())
}

fn satisfies_at(k: &S5Model, w: usize, t: &S5Theory) -> bool {
    t.axioms.iter().all(|a| holds_at(k, w, &a.0))
}

/// A class of valuations containing `w` and at least one other valuation
/// in which the theory holds at `w`, if any. Such a class shows that `w`
/// is not explained.
pub fn rival_class(t: &S5Theory, w: Model) -> Result<Option<Vec<Model>>> {
    check_capacity(&t.universe)?;
    let others: Vec<Model> = enumerate_models(&t.universe)?
        .into_iter()
        .filter(|&v| v != w)
        .collect();
    for mask in 1u64..(1 << others.len()) {
        let mut worlds = vec![w];
        worlds.extend(
            others
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v),
        );
        let k = S5Model::cluster(t.universe.clone(), worlds)?;
        if satisfies_at(&k, 0, t) {
            return Ok(Some(k.valuations));
        }
    }
    Ok(None)
}

/// Valuations `w` such that the theory holds in the one-world model on `w`
/// and in no class of two or more distinct valuations that includes `w`,
/// truth being evaluated at `w`. Ascending order.
pub fn turner_explained_models(t: &S5Theory) -> Result<Vec<Model>> {
    check_capacity(&t.universe)?;
    let mut out = Vec::new();
    for w in enumerate_models(&t.universe)? {
        let single = S5Model::cluster(t.universe.clone(), vec![w])?;
        if satisfies_at(&single, 0, t) && rival_class(t, w)?.is_none() {
            out.push(w);
        }
    }
    Ok(out)
}

/// Whether the nonmodal `f` holds at every explained model.
pub fn turner_consequence(t: &S5Theory, f: &Formula) -> Result<Verdict> {
    crate::formula::require_nonmodal(f)?;
    check_atoms(f, &t.universe)?;
    let explained = turner_explained_models(t)?;
    Ok(Verdict {
        holds: explained.iter().all(|&m| eval(&t.universe, m, f)),
        vacuous: explained.is_empty(),
    })
}

/// The failure of monotonicity: a theory and an extension of it where a
/// consequence of the smaller theory is lost, set against the causal
/// theories with the same explained models.
#[derive(Debug, Clone)]
pub struct NonmonotonicityReport {
    pub t1: S5Theory,
    pub t2: S5Theory,
    pub t1_explained: Vec<Model>,
    pub t2_explained: Vec<Model>,
    pub t1_proves_p: Verdict,
    pub t2_proves_p: Verdict,
    pub theta1: CausalTheory,
    pub theta2: CausalTheory,
    pub theta1_explained: Vec<Model>,
    pub theta2_explained: Vec<Model>,
    /// Values of `□1 p`, `□1 ¬p`, `□2 p`, `□2 ¬p`.
    pub box1_p: ModelSet,
    pub box1_not_p: ModelSet,
    pub box2_p: ModelSet,
    pub box2_not_p: ModelSet,
    /// Values of `{□i p ↔ p, □i ¬p ↔ ¬p}` taken as a conjunction.
    pub gamma1: ModelSet,
    pub gamma2: ModelSet,
}

impl NonmonotonicityReport {
    /// Whether the computed values match the expected contrast.
    pub fn is_witness(&self) -> bool {
        let u = self.theta1.universe();
        let p = ModelSet::atom(1, 0);
        let full = ModelSet::full(u.len());
        self.t1.axioms().iter().all(|a| self.t2.axioms().contains(a))
            && self.t1_proves_p.holds
            && !self.t1_proves_p.vacuous
            && !self.t2_proves_p.holds
            && self.t1_explained == self.theta1_explained
            && self.t2_explained == self.theta2_explained
            && self.box1_p == p
            && self.box1_not_p.is_empty()
            && self.box2_p == p
            && self.box2_not_p == p.complement()
            && self.gamma1 == p
            && self.gamma2 == full
    }
}

impl fmt::Display for NonmonotonicityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = self.t1.universe();
        let models = |ms: &[Model]| -> String {
            let items: Vec<String> = ms.iter().map(|m| format!("{{{}}}", m.display(u))).collect();
            format!("[{}]", items.join(", "))
        };
        let set = |s: &ModelSet| models(&s.to_vec());
        let axioms = |t: &S5Theory| -> String {
            let items: Vec<String> = t.axioms().iter().map(|a| a.to_string()).collect();
            items.join(", ")
        };
        writeln!(f, "T1 = {{{}}}", axioms(&self.t1))?;
        writeln!(f, "T2 = {{{}}}", axioms(&self.t2))?;
        writeln!(f, "explained by T1: {}", models(&self.t1_explained))?;
        writeln!(f, "explained by T2: {}", models(&self.t2_explained))?;
        writeln!(f, "T1 explains p: {}", self.t1_proves_p.holds)?;
        writeln!(f, "T2 explains p: {}", self.t2_proves_p.holds)?;
        writeln!(f, "Theta1 rules: {}", rules(&self.theta1))?;
        writeln!(f, "Theta2 rules: {}", rules(&self.theta2))?;
        writeln!(f, "explained by Theta1: {}", models(&self.theta1_explained))?;
        writeln!(f, "explained by Theta2: {}", models(&self.theta2_explained))?;
        writeln!(f, "[[□1 p]] = {}", set(&self.box1_p))?;
        writeln!(f, "[[□1 ¬p]] = {}", set(&self.box1_not_p))?;
        writeln!(f, "[[□2 p]] = {}", set(&self.box2_p))?;
        writeln!(f, "[[□2 ¬p]] = {}", set(&self.box2_not_p))?;
        writeln!(f, "[[Γ1]] = {}", set(&self.gamma1))?;
        writeln!(f, "[[Γ2]] = {}", set(&self.gamma2))?;
        writeln!(f, "nonmonotonic: {}", self.is_witness())
    }
}

fn rules(t: &CausalTheory) -> String {
    let items: Vec<String> = t.rules().iter().map(|r| r.to_string()).collect();
    items.join(", ")
}

/// Computes the report for `T1 = {p → C p}` and `T2 = T1 ∪ {¬p → C ¬p}`.
pub fn nonmonotonicity_witness() -> Result<NonmonotonicityReport> {
    let t1 = S5Theory::from_strs(["p"], ["p -> C p"])?;
    let t2 = t1.with_axiom(S5Formula::parse("!p -> C !p")?)?;
    let theta1 = CausalTheory::from_strs(["p"], ["p |> p"])?;
    let theta2 = CausalTheory::from_strs(["p"], ["p |> p", "!p |> !p"])?;
    let p = Formula::atom("p");
    let not_p = Formula::not(p.clone());
    let gamma = |theta: &CausalTheory| -> Result<ModelSet> {
        let f = Formula::and(
            Formula::iff(Formula::boxed(p.clone()), p.clone()),
            Formula::iff(Formula::boxed(not_p.clone()), not_p.clone()),
        );
        semantic_value(&f, theta)
    };
    Ok(NonmonotonicityReport {
        t1_explained: turner_explained_models(&t1)?,
        t2_explained: turner_explained_models(&t2)?,
        t1_proves_p: turner_consequence(&t1, &p)?,
        t2_proves_p: turner_consequence(&t2, &p)?,
        theta1_explained: explained_models(&theta1)?,
        theta2_explained: explained_models(&theta2)?,
        box1_p: semantic_value(&Formula::boxed(p.clone()), &theta1)?,
        box1_not_p: semantic_value(&Formula::boxed(not_p.clone()), &theta1)?,
        box2_p: semantic_value(&Formula::boxed(p.clone()), &theta2)?,
        box2_not_p: semantic_value(&Formula::boxed(not_p.clone()), &theta2)?,
        gamma1: gamma(&theta1)?,
        gamma2: gamma(&theta2)?,
        t1,
        t2,
        theta1,
        theta2,
    })
}

/// Atoms of a set of S5 formulas, in first-seen order.
pub fn atoms_of(axioms: &[S5Formula]) -> Vec<String> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in axioms {
        for atom in a.0.atoms() {
            if seen.insert(atom.to_string()) {
                out.push(atom.to_string());
            }
        }
    }
    out
}
