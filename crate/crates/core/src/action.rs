//! Action domains compiled into causal theories over timed atoms.
//!
//! Fluent `f` at time `t` becomes atom `f_t`; action `a` occurring at `t`
//! becomes `a_t`. Actions take one time step, so action atoms exist for
//! `t < horizon` and fluent atoms for `t <= horizon`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, ParseError, Result};
use crate::formula::{is_identifier, Formula};
use crate::model::{Model, Universe, DEFAULT_MAX_ATOMS};
use crate::semantics::explained_models;
use crate::theory::{split_keyword, strip_comment, CausalRule, CausalTheory};

/// A fluent or its negation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub fluent: String,
    pub positive: bool,
}

impl Literal {
    pub fn pos(fluent: impl Into<String>) -> Literal {
        Literal {
            fluent: fluent.into(),
            positive: true,
        }
    }

    pub fn neg(fluent: impl Into<String>) -> Literal {
        Literal {
            fluent: fluent.into(),
            positive: false,
        }
    }

    pub fn negated(&self) -> Literal {
        Literal {
            fluent: self.fluent.clone(),
            positive: !self.positive,
        }
    }

    /// The literal over the timed atom `fluent_t`.
    pub fn at(&self, t: usize) -> Formula {
        let atom = Formula::atom(timed(&self.fluent, t));
        if self.positive {
            atom
        } else {
            Formula::not(atom)
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("!")?;
        }
        f.write_str(&self.fluent)
    }
}

/// One precondition/postcondition pair of an action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Effect {
    pub action: String,
    pub pre: Vec<Literal>,
    pub post: Vec<Literal>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ActionDomain {
    pub fluents: Vec<String>,
    pub actions: Vec<String>,
    pub effects: Vec<Effect>,
    /// `(action, time)` pairs.
    pub occurrences: BTreeSet<(String, usize)>,
    pub init: Vec<Literal>,
    pub horizon: usize,
}

/// Why a compiled rule exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Effect,
    Occurrence,
    /// `¬a_t ▷ ¬a_t` for an action instance that is not declared to occur.
    /// Without these no model with a false action atom is explained.
    NonOccurrence,
    Persistence,
    Initial,
}

/// A compiled domain: the theory plus the origin of each rule.
#[derive(Debug, Clone)]
pub struct CompiledDomain {
    pub theory: CausalTheory,
    pub kinds: Vec<RuleKind>,
}

impl CompiledDomain {
    pub fn count(&self, kind: RuleKind) -> usize {
        self.kinds.iter().filter(|k| **k == kind).count()
    }

    /// Whether the theory contains non-occurrence completion rules.
    pub fn uses_completion(&self) -> bool {
        self.count(RuleKind::NonOccurrence) > 0
    }
}

pub(crate) fn timed(name: &str, t: usize) -> String {
    format!("{name}_{t}")
}

impl ActionDomain {
    /// Checks the domain's internal consistency.
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidDomain(msg));
        let mut names = BTreeSet::new();
        for name in self.fluents.iter().chain(&self.actions) {
            if !is_identifier(name) {
                return Err(Error::InvalidAtom(name.clone()));
            }
            if !names.insert(name.as_str()) {
                return invalid(format!("`{name}` is declared twice"));
            }
        }
        let fluent = |l: &Literal| self.fluents.contains(&l.fluent);
        for e in &self.effects {
            if !self.actions.contains(&e.action) {
                return invalid(format!("effect of undeclared action `{}`", e.action));
            }
            if let Some(l) = e.pre.iter().chain(&e.post).find(|l| !fluent(l)) {
                return invalid(format!("effect of `{}` mentions undeclared fluent `{}`", e.action, l.fluent));
            }
        }
        for (a, t) in &self.occurrences {
            if !self.actions.contains(a) {
                return invalid(format!("occurrence of undeclared action `{a}`"));
            }
            if *t >= self.horizon {
                return invalid(format!("occurrence {a}@{t} is not before the horizon {}", self.horizon));
            }
        }
        if let Some(l) = self.init.iter().find(|l| !fluent(l)) {
            return invalid(format!("initial literal mentions undeclared fluent `{}`", l.fluent));
        }
        if let Some(l) = self.init.iter().find(|l| self.init.contains(&l.negated())) {
            return invalid(format!("initial state contains both `{}` and `{}`", l, l.negated()));
        }
        Ok(())
    }

    /// The timed universe: for each time, fluents then actions.
    pub fn universe(&self) -> Result<Universe> {
        let mut atoms = Vec::new();
        for t in 0..=self.horizon {
            atoms.extend(self.fluents.iter().map(|f| timed(f, t)));
            if t < self.horizon {
                atoms.extend(self.actions.iter().map(|a| timed(a, t)));
            }
        }
        Universe::new(atoms)
    }

    pub fn compile(&self) -> Result<CompiledDomain> {
        self.validate()?;
        let universe = self.universe()?;
        let mut rules = Vec::new();
        let mut kinds = Vec::new();
        let mut push = |body: Formula, head: Formula, kind: RuleKind| {
            let rule = CausalRule { body, head };
            if !rules.contains(&rule) {
                rules.push(rule);
                kinds.push(kind);
            }
        };
        let action = |a: &str, t: usize| Formula::atom(timed(a, t));
        for e in &self.effects {
            for t in 0..self.horizon {
                let mut body: Vec<Formula> = e.pre.iter().map(|l| l.at(t)).collect();
                body.push(action(&e.action, t));
                let head = Formula::conj(e.post.iter().map(|l| l.at(t + 1)));
                push(Formula::conj(body), head, RuleKind::Effect);
            }
        }
        for t in 0..self.horizon {
            for a in &self.actions {
                if self.occurrences.contains(&(a.clone(), t)) {
                    push(action(a, t), action(a, t), RuleKind::Occurrence);
                }
            }
        }
        for t in 0..self.horizon {
            for a in &self.actions {
                if !self.occurrences.contains(&(a.clone(), t)) {
                    let not_a = Formula::not(action(a, t));
                    push(not_a.clone(), not_a, RuleKind::NonOccurrence);
                }
            }
        }
        for t in 0..self.horizon {
            for f in &self.fluents {
                for l in [Literal::pos(f.as_str()), Literal::neg(f.as_str())] {
                    push(Formula::and(l.at(t), l.at(t + 1)), l.at(t + 1), RuleKind::Persistence);
                }
            }
        }
        for l in &self.init {
            push(l.at(0), l.at(0), RuleKind::Initial);
        }
        let theory = CausalTheory::new(universe, rules)?;
        debug_assert_eq!(theory.len(), kinds.len());
        Ok(CompiledDomain { theory, kinds })
    }

    /// All causally explained histories, in lexicographic model order.
    pub fn solve(&self) -> Result<Vec<History>> {
        self.solve_within(DEFAULT_MAX_ATOMS)
    }

    /// [`solve`](Self::solve) with a different bound on the timed universe.
    pub fn solve_within(&self, max_atoms: usize) -> Result<Vec<History>> {
        let mut compiled = self.compile()?;
        compiled.theory = compiled.theory.with_max_atoms(max_atoms);
        Ok(explained_models(&compiled.theory)?
            .into_iter()
            .map(|model| History {
                domain: self.clone(),
                universe: compiled.theory.universe().clone(),
                model,
            })
            .collect())
    }

    /// Reads the domain format:
    ///
    /// ```text
    /// fluents: alive loaded
    /// actions: shoot wait
    /// action shoot: pre loaded post !alive & !loaded
    /// occurs: wait@0 shoot@1
    /// init: alive loaded
    /// horizon: 2
    /// ```
    pub fn parse(text: &str) -> Result<ActionDomain> {
        let mut d = ActionDomain::default();
        let mut horizon = None;
        for (line_no, line) in text.lines().enumerate() {
            let line_no = line_no + 1;
            let content = strip_comment(line);
            if content.trim().is_empty() {
                continue;
            }
            let indent = content.len() - content.trim_start().len();
            let at_line = |e: ParseError| Error::from(e.at_line(line_no, 0));
            let (keyword, rest, rest_at) = split_keyword(&content[indent..])
                .ok_or_else(|| at_line(ParseError::new(indent, "expected `keyword: ...`")))?;
            let rest_at = indent + rest_at;
            let words = words(rest, rest_at);
            match keyword {
                "fluents" => d.fluents.extend(words.map(|(_, w)| w.to_string())),
                "actions" => d.actions.extend(words.map(|(_, w)| w.to_string())),
                "init" => {
                    for (at, w) in words {
                        d.init.push(parse_literal(w, at).map_err(at_line)?);
                    }
                }
                "occurs" => {
                    for (at, w) in words {
                        let (a, t) = w
                            .split_once('@')
                            .and_then(|(a, t)| Some((a, t.parse::<usize>().ok()?)))
                            .ok_or_else(|| at_line(ParseError::new(at, format!("expected `action@time`, found `{w}`"))))?;
                        d.occurrences.insert((a.to_string(), t));
                    }
                }
                "horizon" => {
                    let value = rest.trim();
                    let n = value
                        .parse::<usize>()
                        .map_err(|_| at_line(ParseError::new(rest_at, format!("expected a number, found `{value}`"))))?;
                    horizon = Some(n);
                }
                k if k.starts_with("action ") => {
                    let name = k["action ".len()..].trim().to_string();
                    let (pre, post) = parse_effect(rest, rest_at).map_err(at_line)?;
                    d.effects.push(Effect {
                        action: name,
                        pre,
                        post,
                    });
                }
                other => {
                    return Err(at_line(ParseError::new(indent, format!("unknown directive `{other}:`"))));
                }
            }
        }
        d.horizon = horizon.ok_or_else(|| Error::InvalidDomain("missing `horizon:` line".into()))?;
        d.validate()?;
        Ok(d)
    }
}

/// Whitespace-separated words with their byte offsets.
fn words(text: &str, base: usize) -> impl Iterator<Item = (usize, &str)> {
    text.split_whitespace()
        .map(move |w| (base + (w.as_ptr() as usize - text.as_ptr() as usize), w))
}

fn parse_literal(word: &str, at: usize) -> Result<Literal, ParseError> {
    let (positive, name) = match word.strip_prefix('!').or_else(|| word.strip_prefix('¬')) {
        Some(rest) => (false, rest),
        None => (true, word),
    };
    if !is_identifier(name) {
        return Err(ParseError::new(at, format!("expected a fluent literal, found `{word}`")));
    }
    Ok(Literal {
        fluent: name.to_string(),
        positive,
    })
}

/// `&`-separated literals, or `true` for the empty conjunction.
fn parse_conjunction(text: &str, at: usize) -> Result<Vec<Literal>, ParseError> {
    if text.trim() == "true" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split('&') {
        let word = part.trim();
        let lead = part.len() - part.trim_start().len();
        if word.is_empty() {
            return Err(ParseError::new(at + offset + lead, "expected a fluent literal"));
        }
        out.push(parse_literal(word, at + offset + lead)?);
        offset += part.len() + 1;
    }
    Ok(out)
}

/// `pre <conjunction> post <conjunction>`; the `pre` part may be omitted.
fn parse_effect(text: &str, at: usize) -> Result<(Vec<Literal>, Vec<Literal>), ParseError> {
    let mut tokens = words(text, 0).peekable();
    let mut pre_span = None;
    let mut post_span = None;
    while let Some((offset, w)) = tokens.next() {
        match w {
            "pre" if pre_span.is_none() && post_span.is_none() => pre_span = Some(offset + 3),
            "post" if post_span.is_none() => post_span = Some((offset, offset + 4)),
            _ if pre_span.is_none() && post_span.is_none() => {
                return Err(ParseError::new(at + offset, format!("expected `pre` or `post`, found `{w}`")))
            }
            _ => {}
        }
    }
    let (post_kw, post_start) = post_span.ok_or_else(|| ParseError::new(at + text.len(), "missing `post`"))?;
    let pre = match pre_span {
        Some(start) => parse_conjunction(&text[start..post_kw], at + start)?,
        None => Vec::new(),
    };
    let post = parse_conjunction(&text[post_start..], at + post_start)?;
    Ok((pre, post))
}

/// A causally explained model of a compiled domain.
#[derive(Debug, Clone)]
pub struct History {
    domain: ActionDomain,
    universe: Universe,
    model: Model,
}

impl History {
    pub fn model(&self) -> Model {
        self.model
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn domain(&self) -> &ActionDomain {
        &self.domain
    }

    fn series(&self, name: &str, len: usize) -> Vec<bool> {
        (0..len)
            .map(|t| self.model.get(&self.universe, &timed(name, t)).expect("timed atom"))
            .collect()
    }

    /// Values of a fluent at times `0..=horizon`.
    pub fn fluent(&self, name: &str) -> Option<Vec<bool>> {
        self.domain
            .fluents
            .iter()
            .any(|f| f == name)
            .then(|| self.series(name, self.domain.horizon + 1))
    }

    /// Whether an action occurs at times `0..horizon`.
    pub fn action(&self, name: &str) -> Option<Vec<bool>> {
        self.domain
            .actions
            .iter()
            .any(|a| a == name)
            .then(|| self.series(name, self.domain.horizon))
    }

    /// A table with one column per time step and one row per fluent, then
    /// per action, using `⊤`/`⊥`. Empty when the domain has no fluents
    /// or actions.
    pub fn render(&self) -> String {
        let d = &self.domain;
        if d.fluents.is_empty() && d.actions.is_empty() {
            return String::new();
        }
        let width = d
            .fluents
            .iter()
            .chain(&d.actions)
            .map(|n| n.chars().count())
            .max()
            .unwrap_or(0);
        let cell = d.horizon.to_string().len();
        let mut out = format!("{:width$}", "");
        for t in 0..=d.horizon {
            out.push_str(&format!(" {t:>cell$}"));
        }
        out.push('\n');
        let rows = d
            .fluents
            .iter()
            .map(|f| (f, self.series(f, d.horizon + 1)))
            .chain(d.actions.iter().map(|a| (a, self.series(a, d.horizon))));
        for (name, values) in rows {
            out.push_str(&format!("{name:width$}"));
            for v in values {
                out.push_str(&format!(" {:>cell$}", if v { "⊤" } else { "⊥" }));
            }
            out.push('\n');
        }
        out
    }
}

/// The wait-then-shoot scenario: a loaded gun fired at a living target.
pub fn yale_shooting() -> ActionDomain {
    ActionDomain {
        fluents: vec!["alive".into(), "loaded".into()],
        actions: vec!["wait".into(), "shoot".into()],
        effects: vec![Effect {
            action: "shoot".into(),
            pre: vec![Literal::pos("loaded")],
            post: vec![Literal::neg("alive"), Literal::neg("loaded")],
        }],
        occurrences: [("wait".to_string(), 0), ("shoot".to_string(), 1)].into_iter().collect(),
        init: vec![Literal::pos("alive"), Literal::pos("loaded")],
        horizon: 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::is_causally_explained;

    #[test]
    fn ysp_rule_counts() {
        let c = yale_shooting().compile().unwrap();
        assert_eq!(c.theory.universe().len(), 10);
        assert_eq!(c.count(RuleKind::Effect), 2);
        assert_eq!(c.count(RuleKind::Occurrence), 2);
        assert_eq!(c.count(RuleKind::NonOccurrence), 2);
        assert_eq!(c.count(RuleKind::Persistence), 8);
        assert_eq!(c.count(RuleKind::Initial), 2);
        assert!(c.uses_completion());
    }

    #[test]
    fn ysp_has_one_history() {
        let histories = yale_shooting().solve().unwrap();
        assert_eq!(histories.len(), 1);
        let h = &histories[0];
        assert_eq!(h.fluent("alive").unwrap(), vec![true, true, false]);
        assert_eq!(h.fluent("loaded").unwrap(), vec![true, true, false]);
        assert_eq!(h.action("wait").unwrap(), vec![true, false]);
        assert_eq!(h.action("shoot").unwrap(), vec![false, true]);
        assert_eq!(
            h.render(),
            "       0 1 2\nalive  ⊤ ⊤ ⊥\nloaded ⊤ ⊤ ⊥\nwait   ⊤ ⊥\nshoot  ⊥ ⊤\n"
        );
    }

    #[test]
    fn ysp_bad_history_is_unexplained() {
        let c = yale_shooting().compile().unwrap();
        let u = c.theory.universe();
        let bad = Model::from_true_atoms(u, ["alive_0", "alive_1", "alive_2", "loaded_0", "wait_0", "shoot_1"]).unwrap();
        assert!(!is_causally_explained(bad, &c.theory).unwrap());
    }

    #[test]
    fn empty_and_persistence_domains() {
        let empty = ActionDomain::default();
        assert!(empty.compile().unwrap().theory.is_empty());
        let hs = empty.solve().unwrap();
        assert_eq!(hs.len(), 1);
        assert_eq!(hs[0].render(), "");

        let d = ActionDomain {
            fluents: vec!["f".into()],
            init: vec![Literal::pos("f")],
            horizon: 1,
            ..ActionDomain::default()
        };
        let hs = d.solve().unwrap();
        assert_eq!(hs.len(), 1);
        assert_eq!(hs[0].fluent("f").unwrap(), vec![true, true]);
        assert_eq!(hs[0].render(), "  0 1\nf ⊤ ⊤\n");
    }

    #[test]
    fn parses_domain_text() {
        let text = "# shooting\nfluents: alive loaded\nactions: wait shoot\naction shoot: pre loaded post !alive & !loaded\noccurs: wait@0 shoot@1\ninit: alive loaded\nhorizon: 2\n";
        assert_eq!(ActionDomain::parse(text).unwrap(), yale_shooting());
        let d = ActionDomain::parse("fluents: f\nactions: a\naction a: post !f\nhorizon: 1\n").unwrap();
        assert!(d.effects[0].pre.is_empty());
        let d = ActionDomain::parse("fluents: f\nactions: a\naction a: pre true post f\nhorizon: 1\n").unwrap();
        assert!(d.effects[0].pre.is_empty());
    }

    #[test]
    fn rejects_bad_domains() {
        let err = ActionDomain::parse("fluents: f\naction a: pre f post f & \nhorizon: 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse(ParseError { line: Some(2), .. })), "{err}");
        assert!(matches!(
            ActionDomain::parse("fluents: f\nactions: a\noccurs: a@1\nhorizon: 1\n"),
            Err(Error::InvalidDomain(_))
        ));
        assert!(matches!(
            ActionDomain::parse("fluents: f\ninit: f !f\nhorizon: 1\n"),
            Err(Error::InvalidDomain(_))
        ));
        assert!(matches!(
            ActionDomain::parse("fluents: f\noccurs: a@x\nhorizon: 1\n"),
            Err(Error::Parse(ParseError { line: Some(2), offset: 8, .. }))
        ));
    }
}
