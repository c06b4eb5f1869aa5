//! Causal rules, causal theories, the theory text format and atom renaming.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, ParseError, Result};
use crate::formula::{check_atoms, require_nonmodal, Dialect, Formula, Parser, Tok};
use crate::model::{Model, Universe};

/// A pair `body |> head` of nonmodal formulas: the body explains the head.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CausalRule {
    pub body: Formula,
    pub head: Formula,
}

impl CausalRule {
    pub fn new(body: Formula, head: Formula) -> Result<CausalRule> {
        require_nonmodal(&body)?;
        require_nonmodal(&head)?;
        Ok(CausalRule { body, head })
    }

    /// Parses `body |> head`.
    pub fn parse(text: &str) -> std::result::Result<CausalRule, Error> {
        let mut parser = Parser::new(text, Dialect::Causal)?;
        let rule = parse_rule(&mut parser)?;
        parser.expect_end()?;
        Ok(rule)
    }

    pub fn rename(&self, map: &BTreeMap<String, String>) -> CausalRule {
        CausalRule {
            body: self.body.rename(map),
            head: self.head.rename(map),
        }
    }
}

fn parse_rule(parser: &mut Parser) -> Result<CausalRule> {
    let body_at = parser.offset();
    let body = parser.formula()?;
    parser.expect(&Tok::RuleArrow, "`|>`")?;
    let head_at = parser.offset();
    let head = parser.formula()?;
    if body.is_modal() {
        return Err(ParseError::new(body_at, "rule body must be nonmodal").into());
    }
    if head.is_modal() {
        return Err(ParseError::new(head_at, "rule head must be nonmodal").into());
    }
    Ok(CausalRule { body, head })
}

impl fmt::Display for CausalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |> {}", self.body, self.head)
    }
}

/// A finite sequence of causal rules over a declared universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalTheory {
    universe: Universe,
    rules: Vec<CausalRule>,
}

impl CausalTheory {
    /// Validates the rules against the universe and drops syntactic duplicates,
    /// keeping the first occurrence of each.
    pub fn new(universe: Universe, rules: Vec<CausalRule>) -> Result<CausalTheory> {
        let mut seen = BTreeSet::new();
        let mut kept = Vec::with_capacity(rules.len());
        for rule in rules {
            require_nonmodal(&rule.body)?;
            require_nonmodal(&rule.head)?;
            check_atoms(&rule.body, &universe)?;
            check_atoms(&rule.head, &universe)?;
            if seen.insert(rule.clone()) {
                kept.push(rule);
            }
        }
        Ok(CausalTheory {
            universe,
            rules: kept,
        })
    }

    pub fn empty(universe: Universe) -> CausalTheory {
        CausalTheory {
            universe,
            rules: Vec::new(),
        }
    }

    /// Convenience constructor from rule strings such as `"p |> q"`.
    pub fn from_strs<'a>(
        atoms: impl IntoIterator<Item = &'a str>,
        rules: impl IntoIterator<Item = &'a str>,
    ) -> Result<CausalTheory> {
        let universe = Universe::new(atoms)?;
        let rules = rules
            .into_iter()
            .map(CausalRule::parse)
            .collect::<Result<Vec<_>>>()?;
        CausalTheory::new(universe, rules)
    }

    /// Reads the line-oriented theory format: `atoms: p q`, `rule: f |> g`,
    /// blank lines and `#` comments.
    pub fn parse(text: &str) -> Result<CausalTheory> {
        let mut universe = Universe::empty();
        let mut rules = Vec::new();
        for (line_no, line) in text.lines().enumerate() {
            let line_no = line_no + 1;
            let content = strip_comment(line);
            let trimmed = content.trim_start();
            if trimmed.trim().is_empty() {
                continue;
            }
            let indent = content.len() - trimmed.len();
            let (keyword, rest, rest_at) = split_keyword(trimmed)
                .ok_or_else(|| ParseError::new(indent, "expected `atoms:` or `rule:`").at_line(line_no, 0))?;
            let rest_at = indent + rest_at;
            match keyword {
                "atoms" => declare_atoms(&mut universe, rest, rest_at, line_no)?,
                "rule" => {
                    let mut parser = Parser::new(rest, Dialect::Causal)
                        .map_err(|e| e.at_line(line_no, rest_at))?;
                    let rule = parse_rule(&mut parser)
                        .and_then(|r| parser.expect_end().map(|_| r).map_err(Error::from))
                        .map_err(|e| relocate(e, line_no, rest_at))?;
                    rules.push((rule, line_no, rest_at));
                }
                other => {
                    return Err(ParseError::new(indent, format!("unknown directive `{other}:`"))
                        .at_line(line_no, 0)
                        .into())
                }
            }
        }
        for (rule, line_no, col) in &rules {
            for f in [&rule.body, &rule.head] {
                if let Some(atom) = f.atoms().into_iter().find(|a| !universe.contains(a)) {
                    return Err(ParseError::new(
                        *col,
                        format!("atom `{atom}` is not declared"),
                    )
                    .at_line(*line_no, 0)
                    .into());
                }
            }
        }
        CausalTheory::new(universe, rules.into_iter().map(|(r, _, _)| r).collect())
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn rules(&self) -> &[CausalRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Same rules over a universe with a different enumeration bound.
    pub fn with_max_atoms(mut self, limit: usize) -> CausalTheory {
        self.universe = self.universe.with_max_atoms(limit);
        self
    }

    /// Theory extended by one rule (duplicates are dropped).
    pub fn with_rule(&self, rule: CausalRule) -> Result<CausalTheory> {
        let mut rules = self.rules.clone();
        rules.push(rule);
        CausalTheory::new(self.universe.clone(), rules)
    }

    /// Renders the theory in the text format accepted by [`CausalTheory::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("atoms: {}\n", self.universe.atoms().join(" "));
        for rule in &self.rules {
            out.push_str(&format!("rule: {rule}\n"));
        }
        out
    }
}

impl fmt::Display for CausalTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Splits `keyword: rest`, returning the byte offset of `rest` in `line`.
pub(crate) fn split_keyword(line: &str) -> Option<(&str, &str, usize)> {
    let colon = line.find(':')?;
    let keyword = line[..colon].trim();
    if keyword.is_empty() {
        return None;
    }
    Some((keyword, &line[colon + 1..], colon + 1))
}

fn declare_atoms(universe: &mut Universe, rest: &str, rest_at: usize, line_no: usize) -> Result<()> {
    let mut cursor = 0;
    for word in rest.split_whitespace() {
        let at = rest[cursor..].find(word).map_or(cursor, |i| cursor + i);
        cursor = at + word.len();
        universe.push(word.to_string()).map_err(|e| {
            Error::from(ParseError::new(at, e.to_string()).at_line(line_no, rest_at))
        })?;
    }
    Ok(())
}

fn relocate(e: Error, line: usize, column_base: usize) -> Error {
    match e {
        Error::Parse(p) => Error::Parse(p.at_line(line, column_base)),
        other => other,
    }
}

/// A bijective renaming of a universe's atoms.
///
/// Atoms absent from the map are left unchanged. When the image of the
/// universe is the universe itself the original atom order is kept;
/// otherwise the renamed universe lists the images in the original positions.
#[derive(Debug, Clone)]
pub struct Renaming {
    map: BTreeMap<String, String>,
    source: Universe,
    target: Universe,
}

impl Renaming {
    pub fn new(source: &Universe, map: BTreeMap<String, String>) -> Result<Renaming> {
        if let Some(k) = map.keys().find(|k| !source.contains(k)) {
            return Err(Error::InvalidRenaming(format!("`{k}` is not in the universe")));
        }
        let images: Vec<String> = source
            .atoms()
            .iter()
            .map(|a| map.get(a).unwrap_or(a).clone())
            .collect();
        let distinct: BTreeSet<&String> = images.iter().collect();
        if distinct.len() != images.len() {
            return Err(Error::InvalidRenaming("two atoms share an image".into()));
        }
        let original: BTreeSet<&String> = source.atoms().iter().collect();
        let target = if distinct == original {
            source.clone()
        } else {
            Universe::new(images)
                .map_err(|e| Error::InvalidRenaming(e.to_string()))?
                .with_max_atoms(source.max_atoms())
        };
        Ok(Renaming {
            map,
            source: source.clone(),
            target,
        })
    }

    pub fn source(&self) -> &Universe {
        &self.source
    }

    pub fn target(&self) -> &Universe {
        &self.target
    }

    pub fn formula(&self, f: &Formula) -> Formula {
        f.rename(&self.map)
    }

    pub fn theory(&self, theory: &CausalTheory) -> Result<CausalTheory> {
        if theory.universe() != &self.source {
            return Err(Error::InvalidRenaming(
                "theory is over a different universe".into(),
            ));
        }
        CausalTheory::new(
            self.target.clone(),
            theory.rules().iter().map(|r| r.rename(&self.map)).collect(),
        )
    }

    pub fn model(&self, m: Model) -> Model {
        let mut out = Model::from_world(0, self.target.len());
        for (i, atom) in self.source.atoms().iter().enumerate() {
            let image = self.map.get(atom).unwrap_or(atom);
            let j = self.target.index_of(image).expect("image is in the target");
            out = out.with(j, m.value(i));
        }
        out
    }
}

/// Applies a renaming to a formula, theory or model.
pub trait Rename: Sized {
    fn rename_atoms(&self, sigma: &Renaming) -> Result<Self>;
}

impl Rename for Formula {
    fn rename_atoms(&self, sigma: &Renaming) -> Result<Self> {
        check_atoms(self, sigma.source())?;
        Ok(sigma.formula(self))
    }
}

impl Rename for CausalTheory {
    fn rename_atoms(&self, sigma: &Renaming) -> Result<Self> {
        sigma.theory(self)
    }
}

impl Rename for Model {
    fn rename_atoms(&self, sigma: &Renaming) -> Result<Self> {
        if self.width() != sigma.source().len() {
            return Err(Error::InvalidRenaming("model is over a different universe".into()));
        }
        Ok(sigma.model(*self))
    }
}

/// Free-function form of [`Rename::rename_atoms`].
pub fn rename_atoms<T: Rename>(x: &T, sigma: &Renaming) -> Result<T> {
    x.rename_atoms(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta1() -> CausalTheory {
        CausalTheory::from_strs(["p", "q"], ["p |> p", "p |> q"]).unwrap()
    }

    #[test]
    fn parses_theory_file() {
        let text = "# sample\natoms: p q\nrule: p |> p\nrule: p |> q   # second\nrule: p |> p\n";
        let t = CausalTheory::parse(text).unwrap();
        assert_eq!(t, theta1());
        assert_eq!(t.len(), 2);
        assert_eq!(CausalTheory::parse(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn reports_line_and_column() {
        let err = CausalTheory::parse("atoms: p\nrule: p |> \n").unwrap_err();
        match err {
            Error::Parse(p) => {
                assert_eq!(p.line, Some(2));
                assert_eq!(p.offset, 11);
            }
            other => panic!("unexpected {other:?}"),
        }
        let err = CausalTheory::parse("atoms: p\nrule: p |> q\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn modal_rules_are_rejected() {
        assert!(CausalTheory::parse("atoms: p\nrule: []p |> p\n").is_err());
        assert!(CausalRule::new(Formula::atom("p"), Formula::boxed(Formula::atom("p"))).is_err());
    }

    #[test]
    fn swapping_atoms_renames_rules() {
        let t = theta1();
        let map = BTreeMap::from([("p".into(), "q".into()), ("q".into(), "p".into())]);
        let sigma = Renaming::new(t.universe(), map).unwrap();
        let renamed = rename_atoms(&t, &sigma).unwrap();
        let shown: Vec<String> = renamed.rules().iter().map(|r| r.to_string()).collect();
        assert_eq!(shown, ["q |> q", "q |> p"]);
        assert_eq!(renamed.universe(), t.universe());
    }

    #[test]
    fn identity_renaming_is_identity() {
        let t = theta1();
        let sigma = Renaming::new(t.universe(), BTreeMap::new()).unwrap();
        assert_eq!(rename_atoms(&t, &sigma).unwrap(), t);
    }

    #[test]
    fn non_bijective_renaming_is_rejected() {
        let u = Universe::new(["p", "q"]).unwrap();
        let map = BTreeMap::from([("p".to_string(), "q".to_string())]);
        assert!(matches!(
            Renaming::new(&u, map),
            Err(Error::InvalidRenaming(_))
        ));
    }
}
