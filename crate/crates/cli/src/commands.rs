use std::fmt;
use std::path::Path;
use std::rc::Rc;

use anyhow::{Context, Result};
use causal_core::action::{yale_shooting, ActionDomain, History};
use causal_core::argument::{check_pj_proof, extract_pj_proof, modal_translation, parse_basics};
use causal_core::kripke::Frame;
use causal_core::sequent::{check_proof_in, Prover, SearchResult};
use causal_core::turner::{nonmonotonicity_witness, turner_consequence, turner_explained_models, S5Theory};
use causal_core::{Argument, CausalTheory, Formula, Model, PjSequent, Sequent, Universe};
use serde_json::{json, Value};

use crate::report::Report;

/// The proof search and the canonical model gave different answers.
#[derive(Debug)]
pub struct Disagreement(pub String);

impl fmt::Display for Disagreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "proof search and semantics disagree: {}", self.0)
    }
}

impl std::error::Error for Disagreement {}

/// 3 for a disagreement, 2 for unreadable or out-of-range input, 1 otherwise.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    use causal_core::Error as E;
    if e.downcast_ref::<Disagreement>().is_some() {
        return 3;
    }
    if e.downcast_ref::<std::io::Error>().is_some() {
        return 2;
    }
    match e.downcast_ref::<E>() {
        Some(
            E::Parse(_)
            | E::UndeclaredAtom(_)
            | E::InvalidAtom(_)
            | E::DuplicateAtom(_)
            | E::ModalFormula(_)
            | E::Capacity { .. }
            | E::RuleCapacity { .. }
            | E::InvalidDomain(_)
            | E::InvalidS5Model(_),
        ) => 2,
        _ => 1,
    }
}

fn read(path: &Path, report: &mut Report) -> Result<String> {
    let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    report.input(&path.display().to_string(), &bytes);
    String::from_utf8(bytes)
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
        .with_context(|| format!("{} is not UTF-8", path.display()))
}

fn valuation(u: &Universe, m: Model) -> Value {
    let map: serde_json::Map<String, Value> = u
        .atoms()
        .iter()
        .enumerate()
        .map(|(i, a)| (a.clone(), Value::Bool(m.value(i))))
        .collect();
    Value::Object(map)
}

fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r.iter().enumerate().map(|(c, s)| format!("{s:<w$}", w = widths[c])).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn load_theory(path: &Path, max_atoms: usize, report: &mut Report) -> Result<CausalTheory> {
    let text = read(path, report)?;
    let theory = CausalTheory::parse(&text).with_context(|| path.display().to_string())?;
    Ok(theory.with_max_atoms(max_atoms))
}

pub fn models(path: &Path, max_atoms: usize) -> Result<Report> {
    let mut report = Report::new("models");
    let theory = load_theory(path, max_atoms, &mut report)?;
    let u = theory.universe();
    let frame = Frame::new(&theory)?;
    let mut rows = vec![vec!["model".to_string(), "explained".into(), "successors".into()]];
    let mut entries = Vec::new();
    let mut explained = 0;
    for m in causal_core::enumerate_models(u)? {
        let succ = frame.successors(m);
        let is_explained = succ.len() == 1 && succ.contains(m);
        explained += usize::from(is_explained);
        rows.push(vec![
            m.display(u).to_string(),
            if is_explained { "yes" } else { "no" }.into(),
            succ.len().to_string(),
        ]);
        entries.push(json!({
            "model": m.display(u).to_string(),
            "valuation": valuation(u, m),
            "explained": is_explained,
            "successors": succ.len(),
        }));
    }
    report.line("atoms", u.atoms().join(" "));
    report.line("rules", theory.len());
    report.line("models", table(&rows));
    report.line("explained", format!("{explained} of {}", entries.len()));
    report.set("atoms", u.atoms().to_vec());
    report.set("rules", theory.rules().iter().map(|r| r.to_string()).collect::<Vec<_>>());
    report.set("models", entries);
    report.set("explained_count", explained);
    Ok(report)
}

/// Runs the prover and the canonical model on one sequent and cross-checks
/// them. Returns the search result once both agree and any proof checks.
fn decide(theory: &CausalTheory, s: &Sequent) -> Result<(SearchResult, usize)> {
    let frame = Rc::new(Frame::new(theory)?);
    let counter = frame.countermodels(s.left(), s.right())?;
    let mut prover = Prover::from_frame(frame.clone());
    let result = prover.prove(s)?;
    match &result {
        SearchResult::Proof(p) => {
            if !counter.is_empty() {
                return Err(Disagreement(format!("{s} has a proof and {} countermodels", counter.len())).into());
            }
            if let Err(e) = check_proof_in(p, &frame) {
                return Err(Disagreement(format!("the proof of {s} fails checking: {e}")).into());
            }
        }
        SearchResult::Countermodel(m) => {
            if !counter.contains(*m) {
                return Err(Disagreement(format!(
                    "search reports {} as a countermodel to {s}, semantics does not",
                    m.display(theory.universe())
                ))
                .into());
            }
        }
    }
    Ok((result, counter.len()))
}

pub fn entail(path: &Path, sequent: &str, proof_out: Option<&Path>, max_atoms: usize) -> Result<Report> {
    let mut report = Report::new("entail");
    let theory = load_theory(path, max_atoms, &mut report)?;
    let u = theory.universe();
    let s = Sequent::parse_in(sequent, u).context("sequent")?;
    let (result, countermodels) = decide(&theory, &s)?;
    report.line("sequent", s.unicode());
    report.set("sequent", s.to_string());
    report.set("countermodel_count", countermodels);
    match &result {
        SearchResult::Proof(p) => {
            report.line("verdict", "PROVABLE");
            report.line("semantics", "valid in the canonical model");
            report.line("proof", p);
            report.set("verdict", "PROVABLE");
            report.set("proof", p.to_string());
            if let Some(out) = proof_out {
                std::fs::write(out, p.to_string()).with_context(|| format!("cannot write {}", out.display()))?;
            }
        }
        SearchResult::Countermodel(m) => {
            report.line("verdict", "NOT PROVABLE");
            report.line("semantics", format!("{countermodels} countermodels in the canonical model"));
            report.line("countermodel", m.display(u));
            report.set("verdict", "NOT PROVABLE");
            report.set("countermodel", m.display(u).to_string());
            report.set("countermodel_valuation", valuation(u, *m));
        }
    }
    Ok(report)
}

fn history_json(h: &History) -> Value {
    let d = h.domain();
    let fluents: serde_json::Map<String, Value> =
        d.fluents.iter().map(|f| (f.clone(), json!(h.fluent(f).unwrap_or_default()))).collect();
    let actions: serde_json::Map<String, Value> =
        d.actions.iter().map(|a| (a.clone(), json!(h.action(a).unwrap_or_default()))).collect();
    json!({ "fluents": fluents, "actions": actions, "table": h.render() })
}

fn report_histories(report: &mut Report, domain: &ActionDomain, max_atoms: usize) -> Result<()> {
    let compiled = domain.compile()?;
    let histories = domain.solve_within(max_atoms)?;
    report.line("atoms", compiled.theory.universe().len());
    report.line("rules", compiled.theory.len());
    let completion = compiled.uses_completion();
    report.line(
        "non-occurrence completion",
        if completion { "yes (!a_t |> !a_t for undeclared occurrences)" } else { "no" },
    );
    report.line("histories", histories.len());
    for (i, h) in histories.iter().enumerate() {
        let table = h.render();
        report.line(&format!("history {}", i + 1), if table.is_empty() { "(no fluents or actions)".into() } else { table });
    }
    report.set("atoms", compiled.theory.universe().len());
    report.set("rules", compiled.theory.len());
    report.set("non_occurrence_completion", completion);
    report.set("history_count", histories.len());
    report.set("histories", histories.iter().map(history_json).collect::<Vec<_>>());
    Ok(())
}

pub fn solve(path: &Path, max_atoms: usize) -> Result<Report> {
    let mut report = Report::new("solve");
    let text = read(path, &mut report)?;
    let domain = ActionDomain::parse(&text).with_context(|| path.display().to_string())?;
    report_histories(&mut report, &domain, max_atoms)?;
    Ok(report)
}

pub fn demo_ysp(max_atoms: usize) -> Result<Report> {
    let mut report = Report::new("demo-ysp");
    report_histories(&mut report, &yale_shooting(), max_atoms)?;
    Ok(report)
}

pub fn pj(path: &Path, head: &str, grounds: &str, max_atoms: usize) -> Result<Report> {
    let mut report = Report::new("pj");
    let text = read(path, &mut report)?;
    let basics = parse_basics(&text).with_context(|| path.display().to_string())?;
    let goal = Argument::parse(&format!("{head} <- {grounds}")).context("goal")?;
    let seq = PjSequent { basics: basics.clone(), goal: goal.clone() };
    let (theory, translated) = modal_translation(&seq)?;
    let theory = theory.with_max_atoms(max_atoms);
    let (result, _) = decide(&theory, &translated)?;
    report.line("query", &seq);
    report.line("translation", theory.to_text());
    report.line("sequent", translated.unicode());
    report.set("query", seq.to_string());
    report.set("theory", theory.to_text());
    report.set("sequent", translated.to_string());
    match result {
        SearchResult::Countermodel(m) => {
            report.line("verdict", "NOT PROVABLE");
            report.line("countermodel", m.display(theory.universe()));
            report.set("verdict", "NOT PROVABLE");
            report.set("countermodel", m.display(theory.universe()).to_string());
        }
        SearchResult::Proof(_) => {
            report.line("verdict", "PROVABLE");
            report.set("verdict", "PROVABLE");
            match extract_pj_proof(&goal.grounds, &goal.head, &basics) {
                Ok(proof) => {
                    check_pj_proof(&proof).map_err(|e| Disagreement(format!("extracted argument proof: {e}")))?;
                    report.line("argument proof", &proof);
                    report.set("argument_proof", proof.to_string());
                }
                Err(e) => {
                    report.line("argument proof", format!("unavailable ({e})"));
                    report.set("argument_proof", Value::Null);
                    report.set("extraction_error", e.to_string());
                }
            }
        }
    }
    Ok(report)
}

fn model_list(u: &Universe, ms: &[Model]) -> String {
    let items: Vec<String> = ms.iter().map(|m| format!("{{{}}}", m.display(u))).collect();
    format!("[{}]", items.join(", "))
}

pub fn turner(path: Option<&Path>, query: Option<&str>, witness: bool) -> Result<Report> {
    let mut report = Report::new("turner");
    if let Some(path) = path {
        let text = read(path, &mut report)?;
        let theory = S5Theory::parse(&text).with_context(|| path.display().to_string())?;
        let u = theory.universe();
        let explained = turner_explained_models(&theory)?;
        report.line("atoms", u.atoms().join(" "));
        report.line("axioms", theory.axioms().len());
        report.line("explained models", model_list(u, &explained));
        report.set("atoms", u.atoms().to_vec());
        report.set("axioms", theory.axioms().iter().map(|a| a.to_string()).collect::<Vec<_>>());
        report.set(
            "explained_models",
            explained.iter().map(|m| m.display(u).to_string()).collect::<Vec<_>>(),
        );
        if let Some(q) = query {
            let f = Formula::parse(q).context("query")?;
            let verdict = turner_consequence(&theory, &f)?;
            report.line("query", &f);
            report.line("explained", verdict.holds);
            report.set("query", f.to_string());
            report.set("explained", verdict.holds);
            report.set("vacuous", verdict.vacuous);
        }
    }
    if witness {
        let w = nonmonotonicity_witness()?;
        report.line("witness", &w);
        report.set("witness", w.to_string());
        report.set("nonmonotonic", w.is_witness());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Disagreement("x".into()).into()), 3);
        let parse: anyhow::Error = causal_core::Error::from(causal_core::ParseError::new(0, "bad")).into();
        assert_eq!(exit_code(&parse.context("file")), 2);
        let capacity: anyhow::Error = causal_core::Error::Capacity { atoms: 30, limit: 24 }.into();
        assert_eq!(exit_code(&capacity), 2);
        assert_eq!(exit_code(&anyhow::anyhow!("other")), 1);
    }

    #[test]
    fn tables_pad_columns() {
        let rows = vec![vec!["a".to_string(), "bb".into()], vec!["ccc".into(), "d".into()]];
        assert_eq!(table(&rows), "a    bb\nccc  d\n");
    }
}
