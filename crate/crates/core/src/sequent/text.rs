//! Line-oriented proof serialization: one node per line, indented two
//! spaces per level, as `RULE | left ⊢ right | data`.

use std::fmt;

use crate::error::ParseError;
use crate::formula::Formula;
use crate::kripke::ExplanationSet;

use super::{Inference, ProofTree, Sequent};

impl fmt::Display for ProofTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut stack = vec![(self, 0usize)];
        while let Some((node, depth)) = stack.pop() {
            write!(
                f,
                "{:indent$}{} | {} | ",
                "",
                node.inference.tag(),
                node.conclusion.unicode(),
                indent = 2 * depth
            )?;
            write_data(f, &node.inference)?;
            writeln!(f)?;
            for p in node.premises.iter().rev() {
                stack.push((p, depth + 1));
            }
        }
        Ok(())
    }
}

fn write_data(f: &mut fmt::Formatter<'_>, inference: &Inference) -> fmt::Result {
    match inference {
        Inference::BotL | Inference::TopR => Ok(()),
        Inference::BoxR { principal, set } => write!(f, "{} ; {}", principal.unicode(), set),
        Inference::BoxL { principal, sets } => {
            write!(f, "{} ;", principal.unicode())?;
            for s in sets {
                write!(f, " {s}")?;
            }
            Ok(())
        }
        Inference::Multicut {
            formula,
            left,
            right,
        } => write!(f, "{} ; {} ; {}", formula.unicode(), left, right),
        other => write!(f, "{}", other.principal_left().or(other.principal_right()).expect("principal").unicode()),
    }
}

/// Reads a proof printed by the `Display` implementation of [`ProofTree`].
/// Errors carry the 1-based line number.
pub fn parse_proof(text: &str) -> Result<ProofTree, ParseError> {
    let mut nodes: Vec<(usize, usize, ProofTree)> = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line_no = line_no + 1;
        if line.trim().is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start_matches(' ').len();
        if indent % 2 != 0 {
            return Err(ParseError::new(indent, "indentation must be a multiple of two").at_line(line_no, 0));
        }
        let node = parse_line(&line[indent..]).map_err(|e| e.at_line(line_no, indent))?;
        nodes.push((indent / 2, line_no, node));
    }
    if nodes.is_empty() {
        return Err(ParseError::new(0, "empty proof"));
    }
    let mut pos = 0;
    let root = build(&mut nodes, &mut pos, 0)?;
    if pos != nodes.len() {
        return Err(ParseError::new(0, "unexpected node after the root").at_line(nodes[pos].1, 0));
    }
    Ok(root)
}

fn build(nodes: &mut Vec<(usize, usize, ProofTree)>, pos: &mut usize, depth: usize) -> Result<ProofTree, ParseError> {
    let (d, line_no, _) = nodes[*pos];
    if d != depth {
        return Err(ParseError::new(0, format!("expected depth {depth}, found {d}")).at_line(line_no, 0));
    }
    let mut node = std::mem::replace(
        &mut nodes[*pos].2,
        ProofTree::leaf(Sequent::new(vec![], vec![]), Inference::TopR),
    );
    *pos += 1;
    while *pos < nodes.len() && nodes[*pos].0 > depth {
        node.premises.push(build(nodes, pos, depth + 1)?);
    }
    Ok(node)
}

fn parse_line(line: &str) -> Result<ProofTree, ParseError> {
    let mut parts = line.splitn(3, " | ");
    let tag = parts.next().unwrap_or("").trim();
    let sequent_text = parts
        .next()
        .ok_or_else(|| ParseError::new(0, "expected `RULE | sequent | data`"))?;
    let data = parts.next().unwrap_or("").trim_end();
    let sequent_at = tag.len() + 3;
    let data_at = sequent_at + sequent_text.len() + 3;
    let conclusion = Sequent::parse(sequent_text).map_err(|e| shift(e, sequent_at))?;
    let formula = |text: &str, at: usize| Formula::parse(text.trim()).map_err(|e| shift(e, at));
    let inference = match tag {
        "Ax" => Inference::Ax(formula(data, data_at)?),
        "BotL" => Inference::BotL,
        "TopR" => Inference::TopR,
        "LW" => Inference::LeftWeaken(formula(data, data_at)?),
        "RW" => Inference::RightWeaken(formula(data, data_at)?),
        "LC" => Inference::LeftContract(formula(data, data_at)?),
        "RC" => Inference::RightContract(formula(data, data_at)?),
        "NotL" => Inference::NotL(formula(data, data_at)?),
        "NotR" => Inference::NotR(formula(data, data_at)?),
        "AndL" => Inference::AndL(formula(data, data_at)?),
        "AndR" => Inference::AndR(formula(data, data_at)?),
        "OrL" => Inference::OrL(formula(data, data_at)?),
        "OrR" => Inference::OrR(formula(data, data_at)?),
        "ImpL" => Inference::ImpL(formula(data, data_at)?),
        "ImpR" => Inference::ImpR(formula(data, data_at)?),
        "BoxR" => {
            let (principal, set) = data
                .split_once(" ; ")
                .ok_or_else(|| ParseError::new(data_at, "expected `formula ; {set}`"))?;
            Inference::BoxR {
                principal: formula(principal, data_at)?,
                set: parse_set(set.trim(), data_at + principal.len() + 3)?,
            }
        }
        "BoxL" => {
            let (principal, sets) = data
                .split_once(" ;")
                .ok_or_else(|| ParseError::new(data_at, "expected `formula ; {set} ...`"))?;
            let sets_at = data_at + principal.len() + 2;
            Inference::BoxL {
                principal: formula(principal, data_at)?,
                sets: sets
                    .split_whitespace()
                    .map(|s| parse_set(s, sets_at))
                    .collect::<Result<_, _>>()?,
            }
        }
        "Cut" => {
            let fields: Vec<&str> = data.split(" ; ").collect();
            if fields.len() != 3 {
                return Err(ParseError::new(data_at, "expected `formula ; m ; n`"));
            }
            let count = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| ParseError::new(data_at, format!("bad multiplicity `{s}`")))
            };
            Inference::Multicut {
                formula: formula(fields[0], data_at)?,
                left: count(fields[1])?,
                right: count(fields[2])?,
            }
        }
        other => return Err(ParseError::new(0, format!("unknown rule `{other}`"))),
    };
    Ok(ProofTree::leaf(conclusion, inference))
}

fn parse_set(text: &str, at: usize) -> Result<ExplanationSet, ParseError> {
    let inner = text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| ParseError::new(at, format!("expected `{{i,j,...}}`, found `{text}`")))?;
    let rules = if inner.is_empty() {
        Vec::new()
    } else {
        inner
            .split(',')
            .map(|i| {
                i.trim()
                    .parse::<usize>()
                    .map_err(|_| ParseError::new(at, format!("bad rule index `{i}`")))
            })
            .collect::<Result<_, _>>()?
    };
    Ok(ExplanationSet { rules })
}

fn shift(mut e: ParseError, by: usize) -> ParseError {
    e.offset += by;
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequent::prove_cut_free;
    use crate::theory::CausalTheory;

    #[test]
    fn round_trip() {
        let t = CausalTheory::from_strs(["p", "q"], ["p |> p", "p |> q"]).unwrap();
        for text in ["p |- []q", "[]q |- p", "|- []true", "p | q, !q |- p & (q -> p)"] {
            let seq = Sequent::parse(text).unwrap();
            let proof = prove_cut_free(&seq, &t).unwrap().proof().unwrap().clone();
            let printed = proof.to_string();
            assert_eq!(parse_proof(&printed).unwrap(), proof, "{printed}");
        }
    }

    #[test]
    fn golden_box_right() {
        let t = CausalTheory::from_strs(["p", "q"], ["p |> p", "p |> q"]).unwrap();
        let proof = prove_cut_free(&Sequent::parse("p |- []q").unwrap(), &t).unwrap();
        assert_eq!(
            proof.proof().unwrap().to_string(),
            "BoxR | p ⊢ □q | □q ; {1}\n  Ax | p ⊢ p | p\n  Ax | q ⊢ q | q\n"
        );
    }

    #[test]
    fn cut_round_trip() {
        let p = Formula::atom("p");
        let cut = ProofTree::new(
            Sequent::parse("p |- p").unwrap(),
            Inference::Multicut {
                formula: p.clone(),
                left: 1,
                right: 1,
            },
            vec![ProofTree::axiom(p.clone()), ProofTree::axiom(p)],
        );
        assert_eq!(parse_proof(&cut.to_string()).unwrap(), cut);
        assert!(parse_proof("Nope | p ⊢ p | p").is_err());
    }
}
