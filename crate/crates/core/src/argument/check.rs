//! Rule-by-rule checking of argumentation proofs.

use std::collections::BTreeSet;
use std::fmt;

use crate::formula::Formula;
use crate::model::Universe;
use crate::semantics::classical_entails;

use super::{or_ec_grounds, with, Argument, PjProof, PjRule};

/// The first node that does not instantiate its rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PjCheckError {
    /// Premise indices from the root to the offending node.
    pub path: Vec<usize>,
    pub rule: &'static str,
    pub reason: String,
}

impl fmt::Display for PjCheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {:?}: {}", self.rule, self.path, self.reason)
    }
}

impl std::error::Error for PjCheckError {}

impl From<PjCheckError> for crate::error::Error {
    fn from(e: PjCheckError) -> Self {
        crate::error::Error::InvalidProof(e.to_string())
    }
}

/// Checks every node; classical side conditions of `OrEC` are decided by
/// truth tables over their atoms.
pub fn check_pj_proof(t: &PjProof) -> Result<(), PjCheckError> {
    let mut path = Vec::new();
    check(t, &mut path)
}

fn check(t: &PjProof, path: &mut Vec<usize>) -> Result<(), PjCheckError> {
    check_node(t).map_err(|reason| PjCheckError {
        path: path.clone(),
        rule: t.rule.tag(),
        reason,
    })?;
    for (i, p) in t.premises.iter().enumerate() {
        path.push(i);
        check(p, path)?;
        path.pop();
    }
    Ok(())
}

fn expect(cond: bool, reason: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(reason())
    }
}

fn check_node(t: &PjProof) -> Result<(), String> {
    let basics = t.basics();
    let goal = t.goal();
    for arg in basics.iter().chain(std::iter::once(goal)) {
        arg.check_nonmodal().map_err(|e| e.to_string())?;
    }
    let arity = match t.rule {
        PjRule::Axiom | PjRule::TopI => 0,
        PjRule::AndI | PjRule::NotE | PjRule::ImpE | PjRule::OrEC { .. } => 2,
        PjRule::OrE => 3,
        _ => 1,
    };
    expect(t.premises.len() == arity, || {
        format!("expected {arity} premises, found {}", t.premises.len())
    })?;
    let prem = |i: usize| t.premises[i].goal();
    let same_basics = |i: usize| {
        expect(t.premises[i].basics() == basics, || {
            format!("premise {i} has different basic arguments")
        })
    };
    let extended_basics = |i: usize, arg: Argument| {
        let want = with(basics, arg.clone());
        expect(*t.premises[i].basics() == want, || {
            format!("premise {i} must extend the basic arguments by exactly {arg}")
        })
    };
    let same_grounds = |i: usize| {
        expect(prem(i).grounds == goal.grounds, || {
            format!("premise {i} has grounds different from the conclusion")
        })
    };
    let head_is = |want: &Formula, what: &str| {
        expect(goal.head == *want, || format!("conclusion head should be {what}: `{want}`"))
    };
    let union = |a: &BTreeSet<Formula>, b: &BTreeSet<Formula>| -> BTreeSet<Formula> { a.union(b).cloned().collect() };
    let grounds_are = |want: BTreeSet<Formula>| {
        expect(goal.grounds == want, || {
            let items: Vec<String> = want.iter().map(|g| g.to_string()).collect();
            format!("conclusion grounds should be {{{}}}", items.join(", "))
        })
    };

    match &t.rule {
        PjRule::Axiom => expect(basics.contains(goal), || format!("{goal} is not a basic argument")),
        PjRule::TopI => expect(goal.head == Formula::Top && goal.grounds.is_empty(), || {
            "conclusion must be (true, {})".into()
        }),
        PjRule::AndI => {
            same_basics(0)?;
            same_basics(1)?;
            head_is(&Formula::and(prem(0).head.clone(), prem(1).head.clone()), "the conjunction")?;
            grounds_are(union(&prem(0).grounds, &prem(1).grounds))
        }
        PjRule::AndE1 | PjRule::AndE2 => {
            same_basics(0)?;
            same_grounds(0)?;
            let Formula::And(l, r) = &prem(0).head else {
                return Err("premise head is not a conjunction".into());
            };
            let want = if t.rule == PjRule::AndE1 { l } else { r };
            head_is(want, "the conjunct")
        }
        PjRule::OrI1 | PjRule::OrI2 => {
            same_basics(0)?;
            same_grounds(0)?;
            let Formula::Or(l, r) = &goal.head else {
                return Err("conclusion head is not a disjunction".into());
            };
            let disjunct = if t.rule == PjRule::OrI1 { l } else { r };
            expect(**disjunct == prem(0).head, || "premise head is not the disjunct".into())
        }
        PjRule::OrE => {
            same_basics(0)?;
            let Formula::Or(l, r) = &prem(0).head else {
                return Err("major premise head is not a disjunction".into());
            };
            let g = &prem(0).grounds;
            extended_basics(1, Argument { head: (**l).clone(), grounds: g.clone() })?;
            extended_basics(2, Argument { head: (**r).clone(), grounds: g.clone() })?;
            expect(prem(1).head == goal.head && prem(2).head == goal.head, || {
                "case heads must equal the conclusion head".into()
            })?;
            grounds_are(union(&prem(1).grounds, &prem(2).grounds))
        }
        PjRule::NotI => {
            let Formula::Not(p) = &goal.head else {
                return Err("conclusion head is not a negation".into());
            };
            extended_basics(0, Argument::bare((**p).clone()))?;
            same_grounds(0)?;
            expect(prem(0).head == Formula::Bottom, || "premise head must be false".into())
        }
        PjRule::NotE => {
            same_basics(0)?;
            same_basics(1)?;
            expect(prem(1).head == Formula::not(prem(0).head.clone()), || {
                "second premise must negate the first".into()
            })?;
            head_is(&Formula::Bottom, "false")?;
            grounds_are(union(&prem(0).grounds, &prem(1).grounds))
        }
        PjRule::ImpI => {
            let Formula::Implies(p, q) = &goal.head else {
                return Err("conclusion head is not an implication".into());
            };
            extended_basics(0, Argument::bare((**p).clone()))?;
            same_grounds(0)?;
            expect(prem(0).head == **q, || "premise head must be the consequent".into())
        }
        PjRule::ImpE => {
            same_basics(0)?;
            same_basics(1)?;
            expect(
                prem(1).head == Formula::implies(prem(0).head.clone(), goal.head.clone()),
                || "second premise must be the implication from the first to the conclusion".into(),
            )?;
            grounds_are(union(&prem(0).grounds, &prem(1).grounds))
        }
        PjRule::Efq => {
            same_basics(0)?;
            same_grounds(0)?;
            expect(prem(0).head == Formula::Bottom, || "premise head must be false".into())
        }
        PjRule::Raa => {
            extended_basics(0, Argument::bare(Formula::not(goal.head.clone())))?;
            same_grounds(0)?;
            expect(prem(0).head == Formula::Bottom, || "premise head must be false".into())
        }
        PjRule::OrEC { side, left, right } => {
            same_basics(0)?;
            same_basics(1)?;
            expect(prem(0).head == goal.head && prem(1).head == goal.head, || {
                "case heads must equal the conclusion head".into()
            })?;
            grounds_are(or_ec_grounds(side, left, right, &prem(0).grounds, &prem(1).grounds))?;
            let disjunction = Formula::or(
                Formula::conj(left.iter().cloned()),
                Formula::conj(right.iter().cloned()),
            );
            let side: Vec<Formula> = side.iter().cloned().collect();
            let mut atoms = BTreeSet::new();
            for f in side.iter().chain(std::iter::once(&disjunction)) {
                f.collect_atoms(&mut atoms);
            }
            let universe = Universe::new(atoms).map_err(|e| e.to_string())?;
            let valid = classical_entails(&universe, &side, std::slice::from_ref(&disjunction))
                .map_err(|e| e.to_string())?;
            expect(valid, || format!("side grounds do not classically entail {disjunction}"))
        }
    }
}

/// For proofs without `OrEC`, every node's grounds must be a union of
/// ground sets of that node's basic arguments. Returns the path of the
/// first node that violates this.
pub fn check_grounds_are_unions(t: &PjProof) -> Result<(), Vec<usize>> {
    fn walk(t: &PjProof, path: &mut Vec<usize>) -> Result<(), Vec<usize>> {
        let grounds = &t.goal().grounds;
        let covered: BTreeSet<&Formula> = t
            .basics()
            .iter()
            .filter(|b| b.grounds.is_subset(grounds))
            .flat_map(|b| b.grounds.iter())
            .collect();
        if covered.len() != grounds.len() {
            return Err(path.clone());
        }
        for (i, p) in t.premises.iter().enumerate() {
            path.push(i);
            walk(p, path)?;
            path.pop();
        }
        Ok(())
    }
    if t.uses_classical_or() {
        return Ok(());
    }
    walk(t, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arg(text: &str) -> Argument {
        Argument::parse(text).unwrap()
    }

    fn theta() -> BTreeSet<Argument> {
        [arg("p <- g1"), arg("q <- g2")].into_iter().collect()
    }

    #[test]
    fn axiom_and_conjunction() {
        let t = theta();
        let ax = PjProof::axiom(&t, arg("p <- g1"));
        assert_eq!(check_pj_proof(&ax), Ok(()));
        let pq = PjProof::and_i(ax.clone(), PjProof::axiom(&t, arg("q <- g2")));
        assert_eq!(check_pj_proof(&pq), Ok(()));
        assert_eq!(check_grounds_are_unions(&pq), Ok(()));

        let mut bad = pq.clone();
        bad.sequent.goal.grounds = [Formula::atom("g1")].into_iter().collect();
        let err = check_pj_proof(&bad).unwrap_err();
        assert_eq!((err.path.clone(), err.rule), (vec![], "AndI"));

        let mut bad_leaf = pq;
        bad_leaf.premises[1].rule = PjRule::TopI;
        assert_eq!(check_pj_proof(&bad_leaf).unwrap_err().path, vec![1]);
    }

    #[test]
    fn hypothetical_rules() {
        let t = theta();
        let hyp = Argument::bare(Formula::atom("p"));
        let inner = PjProof::axiom(&super::with(&t, hyp.clone()), hyp.clone());
        let imp = PjProof::imp_i(&t, Formula::atom("p"), inner);
        assert_eq!(check_pj_proof(&imp), Ok(()));
        assert_eq!(imp.goal(), &arg("p -> p <-"));

        let mut wrong = imp.clone();
        wrong.premises[0].sequent.basics = t.clone();
        assert!(check_pj_proof(&wrong).is_err());
    }

    #[test]
    fn classical_or_side_condition() {
        let t: BTreeSet<Argument> = [arg("r <- a"), arg("r <- b")].into_iter().collect();
        let set = |xs: &[&str]| xs.iter().map(|x| Formula::atom(*x)).collect::<BTreeSet<_>>();
        let good = PjProof::or_ec(
            [Formula::parse("a | b").unwrap()].into_iter().collect(),
            set(&["a"]),
            set(&["b"]),
            PjProof::axiom(&t, arg("r <- a")),
            PjProof::axiom(&t, arg("r <- b")),
        );
        assert_eq!(good.goal(), &arg("r <- a | b"));
        assert_eq!(check_pj_proof(&good), Ok(()));
        let weaker = PjProof::or_ec(
            set(&["a"]),
            set(&["a"]),
            set(&["c"]),
            PjProof::axiom(&t, arg("r <- a")),
            PjProof::axiom(&t, arg("r <- b")),
        );
        assert!(check_pj_proof(&weaker).is_ok(), "a entails a | c");
        let bad = PjProof::or_ec(
            set(&["c"]),
            set(&["a"]),
            set(&["b"]),
            PjProof::axiom(&t, arg("r <- a")),
            PjProof::axiom(&t, arg("r <- b")),
        );
        assert!(check_pj_proof(&bad).unwrap_err().reason.contains("entail"));
    }
}
