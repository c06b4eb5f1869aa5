use crate::formula::Formula;
use crate::kripke::ExplanationSet;

use super::Sequent;

/// The rule applied at a proof node together with its data.
///
/// Logical rules carry their principal formula. Box-right carries the rule
/// set whose bodies and heads appear in its two premises; box-left carries
/// the full family of explanation sets indexing its premises.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Inference {
    Ax(Formula),
    BotL,
    TopR,
    LeftWeaken(Formula),
    RightWeaken(Formula),
    LeftContract(Formula),
    RightContract(Formula),
    NotL(Formula),
    NotR(Formula),
    AndL(Formula),
    AndR(Formula),
    OrL(Formula),
    OrR(Formula),
    ImpL(Formula),
    ImpR(Formula),
    BoxR {
        principal: Formula,
        set: ExplanationSet,
    },
    BoxL {
        principal: Formula,
        sets: Vec<ExplanationSet>,
    },
    Multicut {
        formula: Formula,
        left: usize,
        right: usize,
    },
}

impl Inference {
    pub fn tag(&self) -> &'static str {
        match self {
            Inference::Ax(_) => "Ax",
            Inference::BotL => "BotL",
            Inference::TopR => "TopR",
            Inference::LeftWeaken(_) => "LW",
            Inference::RightWeaken(_) => "RW",
            Inference::LeftContract(_) => "LC",
            Inference::RightContract(_) => "RC",
            Inference::NotL(_) => "NotL",
            Inference::NotR(_) => "NotR",
            Inference::AndL(_) => "AndL",
            Inference::AndR(_) => "AndR",
            Inference::OrL(_) => "OrL",
            Inference::OrR(_) => "OrR",
            Inference::ImpL(_) => "ImpL",
            Inference::ImpR(_) => "ImpR",
            Inference::BoxR { .. } => "BoxR",
            Inference::BoxL { .. } => "BoxL",
            Inference::Multicut { .. } => "Cut",
        }
    }

    /// The formula this rule introduces on the right of its conclusion.
    pub fn principal_right(&self) -> Option<&Formula> {
        match self {
            Inference::Ax(f)
            | Inference::RightWeaken(f)
            | Inference::RightContract(f)
            | Inference::NotR(f)
            | Inference::AndR(f)
            | Inference::OrR(f)
            | Inference::ImpR(f) => Some(f),
            Inference::BoxR { principal, .. } => Some(principal),
            Inference::TopR => Some(&Formula::Top),
            _ => None,
        }
    }

    /// The formula this rule introduces on the left of its conclusion.
    pub fn principal_left(&self) -> Option<&Formula> {
        match self {
            Inference::Ax(f)
            | Inference::LeftWeaken(f)
            | Inference::LeftContract(f)
            | Inference::NotL(f)
            | Inference::AndL(f)
            | Inference::OrL(f)
            | Inference::ImpL(f) => Some(f),
            Inference::BoxL { principal, .. } => Some(principal),
            Inference::BotL => Some(&Formula::Bottom),
            _ => None,
        }
    }

    /// Whether this is a connective rule (not structural, not an axiom).
    pub fn is_logical(&self) -> bool {
        matches!(
            self,
            Inference::NotL(_)
                | Inference::NotR(_)
                | Inference::AndL(_)
                | Inference::AndR(_)
                | Inference::OrL(_)
                | Inference::OrR(_)
                | Inference::ImpL(_)
                | Inference::ImpR(_)
                | Inference::BoxR { .. }
                | Inference::BoxL { .. }
        )
    }

    /// Index of a premise that does not share the conclusion's context
    /// (the head-entailment premise of box-right).
    pub(crate) fn side_premise(&self) -> Option<usize> {
        matches!(self, Inference::BoxR { .. }).then_some(1)
    }
}

/// A derivation: a conclusion, the rule that yields it, and the premises' proofs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProofTree {
    pub conclusion: Sequent,
    pub inference: Inference,
    pub premises: Vec<ProofTree>,
}

impl ProofTree {
    pub fn new(conclusion: Sequent, inference: Inference, premises: Vec<ProofTree>) -> ProofTree {
        ProofTree {
            conclusion,
            inference,
            premises,
        }
    }

    pub fn leaf(conclusion: Sequent, inference: Inference) -> ProofTree {
        ProofTree::new(conclusion, inference, Vec::new())
    }

    pub fn axiom(f: Formula) -> ProofTree {
        ProofTree::leaf(Sequent::new(vec![f.clone()], vec![f.clone()]), Inference::Ax(f))
    }

    pub fn is_cut_free(&self) -> bool {
        !matches!(self.inference, Inference::Multicut { .. })
            && self.premises.iter().all(ProofTree::is_cut_free)
    }

    pub fn cut_count(&self) -> usize {
        usize::from(matches!(self.inference, Inference::Multicut { .. }))
            + self.premises.iter().map(ProofTree::cut_count).sum::<usize>()
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::height).max().unwrap_or(0)
    }

    /// Pre-order traversal.
    pub fn nodes(&self) -> Vec<&ProofTree> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            out.push(node);
            stack.extend(node.premises.iter().rev());
        }
        out
    }

    /// Adds `left` and `right` to the conclusion by weakening, one formula per step.
    pub fn weaken(self, left: &[Formula], right: &[Formula]) -> ProofTree {
        let mut proof = self;
        for f in left {
            let conclusion = proof.conclusion.with_left(f.clone());
            proof = ProofTree::new(conclusion, Inference::LeftWeaken(f.clone()), vec![proof]);
        }
        for f in right {
            let conclusion = proof.conclusion.with_right(f.clone());
            proof = ProofTree::new(conclusion, Inference::RightWeaken(f.clone()), vec![proof]);
        }
        proof
    }

    /// Contracts duplicated formulas until the conclusion equals `target`.
    ///
    /// Every formula of the conclusion must occur in `target`, at most as
    /// often as in the conclusion.
    pub(crate) fn contract_to(self, target: &Sequent) -> ProofTree {
        let mut proof = self;
        loop {
            let extra_left = proof
                .conclusion
                .left()
                .iter()
                .find(|f| proof.conclusion.count_left(f) > target.count_left(f))
                .cloned();
            if let Some(f) = extra_left {
                assert!(target.count_left(&f) > 0, "cannot contract away {f}");
                let conclusion = proof.conclusion.without_left(&f).expect("present");
                proof = ProofTree::new(conclusion, Inference::LeftContract(f), vec![proof]);
                continue;
            }
            let extra_right = proof
                .conclusion
                .right()
                .iter()
                .find(|f| proof.conclusion.count_right(f) > target.count_right(f))
                .cloned();
            if let Some(f) = extra_right {
                assert!(target.count_right(&f) > 0, "cannot contract away {f}");
                let conclusion = proof.conclusion.without_right(&f).expect("present");
                proof = ProofTree::new(conclusion, Inference::RightContract(f), vec![proof]);
                continue;
            }
            assert_eq!(&proof.conclusion, target, "contraction cannot reach target");
            return proof;
        }
    }
}
