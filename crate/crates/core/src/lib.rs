//! Causal theories and their modal logic: model-theoretic semantics, the
//! canonical Kripke frame, a sequent calculus with cut elimination, an action
//! language compiler, an argumentation bridge and an S5 comparison harness.

pub mod action;
pub mod argument;
pub mod error;
pub mod formula;
pub mod kripke;
pub mod model;
pub mod semantics;
pub mod sequent;
pub mod theory;
pub mod turner;

pub use action::{ActionDomain, History};
pub use argument::{Argument, PjProof, PjSequent};
pub use error::{Error, ParseError, Result};
pub use formula::{parse_formula, Formula};
pub use kripke::{ExplanationSet, Frame, KripkeModel};
pub use model::{enumerate_models, Model, ModelSet, Universe};
pub use semantics::{ClosedSet, Verdict};
pub use sequent::{check_proof, eliminate_cuts, prove_cut_free, Inference, ProofTree, SearchResult, Sequent};
pub use theory::{CausalRule, CausalTheory, Renaming};
pub use turner::{S5Formula, S5Model, S5Theory};
