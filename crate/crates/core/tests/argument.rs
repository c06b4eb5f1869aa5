use std::collections::BTreeSet;

use causal_core::argument::{
    check_grounds_are_unions, check_pj_proof, expand_modality, extract_pj_proof, modal_translation, parse_basics,
    verify_rule_soundness,
};
use causal_core::kripke::{modal_entails_semantic, semantic_value};
use causal_core::semantics::classical_entails;
use causal_core::{Argument, CausalRule, CausalTheory, Formula, PjSequent, Universe};
use proptest::prelude::*;

const ATOMS: [&str; 3] = ["a", "b", "p"];

fn nonmodal(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        6 => (0..3usize).prop_map(|i| Formula::atom(ATOMS[i])),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bottom),
    ];
    leaf.prop_recursive(depth, 6, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
        ]
    })
}

fn argument() -> impl Strategy<Value = Argument> {
    (nonmodal(1), prop::collection::btree_set(nonmodal(1), 0..=2))
        .prop_map(|(head, grounds)| Argument::new(head, grounds).unwrap())
}

fn basics() -> impl Strategy<Value = BTreeSet<Argument>> {
    prop::collection::btree_set(argument(), 0..=3)
}

fn modal(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![nonmodal(1), nonmodal(1).prop_map(Formula::boxed)];
    leaf.prop_recursive(depth, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::boxed),
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::or(a, b)),
        ]
    })
}

fn universe() -> Universe {
    Universe::new(ATOMS).unwrap()
}

fn theory(basics: &BTreeSet<Argument>) -> CausalTheory {
    let rules = basics
        .iter()
        .map(|a| CausalRule::new(Formula::conj(a.grounds.iter().cloned()), a.head.clone()).unwrap())
        .collect();
    CausalTheory::new(universe(), rules).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn extraction_succeeds_exactly_on_valid_consistent_queries(
        basics in basics(),
        grounds in prop::collection::btree_set(nonmodal(1), 0..=2),
        head in nonmodal(1),
    ) {
        let t = theory(&basics);
        let gamma: Vec<Formula> = grounds.iter().cloned().collect();
        let valid = modal_entails_semantic(&gamma, &[Formula::boxed(head.clone())], &t).unwrap();
        let consistent = !classical_entails(&universe(), &gamma, &[]).unwrap();
        let extracted = extract_pj_proof(&grounds, &head, &basics);
        let expected = head == Formula::Top || (valid && consistent);
        prop_assert_eq!(extracted.is_ok(), expected, "{:?}", extracted.as_ref().err());
        if let Ok(proof) = extracted {
            prop_assert_eq!(&proof.goal().head, &head);
            prop_assert_eq!(&proof.goal().grounds, &grounds);
            prop_assert_eq!(proof.basics(), &basics);
            prop_assert!(check_pj_proof(&proof).is_ok());
            prop_assert!(check_grounds_are_unions(&proof).is_ok());
            for node in proof.nodes() {
                prop_assert!(verify_rule_soundness(node).unwrap(), "{}", node.rule.tag());
            }
        }
    }

    #[test]
    fn translation_agrees_with_the_direct_theory(basics in basics(), goal in argument()) {
        let (t, seq) = modal_translation(&PjSequent { basics: basics.clone(), goal: goal.clone() }).unwrap();
        let direct = theory(&basics);
        let translated = modal_entails_semantic(seq.left(), seq.right(), &t).unwrap();
        let expected = modal_entails_semantic(
            &goal.grounds.iter().cloned().collect::<Vec<_>>(),
            &[Formula::boxed(goal.head.clone())],
            &direct,
        )
        .unwrap();
        prop_assert_eq!(translated, expected);
    }

    #[test]
    fn expansion_preserves_values(basics in basics(), extra in argument(), f in modal(2)) {
        let base = theory(&basics);
        let rule = CausalRule::new(Formula::conj(extra.grounds.iter().cloned()), extra.head.clone()).unwrap();
        let extended = base.with_rule(rule.clone()).unwrap();
        let expanded = expand_modality(&f, &base, &rule).unwrap();
        prop_assert_eq!(semantic_value(&expanded, &base).unwrap(), semantic_value(&f, &extended).unwrap());
    }
}

#[test]
fn basics_files_parse_and_extract() {
    let basics = parse_basics("# witnesses\narg: p <- a\narg: p <- b\n\narg: q <-\n").unwrap();
    assert_eq!(basics.len(), 3);
    let grounds: BTreeSet<Formula> = [Formula::or(Formula::atom("a"), Formula::atom("b"))].into();
    let proof = extract_pj_proof(&grounds, &Formula::atom("p"), &basics).unwrap();
    assert!(proof.uses_classical_or());
    assert!(check_pj_proof(&proof).is_ok());

    let none = extract_pj_proof(&[Formula::atom("c")].into(), &Formula::atom("p"), &basics);
    assert!(none.is_err());
}

#[test]
fn inconsistent_grounds_are_refused() {
    let basics = parse_basics("arg: p <- a\n").unwrap();
    let grounds: BTreeSet<Formula> = [Formula::atom("a"), Formula::not(Formula::atom("a"))].into();
    assert!(extract_pj_proof(&grounds, &Formula::atom("p"), &basics).is_err());
}
