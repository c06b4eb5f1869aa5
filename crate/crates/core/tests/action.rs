use std::collections::{BTreeMap, BTreeSet};

use causal_core::action::{yale_shooting, ActionDomain, Effect, Literal, RuleKind};
use causal_core::semantics::is_causally_explained;
use causal_core::enumerate_models;
use proptest::prelude::*;

const FLUENTS: [&str; 2] = ["f", "g"];
const ACTIONS: [&str; 2] = ["a", "b"];

fn literal(fluents: usize) -> impl Strategy<Value = Literal> {
    (0..fluents, any::<bool>()).prop_map(|(i, positive)| Literal {
        fluent: FLUENTS[i].to_string(),
        positive,
    })
}

/// Literals over distinct fluents.
fn consistent(fluents: usize, max: usize) -> impl Strategy<Value = Vec<Literal>> {
    prop::collection::vec(literal(fluents), 0..=max).prop_map(|ls| {
        let mut seen = BTreeSet::new();
        ls.into_iter().filter(|l| seen.insert(l.fluent.clone())).collect()
    })
}

fn domain() -> impl Strategy<Value = ActionDomain> {
    (1..=2usize, 0..=2usize, 1..=2usize).prop_flat_map(|(nf, na, horizon)| {
        let effect = (0..na.max(1), consistent(nf, 1), consistent(nf, 2)).prop_map(|(a, pre, post)| Effect {
            action: ACTIONS[a].to_string(),
            pre,
            post,
        });
        let effects = if na == 0 {
            Just(Vec::new()).boxed()
        } else {
            prop::collection::vec(effect, 0..=3).boxed()
        };
        let occurrences = prop::collection::btree_set((0..na.max(1), 0..horizon), 0..=na * horizon);
        let init = prop::collection::vec(any::<bool>(), nf).prop_map(|values| {
            values
                .into_iter()
                .enumerate()
                .map(|(i, v)| Literal {
                    fluent: FLUENTS[i].to_string(),
                    positive: v,
                })
                .collect::<Vec<_>>()
        });
        (effects, occurrences, init, 0..=nf).prop_map(move |(effects, occurrences, init, keep)| ActionDomain {
            fluents: FLUENTS[..nf].iter().map(|s| s.to_string()).collect(),
            actions: ACTIONS[..na].iter().map(|s| s.to_string()).collect(),
            effects,
            occurrences: if na == 0 {
                BTreeSet::new()
            } else {
                occurrences.into_iter().map(|(a, t)| (ACTIONS[a].to_string(), t)).collect()
            },
            init: init.into_iter().take(keep).collect(),
            horizon,
        })
    })
}

/// Forward simulation: `None` when simultaneous effects conflict or the
/// initial state is incomplete.
fn simulate(d: &ActionDomain) -> Option<Vec<BTreeMap<String, bool>>> {
    if d.init.len() < d.fluents.len() {
        return None;
    }
    let mut state: BTreeMap<String, bool> = d.init.iter().map(|l| (l.fluent.clone(), l.positive)).collect();
    let mut out = vec![state.clone()];
    for t in 0..d.horizon {
        let mut next = state.clone();
        let mut set: BTreeMap<String, bool> = BTreeMap::new();
        for e in &d.effects {
            let fires = d.occurrences.contains(&(e.action.clone(), t))
                && e.pre.iter().all(|l| state[&l.fluent] == l.positive);
            if !fires {
                continue;
            }
            for l in &e.post {
                if set.insert(l.fluent.clone(), l.positive).is_some_and(|v| v != l.positive) {
                    return None;
                }
                next.insert(l.fluent.clone(), l.positive);
            }
        }
        state = next;
        out.push(state.clone());
    }
    Some(out)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn histories_match_forward_simulation(d in domain()) {
        let histories = d.solve().unwrap();
        match simulate(&d) {
            None => prop_assert!(histories.is_empty()),
            Some(states) => {
                prop_assert_eq!(histories.len(), 1);
                let h = &histories[0];
                for f in &d.fluents {
                    let expected: Vec<bool> = states.iter().map(|s| s[f]).collect();
                    prop_assert_eq!(h.fluent(f).unwrap(), expected);
                }
                for a in &d.actions {
                    let expected: Vec<bool> = (0..d.horizon).map(|t| d.occurrences.contains(&(a.clone(), t))).collect();
                    prop_assert_eq!(h.action(a).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn solving_equals_filtering_all_models(d in domain()) {
        let compiled = d.compile().unwrap();
        let t = &compiled.theory;
        let brute: Vec<_> = enumerate_models(t.universe())
            .unwrap()
            .into_iter()
            .filter(|&m| is_causally_explained(m, t).unwrap())
            .collect();
        let solved: Vec<_> = d.solve().unwrap().iter().map(|h| h.model()).collect();
        prop_assert_eq!(solved, brute);
        prop_assert_eq!(compiled.kinds.len(), t.len());
        prop_assert_eq!(
            compiled.count(RuleKind::Occurrence) + compiled.count(RuleKind::NonOccurrence),
            d.actions.len() * d.horizon
        );
        prop_assert_eq!(compiled.count(RuleKind::Persistence), 2 * d.fluents.len() * d.horizon);
    }
}

#[test]
fn shooting_domain_file_matches_builtin() {
    let text = "fluents: alive loaded\nactions: wait shoot\naction shoot: pre loaded post !alive & !loaded\noccurs: wait@0 shoot@1\ninit: alive loaded\nhorizon: 2\n";
    assert_eq!(ActionDomain::parse(text).unwrap(), yale_shooting());
}

#[test]
fn longer_horizons_keep_inertia() {
    let mut d = yale_shooting();
    d.horizon = 3;
    let hs = d.solve().unwrap();
    assert_eq!(hs.len(), 1);
    assert_eq!(hs[0].fluent("alive").unwrap(), vec![true, true, false, false]);
    assert_eq!(hs[0].action("wait").unwrap(), vec![true, false, false]);
}
