//! Deterministic formula grids, random theories and sequents shared by the
//! integration suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use causal_core::{CausalRule, CausalTheory, Formula, Model, Sequent, Universe};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ATOMS: [&str; 3] = ["p", "q", "r"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn universe() -> Universe {
    Universe::new(ATOMS).unwrap()
}

pub fn f(text: &str) -> Formula {
    Formula::parse(text).unwrap()
}

fn leaves() -> Vec<Formula> {
    let mut out: Vec<Formula> = ATOMS.iter().map(|a| Formula::atom(*a)).collect();
    out.push(Formula::Top);
    out.push(Formula::Bottom);
    out
}

/// Every formula of depth at most one over the atoms, `⊤` and `⊥`.
pub fn shallow_formulas() -> Vec<Formula> {
    let leaves = leaves();
    let mut out = leaves.clone();
    out.extend(leaves.iter().cloned().map(Formula::not));
    for a in &leaves {
        for b in &leaves {
            out.push(Formula::and(a.clone(), b.clone()));
            out.push(Formula::or(a.clone(), b.clone()));
            out.push(Formula::implies(a.clone(), b.clone()));
        }
    }
    out
}

/// Formulas combined pairwise on each side of the two-by-two sequents.
pub fn pair_pool(modal: bool) -> Vec<Formula> {
    let texts: &[&str] = if modal {
        &["p", "!q", "p & q", "p | q", "[]p", "[]!p", "[](p | q)", "![]q"]
    } else {
        &["p", "q", "!p", "p & q", "p | q", "p -> q", "!(p & q)", "(p | q) -> r"]
    };
    texts.iter().map(|t| f(t)).collect()
}

pub fn random_nonmodal(rng: &mut ChaCha8Rng, depth: u32) -> Formula {
    let leaves = leaves();
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.8) {
            leaves[rng.gen_range(0..3)].clone()
        } else {
            leaves[rng.gen_range(3..5)].clone()
        };
    }
    match rng.gen_range(0..4) {
        0 => Formula::not(random_nonmodal(rng, depth - 1)),
        1 => Formula::and(random_nonmodal(rng, depth - 1), random_nonmodal(rng, depth - 1)),
        2 => Formula::or(random_nonmodal(rng, depth - 1), random_nonmodal(rng, depth - 1)),
        _ => Formula::implies(random_nonmodal(rng, depth - 1), random_nonmodal(rng, depth - 1)),
    }
}

/// A formula of depth at most `depth` above a single layer of boxes over
/// nonmodal formulas of depth at most one.
pub fn random_one_layer(rng: &mut ChaCha8Rng, depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.5) {
            Formula::boxed(random_nonmodal(rng, 1))
        } else {
            random_nonmodal(rng, 0)
        };
    }
    match rng.gen_range(0..4) {
        0 => Formula::not(random_one_layer(rng, depth - 1)),
        1 => Formula::and(random_one_layer(rng, depth - 1), random_one_layer(rng, depth - 1)),
        2 => Formula::or(random_one_layer(rng, depth - 1), random_one_layer(rng, depth - 1)),
        _ => Formula::implies(random_one_layer(rng, depth - 1), random_one_layer(rng, depth - 1)),
    }
}

fn side(rng: &mut ChaCha8Rng, modal: bool) -> Vec<Formula> {
    let n = rng.gen_range(0..=2);
    (0..n)
        .map(|_| if modal { random_one_layer(rng, 2) } else { random_nonmodal(rng, 2) })
        .collect()
}

fn pairs(pool: &[Formula]) -> Vec<Vec<Formula>> {
    let mut out = Vec::new();
    for i in 0..pool.len() {
        for j in i + 1..pool.len() {
            out.push(vec![pool[i].clone(), pool[j].clone()]);
        }
    }
    out
}

/// The sequent grid: every sequent with at most one formula per side drawn
/// from the shallow formulas (boxed as well when `modal`), every two-by-two
/// sequent over the pair pool, and a fixed sample of random sequents of
/// depth at most two with at most two formulas per side.
pub fn sequent_grid(modal: bool, random: usize) -> Vec<Sequent> {
    let mut singles: Vec<Vec<Formula>> = vec![vec![]];
    let shallow = shallow_formulas();
    singles.extend(shallow.iter().map(|g| vec![g.clone()]));
    if modal {
        singles.extend(shallow.iter().map(|g| vec![Formula::boxed(g.clone())]));
    }
    let mut out = Vec::new();
    for l in &singles {
        for r in &singles {
            out.push(Sequent::new(l.clone(), r.clone()));
        }
    }
    let two = pairs(&pair_pool(modal));
    for l in &two {
        for r in &two {
            out.push(Sequent::new(l.clone(), r.clone()));
        }
    }
    let mut rng = rng(if modal { 31 } else { 17 });
    for _ in 0..random {
        let l = side(&mut rng, modal);
        let r = side(&mut rng, modal);
        out.push(Sequent::new(l, r));
    }
    out
}

/// Distinct formulas occurring in a list of sequents.
pub fn formulas_of(grid: &[Sequent]) -> Vec<Formula> {
    let set: BTreeSet<&Formula> = grid.iter().flat_map(|s| s.left().iter().chain(s.right())).collect();
    set.into_iter().cloned().collect()
}

pub fn random_theory(rng: &mut ChaCha8Rng, universe: &Universe, max_rules: usize) -> CausalTheory {
    let n = rng.gen_range(0..=max_rules);
    let atoms = universe.atoms();
    let rules = (0..n)
        .map(|_| {
            let body = random_nonmodal(rng, 1).rename(&renaming_into(atoms));
            let head = random_nonmodal(rng, 1).rename(&renaming_into(atoms));
            CausalRule::new(body, head).unwrap()
        })
        .collect();
    CausalTheory::new(universe.clone(), rules).unwrap()
}

/// Sends `p`, `q`, `r` onto the given atoms, cycling if there are fewer.
fn renaming_into(atoms: &[String]) -> std::collections::BTreeMap<String, String> {
    ATOMS
        .iter()
        .enumerate()
        .map(|(i, a)| (a.to_string(), atoms[i % atoms.len()].clone()))
        .collect()
}

/// `n` random theories over `p`, `q`, `r` with at most three rules; the
/// first is always empty.
pub fn theories(n: usize, seed: u64) -> Vec<CausalTheory> {
    let mut rng = rng(seed);
    let u = universe();
    let mut out = vec![CausalTheory::empty(u.clone())];
    while out.len() < n {
        out.push(random_theory(&mut rng, &u, 3));
    }
    out
}

/// The literals true or false in `m`.
pub fn literals(universe: &Universe, m: Model) -> Vec<Formula> {
    universe
        .atoms()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let atom = Formula::atom(a.clone());
            if m.value(i) {
                atom
            } else {
                Formula::not(atom)
            }
        })
        .collect()
}

pub fn shuffled<T: Clone>(rng: &mut ChaCha8Rng, items: &[T]) -> Vec<T> {
    let mut v = items.to_vec();
    v.shuffle(rng);
    v
}
