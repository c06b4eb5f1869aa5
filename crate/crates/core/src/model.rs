//! Atom universes, total valuations and bitset-backed sets of valuations.
//!
//! A valuation over `n` atoms is identified with an `n`-bit world index in
//! which the first atom is the most significant bit. Ascending world order is
//! therefore lexicographic order over the atoms with false before true.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::is_identifier;

/// Default bound on the number of atoms that may be enumerated.
pub const DEFAULT_MAX_ATOMS: usize = 20;
/// Absolute bound; a model set over this many atoms occupies 2 MiB.
pub const HARD_MAX_ATOMS: usize = 24;

/// An ordered finite set of atom names.
#[derive(Debug, Clone)]
pub struct Universe {
    atoms: Vec<String>,
    index: HashMap<String, usize>,
    max_atoms: usize,
}

impl PartialEq for Universe {
    fn eq(&self, other: &Self) -> bool {
        self.atoms == other.atoms
    }
}

impl Eq for Universe {}

impl Universe {
    pub fn new<I, S>(atoms: I) -> Result<Universe>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Universe {
            atoms: Vec::new(),
            index: HashMap::new(),
            max_atoms: DEFAULT_MAX_ATOMS,
        };
        for atom in atoms {
            out.push(atom.into())?;
        }
        Ok(out)
    }

    pub fn empty() -> Universe {
        Universe {
            atoms: Vec::new(),
            index: HashMap::new(),
            max_atoms: DEFAULT_MAX_ATOMS,
        }
    }

    pub(crate) fn push(&mut self, atom: String) -> Result<()> {
        if !is_identifier(&atom) {
            return Err(Error::InvalidAtom(atom));
        }
        if self.index.contains_key(&atom) {
            return Err(Error::DuplicateAtom(atom));
        }
        self.index.insert(atom.clone(), self.atoms.len());
        self.atoms.push(atom);
        Ok(())
    }

    /// Sets the enumeration bound, clamped to [`HARD_MAX_ATOMS`].
    pub fn with_max_atoms(mut self, limit: usize) -> Universe {
        self.max_atoms = limit.min(HARD_MAX_ATOMS);
        self
    }

    pub fn max_atoms(&self) -> usize {
        self.max_atoms
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn contains(&self, atom: &str) -> bool {
        self.index.contains_key(atom)
    }

    pub fn index_of(&self, atom: &str) -> Option<usize> {
        self.index.get(atom).copied()
    }

    /// Fails with a capacity error when the universe is too large to enumerate.
    pub fn check_capacity(&self) -> Result<()> {
        if self.atoms.len() > self.max_atoms {
            Err(Error::Capacity {
                atoms: self.atoms.len(),
                limit: self.max_atoms,
            })
        } else {
            Ok(())
        }
    }

    pub fn world_count(&self) -> usize {
        1usize << self.atoms.len()
    }

    /// The set of worlds in which atom `i` is true.
    pub fn atom_set(&self, i: usize) -> ModelSet {
        ModelSet::atom(self.atoms.len(), i)
    }
}

/// A total truth assignment over a universe, stored as a world index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Model {
    world: u32,
    width: u8,
}

impl Model {
    pub fn from_world(world: u32, width: usize) -> Model {
        debug_assert!(width <= 32 && (width == 32 || world < (1u32 << width)));
        Model {
            world,
            width: width as u8,
        }
    }

    /// Builds a model from the atoms that are true; every name must be declared.
    pub fn from_true_atoms<'a, I>(universe: &Universe, true_atoms: I) -> Result<Model>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut m = Model::from_world(0, universe.len());
        for name in true_atoms {
            let i = universe
                .index_of(name)
                .ok_or_else(|| Error::UndeclaredAtom(name.to_string()))?;
            m = m.with(i, true);
        }
        Ok(m)
    }

    /// Builds a model from a total assignment whose domain must equal the universe.
    pub fn from_assignment(universe: &Universe, assignment: &BTreeMap<String, bool>) -> Result<Model> {
        if assignment.len() != universe.len() {
            return Err(Error::Precondition(format!(
                "assignment covers {} atoms but the universe has {}",
                assignment.len(),
                universe.len()
            )));
        }
        Model::from_true_atoms(
            universe,
            assignment.iter().filter(|(_, &v)| v).map(|(k, _)| k.as_str()),
        )
        .and_then(|m| {
            match assignment.keys().find(|k| !universe.contains(k)) {
                Some(k) => Err(Error::UndeclaredAtom(k.clone())),
                None => Ok(m),
            }
        })
    }

    pub fn world(&self) -> u32 {
        self.world
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    /// Truth value of the `i`-th atom of the universe.
    pub fn value(&self, i: usize) -> bool {
        (self.world >> (self.width as usize - 1 - i)) & 1 == 1
    }

    pub fn with(self, i: usize, value: bool) -> Model {
        let bit = 1u32 << (self.width as usize - 1 - i);
        let world = if value {
            self.world | bit
        } else {
            self.world & !bit
        };
        Model { world, ..self }
    }

    pub fn get(&self, universe: &Universe, atom: &str) -> Option<bool> {
        universe.index_of(atom).map(|i| self.value(i))
    }

    pub fn assignment(&self, universe: &Universe) -> BTreeMap<String, bool> {
        universe
            .atoms()
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), self.value(i)))
            .collect()
    }

    /// Prints `p=0,q=1` in universe order.
    pub fn display<'a>(&'a self, universe: &'a Universe) -> ModelDisplay<'a> {
        ModelDisplay {
            model: self,
            universe,
        }
    }
}

pub struct ModelDisplay<'a> {
    model: &'a Model,
    universe: &'a Universe,
}

impl fmt::Display for ModelDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, atom) in self.universe.atoms().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}={}", atom, u8::from(self.model.value(i)))?;
        }
        Ok(())
    }
}

/// Every model of a universe, in lexicographic order.
pub fn enumerate_models(universe: &Universe) -> Result<Vec<Model>> {
    universe.check_capacity()?;
    let n = universe.len();
    Ok((0..universe.world_count() as u32)
        .map(|w| Model::from_world(w, n))
        .collect())
}

/// A set of worlds over a fixed number of atoms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModelSet {
    width: u8,
    words: Vec<u64>,
}

impl fmt::Debug for ModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|m| m.world())).finish()
    }
}

const PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

impl ModelSet {
    fn word_count(width: usize) -> usize {
        ((1usize << width) + 63) / 64
    }

    fn tail_mask(width: usize) -> u64 {
        let worlds = 1usize << width;
        if worlds >= 64 {
            u64::MAX
        } else {
            (1u64 << worlds) - 1
        }
    }

    pub fn empty(width: usize) -> ModelSet {
        ModelSet {
            width: width as u8,
            words: vec![0; Self::word_count(width)],
        }
    }

    pub fn full(width: usize) -> ModelSet {
        let mut words = vec![u64::MAX; Self::word_count(width)];
        *words.last_mut().expect("at least one word") &= Self::tail_mask(width);
        ModelSet {
            width: width as u8,
            words,
        }
    }

    /// Worlds in which the `i`-th of `width` atoms is true.
    pub fn atom(width: usize, i: usize) -> ModelSet {
        let bit = width - 1 - i;
        let mut words = if bit < 6 {
            vec![PATTERNS[bit]; Self::word_count(width)]
        } else {
            (0..Self::word_count(width))
                .map(|w| if (w >> (bit - 6)) & 1 == 1 { u64::MAX } else { 0 })
                .collect()
        };
        *words.last_mut().expect("at least one word") &= Self::tail_mask(width);
        ModelSet {
            width: width as u8,
            words,
        }
    }

    pub fn singleton(model: Model) -> ModelSet {
        let mut s = ModelSet::empty(model.width());
        s.insert(model);
        s
    }

    pub fn from_models<I: IntoIterator<Item = Model>>(width: usize, models: I) -> ModelSet {
        let mut s = ModelSet::empty(width);
        for m in models {
            s.insert(m);
        }
        s
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn insert(&mut self, model: Model) {
        debug_assert_eq!(model.width(), self.width());
        let w = model.world() as usize;
        self.words[w / 64] |= 1 << (w % 64);
    }

    pub fn contains(&self, model: Model) -> bool {
        self.contains_world(model.world())
    }

    pub fn contains_world(&self, world: u32) -> bool {
        let w = world as usize;
        (self.words[w / 64] >> (w % 64)) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        *self == ModelSet::full(self.width())
    }

    pub fn union(&self, other: &ModelSet) -> ModelSet {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &ModelSet) -> ModelSet {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &ModelSet) -> ModelSet {
        self.zip(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> ModelSet {
        let mut out = ModelSet {
            width: self.width,
            words: self.words.iter().map(|w| !w).collect(),
        };
        *out.words.last_mut().expect("at least one word") &= Self::tail_mask(self.width());
        out
    }

    /// `!a | b` pointwise, i.e. the worlds satisfying an implication.
    pub fn implication(&self, other: &ModelSet) -> ModelSet {
        self.complement().union(other)
    }

    pub fn union_with(&mut self, other: &ModelSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &ModelSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn is_subset(&self, other: &ModelSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &ModelSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    fn zip(&self, other: &ModelSet, op: impl Fn(u64, u64) -> u64) -> ModelSet {
        assert_eq!(self.width, other.width, "model sets over different universes");
        ModelSet {
            width: self.width,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    /// Members in ascending (lexicographic) order.
    pub fn iter(&self) -> impl Iterator<Item = Model> + '_ {
        let width = self.width();
        self.words.iter().enumerate().flat_map(move |(i, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros();
                rest &= rest - 1;
                Some(Model::from_world(i as u32 * 64 + bit, width))
            })
        })
    }

    pub fn first(&self) -> Option<Model> {
        self.iter().next()
    }

    pub fn to_vec(&self) -> Vec<Model> {
        self.iter().collect()
    }
}
