//! Fixed-universe bitsets used for states and action fact sets.

use std::cmp::Ordering;
use std::fmt;

/// A subset of a fact universe `{0, .., universe-1}`.
///
/// Fact `i` is bit `i`. Ordering treats the set as a binary number with
/// fact 0 as the least significant bit, so `{} < {f0} < {f1} < {f0, f1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FactSet {
    universe: u32,
    words: Box<[u64]>,
}

impl FactSet {
    pub fn empty(universe: usize) -> Self {
        FactSet {
            universe: universe as u32,
            words: vec![0; universe.div_ceil(64)].into_boxed_slice(),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for i in 0..universe {
            set.insert(i);
        }
        set
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, indices: I) -> Self {
        let mut set = Self::empty(universe);
        for i in indices {
            set.insert(i);
        }
        set
    }

    /// Builds the set whose members are the one-bits of `bits`.
    pub fn from_bits(universe: usize, bits: u64) -> Self {
        let mut set = Self::empty(universe);
        if let Some(w) = set.words.first_mut() {
            let mask = if universe >= 64 {
                u64::MAX
            } else {
                (1u64 << universe) - 1
            };
            *w = bits & mask;
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.universe as usize
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.universe() && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        assert!(
            i < self.universe(),
            "fact {i} outside universe of {}",
            self.universe
        );
        let had = self.contains(i);
        self.words[i / 64] |= 1 << (i % 64);
        !had
    }

    #[inline]
    pub fn remove(&mut self, i: usize) -> bool {
        let had = self.contains(i);
        if had {
            self.words[i / 64] &= !(1 << (i % 64));
        }
        had
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn is_subset(&self, other: &FactSet) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &FactSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & b == 0)
    }

    pub fn union(&self, other: &FactSet) -> FactSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &FactSet) -> FactSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &FactSet) -> FactSet {
        self.zip_with(other, |a, b| a & !b)
    }

    /// `(self \ del) ∪ add` without intermediate allocation.
    #[inline]
    pub fn transition(&self, del: &FactSet, add: &FactSet) -> FactSet {
        debug_assert_eq!(self.universe, del.universe);
        debug_assert_eq!(self.universe, add.universe);
        let words = self
            .words
            .iter()
            .zip(del.words.iter())
            .zip(add.words.iter())
            .map(|((s, d), a)| (s & !d) | a)
            .collect();
        FactSet {
            universe: self.universe,
            words,
        }
    }

    fn zip_with(&self, other: &FactSet, f: impl Fn(u64, u64) -> u64) -> FactSet {
        debug_assert_eq!(self.universe, other.universe);
        let words = self
            .words
            .iter()
            .zip(other.words.iter())
            .map(|(&a, &b)| f(a, b))
            .collect();
        FactSet {
            universe: self.universe,
            words,
        }
    }

    /// Member indices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + bit)
            })
        })
    }
}

impl Ord for FactSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.universe.cmp(&other.universe).then_with(|| {
            for (a, b) in self.words.iter().rev().zip(other.words.iter().rev()) {
                match a.cmp(b) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for FactSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FactSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
