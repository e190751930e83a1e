//! World universes and bitset-backed sets of worlds.

use std::collections::HashMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// A finite set of world indices.
///
/// Trailing zero words are always trimmed, so two sets with the same members
/// compare equal regardless of the universe they were built for.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WorldSet {
    words: SmallVec<[u64; 2]>,
}

impl WorldSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(i: usize) -> Self {
        let mut s = Self::new();
        s.insert(i);
        s
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        let mut s = Self::new();
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    /// Builds the set whose members are the set bits of `mask`.
    pub fn from_mask(mask: u64) -> Self {
        let mut words = SmallVec::new();
        if mask != 0 {
            words.push(mask);
        }
        Self { words }
    }

    /// The set as a bitmask; `None` if it contains an index ≥ 64.
    pub fn to_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, i: usize) {
        let (w, b) = (i / WORD, i % WORD);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << b;
    }

    pub fn remove(&mut self, i: usize) {
        let (w, b) = (i / WORD, i % WORD);
        if w < self.words.len() {
            self.words[w] &= !(1 << b);
            self.trim();
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        let (w, b) = (i / WORD, i % WORD);
        self.words.get(w).is_some_and(|x| x & (1 << b) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn union(&self, other: &Self) -> Self {
        let (long, short) = if self.words.len() >= other.words.len() { (self, other) } else { (other, self) };
        let mut words = long.words.clone();
        for (a, b) in words.iter_mut().zip(short.words.iter()) {
            *a |= b;
        }
        Self { words }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut s = Self { words: self.words.iter().zip(other.words.iter()).map(|(a, b)| a & b).collect() };
        s.trim();
        s
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut words = self.words.clone();
        for (a, b) in words.iter_mut().zip(other.words.iter()) {
            *a &= !b;
        }
        let mut s = Self { words };
        s.trim();
        s
    }

    /// `|self ∩ other|` without materializing the intersection.
    pub fn intersection_len(&self, other: &Self) -> usize {
        self.words.iter().zip(other.words.iter()).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().enumerate().all(|(i, w)| {
            let o = other.words.get(i).copied().unwrap_or(0);
            w & !o == 0
        })
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD + b)
                }
            })
        })
    }

    /// Image of the set under an index map.
    pub fn map(&self, f: impl Fn(usize) -> usize) -> Self {
        self.iter().map(f).collect()
    }

    /// All subsets of `self` with exactly `k` members, in a fixed order.
    pub fn subsets_of_size(&self, k: usize) -> Vec<WorldSet> {
        let members: Vec<usize> = self.iter().collect();
        let n = members.len();
        let mut out = Vec::new();
        if k > n {
            return out;
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(idx.iter().map(|&i| members[i]).collect());
            let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
                return out;
            };
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    /// All subsets of `self`, ordered by the binary counter over its members.
    pub fn subsets(&self) -> Vec<WorldSet> {
        let members: Vec<usize> = self.iter().collect();
        assert!(members.len() < 32, "refusing to enumerate 2^{} subsets", members.len());
        (0u64..1 << members.len())
            .map(|bits| members.iter().enumerate().filter(|(j, _)| bits & (1 << j) != 0).map(|(_, &m)| m).collect())
            .collect()
    }
}

impl FromIterator<usize> for WorldSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = Self::new();
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// The worlds of a model: unique names kept in lexicographic order, so world
/// `i` is always the `i`-th smallest name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Universe {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        names.sort();
        if let Some(pair) = names.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::invalid_model(format!("duplicate world `{}`", pair[0])));
        }
        let index = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        Ok(Self { names, index })
    }

    /// Worlds named `w0, w1, ..` (zero padded so the numeric and
    /// lexicographic orders agree).
    pub fn numbered(n: usize) -> Self {
        let width = n.saturating_sub(1).to_string().len();
        Self::new((0..n).map(|i| format!("w{i:0width$}"))).expect("distinct names")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.get(name).ok_or_else(|| Error::UnknownWorld(name.to_string()))
    }

    pub fn full(&self) -> WorldSet {
        WorldSet::full(self.len())
    }

    pub fn set_of<I, S>(&self, names: I) -> Result<WorldSet>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        names.into_iter().map(|n| self.index_of(n.as_ref())).collect()
    }

    pub fn names_of(&self, set: &WorldSet) -> Vec<String> {
        set.iter().map(|i| self.names[i].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a: WorldSet = [0, 3, 70].into_iter().collect();
        let b: WorldSet = [3, 4].into_iter().collect();
        assert_eq!(a.len(), 3);
        assert!(a.contains(70) && !a.contains(69));
        assert_eq!(a.intersection(&b), WorldSet::singleton(3));
        assert_eq!(a.intersection_len(&b), 1);
        assert_eq!(a.union(&b).iter().collect::<Vec<_>>(), vec![0, 3, 4, 70]);
        assert_eq!(a.difference(&b).iter().collect::<Vec<_>>(), vec![0, 70]);
        assert!(WorldSet::singleton(3).is_subset(&a));
        assert!(!b.is_subset(&a));
    }

    #[test]
    fn trimming_makes_equality_structural() {
        let mut a = WorldSet::singleton(100);
        a.remove(100);
        assert_eq!(a, WorldSet::new());
        assert!(a.is_empty());
        assert_eq!(a.to_mask(), Some(0));
        let b = WorldSet::singleton(1).intersection(&WorldSet::singleton(90));
        assert_eq!(b, WorldSet::new());
    }

    #[test]
    fn combinations() {
        let s = WorldSet::full(4);
        assert_eq!(s.subsets_of_size(2).len(), 6);
        assert_eq!(s.subsets_of_size(0), vec![WorldSet::new()]);
        assert_eq!(s.subsets_of_size(4), vec![s.clone()]);
        assert!(s.subsets_of_size(5).is_empty());
        assert_eq!(s.subsets().len(), 16);
        assert_eq!(WorldSet::new().subsets(), vec![WorldSet::new()]);
    }

    #[test]
    fn universe_sorts_and_rejects_duplicates() {
        let u = Universe::new(["w", "u1", "u2"]).unwrap();
        assert_eq!(u.names(), ["u1", "u2", "w"]);
        assert_eq!(u.index_of("w").unwrap(), 2);
        assert!(matches!(u.index_of("x"), Err(Error::UnknownWorld(_))));
        assert!(Universe::new(["a", "a"]).is_err());
        assert_eq!(Universe::numbered(11).name(2), "w02");
    }
}
