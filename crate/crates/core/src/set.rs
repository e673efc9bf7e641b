use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub(crate) const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// A set of dense vertex ids backed by a bitset.
///
/// The capacity is an upper bound on member ids, not part of the set's
/// identity: two sets with the same members compare equal regardless of
/// capacity.
#[derive(Clone, Default)]
pub struct VertexSet {
    words: Vec<u64>,
    capacity: usize,
}

impl VertexSet {
    pub fn new(capacity: usize) -> Self {
        VertexSet { words: vec![0; words_for(capacity)], capacity }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::new(n);
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * WORD;
            let count = (n - lo).min(WORD);
            *w = if count == WORD { u64::MAX } else { (1u64 << count) - 1 };
        }
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(capacity: usize, iter: I) -> Self {
        let mut s = Self::new(capacity);
        for v in iter {
            s.insert(v);
        }
        s
    }

    pub(crate) fn from_words(words: Vec<u64>, capacity: usize) -> Self {
        debug_assert_eq!(words.len(), words_for(capacity));
        VertexSet { words, capacity }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    fn grow(&mut self, v: usize) {
        if v >= self.capacity {
            self.capacity = v + 1;
            self.words.resize(words_for(self.capacity), 0);
        }
    }

    pub fn insert(&mut self, v: usize) -> bool {
        self.grow(v);
        let (w, b) = (v / WORD, v % WORD);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.capacity {
            return false;
        }
        let (w, b) = (v / WORD, v % WORD);
        let present = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        present
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.capacity && self.words[v / WORD] & (1 << (v % WORD)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter { words: &self.words, idx: 0, cur: self.words.first().copied().unwrap_or(0) }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn max(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * WORD + (WORD - 1 - w.leading_zeros() as usize))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        let capacity = self.capacity.max(other.capacity);
        let words = (0..words_for(capacity))
            .map(|i| {
                let a = self.words.get(i).copied().unwrap_or(0);
                let b = other.words.get(i).copied().unwrap_or(0);
                f(a, b)
            })
            .collect();
        VertexSet { words, capacity }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn intersection_len(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words.iter().zip(other.words.iter()).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, &a)| a & !other.words.get(i).copied().unwrap_or(0) == 0)
    }
}

impl PartialEq for VertexSet {
    fn eq(&self, other: &Self) -> bool {
        let n = self.words.len().max(other.words.len());
        (0..n).all(|i| {
            self.words.get(i).copied().unwrap_or(0) == other.words.get(i).copied().unwrap_or(0)
        })
    }
}

impl Eq for VertexSet {}

impl Hash for VertexSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let last = self.words.iter().rposition(|&w| w != 0).map_or(0, |i| i + 1);
        self.words[..last].hash(state);
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<usize> = Vec::deserialize(d)?;
        let cap = v.iter().max().map_or(0, |m| m + 1);
        Ok(VertexSet::from_iter(cap, v))
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut s = VertexSet::new(130);
        assert!(s.insert(3));
        assert!(!s.insert(3));
        s.insert(64);
        s.insert(129);
        assert_eq!(s.to_vec(), vec![3, 64, 129]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.max(), Some(129));
        assert!(s.remove(64));
        assert!(!s.contains(64));
        assert!(!s.contains(1000));
    }

    #[test]
    fn equality_ignores_capacity() {
        let a = VertexSet::from_iter(10, [1, 2]);
        let b = VertexSet::from_iter(200, [1, 2]);
        assert_eq!(a, b);
        assert!(a.is_subset(&b) && b.is_subset(&a));
    }

    #[test]
    fn full_set() {
        for n in [0, 1, 63, 64, 65, 130] {
            assert_eq!(VertexSet::full(n).len(), n);
            assert_eq!(VertexSet::full(n).to_vec(), (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn set_algebra() {
        let a = VertexSet::from_iter(70, [1, 2, 65]);
        let b = VertexSet::from_iter(10, [2, 3]);
        assert_eq!(a.union(&b).to_vec(), vec![1, 2, 3, 65]);
        assert_eq!(a.intersection(&b).to_vec(), vec![2]);
        assert_eq!(a.difference(&b).to_vec(), vec![1, 65]);
        assert_eq!(a.intersection_len(&b), 1);
        assert!(!a.is_disjoint(&b));
    }
}
