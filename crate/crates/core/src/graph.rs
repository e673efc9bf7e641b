//! Simple undirected graphs over dense vertex ids, plus the local statistics
//! used by the testers: non-edges in a neighborhood, induced `P3` counts and
//! edit accounting.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::{words_for, VertexSet, WORD};

/// Symmetric, irreflexive adjacency stored as one bitset row per vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    stride: usize,
    rows: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let stride = words_for(n);
        Graph { n, stride, rows: vec![0; n * stride] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        if n >= 3 {
            for u in 0..n {
                g.add_edge(u, (u + 1) % n);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 1..n {
            g.add_edge(u - 1, u);
        }
        g
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let mut g = Self::empty(leaves + 1);
        for v in 1..=leaves {
            g.add_edge(0, v);
        }
        g
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Self::empty(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.check(u)?;
            g.check(v)?;
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub(crate) fn check(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    #[inline]
    pub(crate) fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.stride..(v + 1) * self.stride]
    }

    /// Panics on out-of-range ids or a self-loop.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n && u != v, "bad edge {u}-{v}");
        self.rows[u * self.stride + v / WORD] |= 1 << (v % WORD);
        self.rows[v * self.stride + u / WORD] |= 1 << (u % WORD);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "bad pair {u}-{v}");
        self.rows[u * self.stride + v / WORD] &= !(1 << (v % WORD));
        self.rows[v * self.stride + u / WORD] &= !(1 << (u % WORD));
    }

    pub fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        if present {
            self.add_edge(u, v)
        } else {
            self.remove_edge(u, v)
        }
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.rows[u * self.stride + v / WORD] & (1 << (v % WORD)) != 0
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of neighbors of `v` inside `set`.
    pub fn degree_in(&self, v: usize, set: &VertexSet) -> usize {
        self.row(v)
            .iter()
            .zip(set.words())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v).iter().enumerate().flat_map(|(i, &w)| BitIter(w).map(move |b| i * WORD + b))
    }

    pub fn neighbor_set(&self, v: usize) -> VertexSet {
        VertexSet::from_words(self.row(v).to_vec(), self.n)
    }

    /// `N_A(v)`: neighbors of `v` inside `set`.
    pub fn neighbors_in(&self, v: usize, set: &VertexSet) -> VertexSet {
        self.neighbor_set(v).intersection(set)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn complement(&self) -> Graph {
        let mut h = Graph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    h.add_edge(u, v);
                }
            }
        }
        h
    }

    pub fn is_clique(&self, set: &VertexSet) -> bool {
        set.iter().all(|u| {
            let mut others = set.clone();
            others.remove(u);
            others.is_subset(&self.neighbor_set(u))
        })
    }

    /// The subgraph induced by `s` under the order-preserving relabeling;
    /// the second component maps new ids to original ids.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<(Graph, Vec<usize>)> {
        let map = s.to_vec();
        if let Some(&v) = map.last() {
            self.check(v)?;
        }
        let mut h = Graph::empty(map.len());
        for (i, &u) in map.iter().enumerate() {
            for (j, &v) in map.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    h.add_edge(i, j);
                }
            }
        }
        Ok((h, map))
    }

    /// `p_G(v)`: the number of non-adjacent pairs inside `N(v)`.
    pub fn nonedges_in_neighborhood(&self, v: usize) -> Result<u64> {
        self.check(v)?;
        let nb = self.neighbor_set(v);
        let d = nb.len() as u64;
        let inner: u64 = nb.iter().map(|a| self.degree_in(a, &nb) as u64).sum::<u64>() / 2;
        Ok(d * d.saturating_sub(1) / 2 - inner)
    }

    /// `q_A(u)`: induced paths `u - a - w` with middle vertex `a` in `a_set`.
    pub fn count_p3_through(&self, a_set: &VertexSet, u: usize) -> Result<u64> {
        self.check(u)?;
        let mut closed = self.neighbor_set(u);
        closed.insert(u);
        let mut total = 0u64;
        for a in self.neighbor_set(u).intersection(a_set).iter() {
            total += self.neighbor_set(a).difference(&closed).len() as u64;
        }
        Ok(total)
    }

    /// `|E(self) △ E(other)|`.
    pub fn symmetric_difference_count(&self, other: &Graph) -> Result<usize> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        let total: usize =
            self.rows.iter().zip(&other.rows).map(|(a, b)| (a ^ b).count_ones() as usize).sum();
        Ok(total / 2)
    }

    /// Parses the edge-list format: a header line `n m` followed by `m`
    /// lines `u v` with `u < v`. Blank lines and `#` comments are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or(Error::Parse { line: 0, msg: "empty input".into() })?;
        let [n, m] = parse_pair(hl, header)?;
        let mut g = Graph::empty(n);
        let mut seen = 0usize;
        for (line, l) in lines {
            let [u, v] = parse_pair(line, l)?;
            let bad = |msg: String| Error::Parse { line, msg };
            if u == v {
                return Err(bad(format!("self-loop at {u}")));
            }
            if u > v {
                return Err(bad(format!("edge {u} {v} must be listed with u < v")));
            }
            if v >= n {
                return Err(bad(format!("vertex {v} out of range for n = {n}")));
            }
            if g.has_edge(u, v) {
                return Err(bad(format!("duplicate edge {u} {v}")));
            }
            g.add_edge(u, v);
            seen += 1;
        }
        if seen != m {
            return Err(Error::Parse { line: hl, msg: format!("header announces {m} edges, found {seen}") });
        }
        Ok(g)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edge_count());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

fn parse_pair(line: usize, text: &str) -> Result<[usize; 2]> {
    let mut it = text.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it.next().ok_or(Error::Parse { line, msg: "expected two integers".into() })?;
        tok.parse().map_err(|_| Error::Parse { line, msg: format!("not an integer: {tok:?}") })
    };
    let pair = [next()?, next()?];
    if it.next().is_some() {
        return Err(Error::Parse { line, msg: "trailing tokens".into() });
    }
    Ok(pair)
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=", self.n)?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

pub(crate) struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// Uniform `m`-subset of `0..n`, sampled without replacement.
pub fn sample_subset<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<VertexSet> {
    if m > n {
        return Err(Error::SampleTooLarge { n, m });
    }
    Ok(VertexSet::from_iter(n, rand::seq::index::sample(rng, n, m)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EditKind {
    Add,
    Delete,
}

/// A set of pair edits relative to a base graph. Each unordered pair occurs
/// at most once; `Add` pairs are non-edges of the base, `Delete` pairs edges.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditSet {
    pairs: BTreeMap<(usize, usize), EditKind>,
}

impl EditSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// The edits turning `base` into `target`.
    pub fn between(base: &Graph, target: &Graph) -> Result<EditSet> {
        if base.n() != target.n() {
            return Err(Error::SizeMismatch { left: base.n(), right: target.n() });
        }
        let mut pairs = BTreeMap::new();
        for u in 0..base.n() {
            for (i, (a, b)) in base.row(u).iter().zip(target.row(u)).enumerate() {
                for bit in BitIter(a ^ b) {
                    let v = i * WORD + bit;
                    if v > u {
                        let kind = if a & (1 << bit) != 0 { EditKind::Delete } else { EditKind::Add };
                        pairs.insert((u, v), kind);
                    }
                }
            }
        }
        Ok(EditSet { pairs })
    }

    /// Toggles the pair `{u, v}` relative to `base`; toggling twice cancels.
    pub fn toggle(&mut self, base: &Graph, u: usize, v: usize) {
        let key = (u.min(v), u.max(v));
        if self.pairs.remove(&key).is_none() {
            let kind = if base.has_edge(u, v) { EditKind::Delete } else { EditKind::Add };
            self.pairs.insert(key, kind);
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.pairs.contains_key(&(u.min(v), u.max(v)))
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), EditKind)> + '_ {
        self.pairs.iter().map(|(&p, &k)| (p, k))
    }

    pub fn count(&self, kind: EditKind) -> usize {
        self.pairs.values().filter(|&&k| k == kind).count()
    }

    /// Applies the edits, checking that each one is consistent with `base`.
    pub fn apply(&self, base: &Graph) -> Result<Graph> {
        let mut g = base.clone();
        for (&(u, v), &kind) in &self.pairs {
            base.check(u)?;
            base.check(v)?;
            let ok = match kind {
                EditKind::Add => !base.has_edge(u, v),
                EditKind::Delete => base.has_edge(u, v),
            };
            if !ok {
                return Err(Error::Precondition(format!("edit {kind:?} on {u}-{v} is inconsistent with the base graph")));
            }
            g.set_edge(u, v, kind == EditKind::Add);
        }
        Ok(g)
    }
}
