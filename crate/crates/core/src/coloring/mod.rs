//! Set coloring: per-vertex lists of color sets with pairwise inclusion
//! constraints, the sampling tester and the proper-coloring search.

mod extension;
mod search;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{sample_subset, Graph};
use crate::set::VertexSet;

pub use extension::ExtensionState;
pub use search::{find_proper_coloring, has_proper_coloring};

/// A subset of the palette `[k]`, as a bitmask; color `i` is bit `i - 1`.
pub type ColorSet = u64;

pub fn palette(k: usize) -> ColorSet {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

#[inline]
pub fn size(c: ColorSet) -> u32 {
    c.count_ones()
}

/// The pair `(m_uv(c), M_uv(c))` for an ordered pair and a color of `u`.
pub trait ConstraintTable: Send + Sync + fmt::Debug {
    fn bounds(&self, u: usize, v: usize, c: ColorSet) -> (ColorSet, ColorSet);
}

/// Finite map keyed by `(u, v, color)`; missing entries mean `(∅, [k])`.
#[derive(Clone, Debug, Default)]
pub struct ExplicitConstraints {
    full: ColorSet,
    entries: BTreeMap<(usize, usize, ColorSet), (ColorSet, ColorSet)>,
}

impl ExplicitConstraints {
    pub fn new(k: usize) -> Self {
        ExplicitConstraints { full: palette(k), entries: BTreeMap::new() }
    }

    pub fn set(&mut self, u: usize, v: usize, c: ColorSet, m: ColorSet, big_m: ColorSet) {
        if m == 0 && big_m == self.full {
            self.entries.remove(&(u, v, c));
        } else {
            self.entries.insert((u, v, c), (m, big_m));
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl ConstraintTable for ExplicitConstraints {
    fn bounds(&self, u: usize, v: usize, c: ColorSet) -> (ColorSet, ColorSet) {
        self.entries.get(&(u, v, c)).copied().unwrap_or((0, self.full))
    }
}

/// The k-colorability encoding: singleton lists, `M = [k] \ c` on edges.
#[derive(Debug)]
pub struct KColorConstraints {
    graph: Graph,
    full: ColorSet,
}

impl ConstraintTable for KColorConstraints {
    fn bounds(&self, u: usize, v: usize, c: ColorSet) -> (ColorSet, ColorSet) {
        if self.graph.has_edge(u, v) {
            (0, self.full & !c)
        } else {
            (0, self.full)
        }
    }
}

#[derive(Debug)]
struct Relabeled {
    inner: Arc<dyn ConstraintTable>,
    map: Vec<usize>,
}

impl ConstraintTable for Relabeled {
    fn bounds(&self, u: usize, v: usize, c: ColorSet) -> (ColorSet, ColorSet) {
        self.inner.bounds(self.map[u], self.map[v], c)
    }
}

#[derive(Clone, Debug)]
pub struct SetColoringInstance {
    k: usize,
    lists: Vec<Vec<ColorSet>>,
    table: Arc<dyn ConstraintTable>,
}

impl SetColoringInstance {
    /// Builds and validates an instance: lists nonempty, colors within
    /// the palette, and `m ⊆ M` on every `(u, v, c)`.
    pub fn new(k: usize, lists: Vec<Vec<ColorSet>>, table: Arc<dyn ConstraintTable>) -> Result<Self> {
        let inst = Self::new_unchecked(k, lists, table)?;
        inst.validate()?;
        Ok(inst)
    }

    /// Checks the list invariants only; the `m ⊆ M` scan is quadratic and
    /// skipped here.
    pub fn new_unchecked(k: usize, lists: Vec<Vec<ColorSet>>, table: Arc<dyn ConstraintTable>) -> Result<Self> {
        if k == 0 || k > 64 {
            return Err(Error::InvalidParameter(format!("palette size {k} outside 1..=64")));
        }
        for (v, list) in lists.iter().enumerate() {
            if list.is_empty() {
                return Err(Error::InvalidParameter(format!("empty list at vertex {v}")));
            }
            if let Some(&c) = list.iter().find(|&&c| c & !palette(k) != 0) {
                return Err(Error::ColorNotInList { vertex: v, color: c });
            }
        }
        Ok(SetColoringInstance { k, lists, table })
    }

    pub fn validate(&self) -> Result<()> {
        for u in 0..self.n() {
            for v in 0..self.n() {
                if u == v {
                    continue;
                }
                for &c in &self.lists[u] {
                    let (m, big_m) = self.table.bounds(u, v, c);
                    if m & !big_m != 0 {
                        return Err(Error::InvalidParameter(format!(
                            "m not contained in M for ({u}, {v}, {c:#b})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn full(&self) -> ColorSet {
        palette(self.k)
    }

    pub fn list(&self, v: usize) -> &[ColorSet] {
        &self.lists[v]
    }

    /// `p = max_v |L_v|`.
    pub fn max_list_len(&self) -> usize {
        self.lists.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn bounds(&self, u: usize, v: usize, c: ColorSet) -> (ColorSet, ColorSet) {
        self.table.bounds(u, v, c)
    }

    /// One orientation of the pair condition: `m_uv(cu) ⊆ cv ⊆ M_uv(cu)`.
    #[inline]
    pub fn directed_ok(&self, u: usize, cu: ColorSet, v: usize, cv: ColorSet) -> bool {
        let (m, big_m) = self.table.bounds(u, v, cu);
        m & !cv == 0 && cv & !big_m == 0
    }

    #[inline]
    pub fn pair_ok_unchecked(&self, u: usize, cu: ColorSet, v: usize, cv: ColorSet) -> bool {
        self.directed_ok(u, cu, v, cv) && self.directed_ok(v, cv, u, cu)
    }

    /// Both orientations of the pair condition hold.
    pub fn pair_ok(&self, u: usize, cu: ColorSet, v: usize, cv: ColorSet) -> Result<bool> {
        self.check_color(u, cu)?;
        self.check_color(v, cv)?;
        Ok(self.pair_ok_unchecked(u, cu, v, cv))
    }

    pub fn check_color(&self, v: usize, c: ColorSet) -> Result<()> {
        if v >= self.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n() });
        }
        if self.lists[v].contains(&c) {
            Ok(())
        } else {
            Err(Error::ColorNotInList { vertex: v, color: c })
        }
    }

    /// Unordered conflicting pairs of a total coloring.
    pub fn conflicting_pairs(&self, phi: &[Option<ColorSet>]) -> Result<Vec<(usize, usize)>> {
        if phi.len() != self.n() {
            return Err(Error::SizeMismatch { left: phi.len(), right: self.n() });
        }
        let mut colors = Vec::with_capacity(self.n());
        for (v, c) in phi.iter().enumerate() {
            let c = c.ok_or(Error::PartialColoring(v))?;
            self.check_color(v, c)?;
            colors.push(c);
        }
        let mut out = Vec::new();
        for u in 0..self.n() {
            for v in u + 1..self.n() {
                if !self.pair_ok_unchecked(u, colors[u], v, colors[v]) {
                    out.push((u, v));
                }
            }
        }
        Ok(out)
    }

    pub fn count_conflicts(&self, phi: &[Option<ColorSet>]) -> Result<usize> {
        self.conflicting_pairs(phi).map(|p| p.len())
    }

    /// Convenience for total colorings given without `Option`.
    pub fn count_conflicts_total(&self, phi: &[ColorSet]) -> Result<usize> {
        let wrapped: Vec<Option<ColorSet>> = phi.iter().copied().map(Some).collect();
        self.count_conflicts(&wrapped)
    }

    /// The instance induced on `x`, relabeled in increasing id order.
    pub fn restrict(&self, x: &VertexSet) -> Result<(SetColoringInstance, Vec<usize>)> {
        let map = x.to_vec();
        if let Some(&v) = map.last() {
            if v >= self.n() {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n() });
            }
        }
        let lists = map.iter().map(|&v| self.lists[v].clone()).collect();
        let table = Arc::new(Relabeled { inner: self.table.clone(), map: map.clone() });
        Ok((SetColoringInstance { k: self.k, lists, table }, map))
    }

    /// Copies every non-default constraint entry into an explicit table.
    pub fn to_file(&self) -> InstanceFile {
        let full = self.full();
        let mut constraints = Vec::new();
        for u in 0..self.n() {
            for v in 0..self.n() {
                if u == v {
                    continue;
                }
                for &c in &self.lists[u] {
                    let (m, big_m) = self.table.bounds(u, v, c);
                    if m != 0 || big_m != full {
                        constraints.push(ConstraintEntry { u, v, color: c, m, big_m });
                    }
                }
            }
        }
        InstanceFile { k: self.k, lists: self.lists.clone(), constraints }
    }

    pub fn from_file(file: &InstanceFile) -> Result<Self> {
        let mut table = ExplicitConstraints::new(file.k);
        for e in &file.constraints {
            if e.u >= file.lists.len() || e.v >= file.lists.len() {
                return Err(Error::VertexOutOfRange { vertex: e.u.max(e.v), n: file.lists.len() });
            }
            table.set(e.u, e.v, e.color, e.m, e.big_m);
        }
        Self::new(file.k, file.lists.clone(), Arc::new(table))
    }
}

/// JSON-compatible instance serialization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub k: usize,
    pub lists: Vec<Vec<ColorSet>>,
    #[serde(default)]
    pub constraints: Vec<ConstraintEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintEntry {
    pub u: usize,
    pub v: usize,
    pub color: ColorSet,
    pub m: ColorSet,
    #[serde(rename = "M")]
    pub big_m: ColorSet,
}

/// Singleton lists `{i}` for `i` in `[k]`; edge pairs forbid equal colors.
pub fn encode_k_colorability(g: &Graph, k: usize) -> Result<SetColoringInstance> {
    if k == 0 || k > 64 {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..=64")));
    }
    let list: Vec<ColorSet> = (0..k).map(|i| 1u64 << i).collect();
    let table = KColorConstraints { graph: g.clone(), full: palette(k) };
    SetColoringInstance::new_unchecked(k, vec![list; g.n()], Arc::new(table))
}

/// `max(ceil(36 k ln(max(p, 2)) / ε²), ceil(1/ε))`.
pub fn tester_sample_size(eps: f64, k: usize, p: usize) -> Result<usize> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon {eps} outside (0, 1)")));
    }
    if k == 0 || p == 0 {
        return Err(Error::InvalidParameter("k and p must be positive".into()));
    }
    let formula = 36.0 * k as f64 * (p.max(2) as f64).ln() / (eps * eps);
    Ok((formula.ceil() as usize).max((1.0 / eps).ceil() as usize))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Clone, Debug, Serialize)]
pub struct ColoringOutcome {
    pub verdict: Verdict,
    pub sample: Vec<usize>,
    /// A proper coloring of the sample, in sample order, when accepted.
    pub coloring: Option<Vec<ColorSet>>,
    pub search_nodes: u64,
}

/// Samples `X` and rejects iff the induced instance has no proper coloring.
pub fn coloring_tester<R: Rng + ?Sized>(
    inst: &SetColoringInstance,
    eps: f64,
    sample_override: Option<usize>,
    node_limit: u64,
    rng: &mut R,
) -> Result<ColoringOutcome> {
    let m = match sample_override {
        Some(m) => m,
        None => tester_sample_size(eps, inst.k(), inst.max_list_len().max(1))?,
    };
    let m = if m > inst.n() {
        log::debug!("sample size {m} exceeds n = {}, using all vertices", inst.n());
        inst.n()
    } else {
        m
    };
    let x = sample_subset(inst.n(), m, rng)?;
    coloring_test_on(inst, &x, node_limit)
}

/// The deterministic half of the tester, on a fixed sample.
pub fn coloring_test_on(inst: &SetColoringInstance, x: &VertexSet, node_limit: u64) -> Result<ColoringOutcome> {
    let (sub, map) = inst.restrict(x)?;
    let (found, nodes) = search::search_with_stats(&sub, node_limit)?;
    Ok(ColoringOutcome {
        verdict: if found.is_some() { Verdict::Accept } else { Verdict::Reject },
        sample: map,
        coloring: found,
        search_nodes: nodes,
    })
}
