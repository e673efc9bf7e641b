//! Bipartite views `G[L, R]` over a host graph, their M2-free structure
//! (peeling, elimination sequences, interval models), the peeling tester
//! and the repair that follows the peel order.
//!
//! Edges inside `L` or inside `R` are allowed in the host and ignored.

use std::fmt;

use num_rational::Rational64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{sample_subset, EditSet, Graph};
use crate::oracles::{find_m2, M2};
use crate::set::VertexSet;

#[derive(Clone)]
pub struct BipartiteView<'a> {
    host: &'a Graph,
    left: VertexSet,
    right: VertexSet,
}

impl<'a> BipartiteView<'a> {
    pub fn new(host: &'a Graph, left: VertexSet, right: VertexSet) -> Result<Self> {
        let view = BipartiteView { host, left, right };
        view.validate()?;
        Ok(view)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(v) = self.left.intersection(&self.right).iter().next() {
            return Err(Error::OverlappingParts(v));
        }
        if let Some(v) = self.left.union(&self.right).max() {
            self.host.check(v)?;
        }
        Ok(())
    }

    pub fn host(&self) -> &'a Graph {
        self.host
    }

    pub fn left(&self) -> &VertexSet {
        &self.left
    }

    pub fn right(&self) -> &VertexSet {
        &self.right
    }

    pub fn vertices(&self) -> VertexSet {
        self.left.union(&self.right)
    }

    /// The sub-view on `(L ∩ keep, R ∩ keep)`.
    pub fn restrict(&self, keep: &VertexSet) -> BipartiteView<'a> {
        BipartiteView {
            host: self.host,
            left: self.left.intersection(keep),
            right: self.right.intersection(keep),
        }
    }

    /// Parses "v side" lines with side `L` or `R`.
    pub fn parse_parts(text: &str) -> Result<(VertexSet, VertexSet)> {
        let mut left = VertexSet::default();
        let mut right = VertexSet::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::Parse { line: i + 1, msg: msg.into() };
            let mut it = line.split_whitespace();
            let v: usize = it.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad("expected a vertex id"))?;
            match it.next() {
                Some("L") => left.insert(v),
                Some("R") => right.insert(v),
                _ => return Err(bad("side must be L or R")),
            };
            if it.next().is_some() {
                return Err(bad("trailing tokens"));
            }
        }
        Ok((left, right))
    }

    fn cross_degree(&self, v: usize, current: &VertexSet) -> usize {
        self.host.degree_in(v, current)
    }
}

impl fmt::Debug for BipartiteView<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BipartiteView").field("left", &self.left).field("right", &self.right).finish()
    }
}

/// Peelability slack of `v` within the current sub-view: right-degree for a
/// left vertex, left non-degree for a right vertex.
fn slack(view: &BipartiteView<'_>, v: usize) -> usize {
    if view.left.contains(v) {
        view.cross_degree(v, &view.right)
    } else {
        view.left.len() - view.cross_degree(v, &view.left)
    }
}

/// `v ∈ L` with `|N_R(v)| ≤ k`, or `v ∈ R` with `|L \ N_L(v)| ≤ k`.
pub fn is_k_peelable(view: &BipartiteView<'_>, v: usize, k: usize) -> Result<bool> {
    if !view.left.contains(v) && !view.right.contains(v) {
        return Err(Error::Precondition(format!("vertex {v} is not in the view")));
    }
    Ok(slack(view, v) <= k)
}

fn find_k_peelable(view: &BipartiteView<'_>, k: usize) -> Option<usize> {
    view.left.iter().chain(view.right.iter()).find(|&v| slack(view, v) <= k)
}

/// A peelable vertex, scanning the left side first, lowest id first.
pub fn find_peelable(view: &BipartiteView<'_>) -> Option<usize> {
    find_k_peelable(view, 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Peeling {
    pub order: Vec<usize>,
    pub core: VertexSet,
}

/// Repeatedly removes a `t`-peelable vertex until none is left.
pub fn peel_to_core(view: &BipartiteView<'_>, t: usize) -> Peeling {
    let mut cur = view.clone();
    let mut order = Vec::new();
    while let Some(v) = find_k_peelable(&cur, t) {
        cur.left.remove(v);
        cur.right.remove(v);
        order.push(v);
    }
    Peeling { order, core: cur.vertices() }
}

/// An enumeration `v_1..v_p` of `L ∪ R` with `v_i v_j ∈ E ⟺ j < i` for
/// `v_i ∈ L`, `v_j ∈ R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EliminationSequence {
    pub order: Vec<usize>,
    pub is_left: Vec<bool>,
}

impl EliminationSequence {
    pub fn is_valid_for(&self, view: &BipartiteView<'_>) -> bool {
        let p = self.order.len();
        if p != view.vertices().len() || VertexSet::from_iter(0, self.order.iter().copied()) != view.vertices() {
            return false;
        }
        (0..p).all(|i| {
            (0..p).all(|j| {
                if !(self.is_left[i] && !self.is_left[j]) {
                    return true;
                }
                view.host.has_edge(self.order[i], self.order[j]) == (j < i)
            })
        })
    }
}

pub fn elimination_sequence(view: &BipartiteView<'_>) -> Option<EliminationSequence> {
    let peel = peel_to_core(view, 0);
    if !peel.core.is_empty() {
        return None;
    }
    let is_left = peel.order.iter().map(|&v| view.left.contains(v)).collect();
    let seq = EliminationSequence { order: peel.order, is_left };
    debug_assert!(seq.is_valid_for(view));
    Some(seq)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub lo: Rational64,
    pub hi: Rational64,
}

impl Interval {
    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

/// Per-vertex closed intervals of `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalFamily {
    pub vertices: Vec<usize>,
    pub intervals: Vec<Interval>,
}

impl IntervalFamily {
    pub fn get(&self, v: usize) -> Option<&Interval> {
        self.vertices.iter().position(|&w| w == v).map(|i| &self.intervals[i])
    }

    /// Anchoring at 0 and 1, and cross intersections equal to adjacency.
    pub fn represents(&self, view: &BipartiteView<'_>) -> bool {
        let zero = Rational64::from_integer(0);
        let one = Rational64::from_integer(1);
        let anchored = view.left.iter().all(|v| self.get(v).is_some_and(|i| i.lo == zero))
            && view.right.iter().all(|v| self.get(v).is_some_and(|i| i.hi == one));
        anchored
            && view.left.iter().all(|l| {
                view.right.iter().all(|r| self.get(l).unwrap().intersects(self.get(r).unwrap()) == view.host.has_edge(l, r))
            })
    }
}

/// `I = [0, i/p]` on the left and `[i/p, 1]` on the right, 1-based `i`.
pub fn interval_representation(seq: &EliminationSequence) -> IntervalFamily {
    let p = seq.order.len() as i64;
    let intervals = (0..seq.order.len())
        .map(|i| {
            let x = Rational64::new(i as i64 + 1, p);
            if seq.is_left[i] {
                Interval { lo: Rational64::from_integer(0), hi: x }
            } else {
                Interval { lo: x, hi: Rational64::from_integer(1) }
            }
        })
        .collect();
    IntervalFamily { vertices: seq.order.clone(), intervals }
}

/// The constructive step of the structure proof: in a non-empty view with
/// no peelable vertex, `l1` minimizing `|N_R(l1)|` yields an M2.
pub fn m2_from_unpeelable(view: &BipartiteView<'_>) -> Option<M2> {
    let g = view.host;
    let l1 = view.left.iter().min_by_key(|&l| (g.degree_in(l, &view.right), l))?;
    let n1 = g.neighbors_in(l1, &view.right);
    let r1 = n1.iter().next()?;
    let l2 = view.left.iter().find(|&l| l != l1 && !g.has_edge(l, r1))?;
    let r2 = g.neighbors_in(l2, &view.right).difference(&n1).iter().next()?;
    Some(M2 { l1, l2, r1, r2 })
}

#[derive(Clone, Debug)]
pub struct M2Repair {
    /// Host-sized graph; only `L`-`R` pairs differ from the host.
    pub repaired: Graph,
    pub edits: EditSet,
    pub peel_order: Vec<usize>,
}

/// Edits along a full `t`-peeling: a peeled left vertex loses its
/// remaining right edges, a peeled right vertex gains its missing
/// remaining left edges. `None` when the core is non-empty.
pub fn repair_to_m2_free(view: &BipartiteView<'_>, t: usize) -> Option<M2Repair> {
    let peel = peel_to_core(view, t);
    if !peel.core.is_empty() {
        return None;
    }
    let mut h = view.host.clone();
    let mut left = view.left.clone();
    let mut right = view.right.clone();
    for &v in &peel.order {
        if left.remove(v) {
            for r in right.iter() {
                h.remove_edge(v, r);
            }
        } else {
            right.remove(v);
            for l in left.iter() {
                h.add_edge(v, l);
            }
        }
    }
    let edits = EditSet::between(view.host, &h).expect("same vertex count");
    Some(M2Repair { repaired: h, edits, peel_order: peel.order })
}

/// Exact distance from `G[L, R]` to the nearest M2-free bipartite graph on
/// the same sides: M2-free views are chain graphs, so left neighborhoods
/// must be prefixes of one ordering of `R`.
pub fn exact_m2_distance(view: &BipartiteView<'_>, max_right: usize) -> Result<usize> {
    let right = view.right.to_vec();
    if right.len() > max_right {
        return Err(Error::Guard(format!("exact M2 distance needs |R| <= {max_right}, got {}", right.len())));
    }
    let rows: Vec<Vec<bool>> =
        view.left.iter().map(|l| right.iter().map(|&r| view.host.has_edge(l, r)).collect()).collect();
    let mut perm: Vec<usize> = (0..right.len()).collect();
    let mut best = usize::MAX;
    permute(&mut perm, 0, &mut |p| {
        let cost: usize = rows
            .iter()
            .map(|row| {
                // prefix j costs (non-neighbors inside) + (neighbors outside)
                let total: usize = row.iter().filter(|&&b| b).count();
                let mut c = total;
                let mut min = c;
                for &idx in p {
                    c = if row[idx] { c - 1 } else { c + 1 };
                    min = min.min(c);
                }
                min
            })
            .sum();
        best = best.min(cost);
    });
    Ok(best)
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// `ceil((4/ε) ln(1/ε))`, with `ε` clamped to `1/4` from above.
pub fn m2_tester_sample_size(eps: f64) -> Result<usize> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidParameter(format!("epsilon {eps} must be positive")));
    }
    let e = if eps >= 0.25 {
        log::info!("epsilon {eps} >= 1/4: no view can be that far; using 1/4");
        0.25
    } else {
        eps
    };
    Ok(((4.0 / e) * (1.0 / e).ln()).ceil() as usize)
}

#[derive(Clone, Debug, Serialize)]
pub struct M2Outcome {
    pub sample: Vec<usize>,
    pub witness: Option<M2>,
}

impl M2Outcome {
    pub fn rejected(&self) -> bool {
        self.witness.is_some()
    }
}

/// Samples `m` vertices of `L ∪ R` (all of them if `m` is larger) and
/// rejects iff the sampled sub-view contains an M2.
pub fn m2_tester<R: Rng + ?Sized>(view: &BipartiteView<'_>, m: usize, rng: &mut R) -> Result<M2Outcome> {
    let pool = view.vertices().to_vec();
    let m = m.min(pool.len());
    let picks = sample_subset(pool.len(), m, rng)?;
    let x = VertexSet::from_iter(view.host.n(), picks.iter().map(|i| pool[i]));
    let witness = find_m2(&view.restrict(&x))?;
    Ok(M2Outcome { sample: x.to_vec(), witness })
}
