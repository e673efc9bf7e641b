use std::collections::BTreeMap;

use serde::Serialize;

use super::{DiscreteTree, SubtreeFamily};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::guards::Guards;
use crate::set::VertexSet;

/// A component of `tree \ Γ`: the open path strictly between two gates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Section {
    pub ends: (usize, usize),
    /// Interior nodes in order from `ends.0` to `ends.1`.
    pub interior: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Gates {
    pub gates: VertexSet,
    pub sections: Vec<Section>,
}

/// `Γ = Γ0 ∪ leaves ∪ branch nodes`, cutting the tree into paths.
pub fn compute_gates(tree: &DiscreteTree, gamma0: &VertexSet, k: usize) -> Result<Gates> {
    let leaves = tree.leaves();
    if leaves.len() > k {
        return Err(Error::Precondition(format!("tree has {} leaves, more than k = {k}", leaves.len())));
    }
    if gamma0.len() > k {
        return Err(Error::Precondition(format!("|Γ0| = {} exceeds k = {k}", gamma0.len())));
    }
    for g in gamma0.iter() {
        tree.check(g)?;
    }
    let cap = tree.node_count();
    let gates = VertexSet::from_iter(cap, gamma0.iter()).union(&leaves).union(&tree.branch_nodes());
    debug_assert!(gates.len() <= 3 * k);
    let mut sections = Vec::new();
    for g in gates.iter() {
        for &first in tree.neighbors(g) {
            let (mut prev, mut cur) = (g, first);
            let mut interior = Vec::new();
            while !gates.contains(cur) {
                interior.push(cur);
                let next = tree.neighbors(cur).iter().copied().find(|&w| w != prev).expect("interior nodes have degree 2");
                prev = cur;
                cur = next;
            }
            if g < cur {
                sections.push(Section { ends: (g, cur), interior });
            }
        }
    }
    Ok(Gates { gates, sections })
}

/// `Y_S`, the gate set `Γ_R = {y_ab}` and pins `x_u = y_{a_u b_u}` for a
/// representation of `G[S]`; family vertex `i` is the `i`-th element of `S`.
#[derive(Clone, Debug, Serialize)]
pub struct PinSet {
    pub y_s: VertexSet,
    pub gamma: VertexSet,
    pub pins: BTreeMap<usize, usize>,
    pub witness: BTreeMap<usize, (usize, usize)>,
    pub y_ab: BTreeMap<(usize, usize), usize>,
}

pub fn compute_pins(repr: &SubtreeFamily, g: &Graph, s: &VertexSet) -> Result<PinSet> {
    let members = s.to_vec();
    if repr.vertex_count() != members.len() {
        return Err(Error::SizeMismatch { left: repr.vertex_count(), right: members.len() });
    }
    let (gs, _) = g.induced_subgraph(s)?;
    if repr.intersection_graph() != gs {
        return Err(Error::Precondition("family does not represent G[S]".into()));
    }
    let tree = repr.tree();
    let mut y_ab = BTreeMap::new();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            if gs.has_edge(i, j) {
                continue;
            }
            let dist = tree.distances_from(repr.subtree(j));
            let y = repr.subtree(i).iter().min_by_key(|&x| (dist[x], x)).expect("nonempty subtree");
            y_ab.insert((members[i], members[j]), y);
        }
    }
    let mut y_s = VertexSet::new(g.n());
    let mut pins = BTreeMap::new();
    let mut witness = BTreeMap::new();
    for u in g.vertices() {
        let nb: Vec<usize> = members.iter().copied().filter(|&a| g.has_edge(u, a)).collect();
        let pair = nb.iter().enumerate().find_map(|(i, &a)| nb[i + 1..].iter().find(|&&b| !g.has_edge(a, b)).map(|&b| (a, b)));
        if let Some((a, b)) = pair {
            y_s.insert(u);
            pins.insert(u, y_ab[&(a, b)]);
            witness.insert(u, (a, b));
        }
    }
    let gamma = VertexSet::from_iter(tree.node_count(), y_ab.values().copied());
    Ok(PinSet { y_s, gamma, pins, witness, y_ab })
}

/// Shapes `A_v = T_v ∩ nodes(tree)` are connected and contain `x_v`;
/// every tree edge `y-z` sees the vertices with `y ∈ A, z ∉ A` on one side
/// and `z ∈ A, y ∉ A` on the other.
struct Search<'a> {
    g: &'a Graph,
    tree: &'a DiscreteTree,
    edges: Vec<(usize, usize)>,
    shapes: Vec<Vec<VertexSet>>,
    resolution: usize,
    chosen: Vec<Option<usize>>,
    nodes: usize,
    limit: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Near,
    Far,
    Neither,
}

fn side(a: &VertexSet, (y, z): (usize, usize)) -> Side {
    match (a.contains(y), a.contains(z)) {
        (true, false) => Side::Near,
        (false, true) => Side::Far,
        _ => Side::Neither,
    }
}

impl Search<'_> {
    fn shape(&self, v: usize) -> Option<&VertexSet> {
        self.chosen[v].map(|i| &self.shapes[v][i])
    }

    fn compatible(&self, u: usize, au: &VertexSet, v: usize, av: &VertexSet) -> bool {
        if !self.g.has_edge(u, v) {
            return au.is_disjoint(av);
        }
        !au.is_disjoint(av) || au.iter().any(|y| self.tree.neighbors(y).iter().any(|&z| av.contains(z)))
    }

    /// No induced 2K2 across any edge and at most `resolution` steps.
    fn edges_ok(&self, v: usize) -> bool {
        let av = self.shape(v).expect("assigned");
        for &e in &self.edges {
            let sv = side(av, e);
            if sv == Side::Neither {
                continue;
            }
            let mut near = Vec::new();
            let mut far = Vec::new();
            for w in 0..self.g.n() {
                if let Some(aw) = self.shape(w) {
                    match side(aw, e) {
                        Side::Near => near.push(w),
                        Side::Far => far.push(w),
                        Side::Neither => {}
                    }
                }
            }
            let (mine, other) = if sv == Side::Near { (&near, &far) } else { (&far, &near) };
            for &p in mine.iter().filter(|&&p| p != v) {
                for &q in other {
                    for &q2 in other {
                        if self.g.has_edge(v, q)
                            && !self.g.has_edge(v, q2)
                            && self.g.has_edge(p, q2)
                            && !self.g.has_edge(p, q)
                        {
                            return false;
                        }
                    }
                }
            }
            if steps(self.g, &near, &far) > self.resolution {
                return false;
            }
        }
        true
    }

    fn run(&mut self, domains: Vec<Vec<usize>>) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::Guard(format!("pinned search exceeded {} nodes", self.limit)));
        }
        let Some(v) = (0..self.g.n()).filter(|&v| self.chosen[v].is_none()).min_by_key(|&v| (domains[v].len(), v)) else {
            return Ok(true);
        };
        for &i in &domains[v] {
            self.chosen[v] = Some(i);
            if !self.edges_ok(v) {
                continue;
            }
            let av = &self.shapes[v][i];
            let mut next = domains.clone();
            let mut dead = false;
            for (u, dom) in next.iter_mut().enumerate() {
                if self.chosen[u].is_some() {
                    continue;
                }
                dom.retain(|&j| self.compatible(u, &self.shapes[u][j], v, av));
                if dom.is_empty() {
                    dead = true;
                    break;
                }
            }
            if !dead && self.run(next)? {
                return Ok(true);
            }
        }
        self.chosen[v] = None;
        Ok(false)
    }
}

/// Distinct nonempty neighborhoods of `far` inside `near`.
fn steps(g: &Graph, near: &[usize], far: &[usize]) -> usize {
    let mut masks: Vec<u64> = far
        .iter()
        .map(|&q| near.iter().enumerate().filter(|&(_, &p)| g.has_edge(p, q)).fold(0u64, |m, (i, _)| m | 1 << i))
        .filter(|&m| m != 0)
        .collect();
    masks.sort_unstable();
    masks.dedup();
    masks.len()
}

/// Exact search for a representation of `g` on `tree` refined with
/// `resolution` slots per edge, with `x_v ∈ T_v`.
pub fn pinned_representation_exists(
    g: &Graph,
    tree: &DiscreteTree,
    pins: &[usize],
    resolution: usize,
    guards: &Guards,
) -> Result<Option<SubtreeFamily>> {
    let n = g.n();
    if pins.len() != n {
        return Err(Error::SizeMismatch { left: pins.len(), right: n });
    }
    if n > guards.pinned_max_n {
        return Err(Error::Guard(format!("pinned search needs n <= {}, got {n}", guards.pinned_max_n)));
    }
    if tree.node_count() > guards.pinned_max_nodes {
        return Err(Error::Guard(format!(
            "pinned search needs at most {} tree nodes, got {}",
            guards.pinned_max_nodes,
            tree.node_count()
        )));
    }
    for &x in pins {
        tree.check(x)?;
    }
    let full = VertexSet::full(tree.node_count());
    let shapes = pins
        .iter()
        .map(|&x| tree.subtrees_containing(x, &full, guards.pinned_max_states))
        .collect::<Result<Vec<_>>>()?;
    let mut search = Search {
        g,
        tree,
        edges: tree.edges().collect(),
        shapes,
        resolution,
        chosen: vec![None; n],
        nodes: 0,
        limit: guards.pinned_max_states,
    };
    let mut domains: Vec<Vec<usize>> = search.shapes.iter().map(|s| (0..s.len()).collect()).collect();
    // Pairs pinned to the same node must be adjacent.
    for u in 0..n {
        for v in u + 1..n {
            if pins[u] == pins[v] && !g.has_edge(u, v) {
                return Ok(None);
            }
        }
    }
    for (v, d) in domains.iter_mut().enumerate() {
        let shapes = &search.shapes[v];
        d.retain(|&i| (0..n).all(|u| u == v || g.has_edge(u, v) || !shapes[i].contains(pins[u])));
    }
    if !search.run(domains)? {
        return Ok(None);
    }
    let chosen: Vec<VertexSet> = (0..n).map(|v| search.shape(v).expect("complete").clone()).collect();
    Ok(Some(realize(g, tree, &chosen, resolution, pins)))
}

/// Refines every edge with `resolution` slots and lays out each edge's
/// chain graph as prefixes and suffixes.
fn realize(g: &Graph, tree: &DiscreteTree, shapes: &[VertexSet], resolution: usize, pins: &[usize]) -> SubtreeFamily {
    let n = shapes.len();
    let mut refined = tree.clone();
    let mut sets: Vec<Vec<usize>> = shapes.iter().map(VertexSet::to_vec).collect();
    for e in tree.edges().collect::<Vec<_>>() {
        let (y, z) = e;
        let mut slots = Vec::with_capacity(resolution);
        let mut last = y;
        for _ in 0..resolution {
            last = refined.subdivide(last, z);
            slots.push(last);
        }
        let near: Vec<usize> = (0..n).filter(|&v| side(&shapes[v], e) == Side::Near).collect();
        let far: Vec<usize> = (0..n).filter(|&v| side(&shapes[v], e) == Side::Far).collect();
        let mask = |q: usize| near.iter().enumerate().filter(|&(_, &p)| g.has_edge(p, q)).fold(0u64, |m, (i, _)| m | 1 << i);
        let mut classes: Vec<u64> = far.iter().map(|&q| mask(q)).filter(|&m| m != 0).collect();
        classes.sort_unstable_by_key(|m| std::cmp::Reverse(m.count_ones()));
        classes.dedup();
        let class_of = |m: u64| classes.iter().position(|&c| c == m).map(|i| i + 1);
        for &q in &far {
            if let Some(b) = class_of(mask(q)) {
                sets[q].extend_from_slice(&slots[b - 1..]);
            }
        }
        for (i, &p) in near.iter().enumerate() {
            let a = far.iter().filter(|&&q| mask(q) >> i & 1 == 1).filter_map(|&q| class_of(mask(q))).max().unwrap_or(0);
            sets[p].extend_from_slice(&slots[..a]);
        }
        for v in 0..n {
            if shapes[v].contains(y) && shapes[v].contains(z) {
                sets[v].extend_from_slice(&slots);
            }
        }
    }
    let cap = refined.node_count();
    let family = SubtreeFamily::new(refined, sets.into_iter().map(|s| VertexSet::from_iter(cap, s)).collect())
        .expect("realized subtrees are connected");
    assert_eq!(&family.intersection_graph(), g, "realized family must represent the graph");
    assert!(family.contains_pins(pins));
    family
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_examples() {
        let p = DiscreteTree::path(5);
        let gates = compute_gates(&p, &VertexSet::from_iter(5, [0, 4]), 2).unwrap();
        assert_eq!(gates.gates.to_vec(), vec![0, 4]);
        assert_eq!(gates.sections, vec![Section { ends: (0, 4), interior: vec![1, 2, 3] }]);
        let s = DiscreteTree::star(3, 2);
        let gates = compute_gates(&s, &VertexSet::new(7), 3).unwrap();
        assert_eq!(gates.gates.to_vec(), vec![0, 2, 4, 6]);
        assert_eq!(gates.sections.len(), 3);
        assert!(compute_gates(&s, &VertexSet::new(7), 2).is_err());
        let point = compute_gates(&DiscreteTree::point(), &VertexSet::new(1), 1).unwrap();
        assert_eq!(point.gates.len(), 1);
        assert!(point.sections.is_empty());
    }

    #[test]
    fn pins_on_path() {
        // S = {0, 1} nonadjacent on a 3-node path, u = 2 adjacent to both.
        let g = Graph::from_edges(3, &[(0, 2), (1, 2)]).unwrap();
        let tree = DiscreteTree::path(3);
        let repr = SubtreeFamily::new(tree, vec![VertexSet::from_iter(3, [0]), VertexSet::from_iter(3, [2])]).unwrap();
        let pins = compute_pins(&repr, &g, &VertexSet::from_iter(3, [0, 1])).unwrap();
        assert_eq!(pins.y_s.to_vec(), vec![2]);
        assert_eq!(pins.pins[&2], 0);
        assert_eq!(pins.gamma.len(), 1);
        let complete = compute_pins(
            &SubtreeFamily::new(DiscreteTree::point(), vec![VertexSet::full(1); 2]).unwrap(),
            &Graph::complete(3),
            &VertexSet::from_iter(3, [0, 1]),
        )
        .unwrap();
        assert!(complete.y_s.is_empty() && complete.gamma.is_empty());
    }

    #[test]
    fn pinned_examples() {
        let guards = Guards::default();
        let tree = DiscreteTree::path(3);
        let w = pinned_representation_exists(&Graph::complete(3), &tree, &[0, 1, 2], 7, &guards).unwrap();
        assert!(w.is_some());
        assert!(pinned_representation_exists(&Graph::empty(2), &tree, &[1, 1], 5, &guards).unwrap().is_none());
        // 0 and 1 are held at their own ends by private neighbors 2 and 3,
        // so meeting across the edge needs a slot.
        let edge = DiscreteTree::path(2);
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 3)]).unwrap();
        assert!(pinned_representation_exists(&g, &edge, &[0, 1, 0, 1], 0, &guards).unwrap().is_none());
        let w = pinned_representation_exists(&g, &edge, &[0, 1, 0, 1], 1, &guards).unwrap().unwrap();
        assert_eq!(w.tree().node_count(), 3);
        // C4 is never representable.
        assert!(pinned_representation_exists(&Graph::cycle(4), &DiscreteTree::star(4, 1), &[1, 2, 3, 4], 9, &guards)
            .unwrap()
            .is_none());
    }
}
