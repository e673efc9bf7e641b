//! Discrete trees and subtree families. Nodes stand in for points of a
//! topological tree; refining an edge inserts slot nodes.

mod canon;
mod enumerate;
mod pins;

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::oracles::perfect_elimination_order;
use crate::set::VertexSet;

pub use enumerate::{enumerate_minimal_representations, representation_count_ceiling};
pub use pins::{compute_gates, compute_pins, pinned_representation_exists, Gates, PinSet, Section};

/// A finite tree on nodes `0..node_count`, with an optional set of marked gates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscreteTree {
    adj: Vec<Vec<usize>>,
    gates: VertexSet,
}

impl DiscreteTree {
    pub fn new(nodes: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if nodes == 0 {
            return Err(Error::InvalidParameter("a tree needs at least one node".into()));
        }
        if edges.len() + 1 != nodes {
            return Err(Error::InvalidParameter(format!("{} edges on {nodes} nodes is not a tree", edges.len())));
        }
        let mut adj = vec![Vec::new(); nodes];
        for &(a, b) in edges {
            for x in [a, b] {
                if x >= nodes {
                    return Err(Error::VertexOutOfRange { vertex: x, n: nodes });
                }
            }
            if a == b || adj[a].contains(&b) {
                return Err(Error::InvalidParameter(format!("bad tree edge {a}-{b}")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        let t = DiscreteTree { adj, gates: VertexSet::new(nodes) };
        if !t.is_connected_subset(&VertexSet::full(nodes)) {
            return Err(Error::InvalidParameter("tree edges are not connected".into()));
        }
        Ok(t)
    }

    pub fn point() -> Self {
        DiscreteTree { adj: vec![Vec::new()], gates: VertexSet::new(1) }
    }

    pub fn path(nodes: usize) -> Self {
        let edges: Vec<_> = (1..nodes).map(|i| (i - 1, i)).collect();
        Self::new(nodes, &edges).expect("path")
    }

    /// Center `0` with `branches` paths of `length` nodes each.
    pub fn star(branches: usize, length: usize) -> Self {
        let mut edges = Vec::new();
        let mut next = 1;
        for _ in 0..branches {
            let mut prev = 0;
            for _ in 0..length {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        Self::new(next, &edges).expect("star")
    }

    /// Uniform random attachment: node `i` hangs off a uniform earlier node.
    pub fn random<R: Rng + ?Sized>(nodes: usize, rng: &mut R) -> Self {
        let edges: Vec<_> = (1..nodes).map(|i| (rng.gen_range(0..i), i)).collect();
        Self::new(nodes.max(1), &edges).expect("random tree")
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn nodes(&self) -> std::ops::Range<usize> {
        0..self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(a, row)| row.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }

    /// Degree-1 nodes; a single-node tree counts its node as a leaf.
    pub fn leaves(&self) -> VertexSet {
        if self.node_count() == 1 {
            return VertexSet::full(1);
        }
        VertexSet::from_iter(self.node_count(), self.nodes().filter(|&v| self.degree(v) == 1))
    }

    pub fn branch_nodes(&self) -> VertexSet {
        VertexSet::from_iter(self.node_count(), self.nodes().filter(|&v| self.degree(v) >= 3))
    }

    pub fn gates(&self) -> &VertexSet {
        &self.gates
    }

    pub fn with_gates(mut self, gates: VertexSet) -> Result<Self> {
        if let Some(g) = gates.iter().find(|&g| g >= self.node_count()) {
            return Err(Error::VertexOutOfRange { vertex: g, n: self.node_count() });
        }
        self.gates = VertexSet::from_iter(self.node_count(), gates.iter());
        Ok(self)
    }

    pub(crate) fn check(&self, v: usize) -> Result<()> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.node_count() })
        }
    }

    /// True for a nonempty set of nodes inducing a connected subtree.
    pub fn is_connected_subset(&self, set: &VertexSet) -> bool {
        let Some(start) = set.iter().next() else {
            return false;
        };
        if set.iter().any(|v| v >= self.node_count()) {
            return false;
        }
        let mut seen = VertexSet::new(self.node_count());
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if set.contains(w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == set.len()
    }

    /// Multi-source BFS distances from `sources`; `usize::MAX` if empty.
    pub fn distances_from(&self, sources: &VertexSet) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        for s in sources.iter() {
            dist[s] = 0;
            queue.push_back(s);
        }
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// The nodes of the path from `a` to `b`, in order.
    pub fn path_between(&self, a: usize, b: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.node_count()];
        parent[a] = a;
        let mut queue = VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            if v == b {
                break;
            }
            for &w in &self.adj[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        let mut path = vec![b];
        let mut v = b;
        while v != a {
            v = parent[v];
            path.push(v);
        }
        path.reverse();
        path
    }

    /// The minimal subtree containing `set`.
    pub fn span(&self, set: &VertexSet) -> VertexSet {
        let mut keep = VertexSet::full(self.node_count());
        if set.is_empty() {
            return VertexSet::new(self.node_count());
        }
        let mut deg: Vec<usize> = self.nodes().map(|v| self.degree(v)).collect();
        let mut stack: Vec<usize> = self.nodes().filter(|&v| deg[v] <= 1 && !set.contains(v)).collect();
        while let Some(v) = stack.pop() {
            if !keep.contains(v) {
                continue;
            }
            keep.remove(v);
            for &w in &self.adj[v] {
                if keep.contains(w) {
                    deg[w] -= 1;
                    if deg[w] <= 1 && !set.contains(w) {
                        stack.push(w);
                    }
                }
            }
        }
        keep
    }

    /// The tree induced on a connected node set, renumbered; the map sends
    /// new ids to old ones.
    pub fn restrict(&self, nodes: &VertexSet) -> Result<(DiscreteTree, Vec<usize>)> {
        if !self.is_connected_subset(nodes) {
            return Err(Error::Precondition("restriction target must be a nonempty connected subtree".into()));
        }
        let map = nodes.to_vec();
        let mut back = vec![usize::MAX; self.node_count()];
        for (i, &v) in map.iter().enumerate() {
            back[v] = i;
        }
        let edges: Vec<_> =
            self.edges().filter(|&(a, b)| nodes.contains(a) && nodes.contains(b)).map(|(a, b)| (back[a], back[b])).collect();
        let gates = VertexSet::from_iter(map.len(), self.gates.iter().filter(|&g| nodes.contains(g)).map(|g| back[g]));
        Ok((DiscreteTree::new(map.len(), &edges)?.with_gates(gates)?, map))
    }

    /// Insert a new node on edge `a-b`; returns its id.
    pub fn subdivide(&mut self, a: usize, b: usize) -> usize {
        assert!(self.has_edge(a, b), "no edge {a}-{b}");
        let x = self.push_node();
        for (p, q) in [(a, b), (b, a)] {
            let pos = self.adj[p].iter().position(|&w| w == q).expect("edge");
            self.adj[p][pos] = x;
            self.adj[p].sort_unstable();
        }
        self.adj[x] = if a < b { vec![a, b] } else { vec![b, a] };
        x
    }

    pub fn add_leaf(&mut self, parent: usize) -> usize {
        let x = self.push_node();
        self.adj[parent].push(x);
        self.adj[x].push(parent);
        x
    }

    fn push_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        let mut gates = VertexSet::new(self.adj.len());
        for g in self.gates.iter() {
            gates.insert(g);
        }
        self.gates = gates;
        self.adj.len() - 1
    }

    /// Every connected node set containing `root` inside `allowed`, none
    /// using a node below `floor`.
    fn subtrees_rooted(&self, root: usize, allowed: &dyn Fn(usize) -> bool, limit: usize, out: &mut Vec<VertexSet>) -> Result<()> {
        fn grow(
            t: &DiscreteTree,
            v: usize,
            parent: usize,
            allowed: &dyn Fn(usize) -> bool,
            limit: usize,
        ) -> Result<Vec<VertexSet>> {
            let mut acc = vec![VertexSet::from_iter(t.node_count(), [v])];
            for &c in &t.adj[v] {
                if c == parent || !allowed(c) {
                    continue;
                }
                let sub = grow(t, c, v, allowed, limit)?;
                let mut next = Vec::with_capacity(acc.len() * (sub.len() + 1));
                for a in &acc {
                    next.push(a.clone());
                    for s in &sub {
                        next.push(a.union(s));
                    }
                    if next.len() > limit {
                        return Err(Error::Guard(format!("more than {limit} connected subtrees")));
                    }
                }
                acc = next;
            }
            Ok(acc)
        }
        let sets = grow(self, root, usize::MAX, allowed, limit)?;
        if out.len() + sets.len() > limit {
            return Err(Error::Guard(format!("more than {limit} connected subtrees")));
        }
        out.extend(sets);
        Ok(())
    }

    /// All connected subtrees inside `allowed` containing `root`.
    pub fn subtrees_containing(&self, root: usize, allowed: &VertexSet, limit: usize) -> Result<Vec<VertexSet>> {
        let mut out = Vec::new();
        if allowed.contains(root) {
            self.subtrees_rooted(root, &|v| allowed.contains(v), limit, &mut out)?;
        }
        Ok(out)
    }

    /// All nonempty connected subtrees inside `allowed`.
    pub fn subtrees(&self, allowed: &VertexSet, limit: usize) -> Result<Vec<VertexSet>> {
        let mut out = Vec::new();
        for r in allowed.iter() {
            self.subtrees_rooted(r, &|v| v > r && allowed.contains(v) || v == r, limit, &mut out)?;
        }
        Ok(out)
    }
}

/// A chordal representation: one nonempty connected node set per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubtreeFamily {
    tree: DiscreteTree,
    sets: Vec<VertexSet>,
}

impl SubtreeFamily {
    pub fn new(tree: DiscreteTree, sets: Vec<VertexSet>) -> Result<Self> {
        for (v, s) in sets.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::InvalidSubtree { vertex: v, reason: "empty".into() });
            }
            if !tree.is_connected_subset(s) {
                return Err(Error::InvalidSubtree { vertex: v, reason: "not connected".into() });
            }
        }
        let cap = tree.node_count();
        let sets = sets.into_iter().map(|s| VertexSet::from_iter(cap, s.iter())).collect();
        Ok(SubtreeFamily { tree, sets })
    }

    pub fn tree(&self) -> &DiscreteTree {
        &self.tree
    }

    pub fn vertex_count(&self) -> usize {
        self.sets.len()
    }

    pub fn subtree(&self, v: usize) -> &VertexSet {
        &self.sets[v]
    }

    pub fn subtrees(&self) -> &[VertexSet] {
        &self.sets
    }

    /// Vertices whose subtree contains `node`.
    pub fn label(&self, node: usize) -> VertexSet {
        VertexSet::from_iter(self.sets.len(), (0..self.sets.len()).filter(|&v| self.sets[v].contains(node)))
    }

    pub fn intersection_graph(&self) -> Graph {
        let n = self.sets.len();
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if !self.sets[u].is_disjoint(&self.sets[v]) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// The sub-family on the listed vertices, in that order.
    pub fn select(&self, vertices: &[usize]) -> SubtreeFamily {
        SubtreeFamily { tree: self.tree.clone(), sets: vertices.iter().map(|&v| self.sets[v].clone()).collect() }
    }

    pub fn contains_pins(&self, pins: &[usize]) -> bool {
        pins.len() == self.sets.len() && pins.iter().zip(&self.sets).all(|(&x, s)| s.contains(x))
    }

    pub fn restrict(&self, nodes: &VertexSet) -> Result<SubtreeFamily> {
        restrict_representation(self, nodes)
    }

    pub fn is_minimal(&self) -> bool {
        is_minimal(self)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("tree {}\n", self.tree.node_count());
        for (a, b) in self.tree.edges() {
            let _ = writeln!(out, "edge {a} {b}");
        }
        let gates: Vec<String> = self.tree.gates.iter().map(|g| g.to_string()).collect();
        let _ = writeln!(out, "gates {}", gates.join(" "));
        for (v, s) in self.sets.iter().enumerate() {
            let nodes: Vec<String> = s.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "subtree {v}: {}", nodes.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<SubtreeFamily> {
        let mut nodes = None;
        let mut edges = Vec::new();
        let mut gates = Vec::new();
        let mut sets: Vec<(usize, Vec<usize>)> = Vec::new();
        let num = |line: usize, s: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::Parse { line, msg: format!("expected a number, got {s:?}") })
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let (head, rest) = raw.split_once(' ').unwrap_or((raw, ""));
            match head {
                "tree" => nodes = Some(num(line, rest.trim())?),
                "edge" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    if parts.len() != 2 {
                        return Err(Error::Parse { line, msg: "edge needs two nodes".into() });
                    }
                    edges.push((num(line, parts[0])?, num(line, parts[1])?));
                }
                "gates" => {
                    for p in rest.split_whitespace() {
                        gates.push(num(line, p)?);
                    }
                }
                "subtree" => {
                    let (v, body) =
                        rest.split_once(':').ok_or_else(|| Error::Parse { line, msg: "subtree needs ':'".into() })?;
                    let ids = body.split_whitespace().map(|p| num(line, p)).collect::<Result<Vec<_>>>()?;
                    sets.push((num(line, v.trim())?, ids));
                }
                _ => return Err(Error::Parse { line, msg: format!("unknown record {head:?}") }),
            }
        }
        let nodes = nodes.ok_or(Error::Parse { line: 0, msg: "missing tree line".into() })?;
        let tree = DiscreteTree::new(nodes, &edges)?.with_gates(VertexSet::from_iter(nodes, gates))?;
        sets.sort_by_key(|(v, _)| *v);
        if sets.iter().enumerate().any(|(i, (v, _))| i != *v) {
            return Err(Error::Parse { line: 0, msg: "subtrees must be numbered 0..n".into() });
        }
        for (_, ids) in &sets {
            for &x in ids {
                tree.check(x)?;
            }
        }
        SubtreeFamily::new(tree, sets.into_iter().map(|(_, ids)| VertexSet::from_iter(nodes, ids)).collect())
    }
}

pub fn intersection_graph(family: &SubtreeFamily) -> Graph {
    family.intersection_graph()
}

/// `(T_v ∩ T')` on the subtree `T'`, renumbered.
pub fn restrict_representation(family: &SubtreeFamily, nodes: &VertexSet) -> Result<SubtreeFamily> {
    let (tree, map) = family.tree.restrict(nodes)?;
    let mut sets = Vec::with_capacity(family.sets.len());
    for (v, s) in family.sets.iter().enumerate() {
        let inner = VertexSet::from_iter(map.len(), (0..map.len()).filter(|&i| s.contains(map[i])));
        if inner.is_empty() {
            return Err(Error::Precondition(format!("subtree of vertex {v} misses the restriction target")));
        }
        sets.push(inner);
    }
    let out = SubtreeFamily::new(tree, sets)?;
    assert_eq!(out.intersection_graph(), family.intersection_graph(), "Helly property violated");
    Ok(out)
}

/// Every leaf `ℓ` has a vertex with `T_v = {ℓ}`.
pub fn is_minimal(family: &SubtreeFamily) -> bool {
    family.tree.leaves().iter().all(|l| family.sets.iter().any(|s| s.len() == 1 && s.contains(l)))
}

/// Prunes leaves that are nobody's singleton until the family is minimal.
pub fn minimalize(family: &SubtreeFamily) -> SubtreeFamily {
    let mut cur = family.clone();
    while let Some(l) = cur
        .tree
        .leaves()
        .iter()
        .find(|&l| cur.tree.node_count() > 1 && !cur.sets.iter().any(|s| s.len() == 1 && s.contains(l)))
    {
        let mut keep = VertexSet::full(cur.tree.node_count());
        keep.remove(l);
        cur = restrict_representation(&cur, &keep).expect("pruning an unused leaf keeps every subtree");
    }
    cur
}

/// Reduced form: unused degree-2 nodes removed, nodes in canonical order.
pub fn reduce_representation(family: &SubtreeFamily) -> SubtreeFamily {
    let mut t = canon::LabelledTree::from_family(family, &|x| family.tree.degree(x) != 2);
    t.reduce();
    t.to_family(family.vertex_count())
}

/// Equal for two families iff their reduced forms are isomorphic as
/// labelled trees.
pub fn canonical_key(family: &SubtreeFamily) -> String {
    let mut t = canon::LabelledTree::from_family(family, &|x| family.tree.degree(x) != 2);
    t.reduce();
    t.canonical_key()
}

/// A clique tree of a chordal graph: maximal cliques joined by a maximum
/// weight spanning tree, `T_v` the cliques containing `v`.
pub fn clique_tree_representation(g: &Graph) -> Result<SubtreeFamily> {
    let order = perfect_elimination_order(g).ok_or(Error::NotChordal)?;
    let n = g.n();
    if n == 0 {
        return SubtreeFamily::new(DiscreteTree::point(), Vec::new());
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let candidates: Vec<VertexSet> = order
        .iter()
        .map(|&v| {
            let mut c = VertexSet::from_iter(n, g.neighbors(v).filter(|&w| pos[w] > pos[v]));
            c.insert(v);
            c
        })
        .collect();
    let mut cliques: Vec<VertexSet> = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        let dominated =
            candidates.iter().enumerate().any(|(j, d)| j != i && c.is_subset(d) && (c != d || j < i));
        if !dominated {
            cliques.push(c.clone());
        }
    }
    let k = cliques.len();
    let mut in_tree = vec![false; k];
    let mut best: Vec<(usize, usize)> = vec![(0, 0); k];
    let mut edges = Vec::with_capacity(k.saturating_sub(1));
    in_tree[0] = true;
    for j in 1..k {
        best[j] = (cliques[0].intersection_len(&cliques[j]), 0);
    }
    for _ in 1..k {
        let j = (0..k).filter(|&j| !in_tree[j]).max_by_key(|&j| (best[j].0, std::cmp::Reverse(j))).expect("left");
        in_tree[j] = true;
        edges.push((best[j].1, j));
        for i in 0..k {
            if !in_tree[i] {
                let w = cliques[j].intersection_len(&cliques[i]);
                if w > best[i].0 {
                    best[i] = (w, j);
                }
            }
        }
    }
    let tree = DiscreteTree::new(k, &edges)?;
    let sets = (0..n).map(|v| VertexSet::from_iter(k, (0..k).filter(|&i| cliques[i].contains(v)))).collect();
    SubtreeFamily::new(tree, sets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::is_chordal;

    fn fig2_family() -> SubtreeFamily {
        // Star with three branches of length 3: 0 center, tips 3, 6, 9.
        let tree = DiscreteTree::star(3, 3);
        let s = |v: &[usize]| VertexSet::from_iter(10, v.iter().copied());
        SubtreeFamily::new(
            tree,
            vec![s(&[0, 1, 4, 5, 7]), s(&[0, 1, 2, 4, 7, 8]), s(&[0, 1, 4, 7]), s(&[3]), s(&[6]), s(&[9])],
        )
        .unwrap()
    }

    #[test]
    fn intersection_graph_examples() {
        let t = DiscreteTree::path(3);
        let whole = SubtreeFamily::new(t.clone(), vec![VertexSet::full(3); 4]).unwrap();
        assert_eq!(whole.intersection_graph(), Graph::complete(4));
        let single = SubtreeFamily::new(t, (0..3).map(|i| VertexSet::from_iter(3, [i])).collect()).unwrap();
        assert_eq!(single.intersection_graph(), Graph::empty(3));
        let g = fig2_family().intersection_graph();
        assert_eq!(g, Graph::from_edges(6, &[(0, 1), (0, 2), (1, 2)]).unwrap());
        assert!(is_chordal(&g));
    }

    #[test]
    fn invalid_subtrees_rejected() {
        let t = DiscreteTree::path(3);
        assert!(SubtreeFamily::new(t.clone(), vec![VertexSet::new(3)]).is_err());
        assert!(SubtreeFamily::new(t, vec![VertexSet::from_iter(3, [0, 2])]).is_err());
    }

    #[test]
    fn restrict_examples() {
        let f = fig2_family();
        assert_eq!(f.restrict(&VertexSet::full(10)).unwrap(), f);
        let t = DiscreteTree::path(5);
        let s = |v: &[usize]| VertexSet::from_iter(5, v.iter().copied());
        let f = SubtreeFamily::new(t, vec![s(&[0, 1, 2]), s(&[2, 3]), s(&[1, 2, 3, 4])]).unwrap();
        let r = f.restrict(&s(&[2])).unwrap();
        assert!(r.subtrees().iter().all(|x| x.len() == 1));
        assert_eq!(r.intersection_graph(), Graph::complete(3));
        assert!(f.restrict(&s(&[4])).is_err());
    }

    #[test]
    fn minimality_examples() {
        let p = SubtreeFamily::new(DiscreteTree::point(), vec![VertexSet::full(1); 3]).unwrap();
        assert!(is_minimal(&p));
        assert!(is_minimal(&fig2_family()));
        let mid = SubtreeFamily::new(DiscreteTree::path(3), vec![VertexSet::from_iter(3, [1]); 2]).unwrap();
        assert!(!is_minimal(&mid));
        let m = minimalize(&mid);
        assert!(is_minimal(&m));
        assert_eq!(m.tree().node_count(), 1);
        assert_eq!(minimalize(&fig2_family()), fig2_family());
    }

    #[test]
    fn clique_tree_examples() {
        let k4 = clique_tree_representation(&Graph::complete(4)).unwrap();
        assert_eq!(k4.tree().node_count(), 1);
        let p3 = clique_tree_representation(&Graph::path(3)).unwrap();
        assert_eq!(p3.tree().node_count(), 2);
        assert_eq!(p3.subtree(1).len(), 2);
        assert_eq!(p3.intersection_graph(), Graph::path(3));
        assert!(matches!(clique_tree_representation(&Graph::cycle(4)), Err(Error::NotChordal)));
        let disconnected = Graph::from_edges(5, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(clique_tree_representation(&disconnected).unwrap().intersection_graph(), disconnected);
    }

    #[test]
    fn text_round_trip() {
        let f = fig2_family();
        let back = SubtreeFamily::from_text(&f.to_text()).unwrap();
        assert_eq!(back, f);
        assert!(SubtreeFamily::from_text("tree 2\nedge 0 1\nsubtree 0: 5\n").is_err());
    }

    #[test]
    fn tree_helpers() {
        let t = DiscreteTree::star(3, 2);
        assert_eq!(t.leaves().to_vec(), vec![2, 4, 6]);
        assert_eq!(t.branch_nodes().to_vec(), vec![0]);
        assert_eq!(t.path_between(2, 4), vec![2, 1, 0, 3, 4]);
        assert_eq!(t.span(&VertexSet::from_iter(7, [2, 4])).to_vec(), vec![0, 1, 2, 3, 4]);
        assert_eq!(t.subtrees_containing(0, &VertexSet::full(7), 1000).unwrap().len(), 27);
        // Subtrees of a path on 4 nodes: 4 + 3 + 2 + 1.
        assert_eq!(DiscreteTree::path(4).subtrees(&VertexSet::full(4), 100).unwrap().len(), 10);
        let mut p = DiscreteTree::path(2);
        let x = p.subdivide(0, 1);
        assert_eq!(p.path_between(0, 1), vec![0, x, 1]);
        assert!(DiscreteTree::new(3, &[(0, 1), (0, 1)]).is_err());
        assert!(DiscreteTree::new(4, &[(0, 1), (1, 2), (2, 0)]).is_err());
    }
}
