use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use rayon::prelude::*;

use super::canon::LabelledTree;
use super::{DiscreteTree, SubtreeFamily};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::guards::Guards;
use crate::oracles::is_chordal;
use crate::set::VertexSet;

/// Slots inserted into every edge `y-z` before a vertex is placed, labelled
/// `λy ∩ λz`. A reduced tree has no event inside an edge, so a new subtree
/// lying inside one is a point or a segment: two slots cover both.
const CHAIN: usize = 2;
/// Prefix lengths into a chain: end at the near node, or inside the edge.
const PREFIXES: [usize; 2] = [0, 1];

/// `(3n)^{2n²}`.
pub fn representation_count_ceiling(n: usize) -> BigUint {
    BigUint::from(3 * n).pow((2 * n * n) as u32)
}

/// All minimal chordal representations of `g`, one per equivalence class
/// (isomorphism of the reduced labelled tree), in canonical form.
pub fn enumerate_minimal_representations(g: &Graph, guards: &Guards) -> Result<Vec<SubtreeFamily>> {
    let n = g.n();
    if n > guards.enumerate_max_n {
        return Err(Error::Guard(format!("enumeration needs n <= {}, got {n}", guards.enumerate_max_n)));
    }
    if !is_chordal(g) {
        return Err(Error::NotChordal);
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let found: Vec<BTreeMap<String, LabelledTree>> =
        shapes(n).par_iter().map(|shape| search_shape(shape, g, guards)).collect::<Result<_>>()?;
    let mut all = BTreeMap::new();
    for m in found {
        all.extend(m);
    }
    Ok(all.values().map(|t| t.to_family(n)).collect())
}

/// Trees without degree-2 nodes and with at most `max_leaves` leaves, up to
/// isomorphism.
fn shapes(max_leaves: usize) -> Vec<DiscreteTree> {
    let mut out = vec![DiscreteTree::point()];
    if max_leaves >= 2 {
        out.push(DiscreteTree::path(2));
    }
    let mut seen = std::collections::HashSet::new();
    for m in 4..=(2 * max_leaves).saturating_sub(2) {
        let len = m - 2;
        let mut seq = vec![0usize; len];
        loop {
            let mut count = vec![0usize; m];
            for &x in &seq {
                count[x] += 1;
            }
            let leaves = count.iter().filter(|&&c| c == 0).count();
            if !count.contains(&1) && leaves <= max_leaves {
                let t = prufer_decode(&seq, m);
                if seen.insert(LabelledTree::from_shape(&t).canonical_key()) {
                    out.push(t);
                }
            }
            let mut i = 0;
            while i < len {
                seq[i] += 1;
                if seq[i] < m {
                    break;
                }
                seq[i] = 0;
                i += 1;
            }
            if i == len {
                break;
            }
        }
    }
    out
}

fn prufer_decode(seq: &[usize], m: usize) -> DiscreteTree {
    let mut degree = vec![1; m];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(m - 1);
    for &x in seq {
        let leaf = (0..m).find(|&v| degree[v] == 1).expect("a leaf");
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..m).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    DiscreteTree::new(m, &edges).expect("prufer tree")
}

fn search_shape(shape: &DiscreteTree, g: &Graph, guards: &Guards) -> Result<BTreeMap<String, LabelledTree>> {
    let n = g.n();
    let mut states = vec![LabelledTree::from_shape(shape)];
    for v in 0..n {
        let placed: u64 = (1u64 << v) - 1;
        let nbr = g.neighbors(v).filter(|&w| w < v).fold(0u64, |a, w| a | 1 << w);
        let non = placed & !nbr;
        let mut next: HashMap<String, LabelledTree> = HashMap::new();
        for state in &states {
            extend_state(state, v, nbr, non, guards, &mut |mut t: LabelledTree| {
                t.reduce();
                if unmet_leaves(&t, v + 1) < n - v {
                    next.entry(t.canonical_key()).or_insert(t);
                }
            })?;
            if next.len() > guards.enumerate_max_states {
                return Err(Error::Guard(format!("more than {} partial representations", guards.enumerate_max_states)));
            }
        }
        let mut keyed: Vec<(String, LabelledTree)> = next.into_iter().collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        states = keyed.into_iter().map(|(_, t)| t).collect();
    }
    Ok(states.into_iter().filter(|t| unmet_leaves(t, n) == 0).map(|t| (t.canonical_key(), t)).collect())
}

/// Leaves with no vertex among the first `placed` whose subtree is exactly
/// that leaf.
fn unmet_leaves(t: &LabelledTree, placed: usize) -> usize {
    let mut count = vec![0usize; placed];
    for &l in &t.label {
        for (u, c) in count.iter_mut().enumerate() {
            *c += (l >> u & 1) as usize;
        }
    }
    (0..t.len())
        .filter(|&x| t.adj[x].len() <= 1)
        .filter(|&x| !(0..placed).any(|u| count[u] == 1 && t.label[x] >> u & 1 == 1))
        .count()
}

struct Chain {
    ends: (usize, usize),
    nodes: [usize; CHAIN],
}

/// Every way to place vertex `v` on `state` refined by chains, as unreduced
/// trees.
fn extend_state(
    state: &LabelledTree,
    v: usize,
    nbr: u64,
    non: u64,
    guards: &Guards,
    emit: &mut dyn FnMut(LabelledTree),
) -> Result<()> {
    let mut expanded = state.clone();
    let mut chains = Vec::new();
    for (y, z) in state.edges() {
        expanded.unlink(y, z);
        let (ly, lz) = (state.label[y], state.label[z]);
        let labels = [ly & lz; CHAIN];
        let mut nodes = [0; CHAIN];
        let mut prev = y;
        for (i, &l) in labels.iter().enumerate() {
            nodes[i] = expanded.push(l);
            expanded.link(prev, nodes[i]);
            prev = nodes[i];
        }
        expanded.link(prev, z);
        chains.push(Chain { ends: (y, z), nodes });
    }
    let bit = 1u64 << v;
    let ok = |x: usize| expanded.label[x] & non == 0;
    let place = |nodes: &[usize]| {
        let mut t = expanded.clone();
        for &x in nodes {
            t.label[x] |= bit;
        }
        t
    };

    // Entirely inside one chain.
    for ch in &chains {
        for i in 0..CHAIN {
            let mut cover = 0;
            for j in i..CHAIN {
                if !ok(ch.nodes[j]) {
                    break;
                }
                cover |= expanded.label[ch.nodes[j]];
                if cover & nbr == nbr {
                    emit(place(&ch.nodes[i..=j]));
                }
            }
        }
    }

    // Through at least one node of the state.
    let base = DiscreteTree::new(state.len(), &state.edges()).expect("state is a tree");
    let allowed = VertexSet::from_iter(state.len(), (0..state.len()).filter(|&x| ok(x)));
    for core in base.subtrees(&allowed, guards.enumerate_max_states)? {
        let mut nodes: Vec<usize> = core.to_vec();
        let cover = nodes.iter().fold(0, |a, &x| a | state.label[x]);
        let mut options: Vec<Vec<(Vec<usize>, u64)>> = Vec::new();
        for ch in &chains {
            let (y, z) = ch.ends;
            match (core.contains(y), core.contains(z)) {
                (true, true) => {
                    nodes.extend_from_slice(&ch.nodes);
                }
                (false, false) => {}
                (inside_y, _) => {
                    let seq: Vec<usize> =
                        if inside_y { ch.nodes.to_vec() } else { ch.nodes.iter().rev().copied().collect() };
                    let opts: Vec<(Vec<usize>, u64)> = PREFIXES
                        .iter()
                        .filter(|&&len| seq[..len].iter().all(|&x| ok(x)))
                        .map(|&len| (seq[..len].to_vec(), seq[..len].iter().fold(0, |a, &x| a | expanded.label[x])))
                        .collect();
                    options.push(opts);
                }
            }
        }
        let mut pick = vec![0usize; options.len()];
        loop {
            let extra = pick.iter().zip(&options).fold(0, |a, (&i, o)| a | o[i].1);
            if (cover | extra) & nbr == nbr {
                let mut all = nodes.clone();
                for (&i, o) in pick.iter().zip(&options) {
                    all.extend_from_slice(&o[i].0);
                }
                emit(place(&all));
            }
            let mut k = 0;
            while k < pick.len() {
                pick[k] += 1;
                if pick[k] < options[k].len() {
                    break;
                }
                pick[k] = 0;
                k += 1;
            }
            if k == pick.len() {
                break;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_counts() {
        // Point, edge, and the star with 3 leaves.
        assert_eq!(shapes(3).len(), 3);
        // Adds the 4-star and the tree with two branch nodes.
        assert_eq!(shapes(4).len(), 5);
    }

    #[test]
    fn single_vertex_has_one() {
        let reps = enumerate_minimal_representations(&Graph::empty(1), &Guards::default()).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].tree().node_count(), 1);
    }

    #[test]
    fn small_graphs() {
        let guards = Guards::default();
        // K2: only the point. E2: only an edge with one singleton per end.
        assert_eq!(enumerate_minimal_representations(&Graph::complete(2), &guards).unwrap().len(), 1);
        let e2 = enumerate_minimal_representations(&Graph::empty(2), &guards).unwrap();
        assert_eq!(e2.len(), 1);
        assert_eq!(e2[0].tree().node_count(), 2);
        for g in [Graph::path(3), Graph::empty(3), Graph::complete(3)] {
            let reps = enumerate_minimal_representations(&g, &guards).unwrap();
            assert!(!reps.is_empty());
            for r in &reps {
                assert_eq!(r.intersection_graph(), g);
                assert!(r.is_minimal());
            }
        }
        assert!(enumerate_minimal_representations(&Graph::cycle(4), &guards).is_err());
    }

    #[test]
    fn ceiling_at_two() {
        assert_eq!(representation_count_ceiling(2), BigUint::from(1_679_616u32));
    }
}
