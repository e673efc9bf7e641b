//! Cross-checks the representation enumerator against brute force over all
//! small trees.

use std::collections::BTreeSet;

use chordtest::oracles::{all_graphs, is_chordal};
use chordtest::tree::{canonical_key, enumerate_minimal_representations, DiscreteTree, SubtreeFamily};
use chordtest::{Graph, Guards, VertexSet};

/// Rooted AHU encoding, minimised over roots.
fn tree_code(adj: &[Vec<usize>]) -> String {
    fn code(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
        let mut kids: Vec<String> = adj[v].iter().filter(|&&w| w != parent).map(|&w| code(adj, w, v)).collect();
        kids.sort();
        format!("({})", kids.concat())
    }
    (0..adj.len()).map(|r| code(adj, r, usize::MAX)).min().unwrap_or_default()
}

/// One tree per isomorphism class on `m` nodes, from Prüfer sequences.
fn trees(m: usize) -> Vec<Vec<(usize, usize)>> {
    if m == 1 {
        return vec![Vec::new()];
    }
    if m == 2 {
        return vec![vec![(0, 1)]];
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let len = m - 2;
    for code_index in 0..m.pow(len as u32) {
        let mut seq = Vec::with_capacity(len);
        let mut c = code_index;
        for _ in 0..len {
            seq.push(c % m);
            c /= m;
        }
        let mut degree = vec![1; m];
        for &x in &seq {
            degree[x] += 1;
        }
        let mut edges = Vec::new();
        for &x in &seq {
            let leaf = (0..m).find(|&v| degree[v] == 1).unwrap();
            edges.push((leaf, x));
            degree[leaf] -= 1;
            degree[x] -= 1;
        }
        let rest: Vec<usize> = (0..m).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        let mut adj = vec![Vec::new(); m];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        if seen.insert(tree_code(&adj)) {
            out.push(edges);
        }
    }
    out
}

fn connected_masks(m: usize, edges: &[(usize, usize)]) -> Vec<u32> {
    (1u32..1 << m)
        .filter(|&mask| {
            let start = mask.trailing_zeros();
            let mut seen = 1u32 << start;
            let mut grew = true;
            while grew {
                grew = false;
                for &(a, b) in edges {
                    let (a, b) = (1u32 << a, 1u32 << b);
                    if mask & a != 0 && mask & b != 0 && (seen & a != 0) != (seen & b != 0) {
                        seen |= a | b;
                        grew = true;
                    }
                }
            }
            seen == mask
        })
        .collect()
}

/// Keys of every minimal representation of `g` on trees with at most
/// `max_nodes` nodes.
fn brute_force_keys(g: &Graph, max_nodes: usize) -> BTreeSet<String> {
    let n = g.n();
    let mut keys = BTreeSet::new();
    for m in 1..=max_nodes {
        for edges in trees(m) {
            let masks = connected_masks(m, &edges);
            let mut degree = vec![0; m];
            for &(a, b) in &edges {
                degree[a] += 1;
                degree[b] += 1;
            }
            let leaves: Vec<usize> = (0..m).filter(|&x| degree[x] <= 1).collect();
            let mut chosen = Vec::with_capacity(n);
            search(g, &masks, &leaves, m, &edges, &mut chosen, &mut keys);
        }
    }
    keys
}

fn search(
    g: &Graph,
    masks: &[u32],
    leaves: &[usize],
    m: usize,
    edges: &[(usize, usize)],
    chosen: &mut Vec<u32>,
    keys: &mut BTreeSet<String>,
) {
    let v = chosen.len();
    if v == g.n() {
        if leaves.iter().all(|&l| chosen.contains(&(1 << l))) {
            let tree = DiscreteTree::new(m, edges).unwrap();
            let sets = chosen
                .iter()
                .map(|&mask| VertexSet::from_iter(m, (0..m).filter(|&x| mask >> x & 1 == 1)))
                .collect();
            keys.insert(canonical_key(&SubtreeFamily::new(tree, sets).unwrap()));
        }
        return;
    }
    for &mask in masks {
        if (0..v).all(|u| (chosen[u] & mask != 0) == g.has_edge(u, v)) {
            chosen.push(mask);
            search(g, masks, leaves, m, edges, chosen, keys);
            chosen.pop();
        }
    }
}

fn check_up_to(n_max: usize) {
    let guards = Guards::default();
    for n in 1..=n_max {
        // Observed maximum of reduced minimal representations for n <= 4;
        // `brute_force_saturates` checks one extra node changes nothing.
        let max_nodes = (2 * n).saturating_sub(1).max(1);
        for g in all_graphs(n).filter(is_chordal) {
            let reps = enumerate_minimal_representations(&g, &guards).unwrap();
            let mut keys = BTreeSet::new();
            for r in &reps {
                assert_eq!(r.intersection_graph(), g);
                assert!(r.is_minimal());
                assert!(keys.insert(canonical_key(r)), "duplicate class");
            }
            assert_eq!(keys, brute_force_keys(&g, max_nodes), "graph {:?}", g.edges().collect::<Vec<_>>());
        }
    }
}

#[test]
fn enumeration_matches_brute_force_up_to_three_vertices() {
    check_up_to(3);
}

#[test]
fn enumeration_matches_brute_force_on_four_vertices() {
    check_up_to(4);
}

#[test]
fn brute_force_saturates() {
    let g = Graph::from_edges(4, &[(0, 1)]).unwrap();
    let reps = enumerate_minimal_representations(&g, &Guards::default()).unwrap();
    assert_eq!(reps.len(), 41);
    assert_eq!(brute_force_keys(&g, 7), brute_force_keys(&g, 8));
}

#[test]
fn segments_and_points_differ() {
    // Three isolated vertices: the middle subtree on a path is a point or a
    // segment, besides the star.
    let reps = enumerate_minimal_representations(&Graph::empty(3), &Guards::default()).unwrap();
    assert_eq!(reps.len(), 7);
}

