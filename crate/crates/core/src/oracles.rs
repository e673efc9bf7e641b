//! Exact, brute-force ground truth used to validate the testers.

use serde::{Deserialize, Serialize};

use crate::coloring::{ColorSet, SetColoringInstance};
use crate::error::{Error, Result};
use crate::graph::{BitIter, Graph};
use crate::guards::Guards;
use crate::m2::BipartiteView;
use crate::set::{VertexSet, WORD};

/// Perfect elimination order by iterated removal of the lowest-id simplicial
/// vertex, or `None` if some stage has no simplicial vertex.
pub fn perfect_elimination_order(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    let mut alive = VertexSet::full(n);
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = alive.iter().find(|&v| {
            let nb = g.neighbors_in(v, &alive);
            nb.iter().all(|a| {
                let mut rest = nb.clone();
                rest.remove(a);
                rest.is_subset(&g.neighbor_set(a))
            })
        })?;
        alive.remove(v);
        order.push(v);
    }
    Some(order)
}

pub fn is_chordal(g: &Graph) -> bool {
    perfect_elimination_order(g).is_some()
}

/// Checks that each vertex of `order` is simplicial among the later ones.
pub fn is_perfect_elimination_order(g: &Graph, order: &[usize]) -> bool {
    if order.len() != g.n() {
        return false;
    }
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &v) in order.iter().enumerate() {
        if v >= g.n() || pos[v] != usize::MAX {
            return false;
        }
        pos[v] = i;
    }
    order.iter().enumerate().all(|(i, &v)| {
        let later: Vec<usize> = g.neighbors(v).filter(|&w| pos[w] > i).collect();
        later.iter().enumerate().all(|(j, &a)| later[j + 1..].iter().all(|&b| g.has_edge(a, b)))
    })
}

/// An induced cycle of length at least 4, found independently of the
/// elimination order: for each vertex `v` and non-adjacent neighbors `x, y`,
/// a shortest `x`-`y` path avoiding the rest of `N[v]` closes an induced cycle.
pub fn find_induced_long_cycle(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    for v in 0..n {
        let nb: Vec<usize> = g.neighbors(v).collect();
        for (i, &x) in nb.iter().enumerate() {
            for &y in &nb[i + 1..] {
                if g.has_edge(x, y) {
                    continue;
                }
                let mut blocked = g.neighbor_set(v);
                blocked.insert(v);
                blocked.remove(x);
                blocked.remove(y);
                if let Some(path) = shortest_path_avoiding(g, x, y, &blocked) {
                    let mut cycle = vec![v];
                    cycle.extend(path);
                    debug_assert!(is_induced_cycle(g, &cycle));
                    return Some(cycle);
                }
            }
        }
    }
    None
}

fn shortest_path_avoiding(g: &Graph, from: usize, to: usize, blocked: &VertexSet) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; g.n()];
    parent[from] = from;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(a) = queue.pop_front() {
        if a == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for b in g.neighbors(a) {
            if parent[b] == usize::MAX && !blocked.contains(b) {
                parent[b] = a;
                queue.push_back(b);
            }
        }
    }
    None
}

/// True if `cycle` lists distinct vertices forming an induced cycle of
/// length at least 4 in the given cyclic order.
pub fn is_induced_cycle(g: &Graph, cycle: &[usize]) -> bool {
    let k = cycle.len();
    if k < 4 || cycle.iter().any(|&v| v >= g.n()) {
        return false;
    }
    let distinct: std::collections::BTreeSet<_> = cycle.iter().collect();
    if distinct.len() != k {
        return false;
    }
    (0..k).all(|i| {
        (i + 1..k).all(|j| {
            let consecutive = j == i + 1 || (i == 0 && j == k - 1);
            g.has_edge(cycle[i], cycle[j]) == consecutive
        })
    })
}

/// Least number of pair edits (at most `budget`) making `g` chordal.
pub fn edit_distance_to_chordal(g: &Graph, budget: usize, guards: &Guards) -> Result<Option<usize>> {
    if g.n() > guards.edit_max_n || budget > guards.edit_max_budget {
        return Err(Error::Guard(format!(
            "edit distance needs n <= {} and budget <= {}, got n = {}, budget = {budget}",
            guards.edit_max_n,
            guards.edit_max_budget,
            g.n()
        )));
    }
    let pairs: Vec<(usize, usize)> =
        (0..g.n()).flat_map(|u| (u + 1..g.n()).map(move |v| (u, v))).collect();
    let mut h = g.clone();
    for d in 0..=budget {
        if edit_search(&mut h, &pairs, 0, d) {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

fn edit_search(h: &mut Graph, pairs: &[(usize, usize)], start: usize, left: usize) -> bool {
    if left == 0 {
        return is_chordal(h);
    }
    for i in start..pairs.len() {
        let (u, v) = pairs[i];
        let had = h.has_edge(u, v);
        h.set_edge(u, v, !had);
        let found = edit_search(h, pairs, i + 1, left - 1);
        h.set_edge(u, v, had);
        if found {
            return true;
        }
    }
    false
}

/// A maximum clique of a chordal graph, read off a perfect elimination order.
pub fn max_clique_set_chordal(g: &Graph) -> Result<VertexSet> {
    let order = perfect_elimination_order(g).ok_or(Error::NotChordal)?;
    let mut later = VertexSet::full(g.n());
    let mut best = VertexSet::new(g.n());
    for &v in &order {
        let mut clique = g.neighbors_in(v, &later);
        clique.insert(v);
        if clique.len() > best.len() {
            best = clique;
        }
        later.remove(v);
    }
    Ok(best)
}

pub fn max_clique_chordal(g: &Graph) -> Result<usize> {
    max_clique_set_chordal(g).map(|c| c.len())
}

/// Exhaustive clique number, for cross-checking at small n.
pub fn max_clique_brute(g: &Graph) -> usize {
    fn grow(g: &Graph, cand: VertexSet, size: usize, best: &mut usize) {
        *best = (*best).max(size);
        if size + cand.len() <= *best {
            return;
        }
        let mut cand = cand;
        while let Some(v) = cand.iter().next() {
            grow(g, g.neighbors_in(v, &cand), size + 1, best);
            cand.remove(v);
            if size + cand.len() <= *best {
                return;
            }
        }
    }
    let mut best = 0;
    grow(g, VertexSet::full(g.n()), 0, &mut best);
    best
}

/// An induced matching `l1 r1, l2 r2` in the bipartite view.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct M2 {
    pub l1: usize,
    pub l2: usize,
    pub r1: usize,
    pub r2: usize,
}

impl M2 {
    pub fn is_valid(&self, view: &BipartiteView<'_>) -> bool {
        let g = view.host();
        let (l, r) = (view.left(), view.right());
        l.contains(self.l1)
            && l.contains(self.l2)
            && r.contains(self.r1)
            && r.contains(self.r2)
            && self.l1 != self.l2
            && self.r1 != self.r2
            && g.has_edge(self.l1, self.r1)
            && g.has_edge(self.l2, self.r2)
            && !g.has_edge(self.l1, self.r2)
            && !g.has_edge(self.l2, self.r1)
    }
}

/// Lexicographically first M2 over `(l1, l2)` pairs; edges inside a side
/// are ignored.
pub fn find_m2(view: &BipartiteView<'_>) -> Result<Option<M2>> {
    view.validate()?;
    let g = view.host();
    let left = view.left().to_vec();
    let rows: Vec<VertexSet> = left.iter().map(|&l| g.neighbors_in(l, view.right())).collect();
    for i in 0..left.len() {
        for j in i + 1..left.len() {
            let only_i = rows[i].difference(&rows[j]);
            let only_j = rows[j].difference(&rows[i]);
            if let (Some(r1), Some(r2)) = (only_i.iter().next(), only_j.iter().next()) {
                return Ok(Some(M2 { l1: left[i], l2: left[j], r1, r2 }));
            }
        }
    }
    Ok(None)
}

/// Greedy family of induced C4s with pairwise disjoint vertex-pair sets,
/// each listed in cyclic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct C4Packing {
    pub copies: Vec<[usize; 4]>,
}

impl C4Packing {
    pub fn value(&self) -> usize {
        self.copies.len()
    }
}

/// Scans vertex quadruples `a < b < c < d` in lexicographic order and
/// accepts each induced C4 whose six pairs are all unused. Any three
/// vertices of a C4 induce a P3, which drives the pruning.
pub fn c4_packing(g: &Graph) -> C4Packing {
    let n = g.n();
    let mut used = Graph::empty(n);
    let mut copies = Vec::new();
    for a in 0..n {
        'b: for b in a + 1..n {
            if used.has_edge(a, b) {
                continue;
            }
            for c in b + 1..n {
                if used.has_edge(a, c) || used.has_edge(b, c) {
                    continue;
                }
                let (ab, ac, bc) = (g.has_edge(a, b), g.has_edge(a, c), g.has_edge(b, c));
                let (mid, e1, e2) = match (ab, ac, bc) {
                    (true, true, false) => (a, b, c),
                    (true, false, true) => (b, a, c),
                    (false, true, true) => (c, a, b),
                    _ => continue,
                };
                let (r1, r2, rm) = (g.row(e1), g.row(e2), g.row(mid));
                let (ua, ub, uc) = (used.row(a), used.row(b), used.row(c));
                for w in c / WORD..r1.len() {
                    let mut bits = r1[w] & r2[w] & !rm[w] & !(ua[w] | ub[w] | uc[w]);
                    if w == c / WORD {
                        let shift = c % WORD + 1;
                        bits &= if shift == WORD { 0 } else { u64::MAX << shift };
                    }
                    if let Some(bit) = BitIter(bits).find(|&bit| w * WORD + bit != mid) {
                        let d = w * WORD + bit;
                        let cycle = [e1, mid, e2, d];
                        for i in 0..4 {
                            for j in i + 1..4 {
                                used.add_edge(cycle[i], cycle[j]);
                            }
                        }
                        copies.push(cycle);
                        continue 'b;
                    }
                }
            }
        }
    }
    C4Packing { copies }
}

/// Certified lower bound on the edit distance to chordality.
pub fn c4_packing_lower_bound(g: &Graph) -> usize {
    c4_packing(g).value()
}

/// Verifies a packing: every copy is an induced C4 and no pair is shared.
pub fn verify_c4_packing(g: &Graph, packing: &C4Packing) -> bool {
    let mut used = std::collections::HashSet::new();
    packing.copies.iter().all(|cyc| {
        is_induced_cycle(g, cyc)
            && (0..4).all(|i| (i + 1..4).all(|j| used.insert((cyc[i].min(cyc[j]), cyc[i].max(cyc[j])))))
    })
}

/// Minimum number of conflicting pairs over all total colorings, by
/// branch and bound.
pub fn exact_min_conflicts(inst: &SetColoringInstance, guards: &Guards) -> Result<usize> {
    exact_min_conflict_coloring(inst, guards).map(|(c, _)| c)
}

/// A total coloring attaining the minimum, first in list order.
pub fn exact_min_conflict_coloring(inst: &SetColoringInstance, guards: &Guards) -> Result<(usize, Vec<ColorSet>)> {
    let n = inst.n();
    let product = (0..n).try_fold(1u128, |acc, v| {
        let p = acc.saturating_mul(inst.list(v).len() as u128);
        (p <= guards.coloring_max_product).then_some(p)
    });
    if product.is_none() {
        return Err(Error::Guard(format!(
            "coloring product exceeds {}",
            guards.coloring_max_product
        )));
    }
    let mut best = (n * n.saturating_sub(1) / 2 + 1, Vec::new());
    let mut phi: Vec<ColorSet> = Vec::with_capacity(n);
    min_conflicts_rec(inst, &mut phi, 0, &mut best);
    Ok(best)
}

fn min_conflicts_rec(inst: &SetColoringInstance, phi: &mut Vec<ColorSet>, cost: usize, best: &mut (usize, Vec<ColorSet>)) {
    let v = phi.len();
    if v == inst.n() {
        if cost < best.0 {
            *best = (cost, phi.clone());
        }
        return;
    }
    for &c in inst.list(v) {
        let added = (0..v).filter(|&u| !inst.pair_ok_unchecked(u, phi[u], v, c)).count();
        if cost + added < best.0 {
            phi.push(c);
            min_conflicts_rec(inst, phi, cost + added, best);
            phi.pop();
        }
    }
}

/// Every labeled graph on `n` vertices, by edge bitmask over the pairs
/// `(0,1), (0,2), .., (n-2,n-1)`.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    assert!(pairs.len() < 40, "too many graphs to enumerate");
    (0u64..1 << pairs.len()).map(move |mask| {
        let mut g = Graph::empty(n);
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g.add_edge(u, v);
            }
        }
        g
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::encode_k_colorability;

    /// Naive scan over all ordered cycles.
    fn has_long_cycle_naive(g: &Graph) -> bool {
        fn extend(g: &Graph, path: &mut Vec<usize>) -> bool {
            let k = path.len();
            if k >= 4 && is_induced_cycle(g, path) {
                return true;
            }
            let last = *path.last().unwrap();
            for w in g.neighbors(last).collect::<Vec<_>>() {
                if w <= path[0] || path.contains(&w) {
                    continue;
                }
                // induced path so far: w adjacent only to last among interior
                if k > 2 && path[1..k - 1].iter().any(|&p| g.has_edge(p, w)) {
                    continue;
                }
                path.push(w);
                if extend(g, path) {
                    return true;
                }
                path.pop();
            }
            false
        }
        (0..g.n()).any(|s| extend(g, &mut vec![s]))
    }

    #[test]
    fn chordality_examples() {
        assert!(!is_chordal(&Graph::cycle(4)));
        assert!(is_chordal(&Graph::path(7)));
        assert!(is_chordal(&Graph::star(5)));
        let k5 = Graph::complete(5);
        let order = perfect_elimination_order(&k5).unwrap();
        assert!(is_perfect_elimination_order(&k5, &order));
        let c5 = find_induced_long_cycle(&Graph::cycle(5)).unwrap();
        assert_eq!(c5.len(), 5);
        assert!(find_induced_long_cycle(&Graph::path(5)).is_none());
    }

    #[test]
    fn cycle_finder_matches_naive_n5() {
        for g in all_graphs(5) {
            let naive = has_long_cycle_naive(&g);
            assert_eq!(naive, !is_chordal(&g), "{g:?}");
            assert_eq!(find_induced_long_cycle(&g).is_some(), naive);
        }
    }

    #[test]
    fn edit_distance_examples() {
        let guards = Guards::default();
        assert_eq!(edit_distance_to_chordal(&Graph::path(5), 2, &guards).unwrap(), Some(0));
        assert_eq!(edit_distance_to_chordal(&Graph::cycle(5), 2, &guards).unwrap(), Some(1));
        assert_eq!(edit_distance_to_chordal(&Graph::cycle(4), 2, &guards).unwrap(), Some(1));
        assert!(edit_distance_to_chordal(&Graph::cycle(11), 1, &guards).is_err());
        assert!(edit_distance_to_chordal(&Graph::cycle(6), 4, &guards).is_err());
    }

    #[test]
    fn c5_single_edits_by_exhaustion() {
        let c5 = Graph::cycle(5);
        let mut fixing_deletions = 0;
        for u in 0..5 {
            for v in u + 1..5 {
                let mut h = c5.clone();
                h.set_edge(u, v, !c5.has_edge(u, v));
                if c5.has_edge(u, v) && is_chordal(&h) {
                    fixing_deletions += 1;
                }
            }
        }
        assert_eq!(fixing_deletions, 5);
    }

    #[test]
    fn clique_examples() {
        assert_eq!(max_clique_chordal(&Graph::complete(6)).unwrap(), 6);
        assert_eq!(max_clique_chordal(&Graph::star(4)).unwrap(), 2);
        let mut fig = Graph::empty(6);
        fig.add_edge(0, 1);
        fig.add_edge(0, 2);
        fig.add_edge(1, 2);
        assert_eq!(max_clique_chordal(&fig).unwrap(), 3);
        assert!(matches!(max_clique_chordal(&Graph::cycle(4)), Err(Error::NotChordal)));
    }

    #[test]
    fn m2_examples() {
        let mut g = Graph::empty(4);
        g.add_edge(0, 2);
        g.add_edge(1, 3);
        let l = VertexSet::from_iter(4, [0, 1]);
        let r = VertexSet::from_iter(4, [2, 3]);
        let view = BipartiteView::new(&g, l.clone(), r.clone()).unwrap();
        let m = find_m2(&view).unwrap().unwrap();
        assert!(m.is_valid(&view));
        let kb = Graph::complete_bipartite(2, 2);
        assert!(find_m2(&BipartiteView::new(&kb, l.clone(), r.clone()).unwrap()).unwrap().is_none());
        let e = Graph::empty(4);
        assert!(find_m2(&BipartiteView::new(&e, l, r).unwrap()).unwrap().is_none());
    }

    fn naive_packing(g: &Graph) -> usize {
        let n = g.n();
        let mut used = std::collections::HashSet::new();
        let mut count = 0;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        let q = [a, b, c, d];
                        let pairs: Vec<_> =
                            (0..4).flat_map(|i| (i + 1..4).map(move |j| (q[i], q[j]))).collect();
                        if pairs.iter().any(|p| used.contains(p)) {
                            continue;
                        }
                        let induced = [[a, b, c, d], [a, b, d, c], [a, c, b, d]]
                            .iter()
                            .any(|cyc| is_induced_cycle(g, cyc));
                        if induced {
                            used.extend(pairs);
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn packing_matches_naive_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.gen_range(4..11);
            let mut g = Graph::empty(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        g.add_edge(u, v);
                    }
                }
            }
            let p = c4_packing(&g);
            assert!(verify_c4_packing(&g, &p));
            assert_eq!(p.value(), naive_packing(&g));
        }
        assert_eq!(c4_packing_lower_bound(&Graph::cycle(4)), 1);
        assert_eq!(c4_packing_lower_bound(&Graph::complete(6)), 0);
    }

    #[test]
    fn min_conflicts_examples() {
        let guards = Guards::default();
        let k3 = encode_k_colorability(&Graph::complete(3), 2).unwrap();
        assert_eq!(exact_min_conflicts(&k3, &guards).unwrap(), 1);
        let c5 = encode_k_colorability(&Graph::cycle(5), 2).unwrap();
        assert_eq!(exact_min_conflicts(&c5, &guards).unwrap(), 1);
        let p4 = encode_k_colorability(&Graph::path(4), 2).unwrap();
        assert_eq!(exact_min_conflicts(&p4, &guards).unwrap(), 0);
        let k4 = encode_k_colorability(&Graph::complete(4), 2).unwrap();
        assert_eq!(exact_min_conflicts(&k4, &guards).unwrap(), 2);
    }
}
