//! Repair of graphs whose `X`-vertices are nearly simplicial: partition `X`
//! into cliques sharing one `Y`-neighborhood, then trim each shared
//! neighborhood to a clique.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EditSet, Graph};
use crate::oracles::{is_chordal, max_clique_set_chordal};
use crate::set::VertexSet;

/// `X = {u : p_G(u) < threshold}` and `Y = V \ X`.
pub fn split_by_simpliciality(g: &Graph, threshold: u64) -> (VertexSet, VertexSet) {
    let mut x = VertexSet::new(g.n());
    for v in g.vertices() {
        if g.nonedges_in_neighborhood(v).expect("in range") < threshold {
            x.insert(v);
        }
    }
    let y = VertexSet::full(g.n()).difference(&x);
    (x, y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BlockCase {
    /// `x_i` has at most `√ε n` neighbors left in `A_i`; the block is `{x_i}`.
    Singleton,
    /// `x_i` minimizes `q_{A_i}`; the block is `x_i` plus its `A_i`-neighbors.
    Clique,
}

#[derive(Clone, Debug, Serialize)]
pub struct Block {
    pub rep: usize,
    pub members: VertexSet,
    pub case: BlockCase,
    /// `d_{A_i}(x_i)` when the block was formed.
    pub remaining_degree: usize,
    /// `q_{A_i}(x_i)` and `p_G(x_i)`, for clique blocks.
    pub q: u64,
    pub p: u64,
    /// Pairs of `E(G) △ E(H)` charged to this block.
    pub edits: usize,
}

#[derive(Clone, Debug)]
pub struct CliquePartition {
    pub blocks: Vec<Block>,
    pub graph: Graph,
    pub edits: EditSet,
}

fn check_partition(g: &Graph, x: &VertexSet, y: &VertexSet) -> Result<()> {
    if let Some(v) = x.intersection(y).iter().next() {
        return Err(Error::OverlappingParts(v));
    }
    if x.union(y) != VertexSet::full(g.n()) {
        return Err(Error::Precondition("X and Y must cover every vertex".into()));
    }
    Ok(())
}

fn check_quantitative(g: &Graph, x: &VertexSet, eps: f64) -> Result<()> {
    let n = g.n() as f64;
    if eps.is_nan() || eps <= 0.0 || eps * n < 1.0 {
        return Err(Error::Precondition(format!("need eps * n >= 1, got eps = {eps}, n = {}", g.n())));
    }
    for v in x.iter() {
        let p = g.nonedges_in_neighborhood(v)?;
        if p as f64 > eps * n * n {
            return Err(Error::Precondition(format!("p_G({v}) = {p} exceeds eps * n^2")));
        }
    }
    Ok(())
}

/// The block construction with its precondition checks. Case 2 also
/// verifies `q_{A_i}(x_i) ≤ 2εn²`.
pub fn clique_partition(g: &Graph, x: &VertexSet, y: &VertexSet, eps: f64) -> Result<CliquePartition> {
    check_partition(g, x, y)?;
    check_quantitative(g, x, eps)?;
    let part = clique_partition_unchecked(g, x, y, eps)?;
    let n2 = (g.n() * g.n()) as f64;
    if let Some(b) = part.blocks.iter().find(|b| b.case == BlockCase::Clique && b.q as f64 > 2.0 * eps * n2) {
        return Err(Error::Precondition(format!("q(x_i) = {} exceeds 2 eps n^2 at x_i = {}", b.q, b.rep)));
    }
    Ok(part)
}

/// The same construction without quantitative checks.
pub fn clique_partition_unchecked(g: &Graph, x: &VertexSet, y: &VertexSet, eps: f64) -> Result<CliquePartition> {
    check_partition(g, x, y)?;
    let n = g.n();
    let sqrt_n = eps.max(0.0).sqrt() * n as f64;
    let mut a = x.clone();
    let mut blocks = Vec::new();
    let mut h = g.clone();
    while !a.is_empty() {
        let singleton = a.iter().find(|&u| g.degree_in(u, &a) as f64 <= sqrt_n);
        let (rep, case, q) = match singleton {
            Some(u) => (u, BlockCase::Singleton, 0),
            None => {
                let (q, u) = a.iter().map(|u| (g.count_p3_through(&a, u).expect("in range"), u)).min().expect("A non-empty");
                (u, BlockCase::Clique, q)
            }
        };
        let mut members = VertexSet::new(n);
        members.insert(rep);
        if case == BlockCase::Clique {
            members = members.union(&g.neighbors_in(rep, &a));
        }
        let outside = a.difference(&members).union(y);
        let ny_rep = g.neighbors_in(rep, y);
        let mut charged = 0;
        let member_list = members.to_vec();
        for (i, &u) in member_list.iter().enumerate() {
            for &w in &member_list[i + 1..] {
                if !g.has_edge(u, w) {
                    h.add_edge(u, w);
                    charged += 1;
                }
            }
            for w in outside.iter() {
                let want = ny_rep.contains(w);
                if g.has_edge(u, w) != want {
                    h.set_edge(u, w, want);
                    charged += 1;
                }
            }
        }
        blocks.push(Block {
            rep,
            remaining_degree: g.degree_in(rep, &a),
            members: members.clone(),
            case,
            q,
            p: g.nonedges_in_neighborhood(rep)?,
            edits: charged,
        });
        a = a.difference(&members);
    }
    let edits = EditSet::between(g, &h)?;
    debug_assert_eq!(edits.len(), blocks.iter().map(|b| b.edits).sum::<usize>());
    Ok(CliquePartition { blocks, graph: h, edits })
}

/// A clique of `G[N_Y(u)]` of size at least `d_Y(u) - 2√ε n`: empty when
/// `d_Y(u) ≤ √(2ε) n`, otherwise a maximum clique of the chordal
/// neighborhood.
pub fn clique_in_neighborhood(g: &Graph, u: usize, y: &VertexSet, eps: f64) -> Result<VertexSet> {
    g.check(u)?;
    check_quantitative(g, &VertexSet::from_iter(g.n(), [u]), eps)?;
    let c = neighborhood_clique(g, u, y, eps)?;
    let slack = 2.0 * eps.sqrt() * g.n() as f64;
    let d = g.degree_in(u, y);
    if (d - c.len()) as f64 > slack {
        return Err(Error::Precondition(format!("clique of size {} misses the bound at d = {d}", c.len())));
    }
    Ok(c)
}

fn neighborhood_clique(g: &Graph, u: usize, y: &VertexSet, eps: f64) -> Result<VertexSet> {
    let nb = g.neighbors_in(u, y);
    if nb.len() as f64 <= (2.0 * eps).sqrt() * g.n() as f64 {
        return Ok(VertexSet::new(g.n()));
    }
    let (f, map) = g.induced_subgraph(&nb)?;
    let local = max_clique_set_chordal(&f)?;
    if !ghs_holds(&f)? {
        return Err(Error::Precondition("dense-clique inequality failed on a chordal neighborhood".into()));
    }
    Ok(VertexSet::from_iter(g.n(), local.iter().map(|i| map[i])))
}

/// `ω(G) ≥ (1 - √(1 - 2c)) n` with `c = |E| / n²`, on a chordal graph.
pub fn ghs_holds(g: &Graph) -> Result<bool> {
    let n = g.n() as f64;
    if g.n() == 0 {
        return Ok(true);
    }
    let c = g.edge_count() as f64 / (n * n);
    let omega = crate::oracles::max_clique_chordal(g)? as f64;
    Ok(omega + 1e-9 >= (1.0 - (1.0 - 2.0 * c).max(0.0).sqrt()) * n)
}

#[derive(Clone, Debug)]
pub struct SimplicialRepair {
    pub graph: Graph,
    pub edits: EditSet,
    pub partition: CliquePartition,
    pub cliques: Vec<VertexSet>,
    /// `|E(H) △ E(H')|`.
    pub trim_edits: usize,
}

/// Chordal `H'` near `g`: `H'[Y] = G[Y]` and every `X`-vertex simplicial.
pub fn nearly_simplicial_repair(g: &Graph, x: &VertexSet, y: &VertexSet, eps: f64) -> Result<SimplicialRepair> {
    check_partition(g, x, y)?;
    check_quantitative(g, x, eps)?;
    if (g.n() as f64) < 1.0 / eps {
        return Err(Error::Precondition(format!("need n >= 1/eps, got n = {}", g.n())));
    }
    let partition = clique_partition(g, x, y, eps)?;
    let rep = assemble(g, y, eps, partition)?;
    let slack = 2.0 * eps.sqrt() * g.n() as f64;
    for (b, c) in rep.partition.blocks.iter().zip(&rep.cliques) {
        if (g.degree_in(b.rep, y) - c.len()) as f64 > slack {
            return Err(Error::Precondition(format!("trimmed clique too small at x_i = {}", b.rep)));
        }
    }
    Ok(rep)
}

/// The construction without quantitative checks; `G[Y]` must still be
/// chordal for the output to be chordal.
pub fn nearly_simplicial_repair_unchecked(g: &Graph, x: &VertexSet, y: &VertexSet, eps: f64) -> Result<SimplicialRepair> {
    let partition = clique_partition_unchecked(g, x, y, eps)?;
    assemble(g, y, eps, partition)
}

fn assemble(g: &Graph, y: &VertexSet, eps: f64, partition: CliquePartition) -> Result<SimplicialRepair> {
    let (gy, _) = g.induced_subgraph(y)?;
    if !is_chordal(&gy) {
        return Err(Error::Precondition("G[Y] is not chordal".into()));
    }
    let mut h = partition.graph.clone();
    let mut cliques = Vec::with_capacity(partition.blocks.len());
    let mut trim = 0;
    for b in &partition.blocks {
        let c = neighborhood_clique(g, b.rep, y, eps)?;
        let drop = g.neighbors_in(b.rep, y).difference(&c);
        for u in b.members.iter() {
            for w in drop.iter() {
                h.remove_edge(u, w);
                trim += 1;
            }
        }
        cliques.push(c);
    }
    debug_assert!(is_chordal(&h));
    let edits = EditSet::between(g, &h)?;
    Ok(SimplicialRepair { graph: h, edits, partition, cliques, trim_edits: trim })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_examples() {
        let (x, y) = split_by_simpliciality(&Graph::complete(5), 1);
        assert_eq!(x.len(), 5);
        assert!(y.is_empty());
        let (x, _) = split_by_simpliciality(&Graph::cycle(6), 1);
        assert!(x.is_empty());
        let (x, _) = split_by_simpliciality(&Graph::cycle(6), 2);
        assert_eq!(x.len(), 6);
    }

    #[test]
    fn empty_x_changes_nothing() {
        let g = Graph::path(6);
        let rep = nearly_simplicial_repair(&g, &VertexSet::new(6), &VertexSet::full(6), 0.5).unwrap();
        assert_eq!(rep.graph, g);
        assert!(rep.edits.is_empty());
        assert!(rep.partition.blocks.is_empty());
    }

    #[test]
    fn shared_clique_is_one_block() {
        // X = {0,1,2} a clique, all adjacent to Y = {3,4} (an edge).
        let g = Graph::complete(5);
        let x = VertexSet::from_iter(5, [0, 1, 2]);
        let y = VertexSet::from_iter(5, [3, 4]);
        let part = clique_partition(&g, &x, &y, 0.2).unwrap();
        // At n = 5 every X-vertex is below √ε n in degree, so blocks are
        // singletons and the three X-X edges go.
        assert_eq!(part.edits.len(), 3);
        assert!(part.blocks.iter().all(|b| b.case == BlockCase::Singleton));
        let g = Graph::complete(40);
        let x = VertexSet::from_iter(40, 0..20);
        let y = VertexSet::from_iter(40, 20..40);
        let part = clique_partition(&g, &x, &y, 0.05).unwrap();
        assert_eq!(part.blocks.len(), 1);
        assert_eq!(part.blocks[0].case, BlockCase::Clique);
        assert!(part.edits.is_empty());
    }

    #[test]
    fn one_x_vertex_on_two_nonadjacent() {
        // Y = path 0-1-2-3, X = {4} adjacent to 0 and 3.
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (0, 4), (3, 4)]).unwrap();
        let x = VertexSet::from_iter(5, [4]);
        let y = VertexSet::from_iter(5, [0, 1, 2, 3]);
        assert!(!is_chordal(&g));
        let rep = nearly_simplicial_repair(&g, &x, &y, 0.2).unwrap();
        assert!(is_chordal(&rep.graph));
        assert!(rep.edits.len() as f64 <= 6.0 * 0.2f64.sqrt() * 25.0);
        // d_Y(4) = 2 is below √(2ε) n, so both Y-edges of 4 are dropped.
        assert_eq!(rep.edits.len(), 2);
    }

    #[test]
    fn neighborhood_cliques() {
        let mut g = Graph::complete(6);
        g.remove_edge(0, 5);
        let y = VertexSet::from_iter(6, [1, 2, 3, 4, 5]);
        // N_Y(0) = {1,2,3,4}, a clique; threshold √(2ε)·n = 0.6 with ε = 0.005.
        let c = clique_in_neighborhood(&g, 0, &y, 0.2).unwrap();
        assert!(c.is_empty() || c.len() == 4);
        let g2 = Graph::complete(40);
        let y2 = VertexSet::from_iter(40, 1..40);
        let c = clique_in_neighborhood(&g2, 0, &y2, 0.03).unwrap();
        assert_eq!(c.len(), 39);
        let iso = Graph::empty(10);
        assert!(clique_in_neighborhood(&iso, 0, &VertexSet::from_iter(10, 1..10), 0.2).unwrap().is_empty());
    }
}
