//! The pinned tester (gate shapes as a set-coloring instance, per-section
//! M2 tests, gluing), the plain chordality tester, the event analysis used
//! to audit the composition, and its budget arithmetic.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::coloring::{coloring_test_on, palette, ColorSet, ConstraintTable, SetColoringInstance};
use crate::error::{Error, Result};
use crate::graph::{sample_subset, EditSet, Graph};
use crate::guards::Guards;
use crate::m2::{elimination_sequence, interval_representation, m2_tester_sample_size, repair_to_m2_free, BipartiteView, IntervalFamily};
use crate::oracles::{exact_min_conflict_coloring, find_induced_long_cycle, find_m2, is_chordal, is_induced_cycle};
use crate::set::VertexSet;
use crate::tree::{
    canonical_key, compute_gates, compute_pins, enumerate_minimal_representations, pinned_representation_exists,
    DiscreteTree, Gates, SubtreeFamily,
};

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("epsilon {eps} outside (0, 1)")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TesterParams {
    pub eps: f64,
    pub k: usize,
    pub sample_size: Option<usize>,
    pub m2_sample_size: Option<usize>,
    pub trials: usize,
    pub seed: u64,
}

impl TesterParams {
    pub fn new(eps: f64, k: usize) -> Result<Self> {
        let p = TesterParams { eps, k, sample_size: None, m2_sample_size: None, trials: 1, seed: 0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_eps(self.eps)?;
        if self.sample_size == Some(0) || self.m2_sample_size == Some(0) || self.trials == 0 {
            return Err(Error::InvalidParameter("sample sizes and trial count must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PinnedSampleSize {
    pub eps: f64,
    /// `k` after clamping to at least 2.
    pub k: usize,
    /// `ceil(2^40 ε^-4 k^6 ln^4 k)`.
    pub size: u128,
    /// M2 sample size at `ε/(6k)`.
    pub y: usize,
    pub delta: f64,
    /// `36 (3k)^2 δ^-2`.
    pub coloring_size: f64,
    /// `max(coloring_size, 4y)`.
    pub internal_size: f64,
}

pub fn pinned_sample_size(eps: f64, k: usize) -> Result<PinnedSampleSize> {
    check_eps(eps)?;
    let k = if k < 2 {
        log::info!("k = {k} clamped to 2");
        2
    } else {
        k
    };
    let kf = k as f64;
    let size = (2f64.powi(40) * eps.powi(-4) * kf.powi(6) * kf.ln().powi(4)).ceil();
    if !size.is_finite() || size >= u128::MAX as f64 {
        return Err(Error::InvalidParameter(format!("sample size overflows at epsilon {eps}, k {k}")));
    }
    let y = m2_tester_sample_size(eps / (6.0 * kf))?;
    let delta = 1.0 / (3.0 * (y as f64).powi(2));
    let coloring_size = 36.0 * (3.0 * kf).powi(2) / (delta * delta);
    Ok(PinnedSampleSize {
        eps,
        k,
        size: size as u128,
        y,
        delta,
        coloring_size,
        internal_size: coloring_size.max(4.0 * y as f64),
    })
}

/// `m_uv(T) = P_uv \ T, M = Γ` on edges and `m = ∅, M = Γ \ T` on non-edges.
#[derive(Debug)]
struct ShapeConstraints {
    graph: Graph,
    pin: Vec<usize>,
    paths: Vec<Vec<ColorSet>>,
    full: ColorSet,
}

impl ConstraintTable for ShapeConstraints {
    fn bounds(&self, u: usize, v: usize, c: ColorSet) -> (ColorSet, ColorSet) {
        if self.graph.has_edge(u, v) {
            (self.paths[self.pin[u]][self.pin[v]] & !c, self.full)
        } else {
            (0, self.full & !c)
        }
    }
}

/// The set-coloring instance whose colors are gate shapes `Γ ∩ T_u`.
/// Color bit `i` stands for the gate `gate_nodes[i]`.
#[derive(Clone, Debug)]
pub struct ShapeInstance {
    pub instance: SetColoringInstance,
    pub gates: Gates,
    pub gate_nodes: Vec<usize>,
    pub pins: Vec<usize>,
}

impl ShapeInstance {
    fn bit(&self, node: usize) -> Option<ColorSet> {
        self.gate_nodes.iter().position(|&x| x == node).map(|i| 1 << i)
    }

    /// `Γ ∩ nodes`.
    pub fn shape_of(&self, nodes: &VertexSet) -> ColorSet {
        nodes.iter().filter_map(|x| self.bit(x)).fold(0, |a, b| a | b)
    }

    pub fn nodes_of(&self, c: ColorSet) -> Vec<usize> {
        (0..self.gate_nodes.len()).filter(|&i| c >> i & 1 == 1).map(|i| self.gate_nodes[i]).collect()
    }

    /// `φ(u) = T_u ∩ Γ` read off a family on the same tree.
    pub fn phi_from_family(&self, family: &SubtreeFamily) -> Vec<ColorSet> {
        family.subtrees().iter().map(|t| self.shape_of(t)).collect()
    }
}

/// Builds the gate-shape instance: palette `Γ`, lists of gate-connected
/// shapes containing the pin.
pub fn build_shape_instance(g: &Graph, gates: &Gates, pins: &[usize], guards: &Guards) -> Result<ShapeInstance> {
    let n = g.n();
    if pins.len() != n {
        return Err(Error::SizeMismatch { left: pins.len(), right: n });
    }
    let gate_nodes = gates.gates.to_vec();
    let q = gate_nodes.len();
    if q == 0 || q > guards.shape_max_gates {
        return Err(Error::Guard(format!("shape instances need 1..={} gates, got {q}", guards.shape_max_gates)));
    }
    let index = |x: usize| gate_nodes.iter().position(|&y| y == x);
    let mut pin = Vec::with_capacity(n);
    for (v, &x) in pins.iter().enumerate() {
        match index(x) {
            Some(i) => pin.push(i),
            None => return Err(Error::Precondition(format!("pin {x} of vertex {v} is not a gate"))),
        }
    }
    let edges: Vec<(usize, usize)> = gates
        .sections
        .iter()
        .map(|s| (index(s.ends.0).expect("section end is a gate"), index(s.ends.1).expect("section end is a gate")))
        .collect();
    let gate_tree = DiscreteTree::new(q, &edges)?;
    let to_color = |set: &VertexSet| set.iter().fold(0u64, |a, i| a | 1 << i);
    let mut paths = vec![vec![0; q]; q];
    for (a, row) in paths.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            *cell = gate_tree.path_between(a, b).iter().fold(0u64, |acc, &i| acc | 1 << i);
        }
    }
    let all = VertexSet::full(q);
    let mut by_pin: Vec<Option<Vec<ColorSet>>> = vec![None; q];
    let mut lists = Vec::with_capacity(n);
    for &i in &pin {
        if by_pin[i].is_none() {
            let mut list: Vec<ColorSet> =
                gate_tree.subtrees_containing(i, &all, guards.enumerate_max_states)?.iter().map(to_color).collect();
            list.sort_unstable();
            by_pin[i] = Some(list);
        }
        lists.push(by_pin[i].clone().expect("filled above"));
    }
    let table = ShapeConstraints { graph: g.clone(), pin, paths, full: palette(q) };
    let instance = SetColoringInstance::new_unchecked(q, lists, Arc::new(table))?;
    Ok(ShapeInstance { instance, gates: gates.clone(), gate_nodes, pins: pins.to_vec() })
}

/// `L_i` (first end in the shape, second not) and `R_i` (the reverse) of
/// one section.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionSides {
    pub ends: (usize, usize),
    pub left: VertexSet,
    pub right: VertexSet,
}

fn split_colored(shape: &ShapeInstance, n: usize, colored: impl Iterator<Item = (usize, ColorSet)> + Clone) -> Vec<SectionSides> {
    shape
        .gates
        .sections
        .iter()
        .map(|s| {
            let b1 = shape.bit(s.ends.0).expect("gate");
            let b2 = shape.bit(s.ends.1).expect("gate");
            let mut left = VertexSet::new(n);
            let mut right = VertexSet::new(n);
            for (v, c) in colored.clone() {
                match (c & b1 != 0, c & b2 != 0) {
                    (true, false) => {
                        left.insert(v);
                    }
                    (false, true) => {
                        right.insert(v);
                    }
                    _ => {}
                }
            }
            SectionSides { ends: s.ends, left, right }
        })
        .collect()
}

pub fn section_split(shape: &ShapeInstance, phi: &[ColorSet]) -> Result<Vec<SectionSides>> {
    if phi.len() != shape.instance.n() {
        return Err(Error::SizeMismatch { left: phi.len(), right: shape.instance.n() });
    }
    Ok(split_colored(shape, phi.len(), phi.iter().copied().enumerate()))
}

/// Where each pair of `E(F) △ E(G)` comes from.
#[derive(Clone, Debug, Default, Serialize)]
pub struct GlueLedger {
    /// Conflicting pairs of `φ`.
    pub conflict_pairs: Vec<(usize, usize)>,
    /// `(section, u, v)` with `u, v` on opposite sides of the section.
    pub section_pairs: Vec<(usize, usize, usize)>,
    /// Pairs in neither bucket; always empty unless the input is broken.
    pub unexplained: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct Glued {
    /// On the tree refined by slots inserted after the first end of each
    /// section; original node ids are kept.
    pub family: SubtreeFamily,
    pub graph: Graph,
    pub edits: EditSet,
    pub ledger: GlueLedger,
}

/// `T_u = T_φ(u) ∪ ⋃_i [ℓ_u^i, r_u^i]`, with each section's intervals laid
/// on slots in endpoint order.
pub fn glue_representation(
    g: &Graph,
    tree: &DiscreteTree,
    shape: &ShapeInstance,
    phi: &[ColorSet],
    intervals: &[IntervalFamily],
) -> Result<Glued> {
    let n = g.n();
    let sides = section_split(shape, phi)?;
    if intervals.len() != sides.len() {
        return Err(Error::SizeMismatch { left: intervals.len(), right: sides.len() });
    }
    let zero = BigRational::zero();
    let one = BigRational::one();
    let mut refined = tree.clone();
    let mut sets: Vec<Vec<usize>> = (0..n).map(|u| shape.nodes_of(phi[u])).collect();
    for (i, (section, (fam, side))) in shape.gates.sections.iter().zip(intervals.iter().zip(&sides)).enumerate() {
        let members = side.left.union(&side.right);
        if VertexSet::from_iter(n, fam.vertices.iter().copied()) != members || fam.vertices.len() != members.len() {
            return Err(Error::Precondition(format!("interval family of section {i} does not cover L ∪ R exactly")));
        }
        let big = |r: &num_rational::Rational64| BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()));
        let mut points: Vec<BigRational> = Vec::new();
        for (&v, iv) in fam.vertices.iter().zip(&fam.intervals) {
            let (lo, hi) = (big(&iv.lo), big(&iv.hi));
            if lo > hi || lo < zero || hi > one {
                return Err(Error::Precondition(format!("bad interval for vertex {v} in section {i}")));
            }
            if (side.left.contains(v) && lo != zero) || (side.right.contains(v) && hi != one) {
                return Err(Error::Precondition(format!("interval of vertex {v} is not anchored in section {i}")));
            }
            points.push(lo);
            points.push(hi);
        }
        points.sort();
        points.dedup();
        let (g1, g2) = section.ends;
        let next = section.interior.first().copied().unwrap_or(g2);
        let mut prev = g1;
        let mut slots = Vec::with_capacity(points.len());
        for _ in &points {
            prev = refined.subdivide(prev, next);
            slots.push(prev);
        }
        let gate_bits = (shape.bit(g1).expect("gate"), shape.bit(g2).expect("gate"));
        for u in 0..n {
            let both = phi[u] & gate_bits.0 != 0 && phi[u] & gate_bits.1 != 0;
            if both {
                sets[u].extend_from_slice(&section.interior);
                sets[u].extend_from_slice(&slots);
            }
        }
        for (&v, iv) in fam.vertices.iter().zip(&fam.intervals) {
            let (lo, hi) = (big(&iv.lo), big(&iv.hi));
            for (p, &s) in points.iter().zip(&slots) {
                if &lo <= p && p <= &hi {
                    sets[v].push(s);
                }
            }
            // Slots sit next to the first end, so right-side sets also run
            // through the original interior to reach the second.
            if side.right.contains(v) {
                sets[v].extend_from_slice(&section.interior);
            }
        }
    }
    let cap = refined.node_count();
    let family = SubtreeFamily::new(refined, sets.iter().map(|s| VertexSet::from_iter(cap, s.iter().copied())).collect())?;
    let graph = family.intersection_graph();
    let edits = EditSet::between(g, &graph)?;
    let inst = &shape.instance;
    let mut ledger = GlueLedger::default();
    for ((u, v), _) in edits.iter() {
        if !inst.pair_ok(u, phi[u], v, phi[v])? {
            ledger.conflict_pairs.push((u, v));
        } else if let Some(i) = sides
            .iter()
            .position(|s| (s.left.contains(u) && s.right.contains(v)) || (s.left.contains(v) && s.right.contains(u)))
        {
            ledger.section_pairs.push((i, u, v));
        } else {
            ledger.unexplained.push((u, v));
        }
    }
    Ok(Glued { family, graph, edits, ledger })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PinnedMode {
    Sampling,
    Repair,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PinnedWitness {
    NoProperColoring { sample: Vec<usize> },
    /// `l1 r1 r2 l2` from an M2 between the sides of `section`.
    InducedC4 { section: usize, cycle: [usize; 4] },
}

#[derive(Clone, Debug, Serialize)]
pub struct PinnedRepair {
    #[serde(skip)]
    pub glued: Glued,
    pub conflicts: usize,
    pub section_edits: Vec<usize>,
    pub edit_count: usize,
    pub budget: f64,
    pub within_budget: bool,
    pub ledger: GlueLedger,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum PinnedOutcome {
    Accept { sample: Vec<usize> },
    Reject { witness: PinnedWitness },
    Repaired(Box<PinnedRepair>),
}

/// Sampling mode needs `params.sample_size`; the M2 stage draws four
/// subsets of the sample of size `params.m2_sample_size`, or the M2 tester
/// size at `ε/(2q)` when that fits four times.
#[allow(clippy::too_many_arguments)]
pub fn pinned_tester<R: Rng + ?Sized>(
    g: &Graph,
    tree: &DiscreteTree,
    gamma0: &VertexSet,
    pins: &[usize],
    params: &TesterParams,
    mode: PinnedMode,
    guards: &Guards,
    rng: &mut R,
) -> Result<PinnedOutcome> {
    params.validate()?;
    let gates = compute_gates(tree, gamma0, params.k)?;
    if let Some(x) = pins.iter().find(|&&x| !gamma0.contains(x)) {
        return Err(Error::Precondition(format!("pin {x} is not in Γ0")));
    }
    let shape = build_shape_instance(g, &gates, pins, guards)?;
    match mode {
        PinnedMode::Sampling => pinned_sampling(g, &shape, params, guards, rng),
        PinnedMode::Repair => pinned_repair(g, tree, &shape, params, guards).map(|r| PinnedOutcome::Repaired(Box::new(r))),
    }
}

fn pinned_sampling<R: Rng + ?Sized>(
    g: &Graph,
    shape: &ShapeInstance,
    params: &TesterParams,
    guards: &Guards,
    rng: &mut R,
) -> Result<PinnedOutcome> {
    let n = g.n();
    let m = params.sample_size.ok_or_else(|| {
        let formula = pinned_sample_size(params.eps, params.k).map(|s| s.size.to_string()).unwrap_or_default();
        Error::InvalidParameter(format!("the pinned tester needs a sample-size override (formula gives {formula})"))
    })?;
    log::info!("pinned tester: sample size {m} (override)");
    let x = sample_subset(n, m, rng)?;
    let colored = coloring_test_on(&shape.instance, &x, guards.search_node_limit)?;
    let Some(coloring) = colored.coloring else {
        return Ok(PinnedOutcome::Reject { witness: PinnedWitness::NoProperColoring { sample: colored.sample } });
    };
    let sample = colored.sample;
    let q = shape.gates.sections.len();
    if q == 0 {
        return Ok(PinnedOutcome::Accept { sample });
    }
    let y = match params.m2_sample_size {
        Some(y) => y,
        None => m2_tester_sample_size(params.eps / (2.0 * q as f64))?,
    };
    if 4 * y > m {
        return Err(Error::InvalidParameter(format!("four M2 samples of size {y} do not fit in a sample of {m}")));
    }
    let sides = split_colored(shape, n, sample.iter().copied().zip(coloring.iter().copied()));
    for _ in 0..4 {
        let picks = sample_subset(sample.len(), y, rng)?;
        let ys = VertexSet::from_iter(n, picks.iter().map(|i| sample[i]));
        for (i, side) in sides.iter().enumerate() {
            let view = BipartiteView::new(g, side.left.intersection(&ys), side.right.intersection(&ys))?;
            if let Some(w) = find_m2(&view)? {
                let cycle = [w.l1, w.r1, w.r2, w.l2];
                // No conflicting pair inside the sample: the M2 closes into a C4.
                assert!(is_induced_cycle(g, &cycle), "M2 {w:?} in a properly shaped sample is not an induced C4");
                return Ok(PinnedOutcome::Reject { witness: PinnedWitness::InducedC4 { section: i, cycle } });
            }
        }
    }
    Ok(PinnedOutcome::Accept { sample })
}

fn pinned_repair(
    g: &Graph,
    tree: &DiscreteTree,
    shape: &ShapeInstance,
    params: &TesterParams,
    guards: &Guards,
) -> Result<PinnedRepair> {
    let (conflicts, phi) = exact_min_conflict_coloring(&shape.instance, guards)?;
    let sides = section_split(shape, &phi)?;
    let mut intervals = Vec::with_capacity(sides.len());
    let mut section_edits = Vec::with_capacity(sides.len());
    for side in &sides {
        let view = BipartiteView::new(g, side.left.clone(), side.right.clone())?;
        let bound = side.left.len().max(side.right.len());
        let repair = (0..=bound).find_map(|t| repair_to_m2_free(&view, t)).expect("full peeling at t = max side");
        section_edits.push(repair.edits.len());
        let h = repair.repaired;
        let hview = BipartiteView::new(&h, side.left.clone(), side.right.clone())?;
        let seq = elimination_sequence(&hview).expect("repaired view is M2-free");
        intervals.push(interval_representation(&seq));
    }
    let glued = glue_representation(g, tree, shape, &phi, &intervals)?;
    debug_assert!(glued.ledger.unexplained.is_empty());
    let n = g.n() as f64;
    let budget = params.eps * n * n;
    let edit_count = glued.edits.len();
    Ok(PinnedRepair {
        conflicts,
        section_edits,
        edit_count,
        budget,
        within_budget: edit_count as f64 <= budget,
        ledger: glued.ledger.clone(),
        glued,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChordalOutcome {
    pub sample: Vec<usize>,
    /// An induced cycle of length at least 4, in original ids.
    pub witness: Option<Vec<usize>>,
}

impl ChordalOutcome {
    pub fn rejected(&self) -> bool {
        self.witness.is_some()
    }
}

/// Samples `m` vertices (all of them if `m > n`) and rejects iff the
/// induced subgraph has an induced cycle of length at least 4.
pub fn chordality_tester<R: Rng + ?Sized>(g: &Graph, eps: f64, m: usize, rng: &mut R) -> Result<ChordalOutcome> {
    check_eps(eps)?;
    let m = if m > g.n() {
        log::debug!("sample size {m} exceeds n = {}, using all vertices", g.n());
        g.n()
    } else {
        m
    };
    let x = sample_subset(g.n(), m, rng)?;
    let (sub, map) = g.induced_subgraph(&x)?;
    let witness = find_induced_long_cycle(&sub).map(|c| c.into_iter().map(|i| map[i]).collect());
    Ok(ChordalOutcome { sample: map, witness })
}

#[derive(Clone, Debug, Serialize)]
pub struct RepresentationEvents {
    pub key: String,
    pub gamma: usize,
    pub e_r: bool,
    pub e_r_prime: bool,
    /// Whether `H[U]` with padding pins agrees with `E'_R`; `None` when `U`
    /// is too large for the search.
    pub padded_agrees: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EventReport {
    pub delta: f64,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub y_s: Vec<usize>,
    pub e_y: bool,
    pub s_chordal: bool,
    pub su_chordal: bool,
    pub representations: Vec<RepresentationEvents>,
    /// `E_R ∧ E_Y ⇒ E'_R` for every `R`.
    pub implication_holds: bool,
    pub some_e_r: bool,
}

fn pinned_on(g: &Graph, vertices: &[usize], tree: &DiscreteTree, pin: impl Fn(usize) -> usize, guards: &Guards) -> Result<bool> {
    let set = VertexSet::from_iter(g.n(), vertices.iter().copied());
    let (sub, map) = g.induced_subgraph(&set)?;
    let pins: Vec<usize> = map.iter().map(|&v| pin(v)).collect();
    Ok(pinned_representation_exists(&sub, tree, &pins, map.len(), guards)?.is_some())
}

/// Decides `E_Y`, and `E_R`, `E'_R` for every minimal representation `R`
/// of `G[S]`, on the split `X = {u : p(u) < δn²/2}`, `Y = V \ X`.
pub fn analysis_events(g: &Graph, eps: f64, s: &VertexSet, u: &VertexSet, guards: &Guards) -> Result<EventReport> {
    check_eps(eps)?;
    if s.len() > guards.events_max_s || u.len() > guards.events_max_u {
        return Err(Error::Guard(format!(
            "event analysis needs |S| <= {} and |U| <= {}, got {} and {}",
            guards.events_max_s,
            guards.events_max_u,
            s.len(),
            u.len()
        )));
    }
    let n = g.n();
    let delta = eps * eps / 144.0;
    let threshold = delta * (n * n) as f64 / 2.0;
    let mut x = VertexSet::new(n);
    for v in g.vertices() {
        if (g.nonedges_in_neighborhood(v)? as f64) < threshold {
            x.insert(v);
        }
    }
    let y = VertexSet::full(n).difference(&x);
    let (gs, _) = g.induced_subgraph(s)?;
    let s_chordal = is_chordal(&gs);
    let (gsu, _) = g.induced_subgraph(&s.union(u))?;
    let su_chordal = is_chordal(&gsu);
    let reps = if !s_chordal {
        Vec::new()
    } else if s.is_empty() {
        vec![SubtreeFamily::new(DiscreteTree::point(), Vec::new())?]
    } else {
        enumerate_minimal_representations(&gs, guards)?
    };
    let uy = u.intersection(&y).to_vec();
    let mut padded = g.clone();
    for a in x.iter() {
        for b in g.vertices() {
            if a != b {
                padded.add_edge(a, b);
            }
        }
    }
    let mut y_s = VertexSet::new(n);
    let mut events = Vec::with_capacity(reps.len());
    for r in &reps {
        let pinset = compute_pins(r, g, s)?;
        y_s = pinset.y_s.clone();
        let tree = r.tree();
        let filler = pinset.gamma.iter().next().unwrap_or(0);
        let x_pin = |v: usize| pinset.pins[&v];
        let y_pin = |v: usize| pinset.pins.get(&v).copied().unwrap_or(filler);
        let uys = u.intersection(&pinset.y_s).to_vec();
        let e_r = pinned_on(g, &uys, tree, x_pin, guards)?;
        let e_r_prime = pinned_on(g, &uy, tree, y_pin, guards)?;
        let padded_agrees = if u.len() <= guards.pinned_max_n {
            Some(pinned_on(&padded, &u.to_vec(), tree, y_pin, guards)? == e_r_prime)
        } else {
            None
        };
        events.push(RepresentationEvents { key: canonical_key(r), gamma: pinset.gamma.len(), e_r, e_r_prime, padded_agrees });
    }
    if reps.is_empty() {
        for v in g.vertices() {
            let nb = g.neighbors_in(v, s);
            if !g.is_clique(&nb) {
                y_s.insert(v);
            }
        }
    }
    let e_y = u.intersection(&y).is_subset(&u.intersection(&y_s));
    let implication_holds = events.iter().all(|e| !(e.e_r && e_y) || e.e_r_prime);
    let some_e_r = events.iter().any(|e| e.e_r);
    Ok(EventReport {
        delta,
        x: x.to_vec(),
        y: y.to_vec(),
        y_s: y_s.to_vec(),
        e_y,
        s_chordal,
        su_chordal,
        representations: events,
        implication_holds,
        some_e_r,
    })
}

/// Largest `ε` accepted by [`budget_check`].
pub const BUDGET_EPS_MAX: f64 = 0.5;

#[derive(Clone, Debug, Serialize)]
pub struct BudgetReport {
    pub eps: String,
    pub delta: String,
    pub delta_value: f64,
    pub s: String,
    /// `2 + ceil(2 s² log2(3s))`, the amplification factor.
    pub rounds: String,
    /// The pinned sample size at `(δ/2, s²/2)`.
    pub pinned: String,
    pub t: String,
    pub s_plus_t: String,
    /// Decimal logarithms of `s + t`, `r = ε^-100`, `ε^-37` and `ε^-25`.
    pub log10_s_plus_t: f64,
    pub log10_r: f64,
    pub log10_eps37: f64,
    pub log10_eps25: f64,
    pub fits_r: bool,
    pub fits_eps37: bool,
    pub fits_eps25: bool,
}

/// The shortest decimal form of `x`, as an exact fraction.
pub fn decimal_rational(x: f64) -> Result<BigRational> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!("{x} is not finite")));
    }
    let text = format!("{x:e}");
    let (mantissa, exp) = text.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits: BigInt = format!("{int}{frac}").parse().expect("decimal digits");
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Ok(if shift >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, shift as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-shift) as usize))
    })
}

fn ceil_big(q: &BigRational) -> BigUint {
    q.ceil().to_integer().to_biguint().expect("non-negative")
}

fn from_f64_up(x: f64) -> BigRational {
    // One part in 10^12 above the float, to cover its rounding.
    BigRational::from_float(x * (1.0 + 1e-12)).expect("finite")
}

fn log10_big(x: &BigRational) -> f64 {
    let num = x.numer().abs();
    let den = x.denom();
    let l = |b: &BigInt| {
        let digits = b.to_string().len() as i32;
        let lead: f64 = b.to_string()[..digits.min(15) as usize].parse().unwrap_or(1.0);
        lead.log10() + (digits - digits.min(15)) as f64
    };
    l(&num) - l(den)
}

/// `δ = ε²/144`, `s = ceil((8/δ) ln r)`, `t = (2 + log2 m_R(s)) · m_P(δ/2, s²/2)`
/// and `r = ε^-100`. Logarithms are taken in floating point and rounded up;
/// everything else is exact.
pub fn budget_check(eps: f64) -> Result<BudgetReport> {
    if !(eps > 0.0 && eps < BUDGET_EPS_MAX) {
        return Err(Error::InvalidParameter(format!("epsilon {eps} outside (0, {BUDGET_EPS_MAX})")));
    }
    let e = decimal_rational(eps)?;
    let delta = &e * &e / BigRational::from_integer(BigInt::from(144));
    let ln_r = 100.0 * (1.0 / eps).ln();
    let eight = BigRational::from_integer(BigInt::from(8));
    let s = ceil_big(&(eight / &delta * from_f64_up(ln_r)));
    let s_q = BigRational::from_integer(BigInt::from(s.clone()));
    let s_f = s.to_f64().expect("finite");
    let two = BigRational::from_integer(BigInt::from(2));
    let rounds = ceil_big(&(&two * &s_q * &s_q * from_f64_up((3.0 * s_f).log2()))) + BigUint::from(2u32);
    let k = &s_q * &s_q / &two;
    let ln_k = (k.to_f64().expect("finite")).ln();
    let half_delta = &delta / &two;
    let pinned = ceil_big(
        &(BigRational::from_integer(BigInt::from(1u64 << 40)) * num_traits::pow(half_delta.recip(), 4) * num_traits::pow(k, 6)
            * from_f64_up(ln_k.powi(4))),
    );
    let t = &rounds * &pinned;
    let total = &s + &t;
    let total_q = BigRational::from_integer(BigInt::from(total.clone()));
    let inv = e.recip();
    let r = num_traits::pow(inv.clone(), 100);
    let e37 = num_traits::pow(inv.clone(), 37);
    let e25 = num_traits::pow(inv, 25);
    Ok(BudgetReport {
        eps: e.to_string(),
        delta: delta.to_string(),
        delta_value: delta.to_f64().expect("finite"),
        s: s.to_string(),
        rounds: rounds.to_string(),
        pinned: pinned.to_string(),
        t: t.to_string(),
        s_plus_t: total.to_string(),
        log10_s_plus_t: log10_big(&total_q),
        log10_r: log10_big(&r),
        log10_eps37: log10_big(&e37),
        log10_eps25: log10_big(&e25),
        fits_r: total_q <= r,
        fits_eps37: total_q <= e37,
        fits_eps25: total_q <= e25,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sample_size_examples() {
        let s = pinned_sample_size(0.5, 2).unwrap();
        assert_eq!(s.size, 259_897_215_990_702);
        assert_eq!(pinned_sample_size(0.6, 1).unwrap().y, 240);
        let half = pinned_sample_size(0.25, 2).unwrap();
        assert!((half.size as f64 / s.size as f64 - 16.0).abs() < 1e-9);
    }

    #[test]
    fn shape_instance_examples() {
        let tree = DiscreteTree::path(3);
        let gates = compute_gates(&tree, &VertexSet::from_iter(3, [1]), 2).unwrap();
        assert_eq!(gates.gates.to_vec(), vec![0, 1, 2]);
        let guards = Guards::default();
        let k3 = Graph::complete(3);
        let shape = build_shape_instance(&k3, &gates, &[0, 1, 2], &guards).unwrap();
        let full = palette(3);
        assert!(shape.instance.count_conflicts_total(&[full, full, full]).unwrap() == 0);
        // Non-adjacent vertices on one pin cannot both contain it.
        let e2 = Graph::empty(2);
        let shape = build_shape_instance(&e2, &gates, &[1, 1], &guards).unwrap();
        assert!(!crate::coloring::has_proper_coloring(&shape.instance, 1000).unwrap());
        assert!(build_shape_instance(&e2, &compute_gates(&DiscreteTree::path(4), &VertexSet::new(4), 2).unwrap(), &[1, 1], &guards).is_err());
    }

    #[test]
    fn section_split_examples() {
        let tree = DiscreteTree::path(4);
        let gates = compute_gates(&tree, &VertexSet::new(4), 2).unwrap();
        let g = Graph::path(2);
        let shape = build_shape_instance(&g, &gates, &[0, 3], &Guards::default()).unwrap();
        let sides = section_split(&shape, &[0b01, 0b10]).unwrap();
        assert_eq!(sides.len(), 1);
        assert_eq!(sides[0].left.to_vec(), vec![0]);
        assert_eq!(sides[0].right.to_vec(), vec![1]);
        let sides = section_split(&shape, &[0b11, 0b11]).unwrap();
        assert!(sides[0].left.is_empty() && sides[0].right.is_empty());
    }

    #[test]
    fn glue_joins_across_a_section() {
        // Edge 0-1 with pins at the two ends of a path: the section carries it.
        let tree = DiscreteTree::path(4);
        let gates = compute_gates(&tree, &VertexSet::new(4), 2).unwrap();
        let g = Graph::path(2);
        let shape = build_shape_instance(&g, &gates, &[0, 3], &Guards::default()).unwrap();
        let phi = [0b01, 0b10];
        let sides = section_split(&shape, &phi).unwrap();
        let view = BipartiteView::new(&g, sides[0].left.clone(), sides[0].right.clone()).unwrap();
        let fam = interval_representation(&elimination_sequence(&view).unwrap());
        let glued = glue_representation(&g, &tree, &shape, &phi, &[fam]).unwrap();
        assert_eq!(glued.graph, g);
        assert!(glued.edits.is_empty());
        assert!(glued.family.contains_pins(&[0, 3]));
    }

    #[test]
    fn testers_on_small_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let tree = DiscreteTree::path(3);
        let gamma0 = VertexSet::from_iter(3, [0, 2]);
        let mut params = TesterParams::new(0.5, 2).unwrap();
        let k4 = Graph::complete(4);
        assert!(pinned_tester(&k4, &tree, &gamma0, &[0, 0, 2, 2], &params, PinnedMode::Sampling, &Guards::default(), &mut rng).is_err());
        params.sample_size = Some(4);
        params.m2_sample_size = Some(1);
        let out = pinned_tester(&k4, &tree, &gamma0, &[0, 0, 2, 2], &params, PinnedMode::Sampling, &Guards::default(), &mut rng).unwrap();
        assert!(matches!(out, PinnedOutcome::Accept { .. }));
        let e2 = Graph::empty(2);
        params.sample_size = Some(2);
        params.m2_sample_size = Some(1);
        let out = pinned_tester(&e2, &tree, &gamma0, &[2, 2], &params, PinnedMode::Sampling, &Guards::default(), &mut rng).unwrap();
        assert!(matches!(out, PinnedOutcome::Reject { witness: PinnedWitness::NoProperColoring { .. } }));

        let c4 = Graph::cycle(4);
        let out = chordality_tester(&c4, 0.1, 4, &mut rng).unwrap();
        assert_eq!(out.witness.map(|w| w.len()), Some(4));
        assert!(!chordality_tester(&c4, 0.1, 3, &mut rng).unwrap().rejected());
    }

    #[test]
    fn repair_mode_on_a_representable_graph() {
        let tree = DiscreteTree::path(3);
        let gamma0 = VertexSet::from_iter(3, [0, 2]);
        let params = TesterParams::new(0.5, 2).unwrap();
        let g = Graph::path(4);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = pinned_tester(&g, &tree, &gamma0, &[0, 0, 2, 2], &params, PinnedMode::Repair, &Guards::default(), &mut rng).unwrap();
        let PinnedOutcome::Repaired(rep) = out else { panic!("repair mode") };
        assert_eq!(rep.conflicts, 0);
        assert_eq!(rep.edit_count, 0);
        assert!(rep.ledger.unexplained.is_empty());
    }

    #[test]
    fn budget_values() {
        let b = budget_check(0.1).unwrap();
        assert!((b.delta_value - 6.944e-5).abs() < 1e-8);
        assert_eq!(b.delta, "1/14400");
        let b = budget_check(1e-3).unwrap();
        assert_eq!(b.eps, "1/1000");
        assert!(b.log10_r > 299.9 && b.log10_r < 300.1);
        assert!(budget_check(0.7).is_err());
        assert_eq!(decimal_rational(0.25).unwrap(), BigRational::new(1.into(), 4.into()));
    }
}
