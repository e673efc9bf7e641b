//! Instance generators, farness certificates and the seeded trial runner
//! with CSV and manifest output.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

use crate::coloring::{coloring_tester, encode_k_colorability, InstanceFile, SetColoringInstance, Verdict};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::guards::Guards;
use crate::m2::{exact_m2_distance, m2_tester, m2_tester_sample_size, peel_to_core, BipartiteView};
use crate::oracles::{c4_packing_lower_bound, edit_distance_to_chordal, exact_min_conflicts};
use crate::pipeline::chordality_tester;
use crate::set::VertexSet;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KBase {
    #[default]
    Complete,
    Gnp,
    Bipartite,
}

fn half() -> f64 {
    0.5
}

/// What to generate. Parsed from `kind:key=value,...` on the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeneratorSpec {
    RandomGnp {
        n: usize,
        #[serde(default = "half")]
        p: f64,
    },
    /// Four independent parts of size `part`, consecutive parts joined
    /// completely.
    C4Blowup { part: usize },
    /// Simplicial additions: each new vertex joins a random subset of the
    /// closed clique of an earlier vertex.
    RandomChordal {
        n: usize,
        #[serde(default = "half")]
        p: f64,
    },
    /// Random bipartite view with an induced matching planted on the first
    /// two vertices of each side.
    M2Planted {
        left: usize,
        right: usize,
        #[serde(default = "half")]
        p: f64,
    },
    /// Random bipartite graph (as an ordinary graph).
    RandomBipartite {
        left: usize,
        right: usize,
        #[serde(default = "half")]
        p: f64,
    },
    /// k-colorability encoding of a complete, random or random bipartite
    /// graph on `n` vertices.
    KcolorEncoding {
        n: usize,
        k: usize,
        #[serde(default)]
        base: KBase,
        #[serde(default = "half")]
        p: f64,
    },
    EdgeList { path: PathBuf },
    /// An edge list plus a parts file with `v L` / `v R` lines.
    BipartiteFile { path: PathBuf, parts: PathBuf },
    /// A set-coloring instance in JSON.
    ColoringFile { path: PathBuf },
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut obj = serde_json::Map::new();
        obj.insert("kind".into(), serde_json::Value::String(kind.trim().into()));
        for item in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("expected key=value in generator spec, got {item}")))?;
            let value = serde_json::from_str(v.trim()).unwrap_or_else(|_| serde_json::Value::String(v.trim().into()));
            obj.insert(k.trim().into(), value);
        }
        serde_json::from_value(serde_json::Value::Object(obj))
            .map_err(|e| Error::Unknown { kind: "generator spec", name: format!("{s} ({e})") })
    }
}

#[derive(Clone, Debug)]
pub enum Instance {
    Graph(Graph),
    Bipartite { graph: Graph, left: VertexSet, right: VertexSet },
    Coloring { instance: SetColoringInstance, graph: Option<Graph> },
}

impl Instance {
    pub fn n(&self) -> usize {
        match self {
            Instance::Graph(g) => g.n(),
            Instance::Bipartite { left, right, .. } => left.len() + right.len(),
            Instance::Coloring { instance, .. } => instance.n(),
        }
    }
}

/// A random chordal graph by simplicial additions, with the closed clique
/// recorded for every vertex.
pub fn random_chordal<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n);
    let mut closed: Vec<Vec<usize>> = Vec::with_capacity(n);
    for v in 0..n {
        let mut clique = Vec::new();
        if v > 0 && rng.gen_bool(0.9) {
            let w = rng.gen_range(0..v);
            clique.push(w);
            for &u in &closed[w] {
                if u != w && rng.gen_bool(p) {
                    clique.push(u);
                }
            }
        }
        for &u in &clique {
            g.add_edge(u, v);
        }
        clique.push(v);
        closed.push(clique);
    }
    g
}

pub fn random_gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Left side `0..left`, right side `left..left+right`.
pub fn random_bipartite<R: Rng + ?Sized>(left: usize, right: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::empty(left + right);
    for u in 0..left {
        for v in left..left + right {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

pub fn c4_blowup(part: usize) -> Graph {
    let mut g = Graph::empty(4 * part);
    for i in 0..4 {
        let j = (i + 1) % 4;
        for a in 0..part {
            for b in 0..part {
                g.add_edge(i * part + a, j * part + b);
            }
        }
    }
    g
}

/// A chordal graph on `Y = x..n` plus `x` vertices each joined to a clique
/// of `G[Y]` with every other vertex toggled with probability `noise`.
/// Returns the graph, `X`, `Y` and the smallest `ε ≥ 1/n` with
/// `p(v) ≤ εn²` on `X`.
pub fn nearly_simplicial_instance<R: Rng + ?Sized>(
    n: usize,
    x: usize,
    noise: f64,
    rng: &mut R,
) -> (Graph, VertexSet, VertexSet, f64) {
    assert!(x < n, "Y must be nonempty");
    let core = random_chordal(n - x, 0.6, rng);
    let mut g = Graph::empty(n);
    for (a, b) in core.edges() {
        g.add_edge(a + x, b + x);
    }
    for v in 0..x {
        let w = rng.gen_range(0..n - x);
        let mut nb: Vec<usize> = vec![w];
        nb.extend(core.neighbors(w).filter(|_| rng.gen_bool(0.5)));
        // Keep a clique: drop members not adjacent to all kept ones.
        let mut clique: Vec<usize> = Vec::new();
        for u in nb {
            if clique.iter().all(|&c| core.has_edge(c, u)) {
                clique.push(u);
            }
        }
        for u in clique {
            g.add_edge(v, u + x);
        }
    }
    for u in 0..x {
        for v in 0..n {
            if u != v && (v >= x || v > u) && rng.gen_bool(noise) {
                let has = g.has_edge(u, v);
                g.set_edge(u, v, !has);
            }
        }
    }
    let xs = VertexSet::from_iter(n, 0..x);
    let ys = VertexSet::from_iter(n, x..n);
    let nn = (n * n) as f64;
    let worst = xs.iter().map(|v| g.nonedges_in_neighborhood(v).expect("in range")).max().unwrap_or(0);
    let mut eps = (worst as f64 / nn).max(1.0 / n as f64);
    while eps * (n as f64) < 1.0 || eps * nn < worst as f64 {
        eps = eps.next_up();
    }
    (g, xs, ys, eps)
}

pub fn generate_instance(spec: &GeneratorSpec, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let check_p = |p: f64| {
        if (0.0..=1.0).contains(&p) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("probability {p} outside [0, 1]")))
        }
    };
    Ok(match spec {
        GeneratorSpec::RandomGnp { n, p } => {
            check_p(*p)?;
            Instance::Graph(random_gnp(*n, *p, &mut rng))
        }
        GeneratorSpec::C4Blowup { part } => Instance::Graph(c4_blowup(*part)),
        GeneratorSpec::RandomChordal { n, p } => {
            check_p(*p)?;
            Instance::Graph(random_chordal(*n, *p, &mut rng))
        }
        GeneratorSpec::RandomBipartite { left, right, p } => {
            check_p(*p)?;
            Instance::Graph(random_bipartite(*left, *right, *p, &mut rng))
        }
        GeneratorSpec::M2Planted { left, right, p } => {
            check_p(*p)?;
            if *left < 2 || *right < 2 {
                return Err(Error::InvalidParameter("m2-planted needs two vertices per side".into()));
            }
            let mut g = random_bipartite(*left, *right, *p, &mut rng);
            let (l1, l2, r1, r2) = (0, 1, *left, *left + 1);
            g.add_edge(l1, r1);
            g.add_edge(l2, r2);
            g.remove_edge(l1, r2);
            g.remove_edge(l2, r1);
            let n = left + right;
            Instance::Bipartite {
                graph: g,
                left: VertexSet::from_iter(n, 0..*left),
                right: VertexSet::from_iter(n, *left..n),
            }
        }
        GeneratorSpec::KcolorEncoding { n, k, base, p } => {
            check_p(*p)?;
            let g = match base {
                KBase::Complete => Graph::complete(*n),
                KBase::Gnp => random_gnp(*n, *p, &mut rng),
                KBase::Bipartite => random_bipartite(n / 2, n - n / 2, *p, &mut rng),
            };
            Instance::Coloring { instance: encode_k_colorability(&g, *k)?, graph: Some(g) }
        }
        GeneratorSpec::EdgeList { path } => Instance::Graph(Graph::parse_edge_list(&std::fs::read_to_string(path)?)?),
        GeneratorSpec::BipartiteFile { path, parts } => {
            let graph = Graph::parse_edge_list(&std::fs::read_to_string(path)?)?;
            let (left, right) = BipartiteView::parse_parts(&std::fs::read_to_string(parts)?)?;
            BipartiteView::new(&graph, left.clone(), right.clone())?;
            Instance::Bipartite { graph, left, right }
        }
        GeneratorSpec::ColoringFile { path } => {
            let file: InstanceFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            Instance::Coloring { instance: SetColoringInstance::from_file(&file)?, graph: None }
        }
    })
}

/// A computed lower bound on the distance from the property (or the exact
/// distance). `value = 0` certifies nothing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: String,
    pub value: usize,
}

impl Certificate {
    fn new(kind: &str, value: usize) -> Self {
        Certificate { kind: kind.into(), value }
    }
}

fn two_colorable(g: &Graph) -> bool {
    let mut color = vec![None; g.n()];
    for s in g.vertices() {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(false);
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            let c = color[v].expect("colored");
            for w in g.neighbors(v) {
                match color[w] {
                    None => {
                        color[w] = Some(!c);
                        stack.push(w);
                    }
                    Some(d) if d == c => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

/// Graphs: exact edit distance at small `n`, else a C4 packing.
/// Bipartite views: exact M2 distance at `n ≤ 10` and `|R| ≤ 8`, else the size of the
/// `εn`-peeling core, which is empty for every view `εn²`-close to M2-free.
/// Colorings: minimum conflicts, exactly or by the balanced-split formula
/// on complete graphs.
pub fn certify(instance: &Instance, eps: f64, guards: &Guards) -> Result<Certificate> {
    Ok(match instance {
        Instance::Graph(g) => {
            if g.n() <= guards.edit_max_n {
                match edit_distance_to_chordal(g, guards.edit_max_budget, guards)? {
                    Some(d) => Certificate::new("exact-edit-distance", d),
                    None => Certificate::new("edit-distance-above", guards.edit_max_budget + 1),
                }
            } else {
                Certificate::new("c4-packing", c4_packing_lower_bound(g))
            }
        }
        Instance::Bipartite { graph, left, right } => {
            let view = BipartiteView::new(graph, left.clone(), right.clone())?;
            let n = left.len() + right.len();
            if n <= 10 && right.len() <= 8 {
                Certificate::new("exact-m2-distance", exact_m2_distance(&view, 8)?)
            } else {
                let t = (eps * n as f64).floor() as usize;
                Certificate::new("peeling-core", peel_to_core(&view, t).core.len())
            }
        }
        Instance::Coloring { instance, graph } => {
            let k = instance.k();
            match graph {
                Some(g) if g.edge_count() == g.n() * g.n().saturating_sub(1) / 2 => {
                    let n = g.n();
                    let (q, r) = (n / k, n % k);
                    let pairs = |s: usize| s * s.saturating_sub(1) / 2;
                    Certificate::new("min-conflicts", r * pairs(q + 1) + (k - r) * pairs(q))
                }
                Some(g) if k >= 2 && two_colorable(g) => Certificate::new("min-conflicts", 0),
                _ => match exact_min_conflicts(instance, guards) {
                    Ok(c) => Certificate::new("min-conflicts", c),
                    Err(Error::Guard(_)) => Certificate::new("none", 0),
                    Err(e) => return Err(e),
                },
            }
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Chordal,
    M2,
    Coloring,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    #[default]
    Any,
    /// Refuse to run unless the certificate is positive.
    Far,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub eps: f64,
    pub trials: usize,
    #[serde(default)]
    pub sample_size: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    pub generator: GeneratorSpec,
    #[serde(default)]
    pub expect: Expectation,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::InvalidParameter(format!("epsilon {} outside (0, 1)", self.eps)));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trial count must be at least 1".into()));
        }
        if self.sample_size == Some(0) {
            return Err(Error::InvalidParameter("sample size must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: usize,
    pub seed: u64,
    pub sample_size: usize,
    pub verdict: Verdict,
    pub witness: String,
    pub certificate: String,
    pub certificate_value: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentResult {
    pub n: usize,
    pub certificate: Certificate,
    pub rows: Vec<TrialRow>,
    pub rejections: usize,
    pub frequency: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Exact two-sided Clopper–Pearson interval at confidence `level`.
pub fn clopper_pearson(successes: usize, trials: usize, level: f64) -> (f64, f64) {
    assert!(successes <= trials && trials > 0, "bad binomial counts");
    let alpha = 1.0 - level;
    let (k, n) = (successes as f64, trials as f64);
    let lo = if successes == 0 {
        0.0
    } else {
        Beta::new(k, n - k + 1.0).expect("positive shape").inverse_cdf(alpha / 2.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        Beta::new(k + 1.0, n - k).expect("positive shape").inverse_cdf(1.0 - alpha / 2.0)
    };
    (lo, hi)
}

/// Runs `trials` seeded trials in parallel (seed `base + i` for trial `i`)
/// and returns the rows in trial order.
pub fn run_trials<F>(trials: usize, base_seed: u64, trial: F) -> Result<Vec<TrialRow>>
where
    F: Fn(usize, u64, &mut ChaCha8Rng) -> Result<TrialRow> + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let seed = base_seed.wrapping_add(i as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            trial(i, seed, &mut rng)
        })
        .collect()
}

fn summarize(n: usize, certificate: Certificate, rows: Vec<TrialRow>) -> ExperimentResult {
    let rejections = rows.iter().filter(|r| r.verdict == Verdict::Reject).count();
    let (ci_low, ci_high) = clopper_pearson(rejections, rows.len(), 0.95);
    ExperimentResult { n, certificate, frequency: rejections as f64 / rows.len() as f64, rejections, ci_low, ci_high, rows }
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

/// Generates the instance (from `seed`), certifies it, runs the trials
/// (seeds `seed + 1 + i`) and writes the CSV and manifest if `out` is set.
pub fn run_experiment(config: &ExperimentConfig, guards: &Guards) -> Result<ExperimentResult> {
    config.validate()?;
    let instance = generate_instance(&config.generator, config.seed)?;
    let certificate = certify(&instance, config.eps, guards)?;
    if config.expect == Expectation::Far && certificate.value == 0 {
        return Err(Error::Precondition(format!("instance is not certified far ({} = 0)", certificate.kind)));
    }
    let started = std::time::Instant::now();
    let cert = &certificate;
    let row = |trial: usize, seed: u64, m: usize, rejected: bool, witness: String| TrialRow {
        trial,
        seed,
        sample_size: m,
        verdict: if rejected { Verdict::Reject } else { Verdict::Accept },
        witness,
        certificate: cert.kind.clone(),
        certificate_value: cert.value,
    };
    let base = config.seed.wrapping_add(1);
    let rows = match (&config.kind, &instance) {
        (ExperimentKind::Chordal, Instance::Graph(g)) => {
            let m = config.sample_size.ok_or_else(|| {
                Error::InvalidParameter("the chordality tester needs an explicit sample size".into())
            })?;
            log::info!("chordality tester: sample size {m} (override)");
            run_trials(config.trials, base, |i, seed, rng| {
                let out = chordality_tester(g, config.eps, m, rng)?;
                let w = out.witness.as_deref().map(join).unwrap_or_default();
                Ok(row(i, seed, out.sample.len(), out.rejected(), w))
            })?
        }
        (ExperimentKind::M2, Instance::Bipartite { graph, left, right }) => {
            let view = BipartiteView::new(graph, left.clone(), right.clone())?;
            let m = match config.sample_size {
                Some(m) => {
                    log::info!("M2 tester: sample size {m} (override)");
                    m
                }
                None => m2_tester_sample_size(config.eps)?,
            };
            run_trials(config.trials, base, |i, seed, rng| {
                let out = m2_tester(&view, m, rng)?;
                let w = out.witness.map(|w| join(&[w.l1, w.r1, w.l2, w.r2])).unwrap_or_default();
                Ok(row(i, seed, out.sample.len(), out.rejected(), w))
            })?
        }
        (ExperimentKind::Coloring, Instance::Coloring { instance, .. }) => {
            if let Some(m) = config.sample_size {
                log::info!("coloring tester: sample size {m} (override)");
            }
            run_trials(config.trials, base, |i, seed, rng| {
                let out = coloring_tester(instance, config.eps, config.sample_size, guards.search_node_limit, rng)?;
                let w = if out.verdict == Verdict::Reject { format!("no proper coloring of {} vertices", out.sample.len()) } else { String::new() };
                Ok(row(i, seed, out.sample.len(), out.verdict == Verdict::Reject, w))
            })?
        }
        (kind, _) => {
            return Err(Error::Precondition(format!("generator {:?} does not produce input for a {kind:?} experiment", config.generator)))
        }
    };
    let result = summarize(instance.n(), certificate, rows);
    if let Some(out) = &config.out {
        write_csv(out, &result.rows)?;
        let manifest = Manifest {
            config,
            n: result.n,
            certificate: &result.certificate,
            trials: result.rows.len(),
            rejections: result.rejections,
            frequency: result.frequency,
            ci_low: result.ci_low,
            ci_high: result.ci_high,
            guards,
            elapsed_ms: started.elapsed().as_millis(),
        };
        std::fs::write(manifest_path(out), serde_json::to_string_pretty(&manifest)?)?;
    }
    Ok(result)
}

#[derive(Serialize)]
struct Manifest<'a> {
    config: &'a ExperimentConfig,
    n: usize,
    certificate: &'a Certificate,
    trials: usize,
    rejections: usize,
    frequency: f64,
    ci_low: f64,
    ci_high: f64,
    guards: &'a Guards,
    elapsed_ms: u128,
}

/// `out.csv` → `out.manifest.json`.
pub fn manifest_path(csv: &Path) -> PathBuf {
    csv.with_extension("manifest.json")
}

pub fn write_csv(path: &Path, rows: &[TrialRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<TrialRow>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

/// Counts of each verdict, for summaries.
pub fn verdict_counts(rows: &[TrialRow]) -> BTreeMap<&'static str, usize> {
    let mut m = BTreeMap::new();
    for r in rows {
        *m.entry(if r.verdict == Verdict::Reject { "reject" } else { "accept" }).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::is_chordal;

    #[test]
    fn spec_parsing() {
        let s: GeneratorSpec = "random-gnp:n=10,p=0.3".parse().unwrap();
        assert_eq!(s, GeneratorSpec::RandomGnp { n: 10, p: 0.3 });
        let s: GeneratorSpec = "kcolor-encoding:n=8,k=2".parse().unwrap();
        assert_eq!(s, GeneratorSpec::KcolorEncoding { n: 8, k: 2, base: KBase::Complete, p: 0.5 });
        assert!("no-such:n=1".parse::<GeneratorSpec>().is_err());
        assert!("random-gnp:n=3,q=1".parse::<GeneratorSpec>().is_err());
    }

    #[test]
    fn generators() {
        let Instance::Graph(g) = generate_instance(&GeneratorSpec::RandomChordal { n: 20, p: 0.5 }, 3).unwrap() else {
            panic!()
        };
        assert!(is_chordal(&g));
        let blow = generate_instance(&GeneratorSpec::C4Blowup { part: 4 }, 0).unwrap();
        let c = certify(&blow, 0.1, &Guards::default()).unwrap();
        assert_eq!(c.kind, "c4-packing");
        assert!(c.value >= 4);
        let k8 = generate_instance(&GeneratorSpec::KcolorEncoding { n: 8, k: 2, base: KBase::Complete, p: 0.5 }, 0).unwrap();
        let c = certify(&k8, 0.1, &Guards::default()).unwrap();
        let Instance::Coloring { instance, .. } = &k8 else { panic!() };
        assert_eq!(c.value, exact_min_conflicts(instance, &Guards::default()).unwrap());
        assert_eq!(c.value, 12);
    }

    #[test]
    fn clopper_pearson_values() {
        let (lo, hi) = clopper_pearson(0, 10, 0.95);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.3084971).abs() < 1e-6);
        let (lo, hi) = clopper_pearson(5, 10, 0.95);
        assert!((lo - 0.187086).abs() < 1e-5 && (hi - 0.812914).abs() < 1e-5);
    }

    #[test]
    fn single_trial_on_chordal_input() {
        let cfg = ExperimentConfig {
            kind: ExperimentKind::Chordal,
            eps: 0.1,
            trials: 1,
            sample_size: Some(5),
            seed: 7,
            generator: GeneratorSpec::RandomChordal { n: 12, p: 0.5 },
            expect: Expectation::Any,
            out: None,
        };
        let res = run_experiment(&cfg, &Guards::default()).unwrap();
        assert_eq!(res.rows.len(), 1);
        assert_eq!(res.rows[0].verdict, Verdict::Accept);
        let far = ExperimentConfig { expect: Expectation::Far, ..cfg };
        assert!(run_experiment(&far, &Guards::default()).is_err());
    }
}
