use super::{size, ColorSet, SetColoringInstance};
use crate::error::{Error, Result};
use crate::set::VertexSet;

/// A partial coloring `φ` on `S` together with the derived sets
/// `m_φ(v) = ∪ m_wv(φ(w))` and `M_φ(v) = ∩ M_wv(φ(w))` over `w ∈ S \ {v}`.
#[derive(Clone, Debug)]
pub struct ExtensionState<'a> {
    inst: &'a SetColoringInstance,
    phi: Vec<Option<ColorSet>>,
    m: Vec<ColorSet>,
    big_m: Vec<ColorSet>,
}

impl<'a> ExtensionState<'a> {
    pub fn empty(inst: &'a SetColoringInstance) -> Self {
        let n = inst.n();
        ExtensionState { inst, phi: vec![None; n], m: vec![0; n], big_m: vec![inst.full(); n] }
    }

    pub fn new(inst: &'a SetColoringInstance, phi: &[Option<ColorSet>]) -> Result<Self> {
        if phi.len() != inst.n() {
            return Err(Error::SizeMismatch { left: phi.len(), right: inst.n() });
        }
        let mut st = Self::empty(inst);
        for (u, c) in phi.iter().enumerate() {
            if let Some(c) = *c {
                st = st.extend(u, c)?;
            }
        }
        Ok(st)
    }

    pub fn instance(&self) -> &'a SetColoringInstance {
        self.inst
    }

    pub fn phi(&self) -> &[Option<ColorSet>] {
        &self.phi
    }

    pub fn in_domain(&self, v: usize) -> bool {
        self.phi[v].is_some()
    }

    pub fn domain(&self) -> VertexSet {
        VertexSet::from_iter(self.inst.n(), (0..self.inst.n()).filter(|&v| self.phi[v].is_some()))
    }

    /// The state for `φ' = φ ∪ {u ↦ c}`.
    pub fn extend(&self, u: usize, c: ColorSet) -> Result<Self> {
        self.inst.check_color(u, c)?;
        if self.phi[u].is_some() {
            return Err(Error::Precondition(format!("vertex {u} is already colored")));
        }
        let mut next = self.clone();
        next.phi[u] = Some(c);
        for v in 0..self.inst.n() {
            if v != u {
                let (m, big_m) = self.inst.bounds(u, v, c);
                next.m[v] |= m;
                next.big_m[v] &= big_m;
            }
        }
        Ok(next)
    }

    /// True when no two colored vertices conflict.
    pub fn is_proper(&self) -> bool {
        let s: Vec<usize> = (0..self.inst.n()).filter(|&v| self.phi[v].is_some()).collect();
        s.iter().enumerate().all(|(i, &u)| {
            s[i + 1..]
                .iter()
                .all(|&v| self.inst.pair_ok_unchecked(u, self.phi[u].unwrap(), v, self.phi[v].unwrap()))
        })
    }

    /// `L_φ(v)`: colors of `L_v` conflicting with no colored vertex.
    pub fn list_phi(&self, v: usize) -> Vec<ColorSet> {
        self.inst
            .list(v)
            .iter()
            .copied()
            .filter(|&c| {
                (0..self.inst.n()).all(|w| match self.phi[w] {
                    Some(cw) if w != v => self.inst.pair_ok_unchecked(w, cw, v, c),
                    _ => true,
                })
            })
            .collect()
    }

    /// `(L_φ(v), m_φ(v), M_φ(v))`.
    pub fn extension_sets(&self, v: usize) -> (Vec<ColorSet>, ColorSet, ColorSet) {
        (self.list_phi(v), self.m[v], self.big_m[v])
    }

    pub fn m_phi(&self, v: usize) -> ColorSet {
        self.m[v]
    }

    pub fn big_m_phi(&self, v: usize) -> ColorSet {
        self.big_m[v]
    }

    /// `E_φ = Σ_v |M_φ(v)| - |m_φ(v)|`. Signed: a colorless vertex may have
    /// `m_φ(v) ⊄ M_φ(v)`.
    pub fn energy(&self) -> i64 {
        (0..self.inst.n()).map(|v| size(self.big_m[v]) as i64 - size(self.m[v]) as i64).sum()
    }

    /// `δ^c_φ(u) = Σ_{v ≠ u} |M_φ(v) \ M_uv(c)| + |m_uv(c) \ m_φ(v)|`.
    pub fn delta_of_color(&self, u: usize, c: ColorSet) -> u64 {
        (0..self.inst.n())
            .filter(|&v| v != u)
            .map(|v| {
                let (m, big_m) = self.inst.bounds(u, v, c);
                (size(self.big_m[v] & !big_m) + size(m & !self.m[v])) as u64
            })
            .sum()
    }

    /// `δ_φ(u)` and the minimizing color (lowest bitmask on ties), or `None`
    /// for a colorless vertex.
    pub fn delta(&self, u: usize) -> Option<(u64, ColorSet)> {
        self.list_phi(u).into_iter().map(|c| (self.delta_of_color(u, c), c)).min()
    }

    pub fn colorless(&self) -> VertexSet {
        VertexSet::from_iter(self.inst.n(), (0..self.inst.n()).filter(|&v| self.list_phi(v).is_empty()))
    }

    /// `(U_φ, W_φ)`: colorless vertices, and uncolored non-colorless vertices
    /// with `δ_φ(v) ≥ εn/2`.
    pub fn classify_vertices(&self, eps: f64) -> (VertexSet, VertexSet) {
        let n = self.inst.n();
        let threshold = eps * n as f64 / 2.0;
        let mut u_set = VertexSet::new(n);
        let mut w_set = VertexSet::new(n);
        for v in 0..n {
            match self.delta(v) {
                None => {
                    u_set.insert(v);
                }
                Some((d, _)) if self.phi[v].is_none() && d as f64 >= threshold => {
                    w_set.insert(v);
                }
                _ => {}
            }
        }
        (u_set, w_set)
    }

    /// The greedy coloring `α_φ` of all vertices, each chosen against `φ`.
    pub fn greedy_extension(&self) -> Vec<ColorSet> {
        (0..self.inst.n())
            .map(|v| match self.phi[v] {
                Some(c) => c,
                None => match self.delta(v) {
                    Some((_, c)) => c,
                    None => *self.inst.list(v).iter().min().expect("nonempty list"),
                },
            })
            .collect()
    }

    /// `Σ_{u ∉ U_φ ∪ S} δ_φ(u) + n |U_φ|`.
    pub fn greedy_bound(&self) -> u64 {
        let n = self.inst.n() as u64;
        (0..self.inst.n())
            .map(|v| match self.delta(v) {
                None => n,
                Some((d, _)) if self.phi[v].is_none() => d,
                _ => 0,
            })
            .sum()
    }
}
