use super::{ColorSet, SetColoringInstance};
use crate::error::{Error, Result};

/// Backtracking search for a proper coloring with minimum-remaining-values
/// ordering and forward checking. Exceeding `node_limit` is an error.
pub fn find_proper_coloring(inst: &SetColoringInstance, node_limit: u64) -> Result<Option<Vec<ColorSet>>> {
    search_with_stats(inst, node_limit).map(|(c, _)| c)
}

pub fn has_proper_coloring(inst: &SetColoringInstance, node_limit: u64) -> Result<bool> {
    find_proper_coloring(inst, node_limit).map(|c| c.is_some())
}

pub(super) fn search_with_stats(inst: &SetColoringInstance, node_limit: u64) -> Result<(Option<Vec<ColorSet>>, u64)> {
    let n = inst.n();
    let mut s = Search {
        inst,
        alive: (0..n).map(|v| vec![true; inst.list(v).len()]).collect(),
        count: (0..n).map(|v| inst.list(v).len()).collect(),
        assigned: vec![None; n],
        trail: Vec::new(),
        nodes: 0,
        limit: node_limit,
    };
    let found = s.run()?;
    let coloring = found.then(|| s.assigned.iter().map(|c| c.expect("complete assignment")).collect());
    Ok((coloring, s.nodes))
}

struct Search<'a> {
    inst: &'a SetColoringInstance,
    alive: Vec<Vec<bool>>,
    count: Vec<usize>,
    assigned: Vec<Option<ColorSet>>,
    trail: Vec<(usize, usize)>,
    nodes: u64,
    limit: u64,
}

impl Search<'_> {
    fn run(&mut self) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::Guard(format!("coloring search exceeded {} nodes", self.limit)));
        }
        let pick = (0..self.inst.n()).filter(|&v| self.assigned[v].is_none()).min_by_key(|&v| self.count[v]);
        let Some(v) = pick else { return Ok(true) };
        for i in 0..self.inst.list(v).len() {
            if !self.alive[v][i] {
                continue;
            }
            let c = self.inst.list(v)[i];
            self.assigned[v] = Some(c);
            let mark = self.trail.len();
            if self.propagate(v, c) && self.run()? {
                return Ok(true);
            }
            while self.trail.len() > mark {
                let (w, j) = self.trail.pop().expect("trail entry");
                self.alive[w][j] = true;
                self.count[w] += 1;
            }
            self.assigned[v] = None;
        }
        Ok(false)
    }

    /// Removes candidates incompatible with `v = c`; false on a wipeout.
    fn propagate(&mut self, v: usize, c: ColorSet) -> bool {
        for w in 0..self.inst.n() {
            if self.assigned[w].is_some() {
                continue;
            }
            for j in 0..self.alive[w].len() {
                if self.alive[w][j] && !self.inst.pair_ok_unchecked(v, c, w, self.inst.list(w)[j]) {
                    self.alive[w][j] = false;
                    self.count[w] -= 1;
                    self.trail.push((w, j));
                }
            }
            if self.count[w] == 0 {
                return false;
            }
        }
        true
    }
}
