use super::{DiscreteTree, SubtreeFamily};
use crate::set::VertexSet;

/// A tree whose nodes carry a vertex bitmask and an anchor flag. Unanchored
/// degree-2 nodes that carry no boundary event are reducible.
#[derive(Clone, Debug)]
pub(crate) struct LabelledTree {
    pub adj: Vec<Vec<usize>>,
    pub label: Vec<u64>,
    pub anchored: Vec<bool>,
}

impl LabelledTree {
    pub fn from_shape(t: &DiscreteTree) -> Self {
        LabelledTree {
            adj: t.nodes().map(|v| t.neighbors(v).to_vec()).collect(),
            label: vec![0; t.node_count()],
            anchored: vec![true; t.node_count()],
        }
    }

    pub fn from_family(f: &SubtreeFamily, anchored: &dyn Fn(usize) -> bool) -> Self {
        assert!(f.vertex_count() <= 64, "labels hold at most 64 vertices");
        let t = f.tree();
        let label = t
            .nodes()
            .map(|x| f.subtrees().iter().enumerate().filter(|(_, s)| s.contains(x)).fold(0u64, |acc, (v, _)| acc | 1 << v))
            .collect();
        LabelledTree {
            adj: t.nodes().map(|v| t.neighbors(v).to_vec()).collect(),
            label,
            anchored: t.nodes().map(anchored).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, row) in self.adj.iter().enumerate() {
            for &b in row {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn push(&mut self, label: u64) -> usize {
        self.adj.push(Vec::new());
        self.label.push(label);
        self.anchored.push(false);
        self.adj.len() - 1
    }

    pub fn link(&mut self, a: usize, b: usize) {
        self.adj[a].push(b);
        self.adj[b].push(a);
    }

    pub fn unlink(&mut self, a: usize, b: usize) {
        self.adj[a].retain(|&w| w != b);
        self.adj[b].retain(|&w| w != a);
    }

    /// Deletes unanchored degree-2 nodes `x` with `λx = λy ∩ λz` (no subtree
    /// ends or starts at `x`) until none is left, then renumbers.
    pub fn reduce(&mut self) {
        let n = self.len();
        let mut alive = vec![true; n];
        let mut changed = true;
        while changed {
            changed = false;
            for (x, live) in alive.iter_mut().enumerate() {
                if !*live || self.anchored[x] || self.adj[x].len() != 2 {
                    continue;
                }
                let (y, z) = (self.adj[x][0], self.adj[x][1]);
                let (lx, ly, lz) = (self.label[x], self.label[y], self.label[z]);
                if lx == ly & lz {
                    for (p, q) in [(y, z), (z, y)] {
                        let slot = self.adj[p].iter().position(|&w| w == x).expect("link");
                        self.adj[p][slot] = q;
                    }
                    self.adj[x].clear();
                    *live = false;
                    changed = true;
                }
            }
        }
        if alive.iter().all(|&a| a) {
            return;
        }
        let mut map = vec![usize::MAX; n];
        let mut next = 0;
        for x in 0..n {
            if alive[x] {
                map[x] = next;
                next += 1;
            }
        }
        let mut adj = vec![Vec::new(); next];
        let mut label = vec![0; next];
        let mut anchored = vec![false; next];
        for x in 0..n {
            if alive[x] {
                adj[map[x]] = self.adj[x].iter().map(|&w| map[w]).collect();
                label[map[x]] = self.label[x];
                anchored[map[x]] = self.anchored[x];
            }
        }
        *self = LabelledTree { adj, label, anchored };
    }

    fn centers(&self) -> Vec<usize> {
        let n = self.len();
        if n <= 2 {
            return (0..n).collect();
        }
        let mut deg: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
        let mut remaining = n;
        while remaining > 2 {
            remaining -= layer.len();
            let mut next = Vec::new();
            for &v in &layer {
                for &w in &self.adj[v] {
                    deg[w] -= 1;
                    if deg[w] == 1 {
                        next.push(w);
                    }
                }
            }
            layer = next;
        }
        layer.sort_unstable();
        layer
    }

    fn codes_from(&self, root: usize) -> Vec<String> {
        let n = self.len();
        let mut parent = vec![usize::MAX; n];
        let mut order = vec![root];
        parent[root] = root;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            for &w in &self.adj[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    order.push(w);
                }
            }
            i += 1;
        }
        let mut codes = vec![String::new(); n];
        for &v in order.iter().rev() {
            let mut kids: Vec<&str> =
                self.adj[v].iter().filter(|&&w| parent[w] == v && w != root).map(|&w| codes[w].as_str()).collect();
            kids.sort_unstable();
            let mut code = format!("{:x}{}(", self.label[v], if self.anchored[v] { 'a' } else { 'u' });
            for k in kids {
                code.push_str(k);
            }
            code.push(')');
            codes[v] = code;
        }
        codes
    }

    fn best_root(&self) -> (usize, Vec<String>) {
        self.centers()
            .into_iter()
            .map(|c| (c, self.codes_from(c)))
            .min_by(|a, b| a.1[a.0].cmp(&b.1[b.0]))
            .expect("nonempty tree")
    }

    /// Equal for two trees iff they are isomorphic as labelled trees.
    pub fn canonical_key(&self) -> String {
        let (root, codes) = self.best_root();
        codes[root].clone()
    }

    /// Preorder from the canonical root, siblings by code.
    fn canonical_order(&self) -> Vec<usize> {
        let (root, codes) = self.best_root();
        let mut order = Vec::with_capacity(self.len());
        let mut seen = vec![false; self.len()];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            let mut kids: Vec<usize> = self.adj[v].iter().copied().filter(|&w| !seen[w]).collect();
            kids.sort_by(|&a, &b| codes[b].cmp(&codes[a]));
            for w in kids {
                seen[w] = true;
                stack.push(w);
            }
        }
        order
    }

    /// The family on `n` vertices, nodes numbered in canonical order.
    pub fn to_family(&self, n: usize) -> SubtreeFamily {
        let order = self.canonical_order();
        let mut back = vec![0; self.len()];
        for (i, &v) in order.iter().enumerate() {
            back[v] = i;
        }
        let edges: Vec<_> = self.edges().into_iter().map(|(a, b)| (back[a], back[b])).collect();
        let tree = DiscreteTree::new(self.len(), &edges).expect("labelled tree is a tree");
        let sets = (0..n)
            .map(|v| VertexSet::from_iter(self.len(), (0..self.len()).filter(|&i| self.label[order[i]] >> v & 1 == 1)))
            .collect();
        SubtreeFamily::new(tree, sets).expect("labels give connected subtrees")
    }
}
