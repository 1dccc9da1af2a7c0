//! Vantage-point tree over unitaries under the projective metric.

use crate::numeric::CMat4;

const NONE: u32 = u32::MAX;

/// Projective distance on raw matrices, see [`crate::numeric::projective_distance`].
pub(crate) fn pdist(a: &CMat4, b: &CMat4) -> f64 {
    let mut z = num_complex::Complex64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b.iter()) {
        z += x.conj() * y;
    }
    let n = z.norm();
    let phase = if n > 0.0 {
        z.conj() / n
    } else {
        num_complex::Complex64::new(1.0, 0.0)
    };
    let s: f64 = a
        .iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y * phase).norm_sqr())
        .sum();
    s.sqrt() / 2.0
}

#[derive(Clone, Copy, Debug)]
struct Node {
    point: u32,
    mu: f64,
    inner: u32,
    outer: u32,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct VpTree {
    nodes: Vec<Node>,
    root: u32,
}

impl VpTree {
    pub fn build(points: &[CMat4], ids: Vec<u32>) -> Self {
        let mut tree = VpTree {
            nodes: Vec::with_capacity(ids.len()),
            root: NONE,
        };
        let mut ids = ids;
        tree.root = tree.build_rec(points, &mut ids);
        tree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn ids(&self) -> impl Iterator<Item = u32> + '_ {
        self.nodes.iter().map(|n| n.point)
    }

    fn build_rec(&mut self, points: &[CMat4], ids: &mut [u32]) -> u32 {
        if ids.is_empty() {
            return NONE;
        }
        let vp = ids[0];
        let rest = &mut ids[1..];
        let at = self.nodes.len();
        self.nodes.push(Node {
            point: vp,
            mu: 0.0,
            inner: NONE,
            outer: NONE,
        });
        if rest.is_empty() {
            return at as u32;
        }
        let mut keyed: Vec<(f64, u32)> = rest
            .iter()
            .map(|&i| (pdist(&points[vp as usize], &points[i as usize]), i))
            .collect();
        let mid = keyed.len() / 2;
        keyed.select_nth_unstable_by(mid, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mu = keyed[mid].0;
        for (slot, (_, i)) in rest.iter_mut().zip(&keyed) {
            *slot = *i;
        }
        let (inner, outer) = rest.split_at_mut(mid + 1);
        let inner = self.build_rec(points, inner);
        let outer = self.build_rec(points, outer);
        self.nodes[at] = Node {
            point: vp,
            mu,
            inner,
            outer,
        };
        at as u32
    }

    /// Calls `visit(id, d)` for every point with `d <= radius()`, where `radius`
    /// may shrink as the search proceeds. Returns early when `visit` returns true.
    fn search(
        &self,
        points: &[CMat4],
        q: &CMat4,
        radius: &mut dyn FnMut() -> f64,
        visit: &mut dyn FnMut(u32, f64) -> bool,
    ) -> bool {
        let mut stack = vec![self.root];
        while let Some(n) = stack.pop() {
            if n == NONE {
                continue;
            }
            let node = self.nodes[n as usize];
            let d = pdist(q, &points[node.point as usize]);
            if d <= radius() && visit(node.point, d) {
                return true;
            }
            let r = radius();
            // Push the far side first so the near side is explored first.
            if d <= node.mu {
                if d + r >= node.mu {
                    stack.push(node.outer);
                }
                if d - r <= node.mu {
                    stack.push(node.inner);
                }
            } else {
                if d - r <= node.mu {
                    stack.push(node.inner);
                }
                if d + r >= node.mu {
                    stack.push(node.outer);
                }
            }
        }
        false
    }

    pub fn nearest(&self, points: &[CMat4], q: &CMat4) -> Option<(u32, f64)> {
        let best = std::cell::Cell::new((NONE, f64::INFINITY));
        self.search(points, q, &mut || best.get().1, &mut |id, d| {
            if d < best.get().1 {
                best.set((id, d));
            }
            false
        });
        let (id, d) = best.get();
        (id != NONE).then_some((id, d))
    }

    pub fn within(&self, points: &[CMat4], q: &CMat4, r: f64, out: &mut Vec<(u32, f64)>) {
        self.search(points, q, &mut || r, &mut |id, d| {
            out.push((id, d));
            false
        });
    }

    pub fn any_within(&self, points: &[CMat4], q: &CMat4, r: f64) -> bool {
        self.search(points, q, &mut || r, &mut |_, _| true)
    }
}

/// Insert-only index: a logarithmic family of static trees plus a small buffer.
#[derive(Default)]
pub(crate) struct GrowingIndex {
    trees: Vec<VpTree>,
    buffer: Vec<u32>,
}

const BUFFER: usize = 64;

impl GrowingIndex {
    pub fn insert(&mut self, points: &[CMat4], id: u32) {
        self.buffer.push(id);
        if self.buffer.len() < BUFFER {
            return;
        }
        let mut ids = std::mem::take(&mut self.buffer);
        while self.trees.last().is_some_and(|t| t.len() <= ids.len()) {
            let t = self.trees.pop().expect("checked");
            ids.extend(t.ids());
        }
        ids.sort_unstable();
        self.trees.push(VpTree::build(points, ids));
    }

    pub fn any_within(&self, points: &[CMat4], q: &CMat4, r: f64) -> bool {
        self.buffer
            .iter()
            .any(|&i| pdist(q, &points[i as usize]) <= r)
            || self.trees.iter().any(|t| t.any_within(points, q, r))
    }
}
