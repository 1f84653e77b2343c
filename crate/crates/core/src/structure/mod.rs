//! Constituent structures: the Hasse diagram of a set's constituents.
//!
//! A [`StructureGraph`] is a leveled DAG with one top and one bottom whose
//! edges are covering pairs `(lower, upper)`. Graphs built by
//! [`structure_of`] carry the constituent each vertex stands for; graphs
//! built abstractly (chains, sums, products) are untagged.

mod canon;
mod render;

use std::collections::{HashMap, HashSet, VecDeque};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::set::SetHandle;

pub use canon::{canonical_cert, canonical_labeling, isomorphic, CanonicalCert, IsoWitness};
pub use render::{from_json, to_dot, to_json};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureGraph {
    tags: Vec<Option<SetHandle>>,
    edges: Vec<(usize, usize)>,
    top: usize,
    bottom: usize,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    // above[v] holds every w with v ⊴ w, v included.
    above: Vec<FixedBitSet>,
    topo: Vec<usize>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidGraph(msg.into())
}

impl StructureGraph {
    /// Builds and validates a graph on vertices `0..tags.len()`.
    pub fn new(
        tags: Vec<Option<SetHandle>>,
        mut edges: Vec<(usize, usize)>,
        top: usize,
        bottom: usize,
    ) -> Result<Self> {
        let n = tags.len();
        if n == 0 {
            return Err(invalid("a structure needs at least one vertex"));
        }
        if top >= n || bottom >= n {
            return Err(invalid("top or bottom out of range"));
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("duplicate edge"));
        }
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(lo, hi) in &edges {
            if lo >= n || hi >= n {
                return Err(invalid(format!("edge ({lo},{hi}) out of range")));
            }
            if lo == hi {
                return Err(invalid(format!("self-loop at {lo}")));
            }
            up[lo].push(hi);
            down[hi].push(lo);
        }

        // Kahn's algorithm from the bottom upward.
        let mut indeg: Vec<usize> = down.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            topo.push(v);
            for &w in &up[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if topo.len() != n {
            return Err(invalid("graph has a cycle"));
        }
        for v in 0..n {
            if up[v].is_empty() && v != top {
                return Err(invalid(format!("vertex {v} has no upward path to the top")));
            }
            if down[v].is_empty() && v != bottom {
                return Err(invalid(format!("vertex {v} is not above the bottom")));
            }
        }

        let mut above = vec![FixedBitSet::with_capacity(n); n];
        for &v in topo.iter().rev() {
            let mut set = FixedBitSet::with_capacity(n);
            set.insert(v);
            for &w in &up[v] {
                set.union_with(&above[w]);
            }
            above[v] = set;
        }
        for &(lo, hi) in &edges {
            if up[lo].iter().any(|&w| w != hi && above[w].contains(hi)) {
                return Err(invalid(format!(
                    "edge ({lo},{hi}) is implied by a longer path"
                )));
            }
        }

        Ok(StructureGraph {
            tags,
            edges,
            top,
            bottom,
            up,
            down,
            above,
            topo,
        })
    }

    /// Untagged graph on `n` vertices.
    pub fn untagged(
        n: usize,
        edges: Vec<(usize, usize)>,
        top: usize,
        bottom: usize,
    ) -> Result<Self> {
        StructureGraph::new(vec![None; n], edges, top, bottom)
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    /// Covering pairs `(lower, upper)`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn tag(&self, v: usize) -> Option<SetHandle> {
        self.tags[v]
    }

    pub fn tags(&self) -> &[Option<SetHandle>] {
        &self.tags
    }

    /// Vertices covering `v`.
    pub fn up(&self, v: usize) -> &[usize] {
        &self.up[v]
    }

    /// Vertices covered by `v`.
    pub fn down(&self, v: usize) -> &[usize] {
        &self.down[v]
    }

    /// Reflexive reachability along upward edges: `a ⊴ b`.
    pub fn is_below(&self, a: usize, b: usize) -> bool {
        self.above[a].contains(b)
    }

    /// Vertices in bottom-up topological order.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Longest path length from the bottom to each vertex.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0; self.len()];
        for &v in &self.topo {
            h[v] = self.down[v].iter().map(|&w| h[w] + 1).max().unwrap_or(0);
        }
        h
    }

    /// Longest path length from each vertex up to the top; the top is level 0.
    pub fn levels(&self) -> Vec<usize> {
        let mut l = vec![0; self.len()];
        for &v in self.topo.iter().rev() {
            l[v] = self.up[v].iter().map(|&w| l[w] + 1).max().unwrap_or(0);
        }
        l
    }

    /// The same graph with vertex `v` renamed to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.len();
        let mut seen = vec![false; n];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::NotAPermutation(n));
        }
        let mut tags = vec![None; n];
        for v in 0..n {
            tags[perm[v]] = self.tags[v];
        }
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| (perm[a], perm[b]))
            .collect();
        StructureGraph::new(tags, edges, perm[self.top], perm[self.bottom])
    }

    /// Drops every vertex tag.
    pub fn forget_tags(&self) -> Self {
        StructureGraph {
            tags: vec![None; self.len()],
            ..self.clone()
        }
    }
}

/// The constituent structure of `h`: one vertex per constituent, in canonical
/// order (so `{}` is vertex 0 and `h` the last), with membership edges that a
/// longer upward path already implies removed.
pub fn structure_of(h: SetHandle) -> StructureGraph {
    let verts = h.constituents();
    let n = verts.len();
    let index: HashMap<SetHandle, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // below[i]: strict constituents of verts[i]. Elements precede their sets
    // in canonical order, so one forward pass suffices.
    let mut below = vec![FixedBitSet::with_capacity(n); n];
    let mut edges = Vec::new();
    for (i, &v) in verts.iter().enumerate() {
        let elems: Vec<usize> = v.elements().iter().map(|e| index[e]).collect();
        let mut set = FixedBitSet::with_capacity(n);
        for &e in &elems {
            set.insert(e);
            set.union_with(&below[e]);
        }
        for &e in &elems {
            if !elems.iter().any(|&o| o != e && below[o].contains(e)) {
                edges.push((e, i));
            }
        }
        below[i] = set;
    }
    StructureGraph::new(verts.into_iter().map(Some).collect(), edges, n - 1, 0)
        .expect("constituent structures are valid")
}

/// The chain with `n` edges, the structure of the numeral `n`.
pub fn chain(n: usize) -> StructureGraph {
    StructureGraph::untagged(n + 1, (0..n).map(|i| (i, i + 1)).collect(), n, 0)
        .expect("chains are valid")
}

/// The structure of `a(b)`: `g1` stacked on `g2`, with `g1`'s bottom
/// identified with `g2`'s top. `g2` keeps ids `0..n2` and its tags; `g1`'s
/// other vertices follow in id order.
pub fn graph_sum(g1: &StructureGraph, g2: &StructureGraph) -> StructureGraph {
    let n2 = g2.len();
    let mut map = vec![0; g1.len()];
    let mut next = n2;
    for (v, slot) in map.iter_mut().enumerate() {
        if v == g1.bottom {
            *slot = g2.top;
        } else {
            *slot = next;
            next += 1;
        }
    }
    let mut tags = g2.tags.clone();
    tags.resize(next, None);
    let mut edges = g2.edges.clone();
    edges.extend(g1.edges.iter().map(|&(a, b)| (map[a], map[b])));
    StructureGraph::new(tags, edges, map[g1.top], g2.bottom).expect("sums of structures are valid")
}

/// Every edge of `g1` replaced by a fresh copy of `g2`, the copy's bottom and
/// top glued to the edge's endpoints. Edge `k` (in sorted order) owns the
/// interior ids `n1 + k·(n2−2) ..`.
pub fn graph_product(g1: &StructureGraph, g2: &StructureGraph) -> StructureGraph {
    if g2.len() == 1 {
        // Every edge collapses, and the structure is connected.
        return chain(0);
    }
    let n1 = g1.len();
    let interior: Vec<usize> = (0..g2.len())
        .filter(|&v| v != g2.top && v != g2.bottom)
        .collect();
    let mut local = vec![0; g2.len()];
    for (i, &v) in interior.iter().enumerate() {
        local[v] = i;
    }
    let width = interior.len();
    let mut edges = Vec::new();
    for (k, &(lo, hi)) in g1.edges.iter().enumerate() {
        let name = |v: usize| {
            if v == g2.bottom {
                lo
            } else if v == g2.top {
                hi
            } else {
                n1 + k * width + local[v]
            }
        };
        edges.extend(g2.edges.iter().map(|&(a, b)| (name(a), name(b))));
    }
    let n = n1 + g1.edges.len() * width;
    StructureGraph::untagged(n, edges, g1.top, g1.bottom).expect("products of structures are valid")
}

/// The set realizing `g` with the fewest extra memberships.
///
/// Vertices are processed bottom-up (by height, then canonical label) and
/// each becomes the set of the vertices it covers. When that set is already
/// taken, extra elements are drawn from the strict descendants at distance
/// two or more, which leaves the structure unchanged: fewest extras first,
/// then canonically smallest. If some vertex runs out of candidates, the
/// search backtracks to the previous vertex. Every realization has this
/// form (a member that is not a cover is a descendant at distance two or
/// more), so the search fails only when `g` has no realization at all.
pub fn simplest_set(g: &StructureGraph) -> Result<SetHandle> {
    let n = g.len();
    let heights = g.heights();
    let labels = canonical_labeling(g);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (heights[v], labels[v]));
    let distant: Vec<Vec<usize>> = (0..n).map(|v| distant_descendants(g, v)).collect();

    let mut assigned: Vec<Option<SetHandle>> = vec![None; n];
    let mut taken: HashSet<SetHandle> = HashSet::new();
    // Per position in `order`: the extras tried last, as indices into the
    // sorted descendant list, or None before the first attempt.
    let mut tried: Vec<Option<Vec<usize>>> = vec![None; n];
    let mut i = 0;
    while i < n {
        let v = order[i];
        let mut pool: Vec<SetHandle> = distant[v]
            .iter()
            .map(|&d| assigned[d].expect("descendants are processed first"))
            .collect();
        pool.sort();
        let next = match tried[i].take() {
            None => Some(Vec::new()),
            Some(c) => next_combination(c, pool.len()),
        };
        let Some(combo) = next else {
            if i == 0 {
                return Err(Error::Unrealizable(
                    "no assignment of distinct sets exists".into(),
                ));
            }
            i -= 1;
            let prev = assigned[order[i]]
                .take()
                .expect("earlier vertices are assigned");
            taken.remove(&prev);
            continue;
        };
        let s = SetHandle::from_elements(
            g.down[v]
                .iter()
                .map(|&c| assigned[c].expect("children are processed first"))
                .chain(combo.iter().map(|&k| pool[k])),
        );
        tried[i] = Some(combo);
        if taken.insert(s) {
            assigned[v] = Some(s);
            i += 1;
            if i < n {
                tried[i] = None;
            }
        }
    }

    let result = assigned[g.top].expect("top is assigned");
    if isomorphic(&structure_of(result), g).is_none() {
        return Err(Error::Unrealizable(format!(
            "realization {result} has a different structure"
        )));
    }
    Ok(result)
}

/// The combination after `c` among subsets of `0..k`: same size in
/// lexicographic order, then the first one of the next size.
fn next_combination(mut c: Vec<usize>, k: usize) -> Option<Vec<usize>> {
    let r = c.len();
    for j in (0..r).rev() {
        if c[j] < k - r + j {
            c[j] += 1;
            for t in j + 1..r {
                c[t] = c[t - 1] + 1;
            }
            return Some(c);
        }
    }
    (r < k).then(|| (0..=r).collect())
}

/// Strict descendants of `v` whose shortest downward distance is at least 2.
fn distant_descendants(g: &StructureGraph, v: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.len()];
    dist[v] = 0;
    let mut queue = VecDeque::from([v]);
    while let Some(w) = queue.pop_front() {
        for &c in &g.down[w] {
            if dist[c] == usize::MAX {
                dist[c] = dist[w] + 1;
                queue.push_back(c);
            }
        }
    }
    (0..g.len())
        .filter(|&w| dist[w] != usize::MAX && dist[w] >= 2)
        .collect()
}
