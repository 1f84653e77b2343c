//! Canonical labeling by colour refinement with individualization.
//!
//! Colours start as (height, in-degree, out-degree) and are refined by the
//! multisets of neighbour colours above and below until stable. Ties are
//! broken by individualizing each vertex of the first non-singleton cell in
//! turn; the lexicographically least leaf encoding is the certificate.
//! Automorphisms discovered at equal leaves prune symmetric branches.

use std::fmt;

use super::StructureGraph;

/// Label-invariant fingerprint: equal certificates iff isomorphic graphs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCert(Vec<u8>);

impl CanonicalCert {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for CanonicalCert {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCert({})", self.to_hex())
    }
}

/// A vertex bijection preserving the order in both directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    mapping: Vec<usize>,
}

impl IsoWitness {
    /// Wraps `mapping` after checking it against both graphs.
    pub fn new(g1: &StructureGraph, g2: &StructureGraph, mapping: Vec<usize>) -> Option<Self> {
        let w = IsoWitness { mapping };
        w.is_valid(g1, g2).then_some(w)
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn map(&self, v: usize) -> usize {
        self.mapping[v]
    }

    /// `a ⊴ b ⟺ M(a) ⊴ M(b)` over all pairs, and `M` a bijection.
    pub fn is_valid(&self, g1: &StructureGraph, g2: &StructureGraph) -> bool {
        let n = g1.len();
        if n != g2.len() || self.mapping.len() != n {
            return false;
        }
        let mut hit = vec![false; n];
        for &m in &self.mapping {
            if m >= n || std::mem::replace(&mut hit[m], true) {
                return false;
            }
        }
        (0..n).all(|a| {
            (0..n).all(|b| g1.is_below(a, b) == g2.is_below(self.mapping[a], self.mapping[b]))
        })
    }
}

fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let mut sorted = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).unwrap() as u32)
        .collect()
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn refine(g: &StructureGraph, mut colors: Vec<u32>) -> Vec<u32> {
    let mut count = distinct(&colors);
    loop {
        let sigs: Vec<(u32, Vec<u32>, Vec<u32>)> = (0..g.len())
            .map(|v| {
                let mut up: Vec<u32> = g.up(v).iter().map(|&w| colors[w]).collect();
                let mut down: Vec<u32> = g.down(v).iter().map(|&w| colors[w]).collect();
                up.sort_unstable();
                down.sort_unstable();
                (colors[v], up, down)
            })
            .collect();
        colors = rank(&sigs);
        let next = distinct(&colors);
        if next == count {
            return colors;
        }
        count = next;
    }
}

fn encode(g: &StructureGraph, labels: &[u32]) -> Vec<u8> {
    let mut edges: Vec<(u32, u32)> = g
        .edges()
        .iter()
        .map(|&(a, b)| (labels[a], labels[b]))
        .collect();
    edges.sort_unstable();
    let mut out = Vec::with_capacity(4 + 8 * edges.len());
    out.extend_from_slice(&(g.len() as u32).to_be_bytes());
    for (a, b) in edges {
        out.extend_from_slice(&a.to_be_bytes());
        out.extend_from_slice(&b.to_be_bytes());
    }
    out
}

struct Search<'a> {
    g: &'a StructureGraph,
    best: Option<(Vec<u8>, Vec<u32>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn visit(&mut self, colors: Vec<u32>, prefix: &mut Vec<usize>) {
        let n = self.g.len();
        let colors = refine(self.g, colors);
        if distinct(&colors) == n {
            self.leaf(colors);
            return;
        }
        let mut counts = vec![0usize; n];
        for &c in &colors {
            counts[c as usize] += 1;
        }
        let cell = (0..n).find(|&c| counts[c] > 1).unwrap() as u32;
        let members: Vec<usize> = (0..n).filter(|&v| colors[v] == cell).collect();
        let mut explored: Vec<usize> = Vec::new();
        for v in members {
            if !explored.is_empty() {
                let orbit = self.orbits(prefix);
                if explored.iter().any(|&u| orbit[u] == orbit[v]) {
                    continue;
                }
            }
            explored.push(v);
            let split: Vec<u32> = colors
                .iter()
                .enumerate()
                .map(|(w, &c)| 2 * c + u32::from(w != v))
                .collect();
            prefix.push(v);
            self.visit(split, prefix);
            prefix.pop();
        }
    }

    fn leaf(&mut self, labels: Vec<u32>) {
        let enc = encode(self.g, &labels);
        match &self.best {
            Some((best, best_labels)) if *best == enc => {
                // Both labelings give the same labeled graph, so matching
                // labels is an automorphism.
                let mut by_label = vec![0; labels.len()];
                for (w, &l) in best_labels.iter().enumerate() {
                    by_label[l as usize] = w;
                }
                let auto: Vec<usize> = labels.iter().map(|&l| by_label[l as usize]).collect();
                self.automorphisms.push(auto);
            }
            Some((best, _)) if *best < enc => {}
            _ => self.best = Some((enc, labels)),
        }
    }

    /// Orbit representatives under the known automorphisms fixing `prefix`.
    fn orbits(&self, prefix: &[usize]) -> Vec<usize> {
        let n = self.g.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for auto in &self.automorphisms {
            if prefix.iter().any(|&v| auto[v] != v) {
                continue;
            }
            for (x, &y) in auto.iter().enumerate() {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        (0..n).map(|x| find(&mut parent, x)).collect()
    }
}

fn canonical_form(g: &StructureGraph) -> (Vec<u8>, Vec<u32>) {
    let heights = g.heights();
    let initial: Vec<(usize, usize, usize)> = (0..g.len())
        .map(|v| (heights[v], g.down(v).len(), g.up(v).len()))
        .collect();
    let mut search = Search {
        g,
        best: None,
        automorphisms: Vec::new(),
    };
    search.visit(rank(&initial), &mut Vec::new());
    search.best.expect("at least one leaf")
}

pub fn canonical_cert(g: &StructureGraph) -> CanonicalCert {
    CanonicalCert(canonical_form(g).0)
}

/// `labels[v]` is the position of `v` in the canonical form.
pub fn canonical_labeling(g: &StructureGraph) -> Vec<usize> {
    canonical_form(g)
        .1
        .into_iter()
        .map(|l| l as usize)
        .collect()
}

/// An order isomorphism from `g1` onto `g2`, if one exists. The witness is
/// checked before it is returned.
pub fn isomorphic(g1: &StructureGraph, g2: &StructureGraph) -> Option<IsoWitness> {
    if g1.len() != g2.len() || g1.edges().len() != g2.edges().len() {
        return None;
    }
    let (c1, lab1) = canonical_form(g1);
    let (c2, lab2) = canonical_form(g2);
    if c1 != c2 {
        return None;
    }
    let mut inv2 = vec![0; g2.len()];
    for (v, &l) in lab2.iter().enumerate() {
        inv2[l as usize] = v;
    }
    let mapping = lab1.iter().map(|&l| inv2[l as usize]).collect();
    IsoWitness::new(g1, g2, mapping)
}
