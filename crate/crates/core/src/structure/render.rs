//! DOT and JSON renderings of structure graphs.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::StructureGraph;
use crate::error::{Error, Result};
use crate::set::parse;

/// Graphviz digraph with edges drawn from lower to upper vertex and one rank
/// per level, the top first. Untagged vertices are drawn as dots.
pub fn to_dot(g: &StructureGraph) -> String {
    let levels = g.levels();
    let depth = levels.iter().copied().max().unwrap_or(0);
    let mut out =
        String::from("digraph constituents {\n  rankdir=BT;\n  node [shape=plaintext];\n");
    for level in 0..=depth {
        out.push_str("  {rank=same;");
        for v in (0..g.len()).filter(|&v| levels[v] == level) {
            write!(out, " v{v};").unwrap();
        }
        out.push_str("}\n");
    }
    for v in 0..g.len() {
        let label = g.tag(v).map_or_else(|| "•".to_string(), |t| t.text());
        writeln!(out, "  v{v} [label=\"{label}\"];").unwrap();
    }
    for &(lo, hi) in g.edges() {
        writeln!(out, "  v{lo} -> v{hi};").unwrap();
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize, Deserialize)]
struct JsonVertex {
    id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    set: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    vertices: Vec<JsonVertex>,
    edges: Vec<[usize; 2]>,
    top: usize,
    bottom: usize,
}

pub fn to_json(g: &StructureGraph) -> String {
    let doc = JsonGraph {
        vertices: (0..g.len())
            .map(|id| JsonVertex {
                id,
                set: g.tag(id).map(|t| t.text()),
            })
            .collect(),
        edges: g.edges().iter().map(|&(a, b)| [a, b]).collect(),
        top: g.top(),
        bottom: g.bottom(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

/// Reads the format written by [`to_json`]. Vertex ids must be `0..n`.
pub fn from_json(text: &str) -> Result<StructureGraph> {
    let doc: JsonGraph =
        serde_json::from_str(text).map_err(|e| Error::InvalidGraph(e.to_string()))?;
    let n = doc.vertices.len();
    let mut tags = vec![None; n];
    let mut seen = vec![false; n];
    for v in doc.vertices {
        if v.id >= n || std::mem::replace(&mut seen[v.id], true) {
            return Err(Error::InvalidGraph(format!("bad vertex id {}", v.id)));
        }
        tags[v.id] = v.set.as_deref().map(parse).transpose()?;
    }
    StructureGraph::new(
        tags,
        doc.edges.into_iter().map(|[a, b]| (a, b)).collect(),
        doc.top,
        doc.bottom,
    )
}

#[cfg(test)]
mod tests {
    use super::super::{chain, structure_of};
    use super::*;
    use crate::numerals::{vn, zermelo};
    use crate::tuples::diamond;

    #[test]
    fn dot_for_the_pair_of_zero_and_one() {
        let expected = "digraph constituents {\n  rankdir=BT;\n  node [shape=plaintext];\n  {rank=same; v2;}\n  {rank=same; v1;}\n  {rank=same; v0;}\n  v0 [label=\"{}\"];\n  v1 [label=\"{{}}\"];\n  v2 [label=\"{{},{{}}}\"];\n  v0 -> v1;\n  v1 -> v2;\n}\n";
        assert_eq!(to_dot(&structure_of(vn(2))), expected);
    }

    #[test]
    fn numeral_dots_differ_only_in_labels() {
        let strip = |s: String| -> String {
            s.lines()
                .filter(|l| !l.contains("label=\"{"))
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_eq!(
            strip(to_dot(&structure_of(zermelo(3)))),
            strip(to_dot(&structure_of(vn(3))))
        );
    }

    #[test]
    fn json_round_trip() {
        for g in [structure_of(diamond()), chain(4), structure_of(vn(3))] {
            assert_eq!(from_json(&to_json(&g)).unwrap(), g);
        }
        assert!(from_json("{").is_err());
        assert!(from_json(
            r#"{"vertices":[{"id":0},{"id":1}],"edges":[[0,1],[1,0]],"top":1,"bottom":0}"#
        )
        .is_err());
    }
}
