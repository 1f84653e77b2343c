//! Reference implementations that work on brace text directly, sharing no
//! code with the library beyond parsing and printing at the boundary.
#![allow(dead_code)]

use std::collections::BTreeSet;

/// Canonical text of a brace string: elements sorted shortlex, deduplicated.
pub fn canon(text: &str) -> String {
    let bytes: Vec<u8> = text.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
    let (s, end) = canon_at(&bytes, 0);
    assert_eq!(end, bytes.len(), "trailing input in {text:?}");
    s
}

fn canon_at(b: &[u8], mut i: usize) -> (String, usize) {
    assert_eq!(b[i], b'{');
    i += 1;
    let mut kids: Vec<String> = Vec::new();
    while b[i] != b'}' {
        let (k, j) = canon_at(b, i);
        kids.push(k);
        i = j;
        if b[i] == b',' {
            i += 1;
        }
    }
    kids.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    kids.dedup();
    (format!("{{{}}}", kids.join(",")), i + 1)
}

/// The element texts of a canonical string.
pub fn elements(text: &str) -> Vec<String> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, &c) in b.iter().enumerate() {
        match c {
            b'{' => {
                depth += 1;
                if depth == 2 {
                    start = i;
                }
            }
            b'}' => {
                if depth == 2 {
                    out.push(text[start..=i].to_string());
                }
                depth -= 1;
            }
            _ => {}
        }
    }
    out
}

/// Constituents by the recursive definition: the set and the constituents of
/// its elements.
pub fn constituents(text: &str) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    out.insert(text.to_string());
    for e in elements(text) {
        out.extend(constituents(&e));
    }
    out
}

/// Total occurrences of subterms in the text: one per opening brace.
pub fn instances(text: &str) -> usize {
    text.bytes().filter(|&b| b == b'{').count()
}

/// `x(y → z)` as non-overlapping left-to-right substring substitution on
/// canonical text, re-canonicalized.
pub fn replace(x: &str, y: &str, z: &str) -> String {
    canon(&x.replace(y, z))
}

pub fn compose(x: &str, y: &str) -> String {
    replace(x, "{}", y)
}

pub fn zermelo(n: usize) -> String {
    let mut s = "{}".to_string();
    for _ in 0..n {
        s = format!("{{{s}}}");
    }
    s
}

pub fn vn(n: usize) -> String {
    let mut elems: Vec<String> = Vec::new();
    for _ in 0..n {
        let next = canon(&format!("{{{}}}", elems.join(",")));
        elems.push(next);
    }
    canon(&format!("{{{}}}", elems.join(",")))
}

pub fn diamond() -> String {
    canon(&format!("{{{},{}}}", zermelo(2), vn(2)))
}

pub fn position(n: usize) -> String {
    compose(&diamond(), &zermelo(n))
}

/// Fusion carried out phase by phase on text, every replacement a literal
/// substring substitution.
pub fn fuse_text(top: &str, terms: &[String]) -> String {
    let mut t = top.to_string();
    for (n, b) in terms.iter().enumerate() {
        let p = position(n);
        t = replace(&t, &p, &compose(b, &p));
    }
    for n in (1..terms.len()).rev() {
        t = replace(&t, &position(n), &position(n - 1));
    }
    replace(&t, &diamond(), "{}")
}

/// Order-preserving bijection search between two DAGs given as edge lists on
/// `0..n`, by backtracking over all assignments.
pub fn brute_isomorphic(n: usize, e1: &[(usize, usize)], e2: &[(usize, usize)]) -> bool {
    if e1.len() != e2.len() {
        return false;
    }
    let adj = |e: &[(usize, usize)]| {
        let mut m = vec![vec![false; n]; n];
        for &(a, b) in e {
            m[a][b] = true;
        }
        m
    };
    let (a1, a2) = (adj(e1), adj(e2));
    fn go(
        k: usize,
        n: usize,
        a1: &[Vec<bool>],
        a2: &[Vec<bool>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == n {
            return true;
        }
        for v in 0..n {
            if used[v] {
                continue;
            }
            let ok = (0..k).all(|u| a1[u][k] == a2[map[u]][v] && a1[k][u] == a2[v][map[u]]);
            if ok {
                map.push(v);
                used[v] = true;
                if go(k + 1, n, a1, a2, map, used) {
                    return true;
                }
                map.pop();
                used[v] = false;
            }
        }
        false
    }
    go(0, n, &a1, &a2, &mut Vec::new(), &mut vec![false; n])
}
