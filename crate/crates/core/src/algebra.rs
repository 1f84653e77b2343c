//! Replacement, composition and the extraction operators built on them.
//!
//! `replace(x, y, z)` rewrites every occurrence of `y` inside `x` (including
//! `x` itself) to `z`, judging occurrences against the original subterms and
//! re-canonicalising bottom-up. Composition `x(y)` is replacement of `{}`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::set::SetHandle;

/// A pending replacement `(target → replacement)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ReplacementSpec {
    pub target: SetHandle,
    pub replacement: SetHandle,
}

impl ReplacementSpec {
    pub fn new(target: SetHandle, replacement: SetHandle) -> Self {
        ReplacementSpec {
            target,
            replacement,
        }
    }

    pub fn apply(&self, x: SetHandle) -> SetHandle {
        replace(x, self.target, self.replacement)
    }
}

/// `x(y → z)`.
pub fn replace(x: SetHandle, y: SetHandle, z: SetHandle) -> SetHandle {
    fn go(
        w: SetHandle,
        y: SetHandle,
        z: SetHandle,
        memo: &mut HashMap<SetHandle, SetHandle>,
    ) -> SetHandle {
        if w == y {
            return z;
        }
        // A set can only contain something of strictly smaller depth.
        if w.depth() <= y.depth() {
            return w;
        }
        if let Some(&r) = memo.get(&w) {
            return r;
        }
        let r = SetHandle::from_elements(w.elements().iter().map(|&e| go(e, y, z, memo)));
        memo.insert(w, r);
        r
    }
    go(x, y, z, &mut HashMap::new())
}

/// `x(y)`: every occurrence of `{}` in `x` replaced by `y`.
pub fn compose(x: SetHandle, y: SetHandle) -> SetHandle {
    replace(x, SetHandle::empty(), y)
}

/// Right-to-left composition: `[a, b, c]` gives `a(b(c))`. The empty list
/// gives `{}`, the identity.
pub fn compose_all(sets: &[SetHandle]) -> SetHandle {
    sets.iter()
        .rev()
        .fold(SetHandle::empty(), |acc, &s| compose(s, acc))
}

/// `b ⊢ a`: `a` is at the bottom of `b`, i.e. `b(a → {})(a) = b`.
pub fn has_bottom(b: SetHandle, a: SetHandle) -> bool {
    compose(replace(b, a, SetHandle::empty()), a) == b
}

/// Every `a` with `c(a) = b`.
///
/// Searches the constituents of `b` whose depth is `depth(b) - depth(c)`,
/// since composition adds depths and `a` is always a constituent of `c(a)`.
pub fn top_witnesses(c: SetHandle, b: SetHandle) -> Vec<SetHandle> {
    if c.is_empty() {
        return vec![b];
    }
    let Some(target_depth) = b.depth().checked_sub(c.depth()) else {
        return Vec::new();
    };
    b.constituents()
        .into_iter()
        .filter(|a| a.depth() == target_depth && compose(c, *a) == b)
        .collect()
}

/// `c ⊣ b`: `c` is at the top of `b`.
pub fn is_top(c: SetHandle, b: SetHandle) -> bool {
    !top_witnesses(c, b).is_empty()
}

/// `b(a → {})`, provided `a` is at the bottom of `b`.
pub fn remove_bottom(b: SetHandle, a: SetHandle) -> Result<SetHandle> {
    if has_bottom(b, a) {
        Ok(replace(b, a, SetHandle::empty()))
    } else {
        Err(Error::NotABottom {
            set: b.text(),
            bottom: a.text(),
        })
    }
}

/// `({} ← c)b`: the `a` with `b = c(a)`, or `b` itself when there is none.
pub fn remove_top(c: SetHandle, b: SetHandle) -> Result<SetHandle> {
    let witnesses = top_witnesses(c, b);
    match witnesses.as_slice() {
        [] => Ok(b),
        [a] => Ok(*a),
        _ => Err(Error::AmbiguousWitness {
            count: witnesses.len(),
        }),
    }
}

/// The members of `sets` that are not a constituent of any other member.
pub fn maximal_elements(sets: &[SetHandle]) -> Vec<SetHandle> {
    sets.iter()
        .copied()
        .filter(|&m| !sets.iter().any(|&o| o != m && m.is_constituent_of(o)))
        .collect()
}

fn unique(mut sets: Vec<SetHandle>) -> Result<SetHandle> {
    match sets.len() {
        0 => Err(Error::NoneFound),
        1 => Ok(sets.pop().unwrap()),
        count => Err(Error::NotUnique { count }),
    }
}

/// The set of maximal constituents of `s`. These are exactly the members of
/// `s` not contained in another member.
pub fn maximal_constituents(s: SetHandle) -> Result<SetHandle> {
    if s.is_empty() {
        return Err(Error::EmptyHasNoMaximal);
    }
    Ok(SetHandle::from_elements(maximal_elements(s.elements())))
}

pub fn unique_maximum(s: SetHandle) -> Result<SetHandle> {
    if s.is_empty() {
        return Err(Error::EmptyHasNoMaximal);
    }
    unique(maximal_elements(s.elements()))
}

fn common_constituents(a: SetHandle, b: SetHandle) -> Vec<SetHandle> {
    a.constituents()
        .into_iter()
        .filter(|x| x.is_constituent_of(b))
        .collect()
}

/// Largest common constituents of `a` and `b`, as a set.
pub fn lcc_set(a: SetHandle, b: SetHandle) -> SetHandle {
    SetHandle::from_elements(maximal_elements(&common_constituents(a, b)))
}

/// The largest common constituent, when it is unique.
pub fn lcc(a: SetHandle, b: SetHandle) -> Result<SetHandle> {
    unique(maximal_elements(&common_constituents(a, b)))
}

fn with_bottom_candidates(a: SetHandle, b: SetHandle) -> Vec<SetHandle> {
    let candidates: Vec<SetHandle> = a
        .constituents()
        .into_iter()
        .filter(|&c| b.is_constituent_of(c) && has_bottom(c, b))
        .collect();
    maximal_elements(&candidates)
}

/// Maximal constituents of `a` that have `b` at the bottom, as a set.
pub fn max_with_bottom(a: SetHandle, b: SetHandle) -> SetHandle {
    SetHandle::from_elements(with_bottom_candidates(a, b))
}

/// The unique maximal constituent of `a` with `b` at the bottom.
pub fn max_with_bottom_unique(a: SetHandle, b: SetHandle) -> Result<SetHandle> {
    unique(with_bottom_candidates(a, b))
}

/// All constituents of `a` that have `b` at the top, as a set.
pub fn with_top(a: SetHandle, b: SetHandle) -> SetHandle {
    SetHandle::from_elements(a.constituents().into_iter().filter(|&c| is_top(b, c)))
}

/// The single constituent of `a` with `b` at the top, extracted with
/// `({} ← {∅})`.
pub fn with_top_unique(a: SetHandle, b: SetHandle) -> Result<SetHandle> {
    let found = with_top(a, b);
    let one = SetHandle::empty().singleton();
    if is_top(one, found) {
        remove_top(one, found)
    } else {
        Err(Error::NotUnique {
            count: found.cardinality(),
        })
    }
}

/// `x(* → * ∪ y)`: every constituent `w` of `x` rebuilt as `t(w) ∪ y`.
pub fn map_union(x: SetHandle, y: SetHandle) -> SetHandle {
    fn go(w: SetHandle, y: SetHandle, memo: &mut HashMap<SetHandle, SetHandle>) -> SetHandle {
        if let Some(&r) = memo.get(&w) {
            return r;
        }
        let r = SetHandle::from_elements(w.elements().iter().map(|&e| go(e, y, memo))).union(y);
        memo.insert(w, r);
        r
    }
    go(x, y, &mut HashMap::new())
}
