//! Positional tuples built from the diamond marker, plus the Kuratowski pair.
//!
//! Entry `n` of a tuple is stored as `s_n(Position(n))` where
//! `Position(n) = ◇(n)`. The diamond padding guarantees that no padded entry
//! is a constituent of another, which the Kuratowski encoding cannot promise.
//! Nested addresses are innermost-first: `Position(p0, p1)` is `◇p0◇p1`.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{compose, compose_all, max_with_bottom, replace, unique_maximum};
use crate::error::{Error, Result};
use crate::numerals::{vn, zermelo};
use crate::set::SetHandle;

/// `{{1},{0,1}}`.
pub fn diamond() -> SetHandle {
    SetHandle::from_elements([zermelo(2), vn(2)])
}

/// `◇(n)`.
pub fn position(n: usize) -> SetHandle {
    compose(diamond(), zermelo(n))
}

/// A nonempty address into nested tuples, innermost coordinate first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PositionPath {
    coords: Vec<usize>,
}

impl PositionPath {
    pub fn new(coords: Vec<usize>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::NoSuchPosition("empty path".into()));
        }
        Ok(PositionPath { coords })
    }

    pub fn single(n: usize) -> Self {
        PositionPath { coords: vec![n] }
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn concat(&self, outer: &PositionPath) -> PositionPath {
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&outer.coords);
        PositionPath { coords }
    }

    pub fn to_set(&self) -> SetHandle {
        position_path(self)
    }
}

impl fmt::Display for PositionPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for PositionPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coords = s
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::NoSuchPosition(format!("bad coordinate {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PositionPath::new(coords)
    }
}

/// `◇p0◇p1⋯◇pn`.
pub fn position_path(p: &PositionPath) -> SetHandle {
    let d = diamond();
    let parts: Vec<SetHandle> = p.coords.iter().flat_map(|&c| [d, zermelo(c)]).collect();
    compose_all(&parts)
}

/// `{s_n(Position(n))}`.
pub fn make_tuple(entries: &[SetHandle]) -> Result<SetHandle> {
    if entries.is_empty() {
        return Err(Error::EmptyTuple);
    }
    Ok(SetHandle::from_elements(
        entries
            .iter()
            .enumerate()
            .map(|(n, &s)| compose(s, position(n))),
    ))
}

pub fn contains_position(t: SetHandle, p: &PositionPath) -> bool {
    position_path(p).is_constituent_of(t)
}

/// Whether `s` is a constituent of whatever sits at `p` in `t`.
pub fn constituent_at(t: SetHandle, p: &PositionPath, s: SetHandle) -> bool {
    compose(s, position_path(p)).is_constituent_of(t)
}

/// The full occupant at `p`: take the maximal constituent with the position
/// at its bottom, then strip the position off.
///
/// The tuple itself is left out of the search. A 1-tuple `{x◇}` equals
/// `{x}(◇)` and so has `◇` at its bottom, but it is never its own occupant.
pub fn get_at(t: SetHandle, p: &PositionPath) -> Result<SetHandle> {
    let pos = position_path(p);
    if !pos.is_constituent_of(t) || pos == t {
        return Err(Error::NoSuchPosition(p.to_string()));
    }
    let inner = SetHandle::from_elements(
        t.elements()
            .iter()
            .map(|&e| max_with_bottom(e, pos))
            .flat_map(|m| m.elements().to_vec()),
    );
    let padded = unique_maximum(inner).map_err(|e| match e {
        Error::EmptyHasNoMaximal => Error::NoSuchPosition(p.to_string()),
        other => other,
    })?;
    Ok(replace(padded, pos, SetHandle::empty()))
}

/// `{{a},{a,b}}`.
pub fn kuratowski_pair(a: SetHandle, b: SetHandle) -> SetHandle {
    SetHandle::from_elements([a.singleton(), SetHandle::from_elements([a, b])])
}

/// `{{P0},{P0,P1}}`, the top structure whose fusion builds Kuratowski pairs.
pub fn kuratowski_top() -> SetHandle {
    kuratowski_pair(position(0), position(1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KuratowskiDiagnosis {
    /// Neither entry is a constituent of the other.
    Ok,
    /// `b ⊴ a` but `a` has only one strict constituent, so `b` is forced.
    /// This is exactly the diamond, read as `(1, 0)`.
    OkUniqueDegenerate,
    /// `b ⊴ a`: the structure does not tell `b` apart from any other
    /// constituent of `a`.
    AmbiguousSecond,
    /// `{{a}}`: the pair `(a, a)`.
    Collapsed,
    /// Not of the form `{{a},{a,b}}`, or `{a} ⊴ b` hides which element is
    /// the singleton.
    NotAPairShape,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KuratowskiDecode {
    pub first: Option<SetHandle>,
    pub second: Option<SetHandle>,
    pub diagnosis: KuratowskiDiagnosis,
    /// Set when the singleton could only be told from the pair by counting
    /// elements rather than by the shape of the structure.
    pub uses_cardinality: bool,
}

pub fn decode_kuratowski(h: SetHandle) -> KuratowskiDecode {
    use KuratowskiDiagnosis::*;
    let fail = KuratowskiDecode {
        first: None,
        second: None,
        diagnosis: NotAPairShape,
        uses_cardinality: false,
    };
    match *h.elements() {
        [s] => match *s.elements() {
            [a] => KuratowskiDecode {
                first: Some(a),
                second: Some(a),
                diagnosis: Collapsed,
                uses_cardinality: true,
            },
            _ => fail,
        },
        [u, v] => {
            let (single, pair) = match (u.cardinality(), v.cardinality()) {
                (1, 2) => (u, v),
                (2, 1) => (v, u),
                _ => return fail,
            };
            let a = single.elements()[0];
            let Some(&b) = pair.elements().iter().find(|&&e| e != a) else {
                return fail;
            };
            if !pair.elements().contains(&a) {
                return fail;
            }
            let b_in_a = b.is_constituent_of(a);
            let diagnosis = if single.is_constituent_of(b) {
                NotAPairShape
            } else if b_in_a {
                if a.constituents().len() == 2 {
                    OkUniqueDegenerate
                } else {
                    AmbiguousSecond
                }
            } else {
                Ok
            };
            KuratowskiDecode {
                first: Some(a),
                second: (diagnosis != AmbiguousSecond).then_some(b),
                diagnosis,
                uses_cardinality: b_in_a,
            }
        }
        _ => fail,
    }
}
