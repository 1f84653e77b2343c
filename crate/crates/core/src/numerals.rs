//! Zermelo (`n = {n-1}`) and von Neumann (`n = {0, …, n-1}`) numerals.

use std::fmt;

use crate::algebra::{compose, map_union};
use crate::error::{Error, Result};
use crate::set::SetHandle;
use crate::structure::{graph_product, simplest_set, structure_of};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    Zermelo,
    VonNeumann,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Zermelo => "Zermelo",
            Scheme::VonNeumann => "von Neumann",
        }
    }

    pub fn encode(self, n: usize) -> SetHandle {
        match self {
            Scheme::Zermelo => zermelo(n),
            Scheme::VonNeumann => vn(n),
        }
    }

    pub fn decode(self, h: SetHandle) -> Option<usize> {
        match self {
            Scheme::Zermelo => as_zermelo(h),
            Scheme::VonNeumann => as_vn(h),
        }
    }
}

/// A natural number tagged with its encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Numeral {
    pub value: usize,
    pub scheme: Scheme,
}

impl Numeral {
    pub fn encode(self) -> SetHandle {
        self.scheme.encode(self.value)
    }

    /// Reads `h` in the given scheme, rejecting anything else.
    pub fn decode(scheme: Scheme, h: SetHandle) -> Result<Numeral> {
        scheme
            .decode(h)
            .map(|value| Numeral { value, scheme })
            .ok_or_else(|| not_a_numeral(scheme, h))
    }
}

impl fmt::Display for Numeral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.scheme {
            Scheme::Zermelo => write!(f, "{}", self.value),
            Scheme::VonNeumann => write!(f, "V{}", self.value),
        }
    }
}

fn not_a_numeral(scheme: Scheme, h: SetHandle) -> Error {
    Error::NotANumeral {
        scheme: scheme.name(),
        set: h.text(),
    }
}

pub fn zermelo(n: usize) -> SetHandle {
    (0..n).fold(SetHandle::empty(), |acc, _| acc.singleton())
}

pub fn vn(n: usize) -> SetHandle {
    (0..n).fold(SetHandle::empty(), |acc, _| acc.union(acc.singleton()))
}

pub fn as_zermelo(h: SetHandle) -> Option<usize> {
    let mut n = 0;
    let mut cur = h;
    while !cur.is_empty() {
        match cur.elements() {
            [only] => cur = *only,
            _ => return None,
        }
        n += 1;
    }
    Some(n)
}

pub fn as_vn(h: SetHandle) -> Option<usize> {
    let n = h.cardinality();
    (vn(n) == h).then_some(n)
}

fn expect(scheme: Scheme, h: SetHandle) -> Result<usize> {
    scheme.decode(h).ok_or_else(|| not_a_numeral(scheme, h))
}

/// Zermelo addition is composition: `n(m) = n + m`.
pub fn add_zermelo(a: SetHandle, b: SetHandle) -> Result<SetHandle> {
    expect(Scheme::Zermelo, a)?;
    expect(Scheme::Zermelo, b)?;
    Ok(compose(a, b))
}

/// Von Neumann addition replaces every constituent `w` of `a` by `w ∪ b`.
pub fn add_vn(a: SetHandle, b: SetHandle) -> Result<SetHandle> {
    expect(Scheme::VonNeumann, a)?;
    expect(Scheme::VonNeumann, b)?;
    Ok(map_union(a, b))
}

/// Multiplication through the structure product of the two chains.
pub fn mul_structural(a: SetHandle, b: SetHandle) -> Result<SetHandle> {
    expect(Scheme::Zermelo, a)?;
    expect(Scheme::Zermelo, b)?;
    simplest_set(&graph_product(&structure_of(a), &structure_of(b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encodings() {
        assert_eq!(zermelo(3).text(), "{{{{}}}}");
        assert_eq!(vn(2).text(), "{{},{{}}}");
        assert_eq!(vn(3).text(), "{{},{{}},{{},{{}}}}");
        assert_eq!(zermelo(0), SetHandle::empty());
        assert_eq!(vn(0), SetHandle::empty());
        assert_eq!(zermelo(1), vn(1));
    }

    #[test]
    fn decoding() {
        assert_eq!(as_zermelo(zermelo(7)), Some(7));
        assert_eq!(as_zermelo(vn(3)), None);
        assert_eq!(as_vn(vn(4)), Some(4));
        assert_eq!(as_vn(zermelo(2)), None);
        assert_eq!(as_vn(SetHandle::empty()), Some(0));
        let n = Numeral::decode(Scheme::VonNeumann, vn(5)).unwrap();
        assert_eq!(n.to_string(), "V5");
        assert_eq!(n.encode(), vn(5));
        assert!(Numeral::decode(Scheme::Zermelo, vn(2)).is_err());
    }

    #[test]
    fn addition() {
        assert_eq!(add_zermelo(zermelo(1), zermelo(1)).unwrap(), zermelo(2));
        assert_eq!(add_zermelo(zermelo(2), zermelo(3)).unwrap(), zermelo(5));
        assert_eq!(add_zermelo(zermelo(4), zermelo(0)).unwrap(), zermelo(4));
        assert_eq!(add_vn(vn(1), vn(1)).unwrap(), vn(2));
        assert_eq!(add_vn(vn(2), vn(3)).unwrap(), vn(5));
        assert_eq!(add_vn(vn(3), vn(0)).unwrap(), vn(3));
        assert!(matches!(
            add_zermelo(vn(2), zermelo(1)),
            Err(Error::NotANumeral { .. })
        ));
        assert!(add_vn(zermelo(2), vn(1)).is_err());
    }

    #[test]
    fn multiplication() {
        assert_eq!(mul_structural(zermelo(2), zermelo(3)).unwrap(), zermelo(6));
        assert_eq!(mul_structural(zermelo(4), zermelo(1)).unwrap(), zermelo(4));
        assert_eq!(mul_structural(zermelo(0), zermelo(3)).unwrap(), zermelo(0));
        assert_eq!(mul_structural(zermelo(3), zermelo(0)).unwrap(), zermelo(0));
        assert!(mul_structural(vn(2), zermelo(3)).is_err());
    }
}
