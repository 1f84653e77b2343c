//! Interned canonical pure finite sets.
//!
//! Every set is hash-consed into a process-wide, append-only table, so a
//! [`SetHandle`] is a `u32` and equality is a single comparison. Elements are
//! stored in canonical order: shortlex (length, then bytes) on the canonical
//! brace text, which is also the order of [`Ord`] on handles.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use parking_lot::RwLock;

use crate::error::{Error, Result};

/// Identifier of an interned pure finite set.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SetHandle(u32);

struct Node {
    children: &'static [SetHandle],
    text_len: u128,
    instances: u128,
    depth: u32,
}

struct Table {
    nodes: Vec<&'static Node>,
    index: HashMap<&'static [SetHandle], SetHandle>,
}

struct Universe {
    table: RwLock<Table>,
}

static UNIVERSE: OnceLock<Universe> = OnceLock::new();

fn universe() -> &'static Universe {
    UNIVERSE.get_or_init(|| {
        let mut table = Table {
            nodes: Vec::new(),
            index: HashMap::new(),
        };
        table.insert(Vec::new());
        Universe {
            table: RwLock::new(table),
        }
    })
}

impl Table {
    /// Inserts a canonical child list that is known to be absent.
    fn insert(&mut self, children: Vec<SetHandle>) -> SetHandle {
        let mut text_len: u128 = 2;
        let mut instances: u128 = 1;
        let mut depth = 0;
        for (i, c) in children.iter().enumerate() {
            let n = self.nodes[c.0 as usize];
            text_len = text_len.saturating_add(n.text_len);
            if i > 0 {
                text_len = text_len.saturating_add(1);
            }
            instances = instances.saturating_add(n.instances);
            depth = depth.max(n.depth + 1);
        }
        let children: &'static [SetHandle] = Box::leak(children.into_boxed_slice());
        let node: &'static Node = Box::leak(Box::new(Node {
            children,
            text_len,
            instances,
            depth,
        }));
        let id = u32::try_from(self.nodes.len()).expect("set table exhausted");
        let handle = SetHandle(id);
        self.nodes.push(node);
        self.index.insert(children, handle);
        handle
    }
}

fn node(h: SetHandle) -> &'static Node {
    universe().table.read().nodes[h.0 as usize]
}

/// Interns an already sorted, duplicate-free element list.
fn intern(children: Vec<SetHandle>) -> SetHandle {
    let u = universe();
    if let Some(&h) = u.table.read().index.get(children.as_slice()) {
        return h;
    }
    let mut table = u.table.write();
    if let Some(&h) = table.index.get(children.as_slice()) {
        return h;
    }
    table.insert(children)
}

/// Lexicographic comparison of canonical texts, without the length step.
///
/// A term's text is never a proper prefix of another term's text, so the first
/// differing element decides; when one element list is a prefix of the other,
/// the longer one continues with `,` where the shorter closes with `}`.
fn lex_cmp(mut a: SetHandle, mut b: SetHandle) -> Ordering {
    // Distinct handles have distinct texts, so the walk only ever descends
    // into the first pair of differing elements.
    loop {
        if a == b {
            return Ordering::Equal;
        }
        let (ca, cb) = (node(a).children, node(b).children);
        match ca.iter().zip(cb).find(|(x, y)| x != y) {
            Some((&x, &y)) => {
                a = x;
                b = y;
            }
            None => return cb.len().cmp(&ca.len()),
        }
    }
}

impl Ord for SetHandle {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        node(*self)
            .text_len
            .cmp(&node(*other).text_len)
            .then_with(|| lex_cmp(*self, *other))
    }
}

impl PartialOrd for SetHandle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl SetHandle {
    /// The empty set `{}`.
    pub fn empty() -> SetHandle {
        universe();
        SetHandle(0)
    }

    /// The set of the given elements. Order and repetition are irrelevant.
    pub fn from_elements<I: IntoIterator<Item = SetHandle>>(elems: I) -> SetHandle {
        let mut children: Vec<SetHandle> = elems.into_iter().collect();
        children.sort_unstable();
        children.dedup();
        intern(children)
    }

    /// `{self}`.
    pub fn singleton(self) -> SetHandle {
        intern(vec![self])
    }

    /// The opaque interned id.
    pub fn id(self) -> u32 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Elements in canonical order.
    pub fn elements(self) -> &'static [SetHandle] {
        node(self).children
    }

    pub fn cardinality(self) -> usize {
        node(self).children.len()
    }

    /// Von Neumann rank: the length of the longest membership chain down to `{}`.
    pub fn depth(self) -> u32 {
        node(self).depth
    }

    /// Length in bytes of the canonical text (saturating).
    pub fn text_len(self) -> u128 {
        node(self).text_len
    }

    /// Number of subterm occurrences in the canonical text: one for the set
    /// itself plus the instance counts of its elements (saturating).
    pub fn instance_count(self) -> u128 {
        node(self).instances
    }

    pub fn union(self, other: SetHandle) -> SetHandle {
        SetHandle::from_elements(self.elements().iter().chain(other.elements()).copied())
    }

    /// Whether `self` is a constituent of `other`: equal to it, or a
    /// constituent of one of its elements.
    pub fn is_constituent_of(self, other: SetHandle) -> bool {
        if self == other {
            return true;
        }
        let target_depth = self.depth();
        if target_depth >= other.depth() {
            return false;
        }
        let mut seen = HashSet::new();
        let mut stack = vec![other];
        while let Some(s) = stack.pop() {
            for &c in s.elements() {
                if c == self {
                    return true;
                }
                if c.depth() > target_depth && seen.insert(c) {
                    stack.push(c);
                }
            }
        }
        false
    }

    /// All constituents, including `self` and `{}`, in canonical order.
    pub fn constituents(self) -> Vec<SetHandle> {
        let mut seen = HashSet::new();
        seen.insert(self);
        let mut stack = vec![self];
        while let Some(s) = stack.pop() {
            for &c in s.elements() {
                if seen.insert(c) {
                    stack.push(c);
                }
            }
        }
        let mut out: Vec<SetHandle> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// The canonical brace text.
    pub fn text(self) -> String {
        let len = usize::try_from(self.text_len()).unwrap_or(usize::MAX);
        let mut out = String::with_capacity(len.min(1 << 20));
        write_text(self, &mut out);
        out
    }
}

fn write_text(h: SetHandle, out: &mut String) {
    // Explicit stack: deep sets such as large Zermelo numerals would
    // otherwise overflow the call stack.
    out.push('{');
    let mut stack: Vec<(&'static [SetHandle], usize)> = vec![(h.elements(), 0)];
    while let Some((children, i)) = stack.last_mut() {
        if *i < children.len() {
            if *i > 0 {
                out.push(',');
            }
            let c = children[*i];
            *i += 1;
            out.push('{');
            stack.push((c.elements(), 0));
        } else {
            out.push('}');
            stack.pop();
        }
    }
}

impl fmt::Display for SetHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

impl fmt::Debug for SetHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const LIMIT: u128 = 64;
        if self.text_len() <= LIMIT {
            write!(f, "#{} {}", self.0, self)
        } else {
            let text = self.text();
            write!(f, "#{} {}…", self.0, &text[..LIMIT as usize])
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Expect {
    Open,
    OpenOrClose,
    CommaOrClose,
}

/// Parses brace text such as `{{},{{}}}`. Whitespace is ignored and the input
/// need not be canonical: elements may appear in any order and repeat.
pub fn parse(text: &str) -> Result<SetHandle> {
    let malformed = |position, message: &str| Error::MalformedText {
        position,
        message: message.to_string(),
    };
    let mut stack: Vec<Vec<SetHandle>> = Vec::new();
    let mut expect = Expect::Open;
    let mut result = None;
    for (pos, byte) in text.bytes().enumerate() {
        if byte.is_ascii_whitespace() {
            continue;
        }
        if result.is_some() {
            return Err(malformed(pos, "trailing characters after the set"));
        }
        match byte {
            b'{' => {
                if expect == Expect::CommaOrClose {
                    return Err(malformed(pos, "expected ',' or '}'"));
                }
                stack.push(Vec::new());
                expect = Expect::OpenOrClose;
            }
            b'}' => {
                if expect == Expect::Open {
                    return Err(malformed(pos, "expected '{'"));
                }
                let children = stack
                    .pop()
                    .ok_or_else(|| malformed(pos, "unbalanced '}'"))?;
                let set = SetHandle::from_elements(children);
                match stack.last_mut() {
                    Some(parent) => parent.push(set),
                    None => result = Some(set),
                }
                expect = Expect::CommaOrClose;
            }
            b',' => {
                if expect != Expect::CommaOrClose || stack.is_empty() {
                    return Err(malformed(pos, "unexpected ','"));
                }
                expect = Expect::Open;
            }
            _ => return Err(malformed(pos, "unexpected character")),
        }
    }
    result.ok_or_else(|| malformed(text.len(), "unbalanced or empty input"))
}

impl FromStr for SetHandle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}
