//! Top, bottom and middle structures and the fusion that joins them.
//!
//! Notation used below: `◇n` is `Position(n) = ◇(n)` and `n◇` is `n(◇)`,
//! both with Zermelo `n`. A top structure has terminals `◇0 … ◇(m-1)`; a
//! bottom structure has maximal elements `C_n = n◇x_n` whose terminals are
//! the `x_n`. Fusion inserts each bottom terminal on top of the matching
//! top terminal, shifts every position down to `◇` and finally deletes `◇`.

use std::collections::{HashMap, HashSet};

use crate::algebra::{
    compose, compose_all, is_top, maximal_elements, remove_top, replace, top_witnesses,
};
use crate::error::{Error, Result};
use crate::numerals::zermelo;
use crate::set::SetHandle;
use crate::tuples::{diamond, make_tuple, position};

/// Candidate bound for the `⊫` and `⊨` searches.
pub const DEFAULT_BUDGET: usize = 100_000;

fn not_a(kind: &'static str, reason: impl Into<String>) -> Error {
    Error::NotAStructure {
        kind,
        reason: reason.into(),
    }
}

/// `n◇`.
pub fn marker_top(n: usize) -> SetHandle {
    compose(zermelo(n), diamond())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopStructure {
    set: SetHandle,
    arity: usize,
    offset: usize,
}

impl TopStructure {
    pub fn set(&self) -> SetHandle {
        self.set
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Index of the first terminal; zero unless declared otherwise.
    pub fn offset(&self) -> usize {
        self.offset
    }

    /// The constituent standing for terminal `n`.
    pub fn terminal(&self, n: usize) -> SetHandle {
        position(self.offset + n)
    }

    pub fn terminals(&self) -> Vec<SetHandle> {
        (0..self.arity).map(|n| self.terminal(n)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BottomStructure {
    set: SetHandle,
    markers: Vec<SetHandle>,
    terminals: Vec<SetHandle>,
}

impl BottomStructure {
    pub fn set(&self) -> SetHandle {
        self.set
    }

    pub fn arity(&self) -> usize {
        self.markers.len()
    }

    /// `C_n`, indexed by `n`.
    pub fn markers(&self) -> &[SetHandle] {
        &self.markers
    }

    /// `B_n = ({} ← n◇)C_n`, indexed by `n`.
    pub fn terminals(&self) -> &[SetHandle] {
        &self.terminals
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MiddleStructure {
    top: TopStructure,
    bottom: BottomStructure,
}

impl MiddleStructure {
    pub fn set(&self) -> SetHandle {
        self.top.set
    }

    pub fn arity(&self) -> usize {
        self.top.arity
    }

    pub fn as_top(&self) -> &TopStructure {
        &self.top
    }

    pub fn as_bottom(&self) -> &BottomStructure {
        &self.bottom
    }
}

/// `Some(n)` when `c = ◇n`.
fn as_position(c: SetHandle) -> Option<usize> {
    let k = c.depth().checked_sub(3)? as usize;
    (position(k) == c).then_some(k)
}

/// Every constituent must lie above or below one of `anchors`.
fn find_bypass(h: SetHandle, anchors: &[SetHandle]) -> Option<SetHandle> {
    h.constituents().into_iter().find(|&x| {
        !anchors
            .iter()
            .any(|&a| x.is_constituent_of(a) || a.is_constituent_of(x))
    })
}

pub fn validate_top(h: SetHandle) -> Result<TopStructure> {
    validate_top_with_offset(h, 0)
}

/// A top structure whose terminals are `◇(offset) … ◇(offset+m-1)`, for
/// diagrams too crowded to realize with terminals starting at `◇`.
pub fn validate_top_with_offset(h: SetHandle, offset: usize) -> Result<TopStructure> {
    let mut found: Vec<usize> = h
        .constituents()
        .into_iter()
        .filter_map(as_position)
        .collect();
    found.sort_unstable();
    let Some(&last) = found.last() else {
        return Err(not_a("top", "no Position constituents"));
    };
    if last < offset {
        return Err(not_a(
            "top",
            format!("terminal {last} lies below offset {offset}"),
        ));
    }
    let arity = last + 1 - offset;
    for i in 0..arity {
        if found.binary_search(&(offset + i)).is_err() {
            return Err(not_a("top", format!("missing terminal {i}")));
        }
    }
    if found[0] < offset {
        return Err(not_a(
            "top",
            format!("stray position {} below offset", found[0]),
        ));
    }
    let t = TopStructure {
        set: h,
        arity,
        offset,
    };
    if let Some(x) = find_bypass(h, &t.terminals()) {
        return Err(not_a(
            "top",
            format!("constituent {x} bypasses every terminal"),
        ));
    }
    Ok(t)
}

/// Splits `c` as `n◇x`: `n` singleton layers over `◇(x)`.
fn split_marker(c: SetHandle) -> Option<(usize, SetHandle)> {
    let mut n = 0;
    let mut cur = c;
    while let [only] = *cur.elements() {
        cur = only;
        n += 1;
    }
    // ◇(x) always has two elements, so the peeling stopped at it if anywhere.
    match top_witnesses(diamond(), cur).as_slice() {
        [x] => Some((n, *x)),
        _ => None,
    }
}

pub fn validate_bottom(h: SetHandle) -> Result<BottomStructure> {
    let elems = h.elements();
    if elems.is_empty() {
        return Err(not_a("bottom", "the empty set has no markers"));
    }
    let maximal = maximal_elements(elems);
    for &e in elems {
        if !maximal.contains(&e) && split_marker(e).is_some() {
            return Err(not_a("bottom", format!("marker {e} is not maximal")));
        }
    }
    let mut slots: Vec<Option<(SetHandle, SetHandle)>> = vec![None; maximal.len()];
    for &c in &maximal {
        let Some((n, x)) = split_marker(c) else {
            return Err(not_a(
                "bottom",
                format!("maximal element {c} is not of the form n◇x"),
            ));
        };
        if n >= slots.len() {
            return Err(not_a("bottom", format!("marker index {n} leaves a gap")));
        }
        if slots[n].is_some() {
            return Err(not_a("bottom", format!("duplicate marker index {n}")));
        }
        slots[n] = Some((c, x));
    }
    let (markers, terminals): (Vec<_>, Vec<_>) = slots.into_iter().map(Option::unwrap).unzip();
    if let Some(x) = find_bypass(h, &markers) {
        return Err(not_a(
            "bottom",
            format!("constituent {x} bypasses every marker"),
        ));
    }
    Ok(BottomStructure {
        set: h,
        markers,
        terminals,
    })
}

pub fn validate_middle(h: SetHandle) -> Result<MiddleStructure> {
    let top = validate_top(h).map_err(|e| not_a("middle", e.to_string()))?;
    let bottom = validate_bottom(h).map_err(|e| not_a("middle", e.to_string()))?;
    if top.arity != bottom.arity() {
        return Err(not_a(
            "middle",
            format!(
                "{} top terminals but {} bottom markers",
                top.arity,
                bottom.arity()
            ),
        ));
    }
    let terminals = top.terminals();
    if let Some(c) = bottom.markers.iter().find(|c| terminals.contains(c)) {
        return Err(not_a(
            "middle",
            format!("{c} is both a top terminal and a marker"),
        ));
    }
    Ok(MiddleStructure { top, bottom })
}

/// `B_n = ({} ← n◇)C_n`.
pub fn bottom_terminal(b: &BottomStructure, n: usize) -> Result<SetHandle> {
    let c = *b.markers.get(n).ok_or(Error::IndexOutOfRange {
        index: n,
        arity: b.arity(),
    })?;
    remove_top(marker_top(n), c)
}

/// Equal arity, and `T_n◇ ⊣ ◇C_n` for every `n`.
pub fn match_terminals(t: &TopStructure, b: &BottomStructure) -> bool {
    let d = diamond();
    t.arity == b.arity()
        && (0..t.arity).all(|n| is_top(compose(t.terminal(n), d), compose(d, b.markers[n])))
}

/// The three replacement phases, applied to any set `x`.
fn fusion_phases(x: SetHandle, t: &TopStructure, terms: &[SetHandle]) -> SetHandle {
    let mut x = x;
    for (n, &b) in terms.iter().enumerate() {
        let p = t.terminal(n);
        x = replace(x, p, compose(b, p));
    }
    for n in (1..t.offset + t.arity).rev() {
        x = replace(x, position(n), position(n - 1));
    }
    replace(x, diamond(), SetHandle::empty())
}

pub fn fuse(t: &TopStructure, b: &BottomStructure) -> Result<SetHandle> {
    if !match_terminals(t, b) {
        return Err(Error::TerminalMismatch);
    }
    fuse_with_terminals(t, &b.terminals)
}

/// Fusion against bare terminals, which also covers the all-empty case that
/// is not a bottom structure.
pub fn fuse_with_terminals(t: &TopStructure, terms: &[SetHandle]) -> Result<SetHandle> {
    if terms.len() != t.arity {
        return Err(Error::ArityMismatch {
            expected: t.arity,
            found: terms.len(),
        });
    }
    Ok(fusion_phases(t.set, t, terms))
}

/// `{n◇B_n}`.
pub fn bottom_from_terminals(terms: &[SetHandle]) -> SetHandle {
    SetHandle::from_elements(
        terms
            .iter()
            .enumerate()
            .map(|(n, &b)| compose(marker_top(n), b)),
    )
}

fn middle_from(entries: SetHandle) -> Result<MiddleStructure> {
    validate_middle(entries)
}

/// `(x0, …, xk)_M = {n◇x_n◇n}`.
pub fn middle(entries: &[SetHandle]) -> Result<MiddleStructure> {
    if entries.is_empty() {
        return Err(Error::EmptyTuple);
    }
    let d = diamond();
    middle_from(SetHandle::from_elements(
        entries
            .iter()
            .enumerate()
            .map(|(n, &x)| compose_all(&[zermelo(n), d, x, d, zermelo(n)])),
    ))
}

/// `I_M = {n◇◇n}`.
pub fn middle_identity(m: usize) -> Result<MiddleStructure> {
    middle(&vec![SetHandle::empty(); m])
}

/// `{n◇◇perm(n)}`: terminal `n` above is wired to terminal `perm(n)` below.
pub fn middle_permutation(perm: &[usize]) -> Result<MiddleStructure> {
    let m = perm.len();
    let mut seen = vec![false; m];
    if m == 0
        || perm
            .iter()
            .any(|&p| p >= m || std::mem::replace(&mut seen[p], true))
    {
        return Err(Error::NotAPermutation(m));
    }
    let d = diamond();
    middle_from(SetHandle::from_elements(
        perm.iter()
            .enumerate()
            .map(|(n, &p)| compose_all(&[zermelo(n), d, d, zermelo(p)])),
    ))
}

pub fn inverse_permutation(perm: &[usize]) -> Result<Vec<usize>> {
    let mut inv = vec![usize::MAX; perm.len()];
    for (n, &p) in perm.iter().enumerate() {
        if p >= perm.len() || inv[p] != usize::MAX {
            return Err(Error::NotAPermutation(perm.len()));
        }
        inv[p] = n;
    }
    Ok(inv)
}

/// `a` on top of `b`.
pub fn fuse_middle(a: &MiddleStructure, b: &MiddleStructure) -> Result<MiddleStructure> {
    if a.arity() != b.arity() {
        return Err(Error::ArityMismatch {
            expected: a.arity(),
            found: b.arity(),
        });
    }
    middle_from(fuse(&a.top, &b.bottom)?)
}

/// Fuses the all-empty tuple on top and all-empty terminals below, leaving
/// the set whose elements are the branches of `m`.
///
/// Closing the bottom first may leave a set like `{◇, 1◇}` that is not a
/// bottom structure, so each marker is closed on its own and its terminal
/// read off directly.
pub fn close(m: &MiddleStructure) -> Result<SetHandle> {
    let k = m.arity();
    let empties = vec![SetHandle::empty(); k];
    let terms = m
        .bottom
        .markers
        .iter()
        .enumerate()
        .map(|(n, &c)| {
            let closed = fusion_phases(c, &m.top, &empties);
            match top_witnesses(marker_top(n), closed).as_slice() {
                [x] => Ok(*x),
                [] => Err(Error::TerminalMismatch),
                many => Err(Error::AmbiguousWitness { count: many.len() }),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let top = validate_top(make_tuple(&empties)?)?;
    fuse_with_terminals(&top, &terms)
}

/// `t ⊫ x`: a bottom structure `b` with `x` the fusion of `t` and `b`.
///
/// Terminal assignments are drawn from the constituents of `x` (every fused
/// terminal survives as one) and each is checked by fusing.
pub fn has_top_structure(
    t: &TopStructure,
    x: SetHandle,
    budget: usize,
) -> Result<Option<BottomStructure>> {
    let pool = x.constituents();
    let m = t.arity;
    let mut idx = vec![0usize; m];
    let mut tried = 0usize;
    loop {
        tried += 1;
        if tried > budget {
            return Err(Error::SearchBudgetExceeded(budget));
        }
        let terms: Vec<SetHandle> = idx.iter().map(|&i| pool[i]).collect();
        if fuse_with_terminals(t, &terms)? == x {
            if let Ok(b) = validate_bottom(bottom_from_terminals(&terms)) {
                if b.terminals == terms {
                    return Ok(Some(b));
                }
            }
        }
        // Odometer over pool^m.
        let mut k = 0;
        loop {
            if k == m {
                return Ok(None);
            }
            idx[k] += 1;
            if idx[k] < pool.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

struct Preimages<'a> {
    terms: &'a [SetHandle],
    positions: Vec<SetHandle>,
    memo: HashMap<SetHandle, Vec<SetHandle>>,
    budget: usize,
    spent: usize,
}

impl Preimages<'_> {
    fn spend(&mut self) -> Result<()> {
        self.spent += 1;
        if self.spent > self.budget {
            Err(Error::SearchBudgetExceeded(self.budget))
        } else {
            Ok(())
        }
    }

    fn has_terminal(&self, s: SetHandle) -> bool {
        self.positions.iter().any(|p| p.is_constituent_of(s))
    }

    /// Sets that fusion could map onto `w`.
    fn of(&mut self, w: SetHandle) -> Result<Vec<SetHandle>> {
        if let Some(r) = self.memo.get(&w) {
            return Ok(r.clone());
        }
        let mut out: Vec<SetHandle> = Vec::new();
        for (n, &b) in self.terms.iter().enumerate() {
            if b == w {
                self.spend()?;
                out.push(self.positions[n]);
            }
        }
        // Fusion fixes sets without terminals, but in a top structure such a
        // set has to sit below some terminal.
        if self
            .positions
            .iter()
            .any(|&p| p != w && w.is_constituent_of(p))
        {
            self.spend()?;
            out.push(w);
        }
        // Each element of w needs a nonempty set of preimages; at least one
        // chosen preimage must carry a terminal, or w itself already covers it.
        let mut choices: Vec<Vec<Vec<SetHandle>>> = Vec::new();
        let mut feasible = true;
        for &e in w.elements() {
            let pre = self.of(e)?;
            if pre.is_empty() {
                feasible = false;
                break;
            }
            if pre.len() >= 20 || (1usize << pre.len()) > self.budget.saturating_sub(self.spent) {
                return Err(Error::SearchBudgetExceeded(self.budget));
            }
            let subsets: Vec<Vec<SetHandle>> = (1u32..(1 << pre.len()))
                .map(|mask| {
                    pre.iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, &s)| s)
                        .collect()
                })
                .collect();
            choices.push(subsets);
        }
        if feasible && !choices.is_empty() {
            let mut seen: HashSet<SetHandle> = out.iter().copied().collect();
            let mut idx = vec![0usize; choices.len()];
            'odometer: loop {
                let elems = idx
                    .iter()
                    .zip(&choices)
                    .flat_map(|(&i, c)| c[i].iter().copied());
                let s = SetHandle::from_elements(elems);
                self.spend()?;
                if self.has_terminal(s) && seen.insert(s) {
                    out.push(s);
                }
                let mut k = 0;
                loop {
                    if k == idx.len() {
                        break 'odometer;
                    }
                    idx[k] += 1;
                    if idx[k] < choices[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
            }
        }
        self.memo.insert(w, out.clone());
        Ok(out)
    }
}

/// `x` with every occurrence of each terminal `B_n` replaced by `◇n` at
/// once, outermost occurrence first.
fn unfuse(x: SetHandle, b: &BottomStructure) -> SetHandle {
    fn go(
        w: SetHandle,
        targets: &HashMap<SetHandle, SetHandle>,
        memo: &mut HashMap<SetHandle, SetHandle>,
    ) -> SetHandle {
        if let Some(&p) = targets.get(&w) {
            return p;
        }
        if let Some(&r) = memo.get(&w) {
            return r;
        }
        let r = SetHandle::from_elements(w.elements().iter().map(|&e| go(e, targets, memo)));
        memo.insert(w, r);
        r
    }
    let targets: HashMap<SetHandle, SetHandle> = b
        .terminals
        .iter()
        .enumerate()
        .map(|(n, &t)| (t, position(n)))
        .collect();
    go(x, &targets, &mut HashMap::new())
}

/// `x ⊨ b`: a top structure `t` with `x` the fusion of `t` and `b`.
///
/// The terminals of a bottom structure are distinct (equal ones would make
/// one marker a constituent of another), so the first candidate is `x` with
/// every `B_n` turned back into `◇n`. Failing that, fusion rebuilds every set
/// from its elements and sends `◇n` to `B_n`, so candidate tops are
/// assembled bottom-up from preimages of the constituents of `x`, then
/// validated and fused to confirm. Only sets below some `◇k` may be their own
/// preimage, as every other constituent of a top structure lies above a
/// terminal.
pub fn has_bottom_structure(
    x: SetHandle,
    b: &BottomStructure,
    budget: usize,
) -> Result<Option<TopStructure>> {
    let m = b.arity();
    let check = |cand: SetHandle| -> Result<Option<TopStructure>> {
        match validate_top(cand) {
            Ok(t) if t.arity == m && fuse(&t, b)? == x => Ok(Some(t)),
            _ => Ok(None),
        }
    };
    if let Some(t) = check(unfuse(x, b))? {
        return Ok(Some(t));
    }
    let mut search = Preimages {
        terms: &b.terminals,
        positions: (0..m).map(position).collect(),
        memo: HashMap::new(),
        budget,
        spent: 0,
    };
    for cand in search.of(x)? {
        if let Some(t) = check(cand)? {
            return Ok(Some(t));
        }
    }
    Ok(None)
}
