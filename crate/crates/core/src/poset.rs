//! Finite posets and bounded posets stored as dense relation tables.
//!
//! Elements are indices `0..len`; labels are carried along for presentation
//! only and never take part in equality.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("empty carrier")]
    Empty,
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("relation table has {got} cells, expected {expected}")]
    TableSize { expected: usize, got: usize },
    #[error("relation is not reflexive at `{0}`")]
    NotReflexive(String),
    #[error("cycle detected: `{0}` and `{1}` are mutually below each other")]
    Cycle(String, String),
    #[error("relation is not transitive at `{0}` <= `{1}` <= `{2}`")]
    NotTransitive(String, String, String),
    #[error("no unique bottom element")]
    NoUniqueBottom,
    #[error("no unique top element")]
    NoUniqueTop,
    #[error("`{0}` is not the bottom element")]
    NotBottom(String),
    #[error("`{0}` is not the top element")]
    NotTop(String),
}

/// Anything with an underlying finite partial order.
///
/// Implemented by plain and bounded posets, the interval and triple posets,
/// and pseudo D-posets, so that morphisms and their checks can be shared.
pub trait OrderedSet {
    fn poset(&self) -> &Poset;

    /// `(bottom, top)` when the carrier is a bounded poset.
    fn bounds(&self) -> Option<(usize, usize)> {
        None
    }

    fn len(&self) -> usize {
        self.poset().len()
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn leq(&self, a: usize, b: usize) -> bool {
        self.poset().leq(a, b)
    }

    fn label(&self, i: usize) -> &str {
        self.poset().label(i)
    }
}

/// An ordered carrier with distinguished least and greatest elements.
pub trait Bounded: OrderedSet {
    fn bottom(&self) -> usize;
    fn top(&self) -> usize;
}

/// A finite poset: `leq[a * n + b]` holds iff `a <= b`.
#[derive(Clone)]
pub struct Poset {
    len: usize,
    leq: Vec<bool>,
    labels: Vec<String>,
}

impl Poset {
    /// Builds a poset from a full relation table, checking the partial-order laws.
    pub fn from_relation(labels: Vec<String>, leq: Vec<bool>) -> Result<Self, PosetError> {
        let len = labels.len();
        if leq.len() != len * len {
            return Err(PosetError::TableSize {
                expected: len * len,
                got: leq.len(),
            });
        }
        let p = Poset { len, leq, labels };
        p.validate()?;
        Ok(p)
    }

    /// Reflexive-transitive closure of a generating relation given by index pairs.
    pub fn from_covers(labels: Vec<String>, covers: &[(usize, usize)]) -> Result<Self, PosetError> {
        let n = labels.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in covers {
            if a >= n {
                return Err(PosetError::UnknownElement(a.to_string()));
            }
            if b >= n {
                return Err(PosetError::UnknownElement(b.to_string()));
            }
            leq[a * n + b] = true;
        }
        warshall(&mut leq, n);
        let p = Poset {
            len: n,
            leq,
            labels,
        };
        p.validate()?;
        Ok(p)
    }

    /// Trusted constructor for internally generated relations.
    pub(crate) fn from_relation_unchecked(labels: Vec<String>, leq: Vec<bool>) -> Self {
        let len = labels.len();
        debug_assert_eq!(leq.len(), len * len);
        let p = Poset { len, leq, labels };
        debug_assert!(p.validate().is_ok());
        p
    }

    /// One-element poset.
    pub fn singleton(label: impl Into<String>) -> Self {
        Poset {
            len: 1,
            leq: vec![true],
            labels: vec![label.into()],
        }
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(labels: Vec<String>) -> Self {
        let n = labels.len();
        let leq = (0..n * n).map(|k| k / n <= k % n).collect();
        Poset {
            len: n,
            leq,
            labels,
        }
    }

    fn validate(&self) -> Result<(), PosetError> {
        let n = self.len;
        for a in 0..n {
            if !self.leq(a, a) {
                return Err(PosetError::NotReflexive(self.labels[a].clone()));
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if self.leq(a, b) && self.leq(b, a) {
                    return Err(PosetError::Cycle(
                        self.labels[a].clone(),
                        self.labels[b].clone(),
                    ));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !self.leq(a, b) {
                    continue;
                }
                for c in 0..n {
                    if self.leq(b, c) && !self.leq(a, c) {
                        return Err(PosetError::NotTransitive(
                            self.labels[a].clone(),
                            self.labels[b].clone(),
                            self.labels[c].clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn relation(&self) -> &[bool] {
        &self.leq
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Pairs `(a, b)` with `a < b` and nothing strictly in between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Unique least element, if any.
    pub fn least(&self) -> Option<usize> {
        let mut found = (0..self.len).filter(|&a| (0..self.len).all(|x| self.leq(a, x)));
        let first = found.next()?;
        found.next().is_none().then_some(first)
    }

    /// Unique greatest element, if any.
    pub fn greatest(&self) -> Option<usize> {
        let mut found = (0..self.len).filter(|&a| (0..self.len).all(|x| self.leq(x, a)));
        let first = found.next()?;
        found.next().is_none().then_some(first)
    }

    /// Length of the longest chain ending at each element.
    pub fn heights(&self) -> Vec<usize> {
        let n = self.len;
        let mut order: Vec<usize> = (0..n).collect();
        // elements with fewer strict predecessors first is a linear extension
        order.sort_by_key(|&a| (0..n).filter(|&x| self.lt(x, a)).count());
        let mut h = vec![0; n];
        for &a in &order {
            h[a] = (0..n)
                .filter(|&x| self.lt(x, a))
                .map(|x| h[x] + 1)
                .max()
                .unwrap_or(0);
        }
        h
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.len);
        self.labels = labels;
        self
    }
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.leq == other.leq
    }
}

impl Eq for Poset {}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<_> = self
            .covers()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", self.labels[a], self.labels[b]))
            .collect();
        f.debug_struct("Poset")
            .field("elements", &self.labels)
            .field("covers", &covers)
            .finish()
    }
}

impl OrderedSet for Poset {
    fn poset(&self) -> &Poset {
        self
    }
}

/// A poset with distinguished least and greatest elements.
#[derive(Clone, PartialEq, Eq)]
pub struct BoundedPoset {
    poset: Poset,
    bottom: usize,
    top: usize,
}

impl BoundedPoset {
    /// Wraps a poset, locating its unique bottom and top.
    pub fn from_poset(poset: Poset) -> Result<Self, PosetError> {
        if poset.is_empty() {
            return Err(PosetError::Empty);
        }
        let bottom = poset.least().ok_or(PosetError::NoUniqueBottom)?;
        let top = poset.greatest().ok_or(PosetError::NoUniqueTop)?;
        Ok(BoundedPoset { poset, bottom, top })
    }

    /// Wraps a poset with explicitly named bounds, checking that they are bounds.
    pub fn with_bounds(poset: Poset, bottom: usize, top: usize) -> Result<Self, PosetError> {
        let n = poset.len();
        if bottom >= n || top >= n {
            return Err(PosetError::Empty);
        }
        if (0..n).any(|x| !poset.leq(bottom, x)) {
            return Err(PosetError::NotBottom(poset.label(bottom).to_string()));
        }
        if (0..n).any(|x| !poset.leq(x, top)) {
            return Err(PosetError::NotTop(poset.label(top).to_string()));
        }
        Ok(BoundedPoset { poset, bottom, top })
    }

    /// The terminal bounded poset, where `0 = 1`.
    pub fn singleton() -> Self {
        BoundedPoset {
            poset: Poset::singleton("0"),
            bottom: 0,
            top: 0,
        }
    }

    /// Chain on `n >= 1` elements labelled `0, a, b, ..., 1`.
    pub fn chain(n: usize) -> Self {
        assert!(n >= 1);
        let poset = Poset::chain(standard_labels(n));
        BoundedPoset {
            poset,
            bottom: 0,
            top: n - 1,
        }
    }

    pub fn as_poset(&self) -> &Poset {
        &self.poset
    }

    pub fn into_poset(self) -> Poset {
        self.poset
    }

    pub fn with_labels(self, labels: Vec<String>) -> Self {
        BoundedPoset {
            poset: self.poset.with_labels(labels),
            ..self
        }
    }
}

impl fmt::Debug for BoundedPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundedPoset")
            .field("poset", &self.poset)
            .field("bottom", &self.poset.label(self.bottom))
            .field("top", &self.poset.label(self.top))
            .finish()
    }
}

impl Bounded for BoundedPoset {
    fn bottom(&self) -> usize {
        self.bottom
    }

    fn top(&self) -> usize {
        self.top
    }
}

impl OrderedSet for BoundedPoset {
    fn poset(&self) -> &Poset {
        &self.poset
    }

    fn bounds(&self) -> Option<(usize, usize)> {
        Some((self.bottom, self.top))
    }
}

/// Labels `0, a, b, c, ..., 1` for a carrier of `n` elements; a single element is `0`.
pub fn standard_labels(n: usize) -> Vec<String> {
    match n {
        0 => Vec::new(),
        1 => vec!["0".to_string()],
        _ => {
            let mut out = vec!["0".to_string()];
            out.extend((0..n - 2).map(middle_label));
            out.push("1".to_string());
            out
        }
    }
}

fn middle_label(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("e{i}")
    }
}

/// Builds a bounded poset from element names and a generating (cover) relation.
///
/// The full order is the reflexive-transitive closure of `cover_pairs`.
pub fn validate_bounded_poset<S: AsRef<str>>(
    elements: &[S],
    cover_pairs: &[(S, S)],
) -> Result<BoundedPoset, PosetError> {
    let labels: Vec<String> = elements.iter().map(|e| e.as_ref().to_string()).collect();
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.as_str(), i).is_some() {
            return Err(PosetError::DuplicateElement(l.clone()));
        }
    }
    let lookup = |s: &S| {
        index
            .get(s.as_ref())
            .copied()
            .ok_or_else(|| PosetError::UnknownElement(s.as_ref().to_string()))
    };
    let covers = cover_pairs
        .iter()
        .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
        .collect::<Result<Vec<_>, PosetError>>()?;
    let poset = Poset::from_covers(labels, &covers)?;
    BoundedPoset::from_poset(poset)
}

/// In-place transitive closure of an `n x n` boolean relation.
pub(crate) fn warshall(rel: &mut [bool], n: usize) {
    for k in 0..n {
        for i in 0..n {
            if !rel[i * n + k] {
                continue;
            }
            for j in 0..n {
                if rel[k * n + j] {
                    rel[i * n + j] = true;
                }
            }
        }
    }
}
