//! Isotone maps between finite posets.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::poset::{BoundedPoset, OrderedSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error("map has {got} entries but the source has {expected} elements")]
    Length { expected: usize, got: usize },
    #[error("image {image} of element {element} is outside the target")]
    OutOfRange { element: usize, image: usize },
    #[error("map is not isotone: #{0} <= #{1} but the images are not ordered")]
    NotIsotone(usize, usize),
    #[error("incompatible boundaries: {0}")]
    Boundary(String),
}

/// An element map between two ordered carriers.
///
/// Endpoints are shared; equality compares the maps pointwise after checking
/// that the endpoints agree as posets.
pub struct PosetMorphism<S, T = S> {
    pub source: Arc<S>,
    pub target: Arc<T>,
    pub map: Vec<usize>,
}

/// Morphism of bounded posets.
pub type BoundedMorphism = PosetMorphism<BoundedPoset>;

impl<S, T> Clone for PosetMorphism<S, T> {
    fn clone(&self) -> Self {
        PosetMorphism {
            source: Arc::clone(&self.source),
            target: Arc::clone(&self.target),
            map: self.map.clone(),
        }
    }
}

impl<S: OrderedSet, T: OrderedSet> PosetMorphism<S, T> {
    /// Checks lengths and ranges only; order conditions are left to [`Self::check`].
    pub fn new(source: Arc<S>, target: Arc<T>, map: Vec<usize>) -> Result<Self, MorphismError> {
        if map.len() != source.len() {
            return Err(MorphismError::Length {
                expected: source.len(),
                got: map.len(),
            });
        }
        if let Some((element, &image)) = map.iter().enumerate().find(|(_, &y)| y >= target.len()) {
            return Err(MorphismError::OutOfRange { element, image });
        }
        Ok(PosetMorphism {
            source,
            target,
            map,
        })
    }

    pub(crate) fn new_unchecked(source: Arc<S>, target: Arc<T>, map: Vec<usize>) -> Self {
        debug_assert_eq!(map.len(), source.len());
        PosetMorphism {
            source,
            target,
            map,
        }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self ∘ inner`.
    pub fn after<R: OrderedSet>(&self, inner: &PosetMorphism<R, S>) -> PosetMorphism<R, T> {
        assert_eq!(
            inner.target.len(),
            self.source.len(),
            "composing morphisms with mismatched carriers"
        );
        PosetMorphism {
            source: Arc::clone(&inner.source),
            target: Arc::clone(&self.target),
            map: inner.map.iter().map(|&x| self.map[x]).collect(),
        }
    }

    /// Lists every order or bound violation; an empty report means the map is a morphism.
    pub fn check(&self) -> MorphismReport {
        check_map(&*self.source, &*self.target, &self.map)
    }

    pub fn is_valid(&self) -> bool {
        self.check().is_ok()
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        for &y in &self.map {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Bijective, isotone and order-reflecting.
    pub fn is_isomorphism(&self) -> bool {
        let n = self.source.len();
        if n != self.target.len() || !self.is_surjective() {
            return false;
        }
        (0..n).all(|x| {
            (0..n).all(|y| self.source.leq(x, y) == self.target.leq(self.map[x], self.map[y]))
        })
    }

    /// Pointwise equality, requiring equal endpoints.
    pub fn same_as(&self, other: &PosetMorphism<S, T>) -> bool {
        self.source.poset() == other.source.poset()
            && self.target.poset() == other.target.poset()
            && self.map == other.map
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .map
            .iter()
            .enumerate()
            .map(|(x, &y)| format!("{}↦{}", self.source.label(x), self.target.label(y)))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

impl<S: OrderedSet> PosetMorphism<S, S> {
    pub fn identity(obj: Arc<S>) -> Self {
        let map = (0..obj.len()).collect();
        PosetMorphism {
            source: Arc::clone(&obj),
            target: obj,
            map,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(x, &y)| x == y)
    }

    pub fn is_idempotent(&self) -> bool {
        self.map.iter().all(|&y| self.map[y] == y)
    }
}

impl<S: OrderedSet, T: OrderedSet> fmt::Debug for PosetMorphism<S, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PosetMorphism{}", self.describe())
    }
}

impl<S: OrderedSet, T: OrderedSet> PartialEq for PosetMorphism<S, T> {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismViolation {
    /// `x <= y` in the source but not `f(x) <= f(y)`.
    NotIsotone {
        x: usize,
        y: usize,
    },
    BottomNotPreserved {
        image: usize,
    },
    TopNotPreserved {
        image: usize,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MorphismReport {
    pub violations: Vec<MorphismViolation>,
}

impl MorphismReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismViolation::NotIsotone { x, y } => {
                write!(f, "not isotone: #{x} <= #{y} but images are not ordered")
            }
            MorphismViolation::BottomNotPreserved { image } => {
                write!(f, "bottom not preserved: 0 maps to #{image}")
            }
            MorphismViolation::TopNotPreserved { image } => {
                write!(f, "top not preserved: 1 maps to #{image}")
            }
        }
    }
}

/// Isotonicity and (when both ends are bounded) bound preservation of a raw map.
pub fn check_map<S: OrderedSet + ?Sized, T: OrderedSet + ?Sized>(
    source: &S,
    target: &T,
    map: &[usize],
) -> MorphismReport {
    let n = source.len();
    let mut violations = Vec::new();
    if let (Some((sb, st)), Some((tb, tt))) = (source.bounds(), target.bounds()) {
        if map[sb] != tb {
            violations.push(MorphismViolation::BottomNotPreserved { image: map[sb] });
        }
        if map[st] != tt {
            violations.push(MorphismViolation::TopNotPreserved { image: map[st] });
        }
    }
    for x in 0..n {
        for y in 0..n {
            if x != y && source.leq(x, y) && !target.leq(map[x], map[y]) {
                violations.push(MorphismViolation::NotIsotone { x, y });
            }
        }
    }
    MorphismReport { violations }
}

/// Diagnostic entry point mirroring [`PosetMorphism::check`].
pub fn check_morphism<S: OrderedSet, T: OrderedSet>(f: &PosetMorphism<S, T>) -> MorphismReport {
    f.check()
}

/// Every isotone map `P -> R`, bound-preserving when both carriers are bounded,
/// in lexicographic order of the map vectors.
pub fn enumerate_maps<S: OrderedSet + ?Sized, T: OrderedSet + ?Sized>(
    p: &S,
    r: &T,
) -> Vec<Vec<usize>> {
    let n = p.len();
    let m = r.len();
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    if m == 0 {
        return out;
    }
    let fixed: Vec<Option<usize>> = match (p.bounds(), r.bounds()) {
        (Some((pb, pt)), Some((rb, rt))) => {
            let mut f = vec![None; n];
            f[pb] = Some(rb);
            if f[pt].is_some_and(|v| v != rt) {
                // 0 = 1 in P but not in R
                return out;
            }
            f[pt] = Some(rt);
            f
        }
        _ => vec![None; n],
    };
    let mut current = vec![0usize; n];
    extend_map(p, r, &fixed, 0, &mut current, &mut out);
    out
}

fn extend_map<S: OrderedSet + ?Sized, T: OrderedSet + ?Sized>(
    p: &S,
    r: &T,
    fixed: &[Option<usize>],
    x: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let n = p.len();
    if x == n {
        out.push(current.clone());
        return;
    }
    let candidates: Box<dyn Iterator<Item = usize>> = match fixed[x] {
        Some(v) => Box::new(std::iter::once(v)),
        None => Box::new(0..r.len()),
    };
    for v in candidates {
        let consistent = (0..x).all(|y| {
            (!p.leq(y, x) || r.leq(current[y], v)) && (!p.leq(x, y) || r.leq(v, current[y]))
        });
        if consistent {
            current[x] = v;
            extend_map(p, r, fixed, x + 1, current, out);
        }
    }
}

/// All morphisms `P -> R` (bound-preserving isotone maps for bounded carriers).
pub fn enumerate_morphisms<S: OrderedSet, T: OrderedSet>(
    p: &Arc<S>,
    r: &Arc<T>,
) -> Vec<PosetMorphism<S, T>> {
    enumerate_maps(&**p, &**r)
        .into_iter()
        .map(|map| PosetMorphism::new_unchecked(Arc::clone(p), Arc::clone(r), map))
        .collect()
}

/// Searches for an order isomorphism `P -> R`, also preserving bounds when both
/// are bounded.
pub fn find_isomorphism<S: OrderedSet, T: OrderedSet>(
    p: &Arc<S>,
    r: &Arc<T>,
) -> Option<PosetMorphism<S, T>> {
    find_isomorphism_map(&**p, &**r)
        .map(|map| PosetMorphism::new_unchecked(Arc::clone(p), Arc::clone(r), map))
}

/// Element signature preserved by every order isomorphism.
fn signatures<S: OrderedSet + ?Sized>(p: &S) -> Vec<(usize, usize, usize)> {
    let n = p.len();
    let heights = p.poset().heights();
    (0..n)
        .map(|a| {
            let down = (0..n).filter(|&x| p.leq(x, a)).count();
            let up = (0..n).filter(|&x| p.leq(a, x)).count();
            (heights[a], down, up)
        })
        .collect()
}

/// Raw-map form of [`find_isomorphism`].
pub fn find_isomorphism_map<S: OrderedSet + ?Sized, T: OrderedSet + ?Sized>(
    p: &S,
    r: &T,
) -> Option<Vec<usize>> {
    let n = p.len();
    if n != r.len() {
        return None;
    }
    let sp = signatures(p);
    let sr = signatures(r);
    let mut a = sp.clone();
    let mut b = sr.clone();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return None;
    }
    let mut fixed = vec![None; n];
    if let (Some((pb, pt)), Some((rb, rt))) = (p.bounds(), r.bounds()) {
        fixed[pb] = Some(rb);
        fixed[pt] = Some(rt);
        if (pb == pt) != (rb == rt) {
            return None;
        }
    }
    let mut current = vec![usize::MAX; n];
    let mut used = vec![false; n];
    iso_search(p, r, &sp, &sr, &fixed, 0, &mut current, &mut used).then_some(current)
}

#[allow(clippy::too_many_arguments)]
fn iso_search<S: OrderedSet + ?Sized, T: OrderedSet + ?Sized>(
    p: &S,
    r: &T,
    sp: &[(usize, usize, usize)],
    sr: &[(usize, usize, usize)],
    fixed: &[Option<usize>],
    x: usize,
    current: &mut [usize],
    used: &mut [bool],
) -> bool {
    let n = p.len();
    if x == n {
        return true;
    }
    for v in 0..n {
        if used[v] || sp[x] != sr[v] || fixed[x].is_some_and(|f| f != v) {
            continue;
        }
        let consistent = (0..x)
            .all(|y| p.leq(y, x) == r.leq(current[y], v) && p.leq(x, y) == r.leq(v, current[y]));
        if !consistent {
            continue;
        }
        current[x] = v;
        used[v] = true;
        if iso_search(p, r, sp, sr, fixed, x + 1, current, used) {
            return true;
        }
        used[v] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::validate_bounded_poset;

    fn c(n: usize) -> Arc<BoundedPoset> {
        Arc::new(BoundedPoset::chain(n))
    }

    fn diamond() -> Arc<BoundedPoset> {
        Arc::new(
            validate_bounded_poset(
                &["0", "a", "b", "1"],
                &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
            )
            .unwrap(),
        )
    }

    #[test]
    fn identity_is_valid() {
        assert!(PosetMorphism::identity(c(3)).check().is_ok());
    }

    #[test]
    fn collapse_c3_onto_c2() {
        let f = PosetMorphism::new(c(3), c(2), vec![0, 1, 1]).unwrap();
        assert!(check_morphism(&f).is_ok());
    }

    #[test]
    fn bottom_violation_reported() {
        let f = PosetMorphism::new(c(2), c(2), vec![1, 1]).unwrap();
        let report = f.check();
        assert_eq!(
            report.violations,
            vec![MorphismViolation::BottomNotPreserved { image: 1 }]
        );
    }

    #[test]
    fn non_isotone_pair_reported() {
        let d = diamond();
        let c3 = c(3);
        // a ↦ 1 but the rest fixed is isotone; try an order-reversing middle
        let f = PosetMorphism::new(c(4), c3, vec![0, 2, 1, 2]).unwrap();
        assert!(f
            .check()
            .violations
            .contains(&MorphismViolation::NotIsotone { x: 1, y: 2 }));
        let bad = PosetMorphism::new(d.clone(), d, vec![0, 1, 1, 0]).unwrap();
        assert!(!bad.is_valid());
    }

    #[test]
    fn hom_counts_small_chains() {
        assert_eq!(enumerate_morphisms(&c(2), &c(2)).len(), 1);
        assert_eq!(enumerate_morphisms(&c(3), &c(2)).len(), 2);
        assert_eq!(enumerate_morphisms(&c(2), &c(3)).len(), 1);
        let maps: Vec<_> = enumerate_morphisms(&c(3), &c(2))
            .into_iter()
            .map(|m| m.map)
            .collect();
        assert_eq!(maps, vec![vec![0, 0, 1], vec![0, 1, 1]]);
    }

    #[test]
    fn singleton_source_needs_singleton_target() {
        let one = Arc::new(BoundedPoset::singleton());
        assert!(enumerate_morphisms(&one, &c(2)).is_empty());
        assert_eq!(enumerate_morphisms(&c(3), &one).len(), 1);
    }

    #[test]
    fn isomorphism_search() {
        assert!(find_isomorphism(&c(3), &c(3)).unwrap().is_identity());
        assert!(find_isomorphism(&c(3), &diamond()).is_none());
        assert!(find_isomorphism(&c(4), &diamond()).is_none());
        let d = diamond();
        let iso = find_isomorphism(&d, &d).unwrap();
        assert!(iso.is_isomorphism());
    }

    #[test]
    fn composition_is_pointwise() {
        let f = PosetMorphism::new(c(4), c(3), vec![0, 1, 1, 2]).unwrap();
        let g = PosetMorphism::new(c(3), c(2), vec![0, 0, 1]).unwrap();
        assert_eq!(g.after(&f).map, vec![0, 0, 0, 1]);
    }
}
