//! The interval functor `I`, the triple functor `J`, and the maps
//! `[0≤_]: P -> I(P)`, `α: J(P) -> I(I(P))`, `β: J(P) -> I(P)`.
//!
//! Carriers are materialized eagerly: `|I(P)|` is the number of comparable
//! pairs and `|J(P)|` the number of comparable triples, so both grow
//! polynomially (quadratic and cubic) in `|P|`. Elements are listed in
//! lexicographic order of their component indices.

use std::collections::HashMap;
use std::sync::Arc;

use crate::morphism::{MorphismError, PosetMorphism};
use crate::poset::{Bounded, OrderedSet, Poset};

const NONE: usize = usize::MAX;

/// The poset of comparable pairs `[a≤b]`, with `[a≤b] <= [c≤d]` iff `c≤a≤b≤d`.
#[derive(Clone, Debug)]
pub struct IntervalPoset {
    base_len: usize,
    pairs: Vec<(usize, usize)>,
    index: Vec<usize>,
    poset: Poset,
}

impl IntervalPoset {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn pair(&self, i: usize) -> (usize, usize) {
        self.pairs[i]
    }

    /// Index of `[lo≤hi]`, if the pair is comparable.
    pub fn index_of(&self, lo: usize, hi: usize) -> Option<usize> {
        match self.index[lo * self.base_len + hi] {
            NONE => None,
            i => Some(i),
        }
    }

    pub fn base_len(&self) -> usize {
        self.base_len
    }
}

impl OrderedSet for IntervalPoset {
    fn poset(&self) -> &Poset {
        &self.poset
    }
}

/// `I(P)`.
pub fn interval_poset<P: OrderedSet + ?Sized>(p: &P) -> IntervalPoset {
    let n = p.len();
    let mut pairs = Vec::new();
    let mut index = vec![NONE; n * n];
    for a in 0..n {
        for b in 0..n {
            if p.leq(a, b) {
                index[a * n + b] = pairs.len();
                pairs.push((a, b));
            }
        }
    }
    let m = pairs.len();
    let mut leq = vec![false; m * m];
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for (j, &(c, d)) in pairs.iter().enumerate() {
            leq[i * m + j] = p.leq(c, a) && p.leq(b, d);
        }
    }
    let labels = pairs
        .iter()
        .map(|&(a, b)| format!("[{},{}]", p.label(a), p.label(b)))
        .collect();
    IntervalPoset {
        base_len: n,
        pairs,
        index,
        poset: Poset::from_relation_unchecked(labels, leq),
    }
}

/// `I(f)` between already-built interval posets of `f`'s endpoints.
pub fn interval_map_between<S: OrderedSet, T: OrderedSet>(
    f: &PosetMorphism<S, T>,
    source: &Arc<IntervalPoset>,
    target: &Arc<IntervalPoset>,
) -> Result<PosetMorphism<IntervalPoset, IntervalPoset>, MorphismError> {
    if source.base_len != f.source.len() || target.base_len != f.target.len() {
        return Err(MorphismError::Boundary(
            "interval posets do not match the morphism's endpoints".into(),
        ));
    }
    let map = source
        .pairs
        .iter()
        .map(|&(a, b)| {
            target
                .index_of(f.map[a], f.map[b])
                .ok_or(MorphismError::NotIsotone(a, b))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PosetMorphism::new_unchecked(
        Arc::clone(source),
        Arc::clone(target),
        map,
    ))
}

/// `I(f)([a≤b]) = [f(a)≤f(b)]`; fails when `f` is not isotone.
pub fn interval_map<S: OrderedSet, T: OrderedSet>(
    f: &PosetMorphism<S, T>,
) -> Result<PosetMorphism<IntervalPoset, IntervalPoset>, MorphismError> {
    let source = Arc::new(interval_poset(&*f.source));
    let target = Arc::new(interval_poset(&*f.target));
    interval_map_between(f, &source, &target)
}

/// The poset of comparable triples `[x≤y≤z]`, with
/// `[x1≤y1≤z1] <= [x2≤y2≤z2]` iff `x2≤x1`, `y1≤y2` and `z1 = z2`.
#[derive(Clone, Debug)]
pub struct TriplePoset {
    triples: Vec<(usize, usize, usize)>,
    index: HashMap<(usize, usize, usize), usize>,
    base_len: usize,
    poset: Poset,
}

impl TriplePoset {
    pub fn triples(&self) -> &[(usize, usize, usize)] {
        &self.triples
    }

    pub fn triple(&self, i: usize) -> (usize, usize, usize) {
        self.triples[i]
    }

    pub fn index_of(&self, x: usize, y: usize, z: usize) -> Option<usize> {
        self.index.get(&(x, y, z)).copied()
    }

    pub fn base_len(&self) -> usize {
        self.base_len
    }
}

impl OrderedSet for TriplePoset {
    fn poset(&self) -> &Poset {
        &self.poset
    }
}

/// `J(P)`.
pub fn triple_poset<P: OrderedSet + ?Sized>(p: &P) -> TriplePoset {
    let n = p.len();
    let mut triples = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if !p.leq(x, y) {
                continue;
            }
            for z in 0..n {
                if p.leq(y, z) {
                    triples.push((x, y, z));
                }
            }
        }
    }
    let m = triples.len();
    let mut leq = vec![false; m * m];
    for (i, &(x1, y1, z1)) in triples.iter().enumerate() {
        for (j, &(x2, y2, z2)) in triples.iter().enumerate() {
            leq[i * m + j] = z1 == z2 && p.leq(x2, x1) && p.leq(y1, y2);
        }
    }
    let labels = triples
        .iter()
        .map(|&(x, y, z)| format!("[{},{},{}]", p.label(x), p.label(y), p.label(z)))
        .collect();
    let index = triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    TriplePoset {
        triples,
        index,
        base_len: n,
        poset: Poset::from_relation_unchecked(labels, leq),
    }
}

pub fn triple_map_between<S: OrderedSet, T: OrderedSet>(
    f: &PosetMorphism<S, T>,
    source: &Arc<TriplePoset>,
    target: &Arc<TriplePoset>,
) -> Result<PosetMorphism<TriplePoset, TriplePoset>, MorphismError> {
    if source.base_len != f.source.len() || target.base_len != f.target.len() {
        return Err(MorphismError::Boundary(
            "triple posets do not match the morphism's endpoints".into(),
        ));
    }
    let map = source
        .triples
        .iter()
        .map(|&(x, y, z)| {
            target
                .index_of(f.map[x], f.map[y], f.map[z])
                .ok_or(MorphismError::NotIsotone(x, z))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PosetMorphism::new_unchecked(
        Arc::clone(source),
        Arc::clone(target),
        map,
    ))
}

/// `J(f)([x≤y≤z]) = [f(x)≤f(y)≤f(z)]`.
pub fn triple_map<S: OrderedSet, T: OrderedSet>(
    f: &PosetMorphism<S, T>,
) -> Result<PosetMorphism<TriplePoset, TriplePoset>, MorphismError> {
    let source = Arc::new(triple_poset(&*f.source));
    let target = Arc::new(triple_poset(&*f.target));
    triple_map_between(f, &source, &target)
}

/// `x ↦ [0≤x]` into a prebuilt `I(P)`.
pub fn zero_embedding_into<P: Bounded>(
    p: &Arc<P>,
    intervals: &Arc<IntervalPoset>,
) -> PosetMorphism<P, IntervalPoset> {
    let bottom = p.bottom();
    let map = (0..p.len())
        .map(|x| intervals.index_of(bottom, x).expect("0 <= x"))
        .collect();
    PosetMorphism::new_unchecked(Arc::clone(p), Arc::clone(intervals), map)
}

/// `[0≤_]_P: P -> I(P)`.
pub fn zero_embedding<P: Bounded>(p: &Arc<P>) -> PosetMorphism<P, IntervalPoset> {
    zero_embedding_into(p, &Arc::new(interval_poset(&**p)))
}

/// `α_P([x≤y≤z]) = [[y≤z]≤[x≤z]]` between prebuilt `J(P)`, `I(P)` and `I(I(P))`.
pub fn alpha_between(
    triples: &Arc<TriplePoset>,
    intervals: &IntervalPoset,
    double: &Arc<IntervalPoset>,
) -> PosetMorphism<TriplePoset, IntervalPoset> {
    let map = triples
        .triples
        .iter()
        .map(|&(x, y, z)| {
            let inner = intervals.index_of(y, z).expect("y <= z");
            let outer = intervals.index_of(x, z).expect("x <= z");
            double
                .index_of(inner, outer)
                .expect("[y≤z] lies inside [x≤z]")
        })
        .collect();
    PosetMorphism::new_unchecked(Arc::clone(triples), Arc::clone(double), map)
}

/// `α_P: J(P) -> I(I(P))`.
pub fn alpha<P: OrderedSet>(p: &P) -> PosetMorphism<TriplePoset, IntervalPoset> {
    let triples = Arc::new(triple_poset(p));
    let intervals = interval_poset(p);
    let double = Arc::new(interval_poset(&intervals));
    alpha_between(&triples, &intervals, &double)
}

/// `β_P([x≤y≤z]) = [x≤y]` between prebuilt `J(P)` and `I(P)`.
pub fn beta_between(
    triples: &Arc<TriplePoset>,
    intervals: &Arc<IntervalPoset>,
) -> PosetMorphism<TriplePoset, IntervalPoset> {
    let map = triples
        .triples
        .iter()
        .map(|&(x, y, _)| intervals.index_of(x, y).expect("x <= y"))
        .collect();
    PosetMorphism::new_unchecked(Arc::clone(triples), Arc::clone(intervals), map)
}

/// `β_P: J(P) -> I(P)`.
pub fn beta<P: OrderedSet>(p: &P) -> PosetMorphism<TriplePoset, IntervalPoset> {
    beta_between(&Arc::new(triple_poset(p)), &Arc::new(interval_poset(p)))
}

/// Whether `bottom ∘ left = right ∘ top` for the square
///
/// ```text
///   A --top--> B
///   |          |
///  left      right
///   v          v
///   C -bottom-> D
/// ```
pub fn check_square<A, B, C, D>(
    top: &PosetMorphism<A, B>,
    bottom: &PosetMorphism<C, D>,
    left: &PosetMorphism<A, C>,
    right: &PosetMorphism<B, D>,
) -> Result<bool, MorphismError>
where
    A: OrderedSet,
    B: OrderedSet,
    C: OrderedSet,
    D: OrderedSet,
{
    let boundary = |what: &str| Err(MorphismError::Boundary(what.to_string()));
    if top.source.poset() != left.source.poset() {
        return boundary("top and left legs start at different objects");
    }
    if top.target.poset() != right.source.poset() {
        return boundary("top leg does not end where the right leg starts");
    }
    if left.target.poset() != bottom.source.poset() {
        return boundary("left leg does not end where the bottom leg starts");
    }
    if bottom.target.poset() != right.target.poset() {
        return boundary("bottom and right legs end at different objects");
    }
    Ok((0..top.source.len()).all(|x| bottom.map[left.map[x]] == right.map[top.map[x]]))
}
