//! Pseudo D-posets: bounded posets with two partial differences `/` and `∖`
//! defined exactly on comparable pairs.
//!
//! Orientation: `slash(b, a)` is `b/a` and `bslash(b, a)` is `b∖a`, both
//! defined iff `a <= b`. As a map on intervals, `/` sends `[a≤b]` to `b/a`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::functors::{
    alpha_between, beta_between, interval_map_between, interval_poset, triple_poset,
    zero_embedding_into, IntervalPoset,
};
use crate::limits::{product_bposets, product_projection_maps, ProductIndex};
use crate::morphism::{MorphismError, MorphismReport, PosetMorphism};
use crate::poset::{Bounded, BoundedPoset, OrderedSet, Poset};
use crate::table::PartialTable;

/// One of the two partial differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Difference {
    Slash,
    Bslash,
}

impl Difference {
    pub const BOTH: [Difference; 2] = [Difference::Slash, Difference::Bslash];

    pub fn symbol(self) -> &'static str {
        match self {
            Difference::Slash => "/",
            Difference::Bslash => "∖",
        }
    }

    pub fn other(self) -> Difference {
        match self {
            Difference::Slash => Difference::Bslash,
            Difference::Bslash => Difference::Slash,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PdpError {
    #[error("pseudo D-poset axioms fail:\n{0}")]
    Axioms(PdpReport),
    #[error("table size {got} does not match carrier size {expected}")]
    TableSize { expected: usize, got: usize },
    #[error("subset is not closed under the differences")]
    NotClosed,
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct PseudoDPoset {
    base: BoundedPoset,
    slash: PartialTable,
    bslash: PartialTable,
}

impl PseudoDPoset {
    /// Assembles a structure without checking the axioms; see [`check_pdp`].
    pub fn from_tables(
        base: BoundedPoset,
        slash: PartialTable,
        bslash: PartialTable,
    ) -> Result<Self, PdpError> {
        for t in [&slash, &bslash] {
            if t.size() != base.len() {
                return Err(PdpError::TableSize {
                    expected: base.len(),
                    got: t.size(),
                });
            }
        }
        Ok(PseudoDPoset {
            base,
            slash,
            bslash,
        })
    }

    /// Assembles a structure and insists that it satisfies the axioms.
    pub fn new(
        base: BoundedPoset,
        slash: PartialTable,
        bslash: PartialTable,
    ) -> Result<Self, PdpError> {
        let x = Self::from_tables(base, slash, bslash)?;
        let report = check_pdp(&x);
        if report.is_ok() {
            Ok(x)
        } else {
            Err(PdpError::Axioms(report))
        }
    }

    /// The one-element structure with `0 = 1` and `0/0 = 0∖0 = 0`.
    pub fn trivial() -> Self {
        let mut t = PartialTable::new(1);
        t.set(0, 0, Some(0));
        PseudoDPoset {
            base: BoundedPoset::singleton(),
            slash: t.clone(),
            bslash: t,
        }
    }

    pub fn base(&self) -> &BoundedPoset {
        &self.base
    }

    pub fn table(&self, op: Difference) -> &PartialTable {
        match op {
            Difference::Slash => &self.slash,
            Difference::Bslash => &self.bslash,
        }
    }

    /// `b/a`.
    pub fn slash(&self, b: usize, a: usize) -> Option<usize> {
        self.slash.get(b, a)
    }

    /// `b∖a`.
    pub fn bslash(&self, b: usize, a: usize) -> Option<usize> {
        self.bslash.get(b, a)
    }

    pub fn diff(&self, op: Difference, b: usize, a: usize) -> Option<usize> {
        self.table(op).get(b, a)
    }

    /// A D-poset: the two differences coincide.
    pub fn is_dposet(&self) -> bool {
        self.slash == self.bslash
    }

    /// The substructure on `keep` (sorted element indices), if it is a subalgebra.
    pub fn restrict(&self, keep: &[usize]) -> Option<PseudoDPoset> {
        let (b, t) = (self.base.bottom(), self.base.top());
        if !keep.contains(&b) || !keep.contains(&t) {
            return None;
        }
        let k = keep.len();
        let labels = keep.iter().map(|&x| self.label(x).to_string()).collect();
        let leq = (0..k * k)
            .map(|c| self.leq(keep[c / k], keep[c % k]))
            .collect();
        let pos = |x: usize| keep.iter().position(|&y| y == x).unwrap();
        let base =
            BoundedPoset::with_bounds(Poset::from_relation_unchecked(labels, leq), pos(b), pos(t))
                .ok()?;
        Some(PseudoDPoset {
            base,
            slash: self.slash.restrict(keep)?,
            bslash: self.bslash.restrict(keep)?,
        })
    }

    pub fn with_labels(self, labels: Vec<String>) -> Self {
        PseudoDPoset {
            base: self.base.with_labels(labels),
            ..self
        }
    }
}

impl fmt::Debug for PseudoDPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |t: &PartialTable, sym: &str| -> Vec<String> {
            t.entries()
                .map(|(b, a, v)| {
                    format!(
                        "{}{}{}={}",
                        self.label(b),
                        sym,
                        self.label(a),
                        self.label(v)
                    )
                })
                .collect()
        };
        f.debug_struct("PseudoDPoset")
            .field("base", &self.base)
            .field("slash", &show(&self.slash, "/"))
            .field("bslash", &show(&self.bslash, "∖"))
            .finish()
    }
}

impl OrderedSet for PseudoDPoset {
    fn poset(&self) -> &Poset {
        self.base.as_poset()
    }

    fn bounds(&self) -> Option<(usize, usize)> {
        Some((self.base.bottom(), self.base.top()))
    }
}

impl Bounded for PseudoDPoset {
    fn bottom(&self) -> usize {
        self.base.bottom()
    }

    fn top(&self) -> usize {
        self.base.top()
    }
}

/// Morphism of pseudo D-posets (validity checked by [`check_pdp_morphism`]).
pub type PdpMorphism = PosetMorphism<PseudoDPoset>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PdpViolation {
    /// `b op a` is defined although `a ≰ b`, or undefined although `a ≤ b`.
    Definedness {
        op: Difference,
        b: usize,
        a: usize,
    },
    ValueOutOfRange {
        op: Difference,
        b: usize,
        a: usize,
    },
    /// `a op 0 ≠ a`.
    Pd1 {
        op: Difference,
        a: usize,
    },
    /// `c op b ≰ c op a` for `a ≤ b ≤ c`.
    Pd2Order {
        op: Difference,
        a: usize,
        b: usize,
        c: usize,
    },
    /// `(c/a)∖(c/b) ≠ b/a` (for `op = /`) or `(c∖a)/(c∖b) ≠ b∖a` (for `op = ∖`).
    Pd2Identity {
        op: Difference,
        a: usize,
        b: usize,
        c: usize,
    },
}

impl PdpViolation {
    pub fn axiom(&self) -> &'static str {
        match self {
            PdpViolation::Definedness { .. } | PdpViolation::ValueOutOfRange { .. } => {
                "definedness"
            }
            PdpViolation::Pd1 { .. } => "PD1",
            PdpViolation::Pd2Order { .. } | PdpViolation::Pd2Identity { .. } => "PD2",
        }
    }
}

/// All violations found by [`check_pdp`], with labels for display.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PdpReport {
    pub violations: Vec<PdpViolation>,
    labels: Vec<String>,
}

impl PdpReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn axioms_violated(&self) -> BTreeSet<&'static str> {
        self.violations.iter().map(|v| v.axiom()).collect()
    }
}

impl fmt::Display for PdpReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = |i: usize| self.labels.get(i).map(String::as_str).unwrap_or("?");
        for v in &self.violations {
            match *v {
                PdpViolation::Definedness { op, b, a } => writeln!(
                    f,
                    "definedness violated at ({},{}): {}{}{} must be defined iff {} <= {}",
                    l(b),
                    l(a),
                    l(b),
                    op.symbol(),
                    l(a),
                    l(a),
                    l(b)
                )?,
                PdpViolation::ValueOutOfRange { op, b, a } => writeln!(
                    f,
                    "definedness violated at ({},{}): value of {}{}{} is not an element",
                    l(b),
                    l(a),
                    l(b),
                    op.symbol(),
                    l(a)
                )?,
                PdpViolation::Pd1 { op, a } => writeln!(
                    f,
                    "PD1 violated at a={}: {}{}0 != {}",
                    l(a),
                    l(a),
                    op.symbol(),
                    l(a)
                )?,
                PdpViolation::Pd2Order { op, a, b, c } => writeln!(
                    f,
                    "PD2 violated at ({},{},{}): {c}{s}{b} is not below {c}{s}{a}",
                    l(a),
                    l(b),
                    l(c),
                    s = op.symbol(),
                    a = l(a),
                    b = l(b),
                    c = l(c)
                )?,
                PdpViolation::Pd2Identity { op, a, b, c } => writeln!(
                    f,
                    "PD2 violated at ({},{},{}): ({c}{s}{a}){t}({c}{s}{b}) != {b}{s}{a}",
                    l(a),
                    l(b),
                    l(c),
                    s = op.symbol(),
                    t = op.other().symbol(),
                    a = l(a),
                    b = l(b),
                    c = l(c)
                )?,
            }
        }
        Ok(())
    }
}

/// Checks definedness, PD1 and PD2, reporting every violation.
pub fn check_pdp(x: &PseudoDPoset) -> PdpReport {
    let n = x.len();
    let zero = x.bottom();
    let mut violations = Vec::new();
    let mut usable = true;
    for op in Difference::BOTH {
        let t = x.table(op);
        for b in 0..n {
            for a in 0..n {
                match t.get(b, a) {
                    Some(v) if v >= n => {
                        violations.push(PdpViolation::ValueOutOfRange { op, b, a });
                        usable = false;
                    }
                    Some(_) if !x.leq(a, b) => {
                        violations.push(PdpViolation::Definedness { op, b, a })
                    }
                    None if x.leq(a, b) => {
                        violations.push(PdpViolation::Definedness { op, b, a });
                        usable = false;
                    }
                    _ => {}
                }
            }
        }
    }
    if usable {
        for op in Difference::BOTH {
            for a in 0..n {
                if x.diff(op, a, zero) != Some(a) {
                    violations.push(PdpViolation::Pd1 { op, a });
                }
            }
        }
        for a in 0..n {
            for b in (0..n).filter(|&b| x.leq(a, b)) {
                for c in (0..n).filter(|&c| x.leq(b, c)) {
                    for op in Difference::BOTH {
                        let cb = x.diff(op, c, b).unwrap();
                        let ca = x.diff(op, c, a).unwrap();
                        if !x.leq(cb, ca) {
                            violations.push(PdpViolation::Pd2Order { op, a, b, c });
                        }
                        let lhs = x.diff(op.other(), ca, cb);
                        if lhs != x.diff(op, b, a) {
                            violations.push(PdpViolation::Pd2Identity { op, a, b, c });
                        }
                    }
                }
            }
        }
    }
    PdpReport {
        violations,
        labels: x.poset().labels().to_vec(),
    }
}

/// A difference as a map `I(X) -> X`, `[a≤b] ↦ b op a`, on a prebuilt `I(X)`.
pub fn difference_morphism_on(
    x: &Arc<PseudoDPoset>,
    op: Difference,
    intervals: &Arc<IntervalPoset>,
) -> PosetMorphism<IntervalPoset, PseudoDPoset> {
    let map = intervals
        .pairs()
        .iter()
        .map(|&(a, b)| {
            x.diff(op, b, a)
                .expect("difference defined on comparable pairs")
        })
        .collect();
    PosetMorphism::new_unchecked(Arc::clone(intervals), Arc::clone(x), map)
}

fn difference_morphism(
    x: &Arc<PseudoDPoset>,
    op: Difference,
) -> Result<PosetMorphism<IntervalPoset, PseudoDPoset>, PdpError> {
    let report = check_pdp(x);
    if !report.is_ok() {
        return Err(PdpError::Axioms(report));
    }
    Ok(difference_morphism_on(
        x,
        op,
        &Arc::new(interval_poset(&**x)),
    ))
}

/// `/_X: I(X) -> X`, `[a≤b] ↦ b/a`.
pub fn slash_morphism(
    x: &Arc<PseudoDPoset>,
) -> Result<PosetMorphism<IntervalPoset, PseudoDPoset>, PdpError> {
    difference_morphism(x, Difference::Slash)
}

/// `∖_X: I(X) -> X`, `[a≤b] ↦ b∖a`.
pub fn bslash_morphism(
    x: &Arc<PseudoDPoset>,
) -> Result<PosetMorphism<IntervalPoset, PseudoDPoset>, PdpError> {
    difference_morphism(x, Difference::Bslash)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationViolation {
    pub op: Difference,
    pub b: usize,
    pub a: usize,
}

/// Result of [`check_pdp_morphism`]: bounded-poset conditions and operation preservation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PdpMorphismReport {
    pub order: MorphismReport,
    pub operations: Vec<OperationViolation>,
}

impl PdpMorphismReport {
    pub fn is_ok(&self) -> bool {
        self.order.is_ok() && self.operations.is_empty()
    }
}

/// Raw-map form of [`check_pdp_morphism`].
pub fn check_pdp_map(
    source: &PseudoDPoset,
    target: &PseudoDPoset,
    map: &[usize],
) -> PdpMorphismReport {
    let order = crate::morphism::check_map(source, target, map);
    let n = source.len();
    let mut operations = Vec::new();
    for b in 0..n {
        for a in (0..n).filter(|&a| source.leq(a, b)) {
            for op in Difference::BOTH {
                let lhs = source.diff(op, b, a).map(|v| map[v]);
                let rhs = target.diff(op, map[b], map[a]);
                if lhs.is_none() || lhs != rhs {
                    operations.push(OperationViolation { op, b, a });
                }
            }
        }
    }
    PdpMorphismReport { order, operations }
}

/// Bound preservation, isotonicity, and `f(b/a) = f(b)/f(a)`, `f(b∖a) = f(b)∖f(a)`
/// for every comparable `a ≤ b`.
pub fn check_pdp_morphism(f: &PdpMorphism) -> PdpMorphismReport {
    check_pdp_map(&f.source, &f.target, &f.map)
}

/// Least subset containing `seed`, `0` and `1`, closed under both differences.
pub fn subalgebra_generated(x: &PseudoDPoset, seed: &[usize]) -> Vec<usize> {
    let n = x.len();
    let mut inside = vec![false; n];
    inside[x.bottom()] = true;
    inside[x.top()] = true;
    for &s in seed {
        inside[s] = true;
    }
    loop {
        let mut grew = false;
        for b in 0..n {
            for a in 0..n {
                if !(inside[a] && inside[b] && x.leq(a, b)) {
                    continue;
                }
                for op in Difference::BOTH {
                    if let Some(v) = x.diff(op, b, a) {
                        if !inside[v] {
                            inside[v] = true;
                            grew = true;
                        }
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    (0..n).filter(|&i| inside[i]).collect()
}

/// Product with componentwise differences; the empty product is [`PseudoDPoset::trivial`].
pub fn product_pdp(factors: &[&PseudoDPoset]) -> PseudoDPoset {
    if factors.is_empty() {
        return PseudoDPoset::trivial().with_labels(vec!["()".to_string()]);
    }
    let bases: Vec<&BoundedPoset> = factors.iter().map(|f| f.base()).collect();
    let base = product_bposets(&bases);
    let index = ProductIndex::new(factors.iter().map(|f| f.len()).collect());
    let n = index.len();
    let coords: Vec<Vec<usize>> = (0..n).map(|i| index.decode(i)).collect();
    let mut tables = [PartialTable::new(n), PartialTable::new(n)];
    for b in 0..n {
        for a in (0..n).filter(|&a| base.leq(a, b)) {
            for (t, op) in tables.iter_mut().zip(Difference::BOTH) {
                let value: Option<Vec<usize>> = factors
                    .iter()
                    .enumerate()
                    .map(|(k, f)| f.diff(op, coords[b][k], coords[a][k]))
                    .collect();
                t.set(b, a, value.map(|v| index.encode(&v)));
            }
        }
    }
    let [slash, bslash] = tables;
    PseudoDPoset {
        base,
        slash,
        bslash,
    }
}

/// Projections from a product built by [`product_pdp`] over `factors`.
pub fn product_projections(
    factors: &[Arc<PseudoDPoset>],
    product: &Arc<PseudoDPoset>,
) -> Vec<PdpMorphism> {
    let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    product_projection_maps(&sizes)
        .into_iter()
        .zip(factors)
        .map(|(map, f)| PosetMorphism::new_unchecked(Arc::clone(product), Arc::clone(f), map))
        .collect()
}

/// Equalizer of `f, g: A -> B`: the subalgebra `{x : f(x) = g(x)}` and its inclusion.
pub fn equalizer_pdp(
    f: &PdpMorphism,
    g: &PdpMorphism,
) -> Result<(Arc<PseudoDPoset>, PdpMorphism), PdpError> {
    if f.map.len() != g.map.len() || *f.target != *g.target {
        return Err(MorphismError::Boundary("f and g are not parallel".into()).into());
    }
    let a = &f.source;
    let keep: Vec<usize> = (0..a.len()).filter(|&x| f.map[x] == g.map[x]).collect();
    let e = Arc::new(a.restrict(&keep).ok_or(PdpError::NotClosed)?);
    let inclusion = PosetMorphism::new_unchecked(Arc::clone(&e), Arc::clone(a), keep);
    Ok((e, inclusion))
}

/// Prebuilt functor images of one structure for the diagram checks.
pub struct DiagramData {
    pub x: Arc<PseudoDPoset>,
    pub intervals: Arc<IntervalPoset>,
    pub slash: PosetMorphism<IntervalPoset, PseudoDPoset>,
    pub bslash: PosetMorphism<IntervalPoset, PseudoDPoset>,
}

impl DiagramData {
    pub fn new(x: &Arc<PseudoDPoset>) -> Result<Self, PdpError> {
        let report = check_pdp(x);
        if !report.is_ok() {
            return Err(PdpError::Axioms(report));
        }
        let intervals = Arc::new(interval_poset(&**x));
        Ok(DiagramData {
            x: Arc::clone(x),
            slash: difference_morphism_on(x, Difference::Slash, &intervals),
            bslash: difference_morphism_on(x, Difference::Bslash, &intervals),
            intervals,
        })
    }

    pub fn difference(&self, op: Difference) -> &PosetMorphism<IntervalPoset, PseudoDPoset> {
        match op {
            Difference::Slash => &self.slash,
            Difference::Bslash => &self.bslash,
        }
    }

    /// `op ∘ [0≤_] = id` for both differences.
    pub fn pd1_diagram(&self) -> bool {
        let zero = zero_embedding_into(&self.x, &self.intervals);
        Difference::BOTH.iter().all(|&op| {
            self.difference(op).after(&zero).map == (0..self.x.len()).collect::<Vec<_>>()
        })
    }

    /// `op ∘ β = op' ∘ I(op) ∘ α` for `op` each of the differences and `op'` the other one.
    pub fn pd2_diagram(&self) -> Result<bool, MorphismError> {
        let triples = Arc::new(triple_poset(&*self.x));
        let double = Arc::new(interval_poset(&*self.intervals));
        let alpha = alpha_between(&triples, &self.intervals, &double);
        let beta = beta_between(&triples, &self.intervals);
        for op in Difference::BOTH {
            let d = self.difference(op);
            let lifted = interval_map_between(d, &double, &self.intervals)?;
            let left = d.after(&beta);
            let right = self.difference(op.other()).after(&lifted.after(&alpha));
            if left.map != right.map {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Both difference maps are isotone `I(X) -> X`.
    pub fn differences_isotone(&self) -> bool {
        self.slash.is_valid() && self.bslash.is_valid()
    }
}

/// The naturality squares `h ∘ op_X = op_Y ∘ I(h)` for a morphism `h: X -> Y`.
pub fn naturality_squares(
    h: &PdpMorphism,
    source: &DiagramData,
    target: &DiagramData,
) -> Result<bool, MorphismError> {
    let lifted = interval_map_between(h, &source.intervals, &target.intervals)?;
    for op in Difference::BOTH {
        let commutes = crate::functors::check_square(
            &lifted,
            h,
            source.difference(op),
            target.difference(op),
        )?;
        if !commutes {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::poset::validate_bounded_poset;

    /// `C3 = {0 < a < 1}` with `1/a = a` etc. (both differences equal).
    pub(crate) fn c3() -> PseudoDPoset {
        let base = BoundedPoset::chain(3);
        let mut t = PartialTable::new(3);
        for x in 0..3 {
            t.set(x, 0, Some(x));
            t.set(x, x, Some(0));
        }
        t.set(2, 1, Some(1));
        PseudoDPoset::from_tables(base, t.clone(), t).unwrap()
    }

    fn diamond() -> BoundedPoset {
        validate_bounded_poset(
            &["0", "a", "b", "1"],
            &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        )
        .unwrap()
    }

    /// Diamond with `1/a = b`, `1/b = a` (orthocomplemented) or
    /// `1/a = a`, `1/b = b` (horizontal sum of two 3-chains).
    pub(crate) fn d4(ortho: bool) -> PseudoDPoset {
        let mut t = PartialTable::new(4);
        for x in 0..4 {
            t.set(x, 0, Some(x));
            t.set(x, x, Some(0));
        }
        if ortho {
            t.set(3, 1, Some(2));
            t.set(3, 2, Some(1));
        } else {
            t.set(3, 1, Some(1));
            t.set(3, 2, Some(2));
        }
        PseudoDPoset::from_tables(diamond(), t.clone(), t).unwrap()
    }

    #[test]
    fn c3_passes() {
        let x = c3();
        assert!(check_pdp(&x).is_ok(), "{}", check_pdp(&x));
        assert!(x.is_dposet());
        assert!(check_pdp(&d4(true)).is_ok());
        assert!(check_pdp(&d4(false)).is_ok());
        assert!(check_pdp(&PseudoDPoset::trivial()).is_ok());
    }

    #[test]
    fn undefined_difference_reported() {
        let x = c3();
        let mut s = x.table(Difference::Slash).clone();
        s.set(2, 1, None);
        let broken = PseudoDPoset::from_tables(x.base().clone(), s, x.bslash.clone()).unwrap();
        let report = check_pdp(&broken);
        assert_eq!(
            report.violations,
            vec![PdpViolation::Definedness {
                op: Difference::Slash,
                b: 2,
                a: 1
            }]
        );
        assert!(report.to_string().contains("definedness violated at (1,a)"));
    }

    #[test]
    fn pd1_violation_reported() {
        let x = c3();
        let mut s = x.table(Difference::Slash).clone();
        s.set(1, 0, Some(0));
        let broken = PseudoDPoset::from_tables(x.base().clone(), s, x.bslash.clone()).unwrap();
        let report = check_pdp(&broken);
        assert!(report.violations.contains(&PdpViolation::Pd1 {
            op: Difference::Slash,
            a: 1
        }));
        assert!(report.axioms_violated().contains("PD1"));
    }

    #[test]
    fn difference_maps_on_c3() {
        let x = Arc::new(c3());
        let s = slash_morphism(&x).unwrap();
        let i = &s.source;
        assert_eq!(s.map[i.index_of(0, 1).unwrap()], 1);
        assert_eq!(s.map[i.index_of(1, 1).unwrap()], 0);
        assert_eq!(s.map[i.index_of(1, 2).unwrap()], 1);
        assert!(s.is_valid());
        assert!(bslash_morphism(&x).unwrap().is_valid());
    }

    #[test]
    fn difference_map_requires_axioms() {
        let x = c3();
        let mut s = x.table(Difference::Slash).clone();
        s.set(1, 0, Some(0));
        let broken =
            Arc::new(PseudoDPoset::from_tables(x.base().clone(), s, x.bslash.clone()).unwrap());
        assert!(matches!(slash_morphism(&broken), Err(PdpError::Axioms(_))));
    }

    #[test]
    fn swap_on_orthodiamond_is_a_morphism() {
        let d = Arc::new(d4(true));
        let swap = PosetMorphism::new(Arc::clone(&d), Arc::clone(&d), vec![0, 2, 1, 3]).unwrap();
        assert!(check_pdp_morphism(&swap).is_ok());
        let id = PosetMorphism::identity(Arc::clone(&d));
        assert!(check_pdp_morphism(&id).is_ok());
    }

    #[test]
    fn collapsing_orthodiamond_fails_at_one_minus_a() {
        let d = Arc::new(d4(true));
        let fold = PosetMorphism::new(Arc::clone(&d), Arc::clone(&d), vec![0, 1, 1, 3]).unwrap();
        let report = check_pdp_morphism(&fold);
        assert!(report.order.is_ok());
        assert!(report.operations.contains(&OperationViolation {
            op: Difference::Slash,
            b: 3,
            a: 1
        }));
    }

    #[test]
    fn subalgebra_generation() {
        let x = c3();
        assert_eq!(subalgebra_generated(&x, &[]), vec![0, 2]);
        assert_eq!(subalgebra_generated(&x, &[1]), vec![0, 1, 2]);
        assert_eq!(subalgebra_generated(&x, &[0, 1, 2]), vec![0, 1, 2]);
        let d = d4(true);
        assert_eq!(subalgebra_generated(&d, &[1]), vec![0, 1, 2, 3]);
        let h = d4(false);
        assert_eq!(subalgebra_generated(&h, &[1]), vec![0, 1, 3]);
    }

    #[test]
    fn empty_product_is_trivial() {
        let p = product_pdp(&[]);
        assert_eq!(p.len(), 1);
        assert_eq!(p.slash(0, 0), Some(0));
        assert!(check_pdp(&p).is_ok());
    }

    #[test]
    fn product_of_c3_and_c2() {
        let c2 = {
            let mut t = PartialTable::new(2);
            t.set(0, 0, Some(0));
            t.set(1, 0, Some(1));
            t.set(1, 1, Some(0));
            PseudoDPoset::new(BoundedPoset::chain(2), t.clone(), t).unwrap()
        };
        let x = c3();
        let p = product_pdp(&[&x, &c2]);
        assert!(check_pdp(&p).is_ok());
        let idx = ProductIndex::new(vec![3, 2]);
        // (a,1)/(0,1) = (a/0, 1/1) = (a,0)
        let v = p.slash(idx.encode(&[1, 1]), idx.encode(&[0, 1]));
        assert_eq!(v, Some(idx.encode(&[1, 0])));
        let factors = vec![Arc::new(x), Arc::new(c2)];
        let pa = Arc::new(p);
        for proj in product_projections(&factors, &pa) {
            assert!(check_pdp_morphism(&proj).is_ok());
        }
    }

    #[test]
    fn equalizer_examples() {
        let d = Arc::new(d4(true));
        let id = PosetMorphism::identity(Arc::clone(&d));
        let swap = PosetMorphism::new(Arc::clone(&d), Arc::clone(&d), vec![0, 2, 1, 3]).unwrap();
        let (e, inc) = equalizer_pdp(&id, &swap).unwrap();
        assert_eq!(inc.map, vec![0, 3]);
        assert!(check_pdp(&e).is_ok());
        assert!(check_pdp_morphism(&inc).is_ok());
        let (all, inc_all) = equalizer_pdp(&id, &id).unwrap();
        assert_eq!(*all, *d);
        assert!(inc_all.is_identity());
    }

    #[test]
    fn diagrams_on_small_structures() {
        for x in [c3(), d4(true), d4(false), PseudoDPoset::trivial()] {
            let data = DiagramData::new(&Arc::new(x)).unwrap();
            assert!(data.pd1_diagram());
            assert!(data.pd2_diagram().unwrap());
            assert!(data.differences_isotone());
        }
    }

    #[test]
    fn naturality_of_swap() {
        let d = Arc::new(d4(true));
        let data = DiagramData::new(&d).unwrap();
        let swap = PosetMorphism::new(Arc::clone(&d), Arc::clone(&d), vec![0, 2, 1, 3]).unwrap();
        assert!(naturality_squares(&swap, &data, &data).unwrap());
        let fold = PosetMorphism::new(Arc::clone(&d), Arc::clone(&d), vec![0, 1, 1, 3]).unwrap();
        assert!(!naturality_squares(&fold, &data, &data).unwrap());
    }
}
