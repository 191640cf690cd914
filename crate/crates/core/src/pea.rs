//! Pseudo effect algebras and their correspondence with pseudo D-posets.
//!
//! `A` carries a partial addition `+` with constants `0`, `1`; the order is
//! `a <= c` iff `a + b = c` for some `b`. The differences of the associated
//! pseudo D-poset are the solutions of `a + (c/a) = c` and `(c∖a) + a = c`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::pdp::{Difference, PseudoDPoset};
use crate::poset::{Bounded, BoundedPoset, OrderedSet, Poset, PosetError};
use crate::table::PartialTable;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PeaError {
    #[error("pseudo effect algebra axioms fail:\n{0}")]
    Axioms(PeaReport),
    #[error("induced relation is not a bounded order: {0}")]
    Order(#[from] PosetError),
    #[error("equation {0} has no unique solution")]
    NoUniqueSolution(String),
    #[error("the two descriptions of + disagree at ({0},{1})")]
    Disagreement(String, String),
    #[error("table size {got} does not match carrier size {expected}")]
    TableSize { expected: usize, got: usize },
}

#[derive(Clone, PartialEq, Eq)]
pub struct PseudoEffectAlgebra {
    labels: Vec<String>,
    plus: PartialTable,
    zero: usize,
    one: usize,
}

impl PseudoEffectAlgebra {
    /// Assembles an addition table without checking the axioms; see [`check_pea`].
    pub fn from_table(
        labels: Vec<String>,
        plus: PartialTable,
        zero: usize,
        one: usize,
    ) -> Result<Self, PeaError> {
        let n = labels.len();
        if plus.size() != n || zero >= n || one >= n {
            return Err(PeaError::TableSize {
                expected: n,
                got: plus.size(),
            });
        }
        Ok(PseudoEffectAlgebra {
            labels,
            plus,
            zero,
            one,
        })
    }

    /// The trivial algebra with `0 = 1` and `0 + 0 = 0`.
    pub fn trivial() -> Self {
        let mut plus = PartialTable::new(1);
        plus.set(0, 0, Some(0));
        PseudoEffectAlgebra {
            labels: vec!["0".into()],
            plus,
            zero: 0,
            one: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn table(&self) -> &PartialTable {
        &self.plus
    }

    /// `a + b`, if defined.
    pub fn add(&self, a: usize, b: usize) -> Option<usize> {
        self.plus.get(a, b)
    }

    /// The opposite algebra `a +' b = b + a`.
    pub fn opposite(&self) -> Self {
        PseudoEffectAlgebra {
            plus: self.plus.transposed(),
            ..self.clone()
        }
    }

    pub fn with_labels(self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.len());
        PseudoEffectAlgebra { labels, ..self }
    }
}

impl fmt::Debug for PseudoEffectAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sums: Vec<String> = self
            .plus
            .entries()
            .map(|(a, b, c)| format!("{}+{}={}", self.label(a), self.label(b), self.label(c)))
            .collect();
        f.debug_struct("PseudoEffectAlgebra")
            .field("elements", &self.labels)
            .field("plus", &sums)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeaViolation {
    ValueOutOfRange {
        a: usize,
        b: usize,
    },
    /// `a + (b + c)` exists but `(a + b) + c` does not, or differs.
    Pe1 {
        a: usize,
        b: usize,
        c: usize,
    },
    /// `count` elements `d` with `a + d = 1` instead of exactly one.
    Pe2Right {
        a: usize,
        count: usize,
    },
    /// `count` elements `e` with `e + a = 1` instead of exactly one.
    Pe2Left {
        a: usize,
        count: usize,
    },
    /// `a + b` exists but lacks a left conjugate `d + a` or right conjugate `b + e`.
    Pe3 {
        a: usize,
        b: usize,
    },
    /// `a + 1` or `1 + a` exists with `a ≠ 0`.
    Pe4 {
        a: usize,
    },
}

impl PeaViolation {
    pub fn axiom(&self) -> &'static str {
        match self {
            PeaViolation::ValueOutOfRange { .. } => "table",
            PeaViolation::Pe1 { .. } => "PE1",
            PeaViolation::Pe2Right { .. } | PeaViolation::Pe2Left { .. } => "PE2",
            PeaViolation::Pe3 { .. } => "PE3",
            PeaViolation::Pe4 { .. } => "PE4",
        }
    }
}

/// Failures of the induced relation to be a bounded order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderViolation {
    NotReflexive { a: usize },
    NotAntisymmetric { a: usize, b: usize },
    NotTransitive { a: usize, b: usize, c: usize },
    ZeroNotBottom { x: usize },
    OneNotTop { x: usize },
}

/// Report of [`check_pea`], split into the axiom layer and the order layer.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PeaReport {
    pub axioms: Vec<PeaViolation>,
    pub order: Vec<OrderViolation>,
    labels: Vec<String>,
}

impl PeaReport {
    pub fn is_ok(&self) -> bool {
        self.axioms.is_empty() && self.order.is_empty()
    }

    pub fn axioms_violated(&self) -> BTreeSet<&'static str> {
        let mut out: BTreeSet<&'static str> = self.axioms.iter().map(|v| v.axiom()).collect();
        if !self.order.is_empty() {
            out.insert("order");
        }
        out
    }
}

impl fmt::Display for PeaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = |i: usize| self.labels.get(i).map(String::as_str).unwrap_or("?");
        for v in &self.axioms {
            match *v {
                PeaViolation::ValueOutOfRange { a, b } => {
                    writeln!(f, "table invalid at ({},{}): sum is not an element", l(a), l(b))?
                }
                PeaViolation::Pe1 { a, b, c } => writeln!(
                    f,
                    "PE1 violated at (a,b,c)=({},{},{}): a+(b+c) exists but (a+b)+c does not equal it",
                    l(a),
                    l(b),
                    l(c)
                )?,
                PeaViolation::Pe2Right { a, count } => writeln!(
                    f,
                    "PE2 violated at a={}: {count} elements d with a+d=1",
                    l(a)
                )?,
                PeaViolation::Pe2Left { a, count } => writeln!(
                    f,
                    "PE2 violated at a={}: {count} elements e with e+a=1",
                    l(a)
                )?,
                PeaViolation::Pe3 { a, b } => writeln!(
                    f,
                    "PE3 violated at (a,b)=({},{}): missing d+a=a+b or b+e=a+b",
                    l(a),
                    l(b)
                )?,
                PeaViolation::Pe4 { a } => writeln!(f, "PE4 violated at a={}", l(a))?,
            }
        }
        for v in &self.order {
            match *v {
                OrderViolation::NotReflexive { a } => {
                    writeln!(f, "order violated: {} is not below itself", l(a))?
                }
                OrderViolation::NotAntisymmetric { a, b } => writeln!(
                    f,
                    "order violated: {} <= {} and {} <= {}",
                    l(a),
                    l(b),
                    l(b),
                    l(a)
                )?,
                OrderViolation::NotTransitive { a, b, c } => writeln!(
                    f,
                    "order violated: {} <= {} <= {} but not {} <= {}",
                    l(a),
                    l(b),
                    l(c),
                    l(a),
                    l(c)
                )?,
                OrderViolation::ZeroNotBottom { x } => {
                    writeln!(f, "order violated: 0 is not below {}", l(x))?
                }
                OrderViolation::OneNotTop { x } => {
                    writeln!(f, "order violated: {} is not below 1", l(x))?
                }
            }
        }
        Ok(())
    }
}

/// `a <= c` iff `a + b = c` for some `b`, as a dense relation table.
pub fn induced_relation(a: &PseudoEffectAlgebra) -> Vec<bool> {
    let n = a.len();
    let mut rel = vec![false; n * n];
    for (x, _, c) in a.plus.entries() {
        if c < n {
            rel[x * n + c] = true;
        }
    }
    rel
}

/// Checks PE1–PE4, then whether the induced relation is a bounded order.
pub fn check_pea(alg: &PseudoEffectAlgebra) -> PeaReport {
    let n = alg.len();
    let one = alg.one;
    let zero = alg.zero;
    let mut axioms = Vec::new();

    let mut in_range = true;
    for (a, b, c) in alg.plus.entries() {
        if c >= n {
            axioms.push(PeaViolation::ValueOutOfRange { a, b });
            in_range = false;
        }
    }
    if in_range {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let Some(bc) = alg.add(b, c) else { continue };
                    let Some(lhs) = alg.add(a, bc) else { continue };
                    let rhs = alg.add(a, b).and_then(|ab| alg.add(ab, c));
                    if rhs != Some(lhs) {
                        axioms.push(PeaViolation::Pe1 { a, b, c });
                    }
                }
            }
        }
        for a in 0..n {
            let right = (0..n).filter(|&d| alg.add(a, d) == Some(one)).count();
            if right != 1 {
                axioms.push(PeaViolation::Pe2Right { a, count: right });
            }
            let left = (0..n).filter(|&e| alg.add(e, a) == Some(one)).count();
            if left != 1 {
                axioms.push(PeaViolation::Pe2Left { a, count: left });
            }
        }
        for (a, b, s) in alg.plus.entries() {
            let has_left = (0..n).any(|d| alg.add(d, a) == Some(s));
            let has_right = (0..n).any(|e| alg.add(b, e) == Some(s));
            if !(has_left && has_right) {
                axioms.push(PeaViolation::Pe3 { a, b });
            }
        }
        for a in 0..n {
            if a != zero && (alg.add(a, one).is_some() || alg.add(one, a).is_some()) {
                axioms.push(PeaViolation::Pe4 { a });
            }
        }
    }

    let order = if in_range {
        check_induced_order(alg)
    } else {
        Vec::new()
    };
    PeaReport {
        axioms,
        order,
        labels: alg.labels.clone(),
    }
}

fn check_induced_order(alg: &PseudoEffectAlgebra) -> Vec<OrderViolation> {
    let n = alg.len();
    let rel = induced_relation(alg);
    let leq = |a: usize, b: usize| rel[a * n + b];
    let mut out = Vec::new();
    for a in 0..n {
        if !leq(a, a) {
            out.push(OrderViolation::NotReflexive { a });
        }
        if !leq(alg.zero, a) {
            out.push(OrderViolation::ZeroNotBottom { x: a });
        }
        if !leq(a, alg.one) {
            out.push(OrderViolation::OneNotTop { x: a });
        }
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if leq(a, b) && leq(b, a) {
                out.push(OrderViolation::NotAntisymmetric { a, b });
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a == b || !leq(a, b) {
                continue;
            }
            for c in 0..n {
                if b != c && leq(b, c) && !leq(a, c) {
                    out.push(OrderViolation::NotTransitive { a, b, c });
                }
            }
        }
    }
    out
}

/// The induced order as a bounded poset with bottom `0` and top `1`.
pub fn induced_order(alg: &PseudoEffectAlgebra) -> Result<BoundedPoset, PeaError> {
    let poset = Poset::from_relation(alg.labels.clone(), induced_relation(alg))?;
    Ok(BoundedPoset::with_bounds(poset, alg.zero, alg.one)?)
}

/// Solves `a + (c/a) = c` and `(c∖a) + a = c` for every `a <= c`.
pub fn pea_to_pdp(alg: &PseudoEffectAlgebra) -> Result<PseudoDPoset, PeaError> {
    let report = check_pea(alg);
    if !report.is_ok() {
        return Err(PeaError::Axioms(report));
    }
    let base = induced_order(alg)?;
    let n = alg.len();
    let mut slash = PartialTable::new(n);
    let mut bslash = PartialTable::new(n);
    for c in 0..n {
        for a in (0..n).filter(|&a| base.leq(a, c)) {
            let solve = |sols: Vec<usize>, eq: String| match sols.as_slice() {
                [x] => Ok(*x),
                _ => Err(PeaError::NoUniqueSolution(eq)),
            };
            let right: Vec<usize> = (0..n).filter(|&x| alg.add(a, x) == Some(c)).collect();
            let left: Vec<usize> = (0..n).filter(|&y| alg.add(y, a) == Some(c)).collect();
            let (la, lc) = (alg.label(a), alg.label(c));
            slash.set(c, a, Some(solve(right, format!("{la}+x={lc}"))?));
            bslash.set(c, a, Some(solve(left, format!("y+{la}={lc}"))?));
        }
    }
    Ok(PseudoDPoset::from_tables(base, slash, bslash).expect("tables sized to the carrier"))
}

/// `a + b = c` iff `a <= c` and `c/a = b`, cross-checked against
/// `b <= c` and `c∖b = a`.
pub fn pdp_to_pea(x: &PseudoDPoset) -> Result<PseudoEffectAlgebra, PeaError> {
    let n = x.len();
    let labels: Vec<String> = x.poset().labels().to_vec();
    let build = |op: Difference| -> Result<PartialTable, PeaError> {
        let mut plus = PartialTable::new(n);
        for c in 0..n {
            for s in (0..n).filter(|&s| x.leq(s, c)) {
                let d = x.diff(op, c, s).ok_or_else(|| {
                    PeaError::NoUniqueSolution(format!("{}{}{}", labels[c], op.symbol(), labels[s]))
                })?;
                // op = /: s + d = c; op = ∖: d + s = c
                let (a, b) = match op {
                    Difference::Slash => (s, d),
                    Difference::Bslash => (d, s),
                };
                if plus.get(a, b).is_some_and(|prev| prev != c) {
                    return Err(PeaError::Disagreement(labels[a].clone(), labels[b].clone()));
                }
                plus.set(a, b, Some(c));
            }
        }
        Ok(plus)
    };
    let from_slash = build(Difference::Slash)?;
    let from_bslash = build(Difference::Bslash)?;
    if let Some(i) = (0..n * n).find(|&i| from_slash.cells()[i] != from_bslash.cells()[i]) {
        return Err(PeaError::Disagreement(
            labels[i / n].clone(),
            labels[i % n].clone(),
        ));
    }
    Ok(PseudoEffectAlgebra {
        labels,
        plus: from_slash,
        zero: x.bottom(),
        one: x.top(),
    })
}

/// `a + b` and `b + a` are defined together and agree.
pub fn is_commutative(alg: &PseudoEffectAlgebra) -> bool {
    alg.plus == alg.plus.transposed()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeaMorphismViolation {
    ZeroNotPreserved,
    OneNotPreserved,
    /// `a + b` exists but `f(a) + f(b)` does not.
    SumUndefined {
        a: usize,
        b: usize,
    },
    /// `f(a + b) ≠ f(a) + f(b)`.
    SumMismatch {
        a: usize,
        b: usize,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PeaMorphismReport {
    pub violations: Vec<PeaMorphismViolation>,
}

impl PeaMorphismReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `f(0) = 0`, `f(1) = 1`, and `f(a + b) = f(a) + f(b)` whenever `a + b` exists.
pub fn check_pea_morphism(
    map: &[usize],
    a: &PseudoEffectAlgebra,
    b: &PseudoEffectAlgebra,
) -> PeaMorphismReport {
    let mut violations = Vec::new();
    if map[a.zero] != b.zero {
        violations.push(PeaMorphismViolation::ZeroNotPreserved);
    }
    if map[a.one] != b.one {
        violations.push(PeaMorphismViolation::OneNotPreserved);
    }
    for (x, y, s) in a.plus.entries() {
        match b.add(map[x], map[y]) {
            None => violations.push(PeaMorphismViolation::SumUndefined { a: x, b: y }),
            Some(v) if v != map[s] => {
                violations.push(PeaMorphismViolation::SumMismatch { a: x, b: y })
            }
            _ => {}
        }
    }
    PeaMorphismReport { violations }
}
