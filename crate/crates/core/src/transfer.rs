//! Transfer of pseudo D-poset structure along split coequalizers.
//!
//! Given PDP morphisms `f, g: A ⇉ B` whose underlying bounded-poset maps sit
//! in a split fork `A ⇉ B -> Q`, the differences of `B` descend to `Q` via
//! `y /_Q x = q(s(y) /_B s(x))`. The construction is checked, not trusted:
//! `q` must commute with the differences on every interval of `B`.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::catalog::enumerate_pea_structures;
use crate::functors::{interval_map_between, interval_poset};
use crate::limits::{coequalizer_posets, comparison_map, is_split_fork, SplitFork};
use crate::morphism::{enumerate_maps, BoundedMorphism, PosetMorphism};
use crate::pdp::{
    check_pdp, check_pdp_map, check_pdp_morphism, product_pdp, product_projections, Difference,
    OperationViolation, PdpMorphism, PdpReport, PseudoDPoset,
};
use crate::pea::pea_to_pdp;
use crate::poset::{BoundedPoset, OrderedSet, Poset};
use crate::table::PartialTable;

/// Default size bound for the targets used in universal-property checks.
pub const DEFAULT_TARGET_BOUND: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransferError {
    #[error("invalid fork: {0}")]
    InvalidFork(String),
    #[error("not an absolute coequalizer over PDP morphisms: q fails to commute with the differences at {} interval(s)", .0.len())]
    NotAbsolute(Vec<OperationViolation>),
    #[error("internal consistency error: transferred structure fails the axioms:\n{0}")]
    Internal(PdpReport),
}

/// What the transfer checked along the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferDiagnostics {
    /// Intervals of `B` on which both commutation squares were checked.
    pub intervals_checked: usize,
    pub commutation_failures: Vec<OperationViolation>,
    pub qprime_is_pdp_morphism: bool,
}

#[derive(Debug, Clone)]
pub struct TransferResult {
    pub qprime: Arc<PseudoDPoset>,
    pub qprime_morphism: PdpMorphism,
    pub diagnostics: TransferDiagnostics,
}

/// The bounded-poset morphism underlying a PDP morphism.
pub fn underlying(h: &PdpMorphism) -> BoundedMorphism {
    PosetMorphism::new_unchecked(
        Arc::new(h.source.base().clone()),
        Arc::new(h.target.base().clone()),
        h.map.clone(),
    )
}

fn validate_input(f: &PdpMorphism, g: &PdpMorphism, fork: &SplitFork) -> Result<(), TransferError> {
    for (name, h) in [("f", f), ("g", g)] {
        let report = check_pdp_morphism(h);
        if !report.is_ok() {
            return Err(TransferError::InvalidFork(format!(
                "{name} is not a PDP morphism"
            )));
        }
    }
    if !is_split_fork(fork) {
        return Err(TransferError::InvalidFork(
            "split fork identities fail".into(),
        ));
    }
    if !fork.morphisms_valid() {
        return Err(TransferError::InvalidFork(
            "fork maps are not bounded-poset morphisms".into(),
        ));
    }
    if fork.f.map != f.map || fork.g.map != g.map {
        return Err(TransferError::InvalidFork(
            "fork does not lie under the given f and g".into(),
        ));
    }
    if **fork.domain() != *f.source.base() || **fork.codomain() != *f.target.base() {
        return Err(TransferError::InvalidFork(
            "fork endpoints differ from the PDP endpoints".into(),
        ));
    }
    if *g.source != *f.source || *g.target != *f.target {
        return Err(TransferError::InvalidFork(
            "f and g are not parallel".into(),
        ));
    }
    Ok(())
}

/// Equips the fork's quotient `Q` with differences making `q` a PDP morphism.
pub fn transfer_structure(
    f: &PdpMorphism,
    g: &PdpMorphism,
    fork: &SplitFork,
) -> Result<TransferResult, TransferError> {
    validate_input(f, g, fork)?;
    let b = &f.target;
    let q_obj = fork.quotient();
    let (q, s) = (&fork.q.map, &fork.s.map);
    let k = q_obj.len();

    let mut tables = [PartialTable::new(k), PartialTable::new(k)];
    for y in 0..k {
        for x in (0..k).filter(|&x| q_obj.leq(x, y)) {
            for (t, op) in tables.iter_mut().zip(Difference::BOTH) {
                let v = b.diff(op, s[y], s[x]).map(|v| q[v]);
                t.set(y, x, v);
            }
        }
    }

    let mut failures = Vec::new();
    let mut intervals_checked = 0;
    for hi in 0..b.len() {
        for lo in (0..b.len()).filter(|&lo| b.leq(lo, hi)) {
            intervals_checked += 1;
            for (t, op) in tables.iter().zip(Difference::BOTH) {
                let down = b.diff(op, hi, lo).map(|v| q[v]);
                if down.is_none() || down != t.get(q[hi], q[lo]) {
                    failures.push(OperationViolation { op, b: hi, a: lo });
                }
            }
        }
    }
    if !failures.is_empty() {
        return Err(TransferError::NotAbsolute(failures));
    }

    let [slash, bslash] = tables;
    let qprime = PseudoDPoset::from_tables((**q_obj).clone(), slash, bslash)
        .expect("tables sized to the quotient");
    let report = check_pdp(&qprime);
    if !report.is_ok() {
        return Err(TransferError::Internal(report));
    }
    let qprime = Arc::new(qprime);
    let qprime_morphism =
        PosetMorphism::new_unchecked(Arc::clone(b), Arc::clone(&qprime), q.clone());
    let qprime_is_pdp_morphism = check_pdp_morphism(&qprime_morphism).is_ok();
    Ok(TransferResult {
        qprime,
        qprime_morphism,
        diagnostics: TransferDiagnostics {
            intervals_checked,
            commutation_failures: Vec::new(),
            qprime_is_pdp_morphism,
        },
    })
}

/// A cocone `h: B -> C` that does not factor uniquely through `q'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationFailure {
    pub target: usize,
    pub h: Vec<usize>,
    /// Bounded-poset morphisms `e` with `e ∘ q = h`.
    pub order_factorizations: usize,
    /// Those among them that also preserve both differences.
    pub pdp_factorizations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoequalizerReport {
    pub targets: usize,
    pub cocones: usize,
    pub failures: Vec<FactorizationFailure>,
}

impl CoequalizerReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every target `C` and PDP morphism `h: B -> C` with `h∘f = h∘g`,
/// counts the PDP morphisms `e: Q' -> C` with `e∘q' = h`; exactly one is required.
pub fn verify_coequalizer_psdpos(
    f: &PdpMorphism,
    g: &PdpMorphism,
    result: &TransferResult,
    targets: &[Arc<PseudoDPoset>],
) -> CoequalizerReport {
    let b = &f.target;
    let qp = &result.qprime;
    let q = &result.qprime_morphism.map;
    let per_target: Vec<(usize, Vec<FactorizationFailure>)> = targets
        .par_iter()
        .enumerate()
        .map(|(ti, c)| {
            let factor_maps = enumerate_maps(&**qp, &**c);
            let pdp_ok: Vec<bool> = factor_maps
                .iter()
                .map(|e| check_pdp_map(qp, c, e).is_ok())
                .collect();
            let mut cocones = 0;
            let mut failures = Vec::new();
            for h in enumerate_maps(&**b, &**c) {
                let coequalizes = f.map.iter().zip(&g.map).all(|(&x, &y)| h[x] == h[y]);
                if !coequalizes || !check_pdp_map(b, c, &h).is_ok() {
                    continue;
                }
                cocones += 1;
                let mut order_factorizations = 0;
                let mut pdp_factorizations = 0;
                for (e, &ok) in factor_maps.iter().zip(&pdp_ok) {
                    if q.iter().zip(&h).all(|(&x, &hx)| e[x] == hx) {
                        order_factorizations += 1;
                        pdp_factorizations += ok as usize;
                    }
                }
                if pdp_factorizations != 1 {
                    failures.push(FactorizationFailure {
                        target: ti,
                        h,
                        order_factorizations,
                        pdp_factorizations,
                    });
                }
            }
            (cocones, failures)
        })
        .collect();
    let mut report = CoequalizerReport {
        targets: targets.len(),
        cocones: 0,
        failures: Vec::new(),
    };
    for (cocones, failures) in per_target {
        report.cocones += cocones;
        report.failures.extend(failures);
    }
    report
}

/// Whether the interval functor carries the fork to a coequalizer: the
/// independently computed quotient of `I(f), I(g)` compares isomorphically to `I(Q)`.
pub fn i_preserves_fork(fork: &SplitFork) -> bool {
    if !is_split_fork(fork) {
        return false;
    }
    let ia = Arc::new(interval_poset(&**fork.domain()));
    let ib = Arc::new(interval_poset(&**fork.codomain()));
    let iq = Arc::new(interval_poset(&**fork.quotient()));
    let lifted = (
        interval_map_between(&fork.f, &ia, &ib),
        interval_map_between(&fork.g, &ia, &ib),
        interval_map_between(&fork.q, &ib, &iq),
    );
    let (Ok(if_), Ok(ig), Ok(iqm)) = lifted else {
        return false;
    };
    let (quotient, to_quotient) = coequalizer_posets(&if_, &ig);
    let Some(k) = comparison_map(&to_quotient.map, quotient.len(), &iqm.map) else {
        return false;
    };
    PosetMorphism::<Poset, _>::new_unchecked(quotient, iq, k).is_isomorphism()
}

/// All PDP structures on the fork's quotient that make `q` a PDP morphism
/// out of `b`. The transfer produces one; this lists every candidate.
pub fn compatible_structures(b: &PseudoDPoset, fork: &SplitFork) -> Vec<PseudoDPoset> {
    let q_obj = fork.quotient();
    enumerate_pea_structures(q_obj)
        .iter()
        .filter_map(|alg| pea_to_pdp(alg).ok())
        .filter(|x| check_pdp_map(b, x, &fork.q.map).is_ok())
        .collect()
}

/// A split fork lying under a pair of PDP morphisms.
#[derive(Debug, Clone)]
pub struct GeneratedFork {
    pub f: PdpMorphism,
    pub g: PdpMorphism,
    pub fork: SplitFork,
    pub description: String,
}

/// Seeded generator of split forks over a pool of PDPs.
///
/// Two families: `(id, e)` for an idempotent PDP endomorphism `e` of `B`, and
/// `(π1, e∘π1): B×C ⇉ B` with section `t = (id, c)` for a bounded-poset
/// morphism `c: B -> C`.
pub struct ForkGenerator {
    pool: Vec<Arc<PseudoDPoset>>,
    idempotents: Vec<Vec<Vec<usize>>>,
    /// Pool indices usable as the second factor `C`.
    factors: Vec<usize>,
    rng: ChaCha8Rng,
}

impl ForkGenerator {
    /// `max_factor` bounds the size of the auxiliary factor `C`.
    pub fn new(pool: Vec<Arc<PseudoDPoset>>, seed: u64, max_factor: usize) -> Self {
        let idempotents = pool
            .par_iter()
            .map(|x| {
                enumerate_maps(&**x, &**x)
                    .into_iter()
                    .filter(|e| e.iter().all(|&y| e[y] == y) && check_pdp_map(x, x, e).is_ok())
                    .collect()
            })
            .collect();
        let factors = (0..pool.len())
            .filter(|&i| pool[i].len() <= max_factor)
            .collect();
        ForkGenerator {
            pool,
            idempotents,
            factors,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn pool(&self) -> &[Arc<PseudoDPoset>] {
        &self.pool
    }

    pub fn next_fork(&mut self) -> GeneratedFork {
        let bi = self.rng.gen_range(0..self.pool.len());
        let b = Arc::clone(&self.pool[bi]);
        // identity forks are cheap and plentiful; favour proper idempotents when there are any
        let proper: Vec<&Vec<usize>> = self.idempotents[bi]
            .iter()
            .filter(|e| e.iter().enumerate().any(|(x, &y)| x != y))
            .collect();
        let e = if !proper.is_empty() && self.rng.gen_bool(0.75) {
            (*proper.choose(&mut self.rng).expect("nonempty")).clone()
        } else {
            (0..b.len()).collect()
        };
        let e_desc = describe_map(&b, &e);
        let e = PosetMorphism::new_unchecked(Arc::clone(&b), Arc::clone(&b), e);
        let use_product = !self.factors.is_empty() && self.rng.gen_bool(0.5);
        if !use_product {
            let id = PosetMorphism::identity(Arc::clone(&b));
            let fork = SplitFork::from_idempotent(&underlying(&e))
                .expect("idempotent PDP endomorphism splits");
            return GeneratedFork {
                f: id,
                g: e,
                fork,
                description: format!("idempotent on pool[{bi}]: e = {e_desc}"),
            };
        }
        // a trivial B only maps into trivial C
        let usable: Vec<usize> = self
            .factors
            .iter()
            .copied()
            .filter(|&ci| b.len() > 1 || self.pool[ci].len() == 1)
            .collect();
        let ci = *usable
            .choose(&mut self.rng)
            .expect("trivial structure is in the pool");
        let c = Arc::clone(&self.pool[ci]);
        let cs = enumerate_maps(b.base(), c.base());
        let cmap = cs
            .choose(&mut self.rng)
            .expect("bounds map to bounds")
            .clone();
        let a = Arc::new(product_pdp(&[&b, &c]));
        let pi1 = product_projections(&[Arc::clone(&b), Arc::clone(&c)], &a)
            .into_iter()
            .next()
            .expect("two projections");
        let g = e.after(&pi1);
        let t_map: Vec<usize> = (0..b.len()).map(|x| x * c.len() + cmap[x]).collect();
        let t = PosetMorphism::new_unchecked(
            Arc::new(b.base().clone()),
            Arc::new(a.base().clone()),
            t_map,
        );
        let fork = SplitFork::from_split_epi(&underlying(&pi1), &underlying(&e), &t)
            .expect("projection with section splits");
        GeneratedFork {
            f: pi1,
            g,
            fork,
            description: format!(
                "product pool[{bi}] x pool[{ci}]: e = {e_desc}, c = {}",
                describe_map_between(&b, &c, &cmap)
            ),
        }
    }

    pub fn take(&mut self, count: usize) -> Vec<GeneratedFork> {
        (0..count).map(|_| self.next_fork()).collect()
    }
}

fn describe_map(x: &PseudoDPoset, map: &[usize]) -> String {
    describe_map_between(x, x, map)
}

fn describe_map_between(x: &PseudoDPoset, y: &PseudoDPoset, map: &[usize]) -> String {
    let parts: Vec<String> = map
        .iter()
        .enumerate()
        .map(|(i, &v)| format!("{}↦{}", x.label(i), y.label(v)))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

/// The horizontal sum of two 3-chains with the idempotent folding `b` onto `a`,
/// as a fork `(id, e)`. Small worked example used in docs and tests.
pub fn horizontal_sum_example() -> GeneratedFork {
    let base = crate::poset::validate_bounded_poset(
        &["0", "a", "b", "1"],
        &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
    )
    .expect("diamond");
    let mut t = PartialTable::new(4);
    for x in 0..4 {
        t.set(x, 0, Some(x));
        t.set(x, x, Some(0));
    }
    t.set(3, 1, Some(1));
    t.set(3, 2, Some(2));
    let b = Arc::new(PseudoDPoset::new(base, t.clone(), t).expect("horizontal sum"));
    let e = PosetMorphism::new_unchecked(Arc::clone(&b), Arc::clone(&b), vec![0, 1, 1, 3]);
    let fork = SplitFork::from_idempotent(&underlying(&e)).expect("e is idempotent");
    GeneratedFork {
        f: PosetMorphism::identity(b),
        g: e,
        fork,
        description: "horizontal sum C3+C3, b folded onto a".into(),
    }
}

/// Runs transfer, the coequalizer check and the interval-functor check on one fork.
pub fn transfer_and_verify(
    fork: &GeneratedFork,
    targets: &[Arc<PseudoDPoset>],
) -> Result<(TransferResult, CoequalizerReport, bool), TransferError> {
    let result = transfer_structure(&fork.f, &fork.g, &fork.fork)?;
    let report = verify_coequalizer_psdpos(&fork.f, &fork.g, &result, targets);
    let preserved = i_preserves_fork(&fork.fork);
    Ok((result, report, preserved))
}

/// The fork's quotient as a bounded poset, for display.
pub fn quotient_base(fork: &SplitFork) -> &BoundedPoset {
    fork.quotient()
}
