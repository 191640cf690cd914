//! Exhaustive enumeration of small bounded posets (up to isomorphism) and of
//! all pseudo effect algebra structures on a fixed bounded poset.
//!
//! Structures are enumerated as addition tables. For a pseudo effect algebra
//! whose induced order is a given `P`, each row `a` of the table is a bijection
//! from `{x : a + x defined}` onto the up-set of `a`, and each column likewise
//! for left addition. The search fills one cell per comparable pair `a < c`
//! (`a ≠ 0`), choosing the `x` with `a + x = c`; every leaf is re-checked
//! against the full axioms.

use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::pdp::PseudoDPoset;
use crate::pea::{check_pea, induced_relation, is_commutative, pea_to_pdp, PseudoEffectAlgebra};
use crate::poset::{standard_labels, Bounded, BoundedPoset, OrderedSet, Poset};
use crate::table::PartialTable;

/// Largest carrier size enumerated unless configured otherwise.
pub const DEFAULT_MAX_N: usize = 7;

/// Environment variable overriding [`DEFAULT_MAX_N`].
pub const MAX_N_ENV: &str = "PEALAB_MAX_N";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("carrier size must be at least 1")]
    ZeroSize,
    #[error("carrier size {n} exceeds the configured limit {limit}")]
    SizeLimit { n: usize, limit: usize },
}

/// The enumeration size cap from `PEALAB_MAX_N`, or [`DEFAULT_MAX_N`].
pub fn configured_max_n() -> usize {
    std::env::var(MAX_N_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_N)
}

fn check_size(n: usize, limit: usize) -> Result<(), CatalogError> {
    if n == 0 {
        Err(CatalogError::ZeroSize)
    } else if n > limit {
        Err(CatalogError::SizeLimit { n, limit })
    } else {
        Ok(())
    }
}

/// Canonical code of a poset: the lexicographically greatest strict-order
/// bit string over all relabelings that keep elements sorted by
/// (height, down-set size, up-set size). Also returns the relabeling.
pub fn canonical_form<P: OrderedSet + ?Sized>(p: &P) -> (Vec<bool>, Vec<usize>) {
    let n = p.len();
    let heights = p.poset().heights();
    let sig: Vec<(usize, usize, usize)> = (0..n)
        .map(|a| {
            let down = (0..n).filter(|&x| p.leq(x, a)).count();
            let up = (0..n).filter(|&x| p.leq(a, x)).count();
            (heights[a], down, up)
        })
        .collect();
    let mut elems: Vec<usize> = (0..n).collect();
    elems.sort_by_key(|&a| sig[a]);
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for &a in &elems {
        match blocks.last_mut() {
            Some(b) if sig[b[0]] == sig[a] => b.push(a),
            _ => blocks.push(vec![a]),
        }
    }
    let mut best: Option<(Vec<bool>, Vec<usize>)> = None;
    let mut order = Vec::with_capacity(n);
    canonical_search(p, &blocks, 0, &mut vec![false; n], &mut order, &mut best);
    best.expect("at least one relabeling")
}

fn canonical_search<P: OrderedSet + ?Sized>(
    p: &P,
    blocks: &[Vec<usize>],
    block: usize,
    used: &mut Vec<bool>,
    order: &mut Vec<usize>,
    best: &mut Option<(Vec<bool>, Vec<usize>)>,
) {
    if block == blocks.len() {
        let n = order.len();
        let code: Vec<bool> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| p.leq(order[i], order[j]))
            .collect();
        if best.as_ref().is_none_or(|(b, _)| code > *b) {
            *best = Some((code, order.clone()));
        }
        return;
    }
    let members = &blocks[block];
    let placed_in_block = members.iter().filter(|&&m| used[m]).count();
    if placed_in_block == members.len() {
        canonical_search(p, blocks, block + 1, used, order, best);
        return;
    }
    for &m in members {
        if used[m] {
            continue;
        }
        used[m] = true;
        order.push(m);
        canonical_search(p, blocks, block, used, order, best);
        order.pop();
        used[m] = false;
    }
}

/// Relabels a poset along `order` (new index `i` is old element `order[i]`).
fn relabel(p: &Poset, order: &[usize]) -> Vec<bool> {
    let n = order.len();
    (0..n * n)
        .map(|k| p.leq(order[k / n], order[k % n]))
        .collect()
}

/// Every poset on `m` elements up to isomorphism, as relation tables in
/// canonical labeling.
fn posets_up_to_iso(m: usize) -> Vec<(Vec<bool>, Vec<bool>)> {
    // naturally labelled posets: element k is added above a down-closed set of 0..k
    let mut layer: Vec<Vec<bool>> = vec![Vec::new()];
    for k in 0..m {
        let mut next = Vec::new();
        for rel in &layer {
            for down in down_sets(rel, k) {
                let n = k + 1;
                let mut grown = vec![false; n * n];
                for i in 0..k {
                    for j in 0..k {
                        grown[i * n + j] = rel[i * k + j];
                    }
                    grown[i * n + k] = down[i];
                }
                grown[k * n + k] = true;
                next.push(grown);
            }
        }
        let mut seen = HashSet::new();
        let labels = vec![String::new(); k + 1];
        next.retain(|rel| {
            let p = Poset::from_relation_unchecked(labels.clone(), rel.clone());
            seen.insert(canonical_form(&p).0)
        });
        layer = next;
    }
    let labels = vec![String::new(); m];
    let mut out: Vec<(Vec<bool>, Vec<bool>)> = layer
        .into_iter()
        .map(|rel| {
            let p = Poset::from_relation_unchecked(labels.clone(), rel);
            let (code, order) = canonical_form(&p);
            (code, relabel(&p, &order))
        })
        .collect();
    out.sort_by(|a, b| b.0.cmp(&a.0));
    out
}

/// Down-closed subsets of a poset on `k` elements given by its relation table.
fn down_sets(rel: &[bool], k: usize) -> Vec<Vec<bool>> {
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << k) {
        let inside = |i: usize| mask >> i & 1 == 1;
        let closed = (0..k).all(|j| !inside(j) || (0..k).all(|i| !rel[i * k + j] || inside(i)));
        if closed {
            out.push((0..k).map(inside).collect());
        }
    }
    out
}

/// One bounded poset per isomorphism class on `n` elements, labelled
/// `0, a, b, ..., 1`, in a fixed order (the chain first).
pub fn enumerate_bounded_posets(n: usize) -> Result<Vec<BoundedPoset>, CatalogError> {
    enumerate_bounded_posets_with_limit(n, DEFAULT_MAX_N)
}

pub fn enumerate_bounded_posets_with_limit(
    n: usize,
    limit: usize,
) -> Result<Vec<BoundedPoset>, CatalogError> {
    check_size(n, limit)?;
    if n == 1 {
        return Ok(vec![BoundedPoset::singleton()]);
    }
    let m = n - 2;
    let labels = standard_labels(n);
    Ok(posets_up_to_iso(m)
        .into_iter()
        .map(|(_, middle)| {
            let mut leq = vec![false; n * n];
            for x in 0..n {
                leq[x] = true;
                leq[x * n + n - 1] = true;
            }
            for i in 0..m {
                for j in 0..m {
                    leq[(i + 1) * n + j + 1] = middle[i * m + j];
                }
            }
            BoundedPoset::with_bounds(
                Poset::from_relation_unchecked(labels.clone(), leq),
                0,
                n - 1,
            )
            .expect("bounds adjoined")
        })
        .collect())
}

/// All pseudo effect algebras on the carrier of `p` whose induced order is `p`.
pub fn enumerate_pea_structures(p: &BoundedPoset) -> Vec<PseudoEffectAlgebra> {
    let n = p.len();
    let zero = p.bottom();
    let one = p.top();
    let labels = p.as_poset().labels().to_vec();
    let mut search = Search {
        p,
        n,
        plus: PartialTable::new(n),
        column: vec![0u8; n * n],
        vars: Vec::new(),
        out: Vec::new(),
    };
    for c in 0..n {
        search.assign(zero, c, c);
        if c != zero {
            search.assign(c, zero, c);
        }
    }
    search.vars = (0..n)
        .flat_map(|a| (0..n).map(move |c| (a, c)))
        .filter(|&(a, c)| a != zero && a != c && p.leq(a, c))
        .collect();
    // larger targets first: sums landing on 1 are the most constrained
    search
        .vars
        .sort_by_key(|&(a, c)| (std::cmp::Reverse(p.as_poset().heights()[c]), a, c));
    search.run(0, one);
    let order = p.as_poset().relation();
    search
        .out
        .into_iter()
        .filter_map(|plus| {
            let alg = PseudoEffectAlgebra::from_table(labels.clone(), plus, zero, one).ok()?;
            (check_pea(&alg).is_ok() && induced_relation(&alg) == order).then_some(alg)
        })
        .collect()
}

struct Search<'a> {
    p: &'a BoundedPoset,
    n: usize,
    plus: PartialTable,
    /// `column[x * n + c]`: number of `y` with `y + x = c` so far.
    column: Vec<u8>,
    vars: Vec<(usize, usize)>,
    out: Vec<PartialTable>,
}

impl Search<'_> {
    fn assign(&mut self, a: usize, x: usize, c: usize) {
        self.plus.set(a, x, Some(c));
        self.column[x * self.n + c] += 1;
    }

    fn unassign(&mut self, a: usize, x: usize, c: usize) {
        self.plus.set(a, x, None);
        self.column[x * self.n + c] -= 1;
    }

    fn run(&mut self, k: usize, one: usize) {
        let n = self.n;
        if k == self.vars.len() {
            let complete =
                (0..n).all(|x| (0..n).all(|c| !self.p.leq(x, c) || self.column[x * n + c] == 1));
            if complete {
                self.out.push(self.plus.clone());
            }
            return;
        }
        let (a, c) = self.vars[k];
        for x in 0..n {
            let admissible = x != self.p.bottom()
                && x != one
                && self.p.leq(x, c)
                && self.plus.get(a, x).is_none()
                && self.column[x * n + c] == 0
                && self.associative_so_far(a, x, c);
            if admissible {
                self.assign(a, x, c);
                self.run(k + 1, one);
                self.unassign(a, x, c);
            }
        }
    }

    /// Partial PE1 check for the new cell `a + x = c` against already-filled cells.
    fn associative_so_far(&self, a: usize, x: usize, c: usize) -> bool {
        let n = self.n;
        // as outer sum a + (x) where x = u + v: then (a + u) + v must be c when known
        for u in 0..n {
            for v in 0..n {
                if self.plus.get(u, v) != Some(x) {
                    continue;
                }
                if let Some(au) = self.plus.get(a, u) {
                    if let Some(r) = self.plus.get(au, v) {
                        if r != c {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Generation parameters of a catalog entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Provenance {
    pub n: usize,
    /// Position of the base among the classes returned by [`enumerate_bounded_posets`].
    pub class_index: usize,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub base: BoundedPoset,
    pub structures: Vec<PseudoEffectAlgebra>,
    pub provenance: Provenance,
}

impl CatalogEntry {
    pub fn pdps(&self) -> Vec<PseudoDPoset> {
        self.structures
            .iter()
            .map(|s| pea_to_pdp(s).expect("catalog structures are pseudo effect algebras"))
            .collect()
    }
}

/// All bounded posets of size `1..=max_n` with their pseudo effect algebra structures.
#[derive(Debug, Clone)]
pub struct Catalog {
    pub max_n: usize,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn build(max_n: usize) -> Result<Self, CatalogError> {
        Self::build_with_limit(max_n, DEFAULT_MAX_N)
    }

    pub fn build_with_limit(max_n: usize, limit: usize) -> Result<Self, CatalogError> {
        check_size(max_n, limit)?;
        let mut bases = Vec::new();
        for n in 1..=max_n {
            for (class_index, base) in enumerate_bounded_posets_with_limit(n, limit)?
                .into_iter()
                .enumerate()
            {
                bases.push((base, Provenance { n, class_index }));
            }
        }
        // par_iter keeps input order, so the result does not depend on scheduling
        let entries = bases
            .into_par_iter()
            .map(|(base, provenance)| CatalogEntry {
                structures: enumerate_pea_structures(&base),
                base,
                provenance,
            })
            .collect();
        Ok(Catalog { max_n, entries })
    }

    pub fn entries_of_size(&self, n: usize) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.iter().filter(move |e| e.provenance.n == n)
    }

    /// Every catalog structure with at most `max_size` elements, as pseudo D-posets.
    pub fn pdps(&self, max_size: usize) -> Vec<Arc<PseudoDPoset>> {
        self.entries
            .iter()
            .filter(|e| e.provenance.n <= max_size)
            .flat_map(|e| e.pdps())
            .map(Arc::new)
            .collect()
    }

    pub fn peas(&self, max_size: usize) -> impl Iterator<Item = &PseudoEffectAlgebra> {
        self.entries
            .iter()
            .filter(move |e| e.provenance.n <= max_size)
            .flat_map(|e| e.structures.iter())
    }
}

/// Smallest carrier size `<= limit` admitting a noncommutative pseudo effect
/// algebra, with a witness.
pub fn find_smallest_noncommutative(
    limit: usize,
) -> Result<Option<(usize, PseudoEffectAlgebra)>, CatalogError> {
    find_smallest_noncommutative_with_limit(limit, DEFAULT_MAX_N)
}

pub fn find_smallest_noncommutative_with_limit(
    limit: usize,
    cap: usize,
) -> Result<Option<(usize, PseudoEffectAlgebra)>, CatalogError> {
    check_size(limit, cap)?;
    for n in 1..=limit {
        let bases = enumerate_bounded_posets_with_limit(n, cap)?;
        let found = bases
            .par_iter()
            .map(|b| {
                enumerate_pea_structures(b)
                    .into_iter()
                    .find(|s| !is_commutative(s))
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .next();
        if let Some(witness) = found {
            return Ok(Some((n, witness)));
        }
    }
    Ok(None)
}
