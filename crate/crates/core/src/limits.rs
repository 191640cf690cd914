//! Products and coequalizers of (bounded) posets, and split forks.

use std::sync::Arc;

use crate::morphism::{BoundedMorphism, PosetMorphism};
use crate::poset::{warshall, Bounded, BoundedPoset, OrderedSet, Poset};

/// Mixed-radix indexing of a cartesian product; the first factor varies slowest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductIndex {
    sizes: Vec<usize>,
}

impl ProductIndex {
    pub fn new(sizes: Vec<usize>) -> Self {
        ProductIndex { sizes }
    }

    pub fn len(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn arity(&self) -> usize {
        self.sizes.len()
    }

    pub fn encode(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.sizes.len());
        coords
            .iter()
            .zip(&self.sizes)
            .fold(0, |acc, (&c, &s)| acc * s + c)
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.sizes.len()];
        for (slot, &s) in out.iter_mut().zip(&self.sizes).rev() {
            *slot = index % s;
            index /= s;
        }
        out
    }

    pub fn coordinate(&self, index: usize, factor: usize) -> usize {
        let stride: usize = self.sizes[factor + 1..].iter().product();
        (index / stride) % self.sizes[factor]
    }
}

/// Cartesian product with the componentwise order; the empty product is the singleton.
pub fn product_bposets(factors: &[&BoundedPoset]) -> BoundedPoset {
    if factors.is_empty() {
        return BoundedPoset::singleton().with_labels(vec!["()".to_string()]);
    }
    let index = ProductIndex::new(factors.iter().map(|f| f.len()).collect());
    let n = index.len();
    let coords: Vec<Vec<usize>> = (0..n).map(|i| index.decode(i)).collect();
    let labels = coords
        .iter()
        .map(|c| {
            let parts: Vec<&str> = c.iter().zip(factors).map(|(&x, f)| f.label(x)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let mut leq = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            leq[i * n + j] = factors
                .iter()
                .enumerate()
                .all(|(k, f)| f.leq(coords[i][k], coords[j][k]));
        }
    }
    let bottom = index.encode(&factors.iter().map(|f| f.bottom()).collect::<Vec<_>>());
    let top = index.encode(&factors.iter().map(|f| f.top()).collect::<Vec<_>>());
    BoundedPoset::with_bounds(Poset::from_relation_unchecked(labels, leq), bottom, top)
        .expect("componentwise bounds are bounds")
}

/// Projections out of a product built by [`product_bposets`] (or any carrier
/// indexed the same way).
pub fn product_projection_maps(sizes: &[usize]) -> Vec<Vec<usize>> {
    let index = ProductIndex::new(sizes.to_vec());
    (0..sizes.len())
        .map(|k| (0..index.len()).map(|i| index.coordinate(i, k)).collect())
        .collect()
}

/// Quotient of the target of `f, g` in the category of posets.
///
/// Returns the quotient poset and the class of each element of the target.
/// The classes are numbered by their least member and labelled by it.
pub fn coequalizer_maps<T: OrderedSet + ?Sized>(
    target: &T,
    f: &[usize],
    g: &[usize],
) -> (Poset, Vec<usize>) {
    let n = target.len();
    let mut uf = UnionFind::new(n);
    for (&a, &b) in f.iter().zip(g) {
        uf.union(a, b);
    }
    loop {
        let (class_of, reps) = uf.classes();
        let k = reps.len();
        let mut rel = vec![false; k * k];
        for i in 0..k {
            rel[i * k + i] = true;
        }
        for a in 0..n {
            for b in 0..n {
                if target.leq(a, b) {
                    rel[class_of[a] * k + class_of[b]] = true;
                }
            }
        }
        warshall(&mut rel, k);
        let mut merged = false;
        for i in 0..k {
            for j in (i + 1)..k {
                if rel[i * k + j] && rel[j * k + i] {
                    merged |= uf.union(reps[i], reps[j]);
                }
            }
        }
        if !merged {
            let labels = reps.iter().map(|&r| target.label(r).to_string()).collect();
            return (Poset::from_relation_unchecked(labels, rel), class_of);
        }
    }
}

/// Coequalizer of `f, g: A -> B` in bounded posets: the quotient object `Q`
/// and the canonical surjection `q: B -> Q`.
pub fn coequalizer_bposets(
    f: &BoundedMorphism,
    g: &BoundedMorphism,
) -> (Arc<BoundedPoset>, BoundedMorphism) {
    let b = &f.target;
    let (poset, class_of) = coequalizer_maps(&**b, &f.map, &g.map);
    let q = Arc::new(
        BoundedPoset::with_bounds(poset, class_of[b.bottom()], class_of[b.top()])
            .expect("quotient of a bounded poset is bounded"),
    );
    let morphism = PosetMorphism::new_unchecked(Arc::clone(b), Arc::clone(&q), class_of);
    (q, morphism)
}

/// Coequalizer in plain posets, for carriers without bounds (e.g. interval posets).
pub fn coequalizer_posets<S: OrderedSet, T: OrderedSet>(
    f: &PosetMorphism<S, T>,
    g: &PosetMorphism<S, T>,
) -> (Arc<Poset>, PosetMorphism<T, Poset>) {
    let (poset, class_of) = coequalizer_maps(&*f.target, &f.map, &g.map);
    let q = Arc::new(poset);
    let morphism = PosetMorphism::new_unchecked(Arc::clone(&f.target), Arc::clone(&q), class_of);
    (q, morphism)
}

/// The comparison map `k: C -> Q` with `k ∘ c = q`, for a surjection `c: B -> C`.
///
/// `None` when `q` does not factor (some class of `c` is not sent to a single point).
pub fn comparison_map(c: &[usize], c_len: usize, q: &[usize]) -> Option<Vec<usize>> {
    let mut k = vec![None; c_len];
    for (&cls, &img) in c.iter().zip(q) {
        match k[cls] {
            None => k[cls] = Some(img),
            Some(prev) if prev != img => return None,
            _ => {}
        }
    }
    k.into_iter().collect()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Always keeps the smaller index as root.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Class number of each element and the least member of each class.
    fn classes(&mut self) -> (Vec<usize>, Vec<usize>) {
        let n = self.parent.len();
        let mut number = vec![usize::MAX; n];
        let mut reps = Vec::new();
        let class_of = (0..n)
            .map(|x| {
                let r = self.find(x);
                if number[r] == usize::MAX {
                    number[r] = reps.len();
                    reps.push(x);
                }
                number[r]
            })
            .collect();
        (class_of, reps)
    }
}

/// A fork `f, g: A ⇉ B`, `q: B -> Q` together with sections `s: Q -> B`, `t: B -> A`.
#[derive(Clone, Debug)]
pub struct SplitFork {
    pub f: BoundedMorphism,
    pub g: BoundedMorphism,
    pub q: BoundedMorphism,
    pub s: BoundedMorphism,
    pub t: BoundedMorphism,
}

impl SplitFork {
    pub fn domain(&self) -> &Arc<BoundedPoset> {
        &self.f.source
    }

    pub fn codomain(&self) -> &Arc<BoundedPoset> {
        &self.f.target
    }

    pub fn quotient(&self) -> &Arc<BoundedPoset> {
        &self.q.target
    }

    /// Endpoints line up as `A ⇉ B -> Q`, `Q -> B`, `B -> A`.
    pub fn is_well_typed(&self) -> bool {
        let a = self.f.source.as_ref();
        let b = self.f.target.as_ref();
        let q = self.q.target.as_ref();
        *self.g.source == *a
            && *self.t.target == *a
            && *self.g.target == *b
            && *self.q.source == *b
            && *self.s.target == *b
            && *self.t.source == *b
            && *self.s.source == *q
    }

    /// All five maps are bounded-poset morphisms.
    pub fn morphisms_valid(&self) -> bool {
        [&self.f, &self.g, &self.q, &self.s, &self.t]
            .iter()
            .all(|m| m.is_valid())
    }

    /// The split fork from an idempotent endomorphism `e` of `B`: `(id, e)`,
    /// with `Q` the image of `e`, `q` the corestriction and `s` the inclusion.
    pub fn from_idempotent(e: &BoundedMorphism) -> Option<SplitFork> {
        let b = &e.source;
        if !e.is_idempotent() || *e.target != **b {
            return None;
        }
        let id = PosetMorphism::identity(Arc::clone(b));
        Self::from_split_epi(&id, e, &id)
    }

    /// The split fork `(f, e ∘ f)` for a surjection `f: A -> B` with section `t`
    /// (`f ∘ t = id`) and an idempotent `e` on `B`.
    pub fn from_split_epi(
        f: &BoundedMorphism,
        e: &BoundedMorphism,
        t: &BoundedMorphism,
    ) -> Option<SplitFork> {
        let b = &e.source;
        if !e.is_idempotent() {
            return None;
        }
        let image: Vec<usize> = (0..b.len()).filter(|&x| e.map[x] == x).collect();
        let mut position = vec![usize::MAX; b.len()];
        for (i, &x) in image.iter().enumerate() {
            position[x] = i;
        }
        let k = image.len();
        let labels = image.iter().map(|&x| b.label(x).to_string()).collect();
        let leq = (0..k * k)
            .map(|c| b.leq(image[c / k], image[c % k]))
            .collect();
        let q_obj = Arc::new(
            BoundedPoset::with_bounds(
                Poset::from_relation_unchecked(labels, leq),
                position[e.map[b.bottom()]],
                position[e.map[b.top()]],
            )
            .ok()?,
        );
        let q = PosetMorphism::new_unchecked(
            Arc::clone(b),
            Arc::clone(&q_obj),
            e.map.iter().map(|&y| position[y]).collect(),
        );
        let s = PosetMorphism::new_unchecked(Arc::clone(&q_obj), Arc::clone(b), image);
        let fork = SplitFork {
            f: f.clone(),
            g: e.after(f),
            q,
            s,
            t: t.clone(),
        };
        is_split_fork(&fork).then_some(fork)
    }
}

/// `q∘f = q∘g`, `q∘s = id`, `f∘t = id`, `g∘t = s∘q`, checked pointwise.
pub fn is_split_fork(fork: &SplitFork) -> bool {
    if !fork.is_well_typed() {
        return false;
    }
    let SplitFork { f, g, q, s, t } = fork;
    let coequalizes = f
        .map
        .iter()
        .zip(&g.map)
        .all(|(&x, &y)| q.map[x] == q.map[y]);
    let q_split = (0..s.source.len()).all(|x| q.map[s.map[x]] == x);
    let f_split = (0..t.source.len()).all(|x| f.map[t.map[x]] == x);
    let g_split = (0..t.source.len()).all(|x| g.map[t.map[x]] == s.map[q.map[x]]);
    coequalizes && q_split && f_split && g_split
}
