//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints exactly one PASS/FAIL line; exits nonzero if any criterion fails.

use std::collections::HashMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use pealab::catalog::{enumerate_bounded_posets, enumerate_pea_structures, Catalog};
use pealab::limits::{coequalizer_bposets, comparison_map, SplitFork};
use pealab::morphism::{enumerate_maps, PosetMorphism};
use pealab::pdp::{
    check_pdp, check_pdp_map, check_pdp_morphism, equalizer_pdp, naturality_squares, product_pdp,
    product_projections, DiagramData,
};
use pealab::pea::{induced_order, is_commutative, pdp_to_pea, pea_to_pdp};
use pealab::pl::{pl_compose, pl_in_unit_interval, pl_noncommutativity_witness, PlMap};
use pealab::poset::{BoundedPoset, OrderedSet};
use pealab::transfer::{
    i_preserves_fork, transfer_structure, verify_coequalizer_psdpos, ForkGenerator,
};
use pealab::{PdpMorphism, PseudoDPoset, Rational};

const FORK_SEED: u64 = 20_240_601;
const FORK_COUNT: usize = 150;

struct Outcome {
    ok: bool,
    detail: String,
}

fn tally(failures: &[String]) -> String {
    match failures.first() {
        None => "0 failures".to_string(),
        Some(first) => format!("{} failures, first: {first}", failures.len()),
    }
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

/// Roundtrip of both conversions and induced-order agreement on every structure up to size 6.
fn roundtrip() -> Outcome {
    let mut structures = 0;
    let mut failures = Vec::new();
    for n in 1..=6 {
        for (ci, base) in enumerate_bounded_posets(n).unwrap().iter().enumerate() {
            let peas = enumerate_pea_structures(base);
            let mut pdps = Vec::new();
            for a in &peas {
                structures += 1;
                let x = match pea_to_pdp(a) {
                    Ok(x) => x,
                    Err(e) => {
                        failures.push(format!("n={n} class {ci}: pea_to_pdp: {e}"));
                        continue;
                    }
                };
                if pdp_to_pea(&x).as_ref() != Ok(a) {
                    failures.push(format!("n={n} class {ci}: PEA roundtrip differs"));
                }
                if pdp_to_pea(&x).and_then(|b| pea_to_pdp(&b)).as_ref() != Ok(&x) {
                    failures.push(format!("n={n} class {ci}: PDP roundtrip differs"));
                }
                if induced_order(a).as_ref() != Ok(base) || x.base() != base {
                    failures.push(format!("n={n} class {ci}: induced order differs"));
                }
                pdps.push(x);
            }
            // the conversion is injective on a fixed base
            for i in 0..pdps.len() {
                for j in (i + 1)..pdps.len() {
                    if pdps[i] == pdps[j] {
                        failures.push(format!("n={n} class {ci}: two structures convert alike"));
                    }
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{structures} structures on <= 6 elements; {}",
            tally(&failures)
        ),
    )
}

fn forced_structures() -> Outcome {
    let c2 = enumerate_pea_structures(&BoundedPoset::chain(2));
    let c3 = enumerate_pea_structures(&BoundedPoset::chain(3));
    let d4_base = enumerate_bounded_posets(4)
        .unwrap()
        .into_iter()
        .find(|p| *p != BoundedPoset::chain(4))
        .unwrap();
    let d4 = enumerate_pea_structures(&d4_base);
    let c3_forced = c3.len() == 1 && c3[0].add(1, 1) == Some(2);
    let ok = c2.len() == 1 && c3_forced && d4.len() == 2 && d4.iter().all(is_commutative);
    outcome(
        ok,
        format!(
            "C2: {}, C3: {} (a+a=1: {c3_forced}), D4: {} (all commutative: {})",
            c2.len(),
            c3.len(),
            d4.len(),
            d4.iter().all(is_commutative)
        ),
    )
}

fn diagrams(catalog: &Catalog) -> Outcome {
    let mut failures = Vec::new();
    let pdps = catalog.pdps(5);
    let data: Vec<DiagramData> = pdps.iter().map(|x| DiagramData::new(x).unwrap()).collect();
    for (i, d) in data.iter().enumerate() {
        if !d.pd1_diagram() {
            failures.push(format!("PD1 diagram at #{i}"));
        }
        if d.pd2_diagram() != Ok(true) {
            failures.push(format!("PD2 diagram at #{i}"));
        }
        if !d.differences_isotone() {
            failures.push(format!("isotonicity at #{i}"));
        }
    }
    let mut squares = 0;
    let small: Vec<usize> = (0..pdps.len()).filter(|&i| pdps[i].len() <= 4).collect();
    for &i in &small {
        for &j in &small {
            for map in enumerate_maps(&*pdps[i], &*pdps[j]) {
                if !check_pdp_map(&pdps[i], &pdps[j], &map).is_ok() {
                    continue;
                }
                let h = morph(Arc::clone(&pdps[i]), Arc::clone(&pdps[j]), map);
                squares += 1;
                if naturality_squares(&h, &data[i], &data[j]) != Ok(true) {
                    failures.push(format!("naturality for {}", h.describe()));
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} structures on <= 5 elements, {squares} PDP morphisms on <= 4; {}",
            data.len(),
            tally(&failures)
        ),
    )
}

fn transfer_suite(catalog: &Catalog, cross_check: &mut Vec<bool>) -> Outcome {
    let targets = catalog.pdps(4);
    let mut gen = ForkGenerator::new(catalog.pdps(5), FORK_SEED, 3);
    let mut failures = Vec::new();
    let mut proper = 0;
    let mut cocones = 0;
    for i in 0..FORK_COUNT {
        let fork = gen.next_fork();
        cross_check.push(coequalizer_matches(&fork.fork));
        let result = match transfer_structure(&fork.f, &fork.g, &fork.fork) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("#{i} {}: {e}", fork.description));
                continue;
            }
        };
        if result.qprime.len() < fork.f.target.len() {
            proper += 1;
        }
        let report = verify_coequalizer_psdpos(&fork.f, &fork.g, &result, &targets);
        cocones += report.cocones;
        let ok = check_pdp(&result.qprime).is_ok()
            && check_pdp_morphism(&result.qprime_morphism).is_ok()
            && i_preserves_fork(&fork.fork)
            && report.is_ok();
        if !ok {
            failures.push(format!("#{i} {}", fork.description));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{FORK_COUNT} forks (seed {FORK_SEED}, {proper} proper quotients), {} targets, {cocones} cocones; {}",
            targets.len(),
            tally(&failures)
        ),
    )
}

/// The independently computed coequalizer of `f, g` agrees with the fork's `q`.
fn coequalizer_matches(fork: &SplitFork) -> bool {
    let (quotient, qc) = coequalizer_bposets(&fork.f, &fork.g);
    match comparison_map(&qc.map, quotient.len(), &fork.q.map) {
        Some(k) => morph(quotient, Arc::clone(fork.quotient()), k).is_isomorphism(),
        None => false,
    }
}

fn noncommutative_witness() -> Outcome {
    let (f, g, report) = pl_noncommutativity_witness::<Rational>();
    let fg = pl_compose(&f, &g);
    let gf = pl_compose(&g, &f);
    let two = Rational::from_integer(2.into());
    // independent evaluation: breakpoints plus one interior point per segment
    let in_e_at = |h: &PlMap<Rational>, x: &Rational| {
        let v = h.eval(x);
        *x <= v && v <= two.clone() * x.clone()
    };
    let probes = |h: &PlMap<Rational>| h.sample_points();
    let composite_ok = |outer: &PlMap<Rational>, inner: &PlMap<Rational>, h: &PlMap<Rational>| {
        let mut pts = probes(h);
        pts.extend(probes(inner));
        pts.iter().all(|x| h.eval(x) == outer.eval(&inner.eval(x)))
    };
    let fg_in = probes(&fg).iter().all(|x| in_e_at(&fg, x)) && pl_in_unit_interval(&fg);
    let gf_out: Vec<Rational> = probes(&gf)
        .into_iter()
        .filter(|x| !in_e_at(&gf, x))
        .collect();
    let ok = report.f_plus_g.as_ref() == Some(&fg)
        && report.g_plus_f.is_none()
        && fg_in
        && !gf_out.is_empty()
        && composite_ok(&f, &g, &fg)
        && composite_ok(&g, &f, &gf)
        && pl_in_unit_interval(&f)
        && pl_in_unit_interval(&g);
    let points: Vec<String> = gf_out.iter().map(|x| x.to_string()).collect();
    outcome(
        ok,
        format!(
            "f+g defined, g+f undefined; g∘f leaves [id,2x] at x in {{{}}}",
            points.join(", ")
        ),
    )
}

fn pdp_morphisms(x: &Arc<PseudoDPoset>, y: &Arc<PseudoDPoset>) -> Vec<Vec<usize>> {
    enumerate_maps(&**x, &**y)
        .into_iter()
        .filter(|m| check_pdp_map(x, y, m).is_ok())
        .collect()
}

fn compose(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&x| outer[x]).collect()
}

fn universal_properties(catalog: &Catalog) -> Outcome {
    let objs = catalog.pdps(4);
    let mut failures = Vec::new();
    let mut product_cones = 0;
    for x in &objs {
        for y in &objs {
            let p = Arc::new(product_pdp(&[x, y]));
            if !check_pdp(&p).is_ok() {
                failures.push("product fails the axioms".to_string());
                continue;
            }
            let proj = product_projections(&[Arc::clone(x), Arc::clone(y)], &p);
            if !proj.iter().all(|m| check_pdp_morphism(m).is_ok()) {
                failures.push("projection is not a PDP morphism".to_string());
            }
            for c in &objs {
                let mut mediators: HashMap<(Vec<usize>, Vec<usize>), usize> = HashMap::new();
                for u in pdp_morphisms(c, &p) {
                    let key = (compose(&proj[0].map, &u), compose(&proj[1].map, &u));
                    *mediators.entry(key).or_default() += 1;
                }
                for h1 in pdp_morphisms(c, x) {
                    for h2 in pdp_morphisms(c, y) {
                        product_cones += 1;
                        if mediators.get(&(h1.clone(), h2)).copied() != Some(1) {
                            failures.push("product cone without a unique mediator".into());
                        }
                    }
                }
            }
        }
    }
    // equalizers of parallel pairs between catalog structures, and of the
    // projections X × X ⇉ X, whose equalizer is the diagonal
    let mut pairs: Vec<(PdpMorphism, PdpMorphism)> = Vec::new();
    for a in &objs {
        for b in &objs {
            let homs = pdp_morphisms(a, b);
            for f in &homs {
                for g in &homs {
                    pairs.push((
                        morph(Arc::clone(a), Arc::clone(b), f.clone()),
                        morph(Arc::clone(a), Arc::clone(b), g.clone()),
                    ));
                }
            }
        }
        let square = Arc::new(product_pdp(&[a, a]));
        let proj = product_projections(&[Arc::clone(a), Arc::clone(a)], &square);
        pairs.push((proj[0].clone(), proj[1].clone()));
    }
    let mut equalizer_cones = 0;
    for (f, g) in &pairs {
        let (e, incl) = match equalizer_pdp(f, g) {
            Ok(v) => v,
            Err(err) => {
                failures.push(format!("equalizer: {err}"));
                continue;
            }
        };
        if !check_pdp(&e).is_ok() || !check_pdp_morphism(&incl).is_ok() {
            failures.push("equalizer or inclusion fails the axioms".into());
            continue;
        }
        let a = &f.source;
        for c in &objs {
            let mediators = pdp_morphisms(c, &e);
            for h in pdp_morphisms(c, a) {
                if compose(&f.map, &h) != compose(&g.map, &h) {
                    continue;
                }
                equalizer_cones += 1;
                let count = mediators
                    .iter()
                    .filter(|u| compose(&incl.map, u) == h)
                    .count();
                if count != 1 {
                    failures.push("equalizer cone without a unique mediator".into());
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{product_cones} product cones, {} parallel pairs with {equalizer_cones} equalizer cones; {}",
            pairs.len(),
            tally(&failures)
        ),
    )
}

fn main() -> ExitCode {
    let catalog = Catalog::build(5).expect("catalog");
    let mut cross_check = Vec::new();
    let mut results: Vec<(&str, Outcome, f64)> = Vec::new();
    let mut timed = |name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        results.push((name, o, start.elapsed().as_secs_f64()));
    };
    timed("1 axiom/roundtrip suite", &mut roundtrip);
    timed("2 forced structures", &mut forced_structures);
    timed("3 diagram suite", &mut || diagrams(&catalog));
    timed("4 transfer suite", &mut || {
        transfer_suite(&catalog, &mut cross_check)
    });
    let matched = cross_check.iter().filter(|&&b| b).count();
    timed("5 coequalizer cross-check", &mut || {
        outcome(
            matched == cross_check.len() && matched >= 100,
            format!(
                "{matched}/{} forks: computed coequalizer isomorphic to Q over q",
                cross_check.len()
            ),
        )
    });
    timed("6 noncommutative witness", &mut noncommutative_witness);
    timed("7 product/equalizer universal properties", &mut || {
        universal_properties(&catalog)
    });

    let mut all = true;
    for (name, o, secs) in &results {
        all &= o.ok;
        println!(
            "criterion {name}: {} ({:.2}s) {}",
            if o.ok { "PASS" } else { "FAIL" },
            secs,
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn morph<S: OrderedSet, T: OrderedSet>(
    s: Arc<S>,
    t: Arc<T>,
    map: Vec<usize>,
) -> PosetMorphism<S, T> {
    PosetMorphism::new(s, t, map).expect("map fits its endpoints")
}
