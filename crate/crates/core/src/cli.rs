//! Command-line front end. [`run`] parses arguments, dispatches to one verb and
//! returns the exit code with the text report; `main` only prints.
//!
//! Exit codes: 0 pass, 1 verified violation, 2 malformed input or usage error.
//! The last report line is always `RESULT: PASS <verb>` or `RESULT: FAIL <verb>`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::catalog::{configured_max_n, enumerate_pea_structures, Catalog, CatalogError};
use crate::io::{
    catalog_results, to_pretty, write_text, ForkBundle, IoError, MorphismFile, StructureFile,
};
use crate::limits::{coequalizer_bposets, SplitFork};
use crate::morphism::{enumerate_maps, find_isomorphism_map, PosetMorphism};
use crate::pdp::{check_pdp, check_pdp_map, equalizer_pdp, product_pdp, PdpMorphism, PseudoDPoset};
use crate::pea::{
    check_pea, check_pea_morphism, induced_order, is_commutative, pdp_to_pea, pea_to_pdp,
    PeaMorphismViolation,
};
use crate::pl::{pl_interval_violations, pl_noncommutativity_witness, PlMap};
use crate::poset::{Bounded, BoundedPoset, OrderedSet};
use crate::transfer::{
    i_preserves_fork, transfer_structure, verify_coequalizer_psdpos, ForkGenerator, TransferError,
    DEFAULT_TARGET_BOUND,
};
use crate::Rational;

#[derive(Parser, Debug)]
#[command(
    name = "pealab",
    version,
    about = "Finite pseudo effect algebra and pseudo D-poset workbench"
)]
pub struct Cli {
    /// Also write a machine-readable JSON report here.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a structure or morphism file against its axioms.
    Check(CheckArgs),
    /// Convert between addition tables and difference tables.
    Convert {
        #[arg(long, value_enum)]
        to: Kind,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Product of pseudo D-posets.
    Product {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Equalizer of two parallel PDP morphisms.
    Equalize {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
    /// Coequalizer of two parallel bounded-poset morphisms.
    Coequalize {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
    /// Transfer differences to the quotient of a split fork.
    Transfer(TransferArgs),
    /// Transfer, then check the universal property against catalog targets.
    VerifyCoeq {
        /// Fork bundle file.
        #[arg(long)]
        fork: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TARGET_BOUND)]
        target_bound: usize,
    },
    /// Enumerate bounded posets and their pseudo effect algebra structures.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Also enumerate the structures on every class.
        #[arg(long)]
        structures: bool,
        /// Write the catalog results file for sizes 1..=n.
        #[arg(long, value_name = "PATH")]
        catalog_out: Option<PathBuf>,
    },
    /// List the morphisms between two structures.
    Hom {
        source: PathBuf,
        target: PathBuf,
        /// Only count PDP morphisms (both files need difference tables).
        #[arg(long)]
        pdp: bool,
    },
    /// Search for an order isomorphism.
    Iso { left: PathBuf, right: PathBuf },
    /// Show two piecewise-linear maps whose sums disagree.
    WitnessNoncomm {
        /// Check a given pair instead of the built-in one.
        #[arg(long, requires = "g")]
        f: Option<PathBuf>,
        #[arg(long, requires = "f")]
        g: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct CheckArgs {
    /// Structure file with an addition table.
    #[arg(long)]
    pub pea: Option<PathBuf>,
    /// Structure file with both difference tables.
    #[arg(long)]
    pub pdp: Option<PathBuf>,
    /// Structure file; only the order is checked.
    #[arg(long)]
    pub poset: Option<PathBuf>,
    /// Morphism file; the check follows the tables both endpoints carry.
    #[arg(long)]
    pub morphism: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TransferArgs {
    /// Fork bundle file.
    #[arg(
        long,
        conflicts_with = "generate",
        required_unless_present = "generate"
    )]
    pub fork: Option<PathBuf>,
    /// Generate this many forks over catalog structures instead of reading one.
    #[arg(long)]
    pub generate: Option<usize>,
    /// Seed for the fork generator.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest catalog structure used as the middle object of generated forks.
    #[arg(long, default_value_t = 5)]
    pub max_size: usize,
    /// Largest catalog target for the universal-property check; 0 skips it.
    #[arg(long, default_value_t = DEFAULT_TARGET_BOUND)]
    pub target_bound: usize,
    /// Write generated fork bundles into this directory.
    #[arg(long, value_name = "DIR")]
    pub save: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Pdp,
    Pea,
}

enum Failure {
    Malformed(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Malformed(e.to_string())
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        Failure::Malformed(e.to_string())
    }
}

/// Collected output of one verb.
struct Report {
    text: String,
    json: Map<String, Value>,
    pass: bool,
}

impl Report {
    fn new() -> Self {
        Report {
            text: String::new(),
            json: Map::new(),
            pass: true,
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        if !s.as_ref().ends_with('\n') {
            self.text.push('\n');
        }
    }

    fn set(&mut self, key: &str, value: Value) {
        self.json.insert(key.to_string(), value);
    }

    fn fail(&mut self) {
        self.pass = false;
    }
}

impl Command {
    fn verb(&self) -> &'static str {
        match self {
            Command::Check(_) => "check",
            Command::Convert { .. } => "convert",
            Command::Product { .. } => "product",
            Command::Equalize { .. } => "equalize",
            Command::Coequalize { .. } => "coequalize",
            Command::Transfer(_) => "transfer",
            Command::VerifyCoeq { .. } => "verify-coeq",
            Command::Enumerate { .. } => "enumerate",
            Command::Hom { .. } => "hom",
            Command::Iso { .. } => "iso",
            Command::WitnessNoncomm { .. } => "witness-noncomm",
        }
    }
}

/// Parses `args` (including the program name) and runs one verb.
pub fn run<I, S>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    let verb = cli.command.verb();
    let mut report = Report::new();
    let outcome = dispatch(&cli.command, &mut report);
    let code = match outcome {
        Ok(()) if report.pass => 0,
        Ok(()) => 1,
        Err(Failure::Malformed(msg)) => {
            report.line(format!("error: {msg}"));
            report.set("error", json!(msg));
            report.pass = false;
            2
        }
    };
    let status = if report.pass { "PASS" } else { "FAIL" };
    if let Some(path) = &cli.json {
        report.set("verb", json!(verb));
        report.set("result", json!(status));
        report.set("exit_code", json!(code));
        if let Err(e) = write_text(path, &to_pretty(&Value::Object(report.json.clone()))) {
            report.line(format!("error: {e}"));
            let _ = writeln!(report.text, "RESULT: FAIL {verb}");
            return (2, report.text);
        }
    }
    let _ = writeln!(report.text, "RESULT: {status} {verb}");
    (code, report.text)
}

fn dispatch(cmd: &Command, r: &mut Report) -> Result<(), Failure> {
    match cmd {
        Command::Check(args) => check(args, r),
        Command::Convert { to, input, output } => convert(*to, input, output.as_deref(), r),
        Command::Product { inputs, output } => product(inputs, output.as_deref(), r),
        Command::Equalize { f, g } => equalize(f, g, r),
        Command::Coequalize { f, g } => coequalize(f, g, r),
        Command::Transfer(args) => transfer(args, r),
        Command::VerifyCoeq { fork, target_bound } => verify_coeq(fork, *target_bound, r),
        Command::Enumerate {
            n,
            structures,
            catalog_out,
        } => enumerate(*n, *structures, catalog_out.as_deref(), r),
        Command::Hom {
            source,
            target,
            pdp,
        } => hom(source, target, *pdp, r),
        Command::Iso { left, right } => iso(left, right, r),
        Command::WitnessNoncomm { f, g } => witness(f.as_deref(), g.as_deref(), r),
    }
}

fn load_pdp(path: &Path) -> Result<PseudoDPoset, Failure> {
    Ok(StructureFile::load(path)?.pdp()?)
}

fn check(args: &CheckArgs, r: &mut Report) -> Result<(), Failure> {
    if let Some(path) = &args.pea {
        let (alg, declared) = StructureFile::load(path)?.pea()?;
        let report = check_pea(&alg);
        r.set("kind", json!("pea"));
        if report.is_ok() {
            let induced = induced_order(&alg).map_err(|e| Failure::Malformed(e.to_string()))?;
            if induced != declared {
                r.line("order mismatch: induced order differs from the declared covers");
                r.set("violations", json!(["order"]));
                r.fail();
            } else {
                r.line(format!(
                    "pseudo effect algebra on {} elements, {}",
                    alg.len(),
                    if is_commutative(&alg) {
                        "commutative"
                    } else {
                        "noncommutative"
                    }
                ));
                r.set("violations", json!([]));
                r.set("commutative", json!(is_commutative(&alg)));
            }
        } else {
            r.line(report.to_string());
            r.set("violations", json!(report.axioms_violated()));
            r.fail();
        }
    } else if let Some(path) = &args.pdp {
        let x = load_pdp(path)?;
        let report = check_pdp(&x);
        r.set("kind", json!("pdp"));
        r.set("violations", json!(report.axioms_violated()));
        if report.is_ok() {
            r.line(format!(
                "pseudo D-poset on {} elements{}",
                x.len(),
                if x.is_dposet() {
                    ", differences coincide"
                } else {
                    ""
                }
            ));
        } else {
            r.line(report.to_string());
            r.fail();
        }
    } else if let Some(path) = &args.poset {
        let p = StructureFile::load(path)?.bounded_poset()?;
        r.set("kind", json!("poset"));
        r.line(format!(
            "bounded poset on {} elements, bottom {}, top {}",
            p.len(),
            p.label(p.bottom()),
            p.label(p.top())
        ));
    } else if let Some(path) = &args.morphism {
        check_morphism_file(path, r)?;
    }
    Ok(())
}

fn check_morphism_file(path: &Path, r: &mut Report) -> Result<(), Failure> {
    let file = MorphismFile::load(path)?;
    let has_diffs = |s: &StructureFile| s.slash.is_some() && s.bslash.is_some();
    if has_diffs(&file.source) && has_diffs(&file.target) {
        let h = file.pdp()?;
        let report = check_pdp_map(&h.source, &h.target, &h.map);
        r.set("kind", json!("pdp-morphism"));
        for v in &report.order.violations {
            r.line(v.to_string());
        }
        for v in &report.operations {
            r.line(format!(
                "{} not preserved at ({},{})",
                v.op.symbol(),
                h.source.label(v.b),
                h.source.label(v.a)
            ));
        }
        r.set(
            "violations",
            json!(report.order.violations.len() + report.operations.len()),
        );
        if !report.is_ok() {
            r.fail();
        }
    } else if file.source.plus.is_some() && file.target.plus.is_some() {
        let (a, _) = file.source.pea()?;
        let (b, _) = file.target.pea()?;
        let map = file.indices(
            &*Arc::new(file.source.bounded_poset()?),
            &*Arc::new(file.target.bounded_poset()?),
        )?;
        let report = check_pea_morphism(&map, &a, &b);
        r.set("kind", json!("pea-morphism"));
        for v in &report.violations {
            r.line(match *v {
                PeaMorphismViolation::ZeroNotPreserved => "0 not preserved".to_string(),
                PeaMorphismViolation::OneNotPreserved => "1 not preserved".to_string(),
                PeaMorphismViolation::SumUndefined { a: x, b: y } => format!(
                    "{}+{} defined but the image sum is not",
                    a.label(x),
                    a.label(y)
                ),
                PeaMorphismViolation::SumMismatch { a: x, b: y } => {
                    format!(
                        "image of {}+{} is not the sum of images",
                        a.label(x),
                        a.label(y)
                    )
                }
            });
        }
        r.set("violations", json!(report.violations.len()));
        if !report.is_ok() {
            r.fail();
        }
    } else {
        let h = file.bounded()?;
        let report = h.check();
        r.set("kind", json!("poset-morphism"));
        for v in &report.violations {
            r.line(v.to_string());
        }
        r.set("violations", json!(report.violations.len()));
        if !report.is_ok() {
            r.fail();
        }
    }
    if r.pass {
        r.line("morphism ok");
    }
    Ok(())
}

fn convert(to: Kind, input: &Path, output: Option<&Path>, r: &mut Report) -> Result<(), Failure> {
    let file = StructureFile::load(input)?;
    let converted = match to {
        Kind::Pdp => {
            let (alg, _) = file.pea()?;
            match pea_to_pdp(&alg) {
                Ok(x) => StructureFile::from_pdp(&x),
                Err(e) => {
                    r.line(e.to_string());
                    r.fail();
                    return Ok(());
                }
            }
        }
        Kind::Pea => {
            let x = file.pdp()?;
            match pdp_to_pea(&x) {
                Ok(alg) => StructureFile::from_pea(&alg, x.base()),
                Err(e) => {
                    r.line(e.to_string());
                    r.fail();
                    return Ok(());
                }
            }
        }
    };
    emit_structure(&converted, output, r)
}

fn emit_structure(s: &StructureFile, output: Option<&Path>, r: &mut Report) -> Result<(), Failure> {
    r.set("structure", s.to_value());
    match output {
        Some(path) => {
            write_text(path, &s.to_json_string())?;
            r.line(format!("wrote {}", path.display()));
        }
        None => r.line(s.to_json_string()),
    }
    Ok(())
}

fn product(inputs: &[PathBuf], output: Option<&Path>, r: &mut Report) -> Result<(), Failure> {
    let factors = inputs
        .iter()
        .map(|p| load_pdp(p))
        .collect::<Result<Vec<_>, _>>()?;
    for (p, x) in inputs.iter().zip(&factors) {
        let report = check_pdp(x);
        if !report.is_ok() {
            r.line(format!("{}: {}", p.display(), report));
            r.fail();
            return Ok(());
        }
    }
    let refs: Vec<&PseudoDPoset> = factors.iter().collect();
    let prod = product_pdp(&refs);
    r.set("size", json!(prod.len()));
    emit_structure(&StructureFile::from_pdp(&prod), output, r)
}

fn load_pdp_pair(f: &Path, g: &Path) -> Result<(PdpMorphism, PdpMorphism), Failure> {
    Ok((MorphismFile::load(f)?.pdp()?, MorphismFile::load(g)?.pdp()?))
}

fn equalize(f: &Path, g: &Path, r: &mut Report) -> Result<(), Failure> {
    let (f, g) = load_pdp_pair(f, g)?;
    for (name, h) in [("f", &f), ("g", &g)] {
        if !crate::pdp::check_pdp_morphism(h).is_ok() {
            r.line(format!("{name} is not a PDP morphism"));
            r.fail();
            return Ok(());
        }
    }
    match equalizer_pdp(&f, &g) {
        Ok((e, inclusion)) => {
            let labels: Vec<&str> = inclusion.map.iter().map(|&x| f.source.label(x)).collect();
            r.line(format!("equalizer {{{}}}", labels.join(", ")));
            r.set("elements", json!(labels));
            emit_structure(&StructureFile::from_pdp(&e), None, r)
        }
        Err(e) => Err(Failure::Malformed(e.to_string())),
    }
}

fn coequalize(f: &Path, g: &Path, r: &mut Report) -> Result<(), Failure> {
    let f = MorphismFile::load(f)?.bounded()?;
    let g = MorphismFile::load(g)?.bounded()?;
    if *f.source != *g.source || *f.target != *g.target {
        return Err(Failure::Malformed("f and g are not parallel".into()));
    }
    for (name, h) in [("f", &f), ("g", &g)] {
        if !h.is_valid() {
            r.line(format!("{name} is not a bounded-poset morphism"));
            r.fail();
            return Ok(());
        }
    }
    let (_, q) = coequalizer_bposets(&f, &g);
    let q_file = MorphismFile::from_bounded(&q);
    r.line(format!("quotient has {} elements", q.target.len()));
    r.line(format!("q = {}", q.describe()));
    r.set("quotient", q_file.target.to_value());
    r.set("q", json!(q_file.map));
    Ok(())
}

fn catalog_targets(bound: usize) -> Result<Vec<Arc<PseudoDPoset>>, Failure> {
    if bound == 0 {
        return Ok(Vec::new());
    }
    Ok(Catalog::build_with_limit(bound, configured_max_n())?.pdps(bound))
}

/// Transfer plus checks for one fork; returns whether everything passed.
fn run_fork(
    f: &PdpMorphism,
    g: &PdpMorphism,
    fork: &SplitFork,
    targets: &[Arc<PseudoDPoset>],
    r: &mut Report,
) -> Result<bool, Failure> {
    let result = match transfer_structure(f, g, fork) {
        Ok(res) => res,
        Err(TransferError::InvalidFork(msg)) => return Err(Failure::Malformed(msg)),
        Err(e) => {
            r.line(e.to_string());
            return Ok(false);
        }
    };
    let pd_ok = check_pdp(&result.qprime).is_ok();
    let q_ok = result.diagnostics.qprime_is_pdp_morphism;
    let preserved = i_preserves_fork(fork);
    let coeq = verify_coequalizer_psdpos(f, g, &result, targets);
    r.line(format!(
        "  Q' has {} elements; axioms {}; q' {}; I preserves fork: {}; cocones {} with {} failures",
        result.qprime.len(),
        if pd_ok { "ok" } else { "FAIL" },
        if q_ok { "ok" } else { "FAIL" },
        preserved,
        coeq.cocones,
        coeq.failures.len()
    ));
    Ok(pd_ok && q_ok && preserved && coeq.is_ok())
}

fn transfer(args: &TransferArgs, r: &mut Report) -> Result<(), Failure> {
    let targets = catalog_targets(args.target_bound)?;
    r.set("target_bound", json!(args.target_bound));
    if let Some(path) = &args.fork {
        let (f, g, fork) = ForkBundle::load(path)?.resolve()?;
        let ok = run_fork(&f, &g, &fork, &targets, r)?;
        if ok {
            let result = transfer_structure(&f, &g, &fork).expect("checked above");
            let s = StructureFile::from_pdp(&result.qprime);
            r.set("qprime", s.to_value());
            r.line(s.to_json_string());
        } else {
            r.fail();
        }
        return Ok(());
    }
    let count = args.generate.unwrap_or(0);
    let cap = configured_max_n();
    let pool = Catalog::build_with_limit(args.max_size, cap)?.pdps(args.max_size);
    let mut gen = ForkGenerator::new(pool, args.seed, 3);
    let mut passed = 0;
    let mut descriptions = Vec::new();
    for i in 0..count {
        let fork = gen.next_fork();
        r.line(format!("fork {i}: {}", fork.description));
        let ok = run_fork(&fork.f, &fork.g, &fork.fork, &targets, r)?;
        passed += ok as usize;
        if let Some(dir) = &args.save {
            std::fs::create_dir_all(dir).map_err(|e| Failure::Malformed(e.to_string()))?;
            let bundle = ForkBundle::from_parts(&fork.f, &fork.g, &fork.fork);
            write_text(
                &dir.join(format!("fork_{i:04}.json")),
                &to_pretty(&bundle.to_value()),
            )?;
        }
        descriptions.push(json!({"description": fork.description, "pass": ok}));
    }
    r.line(format!(
        "{passed}/{count} forks passed (seed {})",
        args.seed
    ));
    r.set("seed", json!(args.seed));
    r.set("forks", json!(descriptions));
    r.set("passed", json!(passed));
    if passed != count {
        r.fail();
    }
    Ok(())
}

fn verify_coeq(path: &Path, bound: usize, r: &mut Report) -> Result<(), Failure> {
    let (f, g, fork) = ForkBundle::load(path)?.resolve()?;
    let targets = catalog_targets(bound)?;
    let result = match transfer_structure(&f, &g, &fork) {
        Ok(res) => res,
        Err(TransferError::InvalidFork(msg)) => return Err(Failure::Malformed(msg)),
        Err(e) => {
            r.line(e.to_string());
            r.fail();
            return Ok(());
        }
    };
    let report = verify_coequalizer_psdpos(&f, &g, &result, &targets);
    r.line(format!(
        "{} targets of size <= {bound}, {} cocones, {} without a unique factorization",
        report.targets,
        report.cocones,
        report.failures.len()
    ));
    for fail in &report.failures {
        r.line(format!(
            "  target #{} h = {:?}: {} PDP factorizations ({} order factorizations)",
            fail.target, fail.h, fail.pdp_factorizations, fail.order_factorizations
        ));
    }
    r.set("target_bound", json!(bound));
    r.set("targets", json!(report.targets));
    r.set("cocones", json!(report.cocones));
    r.set("failures", json!(report.failures.len()));
    if !report.is_ok() {
        r.fail();
    }
    Ok(())
}

fn enumerate(
    n: usize,
    structures: bool,
    out: Option<&Path>,
    r: &mut Report,
) -> Result<(), Failure> {
    let cap = configured_max_n();
    let classes = crate::catalog::enumerate_bounded_posets_with_limit(n, cap)?;
    r.line(format!("{} bounded posets on {n} elements", classes.len()));
    let mut summary = Vec::new();
    for (i, base) in classes.iter().enumerate() {
        let file = StructureFile::from_bounded_poset(base);
        let covers: Vec<String> = file
            .covers
            .iter()
            .map(|(a, b)| format!("{a}<{b}"))
            .collect();
        let mut entry = json!({"class": i, "covers": file.covers});
        if structures {
            let s = enumerate_pea_structures(base);
            let nc = s.iter().filter(|x| !is_commutative(x)).count();
            r.line(format!(
                "  #{i}: {}  structures {} ({nc} noncommutative)",
                covers.join(" "),
                s.len()
            ));
            entry["structures"] = json!(s.len());
            entry["noncommutative"] = json!(nc);
        } else {
            r.line(format!("  #{i}: {}", covers.join(" ")));
        }
        summary.push(entry);
    }
    r.set("n", json!(n));
    r.set("classes", json!(summary));
    if let Some(path) = out {
        let catalog = Catalog::build_with_limit(n, cap)?;
        write_text(path, &to_pretty(&catalog_results(&catalog)))?;
        r.line(format!("wrote {}", path.display()));
    }
    Ok(())
}

fn hom(source: &Path, target: &Path, pdp: bool, r: &mut Report) -> Result<(), Failure> {
    let s_file = StructureFile::load(source)?;
    let t_file = StructureFile::load(target)?;
    let (maps, s, t): (Vec<Vec<usize>>, BoundedPoset, BoundedPoset) = if pdp {
        let s = s_file.pdp()?;
        let t = t_file.pdp()?;
        let maps = enumerate_maps(&s, &t)
            .into_iter()
            .filter(|m| check_pdp_map(&s, &t, m).is_ok())
            .collect();
        (maps, s.base().clone(), t.base().clone())
    } else {
        let s = s_file.bounded_poset()?;
        let t = t_file.bounded_poset()?;
        (enumerate_maps(&s, &t), s, t)
    };
    r.line(format!(
        "{} {} morphisms",
        maps.len(),
        if pdp { "PDP" } else { "bounded-poset" }
    ));
    let s = Arc::new(s);
    let t = Arc::new(t);
    for m in &maps {
        r.line(format!(
            "  {}",
            PosetMorphism::new_unchecked(Arc::clone(&s), Arc::clone(&t), m.clone()).describe()
        ));
    }
    r.set("count", json!(maps.len()));
    Ok(())
}

fn iso(left: &Path, right: &Path, r: &mut Report) -> Result<(), Failure> {
    let a = StructureFile::load(left)?.bounded_poset()?;
    let b = StructureFile::load(right)?.bounded_poset()?;
    match find_isomorphism_map(&a, &b) {
        Some(map) => {
            let h = PosetMorphism::new_unchecked(Arc::new(a), Arc::new(b), map);
            r.line(format!("isomorphic: {}", h.describe()));
            r.set("isomorphic", json!(true));
        }
        None => {
            r.line("not isomorphic");
            r.set("isomorphic", json!(false));
            r.fail();
        }
    }
    Ok(())
}

fn witness(f: Option<&Path>, g: Option<&Path>, r: &mut Report) -> Result<(), Failure> {
    let load = |p: &Path| -> Result<PlMap<Rational>, Failure> {
        PlMap::from_json(&crate::io::read_json(p)?).map_err(|e| Failure::Malformed(e.to_string()))
    };
    let (f, g, report) = match (f, g) {
        (Some(fp), Some(gp)) => {
            let (f, g) = (load(fp)?, load(gp)?);
            let fg = crate::pl::pl_sum(&f, &g).map_err(|e| Failure::Malformed(e.to_string()))?;
            let gf = crate::pl::pl_sum(&g, &f).map_err(|e| Failure::Malformed(e.to_string()))?;
            let violations = pl_interval_violations(&crate::pl::pl_compose(&g, &f));
            let report = crate::pl::NoncommutativityReport {
                f_plus_g: fg,
                g_plus_f: gf,
                g_after_f_violations: violations,
            };
            (f, g, report)
        }
        _ => pl_noncommutativity_witness::<Rational>(),
    };
    r.line(format!("f: {f}"));
    r.line(format!("g: {g}"));
    r.line(report.to_string());
    r.set("f", f.to_json());
    r.set("g", g.to_json());
    r.set(
        "f_plus_g",
        report.f_plus_g.as_ref().map(|h| h.to_json()).into(),
    );
    r.set(
        "g_plus_f",
        report.g_plus_f.as_ref().map(|h| h.to_json()).into(),
    );
    r.set(
        "witness_points",
        json!(report
            .g_after_f_violations
            .iter()
            .map(|v| json!({"x": v.x.to_string(), "value": v.value.to_string()}))
            .collect::<Vec<_>>()),
    );
    if !report.is_noncommutative() {
        r.line("the sums agree");
        r.fail();
    }
    Ok(())
}
