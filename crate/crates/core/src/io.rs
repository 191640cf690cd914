//! JSON wire formats: structure files, morphism files, fork bundles and the
//! catalog results file.
//!
//! A structure file is
//! `{"elements": ["0","a","1"], "covers": [["0","a"],["a","1"]]}` with optional
//! `"plus"` (keyed `"a,b"`) and `"slash"`/`"bslash"` (keyed `"b,a"`) tables.
//! Emission is normalized: elements in carrier order, covers as the Hasse
//! diagram in row-major order, table cells in row-major order.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::catalog::Catalog;
use crate::limits::SplitFork;
use crate::morphism::{BoundedMorphism, PosetMorphism};
use crate::pdp::{Difference, PdpMorphism, PseudoDPoset};
use crate::pea::{is_commutative, PseudoEffectAlgebra};
use crate::poset::{validate_bounded_poset, Bounded, BoundedPoset, OrderedSet, PosetError};
use crate::table::PartialTable;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema mismatch: {0}")]
    Schema(String),
    #[error("invalid order: {0}")]
    Order(#[from] PosetError),
}

fn schema(msg: impl Into<String>) -> IoError {
    IoError::Schema(msg.into())
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_json(path: &Path) -> Result<Value, IoError> {
    Ok(serde_json::from_str(&read_text(path)?)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Parsed form of a structure file, before any axiom checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plus: Option<IndexMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slash: Option<IndexMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bslash: Option<IndexMap<String, String>>,
}

impl StructureFile {
    pub fn from_value(value: Value) -> Result<Self, IoError> {
        Ok(serde_json::from_value(value)?)
    }

    pub fn parse(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, IoError> {
        Self::parse(&read_text(path)?)
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn to_json_string(&self) -> String {
        to_pretty(self)
    }

    /// The order given by `elements` and `covers`; tables are ignored.
    pub fn bounded_poset(&self) -> Result<BoundedPoset, IoError> {
        let covers: Vec<(&str, &str)> = self
            .covers
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        let elements: Vec<&str> = self.elements.iter().map(String::as_str).collect();
        Ok(validate_bounded_poset(&elements, &covers)?)
    }

    /// The addition table over the declared carrier; requires `"plus"`.
    ///
    /// Returns the algebra together with the declared order, which the
    /// caller may compare with the induced one.
    pub fn pea(&self) -> Result<(PseudoEffectAlgebra, BoundedPoset), IoError> {
        let base = self.bounded_poset()?;
        let plus = self
            .plus
            .as_ref()
            .ok_or_else(|| schema("missing \"plus\" table"))?;
        let table = parse_table(&base, plus, "plus")?;
        let alg = PseudoEffectAlgebra::from_table(
            base.as_poset().labels().to_vec(),
            table,
            base.bottom(),
            base.top(),
        )
        .map_err(|e| schema(e.to_string()))?;
        Ok((alg, base))
    }

    /// The two difference tables over the declared order; requires `"slash"` and `"bslash"`.
    pub fn pdp(&self) -> Result<PseudoDPoset, IoError> {
        let base = self.bounded_poset()?;
        let mut tables = Vec::new();
        for (name, t) in [("slash", &self.slash), ("bslash", &self.bslash)] {
            let t = t
                .as_ref()
                .ok_or_else(|| schema(format!("missing \"{name}\" table")))?;
            tables.push(parse_table(&base, t, name)?);
        }
        let bslash = tables.pop().expect("two tables");
        let slash = tables.pop().expect("two tables");
        PseudoDPoset::from_tables(base, slash, bslash).map_err(|e| schema(e.to_string()))
    }

    pub fn from_bounded_poset(p: &BoundedPoset) -> Self {
        let labels = p.as_poset().labels();
        StructureFile {
            elements: labels.to_vec(),
            covers: p
                .as_poset()
                .covers()
                .into_iter()
                .map(|(a, b)| (labels[a].clone(), labels[b].clone()))
                .collect(),
            plus: None,
            slash: None,
            bslash: None,
        }
    }

    /// Covers are those of the induced order.
    pub fn from_pea(alg: &PseudoEffectAlgebra, order: &BoundedPoset) -> Self {
        let mut file = Self::from_bounded_poset(&order.clone().with_labels(alg.labels().to_vec()));
        file.plus = Some(emit_table(alg.table(), alg.labels()));
        file
    }

    pub fn from_pdp(x: &PseudoDPoset) -> Self {
        let mut file = Self::from_bounded_poset(x.base());
        let labels = x.poset().labels();
        file.slash = Some(emit_table(x.table(Difference::Slash), labels));
        file.bslash = Some(emit_table(x.table(Difference::Bslash), labels));
        file
    }

    /// Parses and re-emits; stable after one pass.
    pub fn normalized(&self) -> Result<Self, IoError> {
        let base = self.bounded_poset()?;
        let mut out = Self::from_bounded_poset(&base);
        if let Some(t) = &self.plus {
            out.plus = Some(emit_table(&parse_table(&base, t, "plus")?, &self.elements));
        }
        if let Some(t) = &self.slash {
            out.slash = Some(emit_table(&parse_table(&base, t, "slash")?, &self.elements));
        }
        if let Some(t) = &self.bslash {
            out.bslash = Some(emit_table(
                &parse_table(&base, t, "bslash")?,
                &self.elements,
            ));
        }
        Ok(out)
    }
}

fn parse_table(
    base: &BoundedPoset,
    cells: &IndexMap<String, String>,
    name: &str,
) -> Result<PartialTable, IoError> {
    let p = base.as_poset();
    let lookup = |s: &str| {
        p.index_of(s.trim())
            .ok_or_else(|| schema(format!("\"{name}\" mentions unknown element \"{s}\"")))
    };
    let mut t = PartialTable::new(p.len());
    for (key, value) in cells {
        // labels may themselves contain commas, so try every split point
        let mut splits = key.match_indices(',').filter_map(|(i, _)| {
            Some((
                p.index_of(key[..i].trim())?,
                p.index_of(key[i + 1..].trim())?,
            ))
        });
        let (x, y) = match (splits.next(), splits.next()) {
            (Some(xy), None) => xy,
            (Some(_), Some(_)) => {
                return Err(schema(format!("\"{name}\" key \"{key}\" is ambiguous")))
            }
            (None, _) if key.contains(',') => {
                return Err(schema(format!(
                    "\"{name}\" key \"{key}\" mentions an unknown element"
                )))
            }
            (None, _) => {
                return Err(schema(format!(
                    "\"{name}\" key \"{key}\" is not of the form \"x,y\""
                )))
            }
        };
        let v = lookup(value)?;
        if t.get(x, y).is_some() {
            return Err(schema(format!("\"{name}\" key \"{key}\" given twice")));
        }
        t.set(x, y, Some(v));
    }
    Ok(t)
}

fn emit_table(t: &PartialTable, labels: &[String]) -> IndexMap<String, String> {
    t.entries()
        .map(|(x, y, v)| (format!("{},{}", labels[x], labels[y]), labels[v].clone()))
        .collect()
}

/// A structure given inline or as a path relative to the referring file.
fn resolve_structure(value: &Value, base_dir: &Path) -> Result<StructureFile, IoError> {
    match value {
        Value::String(p) => StructureFile::load(&base_dir.join(p)),
        Value::Object(_) => StructureFile::from_value(value.clone()),
        _ => Err(schema("structure must be a path or an inline object")),
    }
}

/// Parsed form of a morphism file: endpoint structures and the element map.
#[derive(Clone, Debug)]
pub struct MorphismFile {
    pub source: StructureFile,
    pub target: StructureFile,
    pub map: IndexMap<String, String>,
}

impl MorphismFile {
    pub fn from_value(value: &Value, base_dir: &Path) -> Result<Self, IoError> {
        let obj = value
            .as_object()
            .ok_or_else(|| schema("morphism must be an object"))?;
        if let Some(k) = obj
            .keys()
            .find(|k| !["source", "target", "map"].contains(&k.as_str()))
        {
            return Err(schema(format!("unknown morphism field \"{k}\"")));
        }
        let field = |k: &str| obj.get(k).ok_or_else(|| schema(format!("missing \"{k}\"")));
        let map: IndexMap<String, String> = serde_json::from_value(field("map")?.clone())?;
        Ok(MorphismFile {
            source: resolve_structure(field("source")?, base_dir)?,
            target: resolve_structure(field("target")?, base_dir)?,
            map,
        })
    }

    pub fn load(path: &Path) -> Result<Self, IoError> {
        let dir = path.parent().unwrap_or(Path::new("."));
        Self::from_value(&read_json(path)?, dir)
    }

    /// Element indices of the map over the given carriers.
    pub fn indices<S: OrderedSet, T: OrderedSet>(
        &self,
        source: &S,
        target: &T,
    ) -> Result<Vec<usize>, IoError> {
        let mut out = vec![None; source.len()];
        for (x, y) in &self.map {
            let xi = source
                .poset()
                .index_of(x)
                .ok_or_else(|| schema(format!("map source \"{x}\" is not an element")))?;
            let yi = target
                .poset()
                .index_of(y)
                .ok_or_else(|| schema(format!("map value \"{y}\" is not an element")))?;
            out[xi] = Some(yi);
        }
        out.into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| schema(format!("map undefined at \"{}\"", source.label(i))))
            })
            .collect()
    }

    pub fn bounded(&self) -> Result<BoundedMorphism, IoError> {
        let s = Arc::new(self.source.bounded_poset()?);
        let t = Arc::new(self.target.bounded_poset()?);
        let map = self.indices(&*s, &*t)?;
        Ok(PosetMorphism::new_unchecked(s, t, map))
    }

    pub fn pdp(&self) -> Result<PdpMorphism, IoError> {
        let s = Arc::new(self.source.pdp()?);
        let t = Arc::new(self.target.pdp()?);
        let map = self.indices(&*s, &*t)?;
        Ok(PosetMorphism::new_unchecked(s, t, map))
    }

    pub fn from_bounded(h: &BoundedMorphism) -> Self {
        Self::with_endpoints(
            StructureFile::from_bounded_poset(&h.source),
            StructureFile::from_bounded_poset(&h.target),
            h,
        )
    }

    pub fn from_pdp(h: &PdpMorphism) -> Self {
        Self::with_endpoints(
            StructureFile::from_pdp(&h.source),
            StructureFile::from_pdp(&h.target),
            h,
        )
    }

    fn with_endpoints<S: OrderedSet, T: OrderedSet>(
        source: StructureFile,
        target: StructureFile,
        h: &PosetMorphism<S, T>,
    ) -> Self {
        let map = h
            .map
            .iter()
            .enumerate()
            .map(|(x, &y)| (h.source.label(x).to_string(), h.target.label(y).to_string()))
            .collect();
        MorphismFile {
            source,
            target,
            map,
        }
    }

    pub fn to_value(&self) -> Value {
        json!({
            "source": self.source.to_value(),
            "target": self.target.to_value(),
            "map": self.map,
        })
    }
}

/// Fork bundle: `{"f": m, "g": m, "q": m, "s": m, "t": m}`, each a morphism
/// file path or inline morphism object. `f` and `g` carry PDP endpoints.
#[derive(Clone, Debug)]
pub struct ForkBundle {
    pub f: MorphismFile,
    pub g: MorphismFile,
    pub q: MorphismFile,
    pub s: MorphismFile,
    pub t: MorphismFile,
}

impl ForkBundle {
    pub fn from_value(value: &Value, base_dir: &Path) -> Result<Self, IoError> {
        let obj = value
            .as_object()
            .ok_or_else(|| schema("fork bundle must be an object"))?;
        let part = |k: &str| -> Result<MorphismFile, IoError> {
            match obj.get(k) {
                Some(Value::String(p)) => MorphismFile::load(&base_dir.join(p)),
                Some(v @ Value::Object(_)) => MorphismFile::from_value(v, base_dir),
                Some(_) => Err(schema(format!("\"{k}\" must be a path or an object"))),
                None => Err(schema(format!("missing \"{k}\""))),
            }
        };
        Ok(ForkBundle {
            f: part("f")?,
            g: part("g")?,
            q: part("q")?,
            s: part("s")?,
            t: part("t")?,
        })
    }

    pub fn load(path: &Path) -> Result<Self, IoError> {
        let dir = path.parent().unwrap_or(Path::new("."));
        Self::from_value(&read_json(path)?, dir)
    }

    /// The PDP pair and the bounded-poset fork.
    pub fn resolve(&self) -> Result<(PdpMorphism, PdpMorphism, SplitFork), IoError> {
        let fork = SplitFork {
            f: self.f.bounded()?,
            g: self.g.bounded()?,
            q: self.q.bounded()?,
            s: self.s.bounded()?,
            t: self.t.bounded()?,
        };
        Ok((self.f.pdp()?, self.g.pdp()?, fork))
    }

    pub fn from_parts(f: &PdpMorphism, g: &PdpMorphism, fork: &SplitFork) -> Self {
        ForkBundle {
            f: MorphismFile::from_pdp(f),
            g: MorphismFile::from_pdp(g),
            q: MorphismFile::from_bounded(&fork.q),
            s: MorphismFile::from_bounded(&fork.s),
            t: MorphismFile::from_bounded(&fork.t),
        }
    }

    pub fn to_value(&self) -> Value {
        json!({
            "f": self.f.to_value(),
            "g": self.g.to_value(),
            "q": self.q.to_value(),
            "s": self.s.to_value(),
            "t": self.t.to_value(),
        })
    }
}

/// The catalog results file: per `(n, class)` the base, structure count and tables.
pub fn catalog_results(catalog: &Catalog) -> Value {
    let classes: Vec<Value> = catalog
        .entries
        .iter()
        .map(|e| {
            let base = StructureFile::from_bounded_poset(&e.base);
            let tables: Vec<Value> = e
                .structures
                .iter()
                .map(|s| json!(emit_table(s.table(), s.labels())))
                .collect();
            json!({
                "n": e.provenance.n,
                "class": e.provenance.class_index,
                "elements": base.elements,
                "covers": base.covers,
                "structures": e.structures.len(),
                "noncommutative": e.structures.iter().filter(|s| !is_commutative(s)).count(),
                "plus_tables": tables,
            })
        })
        .collect();
    let mut counts = IndexMap::new();
    for n in 1..=catalog.max_n {
        let entries: Vec<_> = catalog.entries_of_size(n).collect();
        counts.insert(
            n.to_string(),
            json!({
                "classes": entries.len(),
                "structures": entries.iter().map(|e| e.structures.len()).sum::<usize>(),
            }),
        );
    }
    let smallest = catalog
        .entries
        .iter()
        .find(|e| e.structures.iter().any(|s| !is_commutative(s)))
        .map(|e| e.provenance.n);
    json!({
        "max_n": catalog.max_n,
        "counts": counts,
        "smallest_noncommutative": smallest,
        "classes": classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const C3: &str = r#"{
        "elements": ["0", "a", "1"],
        "covers": [["0", "a"], ["a", "1"]],
        "plus": {"0,0": "0", "0,a": "a", "0,1": "1", "a,0": "a", "1,0": "1", "a,a": "1"}
    }"#;

    #[test]
    fn pea_file_roundtrip() {
        let file = StructureFile::parse(C3).unwrap();
        let (alg, order) = file.pea().unwrap();
        assert_eq!(alg.add(1, 1), Some(2));
        let emitted = StructureFile::from_pea(&alg, &order);
        assert_eq!(emitted.normalized().unwrap(), emitted);
        assert_eq!(file.normalized().unwrap(), emitted);
        let text = emitted.to_json_string();
        assert_eq!(StructureFile::parse(&text).unwrap(), emitted);
    }

    #[test]
    fn malformed_files() {
        assert!(matches!(StructureFile::parse("{"), Err(IoError::Json(_))));
        let unknown = r#"{"elements":["0","1"],"covers":[["0","x"]]}"#;
        assert!(matches!(
            StructureFile::parse(unknown).unwrap().bounded_poset(),
            Err(IoError::Order(_))
        ));
        let bad_key = r#"{"elements":["0","1"],"covers":[["0","1"]],"plus":{"01":"1"}}"#;
        assert!(matches!(
            StructureFile::parse(bad_key).unwrap().pea(),
            Err(IoError::Schema(_))
        ));
        let extra = r#"{"elements":["0"],"covers":[],"bogus":1}"#;
        assert!(StructureFile::parse(extra).is_err());
    }

    #[test]
    fn morphism_inline_and_by_path() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("c3.json"), C3).unwrap();
        let m = json!({
            "source": "c3.json",
            "target": {"elements": ["0", "1"], "covers": [["0", "1"]]},
            "map": {"0": "0", "a": "1", "1": "1"}
        });
        fs::write(dir.path().join("m.json"), m.to_string()).unwrap();
        let file = MorphismFile::load(&dir.path().join("m.json")).unwrap();
        let h = file.bounded().unwrap();
        assert_eq!(h.map, vec![0, 1, 1]);
        assert!(h.is_valid());
        let back = MorphismFile::from_bounded(&h);
        assert_eq!(back.bounded().unwrap().map, h.map);
    }
}
