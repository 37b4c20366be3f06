use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::json::{ExtJson, ObjectJson, PairJson, PresentationJson};
use crate::error::{Error, Result};
use crate::ext::{ExtBetween, ExtClass};
use crate::group::GroupPresentation;
use crate::panachage::CompatiblePair;
use crate::rep::RepObject;

pub const FORMAT_VERSION: u32 = 1;

/// Environment variable naming the default workspace file.
pub const WORKSPACE_ENV: &str = "PANACHE_WORKSPACE";
pub const DEFAULT_WORKSPACE: &str = "panache.json";

/// On-disk layout of a workspace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceFile {
    pub format_version: u32,
    pub presentation: PresentationJson,
    #[serde(default)]
    pub objects: BTreeMap<String, ObjectJson>,
    #[serde(default)]
    pub ext_classes: BTreeMap<String, ExtJson>,
    #[serde(default)]
    pub pairs: BTreeMap<String, PairJson>,
    #[serde(default)]
    pub reports: Vec<Value>,
}

#[derive(Clone, Debug)]
pub struct NamedExt {
    pub spec: ExtJson,
    pub class: ExtClass,
}

#[derive(Clone, Debug)]
pub struct NamedPair {
    pub spec: PairJson,
    pub pair: CompatiblePair,
}

/// A validated workspace: one presentation, named objects, classes and pairs
/// over it, and an append-only list of reports.
#[derive(Clone, Debug)]
pub struct WorkspaceDoc {
    pub presentation: Arc<GroupPresentation>,
    pub objects: BTreeMap<String, RepObject>,
    pub ext_classes: BTreeMap<String, NamedExt>,
    pub pairs: BTreeMap<String, NamedPair>,
    pub reports: Vec<Value>,
}

impl WorkspaceDoc {
    pub fn new(presentation: Arc<GroupPresentation>) -> WorkspaceDoc {
        WorkspaceDoc { presentation, objects: BTreeMap::new(), ext_classes: BTreeMap::new(), pairs: BTreeMap::new(), reports: Vec::new() }
    }

    fn check_fresh(&self, name: &str) -> Result<()> {
        if self.objects.contains_key(name) || self.ext_classes.contains_key(name) || self.pairs.contains_key(name) {
            return Err(Error::Input(format!("name {name:?} is already used in the workspace")));
        }
        Ok(())
    }

    pub fn insert_object(&mut self, name: &str, m: RepObject) -> Result<()> {
        self.check_fresh(name)?;
        if m.presentation() != &*self.presentation {
            return Err(Error::Input(format!("object {name:?} is over a different presentation")));
        }
        let m = RepObject::new(self.presentation.clone(), m.basis().to_vec(), m.actions().clone())
            .map_err(|e| Error::Representation(format!("object {name:?}: {e}")))?;
        self.objects.insert(name.to_string(), m);
        Ok(())
    }

    pub fn insert_ext(&mut self, name: &str, spec: ExtJson) -> Result<()> {
        self.check_fresh(name)?;
        let class = self.build_ext(name, &spec)?;
        let p = &self.presentation;
        let spec = ExtJson { target: spec.target, cocycle: class.cocycle.iter().map(|(&g, v)| (p.name(g).to_string(), v.clone())).collect() };
        self.ext_classes.insert(name.to_string(), NamedExt { spec, class });
        Ok(())
    }

    pub fn insert_pair(&mut self, name: &str, spec: PairJson) -> Result<()> {
        self.check_fresh(name)?;
        let pair = self.build_pair(name, &spec)?;
        let canon = |b: &ExtBetween, old: &super::json::BetweenJson| {
            let blocks = b.class.cocycle.keys().map(|&g| (g, b.block(g))).collect();
            super::json::BetweenJson::from_blocks(&old.from, &old.to, &self.presentation, &blocks)
        };
        let spec = PairJson { l: canon(&pair.l, &spec.l), n: canon(&pair.n, &spec.n) };
        self.pairs.insert(name.to_string(), NamedPair { spec, pair });
        Ok(())
    }

    pub fn object(&self, name: &str) -> Result<&RepObject> {
        self.objects.get(name).ok_or_else(|| Error::Input(format!("no object named {name:?}")))
    }

    pub fn ext_class(&self, name: &str) -> Result<&ExtClass> {
        self.ext_classes.get(name).map(|e| &e.class).ok_or_else(|| Error::Input(format!("no extension class named {name:?}")))
    }

    pub fn pair(&self, name: &str) -> Result<&CompatiblePair> {
        self.pairs.get(name).map(|p| &p.pair).ok_or_else(|| Error::Input(format!("no pair named {name:?}")))
    }

    fn build_ext(&self, name: &str, spec: &ExtJson) -> Result<ExtClass> {
        let x = self.objects.get(&spec.target).ok_or_else(|| Error::Input(format!("extension class {name:?}: unknown target {:?}", spec.target)))?;
        let mut cocycle = BTreeMap::new();
        for (g, v) in &spec.cocycle {
            let i = self.presentation.index_of(g).ok_or_else(|| Error::Input(format!("extension class {name:?}: unknown generator {g:?}")))?;
            cocycle.insert(i, v.clone());
        }
        ExtClass::new(x.clone(), cocycle).map_err(|e| Error::Cocycle(format!("extension class {name:?}: {e}")))
    }

    fn build_pair(&self, name: &str, spec: &PairJson) -> Result<CompatiblePair> {
        let side = |b: &super::json::BetweenJson, which: &str| -> Result<ExtBetween> {
            let ctx = format!("pair {name:?}, {which}");
            let from = self.objects.get(&b.from).ok_or_else(|| Error::Input(format!("{ctx}: unknown object {:?}", b.from)))?;
            let to = self.objects.get(&b.to).ok_or_else(|| Error::Input(format!("{ctx}: unknown object {:?}", b.to)))?;
            let blocks = b.blocks(&self.presentation, from, to, &ctx)?;
            ExtBetween::new(from, to, blocks).map_err(|e| Error::Cocycle(format!("{ctx}: {e}")))
        };
        CompatiblePair::new(side(&spec.l, "L")?, side(&spec.n, "N")?).map_err(|e| Error::Input(format!("pair {name:?}: {e}")))
    }

    pub fn to_file(&self) -> WorkspaceFile {
        WorkspaceFile {
            format_version: FORMAT_VERSION,
            presentation: PresentationJson::from_presentation(&self.presentation),
            objects: self.objects.iter().map(|(k, m)| (k.clone(), ObjectJson::from_object(m))).collect(),
            ext_classes: self.ext_classes.iter().map(|(k, e)| (k.clone(), e.spec.clone())).collect(),
            pairs: self.pairs.iter().map(|(k, p)| (k.clone(), p.spec.clone())).collect(),
            reports: self.reports.clone(),
        }
    }

    /// Validates every invariant; errors name the offending entry.
    pub fn from_file(f: &WorkspaceFile) -> Result<WorkspaceDoc> {
        if f.format_version != FORMAT_VERSION {
            return Err(Error::Input(format!("unsupported format_version {} (expected {FORMAT_VERSION})", f.format_version)));
        }
        let p = Arc::new(f.presentation.build()?);
        let mut doc = WorkspaceDoc::new(p.clone());
        for (name, o) in &f.objects {
            doc.check_fresh(name)?;
            doc.objects.insert(name.clone(), o.build(&p, name)?);
        }
        for (name, e) in &f.ext_classes {
            doc.insert_ext(name, e.clone())?;
        }
        for (name, q) in &f.pairs {
            doc.insert_pair(name, q.clone())?;
        }
        doc.reports = f.reports.clone();
        Ok(doc)
    }

    /// Canonical text: sorted keys, sparse entries sorted, rationals reduced,
    /// two-space indentation, trailing newline.
    pub fn to_canonical_string(&self) -> String {
        canonical_string(&self.to_file())
    }
}

pub fn canonical_string(f: &WorkspaceFile) -> String {
    let v = serde_json::to_value(f).expect("workspace serializes");
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

/// Parses workspace text; parse errors carry the JSON path of the failing field.
pub fn parse_workspace(text: &str) -> Result<WorkspaceDoc> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: WorkspaceFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Input(format!("parse error at {path} (line {}, column {}): {inner}", inner.line(), inner.column()))
    })?;
    WorkspaceDoc::from_file(&file)
}

pub fn load_workspace(path: &Path) -> Result<WorkspaceDoc> {
    let text = std::fs::read_to_string(path)?;
    parse_workspace(&text)
}

/// Writes the canonical form through a temporary file and a rename.
pub fn save_workspace(doc: &WorkspaceDoc, path: &Path) -> Result<()> {
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, doc.to_canonical_string())?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Rewrites workspace text in canonical form.
pub fn canonicalize(text: &str) -> Result<String> {
    Ok(parse_workspace(text)?.to_canonical_string())
}

/// The explicit path if given, else `$PANACHE_WORKSPACE`, else `panache.json`.
pub fn workspace_path(explicit: Option<&Path>) -> PathBuf {
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    match std::env::var_os(WORKSPACE_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from(DEFAULT_WORKSPACE),
    }
}
