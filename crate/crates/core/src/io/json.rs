use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{validate_presentation, FreeStructure, Generator, GroupPresentation};
use crate::linalg::{Mat, Rat, Subspace};
use crate::rep::{BasisVector, RepObject};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorJson {
    pub name: String,
    pub degree: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketJson {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<usize, Rat>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeJson {
    pub weight_bound: i64,
    pub factors: Vec<Option<(usize, usize)>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationJson {
    pub torus_rank: usize,
    pub weight: Vec<i64>,
    pub generators: Vec<GeneratorJson>,
    #[serde(default)]
    pub brackets: Vec<BracketJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free: Option<FreeJson>,
}

impl PresentationJson {
    pub fn from_presentation(p: &GroupPresentation) -> PresentationJson {
        let brackets = p
            .brackets()
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(&(i, j), v)| BracketJson { i, j, coeffs: v.iter().map(|(k, c)| (*k, c.clone())).collect() })
            .collect();
        PresentationJson {
            torus_rank: p.torus_rank(),
            weight: p.weight().to_vec(),
            generators: p.generators().iter().map(|g| GeneratorJson { name: g.name.clone(), degree: g.degree.clone() }).collect(),
            brackets,
            free: p.free_structure().map(|f| FreeJson { weight_bound: f.weight_bound, factors: f.factors.clone() }),
        }
    }

    /// Builds the presentation and runs the full validator, Jacobi included.
    pub fn build(&self) -> Result<GroupPresentation> {
        let gens: Vec<Generator> = self.generators.iter().map(|g| Generator { name: g.name.clone(), degree: g.degree.clone() }).collect();
        let mut table: crate::group::BracketTable = BTreeMap::new();
        for b in &self.brackets {
            if b.i >= b.j {
                return Err(Error::Presentation(format!("bracket entry ({}, {}) must have i < j", b.i, b.j)));
            }
            if table.contains_key(&(b.i, b.j)) {
                return Err(Error::Presentation(format!("bracket ({}, {}) listed twice", b.i, b.j)));
            }
            let coeffs: Vec<(usize, Rat)> = b.coeffs.iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (*k, c.clone())).collect();
            table.insert((b.i, b.j), coeffs);
        }
        let free = self.free.as_ref().map(|f| FreeStructure { weight_bound: f.weight_bound, factors: f.factors.clone() });
        if let Some(f) = &free {
            if f.factors.len() != gens.len() {
                return Err(Error::Presentation("free factorisation length differs from the generator count".into()));
            }
        }
        let p = GroupPresentation::new_trusted(self.torus_rank, self.weight.clone(), gens, table, free)?;
        validate_presentation(&p)?;
        Ok(p)
    }
}

/// Sparse `(row, col, value)` triples, sorted, zeros dropped.
pub fn sparse_triples(m: &Mat) -> Vec<(usize, usize, Rat)> {
    m.nonzeros().map(|(i, j, v)| (i, j, v.clone())).collect()
}

pub fn from_triples(rows: usize, cols: usize, t: &[(usize, usize, Rat)], what: &str) -> Result<Mat> {
    let mut m = Mat::zeros(rows, cols);
    for (i, j, v) in t {
        if *i >= rows || *j >= cols {
            return Err(Error::Input(format!("{what}: entry ({i}, {j}) lies outside a {rows} x {cols} matrix")));
        }
        if !m.get(*i, *j).is_zero() {
            return Err(Error::Input(format!("{what}: entry ({i}, {j}) given twice")));
        }
        m.set(*i, *j, v.clone());
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisJson {
    pub label: String,
    pub character: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectJson {
    pub basis: Vec<BasisJson>,
    #[serde(default)]
    pub actions: BTreeMap<String, Vec<(usize, usize, Rat)>>,
}

fn generator_index(p: &GroupPresentation, name: &str, ctx: &str) -> Result<usize> {
    p.index_of(name).ok_or_else(|| Error::Input(format!("{ctx}: unknown generator {name:?}")))
}

impl ObjectJson {
    pub fn from_object(m: &RepObject) -> ObjectJson {
        let p = m.presentation();
        ObjectJson {
            basis: m.basis().iter().map(|b| BasisJson { label: b.label.clone(), character: b.character.clone() }).collect(),
            actions: m.actions().iter().filter(|(_, a)| !a.is_zero()).map(|(&g, a)| (p.name(g).to_string(), sparse_triples(a))).collect(),
        }
    }

    /// Builds and validates; `name` appears in every error.
    pub fn build(&self, p: &Arc<GroupPresentation>, name: &str) -> Result<RepObject> {
        let n = self.basis.len();
        let basis: Vec<BasisVector> = self.basis.iter().map(|b| BasisVector::new(b.label.clone(), b.character.clone())).collect();
        let mut actions = BTreeMap::new();
        for (g, t) in &self.actions {
            let i = generator_index(p, g, &format!("object {name:?}"))?;
            let m = from_triples(n, n, t, &format!("object {name:?}, action of {g}"))?;
            if !m.is_zero() {
                actions.insert(i, m);
            }
        }
        RepObject::new(p.clone(), basis, actions).map_err(|e| Error::Representation(format!("object {name:?}: {e}")))
    }
}

/// An extension class of `1` by the named target object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtJson {
    pub target: String,
    pub cocycle: BTreeMap<String, Vec<Rat>>,
}

/// An element of `Ext^1(from, to)` given by one block `to x from` per generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetweenJson {
    pub from: String,
    pub to: String,
    pub blocks: BTreeMap<String, Vec<(usize, usize, Rat)>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairJson {
    pub l: BetweenJson,
    pub n: BetweenJson,
}

impl BetweenJson {
    pub fn blocks(&self, p: &GroupPresentation, from: &RepObject, to: &RepObject, ctx: &str) -> Result<BTreeMap<usize, Mat>> {
        let mut out = BTreeMap::new();
        for (g, t) in &self.blocks {
            let i = generator_index(p, g, ctx)?;
            let m = from_triples(to.dim(), from.dim(), t, &format!("{ctx}, block of {g}"))?;
            if !m.is_zero() {
                out.insert(i, m);
            }
        }
        Ok(out)
    }

    pub fn from_blocks(from: &str, to: &str, p: &GroupPresentation, blocks: &BTreeMap<usize, Mat>) -> BetweenJson {
        BetweenJson {
            from: from.into(),
            to: to.into(),
            blocks: blocks.iter().filter(|(_, m)| !m.is_zero()).map(|(&g, m)| (p.name(g).to_string(), sparse_triples(m))).collect(),
        }
    }
}

/// A subspace of `End(ωM)` as a list of sparse `n x n` matrices.
pub fn subspace_json(dim_m: usize, s: &Subspace) -> Vec<Vec<(usize, usize, Rat)>> {
    s.basis().iter().map(|v| sparse_triples(&Mat::from_flat(dim_m, dim_m, v.clone()))).collect()
}
