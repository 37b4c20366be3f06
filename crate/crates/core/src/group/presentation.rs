use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: Vec<i64>,
}

/// Extra data carried by a truncated free Lie algebra: which basis elements
/// are free letters and how every other element factors as a bracket.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeStructure {
    pub weight_bound: i64,
    /// `None` for a letter, `Some((l, r))` when `e_k = [e_l, e_r]`.
    pub factors: Vec<Option<(usize, usize)>>,
}

impl FreeStructure {
    pub fn letters(&self) -> Vec<usize> {
        (0..self.factors.len()).filter(|&k| self.factors[k].is_none()).collect()
    }
}

/// `Lie(U)` with a graded basis, together with the torus weight functional.
#[derive(Debug)]
pub struct GroupPresentation {
    torus_rank: usize,
    weight: Vec<i64>,
    generators: Vec<Generator>,
    brackets: BracketTable,
    free: Option<FreeStructure>,
    by_degree: HashMap<Vec<i64>, Vec<usize>>,
    by_name: HashMap<String, usize>,
    producers: OnceLock<Vec<Vec<(usize, usize)>>>,
}

impl Clone for GroupPresentation {
    fn clone(&self) -> Self {
        GroupPresentation::assemble(
            self.torus_rank,
            self.weight.clone(),
            self.generators.clone(),
            self.brackets.clone(),
            self.free.clone(),
        )
    }
}

impl PartialEq for GroupPresentation {
    fn eq(&self, o: &Self) -> bool {
        self.torus_rank == o.torus_rank
            && self.weight == o.weight
            && self.generators == o.generators
            && self.brackets == o.brackets
    }
}

impl GroupPresentation {
    /// Builds and validates a presentation.
    pub fn new(
        torus_rank: usize,
        weight: Vec<i64>,
        generators: Vec<Generator>,
        brackets: BracketTable,
    ) -> Result<GroupPresentation> {
        let p = GroupPresentation::assemble(torus_rank, weight, generators, brackets, None);
        validate_presentation(&p)?;
        Ok(p)
    }

    /// Builds without running the Jacobi check; the shape checks still run.
    pub fn new_trusted(
        torus_rank: usize,
        weight: Vec<i64>,
        generators: Vec<Generator>,
        brackets: BracketTable,
        free: Option<FreeStructure>,
    ) -> Result<GroupPresentation> {
        let p = GroupPresentation::assemble(torus_rank, weight, generators, brackets, free);
        p.check_shape()?;
        Ok(p)
    }

    fn assemble(
        torus_rank: usize,
        weight: Vec<i64>,
        generators: Vec<Generator>,
        brackets: BracketTable,
        free: Option<FreeStructure>,
    ) -> GroupPresentation {
        let mut by_degree: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        let mut by_name = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            by_degree.entry(g.degree.clone()).or_default().push(i);
            by_name.insert(g.name.clone(), i);
        }
        GroupPresentation {
            torus_rank,
            weight,
            generators,
            brackets,
            free,
            by_degree,
            by_name,
            producers: OnceLock::new(),
        }
    }

    /// A presentation with no unipotent part.
    pub fn torus_only(weight: Vec<i64>) -> GroupPresentation {
        GroupPresentation::assemble(weight.len(), weight, Vec::new(), BTreeMap::new(), None)
    }

    /// Abelian `n` with the given generator degrees.
    pub fn abelian(weight: Vec<i64>, degrees: &[Vec<i64>]) -> Result<GroupPresentation> {
        let gens = degrees
            .iter()
            .enumerate()
            .map(|(i, d)| Generator { name: format!("x{i}"), degree: d.clone() })
            .collect();
        GroupPresentation::new(weight.len(), weight, gens, BTreeMap::new())
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    pub fn weight(&self) -> &[i64] {
        &self.weight
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn n_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn degree(&self, i: usize) -> &[i64] {
        &self.generators[i].degree
    }

    pub fn name(&self, i: usize) -> &str {
        &self.generators[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn free_structure(&self) -> Option<&FreeStructure> {
        self.free.as_ref()
    }

    pub fn brackets(&self) -> &BracketTable {
        &self.brackets
    }

    /// `w . chi`.
    pub fn weight_of(&self, chi: &[i64]) -> i64 {
        self.weight.iter().zip(chi).map(|(a, b)| a * b).sum()
    }

    pub fn generator_weight(&self, i: usize) -> i64 {
        self.weight_of(self.degree(i))
    }

    pub fn generators_of_degree(&self, d: &[i64]) -> &[usize] {
        self.by_degree.get(d).map_or(&[], |v| v.as_slice())
    }

    pub fn degrees(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.by_degree.keys()
    }

    /// Structure constants of `[b_i, b_j]`, antisymmetry applied.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<(usize, Rat)> {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => Vec::new(),
            Less => self.brackets.get(&(i, j)).cloned().unwrap_or_default(),
            Greater => self
                .brackets
                .get(&(j, i))
                .map(|v| v.iter().map(|(k, c)| (*k, -c)).collect())
                .unwrap_or_default(),
        }
    }

    pub fn bracket_ref(&self, i: usize, j: usize) -> Option<&[(usize, Rat)]> {
        self.brackets.get(&(i, j)).map(|v| v.as_slice())
    }

    /// For each basis element `k`, the pairs `i < j` with `c_ij^k != 0`.
    pub fn producers(&self) -> &[Vec<(usize, usize)>] {
        self.producers.get_or_init(|| {
            let mut out = vec![Vec::new(); self.generators.len()];
            for ((i, j), terms) in &self.brackets {
                for (k, _) in terms {
                    out[*k].push((*i, *j));
                }
            }
            out
        })
    }

    fn check_shape(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Presentation(m));
        if self.weight.len() != self.torus_rank {
            return bad(format!("weight has length {} for torus rank {}", self.weight.len(), self.torus_rank));
        }
        let mut names = HashSet::new();
        for g in &self.generators {
            if g.degree.len() != self.torus_rank {
                return bad(format!("generator {} has degree of wrong length", g.name));
            }
            if self.weight_of(&g.degree) >= 0 {
                return bad(format!("generator {} has non-negative weight", g.name));
            }
            if !names.insert(g.name.clone()) {
                return bad(format!("duplicate generator name {}", g.name));
            }
        }
        let n = self.generators.len();
        for ((i, j), terms) in &self.brackets {
            if i >= j || *j >= n {
                return bad(format!("bracket key ({i},{j}) must satisfy i < j < {n}"));
            }
            let target: Vec<i64> = self.degree(*i).iter().zip(self.degree(*j)).map(|(a, b)| a + b).collect();
            for (k, c) in terms {
                if *k >= n {
                    return bad(format!("bracket ({i},{j}) refers to generator {k}"));
                }
                if c.is_zero() {
                    return bad(format!("bracket ({i},{j}) stores a zero coefficient"));
                }
                if self.degree(*k) != target.as_slice() {
                    return bad(format!(
                        "bracket ({},{}) is not graded: {} has the wrong degree",
                        self.name(*i),
                        self.name(*j),
                        self.name(*k)
                    ));
                }
            }
        }
        if let Some(f) = &self.free {
            if f.factors.len() != n {
                return bad("free structure has the wrong length".into());
            }
            for (k, fac) in f.factors.iter().enumerate() {
                if let Some((l, r)) = fac {
                    let b = self.bracket(*l, *r);
                    if b.len() != 1 || b[0].0 != k || !b[0].1.is_one() {
                        return bad(format!("factorisation of {} is not a single bracket", self.name(k)));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Checks shape, grading and the Jacobi identity. Nilpotency follows from the
/// grading since every bracket strictly lowers the weight.
pub fn validate_presentation(p: &GroupPresentation) -> Result<()> {
    p.check_shape()?;
    let degrees: HashSet<&Vec<i64>> = p.by_degree.keys().collect();
    let add = |a: &[i64], b: &[i64]| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
    let mut seen: HashSet<(usize, usize, usize)> = HashSet::new();
    for (i, j) in p.brackets.keys() {
        let s = add(p.degree(*i), p.degree(*j));
        for d in &degrees {
            let need: Vec<i64> = d.iter().zip(&s).map(|(a, b)| a - b).collect();
            for &k in p.generators_of_degree(&need) {
                if k == *i || k == *j {
                    continue;
                }
                let mut t = [*i, *j, k];
                t.sort_unstable();
                if !seen.insert((t[0], t[1], t[2])) {
                    continue;
                }
                let jac = jacobiator(p, t[0], t[1], t[2]);
                if let Some((m, c)) = jac.iter().find(|(_, c)| !c.is_zero()) {
                    return Err(Error::Presentation(format!(
                        "Jacobi identity fails on ({}, {}, {}): coefficient {} on {}",
                        p.name(t[0]),
                        p.name(t[1]),
                        p.name(t[2]),
                        c,
                        p.name(*m)
                    )));
                }
            }
        }
    }
    Ok(())
}

fn bracket_combo(p: &GroupPresentation, x: &[(usize, Rat)], k: usize) -> BTreeMap<usize, Rat> {
    let mut out: BTreeMap<usize, Rat> = BTreeMap::new();
    for (l, c) in x {
        for (m, d) in p.bracket(*l, k) {
            let e = out.entry(m).or_insert_with(Rat::zero);
            *e = &*e + &(c * &d);
        }
    }
    out
}

fn jacobiator(p: &GroupPresentation, i: usize, j: usize, k: usize) -> BTreeMap<usize, Rat> {
    let mut total: BTreeMap<usize, Rat> = BTreeMap::new();
    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
        for (m, v) in bracket_combo(p, &p.bracket(a, b), c) {
            let e = total.entry(m).or_insert_with(Rat::zero);
            *e = &*e + &v;
        }
    }
    total
}

/// Integer coefficients `(generator, value)` for literal tables.
pub type IntTerms<'a> = &'a [(usize, i64)];

/// Structure constants: `[g_i, g_j]` as a sparse combination of generators.
pub type BracketTable = BTreeMap<(usize, usize), Vec<(usize, Rat)>>;

/// Helper for building bracket tables from integer literals.
pub fn bracket_table(entries: &[((usize, usize), IntTerms<'_>)]) -> BracketTable {
    entries
        .iter()
        .map(|((i, j), t)| ((*i, *j), t.iter().map(|(k, c)| (*k, Rat::from_int(*c))).collect()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(ds: &[(&str, i64)]) -> Vec<Generator> {
        ds.iter().map(|(n, d)| Generator { name: n.to_string(), degree: vec![*d] }).collect()
    }

    #[test]
    fn heisenberg_is_valid() {
        let p = GroupPresentation::new(
            1,
            vec![-1],
            gens(&[("x", 1), ("y", 1), ("z", 2)]),
            bracket_table(&[((0, 1), &[(2, 1)])]),
        );
        assert!(p.is_ok());
    }

    #[test]
    fn ungraded_bracket_rejected() {
        let p = GroupPresentation::new(
            1,
            vec![-1],
            gens(&[("x", 1), ("y", 1), ("z", 3)]),
            bracket_table(&[((0, 1), &[(2, 1)])]),
        );
        assert!(matches!(p, Err(Error::Presentation(_))));
    }

    #[test]
    fn jacobi_violation_rejected() {
        // Degrees 1,1,1 with [x,y]=u, [y,z]=v, [x,v]=t, [u,z]=t breaks Jacobi.
        let p = GroupPresentation::new(
            1,
            vec![-1],
            gens(&[("x", 1), ("y", 1), ("z", 1), ("u", 2), ("v", 2), ("t", 3)]),
            bracket_table(&[((0, 1), &[(3, 1)]), ((1, 2), &[(4, 1)]), ((0, 4), &[(5, 1)]), ((2, 3), &[(5, 1)])]),
        );
        assert!(matches!(p, Err(Error::Presentation(m)) if m.contains("Jacobi")));
    }

    #[test]
    fn nonnegative_weight_rejected() {
        let p = GroupPresentation::new(1, vec![-1], gens(&[("x", 0)]), BTreeMap::new());
        assert!(p.is_err());
    }
}
