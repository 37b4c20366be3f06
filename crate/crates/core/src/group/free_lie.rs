//! Truncated free graded Lie algebras in the Lyndon basis.

use std::collections::{BTreeMap, HashMap};

use super::presentation::{FreeStructure, Generator, GroupPresentation};
use crate::error::{Error, Result};
use crate::linalg::Rat;

/// A free generator: its name and its torus degree.
#[derive(Clone, Debug)]
pub struct Letter {
    pub name: String,
    pub degree: Vec<i64>,
}

impl Letter {
    pub fn new(name: impl Into<String>, degree: Vec<i64>) -> Letter {
        Letter { name: name.into(), degree }
    }
}

fn is_lyndon(w: &[u8]) -> bool {
    (1..w.len()).all(|i| w < &w[i..])
}

/// Longest proper Lyndon suffix gives the standard factorisation.
fn standard_factorisation(w: &[u8]) -> (usize, usize) {
    let split = (1..w.len()).find(|&i| is_lyndon(&w[i..])).expect("Lyndon word of length >= 2");
    (split, w.len())
}

struct Builder {
    words: Vec<Vec<u8>>,
    weight: Vec<i64>,
    factors: Vec<Option<(usize, usize)>>,
    index: HashMap<Vec<u8>, usize>,
    bound: i64,
    memo: HashMap<(u32, u32), Vec<(u32, i64)>>,
}

impl Builder {
    /// `[P_a, P_b]` in the Lyndon basis, truncated below `bound`.
    fn bracket(&mut self, a: usize, b: usize) -> Vec<(u32, i64)> {
        if a == b || self.weight[a] + self.weight[b] < self.bound {
            return Vec::new();
        }
        if self.words[a] > self.words[b] {
            return self.bracket(b, a).into_iter().map(|(k, c)| (k, -c)).collect();
        }
        if let Some(v) = self.memo.get(&(a as u32, b as u32)) {
            return v.clone();
        }
        let out = match self.factors[a] {
            Some((_, a2)) if self.words[a2] < self.words[b] => {
                let (a1, a2) = self.factors[a].unwrap();
                let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
                // [[a1,a2],b] = [a1,[a2,b]] + [[a1,b],a2]
                for (x, c) in self.bracket(a2, b) {
                    for (y, d) in self.bracket(a1, x as usize) {
                        *acc.entry(y).or_insert(0) += c * d;
                    }
                }
                for (x, c) in self.bracket(a1, b) {
                    for (y, d) in self.bracket(x as usize, a2) {
                        *acc.entry(y).or_insert(0) += c * d;
                    }
                }
                acc.into_iter().filter(|(_, c)| *c != 0).collect()
            }
            _ => {
                let mut w = self.words[a].clone();
                w.extend_from_slice(&self.words[b]);
                vec![(self.index[&w] as u32, 1)]
            }
        };
        self.memo.insert((a as u32, b as u32), out.clone());
        out
    }
}

/// Truncated free Lie algebra on `letters`, keeping basis elements of weight
/// at least `weight_bound`. The basis is the Lyndon basis ordered by weight
/// (closest to zero first) and then lexicographically, letters ordered as given.
pub fn free_graded_lie(weight: &[i64], letters: &[Letter], weight_bound: i64) -> Result<GroupPresentation> {
    let r = weight.len();
    if letters.len() > 255 {
        return Err(Error::Presentation("too many letters".into()));
    }
    let lw: Vec<i64> = letters
        .iter()
        .map(|l| {
            if l.degree.len() != r {
                return Err(Error::Presentation(format!("letter {} has degree of wrong length", l.name)));
            }
            let w: i64 = weight.iter().zip(&l.degree).map(|(a, b)| a * b).sum();
            if w >= 0 {
                return Err(Error::Presentation(format!("letter {} has non-negative weight", l.name)));
            }
            Ok(w)
        })
        .collect::<Result<_>>()?;

    let mut found: Vec<(i64, Vec<u8>)> = Vec::new();
    let mut stack: Vec<(Vec<u8>, i64)> = vec![(Vec::new(), 0)];
    while let Some((w, wt)) = stack.pop() {
        if !w.is_empty() && is_lyndon(&w) {
            found.push((wt, w.clone()));
        }
        for (c, &x) in lw.iter().enumerate() {
            if wt + x >= weight_bound {
                let mut nw = w.clone();
                nw.push(c as u8);
                stack.push((nw, wt + x));
            }
        }
    }
    found.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));

    let n = found.len();
    let words: Vec<Vec<u8>> = found.iter().map(|f| f.1.clone()).collect();
    let wts: Vec<i64> = found.iter().map(|f| f.0).collect();
    let index: HashMap<Vec<u8>, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let factors: Vec<Option<(usize, usize)>> = words
        .iter()
        .map(|w| {
            if w.len() == 1 {
                None
            } else {
                let (s, _) = standard_factorisation(w);
                Some((index[&w[..s]], index[&w[s..]]))
            }
        })
        .collect();

    let mut names: Vec<String> = vec![String::new(); n];
    let mut degrees: Vec<Vec<i64>> = vec![Vec::new(); n];
    let mut by_len: Vec<usize> = (0..n).collect();
    by_len.sort_by_key(|&i| words[i].len());
    for &i in &by_len {
        match factors[i] {
            None => {
                let l = &letters[words[i][0] as usize];
                names[i] = l.name.clone();
                degrees[i] = l.degree.clone();
            }
            Some((a, b)) => {
                names[i] = format!("[{},{}]", names[a], names[b]);
                degrees[i] = degrees[a].iter().zip(&degrees[b]).map(|(x, y)| x + y).collect();
            }
        }
    }

    let mut b = Builder { words, weight: wts.clone(), factors: factors.clone(), index, bound: weight_bound, memo: HashMap::new() };
    let mut brackets: crate::group::BracketTable = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            if wts[i] + wts[j] < weight_bound {
                // Basis sorted by decreasing weight, so no later j qualifies.
                break;
            }
            let v = b.bracket(i, j);
            if !v.is_empty() {
                brackets.insert((i, j), v.into_iter().map(|(k, c)| (k as usize, Rat::from_int(c))).collect());
            }
        }
    }
    let gens = names.into_iter().zip(degrees).map(|(name, degree)| Generator { name, degree }).collect();
    GroupPresentation::new_trusted(
        r,
        weight.to_vec(),
        gens,
        brackets,
        Some(FreeStructure { weight_bound, factors }),
    )
}

/// Dimension of the degree-`d` part of the free Lie algebra on `g` letters of degree one.
pub fn necklace_count(g: u64, d: u64) -> u64 {
    let mut total: i128 = 0;
    for e in 1..=d {
        if d.is_multiple_of(e) {
            total += mobius(e) as i128 * (g as i128).pow((d / e) as u32);
        }
    }
    (total / d as i128) as u64
}

fn mobius(mut n: u64) -> i64 {
    let mut res = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            res = -res;
        }
        p += 1;
    }
    if n > 1 {
        res = -res;
    }
    res
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::presentation::validate_presentation;

    #[test]
    fn two_letters_weight_two() {
        let p = free_graded_lie(&[-1], &[Letter::new("x", vec![1]), Letter::new("y", vec![1])], -2).unwrap();
        let names: Vec<&str> = (0..p.n_generators()).map(|i| p.name(i)).collect();
        assert_eq!(names, vec!["x", "y", "[x,y]"]);
        assert_eq!(p.bracket(0, 1), vec![(2, Rat::one())]);
        assert_eq!(p.bracket(1, 0), vec![(2, -Rat::one())]);
    }

    #[test]
    fn necklace_dimensions() {
        let p = free_graded_lie(&[-1], &[Letter::new("x", vec![1]), Letter::new("y", vec![1])], -6).unwrap();
        for d in 1..=6 {
            let count = (0..p.n_generators()).filter(|&i| p.degree(i) == [d]).count() as u64;
            assert_eq!(count, necklace_count(2, d as u64), "degree {d}");
        }
        validate_presentation(&p).unwrap();
    }

    #[test]
    fn weighted_letters_satisfy_jacobi() {
        let p = free_graded_lie(
            &[-2],
            &[Letter::new("a", vec![1]), Letter::new("b", vec![1]), Letter::new("s", vec![3])],
            -12,
        )
        .unwrap();
        validate_presentation(&p).unwrap();
    }
}
