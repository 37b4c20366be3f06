use std::collections::BTreeMap;
use std::ops::Range;
use std::sync::Arc;

use serde::Serialize;

use crate::axioms::{ia1_for_all_q, ia3};
use crate::error::Result;
use crate::ext::{block_to_hom_coords, e_p_class, is_split, quotient_class, SplitVerdict};
use crate::group::GroupPresentation;
use crate::lie::{u_of, u_p_of};
use crate::linalg::{verify_infeasibility, Mat, Rat, Subspace};
use crate::rep::{random_abelian_object, random_object, RepObject};

/// The shape of the instances to sample: a presentation and the characters of
/// the basis. Truncated-free presentations use free sampling; presentations
/// without brackets use commuting sampling.
#[derive(Clone, Debug)]
pub struct SearchPattern {
    pub presentation: Arc<GroupPresentation>,
    pub characters: Vec<Vec<i64>>,
}

impl SearchPattern {
    pub fn weights(&self) -> Vec<i64> {
        self.characters.iter().map(|c| self.presentation.weight_of(c)).collect()
    }

    fn sample(&self, density: f64, seed: u64) -> Result<RepObject> {
        if self.presentation.free_structure().is_some() {
            random_object(&self.presentation, &self.characters, density, seed)
        } else {
            random_abelian_object(&self.presentation, &self.characters, density, seed)
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchBounds {
    pub seeds: Range<u64>,
    pub density: f64,
    /// Stop reporting instances after this many; counting continues.
    pub max_found: usize,
    pub workers: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { seeds: 0..100, density: 0.7, max_found: 16, workers: 1 }
    }
}

/// An infeasible system `A v = c` for the splitting of `E_p / u_p`, with a
/// row combination `y` such that `yA = 0` and `y c != 0`.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub p: i64,
    pub system: Mat,
    pub rhs: Vec<Rat>,
    pub certificate: Vec<Rat>,
}

impl Certificate {
    pub fn verify(&self) -> bool {
        verify_infeasibility(&self.system, &self.rhs, &self.certificate)
    }

    /// Rebuilds the splitting system from `m` and checks the stored data against it.
    pub fn reverify(&self, m: &RepObject) -> Result<bool> {
        Ok(match ep_mod_up(m, self.p)? {
            SplitVerdict::NonSplit { system, rhs, .. } => system == self.system && rhs == self.rhs && self.verify(),
            SplitVerdict::Split { .. } => false,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FoundInstance {
    pub seed: u64,
    #[serde(skip)]
    pub object: RepObject,
    pub certificate: Certificate,
    /// IA1 at every `q <= p`. Together with the nonsplit certificate this would
    /// contradict the splitting theorem.
    pub ia1_all_q: bool,
    pub ia3: bool,
    /// Whether `u(M)` equals the sum of the `u_p(M)`.
    pub u_is_sum: bool,
}

impl FoundInstance {
    pub fn is_theorem_violation(&self) -> bool {
        self.ia1_all_q
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchLog {
    pub seeds_tried: u64,
    pub generation_failures: u64,
    pub instances: u64,
    pub ia3_instances: u64,
    pub checks: u64,
    pub split: u64,
    pub nonsplit: u64,
    pub u_sum_mismatch: u64,
    pub theorem_violations: u64,
}

impl SearchLog {
    fn merge(&mut self, o: &SearchLog) {
        self.seeds_tried += o.seeds_tried;
        self.generation_failures += o.generation_failures;
        self.instances += o.instances;
        self.ia3_instances += o.ia3_instances;
        self.checks += o.checks;
        self.split += o.split;
        self.nonsplit += o.nonsplit;
        self.u_sum_mismatch += o.u_sum_mismatch;
        self.theorem_violations += o.theorem_violations;
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found { instances: Vec<FoundInstance>, log: SearchLog },
    NotFound { log: SearchLog },
}

impl SearchOutcome {
    pub fn log(&self) -> &SearchLog {
        match self {
            SearchOutcome::Found { log, .. } | SearchOutcome::NotFound { log } => log,
        }
    }

    pub fn instances(&self) -> &[FoundInstance] {
        match self {
            SearchOutcome::Found { instances, .. } => instances,
            SearchOutcome::NotFound { .. } => &[],
        }
    }
}

fn ep_mod_up(m: &RepObject, p: i64) -> Result<SplitVerdict> {
    let e = e_p_class(m, p)?;
    let up = block_to_hom_coords(m, p, &u_p_of(m, p).space);
    is_split(&quotient_class(&e, &up)?)
}

fn u_is_sum(m: &RepObject) -> bool {
    let ws = m.distinct_weights();
    let n = m.dim();
    let sum = ws.iter().fold(Subspace::zero(n * n), |acc, &p| acc.sum(&u_p_of(m, p).space));
    sum == u_of(m).space
}

fn examine(pattern: &SearchPattern, density: f64, seed: u64, log: &mut SearchLog) -> Result<Option<FoundInstance>> {
    log.seeds_tried += 1;
    let Ok(m) = pattern.sample(density, seed) else {
        log.generation_failures += 1;
        return Ok(None);
    };
    log.instances += 1;
    let ia3_holds = ia3(&m).0;
    if ia3_holds {
        log.ia3_instances += 1;
    }
    let u_sum = u_is_sum(&m);
    if !u_sum {
        log.u_sum_mismatch += 1;
    }
    let ws = m.distinct_weights();
    let mut first = None;
    for &p in ws.iter().take(ws.len().saturating_sub(1)) {
        log.checks += 1;
        match ep_mod_up(&m, p)? {
            SplitVerdict::Split { .. } => log.split += 1,
            SplitVerdict::NonSplit { system, rhs, certificate } => {
                log.nonsplit += 1;
                let ia1_all_q = ia1_for_all_q(&m, p);
                if ia1_all_q {
                    log.theorem_violations += 1;
                }
                if first.is_none() {
                    first = Some(FoundInstance {
                        seed,
                        object: m.clone(),
                        certificate: Certificate { p, system, rhs, certificate },
                        ia1_all_q,
                        ia3: ia3_holds,
                        u_is_sum: u_sum,
                    });
                }
            }
        }
    }
    Ok(first)
}

fn run_shard(pattern: &SearchPattern, density: f64, seeds: Range<u64>) -> Result<(Vec<FoundInstance>, SearchLog)> {
    let mut log = SearchLog::default();
    let mut found = Vec::new();
    for seed in seeds {
        if let Some(f) = examine(pattern, density, seed, &mut log)? {
            found.push(f);
        }
    }
    Ok((found, log))
}

/// Samples one instance per seed and looks for an occurring `p` where
/// `E_p / u_p` does not split. Seeds are split into contiguous shards, one per
/// worker, and the results are merged in seed order.
pub fn counterexample_search(pattern: &SearchPattern, bounds: &SearchBounds) -> Result<SearchOutcome> {
    let (lo, hi) = (bounds.seeds.start, bounds.seeds.end.max(bounds.seeds.start));
    let workers = bounds.workers.max(1) as u64;
    let chunk = (hi - lo).div_ceil(workers).max(1);
    let shards: Vec<Range<u64>> = (0..workers).map(|k| (lo + k * chunk).min(hi)..(lo + (k + 1) * chunk).min(hi)).filter(|r| !r.is_empty()).collect();
    let results: Vec<Result<(Vec<FoundInstance>, SearchLog)>> = if shards.len() <= 1 {
        shards.into_iter().map(|r| run_shard(pattern, bounds.density, r)).collect()
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = shards.into_iter().map(|r| s.spawn(move || run_shard(pattern, bounds.density, r))).collect();
            handles.into_iter().map(|h| h.join().expect("search worker panicked")).collect()
        })
    };
    let mut log = SearchLog::default();
    let mut by_seed: BTreeMap<u64, FoundInstance> = BTreeMap::new();
    for r in results {
        let (found, l) = r?;
        log.merge(&l);
        by_seed.extend(found.into_iter().map(|f| (f.seed, f)));
    }
    let instances: Vec<FoundInstance> = by_seed.into_values().take(bounds.max_found).collect();
    Ok(if instances.is_empty() { SearchOutcome::NotFound { log } } else { SearchOutcome::Found { instances, log } })
}
