//! Seeded random instances over small truncated free presentations.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::axioms::ia3;
use crate::error::{Error, Result};
use crate::group::{free_graded_lie, GroupPresentation, Letter};
use crate::rep::{random_object, RepObject};

#[derive(Clone, Debug)]
pub struct CorpusConfig {
    pub max_dim: usize,
    pub max_torus_rank: usize,
    pub max_generators: usize,
    pub density: f64,
    /// Draw the occurring weights from a set with pairwise distinct differences.
    pub ia3_only: bool,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig { max_dim: 6, max_torus_rank: 2, max_generators: 5, density: 0.7, ia3_only: false }
    }
}

const RANK_TWO_DEGREES: [[i64; 2]; 6] = [[1, 0], [0, 1], [1, 1], [2, 0], [0, 2], [2, 1]];
const ATTEMPTS: usize = 200;

fn weight_of(w: &[i64], c: &[i64]) -> i64 {
    w.iter().zip(c).map(|(a, b)| a * b).sum()
}

/// Characters reached from `0` by adding letter degrees, with occasional repeats.
fn chain_characters(rng: &mut ChaCha8Rng, degrees: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let r = degrees[0].len();
    let mut chars = vec![vec![0; r]];
    while chars.len() < n {
        if chars.len() > 1 && rng.gen_bool(0.15) {
            let c = chars.choose(rng).unwrap().clone();
            chars.push(c);
            continue;
        }
        let base = chars.choose(rng).unwrap().clone();
        let d = degrees.choose(rng).unwrap();
        chars.push(base.iter().zip(d).map(|(a, b)| a + b).collect());
    }
    chars
}

/// Rank-one characters whose distinct weights have pairwise distinct differences.
fn sidon_characters(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let k = rng.gen_range(2..=n.min(4));
    let mut ws: Vec<i64> = vec![0];
    let mut diffs = std::collections::BTreeSet::new();
    for _ in 0..100 {
        if ws.len() >= k {
            break;
        }
        let c: i64 = rng.gen_range(1..=8);
        if ws.contains(&c) {
            continue;
        }
        let new: Vec<i64> = ws.iter().map(|&w| (w - c).abs()).collect();
        let distinct: std::collections::BTreeSet<i64> = new.iter().copied().collect();
        if distinct.len() == new.len() && new.iter().all(|d| !diffs.contains(d)) {
            diffs.extend(new);
            ws.push(c);
        }
    }
    let mut chars: Vec<Vec<i64>> = ws.iter().map(|&w| vec![w]).collect();
    while chars.len() < n {
        let c = chars.choose(rng).unwrap().clone();
        chars.push(c);
    }
    chars
}

/// One corpus instance, determined by `seed`: torus rank at most
/// `max_torus_rank`, ambient dimension at most `max_dim`, and a truncated free
/// presentation with at most `max_generators` basis elements.
pub fn corpus_instance(seed: u64, cfg: &CorpusConfig) -> Result<RepObject> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_c0de);
    for _ in 0..ATTEMPTS {
        let rank = if cfg.ia3_only || cfg.max_torus_rank < 2 || rng.gen_bool(0.6) { 1 } else { 2 };
        let weight: Vec<i64> = if rank == 1 { vec![-1] } else { vec![-1, -1] };
        let n = rng.gen_range(2..=cfg.max_dim.max(2));
        let (chars, degrees) = if cfg.ia3_only {
            let chars = sidon_characters(&mut rng, n);
            let mut ws: Vec<i64> = chars.iter().map(|c| c[0]).collect();
            ws.sort();
            ws.dedup();
            let mut diffs: Vec<i64> = ws.windows(2).map(|p| p[1] - p[0]).collect();
            diffs.sort();
            diffs.dedup();
            diffs.truncate(rng.gen_range(1..=2));
            (chars, diffs.into_iter().map(|d| vec![d]).collect::<Vec<_>>())
        } else {
            let k = rng.gen_range(1..=3);
            let degrees: Vec<Vec<i64>> = (0..k)
                .map(|_| if rank == 1 { vec![rng.gen_range(1..=3)] } else { RANK_TWO_DEGREES.choose(&mut rng).unwrap().to_vec() })
                .collect();
            (chain_characters(&mut rng, &degrees, n), degrees)
        };
        let ws: Vec<i64> = chars.iter().map(|c| weight_of(&weight, c)).collect();
        let spread = ws.iter().max().unwrap() - ws.iter().min().unwrap();
        if spread == 0 {
            continue;
        }
        let mut degrees = degrees;
        degrees.sort();
        degrees.dedup();
        let letters: Vec<Letter> = degrees
            .iter()
            .filter(|d| -weight_of(&weight, d) <= spread)
            .enumerate()
            .map(|(i, d)| Letter::new(format!("x{i}"), d.clone()))
            .collect();
        if letters.is_empty() {
            continue;
        }
        let pres = free_graded_lie(&weight, &letters, -spread)?;
        if pres.n_generators() > cfg.max_generators {
            continue;
        }
        let pres: Arc<GroupPresentation> = Arc::new(pres);
        let m = random_object(&pres, &chars, cfg.density, rng.gen())?;
        if cfg.ia3_only && !ia3(&m).0 {
            return Err(Error::Precondition("sampled weights violate IA3".into()));
        }
        return Ok(m);
    }
    Err(Error::Precondition(format!("no admissible instance for seed {seed} after {ATTEMPTS} attempts")))
}

/// `count` instances from consecutive seeds starting at `seed`.
pub fn corpus(seed: u64, count: usize, cfg: &CorpusConfig) -> Result<Vec<(u64, RepObject)>> {
    (0..count as u64).map(|i| seed.wrapping_add(i)).map(|s| corpus_instance(s, cfg).map(|m| (s, m))).collect()
}
