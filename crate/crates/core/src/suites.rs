//! Seeded property suites over the random corpus. Each suite turns a seed into
//! one instance, decides whether the instance qualifies, and runs its checks.
//! Suites run until `count` qualifying instances have been checked.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::axioms::{check_axioms, ia2_for_all_q, ia3};
use crate::error::{Error, Result};
use crate::ext::{
    block_to_hom_coords, e_p_class, e_p_in_w_minus1_end, end_to_wm1_coords, is_split, nilpotent_exp, nilpotent_log, originates_from, quotient_class, total_class, yoneda_compose,
    ExtBetween, ExtClass,
};
use crate::group::GroupPresentation;
use crate::io::corpus::{corpus_instance, CorpusConfig};
use crate::lie::{gr_leading_span, relative_kernel_lie, u_geq_of, u_of, u_p_of};
use crate::axioms::region_block;
use crate::linalg::{Mat, Rat, Subspace};
use crate::mt::kummer_canonical;
use crate::panachage::{blend, BlendOutcome, CompatiblePair};
use crate::rep::{direct_sum, generated_subobject, gr_object, pure_object, w_quotient, w_sub, RepObject};

pub const SUITES: [&str; 12] = [
    "total-split",
    "minimality",
    "origination",
    "ia2-split",
    "ia3-split",
    "ia2-prime",
    "up-kernel",
    "gr-decomposition",
    "blend-yoneda",
    "exp-log",
    "kummer",
    "split-origin",
];

/// Outcome of the checks on one qualifying instance.
#[derive(Clone, Debug, Default, Serialize)]
pub struct InstanceResult {
    pub checks: usize,
    pub failures: Vec<String>,
    /// Checks that could not be formed on this instance (for example no
    /// subobject avoiding `u` exists).
    pub vacuous: usize,
}

impl InstanceResult {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteFailure {
    pub seed: u64,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub requested: usize,
    pub instances: usize,
    pub seeds_scanned: u64,
    pub skipped: u64,
    pub checks: usize,
    pub vacuous: usize,
    pub failures: Vec<SuiteFailure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.instances >= self.requested
    }
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt)
}

fn small_rat(rng: &mut ChaCha8Rng) -> Rat {
    Rat::from_int(rng.gen_range(-3..=3))
}

/// A random homogeneous vector of `x`, supported on one character.
fn random_eigenvector(x: &RepObject, rng: &mut ChaCha8Rng) -> Option<Vec<Rat>> {
    let chars = x.distinct_characters();
    let chi = chars.choose(rng)?;
    let mut v: Vec<Rat> = (0..x.dim()).map(|a| if x.character(a) == chi.as_slice() { small_rat(rng) } else { Rat::zero() }).collect();
    if v.iter().all(|c| c.is_zero()) {
        let a = x.isotypic(chi)[0];
        v[a] = Rat::one();
    }
    Some(v)
}

/// Up to `want` random subobjects of `x` generated by one or two random
/// eigenvectors and not containing `avoid`.
fn random_subobjects_avoiding(x: &RepObject, avoid: &Subspace, want: usize, rng: &mut ChaCha8Rng) -> Vec<Subspace> {
    let mut out: Vec<Subspace> = Vec::new();
    if avoid.is_zero() || x.dim() == 0 {
        return out;
    }
    let zero = Subspace::zero(x.dim());
    for attempt in 0..20 * want {
        if out.len() >= want {
            break;
        }
        let k = if attempt % 3 == 2 { 0 } else { rng.gen_range(1..=2) };
        let vs: Vec<Vec<Rat>> = (0..k).filter_map(|_| random_eigenvector(x, rng)).collect();
        let a = if vs.is_empty() { zero.clone() } else { generated_subobject(x, &vs) };
        if !a.contains_space(avoid) && !out.contains(&a) {
            out.push(a);
        }
    }
    out
}

/// Up to `want` distinct subobjects of `x` not containing `avoid`, drawn from `seed`.
pub fn sample_subobjects_avoiding(x: &RepObject, avoid: &Subspace, want: usize, seed: u64) -> Vec<Subspace> {
    random_subobjects_avoiding(x, avoid, want, &mut rng_for(seed, 0x5a3e))
}

fn occurring_p(m: &RepObject) -> Vec<i64> {
    let ws = m.distinct_weights();
    let top = ws.iter().copied().max().unwrap_or(0);
    ws.into_iter().filter(|&w| w < top).collect()
}

fn e_p_mod_u_p(m: &RepObject, p: i64) -> Result<ExtClass> {
    let e = e_p_class(m, p)?;
    let up = block_to_hom_coords(m, p, &u_p_of(m, p).space);
    quotient_class(&e, &up)
}

fn split(e: &ExtClass) -> Result<bool> {
    Ok(is_split(e)?.is_split())
}

fn check_total_split(m: &RepObject) -> Result<InstanceResult> {
    let mut r = InstanceResult::default();
    let t = total_class(m)?;
    let u = end_to_wm1_coords(m, &u_of(m).space);
    r.check(split(&quotient_class(&t, &u)?)?, || "total class is nonsplit modulo u".into());
    Ok(r)
}

fn check_minimality(m: &RepObject, rng: &mut ChaCha8Rng) -> Result<Option<InstanceResult>> {
    let mut r = InstanceResult::default();
    let t = total_class(m)?;
    let u = end_to_wm1_coords(m, &u_of(m).space);
    if u.is_zero() {
        return Ok(None);
    }
    let samples = random_subobjects_avoiding(&t.target, &u, 5, rng);
    r.vacuous += 5 - samples.len();
    for a in samples {
        let d = a.dim();
        r.check(!split(&quotient_class(&t, &a)?)?, || format!("total class splits modulo a {d}-dimensional subobject not containing u"));
    }
    Ok(Some(r))
}

fn check_origination(m: &RepObject, rng: &mut ChaCha8Rng) -> Result<InstanceResult> {
    let mut r = InstanceResult::default();
    for p in occurring_p(m) {
        let s = direct_sum(&w_sub(m, p), &w_quotient(m, p))?;
        let e = e_p_class(m, p)?;
        let up = block_to_hom_coords(m, p, &u_p_of(m, p).space);
        let q = quotient_class(&e, &up)?;
        r.check(originates_from(&q, &s)?.originates(), || format!("E_p / u_p does not originate from W_p + M/W_p at p = {p}"));
        let samples = random_subobjects_avoiding(&e.target, &up, 5, rng);
        r.vacuous += 5 - samples.len();
        for a in samples {
            let d = a.dim();
            r.check(!originates_from(&quotient_class(&e, &a)?, &s)?.originates(), || {
                format!("E_p / A originates at p = {p} for a {d}-dimensional A not containing u_p")
            });
        }
    }
    Ok(r)
}

fn check_ia2_split(m: &RepObject) -> Result<Option<InstanceResult>> {
    let ps: Vec<i64> = occurring_p(m).into_iter().filter(|&p| ia2_for_all_q(m, p)).collect();
    if ps.is_empty() {
        return Ok(None);
    }
    let mut r = InstanceResult::default();
    for p in ps {
        r.check(split(&e_p_mod_u_p(m, p)?)?, || format!("IA2 holds for every q <= {p} yet E_p / u_p is nonsplit"));
    }
    Ok(Some(r))
}

fn check_ia3_split(m: &RepObject) -> Result<Option<InstanceResult>> {
    if !ia3(m).0 {
        return Ok(None);
    }
    let mut r = InstanceResult::default();
    for p in occurring_p(m) {
        r.check(split(&e_p_mod_u_p(m, p)?)?, || format!("IA3 holds yet E_p / u_p is nonsplit at p = {p}"));
    }
    Ok(Some(r))
}

fn check_ia2_prime(m: &RepObject) -> Result<Option<InstanceResult>> {
    let ws = m.distinct_weights();
    let mut r = InstanceResult::default();
    let mut any = false;
    for p in occurring_p(m) {
        for &q in ws.iter().filter(|&&q| q > p) {
            if !check_axioms(m, p, q).ia2 {
                continue;
            }
            any = true;
            let s = direct_sum(&w_sub(m, q), &gr_object(m))?;
            r.check(originates_from(&e_p_mod_u_p(m, p)?, &s)?.originates(), || {
                format!("IA2' holds at (p, q) = ({p}, {q}) yet E_p / u_p does not originate from W_q + Gr")
            });
        }
    }
    Ok(any.then_some(r))
}

fn check_up_kernel(m: &RepObject) -> Result<InstanceResult> {
    let mut r = InstanceResult::default();
    let ws = m.distinct_weights();
    let lo = ws.first().copied().unwrap_or(0);
    let hi = ws.last().copied().unwrap_or(0);
    for p in lo - 1..=hi {
        let n = direct_sum(&w_sub(m, p), &w_quotient(m, p))?;
        let k = relative_kernel_lie(m, &n)?;
        let up = u_p_of(m, p);
        r.check(k.space == up.space, || format!("u_p and the relative kernel differ at p = {p}: dims {} and {}", up.dim(), k.dim()));
    }
    Ok(r)
}

fn check_gr_decomposition(m: &RepObject) -> Result<Option<InstanceResult>> {
    let ws = m.distinct_weights();
    let mut r = InstanceResult::default();
    let mut any = false;
    for p in occurring_p(m) {
        for &q in ws.iter().filter(|&&q| q <= p) {
            if !check_axioms(m, p, q).ia2 {
                continue;
            }
            any = true;
            let g = gr_leading_span(m, &u_geq_of(m, q).space);
            let g1 = g.intersect(&region_block(m, p, q, 0));
            let g2 = g.intersect(&region_block(m, p, q, 1));
            r.check(g1.sum(&g2) == g, || {
                format!("Gr u_>=q is not the direct sum of its region parts at (p, q) = ({p}, {q}): {} vs {} + {}", g.dim(), g1.dim(), g2.dim())
            });
        }
    }
    Ok(any.then_some(r))
}

fn check_split_origin(m: &RepObject) -> Result<InstanceResult> {
    let mut r = InstanceResult::default();
    let unit = crate::rep::unit_object(m.pres_arc());
    for p in occurring_p(m) {
        let e = e_p_class(m, p)?;
        let a = split(&e)?;
        let b = originates_from(&e, &unit)?.originates();
        r.check(a == b, || format!("is_split = {a} but originates from 1 = {b} at p = {p}"));
        let x = split(&e_p_mod_u_p(m, p)?)?;
        let u = end_to_wm1_coords(m, &u_of(m).space);
        let y = split(&quotient_class(&e_p_in_w_minus1_end(m, p)?, &u)?)?;
        r.check(x == y, || format!("E_p / u_p split = {x} but E_p / u split = {y} at p = {p}"));
    }
    Ok(r)
}

/// A random weight-separated pair over a rank-one abelian presentation.
pub fn random_pair(seed: u64) -> Result<CompatiblePair> {
    let mut rng = rng_for(seed, 0xb1e0d);
    let mut degrees: Vec<Vec<i64>> = vec![vec![1], vec![1]];
    if rng.gen_bool(0.5) {
        degrees.push(vec![2]);
    }
    if rng.gen_bool(0.3) {
        degrees.push(vec![1]);
    }
    let p = Arc::new(GroupPresentation::abelian(vec![-2], &degrees)?);
    let mult = |rng: &mut ChaCha8Rng| rng.gen_range(1..=2usize);
    let (nb, na, nc) = (mult(&mut rng), mult(&mut rng), 1);
    let b = pure_object(&p, &vec![vec![2]; nb]);
    let a = pure_object(&p, &vec![vec![1]; na]);
    let c = pure_object(&p, &vec![vec![0]; nc]);
    let density = 0.6;
    let blocks = |rng: &mut ChaCha8Rng, rows: usize, cols: usize| -> BTreeMap<usize, Mat> {
        let mut out = BTreeMap::new();
        for g in 0..p.n_generators() {
            if p.degree(g) != [1] {
                continue;
            }
            let mut m = Mat::zeros(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    if rng.gen_bool(density) {
                        m.set(i, j, small_rat(rng));
                    }
                }
            }
            if !m.is_zero() {
                out.insert(g, m);
            }
        }
        out
    };
    let l = blocks(&mut rng, nb, na);
    let n = blocks(&mut rng, na, nc);
    CompatiblePair::new(ExtBetween::new(&a, &b, l)?, ExtBetween::new(&c, &a, n)?)
}

fn check_blend_yoneda(seed: u64) -> Result<InstanceResult> {
    let pair = random_pair(seed)?;
    let mut r = InstanceResult::default();
    let vanishes = yoneda_compose(&pair.l, &pair.n)?.vanishes();
    match blend(&pair)? {
        BlendOutcome::Blended(d) => {
            r.check(vanishes, || "blend succeeded but the Yoneda product is nonzero".into());
            r.check(d.validate().ok(), || "blended diagram fails validation".into());
        }
        BlendOutcome::Obstructed { .. } => r.check(!vanishes, || "blend obstructed but the Yoneda product vanishes".into()),
    }
    Ok(r)
}

/// Random weights, a strictly lowering matrix, and a block-supported one.
fn check_exp_log(seed: u64) -> Result<InstanceResult> {
    let mut rng = rng_for(seed, 0xe4b1);
    let n = rng.gen_range(2..=6);
    let w: Vec<i64> = (0..n).map(|_| -rng.gen_range(0..=4)).collect();
    let mut x = Mat::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            if w[a] < w[b] && rng.gen_bool(0.7) {
                x.set(a, b, Rat::new(rng.gen_range(-5..=5), rng.gen_range(1..=3)));
            }
        }
    }
    let mut r = InstanceResult::default();
    let ex = nilpotent_exp(&x)?;
    r.check(nilpotent_log(&ex)? == x, || "log(exp(x)) differs from x".into());
    r.check(nilpotent_exp(&nilpotent_log(&ex)?)? == ex, || "exp(log(u)) differs from u".into());
    let mut ws = w.clone();
    ws.sort();
    ws.dedup();
    let p = *ws.choose(&mut rng).unwrap();
    let mut f = Mat::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            if w[a] <= p && p < w[b] {
                f.set(a, b, Rat::new(rng.gen_range(-5..=5), rng.gen_range(1..=3)));
            }
        }
    }
    r.check(nilpotent_exp(&f)? == Mat::identity(n).add(&f), || format!("exp(f) differs from I + f for a block at p = {p}"));
    Ok(r)
}

fn check_kummer(seed: u64) -> Result<InstanceResult> {
    let mut rng = rng_for(seed, 0x4b4d);
    let (n, d) = loop {
        let n: i64 = rng.gen_range(1..=5000);
        let d: i64 = rng.gen_range(1..=5000);
        if n != d {
            break (n, d);
        }
    };
    let x = Rat::new(n, d);
    let mut r = InstanceResult::default();
    let c = kummer_canonical(&x)?;
    r.check(c.is_canonical(), || format!("[{x}] canonicalises to a non-canonical class {c}"));
    r.check(kummer_canonical(&c.value())? == c, || format!("canonicalisation of {x} is not idempotent"));
    let k = rng.gen_range(2..=3);
    if let Ok(y) = kummer_canonical(&x.pow(k)) {
        r.check(y == c, || format!("{x}^{k} lands in a different orbit"));
    }
    Ok(r)
}

fn corpus_object(seed: u64, ia3_only: bool) -> Result<Option<RepObject>> {
    let cfg = CorpusConfig { ia3_only, ..CorpusConfig::default() };
    match corpus_instance(seed, &cfg) {
        Ok(m) => Ok(Some(m)),
        Err(Error::Precondition(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Runs one seed of `suite`; `None` when the instance does not qualify.
pub fn run_seed(suite: &str, seed: u64) -> Result<Option<InstanceResult>> {
    let mut rng = rng_for(seed, 0x5a3e);
    let obj = |ia3_only| corpus_object(seed, ia3_only);
    Ok(match suite {
        "total-split" => obj(false)?.map(|m| check_total_split(&m)).transpose()?,
        "minimality" => obj(false)?.map(|m| check_minimality(&m, &mut rng)).transpose()?.flatten(),
        "origination" => obj(false)?.map(|m| check_origination(&m, &mut rng)).transpose()?,
        "ia2-split" => obj(false)?.map(|m| check_ia2_split(&m)).transpose()?.flatten(),
        "ia3-split" => obj(true)?.map(|m| check_ia3_split(&m)).transpose()?.flatten(),
        "ia2-prime" => obj(false)?.map(|m| check_ia2_prime(&m)).transpose()?.flatten(),
        "up-kernel" => obj(false)?.map(|m| check_up_kernel(&m)).transpose()?,
        "gr-decomposition" => obj(false)?.map(|m| check_gr_decomposition(&m)).transpose()?.flatten(),
        "split-origin" => obj(false)?.map(|m| check_split_origin(&m)).transpose()?,
        "blend-yoneda" => Some(check_blend_yoneda(seed)?),
        "exp-log" => Some(check_exp_log(seed)?),
        "kummer" => Some(check_kummer(seed)?),
        other => return Err(Error::Input(format!("unknown suite {other:?}; known suites: {}", SUITES.join(", ")))),
    })
}

/// Scans seeds `seed, seed + 1, ...` until `count` instances qualify or
/// `max_seeds` seeds have been tried. Seeds are processed in parallel batches
/// of `workers`; the result depends only on the seeds, not on scheduling.
pub fn run_suite(suite: &str, seed: u64, count: usize, max_seeds: u64, workers: usize) -> Result<SuiteReport> {
    if !SUITES.contains(&suite) {
        return Err(Error::Input(format!("unknown suite {suite:?}; known suites: {}", SUITES.join(", "))));
    }
    let workers = workers.max(1);
    let mut report = SuiteReport {
        suite: suite.to_string(),
        seed,
        requested: count,
        instances: 0,
        seeds_scanned: 0,
        skipped: 0,
        checks: 0,
        vacuous: 0,
        failures: Vec::new(),
    };
    let batch = (workers * 8) as u64;
    let mut next = 0u64;
    while report.instances < count && next < max_seeds {
        let end = (next + batch).min(max_seeds);
        let seeds: Vec<u64> = (next..end).map(|i| seed.wrapping_add(i)).collect();
        let chunk = seeds.len().div_ceil(workers).max(1);
        let results: Vec<(u64, Result<Option<InstanceResult>>)> = std::thread::scope(|s| {
            let handles: Vec<_> = seeds
                .chunks(chunk)
                .map(|part| s.spawn(move || part.iter().map(|&sd| (sd, run_seed(suite, sd))).collect::<Vec<_>>()))
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("suite worker panicked")).collect()
        });
        for (sd, res) in results {
            if report.instances >= count {
                break;
            }
            report.seeds_scanned += 1;
            match res {
                Err(e) => {
                    report.instances += 1;
                    report.failures.push(SuiteFailure { seed: sd, detail: format!("error: {e}") });
                }
                Ok(None) => report.skipped += 1,
                Ok(Some(r)) => {
                    report.instances += 1;
                    report.checks += r.checks;
                    report.vacuous += r.vacuous;
                    report.failures.extend(r.failures.into_iter().map(|detail| SuiteFailure { seed: sd, detail }));
                }
            }
        }
        next = end;
    }
    Ok(report)
}
