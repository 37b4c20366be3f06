use std::collections::BTreeMap;

use serde::Serialize;

use super::kummer::{kummer_canonical, KummerClass};
use super::{build_mt_model, ext_dim_rule, ExtDimRule, MtModel};
use crate::axioms::ia3;
use crate::error::{Error, Result};
use crate::ext::ExtBetween;
use crate::lie::{galois_dim, is_large_u, u_of};
use crate::linalg::{Mat, Rat};
use crate::panachage::{attached_unique, blend, BlendOutcome, CompatiblePair};
use crate::rep::{dual, is_isomorphic, simple_character, tensor_product, twist, w_quotient, w_sub, IsoVerdict, RepObject};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", content = "reason")]
pub enum MtCase {
    I,
    II,
    III,
    Rejected(String),
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub r: Rat,
    /// Defaults to `max(n, 3)`.
    pub max_twist: Option<i64>,
    pub kummer_rank: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { r: Rat::from_int(2), max_twist: None, kummer_rank: 2 }
    }
}

#[derive(Clone, Debug)]
pub struct ClassificationResult {
    pub n: i64,
    pub k: i64,
    pub case: MtCase,
    pub parameter_space: String,
    /// Canonical Kummer class of the representative, for the family cases.
    pub r: Option<KummerClass>,
    pub name: String,
    pub representative: Option<RepObject>,
    /// Outcome of the uniqueness check on the representative's pair.
    pub attached: Option<&'static str>,
    pub model: Option<MtModel>,
}

impl ClassificationResult {
    fn rejected(n: i64, k: i64, reason: impl Into<String>) -> ClassificationResult {
        ClassificationResult {
            n,
            k,
            case: MtCase::Rejected(reason.into()),
            parameter_space: "empty".into(),
            r: None,
            name: String::new(),
            representative: None,
            attached: None,
            model: None,
        }
    }
}

/// Blends `Q(n) <- Q(k) <- 1` from the given `1 x 1` blocks of `L` and `N`.
fn three_dim(model: &MtModel, n: i64, k: i64, l: BTreeMap<usize, Mat>, nb: BTreeMap<usize, Mat>) -> Result<(RepObject, &'static str)> {
    let (b, a, c) = (model.tate(n), model.tate(k), model.tate(0));
    let pair = CompatiblePair::new(ExtBetween::new(&a, &b, l)?, ExtBetween::new(&c, &a, nb)?)?;
    let m = match blend(&pair)? {
        BlendOutcome::Blended(d) => {
            if !d.validate().ok() {
                return Err(Error::Precondition("blended diagram failed validation".into()));
            }
            d.m().clone()
        }
        BlendOutcome::Obstructed { .. } => return Err(Error::Precondition(format!("pair for ({n}, {k}) is obstructed"))),
    };
    Ok((m, attached_unique(&pair)?.tag()))
}

pub fn m_nr(model: &MtModel, n: i64, r: &KummerClass) -> Result<(RepObject, &'static str)> {
    three_dim(model, n, 1, model.zeta_blocks(n - 1)?, model.kummer_blocks(r)?)
}

pub fn z_nk(model: &MtModel, n: i64, k: i64) -> Result<(RepObject, &'static str)> {
    three_dim(model, n, k, model.zeta_blocks(n - k)?, model.zeta_blocks(k)?)
}

pub fn m_prime_nr(model: &MtModel, n: i64, r: &KummerClass) -> Result<(RepObject, &'static str)> {
    three_dim(model, n, n - 1, model.kummer_blocks(r)?, model.zeta_blocks(n - 1)?)
}

fn model_for(n: i64, opts: &ClassifyOptions) -> Result<MtModel> {
    let t = opts.max_twist.unwrap_or(n.max(3));
    if t < n {
        return Err(Error::Input(format!("max_twist {t} is below n = {n}")));
    }
    build_mt_model(t, opts.kummer_rank)
}

/// Objects with graded pieces `Q(n), Q(k), 1` and large `u`, up to isomorphism.
pub fn classify_three_dim(n: i64, k: i64, opts: &ClassifyOptions) -> Result<ClassificationResult> {
    if !(n > k && k > 0) {
        return Err(Error::Precondition(format!("need n > k > 0, got n = {n}, k = {k}")));
    }
    if n == 2 * k {
        return Ok(ClassificationResult::rejected(n, k, "n = 2k"));
    }
    for (m, what) in [(n - k, "Ext^1(Q(k), Q(n))"), (k, "Ext^1(1, Q(k))")] {
        if ext_dim_rule(m) == ExtDimRule::Zero {
            return Ok(ClassificationResult::rejected(n, k, format!("{what} = Ext^1(1, Q({m})) = 0, so no nonsplit pair exists")));
        }
    }
    let model = model_for(n, opts)?;
    let (case, space, r, name, built) = if k == 1 {
        let r = kummer_canonical(&opts.r)?;
        let built = m_nr(&model, n, &r)?;
        (MtCase::I, "canonical Kummer classes [r], r > 1 not a proper power".to_string(), Some(r.clone()), format!("M_{{{n},{r}}}"), built)
    } else if n != k + 1 {
        let built = z_nk(&model, n, k)?;
        (MtCase::II, "a single point".to_string(), None, format!("Z_{{{n},{k}}}"), built)
    } else {
        let r = kummer_canonical(&opts.r)?;
        let built = m_prime_nr(&model, n, &r)?;
        (MtCase::III, "canonical Kummer classes [r], r > 1 not a proper power".to_string(), Some(r.clone()), format!("M'_{{{n},{r}}}"), built)
    };
    Ok(ClassificationResult {
        n,
        k,
        case,
        parameter_space: space,
        r,
        name,
        representative: Some(built.0),
        attached: Some(built.1),
        model: Some(model),
    })
}

/// Whether `M'_{n,r}^∨ ⊗ Q(n)` is isomorphic to `M_{n,r}`.
pub fn duality_check(n: i64, r: &Rat, kummer_rank: usize) -> Result<bool> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::Precondition(format!("duality needs n even and at least 4, got {n}")));
    }
    let r = kummer_canonical(r)?;
    let model = build_mt_model(n.max(3), kummer_rank)?;
    let (mp, _) = m_prime_nr(&model, n, &r)?;
    let (m, _) = m_nr(&model, n, &r)?;
    let x = tensor_product(&dual(&mp), &simple_character(&model.presentation, &[n]))?;
    Ok(is_isomorphic(&x, &m)?.is_yes())
}

/// Smallest `k > 0` with `Gr(M)(k) ⊕ 1` satisfying IA3, for graded pieces `Q(c)`.
pub fn smallest_ia3_twist(chars: &[i64], model: &MtModel) -> Option<i64> {
    (1..=4 * model.max_twist.max(1)).find(|&k| {
        let mut cs: Vec<Vec<i64>> = chars.iter().map(|&c| vec![c + k]).collect();
        cs.push(vec![0]);
        ia3(&crate::rep::pure_object(&model.presentation, &cs)).0
    })
}

#[derive(Clone, Debug)]
pub struct FourDimExample {
    pub model: MtModel,
    pub r: KummerClass,
    pub m: RepObject,
    pub object: RepObject,
    pub attached: &'static str,
    pub ia3: bool,
    pub large: bool,
    pub dim_u: usize,
    pub galois_dim: usize,
    /// `object / Q(9)` against the Case III representative `M'_{6,r}`.
    pub quotient_vs_m_prime: IsoVerdict,
    pub smallest_twist: Option<i64>,
}

/// Blends the weight-filtration class of `M_{4,r}`, twisted by `Q(5)`, with the
/// generator of `Ext^1(1, Q(5))`.
pub fn build_four_dim_example(r: &Rat, kummer_rank: usize) -> Result<FourDimExample> {
    let r = kummer_canonical(r)?;
    let model = build_mt_model(9, kummer_rank)?;
    let (m, _) = m_nr(&model, 4, &r)?;
    let sub = w_sub(&m, -2);
    let low: Vec<usize> = (0..m.dim()).filter(|&a| m.weight(a) <= -2).collect();
    let top = (0..m.dim()).find(|&a| m.weight(a) == 0).expect("M_{4,r} has a weight-zero piece");
    let l: BTreeMap<usize, Mat> = m
        .actions()
        .iter()
        .filter_map(|(&g, a)| {
            let col: Vec<Vec<Rat>> = low.iter().map(|&i| vec![a.get(i, top).clone()]).collect();
            let blk = Mat::from_rows(col);
            (!blk.is_zero()).then_some((g, blk))
        })
        .collect();
    let b = twist(&sub, &[5]);
    let a = model.tate(5);
    let c = model.tate(0);
    let pair = CompatiblePair::new(ExtBetween::new(&a, &b, l)?, ExtBetween::new(&c, &a, model.zeta_blocks(5)?)?)?;
    let object = match blend(&pair)? {
        BlendOutcome::Blended(d) => {
            if !d.validate().ok() {
                return Err(Error::Precondition("blended diagram failed validation".into()));
            }
            d.m().clone()
        }
        BlendOutcome::Obstructed { .. } => return Err(Error::Precondition("the four-dimensional pair is obstructed".into())),
    };
    let attached = attached_unique(&pair)?.tag();
    let (mp, _) = m_prime_nr(&model, 6, &r)?;
    let quotient_vs_m_prime = is_isomorphic(&w_quotient(&object, -18), &mp)?;
    let smallest_twist = smallest_ia3_twist(&[4, 1, 0], &model);
    Ok(FourDimExample {
        r,
        m,
        attached,
        ia3: ia3(&object).0,
        large: is_large_u(&object),
        dim_u: u_of(&object).dim(),
        galois_dim: galois_dim(&object),
        quotient_vs_m_prime,
        smallest_twist,
        object,
        model,
    })
}
