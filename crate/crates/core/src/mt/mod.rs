//! Mixed Tate layer: a free graded model of the motivic Lie algebra, Kummer
//! classes, the classification of three-weight objects with large `u`, and
//! formal period matrices.

mod classify;
mod kummer;
mod periods;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

pub use classify::{
    build_four_dim_example, classify_three_dim, duality_check, m_nr, m_prime_nr, smallest_ia3_twist, z_nk, ClassificationResult, ClassifyOptions, FourDimExample, MtCase,
};
pub use kummer::{kummer_canonical, KummerClass};
pub use periods::{period_matrix_of, period_matrix_report, report_for, PeriodMatrix, PeriodReport, PeriodSymbol, PeriodTerm};

use crate::error::{Error, Result};
use crate::group::{free_graded_lie, GroupPresentation, Letter};
use crate::linalg::Mat;
use crate::rep::{simple_character, RepObject};

/// Primes indexing the Kummer letters, in order.
pub const KUMMER_PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// `dim Ext^1(1, Q(n))` in the mixed Tate category.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExtDimRule {
    Zero,
    One,
    /// `Q^x ⊗ Q`; a model of Kummer rank `s` sees an `s`-dimensional slice.
    KummerInfinite,
}

impl ExtDimRule {
    pub fn model_dim(self, kummer_rank: usize) -> usize {
        match self {
            ExtDimRule::Zero => 0,
            ExtDimRule::One => 1,
            ExtDimRule::KummerInfinite => kummer_rank,
        }
    }
}

pub fn ext_dim_rule(n: i64) -> ExtDimRule {
    if n == 1 {
        ExtDimRule::KummerInfinite
    } else if n >= 3 && n % 2 == 1 {
        ExtDimRule::One
    } else {
        ExtDimRule::Zero
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LetterKind {
    Kummer(u64),
    Zeta(i64),
}

/// Truncated free Lie algebra on `kummer_rank` letters of degree one (one per
/// prime) and one letter of each odd degree `3 <= m <= max_twist`, truncated
/// below weight `-2 max_twist`.
#[derive(Clone, Debug)]
pub struct MtModel {
    pub presentation: Arc<GroupPresentation>,
    pub max_twist: i64,
    pub primes: Vec<u64>,
    letters: BTreeMap<usize, LetterKind>,
}

pub fn build_mt_model(max_twist: i64, kummer_rank: usize) -> Result<MtModel> {
    if max_twist < 3 {
        return Err(Error::Input(format!("max_twist must be at least 3, got {max_twist}")));
    }
    if kummer_rank == 0 || kummer_rank > KUMMER_PRIMES.len() {
        return Err(Error::Input(format!("kummer_rank must be in 1..={}, got {kummer_rank}", KUMMER_PRIMES.len())));
    }
    let primes: Vec<u64> = KUMMER_PRIMES[..kummer_rank].to_vec();
    let mut letters: Vec<Letter> = primes.iter().map(|p| Letter::new(format!("k{p}"), vec![1])).collect();
    letters.extend((3..=max_twist).step_by(2).map(|m| Letter::new(format!("z{m}"), vec![m])));
    let pres = Arc::new(free_graded_lie(&[-2], &letters, -2 * max_twist)?);
    let mut kinds = BTreeMap::new();
    for &p in &primes {
        kinds.insert(pres.index_of(&format!("k{p}")).expect("letter present"), LetterKind::Kummer(p));
    }
    for m in (3..=max_twist).step_by(2) {
        kinds.insert(pres.index_of(&format!("z{m}")).expect("letter present"), LetterKind::Zeta(m));
    }
    Ok(MtModel { presentation: pres, max_twist, primes, letters: kinds })
}

impl MtModel {
    pub fn kummer_rank(&self) -> usize {
        self.primes.len()
    }

    pub fn letter_kind(&self, g: usize) -> Option<LetterKind> {
        self.letters.get(&g).copied()
    }

    pub fn zeta_letter(&self, m: i64) -> Option<usize> {
        self.letters.iter().find(|(_, k)| **k == LetterKind::Zeta(m)).map(|(&g, _)| g)
    }

    pub fn kummer_letter(&self, p: u64) -> Option<usize> {
        self.letters.iter().find(|(_, k)| **k == LetterKind::Kummer(p)).map(|(&g, _)| g)
    }

    pub fn tate(&self, n: i64) -> RepObject {
        simple_character(&self.presentation, &[n])
    }

    /// `1 x 1` blocks of the Kummer class `[r]` on the degree-one letters.
    pub fn kummer_blocks(&self, r: &KummerClass) -> Result<BTreeMap<usize, Mat>> {
        let mut out = BTreeMap::new();
        for (&p, &e) in r.exponents() {
            let g = self.kummer_letter(p).ok_or_else(|| {
                Error::Input(format!("prime {p} is outside the Kummer rank {} of the model", self.kummer_rank()))
            })?;
            out.insert(g, Mat::from_i64(&[&[e]]));
        }
        Ok(out)
    }

    /// `1 x 1` block of the generator of `Ext^1(1, Q(m))` for odd `m >= 3`.
    pub fn zeta_blocks(&self, m: i64) -> Result<BTreeMap<usize, Mat>> {
        let g = self.zeta_letter(m).ok_or_else(|| Error::Input(format!("no letter of degree {m} in the model")))?;
        Ok([(g, Mat::from_i64(&[&[1]]))].into_iter().collect())
    }
}
