use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use super::classify::{ClassificationResult, MtCase};
use super::kummer::KummerClass;
use super::{LetterKind, MtModel};
use crate::error::{Error, Result};
use crate::lie::galois_dim;
use crate::linalg::Rat;
use crate::rep::RepObject;

/// A formal period symbol. Nothing is ever evaluated numerically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "symbol", content = "arg")]
pub enum PeriodSymbol {
    /// `(2πi)^k`.
    TwoPiI(i64),
    Zeta(i64),
    Log(String),
    /// An unidentified period with an identifier unique to its object and entry.
    Star(String),
}

impl fmt::Display for PeriodSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PeriodSymbol::TwoPiI(k) => write!(f, "(2πi)^{k}"),
            PeriodSymbol::Zeta(m) => write!(f, "ζ({m})"),
            PeriodSymbol::Log(r) => write!(f, "log {r}"),
            PeriodSymbol::Star(_) => write!(f, "*"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodTerm {
    pub coeff: Rat,
    pub factors: Vec<PeriodSymbol>,
}

impl PeriodTerm {
    fn new(coeff: Rat, factors: Vec<PeriodSymbol>) -> PeriodTerm {
        let factors = factors.into_iter().filter(|s| *s != PeriodSymbol::TwoPiI(0)).collect();
        PeriodTerm { coeff, factors }
    }
}

impl fmt::Display for PeriodTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.factors.iter().map(|s| s.to_string()).collect();
        match (self.coeff.is_one(), body.is_empty()) {
            (_, true) => write!(f, "{}", self.coeff.plain()),
            (true, false) => write!(f, "{}", body.join(" ")),
            (false, false) => write!(f, "{} {}", self.coeff.plain(), body.join(" ")),
        }
    }
}

/// Upper-triangular matrix of formal sums, rows ordered from the lowest weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodMatrix {
    pub labels: Vec<String>,
    pub entries: Vec<Vec<Vec<PeriodTerm>>>,
}

impl PeriodMatrix {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn entry_text(&self, i: usize, j: usize) -> String {
        let e = &self.entries[i][j];
        if e.is_empty() {
            "0".into()
        } else {
            e.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" + ")
        }
    }

    /// Rendered nonzero entries.
    pub fn nonzero_entries(&self) -> BTreeSet<String> {
        let n = self.size();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| !self.entries[i][j].is_empty()).map(|(i, j)| self.entry_text(i, j)).collect()
    }

    pub fn symbols(&self) -> BTreeSet<PeriodSymbol> {
        self.entries.iter().flatten().flatten().flat_map(|t| t.factors.iter().cloned()).collect()
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.size()).all(|i| (0..i).all(|j| self.entries[i][j].is_empty()))
    }

    pub fn to_text(&self) -> String {
        let n = self.size();
        let cells: Vec<Vec<String>> = (0..n).map(|i| (0..n).map(|j| self.entry_text(i, j)).collect()).collect();
        let widths: Vec<usize> = (0..n).map(|j| cells.iter().map(|r| r[j].chars().count()).max().unwrap_or(1)).collect();
        let mut out = String::new();
        for row in &cells {
            let parts: Vec<String> = row.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
            out.push_str(&format!("[ {} ]\n", parts.join("  ")));
        }
        out
    }
}

fn kummer_symbol(exps: &[(u64, Rat)]) -> (Rat, String) {
    let d = exps.iter().fold(1i64, |acc, (_, e)| acc.lcm(&e.denom().try_into().unwrap_or(1)));
    let ints = exps.iter().map(|(p, e)| (*p, (e * &Rat::from_int(d)).to_i64().unwrap_or(0)));
    let k = KummerClass::from_exponents(ints);
    (Rat::new(1, d), k.to_string())
}

/// Reads the formal period matrix off an object of the model: a letter acting
/// between two basis vectors contributes its period, bracket elements
/// contribute an unidentified entry.
pub fn period_matrix_of(model: &MtModel, m: &RepObject, name: &str) -> Result<PeriodMatrix> {
    if m.presentation().torus_rank() != 1 {
        return Err(Error::Precondition("period matrices need the rank-one Tate convention".into()));
    }
    let mut order: Vec<usize> = (0..m.dim()).collect();
    order.sort_by_key(|&a| (m.weight(a), a));
    let n = order.len();
    let mut entries = vec![vec![Vec::new(); n]; n];
    for (i, &a) in order.iter().enumerate() {
        let ca = m.character(a)[0];
        entries[i][i].push(PeriodTerm::new(Rat::one(), vec![PeriodSymbol::TwoPiI(-ca)]));
        for (j, &b) in order.iter().enumerate().skip(i + 1) {
            let mut terms = Vec::new();
            let mut kummer: Vec<(u64, Rat)> = Vec::new();
            let mut star = false;
            for (&g, act) in m.actions() {
                let c = act.get(a, b);
                if c.is_zero() {
                    continue;
                }
                match model.letter_kind(g) {
                    Some(LetterKind::Zeta(z)) => terms.push(PeriodTerm::new(c.clone(), vec![PeriodSymbol::TwoPiI(-ca), PeriodSymbol::Zeta(z)])),
                    Some(LetterKind::Kummer(p)) => kummer.push((p, c.clone())),
                    None => star = true,
                }
            }
            if !kummer.is_empty() {
                let (coeff, r) = kummer_symbol(&kummer);
                terms.push(PeriodTerm::new(coeff, vec![PeriodSymbol::TwoPiI(-ca), PeriodSymbol::Log(r)]));
            }
            if star {
                terms.push(PeriodTerm::new(Rat::one(), vec![PeriodSymbol::Star(format!("{name}[{i},{j}]"))]));
            }
            entries[i][j] = terms;
        }
    }
    Ok(PeriodMatrix { labels: order.iter().map(|&a| m.basis()[a].label.clone()).collect(), entries })
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodReport {
    pub name: String,
    pub matrix: PeriodMatrix,
    /// Symbols the period conjecture predicts to be algebraically independent.
    pub independent: Vec<String>,
    pub galois_dim: usize,
    pub notes: Vec<String>,
}

fn independent_symbols(p: &PeriodMatrix) -> Vec<String> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for s in p.symbols() {
        let key = match &s {
            PeriodSymbol::TwoPiI(_) => "2πi".to_string(),
            PeriodSymbol::Star(id) => format!("*{id}"),
            other => other.to_string(),
        };
        if seen.insert(key.clone()) {
            out.push(key);
        }
    }
    out
}

pub fn report_for(model: &MtModel, m: &RepObject, name: &str) -> Result<PeriodReport> {
    let matrix = period_matrix_of(model, m, name)?;
    let independent = independent_symbols(&matrix);
    let g = galois_dim(m);
    let mut notes = vec![format!("Galois group dimension {g}; the period conjecture predicts transcendence degree {g}.")];
    if independent.len() != g {
        notes.push(format!("{} distinct symbols appear against a predicted transcendence degree of {g}.", independent.len()));
    }
    Ok(PeriodReport { name: name.to_string(), matrix, independent, galois_dim: g, notes })
}

pub fn period_matrix_report(result: &ClassificationResult) -> Result<PeriodReport> {
    if let MtCase::Rejected(reason) = &result.case {
        return Err(Error::Precondition(format!("no representative: {reason}")));
    }
    let (Some(model), Some(m)) = (&result.model, &result.representative) else {
        return Err(Error::Precondition("classification carries no representative".into()));
    };
    let mut rep = report_for(model, m, &result.name)?;
    if result.case == MtCase::I && result.n == 4 && result.r.as_ref().is_some_and(|r| r.value() == Rat::from_int(2)) {
        rep.notes.push(
            "Euler asked whether ζ(3) = α (log 2)^3 + β π^2 log 2 for rationals α, β. Algebraic independence of \
             2πi, log 2, ζ(3) and * rules this out, so such an identity would contradict the period conjecture."
                .into(),
        );
    }
    Ok(rep)
}
