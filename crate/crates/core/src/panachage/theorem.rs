use serde::Serialize;

use crate::axioms::ia1_for_all_q;
use crate::error::{Error, Result};
use crate::ext::{min_split_support, ExtClass};
use crate::lie::{is_large_u, u_of};
use crate::rep::{w_quotient, w_sub, RepObject};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem3Report {
    pub p: i64,
    /// `u(W_p M)` is large.
    pub hyp_sub_large: bool,
    /// `u(M / W_{p-1} M)` is large.
    pub hyp_quotient_large: bool,
    /// IA1 at `(p, q)` for every `q <= p`.
    pub hyp_ia1: bool,
    pub conclusion_large: bool,
    pub dim_u: usize,
    /// Hypotheses imply the conclusion (vacuous when some hypothesis fails).
    pub implication_holds: bool,
    /// Large `u(M)` forces both hypotheses on sub and quotient.
    pub converse_holds: bool,
}

impl Theorem3Report {
    pub fn hypotheses_hold(&self) -> bool {
        self.hyp_sub_large && self.hyp_quotient_large && self.hyp_ia1
    }

    pub fn consistent(&self) -> bool {
        self.implication_holds && self.converse_holds
    }
}

pub fn theorem3_verify(m: &RepObject, p: i64) -> Result<Theorem3Report> {
    if p >= 0 {
        return Err(Error::Precondition(format!("p = {p} must be negative")));
    }
    let top: Vec<usize> = (0..m.dim()).filter(|&a| m.weight(a) > p).collect();
    if top.len() != 1 || m.character(top[0]).iter().any(|&c| c != 0) {
        return Err(Error::Precondition("M / W_p M must be the unit object".into()));
    }
    if !(0..m.dim()).any(|a| m.weight(a) == p) {
        return Err(Error::Precondition(format!("Gr_{p} M is zero")));
    }
    let hyp_sub_large = is_large_u(&w_sub(m, p));
    let hyp_quotient_large = is_large_u(&w_quotient(m, p - 1));
    let hyp_ia1 = ia1_for_all_q(m, p);
    let conclusion_large = is_large_u(m);
    let all = hyp_sub_large && hyp_quotient_large && hyp_ia1;
    Ok(Theorem3Report {
        p,
        hyp_sub_large,
        hyp_quotient_large,
        hyp_ia1,
        conclusion_large,
        dim_u: u_of(m).dim(),
        implication_holds: !all || conclusion_large,
        converse_holds: !conclusion_large || (hyp_sub_large && hyp_quotient_large),
    })
}

/// Every pushforward to a nonzero quotient of the (pure) target is nonzero.
pub fn is_totally_nonsplit(e: &ExtClass) -> Result<bool> {
    let support = min_split_support(e)?;
    Ok(e.target.dim() > 0 && support.dim() == e.target.dim())
}
