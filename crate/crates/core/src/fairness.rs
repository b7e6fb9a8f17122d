//! EF, EF1, EFX and EF2 verdicts.
//!
//! Every check reduces to the envy gap of an ordered pair and the removal
//! effects `δ(a)` of single items (see [`crate::model::DeltaTable`]). Removing
//! a set `S` turns the gap into `gap − Σ_{a∈S} δ(a)`, so:
//!
//! * EF: `gap ≤ 0`;
//! * EF1: `gap ≤ max_a δ(a)`;
//! * EFX: `gap ≤ 0`, or no item has `δ > 0`, or `gap ≤ min_{δ(a)>0} δ(a)`;
//! * EF2: `gap ≤ max(0, top1, top1 + top2)` over the two largest `δ`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{delta_unchecked, Allocation, Instance};
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FairnessNotion {
    #[serde(rename = "EF")]
    Ef,
    #[serde(rename = "EF1")]
    Ef1,
    #[serde(rename = "EFX")]
    Efx,
    #[serde(rename = "EF2")]
    Ef2,
}

impl FairnessNotion {
    pub const ALL: [FairnessNotion; 4] =
        [FairnessNotion::Ef, FairnessNotion::Ef1, FairnessNotion::Efx, FairnessNotion::Ef2];

    pub fn as_str(self) -> &'static str {
        match self {
            FairnessNotion::Ef => "EF",
            FairnessNotion::Ef1 => "EF1",
            FairnessNotion::Efx => "EFX",
            FairnessNotion::Ef2 => "EF2",
        }
    }
}

impl fmt::Display for FairnessNotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FairnessNotion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "EF" => Ok(FairnessNotion::Ef),
            "EF1" => Ok(FairnessNotion::Ef1),
            "EFX" => Ok(FairnessNotion::Efx),
            "EF2" => Ok(FairnessNotion::Ef2),
            _ => Err(Error::Precondition(format!("unknown fairness notion `{s}`"))),
        }
    }
}

/// Outcome for one ordered pair `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairVerdict {
    pub i: usize,
    pub j: usize,
    pub pass: bool,
    pub gap: Value,
    /// On a pass: a removal set that brings the gap to `≤ 0` (empty when there
    /// is no envy). On a failure: the removal that shows envy survives (the
    /// best available set for EF1/EF2, the first envy-reducing item that does
    /// not eliminate envy for EFX, empty for EF).
    pub witness: Vec<usize>,
    /// EFX pass where `i` envies `j` but no single removal reduces the envy.
    pub vacuous: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FairnessVerdict {
    pub notion: FairnessNotion,
    pub pass: bool,
    /// All ordered pairs `i ≠ j` in lexicographic order.
    pub pairs: Vec<PairVerdict>,
}

impl FairnessVerdict {
    /// The lexicographically first failing pair.
    pub fn first_violation(&self) -> Option<&PairVerdict> {
        self.pairs.iter().find(|p| !p.pass)
    }

    pub fn pair(&self, i: usize, j: usize) -> Option<&PairVerdict> {
        self.pairs.iter().find(|p| p.i == i && p.j == j)
    }
}

/// Literal reading of EFX: positive envy with no envy-reducing item passes.
/// Flip this to make such pairs fail instead.
#[inline]
fn vacuous_envy_passes_efx() -> bool {
    true
}

pub fn check(inst: &Instance, alloc: &Allocation, notion: FairnessNotion) -> Result<FairnessVerdict> {
    inst.check_allocation(alloc)?;
    let n = inst.agents();
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1));
    let mut deltas = Vec::with_capacity(inst.item_count());
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            fill_deltas(inst, alloc.owners(), i, j, &mut deltas);
            pairs.push(judge_pair(notion, i, j, &deltas));
        }
    }
    let pass = pairs.iter().all(|p| p.pass);
    Ok(FairnessVerdict { notion, pass, pairs })
}

pub fn check_ef(inst: &Instance, alloc: &Allocation) -> Result<FairnessVerdict> {
    check(inst, alloc, FairnessNotion::Ef)
}

pub fn check_ef1(inst: &Instance, alloc: &Allocation) -> Result<FairnessVerdict> {
    check(inst, alloc, FairnessNotion::Ef1)
}

pub fn check_efx(inst: &Instance, alloc: &Allocation) -> Result<FairnessVerdict> {
    check(inst, alloc, FairnessNotion::Efx)
}

pub fn check_ef2(inst: &Instance, alloc: &Allocation) -> Result<FairnessVerdict> {
    check(inst, alloc, FairnessNotion::Ef2)
}

/// Boolean verdict on a raw owner vector, stopping at the first failing pair.
/// The caller guarantees the owner vector matches the instance.
pub fn is_fair(inst: &Instance, owner: &[usize], notion: FairnessNotion) -> bool {
    let n = inst.agents();
    let mut deltas = Vec::with_capacity(owner.len());
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            fill_deltas(inst, owner, i, j, &mut deltas);
            if !pair_passes(notion, &deltas) {
                return false;
            }
        }
    }
    true
}

fn fill_deltas(inst: &Instance, owner: &[usize], i: usize, j: usize, out: &mut Vec<Value>) {
    out.clear();
    out.extend((0..owner.len()).map(|a| delta_unchecked(inst, owner, i, j, a)));
}

/// First index attaining the maximum.
fn argmax(deltas: &[Value]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (a, d) in deltas.iter().enumerate() {
        if best.is_none_or(|b| d > &deltas[b]) {
            best = Some(a);
        }
    }
    best
}

/// Indices of the two largest deltas, ties broken by index.
fn top_two(deltas: &[Value]) -> (Option<usize>, Option<usize>) {
    let first = argmax(deltas);
    let mut second: Option<usize> = None;
    for (a, d) in deltas.iter().enumerate() {
        if Some(a) == first {
            continue;
        }
        if second.is_none_or(|b| d > &deltas[b]) {
            second = Some(a);
        }
    }
    (first, second)
}

fn pair_passes(notion: FairnessNotion, deltas: &[Value]) -> bool {
    let gap: Value = deltas.iter().sum();
    if !gap.is_positive() {
        return true;
    }
    match notion {
        FairnessNotion::Ef => false,
        FairnessNotion::Ef1 => match argmax(deltas) {
            Some(a) => gap <= deltas[a],
            None => true,
        },
        FairnessNotion::Efx => {
            let mut reducing = deltas.iter().filter(|d| d.is_positive()).peekable();
            if reducing.peek().is_none() {
                return vacuous_envy_passes_efx();
            }
            reducing.all(|d| &gap <= d)
        }
        FairnessNotion::Ef2 => {
            let (t1, t2) = top_two(deltas);
            let best = best_two_removal(deltas, t1, t2).1;
            gap <= best
        }
    }
}

/// Best removal set of size at most two and its total effect.
fn best_two_removal(deltas: &[Value], t1: Option<usize>, t2: Option<usize>) -> (Vec<usize>, Value) {
    let mut set = Vec::new();
    let mut total = Value::zero();
    if let Some(a) = t1 {
        if deltas[a].is_positive() {
            set.push(a);
            total += &deltas[a];
            if let Some(b) = t2 {
                if deltas[b].is_positive() {
                    set.push(b);
                    total += &deltas[b];
                }
            }
        }
    }
    (set, total)
}

fn judge_pair(notion: FairnessNotion, i: usize, j: usize, deltas: &[Value]) -> PairVerdict {
    let gap: Value = deltas.iter().sum();
    let mut verdict = PairVerdict { i, j, pass: true, gap: gap.clone(), witness: Vec::new(), vacuous: false };
    if !gap.is_positive() {
        return verdict;
    }
    match notion {
        FairnessNotion::Ef => verdict.pass = false,
        FairnessNotion::Ef1 => {
            if let Some(a) = argmax(deltas) {
                verdict.pass = gap <= deltas[a];
                verdict.witness = vec![a];
            }
        }
        FairnessNotion::Efx => {
            let violating = deltas.iter().position(|d| d.is_positive() && &gap > d);
            let weakest = deltas
                .iter()
                .enumerate()
                .filter(|(_, d)| d.is_positive())
                .min_by(|x, y| x.1.cmp(y.1).then(x.0.cmp(&y.0)))
                .map(|(a, _)| a);
            match (violating, weakest) {
                (Some(a), _) => {
                    verdict.pass = false;
                    verdict.witness = vec![a];
                }
                (None, Some(a)) => verdict.witness = vec![a],
                (None, None) => {
                    verdict.pass = vacuous_envy_passes_efx();
                    verdict.vacuous = true;
                }
            }
        }
        FairnessNotion::Ef2 => {
            let (t1, t2) = top_two(deltas);
            let (best_set, best) = best_two_removal(deltas, t1, t2);
            verdict.pass = gap <= best;
            if verdict.pass && best_set.len() == 2 && gap <= deltas[best_set[0]] {
                verdict.witness = vec![best_set[0]];
            } else {
                verdict.witness = best_set;
            }
        }
    }
    verdict
}
