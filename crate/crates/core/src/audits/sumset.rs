//! Restricted sumsets A +_Γ B and the robust lower bounds for them.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Multiply,
}

/// Γ ⊆ A × B, stored as index pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairSet {
    pairs: BTreeSet<(usize, usize)>,
}

impl PairSet {
    pub fn full(r: usize, s: usize) -> Self {
        PairSet { pairs: (0..r).flat_map(|i| (0..s).map(move |j| (i, j))).collect() }
    }

    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        PairSet { pairs: pairs.into_iter().collect() }
    }

    pub fn remove(&mut self, p: (usize, usize)) -> bool {
        self.pairs.remove(&p)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, usize)> {
        self.pairs.iter()
    }

    fn check(&self, r: usize, s: usize) -> Result<()> {
        match self.pairs.iter().find(|&&(i, j)| i >= r || j >= s) {
            Some(p) => Err(Error::InvalidParameter(format!("pair {p:?} is outside A × B"))),
            None => Ok(()),
        }
    }
}

/// {a ∘ b : (a, b) ∈ Γ} for any binary operation.
pub fn restricted_image<T, F>(a: &[T], b: &[T], gamma: &PairSet, op: F) -> Result<BTreeSet<T>>
where
    T: Ord,
    F: Fn(&T, &T) -> T,
{
    gamma.check(a.len(), b.len())?;
    Ok(gamma.iter().map(|&(i, j)| op(&a[i], &b[j])).collect())
}

pub fn restricted_sumset(a: &[BigRational], b: &[BigRational], gamma: &PairSet, op: Op) -> Result<BTreeSet<BigRational>> {
    match op {
        Op::Add => restricted_image(a, b, gamma, |x, y| x + y),
        Op::Multiply => restricted_image(a, b, gamma, |x, y| x * y),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Additive,
    Multiplicative,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumsetReport {
    pub mode: Mode,
    pub r: usize,
    pub s: usize,
    pub pairs: usize,
    /// smallest δ with |Γ| ≥ (1 − δ)rs
    pub delta: String,
    pub size: usize,
    /// r + s − c − 2√(2δrs), for display only
    pub bound: f64,
    pub holds: bool,
}

/// |U +_Γ V| ≥ r + s − 2 − 2√(2δrs) (additive) or r + s − 4 − 2√(2δrs)
/// (multiplicative, nonzero reals), decided exactly by squaring.
pub fn sumset_bound_check(u: &[BigRational], v: &[BigRational], gamma: &PairSet, mode: Mode) -> Result<SumsetReport> {
    let dedup = |x: &[BigRational]| x.iter().collect::<BTreeSet<_>>().len() == x.len();
    if !dedup(u) || !dedup(v) {
        return Err(Error::InvalidParameter("U and V must be sets".into()));
    }
    let (op, c) = match mode {
        Mode::Additive => (Op::Add, 2i64),
        Mode::Multiplicative => {
            if u.iter().chain(v).any(Zero::is_zero) {
                return Err(Error::DomainError("multiplicative sets exclude 0".into()));
            }
            (Op::Multiply, 4)
        }
    };
    let (r, s) = (u.len(), v.len());
    let size = restricted_sumset(u, v, gamma, op)?.len();
    let rs = (r * s) as i64;
    let missing = rs - gamma.len() as i64;
    // 8δrs = 8(rs − |Γ|)
    let gap = r as i64 + s as i64 - c - size as i64;
    let holds = gap <= 0 || gap * gap <= 8 * missing;
    let delta = if rs == 0 { BigRational::zero() } else { BigRational::new(missing.into(), rs.into()) };
    let bound = r as f64 + s as f64 - c as f64 - 2.0 * (8.0 * missing as f64 / 4.0).sqrt();
    debug_assert!(!delta.is_negative());
    Ok(SumsetReport { mode, r, s, pairs: gamma.len(), delta: delta.to_string(), size, bound, holds })
}

/// A − B.
pub fn difference_set(a: &[BigRational], b: &[BigRational]) -> BTreeSet<BigRational> {
    a.iter().flat_map(|x| b.iter().map(move |y| x - y)).collect()
}
