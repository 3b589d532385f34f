//! Connecting lines of a configuration and their incidence spectrum.

use std::collections::{BTreeMap, HashMap};
use std::convert::Infallible;
use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::configurations::{Configuration, Oracle};
use crate::error::{Error, Result};
use crate::geometry::normalize_rational;
use crate::scalar::interval::Interval;
use crate::scalar::{ScalarTerm, Sign, SignEngine, SignPolicy, VecTerm};

/// How collinear groups are found.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// canonical keys for rational input, the oracle when attached,
    /// certified geometry otherwise
    #[default]
    Auto,
    Oracle,
    Geometric,
}

/// All lines through at least two points, each as its sorted member list.
/// Lines are ordered lexicographically by members.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineTable {
    n: usize,
    lines: Vec<Vec<usize>>,
}

impl LineTable {
    fn from_groups(n: usize, mut lines: Vec<Vec<usize>>) -> Self {
        for l in &mut lines {
            l.sort_unstable();
        }
        lines.sort();
        LineTable { n, lines }
    }

    pub fn point_count(&self) -> usize {
        self.n
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Lines with exactly two points.
    pub fn ordinary(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.lines.iter().filter(|l| l.len() == 2)
    }

    pub fn with_size(&self, k: usize) -> impl Iterator<Item = &Vec<usize>> {
        self.lines.iter().filter(move |l| l.len() == k)
    }

    /// Index of the line through points i and j.
    pub fn line_through(&self, i: usize, j: usize) -> Option<usize> {
        self.lines.iter().position(|l| l.binary_search(&i).is_ok() && l.binary_search(&j).is_ok())
    }

    /// Every pair covered exactly once, every line at least two points.
    pub fn validate(&self) -> Result<()> {
        let mut seen = vec![false; self.n * self.n];
        for l in &self.lines {
            if l.len() < 2 {
                return Err(Error::InvariantViolation("line with fewer than two points".into()));
            }
            for (a, &i) in l.iter().enumerate() {
                for &j in &l[a + 1..] {
                    let slot = &mut seen[i * self.n + j];
                    if *slot {
                        return Err(Error::InvariantViolation(format!("pair ({i}, {j}) on two lines")));
                    }
                    *slot = true;
                }
            }
        }
        for i in 0..self.n {
            for j in i + 1..self.n {
                if !seen[i * self.n + j] {
                    return Err(Error::InvariantViolation(format!("pair ({i}, {j}) on no line")));
                }
            }
        }
        Ok(())
    }
}

pub fn enumerate_lines(c: &Configuration) -> Result<LineTable> {
    enumerate_lines_with(c, Strategy::Auto, &SignPolicy::default())
}

pub fn enumerate_lines_with(c: &Configuration, strategy: Strategy, policy: &SignPolicy) -> Result<LineTable> {
    let n = c.len();
    if n < 2 {
        return Err(Error::InvalidParameter("need at least two points".into()));
    }
    match strategy {
        Strategy::Oracle => {
            let o = c.oracle().ok_or_else(|| Error::InvalidParameter("configuration has no oracle".into()))?;
            Ok(oracle_table(n, o))
        }
        Strategy::Geometric => geometric(c, policy),
        Strategy::Auto => {
            if c.points().iter().all(|p| p.is_rational()) {
                Ok(rational(c))
            } else if let Some(o) = c.oracle() {
                Ok(oracle_table(n, o))
            } else {
                geometric(c, policy)
            }
        }
    }
}

fn oracle_table(n: usize, o: &Oracle) -> LineTable {
    match greedy::<Infallible>(n, |i, j, k| Ok(o.collinear(i, j, k))) {
        Ok(t) => t,
        Err(e) => match e {},
    }
}

/// Lines grouped by canonical integer coefficient key.
fn rational(c: &Configuration) -> LineTable {
    let pts: Vec<[BigInt; 3]> = c.points().iter().map(|p| p.integer_coords().expect("rational point")).collect();
    let n = pts.len();
    let keyed: Vec<Vec<([BigInt; 3], usize, usize)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| {
                    let (a, b) = (&pts[i], &pts[j]);
                    let l = [
                        &a[1] * &b[2] - &a[2] * &b[1],
                        &a[2] * &b[0] - &a[0] * &b[2],
                        &a[0] * &b[1] - &a[1] * &b[0],
                    ];
                    (canonical_int(l), i, j)
                })
                .collect()
        })
        .collect();
    let mut groups: HashMap<[BigInt; 3], Vec<usize>> = HashMap::new();
    for (key, i, j) in keyed.into_iter().flatten() {
        let g = groups.entry(key).or_default();
        for x in [i, j] {
            if !g.contains(&x) {
                g.push(x);
            }
        }
    }
    LineTable::from_groups(n, groups.into_values().collect())
}

fn canonical_int(l: [BigInt; 3]) -> [BigInt; 3] {
    use num_rational::BigRational;
    let r = l.map(BigRational::from_integer);
    normalize_rational([&r[0], &r[1], &r[2]]).expect("distinct points span a line")
}

/// Generic first-uncovered-pair grouping with a collinearity test.
/// Deterministic: pairs are visited in lexicographic order.
fn greedy<E>(n: usize, mut col: impl FnMut(usize, usize, usize) -> std::result::Result<bool, E>) -> std::result::Result<LineTable, E> {
    let mut covered = vec![false; n * n];
    let mut lines = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if covered[i * n + j] {
                continue;
            }
            let mut members = vec![i, j];
            for k in j + 1..n {
                if !covered[i * n + k] && col(i, j, k)? {
                    members.push(k);
                }
            }
            for (a, &x) in members.iter().enumerate() {
                for &y in &members[a + 1..] {
                    covered[x * n + y] = true;
                }
            }
            lines.push(members);
        }
    }
    Ok(LineTable::from_groups(n, lines))
}

/// Certified grouping for irrational coordinates. Each candidate line is
/// enclosed once at base precision; only triples whose enclosure straddles
/// zero go through the full sign protocol.
fn geometric(c: &Configuration, policy: &SignPolicy) -> Result<LineTable> {
    let engine = c.sign_engine(policy);
    let n = c.len();
    let base = engine.base();
    let mut covered = vec![false; n * n];
    let mut lines = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if covered[i * n + j] {
                continue;
            }
            let line = base.as_ref().map(|b| VecTerm::join(i, j).eval::<Interval>(b));
            let cand: Vec<usize> = (j + 1..n).filter(|&k| !covered[i * n + k]).collect();
            let hits: Vec<Result<bool>> = cand
                .par_iter()
                .map(|&k| {
                    if let (Some(l), Some(b)) = (&line, &base) {
                        let p = &b[k];
                        let d = l[0].mul(&p[0]).add(&l[1].mul(&p[1])).add(&l[2].mul(&p[2]));
                        if matches!(d.sign(), Some(Sign::Positive | Sign::Negative)) {
                            return Ok(false);
                        }
                    }
                    on_line(&engine, i, j, k)
                })
                .collect();
            let mut members = vec![i, j];
            for (k, hit) in cand.into_iter().zip(hits) {
                if hit? {
                    members.push(k);
                }
            }
            for (a, &x) in members.iter().enumerate() {
                for &y in &members[a + 1..] {
                    covered[x * n + y] = true;
                }
            }
            lines.push(members);
        }
    }
    Ok(LineTable::from_groups(n, lines))
}

fn on_line(engine: &SignEngine, i: usize, j: usize, k: usize) -> Result<bool> {
    Ok(engine.sign(&ScalarTerm::collinear(i, j, k))? == Sign::Zero)
}

/// N_k for every k ≥ 2 that occurs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceSpectrum {
    n: usize,
    counts: BTreeMap<usize, u64>,
}

impl IncidenceSpectrum {
    pub fn from_table(t: &LineTable) -> Self {
        let mut counts = BTreeMap::new();
        for l in t.lines() {
            *counts.entry(l.len()).or_insert(0) += 1;
        }
        IncidenceSpectrum { n: t.point_count(), counts }
    }

    /// Raw constructor, e.g. for checking a claimed spectrum.
    pub fn from_counts(n: usize, counts: BTreeMap<usize, u64>) -> Self {
        let counts = counts.into_iter().filter(|&(_, v)| v > 0).collect();
        IncidenceSpectrum { n, counts }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    pub fn get(&self, k: usize) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn ordinary(&self) -> u64 {
        self.get(2)
    }

    pub fn three_rich(&self) -> u64 {
        self.get(3)
    }

    /// Σ N_k: the number of connecting lines.
    pub fn lines(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Σ k·N_k.
    pub fn incidences(&self) -> u64 {
        self.counts.iter().map(|(&k, &v)| k as u64 * v).sum()
    }

    /// All points on one line.
    pub fn is_collinear(&self) -> bool {
        self.n >= 2 && self.get(self.n) == 1 && self.lines() == 1
    }

    pub fn to_json(&self) -> Value {
        let m: serde_json::Map<String, Value> = self.counts.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        json!({ "n": self.n, "N": m })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,N_k\n");
        for (k, v) in &self.counts {
            let _ = writeln!(s, "{k},{v}");
        }
        s
    }
}

pub fn spectrum(c: &Configuration) -> Result<IncidenceSpectrum> {
    Ok(IncidenceSpectrum::from_table(&enumerate_lines(c)?))
}

pub fn spectrum_with(c: &Configuration, strategy: Strategy, policy: &SignPolicy) -> Result<IncidenceSpectrum> {
    Ok(IncidenceSpectrum::from_table(&enumerate_lines_with(c, strategy, policy)?))
}

fn choose2(k: u64) -> i128 {
    let k = k as i128;
    k * (k - 1) / 2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    /// Σ C(k,2)·N_k
    pub pair_sum: i128,
    /// C(n,2)
    pub pairs: i128,
    pub residual: i128,
    pub pass: bool,
}

/// The pair double-count Σ C(k,2)·N_k = C(n,2).
pub fn check_identities(s: &IncidenceSpectrum) -> IdentityReport {
    let pair_sum: i128 = s.counts.iter().map(|(&k, &v)| choose2(k as u64) * v as i128).sum();
    let pairs = choose2(s.n as u64);
    IdentityReport { pair_sum, pairs, residual: pair_sum - pairs, pass: pair_sum == pairs }
}

/// The sharp Dirac–Motzkin count: f(2m) = m, f(4m+1) = 3m, f(4m−1) = 3m−3.
pub fn dirac_motzkin_f(n: u64) -> u64 {
    if n % 2 == 0 {
        n / 2
    } else if n % 4 == 1 {
        3 * (n / 4)
    } else {
        3 * ((n + 1) / 4) - 3
    }
}

/// ⌊n(n−3)/6⌋ + 1.
pub fn orchard_bound(n: u64) -> u64 {
    if n < 3 {
        return 0;
    }
    n * (n - 3) / 6 + 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundStatus {
    /// both bounds hold
    Holds,
    /// at least one bound fails; expected only for small n
    SmallNException,
    /// all points on one line: the bounds say nothing
    Collinear,
    /// n < 3
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub ordinary: u64,
    pub f_n: u64,
    /// N_2 − f(n)
    pub ordinary_excess: i64,
    pub three_rich: u64,
    pub orchard_bound: u64,
    /// bound − N_3
    pub orchard_slack: i64,
    pub status: BoundStatus,
}

pub fn check_extremal_bounds(s: &IncidenceSpectrum) -> BoundReport {
    let n = s.n as u64;
    let f_n = dirac_motzkin_f(n);
    let ob = orchard_bound(n);
    let ordinary_excess = s.ordinary() as i64 - f_n as i64;
    let orchard_slack = ob as i64 - s.three_rich() as i64;
    let status = if n < 3 {
        BoundStatus::Skipped
    } else if s.is_collinear() {
        BoundStatus::Collinear
    } else if ordinary_excess < 0 || orchard_slack < 0 {
        BoundStatus::SmallNException
    } else {
        BoundStatus::Holds
    };
    BoundReport {
        n: s.n,
        ordinary: s.ordinary(),
        f_n,
        ordinary_excess,
        three_rich: s.three_rich(),
        orchard_bound: ob,
        orchard_slack,
        status,
    }
}
