//! Covering a configuration by few cubic curves, following the dual-grid
//! argument: find a dual line with few edges that are not really good, fit
//! one cubic to the points around each run of really good edges on it, and
//! cover what is left by connecting lines.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::arrangement::{build_dual_arrangement_with, classify_edges, BuildOptions, EdgeInfo};
use crate::configurations::codec::format_scalar;
use crate::configurations::Configuration;
use crate::cubic::fit::{cubic_from_exact, cubic_nullspace, exact_field_points, vanishes};
use crate::cubic::Cubic;
use crate::error::Result;
use crate::geometry::{join, ProjLine};
use crate::incidence::IncidenceSpectrum;
use crate::scalar::cyclotomic::CyElem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverCurve {
    Cubic(Cubic),
    Line(ProjLine),
}

impl CoverCurve {
    pub fn degree(&self) -> usize {
        match self {
            CoverCurve::Cubic(_) => 3,
            CoverCurve::Line(_) => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverEntry {
    pub curve: CoverCurve,
    /// every configuration point on the curve, verified exactly
    pub points: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CubicCover {
    pub entries: Vec<CoverEntry>,
    pub uncovered: Vec<usize>,
    /// the point whose dual line carried the fewest not-really-good edges
    pub base_point: usize,
    pub not_really_good_on_base: usize,
    pub segments: usize,
    /// a segment fit failed or residual points needed lines
    pub fallback: bool,
    /// all points lay on a single cubic, which replaced the piecewise cover
    pub consolidated: bool,
    /// 500·N_2/n
    pub budget: f64,
}

impl CubicCover {
    pub fn is_complete(&self) -> bool {
        self.uncovered.is_empty()
    }

    pub fn within_budget(&self) -> bool {
        self.entries.len() as f64 <= self.budget
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| match &e.curve {
                CoverCurve::Cubic(c) => json!({
                    "kind": "cubic",
                    "equation": c.to_string(),
                    "coeffs": c.to_strings(),
                    "points": e.points,
                }),
                CoverCurve::Line(l) => json!({
                    "kind": "line",
                    "coeffs": l.coeffs().iter().map(format_scalar).collect::<Vec<_>>(),
                    "points": e.points,
                }),
            })
            .collect();
        json!({
            "curves": entries,
            "uncovered": self.uncovered,
            "complete": self.is_complete(),
            "base_point": self.base_point,
            "not_really_good_on_base": self.not_really_good_on_base,
            "segments": self.segments,
            "fallback": self.fallback,
            "consolidated": self.consolidated,
            "budget": self.budget,
            "within_budget": self.within_budget(),
        })
    }
}

pub fn cover_by_cubics(c: &Configuration) -> Result<CubicCover> {
    cover_by_cubics_with(c, &BuildOptions::default())
}

pub fn cover_by_cubics_with(c: &Configuration, opts: &BuildOptions) -> Result<CubicCover> {
    let dcel = build_dual_arrangement_with(c, opts)?;
    let table = dcel.table().clone();
    let edges = classify_edges(&dcel);
    let n = c.len();
    let triples: Vec<_> = c.points().iter().map(|p| p.coords().clone()).collect();
    let (field, exact) = exact_field_points(&triples)?;
    let proto = CyElem::from_rational(&field, num_traits::Zero::zero());

    // dual line with the fewest edges that are not really good
    let mut per_circle: Vec<Vec<&EdgeInfo>> = vec![Vec::new(); n];
    for e in &edges {
        per_circle[e.circle].push(e);
    }
    let (base_point, bad) = per_circle
        .iter()
        .enumerate()
        .map(|(p, es)| (p, es.iter().filter(|e| !e.really_good).count()))
        .min_by_key(|&(p, b)| (b, p))
        .expect("non-empty configuration");

    // maximal cyclic runs of really good edges along it
    let ring = &per_circle[base_point];
    let runs = cyclic_runs(&ring.iter().map(|e| e.really_good).collect::<Vec<_>>());
    let on_curve = |coeffs: &[CyElem]| -> Vec<usize> { (0..n).filter(|&i| vanishes(coeffs, &exact[i])).collect() };

    let mut entries = Vec::new();
    let mut fallback = false;
    for run in &runs {
        let lines: BTreeSet<usize> = run.iter().flat_map(|&t| [ring[t].lines.0, ring[t].lines.1]).collect();
        let group: BTreeSet<usize> = lines.iter().flat_map(|&l| table.lines()[l].iter().copied()).collect();
        let pts: Vec<[CyElem; 3]> = group.iter().map(|&i| exact[i].clone()).collect();
        match cubic_nullspace(&pts, &proto).into_iter().next() {
            Some(v) => entries.push(CoverEntry { curve: CoverCurve::Cubic(cubic_from_exact(&v)?), points: on_curve(&v) }),
            None => fallback = true,
        }
    }

    // residual points: greedily by the connecting line with most of them
    let mut covered = vec![false; n];
    for e in &entries {
        for &i in &e.points {
            covered[i] = true;
        }
    }
    while let Some(i) = (0..n).find(|&i| !covered[i]) {
        fallback = true;
        let best = table
            .lines()
            .iter()
            .filter(|l| l.contains(&i))
            .max_by_key(|l| (l.iter().filter(|&&j| !covered[j]).count(), std::cmp::Reverse(l[0])))
            .expect("every point lies on a connecting line");
        let line = join(&c.points()[best[0]], &c.points()[best[1]])?;
        for &j in best {
            covered[j] = true;
        }
        entries.push(CoverEntry { curve: CoverCurve::Line(line), points: best.clone() });
    }

    // a cover of total degree above three is replaced by one cubic when
    // all points lie on one
    let mut consolidated = false;
    if entries.iter().map(|e| e.curve.degree()).sum::<usize>() > 3 {
        if let Some(v) = cubic_nullspace(&exact, &proto).into_iter().next() {
            entries = vec![CoverEntry { curve: CoverCurve::Cubic(cubic_from_exact(&v)?), points: (0..n).collect() }];
            consolidated = true;
        }
    }

    let mut seen = vec![false; n];
    for e in &entries {
        for &i in &e.points {
            seen[i] = true;
        }
    }
    let spectrum = IncidenceSpectrum::from_table(&table);
    Ok(CubicCover {
        entries,
        uncovered: (0..n).filter(|&i| !seen[i]).collect(),
        base_point,
        not_really_good_on_base: bad,
        segments: runs.len(),
        fallback,
        consolidated,
        budget: 500.0 * spectrum.ordinary() as f64 / n as f64,
    })
}

/// Maximal runs of `true` in a cyclic sequence, as index lists.
fn cyclic_runs(flags: &[bool]) -> Vec<Vec<usize>> {
    let len = flags.len();
    if len == 0 {
        return Vec::new();
    }
    if flags.iter().all(|&f| f) {
        return vec![(0..len).collect()];
    }
    // start just after some false entry so no run wraps past the start
    let start = (0..len).find(|&i| !flags[i]).unwrap() + 1;
    let mut runs = Vec::new();
    let mut cur = Vec::new();
    for s in 0..len {
        let i = (start + s) % len;
        if flags[i] {
            cur.push(i);
        } else if !cur.is_empty() {
            runs.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        runs.push(cur);
    }
    runs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configurations::{generate, Family, FamilySpec};
    use crate::geometry::ProjPoint;

    #[test]
    fn runs() {
        assert_eq!(cyclic_runs(&[true, false, true, true]), vec![vec![2, 3, 0]]);
        assert_eq!(cyclic_runs(&[false, true, false, true]), vec![vec![1], vec![3]]);
        assert_eq!(cyclic_runs(&[true, true]), vec![vec![0, 1]]);
    }

    #[test]
    fn two_lines() {
        let mut pts = Vec::new();
        for x in 1..=4 {
            pts.push(ProjPoint::ints(x, 0, 1).unwrap());
        }
        for y in 1..=3 {
            pts.push(ProjPoint::ints(0, y, 1).unwrap());
        }
        let c = Configuration::new(pts).unwrap();
        let cov = cover_by_cubics(&c).unwrap();
        assert!(cov.is_complete());
        assert_eq!(cov.entries.len(), 2);
        assert!(cov.entries.iter().all(|e| e.curve.degree() == 1));
    }

    #[test]
    fn boroczky_circle_and_infinity() {
        let c = generate(&FamilySpec::new(Family::BoroczkyBase, 8)).unwrap();
        let cov = cover_by_cubics(&c).unwrap();
        assert!(cov.is_complete());
        assert_eq!(cov.entries.len(), 1);
        match &cov.entries[0].curve {
            CoverCurve::Cubic(k) => assert_eq!(k.to_string(), "x^2*z + y^2*z - z^3"),
            other => panic!("{other:?}"),
        }
    }
}
