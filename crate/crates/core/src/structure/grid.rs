//! Triangular grids of lines: p_i, q_j, r_k concurrent whenever i+j+k = 0.

use std::ops::RangeInclusive;

use num_rational::BigRational;
use serde::Serialize;
use serde_json::Value;

use crate::configurations::codec::{format_scalar, parse_scalar};
use crate::cubic::fit::{cubic_from_exact, cubic_nullspace, exact_field_points, vanishes};
use crate::error::{Error, Result};
use crate::geometry::ProjLine;
use crate::scalar::sign::Component;
use crate::scalar::{Scalar, Sign, SignEngine, SignPolicy, VecTerm};

#[derive(Clone, Debug)]
pub struct TriangularGrid {
    pub dims: [RangeInclusive<i64>; 3],
    /// families p, q, r; family f's entry for index i is at i − dims[f].start()
    pub lines: [Vec<ProjLine>; 3],
}

const NAMES: [&str; 3] = ["p", "q", "r"];

impl TriangularGrid {
    pub fn new(dims: [RangeInclusive<i64>; 3], lines: [Vec<ProjLine>; 3]) -> Result<Self> {
        for f in 0..3 {
            let len = (dims[f].end() - dims[f].start() + 1).max(0) as usize;
            if len == 0 || lines[f].len() != len {
                return Err(Error::InvalidParameter(format!("family {} needs one line per index", NAMES[f])));
            }
        }
        Ok(TriangularGrid { dims, lines })
    }

    /// Grid of duals of points [t, t³, 1] on the cuspidal cubic with
    /// t = index + offset; offsets must sum to zero for concurrency.
    pub fn cuspidal(dims: [RangeInclusive<i64>; 3], offsets: [BigRational; 3]) -> Result<Self> {
        let mut lines: [Vec<ProjLine>; 3] = Default::default();
        for f in 0..3 {
            for i in dims[f].clone() {
                let t = BigRational::from_integer(i.into()) + &offsets[f];
                let c = [Scalar::rational(t.clone()), Scalar::rational(&t * &t * &t), Scalar::one()];
                lines[f].push(ProjLine::new(c)?);
            }
        }
        Self::new(dims, lines)
    }

    /// {"I": [lo, hi], "J": [lo, hi], "K": [lo, hi], "p": [[a, b, c], …], "q": …, "r": …}
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::ParseError { line: 1, column: 1, message: m.to_string() };
        let range = |key: &str| -> Result<RangeInclusive<i64>> {
            let a = v.get(key).and_then(Value::as_array).filter(|a| a.len() == 2).ok_or_else(|| bad(&format!("{key} must be [lo, hi]")))?;
            let lo = a[0].as_i64().ok_or_else(|| bad("bounds must be integers"))?;
            let hi = a[1].as_i64().ok_or_else(|| bad("bounds must be integers"))?;
            Ok(lo..=hi)
        };
        let fam = |key: &str| -> Result<Vec<ProjLine>> {
            let arr = v.get(key).and_then(Value::as_array).ok_or_else(|| bad(&format!("missing line family {key}")))?;
            arr.iter()
                .map(|l| {
                    let c = l.as_array().filter(|c| c.len() == 3).ok_or_else(|| bad("a line is three coefficient strings"))?;
                    let s: Vec<Scalar> = c
                        .iter()
                        .map(|x| x.as_str().ok_or_else(|| bad("coefficients must be strings")).and_then(parse_scalar))
                        .collect::<Result<_>>()?;
                    ProjLine::new(s.try_into().unwrap())
                })
                .collect()
        };
        Self::new([range("I")?, range("J")?, range("K")?], [fam("p")?, fam("q")?, fam("r")?])
    }

    fn line(&self, f: usize, i: i64) -> Option<&ProjLine> {
        if !self.dims[f].contains(&i) {
            return None;
        }
        self.lines[f].get((i - self.dims[f].start()) as usize)
    }

    fn index(&self, f: usize, i: i64) -> usize {
        let off: usize = (0..f).map(|g| self.lines[g].len()).sum();
        off + (i - self.dims[f].start()) as usize
    }

    fn label(&self, flat: usize) -> String {
        let mut k = flat;
        for f in 0..3 {
            if k < self.lines[f].len() {
                return format!("{}_{}", NAMES[f], self.dims[f].start() + k as i64);
            }
            k -= self.lines[f].len();
        }
        unreachable!()
    }

    /// Index triples (i, j, k) with i + j + k = 0 inside the grid.
    pub fn triples(&self) -> Vec<[i64; 3]> {
        let mut out = Vec::new();
        for i in self.dims[0].clone() {
            for j in self.dims[1].clone() {
                if self.dims[2].contains(&(-i - j)) {
                    out.push([i, j, -i - j]);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridReport {
    pub axiom_i: bool,
    pub axiom_ii: bool,
    pub violations: Vec<String>,
    /// identical lines anywhere in the grid, reported separately
    pub duplicate_lines: Vec<(String, String)>,
    /// eight-forces-ninth on the nine lines indexed −1, 0, 1
    pub hexagon: Option<Vec<bool>>,
    /// the cubic through all dual points, when it is unique
    pub cubic: Option<String>,
    pub cubic_dimension: Option<usize>,
    pub unverified: Vec<String>,
}

impl GridReport {
    pub fn passes(&self) -> bool {
        self.axiom_i && self.axiom_ii && self.hexagon.as_ref().map_or(true, |h| h.iter().all(|&x| x))
    }
}

pub fn verify_triangular_grid(g: &TriangularGrid) -> Result<GridReport> {
    verify_triangular_grid_with(g, &SignPolicy::default())
}

pub fn verify_triangular_grid_with(g: &TriangularGrid, policy: &SignPolicy) -> Result<GridReport> {
    let all: Vec<[Scalar; 3]> = g.lines.iter().flatten().map(|l| l.coeffs().clone()).collect();
    let engine = SignEngine::new(all.clone(), *policy);
    let total = all.len();
    let mut violations = Vec::new();

    let mut duplicate_lines = Vec::new();
    for a in 0..total {
        for b in a + 1..total {
            if engine.same_point(a, b)? {
                duplicate_lines.push((g.label(a), g.label(b)));
            }
        }
    }

    // axiom (i)
    let mut axiom_i = true;
    for [i, j, k] in g.triples() {
        let (a, b, c) = (g.index(0, i), g.index(1, j), g.index(2, k));
        let name = format!("({i},{j},{k})");
        if engine.same_point(a, b)? || engine.same_point(b, c)? || engine.same_point(a, c)? {
            axiom_i = false;
            violations.push(format!("{name}: lines not distinct"));
            continue;
        }
        if !engine.collinear(a, b, c)? {
            axiom_i = false;
            violations.push(format!("{name}: lines not concurrent"));
            continue;
        }
        for s in 0..total {
            if s != a && s != b && s != c && engine.collinear(a, b, s)? {
                axiom_i = false;
                violations.push(format!("{name}: {} also passes through the meeting point", g.label(s)));
            }
        }
    }

    // axiom (ii): along each family, nearby meeting points are distinct
    let mut axiom_ii = true;
    for f in 0..3 {
        let (g1, g2) = ((f + 1) % 3, (f + 2) % 3);
        for x in g.dims[f].clone() {
            for y in g.dims[g1].clone() {
                for y2 in y + 1..=y + 2 {
                    let (z, z2) = (-x - y, -x - y2);
                    if !(g.dims[g1].contains(&y2) && g.dims[g2].contains(&z) && g.dims[g2].contains(&z2)) {
                        continue;
                    }
                    let base = g.index(f, x);
                    let p1 = VecTerm::join(base, g.index(g1, y));
                    let p2 = VecTerm::join(base, g.index(g1, y2));
                    let c = VecTerm::cross(p1, p2);
                    let mut same = true;
                    for axis in 0..3 {
                        if engine.sign_of(&Component(&c, axis))? != Sign::Zero {
                            same = false;
                            break;
                        }
                    }
                    if same {
                        axiom_ii = false;
                        violations.push(format!("{}_{x}: meeting points with {}_{y} and {}_{y2} coincide", NAMES[f], NAMES[g1], NAMES[g1]));
                    }
                }
            }
        }
    }

    let mut unverified = Vec::new();
    let mut hexagon = None;
    let mut cubic = None;
    let mut cubic_dimension = None;
    let unit = (-1..=1).all(|i| (0..3).all(|f| g.line(f, i).is_some()));
    match exact_field_points(&all) {
        Ok((field, exact)) => {
            let proto = crate::scalar::cyclotomic::CyElem::from_rational(&field, num_traits::Zero::zero());
            if unit {
                let nine: Vec<usize> = (0..3).flat_map(|f| (-1..=1).map(move |i| (f, i))).map(|(f, i)| g.index(f, i)).collect();
                let flags = (0..9)
                    .map(|skip| {
                        let pts: Vec<_> = (0..9).filter(|&t| t != skip).map(|t| exact[nine[t]].clone()).collect();
                        cubic_nullspace(&pts, &proto).iter().all(|v| vanishes(v, &exact[nine[skip]]))
                    })
                    .collect();
                hexagon = Some(flags);
            }
            let ns = cubic_nullspace(&exact, &proto);
            cubic_dimension = Some(ns.len());
            // only a unique cubic is meaningful; nine hexagon points span a pencil
            if ns.len() == 1 {
                cubic = Some(cubic_from_exact(&ns[0])?.to_string());
            }
        }
        Err(_) => unverified.push("coordinates are not cyclotomic; cubic checks skipped".into()),
    }

    Ok(GridReport { axiom_i, axiom_ii, violations, duplicate_lines, hexagon, cubic, cubic_dimension, unverified })
}

/// Line coefficients as strings, for reports.
pub fn line_strings(l: &ProjLine) -> Vec<String> {
    l.coeffs().iter().map(format_scalar).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn offsets() -> [BigRational; 3] {
        [BigRational::new(1.into(), 7.into()), BigRational::new(2.into(), 7.into()), BigRational::new((-3).into(), 7.into())]
    }

    #[test]
    fn cuspidal_grid_passes() {
        let g = TriangularGrid::cuspidal([-2..=2, -2..=2, -2..=2], offsets()).unwrap();
        let r = verify_triangular_grid(&g).unwrap();
        assert!(r.passes(), "{:?}", r.violations);
        assert_eq!(r.hexagon.as_ref().unwrap().len(), 9);
        assert_eq!(r.cubic.as_deref(), Some("x^3 - y*z^2"));
        assert_eq!(r.cubic_dimension, Some(1));
        assert!(r.duplicate_lines.is_empty());
    }

    #[test]
    fn repeated_line_violates_axiom_i() {
        let mut g = TriangularGrid::cuspidal([-1..=1, -1..=1, -1..=1], offsets()).unwrap();
        g.lines[1][1] = g.lines[0][1].clone();
        let r = verify_triangular_grid(&g).unwrap();
        assert!(!r.axiom_i);
        assert_eq!(r.duplicate_lines, vec![("p_0".to_string(), "q_0".to_string())]);
    }
}
