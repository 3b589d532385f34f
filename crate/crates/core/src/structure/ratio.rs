//! Signed-length ratio maps on a line, quotient sets and the Menelaus
//! correspondence between three lines.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{collinear, join, meet, ProjLine, ProjPoint};
use crate::scalar::{Scalar, Sign, SignPolicy};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RatioValue {
    Finite(Scalar),
    Infinity,
}

impl RatioValue {
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            RatioValue::Finite(s) => s.as_rational(),
            RatioValue::Infinity => None,
        }
    }
}

/// ψ_{q,q′}(p) = length(pq) / length(pq′), signed along the line, measured
/// in the affine chart {λ·v = 1}.
#[derive(Clone, Debug)]
pub struct RatioMap {
    line: ProjLine,
    q: ProjPoint,
    q2: ProjPoint,
    chart: [i64; 3],
    policy: SignPolicy,
}

/// Charts tried in order; the first keeps the usual affine plane z = 1.
const CHARTS: [[i64; 3]; 7] = [[0, 0, 1], [1, 0, 0], [0, 1, 0], [1, 1, 0], [1, -1, 0], [1, 1, 1], [1, -1, 1]];

fn is_zero(s: &Scalar, policy: &SignPolicy) -> Result<bool> {
    Ok(s.sign(policy)? == Sign::Zero)
}

fn dot(a: &[Scalar; 3], b: &[Scalar; 3]) -> Scalar {
    a[0].mul(&b[0]).add(&a[1].mul(&b[1])).add(&a[2].mul(&b[2]))
}

fn chart_value(chart: &[i64; 3], v: &ProjPoint) -> Scalar {
    dot(&chart.map(Scalar::int), v.coords())
}

fn incident(l: &ProjLine, p: &ProjPoint, policy: &SignPolicy) -> Result<bool> {
    is_zero(&dot(l.coeffs(), p.coords()), policy)
}

/// First chart in which all given points are finite.
pub fn common_chart(points: &[&ProjPoint], policy: &SignPolicy) -> Result<[i64; 3]> {
    for c in CHARTS {
        let mut ok = true;
        for p in points {
            if is_zero(&chart_value(&c, p), policy)? {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(c);
        }
    }
    Err(Error::InvalidParameter("no standard affine chart contains all anchors".into()))
}

impl RatioMap {
    pub fn new(line: ProjLine, q: ProjPoint, q2: ProjPoint) -> Result<Self> {
        let policy = SignPolicy::default();
        let chart = common_chart(&[&q, &q2], &policy)?;
        Self::with_chart(line, q, q2, chart, policy)
    }

    pub fn with_chart(line: ProjLine, q: ProjPoint, q2: ProjPoint, chart: [i64; 3], policy: SignPolicy) -> Result<Self> {
        if !incident(&line, &q, &policy)? || !incident(&line, &q2, &policy)? {
            return Err(Error::OffLine);
        }
        if join(&q, &q2).is_err() {
            return Err(Error::InvalidParameter("anchor points must be distinct".into()));
        }
        if is_zero(&chart_value(&chart, &q), &policy)? || is_zero(&chart_value(&chart, &q2), &policy)? {
            return Err(Error::InvalidParameter("anchors must be finite in the chart".into()));
        }
        Ok(RatioMap { line, q, q2, chart, policy })
    }

    pub fn line(&self) -> &ProjLine {
        &self.line
    }

    /// Chart functional; anything but [0, 0, 1] records a change of chart.
    pub fn chart(&self) -> [i64; 3] {
        self.chart
    }

    /// The map with anchors swapped; its values are reciprocal.
    pub fn swapped(&self) -> RatioMap {
        RatioMap { q: self.q2.clone(), q2: self.q.clone(), ..self.clone() }
    }

    pub fn eval(&self, p: &ProjPoint) -> Result<RatioValue> {
        if !incident(&self.line, p, &self.policy)? {
            return Err(Error::OffLine);
        }
        let lp = chart_value(&self.chart, p);
        // at the chart's infinity both lengths blow up equally
        if is_zero(&lp, &self.policy)? {
            return Ok(RatioValue::Finite(Scalar::one()));
        }
        let affine = |v: &ProjPoint, l: &Scalar| -> Result<Vec<Scalar>> { v.coords().iter().map(|x| x.div(l)).collect() };
        let pa = affine(p, &lp)?;
        let qa = affine(&self.q, &chart_value(&self.chart, &self.q))?;
        let ra = affine(&self.q2, &chart_value(&self.chart, &self.q2))?;
        // p − q and p − q′ are parallel; compare them along q′ − q
        for i in 0..3 {
            if is_zero(&ra[i].sub(&qa[i]), &self.policy)? {
                continue;
            }
            let num = pa[i].sub(&qa[i]);
            let den = pa[i].sub(&ra[i]);
            return if is_zero(&den, &self.policy)? {
                Ok(RatioValue::Infinity)
            } else {
                Ok(RatioValue::Finite(num.div(&den)?))
            };
        }
        Err(Error::InvalidParameter("anchor points must be distinct".into()))
    }
}

/// {x/y : x, y ∈ X}.
pub fn quotient_set(xs: &[BigRational]) -> Result<BTreeSet<BigRational>> {
    if xs.iter().any(Zero::is_zero) {
        return Err(Error::DomainError("quotient sets exclude 0".into()));
    }
    Ok(xs.iter().flat_map(|a| xs.iter().map(move |b| a / b)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MenelausReport {
    pub pairs: usize,
    /// distinct points (join(x_i, x_j) ∩ ℓ_k)
    pub intersections: usize,
    /// distinct values φ(x_i) / φ̃(x_j), ∞ included
    pub quotients: usize,
    /// ψ on ℓ_k at each intersection equals the quotient
    pub identity_holds: bool,
    pub bijective: bool,
    /// pairs whose joining line is ℓ_k itself
    pub degenerate_pairs: usize,
}

impl MenelausReport {
    pub fn pass(&self) -> bool {
        self.identity_holds && self.bijective && self.intersections == self.quotients
    }
}

fn key(v: &RatioValue) -> Option<BigRational> {
    v.as_rational().cloned()
}

/// With C = ℓi∩ℓj, B = ℓi∩ℓk, A = ℓj∩ℓk the ratio maps are φ = ψ_{C,B} on ℓi,
/// φ̃ = ψ_{C,A} on ℓj and ψ_{A,B} on ℓk; Menelaus gives
/// ψ_{A,B}(x_k) = φ(x_i) / φ̃(x_j).
pub fn menelaus_check(
    li: &ProjLine,
    lj: &ProjLine,
    lk: &ProjLine,
    xi: &[ProjPoint],
    xj: &[ProjPoint],
    gamma: &[(usize, usize)],
) -> Result<MenelausReport> {
    if [li, lj, lk].iter().any(|l| !l.is_rational()) || xi.iter().chain(xj).any(|p| !p.is_rational()) {
        return Err(Error::NonRationalInput);
    }
    let c = meet(li, lj)?;
    let b = meet(li, lk)?;
    let a = meet(lj, lk)?;
    if collinear(&a, &b, &c)? || a == b {
        return Err(Error::ConcurrentLines);
    }
    // Menelaus is affine: all three maps share one chart
    let policy = SignPolicy::default();
    let chart = common_chart(&[&a, &b, &c], &policy)?;
    let phi = RatioMap::with_chart(li.clone(), c.clone(), b.clone(), chart, policy)?;
    let phit = RatioMap::with_chart(lj.clone(), c.clone(), a.clone(), chart, policy)?;
    let psi = RatioMap::with_chart(lk.clone(), a, b, chart, policy)?;

    let mut points = BTreeSet::new();
    let mut quotients: BTreeSet<Option<BigRational>> = BTreeSet::new();
    let mut by_quotient: std::collections::BTreeMap<Option<BigRational>, BTreeSet<Vec<String>>> = Default::default();
    let mut identity_holds = true;
    let mut degenerate_pairs = 0;
    for &(s, t) in gamma {
        let (p, q) = (
            xi.get(s).ok_or_else(|| Error::InvalidParameter(format!("no point {s} on the first line")))?,
            xj.get(t).ok_or_else(|| Error::InvalidParameter(format!("no point {t} on the second line")))?,
        );
        if *p == c || *q == c {
            return Err(Error::InvalidParameter("points must avoid the meeting point of the first two lines".into()));
        }
        let (u, v) = (key(&phi.eval(p)?), key(&phit.eval(q)?));
        let joined = join(p, q)?;
        let Ok(xk) = meet(&joined, lk) else {
            degenerate_pairs += 1;
            continue;
        };
        let quotient = match (u, v) {
            (None, None) => {
                degenerate_pairs += 1;
                continue;
            }
            (None, Some(_)) => None,
            (Some(_), None) => Some(BigRational::zero()),
            (Some(u), Some(v)) if v.is_zero() => {
                if u.is_zero() {
                    degenerate_pairs += 1;
                    continue;
                }
                None
            }
            (Some(u), Some(v)) => Some(u / v),
        };
        let actual = key(&psi.eval(&xk)?);
        identity_holds &= actual == quotient;
        let name: Vec<String> = xk.integer_coords().unwrap().iter().map(ToString::to_string).collect();
        points.insert(name.clone());
        quotients.insert(quotient.clone());
        by_quotient.entry(quotient).or_default().insert(name);
    }
    let bijective = by_quotient.values().all(|s| s.len() == 1);
    Ok(MenelausReport {
        pairs: gamma.len(),
        intersections: points.len(),
        quotients: quotients.len(),
        identity_holds,
        bijective,
        degenerate_pairs,
    })
}
