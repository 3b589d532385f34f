//! Generators for the named example families.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::oracle::{Label, Oracle, Rule};
use super::Configuration;
use crate::error::{Error, Result};
use crate::geometry::ProjPoint;
use crate::scalar::{Scalar, TrigFn};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    BoroczkyBase,
    BoroczkyPlusOrigin,
    BoroczkyMinusPole,
    BoroczkyOddMinusInfinity,
    NearBoroczky,
    SylvesterAcnodal,
    NearCeP1,
    NearCeP2,
    NearCeP3,
    NearCeP4,
    KellyMoser,
    SquareGrid,
    RandomRational,
}

impl Family {
    pub const ALL: [Family; 13] = [
        Family::BoroczkyBase,
        Family::BoroczkyPlusOrigin,
        Family::BoroczkyMinusPole,
        Family::BoroczkyOddMinusInfinity,
        Family::NearBoroczky,
        Family::SylvesterAcnodal,
        Family::NearCeP1,
        Family::NearCeP2,
        Family::NearCeP3,
        Family::NearCeP4,
        Family::KellyMoser,
        Family::SquareGrid,
        Family::RandomRational,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::BoroczkyBase => "boroczky-base",
            Family::BoroczkyPlusOrigin => "boroczky-plus-origin",
            Family::BoroczkyMinusPole => "boroczky-minus-pole",
            Family::BoroczkyOddMinusInfinity => "boroczky-odd-minus-infinity",
            Family::NearBoroczky => "near-boroczky",
            Family::SylvesterAcnodal => "sylvester-acnodal",
            Family::NearCeP1 => "near-ce-p1",
            Family::NearCeP2 => "near-ce-p2",
            Family::NearCeP3 => "near-ce-p3",
            Family::NearCeP4 => "near-ce-p4",
            Family::KellyMoser => "kelly-moser",
            Family::SquareGrid => "square-grid",
            Family::RandomRational => "random-rational",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "boroczky" {
            return Ok(Family::BoroczkyBase);
        }
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown family '{s}'")))
    }
}

/// Which member of a family to build. `size` is m for the Böröczky
/// families, n for the Sylvester and random families, the truncation radius
/// N for p1–p4 and the side length for the square grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub size: i64,
    pub shift: Option<BigRational>,
    pub seed: Option<u64>,
    /// coordinate box half-width for random-rational
    pub radius: Option<i64>,
}

impl FamilySpec {
    pub fn new(family: Family, size: i64) -> Self {
        FamilySpec { family, size, shift: None, seed: None, radius: None }
    }

    pub fn shift(mut self, s: BigRational) -> Self {
        self.shift = Some(s);
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn radius(mut self, r: i64) -> Self {
        self.radius = Some(r);
        self
    }

    fn meta(&self) -> BTreeMap<String, Value> {
        let mut m = BTreeMap::new();
        m.insert("family".into(), json!(self.family.name()));
        m.insert("size".into(), json!(self.size));
        if let Some(s) = &self.shift {
            m.insert("shift".into(), json!(s.to_string()));
        }
        if let Some(s) = self.seed {
            m.insert("seed".into(), json!(s));
        }
        if let Some(r) = self.radius {
            m.insert("radius".into(), json!(r));
        }
        m
    }

    /// Rebuild a spec from configuration metadata, if it names a family.
    pub fn from_meta(meta: &BTreeMap<String, Value>) -> Option<Self> {
        let family: Family = meta.get("family")?.as_str()?.parse().ok()?;
        let size = meta.get("size")?.as_i64()?;
        let shift = match meta.get("shift") {
            Some(v) => Some(v.as_str()?.parse().ok()?),
            None => None,
        };
        Some(FamilySpec {
            family,
            size,
            shift,
            seed: meta.get("seed").and_then(Value::as_u64),
            radius: meta.get("radius").and_then(Value::as_i64),
        })
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pt(coords: [Scalar; 3]) -> ProjPoint {
    ProjPoint::new(coords).expect("generated point is nonzero")
}

fn circle_point(j: i64, m: i64) -> ProjPoint {
    let t = q(j, m);
    pt([Scalar::cos_turns(&t), Scalar::sin_turns(&t), Scalar::one()])
}

fn infinite_point(k: i64, m: i64) -> ProjPoint {
    // [−sin πk/M, cos πk/M, 0]
    pt([Scalar::sin_pi(&q(-k, m)), Scalar::cos_pi(&q(k, m)), Scalar::zero()])
}

/// X_{2M}: M circle points then M infinite points.
fn boroczky_points(m: i64) -> (Vec<ProjPoint>, Vec<Label>) {
    let mut pts = Vec::new();
    let mut labels = Vec::new();
    for j in 0..m {
        pts.push(circle_point(j, m));
        labels.push(Label::Circle(j));
    }
    for k in 0..m {
        pts.push(infinite_point(k, m));
        labels.push(Label::Infinite(k));
    }
    (pts, labels)
}

/// The point φ(x) = [sin πx, cos πx, sin³ πx] on y²z = x³ − x²z.
/// Rational exactly when cot πx is (x ≡ 0, 1/4, 1/2, 3/4), in which case
/// the point is (1 + t², t(1 + t²)) with t = cot πx, or [0,1,0] at x ≡ 0.
pub fn acnodal_point(x: &BigRational) -> ProjPoint {
    if x.is_integer() {
        return ProjPoint::ints(0, 1, 0).unwrap();
    }
    if let Ok(Scalar::Rational(t)) = Scalar::trig(TrigFn::Cot, x) {
        let w = BigRational::from_integer(1.into()) + &t * &t;
        let y = &t * &w;
        return pt([Scalar::rational(w), Scalar::rational(y), Scalar::one()]);
    }
    let s = Scalar::sin_pi(x);
    let c = Scalar::cos_pi(x);
    pt([s.clone(), c, s.pow(3)])
}

fn check(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg.into()))
    }
}

/// Builds the configuration named by `spec`.
pub fn generate(spec: &FamilySpec) -> Result<Configuration> {
    let meta = spec.meta();
    let size = spec.size;
    let (points, oracle) = match spec.family {
        Family::BoroczkyBase => {
            check(size >= 3, "boroczky m must be at least 3")?;
            let (p, l) = boroczky_points(size);
            (p, Some(Oracle::new(Rule::Boroczky { modulus: size }, l)))
        }
        Family::BoroczkyPlusOrigin => {
            check(size >= 3, "boroczky m must be at least 3")?;
            let (mut p, mut l) = boroczky_points(2 * size);
            p.push(pt([Scalar::zero(), Scalar::zero(), Scalar::one()]));
            l.push(Label::Origin);
            (p, Some(Oracle::new(Rule::Boroczky { modulus: 2 * size }, l)))
        }
        Family::BoroczkyMinusPole | Family::NearBoroczky => {
            check(size >= 3, "boroczky m must be at least 3")?;
            let (p, l) = boroczky_points(2 * size);
            let gone = Label::Infinite(if spec.family == Family::BoroczkyMinusPole { 0 } else { 1 });
            let (p, l): (Vec<_>, Vec<_>) = p.into_iter().zip(l).filter(|(_, l)| *l != gone).unzip();
            (p, Some(Oracle::new(Rule::Boroczky { modulus: 2 * size }, l)))
        }
        Family::BoroczkyOddMinusInfinity => {
            check(size >= 3, "boroczky m must be at least 3")?;
            let m = 2 * size + 1;
            let (p, l) = boroczky_points(m);
            let (p, l): (Vec<_>, Vec<_>) = p.into_iter().zip(l).filter(|(_, l)| *l != Label::Infinite(0)).unzip();
            (p, Some(Oracle::new(Rule::Boroczky { modulus: m }, l)))
        }
        Family::SylvesterAcnodal => {
            check(size >= 3, "sylvester n must be at least 3")?;
            let shift = spec.shift.clone().unwrap_or_else(BigRational::zero);
            // 3x must lie in the subgroup (1/n)ℤ/ℤ
            check((&shift * q(3 * size, 1)).is_integer(), "shift x must satisfy 3x ∈ H")?;
            let mut p = Vec::new();
            let mut l = Vec::new();
            for k in 0..size {
                let x = q(k, size) + &shift;
                let x = &x - x.floor();
                p.push(acnodal_point(&x));
                l.push(Label::Turns(x));
            }
            (p, Some(Oracle::new(Rule::Acnodal, l)))
        }
        Family::NearCeP1 => {
            check(size >= 1, "truncation radius must be positive")?;
            let mut p = Vec::new();
            let mut l = Vec::new();
            for n in -size..=size {
                p.push(pt([Scalar::int(n), Scalar::int(0), Scalar::one()]));
                l.push(Label::Row(0, q(n, 1)));
            }
            for k in -2 * size..=2 * size {
                p.push(pt([Scalar::ratio(k, 2), Scalar::one(), Scalar::one()]));
                l.push(Label::Row(1, q(k, 2)));
            }
            for n in -size..=size {
                p.push(pt([Scalar::int(n), Scalar::int(2), Scalar::one()]));
                l.push(Label::Row(2, q(n, 1)));
            }
            (p, Some(Oracle::new(Rule::P1, l)))
        }
        Family::NearCeP2 => {
            check((1..=60).contains(&size), "p2 radius must be in 1..=60")?;
            let two = |e: i64| -> Scalar {
                if e >= 0 {
                    Scalar::int(1i64 << e)
                } else {
                    Scalar::ratio(1, 1i64 << -e)
                }
            };
            let mut p = Vec::new();
            let mut l = Vec::new();
            for e in -size..=size {
                p.push(pt([two(e), Scalar::zero(), Scalar::one()]));
                l.push(Label::Axis(0, e));
            }
            for e in -size..=size {
                p.push(pt([Scalar::zero(), two(e), Scalar::one()]));
                l.push(Label::Axis(1, e));
            }
            for e in -size..=size {
                p.push(pt([two(e).neg(), Scalar::one(), Scalar::zero()]));
                l.push(Label::Axis(2, e));
            }
            (p, Some(Oracle::new(Rule::P2, l)))
        }
        Family::NearCeP3 => {
            check(size >= 1, "truncation radius must be positive")?;
            let p = (-size..=size).map(|t| pt([Scalar::int(t), Scalar::int(t * t * t), Scalar::one()])).collect();
            let l = (-size..=size).map(Label::Cusp).collect();
            (p, Some(Oracle::new(Rule::P3, l)))
        }
        Family::NearCeP4 => {
            check(size >= 1, "truncation radius must be positive")?;
            let mut p = Vec::new();
            let mut l = Vec::new();
            for t in -size..=size {
                p.push(pt([Scalar::int(t), Scalar::int(t * t), Scalar::one()]));
                l.push(Label::Parabola(t));
            }
            for s in -size..=size {
                p.push(pt([Scalar::one(), Scalar::int(s), Scalar::zero()]));
                l.push(Label::Slope(s));
            }
            (p, Some(Oracle::new(Rule::P4, l)))
        }
        Family::KellyMoser => (kelly_moser(), None),
        Family::SquareGrid => {
            check(size >= 1, "grid side must be positive")?;
            let mut p = Vec::new();
            for x in 0..size {
                for y in 0..size {
                    p.push(pt([Scalar::int(x), Scalar::int(y), Scalar::one()]));
                }
            }
            (p, None)
        }
        Family::RandomRational => {
            check(size >= 1, "point count must be positive")?;
            let r = spec.radius.unwrap_or(10);
            check(r >= 1 && (2 * r + 1) * (2 * r + 1) >= size, "box too small for the requested point count")?;
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.unwrap_or(0));
            let mut seen = HashSet::new();
            let mut p = Vec::new();
            while p.len() < size as usize {
                let (x, y) = (rng.gen_range(-r..=r), rng.gen_range(-r..=r));
                if seen.insert((x, y)) {
                    p.push(pt([Scalar::int(x), Scalar::int(y), Scalar::one()]));
                }
            }
            (p, None)
        }
    };
    Ok(Configuration::from_trusted(points, oracle, meta))
}

/// Triangle (0,0), (2,0), (0,2), its edge midpoints and its centroid.
fn kelly_moser() -> Vec<ProjPoint> {
    let a = |x: i64, y: i64| pt([Scalar::int(x), Scalar::int(y), Scalar::one()]);
    vec![
        a(0, 0),
        a(2, 0),
        a(0, 2),
        a(1, 0),
        a(0, 1),
        a(1, 1),
        pt([Scalar::ratio(2, 3), Scalar::ratio(2, 3), Scalar::one()]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let cases = [
            (Family::BoroczkyBase, 6, 12),
            (Family::BoroczkyPlusOrigin, 3, 13),
            (Family::BoroczkyMinusPole, 3, 11),
            (Family::NearBoroczky, 3, 11),
            (Family::BoroczkyOddMinusInfinity, 3, 13),
            (Family::SylvesterAcnodal, 9, 9),
            (Family::NearCeP1, 2, 5 + 9 + 5),
            (Family::NearCeP3, 4, 9),
            (Family::KellyMoser, 0, 7),
            (Family::SquareGrid, 3, 9),
        ];
        for (f, s, n) in cases {
            assert_eq!(generate(&FamilySpec::new(f, s)).unwrap().len(), n, "{f}");
        }
    }

    #[test]
    fn pole_is_removed() {
        let c = generate(&FamilySpec::new(Family::BoroczkyMinusPole, 3)).unwrap();
        assert!(!c.points().contains(&ProjPoint::ints(0, 1, 0).unwrap()));
    }

    #[test]
    fn shift_validation() {
        let bad = FamilySpec::new(Family::SylvesterAcnodal, 5).shift(q(1, 7));
        assert!(generate(&bad).is_err());
        let ok = FamilySpec::new(Family::SylvesterAcnodal, 5).shift(q(1, 15));
        assert_eq!(generate(&ok).unwrap().len(), 5);
    }

    #[test]
    fn deterministic_random() {
        let s = FamilySpec::new(Family::RandomRational, 20).seed(7);
        assert_eq!(generate(&s).unwrap(), generate(&s).unwrap());
        assert_ne!(generate(&s).unwrap(), generate(&s.clone().seed(8)).unwrap());
    }

    #[test]
    fn names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!(generate(&FamilySpec::new(Family::BoroczkyBase, 2)).is_err());
    }
}
