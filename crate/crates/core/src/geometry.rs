//! Homogeneous points and lines of the real projective plane.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarTerm, Sign, SignEngine, SignPolicy, VecTerm};

/// Scale a rational triple to a coprime integer triple whose first nonzero
/// entry is positive. `None` for the zero triple.
pub fn normalize_rational(v: [&BigRational; 3]) -> Option<[BigInt; 3]> {
    if v.iter().all(|x| x.is_zero()) {
        return None;
    }
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let first_neg = ints.iter().find(|x| !x.is_zero()).unwrap().is_negative();
    for x in ints.iter_mut() {
        *x = &*x / &g;
        if first_neg {
            *x = -&*x;
        }
    }
    Some([ints[0].clone(), ints[1].clone(), ints[2].clone()])
}

fn int_scalars(v: [BigInt; 3]) -> [Scalar; 3] {
    v.map(|x| Scalar::Rational(BigRational::from_integer(x)))
}

fn canonical(coords: [Scalar; 3], policy: &SignPolicy) -> Result<[Scalar; 3]> {
    if let [Scalar::Rational(a), Scalar::Rational(b), Scalar::Rational(c)] = &coords {
        return normalize_rational([a, b, c]).map(int_scalars).ok_or(Error::ZeroTriple);
    }
    for s in &coords {
        if s.sign(policy)? != Sign::Zero {
            return Ok(coords);
        }
    }
    Err(Error::ZeroTriple)
}

fn scalar_cross(a: &[Scalar; 3], b: &[Scalar; 3]) -> [Scalar; 3] {
    [
        a[1].mul(&b[2]).sub(&a[2].mul(&b[1])),
        a[2].mul(&b[0]).sub(&a[0].mul(&b[2])),
        a[0].mul(&b[1]).sub(&a[1].mul(&b[0])),
    ]
}

fn engine(vs: Vec<[Scalar; 3]>, policy: &SignPolicy) -> SignEngine {
    SignEngine::new(vs, *policy)
}

/// A point [x, y, z] of the projective plane.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: [Scalar; 3],
}

/// A line {ax + by + cz = 0}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjLine {
    coeffs: [Scalar; 3],
}

impl ProjPoint {
    pub fn new(coords: [Scalar; 3]) -> Result<Self> {
        Self::new_with(coords, &SignPolicy::default())
    }

    pub fn new_with(coords: [Scalar; 3], policy: &SignPolicy) -> Result<Self> {
        Ok(ProjPoint { coords: canonical(coords, policy)? })
    }

    pub fn ints(x: i64, y: i64, z: i64) -> Result<Self> {
        Self::new([Scalar::int(x), Scalar::int(y), Scalar::int(z)])
    }

    pub fn rational(x: BigRational, y: BigRational, z: BigRational) -> Result<Self> {
        Self::new([Scalar::Rational(x), Scalar::Rational(y), Scalar::Rational(z)])
    }

    /// The affine point (x, y) = [x, y, 1].
    pub fn affine(x: Scalar, y: Scalar) -> Self {
        Self::new([x, y, Scalar::one()]).expect("affine points are never zero")
    }

    pub fn coords(&self) -> &[Scalar; 3] {
        &self.coords
    }

    pub fn into_coords(self) -> [Scalar; 3] {
        self.coords
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().all(Scalar::is_rational)
    }

    /// Coprime integer coordinates of a rational point.
    pub fn integer_coords(&self) -> Option<[BigInt; 3]> {
        match &self.coords {
            [Scalar::Rational(a), Scalar::Rational(b), Scalar::Rational(c)] => Some([a, b, c].map(|r| r.to_integer())),
            _ => None,
        }
    }

    /// Affine coordinates (x/z, y/z) when z ≠ 0 exactly.
    pub fn affine_rational(&self) -> Option<(BigRational, BigRational)> {
        match &self.coords {
            [Scalar::Rational(a), Scalar::Rational(b), Scalar::Rational(c)] if !c.is_zero() => Some((a / c, b / c)),
            _ => None,
        }
    }

    pub fn is_at_infinity(&self, policy: &SignPolicy) -> Result<bool> {
        Ok(self.coords[2].sign(policy)? == Sign::Zero)
    }

    /// Projective equality, certified.
    pub fn same_as(&self, other: &ProjPoint, policy: &SignPolicy) -> Result<bool> {
        if self.is_rational() && other.is_rational() {
            return Ok(self == other);
        }
        engine(vec![self.coords.clone(), other.coords.clone()], policy).same_point(0, 1)
    }

    pub fn dual(&self) -> ProjLine {
        ProjLine { coeffs: self.coords.clone() }
    }

    pub fn approx(&self) -> [f64; 3] {
        [self.coords[0].approx(), self.coords[1].approx(), self.coords[2].approx()]
    }
}

impl ProjLine {
    pub fn new(coeffs: [Scalar; 3]) -> Result<Self> {
        Ok(ProjLine { coeffs: canonical(coeffs, &SignPolicy::default())? })
    }

    pub fn ints(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new([Scalar::int(a), Scalar::int(b), Scalar::int(c)])
    }

    pub fn coeffs(&self) -> &[Scalar; 3] {
        &self.coeffs
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_rational)
    }

    pub fn dual(&self) -> ProjPoint {
        ProjPoint { coords: self.coeffs.clone() }
    }

    pub fn contains(&self, p: &ProjPoint) -> Result<bool> {
        self.contains_with(p, &SignPolicy::default())
    }

    pub fn contains_with(&self, p: &ProjPoint, policy: &SignPolicy) -> Result<bool> {
        let e = engine(vec![self.coeffs.clone(), p.coords.clone()], policy);
        Ok(e.sign(&ScalarTerm::Dot(VecTerm::Point(0), VecTerm::Point(1)))? == Sign::Zero)
    }

    pub fn same_as(&self, other: &ProjLine, policy: &SignPolicy) -> Result<bool> {
        self.dual().same_as(&other.dual(), policy)
    }
}

/// A point or a line, for [`dualize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dualizable {
    Point(ProjPoint),
    Line(ProjLine),
}

/// Point–line duality [a, b, c] ↔ {ax + by + cz = 0}.
pub fn dualize(x: &Dualizable) -> Dualizable {
    match x {
        Dualizable::Point(p) => Dualizable::Line(p.dual()),
        Dualizable::Line(l) => Dualizable::Point(l.dual()),
    }
}

pub fn collinear(p: &ProjPoint, q: &ProjPoint, r: &ProjPoint) -> Result<bool> {
    collinear_with(p, q, r, &SignPolicy::default())
}

/// det[p; q; r] = 0, certified.
pub fn collinear_with(p: &ProjPoint, q: &ProjPoint, r: &ProjPoint, policy: &SignPolicy) -> Result<bool> {
    engine(vec![p.coords.clone(), q.coords.clone(), r.coords.clone()], policy).collinear(0, 1, 2)
}

pub fn join(p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine> {
    join_with(p, q, &SignPolicy::default())
}

pub fn join_with(p: &ProjPoint, q: &ProjPoint, policy: &SignPolicy) -> Result<ProjLine> {
    let c = scalar_cross(&p.coords, &q.coords);
    match canonical(c, policy) {
        Ok(coeffs) => Ok(ProjLine { coeffs }),
        Err(Error::ZeroTriple) => Err(Error::IdenticalPoints),
        Err(e) => Err(e),
    }
}

pub fn meet(l1: &ProjLine, l2: &ProjLine) -> Result<ProjPoint> {
    meet_with(l1, l2, &SignPolicy::default())
}

pub fn meet_with(l1: &ProjLine, l2: &ProjLine, policy: &SignPolicy) -> Result<ProjPoint> {
    let c = scalar_cross(&l1.coeffs, &l2.coeffs);
    match canonical(c, policy) {
        Ok(coords) => Ok(ProjPoint { coords }),
        Err(Error::ZeroTriple) => Err(Error::IdenticalLines),
        Err(e) => Err(e),
    }
}

/// An invertible 3×3 matrix acting on column vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct ProjTransform {
    m: [[Scalar; 3]; 3],
}

impl ProjTransform {
    pub fn new(m: [[Scalar; 3]; 3]) -> Result<Self> {
        let t = ProjTransform { m };
        if t.det().sign(&SignPolicy::default())? == Sign::Zero {
            return Err(Error::SingularTransform);
        }
        Ok(t)
    }

    pub fn from_ints(m: [[i64; 3]; 3]) -> Result<Self> {
        Self::new(m.map(|r| r.map(Scalar::int)))
    }

    pub fn identity() -> Self {
        Self::from_ints([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap()
    }

    /// Rotation about the origin through angle π·q (counterclockwise).
    pub fn rotation(half_turns: &BigRational) -> Self {
        let c = Scalar::cos_pi(half_turns);
        let s = Scalar::sin_pi(half_turns);
        ProjTransform { m: [[c.clone(), s.neg(), Scalar::zero()], [s, c, Scalar::zero()], [Scalar::zero(), Scalar::zero(), Scalar::one()]] }
    }

    pub fn matrix(&self) -> &[[Scalar; 3]; 3] {
        &self.m
    }

    pub fn is_rational(&self) -> bool {
        self.m.iter().flatten().all(Scalar::is_rational)
    }

    pub fn det(&self) -> Scalar {
        let m = &self.m;
        let minor = |a: &Scalar, b: &Scalar, c: &Scalar, d: &Scalar| a.mul(d).sub(&b.mul(c));
        m[0][0]
            .mul(&minor(&m[1][1], &m[1][2], &m[2][1], &m[2][2]))
            .sub(&m[0][1].mul(&minor(&m[1][0], &m[1][2], &m[2][0], &m[2][2])))
            .add(&m[0][2].mul(&minor(&m[1][0], &m[1][1], &m[2][0], &m[2][1])))
    }

    /// self ∘ other (apply `other` first).
    pub fn compose(&self, other: &ProjTransform) -> ProjTransform {
        let mut m: [[Scalar; 3]; 3] = Default::default();
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut acc = Scalar::zero();
                for k in 0..3 {
                    acc = acc.add(&self.m[i][k].mul(&other.m[k][j]));
                }
                *cell = acc;
            }
        }
        ProjTransform { m }
    }

    pub fn apply_coords(&self, v: &[Scalar; 3]) -> [Scalar; 3] {
        let row = |i: usize| self.m[i][0].mul(&v[0]).add(&self.m[i][1].mul(&v[1])).add(&self.m[i][2].mul(&v[2]));
        [row(0), row(1), row(2)]
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint> {
        ProjPoint::new(self.apply_coords(&p.coords))
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.coords[0], self.coords[1], self.coords[2])
    }
}

impl fmt::Debug for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line[{}, {}, {}]", self.coeffs[0], self.coeffs[1], self.coeffs[2])
    }
}

impl fmt::Debug for ProjTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.m {
            writeln!(f, "[{}, {}, {}]", r[0], r[1], r[2])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64, z: i64) -> ProjPoint {
        ProjPoint::ints(x, y, z).unwrap()
    }

    fn l(a: i64, b: i64, c: i64) -> ProjLine {
        ProjLine::ints(a, b, c).unwrap()
    }

    #[test]
    fn collinear_examples() {
        assert!(collinear(&p(1, 0, 1), &p(2, 0, 1), &p(3, 0, 1)).unwrap());
        assert!(!collinear(&p(0, 0, 1), &p(1, 1, 1), &p(1, 2, 1)).unwrap());
        assert!(collinear(&p(1, 1, 1), &p(2, 8, 1), &p(-3, -27, 1)).unwrap());
    }

    #[test]
    fn join_examples() {
        assert_eq!(join(&p(0, 0, 1), &p(1, 0, 1)).unwrap(), l(0, 1, 0));
        assert_eq!(join(&p(1, 0, 0), &p(0, 1, 0)).unwrap(), l(0, 0, 1));
        assert_eq!(join(&p(2, 4, 1), &p(3, 9, 1)).unwrap(), l(5, -1, -6));
        assert_eq!(join(&p(2, 4, 1), &p(4, 8, 2)), Err(Error::IdenticalPoints));
    }

    #[test]
    fn meet_examples() {
        assert_eq!(meet(&l(0, 1, 0), &l(0, 0, 1)).unwrap(), p(1, 0, 0));
        assert_eq!(meet(&l(0, 1, 0), &l(0, 1, -1)).unwrap(), p(1, 0, 0));
        assert_eq!(meet(&l(5, -1, -6), &l(1, 0, 0)).unwrap(), p(0, -6, 1));
        assert_eq!(meet(&l(1, 1, 1), &l(2, 2, 2)), Err(Error::IdenticalLines));
    }

    #[test]
    fn normalization() {
        assert_eq!(p(-2, 4, 6), p(1, -2, -3));
        assert_eq!(p(0, -3, 0), p(0, 1, 0));
        assert_eq!(ProjPoint::ints(0, 0, 0), Err(Error::ZeroTriple));
    }

    #[test]
    fn duality() {
        let x = Dualizable::Point(p(1, 2, 3));
        assert_eq!(dualize(&x), Dualizable::Line(l(1, 2, 3)));
        assert_eq!(dualize(&dualize(&x)), x);
        let pt = p(0, 0, 1);
        let ln = l(1, 0, 0);
        assert!(ln.contains(&pt).unwrap());
        assert!(pt.dual().contains(&ln.dual()).unwrap());
    }

    #[test]
    fn normalizing_map_example() {
        // rotation through π/12 (clockwise), then [x,y,z] -> [-y, x, 2z + x]
        let rot = ProjTransform::rotation(&BigRational::new((-1).into(), 12.into()));
        let shear = ProjTransform::from_ints([[0, -1, 0], [1, 0, 0], [1, 0, 2]]).unwrap();
        let t = shear.compose(&rot);
        assert_eq!(t.apply(&p(0, 0, 1)).unwrap(), p(0, 0, 1));
        let img = t.apply(&p(0, 1, 0)).unwrap();
        let cot = Scalar::trig(crate::scalar::TrigFn::Cot, &BigRational::new(1.into(), 12.into())).unwrap();
        let expect = ProjPoint::affine(cot.neg(), Scalar::one());
        assert!(img.same_as(&expect, &SignPolicy::default()).unwrap());
    }
}
