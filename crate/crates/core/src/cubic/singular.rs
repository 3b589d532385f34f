//! Group structure on the smooth points of the three singular cubics.
//!
//! * nodal    y² = x²(x+1): u = (y−x)/(y+x) ∈ ℝ*, collinear ⟺ u₁u₂u₃ = 1
//! * cuspidal y² = x³:      s = x/y ∈ ℝ,      collinear ⟺ s₁+s₂+s₃ = 0
//! * acnodal  y² = x²(x−1): x ∈ ℝ/ℤ with y/x = cot πx, collinear ⟺ Σx ≡ 0;
//!   rational points land on the unit circle as w = e^{−2πix}
//!
//! In every case [0,1,0] is the identity.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::configurations::generate::acnodal_point;
use crate::error::{Error, Result};
use crate::geometry::ProjPoint;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Nodal,
    Cuspidal,
    Acnodal,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Nodal => "nodal",
            Kind::Cuspidal => "cuspidal",
            Kind::Acnodal => "acnodal",
        }
    }

    /// Affine equation F(x, y) = 0 of the curve, as a rational test.
    fn on_curve(self, x: &BigRational, y: &BigRational) -> bool {
        let rhs = match self {
            Kind::Nodal => x * x * (x + BigRational::one()),
            Kind::Cuspidal => x * x * x,
            Kind::Acnodal => x * x * (x - BigRational::one()),
        };
        y * y == rhs
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nodal" => Ok(Kind::Nodal),
            "cuspidal" => Ok(Kind::Cuspidal),
            "acnodal" => Ok(Kind::Acnodal),
            _ => Err(Error::InvalidParameter(format!("unknown singular cubic '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupElement {
    /// ℝ/ℤ, stored reduced into [0, 1)
    CircleTurns(BigRational),
    /// the unit circle {a + ib : a² + b² = 1} under multiplication
    UnitCircle(BigRational, BigRational),
    /// ℝ under addition
    Real(BigRational),
    /// ℝ* under multiplication
    NonzeroReal(BigRational),
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

impl GroupElement {
    pub fn turns(x: BigRational) -> Self {
        GroupElement::CircleTurns(frac(&x))
    }

    pub fn identity(kind: Kind) -> Self {
        match kind {
            Kind::Nodal => GroupElement::NonzeroReal(q(1)),
            Kind::Cuspidal => GroupElement::Real(q(0)),
            Kind::Acnodal => GroupElement::CircleTurns(q(0)),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::CircleTurns(x) | GroupElement::Real(x) => x.is_zero(),
            GroupElement::UnitCircle(a, b) => a.is_one() && b.is_zero(),
            GroupElement::NonzeroReal(u) => u.is_one(),
        }
    }

    pub fn op(&self, other: &Self) -> Result<Self> {
        use GroupElement::*;
        Ok(match (self, other) {
            (CircleTurns(x), CircleTurns(y)) => CircleTurns(frac(&(x + y))),
            (UnitCircle(a, b), UnitCircle(c, d)) => UnitCircle(a * c - b * d, a * d + b * c),
            (Real(x), Real(y)) => Real(x + y),
            (NonzeroReal(x), NonzeroReal(y)) => NonzeroReal(x * y),
            _ => return Err(Error::InvalidParameter("group elements from different groups".into())),
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        use GroupElement::*;
        Ok(match self {
            CircleTurns(x) => CircleTurns(frac(&-x)),
            UnitCircle(a, b) => UnitCircle(a.clone(), -b),
            Real(x) => Real(-x),
            NonzeroReal(u) if u.is_zero() => return Err(Error::DomainError("0 is not in ℝ*".into())),
            NonzeroReal(u) => NonzeroReal(u.recip()),
        })
    }

    /// x₁ ⊕ … ⊕ x_k = identity?
    pub fn sum_is_identity(xs: &[GroupElement]) -> Result<bool> {
        let mut it = xs.iter();
        let Some(first) = it.next() else { return Ok(true) };
        let mut acc = first.clone();
        for x in it {
            acc = acc.op(x)?;
        }
        Ok(acc.is_identity())
    }
}

fn infinity() -> ProjPoint {
    ProjPoint::ints(0, 1, 0).unwrap()
}

fn aff(x: BigRational, y: BigRational) -> ProjPoint {
    ProjPoint::affine(Scalar::rational(x), Scalar::rational(y))
}

/// Group element → curve point.
pub fn to_curve(kind: Kind, g: &GroupElement) -> Result<ProjPoint> {
    match (kind, g) {
        (Kind::Nodal, GroupElement::NonzeroReal(u)) => {
            if u.is_zero() {
                return Err(Error::DomainError("0 is not in ℝ*".into()));
            }
            if u.is_one() {
                return Ok(infinity());
            }
            nodal_point(&((q(1) + u) / (q(1) - u)))
        }
        (Kind::Cuspidal, GroupElement::Real(s)) => {
            // (1/s², 1/s³) = [s, 1, s³]
            ProjPoint::new([Scalar::rational(s.clone()), Scalar::one(), Scalar::rational(s * s * s)])
        }
        (Kind::Acnodal, GroupElement::CircleTurns(x)) => Ok(acnodal_point(x)),
        (Kind::Acnodal, GroupElement::UnitCircle(a, b)) => {
            if a * a + b * b != q(1) {
                return Err(Error::DomainError("not on the unit circle".into()));
            }
            if a.is_one() {
                return Ok(infinity());
            }
            let t = -b / (q(1) - a);
            Ok(acnodal_from_slope(&t))
        }
        _ => Err(Error::DomainError(format!("element {g:?} does not parametrize the {kind} cubic"))),
    }
}

/// The nodal point (t² − 1, t(t² − 1)); t = ±1 is the node.
pub fn nodal_point(t: &BigRational) -> Result<ProjPoint> {
    let w = t * t - q(1);
    if w.is_zero() {
        return Err(Error::SingularPoint);
    }
    Ok(aff(w.clone(), t * w))
}

/// The acnodal point with y/x = t: (1 + t², t(1 + t²)).
pub fn acnodal_from_slope(t: &BigRational) -> ProjPoint {
    let w = q(1) + t * t;
    aff(w.clone(), t * w)
}

/// Curve point → group element. Rational points only.
pub fn to_group(kind: Kind, p: &ProjPoint) -> Result<GroupElement> {
    if *p == infinity() {
        return Ok(match kind {
            Kind::Acnodal => GroupElement::UnitCircle(q(1), q(0)),
            _ => GroupElement::identity(kind),
        });
    }
    let (x, y) = match p.affine_rational() {
        Some(xy) => xy,
        None if p.is_rational() => return Err(Error::OffCurve),
        None => return Err(Error::NonRationalInput),
    };
    if !kind.on_curve(&x, &y) {
        return Err(Error::OffCurve);
    }
    if x.is_zero() && y.is_zero() {
        return Err(Error::SingularPoint);
    }
    Ok(match kind {
        Kind::Nodal => GroupElement::NonzeroReal((&y - &x) / (y + x)),
        Kind::Cuspidal => GroupElement::Real(x / y),
        Kind::Acnodal => {
            let t = y / x;
            let d = q(1) + &t * &t;
            GroupElement::UnitCircle((&t * &t - q(1)) / &d, q(-2) * t / d)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::collinear;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn nodal_example() {
        let pts: Vec<ProjPoint> = [r(2, 1), r(3, 1), r(-7, 5)].iter().map(|t| nodal_point(t).unwrap()).collect();
        assert_eq!(pts[2], aff(r(24, 25), r(-168, 125)));
        assert!(collinear(&pts[0], &pts[1], &pts[2]).unwrap());
        let g: Vec<GroupElement> = pts.iter().map(|p| to_group(Kind::Nodal, p).unwrap()).collect();
        assert!(GroupElement::sum_is_identity(&g).unwrap());
        assert_eq!(nodal_point(&r(1, 1)).unwrap_err(), Error::SingularPoint);
    }

    #[test]
    fn cuspidal_example() {
        let pts: Vec<ProjPoint> =
            [1, 2, -3].iter().map(|&s| to_curve(Kind::Cuspidal, &GroupElement::Real(r(s, 1))).unwrap()).collect();
        assert!(collinear(&pts[0], &pts[1], &pts[2]).unwrap());
        assert_eq!(to_group(Kind::Cuspidal, &pts[1]).unwrap(), GroupElement::Real(r(2, 1)));
        assert_eq!(to_group(Kind::Cuspidal, &infinity()).unwrap(), GroupElement::Real(r(0, 1)));
        assert_eq!(to_group(Kind::Cuspidal, &aff(r(0, 1), r(0, 1))).unwrap_err(), Error::SingularPoint);
    }

    #[test]
    fn acnodal_example() {
        let p = to_curve(Kind::Acnodal, &GroupElement::turns(r(1, 4))).unwrap();
        assert_eq!(p, ProjPoint::ints(2, 2, 1).unwrap());
        let h = to_curve(Kind::Acnodal, &GroupElement::turns(r(1, 2))).unwrap();
        assert_eq!(h, ProjPoint::ints(1, 0, 1).unwrap());
        // tangent at (2,2) is y = 2x − 2 and passes through (1, 0)
        assert!(collinear(&p, &ProjPoint::ints(3, 4, 1).unwrap(), &h).unwrap());
        let g = to_group(Kind::Acnodal, &p).unwrap();
        assert_eq!(g, GroupElement::UnitCircle(r(0, 1), r(-1, 1)));
        assert_eq!(to_curve(Kind::Acnodal, &g).unwrap(), p);
    }
}
