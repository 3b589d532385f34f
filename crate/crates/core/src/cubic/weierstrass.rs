//! Chord–tangent addition on y²z = x³ + a·xz² + b·z³ with identity [0,1,0].

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geometry::ProjPoint;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WPoint {
    Infinity,
    Affine(BigRational, BigRational),
}

impl WPoint {
    pub fn affine(x: i64, y: i64) -> Self {
        WPoint::Affine(BigRational::from_integer(x.into()), BigRational::from_integer(y.into()))
    }

    pub fn to_proj(&self) -> ProjPoint {
        match self {
            WPoint::Infinity => ProjPoint::ints(0, 1, 0).unwrap(),
            WPoint::Affine(x, y) => ProjPoint::affine(Scalar::rational(x.clone()), Scalar::rational(y.clone())),
        }
    }

    pub fn from_proj(p: &ProjPoint) -> Result<Self> {
        let c = p.integer_coords().ok_or(Error::NonRationalInput)?;
        if c[2].is_zero() {
            return if c[0].is_zero() { Ok(WPoint::Infinity) } else { Err(Error::OffCurve) };
        }
        let z = BigRational::from_integer(c[2].clone());
        Ok(WPoint::Affine(BigRational::from_integer(c[0].clone()) / &z, BigRational::from_integer(c[1].clone()) / z))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weierstrass {
    pub a: BigRational,
    pub b: BigRational,
}

impl Weierstrass {
    /// Rejects singular curves (4a³ + 27b² = 0).
    pub fn new(a: BigRational, b: BigRational) -> Result<Self> {
        let four = BigRational::from_integer(4.into());
        let tw7 = BigRational::from_integer(27.into());
        if (four * &a * &a * &a + tw7 * &b * &b).is_zero() {
            return Err(Error::InvalidParameter("singular Weierstrass curve".into()));
        }
        Ok(Weierstrass { a, b })
    }

    pub fn ints(a: i64, b: i64) -> Result<Self> {
        Self::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }

    pub fn contains(&self, p: &WPoint) -> bool {
        match p {
            WPoint::Infinity => true,
            WPoint::Affine(x, y) => y * y == x * x * x + &self.a * x + &self.b,
        }
    }

    fn check(&self, p: &WPoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::OffCurve)
        }
    }

    pub fn neg(&self, p: &WPoint) -> Result<WPoint> {
        self.check(p)?;
        Ok(match p {
            WPoint::Infinity => WPoint::Infinity,
            WPoint::Affine(x, y) => WPoint::Affine(x.clone(), -y),
        })
    }

    /// The third point where the chord (or tangent) through P and Q meets
    /// the curve: ⊖(P ⊕ Q).
    pub fn third_intersection(&self, p: &WPoint, q: &WPoint) -> Result<WPoint> {
        let s = self.add(p, q)?;
        self.neg(&s)
    }

    pub fn add(&self, p: &WPoint, q: &WPoint) -> Result<WPoint> {
        self.check(p)?;
        self.check(q)?;
        let (x1, y1, x2, y2) = match (p, q) {
            (WPoint::Infinity, _) => return Ok(q.clone()),
            (_, WPoint::Infinity) => return Ok(p.clone()),
            (WPoint::Affine(x1, y1), WPoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let slope = if x1 != x2 {
            (y2 - y1) / (x2 - x1)
        } else if y1 == y2 && !y1.is_zero() {
            // tangent: implicit gradient
            let three = BigRational::from_integer(3.into());
            let two = BigRational::from_integer(2.into());
            (three * x1 * x1 + &self.a) / (two * y1)
        } else {
            return Ok(WPoint::Infinity);
        };
        let x3 = &slope * &slope - x1 - x2;
        let y3 = slope * (x1 - &x3) - y1;
        Ok(WPoint::Affine(x3, y3))
    }

    pub fn sub(&self, p: &WPoint, q: &WPoint) -> Result<WPoint> {
        let nq = self.neg(q)?;
        self.add(p, &nq)
    }

    /// k·P by double-and-add; negative k uses ⊖P.
    pub fn mul(&self, p: &WPoint, k: i64) -> Result<WPoint> {
        let mut base = if k < 0 { self.neg(p)? } else { p.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = WPoint::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            base = self.add(&base, &base)?;
            k >>= 1;
        }
        Ok(acc)
    }
}
