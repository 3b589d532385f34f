//! Plane cubics: fitting, Chasles closure, the chord–tangent group law,
//! singular-cubic parametrizations and the conic-plus-line quasigroup.

pub mod fit;
pub mod linalg;
pub mod quasigroup;
pub mod singular;
pub mod weierstrass;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::configurations::codec::format_scalar;
use crate::error::{Error, Result};
use crate::geometry::ProjPoint;
use crate::scalar::{Scalar, Sign, SignPolicy};
use linalg::Field;

pub use fit::{chasles_check, fit_cubic, ChaslesReport};
pub use weierstrass::{Weierstrass, WPoint};

/// Exponents of (X, Y, Z) in coefficient order
/// X³, X²Y, XY², Y³, X²Z, XYZ, Y²Z, XZ², YZ², Z³.
pub const MONOMIALS: [[u32; 3]; 10] =
    [[3, 0, 0], [2, 1, 0], [1, 2, 0], [0, 3, 0], [2, 0, 1], [1, 1, 1], [0, 2, 1], [1, 0, 2], [0, 1, 2], [0, 0, 3]];

/// The ten cubic monomials evaluated at a point.
pub fn monomials<F: Field>(p: &[F; 3]) -> Vec<F> {
    let pw = |v: &F, e: u32| (0..e).fold(v.one_like(), |acc, _| acc.mul(v));
    MONOMIALS.iter().map(|e| pw(&p[0], e[0]).mul(&pw(&p[1], e[1])).mul(&pw(&p[2], e[2]))).collect()
}

/// A nonzero cubic form, up to scale.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cubic {
    coeffs: [Scalar; 10],
}

impl Cubic {
    pub fn new(coeffs: [Scalar; 10]) -> Result<Self> {
        if coeffs.iter().all(|c| c.as_rational().is_some_and(Zero::is_zero)) {
            return Err(Error::InvalidParameter("all cubic coefficients are zero".into()));
        }
        Ok(Cubic { coeffs })
    }

    /// Scaled to coprime integers with the first nonzero coefficient positive.
    pub fn from_rationals(c: &[BigRational]) -> Result<Self> {
        if c.len() != 10 {
            return Err(Error::InvalidParameter("a cubic has ten coefficients".into()));
        }
        let lcm = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let mut ints: Vec<BigInt> = c.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            return Err(Error::InvalidParameter("all cubic coefficients are zero".into()));
        }
        let flip = ints.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative);
        for x in &mut ints {
            *x /= &g;
            if flip {
                *x = -&*x;
            }
        }
        let coeffs: Vec<Scalar> = ints.into_iter().map(|i| Scalar::rational(BigRational::from_integer(i))).collect();
        Ok(Cubic { coeffs: coeffs.try_into().unwrap() })
    }

    pub fn coeffs(&self) -> &[Scalar; 10] {
        &self.coeffs
    }

    pub fn rational_coeffs(&self) -> Option<Vec<BigRational>> {
        self.coeffs.iter().map(|c| c.as_rational().cloned()).collect()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_rational)
    }

    pub fn eval(&self, p: &[Scalar; 3]) -> Scalar {
        let mut acc = Scalar::zero();
        for (c, e) in self.coeffs.iter().zip(MONOMIALS) {
            if c.as_rational().is_some_and(Zero::is_zero) {
                continue;
            }
            let m = p[0].pow(e[0]).mul(&p[1].pow(e[1])).mul(&p[2].pow(e[2]));
            acc = acc.add(&c.mul(&m));
        }
        acc
    }

    pub fn contains(&self, p: &ProjPoint) -> Result<bool> {
        self.contains_with(p, &SignPolicy::default())
    }

    pub fn contains_with(&self, p: &ProjPoint, policy: &SignPolicy) -> Result<bool> {
        Ok(self.eval(p.coords()).sign(policy)? == Sign::Zero)
    }

    /// Coefficients as exact strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_scalar).collect()
    }
}

impl fmt::Display for Cubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, e) in self.coeffs.iter().zip(MONOMIALS) {
            let mono: Vec<String> = ["x", "y", "z"]
                .iter()
                .zip(e)
                .filter(|(_, k)| *k > 0)
                .map(|(v, k)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
                .collect();
            let mono = mono.join("*");
            match c.as_rational() {
                Some(r) if Zero::is_zero(r) => continue,
                Some(r) => {
                    let (neg, abs) = (r.is_negative(), r.abs());
                    let sign = match (first, neg) {
                        (true, true) => "-",
                        (true, false) => "",
                        (false, true) => " - ",
                        (false, false) => " + ",
                    };
                    if abs.is_one() {
                        write!(f, "{sign}{mono}")?;
                    } else {
                        write!(f, "{sign}{abs}*{mono}")?;
                    }
                }
                None => {
                    write!(f, "{}({})*{mono}", if first { "" } else { " + " }, format_scalar(c))?;
                }
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn normalization_and_display() {
        let mut c = vec![q(0); 10];
        c[0] = q(-2);
        c[8] = q(2);
        let cu = Cubic::from_rationals(&c).unwrap();
        assert_eq!(cu.to_string(), "x^3 - y*z^2");
        assert!(cu.contains(&ProjPoint::ints(2, 8, 1).unwrap()).unwrap());
        assert!(Cubic::from_rationals(&vec![q(0); 10]).is_err());
    }
}
