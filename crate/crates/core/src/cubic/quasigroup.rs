//! An irreducible conic σ plus a line ℓ, in the three normal forms:
//!
//! * secant   — parabola y = x² and the y-axis; G = ℝ*,
//!   ψσ(a) = (a, a²), ψℓ(g) = (0, −1/g), collinear ⟺ xyz = 1
//! * tangent  — parabola y = x² and the line at infinity; G = ℝ,
//!   ψσ(a) = (a, a²), ψℓ(g) = [1, −g, 0], collinear ⟺ x + y + z = 0
//! * disjoint — unit circle and the line at infinity; G = ℝ/ℤ,
//!   ψσ(θ) = (cos 2πθ, sin 2πθ), ψℓ(θ) = [sin πθ, cos πθ, 0],
//!   collinear ⟺ x + y + z ≡ 0

use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::{ProjLine, ProjPoint};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    Secant,
    Tangent,
    Disjoint,
}

impl FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "secant" => Ok(Case::Secant),
            "tangent" => Ok(Case::Tangent),
            "disjoint" => Ok(Case::Disjoint),
            _ => Err(Error::InvalidParameter(format!("unknown quasigroup case '{s}'"))),
        }
    }
}

/// Conic a·x² + b·xy + c·y² + d·xz + e·yz + f·z² = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conic(pub [BigRational; 6]);

impl Conic {
    pub fn ints(c: [i64; 6]) -> Self {
        Conic(c.map(|v| BigRational::from_integer(v.into())))
    }
}

fn proportional(a: &[BigRational], b: &[BigRational]) -> bool {
    let Some(i) = a.iter().position(|x| !x.is_zero()) else { return false };
    if b[i].is_zero() {
        return false;
    }
    let k = &b[i] / &a[i];
    a.iter().zip(b).all(|(x, y)| x * &k == *y)
}

/// Recognizes one of the supported normal forms, up to scaling each equation.
pub fn classify(conic: &Conic, line: &ProjLine) -> Result<Case> {
    let coeffs: Option<Vec<BigRational>> = line.coeffs().iter().map(|c| c.as_rational().cloned()).collect();
    let l = coeffs.ok_or_else(|| Error::UnnormalizedInput("line must be rational".into()))?;
    let parabola = Conic::ints([1, 0, 0, 0, -1, 0]);
    let circle = Conic::ints([1, 0, 1, 0, 0, -1]);
    let y_axis = [BigRational::one(), BigRational::zero(), BigRational::zero()];
    let at_inf = [BigRational::zero(), BigRational::zero(), BigRational::one()];
    if proportional(&parabola.0, &conic.0) && proportional(&y_axis, &l) {
        Ok(Case::Secant)
    } else if proportional(&parabola.0, &conic.0) && proportional(&at_inf, &l) {
        Ok(Case::Tangent)
    } else if proportional(&circle.0, &conic.0) && proportional(&at_inf, &l) {
        Ok(Case::Disjoint)
    } else {
        Err(Error::UnnormalizedInput("conic/line pair is not y = x² with x = 0 or z = 0, nor the unit circle with z = 0".into()))
    }
}

pub fn psi_sigma(case: Case, x: &BigRational) -> Result<ProjPoint> {
    match case {
        Case::Secant if x.is_zero() => Err(Error::DomainError("0 is not in ℝ*".into())),
        Case::Secant | Case::Tangent => Ok(ProjPoint::affine(Scalar::rational(x.clone()), Scalar::rational(x * x))),
        Case::Disjoint => Ok(ProjPoint::affine(Scalar::cos_turns(x), Scalar::sin_turns(x))),
    }
}

pub fn psi_ell(case: Case, g: &BigRational) -> Result<ProjPoint> {
    match case {
        Case::Secant if g.is_zero() => Err(Error::DomainError("0 is not in ℝ*".into())),
        Case::Secant => Ok(ProjPoint::affine(Scalar::zero(), Scalar::rational(-g.recip()))),
        Case::Tangent => ProjPoint::new([Scalar::one(), Scalar::rational(-g), Scalar::zero()]),
        Case::Disjoint => ProjPoint::new([Scalar::sin_pi(g), Scalar::cos_pi(g), Scalar::zero()]),
    }
}

/// Are ψσ(x), ψσ(y), ψℓ(z) collinear? Decided in the group.
pub fn collinear(case: Case, x: &BigRational, y: &BigRational, z: &BigRational) -> bool {
    match case {
        Case::Secant => (x * y * z).is_one(),
        Case::Tangent => (x + y + z).is_zero(),
        Case::Disjoint => (x + y + z).is_integer(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::collinear as geo;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn secant_example() {
        let (a, b) = (psi_sigma(Case::Secant, &r(2, 1)).unwrap(), psi_sigma(Case::Secant, &r(3, 1)).unwrap());
        let c = psi_ell(Case::Secant, &r(1, 6)).unwrap();
        assert_eq!(c, ProjPoint::ints(0, -6, 1).unwrap());
        assert!(geo(&a, &b, &c).unwrap());
        assert!(collinear(Case::Secant, &r(2, 1), &r(3, 1), &r(1, 6)));
    }

    #[test]
    fn tangent_example() {
        let c = psi_ell(Case::Tangent, &r(-3, 1)).unwrap();
        assert_eq!(c, ProjPoint::ints(1, 3, 0).unwrap());
        let (a, b) = (psi_sigma(Case::Tangent, &r(1, 1)).unwrap(), psi_sigma(Case::Tangent, &r(2, 1)).unwrap());
        assert!(geo(&a, &b, &c).unwrap());
    }

    #[test]
    fn disjoint_example() {
        let a = psi_sigma(Case::Disjoint, &r(1, 12)).unwrap();
        let b = psi_sigma(Case::Disjoint, &r(-1, 12)).unwrap();
        let c = psi_ell(Case::Disjoint, &r(0, 1)).unwrap();
        assert_eq!(c, ProjPoint::ints(0, 1, 0).unwrap());
        assert!(geo(&a, &b, &c).unwrap());
    }

    #[test]
    fn normal_forms() {
        let par = Conic::ints([2, 0, 0, 0, -2, 0]);
        assert_eq!(classify(&par, &ProjLine::ints(3, 0, 0).unwrap()).unwrap(), Case::Secant);
        assert_eq!(classify(&par, &ProjLine::ints(0, 0, 1).unwrap()).unwrap(), Case::Tangent);
        assert!(matches!(classify(&par, &ProjLine::ints(1, 1, 0).unwrap()), Err(Error::UnnormalizedInput(_))));
    }
}
