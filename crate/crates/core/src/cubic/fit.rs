//! Cubics through given points, and Chasles' nine-point closure.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::linalg::{dot, nullspace, Field};
use super::{monomials, Cubic};
use crate::error::{Error, Result};
use crate::geometry::{meet, ProjLine, ProjPoint};
use crate::scalar::cyclotomic::{CyElem, CycloField};
use crate::scalar::{Scalar, SignEngine, SignPolicy};

fn rational_point(p: &ProjPoint) -> Result<[BigRational; 3]> {
    let c = p.integer_coords().ok_or(Error::NonRationalInput)?;
    Ok(c.map(BigRational::from_integer))
}

fn rows(points: &[ProjPoint]) -> Result<Vec<Vec<BigRational>>> {
    points.iter().map(|p| Ok(monomials(&rational_point(p)?))).collect()
}

/// Basis of all cubics through up to nine rational points.
pub fn fit_cubic(points: &[ProjPoint]) -> Result<Vec<Cubic>> {
    if points.is_empty() || points.len() > 9 {
        return Err(Error::InvalidParameter("fit_cubic takes one to nine points".into()));
    }
    let m = rows(points)?;
    let zero = BigRational::from_integer(BigInt::from(0));
    nullspace(&m, 10, &zero).iter().map(|v| Cubic::from_rationals(v)).collect()
}

/// Exact nullspace of the evaluation matrix over any field, for any number
/// of points; the caller supplies the monomial rows.
pub fn cubic_nullspace<F: Field>(points: &[[F; 3]], proto: &F) -> Vec<Vec<F>> {
    let m: Vec<Vec<F>> = points.iter().map(monomials).collect();
    nullspace(&m, 10, proto)
}

/// Does the cubic with exact coefficients `c` vanish at `p`?
pub fn vanishes<F: Field>(c: &[F], p: &[F; 3]) -> bool {
    dot(c, &monomials(p)).is_zero()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChaslesReport {
    /// intersections a_i ∩ b_j in row-major order
    pub points: Vec<[String; 3]>,
    /// flag k: every cubic through the other eight passes through point k
    pub flags: Vec<bool>,
    pub all_pass: bool,
}

/// For each of the nine points a_i ∩ b_j, fits the cubics through the
/// other eight and checks they all pass through it.
pub fn chasles_check(a: &[ProjLine; 3], b: &[ProjLine; 3]) -> Result<ChaslesReport> {
    if !a.iter().chain(b).all(ProjLine::is_rational) {
        return Err(Error::NonRationalInput);
    }
    let mut pts = Vec::with_capacity(9);
    for la in a {
        for lb in b {
            match meet(la, lb) {
                Ok(p) => pts.push(p),
                Err(Error::IdenticalLines) => return Err(Error::DegenerateNinePoints),
                Err(e) => return Err(e),
            }
        }
    }
    for i in 0..9 {
        if pts[i + 1..].contains(&pts[i]) {
            return Err(Error::DegenerateNinePoints);
        }
    }
    let exact: Vec<[BigRational; 3]> = pts.iter().map(rational_point).collect::<Result<_>>()?;
    let zero = BigRational::from_integer(BigInt::from(0));
    let flags: Vec<bool> = (0..9)
        .map(|k| {
            let others: Vec<[BigRational; 3]> = (0..9).filter(|&i| i != k).map(|i| exact[i].clone()).collect();
            cubic_nullspace(&others, &zero).iter().all(|c| vanishes(c, &exact[k]))
        })
        .collect();
    let points = pts
        .iter()
        .map(|p| {
            let c = p.integer_coords().expect("rational");
            [c[0].to_string(), c[1].to_string(), c[2].to_string()]
        })
        .collect();
    let all_pass = flags.iter().all(|&f| f);
    Ok(ChaslesReport { points, flags, all_pass })
}

/// Exact images of homogeneous triples in one cyclotomic field Q(ζ_L),
/// with L the least common order of all coordinates.
pub fn exact_field_points(triples: &[[Scalar; 3]]) -> Result<(Arc<CycloField>, Vec<[CyElem; 3]>)> {
    let engine = SignEngine::new(triples.to_vec(), SignPolicy::default());
    let ex = engine.exact_points().ok_or(Error::NonRationalInput)?;
    let order = ex.first().map_or(1, |p| p[0].order());
    let field = CycloField::new(order);
    let pts = ex.iter().map(|p| [0, 1, 2].map(|i| CyElem::from_cyclo(&field, &p[i]))).collect();
    Ok((field, pts))
}

/// A real element of Q(ζ_L) as a scalar: Σ cᵢ·cos(2πi/L).
pub fn cyelem_to_scalar(x: &CyElem) -> Scalar {
    if let Some(r) = x.as_rational() {
        return Scalar::rational(r);
    }
    let order = x.field().order() as i64;
    let mut acc = Scalar::zero();
    for (i, c) in x.coefficients().iter().enumerate() {
        if Zero::is_zero(c) {
            continue;
        }
        let term = Scalar::rational(c.clone()).mul(&Scalar::cos_turns(&BigRational::new((i as i64).into(), order.into())));
        acc = acc.add(&term);
    }
    acc
}

/// Cubic from an exact coefficient vector over Q(ζ_L).
pub fn cubic_from_exact(c: &[CyElem]) -> Result<Cubic> {
    let rat: Option<Vec<BigRational>> = c.iter().map(CyElem::as_rational).collect();
    match rat {
        Some(r) => Cubic::from_rationals(&r),
        None => {
            let s: Vec<Scalar> = c.iter().map(cyelem_to_scalar).collect();
            Cubic::new(s.try_into().expect("ten coefficients"))
        }
    }
}
