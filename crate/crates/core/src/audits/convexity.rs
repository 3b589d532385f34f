//! The convexity gap: |A − A| against |f(A) − f(A)| for a convex f.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConvexMap {
    Square,
    /// t ↦ log((t + a)/(t + b))
    LogRatio { a: BigRational, b: BigRational },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexityStats {
    pub n: usize,
    pub differences: usize,
    pub image_differences: usize,
    /// max(|A − A|, |f(A) − f(A)|) / n^{5/4}
    pub ratio: f64,
}

pub fn convexity_gap_experiment(a: &[BigRational], f: &ConvexMap) -> Result<ConvexityStats> {
    let a: Vec<&BigRational> = a.iter().collect::<BTreeSet<_>>().into_iter().collect();
    let n = a.len();
    let differences = a.iter().flat_map(|x| a.iter().map(move |y| *x - *y)).collect::<BTreeSet<_>>().len();
    let image_differences = match f {
        ConvexMap::Square => a.iter().flat_map(|x| a.iter().map(move |y| *x * *x - *y * *y)).collect::<BTreeSet<_>>().len(),
        ConvexMap::LogRatio { a: p, b: q } => {
            if p == q {
                return Err(Error::DomainError("log((t+a)/(t+a)) is constant".into()));
            }
            // log u − log v is determined by u / v
            let vals: Vec<BigRational> = a
                .iter()
                .map(|t| {
                    let (num, den) = (*t + p, *t + q);
                    if num.is_zero() || den.is_zero() || num.is_negative() != den.is_negative() {
                        Err(Error::DomainError(format!("log((t+a)/(t+b)) undefined at t = {t}")))
                    } else {
                        Ok(num / den)
                    }
                })
                .collect::<Result<_>>()?;
            vals.iter().flat_map(|u| vals.iter().map(move |v| u / v)).collect::<BTreeSet<_>>().len()
        }
    };
    let ratio = if n == 0 { 0.0 } else { differences.max(image_differences) as f64 / (n as f64).powf(1.25) };
    Ok(ConvexityStats { n, differences, image_differences, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: impl IntoIterator<Item = i64>) -> Vec<BigRational> {
        v.into_iter().map(|x| BigRational::from_integer(x.into())).collect()
    }

    #[test]
    fn interval_and_squares() {
        let s = convexity_gap_experiment(&ints(1..=10), &ConvexMap::Square).unwrap();
        assert_eq!(s.differences, 19);
        // x² − y² over 1..10, counted by brute force
        let mut brute = BTreeSet::new();
        for x in 1..=10i64 {
            for y in 1..=10i64 {
                brute.insert(x * x - y * y);
            }
        }
        assert_eq!(s.image_differences, brute.len());
    }

    #[test]
    fn singleton() {
        let s = convexity_gap_experiment(&ints([5]), &ConvexMap::Square).unwrap();
        assert_eq!((s.differences, s.image_differences), (1, 1));
    }

    #[test]
    fn log_ratio_domain() {
        let f = ConvexMap::LogRatio { a: BigRational::from_integer(1.into()), b: BigRational::from_integer(2.into()) };
        assert!(convexity_gap_experiment(&ints(1..=5), &f).is_ok());
        assert!(matches!(convexity_gap_experiment(&ints([-1]), &f), Err(Error::DomainError(_))));
    }
}
