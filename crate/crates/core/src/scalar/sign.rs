//! The sign-decision protocol.
//!
//! Interval evaluation at `start_bits`; if that straddles zero, an exact
//! vanishing test in a cyclotomic field (when every scalar involved lives in
//! one); otherwise the precision doubles up to `cap_bits`, after which the
//! answer is [`Error::AmbiguousSign`] — never a guess.

use std::sync::{Arc, OnceLock};

use num_integer::Integer;

use super::cyclotomic::{Cyclo, MAX_ORDER};
use super::interval::Interval;
use super::{Scalar, Sign};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignPolicy {
    pub start_bits: u32,
    pub cap_bits: u32,
    /// Try the exact cyclotomic vanishing test before escalating.
    pub exact_zero: bool,
}

impl Default for SignPolicy {
    fn default() -> Self {
        SignPolicy { start_bits: 128, cap_bits: 4096, exact_zero: true }
    }
}

impl SignPolicy {
    pub const MIN_CAP: u32 = 64;

    /// Starts at 256 bits.
    pub fn geometric() -> Self {
        SignPolicy { start_bits: 256, ..Self::default() }
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.cap_bits = cap.max(Self::MIN_CAP);
        self.start_bits = self.start_bits.min(self.cap_bits);
        self
    }

    /// Runs the protocol given an interval evaluator and an exact zero test
    /// (`None` when no exact test applies).
    pub fn decide<I, Z>(&self, mut interval: I, exact_is_zero: Z) -> Result<Sign>
    where
        I: FnMut(u32) -> Option<Interval>,
        Z: FnOnce() -> Option<bool>,
    {
        let mut bits = self.start_bits.min(self.cap_bits).max(16);
        let mut exact = Some(exact_is_zero);
        loop {
            if let Some(s) = interval(bits).and_then(|iv| iv.sign()) {
                return Ok(s);
            }
            if self.exact_zero {
                if let Some(test) = exact.take() {
                    if test() == Some(true) {
                        return Ok(Sign::Zero);
                    }
                }
            }
            if bits >= self.cap_bits {
                return Err(Error::AmbiguousSign { bits: self.cap_bits });
            }
            bits = (bits * 2).min(self.cap_bits);
        }
    }
}

/// The arithmetic the predicates need.
pub trait Ring: Clone {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Ring for Interval {
    fn add(&self, o: &Self) -> Self {
        Interval::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Interval::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Interval::mul(self, o)
    }
    fn neg(&self) -> Self {
        Interval::neg(self)
    }
}

impl Ring for Cyclo {
    fn add(&self, o: &Self) -> Self {
        Cyclo::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Cyclo::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Cyclo::mul(self, o)
    }
    fn neg(&self) -> Self {
        Cyclo::neg(self)
    }
}

pub fn cross<R: Ring>(a: &[R; 3], b: &[R; 3]) -> [R; 3] {
    [
        a[1].mul(&b[2]).sub(&a[2].mul(&b[1])),
        a[2].mul(&b[0]).sub(&a[0].mul(&b[2])),
        a[0].mul(&b[1]).sub(&a[1].mul(&b[0])),
    ]
}

pub fn dot<R: Ring>(a: &[R; 3], b: &[R; 3]) -> R {
    a[0].mul(&b[0]).add(&a[1].mul(&b[1])).add(&a[2].mul(&b[2]))
}

pub fn det3<R: Ring>(a: &[R; 3], b: &[R; 3], c: &[R; 3]) -> R {
    dot(a, &cross(b, c))
}

/// A vector built from indexed points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VecTerm {
    Point(usize),
    Cross(Box<VecTerm>, Box<VecTerm>),
    Neg(Box<VecTerm>),
}

impl VecTerm {
    pub fn cross(a: VecTerm, b: VecTerm) -> VecTerm {
        VecTerm::Cross(Box::new(a), Box::new(b))
    }

    pub fn join(i: usize, j: usize) -> VecTerm {
        Self::cross(VecTerm::Point(i), VecTerm::Point(j))
    }

    pub fn eval<R: Ring>(&self, pts: &[[R; 3]]) -> [R; 3] {
        match self {
            VecTerm::Point(i) => pts[*i].clone(),
            VecTerm::Cross(a, b) => cross(&a.eval(pts), &b.eval(pts)),
            VecTerm::Neg(a) => {
                let v = a.eval(pts);
                [v[0].neg(), v[1].neg(), v[2].neg()]
            }
        }
    }
}

/// A scalar polynomial predicate over indexed points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalarTerm {
    Det(VecTerm, VecTerm, VecTerm),
    Dot(VecTerm, VecTerm),
}

impl ScalarTerm {
    pub fn collinear(i: usize, j: usize, k: usize) -> Self {
        ScalarTerm::Det(VecTerm::Point(i), VecTerm::Point(j), VecTerm::Point(k))
    }

    pub fn eval<R: Ring>(&self, pts: &[[R; 3]]) -> R {
        match self {
            ScalarTerm::Det(a, b, c) => det3(&a.eval(pts), &b.eval(pts), &c.eval(pts)),
            ScalarTerm::Dot(a, b) => dot(&a.eval(pts), &b.eval(pts)),
        }
    }
}

type Level = OnceLock<Option<Arc<Vec<[Interval; 3]>>>>;

/// Certified signs of predicates over a fixed list of points. Per-precision
/// enclosures and the exact cyclotomic images are computed once and shared.
pub struct SignEngine {
    points: Arc<Vec<[Scalar; 3]>>,
    policy: SignPolicy,
    all_rational: bool,
    levels: Vec<(u32, Level)>,
    exact: OnceLock<Option<Arc<Vec<[Cyclo; 3]>>>>,
}

impl SignEngine {
    pub fn new(points: Vec<[Scalar; 3]>, policy: SignPolicy) -> Self {
        let all_rational = points.iter().all(|p| p.iter().all(Scalar::is_rational));
        let mut levels = Vec::new();
        let mut bits = policy.start_bits.min(policy.cap_bits).max(16);
        loop {
            levels.push((bits, OnceLock::new()));
            if bits >= policy.cap_bits {
                break;
            }
            bits = (bits * 2).min(policy.cap_bits);
        }
        SignEngine { points: Arc::new(points), policy, all_rational, levels, exact: OnceLock::new() }
    }

    pub fn policy(&self) -> &SignPolicy {
        &self.policy
    }

    pub fn points(&self) -> &[[Scalar; 3]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn all_rational(&self) -> bool {
        self.all_rational
    }

    /// Enclosures of all points at the `level`-th precision step.
    pub fn level(&self, level: usize) -> Option<Arc<Vec<[Interval; 3]>>> {
        let (bits, cell) = self.levels.get(level)?;
        cell.get_or_init(|| {
            let mut out = Vec::with_capacity(self.points.len());
            for p in self.points.iter() {
                out.push([p[0].enclose(*bits)?, p[1].enclose(*bits)?, p[2].enclose(*bits)?]);
            }
            Some(Arc::new(out))
        })
        .clone()
    }

    /// Enclosures at the starting precision (exact for rational points).
    pub fn base(&self) -> Option<Arc<Vec<[Interval; 3]>>> {
        self.level(0)
    }

    /// Integral cyclotomic images of all points, scaled to clear
    /// denominators; `None` if some coordinate is not cyclotomic.
    pub fn exact_points(&self) -> Option<Arc<Vec<[Cyclo; 3]>>> {
        self.exact
            .get_or_init(|| {
                let mut order = 1u64;
                for p in self.points.iter() {
                    for s in p {
                        order = order.lcm(&s.cyclo_order()?);
                        if order > MAX_ORDER {
                            return None;
                        }
                    }
                }
                let pts = self.points.iter().map(|p| exact_point(p, order)).collect();
                Some(Arc::new(pts))
            })
            .clone()
    }

    /// Certified sign of `term`.
    pub fn sign(&self, term: &ScalarTerm) -> Result<Sign> {
        self.sign_of(term)
    }

    /// Certified sign of any predicate.
    pub fn sign_of<P: Predicate + ?Sized>(&self, pred: &P) -> Result<Sign> {
        let mut level = 0;
        let mut tried_exact = false;
        loop {
            if let Some(pts) = self.level(level) {
                if let Some(s) = pred.interval(&pts).sign() {
                    return Ok(s);
                }
            }
            if self.policy.exact_zero && !tried_exact {
                tried_exact = true;
                if let Some(ex) = self.exact_points() {
                    if pred.exact(&ex).is_zero() {
                        return Ok(Sign::Zero);
                    }
                }
            }
            level += 1;
            if level >= self.levels.len() {
                return Err(Error::AmbiguousSign { bits: self.policy.cap_bits });
            }
        }
    }

    pub fn collinear(&self, i: usize, j: usize, k: usize) -> Result<bool> {
        Ok(self.sign(&ScalarTerm::collinear(i, j, k))? == Sign::Zero)
    }

    /// Projective equality of points i and j.
    pub fn same_point(&self, i: usize, j: usize) -> Result<bool> {
        let c = VecTerm::join(i, j);
        for axis in 0..3 {
            if self.sign_of(&Component(&c, axis))? != Sign::Zero {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Something whose sign the engine can certify.
pub trait Predicate {
    fn interval(&self, pts: &[[Interval; 3]]) -> Interval;
    fn exact(&self, pts: &[[Cyclo; 3]]) -> Cyclo;
}

impl Predicate for ScalarTerm {
    fn interval(&self, pts: &[[Interval; 3]]) -> Interval {
        self.eval(pts)
    }
    fn exact(&self, pts: &[[Cyclo; 3]]) -> Cyclo {
        self.eval(pts)
    }
}

/// One coordinate of a vector term.
pub struct Component<'a>(pub &'a VecTerm, pub usize);

impl Predicate for Component<'_> {
    fn interval(&self, pts: &[[Interval; 3]]) -> Interval {
        self.0.eval(pts)[self.1].clone()
    }
    fn exact(&self, pts: &[[Cyclo; 3]]) -> Cyclo {
        self.0.eval(pts)[self.1].clone()
    }
}

/// Cyclotomic image of a homogeneous triple with denominators cleared.
pub fn exact_point(p: &[Scalar; 3], order: u64) -> [Cyclo; 3] {
    let f: Vec<_> = p.iter().map(|s| s.to_cyclo(order)).collect();
    let one = Cyclo::from_int(1, order);
    let dens: Vec<Cyclo> = f.iter().map(|x| x.den.clone().unwrap_or_else(|| one.clone())).collect();
    let any_den = f.iter().any(|x| x.den.is_some());
    let scale = |i: usize| -> Cyclo {
        let mut acc = f[i].num.clone();
        if any_den {
            for (j, d) in dens.iter().enumerate() {
                if j != i {
                    acc = acc.mul(d);
                }
            }
        }
        acc
    };
    [scale(0), scale(1), scale(2)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn circle(t: BigRational) -> [Scalar; 3] {
        [Scalar::cos_turns(&t), Scalar::sin_turns(&t), Scalar::one()]
    }

    #[test]
    fn rational_collinearity_is_exact() {
        let pts = vec![
            [Scalar::int(1), Scalar::int(0), Scalar::int(1)],
            [Scalar::int(2), Scalar::int(0), Scalar::int(1)],
            [Scalar::int(3), Scalar::int(0), Scalar::int(1)],
            [Scalar::int(1), Scalar::int(2), Scalar::int(1)],
        ];
        let e = SignEngine::new(pts, SignPolicy::default());
        assert!(e.collinear(0, 1, 2).unwrap());
        assert!(!e.collinear(0, 1, 3).unwrap());
    }

    #[test]
    fn chord_through_infinite_point() {
        // circle points 1/7 and 3/7 turns; the chord is perpendicular to the
        // bisector at 2/7 turns, i.e. direction angle (2/7 + 1/4) turns
        let mut pts = vec![circle(q(1, 7)), circle(q(3, 7))];
        let dir = q(2, 7) + q(1, 4);
        pts.push([Scalar::cos_turns(&dir), Scalar::sin_turns(&dir), Scalar::zero()]);
        let e = SignEngine::new(pts.clone(), SignPolicy::default());
        assert!(e.collinear(0, 1, 2).unwrap());
        let strict = SignEngine::new(pts, SignPolicy { start_bits: 64, cap_bits: 256, exact_zero: false });
        assert!(matches!(strict.collinear(0, 1, 2), Err(Error::AmbiguousSign { .. })));
    }

    #[test]
    fn same_point_detects_scaled_copies() {
        let pts = vec![
            [Scalar::cos_pi(&q(1, 5)), Scalar::one(), Scalar::zero()],
            [Scalar::cos_pi(&q(1, 5)).mul(&Scalar::int(3)), Scalar::int(3), Scalar::zero()],
            [Scalar::cos_pi(&q(1, 7)), Scalar::one(), Scalar::zero()],
        ];
        let e = SignEngine::new(pts, SignPolicy::default());
        assert!(e.same_point(0, 1).unwrap());
        assert!(!e.same_point(0, 2).unwrap());
    }
}
