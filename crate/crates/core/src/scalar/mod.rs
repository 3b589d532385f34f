//! Scalars: exact rationals, symbolic trig values at rational multiples of
//! π, and lazily evaluated real expressions built from both.

pub mod cyclotomic;
pub mod interval;
pub mod sign;
pub mod trig;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use cyclotomic::{Cyclo, MAX_ORDER};
use interval::Interval;

pub use sign::{Ring, ScalarTerm, SignEngine, SignPolicy, VecTerm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_ordering(self) -> Ordering {
        match self {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }

    pub fn of_int(v: &BigInt) -> Sign {
        if v.is_positive() {
            Sign::Positive
        } else if v.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TrigFn {
    Cos,
    Sin,
    Cot,
}

impl TrigFn {
    pub fn name(self) -> &'static str {
        match self {
            TrigFn::Cos => "cos",
            TrigFn::Sin => "sin",
            TrigFn::Cot => "cot",
        }
    }
}

/// f(π·q) with q reduced into [0, 2).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TrigSymbol {
    func: TrigFn,
    half_turns: BigRational,
}

fn reduce_mod2(q: &BigRational) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    q - (q / &two).floor() * two
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact rational value of cos(πq), q in [0, 2), when there is one.
fn rational_cos(q: &BigRational) -> Option<BigRational> {
    let d = q.denom();
    if !(d.is_one() || *d == BigInt::from(2) || *d == BigInt::from(3)) {
        return None;
    }
    let six = (q * rat(6, 1)).to_integer();
    let six = i64::try_from(six).ok()?;
    Some(match six {
        0 => rat(1, 1),
        2 | 10 => rat(1, 2),
        3 | 9 => rat(0, 1),
        4 | 8 => rat(-1, 2),
        6 => rat(-1, 1),
        _ => return None,
    })
}

impl TrigSymbol {
    pub fn func(&self) -> TrigFn {
        self.func
    }

    /// The angle divided by π, in [0, 2).
    pub fn half_turns(&self) -> &BigRational {
        &self.half_turns
    }

    /// Smallest L such that the value lies in Q(ζ_L).
    pub fn cyclo_order(&self) -> u64 {
        let b: u64 = self.half_turns.denom().try_into().unwrap_or(u64::MAX / 8);
        let base = 2 * b;
        match self.func {
            TrigFn::Cos => base,
            _ => base.lcm(&4),
        }
    }

    fn zeta_exp(&self, order: u64) -> i64 {
        // angle πa/b = 2π·a/(2b)  ->  ζ_order^{a·order/(2b)}
        let a: i64 = self.half_turns.numer().try_into().expect("angle numerator");
        let b: i64 = self.half_turns.denom().try_into().expect("angle denominator");
        a * (order as i64 / (2 * b))
    }

    fn cyclo_cos(&self, order: u64) -> Cyclo {
        let e = self.zeta_exp(order);
        let two = BigInt::from(2);
        Cyclo::monomial(order, e, BigInt::one(), two.clone()).add(&Cyclo::monomial(order, -e, BigInt::one(), two))
    }

    fn cyclo_sin(&self, order: u64) -> Cyclo {
        // (z − 1/z)/(2i) = (ζ^{e+3L/4} + ζ^{L/4−e})/2
        let e = self.zeta_exp(order);
        let q = order as i64 / 4;
        let two = BigInt::from(2);
        Cyclo::monomial(order, e + 3 * q, BigInt::one(), two.clone())
            .add(&Cyclo::monomial(order, q - e, BigInt::one(), two))
    }

    fn enclose(&self, prec: u32) -> Option<Interval> {
        let (s, c) = trig::sin_cos_pi(&self.half_turns, prec);
        match self.func {
            TrigFn::Cos => Some(c),
            TrigFn::Sin => Some(s),
            TrigFn::Cot => c.div(&s),
        }
    }
}

/// Lazy real expression; evaluated to any precision on demand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Rat(BigRational),
    Trig(TrigSymbol),
    Add(Arc<Expr>, Arc<Expr>),
    Sub(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Div(Arc<Expr>, Arc<Expr>),
    Neg(Arc<Expr>),
    Pow(Arc<Expr>, u32),
}

/// A cyclotomic fraction; `den = None` means 1.
#[derive(Clone, Debug)]
pub struct CycloFrac {
    pub num: Cyclo,
    pub den: Option<Cyclo>,
}

impl CycloFrac {
    fn whole(num: Cyclo) -> Self {
        CycloFrac { num, den: None }
    }

    fn den_or_one(&self) -> Cyclo {
        self.den.clone().unwrap_or_else(|| Cyclo::from_int(1, self.num.order()))
    }

    fn add(&self, o: &Self, neg: bool) -> Self {
        let rhs = if neg { o.num.neg() } else { o.num.clone() };
        match (&self.den, &o.den) {
            (None, None) => Self::whole(self.num.add(&rhs)),
            _ => {
                let (d1, d2) = (self.den_or_one(), o.den_or_one());
                CycloFrac { num: self.num.mul(&d2).add(&rhs.mul(&d1)), den: Some(d1.mul(&d2)) }
            }
        }
    }

    fn mul(&self, o: &Self) -> Self {
        let den = match (&self.den, &o.den) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (Some(a), Some(b)) => Some(a.mul(b)),
        };
        CycloFrac { num: self.num.mul(&o.num), den }
    }

    fn div(&self, o: &Self) -> Self {
        let flipped = CycloFrac { num: o.den_or_one(), den: Some(o.num.clone()) };
        self.mul(&flipped)
    }
}

impl Expr {
    fn enclose(&self, prec: u32) -> Option<Interval> {
        Some(match self {
            Expr::Rat(r) => Interval::from_rational(r, prec),
            Expr::Trig(t) => t.enclose(prec)?,
            Expr::Add(a, b) => a.enclose(prec)?.add(&b.enclose(prec)?),
            Expr::Sub(a, b) => a.enclose(prec)?.sub(&b.enclose(prec)?),
            Expr::Mul(a, b) => a.enclose(prec)?.mul(&b.enclose(prec)?),
            Expr::Div(a, b) => a.enclose(prec)?.div(&b.enclose(prec)?)?,
            Expr::Neg(a) => a.enclose(prec)?.neg(),
            Expr::Pow(a, e) => a.enclose(prec)?.pow(*e),
        })
    }

    fn cyclo_order(&self) -> u64 {
        match self {
            Expr::Rat(_) => 1,
            Expr::Trig(t) => t.cyclo_order(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.cyclo_order().lcm(&b.cyclo_order())
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.cyclo_order(),
        }
    }

    fn to_cyclo(&self, order: u64) -> CycloFrac {
        match self {
            Expr::Rat(r) => CycloFrac::whole(Cyclo::from_rational(r, order)),
            Expr::Trig(t) => Scalar::Trig(t.clone()).to_cyclo(order),
            Expr::Add(a, b) => a.to_cyclo(order).add(&b.to_cyclo(order), false),
            Expr::Sub(a, b) => a.to_cyclo(order).add(&b.to_cyclo(order), true),
            Expr::Mul(a, b) => a.to_cyclo(order).mul(&b.to_cyclo(order)),
            Expr::Div(a, b) => a.to_cyclo(order).div(&b.to_cyclo(order)),
            Expr::Neg(a) => {
                let f = a.to_cyclo(order);
                CycloFrac { num: f.num.neg(), den: f.den }
            }
            Expr::Pow(a, e) => {
                let f = a.to_cyclo(order);
                let mut acc = CycloFrac::whole(Cyclo::from_int(1, order));
                for _ in 0..*e {
                    acc = acc.mul(&f);
                }
                acc
            }
        }
    }
}

/// A real number in one of three representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Trig(TrigSymbol),
    Real(Arc<Expr>),
}

impl Scalar {
    pub fn int(v: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::Rational(rat(n, d))
    }

    pub fn rational(r: BigRational) -> Self {
        Scalar::Rational(r)
    }

    pub fn zero() -> Self {
        Scalar::int(0)
    }

    pub fn one() -> Self {
        Scalar::int(1)
    }

    /// f(π·q). Collapses to an exact rational when the value is rational.
    pub fn trig(func: TrigFn, half_turns: &BigRational) -> Result<Self> {
        let q = reduce_mod2(half_turns);
        let exact = match func {
            TrigFn::Cos => rational_cos(&q),
            TrigFn::Sin => rational_cos(&reduce_mod2(&(&q - rat(1, 2)))),
            TrigFn::Cot => {
                if q.is_integer() {
                    return Err(Error::DomainError(format!("cot is undefined at {}π", q)));
                }
                let s = q.clone() * rat(4, 1);
                if s.is_integer() {
                    // multiples of π/4
                    let k = i64::try_from(s.to_integer()).unwrap() % 4;
                    Some(match k {
                        1 => rat(1, 1),
                        2 => rat(0, 1),
                        3 => rat(-1, 1),
                        _ => unreachable!(),
                    })
                } else {
                    None
                }
            }
        };
        Ok(match exact {
            Some(r) => Scalar::Rational(r),
            None => Scalar::Trig(TrigSymbol { func, half_turns: q }),
        })
    }

    pub fn cos_pi(q: &BigRational) -> Self {
        Self::trig(TrigFn::Cos, q).unwrap()
    }

    pub fn sin_pi(q: &BigRational) -> Self {
        Self::trig(TrigFn::Sin, q).unwrap()
    }

    /// cos(2πt)
    pub fn cos_turns(t: &BigRational) -> Self {
        Self::cos_pi(&(t * rat(2, 1)))
    }

    /// sin(2πt)
    pub fn sin_turns(t: &BigRational) -> Self {
        Self::sin_pi(&(t * rat(2, 1)))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rational(_))
    }

    fn expr(&self) -> Arc<Expr> {
        match self {
            Scalar::Rational(r) => Arc::new(Expr::Rat(r.clone())),
            Scalar::Trig(t) => Arc::new(Expr::Trig(t.clone())),
            Scalar::Real(e) => e.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            _ => Scalar::Real(Arc::new(Expr::Neg(self.expr()))),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ if o.is_certainly_zero() => self.clone(),
            _ if self.is_certainly_zero() => o.clone(),
            _ => Scalar::Real(Arc::new(Expr::Add(self.expr(), o.expr()))),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            _ if o.is_certainly_zero() => self.clone(),
            _ => Scalar::Real(Arc::new(Expr::Sub(self.expr(), o.expr()))),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ if self.is_certainly_zero() || o.is_certainly_zero() => Scalar::zero(),
            _ if o.is_one() => self.clone(),
            _ if self.is_one() => o.clone(),
            _ => Scalar::Real(Arc::new(Expr::Mul(self.expr(), o.expr()))),
        }
    }

    /// Quotient. Division by an exact rational zero is a domain error;
    /// other zero divisors surface later as ambiguous signs.
    pub fn div(&self, o: &Self) -> Result<Self> {
        match (self, o) {
            (_, Scalar::Rational(b)) if b.is_zero() => Err(Error::DomainError("division by zero".into())),
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a / b)),
            _ if o.is_one() => Ok(self.clone()),
            _ => Ok(Scalar::Real(Arc::new(Expr::Div(self.expr(), o.expr())))),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        match self {
            Scalar::Rational(r) => Scalar::Rational(num_traits::pow(r.clone(), e as usize)),
            _ => Scalar::Real(Arc::new(Expr::Pow(self.expr(), e))),
        }
    }

    fn is_certainly_zero(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_zero())
    }

    fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_one())
    }

    /// Interval enclosure at `prec` bits; `None` if a division could not
    /// be carried out at this precision.
    pub fn enclose(&self, prec: u32) -> Option<Interval> {
        match self {
            Scalar::Rational(r) => Some(Interval::from_rational(r, prec)),
            Scalar::Trig(t) => t.enclose(prec),
            Scalar::Real(e) => e.enclose(prec),
        }
    }

    pub fn approx(&self) -> f64 {
        self.enclose(96).map_or(f64::NAN, |i| i.midpoint_f64())
    }

    /// Smallest cyclotomic order containing the value, if it is not absurd.
    pub fn cyclo_order(&self) -> Option<u64> {
        let l = match self {
            Scalar::Rational(_) => 1,
            Scalar::Trig(t) => t.cyclo_order(),
            Scalar::Real(e) => e.cyclo_order(),
        };
        (l <= MAX_ORDER).then_some(l)
    }

    /// Exact value in Q(ζ_order); `order` must be a multiple of
    /// [`Scalar::cyclo_order`].
    pub fn to_cyclo(&self, order: u64) -> CycloFrac {
        match self {
            Scalar::Rational(r) => CycloFrac::whole(Cyclo::from_rational(r, order)),
            Scalar::Trig(t) => match t.func {
                TrigFn::Cos => CycloFrac::whole(t.cyclo_cos(order)),
                TrigFn::Sin => CycloFrac::whole(t.cyclo_sin(order)),
                TrigFn::Cot => CycloFrac { num: t.cyclo_cos(order), den: Some(t.cyclo_sin(order)) },
            },
            Scalar::Real(e) => e.to_cyclo(order),
        }
    }

    /// Certified sign of a single scalar.
    pub fn sign(&self, policy: &SignPolicy) -> Result<Sign> {
        if let Scalar::Rational(r) = self {
            return Ok(Sign::of_int(r.numer()));
        }
        policy.decide(
            |bits| self.enclose(bits),
            || {
                let l = self.cyclo_order()?;
                let f = self.to_cyclo(l);
                Some(f.num.is_zero())
            },
        )
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Trig(t) => write!(f, "{}({}π)", t.func.name(), t.half_turns),
            Scalar::Real(_) => write!(f, "≈{}", self.approx()),
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::int(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Rational(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_collapses_to_rational() {
        assert_eq!(Scalar::cos_pi(&rat(1, 3)), Scalar::ratio(1, 2));
        assert_eq!(Scalar::sin_pi(&rat(3, 2)), Scalar::int(-1));
        assert_eq!(Scalar::sin_pi(&rat(7, 6)), Scalar::ratio(-1, 2));
        assert_eq!(Scalar::trig(TrigFn::Cot, &rat(3, 4)).unwrap(), Scalar::int(-1));
        assert!(Scalar::trig(TrigFn::Cot, &rat(2, 1)).is_err());
        assert!(matches!(Scalar::cos_pi(&rat(1, 6)), Scalar::Trig(_)));
    }

    #[test]
    fn angles_reduce_mod_two() {
        let a = Scalar::cos_pi(&rat(13, 6));
        let b = Scalar::cos_pi(&rat(1, 6));
        assert_eq!(a, b);
        let c = Scalar::sin_pi(&rat(-1, 5));
        match c {
            Scalar::Trig(t) => assert_eq!(t.half_turns(), &rat(9, 5)),
            _ => panic!(),
        }
    }

    #[test]
    fn cyclotomic_images_are_right() {
        let p = SignPolicy::default();
        // cos²+sin² = 1 for an awkward angle
        let q = rat(2, 7);
        let c = Scalar::cos_pi(&q);
        let s = Scalar::sin_pi(&q);
        let e = c.pow(2).add(&s.pow(2)).sub(&Scalar::one());
        assert_eq!(e.sign(&p).unwrap(), Sign::Zero);
        // cot = cos/sin
        let k = Scalar::trig(TrigFn::Cot, &q).unwrap();
        let d = k.mul(&s).sub(&c);
        assert_eq!(d.sign(&p).unwrap(), Sign::Zero);
        assert_eq!(c.sign(&p).unwrap(), Sign::Positive);
        assert_eq!(Scalar::cos_pi(&rat(5, 7)).sign(&p).unwrap(), Sign::Negative);
    }

    #[test]
    fn interval_only_protocol_fails_on_hidden_zero() {
        let p = SignPolicy { start_bits: 64, cap_bits: 128, exact_zero: false };
        let q = rat(1, 5);
        let e = Scalar::cos_pi(&q).pow(2).add(&Scalar::sin_pi(&q).pow(2)).sub(&Scalar::one());
        assert_eq!(e.sign(&p), Err(Error::AmbiguousSign { bits: 128 }));
    }
}
