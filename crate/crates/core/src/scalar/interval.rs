//! Dyadic intervals with outward rounding.
//!
//! An [`Interval`] encloses a real number between `lo * 2^-scale` and
//! `hi * 2^-scale`. Integer inputs stay exact (scale 0) through additions and
//! multiplications; only when a product's scale exceeds the working precision
//! are the endpoints rounded, always outward.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Sign;

#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    scale: u32,
    prec: u32,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

pub(crate) fn floor_shift(v: &BigInt, bits: u32) -> BigInt {
    if bits == 0 {
        return v.clone();
    }
    v.div_floor(&pow2(bits))
}

pub(crate) fn ceil_shift(v: &BigInt, bits: u32) -> BigInt {
    if bits == 0 {
        return v.clone();
    }
    -((-v).div_floor(&pow2(bits)))
}

fn floor_ratio(r: &BigRational) -> BigInt {
    r.numer().div_floor(r.denom())
}

fn ceil_ratio(r: &BigRational) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

impl Interval {
    /// Builds an interval from raw endpoints at the given scale.
    ///
    /// Panics if `lo > hi`.
    pub fn from_parts(lo: BigInt, hi: BigInt, scale: u32, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        let mut iv = Interval { lo, hi, scale, prec };
        iv.round_to_prec();
        iv
    }

    pub fn exact_int(v: BigInt, prec: u32) -> Self {
        Interval { lo: v.clone(), hi: v, scale: 0, prec }
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact_int(BigInt::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::exact_int(BigInt::one(), prec)
    }

    /// Encloses a rational. Dyadic rationals whose denominator fits the
    /// working precision are represented exactly.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let den = r.denom();
        let tz = den.trailing_zeros().unwrap_or(0);
        if (den >> tz as usize).is_one() && tz <= prec as u64 {
            let s = tz as u32;
            return Interval { lo: r.numer().clone(), hi: r.numer().clone(), scale: s, prec };
        }
        let scaled = r * BigRational::from_integer(pow2(prec));
        Interval { lo: floor_ratio(&scaled), hi: ceil_ratio(&scaled), scale: prec, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn endpoints(&self) -> (&BigInt, &BigInt) {
        (&self.lo, &self.hi)
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn lo_rational(&self) -> BigRational {
        BigRational::new(self.lo.clone(), pow2(self.scale))
    }

    pub fn hi_rational(&self) -> BigRational {
        BigRational::new(self.hi.clone(), pow2(self.scale))
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Certified sign, or `None` when the interval straddles zero without
    /// being exactly zero.
    pub fn sign(&self) -> Option<Sign> {
        if self.lo.is_positive() {
            Some(Sign::Positive)
        } else if self.hi.is_negative() {
            Some(Sign::Negative)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Sign::Zero)
        } else {
            None
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        let mid = BigRational::new(&self.lo + &self.hi, pow2(self.scale + 1));
        rational_to_f64(&mid)
    }

    fn round_to_prec(&mut self) {
        if self.scale > self.prec {
            let shift = self.scale - self.prec;
            self.lo = floor_shift(&self.lo, shift);
            self.hi = ceil_shift(&self.hi, shift);
            self.scale = self.prec;
        }
    }

    fn rescaled(&self, scale: u32) -> (BigInt, BigInt) {
        debug_assert!(scale >= self.scale);
        let up = (scale - self.scale) as usize;
        (&self.lo << up, &self.hi << up)
    }

    pub fn neg(&self) -> Self {
        Interval { lo: -&self.hi, hi: -&self.lo, scale: self.scale, prec: self.prec }
    }

    pub fn add(&self, other: &Self) -> Self {
        let scale = self.scale.max(other.scale);
        let (al, ah) = self.rescaled(scale);
        let (bl, bh) = other.rescaled(scale);
        Interval { lo: al + bl, hi: ah + bh, scale, prec: self.prec.max(other.prec) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        let scale = self.scale + other.scale;
        let (lo, hi) = if self.is_exact() && other.is_exact() {
            let p = &self.lo * &other.lo;
            (p.clone(), p)
        } else {
            let c = [&self.lo * &other.lo, &self.lo * &other.hi, &self.hi * &other.lo, &self.hi * &other.hi];
            let lo = c.iter().min().unwrap().clone();
            let hi = c.iter().max().unwrap().clone();
            (lo, hi)
        };
        let mut iv = Interval { lo, hi, scale, prec };
        iv.round_to_prec();
        iv
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        let a = &self.lo * k;
        let b = &self.hi * k;
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Interval { lo, hi, scale: self.scale, prec: self.prec }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Interval::one(self.prec);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Interval quotient; `None` when the divisor contains zero.
    pub fn div(&self, other: &Self) -> Option<Self> {
        if other.contains_zero() {
            return None;
        }
        let prec = self.prec.max(other.prec);
        let a = [self.lo_rational(), self.hi_rational()];
        let b = [other.lo_rational(), other.hi_rational()];
        let mut qs = Vec::with_capacity(4);
        for x in &a {
            for y in &b {
                qs.push(x / y);
            }
        }
        let lo_q = qs.iter().min().unwrap();
        let hi_q = qs.iter().max().unwrap();
        let f = BigRational::from_integer(pow2(prec));
        Some(Interval {
            lo: floor_ratio(&(lo_q * &f)),
            hi: ceil_ratio(&(hi_q * &f)),
            scale: prec,
            prec,
        })
    }

    /// True when the two enclosures cannot denote the same number.
    pub fn disjoint(&self, other: &Self) -> bool {
        self.sub(other).sign().map_or(false, |s| s != Sign::Zero)
    }

    pub fn compare(&self, other: &Self) -> Option<Ordering> {
        self.sub(other).sign().map(Sign::as_ordering)
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Interval[~{:e}; {} bits]", self.midpoint_f64(), self.prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn integers_stay_exact() {
        let a = Interval::exact_int(BigInt::from(7), 64);
        let b = Interval::exact_int(BigInt::from(-3), 64);
        let p = a.mul(&b).add(&a);
        assert!(p.is_exact());
        assert_eq!(p.endpoints().0, &BigInt::from(-14));
        assert_eq!(a.sub(&a).sign(), Some(Sign::Zero));
    }

    #[test]
    fn third_is_enclosed() {
        let t = Interval::from_rational(&q(1, 3), 64);
        assert!(t.lo_rational() < q(1, 3) && q(1, 3) < t.hi_rational());
        let three = t.mul_int(&BigInt::from(3));
        assert!(three.lo_rational() <= q(1, 1) && q(1, 1) <= three.hi_rational());
        assert_eq!(three.sub(&Interval::one(64)).sign(), None);
    }

    #[test]
    fn division_encloses_quotient() {
        let a = Interval::from_rational(&q(2, 1), 80);
        let b = Interval::from_rational(&q(3, 1), 80);
        let c = a.div(&b).unwrap();
        assert!(c.lo_rational() <= q(2, 3) && q(2, 3) <= c.hi_rational());
        assert!(a.div(&Interval::zero(80)).is_none());
    }

    #[test]
    fn dyadic_rational_is_exact() {
        let h = Interval::from_rational(&q(-5, 8), 16);
        assert!(h.is_exact());
        assert_eq!(h.sign(), Some(Sign::Negative));
    }
}
