//! Certified enclosures of π and of sin/cos at rational multiples of π.
//!
//! Everything is fixed point at `w = prec + GUARD` bits with explicit ulp
//! error accounting; the results are rounded outward to `prec` bits.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval::{ceil_shift, floor_shift, Interval};

const GUARD: u32 = 40;

/// atan(1/k) * 2^w, with an error bound in ulps.
fn atan_inv(k: u64, w: u32) -> (BigInt, u64) {
    let k = BigInt::from(k);
    let k2 = &k * &k;
    let mut power = (BigInt::one() << w as usize) / &k;
    let mut sum = BigInt::zero();
    let mut terms = 0u64;
    let mut i = 0u64;
    loop {
        let term = &power / BigInt::from(2 * i + 1);
        if term.is_zero() {
            break;
        }
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &k2;
        terms += 1;
        i += 1;
    }
    // each term is off by < 3 ulp; the alternating tail is below one
    // computed term plus its error
    (sum, 3 * terms + 8)
}

/// π * 2^w as (lo, hi).
fn pi_fixed(w: u32) -> (BigInt, BigInt) {
    static CACHE: OnceLock<Mutex<HashMap<u32, (BigInt, BigInt)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&w) {
        return v.clone();
    }
    let (a, ea) = atan_inv(5, w);
    let (b, eb) = atan_inv(239, w);
    let v = a * 16 - b * 4;
    let e = BigInt::from(16 * ea + 4 * eb);
    let out = (&v - &e, &v + &e);
    cache.lock().unwrap().insert(w, out.clone());
    out
}

/// Enclosure of π at `prec` bits.
pub fn pi(prec: u32) -> Interval {
    let (lo, hi) = pi_fixed(prec + GUARD);
    Interval::from_parts(lo, hi, prec + GUARD, prec)
}

fn mul_fixed(a: &BigInt, b: &BigInt, w: u32) -> BigInt {
    (a * b) >> w as usize
}

/// Taylor series for sin (odd) or cos (even) at fixed point `x` in [0, 1].
/// Returns the truncated value and an ulp error bound.
fn series(x: &BigInt, w: u32, odd: bool) -> (BigInt, BigInt) {
    let x2 = mul_fixed(x, x, w);
    let mut term = if odd { x.clone() } else { BigInt::one() << w as usize };
    let mut sum = BigInt::zero();
    let mut n = if odd { 1u64 } else { 0u64 };
    let mut count = 0u64;
    let mut i = 0u64;
    while !term.is_zero() {
        if i % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        term = mul_fixed(&term, &x2, w) / BigInt::from((n + 1) * (n + 2));
        n += 2;
        count += 1;
        i += 1;
    }
    (sum, BigInt::from(4 * count + 8))
}

/// Enclosures of (sin(πq), cos(πq)).
pub fn sin_cos_pi(q: &BigRational, prec: u32) -> (Interval, Interval) {
    let two = BigRational::from_integer(BigInt::from(2));
    let one = BigRational::one();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));

    // reduce to [0, 2)
    let mut r = q - (q / &two).floor() * &two;
    let mut s_sign = 1i32;
    let mut c_sign = 1i32;
    if r >= one {
        r -= &one;
        s_sign = -s_sign;
        c_sign = -c_sign;
    }
    if r > half {
        r = &one - &r;
        c_sign = -c_sign;
    }
    let mut swap = false;
    if r > quarter {
        r = &half - &r;
        swap = true;
    }
    let (sr, cr) = sin_cos_reduced(&r, prec);
    let (mut s, mut c) = if swap { (cr, sr) } else { (sr, cr) };
    if s_sign < 0 {
        s = s.neg();
    }
    if c_sign < 0 {
        c = c.neg();
    }
    (s, c)
}

/// sin/cos of πr for r in [0, 1/4].
fn sin_cos_reduced(r: &BigRational, prec: u32) -> (Interval, Interval) {
    if r.is_zero() {
        return (Interval::zero(prec), Interval::one(prec));
    }
    let w = prec + GUARD;
    let (plo, phi) = pi_fixed(w);
    let num = r.numer();
    let den = r.denom();
    let xlo = (&plo * num).div_floor(den);
    let xhi = -((-(&phi * num)).div_floor(den));
    let xlo = if xlo.is_negative() { BigInt::zero() } else { xlo };

    let (s_lo, es_lo) = series(&xlo, w, true);
    let (s_hi, es_hi) = series(&xhi, w, true);
    let (c_at_hi, ec_hi) = series(&xhi, w, false);
    let (c_at_lo, ec_lo) = series(&xlo, w, false);

    // sin increasing, cos decreasing on [0, π/4]
    let sin = Interval::from_parts(
        floor_shift(&(s_lo - es_lo), GUARD),
        ceil_shift(&(s_hi + es_hi), GUARD),
        prec,
        prec,
    );
    let cos = Interval::from_parts(
        floor_shift(&(c_at_hi - ec_hi), GUARD),
        ceil_shift(&(c_at_lo + ec_lo), GUARD),
        prec,
        prec,
    );
    (sin, cos)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::interval::rational_to_f64;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn width(iv: &Interval) -> f64 {
        rational_to_f64(&(iv.hi_rational() - iv.lo_rational()))
    }

    #[test]
    fn pi_digits() {
        let p = pi(200);
        assert!(width(&p) < 1e-55);
        assert!((p.midpoint_f64() - std::f64::consts::PI).abs() < 1e-15);
        // 355/113 is larger than π
        assert!(p.hi_rational() < q(355, 113));
        assert!(p.lo_rational() > q(333, 106));
    }

    #[test]
    fn special_angles() {
        for (n, d) in [(1, 6), (1, 3), (5, 4), (-7, 12), (11, 7), (3, 2)] {
            let (s, c) = sin_cos_pi(&q(n, d), 128);
            let x = std::f64::consts::PI * n as f64 / d as f64;
            assert!((s.midpoint_f64() - x.sin()).abs() < 1e-14, "sin {n}/{d}");
            assert!((c.midpoint_f64() - x.cos()).abs() < 1e-14, "cos {n}/{d}");
            assert!(width(&s) < 1e-30 && width(&c) < 1e-30);
        }
    }

    #[test]
    fn half_angle_is_enclosed() {
        // sin(π/6) = 1/2 must lie inside
        let (s, _) = sin_cos_pi(&q(1, 6), 96);
        assert!(s.lo_rational() <= q(1, 2) && q(1, 2) <= s.hi_rational());
        let (_, c) = sin_cos_pi(&q(2, 3), 96);
        assert!(c.lo_rational() <= q(-1, 2) && q(-1, 2) <= c.hi_rational());
    }

    #[test]
    fn exact_at_right_angles() {
        let (s, c) = sin_cos_pi(&q(1, 2), 64);
        assert!(s.is_exact() && c.is_exact());
        assert_eq!(c.sign(), Some(crate::scalar::Sign::Zero));
    }
}
