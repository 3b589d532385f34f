//! Exact arithmetic in cyclotomic fields Q(ζ_L).
//!
//! [`Cyclo`] is a sparse element of Q[x]/(x^L − 1) evaluated at ζ_L: integer
//! numerators over one positive denominator. Deciding whether it vanishes at
//! ζ_L means reducing modulo the cyclotomic polynomial Φ_L.
//!
//! [`CycloField`] / [`CyElem`] are the reduced dense form used as a genuine
//! field (inverses via extended Euclid) for small-order linear algebra.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Orders above this are refused; the caller falls back to intervals.
pub const MAX_ORDER: u64 = 1 << 16;

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

fn mobius(mut n: u64) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Coefficients of Φ_n, low degree first. Cached.
pub fn cyclotomic_poly(n: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // Φ_n = Π_{d | n} (x^d − 1)^{μ(n/d)}; multiply first, then divide
    let mut poly: Vec<i128> = vec![1];
    let divs = divisors(n);
    let mut dividers = Vec::new();
    for &d in &divs {
        match mobius(n / d) {
            1 => poly = mul_xd_minus_one(&poly, d as usize),
            -1 => dividers.push(d as usize),
            _ => {}
        }
    }
    for d in dividers {
        poly = div_xd_minus_one(&poly, d);
    }
    let out: Vec<i64> = poly.into_iter().map(|c| i64::try_from(c).expect("cyclotomic coefficient overflow")).collect();
    let out = Arc::new(out);
    cache.lock().unwrap().insert(n, out.clone());
    out
}

fn mul_xd_minus_one(a: &[i128], d: usize) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + d];
    for (i, &c) in a.iter().enumerate() {
        out[i + d] += c;
        out[i] -= c;
    }
    out
}

fn div_xd_minus_one(a: &[i128], d: usize) -> Vec<i128> {
    let deg = a.len() - 1;
    let qdeg = deg - d;
    let mut q = vec![0i128; qdeg + 1];
    for j in (d..=deg).rev() {
        let above = if j <= qdeg { q[j] } else { 0 };
        q[j - d] = a[j] + above;
    }
    debug_assert!((0..d).all(|j| a[j] == -(if j <= qdeg { q[j] } else { 0 })));
    q
}

/// Sparse cyclotomic number: Σ num[e] ζ_L^e / den.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclo {
    order: u64,
    num: BTreeMap<u64, BigInt>,
    den: BigInt,
}

impl Cyclo {
    pub fn zero(order: u64) -> Self {
        Cyclo { order, num: BTreeMap::new(), den: BigInt::one() }
    }

    pub fn from_rational(r: &BigRational, order: u64) -> Self {
        let mut num = BTreeMap::new();
        if !r.is_zero() {
            num.insert(0, r.numer().clone());
        }
        Cyclo { order, num, den: r.denom().clone() }
    }

    pub fn from_int(v: i64, order: u64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(v)), order)
    }

    /// c · ζ^e / den
    pub fn monomial(order: u64, e: i64, c: BigInt, den: BigInt) -> Self {
        let mut out = Cyclo { order, num: BTreeMap::new(), den };
        out.push(e.rem_euclid(order as i64) as u64, c);
        out
    }

    fn push(&mut self, e: u64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.num.entry(e % self.order).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.num.remove(&(e % self.order));
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn term_count(&self) -> usize {
        self.num.len()
    }

    /// Rational value if only the constant term is present.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.num.len() {
            0 => Some(BigRational::zero()),
            1 => self.num.get(&0).map(|c| BigRational::new(c.clone(), self.den.clone())),
            _ => None,
        }
    }

    /// Re-express in a larger order `m` (a multiple of the current one).
    pub fn lift(&self, m: u64) -> Self {
        assert!(m % self.order == 0, "order {} does not divide {}", self.order, m);
        let f = m / self.order;
        Cyclo { order: m, num: self.num.iter().map(|(e, c)| (e * f, c.clone())).collect(), den: self.den.clone() }
    }

    fn combine(&self, other: &Self, sign: i32) -> Self {
        assert_eq!(self.order, other.order);
        if self.den == other.den {
            let mut out = self.clone();
            for (e, c) in &other.num {
                out.push(*e, if sign > 0 { c.clone() } else { -c });
            }
            return out;
        }
        let mut out = Cyclo { order: self.order, num: BTreeMap::new(), den: &self.den * &other.den };
        for (e, c) in &self.num {
            out.push(*e, c * &other.den);
        }
        for (e, c) in &other.num {
            let v = c * &self.den;
            out.push(*e, if sign > 0 { v } else { -v });
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -1)
    }

    pub fn neg(&self) -> Self {
        Cyclo { order: self.order, num: self.num.iter().map(|(e, c)| (*e, -c)).collect(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        let mut out = Cyclo { order: self.order, num: BTreeMap::new(), den: &self.den * &other.den };
        for (e1, c1) in &self.num {
            for (e2, c2) in &other.num {
                out.push(e1 + e2, c1 * c2);
            }
        }
        out.tidy();
        out
    }

    /// Divide numerators and denominator by their common gcd.
    fn tidy(&mut self) {
        if self.num.is_empty() {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in self.num.values() {
            g = g.gcd(c);
            if g.is_one() {
                return;
            }
        }
        for c in self.num.values_mut() {
            *c = &*c / &g;
        }
        self.den = &self.den / &g;
    }

    /// Integer coefficient vector reduced modulo Φ_L (length φ(L)),
    /// scaled by the denominator.
    fn reduced_numerators(&self) -> Vec<BigInt> {
        let phi = cyclotomic_poly(self.order);
        let deg = phi.len() - 1;
        if let Some(v) = self.reduce_i128(&phi, deg) {
            return v.into_iter().map(BigInt::from).collect();
        }
        let mut a = vec![BigInt::zero(); self.order as usize];
        for (e, c) in &self.num {
            a[*e as usize] += c;
        }
        for k in (deg..a.len()).rev() {
            if a[k].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut a[k]);
            for (j, &p) in phi.iter().enumerate().take(deg) {
                if p != 0 {
                    a[k - deg + j] -= &c * p;
                }
            }
        }
        a.truncate(deg);
        a
    }

    fn reduce_i128(&self, phi: &[i64], deg: usize) -> Option<Vec<i128>> {
        let mut a = vec![0i128; self.order as usize];
        for (e, c) in &self.num {
            a[*e as usize] = c.to_i128()?;
        }
        for k in (deg..a.len()).rev() {
            let c = a[k];
            if c == 0 {
                continue;
            }
            a[k] = 0;
            for (j, &p) in phi.iter().enumerate().take(deg) {
                if p != 0 {
                    let t = c.checked_mul(p as i128)?;
                    a[k - deg + j] = a[k - deg + j].checked_sub(t)?;
                }
            }
        }
        a.truncate(deg);
        Some(a)
    }

    /// Exact test for vanishing at ζ_L.
    pub fn is_zero(&self) -> bool {
        if self.num.is_empty() {
            return true;
        }
        if self.num.len() == 1 {
            return false;
        }
        self.reduced_numerators().iter().all(Zero::is_zero)
    }

    /// Canonical reduced coordinates in the power basis 1, ζ, …, ζ^{φ−1}.
    pub fn reduced(&self) -> Vec<BigRational> {
        self.reduced_numerators().into_iter().map(|c| BigRational::new(c, self.den.clone())).collect()
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (e, c)) in self.num.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}·ζ{}^{e}", self.order)?;
        }
        write!(f, ")/{}", self.den)
    }
}

/// The field Q(ζ_L) in reduced dense form.
#[derive(Debug)]
pub struct CycloField {
    order: u64,
    phi: Vec<BigRational>,
}

impl CycloField {
    pub fn new(order: u64) -> Arc<Self> {
        let phi = cyclotomic_poly(order).iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        Arc::new(CycloField { order, phi })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }
}

#[derive(Clone)]
pub struct CyElem {
    field: Arc<CycloField>,
    c: Vec<BigRational>,
}

impl PartialEq for CyElem {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
}

impl fmt::Debug for CyElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyElem{:?}", self.c.iter().map(|x| x.to_string()).collect::<Vec<_>>())
    }
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().map_or(false, Zero::is_zero) {
        p.pop();
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// (quotient, remainder)
fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = &b[db];
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let k = r.len() - 1 - db;
        let f = r.last().unwrap() / lead;
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                r[k + j] -= &f * bj;
            }
        }
        q[k] = f;
        r.pop();
        trim(&mut r);
    }
    (q, r)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out: Vec<BigRational> = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_else(BigRational::zero) - b.get(i).cloned().unwrap_or_else(BigRational::zero))
        .collect();
    trim(&mut out);
    out
}

impl CyElem {
    fn from_poly(field: &Arc<CycloField>, mut p: Vec<BigRational>) -> Self {
        let deg = field.degree();
        trim(&mut p);
        if p.len() > deg {
            p = poly_divmod(&p, &field.phi).1;
        }
        p.resize(deg, BigRational::zero());
        CyElem { field: field.clone(), c: p }
    }

    pub fn from_cyclo(field: &Arc<CycloField>, x: &Cyclo) -> Self {
        let x = if x.order == field.order { x.clone() } else { x.lift(field.order) };
        let mut c = x.reduced();
        c.resize(field.degree(), BigRational::zero());
        CyElem { field: field.clone(), c }
    }

    pub fn from_rational(field: &Arc<CycloField>, r: BigRational) -> Self {
        let mut c = vec![BigRational::zero(); field.degree()];
        c[0] = r;
        CyElem { field: field.clone(), c }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.c
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.c[1..].iter().all(Zero::is_zero) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        CyElem { field: self.field.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        CyElem { field: self.field.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Self {
        CyElem { field: self.field.clone(), c: self.c.iter().map(|a| -a).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if let Some(r) = self.as_rational() {
            return CyElem { field: self.field.clone(), c: o.c.iter().map(|x| x * &r).collect() };
        }
        if let Some(r) = o.as_rational() {
            return CyElem { field: self.field.clone(), c: self.c.iter().map(|x| x * &r).collect() };
        }
        Self::from_poly(&self.field, poly_mul(&self.c, &o.c))
    }

    /// Multiplicative inverse by extended Euclid against Φ_L.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(Self::from_rational(&self.field, r.recip()));
        }
        let mut a = self.field.phi.clone();
        let mut b = self.c.clone();
        trim(&mut b);
        // invariants: s_a·self ≡ a, s_b·self ≡ b (mod Φ)
        let mut s_a: Vec<BigRational> = Vec::new();
        let mut s_b: Vec<BigRational> = vec![BigRational::one()];
        while b.len() > 1 {
            let (q, r) = poly_divmod(&a, &b);
            let s_r = poly_sub(&s_a, &poly_mul(&q, &s_b));
            a = std::mem::replace(&mut b, r);
            s_a = std::mem::replace(&mut s_b, s_r);
            if b.is_empty() {
                return None;
            }
        }
        let k = b[0].recip();
        let s: Vec<BigRational> = s_b.iter().map(|x| x * &k).collect();
        Some(Self::from_poly(&self.field, s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polys() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        let p105 = cyclotomic_poly(105);
        assert_eq!(p105.len() as u64 - 1, euler_phi(105));
        assert!(p105.contains(&-2));
    }

    #[test]
    fn root_sum_vanishes() {
        // 1 + ζ + … + ζ^{L−1} = 0
        for l in [3u64, 8, 12, 30] {
            let mut s = Cyclo::zero(l);
            for e in 0..l {
                s = s.add(&Cyclo::monomial(l, e as i64, BigInt::one(), BigInt::one()));
            }
            assert!(s.is_zero(), "order {l}");
        }
    }

    #[test]
    fn cos_pi_third_is_half() {
        // ζ_6 + ζ_6^{-1} = 1
        let z = Cyclo::monomial(6, 1, BigInt::one(), BigInt::one());
        let zi = Cyclo::monomial(6, -1, BigInt::one(), BigInt::one());
        assert!(z.add(&zi).sub(&Cyclo::from_int(1, 6)).is_zero());
        assert!(!z.sub(&zi).is_zero());
    }

    #[test]
    fn field_inverse() {
        let f = CycloField::new(12);
        let z = CyElem::from_cyclo(&f, &Cyclo::monomial(12, 1, BigInt::one(), BigInt::one()));
        let x = z.add(&CyElem::from_rational(&f, BigRational::from_integer(BigInt::from(3))));
        let y = x.inv().unwrap();
        let p = x.mul(&y);
        assert_eq!(p.as_rational(), Some(BigRational::one()));
    }

    #[test]
    fn lift_preserves_value() {
        let a = Cyclo::monomial(4, 1, BigInt::one(), BigInt::one()); // i
        let b = a.lift(12);
        // i² + 1 = 0 in both
        assert!(a.mul(&a).add(&Cyclo::from_int(1, 4)).is_zero());
        assert!(b.mul(&b).add(&Cyclo::from_int(1, 12)).is_zero());
    }
}
