//! Concurrency of chords of the regular n-gon: how many lines through pairs
//! of vertices can meet at one point other than the centre and the vertices.
//!
//! With vertices ζ^k on the unit circle, chords (a, b) and (c, d) meet at
//! z = N/D where N = ζ^{a+b}(ζ^c + ζ^d) − ζ^{c+d}(ζ^a + ζ^b) and
//! D = ζ^{a+b} − ζ^{c+d}. Points are bucketed by the images of z under two
//! embeddings Q(ζ_n) → F_p and every bucket is split exactly in Z[ζ_n].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::cyclotomic::{cyclotomic_poly, Cyclo};
use crate::scalar::{Scalar, Sign, SignPolicy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Interior,
    Exterior,
    All,
}

impl FromStr for Region {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interior" => Ok(Region::Interior),
            "exterior" => Ok(Region::Exterior),
            "all" => Ok(Region::All),
            _ => Err(Error::InvalidParameter(format!("unknown region {s:?}"))),
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::Interior => "interior",
            Region::Exterior => "exterior",
            Region::All => "all",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub chords: Vec<(usize, usize)>,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChordReport {
    pub n: usize,
    pub region: Region,
    pub max: usize,
    /// multiplicity → number of points
    pub histogram: BTreeMap<usize, usize>,
    pub points: usize,
    /// max / n^{5/6}
    pub ratio: f64,
    pub witnesses: Vec<Witness>,
}

impl ChordReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("multiplicity,points\n");
        for (k, v) in &self.histogram {
            s.push_str(&format!("{k},{v}\n"));
        }
        s
    }
}

const MAX_N: usize = 60;
const MAX_WITNESSES: usize = 8;

// sparse element of Z[C_n]: (exponent, coefficient)
type Sparse = Vec<(usize, i64)>;

struct Chord {
    a: usize,
    b: usize,
}

fn numerator(n: usize, p: &Chord, q: &Chord) -> Sparse {
    let s = p.a + p.b;
    let t = q.a + q.b;
    vec![((s + q.a) % n, 1), ((s + q.b) % n, 1), ((t + p.a) % n, -1), ((t + p.b) % n, -1)]
}

fn denominator(n: usize, p: &Chord, q: &Chord) -> Sparse {
    vec![((p.a + p.b) % n, 1), ((q.a + q.b) % n, -1)]
}

/// Exact test for Σ c_e ζ_n^e = 0: dense reduction mod Φ_n, falling back to
/// big integers if the coefficients grow past i128.
fn vanishes(n: usize, v: &Sparse) -> bool {
    if v.is_empty() {
        return true;
    }
    let phi = cyclotomic_poly(n as u64);
    let deg = phi.len() - 1;
    let mut a = vec![0i128; n];
    for &(e, c) in v {
        a[e] += c as i128;
    }
    let fast = (|| {
        for k in (deg..n).rev() {
            let c = a[k];
            if c == 0 {
                continue;
            }
            for (j, &p) in phi.iter().enumerate() {
                if p != 0 {
                    let slot = &mut a[k - deg + j];
                    *slot = slot.checked_sub(c.checked_mul(p as i128)?)?;
                }
            }
        }
        Some(a[..deg].iter().all(|&c| c == 0))
    })();
    fast.unwrap_or_else(|| to_cyclo(n, v).is_zero())
}

fn to_cyclo(n: usize, v: &Sparse) -> Cyclo {
    v.iter().fold(Cyclo::zero(n as u64), |acc, &(e, c)| acc.add(&Cyclo::monomial(n as u64, e as i64, BigInt::from(c), BigInt::from(1))))
}

fn times(n: usize, x: &Sparse, y: &Sparse) -> Sparse {
    x.iter().flat_map(|&(e, c)| y.iter().map(move |&(f, d)| ((e + f) % n, c * d))).collect()
}

fn conj(n: usize, x: &Sparse) -> Sparse {
    x.iter().map(|&(e, c)| ((n - e) % n, c)).collect()
}

/// Modular embedding Q(ζ_n) → F_p, ζ ↦ ω.
struct Embedding {
    p: u64,
    powers: Vec<u64>,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Embedding {
    /// The `skip`-th prime p ≡ 1 (mod n) above 2^31.
    fn new(n: usize, skip: usize) -> Self {
        let n64 = n as u64;
        let mut k = (1u64 << 31) / n64;
        let mut found = 0;
        let p = loop {
            k += 1;
            let p = k * n64 + 1;
            if is_prime(p) {
                if found == skip {
                    break p;
                }
                found += 1;
            }
        };
        let qs = prime_factors(n64);
        let omega = (2..p)
            .map(|h| pow_mod(h, (p - 1) / n64, p))
            .find(|&w| qs.iter().all(|&q| pow_mod(w, n64 / q, p) != 1))
            .expect("primitive root of unity exists");
        let powers = (0..n).scan(1u64, |acc, _| {
            let cur = *acc;
            *acc = (*acc as u128 * omega as u128 % p as u128) as u64;
            Some(cur)
        });
        Embedding { p, powers: powers.collect() }
    }

    fn eval(&self, v: &Sparse) -> u64 {
        v.iter().fold(0u64, |acc, &(e, c)| {
            let term = (self.powers[e] as u128 * c.rem_euclid(self.p as i64) as u128 % self.p as u128) as u64;
            (acc + term) % self.p
        })
    }

    /// Image of N/D, or u64::MAX if D happens to vanish mod p.
    fn quotient(&self, num: &Sparse, den: &Sparse) -> u64 {
        let d = self.eval(den);
        if d == 0 {
            return u64::MAX;
        }
        (self.eval(num) as u128 * pow_mod(d, self.p - 2, self.p) as u128 % self.p as u128) as u64
    }
}

struct Meeting {
    key: (u64, u64),
    i: u32,
    j: u32,
}

/// Maximum number of chord lines through a single point of the region,
/// excluding the centre and the vertices; points at infinity (meetings of
/// parallel chords) are not counted.
pub fn ngon_chord_multiplicity(n: usize, region: Region) -> Result<ChordReport> {
    ngon_chord_multiplicity_with(n, region, &SignPolicy::default())
}

pub fn ngon_chord_multiplicity_with(n: usize, region: Region, policy: &SignPolicy) -> Result<ChordReport> {
    if !(3..=MAX_N).contains(&n) {
        return Err(Error::InvalidParameter(format!("n must lie in 3..={MAX_N}")));
    }
    let chords: Vec<Chord> = (0..n).flat_map(|a| (a + 1..n).map(move |b| Chord { a, b })).collect();
    let (e1, e2) = (Embedding::new(n, 0), Embedding::new(n, 1));

    let mut meetings: Vec<Meeting> = (0..chords.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let chords = &chords;
            let (e1, e2) = (&e1, &e2);
            (i + 1..chords.len()).filter_map(move |j| {
                let (p, q) = (&chords[i], &chords[j]);
                // shared endpoint: they meet at a vertex; equal sums: parallel
                if p.a == q.a || p.a == q.b || p.b == q.a || p.b == q.b || (p.a + p.b) % n == (q.a + q.b) % n {
                    return None;
                }
                let (num, den) = (numerator(n, p, q), denominator(n, p, q));
                Some(Meeting { key: (e1.quotient(&num, &den), e2.quotient(&num, &den)), i: i as u32, j: j as u32 })
            })
        })
        .collect();
    meetings.par_sort_unstable_by_key(|m| (m.key, m.i, m.j));

    // split each bucket into exact classes
    let buckets: Vec<&[Meeting]> = meetings.chunk_by(|x, y| x.key == y.key).collect();
    let classes: Vec<((u64, u64), Sparse, Sparse, BTreeSet<usize>)> = buckets
        .par_iter()
        .flat_map_iter(|bucket| {
            let mut reps: Vec<(Sparse, Sparse, BTreeSet<usize>)> = Vec::new();
            let key = bucket[0].key;
            for m in bucket.iter() {
                let (p, q) = (&chords[m.i as usize], &chords[m.j as usize]);
                let (num, den) = (numerator(n, p, q), denominator(n, p, q));
                // N/D = N′/D′ ⟺ N D′ − N′ D = 0 in Z[ζ_n]
                let slot = reps.iter().position(|(rn, rd, _)| {
                    let diff: Sparse = times(n, &num, rd).into_iter().chain(times(n, rn, &den).into_iter().map(|(e, c)| (e, -c))).collect();
                    vanishes(n, &diff)
                });
                match slot {
                    Some(k) => {
                        reps[k].2.insert(m.i as usize);
                        reps[k].2.insert(m.j as usize);
                    }
                    None => reps.push((num, den, BTreeSet::from([m.i as usize, m.j as usize]))),
                }
            }
            reps.into_iter().map(move |(a, b, c)| (key, a, b, c))
        })
        .collect();

    let tallied: Vec<Option<(usize, Witness)>> = classes
        .par_iter()
        .map(|(key, num, den, lines)| -> Result<Option<(usize, Witness)>> {
            // z = 0 maps to 0 under every embedding
            if *key == (0, 0) && vanishes(n, num) {
                return Ok(None); // the centre
            }
            // |z|² − 1 has the sign of N N̄ − D D̄, a real element of Z[ζ_n]
            let m: Sparse = times(n, num, &conj(n, num)).into_iter().chain(times(n, den, &conj(n, den)).into_iter().map(|(e, c)| (e, -c))).collect();
            let inside = real_sign(n, &m, policy)? == Sign::Negative;
            let keep = match region {
                Region::Interior => inside,
                Region::Exterior => !inside,
                Region::All => true,
            };
            if !keep {
                return Ok(None);
            }
            let (x, y) = approx(n, num, den);
            let chords_of = lines.iter().map(|&c| (chords[c].a, chords[c].b)).collect();
            Ok(Some((lines.len(), Witness { chords: chords_of, x, y })))
        })
        .collect::<Result<_>>()?;

    let mut histogram = BTreeMap::new();
    let mut witnesses: Vec<Witness> = Vec::new();
    let mut max = 0;
    for (k, w) in tallied.into_iter().flatten() {
        *histogram.entry(k).or_insert(0) += 1;
        if k > max {
            max = k;
            witnesses.clear();
        }
        if k == max && witnesses.len() < MAX_WITNESSES {
            witnesses.push(w);
        }
    }
    witnesses.sort_by(|a, b| a.chords.cmp(&b.chords));
    let points = histogram.values().sum();
    Ok(ChordReport { n, region, max, histogram, points, ratio: max as f64 / (n as f64).powf(5.0 / 6.0), witnesses })
}

/// Certified sign of Σ c_e ζ^e for a self-conjugate element, i.e. of
/// Σ c_e cos(2πe/n). Double precision decides whenever the value clears the
/// accumulated rounding bound; otherwise the exact scalar machinery does.
fn real_sign(n: usize, v: &Sparse, policy: &SignPolicy) -> Result<Sign> {
    let mut coeff = vec![0i64; n];
    for &(e, c) in v {
        coeff[e] += c;
    }
    let (mut val, mut weight) = (0.0f64, 0.0f64);
    for (e, &c) in coeff.iter().enumerate() {
        if c != 0 {
            val += c as f64 * (std::f64::consts::TAU * e as f64 / n as f64).cos();
            weight += c.unsigned_abs() as f64;
        }
    }
    // per-term error well under 1e-15 relative; 1e-12 per unit weight is generous
    if val.abs() > 1e-12 * (weight + 1.0) {
        return Ok(if val > 0.0 { Sign::Positive } else { Sign::Negative });
    }
    let mut s = Scalar::zero();
    for (e, &c) in coeff.iter().enumerate() {
        if c != 0 {
            s = s.add(&Scalar::int(c).mul(&Scalar::cos_turns(&BigRational::new(e.into(), n.into()))));
        }
    }
    s.sign(policy)
}

fn approx(n: usize, num: &Sparse, den: &Sparse) -> (f64, f64) {
    let ev = |v: &Sparse| {
        v.iter().fold((0.0, 0.0), |(re, im), &(e, c)| {
            let t = std::f64::consts::TAU * e as f64 / n as f64;
            (re + c as f64 * t.cos(), im + c as f64 * t.sin())
        })
    };
    let ((a, b), (c, d)) = (ev(num), ev(den));
    let m = c * c + d * d;
    ((a * c + b * d) / m, (b * c - a * d) / m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_has_no_eligible_points() {
        let r = ngon_chord_multiplicity(4, Region::All).unwrap();
        assert_eq!(r.max, 0);
        assert_eq!(r.points, 0);
    }

    #[test]
    fn hexagon_interior() {
        // besides the centre, the hexagon's diagonals meet in pairs only
        let r = ngon_chord_multiplicity(6, Region::Interior).unwrap();
        assert_eq!(r.max, 2);
        assert_eq!(r.points, 12);
        // pentagon: five interior crossings
        assert_eq!(ngon_chord_multiplicity(5, Region::Interior).unwrap().histogram, BTreeMap::from([(2, 5)]));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(ngon_chord_multiplicity(2, Region::All).is_err());
        assert!(ngon_chord_multiplicity(61, Region::All).is_err());
    }

    #[test]
    fn interior_count_matches_formula() {
        // for odd n no three diagonals are concurrent and there are C(n,4)
        // interior crossings
        let r = ngon_chord_multiplicity(7, Region::Interior).unwrap();
        assert_eq!(r.histogram, BTreeMap::from([(2, 35)]));
    }
}
