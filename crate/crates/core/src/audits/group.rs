//! Finite abelian groups ℤ/n₁ × … × ℤ/n_r and exhaustive almost-group
//! recovery: the subgroup H and shifts x, y making A, B, C closest to the
//! cosets x+H, y+H, x+y+H.

use std::collections::{HashSet, VecDeque};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_ORDER: u64 = 10_000;
const MAX_SUBGROUPS: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
    order: usize,
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.is_empty() || factors.iter().any(|&f| f == 0) {
            return Err(Error::InvalidParameter("cyclic factors must be positive".into()));
        }
        let order = factors.iter().try_fold(1u64, |acc, &f| acc.checked_mul(f)).unwrap_or(u64::MAX);
        if order > MAX_ORDER {
            return Err(Error::GroupTooLarge(order));
        }
        Ok(FiniteAbelianGroup { factors, order: order as usize })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Index of the element with the given components (reduced mod factors).
    pub fn element(&self, comps: &[i64]) -> Result<usize> {
        if comps.len() != self.factors.len() {
            return Err(Error::InvalidParameter(format!("elements have {} components", self.factors.len())));
        }
        Ok(self.factors.iter().zip(comps).fold(0usize, |acc, (&f, &c)| acc * f as usize + c.rem_euclid(f as i64) as usize))
    }

    pub fn components(&self, mut x: usize) -> Vec<u64> {
        let mut out = vec![0; self.factors.len()];
        for (slot, &f) in out.iter_mut().zip(&self.factors).rev() {
            *slot = (x % f as usize) as u64;
            x /= f as usize;
        }
        out
    }

    /// "3" in a cyclic group, "1:0:2" in a product.
    pub fn format(&self, x: usize) -> String {
        self.components(x).iter().map(u64::to_string).collect::<Vec<_>>().join(":")
    }

    pub fn parse(&self, s: &str) -> Result<usize> {
        let comps: Vec<i64> = s
            .split(':')
            .map(|t| t.trim().parse().map_err(|_| Error::InvalidParameter(format!("bad group element {s:?}"))))
            .collect::<Result<_>>()?;
        self.element(&comps)
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        let (mut x, mut y) = (x, y);
        let (mut out, mut scale) = (0usize, 1usize);
        for &f in self.factors.iter().rev() {
            let f = f as usize;
            out += ((x % f + y % f) % f) * scale;
            x /= f;
            y /= f;
            scale *= f;
        }
        out
    }

    pub fn neg(&self, x: usize) -> usize {
        let comps: Vec<i64> = self.components(x).iter().map(|&c| -(c as i64)).collect();
        self.element(&comps).unwrap()
    }

    pub fn mul(&self, x: usize, k: u64) -> usize {
        let mut x = x;
        let (mut out, mut scale) = (0usize, 1usize);
        for &f in self.factors.iter().rev() {
            let c = (x % f as usize) as u128;
            out += ((c * k as u128) % f as u128) as usize * scale;
            x /= f as usize;
            scale *= f as usize;
        }
        out
    }

    /// Every subgroup, as sorted element lists, smallest first. Subgroups
    /// are reached by prime-index extensions <H, g> with p·g ∈ H.
    pub fn subgroups(&self) -> Result<Vec<Vec<usize>>> {
        let n = self.order;
        let primes: Vec<u64> = {
            let mut ps: Vec<u64> = self.factors.iter().flat_map(|&f| prime_factors(f)).collect();
            ps.sort_unstable();
            ps.dedup();
            ps
        };
        let mut seen: HashSet<Vec<usize>> = HashSet::from([vec![0usize]]);
        let mut out = Vec::new();
        let mut queue = VecDeque::from([vec![0usize]]);
        while let Some(h) = queue.pop_front() {
            let mut member = vec![false; n];
            for &e in &h {
                member[e] = true;
            }
            let mut covered = member.clone();
            for g in 0..n {
                if covered[g] {
                    continue;
                }
                let Some(&p) = primes.iter().find(|&&p| member[self.mul(g, p)]) else { continue };
                let mut ext = h.clone();
                let mut m = g;
                for _ in 1..p {
                    ext.extend(h.iter().map(|&e| self.add(m, e)));
                    m = self.add(m, g);
                }
                ext.sort_unstable();
                for &e in &ext {
                    covered[e] = true;
                }
                if seen.insert(ext.clone()) {
                    if seen.len() > MAX_SUBGROUPS {
                        return Err(Error::GroupTooLarge(n as u64));
                    }
                    queue.push_back(ext);
                }
            }
            out.push(h);
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }
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

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlmostGroup {
    pub group: Vec<u64>,
    pub subgroup: Vec<String>,
    pub subgroup_order: usize,
    pub x: String,
    pub y: String,
    /// |A △ (x+H)|, |B △ (y+H)|, |C △ (x+y+H)|
    pub sym_diffs: [usize; 3],
    pub max_sym_diff: usize,
    /// pairs (a, b) ∈ A × B with a + b ∉ C
    pub deficiency: usize,
    pub k: String,
    pub bound_holds: bool,
}

/// Exhaustive search over subgroups and coset pairs. When `k` is absent it
/// defaults to deficiency / |A|.
pub fn almost_group_recover(
    g: &FiniteAbelianGroup,
    a: &[usize],
    b: &[usize],
    c: &[usize],
    k: Option<BigRational>,
) -> Result<Option<AlmostGroup>> {
    let n = g.order();
    let mut sets = [vec![false; n], vec![false; n], vec![false; n]];
    for (slot, xs) in sets.iter_mut().zip([a, b, c]) {
        for &x in xs {
            if x >= n {
                return Err(Error::InvalidParameter(format!("element {x} outside the group")));
            }
            slot[x] = true;
        }
    }
    let sizes = sets.clone().map(|s| s.iter().filter(|&&v| v).count());
    if sizes.iter().all(|&s| s == 0) {
        return Ok(None);
    }
    let deficiency = a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).filter(|&(x, y)| !sets[2][g.add(x, y)]).count();
    let k = match k {
        Some(k) if k.is_negative() => return Err(Error::DomainError("K must be nonnegative".into())),
        Some(k) => k,
        None if sizes[0] == 0 => BigRational::zero(),
        None => BigRational::new(deficiency.into(), sizes[0].into()),
    };

    // ordered by (max, total) symmetric difference
    let mut best: Option<((usize, usize), [usize; 3], Vec<usize>, usize, usize)> = None;
    for h in g.subgroups()? {
        let hs = h.len();
        let floor = sizes.iter().map(|&s| s.abs_diff(hs)).max().unwrap();
        if best.as_ref().is_some_and(|b| floor > b.0 .0) {
            continue;
        }
        // coset labels and representatives (smallest element)
        let mut label = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if label[x] == usize::MAX {
                for &e in &h {
                    label[g.add(x, e)] = reps.len();
                }
                reps.push(x);
            }
        }
        let q = reps.len();
        let mut hits = [vec![0usize; q], vec![0usize; q], vec![0usize; q]];
        for (cnt, set) in hits.iter_mut().zip(&sets) {
            for x in 0..n {
                if set[x] {
                    cnt[label[x]] += 1;
                }
            }
        }
        let sd: Vec<Vec<usize>> = (0..3).map(|i| hits[i].iter().map(|&c| sizes[i] + hs - 2 * c).collect()).collect();
        let mut order_x: Vec<usize> = (0..q).collect();
        order_x.sort_by_key(|&x| (sd[0][x], x));
        let mut order_y: Vec<usize> = (0..q).collect();
        order_y.sort_by_key(|&y| (sd[1][y], y));
        for &x in &order_x {
            if best.as_ref().is_some_and(|b| sd[0][x] > b.0 .0) {
                break;
            }
            for &y in &order_y {
                if best.as_ref().is_some_and(|b| sd[1][y] > b.0 .0) {
                    break;
                }
                let z = label[g.add(reps[x], reps[y])];
                let d = [sd[0][x], sd[1][y], sd[2][z]];
                let m = (*d.iter().max().unwrap(), d.iter().sum());
                if best.as_ref().map_or(true, |b| m < b.0) {
                    best = Some((m, d, h.clone(), reps[x], reps[y]));
                }
            }
        }
    }
    let Some(((max, _), d, h, x, y)) = best else { return Ok(None) };
    let bound = BigRational::from_integer(7.into()) * &k;
    Ok(Some(AlmostGroup {
        group: g.factors().to_vec(),
        subgroup: h.iter().map(|&e| g.format(e)).collect(),
        subgroup_order: h.len(),
        x: g.format(x),
        y: g.format(y),
        sym_diffs: d,
        max_sym_diff: max,
        deficiency,
        k: k.to_string(),
        bound_holds: BigRational::from_integer(max.into()) <= bound,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_subgroups_follow_divisors() {
        let g = FiniteAbelianGroup::cyclic(12).unwrap();
        let orders: Vec<usize> = g.subgroups().unwrap().iter().map(Vec::len).collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 6, 12]);
        let klein = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        assert_eq!(klein.subgroups().unwrap().len(), 5);
        for h in FiniteAbelianGroup::new(vec![2, 6]).unwrap().subgroups().unwrap() {
            assert_eq!(12 % h.len(), 0);
        }
    }

    #[test]
    fn exact_coset() {
        let g = FiniteAbelianGroup::cyclic(12).unwrap();
        let h = [0, 3, 6, 9];
        let r = almost_group_recover(&g, &h, &h, &h, Some(BigRational::zero())).unwrap().unwrap();
        assert_eq!(r.max_sym_diff, 0);
        assert_eq!(r.subgroup, ["0", "3", "6", "9"]);
        assert_eq!((r.x.as_str(), r.y.as_str()), ("0", "0"));
        assert!(r.bound_holds);
    }

    #[test]
    fn one_element_moved() {
        let g = FiniteAbelianGroup::cyclic(12).unwrap();
        let h = [0, 3, 6, 9];
        let r = almost_group_recover(&g, &[1, 3, 6, 9], &h, &h, None).unwrap().unwrap();
        assert_eq!(r.subgroup_order, 4);
        assert_eq!(r.max_sym_diff, 2);
        assert!(r.bound_holds);
    }

    #[test]
    fn too_large() {
        assert_eq!(FiniteAbelianGroup::cyclic(10_001), Err(Error::GroupTooLarge(10_001)));
        assert!(matches!(FiniteAbelianGroup::new(vec![2; 13]).unwrap().subgroups(), Err(Error::GroupTooLarge(_))));
    }

    #[test]
    fn element_round_trip() {
        let g = FiniteAbelianGroup::new(vec![3, 4]).unwrap();
        let x = g.parse("2:3").unwrap();
        assert_eq!(g.format(x), "2:3");
        assert_eq!(g.add(x, g.neg(x)), 0);
    }
}
