//! Exact row reduction and nullspaces over Q and Q(ζ_L).

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::cyclotomic::CyElem;

/// Exact field arithmetic. Elements of Q(ζ) need their field to build
/// constants, hence the `_like` constructors.
pub trait Field: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// None for zero.
    fn inv(&self) -> Option<Self>;
}

impl Field for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl Field for CyElem {
    fn zero_like(&self) -> Self {
        CyElem::from_rational(self.field(), BigRational::zero())
    }
    fn one_like(&self) -> Self {
        CyElem::from_rational(self.field(), BigRational::one())
    }
    fn is_zero(&self) -> bool {
        CyElem::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        CyElem::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        CyElem::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        CyElem::mul(self, o)
    }
    fn neg(&self) -> Self {
        CyElem::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        CyElem::inv(self)
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(m: &mut Vec<Vec<F>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].inv().expect("pivot is nonzero");
        for x in m[row].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (x, y) in other.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank<F: Field>(m: &[Vec<F>], cols: usize) -> usize {
    let mut m = m.to_vec();
    rref(&mut m, cols).len()
}

/// Basis of {v : m·v = 0}, one vector per free column, with a 1 in that
/// column. `proto` supplies constants when `m` has no rows.
pub fn nullspace<F: Field>(m: &[Vec<F>], cols: usize, proto: &F) -> Vec<Vec<F>> {
    let mut r = m.to_vec();
    let pivots = rref(&mut r, cols);
    let zero = proto.zero_like();
    let one = proto.one_like();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero.clone(); cols];
        v[free] = one.clone();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = r[i][free].neg();
        }
        basis.push(v);
    }
    basis
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    let mut acc = a[0].zero_like();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc.add(&x.mul(y));
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn small_nullspace() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        let ns = nullspace(&m, 3, &q(0));
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &m {
                assert!(Field::is_zero(&dot(row, v)));
            }
        }
        assert_eq!(rank(&m, 3), 1);
    }

    #[test]
    fn empty_matrix() {
        assert_eq!(nullspace::<BigRational>(&[], 4, &q(0)).len(), 4);
    }
}
