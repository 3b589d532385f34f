//! Exact symbolic collinearity rules for the generated families.
//!
//! Each point carries a label (an index or group element); a rule decides
//! collinearity of three distinct points from labels alone, using integer or
//! rational arithmetic only. Rules never refer to positions in the point
//! list, so they survive removal of points.

use num_rational::BigRational;
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    /// circle point at angle 2πj/M
    Circle(i64),
    /// point at infinity in direction angle πk/M + π/2
    Infinite(i64),
    Origin,
    /// element of ℝ/ℤ on the acnodal cubic
    Turns(BigRational),
    /// p1: horizontal line index (0, 1, 2) and abscissa
    Row(u8, BigRational),
    /// p2: 0 = x-axis 2^e, 1 = y-axis 2^e, 2 = direction [−2^e, 1, 0]
    Axis(u8, i64),
    /// p3: parameter t of [t, t³, 1]
    Cusp(i64),
    /// p4: parameter t of [t, t², 1]
    Parabola(i64),
    /// p4: direction [1, s, 0]
    Slope(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// circle/infinity index arithmetic mod M
    Boroczky { modulus: i64 },
    /// x₁ + x₂ + x₃ ≡ 0 (mod 1)
    Acnodal,
    P1,
    P2,
    P3,
    P4,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Boroczky { .. } => "boroczky-index",
            Rule::Acnodal => "acnodal-sum",
            Rule::P1 => "three-rows",
            Rule::P2 => "two-axes-infinity",
            Rule::P3 => "cuspidal-sum",
            Rule::P4 => "parabola-slope",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Oracle {
    rule: Rule,
    labels: Vec<Label>,
}

impl Oracle {
    pub fn new(rule: Rule, labels: Vec<Label>) -> Self {
        Oracle { rule, labels }
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn restrict(&self, keep: &[usize]) -> Self {
        Oracle { rule: self.rule, labels: keep.iter().map(|&i| self.labels[i].clone()).collect() }
    }

    /// Collinearity of three distinct points.
    pub fn collinear(&self, i: usize, j: usize, k: usize) -> bool {
        let (a, b, c) = (&self.labels[i], &self.labels[j], &self.labels[k]);
        match self.rule {
            Rule::Boroczky { modulus } => boroczky(modulus, [a, b, c]),
            Rule::Acnodal => match (a, b, c) {
                (Label::Turns(x), Label::Turns(y), Label::Turns(z)) => (x + y + z).is_integer(),
                _ => false,
            },
            Rule::P1 => p1([a, b, c]),
            Rule::P2 => p2([a, b, c]),
            Rule::P3 => match (a, b, c) {
                (Label::Cusp(x), Label::Cusp(y), Label::Cusp(z)) => x + y + z == 0,
                _ => false,
            },
            Rule::P4 => p4([a, b, c]),
        }
    }
}

fn boroczky(m: i64, ls: [&Label; 3]) -> bool {
    let mut circ = Vec::new();
    let mut inf = Vec::new();
    let mut origin = false;
    for l in ls {
        match l {
            Label::Circle(j) => circ.push(*j),
            Label::Infinite(k) => inf.push(*k),
            Label::Origin => origin = true,
            _ => return false,
        }
    }
    match (circ.len(), inf.len(), origin) {
        (0, 3, false) => true,
        (2, 1, false) => (circ[0] + circ[1] - inf[0]).rem_euclid(m) == 0,
        (2, 0, true) => m % 2 == 0 && (circ[0] - circ[1]).rem_euclid(m) == m / 2,
        // origin, C_j and I_k: the direction πk/M + π/2 must equal 2πj/M mod π
        (1, 1, true) => (4 * circ[0] - 2 * inf[0] - m).rem_euclid(2 * m) == 0,
        _ => false,
    }
}

fn p1(ls: [&Label; 3]) -> bool {
    let mut rows: [Vec<&BigRational>; 3] = Default::default();
    for l in ls {
        match l {
            Label::Row(r, x) if *r < 3 => rows[*r as usize].push(x),
            _ => return false,
        }
    }
    if rows.iter().any(|r| r.len() == 3) {
        return true;
    }
    if rows.iter().all(|r| r.len() == 1) {
        return (rows[0][0] + rows[2][0] - rows[1][0] * BigRational::from_integer(2.into())).is_zero();
    }
    false
}

fn p2(ls: [&Label; 3]) -> bool {
    let mut e: [Vec<i64>; 3] = Default::default();
    for l in ls {
        match l {
            Label::Axis(a, x) if *a < 3 => e[*a as usize].push(*x),
            _ => return false,
        }
    }
    if e.iter().any(|r| r.len() == 3) {
        return true;
    }
    e.iter().all(|r| r.len() == 1) && e[2][0] == e[0][0] - e[1][0]
}

fn p4(ls: [&Label; 3]) -> bool {
    let mut par = Vec::new();
    let mut slope = Vec::new();
    for l in ls {
        match l {
            Label::Parabola(t) => par.push(*t),
            Label::Slope(s) => slope.push(*s),
            _ => return false,
        }
    }
    match (par.len(), slope.len()) {
        (0, 3) => true,
        (2, 1) => slope[0] == par[0] + par[1],
        _ => false,
    }
}
