//! Finite point configurations, their generators, and serialization.

pub mod codec;
pub mod generate;
pub mod oracle;

use std::collections::{BTreeMap, HashSet};

use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::{ProjPoint, ProjTransform};
use crate::scalar::{Scalar, SignEngine, SignPolicy};

pub use generate::{generate, Family, FamilySpec};
pub use oracle::{Label, Oracle, Rule};

/// The scalar field a configuration's coordinates live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Rational,
    Trig,
    Real,
}

impl FieldKind {
    pub fn name(self) -> &'static str {
        match self {
            FieldKind::Rational => "rational",
            FieldKind::Trig => "trig",
            FieldKind::Real => "real",
        }
    }
}

/// A finite set of distinct projective points, optionally with an exact
/// symbolic collinearity oracle, plus free-form provenance metadata.
#[derive(Clone, Debug)]
pub struct Configuration {
    points: Vec<ProjPoint>,
    oracle: Option<Oracle>,
    meta: BTreeMap<String, Value>,
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
    }
}

impl Configuration {
    /// Checks pairwise distinctness (certified).
    pub fn new(points: Vec<ProjPoint>) -> Result<Self> {
        Self::new_with(points, &SignPolicy::default())
    }

    pub fn new_with(points: Vec<ProjPoint>, policy: &SignPolicy) -> Result<Self> {
        check_distinct(&points, policy)?;
        Ok(Configuration { points, oracle: None, meta: BTreeMap::new() })
    }

    /// For generators whose points are distinct by construction.
    pub(crate) fn from_trusted(points: Vec<ProjPoint>, oracle: Option<Oracle>, meta: BTreeMap<String, Value>) -> Self {
        if let Some(o) = &oracle {
            debug_assert_eq!(o.len(), points.len());
        }
        Configuration { points, oracle, meta }
    }

    pub fn with_meta(mut self, key: &str, value: Value) -> Self {
        self.meta.insert(key.to_string(), value);
        self
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn oracle(&self) -> Option<&Oracle> {
        self.oracle.as_ref()
    }

    pub fn meta(&self) -> &BTreeMap<String, Value> {
        &self.meta
    }

    pub fn family(&self) -> Option<&str> {
        self.meta.get("family").and_then(Value::as_str)
    }

    pub fn field(&self) -> FieldKind {
        let mut kind = FieldKind::Rational;
        for s in self.points.iter().flat_map(|p| p.coords().iter()) {
            match s {
                Scalar::Rational(_) => {}
                Scalar::Trig(_) => kind = FieldKind::Trig,
                Scalar::Real(_) => return FieldKind::Real,
            }
        }
        kind
    }

    pub fn sign_engine(&self, policy: &SignPolicy) -> SignEngine {
        SignEngine::new(self.points.iter().map(|p| p.coords().clone()).collect(), *policy)
    }

    /// Drops the oracle; analyses fall back to geometry.
    pub fn without_oracle(&self) -> Self {
        Configuration { points: self.points.clone(), oracle: None, meta: self.meta.clone() }
    }

    /// Removes the listed indices and appends new points. Any oracle is
    /// dropped, since the symbolic rule no longer covers every point.
    pub fn perturb(&self, add: &[ProjPoint], remove: &[usize]) -> Result<Self> {
        self.perturb_with(add, remove, &SignPolicy::default())
    }

    pub fn perturb_with(&self, add: &[ProjPoint], remove: &[usize], policy: &SignPolicy) -> Result<Self> {
        let drop: HashSet<usize> = remove.iter().copied().collect();
        if let Some(&bad) = remove.iter().find(|&&i| i >= self.len()) {
            return Err(Error::InvalidParameter(format!("index {bad} out of range")));
        }
        let mut points: Vec<ProjPoint> =
            self.points.iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, p)| p.clone()).collect();
        if add.is_empty() && remove.is_empty() {
            return Ok(self.clone());
        }
        let kept = points.len();
        points.extend(add.iter().cloned());
        check_distinct_tail(&points, kept, policy)?;
        let mut meta = self.meta.clone();
        meta.insert("perturbed".into(), Value::Bool(true));
        Ok(Configuration { points, oracle: None, meta })
    }

    /// Same as [`Configuration::perturb`] for pure removals, but keeps the
    /// oracle: family rules are index-free and stay valid on subsets.
    pub fn remove_points(&self, remove: &[usize]) -> Self {
        let drop: HashSet<usize> = remove.iter().copied().collect();
        let keep: Vec<usize> = (0..self.len()).filter(|i| !drop.contains(i)).collect();
        Configuration {
            points: keep.iter().map(|&i| self.points[i].clone()).collect(),
            oracle: self.oracle.as_ref().map(|o| o.restrict(&keep)),
            meta: self.meta.clone(),
        }
    }
}

fn check_distinct(points: &[ProjPoint], policy: &SignPolicy) -> Result<()> {
    check_distinct_tail(points, 0, policy)
}

/// Distinctness of points[from..] against everything before them and each
/// other; points[..from] are assumed distinct already.
fn check_distinct_tail(points: &[ProjPoint], from: usize, policy: &SignPolicy) -> Result<()> {
    if points.iter().all(ProjPoint::is_rational) {
        let mut seen: HashSet<&ProjPoint> = points[..from].iter().collect();
        for (i, p) in points.iter().enumerate().skip(from) {
            if !seen.insert(p) {
                return Err(Error::DuplicatePoint(i));
            }
        }
        return Ok(());
    }
    let engine = SignEngine::new(points.iter().map(|p| p.coords().clone()).collect(), *policy);
    for j in from..points.len() {
        for i in 0..j {
            if engine.same_point(i, j)? {
                return Err(Error::DuplicatePoint(j));
            }
        }
    }
    Ok(())
}

/// Result of [`apply_transform`].
#[derive(Clone, Debug)]
pub struct Transformed {
    pub config: Configuration,
    /// Set when trig coordinates were mixed by the transform into general
    /// real expressions.
    pub field_escape: bool,
}

/// Applies an invertible projective map to every point. The oracle is kept:
/// collinearity is a projective invariant.
pub fn apply_transform(t: &ProjTransform, c: &Configuration) -> Result<Transformed> {
    let points = c.points.iter().map(|p| t.apply(p)).collect::<Result<Vec<_>>>()?;
    let before = c.field();
    let config = Configuration { points, oracle: c.oracle.clone(), meta: c.meta.clone() };
    let field_escape = config.field() == FieldKind::Real && before != FieldKind::Real;
    Ok(Transformed { config, field_escape })
}
