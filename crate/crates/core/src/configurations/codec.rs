//! JSON reading and writing of configurations.
//!
//! ```json
//! {"format_version": 1, "field": "trig",
//!  "points": [{"xyz": ["1", "cos(1/3*pi)", "2/5"]}, {"circle_turns": "1/6"},
//!             {"infinity_turns": "1/12"}, {"acnodal_turns": "2/9"}],
//!  "meta": {"family": "boroczky-base", "size": 6}}
//! ```
//!
//! Coordinates are exact strings: rationals `p/q`, trig values `cos(q*pi)`,
//! `sin(q*pi)`, `cot(q*pi)` with rational q, and `+ - * / ^ ( )` over those.
//! Floats are rejected.
//!
//! * `circle_turns t`   → [cos 2πt, sin 2πt, 1]
//! * `infinity_turns t` → [−sin πt, cos πt, 0] (directions live mod π)
//! * `angle_turns` is accepted as a synonym of `circle_turns`
//! * `acnodal_turns x`  → [sin πx, cos πx, sin³ πx]

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use super::generate::{acnodal_point, generate, FamilySpec};
use super::oracle::{Label, Rule};
use super::{Configuration, FieldKind};
use crate::error::{Error, Result};
use crate::geometry::ProjPoint;
use crate::scalar::{Expr, Scalar, TrigFn};

pub const FORMAT_VERSION: u64 = 1;

pub fn load(path: impl AsRef<Path>) -> Result<Configuration> {
    let text = std::fs::read_to_string(path)?;
    from_json_str(&text)
}

pub fn save(config: &Configuration, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_json_string(config))?;
    Ok(())
}

pub fn to_json_string(config: &Configuration) -> String {
    let mut s = serde_json::to_string_pretty(&to_json(config)).expect("json values always serialize");
    s.push('\n');
    s
}

pub fn to_json(config: &Configuration) -> Value {
    let labels = config.oracle().map(|o| (o.rule(), o.labels()));
    let points: Vec<Value> = config
        .points()
        .iter()
        .enumerate()
        .map(|(i, p)| match labels.and_then(|(r, ls)| labelled_form(r, &ls[i])) {
            Some(v) => v,
            None => json!({ "xyz": p.coords().iter().map(format_scalar).collect::<Vec<_>>() }),
        })
        .collect();
    let meta: Map<String, Value> = config.meta().iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    json!({
        "format_version": FORMAT_VERSION,
        "field": config.field().name(),
        "points": points,
        "meta": meta,
    })
}

fn labelled_form(rule: Rule, label: &Label) -> Option<Value> {
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into()).to_string();
    match (rule, label) {
        (Rule::Boroczky { modulus }, Label::Circle(j)) => Some(json!({ "circle_turns": q(*j, modulus) })),
        (Rule::Boroczky { modulus }, Label::Infinite(k)) => Some(json!({ "infinity_turns": q(*k, modulus) })),
        (Rule::Acnodal, Label::Turns(x)) => Some(json!({ "acnodal_turns": x.to_string() })),
        _ => None,
    }
}

/// Exact textual form of a scalar, readable by [`parse_scalar`].
pub fn format_scalar(s: &Scalar) -> String {
    match s {
        Scalar::Rational(r) => r.to_string(),
        Scalar::Trig(t) => format!("{}({}*pi)", t.func().name(), t.half_turns()),
        Scalar::Real(e) => format_expr(e),
    }
}

fn format_expr(e: &Expr) -> String {
    match e {
        Expr::Rat(r) if r.is_negative() => format!("({r})"),
        Expr::Rat(r) => r.to_string(),
        Expr::Trig(t) => format!("{}({}*pi)", t.func().name(), t.half_turns()),
        Expr::Add(a, b) => format!("({} + {})", format_expr(a), format_expr(b)),
        Expr::Sub(a, b) => format!("({} - {})", format_expr(a), format_expr(b)),
        Expr::Mul(a, b) => format!("({} * {})", format_expr(a), format_expr(b)),
        Expr::Div(a, b) => format!("({} / {})", format_expr(a), format_expr(b)),
        Expr::Neg(a) => format!("(-{})", format_expr(a)),
        Expr::Pow(a, k) => format!("{}^{k}", format_expr(a)),
    }
}

/// Error position inside a coordinate string, before it is mapped back to
/// the file.
struct ExprError {
    offset: usize,
    message: String,
}

pub fn from_json_str(text: &str) -> Result<Configuration> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| Error::ParseError { line: e.line(), column: e.column(), message: e.to_string() })?;
    let locate = |needle: &str, offset: usize, message: String| -> Error {
        let quoted = format!("\"{needle}\"");
        let (line, column) = match text.find(&quoted) {
            Some(pos) => line_col(text, pos + 1 + offset),
            None => (0, 0),
        };
        Error::ParseError { line, column, message }
    };
    let top = |message: &str| Error::ParseError { line: 1, column: 1, message: message.into() };

    let obj = root.as_object().ok_or_else(|| top("top level must be an object"))?;
    if let Some(v) = obj.get("format_version") {
        if v.as_u64() != Some(FORMAT_VERSION) {
            return Err(top(&format!("unsupported format_version {v}")));
        }
    }
    let declared = match obj.get("field").map(|f| f.as_str()) {
        None => None,
        Some(Some("rational")) => Some(FieldKind::Rational),
        Some(Some("trig")) => Some(FieldKind::Trig),
        Some(Some("real")) => Some(FieldKind::Real),
        Some(_) => return Err(locate("field", 0, "field must be \"rational\", \"trig\" or \"real\"".into())),
    };
    let points = obj.get("points").and_then(Value::as_array).ok_or_else(|| top("missing \"points\" array"))?;
    let meta: BTreeMap<String, Value> = match obj.get("meta") {
        None => BTreeMap::new(),
        Some(Value::Object(m)) => m.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        Some(_) => return Err(top("\"meta\" must be an object")),
    };

    let mut out = Vec::with_capacity(points.len());
    for (i, pv) in points.iter().enumerate() {
        let po = pv.as_object().filter(|o| o.len() == 1).ok_or_else(|| {
            top(&format!("point {i} must be an object with exactly one of xyz, circle_turns, angle_turns, infinity_turns, acnodal_turns"))
        })?;
        let (key, val) = po.iter().next().unwrap();
        let point = match key.as_str() {
            "xyz" => {
                let arr = val.as_array().filter(|a| a.len() == 3).ok_or_else(|| top(&format!("point {i}: xyz needs three strings")))?;
                let mut c: Vec<Scalar> = Vec::with_capacity(3);
                for v in arr {
                    let s = v.as_str().ok_or_else(|| top(&format!("point {i}: coordinates must be strings")))?;
                    c.push(parse_scalar_inner(s).map_err(|e| locate(s, e.offset, e.message))?);
                }
                let [x, y, z]: [Scalar; 3] = c.try_into().unwrap();
                ProjPoint::new([x, y, z])?
            }
            "circle_turns" | "angle_turns" | "infinity_turns" | "acnodal_turns" => {
                let s = val.as_str().ok_or_else(|| top(&format!("point {i}: {key} must be a string")))?;
                let t = parse_rational(s).map_err(|e| locate(s, e.offset, e.message))?;
                match key.as_str() {
                    "infinity_turns" => ProjPoint::new([Scalar::sin_pi(&-&t), Scalar::cos_pi(&t), Scalar::zero()])?,
                    "acnodal_turns" => acnodal_point(&t),
                    _ => ProjPoint::new([Scalar::cos_turns(&t), Scalar::sin_turns(&t), Scalar::one()])?,
                }
            }
            other => return Err(top(&format!("point {i}: unknown key \"{other}\""))),
        };
        out.push(point);
    }

    let mut config = Configuration::new(out)?;
    if declared == Some(FieldKind::Rational) && config.field() != FieldKind::Rational {
        return Err(Error::NonRationalInput);
    }
    config.meta = meta;
    reattach_oracle(&mut config);
    Ok(config)
}

/// Regenerates the named family and, if every loaded point belongs to it,
/// restores the symbolic oracle on the matching subset.
fn reattach_oracle(config: &mut Configuration) {
    if config.meta.get("perturbed").and_then(Value::as_bool) == Some(true) {
        return;
    }
    let Some(spec) = FamilySpec::from_meta(&config.meta) else { return };
    let Ok(full) = generate(&spec) else { return };
    let Some(oracle) = full.oracle() else { return };
    let index: HashMap<&ProjPoint, usize> = full.points().iter().enumerate().map(|(i, p)| (p, i)).collect();
    let keep: Option<Vec<usize>> = config.points.iter().map(|p| index.get(p).copied()).collect();
    if let Some(keep) = keep {
        config.oracle = Some(oracle.restrict(&keep));
    }
}

fn line_col(text: &str, pos: usize) -> (usize, usize) {
    let before = &text[..pos.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.chars().count(), |nl| before[nl + 1..].chars().count()) + 1;
    (line, column)
}

/// Parses an exact coordinate string.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    parse_scalar_inner(s).map_err(|e| Error::ParseError { line: 1, column: e.offset + 1, message: e.message })
}

fn parse_scalar_inner(s: &str) -> std::result::Result<Scalar, ExprError> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

fn parse_rational(s: &str) -> std::result::Result<BigRational, ExprError> {
    let v = parse_scalar_inner(s)?;
    v.as_rational().cloned().ok_or(ExprError { offset: 0, message: "expected a rational number".into() })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, m: &str) -> ExprError {
        ExprError { offset: self.pos, message: m.to_string() }
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> std::result::Result<Scalar, ExprError> {
        let mut v = self.term()?;
        loop {
            if self.eat(b'+') {
                v = v.add(&self.term()?);
            } else if self.eat(b'-') {
                v = v.sub(&self.term()?);
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> std::result::Result<Scalar, ExprError> {
        let mut v = self.unary()?;
        loop {
            if self.eat(b'*') {
                v = v.mul(&self.unary()?);
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let d = self.unary()?;
                v = v.div(&d).map_err(|_| ExprError { offset: at, message: "division by zero".into() })?;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> std::result::Result<Scalar, ExprError> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            self.ws();
            let start = self.pos;
            let k = self.digits().ok_or_else(|| self.err("expected an exponent"))?;
            let k: u32 = k.try_into().map_err(|_| ExprError { offset: start, message: "exponent too large".into() })?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap())
    }

    fn atom(&mut self) -> std::result::Result<Scalar, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.digits().unwrap();
                if matches!(self.src.get(self.pos), Some(b'.' | b'e' | b'E')) {
                    return Err(self.err("floating-point literals are not allowed"));
                }
                Ok(Scalar::rational(BigRational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let func = match name {
                    "cos" => TrigFn::Cos,
                    "sin" => TrigFn::Sin,
                    "cot" => TrigFn::Cot,
                    _ => return Err(ExprError { offset: start, message: format!("unknown function '{name}'") }),
                };
                if !self.eat(b'(') {
                    return Err(self.err("expected '('"));
                }
                let arg_at = self.pos;
                let q = self.trig_argument()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Scalar::trig(func, &q).map_err(|e| ExprError { offset: arg_at, message: e.to_string() })
            }
            _ => Err(self.err("expected a number, '(' or a trig function")),
        }
    }

    /// `q*pi`, `q pi` or `pi`, with q a rational expression.
    fn trig_argument(&mut self) -> std::result::Result<BigRational, ExprError> {
        let at = self.pos;
        if self.eat_pi() {
            return Ok(BigRational::from_integer(1.into()));
        }
        let neg = self.eat(b'-');
        let mut q = self.rational_factor()?;
        loop {
            if self.eat(b'/') {
                let d = self.rational_factor()?;
                if d.is_zero() {
                    return Err(self.err("division by zero"));
                }
                q /= d;
            } else {
                break;
            }
        }
        self.eat(b'*');
        if !self.eat_pi() {
            return Err(ExprError { offset: at, message: "trig argument must be a rational multiple of pi".into() });
        }
        Ok(if neg { -q } else { q })
    }

    fn rational_factor(&mut self) -> std::result::Result<BigRational, ExprError> {
        if self.eat(b'(') {
            let v = self.expr()?;
            if !self.eat(b')') {
                return Err(self.err("expected ')'"));
            }
            return v.as_rational().cloned().ok_or_else(|| self.err("trig argument must be rational"));
        }
        self.ws();
        self.digits().map(BigRational::from_integer).ok_or_else(|| self.err("expected a rational"))
    }

    fn eat_pi(&mut self) -> bool {
        self.ws();
        let rest = &self.src[self.pos..];
        for tok in ["pi".as_bytes(), "π".as_bytes()] {
            if rest.starts_with(tok) {
                self.pos += tok.len();
                return true;
            }
        }
        false
    }
}
