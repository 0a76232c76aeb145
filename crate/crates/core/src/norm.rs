//! Vectors, norms on ℝⁿ, and the textual norm-spec grammar.
//!
//! ```text
//! l1 | l2 | linf | lp:<p> | wlp:<p>:[w1,...,wn] | ip:[[g11,...],...,[gn1,...]]
//! ```
//!
//! `<p>` is a real number `≥ 1` or `inf`. Keywords are case-insensitive.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite-dimensional real vector with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyVector);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("vector coordinates"));
        }
        Ok(Vector(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![0.0; dim.max(1)])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    pub fn scaled(&self, factor: f64) -> Vector {
        Vector(self.0.iter().map(|c| c * factor).collect())
    }

    /// `self + factor * other`. Panics if the dimensions differ.
    pub fn add_scaled(&self, factor: f64, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim(), "add_scaled: dimension mismatch");
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + factor * b)
                .collect(),
        )
    }
}

impl AsRef<[f64]> for Vector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Parses comma-separated decimals, e.g. `"1,-0.5"`.
impl FromStr for Vector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut coords = Vec::new();
        let mut offset = 0;
        for part in s.split(',') {
            let trimmed = part.trim();
            let value: f64 = trimmed.parse().map_err(|_| Error::Syntax {
                position: offset,
                message: format!("expected a decimal number, found {trimmed:?}"),
            })?;
            coords.push(value);
            offset += part.len() + 1;
        }
        Vector::new(coords)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// How the radial profile of a norm is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormClass {
    /// ℓ¹ / ℓ∞ (possibly weighted): piecewise-linear profiles.
    PiecewiseLinear,
    /// ℓ², weighted ℓ², and Gram-matrix norms: closed-form profiles.
    Quadratic,
    SmoothGeneric,
}

/// Something that measures vectors in ℝⁿ.
///
/// Implementations are expected to satisfy the norm axioms; the solvers rely
/// on convexity. The [`oracle`](crate::oracle) checks do not, which is what
/// lets them catch impostors.
pub trait Norm: Send + Sync {
    /// Fixed dimension, if the norm only applies to one.
    fn dim(&self) -> Option<usize>;

    fn eval(&self, v: &[f64]) -> f64;

    /// `‖x + λy‖` without materializing the sum.
    fn eval_affine(&self, x: &[f64], y: &[f64], lambda: f64) -> f64 {
        let v: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + lambda * b).collect();
        self.eval(&v)
    }

    /// The declarative description, when there is one. Exact solvers need it.
    fn spec(&self) -> Option<&NormSpec> {
        None
    }

    fn class(&self) -> NormClass {
        self.spec().map_or(NormClass::SmoothGeneric, NormSpec::class)
    }
}

/// Checks that every vector matches the norm's dimension and each other.
pub fn check_dims<N: Norm + ?Sized>(norm: &N, vectors: &[&Vector]) -> Result<usize> {
    let expected = norm
        .dim()
        .or_else(|| vectors.first().map(|v| v.dim()))
        .unwrap_or(0);
    for v in vectors {
        if v.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: v.dim(),
            });
        }
    }
    Ok(expected)
}

/// Evaluates the norm after checking dimensions.
pub fn norm_eval<N: Norm + ?Sized>(norm: &N, v: &Vector) -> Result<f64> {
    check_dims(norm, &[v])?;
    Ok(norm.eval(v.coords()))
}

/// `v / ‖v‖`.
pub fn normalize<N: Norm + ?Sized>(norm: &N, v: &Vector) -> Result<Vector> {
    let length = norm_eval(norm, v)?;
    if v.is_zero() || length == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(v.scaled(1.0 / length))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl Exponent {
    fn validate(self) -> Result<Self> {
        match self {
            Exponent::Finite(p) if !p.is_finite() => {
                Err(Error::InvalidParameter(format!("p must be finite or inf, got {p}")))
            }
            Exponent::Finite(p) if p < 1.0 => Err(Error::InvalidParameter(format!(
                "p must be at least 1 for a norm, got {p}"
            ))),
            e => Ok(e),
        }
    }

    fn is(self, value: f64) -> bool {
        matches!(self, Exponent::Finite(p) if p == value)
    }
}

/// A symmetric positive-definite matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Gram {
    n: usize,
    entries: Vec<f64>,
}

impl Gram {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidParameter("Gram matrix must be non-empty".into()));
        }
        if let Some(row) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::InvalidParameter(format!(
                "Gram matrix must be square: {n} rows but a row of length {}",
                row.len()
            )));
        }
        let entries: Vec<f64> = rows.into_iter().flatten().collect();
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(Error::NonFinite("Gram matrix"));
        }
        let gram = Gram { n, entries };
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (gram.get(i, j), gram.get(j, i));
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "Gram matrix is not symmetric at ({i},{j}): {a} vs {b}"
                    )));
                }
            }
        }
        gram.check_positive_definite()?;
        Ok(gram)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Gram { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks(self.n)
    }

    // Leading principal minors are the running products of the elimination
    // pivots, so all minors are positive iff every pivot is.
    fn check_positive_definite(&self) -> Result<()> {
        let n = self.n;
        let mut a = self.entries.clone();
        for k in 0..n {
            let pivot = a[k * n + k];
            if !(pivot > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "Gram matrix is not positive definite (leading minor {} is not positive)",
                    k + 1
                )));
            }
            for i in (k + 1)..n {
                let factor = a[i * n + k] / pivot;
                for j in k..n {
                    a[i * n + j] -= factor * a[k * n + j];
                }
            }
        }
        Ok(())
    }

    fn quadratic_form(&self, coord: impl Fn(usize) -> f64) -> f64 {
        let n = self.n;
        let u: smallbuf::Buf = smallbuf::Buf::from_fn(n, coord);
        let mut acc = 0.0;
        for i in 0..n {
            let row = &self.entries[i * n..(i + 1) * n];
            let gu: f64 = row.iter().zip(u.as_slice()).map(|(g, v)| g * v).sum();
            acc += u.as_slice()[i] * gu;
        }
        acc
    }
}

/// `xᵀ G y`.
pub fn inner_product_eval(gram: &Gram, x: &Vector, y: &Vector) -> Result<f64> {
    for v in [x, y] {
        if v.dim() != gram.dim() {
            return Err(Error::DimensionMismatch {
                expected: gram.dim(),
                found: v.dim(),
            });
        }
    }
    Ok(bilinear(gram, x.coords(), y.coords()))
}

fn bilinear(gram: &Gram, x: &[f64], y: &[f64]) -> f64 {
    gram.rows()
        .zip(x)
        .map(|(row, xi)| xi * row.iter().zip(y).map(|(g, yj)| g * yj).sum::<f64>())
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub enum NormKind {
    Lp(Exponent),
    /// `‖v‖ = ‖(w₁v₁, …, wₙvₙ)‖_p`.
    WeightedLp { p: Exponent, weights: Vec<f64> },
    /// `‖v‖ = √(vᵀGv)`.
    InnerProduct(Gram),
}

/// A validated, declarative norm on ℝⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSpec {
    kind: NormKind,
}

impl NormSpec {
    pub fn l1() -> Self {
        NormSpec { kind: NormKind::Lp(Exponent::Finite(1.0)) }
    }

    pub fn l2() -> Self {
        NormSpec { kind: NormKind::Lp(Exponent::Finite(2.0)) }
    }

    pub fn linf() -> Self {
        NormSpec { kind: NormKind::Lp(Exponent::Infinity) }
    }

    pub fn lp(p: f64) -> Result<Self> {
        Self::from_kind(NormKind::Lp(Exponent::Finite(p)))
    }

    pub fn weighted_lp(p: Exponent, weights: Vec<f64>) -> Result<Self> {
        Self::from_kind(NormKind::WeightedLp { p, weights })
    }

    pub fn inner_product(rows: Vec<Vec<f64>>) -> Result<Self> {
        Ok(NormSpec { kind: NormKind::InnerProduct(Gram::new(rows)?) })
    }

    pub fn from_kind(kind: NormKind) -> Result<Self> {
        match &kind {
            NormKind::Lp(p) => {
                p.validate()?;
            }
            NormKind::WeightedLp { p, weights } => {
                p.validate()?;
                if weights.is_empty() {
                    return Err(Error::InvalidParameter("weights must be non-empty".into()));
                }
                if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
                    return Err(Error::InvalidParameter(format!(
                        "weights must be strictly positive and finite, got {w}"
                    )));
                }
            }
            NormKind::InnerProduct(_) => {}
        }
        Ok(NormSpec { kind })
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    pub fn class(&self) -> NormClass {
        let p = match &self.kind {
            NormKind::InnerProduct(_) => return NormClass::Quadratic,
            NormKind::Lp(p) | NormKind::WeightedLp { p, .. } => *p,
        };
        match p {
            Exponent::Infinity => NormClass::PiecewiseLinear,
            p if p.is(1.0) => NormClass::PiecewiseLinear,
            p if p.is(2.0) => NormClass::Quadratic,
            _ => NormClass::SmoothGeneric,
        }
    }

    /// Per-coordinate scale factors `wᵢ`, all ones when unweighted.
    pub(crate) fn weight(&self, i: usize) -> f64 {
        match &self.kind {
            NormKind::WeightedLp { weights, .. } => weights[i],
            _ => 1.0,
        }
    }

    pub(crate) fn exponent(&self) -> Option<Exponent> {
        match &self.kind {
            NormKind::Lp(p) | NormKind::WeightedLp { p, .. } => Some(*p),
            NormKind::InnerProduct(_) => None,
        }
    }

    /// The inner product inducing this norm, for quadratic norms.
    pub fn inner(&self, x: &[f64], y: &[f64]) -> Option<f64> {
        match (&self.kind, self.class()) {
            (NormKind::InnerProduct(g), _) => Some(bilinear(g, x, y)),
            (_, NormClass::Quadratic) => Some(
                x.iter()
                    .zip(y)
                    .enumerate()
                    .map(|(i, (a, b))| {
                        let w = self.weight(i);
                        w * w * a * b
                    })
                    .sum(),
            ),
            _ => None,
        }
    }

    fn eval_with(&self, n: usize, coord: impl Fn(usize) -> f64) -> f64 {
        match &self.kind {
            NormKind::InnerProduct(g) => {
                let scale = (0..n).map(|i| coord(i).abs()).fold(0.0, f64::max);
                if scale == 0.0 {
                    return 0.0;
                }
                let q = g.quadratic_form(|i| coord(i) / scale);
                scale * q.max(0.0).sqrt()
            }
            NormKind::Lp(p) | NormKind::WeightedLp { p, .. } => {
                let term = |i: usize| (self.weight(i) * coord(i)).abs();
                let largest = (0..n).map(term).fold(0.0, f64::max);
                match *p {
                    Exponent::Infinity => largest,
                    _ if largest == 0.0 => 0.0,
                    p if p.is(1.0) => (0..n).map(term).sum(),
                    p if p.is(2.0) => {
                        let s: f64 = (0..n).map(|i| (term(i) / largest).powi(2)).sum();
                        largest * s.sqrt()
                    }
                    Exponent::Finite(p) => {
                        let s: f64 = (0..n).map(|i| (term(i) / largest).powf(p)).sum();
                        largest * s.powf(1.0 / p)
                    }
                }
            }
        }
    }
}

impl Norm for NormSpec {
    fn dim(&self) -> Option<usize> {
        match &self.kind {
            NormKind::Lp(_) => None,
            NormKind::WeightedLp { weights, .. } => Some(weights.len()),
            NormKind::InnerProduct(g) => Some(g.dim()),
        }
    }

    fn eval(&self, v: &[f64]) -> f64 {
        self.eval_with(v.len(), |i| v[i])
    }

    fn eval_affine(&self, x: &[f64], y: &[f64], lambda: f64) -> f64 {
        self.eval_with(x.len(), |i| x[i] + lambda * y[i])
    }

    fn spec(&self) -> Option<&NormSpec> {
        Some(self)
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, values: &[f64]) -> fmt::Result {
            f.write_str("[")?;
            for (i, v) in values.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("]")
        }
        match &self.kind {
            NormKind::Lp(Exponent::Infinity) => f.write_str("linf"),
            NormKind::Lp(p) if p.is(1.0) => f.write_str("l1"),
            NormKind::Lp(p) if p.is(2.0) => f.write_str("l2"),
            NormKind::Lp(p) => write!(f, "lp:{p}"),
            NormKind::WeightedLp { p, weights } => {
                write!(f, "wlp:{p}:")?;
                list(f, weights)
            }
            NormKind::InnerProduct(g) => {
                f.write_str("ip:[")?;
                for (i, row) in g.rows().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    list(f, row)?;
                }
                f.write_str("]")
            }
        }
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_norm_spec(s)
    }
}

pub fn parse_norm_spec(text: &str) -> Result<NormSpec> {
    let lower = text.to_ascii_lowercase();
    let mut p = Parser { src: lower.as_bytes(), pos: 0 };
    p.skip_ws();
    let keyword = p.word();
    let spec = match keyword.as_str() {
        "l1" => NormSpec::l1(),
        "l2" => NormSpec::l2(),
        "linf" => NormSpec::linf(),
        "lp" => {
            p.expect(b':')?;
            let exponent = p.exponent()?;
            NormSpec::from_kind(NormKind::Lp(exponent))?
        }
        "wlp" => {
            p.expect(b':')?;
            let exponent = p.exponent()?;
            p.expect(b':')?;
            let weights = p.list()?;
            NormSpec::from_kind(NormKind::WeightedLp { p: exponent, weights })?
        }
        "ip" => {
            p.expect(b':')?;
            p.expect(b'[')?;
            let mut rows = vec![p.list()?];
            while p.eat(b',') {
                rows.push(p.list()?);
            }
            p.expect(b']')?;
            NormSpec::inner_product(rows)?
        }
        "" => return Err(p.error("expected a norm keyword (l1, l2, linf, lp, wlp, ip)")),
        other => {
            return Err(Error::Syntax {
                position: p.pos - other.len(),
                message: format!("unknown norm keyword {other:?}"),
            })
        }
    };
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(spec)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, byte: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, byte: u8) -> Result<()> {
        if self.eat(byte) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", byte as char)))
        }
    }

    fn word(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn token(&mut self) -> (usize, String) {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && matches!(self.src[self.pos], b'0'..=b'9' | b'a'..=b'z' | b'+' | b'-' | b'.')
        {
            self.pos += 1;
        }
        (start, String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> Result<f64> {
        let (start, tok) = self.token();
        match tok.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(Error::Syntax {
                position: start,
                message: format!("expected a finite number, found {tok:?}"),
            }),
        }
    }

    fn exponent(&mut self) -> Result<Exponent> {
        let save = self.pos;
        let (_, tok) = self.token();
        if tok == "inf" {
            return Ok(Exponent::Infinity);
        }
        self.pos = save;
        self.number().map(Exponent::Finite)
    }

    fn list(&mut self) -> Result<Vec<f64>> {
        self.expect(b'[')?;
        let mut values = vec![self.number()?];
        while self.eat(b',') {
            values.push(self.number()?);
        }
        self.expect(b']')?;
        Ok(values)
    }
}

mod smallbuf {
    // Scratch space for Gram quadratic forms; avoids a heap allocation per
    // evaluation in low dimension.
    const INLINE: usize = 8;

    pub enum Buf {
        Inline([f64; INLINE], usize),
        Heap(Vec<f64>),
    }

    impl Buf {
        pub fn from_fn(n: usize, f: impl Fn(usize) -> f64) -> Self {
            if n <= INLINE {
                let mut a = [0.0; INLINE];
                for (i, slot) in a.iter_mut().take(n).enumerate() {
                    *slot = f(i);
                }
                Buf::Inline(a, n)
            } else {
                Buf::Heap((0..n).map(f).collect())
            }
        }

        pub fn as_slice(&self) -> &[f64] {
            match self {
                Buf::Inline(a, n) => &a[..*n],
                Buf::Heap(v) => v,
            }
        }
    }
}
