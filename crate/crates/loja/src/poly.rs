//! Sparse multivariate polynomials with exact coefficients.
//!
//! A polynomial is a map from exponent vectors to coefficients; the zero
//! polynomial has an empty term map. Variable indices are 1-based
//! everywhere in the public API (`z1 .. zn`), matching the text grammar.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::LojaError;
use crate::rational::{format_rational, parse_rational};
use crate::Result;

/// Absolute zero tolerance for float coefficients stored in a polynomial.
/// Exact coefficient kinds never consult it.
pub const FLOAT_ZERO_TOLERANCE: f64 = 1e-12;

/// Exponent vector ν of a monomial c·z^ν. Length equals the ambient n.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree |ν| = Σ ν_i.
    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    /// 1-based indices of the variables that actually occur.
    pub fn variables(&self) -> BTreeSet<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

/// Exact complex number with rational real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_rational(re: BigRational) -> Self {
        GaussianRational {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        GaussianRational {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        GaussianRational {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn neg(&self) -> Self {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        GaussianRational {
            re: &self.re * k,
            im: &self.im * k,
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact division; fails on zero.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let norm = &other.re * &other.re + &other.im * &other.im;
        if norm.is_zero() {
            return None;
        }
        let conj = GaussianRational {
            re: other.re.clone(),
            im: -other.im.clone(),
        };
        let num = self.mul(&conj);
        Some(GaussianRational {
            re: num.re / &norm,
            im: num.im / &norm,
        })
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", format_rational(&self.re))
        } else {
            let sign = if self.im.is_negative() { "-" } else { "+" };
            write!(
                f,
                "({}{}{}i)",
                format_rational(&self.re),
                sign,
                format_rational(&self.im.abs())
            )
        }
    }
}

/// Polynomial coefficient: exact rational, exact Gaussian rational, or a
/// complex float pair (the float kind is accepted only on the curve-probe
/// path; parsing and all polyhedral operations stay exact).
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficient {
    Rational(BigRational),
    Gaussian(GaussianRational),
    Float(f64, f64),
}

impl Coefficient {
    pub fn one() -> Self {
        Coefficient::Rational(BigRational::one())
    }

    pub fn from_i64(v: i64) -> Self {
        Coefficient::Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Rational(r) => r.is_zero(),
            Coefficient::Gaussian(g) => g.is_zero(),
            Coefficient::Float(re, im) => {
                re.abs() <= FLOAT_ZERO_TOLERANCE && im.abs() <= FLOAT_ZERO_TOLERANCE
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Coefficient::Float(..))
    }

    /// Exact Gaussian view; `None` for the float kind.
    pub fn as_gaussian(&self) -> Option<GaussianRational> {
        match self {
            Coefficient::Rational(r) => Some(GaussianRational::from_rational(r.clone())),
            Coefficient::Gaussian(g) => Some(g.clone()),
            Coefficient::Float(..) => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self.as_gaussian(), other.as_gaussian()) {
            (Some(a), Some(b)) => Self::from_gaussian(a.add(&b)),
            _ => {
                let (ar, ai) = self.to_floats();
                let (br, bi) = other.to_floats();
                Coefficient::Float(ar + br, ai + bi)
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self.as_gaussian(), other.as_gaussian()) {
            (Some(a), Some(b)) => Self::from_gaussian(a.mul(&b)),
            _ => {
                let (ar, ai) = self.to_floats();
                let (br, bi) = other.to_floats();
                Coefficient::Float(ar * br - ai * bi, ar * bi + ai * br)
            }
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.mul(&Coefficient::from_i64(k))
    }

    pub fn neg(&self) -> Self {
        match self {
            Coefficient::Rational(r) => Coefficient::Rational(-r.clone()),
            Coefficient::Gaussian(g) => Coefficient::Gaussian(g.neg()),
            Coefficient::Float(re, im) => Coefficient::Float(-re, -im),
        }
    }

    fn from_gaussian(g: GaussianRational) -> Self {
        if g.is_real() {
            Coefficient::Rational(g.re)
        } else {
            Coefficient::Gaussian(g)
        }
    }

    fn to_floats(&self) -> (f64, f64) {
        match self {
            Coefficient::Rational(r) => (crate::rational::to_f64(r), 0.0),
            Coefficient::Gaussian(g) => {
                (crate::rational::to_f64(&g.re), crate::rational::to_f64(&g.im))
            }
            Coefficient::Float(re, im) => (*re, *im),
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Rational(r) => write!(f, "{}", format_rational(r)),
            Coefficient::Gaussian(g) => write!(f, "{g}"),
            Coefficient::Float(re, im) => write!(f, "({re}+{im}i)"),
        }
    }
}

/// Sparse polynomial in `n` variables with no stored zero terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<ExponentVector, Coefficient>,
}

impl Polynomial {
    /// Canonicalize a term list: combine like terms, drop zeros.
    pub fn new<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, Coefficient)>,
    {
        if n == 0 {
            return Err(LojaError::Domain("variable count must be >= 1".into()));
        }
        let mut map: BTreeMap<ExponentVector, Coefficient> = BTreeMap::new();
        for (exp, coeff) in terms {
            if exp.len() != n {
                return Err(LojaError::DimensionMismatch {
                    expected: n,
                    found: exp.len(),
                });
            }
            map.entry(exp)
                .and_modify(|c| *c = c.add(&coeff))
                .or_insert(coeff);
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Polynomial { n, terms: map })
    }

    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// Monomial with unit coefficient.
    pub fn monomial(exp: ExponentVector) -> Self {
        let n = exp.len();
        let mut terms = BTreeMap::new();
        terms.insert(exp, Coefficient::one());
        Polynomial { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Coefficient)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exp: &ExponentVector) -> Option<&Coefficient> {
        self.terms.get(exp)
    }

    /// Support as a sorted list of exponent vectors.
    pub fn support(&self) -> Vec<ExponentVector> {
        self.terms.keys().cloned().collect()
    }

    /// Keep exactly the terms whose exponents vanish outside `vars`
    /// (1-based). The result is f restricted to the coordinate subspace.
    pub fn restrict(&self, vars: &BTreeSet<usize>) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(exp, _)| {
                exp.0
                    .iter()
                    .enumerate()
                    .all(|(i, &e)| e == 0 || vars.contains(&(i + 1)))
            })
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect::<Vec<_>>();
        Polynomial::new(self.n, terms).expect("restriction preserves n")
    }

    /// Formal partial derivative with respect to z_j (1-based).
    pub fn partial_derivative(&self, j: usize) -> Result<Polynomial> {
        if j == 0 || j > self.n {
            return Err(LojaError::Domain(format!(
                "derivative index {j} out of range 1..={}",
                self.n
            )));
        }
        let mut out = Vec::new();
        for (exp, coeff) in &self.terms {
            let e = exp.0[j - 1];
            if e == 0 {
                continue;
            }
            let mut v = exp.0.clone();
            v[j - 1] -= 1;
            out.push((ExponentVector(v), coeff.scale_int(e as i64)));
        }
        Polynomial::new(self.n, out)
    }

    /// Substitute z_i = w_i^{m_i}: every exponent vector is multiplied
    /// componentwise by m.
    pub fn power_pullback(&self, m: &[u32]) -> Result<Polynomial> {
        if m.len() != self.n {
            return Err(LojaError::DimensionMismatch {
                expected: self.n,
                found: m.len(),
            });
        }
        if m.contains(&0) {
            return Err(LojaError::Domain("pullback exponents must be >= 1".into()));
        }
        let terms = self.terms.iter().map(|(exp, c)| {
            let v = exp.0.iter().zip(m).map(|(&e, &k)| e * k).collect();
            (ExponentVector(v), c.clone())
        });
        Polynomial::new(self.n, terms.collect::<Vec<_>>())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        if self.n != other.n {
            return Err(LojaError::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut terms: Vec<(ExponentVector, Coefficient)> = Vec::new();
        terms.extend(self.terms.iter().map(|(e, c)| (e.clone(), c.clone())));
        terms.extend(other.terms.iter().map(|(e, c)| (e.clone(), c.clone())));
        Polynomial::new(self.n, terms)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        if self.n != other.n {
            return Err(LojaError::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut terms: Vec<(ExponentVector, Coefficient)> = Vec::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let v = ea.0.iter().zip(&eb.0).map(|(&a, &b)| a + b).collect();
                terms.push((ExponentVector(v), ca.mul(cb)));
            }
        }
        Polynomial::new(self.n, terms)
    }

    /// Exact expanded product of a nonempty family.
    pub fn product(fs: &[Polynomial]) -> Result<Polynomial> {
        let first = fs
            .first()
            .ok_or_else(|| LojaError::Domain("product of an empty family".into()))?;
        let mut acc = first.clone();
        for f in &fs[1..] {
            acc = acc.mul(f)?;
        }
        Ok(acc)
    }

    /// Integer power, exact.
    pub fn pow(&self, e: u32) -> Result<Polynomial> {
        let mut acc = Polynomial::new(
            self.n,
            vec![(ExponentVector(vec![0; self.n]), Coefficient::one())],
        )?;
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Evaluate at an exact Gaussian-rational point.
    pub fn eval_gaussian(&self, point: &[GaussianRational]) -> Result<GaussianRational> {
        if point.len() != self.n {
            return Err(LojaError::DimensionMismatch {
                expected: self.n,
                found: point.len(),
            });
        }
        let mut acc = GaussianRational::zero();
        for (exp, coeff) in &self.terms {
            let c = coeff.as_gaussian().ok_or_else(|| {
                LojaError::Domain("exact evaluation requires exact coefficients".into())
            })?;
            let mut term = c;
            for (i, &e) in exp.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&point[i].pow(e));
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Canonical text form: graded lexicographic term order, highest first.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut keys: Vec<&ExponentVector> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            b.total_degree()
                .cmp(&a.total_degree())
                .then_with(|| b.0.cmp(&a.0))
        });
        let mut out = String::new();
        for (idx, exp) in keys.iter().enumerate() {
            let coeff = &self.terms[*exp];
            let (body, negative) = coefficient_body(coeff, exp);
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&body);
        }
        out
    }

    /// JSON form `{"n":..,"terms":[{"exp":[..],"coeff":..},..]}`.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(exp, coeff)| {
                let c = match coeff {
                    Coefficient::Rational(r) => Value::String(format_rational(r)),
                    Coefficient::Gaussian(g) => json!({
                        "re": format_rational(&g.re),
                        "im": format_rational(&g.im),
                    }),
                    Coefficient::Float(re, im) => json!({ "re": re, "im": im }),
                };
                json!({ "exp": exp.0, "coeff": c })
            })
            .collect();
        json!({ "n": self.n, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Polynomial> {
        let obj = v
            .as_object()
            .ok_or_else(|| parse_err(0, "expected a JSON object"))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| parse_err(0, "missing integer field \"n\""))? as usize;
        let terms_json = obj
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err(0, "missing array field \"terms\""))?;
        let mut terms = Vec::new();
        for t in terms_json {
            let exp = t
                .get("exp")
                .and_then(Value::as_array)
                .ok_or_else(|| parse_err(0, "term missing \"exp\""))?;
            let mut v = Vec::with_capacity(exp.len());
            for e in exp {
                let e = e
                    .as_i64()
                    .ok_or_else(|| parse_err(0, "exponent must be an integer"))?;
                if e < 0 {
                    return Err(parse_err(0, "negative exponent"));
                }
                v.push(e as u32);
            }
            let coeff = match t.get("coeff") {
                Some(Value::String(s)) => Coefficient::Rational(parse_rational(s)?),
                Some(Value::Number(x)) => {
                    Coefficient::Rational(parse_rational(&x.to_string())?)
                }
                Some(Value::Object(o)) => {
                    let re = json_part(o.get("re"))?;
                    let im = json_part(o.get("im"))?;
                    Coefficient::from_gaussian(GaussianRational::new(re, im))
                }
                _ => return Err(parse_err(0, "term missing \"coeff\"")),
            };
            terms.push((ExponentVector(v), coeff));
        }
        Polynomial::new(n, terms)
    }
}

fn json_part(v: Option<&Value>) -> Result<BigRational> {
    match v {
        None => Ok(BigRational::zero()),
        Some(Value::String(s)) => parse_rational(s),
        Some(Value::Number(x)) => parse_rational(&x.to_string()),
        Some(_) => Err(parse_err(0, "coefficient part must be \"p/q\" or a number")),
    }
}

fn coefficient_body(coeff: &Coefficient, exp: &ExponentVector) -> (String, bool) {
    let vars: Vec<String> = exp
        .0
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("z{}", i + 1)
            } else {
                format!("z{}^{}", i + 1, e)
            }
        })
        .collect();
    let var_part = vars.join("*");
    match coeff {
        Coefficient::Rational(r) => {
            let negative = r.is_negative();
            let mag = r.abs();
            let body = if var_part.is_empty() {
                format_rational(&mag)
            } else if mag.is_one() {
                var_part
            } else {
                format!("{}*{}", format_rational(&mag), var_part)
            };
            (body, negative)
        }
        _ => {
            let body = if var_part.is_empty() {
                format!("{coeff}")
            } else {
                format!("{coeff}*{var_part}")
            };
            (body, false)
        }
    }
}

fn parse_err(offset: usize, message: &str) -> LojaError {
    LojaError::Parse {
        offset,
        message: message.to_string(),
    }
}

/// Parse the UTF-8 text grammar. If `n` is `None` it is inferred from the
/// highest variable index that occurs.
pub fn parse_polynomial(text: &str, n: Option<usize>) -> Result<Polynomial> {
    let raw = RawPoly::parse(text)?;
    let inferred = raw
        .terms
        .iter()
        .flat_map(|t| t.powers.iter().map(|&(idx, _)| idx))
        .max()
        .unwrap_or(1);
    let n = match n {
        Some(n) => {
            if inferred > n {
                return Err(parse_err(
                    0,
                    &format!("variable z{inferred} exceeds requested n = {n}"),
                ));
            }
            n
        }
        None => inferred,
    };
    let mut terms = Vec::new();
    for t in raw.terms {
        let mut v = vec![0u32; n];
        for (idx, e) in t.powers {
            v[idx - 1] += e;
        }
        let coeff = if t.negative { t.coeff.neg() } else { t.coeff };
        terms.push((ExponentVector(v), coeff));
    }
    Polynomial::new(n, terms)
}

struct RawTerm {
    negative: bool,
    coeff: Coefficient,
    powers: Vec<(usize, u32)>,
}

struct RawPoly {
    terms: Vec<RawTerm>,
}

/// Hand-rolled scanner for the term grammar; reports byte offsets.
struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(s: &'a str) -> Self {
        Scanner {
            bytes: s.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Consume '+' (returns false) or '-'/'−' (returns true).
    fn sign(&mut self) -> Option<bool> {
        if self.eat(b'+') {
            return Some(false);
        }
        if self.eat(b'-') {
            return Some(true);
        }
        // U+2212 MINUS SIGN is e2 88 92
        if self.bytes[self.pos..].starts_with(&[0xe2, 0x88, 0x92]) {
            self.pos += 3;
            return Some(true);
        }
        None
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(parse_err(start, "expected an integer"));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        s.parse()
            .map_err(|_| parse_err(start, "integer out of range"))
    }

    /// Signed integer, used only where a negative value is a domain error.
    fn signed_integer(&mut self) -> Result<(BigInt, bool)> {
        let neg = self.sign() == Some(true);
        let v = self.integer()?;
        Ok((v, neg))
    }

    fn rational(&mut self) -> Result<BigRational> {
        let num = self.integer()?;
        if self.eat(b'/') {
            let at = self.pos;
            let den = self.integer()?;
            if den.is_zero() {
                return Err(parse_err(at, "zero denominator"));
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }

    /// `'(' re ('+'|'-') im 'i' ')'` with rational parts.
    fn complex_coeff(&mut self) -> Result<Coefficient> {
        let open = self.pos;
        if !self.eat(b'(') {
            return Err(parse_err(open, "expected '('"));
        }
        self.skip_ws();
        let re_neg = self.sign() == Some(true);
        let mut re = self.rational()?;
        if re_neg {
            re = -re;
        }
        self.skip_ws();
        let im_neg = match self.sign() {
            Some(neg) => neg,
            None => return Err(parse_err(self.pos, "expected '+' or '-' in complex coefficient")),
        };
        self.skip_ws();
        let mut im = self.rational()?;
        if im_neg {
            im = -im;
        }
        self.skip_ws();
        if !self.eat(b'i') {
            return Err(parse_err(self.pos, "expected 'i'"));
        }
        self.skip_ws();
        if !self.eat(b')') {
            return Err(parse_err(self.pos, "expected ')'"));
        }
        Ok(Coefficient::Gaussian(GaussianRational::new(re, im)).normalized())
    }

    /// `'z' INT ('^' INT)?`
    fn variable(&mut self) -> Result<(usize, u32)> {
        let at = self.pos;
        if !self.eat(b'z') {
            return Err(parse_err(at, "expected a variable 'z<k>'"));
        }
        let idx_at = self.pos;
        let idx = self.integer()?;
        if idx.is_zero() {
            return Err(parse_err(idx_at, "variable index 0 (indices start at 1)"));
        }
        let idx: usize = idx
            .try_into()
            .map_err(|_| parse_err(idx_at, "variable index too large"))?;
        let mut exp = 1u32;
        if self.eat(b'^') {
            let exp_at = self.pos;
            let (v, neg) = self.signed_integer()?;
            if neg {
                return Err(parse_err(exp_at, "negative exponent"));
            }
            exp = u32::try_from(v).map_err(|_| parse_err(exp_at, "exponent too large"))?;
        }
        Ok((idx, exp))
    }

    fn term(&mut self) -> Result<RawTerm> {
        self.skip_ws();
        let mut coeff = Coefficient::one();
        let mut powers = Vec::new();
        let mut saw_any = false;
        match self.peek() {
            Some(b'(') => {
                coeff = self.complex_coeff()?;
                saw_any = true;
            }
            Some(b) if b.is_ascii_digit() => {
                coeff = Coefficient::Rational(self.rational()?);
                saw_any = true;
            }
            _ => {}
        }
        loop {
            self.skip_ws();
            let mark = self.pos;
            let starred = self.eat(b'*');
            self.skip_ws();
            if self.peek() == Some(b'z') {
                powers.push(self.variable()?);
                saw_any = true;
            } else if starred {
                return Err(parse_err(mark, "dangling '*'"));
            } else {
                break;
            }
        }
        if !saw_any {
            return Err(parse_err(self.pos, "expected a term"));
        }
        Ok(RawTerm {
            negative: false,
            coeff,
            powers,
        })
    }
}

impl Coefficient {
    fn normalized(self) -> Self {
        match self {
            Coefficient::Gaussian(g) if g.is_real() => Coefficient::Rational(g.re),
            other => other,
        }
    }
}

impl RawPoly {
    fn parse(text: &str) -> Result<Self> {
        let mut sc = Scanner::new(text);
        sc.skip_ws();
        if sc.peek().is_none() {
            return Err(parse_err(0, "empty input"));
        }
        let mut terms = Vec::new();
        let mut negative = sc.sign() == Some(true);
        loop {
            let mut term = sc.term()?;
            term.negative = negative;
            terms.push(term);
            sc.skip_ws();
            match sc.sign() {
                Some(neg) => negative = neg,
                None => break,
            }
        }
        sc.skip_ws();
        if sc.pos != sc.bytes.len() {
            return Err(parse_err(sc.pos, "unexpected trailing input"));
        }
        Ok(RawPoly { terms })
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}
