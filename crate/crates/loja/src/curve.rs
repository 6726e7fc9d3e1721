//! Curves z_j(t) = sum of a·t^p and exact order-of-vanishing probes.
//!
//! A probe substitutes the curve into f and every gradient component,
//! groups the result by exact rational t-exponent, and reports the least
//! exponent whose coefficient group does not cancel. Exact coefficients
//! use exact zero tests; algebraic or float coefficients are evaluated in
//! 192-bit fixed-point with a relative group tolerance.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::config::Config;
use crate::error::LojaError;
use crate::newton::facets_with;
use crate::numeric::{is_relative_zero, root_literal, FixedComplex};
use crate::poly::{Coefficient, GaussianRational, Polynomial};
use crate::rational::{format_rational, parse_rational};
use crate::Result;

/// Curve coefficient: exact, k-th-root literal with a unit phase, or a
/// complex float pair.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveCoeff {
    Exact(GaussianRational),
    Root {
        base: BigRational,
        index: u32,
        phase_turns: BigRational,
    },
    Float(f64, f64),
}

impl CurveCoeff {
    pub fn one() -> Self {
        CurveCoeff::Exact(GaussianRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        CurveCoeff::Exact(GaussianRational::from_rational(r))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CurveCoeff::Exact(_))
    }

    fn is_definitely_zero(&self) -> bool {
        match self {
            CurveCoeff::Exact(g) => g.is_zero(),
            CurveCoeff::Root { base, .. } => base.is_zero(),
            CurveCoeff::Float(re, im) => re == &0.0 && im == &0.0,
        }
    }

    pub fn to_fixed(&self) -> Result<FixedComplex> {
        match self {
            CurveCoeff::Exact(g) => Ok(FixedComplex::from_gaussian(g)),
            CurveCoeff::Root {
                base,
                index,
                phase_turns,
            } => root_literal(base, *index, phase_turns),
            CurveCoeff::Float(re, im) => Ok(FixedComplex::from_f64(*re, *im)),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CurveCoeff::Exact(g) => {
                if g.is_real() {
                    Value::String(format_rational(&g.re))
                } else {
                    json!({ "re": format_rational(&g.re), "im": format_rational(&g.im) })
                }
            }
            CurveCoeff::Root {
                base,
                index,
                phase_turns,
            } => json!({
                "root": {
                    "base": format_rational(base),
                    "index": index,
                    "phase_turns": format_rational(phase_turns),
                }
            }),
            CurveCoeff::Float(re, im) => json!({ "re": re, "im": im }),
        }
    }

    pub fn from_json(v: &Value) -> Result<CurveCoeff> {
        let bad = |m: &str| LojaError::BadCurve(m.to_string());
        match v {
            Value::String(s) => Ok(CurveCoeff::from_rational(parse_rational(s)?)),
            Value::Number(x) => Ok(CurveCoeff::from_rational(parse_rational(&x.to_string())?)),
            Value::Object(o) => {
                if let Some(root) = o.get("root") {
                    let r = root.as_object().ok_or_else(|| bad("root must be an object"))?;
                    let base = match r.get("base") {
                        Some(Value::String(s)) => parse_rational(s)?,
                        Some(Value::Number(x)) => parse_rational(&x.to_string())?,
                        _ => return Err(bad("root.base missing")),
                    };
                    let index = r
                        .get("index")
                        .and_then(Value::as_u64)
                        .ok_or_else(|| bad("root.index missing"))? as u32;
                    let phase_turns = match r.get("phase_turns") {
                        None => BigRational::zero(),
                        Some(Value::String(s)) => parse_rational(s)?,
                        Some(Value::Number(x)) => parse_rational(&x.to_string())?,
                        _ => return Err(bad("root.phase_turns must be rational")),
                    };
                    return Ok(CurveCoeff::Root {
                        base,
                        index,
                        phase_turns,
                    });
                }
                let part = |key: &str| -> Result<Option<(bool, BigRational)>> {
                    match o.get(key) {
                        None => Ok(None),
                        Some(Value::String(s)) => Ok(Some((true, parse_rational(s)?))),
                        Some(Value::Number(x)) => {
                            if x.is_f64() && x.as_i64().is_none() {
                                Ok(Some((false, BigRational::zero())))
                            } else {
                                Ok(Some((true, parse_rational(&x.to_string())?)))
                            }
                        }
                        Some(_) => Err(bad("re/im must be rational or float")),
                    }
                };
                let re = part("re")?;
                let im = part("im")?;
                let exact = re.as_ref().is_none_or(|p| p.0) && im.as_ref().is_none_or(|p| p.0);
                if exact {
                    Ok(CurveCoeff::Exact(GaussianRational::new(
                        re.map(|p| p.1).unwrap_or_else(BigRational::zero),
                        im.map(|p| p.1).unwrap_or_else(BigRational::zero),
                    )))
                } else {
                    let fre = o.get("re").and_then(Value::as_f64).unwrap_or(0.0);
                    let fim = o.get("im").and_then(Value::as_f64).unwrap_or(0.0);
                    Ok(CurveCoeff::Float(fre, fim))
                }
            }
            _ => Err(bad("coefficient must be a string, number or object")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveTerm {
    pub coeff: CurveCoeff,
    pub exponent: BigRational,
}

/// Per-coordinate finite sums a·t^p with strictly increasing positive
/// exponents. A coordinate with no terms is identically zero (the curve
/// lives in a coordinate subspace).
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    coords: Vec<Vec<CurveTerm>>,
}

impl Curve {
    pub fn new(coords: Vec<Vec<CurveTerm>>) -> Result<Curve> {
        for (j, series) in coords.iter().enumerate() {
            let mut prev: Option<&BigRational> = None;
            for term in series {
                if !term.exponent.is_positive() {
                    return Err(LojaError::BadCurve(format!(
                        "coordinate {} has a non-positive exponent",
                        j + 1
                    )));
                }
                if let Some(p) = prev {
                    if &term.exponent <= p {
                        return Err(LojaError::BadCurve(format!(
                            "coordinate {} exponents must strictly increase",
                            j + 1
                        )));
                    }
                }
                prev = Some(&term.exponent);
            }
            if let Some(first) = series.first() {
                if first.coeff.is_definitely_zero() {
                    return Err(LojaError::BadCurve(format!(
                        "coordinate {} has a zero leading coefficient",
                        j + 1
                    )));
                }
            }
        }
        Ok(Curve { coords })
    }

    /// Pure monomial curve z_j = a_j t^(p_j).
    pub fn monomial(coeffs: Vec<CurveCoeff>, exponents: Vec<BigRational>) -> Result<Curve> {
        if coeffs.len() != exponents.len() {
            return Err(LojaError::BadCurve("coefficient/exponent length mismatch".into()));
        }
        Curve::new(
            coeffs
                .into_iter()
                .zip(exponents)
                .map(|(coeff, exponent)| vec![CurveTerm { coeff, exponent }])
                .collect(),
        )
    }

    /// Monomial curve with integer exponents and unit coefficients.
    pub fn unit_monomial(exponents: &[u64]) -> Result<Curve> {
        Curve::monomial(
            exponents.iter().map(|_| CurveCoeff::one()).collect(),
            exponents
                .iter()
                .map(|&e| BigRational::from_integer(BigInt::from(e)))
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Vec<CurveTerm>] {
        &self.coords
    }

    /// 1-based indices of coordinates carrying at least one term.
    pub fn active_coords(&self) -> std::collections::BTreeSet<usize> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_empty())
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn is_exact(&self) -> bool {
        self.coords
            .iter()
            .flatten()
            .all(|t| t.coeff.is_exact())
    }

    /// Leading exponents p_j; `None` on empty coordinates.
    pub fn leading_exponents(&self) -> Vec<Option<BigRational>> {
        self.coords
            .iter()
            .map(|s| s.first().map(|t| t.exponent.clone()))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "coords": self.coords.iter().map(|series| {
                series.iter().map(|t| json!({
                    "coeff": t.coeff.to_json(),
                    "exp": format_rational(&t.exponent),
                })).collect::<Vec<_>>()
            }).collect::<Vec<_>>()
        })
    }

    pub fn from_json(v: &Value) -> Result<Curve> {
        let bad = |m: &str| LojaError::BadCurve(m.to_string());
        let coords = v
            .get("coords")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"coords\" array"))?;
        let mut out = Vec::with_capacity(coords.len());
        for series in coords {
            let series = series.as_array().ok_or_else(|| bad("coordinate must be an array"))?;
            let mut terms = Vec::with_capacity(series.len());
            for t in series {
                let coeff = CurveCoeff::from_json(
                    t.get("coeff").ok_or_else(|| bad("term missing \"coeff\""))?,
                )?;
                let exponent = match t.get("exp") {
                    Some(Value::String(s)) => parse_rational(s)?,
                    Some(Value::Number(x)) => parse_rational(&x.to_string())?,
                    _ => return Err(bad("term missing \"exp\"")),
                };
                terms.push(CurveTerm { coeff, exponent });
            }
            out.push(terms);
        }
        Curve::new(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Exactness {
    Exact,
    Numeric { tolerance: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub ord_f: BigRational,
    pub ord_grad: BigRational,
    pub theta: BigRational,
    pub truncation_used: BigRational,
    pub exactness: Exactness,
}

// ---- series engine ----

trait ProbeValue: Clone {
    type Group: Clone;
    fn group_new() -> Self::Group;
    fn group_add(group: &mut Self::Group, v: &Self);
    fn group_merge(group: &mut Self::Group, other: &Self::Group);
    fn group_value(group: &Self::Group) -> Self;
    fn group_nonzero(group: &Self::Group, tolerance: f64) -> bool;
    fn mul(&self, other: &Self) -> Self;
    fn one() -> Self;
}

impl ProbeValue for GaussianRational {
    type Group = GaussianRational;

    fn group_new() -> Self::Group {
        GaussianRational::zero()
    }
    fn group_add(group: &mut Self::Group, v: &Self) {
        *group = group.add(v);
    }
    fn group_merge(group: &mut Self::Group, other: &Self::Group) {
        *group = group.add(other);
    }
    fn group_value(group: &Self::Group) -> Self {
        group.clone()
    }
    fn group_nonzero(group: &Self::Group, _tolerance: f64) -> bool {
        !group.is_zero()
    }
    fn mul(&self, other: &Self) -> Self {
        GaussianRational::mul(self, other)
    }
    fn one() -> Self {
        GaussianRational::one()
    }
}

/// Numeric group: collapsed sum plus the largest |addend|^2 seen, the
/// scale for the relative zero test.
#[derive(Clone)]
struct NumGroup {
    sum: FixedComplex,
    max_abs2: BigInt,
}

impl ProbeValue for FixedComplex {
    type Group = NumGroup;

    fn group_new() -> Self::Group {
        NumGroup {
            sum: FixedComplex::zero(),
            max_abs2: BigInt::zero(),
        }
    }
    fn group_add(group: &mut Self::Group, v: &Self) {
        group.sum = group.sum.add(v);
        let a = v.abs2();
        if a > group.max_abs2 {
            group.max_abs2 = a;
        }
    }
    fn group_merge(group: &mut Self::Group, other: &Self::Group) {
        group.sum = group.sum.add(&other.sum);
        if other.max_abs2 > group.max_abs2 {
            group.max_abs2 = other.max_abs2.clone();
        }
    }
    fn group_value(group: &Self::Group) -> Self {
        group.sum.clone()
    }
    fn group_nonzero(group: &Self::Group, tolerance: f64) -> bool {
        !is_relative_zero(&group.sum.abs2(), &group.max_abs2, tolerance)
    }
    fn mul(&self, other: &Self) -> Self {
        FixedComplex::mul(self, other)
    }
    fn one() -> Self {
        FixedComplex::one()
    }
}

struct Series<V: ProbeValue> {
    groups: BTreeMap<BigRational, V::Group>,
    truncated: bool,
}

impl<V: ProbeValue> Clone for Series<V> {
    fn clone(&self) -> Self {
        Series {
            groups: self.groups.clone(),
            truncated: self.truncated,
        }
    }
}

impl<V: ProbeValue> Series<V> {
    fn zero() -> Self {
        Series {
            groups: BTreeMap::new(),
            truncated: false,
        }
    }

    fn one() -> Self {
        let mut groups = BTreeMap::new();
        let mut g = V::group_new();
        V::group_add(&mut g, &V::one());
        groups.insert(BigRational::zero(), g);
        Series {
            groups,
            truncated: false,
        }
    }

    fn from_terms(terms: Vec<(BigRational, V)>, limit: &BigRational) -> Self {
        let mut s = Series::zero();
        for (e, v) in terms {
            if &e > limit {
                s.truncated = true;
                continue;
            }
            let g = s.groups.entry(e).or_insert_with(V::group_new);
            V::group_add(g, &v);
        }
        s
    }

    fn mul(&self, other: &Self, limit: &BigRational) -> Self {
        let mut out = Series::zero();
        out.truncated = self.truncated || other.truncated;
        for (ea, ga) in &self.groups {
            let va = V::group_value(ga);
            for (eb, gb) in &other.groups {
                let e = ea + eb;
                if &e > limit {
                    out.truncated = true;
                    continue;
                }
                let addend = va.mul(&V::group_value(gb));
                let g = out.groups.entry(e).or_insert_with(V::group_new);
                V::group_add(g, &addend);
            }
        }
        out
    }

    fn scalar_mul(&self, v: &V) -> Self {
        let mut out = Series::zero();
        out.truncated = self.truncated;
        for (e, g) in &self.groups {
            let addend = v.mul(&V::group_value(g));
            let ng = out.groups.entry(e.clone()).or_insert_with(V::group_new);
            V::group_add(ng, &addend);
        }
        out
    }

    fn merge(&mut self, other: &Self) {
        self.truncated |= other.truncated;
        for (e, g) in &other.groups {
            match self.groups.get_mut(e) {
                Some(mine) => V::group_merge(mine, g),
                None => {
                    self.groups.insert(e.clone(), g.clone());
                }
            }
        }
    }

    /// Least exponent whose group does not cancel.
    fn order(&self, tolerance: f64) -> Option<BigRational> {
        self.groups
            .iter()
            .find(|(_, g)| V::group_nonzero(g, tolerance))
            .map(|(e, _)| e.clone())
    }
}

fn evaluate_along<V, FC, FP>(
    f: &Polynomial,
    curve: &Curve,
    limit: &BigRational,
    curve_value: &FC,
    poly_value: &FP,
) -> Result<(Series<V>, Vec<Series<V>>)>
where
    V: ProbeValue,
    FC: Fn(&CurveCoeff) -> Result<V>,
    FP: Fn(&Coefficient) -> Result<V>,
{
    let n = f.n();
    // coordinate series and their power tables
    let mut coord: Vec<Series<V>> = Vec::with_capacity(n);
    for series in curve.coords() {
        let mut terms = Vec::with_capacity(series.len());
        for t in series {
            terms.push((t.exponent.clone(), curve_value(&t.coeff)?));
        }
        coord.push(Series::from_terms(terms, limit));
    }
    let mut max_exp = vec![0u32; n];
    for (exp, _) in f.terms() {
        for (j, &e) in exp.0.iter().enumerate() {
            max_exp[j] = max_exp[j].max(e);
        }
    }
    let mut powers: Vec<Vec<Series<V>>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut tab = Vec::with_capacity(max_exp[j] as usize + 1);
        tab.push(Series::one());
        for k in 1..=max_exp[j] {
            let prev = &tab[(k - 1) as usize];
            tab.push(prev.mul(&coord[j], limit));
        }
        powers.push(tab);
    }
    let eval_poly = |p: &Polynomial| -> Result<Series<V>> {
        let mut acc = Series::zero();
        for (exp, c) in p.terms() {
            let mut term = Series::one();
            for (j, &e) in exp.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[j][e as usize], limit);
                }
            }
            acc.merge(&term.scalar_mul(&poly_value(c)?));
        }
        Ok(acc)
    };
    let f_series = eval_poly(f)?;
    let mut grad = Vec::with_capacity(n);
    for j in 1..=n {
        grad.push(eval_poly(&f.partial_derivative(j)?)?);
    }
    Ok((f_series, grad))
}

/// Default truncation: four times the largest facet offset.
pub fn default_truncation(f: &Polynomial, cfg: &Config) -> Result<BigRational> {
    if let Some(t) = cfg.truncation {
        return Ok(BigRational::from_integer(BigInt::from(t)));
    }
    let facets = facets_with(f, cfg)?;
    let max_d = facets
        .iter()
        .map(|fct| fct.d.clone())
        .max()
        .unwrap_or_else(BigInt::zero);
    let four = BigInt::from(4);
    let t = &max_d * four;
    Ok(BigRational::from_integer(if t.is_zero() {
        BigInt::from(64)
    } else {
        t
    }))
}

pub fn probe(f: &Polynomial, curve: &Curve) -> Result<ProbeResult> {
    probe_with(f, curve, &Config::default())
}

pub fn probe_with(f: &Polynomial, curve: &Curve, cfg: &Config) -> Result<ProbeResult> {
    if f.is_zero() {
        return Err(LojaError::ZeroPolynomial);
    }
    if curve.n() != f.n() {
        return Err(LojaError::DimensionMismatch {
            expected: f.n(),
            found: curve.n(),
        });
    }
    let limit = default_truncation(f, cfg)?;
    let exact = curve.is_exact() && f.terms().all(|(_, c)| c.is_exact());

    let (ord_f, ord_grad, f_trunc) = if exact {
        let (fs, grad) = evaluate_along::<GaussianRational, _, _>(
            f,
            curve,
            &limit,
            &|c| match c {
                CurveCoeff::Exact(g) => Ok(g.clone()),
                _ => unreachable!("checked exact"),
            },
            &|c| {
                c.as_gaussian()
                    .ok_or_else(|| LojaError::Domain("inexact coefficient on exact path".into()))
            },
        )?;
        let ord_f = fs.order(cfg.tolerance);
        let ord_grad = grad
            .iter()
            .filter_map(|s| s.order(cfg.tolerance))
            .min();
        (
            ord_f,
            ord_grad,
            fs.truncated || grad.iter().any(|s| s.truncated),
        )
    } else {
        let (fs, grad) = evaluate_along::<FixedComplex, _, _>(
            f,
            curve,
            &limit,
            &|c| c.to_fixed(),
            &|c| match c {
                Coefficient::Rational(r) => Ok(FixedComplex::from_rational(r)),
                Coefficient::Gaussian(g) => Ok(FixedComplex::from_gaussian(g)),
                Coefficient::Float(re, im) => Ok(FixedComplex::from_f64(*re, *im)),
            },
        )?;
        let ord_f = fs.order(cfg.tolerance);
        let ord_grad = grad
            .iter()
            .filter_map(|s| s.order(cfg.tolerance))
            .min();
        (
            ord_f,
            ord_grad,
            fs.truncated || grad.iter().any(|s| s.truncated),
        )
    };

    let ord_f = match ord_f {
        Some(o) => o,
        None if f_trunc => {
            return Err(LojaError::TruncationExceeded {
                bound: format_rational(&limit),
            })
        }
        None => return Err(LojaError::CurveInZeroSet),
    };
    let ord_grad = match ord_grad {
        Some(o) => o,
        None => {
            return Err(LojaError::TruncationExceeded {
                bound: format_rational(&limit),
            })
        }
    };
    if ord_f.is_zero() {
        return Err(LojaError::Domain(
            "f does not vanish along the curve at t = 0".into(),
        ));
    }
    let theta = &ord_grad / &ord_f;
    Ok(ProbeResult {
        ord_f,
        ord_grad,
        theta,
        truncation_used: limit,
        exactness: if exact {
            Exactness::Exact
        } else {
            Exactness::Numeric {
                tolerance: cfg.tolerance,
            }
        },
    })
}

/// Pad the inactive coordinates of a subspace curve with t^N. With
/// `N = None` the exponent is one past the probe truncation window, which
/// keeps every order computed by `probe` unchanged.
pub fn lift_subspace_curve(f: &Polynomial, curve: &Curve, n_pad: Option<u64>) -> Result<Curve> {
    lift_subspace_curve_with(f, curve, n_pad, &Config::default())
}

pub fn lift_subspace_curve_with(
    f: &Polynomial,
    curve: &Curve,
    n_pad: Option<u64>,
    cfg: &Config,
) -> Result<Curve> {
    if curve.n() != f.n() {
        return Err(LojaError::DimensionMismatch {
            expected: f.n(),
            found: curve.n(),
        });
    }
    let active = curve.active_coords();
    if active.len() == curve.n() {
        return Ok(curve.clone());
    }
    if f.restrict(&active).is_zero() {
        return Err(LojaError::VanishingSubspace {
            indices: active.into_iter().collect(),
        });
    }
    let pad = match n_pad {
        Some(n) => {
            if n == 0 {
                return Err(LojaError::BadCurve("padding exponent must be positive".into()));
            }
            BigRational::from_integer(BigInt::from(n))
        }
        None => {
            let t = default_truncation(f, cfg)?;
            t.ceil() + BigRational::one()
        }
    };
    let coords = curve
        .coords()
        .iter()
        .map(|series| {
            if series.is_empty() {
                vec![CurveTerm {
                    coeff: CurveCoeff::one(),
                    exponent: pad.clone(),
                }]
            } else {
                series.clone()
            }
        })
        .collect();
    Curve::new(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::rational::{int, ratio};

    fn rat(n: i64, d: i64) -> BigRational {
        ratio(n, d)
    }

    #[test]
    fn trivial_probe() {
        let f = parse_polynomial("z1^2", None).unwrap();
        let c = Curve::unit_monomial(&[1]).unwrap();
        let r = probe(&f, &c).unwrap();
        assert_eq!(r.ord_f, int(2));
        assert_eq!(r.ord_grad, int(1));
        assert_eq!(r.theta, rat(1, 2));
        assert_eq!(r.exactness, Exactness::Exact);
    }

    #[test]
    fn curve_validation() {
        assert!(Curve::monomial(
            vec![CurveCoeff::from_rational(int(0))],
            vec![int(1)]
        )
        .is_err());
        assert!(Curve::monomial(vec![CurveCoeff::one()], vec![int(0)]).is_err());
        let c = Curve::new(vec![vec![
            CurveTerm { coeff: CurveCoeff::one(), exponent: int(2) },
            CurveTerm { coeff: CurveCoeff::one(), exponent: int(1) },
        ]]);
        assert!(c.is_err());
    }

    #[test]
    fn higher_terms_change_orders_exactly() {
        // f = z1^2 - z2^2 along z1 = t + t^2, z2 = t: the t^2 groups cancel,
        // the first surviving order of f is 3.
        let f = parse_polynomial("z1^2 - z2^2", None).unwrap();
        let c = Curve::new(vec![
            vec![
                CurveTerm { coeff: CurveCoeff::one(), exponent: int(1) },
                CurveTerm { coeff: CurveCoeff::one(), exponent: int(2) },
            ],
            vec![CurveTerm { coeff: CurveCoeff::one(), exponent: int(1) }],
        ])
        .unwrap();
        let r = probe(&f, &c).unwrap();
        assert_eq!(r.ord_f, int(3));
        assert_eq!(r.ord_grad, int(1));
    }

    #[test]
    fn curve_in_zero_set() {
        let f = parse_polynomial("z1^2 - z2^2", None).unwrap();
        let c = Curve::unit_monomial(&[1, 1]).unwrap();
        assert!(matches!(probe(&f, &c), Err(LojaError::CurveInZeroSet)));
    }

    #[test]
    fn puiseux_exponents() {
        let f = parse_polynomial("z1^2 + z2^3", None).unwrap();
        let c = Curve::monomial(
            vec![CurveCoeff::one(), CurveCoeff::one()],
            vec![rat(3, 2), int(1)],
        )
        .unwrap();
        let r = probe(&f, &c).unwrap();
        assert_eq!(r.ord_f, int(3));
        assert_eq!(r.ord_grad, rat(3, 2));
        assert_eq!(r.theta, rat(1, 2));
    }

    #[test]
    fn real_root_witness_curve() {
        let f4 =
            parse_polynomial("z1^9*z2 + z2^10*z3 + z3^11*z1 + z1^2*z2^2*z3^2", None).unwrap();
        let c = Curve::monomial(
            vec![
                CurveCoeff::Root { base: rat(5, 16), index: 6, phase_turns: int(0) },
                CurveCoeff::Root { base: rat(1, 20), index: 12, phase_turns: int(0) },
                CurveCoeff::from_rational(int(-1)),
            ],
            vec![int(70), int(19), int(12)],
        )
        .unwrap();
        let r = probe(&f4, &c).unwrap();
        assert_eq!(r.ord_grad, int(190));
        assert_eq!(r.ord_f, int(202));
        assert_eq!(r.theta, rat(95, 101));
        assert!(matches!(r.exactness, Exactness::Numeric { .. }));
    }

    #[test]
    fn phased_root_witness_curve() {
        let f1 = parse_polynomial("z1^5*z2^2 + z1^6*z3 + z2^6*z3^2 + z1^3*z3^6", None).unwrap();
        let g = f1
            .power_pullback(&[2, 2, 2])
            .unwrap()
            .add(&parse_polynomial("z1^3*z2^6*z3^8", None).unwrap())
            .unwrap();
        let c = Curve::monomial(
            vec![
                CurveCoeff::Root { base: rat(3, 8), index: 6, phase_turns: rat(1, 12) },
                CurveCoeff::Root { base: rat(3, 32), index: 12, phase_turns: rat(-1, 24) },
                CurveCoeff::one(),
            ],
            vec![int(10), int(9), int(6)],
        )
        .unwrap();
        let r = probe(&g, &c).unwrap();
        assert_eq!(r.ord_grad, int(126));
        assert_eq!(r.ord_f, int(132));
        assert_eq!(r.theta, rat(21, 22));
    }

    #[test]
    fn lift_identity_when_all_coordinates_active() {
        let f = parse_polynomial("z1^2 + z2^2", None).unwrap();
        let c = Curve::unit_monomial(&[1, 2]).unwrap();
        assert_eq!(lift_subspace_curve(&f, &c, None).unwrap(), c);
    }

    #[test]
    fn lift_rejects_vanishing_subspace() {
        let f1 = parse_polynomial("z1^5*z2^2 + z1^6*z3 + z2^6*z3^2 + z1^3*z3^6", None).unwrap();
        let c = Curve::new(vec![
            vec![CurveTerm { coeff: CurveCoeff::one(), exponent: int(1) }],
            vec![],
            vec![],
        ])
        .unwrap();
        assert!(matches!(
            lift_subspace_curve(&f1, &c, None),
            Err(LojaError::VanishingSubspace { .. })
        ));
    }

    #[test]
    fn lift_of_f1_subspace_curve_matches_restricted_gradient_ratio() {
        let f1 = parse_polynomial("z1^5*z2^2 + z1^6*z3 + z2^6*z3^2 + z1^3*z3^6", None).unwrap();
        // curve (t, 2t) in the z1,z2 subspace; f^I = z1^5 z2^2 gives
        // ord grad = 6, ord f = 7 in the ambient space
        let c = Curve::new(vec![
            vec![CurveTerm { coeff: CurveCoeff::one(), exponent: int(1) }],
            vec![CurveTerm { coeff: CurveCoeff::from_rational(int(2)), exponent: int(1) }],
            vec![],
        ])
        .unwrap();
        for pad in [20u64, 40, 80] {
            let lifted = lift_subspace_curve(&f1, &c, Some(pad)).unwrap();
            let r = probe(&f1, &lifted).unwrap();
            assert_eq!(r.theta, rat(6, 7), "pad {pad}");
        }
        let auto = lift_subspace_curve(&f1, &c, None).unwrap();
        assert_eq!(probe(&f1, &auto).unwrap().theta, rat(6, 7));
    }

    #[test]
    fn f3_lifted_curve_probes_one_third() {
        // The z1*z2*z3 term contributes z1*z2 to the third gradient
        // component, so the order of the gradient along (t,t,t^N) is 2.
        let f3 =
            parse_polynomial("z1^4*z2^2 + z2^4*z3^2 + z3^4*z1^2 + z1*z2*z3", None).unwrap();
        for n in [7u64, 9, 12] {
            let c = Curve::unit_monomial(&[1, 1, n]).unwrap();
            let r = probe(&f3, &c).unwrap();
            assert_eq!(r.ord_grad, int(2), "N = {n}");
            assert_eq!(r.ord_f, int(6));
            assert_eq!(r.theta, rat(1, 3));
        }
    }

    #[test]
    fn truncation_error_reports_bound() {
        // z1 - z2 along the diagonal cancels forever; z2 carries a blocked
        // tail so the series is genuinely truncated, not exactly zero.
        let f = parse_polynomial("z1 - z2", None).unwrap();
        let c = Curve::new(vec![
            vec![CurveTerm { coeff: CurveCoeff::one(), exponent: int(1) }],
            vec![
                CurveTerm { coeff: CurveCoeff::one(), exponent: int(1) },
                CurveTerm { coeff: CurveCoeff::one(), exponent: int(1000) },
            ],
        ])
        .unwrap();
        match probe(&f, &c) {
            Err(LojaError::TruncationExceeded { .. }) => {}
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn edge_weight_curve_with_tuned_coefficients_reaches_ten_elevenths() {
        // Weight (5,7,3) selects the face conv{(6,0,1),(3,0,6)}. The
        // coefficients a1 = 1+i, a3 = -1+i satisfy 2*a1^3 + a3^5 = 0, which
        // cancels the leading group of df/dz1; the gradient order is then
        // carried by df/dz3 at 30 while f keeps order 33. The ratio 10/11
        // exceeds the refined facet-vertex bound 8/9 for this polynomial,
        // so that bound is not sharp as an upper bound for all curves.
        let f1 = parse_polynomial("z1^5*z2^2 + z1^6*z3 + z2^6*z3^2 + z1^3*z3^6", None).unwrap();
        let c = Curve::monomial(
            vec![
                CurveCoeff::Exact(GaussianRational::new(int(1), int(1))),
                CurveCoeff::one(),
                CurveCoeff::Exact(GaussianRational::new(int(-1), int(1))),
            ],
            vec![int(5), int(7), int(3)],
        )
        .unwrap();
        let r = probe(&f1, &c).unwrap();
        assert_eq!(r.ord_f, int(33));
        assert_eq!(r.ord_grad, int(30));
        assert_eq!(r.theta, rat(10, 11));
        assert_eq!(r.exactness, Exactness::Exact);
    }

    #[test]
    fn curve_json_roundtrip() {
        let c = Curve::monomial(
            vec![
                CurveCoeff::Root { base: rat(5, 16), index: 6, phase_turns: rat(1, 12) },
                CurveCoeff::Exact(GaussianRational::new(rat(1, 2), rat(-3, 4))),
                CurveCoeff::from_rational(int(-1)),
            ],
            vec![int(70), rat(19, 2), int(12)],
        )
        .unwrap();
        let v = c.to_json();
        let back = Curve::from_json(&v).unwrap();
        assert_eq!(c, back);
    }
}
