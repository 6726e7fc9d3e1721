//! Newton polyhedron geometry: facets, faces, vertices, axis data.
//!
//! The polyhedron of f is conv(support) + R≥0^n. Facets are enumerated by
//! brute force over candidate supporting hyperplanes spanned by support
//! points and coordinate recession directions, solved exactly over the
//! rationals. No epsilons anywhere in this module.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::config::Config;
use crate::error::LojaError;
use crate::poly::{ExponentVector, Polynomial};
use crate::Result;

/// Non-negative rational weight vector P = (p_1, ..., p_n).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WeightVector {
    pub entries: Vec<BigRational>,
    /// Set when produced by `normalize`, meaning d(P, f) = 1 for that f.
    pub is_normalized: bool,
}

impl WeightVector {
    pub fn new(entries: Vec<BigRational>) -> Self {
        WeightVector {
            entries,
            is_normalized: false,
        }
    }

    pub fn from_integers(v: &[i64]) -> Self {
        WeightVector::new(
            v.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|x| !x.is_negative())
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.entries.iter().all(|x| x.is_positive())
    }

    /// 1-based indices with p_j = 0.
    pub fn zero_set(&self) -> BTreeSet<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, x)| x.is_zero())
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// <P, nu> as an exact rational.
    pub fn pairing(&self, exp: &ExponentVector) -> BigRational {
        self.entries
            .iter()
            .zip(&exp.0)
            .map(|(p, &e)| p * BigRational::from_integer(BigInt::from(e)))
            .sum()
    }

    /// Rescale to the primitive integer vector on the same ray.
    pub fn primitive(&self) -> Vec<BigInt> {
        let mut den = BigInt::one();
        for e in &self.entries {
            den = den.lcm(e.denom());
        }
        let ints: Vec<BigInt> = self.entries.iter().map(|e| (e * &den).to_integer()).collect();
        let mut g = BigInt::zero();
        for v in &ints {
            g = g.gcd(v);
        }
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|v| v / &g).collect()
    }
}

/// Face of the Newton polyhedron: the support points attaining a common
/// minimum plus the recession directions contained in the face.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Face {
    pub on_points: BTreeSet<ExponentVector>,
    /// 1-based coordinate directions e_j contained in the face.
    pub recession: BTreeSet<usize>,
    pub dim: usize,
}

impl Face {
    fn build(on_points: BTreeSet<ExponentVector>, recession: BTreeSet<usize>) -> Face {
        let dim = face_dim(&on_points, &recession);
        Face {
            on_points,
            recession,
            dim,
        }
    }

    /// Set containment of faces, equivalent to componentwise containment.
    pub fn contains(&self, other: &Face) -> bool {
        other.on_points.is_subset(&self.on_points) && other.recession.is_subset(&self.recession)
    }

    pub fn key(&self) -> (BTreeSet<ExponentVector>, BTreeSet<usize>) {
        (self.on_points.clone(), self.recession.clone())
    }
}

/// Facet: (n-1)-dimensional face with its primitive integer normal.
#[derive(Debug, Clone)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub d: BigInt,
    pub face: Face,
}

impl Facet {
    pub fn normal_weight(&self) -> WeightVector {
        WeightVector::new(
            self.normal
                .iter()
                .map(|v| BigRational::from_integer(v.clone()))
                .collect(),
        )
    }
}

/// Axis intersection data: b_j is the least pure power of z_j in f.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisData {
    pub b: Vec<Option<u32>>,
    pub max_b: Option<u32>,
    /// 1-based argmax set I_B.
    pub argmax: BTreeSet<usize>,
}

/// d(P, f) together with the face where the minimum is attained.
pub fn d_and_face(p: &WeightVector, f: &Polynomial) -> Result<(BigRational, Face)> {
    if f.is_zero() {
        return Err(LojaError::ZeroPolynomial);
    }
    if p.len() != f.n() {
        return Err(LojaError::DimensionMismatch {
            expected: f.n(),
            found: p.len(),
        });
    }
    if !p.is_nonnegative() || p.is_zero() {
        return Err(LojaError::Domain(
            "weight vector must be non-negative and nonzero".into(),
        ));
    }
    let mut min: Option<BigRational> = None;
    for (exp, _) in f.terms() {
        let v = p.pairing(exp);
        if min.as_ref().is_none_or(|m| &v < m) {
            min = Some(v);
        }
    }
    let d = min.unwrap();
    let on_points: BTreeSet<ExponentVector> = f
        .terms()
        .filter(|(exp, _)| p.pairing(exp) == d)
        .map(|(exp, _)| exp.clone())
        .collect();
    Ok((d, Face::build(on_points, p.zero_set())))
}

/// Complete facet list of the Newton polyhedron, coordinate facets included.
pub fn facets(f: &Polynomial) -> Result<Vec<Facet>> {
    facets_with(f, &Config::default())
}

pub fn facets_with(f: &Polynomial, cfg: &Config) -> Result<Vec<Facet>> {
    if f.is_zero() {
        return Err(LojaError::ZeroPolynomial);
    }
    let n = f.n();
    if n > cfg.max_n {
        return Err(LojaError::GuardExceeded(format!(
            "n = {n} exceeds max_n = {}",
            cfg.max_n
        )));
    }
    let support = f.support();
    if support.len() > cfg.max_support {
        return Err(LojaError::GuardExceeded(format!(
            "support size {} exceeds max_support = {}",
            support.len(),
            cfg.max_support
        )));
    }

    let mut found: BTreeMap<Vec<BigInt>, Facet> = BTreeMap::new();
    let m = support.len();
    for t in 1..=n.min(m) {
        for pts in subsets(m, t) {
            for dirs in subsets(n, n - t) {
                let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(n - 1);
                let base = &support[pts[0]];
                for &pi in &pts[1..] {
                    let q = &support[pi];
                    rows.push(
                        (0..n)
                            .map(|i| {
                                BigRational::from_integer(
                                    BigInt::from(q.0[i]) - BigInt::from(base.0[i]),
                                )
                            })
                            .collect(),
                    );
                }
                for &j in &dirs {
                    let mut e = vec![BigRational::zero(); n];
                    e[j] = BigRational::one();
                    rows.push(e);
                }
                let Some(normal) = nullspace_one(&rows, n) else {
                    continue;
                };
                let Some(normal) = orient_nonnegative(normal) else {
                    continue;
                };
                let w = WeightVector::new(normal);
                let primitive = w.primitive();
                if found.contains_key(&primitive) {
                    continue;
                }
                let iw = WeightVector::new(
                    primitive
                        .iter()
                        .map(|v| BigRational::from_integer(v.clone()))
                        .collect(),
                );
                let d_at_base = iw.pairing(base);
                let supporting = support.iter().all(|nu| iw.pairing(nu) >= d_at_base);
                if !supporting {
                    continue;
                }
                let (d, face) = d_and_face(&iw, f)?;
                debug_assert_eq!(d, d_at_base);
                if face.dim != n - 1 {
                    continue;
                }
                found.insert(
                    primitive.clone(),
                    Facet {
                        normal: primitive,
                        d: d.to_integer(),
                        face,
                    },
                );
            }
        }
    }
    Ok(found.into_values().collect())
}

/// All faces of the polyhedron: the facet faces closed under intersection.
pub(crate) fn face_closure(facets: &[Facet]) -> Vec<Face> {
    let mut seen: BTreeSet<(BTreeSet<ExponentVector>, BTreeSet<usize>)> = BTreeSet::new();
    let mut faces: Vec<Face> = Vec::new();
    for fct in facets {
        if seen.insert(fct.face.key()) {
            faces.push(fct.face.clone());
        }
    }
    let mut frontier: Vec<Face> = faces.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for fct in facets {
                let on: BTreeSet<ExponentVector> = a
                    .on_points
                    .intersection(&fct.face.on_points)
                    .cloned()
                    .collect();
                if on.is_empty() {
                    continue;
                }
                let rec: BTreeSet<usize> = a
                    .recession
                    .intersection(&fct.face.recession)
                    .copied()
                    .collect();
                if seen.insert((on.clone(), rec.clone())) {
                    let face = Face::build(on, rec);
                    faces.push(face.clone());
                    next.push(face);
                }
            }
        }
        frontier = next;
    }
    faces.sort_by_key(|f| (f.dim, f.key()));
    faces
}

/// Vertices of the Newton polyhedron with their total degrees |nu|.
pub fn polyhedron_vertices(f: &Polynomial) -> Result<Vec<(ExponentVector, u64)>> {
    let fs = facets(f)?;
    let faces = face_closure(&fs);
    let mut out: Vec<(ExponentVector, u64)> = faces
        .iter()
        .filter(|fa| fa.dim == 0)
        .map(|fa| {
            let nu = fa.on_points.iter().next().expect("vertex face has a point");
            (nu.clone(), nu.total_degree())
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// A strictly positive weight uniquely minimized at the given vertex
/// (sum of the facet normals through it). Used by tests as the witness.
pub fn vertex_witness(f: &Polynomial, vertex: &ExponentVector) -> Result<WeightVector> {
    let fs = facets(f)?;
    let mut sum = vec![BigInt::zero(); f.n()];
    for fct in &fs {
        if fct.face.on_points.contains(vertex) {
            for (s, v) in sum.iter_mut().zip(&fct.normal) {
                *s += v;
            }
        }
    }
    Ok(WeightVector::new(
        sum.into_iter().map(BigRational::from_integer).collect(),
    ))
}

/// f is k-convenient iff its restriction to every coordinate subspace of
/// dimension >= n-k is nonzero; convenient means k = n-1.
pub fn is_k_convenient(f: &Polynomial, k: usize) -> bool {
    let n = f.n();
    if f.is_zero() {
        return false;
    }
    let size = n.saturating_sub(k);
    // Checking |I| = n-k suffices: larger subspaces keep more terms.
    for idx in subsets(n, size) {
        let vars: BTreeSet<usize> = idx.iter().map(|&i| i + 1).collect();
        if f.restrict(&vars).is_zero() {
            return false;
        }
    }
    true
}

pub fn is_convenient(f: &Polynomial) -> bool {
    !f.is_zero() && is_k_convenient(f, f.n() - 1)
}

/// Axis intersection exponents b_j and their maximum B.
pub fn axis_data(f: &Polynomial) -> Result<AxisData> {
    if f.is_zero() {
        return Err(LojaError::ZeroPolynomial);
    }
    let n = f.n();
    let mut b: Vec<Option<u32>> = vec![None; n];
    for (exp, _) in f.terms() {
        let vars = exp.variables();
        if vars.len() == 1 {
            let j = *vars.iter().next().unwrap();
            let e = exp.0[j - 1];
            if b[j - 1].is_none_or(|cur| e < cur) {
                b[j - 1] = Some(e);
            }
        }
    }
    let max_b = b.iter().filter_map(|x| *x).max();
    let argmax = match max_b {
        None => BTreeSet::new(),
        Some(mx) => b
            .iter()
            .enumerate()
            .filter(|(_, x)| **x == Some(mx))
            .map(|(i, _)| i + 1)
            .collect(),
    };
    Ok(AxisData { b, max_b, argmax })
}

// ---- exact linear algebra over the rationals ----

/// Exact row rank of a rational matrix with `n` columns.
pub fn rank_of(rows: &[Vec<BigRational>], n: usize) -> usize {
    rank(rows, n)
}

/// Row rank by fraction-free elimination.
pub(crate) fn rank(rows: &[Vec<BigRational>], n: usize) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut r = 0;
    for c in 0..n {
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let pv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x /= pv.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for c2 in 0..n {
                    let sub = &factor * &m[r][c2];
                    m[i][c2] -= sub;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// One-dimensional nullspace of an (n-1)-row matrix, or None if the rank
/// is not n-1.
fn nullspace_one(rows: &[Vec<BigRational>], n: usize) -> Option<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let pv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x /= pv.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for c2 in 0..n {
                    let sub = &factor * &m[r][c2];
                    m[i][c2] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    if r != n - 1 {
        return None;
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let mut v = vec![BigRational::zero(); n];
    v[free] = BigRational::one();
    for (i, &c) in pivots.iter().enumerate() {
        v[c] = -m[i][free].clone();
    }
    Some(v)
}

fn orient_nonnegative(v: Vec<BigRational>) -> Option<Vec<BigRational>> {
    if v.iter().all(|x| !x.is_negative()) && v.iter().any(|x| x.is_positive()) {
        return Some(v);
    }
    if v.iter().all(|x| !x.is_positive()) && v.iter().any(|x| x.is_negative()) {
        return Some(v.into_iter().map(|x| -x).collect());
    }
    None
}

fn face_dim(on_points: &BTreeSet<ExponentVector>, recession: &BTreeSet<usize>) -> usize {
    let pts: Vec<&ExponentVector> = on_points.iter().collect();
    if pts.is_empty() {
        return 0;
    }
    let n = pts[0].len();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for q in &pts[1..] {
        rows.push(
            (0..n)
                .map(|i| {
                    BigRational::from_integer(BigInt::from(q.0[i]) - BigInt::from(pts[0].0[i]))
                })
                .collect(),
        );
    }
    for &j in recession {
        let mut e = vec![BigRational::zero(); n];
        e[j - 1] = BigRational::one();
        rows.push(e);
    }
    rank(&rows, n)
}

/// All size-k subsets of 0..m in lexicographic order.
pub(crate) fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + m - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
