//! Dual subdivision of the non-negative weight cone.
//!
//! Weight vectors are equivalent when they select the same face of the
//! Newton polyhedron; the equivalence classes form a conical subdivision.
//! Each cell stores a strictly interior representative, its class
//! (positive / vanishing / non-vanishing), the boundary order, and the
//! variable sets feeding the ratio maps.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::LojaError;
use crate::newton::{d_and_face, face_closure, facets_with, Face, Facet, WeightVector};
use crate::poly::{ExponentVector, Polynomial};
use crate::rational::format_rational;
use crate::config::Config;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CellClass {
    Positive,
    Vanishing,
    Nonvanishing,
}

impl CellClass {
    pub fn as_str(self) -> &'static str {
        match self {
            CellClass::Positive => "positive",
            CellClass::Vanishing => "vanishing",
            CellClass::Nonvanishing => "nonvanishing",
        }
    }
}

/// One equivalence class of the dual subdivision.
#[derive(Debug, Clone)]
pub struct DualCell {
    pub id: usize,
    pub face: Face,
    /// Dimension of the weight-cone cell, n - face.dim.
    pub cell_dim: usize,
    /// Primitive integer interior representative (sum of extreme rays).
    pub rep: Vec<BigInt>,
    pub d: BigInt,
    pub class: CellClass,
    /// 1-based zero set I of interior weights.
    pub i_set: BTreeSet<usize>,
    /// Variables occurring in the face polynomial (1-based).
    pub var: BTreeSet<usize>,
    /// I(cell) together with the zero sets of vanishing cells above it.
    pub itilde: BTreeSet<usize>,
    /// Invulnerable variables var \ itilde.
    pub var_inv: BTreeSet<usize>,
    /// Primitive normals of the facets whose face contains this face.
    pub extreme_rays: Vec<Vec<BigInt>>,
}

impl DualCell {
    pub fn rep_weight(&self) -> WeightVector {
        WeightVector::new(
            self.rep
                .iter()
                .map(|v| BigRational::from_integer(v.clone()))
                .collect(),
        )
    }

    /// Normalized interior representative rep / d.
    pub fn normalized_rep(&self) -> Result<Vec<BigRational>> {
        if self.d.is_zero() {
            return Err(LojaError::NotNormalizable);
        }
        let d = BigRational::from_integer(self.d.clone());
        Ok(self
            .rep
            .iter()
            .map(|v| BigRational::from_integer(v.clone()) / &d)
            .collect())
    }

    pub fn label(&self) -> String {
        let entries: Vec<String> = self.rep.iter().map(|v| v.to_string()).collect();
        format!("({})", entries.join(","))
    }

    pub fn is_facet_vertex(&self) -> bool {
        self.cell_dim == 1
    }

    pub fn in_bound_scope(&self) -> bool {
        self.class != CellClass::Nonvanishing
    }
}

/// The full subdivision with its boundary order.
#[derive(Debug, Clone)]
pub struct DualDiagram {
    pub n: usize,
    pub cells: Vec<DualCell>,
    /// Pairs (q, p) with face(q) strictly containing face(p): q is on the
    /// boundary of p's cell.
    pub incidence: Vec<(usize, usize)>,
    pub facets: Vec<Facet>,
}

impl DualDiagram {
    /// Cells on the boundary of `cell` (all q with face(q) ⊋ face(cell)).
    pub fn above(&self, cell: usize) -> impl Iterator<Item = &DualCell> {
        self.incidence
            .iter()
            .filter(move |(_, p)| *p == cell)
            .map(move |(q, _)| &self.cells[*q])
    }

    pub fn count_by_cell_dim(&self, dim: usize) -> usize {
        self.cells.iter().filter(|c| c.cell_dim == dim).count()
    }

    pub fn facet_vertices(&self) -> impl Iterator<Item = &DualCell> {
        self.cells.iter().filter(|c| c.is_facet_vertex())
    }

    /// Full-dimensional cells (vertex faces of the polyhedron).
    pub fn regions(&self) -> impl Iterator<Item = &DualCell> {
        self.cells.iter().filter(|c| c.face.dim == 0)
    }

    pub fn region_monomial<'a>(&self, cell: &'a DualCell) -> &'a ExponentVector {
        cell.face
            .on_points
            .iter()
            .next()
            .expect("region face has exactly one support point")
    }
}

/// Classification of a single weight vector.
pub fn classify_weight(p: &WeightVector, f: &Polynomial) -> Result<CellClass> {
    if !p.is_nonnegative() || p.is_zero() {
        return Err(LojaError::Domain(
            "weight vector must be non-negative and nonzero".into(),
        ));
    }
    if p.is_strictly_positive() {
        return Ok(CellClass::Positive);
    }
    let (d, _) = d_and_face(p, f)?;
    Ok(if d.is_zero() {
        CellClass::Nonvanishing
    } else {
        CellClass::Vanishing
    })
}

/// P / d(P, f), exact; fails when d(P) = 0.
pub fn normalize(p: &WeightVector, f: &Polynomial) -> Result<WeightVector> {
    let (d, _) = d_and_face(p, f)?;
    if d.is_zero() {
        return Err(LojaError::NotNormalizable);
    }
    let mut w = WeightVector::new(p.entries.iter().map(|x| x / &d).collect());
    w.is_normalized = true;
    Ok(w)
}

/// Face polynomial: the terms of f lying on the face.
pub fn face_polynomial(f: &Polynomial, face: &Face) -> Polynomial {
    let terms: Vec<_> = f
        .terms()
        .filter(|(exp, _)| face.on_points.contains(exp))
        .map(|(e, c)| (e.clone(), c.clone()))
        .collect();
    Polynomial::new(f.n(), terms).expect("face terms share n")
}

pub fn build_dual_diagram(f: &Polynomial) -> Result<DualDiagram> {
    build_dual_diagram_with(f, &Config::default())
}

pub fn build_dual_diagram_with(f: &Polynomial, cfg: &Config) -> Result<DualDiagram> {
    let facets = facets_with(f, cfg)?;
    let faces = face_closure(&facets);
    let n = f.n();

    // Assemble cells; ids follow (cell_dim, rep) order for determinism.
    let mut raw: Vec<(Face, Vec<Vec<BigInt>>, Vec<BigInt>)> = Vec::new();
    for face in faces {
        let rays: Vec<Vec<BigInt>> = facets
            .iter()
            .filter(|fct| fct.face.contains(&face))
            .map(|fct| fct.normal.clone())
            .collect();
        let mut sum = vec![BigInt::zero(); n];
        for ray in &rays {
            for (s, v) in sum.iter_mut().zip(ray) {
                *s += v;
            }
        }
        let rep = WeightVector::new(sum.into_iter().map(BigRational::from_integer).collect())
            .primitive();
        raw.push((face, rays, rep));
    }
    raw.sort_by_key(|(face, _, rep)| (n - face.dim, rep.clone()));

    let mut cells: Vec<DualCell> = Vec::with_capacity(raw.len());
    for (id, (face, rays, rep)) in raw.into_iter().enumerate() {
        let w = WeightVector::new(
            rep.iter()
                .map(|v| BigRational::from_integer(v.clone()))
                .collect(),
        );
        let (d, check_face) = d_and_face(&w, f)?;
        debug_assert_eq!(check_face, face, "representative must select its face");
        let i_set = w.zero_set();
        let class = if i_set.is_empty() {
            CellClass::Positive
        } else if d.is_zero() {
            CellClass::Nonvanishing
        } else {
            CellClass::Vanishing
        };
        let var = face_polynomial(f, &face)
            .support()
            .iter()
            .flat_map(|e| e.variables())
            .collect();
        cells.push(DualCell {
            id,
            cell_dim: n - face.dim,
            face,
            rep,
            d: d.to_integer(),
            class,
            i_set,
            var,
            itilde: BTreeSet::new(),
            var_inv: BTreeSet::new(),
            extreme_rays: rays,
        });
    }

    let mut incidence = Vec::new();
    for q in 0..cells.len() {
        for p in 0..cells.len() {
            if q != p
                && cells[q].face.contains(&cells[p].face)
                && cells[q].face != cells[p].face
            {
                incidence.push((q, p));
            }
        }
    }

    // itilde = own zero set plus zero sets of vanishing cells above.
    for p in 0..cells.len() {
        if cells[p].class == CellClass::Nonvanishing {
            continue;
        }
        let mut itilde = cells[p].i_set.clone();
        for &(q, pp) in &incidence {
            if pp == p && cells[q].class == CellClass::Vanishing {
                itilde.extend(cells[q].i_set.iter().copied());
            }
        }
        cells[p].var_inv = cells[p].var.difference(&itilde).copied().collect();
        cells[p].itilde = itilde;
    }

    Ok(DualDiagram {
        n,
        cells,
        incidence,
        facets,
    })
}

/// Variable sets (Var, I, Itilde, Var \ Itilde) of a cell.
pub fn variable_sets(
    cell: &DualCell,
) -> Result<(BTreeSet<usize>, BTreeSet<usize>, BTreeSet<usize>, BTreeSet<usize>)> {
    if cell.class == CellClass::Nonvanishing {
        return Err(LojaError::Domain(
            "variable sets are undefined for non-vanishing cells".into(),
        ));
    }
    Ok((
        cell.var.clone(),
        cell.i_set.clone(),
        cell.itilde.clone(),
        cell.var_inv.clone(),
    ))
}

/// Ratio map value of a cell: 1 - min normalized component over the
/// invulnerable variables, or 1 - 1/|nu| on vertex faces.
pub fn theta_prime(cell: &DualCell, _f: &Polynomial) -> Result<BigRational> {
    if cell.class == CellClass::Nonvanishing {
        return Err(LojaError::Domain(
            "ratio map undefined for non-vanishing cells".into(),
        ));
    }
    if cell.face.dim == 0 {
        let nu = cell
            .face
            .on_points
            .iter()
            .next()
            .expect("vertex face has a point");
        let deg = BigRational::from_integer(BigInt::from(nu.total_degree()));
        return Ok(BigRational::one() - deg.recip());
    }
    if cell.var_inv.is_empty() {
        return Err(LojaError::EmptyInvulnerableSet { cell: cell.label() });
    }
    let hat = cell.normalized_rep()?;
    let min = cell
        .var_inv
        .iter()
        .map(|&j| hat[j - 1].clone())
        .min()
        .expect("nonempty invulnerable set");
    Ok(BigRational::one() - min)
}

// ---- transversal-section picture (n = 3) ----

#[derive(Debug, Clone)]
pub struct PlanPoint {
    pub xy: (BigRational, BigRational),
    pub label: String,
    pub class: CellClass,
    pub theta_prime: Option<BigRational>,
}

#[derive(Debug, Clone)]
pub struct PlanSegment {
    pub endpoints: ((BigRational, BigRational), (BigRational, BigRational)),
    pub label: String,
    pub class: CellClass,
    pub theta_prime: Option<BigRational>,
}

#[derive(Debug, Clone)]
pub struct PlanRegion {
    pub polygon: Vec<(BigRational, BigRational)>,
    pub label: String,
    pub class: CellClass,
    /// Region bound 1 - 1/|nu| of the vertex monomial.
    pub value: BigRational,
}

/// 2-D plan of the diagram cut by the plane sum(nu) = 1.
#[derive(Debug, Clone)]
pub struct SimplexPlan {
    pub points: Vec<PlanPoint>,
    pub segments: Vec<PlanSegment>,
    pub regions: Vec<PlanRegion>,
}

/// Barycentric corners of the picture: z1 right, z2 left, z3 bottom.
fn simplex_xy(ray: &[BigInt]) -> (BigRational, BigRational) {
    let total: BigInt = ray.iter().cloned().sum();
    let t = BigRational::from_integer(total);
    let a = BigRational::from_integer(ray[0].clone()) / &t;
    let b = BigRational::from_integer(ray[1].clone()) / &t;
    let c = BigRational::from_integer(ray[2].clone()) / &t;
    let x = BigRational::from_integer(BigInt::from(1000)) * &a
        + BigRational::from_integer(BigInt::from(500)) * &c;
    let y = BigRational::from_integer(BigInt::from(866)) * (a + b);
    let _ = c;
    (x, y)
}

pub fn export_simplex_projection(diagram: &DualDiagram, f: &Polynomial) -> Result<SimplexPlan> {
    if diagram.n != 3 {
        return Err(LojaError::UnsupportedDimension {
            n: diagram.n,
            need: 3,
        });
    }
    let mut points = Vec::new();
    let mut segments = Vec::new();
    let mut regions = Vec::new();
    for cell in &diagram.cells {
        let tp = if cell.in_bound_scope() && cell.cell_dim == 1 {
            Some(theta_prime(cell, f)?)
        } else {
            None
        };
        match cell.cell_dim {
            1 => points.push(PlanPoint {
                xy: simplex_xy(&cell.rep),
                label: cell.label(),
                class: cell.class,
                theta_prime: tp,
            }),
            2 => {
                debug_assert_eq!(cell.extreme_rays.len(), 2);
                segments.push(PlanSegment {
                    endpoints: (
                        simplex_xy(&cell.extreme_rays[0]),
                        simplex_xy(&cell.extreme_rays[1]),
                    ),
                    label: cell.label(),
                    class: cell.class,
                    theta_prime: None,
                });
            }
            3 => {
                let mut pts: Vec<(BigRational, BigRational)> =
                    cell.extreme_rays.iter().map(|r| simplex_xy(r)).collect();
                sort_polygon(&mut pts);
                let nu = diagram.region_monomial(cell);
                let deg = BigRational::from_integer(BigInt::from(nu.total_degree()));
                regions.push(PlanRegion {
                    polygon: pts,
                    label: cell.label(),
                    class: cell.class,
                    value: BigRational::one() - deg.recip(),
                });
            }
            _ => unreachable!("n = 3 cells have cone dimension 1..=3"),
        }
    }
    Ok(SimplexPlan {
        points,
        segments,
        regions,
    })
}

/// Order polygon vertices counterclockwise around their centroid,
/// starting from the lexicographically smallest, exactly.
fn sort_polygon(pts: &mut Vec<(BigRational, BigRational)>) {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return;
    }
    let m = BigRational::from_integer(BigInt::from(pts.len() as i64));
    let cx: BigRational = pts.iter().map(|p| p.0.clone()).sum::<BigRational>() / &m;
    let cy: BigRational = pts.iter().map(|p| p.1.clone()).sum::<BigRational>() / &m;
    let anchor = pts[0].clone();
    let rest = pts.split_off(1);
    let mut rest = rest;
    let angle_side = |p: &(BigRational, BigRational)| -> (BigRational, BigRational) {
        (&p.0 - &cx, &p.1 - &cy)
    };
    let (ax, ay) = angle_side(&anchor);
    // Compare points by signed angle from the anchor direction.
    rest.sort_by(|p, q| {
        let (px, py) = angle_side(p);
        let (qx, qy) = angle_side(q);
        let half = |x: &BigRational, y: &BigRational| -> i32 {
            // 0 for the anchor half-plane sweep, 1 for the other side
            let cross = &ax * y - &ay * x;
            let dot = &ax * x + &ay * y;
            if cross.is_zero() {
                if dot.is_positive() {
                    0
                } else {
                    1
                }
            } else if cross.is_positive() {
                0
            } else {
                1
            }
        };
        let hp = half(&px, &py);
        let hq = half(&qx, &qy);
        hp.cmp(&hq).then_with(|| {
            let cross = &px * &qy - &py * &qx;
            if cross.is_positive() {
                std::cmp::Ordering::Less
            } else if cross.is_negative() {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        })
    });
    let mut out = vec![anchor];
    out.extend(rest);
    *pts = out;
}

fn xy_json(xy: &(BigRational, BigRational)) -> Value {
    json!([format_rational(&xy.0), format_rational(&xy.1)])
}

impl SimplexPlan {
    pub fn to_json(&self) -> Value {
        json!({
            "points": self.points.iter().map(|p| {
                json!({
                    "xy": xy_json(&p.xy),
                    "label": p.label,
                    "class": p.class.as_str(),
                    "theta_prime": p.theta_prime.as_ref().map(format_rational),
                })
            }).collect::<Vec<_>>(),
            "segments": self.segments.iter().map(|s| {
                json!({
                    "from": xy_json(&s.endpoints.0),
                    "to": xy_json(&s.endpoints.1),
                    "label": s.label,
                    "class": s.class.as_str(),
                })
            }).collect::<Vec<_>>(),
            "regions": self.regions.iter().map(|r| {
                json!({
                    "polygon": r.polygon.iter().map(xy_json).collect::<Vec<_>>(),
                    "label": r.label,
                    "class": r.class.as_str(),
                    "value": format_rational(&r.value),
                })
            }).collect::<Vec<_>>(),
        })
    }
}
