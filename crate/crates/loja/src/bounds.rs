//! Exponent bounds from the Newton boundary: the convenient axis bound,
//! the facet-vertex/region bound, its monomial-partial refinement, product
//! and power formulas, and the Newton-number cross-check.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::config::Config;
use crate::curve::Curve;
use crate::diagram::{
    build_dual_diagram_with, face_polynomial, theta_prime, CellClass, DualCell, DualDiagram,
};
use crate::error::LojaError;
use crate::newton::{axis_data, facets_with, is_convenient, WeightVector};
use crate::poly::{ExponentVector, Polynomial};
use crate::tame::{inv_tame_certificate, nondegeneracy_certificate, Certificate, CertificateStatus};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Convenient,
    General,
    Refined,
    Product,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::Convenient => "convenient",
            BoundKind::General => "general",
            BoundKind::Refined => "refined",
            BoundKind::Product => "product",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundStatus {
    Certified,
    Conditional,
}

impl BoundStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundStatus::Certified => "certified",
            BoundStatus::Conditional => "conditional",
        }
    }
}

/// Caller-supplied hypothesis flags.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Assumptions {
    pub nondegenerate: bool,
    pub inv_tame: bool,
    pub ci_nondegenerate: bool,
}

/// How a cell contributed to a bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mechanism {
    /// 1 - min normalized component over the invulnerable variables.
    RatioMap,
    /// 1 - max normalized component over monomial-partial indices.
    MonomialPartials(Vec<usize>),
    /// 1 - 1/|nu| for the vertex monomial of a full-dimensional cell.
    Region,
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mechanism::RatioMap => write!(f, "ratio map"),
            Mechanism::MonomialPartials(js) => write!(f, "monomial partials {js:?}"),
            Mechanism::Region => write!(f, "region vertex degree"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CellContribution {
    pub cell: String,
    pub cell_dim: usize,
    pub class: CellClass,
    pub value: BigRational,
    pub mechanism: Mechanism,
    pub certificate: Option<CertificateStatus>,
}

/// Witness data for an attained bound: the axis monomial z_j^B is a
/// non-exceptional maximal axis monomial and the curve z_j = t,
/// z_k = t^N realizes the ratio 1 - 1/B.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualityCertificate {
    pub axis: usize,
    pub axis_exponent: u64,
    pub padding_exponent: u64,
}

impl EqualityCertificate {
    pub fn witness_curve(&self, n: usize) -> Curve {
        let exps: Vec<u64> = (1..=n)
            .map(|j| {
                if j == self.axis {
                    1
                } else {
                    self.padding_exponent
                }
            })
            .collect();
        Curve::unit_monomial(&exps).expect("positive exponents")
    }
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub kind: BoundKind,
    /// B for the convenient bound, the weighted axis sum for products.
    pub axis_bound: Option<BigInt>,
    pub theta_tilde: Option<BigRational>,
    pub region_max: Option<BigRational>,
    pub bound: BigRational,
    pub equality_certificate: Option<EqualityCertificate>,
    pub per_cell: Vec<CellContribution>,
    pub assumptions: Vec<String>,
    pub status: BoundStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialTag {
    Nonexceptional,
    Exceptional,
    Plain,
}

impl MonomialTag {
    pub fn as_str(self) -> &'static str {
        match self {
            MonomialTag::Nonexceptional => "lojasiewicz_nonexceptional",
            MonomialTag::Exceptional => "lojasiewicz_exceptional",
            MonomialTag::Plain => "plain",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisMonomial {
    pub axis: usize,
    pub exponent: u32,
    pub tag: MonomialTag,
    /// Support point z_axis^e * z_k witnessing exceptionality.
    pub witness: Option<ExponentVector>,
}

/// Tag the axis monomials: those with b_j = B are maximal, and a maximal
/// one is exceptional when some z_j^(B') z_k with B' < B - 1 occurs in f.
pub fn exceptional_monomials(f: &Polynomial) -> Result<Vec<AxisMonomial>> {
    let ad = axis_data(f)?;
    let max_b = ad.max_b.ok_or(LojaError::NoAxisMonomial)?;
    let mut out = Vec::new();
    for (j0, b) in ad.b.iter().enumerate() {
        let Some(b) = *b else { continue };
        let j = j0 + 1;
        if b < max_b {
            out.push(AxisMonomial {
                axis: j,
                exponent: b,
                tag: MonomialTag::Plain,
                witness: None,
            });
            continue;
        }
        // witness is a support point z_j^(B') z_k with k != j and
        // B' < B - 1; B' = 0 (the bare z_k) counts when B > 1
        let witness = f
            .terms()
            .map(|(exp, _)| exp)
            .find(|exp| {
                let vars = exp.variables();
                match vars.len() {
                    1 => {
                        let k = *vars.iter().next().unwrap();
                        k != j && exp.0[k - 1] == 1 && max_b > 1
                    }
                    2 if vars.contains(&j) => {
                        let k = *vars.iter().find(|&&v| v != j).unwrap();
                        exp.0[k - 1] == 1 && exp.0[j0] + 1 < max_b
                    }
                    _ => false,
                }
            })
            .cloned();
        out.push(AxisMonomial {
            axis: j,
            exponent: b,
            tag: if witness.is_some() {
                MonomialTag::Exceptional
            } else {
                MonomialTag::Nonexceptional
            },
            witness,
        });
    }
    Ok(out)
}

fn reject_constant_term(f: &Polynomial) -> Result<()> {
    let origin = ExponentVector(vec![0; f.n()]);
    if f.coefficient(&origin).is_some() {
        return Err(LojaError::Domain("f must vanish at the origin".into()));
    }
    Ok(())
}

struct HypothesisSummary {
    status: BoundStatus,
    notes: Vec<String>,
    /// Combined certificate status per cell id.
    per_cell: Vec<Option<CertificateStatus>>,
}

fn combine_status(a: &CertificateStatus, b: &CertificateStatus) -> CertificateStatus {
    use CertificateStatus::*;
    let rank = |s: &CertificateStatus| match s {
        Refuted => 0,
        Undecided => 1,
        Assumed => 2,
        Certified => 3,
    };
    if rank(a) <= rank(b) {
        a.clone()
    } else {
        b.clone()
    }
}

/// Run the certificates the bound hypotheses need: non-degeneracy on
/// positive cells, inv-tameness on positive/vanishing cells of face
/// dimension >= 1, honoring the assumption flags.
fn check_hypotheses(
    f: &Polynomial,
    diagram: &DualDiagram,
    assume: &Assumptions,
) -> Result<HypothesisSummary> {
    let mut per_cell: Vec<Option<CertificateStatus>> = vec![None; diagram.cells.len()];
    let mut notes = Vec::new();
    let mut all_ok = true;
    let record = |cell: &DualCell,
                      cert: Certificate,
                      assumed: bool,
                      what: &str,
                      per_cell: &mut Vec<Option<CertificateStatus>>,
                      notes: &mut Vec<String>,
                      all_ok: &mut bool| {
        let status = match cert.status {
            CertificateStatus::Certified => CertificateStatus::Certified,
            CertificateStatus::Refuted => {
                notes.push(format!(
                    "{what} refuted for cell {}: {}",
                    cell.label(),
                    cert.evidence
                ));
                *all_ok = false;
                CertificateStatus::Refuted
            }
            _ if assumed => CertificateStatus::Assumed,
            other => {
                notes.push(format!("{what} undecided for cell {}", cell.label()));
                *all_ok = false;
                other
            }
        };
        per_cell[cell.id] = Some(match per_cell[cell.id].take() {
            None => status,
            Some(prev) => combine_status(&prev, &status),
        });
    };
    for cell in &diagram.cells {
        if cell.class == CellClass::Positive {
            let cert = nondegeneracy_certificate(f, cell)?;
            record(
                cell,
                cert,
                assume.nondegenerate,
                "non-degeneracy",
                &mut per_cell,
                &mut notes,
                &mut all_ok,
            );
        }
        if cell.in_bound_scope() && cell.face.dim >= 1 {
            let cert = inv_tame_certificate(f, cell)?;
            record(
                cell,
                cert,
                assume.inv_tame,
                "inv-tameness",
                &mut per_cell,
                &mut notes,
                &mut all_ok,
            );
        }
    }
    if assume.nondegenerate {
        notes.push("assumed: non-degeneracy".into());
    }
    if assume.inv_tame {
        notes.push("assumed: inv-tameness".into());
    }
    Ok(HypothesisSummary {
        status: if all_ok {
            BoundStatus::Certified
        } else {
            BoundStatus::Conditional
        },
        notes,
        per_cell,
    })
}

/// Axis bound 1 - 1/B for convenient f, with the witness curve when a
/// non-exceptional maximal axis monomial exists.
pub fn bound_convenient(f: &Polynomial, assume: &Assumptions) -> Result<BoundReport> {
    bound_convenient_with(f, assume, &Config::default())
}

pub fn bound_convenient_with(
    f: &Polynomial,
    assume: &Assumptions,
    cfg: &Config,
) -> Result<BoundReport> {
    reject_constant_term(f)?;
    let missing: Vec<usize> = axis_data(f)?
        .b
        .iter()
        .enumerate()
        .filter(|(_, b)| b.is_none())
        .map(|(i, _)| i + 1)
        .collect();
    if !missing.is_empty() {
        return Err(LojaError::NotConvenient { missing });
    }
    let monomials = exceptional_monomials(f)?;
    let b = monomials
        .iter()
        .map(|m| m.exponent)
        .max()
        .expect("convenient f has axis monomials");
    let bound = BigRational::one()
        - BigRational::new(BigInt::one(), BigInt::from(b));
    let equality = monomials
        .iter()
        .find(|m| m.tag == MonomialTag::Nonexceptional)
        .map(|m| EqualityCertificate {
            axis: m.axis,
            axis_exponent: b as u64,
            padding_exponent: b as u64 + 1,
        });

    let diagram = build_dual_diagram_with(f, cfg)?;
    let mut summary = nondegeneracy_only(f, &diagram, assume)?;
    if equality.is_none() {
        summary
            .notes
            .push("no equality witness: the exponent may be strictly smaller".into());
    }
    Ok(BoundReport {
        kind: BoundKind::Convenient,
        axis_bound: Some(BigInt::from(b)),
        theta_tilde: None,
        region_max: None,
        bound,
        equality_certificate: equality,
        per_cell: Vec::new(),
        assumptions: summary.notes,
        status: summary.status,
    })
}

fn nondegeneracy_only(
    f: &Polynomial,
    diagram: &DualDiagram,
    assume: &Assumptions,
) -> Result<HypothesisSummary> {
    let mut notes = Vec::new();
    let mut all_ok = true;
    let mut per_cell: Vec<Option<CertificateStatus>> = vec![None; diagram.cells.len()];
    for cell in diagram.cells.iter().filter(|c| c.class == CellClass::Positive) {
        let cert = nondegeneracy_certificate(f, cell)?;
        let status = match cert.status {
            CertificateStatus::Certified => CertificateStatus::Certified,
            CertificateStatus::Refuted => {
                notes.push(format!(
                    "non-degeneracy refuted for cell {}: {}",
                    cell.label(),
                    cert.evidence
                ));
                all_ok = false;
                CertificateStatus::Refuted
            }
            _ if assume.nondegenerate => CertificateStatus::Assumed,
            other => {
                notes.push(format!("non-degeneracy undecided for cell {}", cell.label()));
                all_ok = false;
                other
            }
        };
        per_cell[cell.id] = Some(status);
    }
    if assume.nondegenerate {
        notes.push("assumed: non-degeneracy".into());
    }
    Ok(HypothesisSummary {
        status: if all_ok {
            BoundStatus::Certified
        } else {
            BoundStatus::Conditional
        },
        notes,
        per_cell,
    })
}

/// Facet-vertex/region bound max(theta~, L).
pub fn bound_general(f: &Polynomial, assume: &Assumptions) -> Result<BoundReport> {
    bound_general_with(f, assume, &Config::default())
}

pub fn bound_general_with(
    f: &Polynomial,
    assume: &Assumptions,
    cfg: &Config,
) -> Result<BoundReport> {
    reject_constant_term(f)?;
    let diagram = build_dual_diagram_with(f, cfg)?;
    let summary = check_hypotheses(f, &diagram, assume)?;
    let mut per_cell = Vec::new();
    let mut theta_tilde: Option<BigRational> = None;
    for cell in diagram.facet_vertices().filter(|c| c.in_bound_scope()) {
        let value = theta_prime(cell, f)?;
        if theta_tilde.as_ref().is_none_or(|t| &value > t) {
            theta_tilde = Some(value.clone());
        }
        per_cell.push(CellContribution {
            cell: cell.label(),
            cell_dim: cell.cell_dim,
            class: cell.class,
            value,
            mechanism: Mechanism::RatioMap,
            certificate: summary.per_cell[cell.id].clone(),
        });
    }
    let mut region_max: Option<BigRational> = None;
    for cell in diagram.regions() {
        let nu = diagram.region_monomial(cell);
        let value = BigRational::one()
            - BigRational::new(BigInt::one(), BigInt::from(nu.total_degree()));
        if region_max.as_ref().is_none_or(|t| &value > t) {
            region_max = Some(value.clone());
        }
        per_cell.push(CellContribution {
            cell: cell.label(),
            cell_dim: cell.cell_dim,
            class: cell.class,
            value,
            mechanism: Mechanism::Region,
            certificate: summary.per_cell[cell.id].clone(),
        });
    }
    let bound = match (&theta_tilde, &region_max) {
        (Some(t), Some(l)) => t.clone().max(l.clone()),
        (Some(t), None) => t.clone(),
        (None, Some(l)) => l.clone(),
        (None, None) => return Err(LojaError::ZeroPolynomial),
    };
    Ok(BoundReport {
        kind: BoundKind::General,
        axis_bound: None,
        theta_tilde,
        region_max,
        bound,
        equality_certificate: None,
        per_cell,
        assumptions: summary.notes,
        status: summary.status,
    })
}

/// Monomial-partial indices of a cell: invulnerable variables whose face
/// partial is a single monomial and therefore never vanishes on the torus.
fn monomial_partial_set(f: &Polynomial, cell: &DualCell) -> Result<BTreeSet<usize>> {
    let fp = face_polynomial(f, &cell.face);
    let mut out = BTreeSet::new();
    for &j in &cell.var_inv {
        if fp.partial_derivative(j)?.num_terms() == 1 {
            out.insert(j);
        }
    }
    Ok(out)
}

/// Sharpened per-cell contributions: wherever a face partial is a single
/// monomial, the cell contributes 1 - max over those indices of the
/// normalized extreme-ray components (non-vanishing rays excluded since
/// normalized components only grow toward them). Cells of face dimension
/// >= 1 without such a partial fall back to the ratio map on facet
/// > vertices and are otherwise covered by the facet-vertex reduction.
pub fn refine_bound(f: &Polynomial, assume: &Assumptions) -> Result<BoundReport> {
    refine_bound_with(f, assume, &Config::default())
}

pub fn refine_bound_with(
    f: &Polynomial,
    assume: &Assumptions,
    cfg: &Config,
) -> Result<BoundReport> {
    reject_constant_term(f)?;
    let diagram = build_dual_diagram_with(f, cfg)?;
    let summary = check_hypotheses(f, &diagram, assume)?;
    let mut per_cell = Vec::new();
    let mut bound: Option<BigRational> = None;
    let mut push = |contribution: CellContribution, bound: &mut Option<BigRational>| {
        if bound.as_ref().is_none_or(|b| &contribution.value > b) {
            *bound = Some(contribution.value.clone());
        }
        per_cell.push(contribution);
    };
    for cell in diagram.cells.iter().filter(|c| c.in_bound_scope()) {
        if cell.face.dim == 0 {
            let nu = diagram.region_monomial(cell);
            let value = BigRational::one()
                - BigRational::new(BigInt::one(), BigInt::from(nu.total_degree()));
            push(
                CellContribution {
                    cell: cell.label(),
                    cell_dim: cell.cell_dim,
                    class: cell.class,
                    value,
                    mechanism: Mechanism::Region,
                    certificate: summary.per_cell[cell.id].clone(),
                },
                &mut bound,
            );
            continue;
        }
        let monomial_partials = monomial_partial_set(f, cell)?;
        if !monomial_partials.is_empty() {
            let mut best: Option<BigRational> = None;
            for ray in &cell.extreme_rays {
                let w = WeightVector::new(
                    ray.iter()
                        .map(|v| BigRational::from_integer(v.clone()))
                        .collect(),
                );
                let (d, _) = d_of(&w, f)?;
                if d.is_zero() {
                    continue; // non-vanishing ray
                }
                let max_hat = monomial_partials
                    .iter()
                    .map(|&j| &w.entries[j - 1] / &d)
                    .max()
                    .expect("nonempty monomial partial set");
                let value = BigRational::one() - max_hat;
                if best.as_ref().is_none_or(|b| &value > b) {
                    best = Some(value);
                }
            }
            if let Some(value) = best {
                push(
                    CellContribution {
                        cell: cell.label(),
                        cell_dim: cell.cell_dim,
                        class: cell.class,
                        value,
                        mechanism: Mechanism::MonomialPartials(
                            monomial_partials.iter().copied().collect(),
                        ),
                        certificate: summary.per_cell[cell.id].clone(),
                    },
                    &mut bound,
                );
            }
        } else if cell.is_facet_vertex() {
            let value = theta_prime(cell, f)?;
            push(
                CellContribution {
                    cell: cell.label(),
                    cell_dim: cell.cell_dim,
                    class: cell.class,
                    value,
                    mechanism: Mechanism::RatioMap,
                    certificate: summary.per_cell[cell.id].clone(),
                },
                &mut bound,
            );
        }
    }
    let bound = bound.ok_or(LojaError::ZeroPolynomial)?;
    Ok(BoundReport {
        kind: BoundKind::Refined,
        axis_bound: None,
        theta_tilde: None,
        region_max: None,
        bound,
        equality_certificate: None,
        per_cell,
        assumptions: summary.notes,
        status: summary.status,
    })
}

fn d_of(w: &WeightVector, f: &Polynomial) -> Result<(BigRational, ())> {
    let mut min: Option<BigRational> = None;
    for (exp, _) in f.terms() {
        let v = w.pairing(exp);
        if min.as_ref().is_none_or(|m| &v < m) {
            min = Some(v);
        }
    }
    Ok((min.ok_or(LojaError::ZeroPolynomial)?, ()))
}

/// Family f_1^(m_1) ... f_k^(m_k) of convenient members.
#[derive(Debug, Clone)]
pub struct ProductFamily {
    members: Vec<Polynomial>,
    multiplicities: Vec<u32>,
}

impl ProductFamily {
    pub fn new(members: Vec<Polynomial>, multiplicities: Vec<u32>) -> Result<Self> {
        if members.is_empty() {
            return Err(LojaError::Domain("product family must be nonempty".into()));
        }
        if members.len() != multiplicities.len() {
            return Err(LojaError::Domain(
                "one multiplicity per family member required".into(),
            ));
        }
        if multiplicities.contains(&0) {
            return Err(LojaError::Domain("multiplicities must be >= 1".into()));
        }
        let n = members[0].n();
        for f in &members {
            if f.n() != n {
                return Err(LojaError::DimensionMismatch {
                    expected: n,
                    found: f.n(),
                });
            }
            if !is_convenient(f) {
                let missing = axis_data(f)?
                    .b
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| b.is_none())
                    .map(|(i, _)| i + 1)
                    .collect();
                return Err(LojaError::NotConvenient { missing });
            }
        }
        Ok(ProductFamily {
            members,
            multiplicities,
        })
    }

    pub fn members(&self) -> &[Polynomial] {
        &self.members
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    /// Exact expanded product with multiplicities.
    pub fn expand(&self) -> Result<Polynomial> {
        let mut factors = Vec::new();
        for (f, &m) in self.members.iter().zip(&self.multiplicities) {
            factors.push(f.pow(m)?);
        }
        Polynomial::product(&factors)
    }
}

/// Bound 1 - 1/B~ where B~_j sums the member axis exponents with their
/// multiplicities; never expands the product except for the equality scan.
pub fn bound_product(family: &ProductFamily, assume: &Assumptions) -> Result<BoundReport> {
    let n = family.members[0].n();
    let mut btilde_j = vec![BigInt::zero(); n];
    for (f, &m) in family.members.iter().zip(&family.multiplicities) {
        let ad = axis_data(f)?;
        for (j, b) in ad.b.iter().enumerate() {
            let b = b.expect("convenient member has every axis monomial");
            btilde_j[j] += BigInt::from(m) * BigInt::from(b);
        }
    }
    let btilde = btilde_j.iter().max().cloned().expect("n >= 1");
    let bound = BigRational::one() - BigRational::new(BigInt::one(), btilde.clone());

    let expanded = family.expand()?;
    let equality = exceptional_monomials(&expanded)?
        .into_iter()
        .find(|m| m.tag == MonomialTag::Nonexceptional)
        .map(|m| {
            let b: u64 = m.exponent as u64;
            EqualityCertificate {
                axis: m.axis,
                axis_exponent: b,
                padding_exponent: b + 1,
            }
        });

    let mut notes = vec![format!("{} convenient members", family.members.len())];
    let status = if assume.ci_nondegenerate {
        notes.push("assumed: complete-intersection non-degeneracy".into());
        BoundStatus::Certified
    } else if family.members.len() == 1 {
        let d = build_dual_diagram_with(&family.members[0], &Config::default())?;
        let s = nondegeneracy_only(&family.members[0], &d, assume)?;
        notes.extend(s.notes);
        s.status
    } else {
        notes.push(
            "complete-intersection non-degeneracy unverified (pass the assumption flag)".into(),
        );
        BoundStatus::Conditional
    };

    Ok(BoundReport {
        kind: BoundKind::Product,
        axis_bound: Some(btilde),
        theta_tilde: None,
        region_max: None,
        bound,
        equality_certificate: equality,
        per_cell: Vec::new(),
        assumptions: notes,
        status,
    })
}

/// Exponent of f^m from the exponent of f: (m-1)/m + theta0/m.
pub fn power_exponent(theta0: &BigRational, m: u32) -> Result<BigRational> {
    if m == 0 {
        return Err(LojaError::Domain("power must be >= 1".into()));
    }
    if theta0.is_negative() || theta0 >= &BigRational::one() {
        return Err(LojaError::Domain("theta0 must lie in [0, 1)".into()));
    }
    let m = BigRational::from_integer(BigInt::from(m));
    Ok((&m - BigRational::one()) / &m + theta0 / &m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvertDirection {
    EtaToTheta,
    ThetaToEta,
}

/// theta = eta/(1+eta) and back.
pub fn eta_theta_convert(value: &BigRational, direction: ConvertDirection) -> Result<BigRational> {
    match direction {
        ConvertDirection::EtaToTheta => {
            if value.is_negative() {
                return Err(LojaError::Domain("eta must be >= 0".into()));
            }
            Ok(value / (BigRational::one() + value))
        }
        ConvertDirection::ThetaToEta => {
            if value.is_negative() || value >= &BigRational::one() {
                return Err(LojaError::Domain("theta must lie in [0, 1)".into()));
            }
            Ok(value / (BigRational::one() - value))
        }
    }
}

// ---- Newton number ----

/// Stabilization exponents tried for non-convenient input.
const STABILIZATION_BUDGET: [u32; 3] = [25, 32, 64];
const STABILIZATION_STEP: u32 = 7;

/// Newton number of a convenient polynomial, or the stabilized value with
/// z_j^N added on the missing axes.
pub fn milnor_number(f: &Polynomial) -> Result<BigInt> {
    if f.is_zero() {
        return Err(LojaError::ZeroPolynomial);
    }
    if f.n() > 3 {
        return Err(LojaError::GuardExceeded(format!(
            "Newton number computation limited to n <= 3, got n = {}",
            f.n()
        )));
    }
    reject_constant_term(f)?;
    if is_convenient(f) {
        return newton_number(f);
    }
    let missing: Vec<usize> = axis_data(f)?
        .b
        .iter()
        .enumerate()
        .filter(|(_, b)| b.is_none())
        .map(|(i, _)| i + 1)
        .collect();
    for n_exp in STABILIZATION_BUDGET {
        let lo = newton_number(&augment(f, &missing, n_exp)?)?;
        let hi = newton_number(&augment(f, &missing, n_exp + STABILIZATION_STEP)?)?;
        if lo == hi {
            return Ok(lo);
        }
    }
    Err(LojaError::StabilizationFailed)
}

fn augment(f: &Polynomial, missing: &[usize], exponent: u32) -> Result<Polynomial> {
    let mut g = f.clone();
    for &j in missing {
        let mut v = vec![0u32; f.n()];
        v[j - 1] = exponent;
        g = g.add(&Polynomial::monomial(ExponentVector(v)))?;
    }
    Ok(g)
}

/// Alternating-sum Newton number over the coordinate subspaces.
fn newton_number(f: &Polynomial) -> Result<BigInt> {
    let n = f.n();
    let mut total = BigRational::zero();
    for k in (1..=n).rev() {
        for idx in crate::newton::subsets(n, k) {
            let vars: BTreeSet<usize> = idx.iter().map(|&i| i + 1).collect();
            let sub = reindex(&f.restrict(&vars), &vars);
            if sub.is_zero() {
                return Err(LojaError::NotConvenient {
                    missing: vars.into_iter().collect(),
                });
            }
            let v = under_boundary_volume(&sub)?;
            let sign = if (n - k).is_multiple_of(2) { 1 } else { -1 };
            total += BigRational::from_integer(BigInt::from(sign * factorial(k))) * v;
        }
    }
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    total += BigRational::from_integer(BigInt::from(sign));
    if !total.denom().is_one() {
        return Err(LojaError::Domain(
            "Newton number came out non-integral".into(),
        ));
    }
    Ok(total.to_integer())
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

/// Drop the zero coordinates, producing a polynomial in |vars| variables.
fn reindex(f: &Polynomial, vars: &BTreeSet<usize>) -> Polynomial {
    let order: Vec<usize> = vars.iter().copied().collect();
    let terms: Vec<_> = f
        .terms()
        .map(|(exp, c)| {
            let v: Vec<u32> = order.iter().map(|&j| exp.0[j - 1]).collect();
            (ExponentVector(v), c.clone())
        })
        .collect();
    Polynomial::new(order.len(), terms).expect("reindex preserves arity")
}

/// Volume between the origin and the Newton boundary of a convenient
/// polynomial, by exact pyramids over the compact facets.
fn under_boundary_volume(f: &Polynomial) -> Result<BigRational> {
    let n = f.n();
    let facets = facets_with(f, &Config::default())?;
    let mut total = BigRational::zero();
    for fct in &facets {
        if !fct.d.is_positive() {
            continue;
        }
        if !fct.face.recession.is_empty() {
            return Err(LojaError::NotConvenient {
                missing: fct.face.recession.iter().copied().collect(),
            });
        }
        let pts: Vec<&ExponentVector> = fct.face.on_points.iter().collect();
        match n {
            1 => {
                total += BigRational::from_integer(BigInt::from(pts[0].0[0]));
            }
            2 => {
                // cone over a segment: endpoints are the lexicographic
                // extremes of the collinear on-points
                let lo = pts.first().unwrap();
                let hi = pts.last().unwrap();
                let det = BigInt::from(lo.0[0]) * BigInt::from(hi.0[1])
                    - BigInt::from(lo.0[1]) * BigInt::from(hi.0[0]);
                total += BigRational::new(det_abs(det), BigInt::from(2));
            }
            3 => {
                let hull = planar_hull(&pts, &fct.normal);
                let apex = &hull[0];
                for w in hull[1..].windows(2) {
                    let det = det3(apex, w[0], w[1]);
                    total += BigRational::new(det_abs(det), BigInt::from(6));
                }
            }
            _ => {
                return Err(LojaError::GuardExceeded(
                    "volume computation limited to n <= 3".into(),
                ))
            }
        }
    }
    Ok(total)
}

fn det_abs(d: BigInt) -> BigInt {
    if d.is_negative() {
        -d
    } else {
        d
    }
}

fn det3(a: &ExponentVector, b: &ExponentVector, c: &ExponentVector) -> BigInt {
    let g = |v: &ExponentVector, i: usize| BigInt::from(v.0[i]);
    g(a, 0) * (g(b, 1) * g(c, 2) - g(b, 2) * g(c, 1))
        - g(a, 1) * (g(b, 0) * g(c, 2) - g(b, 2) * g(c, 0))
        + g(a, 2) * (g(b, 0) * g(c, 1) - g(b, 1) * g(c, 0))
}

/// Convex hull of coplanar lattice points, in cyclic order. Projects out
/// a coordinate where the facet normal is nonzero (injective on the
/// plane), runs a monotone chain, and maps back.
fn planar_hull<'a>(
    pts: &[&'a ExponentVector],
    normal: &[BigInt],
) -> Vec<&'a ExponentVector> {
    let drop = normal
        .iter()
        .enumerate()
        .max_by_key(|(_, v)| det_abs((*v).clone()))
        .map(|(i, _)| i)
        .unwrap();
    let keep: Vec<usize> = (0..3).filter(|&i| i != drop).collect();
    let proj = |p: &ExponentVector| (BigInt::from(p.0[keep[0]]), BigInt::from(p.0[keep[1]]));
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by_key(|&i| proj(pts[i]));
    order.dedup_by(|a, b| proj(pts[*a]) == proj(pts[*b]));
    if order.len() <= 2 {
        return order.into_iter().map(|i| pts[i]).collect();
    }
    let cross = |o: usize, a: usize, b: usize| -> BigInt {
        let (ox, oy) = proj(pts[o]);
        let (ax, ay) = proj(pts[a]);
        let (bx, by) = proj(pts[b]);
        (&ax - &ox) * (&by - &oy) - (&ay - &oy) * (&bx - &ox)
    };
    let mut lower: Vec<usize> = Vec::new();
    for &i in &order {
        while lower.len() >= 2
            && cross(lower[lower.len() - 2], lower[lower.len() - 1], i) <= BigInt::zero()
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in order.iter().rev() {
        while upper.len() >= 2
            && cross(upper[upper.len() - 2], upper[upper.len() - 1], i) <= BigInt::zero()
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower.into_iter().map(|i| pts[i]).collect()
}
