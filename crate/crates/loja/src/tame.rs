//! Best-effort certificates for the hypotheses the bounds depend on:
//! non-degeneracy of face functions on positive cells and the stronger
//! no-critical-point condition in the invulnerable variables.
//!
//! `Certified` and `Refuted` always carry machine-checkable evidence;
//! anything the sufficient criteria cannot settle stays `Undecided`
//! unless the caller explicitly assumes it.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::diagram::{face_polynomial, CellClass, DualCell};
use crate::newton::rank;
use crate::poly::{GaussianRational, Polynomial};
use crate::rational::{format_rational, ratio};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateStatus {
    Certified,
    Refuted,
    Undecided,
    Assumed,
}

impl CertificateStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CertificateStatus::Certified => "certified",
            CertificateStatus::Refuted => "refuted",
            CertificateStatus::Undecided => "undecided",
            CertificateStatus::Assumed => "assumed",
        }
    }
}

/// Evidence backing a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    /// d f_P / d z_j is a single monomial, hence nonzero on the torus.
    MonomialPartial { j: usize },
    /// The face is a single monomial.
    MonomialFace,
    /// Exponent vectors (projected to the listed variables) are linearly
    /// independent, so the weighted partials cannot vanish together.
    IndependentExponents { vars: Vec<usize> },
    /// Exact torus point where the relevant partials all vanish.
    TorusWitness { point: Vec<String> },
    /// Invulnerable variable set is empty.
    EmptyInvulnerableSet,
    /// Caller supplied --assume-* without a proof.
    UserFlag,
    None,
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::MonomialPartial { j } => write!(f, "monomial partial d/dz{j}"),
            Evidence::MonomialFace => write!(f, "face polynomial is a single monomial"),
            Evidence::IndependentExponents { vars } => {
                write!(f, "linearly independent exponents over z{vars:?}")
            }
            Evidence::TorusWitness { point } => {
                write!(f, "exact torus witness point ({})", point.join(", "))
            }
            Evidence::EmptyInvulnerableSet => write!(f, "invulnerable variable set empty"),
            Evidence::UserFlag => write!(f, "user flag"),
            Evidence::None => write!(f, "no applicable criterion"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub status: CertificateStatus,
    pub evidence: Evidence,
    pub cell: String,
}

impl Certificate {
    fn new(status: CertificateStatus, evidence: Evidence, cell: &DualCell) -> Self {
        Certificate {
            status,
            evidence,
            cell: cell.label(),
        }
    }
}

/// Can the face function have a critical point in the variables `vars`
/// with every coordinate on the torus? Certify "no" by a sufficient
/// criterion, refute with an exact witness, otherwise stay undecided.
fn no_common_zero_certificate(
    fp: &Polynomial,
    vars: &BTreeSet<usize>,
    cell: &DualCell,
) -> Result<Certificate> {
    if vars.is_empty() {
        return Ok(Certificate::new(
            CertificateStatus::Refuted,
            Evidence::EmptyInvulnerableSet,
            cell,
        ));
    }
    if fp.num_terms() == 1 {
        return Ok(Certificate::new(
            CertificateStatus::Certified,
            Evidence::MonomialFace,
            cell,
        ));
    }
    // single-monomial partial: that component never vanishes on the torus
    for &j in vars {
        if fp.partial_derivative(j)?.num_terms() == 1 {
            return Ok(Certificate::new(
                CertificateStatus::Certified,
                Evidence::MonomialPartial { j },
                cell,
            ));
        }
    }
    // independent exponents: sum_nu (nu_j) u_nu = 0 for all j in vars has
    // no solution with all u_nu nonzero when the projected exponent
    // vectors are linearly independent
    let cols: Vec<Vec<BigRational>> = fp
        .support()
        .iter()
        .map(|nu| {
            vars.iter()
                .map(|&j| BigRational::from_integer(BigInt::from(nu.0[j - 1])))
                .collect()
        })
        .collect();
    if rank(&cols, vars.len()) == fp.num_terms() {
        return Ok(Certificate::new(
            CertificateStatus::Certified,
            Evidence::IndependentExponents {
                vars: vars.iter().copied().collect(),
            },
            cell,
        ));
    }
    // refutation search on a small exact grid
    if let Some(witness) = grid_refutation(fp, vars)? {
        return Ok(Certificate::new(
            CertificateStatus::Refuted,
            Evidence::TorusWitness { point: witness },
            cell,
        ));
    }
    Ok(Certificate::new(
        CertificateStatus::Undecided,
        Evidence::None,
        cell,
    ))
}

/// Exact search over {±1, ±2, ±1/2}^Var for a torus point killing every
/// partial over `vars`.
fn grid_refutation(fp: &Polynomial, vars: &BTreeSet<usize>) -> Result<Option<Vec<String>>> {
    let n = fp.n();
    let active: Vec<usize> = fp
        .support()
        .iter()
        .flat_map(|e| e.variables())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if active.len() > 5 {
        return Ok(None); // grid too large to be worth it
    }
    let partials: Vec<Polynomial> = vars
        .iter()
        .map(|&j| fp.partial_derivative(j))
        .collect::<Result<_>>()?;
    let grid = [ratio(1, 1), ratio(-1, 1), ratio(2, 1), ratio(-2, 1), ratio(1, 2), ratio(-1, 2)];
    let mut assignment = vec![0usize; active.len()];
    loop {
        let mut point: Vec<GaussianRational> =
            vec![GaussianRational::from_rational(ratio(1, 1)); n];
        for (slot, &var) in active.iter().enumerate() {
            point[var - 1] = GaussianRational::from_rational(grid[assignment[slot]].clone());
        }
        if partials
            .iter()
            .map(|p| p.eval_gaussian(&point))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .all(GaussianRational::is_zero)
        {
            let witness = point.iter().map(|g| format_rational(&g.re)).collect();
            return Ok(Some(witness));
        }
        // advance odometer
        let mut k = 0;
        loop {
            if k == assignment.len() {
                return Ok(None);
            }
            assignment[k] += 1;
            if assignment[k] < grid.len() {
                break;
            }
            assignment[k] = 0;
            k += 1;
        }
    }
}

/// Certificate that the face function of `cell` has no critical point in
/// the invulnerable variables for fixed torus values of the others.
pub fn inv_tame_certificate(f: &Polynomial, cell: &DualCell) -> Result<Certificate> {
    debug_assert!(cell.class != CellClass::Nonvanishing && cell.face.dim >= 1);
    let fp = face_polynomial(f, &cell.face);
    no_common_zero_certificate(&fp, &cell.var_inv, cell)
}

/// Certificate that the face function of a positive cell has no critical
/// point on the torus.
pub fn nondegeneracy_certificate(f: &Polynomial, cell: &DualCell) -> Result<Certificate> {
    debug_assert_eq!(cell.class, CellClass::Positive);
    let fp = face_polynomial(f, &cell.face);
    no_common_zero_certificate(&fp, &cell.var, cell)
}

/// Check a user-supplied exact point against the invulnerable partials of
/// a cell. A point on the torus killing all of them yields a refutation
/// certificate; anything else yields `None`.
pub fn refute_with_witness(
    f: &Polynomial,
    cell: &DualCell,
    point: &[GaussianRational],
) -> Result<Option<Certificate>> {
    if point.len() != f.n() {
        return Err(crate::error::LojaError::DimensionMismatch {
            expected: f.n(),
            found: point.len(),
        });
    }
    if point.iter().any(GaussianRational::is_zero) {
        return Ok(None);
    }
    let fp = face_polynomial(f, &cell.face);
    for &j in &cell.var_inv {
        let value = fp.partial_derivative(j)?.eval_gaussian(point)?;
        if !value.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(Certificate::new(
        CertificateStatus::Refuted,
        Evidence::TorusWitness {
            point: point.iter().map(|g| g.to_string()).collect(),
        },
        cell,
    )))
}
