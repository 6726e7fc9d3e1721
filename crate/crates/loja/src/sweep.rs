//! Lower-bound search over monomial curves.
//!
//! Every primitive strictly positive integer exponent tuple up to the
//! budget is probed. Where the leading coefficient groups cannot cancel
//! the order is coefficient-free and computed directly; otherwise the
//! tuple is probed with deterministic pseudo-random Gaussian-rational
//! coefficients. On top of that, each strictly positive facet-vertex
//! weight gets probes with coefficients solved from the two-equation
//! critical system of its face function, which is where the sharp ratios
//! live.


use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::curve::{probe_with, Curve, CurveCoeff, ProbeResult};
use crate::diagram::{build_dual_diagram_with, face_polynomial, CellClass};
use crate::error::LojaError;
use crate::numeric::{complex_root, unit_phase, FixedComplex};
use crate::poly::{GaussianRational, Polynomial};
use crate::rational::ratio;
use crate::Result;

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub result: ProbeResult,
    pub witness: Curve,
    pub weight: Vec<u64>,
}

struct TermList {
    terms: Vec<(Vec<u32>, GaussianRational)>,
}

impl TermList {
    fn of(p: &Polynomial) -> Result<TermList> {
        let mut terms = Vec::with_capacity(p.num_terms());
        for (exp, c) in p.terms() {
            let g = c.as_gaussian().ok_or_else(|| {
                LojaError::Domain("sweep requires exact polynomial coefficients".into())
            })?;
            terms.push((exp.0.clone(), g));
        }
        Ok(TermList { terms })
    }

    fn weights(&self, tuple: &[u64]) -> Vec<u64> {
        self.terms
            .iter()
            .map(|(exp, _)| {
                exp.iter()
                    .zip(tuple)
                    .map(|(&e, &p)| e as u64 * p)
                    .sum::<u64>()
            })
            .collect()
    }
}

fn eval_at(exp: &[u32], point: &[GaussianRational]) -> GaussianRational {
    let mut acc = GaussianRational::one();
    for (j, &e) in exp.iter().enumerate() {
        if e > 0 {
            acc = acc.mul(&point[j].pow(e));
        }
    }
    acc
}

/// Order of the term list along the monomial curve with coefficients
/// `point`: least weight whose group sum is nonzero. Exact.
fn order_along(list: &TermList, weights: &[u64], point: &[GaussianRational]) -> Option<u64> {
    let mut levels: Vec<u64> = weights.to_vec();
    levels.sort_unstable();
    levels.dedup();
    for w in levels {
        let mut sum = GaussianRational::zero();
        for (i, (exp, c)) in list.terms.iter().enumerate() {
            if weights[i] == w {
                sum = sum.add(&c.mul(&eval_at(exp, point)));
            }
        }
        if !sum.is_zero() {
            return Some(w);
        }
    }
    None
}

/// Wide rational range: the samples should witness generic behavior, so
/// algebraic coincidences between draws must be rare. Structured
/// cancellations are the solved vertex probes' job.
fn draw_coefficients(rng: &mut ChaCha8Rng, n: usize) -> Vec<GaussianRational> {
    let part = |rng: &mut ChaCha8Rng| {
        let num = loop {
            let v = rng.gen_range(-99i64..=99);
            if v != 0 {
                break v;
            }
        };
        ratio(num, rng.gen_range(1i64..=16))
    };
    (0..n)
        .map(|_| {
            let re = part(rng);
            let im = if rng.gen_bool(0.5) {
                ratio(0, 1)
            } else {
                part(rng)
            };
            GaussianRational::new(re, im)
        })
        .collect()
}

fn tuple_seed(tuple: &[u64]) -> u64 {
    let mut h = 0x9e3779b97f4a7c15u64;
    for &v in tuple {
        h ^= v.wrapping_mul(0xff51afd7ed558ccd);
        h = h.rotate_left(23).wrapping_mul(0xc4ceb9fe1a85ec53);
    }
    h
}

struct Best {
    theta: BigRational,
    weight: Vec<u64>,
    result: ProbeResult,
    witness: Curve,
}

fn consider(best: &mut Option<Best>, theta: BigRational, weight: Vec<u64>, result: ProbeResult, witness: Curve) {
    let better = match best {
        None => true,
        Some(b) => theta > b.theta || (theta == b.theta && weight < b.weight),
    };
    if better {
        *best = Some(Best {
            theta,
            weight,
            result,
            witness,
        });
    }
}

/// A budget wide enough to reach every strictly positive facet-vertex
/// weight, capped to keep the tuple enumeration affordable.
pub fn suggested_budget(f: &Polynomial, cfg: &Config) -> Result<u64> {
    let diagram = build_dual_diagram_with(f, cfg)?;
    let max_entry = diagram
        .facet_vertices()
        .filter(|c| c.class == CellClass::Positive)
        .flat_map(|c| c.rep.iter())
        .filter_map(|v| v.to_u64())
        .max()
        .unwrap_or(4);
    Ok(max_entry.clamp(4, 80))
}

pub fn sweep_monomial_curves(
    f: &Polynomial,
    exponent_budget: u64,
    coefficient_samples: u32,
) -> Result<Option<SweepResult>> {
    sweep_monomial_curves_with(f, exponent_budget, coefficient_samples, &Config::default())
}

pub fn sweep_monomial_curves_with(
    f: &Polynomial,
    exponent_budget: u64,
    coefficient_samples: u32,
    cfg: &Config,
) -> Result<Option<SweepResult>> {
    if f.is_zero() {
        return Err(LojaError::ZeroPolynomial);
    }
    if exponent_budget == 0 || coefficient_samples == 0 {
        return Err(LojaError::Domain("sweep budgets must be >= 1".into()));
    }
    let n = f.n();
    let f_list = TermList::of(f)?;
    let mut partials = Vec::with_capacity(n);
    for j in 1..=n {
        partials.push(TermList::of(&f.partial_derivative(j)?)?);
    }

    let mut best: Option<Best> = None;
    let mut tuple = vec![1u64; n];
    loop {
        if is_primitive(&tuple) {
            probe_tuple(
                f,
                &f_list,
                &partials,
                &tuple,
                coefficient_samples,
                cfg,
                &mut best,
            )?;
        }
        // advance odometer over [1, budget]^n
        let mut k = 0;
        loop {
            if k == n {
                // done with plain tuples
                solved_vertex_probes(f, exponent_budget, cfg, &mut best)?;
                return Ok(best.map(|b| SweepResult {
                    result: b.result,
                    witness: b.witness,
                    weight: b.weight,
                }));
            }
            tuple[k] += 1;
            if tuple[k] <= exponent_budget {
                break;
            }
            tuple[k] = 1;
            k += 1;
        }
    }
}

fn is_primitive(tuple: &[u64]) -> bool {
    let mut g = 0u64;
    for &v in tuple {
        g = g.gcd(&v);
    }
    g == 1
}

fn probe_tuple(
    f: &Polynomial,
    f_list: &TermList,
    partials: &[TermList],
    tuple: &[u64],
    samples: u32,
    cfg: &Config,
    best: &mut Option<Best>,
) -> Result<()> {
    let fw = f_list.weights(tuple);
    let min_f = *fw.iter().min().expect("nonzero f");
    let f_singleton = fw.iter().filter(|&&w| w == min_f).count() == 1;

    let pw: Vec<Vec<u64>> = partials.iter().map(|p| p.weights(tuple)).collect();
    let grad_min = pw
        .iter()
        .filter_map(|w| w.iter().min())
        .min()
        .copied();
    let Some(grad_min) = grad_min else {
        return Ok(()); // gradient identically zero: constant f, nothing to probe
    };
    // deterministic when f's leading group and some leading gradient group
    // are singletons
    let grad_singleton = pw.iter().any(|w| {
        w.iter().min() == Some(&grad_min) && w.iter().filter(|&&x| x == grad_min).count() == 1
    });

    if f_singleton && grad_singleton {
        let theta = ratio(grad_min as i64, min_f as i64);
        let better = match best {
            None => true,
            Some(b) => theta > b.theta || (theta == b.theta && tuple < b.weight.as_slice()),
        };
        if better {
            // materialize and honestly probe the unit-coefficient witness
            let witness = Curve::unit_monomial(tuple)?;
            let result = probe_with(f, &witness, cfg)?;
            consider(best, result.theta.clone(), tuple.to_vec(), result, witness);
        }
        return Ok(());
    }

    // cancellation is possible: sample exact coefficients
    let mut rng = ChaCha8Rng::seed_from_u64(tuple_seed(tuple));
    for _ in 0..samples {
        let point = draw_coefficients(&mut rng, f.n());
        let Some(ord_f) = order_along(f_list, &fw, &point) else {
            continue; // this draw lies in the zero set
        };
        let ord_grad = partials
            .iter()
            .zip(&pw)
            .filter_map(|(list, w)| order_along(list, w, &point))
            .min();
        let Some(ord_grad) = ord_grad else { continue };
        let theta = ratio(ord_grad as i64, ord_f as i64);
        let better = match best {
            None => true,
            Some(b) => theta > b.theta || (theta == b.theta && tuple < b.weight.as_slice()),
        };
        if better {
            let witness = Curve::monomial(
                point
                    .iter()
                    .map(|g| CurveCoeff::Exact(g.clone()))
                    .collect(),
                tuple
                    .iter()
                    .map(|&p| BigRational::from_integer(BigInt::from(p)))
                    .collect(),
            )?;
            let result = probe_with(f, &witness, cfg)?;
            consider(best, result.theta.clone(), tuple.to_vec(), result, witness);
        }
    }
    Ok(())
}

/// Probes at strictly positive facet-vertex weights with coefficients
/// solved from the two-equation critical system of the face function:
/// kill every face partial except the one with the least normalized
/// component. Only binomial equations are solved (multiplicative 2x2
/// lattice solve with principal roots).
fn solved_vertex_probes(
    f: &Polynomial,
    exponent_budget: u64,
    cfg: &Config,
    best: &mut Option<Best>,
) -> Result<()> {
    if f.n() != 3 {
        return Ok(()); // the 2-equation system needs n - 1 = 2
    }
    let diagram = build_dual_diagram_with(f, cfg)?;
    for cell in diagram
        .facet_vertices()
        .filter(|c| c.class == CellClass::Positive)
    {
        let weight: Vec<u64> = cell
            .rep
            .iter()
            .map(|v| v.to_u64().unwrap_or(u64::MAX))
            .collect();
        if weight.iter().any(|&w| w == 0 || w > exponent_budget) {
            continue;
        }
        let fp = face_polynomial(f, &cell.face);
        let var: Vec<usize> = cell.var.iter().copied().collect();
        let keep = var
            .iter()
            .copied()
            .min_by_key(|&j| cell.rep[j - 1].clone())
            .expect("face has variables");
        let kill: Vec<usize> = var.iter().copied().filter(|&j| j != keep).collect();
        if kill.len() != 2 {
            continue;
        }
        let Some(system) = binomial_system(&fp, &kill)? else {
            continue;
        };
        for point in solve_binomial_system(&system)? {
            let coeffs: Vec<CurveCoeff> = point
                .iter()
                .map(|z| {
                    let (re, im) = z.to_f64();
                    CurveCoeff::Float(re, im)
                })
                .collect();
            let exps: Vec<BigRational> = weight
                .iter()
                .map(|&p| BigRational::from_integer(BigInt::from(p)))
                .collect();
            let witness = match Curve::monomial(coeffs, exps) {
                Ok(c) => c,
                Err(_) => continue,
            };
            let result = match probe_with(f, &witness, cfg) {
                Ok(r) => r,
                Err(_) => continue,
            };
            consider(
                best,
                result.theta.clone(),
                weight.clone(),
                result,
                witness,
            );
        }
    }
    Ok(())
}

/// A pair of binomial equations z^gamma = r.
struct BinomialSystem {
    gammas: [[i64; 3]; 2],
    rhs: [GaussianRational; 2],
}

fn binomial_system(fp: &Polynomial, kill: &[usize]) -> Result<Option<BinomialSystem>> {
    let mut gammas = [[0i64; 3]; 2];
    let mut rhs = [GaussianRational::zero(), GaussianRational::zero()];
    for (row, &j) in kill.iter().enumerate() {
        let pj = fp.partial_derivative(j)?;
        let terms: Vec<_> = pj.terms().collect();
        if terms.len() != 2 {
            return Ok(None);
        }
        let (ea, ca) = &terms[0];
        let (eb, cb) = &terms[1];
        for i in 0..3 {
            gammas[row][i] = ea.0[i] as i64 - eb.0[i] as i64;
        }
        let ca = ca.as_gaussian().expect("exact face coefficients");
        let cb = cb.as_gaussian().expect("exact face coefficients");
        // ca z^ea + cb z^eb = 0  =>  z^(ea - eb) = -cb / ca
        match cb.neg().div(&ca) {
            Some(r) => rhs[row] = r,
            None => return Ok(None),
        }
    }
    Ok(Some(BinomialSystem { gammas, rhs }))
}

/// Solve z^g1 = r1, z^g2 = r2 on the torus by pinning one coordinate to 1
/// and inverting the remaining 2x2 exponent matrix. The det-th roots have
/// det branches each; every branch pair is checked against the system and
/// the verified points (|det| of them) are returned.
fn solve_binomial_system(system: &BinomialSystem) -> Result<Vec<Vec<FixedComplex>>> {
    let g = &system.gammas;
    for pivot in 0..3 {
        let cols: Vec<usize> = (0..3).filter(|&c| c != pivot).collect();
        let (i, j) = (cols[0], cols[1]);
        let det = g[0][i] * g[1][j] - g[0][j] * g[1][i];
        if det == 0 || det.unsigned_abs() > 64 {
            continue;
        }
        let r1 = FixedComplex::from_gaussian(&system.rhs[0]);
        let r2 = FixedComplex::from_gaussian(&system.rhs[1]);
        // z_i^det = r1^( g[1][j]) * r2^(-g[0][j])
        // z_j^det = r1^(-g[1][i]) * r2^( g[0][i])
        let wi = r1.powi_signed(g[1][j])?.mul(&r2.powi_signed(-g[0][j])?);
        let wj = r1.powi_signed(-g[1][i])?.mul(&r2.powi_signed(g[0][i])?);
        let base_i = complex_root(&wi, det)?;
        let base_j = complex_root(&wj, det)?;
        let m = det.unsigned_abs() as i64;
        let turns: Vec<FixedComplex> = (0..m)
            .map(|s| unit_phase(&ratio(s, m)))
            .collect::<Result<_>>()?;
        let mut out = Vec::new();
        for zi_turn in &turns {
            let zi = base_i.mul(zi_turn);
            for zj_turn in &turns {
                let zj = base_j.mul(zj_turn);
                let mut point =
                    vec![FixedComplex::one(), FixedComplex::one(), FixedComplex::one()];
                point[i] = zi.clone();
                point[j] = zj.clone();
                if verify_system(system, &point) {
                    out.push(point);
                }
            }
        }
        if !out.is_empty() {
            return Ok(out);
        }
    }
    Ok(Vec::new())
}

fn verify_system(system: &BinomialSystem, point: &[FixedComplex]) -> bool {
    for row in 0..2 {
        let mut lhs = FixedComplex::one();
        for i in 0..3 {
            let e = system.gammas[row][i];
            match point[i].powi_signed(e) {
                Ok(p) => lhs = lhs.mul(&p),
                Err(_) => return false,
            }
        }
        let rhs = FixedComplex::from_gaussian(&system.rhs[row]);
        let diff = lhs.sub(&rhs);
        let scale = rhs.abs2().max(BigInt::from(1) << crate::numeric::PREC);
        if !crate::numeric::is_relative_zero(&diff.abs2(), &scale, 1e-20) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Exactness;
    use crate::poly::parse_polynomial;

    #[test]
    fn diagonal_sweep() {
        let f = parse_polynomial("z1^2 + z2^2", None).unwrap();
        let s = sweep_monomial_curves(&f, 3, 4).unwrap().unwrap();
        assert_eq!(s.result.theta, ratio(1, 2));
        assert_eq!(s.weight, vec![1, 1]);
    }

    #[test]
    fn f1_sweep_small_budget_hits_generic_curves() {
        let f = parse_polynomial("z1^5*z2^2 + z1^6*z3 + z2^6*z3^2 + z1^3*z3^6", None).unwrap();
        let s = sweep_monomial_curves(&f, 4, 4).unwrap().unwrap();
        // generic region value near (2,1,1): theta = 7/8
        assert_eq!(s.result.theta, ratio(7, 8));
    }

    #[test]
    fn f1_sweep_finds_sharp_vertex_curve() {
        let f = parse_polynomial("z1^5*z2^2 + z1^6*z3 + z2^6*z3^2 + z1^3*z3^6", None).unwrap();
        let s = sweep_monomial_curves(&f, 12, 4).unwrap().unwrap();
        assert_eq!(s.result.theta, ratio(8, 9));
        assert_eq!(s.weight, vec![8, 7, 6]);
        assert_eq!(s.result.ord_grad, crate::rational::int(48));
        assert_eq!(s.result.ord_f, crate::rational::int(54));
        assert!(matches!(s.result.exactness, Exactness::Numeric { .. }));
    }

    #[test]
    fn f1_sweep_at_full_budget() {
        let f = parse_polynomial("z1^5*z2^2 + z1^6*z3 + z2^6*z3^2 + z1^3*z3^6", None).unwrap();
        let s = sweep_monomial_curves(&f, 66, 16).unwrap().unwrap();
        assert_eq!(s.result.theta, ratio(8, 9));
        assert_eq!(s.weight, vec![8, 7, 6]);
    }

    #[test]
    fn f3_sweep_honest_maximum() {
        // The sharp ratio for this boundary is attained at weight (1,1,1)
        // in the region of the vertex (1,1,1): theta = 2/3.
        let f = parse_polynomial("z1^4*z2^2 + z2^4*z3^2 + z3^4*z1^2 + z1*z2*z3", None).unwrap();
        let s = sweep_monomial_curves(&f, 6, 4).unwrap().unwrap();
        assert_eq!(s.result.theta, ratio(2, 3));
        assert_eq!(s.weight, vec![1, 1, 1]);
    }

    #[test]
    fn f4_sweep_finds_t3_vertex() {
        let f = parse_polynomial("z1^9*z2 + z2^10*z3 + z3^11*z1 + z1^2*z2^2*z3^2", None).unwrap();
        let s = sweep_monomial_curves(&f, 70, 2).unwrap().unwrap();
        assert_eq!(s.result.theta, ratio(95, 101));
        assert_eq!(s.weight, vec![70, 19, 12]);
    }

    #[test]
    fn sweep_rejects_zero_budgets() {
        let f = parse_polynomial("z1^2 + z2^2", None).unwrap();
        assert!(sweep_monomial_curves(&f, 0, 1).is_err());
        assert!(sweep_monomial_curves(&f, 1, 0).is_err());
    }
}
