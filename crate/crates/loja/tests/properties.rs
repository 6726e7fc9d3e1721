//! Property tests for the module invariants: canonical-form stability,
//! restriction algebra, support geometry, scaling, facet completeness,
//! segment monotonicity, and the bound orderings.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use loja::bounds::{bound_general, power_exponent, refine_bound, Assumptions};
use loja::curve::{Curve, CurveCoeff};
use loja::diagram::{build_dual_diagram, face_polynomial, normalize, theta_prime, CellClass};
use loja::newton::{d_and_face, facets, WeightVector};
use loja::poly::{parse_polynomial, Coefficient, ExponentVector, GaussianRational, Polynomial};
use loja::rational::{int, ratio};
use loja::sweep::sweep_monomial_curves;

fn assume_all() -> Assumptions {
    Assumptions {
        nondegenerate: true,
        inv_tame: true,
        ci_nondegenerate: true,
    }
}

fn coeff_strategy() -> impl Strategy<Value = Coefficient> {
    (-6i64..=6, 1i64..=4)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| Coefficient::Rational(ratio(n, d)))
}

fn poly_strategy(n: usize, max_terms: usize, max_exp: u32) -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec(
        (proptest::collection::vec(0..=max_exp, n), coeff_strategy()),
        1..=max_terms,
    )
    .prop_map(move |terms| {
        Polynomial::new(
            n,
            terms
                .into_iter()
                .map(|(e, c)| (ExponentVector(e), c)),
        )
        .unwrap()
    })
    .prop_filter("nonzero", |f| !f.is_zero())
}

fn subset_strategy(n: usize) -> impl Strategy<Value = BTreeSet<usize>> {
    proptest::collection::btree_set(1..=n, 0..=n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parse_print_roundtrip(f in poly_strategy(3, 6, 6)) {
        let printed = f.to_text();
        let reparsed = parse_polynomial(&printed, Some(f.n())).unwrap();
        prop_assert_eq!(&reparsed, &f);
        prop_assert_eq!(reparsed.to_text(), printed);
    }

    #[test]
    fn restriction_composes_by_intersection(
        f in poly_strategy(3, 6, 5),
        i in subset_strategy(3),
        j in subset_strategy(3),
    ) {
        let both = f.restrict(&i).restrict(&j);
        let meet: BTreeSet<usize> = i.intersection(&j).copied().collect();
        prop_assert_eq!(both, f.restrict(&meet));
    }

    #[test]
    fn derivative_commutes_with_restriction(
        f in poly_strategy(3, 6, 5),
        i in subset_strategy(3),
    ) {
        for &j in &i {
            let a = f.restrict(&i).partial_derivative(j).unwrap();
            let b = f.partial_derivative(j).unwrap().restrict(&i);
            prop_assert_eq!(a, b, "index {}", j);
        }
    }

    #[test]
    fn product_support_in_minkowski_sum(
        f in poly_strategy(2, 4, 5),
        g in poly_strategy(2, 4, 5),
    ) {
        let p = f.mul(&g).unwrap();
        let sums: BTreeSet<Vec<u32>> = f
            .support()
            .iter()
            .flat_map(|a| {
                g.support()
                    .into_iter()
                    .map(move |b| a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
            })
            .collect();
        for e in p.support() {
            prop_assert!(sums.contains(&e.0));
        }
    }

    #[test]
    fn scaling_preserves_face_and_scales_d(
        f in poly_strategy(3, 6, 6),
        p in proptest::collection::vec(0i64..=9, 3),
        lam_num in 1i64..=9,
        lam_den in 1i64..=9,
    ) {
        prop_assume!(p.iter().any(|&x| x > 0));
        let w = WeightVector::from_integers(&p);
        let lambda = ratio(lam_num, lam_den);
        let scaled = WeightVector::new(w.entries.iter().map(|x| x * &lambda).collect());
        let (d1, face1) = d_and_face(&w, &f).unwrap();
        let (d2, face2) = d_and_face(&scaled, &f).unwrap();
        prop_assert_eq!(d2, d1 * lambda);
        prop_assert_eq!(face1, face2);
    }

    #[test]
    fn sampled_minimizer_pairs_lie_in_a_facet_face(
        f in poly_strategy(3, 8, 6),
        p in proptest::collection::vec(0i64..=7, 3),
    ) {
        prop_assume!(p.iter().any(|&x| x > 0));
        let w = WeightVector::from_integers(&p);
        let (_, face) = d_and_face(&w, &f).unwrap();
        let fs = facets(&f).unwrap();
        let covered = fs.iter().any(|fct| fct.face.contains(&face));
        prop_assert!(covered, "face {:?} not inside any facet", face);
    }

    #[test]
    fn refined_bound_never_exceeds_general(f in poly_strategy(3, 5, 6)) {
        let origin = ExponentVector(vec![0; 3]);
        prop_assume!(f.coefficient(&origin).is_none());
        let a = assume_all();
        let general = bound_general(&f, &a);
        let refined = refine_bound(&f, &a);
        if let (Ok(g), Ok(r)) = (general, refined) {
            prop_assert!(r.bound <= g.bound, "refined {} > general {}", r.bound, g.bound);
        }
    }
}

#[test]
fn generic_products_attain_minkowski_sum() {
    // with generic random rational coefficients no product term cancels
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..40 {
        let mk = |rng: &mut ChaCha8Rng| {
            let k = rng.gen_range(2usize..=4);
            Polynomial::new(
                2,
                (0..k).map(|_| {
                    (
                        ExponentVector(vec![rng.gen_range(0..=4), rng.gen_range(0..=4)]),
                        Coefficient::Rational(ratio(rng.gen_range(1..=97), rng.gen_range(1..=13))),
                    )
                }),
            )
            .unwrap()
        };
        let f = mk(&mut rng);
        let g = mk(&mut rng);
        let p = f.mul(&g).unwrap();
        let sums: BTreeSet<Vec<u32>> = f
            .support()
            .iter()
            .flat_map(|a| {
                g.support()
                    .into_iter()
                    .map(move |b| a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
            })
            .collect();
        let support: BTreeSet<Vec<u32>> = p.support().into_iter().map(|e| e.0).collect();
        assert_eq!(support, sums, "generic product lost a Minkowski point");
    }
}

#[test]
fn segment_components_are_monotone_and_bracketed() {
    for f in corpus() {
        let d = build_dual_diagram(&f).unwrap();
        for &(q, p) in &d.incidence {
            let (cq, cp) = (&d.cells[q], &d.cells[p]);
            if cq.d == BigInt::from(0) || cp.d == BigInt::from(0) {
                continue;
            }
            let ph = normalize(&cp.rep_weight(), &f).unwrap();
            let qh = normalize(&cq.rep_weight(), &f).unwrap();
            for i in 0..f.n() {
                let lo = ph.entries[i].clone().min(qh.entries[i].clone());
                let hi = ph.entries[i].clone().max(qh.entries[i].clone());
                for t in [ratio(1, 4), ratio(1, 2), ratio(3, 4)] {
                    let mix = (int(1) - t.clone()) * &ph.entries[i] + t * &qh.entries[i];
                    assert!(lo <= mix && mix <= hi, "interior value escapes the endpoints");
                }
            }
        }
    }
}

#[test]
fn facet_vertices_satisfy_the_specialized_ratio_form() {
    // On one-dimensional cells the vulnerable set is the zero set itself,
    // and for strictly positive vertices the ratio map minimizes over all
    // face variables.
    for f in corpus() {
        let d = build_dual_diagram(&f).unwrap();
        for cell in d.facet_vertices().filter(|c| c.in_bound_scope()) {
            assert_eq!(cell.itilde, cell.i_set, "{}", cell.label());
            let hat = cell.normalized_rep().unwrap();
            let min_over: BTreeSet<usize> =
                cell.var.difference(&cell.i_set).copied().collect();
            let expected = int(1)
                - min_over
                    .iter()
                    .map(|&j| hat[j - 1].clone())
                    .min()
                    .unwrap();
            assert_eq!(theta_prime(cell, &f).unwrap(), expected, "{}", cell.label());
            if cell.class == CellClass::Positive {
                let full_min = int(1)
                    - cell
                        .var
                        .iter()
                        .map(|&j| hat[j - 1].clone())
                        .min()
                        .unwrap();
                assert_eq!(theta_prime(cell, &f).unwrap(), full_min);
            }
        }
    }
}

#[test]
fn certificates_reverify_against_independent_checks() {
    use loja::newton::rank_of;
    use loja::tame::{inv_tame_certificate, nondegeneracy_certificate, CertificateStatus, Evidence};
    for f in corpus() {
        let d = build_dual_diagram(&f).unwrap();
        for cell in &d.cells {
            let mut certs = Vec::new();
            if cell.class == CellClass::Positive {
                certs.push((nondegeneracy_certificate(&f, cell).unwrap(), cell.var.clone()));
            }
            if cell.in_bound_scope() && cell.face.dim >= 1 {
                certs.push((inv_tame_certificate(&f, cell).unwrap(), cell.var_inv.clone()));
            }
            for (cert, vars) in certs {
                let fp = face_polynomial(&f, &cell.face);
                match (&cert.status, &cert.evidence) {
                    (CertificateStatus::Certified, Evidence::MonomialPartial { j }) => {
                        assert_eq!(fp.partial_derivative(*j).unwrap().num_terms(), 1);
                        assert!(vars.contains(j));
                    }
                    (CertificateStatus::Certified, Evidence::MonomialFace) => {
                        assert_eq!(fp.num_terms(), 1);
                    }
                    (CertificateStatus::Certified, Evidence::IndependentExponents { vars: vs }) => {
                        let cols: Vec<Vec<BigRational>> = fp
                            .support()
                            .iter()
                            .map(|nu| {
                                vs.iter()
                                    .map(|&j| BigRational::from_integer(BigInt::from(nu.0[j - 1])))
                                    .collect()
                            })
                            .collect();
                        assert_eq!(rank_of(&cols, vs.len()), fp.num_terms());
                    }
                    (CertificateStatus::Refuted, Evidence::TorusWitness { point }) => {
                        let pt: Vec<GaussianRational> = point
                            .iter()
                            .map(|s| {
                                GaussianRational::from_rational(
                                    loja::rational::parse_rational(s).unwrap(),
                                )
                            })
                            .collect();
                        assert!(pt.iter().all(|g| !g.is_zero()));
                        for &j in &vars {
                            assert!(fp
                                .partial_derivative(j)
                                .unwrap()
                                .eval_gaussian(&pt)
                                .unwrap()
                                .is_zero());
                        }
                    }
                    (CertificateStatus::Refuted, Evidence::EmptyInvulnerableSet) => {
                        assert!(vars.is_empty());
                    }
                    (CertificateStatus::Undecided, _) => {}
                    (status, evidence) => {
                        panic!("unexpected certificate {status:?} with evidence {evidence}")
                    }
                }
            }
        }
    }
}

#[test]
fn monomial_curve_orders_match_weighted_degrees() {
    // Along a curve a*t^P, a gradient component whose face partial does
    // not vanish at a has order exactly d(P) - p_j.
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let mut checked = 0;
    while checked < 30 {
        let items = corpus();
        let f = &items[rng.gen_range(0..items.len())];
        let p: Vec<u64> = (0..f.n()).map(|_| rng.gen_range(1..=9)).collect();
        let coeffs: Vec<GaussianRational> = (0..f.n())
            .map(|_| GaussianRational::from_rational(ratio(rng.gen_range(1..=23), rng.gen_range(1..=7))))
            .collect();
        let w = WeightVector::new(
            p.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect(),
        );
        let (d, face) = d_and_face(&w, f).unwrap();
        let fp = face_polynomial(f, &face);
        let curve = Curve::monomial(
            coeffs.iter().map(|g| CurveCoeff::Exact(g.clone())).collect(),
            p.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect(),
        )
        .unwrap();
        for j in 1..=f.n() {
            let face_partial = fp.partial_derivative(j).unwrap();
            if face_partial.is_zero() {
                continue;
            }
            if face_partial.eval_gaussian(&coeffs).unwrap().is_zero() {
                continue;
            }
            // order of df/dz_j along the curve, via a probe of that
            // polynomial itself (with a truncation wide enough for the
            // sampled exponents)
            let cfg = loja::config::Config {
                truncation: Some(10_000),
                ..Default::default()
            };
            let dj = f.partial_derivative(j).unwrap();
            let r = loja::curve::probe_with(&dj, &curve, &cfg).unwrap();
            let expected = &d - BigRational::from_integer(BigInt::from(p[j - 1]));
            assert_eq!(r.ord_f, expected, "component {j} of {}", f.to_text());
            checked += 1;
        }
    }
}

#[test]
fn sweep_stays_below_refined_bounds_on_corpus() {
    for f in corpus() {
        let refined = refine_bound(&f, &assume_all()).unwrap().bound;
        let budget = loja::sweep::suggested_budget(&f, &loja::config::Config::default()).unwrap();
        let s = sweep_monomial_curves(&f, budget.min(20), 4)
            .unwrap()
            .expect("sweep finds something");
        assert!(
            s.result.theta <= refined,
            "{}: sweep {} exceeds refined {}",
            f.to_text(),
            s.result.theta,
            refined
        );
    }
}

#[test]
fn probes_stay_below_both_bounds_on_convenient_samples() {
    // the axis bound and the facet-vertex bound are both valid; every
    // probed ratio must sit below their minimum
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let samples = [
        "z1^5 + z1^3*z2 + z2^4 + z3^4",
        "z1^5 + z2^4 + z3^4",
        "z1^3 + z2^3 + z3^3",
        "z1^2 + z2^2",
        "z1^4 + z1*z2^2 + z2^6",
    ];
    for text in samples {
        let f = parse_polynomial(text, None).unwrap();
        let a = assume_all();
        let convenient = loja::bounds::bound_convenient(&f, &a).unwrap().bound;
        let general = bound_general(&f, &a).unwrap().bound;
        let cap = convenient.min(general);
        let cfg = loja::config::Config {
            truncation: Some(4096),
            ..Default::default()
        };
        let mut checked = 0;
        while checked < 25 {
            let curve = random_monomial_curve(&mut rng, f.n());
            let Ok(r) = loja::curve::probe_with(&f, &curve, &cfg) else {
                continue;
            };
            assert!(
                r.theta <= cap,
                "{text}: probe {} above min bound {}",
                r.theta,
                cap
            );
            checked += 1;
        }
    }
}

fn random_monomial_curve(rng: &mut ChaCha8Rng, n: usize) -> Curve {
    Curve::monomial(
        (0..n)
            .map(|_| {
                CurveCoeff::Exact(GaussianRational::from_rational(ratio(
                    rng.gen_range(1..=30),
                    rng.gen_range(1..=9),
                )))
            })
            .collect(),
        (0..n)
            .map(|_| int(rng.gen_range(1i64..=10)))
            .collect(),
    )
    .unwrap()
}

#[test]
fn pullback_bounds_match_the_power_formula() {
    let f1 = parse_polynomial("z1^5*z2^2 + z1^6*z3 + z2^6*z3^2 + z1^3*z3^6", None).unwrap();
    let base = refine_bound(&f1, &Assumptions::default()).unwrap().bound;
    for m in [2u32, 3] {
        let pulled = f1.power_pullback(&[m, m, m]).unwrap();
        let lifted = refine_bound(&pulled, &Assumptions::default()).unwrap().bound;
        assert_eq!(lifted, power_exponent(&base, m).unwrap());
    }
}

fn corpus() -> Vec<Polynomial> {
    [
        "z1^5*z2^2 + z1^6*z3 + z2^6*z3^2 + z1^3*z3^6",
        "z1^3*z2^2 + z2^3*z3^2 + z3^3*z1^2",
        "z1^4*z2^2 + z2^4*z3^2 + z3^4*z1^2 + z1*z2*z3",
        "z1^9*z2 + z2^10*z3 + z3^11*z1",
        "z1^9*z2 + z2^10*z3 + z3^11*z1 + z1^2*z2^2*z3^2",
        "z1^5 + z1^3*z2 + z2^4 + z3^4",
    ]
    .iter()
    .map(|s| parse_polynomial(s, None).unwrap())
    .collect()
}
