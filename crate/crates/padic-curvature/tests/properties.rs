//! Property tests for the algebraic invariants of every module. Random inputs
//! are drawn from the crate's seeded generator so failures shrink to a seed.

use std::sync::Arc;

use proptest::prelude::*;

use padic_curvature::cli::{generate_random_metric, Constraint, ElementLiteral};
use padic_curvature::connections::{
    frobenius_metric_residue, lower, raise, solve_chern_at_point, solve_levi_civita_at_point, solve_levi_civita_digitwise,
    verify_connection, Flavor, Metric, TorsionKind, TorsionSymbol,
};
use padic_curvature::curvature::{curvature_reduced, symmetry_report, tery_rhs, CurvatureIdentity, CurvatureSetup};
use padic_curvature::gauge::{ad_map, gauge_covariance_check, is_phi_invariant, Cocycle, ConnectionSolver, GaugeElement};
use padic_curvature::local_field::{
    matrix, pi_derivation, FieldSpec, GaloisElement, HigherFrobenius, LocalField, PadicElement,
};
use padic_curvature::random::SplitMix64;
use padic_curvature::weil_monoid::{
    graded_component_basis, hochschild_witness, lie_witness, star, symbol_tables, witness_is_sound, FiniteGroup, Labeling,
    WeilMonoid,
};

fn field(p: u64, f: usize, e: usize, nu: u32) -> Arc<LocalField> {
    LocalField::new(FieldSpec::new(p, f, e, nu).unwrap()).unwrap()
}

/// (p, f, e, nu) of the fields the properties range over.
const FIELDS: [(u64, usize, usize, u32); 6] = [(5, 1, 2, 4), (7, 1, 3, 4), (13, 1, 3, 3), (5, 2, 2, 4), (5, 2, 3, 4), (3, 2, 1, 5)];

fn any_field() -> impl Strategy<Value = Arc<LocalField>> {
    (0..FIELDS.len()).prop_map(|i| {
        let (p, f, e, nu) = FIELDS[i];
        field(p, f, e, nu)
    })
}

/// Fields carrying the Galois monoid of all of Gal(E/F), abelian and not.
fn galois_field() -> impl Strategy<Value = Arc<LocalField>> {
    prop_oneof![Just((5, 1, 2)), Just((7, 1, 3)), Just((5, 2, 2)), Just((5, 2, 3))].prop_map(|(p, f, e)| field(p, f, e, 4))
}

fn galois_setup(k: &Arc<LocalField>, seed: u64, flavor: Flavor, kind: TorsionKind) -> CurvatureSetup {
    let sub: Vec<GaloisElement> = (0..k.e()).map(|j| GaloisElement { j }).collect();
    let m = WeilMonoid::galois_realization(k, HigherFrobenius::new(1, 0), &sub).unwrap();
    let lab = Labeling::standard(&m);
    let q = generate_random_metric(k, k.e(), seed, &[Constraint::UnitDiagonal]).unwrap().metric;
    CurvatureSetup::canonical(m, lab, flavor, q, kind, &PadicElement::one(k, k.nu())).unwrap()
}

fn all_small_monoids() -> Vec<WeilMonoid> {
    let mut out = Vec::new();
    for g in FiniteGroup::all_small() {
        for theta in g.automorphisms() {
            out.push(WeilMonoid::from_pair(g.clone(), theta, 1).unwrap());
        }
    }
    out
}

fn small_monoid() -> impl Strategy<Value = WeilMonoid> {
    let all = all_small_monoids();
    (0..all.len()).prop_map(move |i| all[i].clone())
}

fn element(k: &Arc<LocalField>, rng: &mut SplitMix64) -> PadicElement {
    rng.element(k, k.nu(), k.nu())
}

fn unit(k: &Arc<LocalField>, rng: &mut SplitMix64) -> PadicElement {
    loop {
        let x = element(k, rng);
        if x.is_unit() {
            return x;
        }
    }
}

fn gauge(k: &LocalField, n: usize, rng: &mut SplitMix64) -> GaugeElement {
    let perm = rng.permutation(n);
    let diag = (0..n).map(|_| rng.nonzero_residue(k)).collect();
    GaugeElement::new(perm, diag).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms_hold(k in any_field(), seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let (a, b, c) = (element(&k, &mut rng), element(&k, &mut rng), element(&k, &mut rng));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        let u = unit(&k, &mut rng);
        prop_assert_eq!(&u * &u.inv().unwrap(), PadicElement::one(&k, k.nu()));
        prop_assert_eq!(PadicElement::from_digits(&k, &a.digits()), a);
    }

    #[test]
    fn frobenius_lifts_the_power_map(k in any_field(), seed in any::<u64>(), s in 1u32..3, j in 0usize..3) {
        let phi = HigherFrobenius::new(s, j % k.e());
        let a = element(&k, &mut SplitMix64::new(seed));
        prop_assert_eq!(phi.apply(&a).residue(), a.pow(phi.p_power(&k)).residue());
        prop_assert_eq!(phi.apply_inverse(&phi.apply(&a)), a.clone());
        prop_assert_eq!(phi.apply(&phi.apply_inverse(&a)), a);
    }

    #[test]
    fn teichmuller_lifts_are_fixed_by_the_q_power(k in any_field(), seed in any::<u64>()) {
        let r = SplitMix64::new(seed).residue(&k);
        let t = PadicElement::teichmuller(&k, &r, k.nu());
        prop_assert_eq!(t.pow(k.q() as u128), t.clone());
        prop_assert_eq!(t.residue(), r);
    }

    #[test]
    fn pi_derivation_sum_and_product_rules(k in any_field(), seed in any::<u64>(), j in 0usize..3) {
        let phi = HigherFrobenius::new(1, j % k.e());
        let mut rng = SplitMix64::new(seed);
        let (a, b) = (element(&k, &mut rng), element(&k, &mut rng));
        let ps = phi.p_power(&k);
        let d = |x: &PadicElement| pi_derivation(&phi, x).unwrap();
        // delta drops one digit, so compare at the precision it returns
        let prec = d(&a).precision();
        let carry = (&(&a.pow(ps) + &b.pow(ps)) - &(&a + &b).pow(ps)).div_pi().unwrap();
        prop_assert_eq!(d(&(&a + &b)), (&(&d(&a) + &d(&b)) + &carry).truncate(prec));
        let prod = &(&(&a.pow(ps) * &d(&b)) + &(&b.pow(ps) * &d(&a))) + &(&d(&a) * &d(&b)).mul_pi();
        prop_assert_eq!(d(&(&a * &b)), prod.truncate(prec));
    }

    #[test]
    fn derivations_of_pi_satisfy_the_star_relation(k in galois_field(), seed in 0u64..64) {
        // delta_i pi (delta_j pi)^{p^c} - delta_j pi (delta_i pi)^{p^c} = delta_{i*j} pi - delta_{j*i} pi mod pi
        let s = galois_setup(&k, seed, Flavor::LeviCivita, TorsionKind::Zero);
        let (l1, l2) = (s.lifts(1).unwrap(), s.lifts(2).unwrap());
        let pi = PadicElement::pi(&k, k.nu());
        let fq = k.residue_field();
        let d = |phi: &HigherFrobenius| pi_derivation(phi, &pi).unwrap().residue();
        let pc = k.p().pow(s.c()) as u128;
        for i in 0..s.n() {
            for j in 0..s.n() {
                let left = fq.sub(&fq.mul(&d(&l1[i]), &fq.pow(&d(&l1[j]), pc)), &fq.mul(&d(&l1[j]), &fq.pow(&d(&l1[i]), pc)));
                let right = fq.sub(&d(&l2[s.star(i, j)]), &d(&l2[s.star(j, i)]));
                prop_assert_eq!(left, right);
            }
        }
    }

    #[test]
    fn star_is_associative_and_alpha_detects_commutativity(m in small_monoid()) {
        let lab = Labeling::standard(&m);
        let n = m.n();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = star(&m, &lab, star(&m, &lab, i, j, 1, 1), k, 2, 1);
                    let right = star(&m, &lab, i, star(&m, &lab, j, k, 1, 1), 1, 2);
                    prop_assert_eq!(left, right);
                }
            }
        }
        let t = symbol_tables(&m, &lab, 1, 1).unwrap();
        let symmetric = t.alpha.iter().all(|a| (0..n).all(|x| (0..n).all(|y| a[x][y] == a[y][x])));
        prop_assert_eq!(symmetric, m.is_abelian());
        prop_assert!((1..=5).all(|t| lab.is_bijective(&m, t)));
    }

    #[test]
    fn graded_ranks_follow_n_to_the_t_minus_n(m in small_monoid(), t in 1u32..5) {
        let n = m.n();
        prop_assume!(n.pow(t) <= 256);
        let comp = graded_component_basis(&m, &Labeling::standard(&m), t * m.c()).unwrap();
        prop_assert_eq!(comp.rank(), n.pow(t) - n);
    }

    #[test]
    fn witnesses_are_sound(m in small_monoid()) {
        let lab = Labeling::standard(&m);
        for w in [hochschild_witness(&m, &lab), lie_witness(&m, &lab)].into_iter().flatten() {
            prop_assert!(witness_is_sound(&m, &lab, &w));
        }
    }

    #[test]
    fn ad_is_a_homomorphism(m in small_monoid(), t in 1u32..3) {
        let ad = ad_map(&m, &Labeling::standard(&m), t).unwrap();
        prop_assert!(ad.is_homomorphism(&m));
    }

    #[test]
    fn gauge_composition_is_matrix_multiplication(k in any_field(), n in 1usize..5, seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let fq = k.residue_field();
        let (v, w) = (gauge(&k, n, &mut rng), gauge(&k, n, &mut rng));
        let nu = k.nu();
        prop_assert_eq!(v.compose(&w, fq).matrix(&k, nu), matrix::mul(&v.matrix(&k, nu), &w.matrix(&k, nu)));
        prop_assert!(v.compose(&v.inverse(fq), fq).is_identity(fq));
        // the entrywise Frobenius power is multiplicative on gauge elements
        prop_assert_eq!(v.compose(&w, fq).frobenius(fq, 1), v.frobenius(fq, 1).compose(&w.frobenius(fq, 1), fq));
    }

    #[test]
    fn element_literals_round_trip(k in any_field(), seed in any::<u64>(), drop in 0u32..3) {
        let x = element(&k, &mut SplitMix64::new(seed)).truncate(k.nu() - drop);
        let lit = ElementLiteral::from_element(&x);
        let text = serde_json::to_string(&lit).unwrap();
        let back: ElementLiteral = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_element(&k).unwrap(), x);
    }

    #[test]
    fn metric_generation_is_deterministic(k in any_field(), n in 1usize..4, seed in any::<u64>()) {
        let a = generate_random_metric(&k, n, seed, &[Constraint::UnitDiagonal]).unwrap();
        let b = generate_random_metric(&k, n, seed, &[Constraint::UnitDiagonal]).unwrap();
        prop_assert_eq!(&a.metric, &b.metric);
        prop_assert_eq!(a.draws, b.draws);
        prop_assert!(a.metric.has_unit_diagonal());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn solvers_are_exact_and_unique(k in galois_field(), seed in any::<u64>()) {
        let n = k.e();
        let q = generate_random_metric(&k, n, seed, &[]).unwrap().metric;
        let lifts: Vec<HigherFrobenius> = (0..n).map(|j| HigherFrobenius::new(1, j)).collect();
        let a = SplitMix64::new(seed ^ 1).invertible_matrix(&k, n, k.nu());
        let lc = solve_levi_civita_at_point(&q, &TorsionSymbol::Zero, &lifts, &a).unwrap();
        prop_assert!(verify_connection(&q, &TorsionSymbol::Zero, &lc).unwrap());
        let other = solve_levi_civita_digitwise(&q, &TorsionSymbol::Zero, &lifts, &a).unwrap();
        prop_assert_eq!(&other.lambdas, &lc.lambdas);
        let chern = solve_chern_at_point(&q, &lifts, &a).unwrap();
        prop_assert!(verify_connection(&q, &TorsionSymbol::Zero, &chern).unwrap());
    }

    #[test]
    fn lowering_and_raising_are_inverse(k in galois_field(), seed in any::<u64>()) {
        let s = galois_setup(&k, seed, Flavor::LeviCivita, TorsionKind::Additive);
        let fq = k.residue_field();
        let g = s.christoffel(1).unwrap();
        let qp = frobenius_metric_residue(&s.q, 1);
        let qinv = matrix::inverse(&s.q.entries).unwrap();
        let qp_inv: Vec<Vec<_>> = qinv.iter().map(|r| r.iter().map(|x| fq.frobenius_pow(&x.residue(), 1)).collect()).collect();
        prop_assert_eq!(&lower(fq, &g.second, &qp), &g.first);
        prop_assert_eq!(raise(fq, &g.first, &qp_inv), g.second);
    }

    #[test]
    fn solutions_are_gauge_covariant(k in galois_field(), seed in any::<u64>()) {
        let n = k.e();
        let q = generate_random_metric(&k, n, seed, &[]).unwrap().metric;
        let lifts: Vec<HigherFrobenius> = (0..n).map(|j| HigherFrobenius::new(1, j)).collect();
        let mut rng = SplitMix64::new(seed ^ 2);
        let w = gauge(&k, n, &mut rng);
        let a = rng.invertible_matrix(&k, n, k.nu());
        for flavor in [Flavor::LeviCivita, Flavor::Chern] {
            let solver = ConnectionSolver::new(q.clone(), flavor, TorsionSymbol::Zero, lifts.clone());
            prop_assert!(gauge_covariance_check(&solver, &w, &a).unwrap());
        }
    }

    #[test]
    fn curvature_is_antisymmetric_in_its_first_pair(k in galois_field(), seed in 0u64..1000, chern in any::<bool>()) {
        let (flavor, kind) = if chern { (Flavor::Chern, TorsionKind::Zero) } else { (Flavor::LeviCivita, TorsionKind::Multiplicative) };
        let s = galois_setup(&k, seed, flavor, kind);
        let t = curvature_reduced(&s).unwrap();
        prop_assert!(symmetry_report(k.residue_field(), &t.lowered).holds(CurvatureIdentity::AntisymmetryIj));
    }

    #[test]
    fn abelian_curvature_has_the_closed_form(seed in 0u64..1000, which in 0usize..3) {
        let (p, f, e) = [(5, 1, 2), (7, 1, 3), (5, 2, 2)][which];
        let k = field(p, f, e, 4);
        let s = galois_setup(&k, seed, Flavor::LeviCivita, TorsionKind::Additive);
        let t = curvature_reduced(&s).unwrap();
        prop_assert_eq!(&t.lowered, &tery_rhs(&s).unwrap());
        prop_assert!(symmetry_report(k.residue_field(), &t.lowered).is_empty());
    }

    #[test]
    fn phi_invariance_is_a_cohomology_invariant(which in 0usize..2, seed in any::<u64>()) {
        let k = if which == 0 { field(7, 1, 3, 3) } else { field(5, 2, 3, 3) };
        let fq = k.residue_field();
        let mut rng = SplitMix64::new(seed);
        let (a, b) = (rng.nonzero_residue(&k), rng.nonzero_residue(&k));
        let c = fq.inv(&fq.mul(&a, &b)).unwrap();
        // a 3-cycle whose cube is the identity
        let u = GaugeElement::new(vec![1, 2, 0], vec![a, b, c]).unwrap();
        let u = Cocycle::cyclic(&k, GaloisElement { j: 1 }, &u).unwrap();
        let conj = gauge(&k, 3, &mut rng);
        let v = u.conjugate(&conj, fq);
        let lifts: Vec<HigherFrobenius> = (0..3).map(|j| HigherFrobenius::new(1, j)).collect();
        prop_assert_eq!(is_phi_invariant(&u, &lifts, &k).unwrap(), is_phi_invariant(&v, &lifts, &k).unwrap());
    }

    #[test]
    fn metrics_from_scaled_and_permuted_inputs_stay_valid(k in galois_field(), seed in any::<u64>()) {
        let q = generate_random_metric(&k, k.e(), seed, &[]).unwrap().metric;
        let mut rng = SplitMix64::new(seed ^ 3);
        let lam = unit(&k, &mut rng);
        let perm = rng.permutation(k.e());
        prop_assert!(Metric::new(q.scaled(&lam).entries, 1).is_ok());
        let moved = q.permuted(&perm);
        for i in 0..k.e() {
            for j in 0..k.e() {
                prop_assert_eq!(moved.get(i, j), q.get(perm[i], perm[j]));
            }
        }
    }
}
