use super::*;
use crate::algebra::{pauli_sum, PauliString};
use crate::numerics::random_unitary;
use crate::qsl::evolve_constant;
use crate::DEFAULT_RANK_TOL as TOL;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn pauli(word: &str) -> HermitianOperator {
    word.parse::<PauliString>().unwrap().to_operator()
}

fn cnot() -> UnitaryOperator {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    UnitaryOperator::new(CMatrix::from_row_slice(
        4,
        4,
        &[l, o, o, o, o, l, o, o, o, o, o, l, o, o, l, o],
    ))
    .unwrap()
}

fn assert_close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} != {b} (tol {tol})");
}

#[test]
fn single_operator_never_certifies() {
    let s = CertifyingSet::new(vec![pauli("Z")], vec!["Z".into()], "single-z").unwrap();
    let report = common_commutant_dim(&s, TOL).unwrap();
    assert_eq!(report.dimension, 2);
    assert!(!report.certifies);
}

#[test]
fn canonical_pair_certifies_small_dims() {
    for n in 2..=8 {
        let s = canonical_two_op_set(n).unwrap();
        assert_eq!(s.len(), 2);
        let report = common_commutant_dim(&s, TOL).unwrap();
        assert_eq!(report.dimension, 1, "n={n}");
        assert!(report.certifies);
    }
    assert!(matches!(canonical_two_op_set(1), Err(QslError::Range(_))));
}

#[test]
fn canonical_pair_matches_construction_for_n2() {
    let s = canonical_two_op_set(2).unwrap();
    let d = HermitianOperator::from_real_diagonal(&[-0.5, 0.5]).unwrap();
    assert!((s.operators()[0].matrix() - d.matrix()).camax() < 1e-12);
    assert!((s.operators()[1].matrix() - pauli("X").matrix()).camax() < 1e-12);
}

#[test]
fn full_pauli_basis_certifies() {
    let s = pauli_certifier_set(2).unwrap();
    assert_eq!(s.len(), 15);
    assert!(common_commutant_dim(&s, TOL).unwrap().certifies);
}

#[test]
fn pq_sets_certify_and_p_only_needs_three_levels() {
    // n = 2: the pair {P, Q} certifies, P alone does not
    let x = UnitaryOperator::new(pauli("X").matrix().clone()).unwrap();
    let s = pq_certifier_set(&x).unwrap();
    assert_eq!(s.len(), 2);
    assert!(common_commutant_dim(&s, TOL).unwrap().certifies);
    let p_only = s.p_subset().unwrap();
    assert_eq!(p_only.len(), 1);
    assert!(!common_commutant_dim(&p_only, TOL).unwrap().certifies);

    // n = 3 (canonical diagonal gate): P-only subset certifies
    let g3 = UnitaryOperator::new(CMatrix::from_diagonal(
        &nalgebra::DVector::from_vec(vec![
            Complex64::from_polar(1.0, 0.3),
            Complex64::from_polar(1.0, 1.1),
            Complex64::from_polar(1.0, -0.9),
        ]),
    ))
    .unwrap();
    let s3 = pq_certifier_set(&g3).unwrap();
    assert_eq!(s3.len(), 6);
    assert!(common_commutant_dim(&s3, TOL).unwrap().certifies);
    let p3 = s3.p_subset().unwrap();
    assert_eq!(p3.len(), 3);
    assert!(common_commutant_dim(&p3, TOL).unwrap().certifies);

    // n = 4 via CNOT
    let s4 = pq_certifier_set(&cnot()).unwrap();
    assert_eq!(s4.len(), 12);
    assert!(common_commutant_dim(&s4, TOL).unwrap().certifies);
    assert!(common_commutant_dim(&s4.p_subset().unwrap(), TOL).unwrap().certifies);
}

#[test]
fn pq_operators_are_unit_norm_and_rotate_into_each_other() {
    let g = cnot();
    let s = pq_certifier_set(&g).unwrap();
    let e = eigenphases(&g).unwrap();
    for ((o, kind), label) in s.operators().iter().zip(s.kinds()).zip(s.labels()) {
        assert_close(hs_norm(o), 1.0, 1e-10);
        if let CertifierKind::EigenP { j, k } = kind {
            // G^dag P G = cos(dphi) P + sin(dphi) Q
            let q = s
                .labels()
                .iter()
                .position(|l| l == &format!("Q_{j}_{k}"))
                .unwrap();
            let dphi = e.phases()[*j] - e.phases()[*k];
            let image = g.ad(o).unwrap();
            let expected = &o.scale(dphi.cos()) + &s.operators()[q].scale(dphi.sin());
            assert!(
                (image.matrix() - expected.matrix()).camax() < 1e-9,
                "conjugation identity failed for {label}"
            );
        }
    }
}

#[test]
fn endpoint_angle_examples() {
    let g = cnot();
    assert_close(endpoint_angle(&pauli("ZZ"), &g).unwrap(), PI / 2.0, 1e-12);
    assert_close(endpoint_angle(&pauli("IX"), &g).unwrap(), 0.0, 1e-6);
    // P_jk endpoint angle is |phi_j - phi_k| reduced to [0, pi]
    let s = pq_certifier_set(&g).unwrap();
    let e = eigenphases(&g).unwrap();
    for (o, kind) in s.operators().iter().zip(s.kinds()) {
        if let CertifierKind::EigenP { j, k } = kind {
            let dphi = (e.phases()[*j] - e.phases()[*k]).abs();
            let reduced = dphi.cos().clamp(-1.0, 1.0).acos();
            // arccos loses half the digits near +-1, hence the looser tol
            assert_close(endpoint_angle(o, &g).unwrap(), reduced, 1e-7);
        }
    }
    // non-unit-norm observables are rejected
    assert!(matches!(
        endpoint_angle(&pauli("ZZ").scale(2.0), &g),
        Err(QslError::NotUnitNorm { .. })
    ));
}

#[test]
fn bottleneck_report_cnot_eigen_set_is_exact() {
    let g = cnot();
    let s = pq_certifier_set(&g).unwrap();
    let report = bottleneck_report(&g, &s, 1.0, "CNOT", TOL).unwrap();
    assert!(report.set_certifies);
    assert_close(report.t_lower, PI, 1e-9);
    assert_close(report.t_star, PI, 1e-12);
    assert_eq!(report.eta_lower, Some(1.0));
    for e in &report.entries {
        assert!(e.exact);
        assert!(e.closure_dim <= 2);
        assert!(e.t_bound <= report.t_star + 1e-9);
    }
}

#[test]
fn bottleneck_report_cnot_pauli_set_underestimates() {
    let g = cnot();
    let s = pauli_certifier_set(2).unwrap();
    let report = bottleneck_report(&g, &s, 1.0, "CNOT", TOL).unwrap();
    assert_close(report.t_lower, PI / 2.0, 1e-9);
    assert_close(report.eta_lower.unwrap(), 2.0, 1e-9);
    assert!(report.bottleneck.contains(&"ZZ".to_string()));
    let zz = report
        .entries
        .iter()
        .find(|e| e.observable == "ZZ")
        .unwrap();
    assert_close(zz.theta, PI / 2.0, 1e-12);
    assert_eq!(zz.closure_dim, 3);
    assert!(!zz.exact);
}

#[test]
fn bottleneck_report_identity_gate() {
    let g = UnitaryOperator::identity(4).unwrap();
    let s = pq_certifier_set(&g).unwrap();
    let report = bottleneck_report(&g, &s, 1.0, "I", TOL).unwrap();
    assert_eq!(report.t_lower, 0.0);
    assert_eq!(report.t_star, 0.0);
    assert_eq!(report.eta_lower, Some(1.0));
}

#[test]
fn planarity_diagnostic_flags_cnot_pauli_overhead() {
    let g = cnot();
    let s = pauli_certifier_set(2).unwrap();
    let d = planarity_diagnostic(&g, &s, 1.0, "CNOT", TOL).unwrap();
    assert!(d.overhead_flagged);
    assert_eq!(d.max_bottleneck_closure, 3);
    assert!(d.report.eta_lower.unwrap() > 1.0);

    // U_ZX admits a planar bottleneck: no overhead
    let uzx = evolve_constant(&pauli("ZX").scale(0.5), PI / 2.0).unwrap();
    let d = planarity_diagnostic(&uzx, &pauli_certifier_set(2).unwrap(), 1.0, "U_ZX", TOL).unwrap();
    assert!(!d.overhead_flagged);
    assert_close(d.report.eta_lower.unwrap(), 1.0, 1e-9);
    assert!(d.max_bottleneck_closure <= 2);
}

#[test]
fn planarity_diagnostic_toffoli_bottleneck_is_a_helix() {
    let mut toffoli = CMatrix::identity(8, 8);
    toffoli[(6, 6)] = Complex64::new(0.0, 0.0);
    toffoli[(7, 7)] = Complex64::new(0.0, 0.0);
    toffoli[(6, 7)] = Complex64::new(1.0, 0.0);
    toffoli[(7, 6)] = Complex64::new(1.0, 0.0);
    let g = UnitaryOperator::new(toffoli).unwrap();
    let d = planarity_diagnostic(&g, &pauli_certifier_set(3).unwrap(), 1.0, "Toffoli", TOL).unwrap();
    assert_eq!(d.max_bottleneck_closure, 3);
    assert!(d.report.eta_lower.unwrap() > 1.0);
    assert!(d.report.t_lower <= d.report.t_star + 1e-9);
}

#[test]
fn certification_soundness_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(57);
    let mut distinguished = 0usize;
    for trial in 0..100 {
        let n = [2usize, 3, 4][trial % 3];
        let u = UnitaryOperator::new(random_unitary(&mut rng, n)).unwrap();
        let v = UnitaryOperator::new(random_unitary(&mut rng, n)).unwrap();
        let s = canonical_two_op_set(n).unwrap();
        let separation = s
            .operators()
            .iter()
            .map(|o| {
                let a = u.ad(o).unwrap();
                let b = v.ad(o).unwrap();
                hs_norm(&(&a - &b))
            })
            .fold(0.0f64, f64::max);
        if separation > 1e-6 {
            distinguished += 1;
        }
        // a pure global phase is invisible to every certifier
        let omega = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        let w = UnitaryOperator::new(u.matrix() * omega).unwrap();
        for o in s.operators() {
            let a = u.ad(o).unwrap();
            let b = w.ad(o).unwrap();
            assert!(hs_norm(&(&a - &b)) < 1e-10);
        }
    }
    assert_eq!(distinguished, 100, "random unitary pairs must be separated");
}

#[test]
fn adding_operators_never_decreases_t_lower() {
    let g = cnot();
    let full = pauli_certifier_set(2).unwrap();
    let mut t_prev = 0.0;
    for take in [3usize, 7, 11, 15] {
        let ops = full.operators()[..take].to_vec();
        let labels = full.labels()[..take].to_vec();
        let s = CertifyingSet::new(ops, labels, format!("pauli-{take}")).unwrap();
        let report = bottleneck_report(&g, &s, 1.0, "CNOT", TOL).unwrap();
        assert!(report.t_lower >= t_prev - 1e-12);
        t_prev = report.t_lower;
    }
}

#[test]
fn certifier_bounds_never_exceed_t_star() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for _ in 0..10 {
        let g = UnitaryOperator::new(random_unitary(&mut rng, 4)).unwrap();
        for s in [
            pq_certifier_set(&g).unwrap(),
            pauli_certifier_set(2).unwrap(),
            canonical_two_op_set(4).unwrap(),
        ] {
            let report = bottleneck_report(&g, &s, 1.0, "random", TOL).unwrap();
            assert!(
                report.t_lower <= report.t_star + 1e-9,
                "lower bound {} above T* {}",
                report.t_lower,
                report.t_star
            );
        }
    }
}

#[test]
fn non_traceless_operators_are_rejected() {
    let eye = HermitianOperator::from_real_diagonal(&[1.0, 1.0]).unwrap();
    assert!(matches!(
        CertifyingSet::new(vec![eye], vec!["I".into()], "bad"),
        Err(QslError::NotTraceless { .. })
    ));
}

#[test]
fn report_serializes_to_schema_fields() {
    let g = cnot();
    let s = pauli_certifier_set(2).unwrap();
    let report = bottleneck_report(&g, &s, 1.0, "CNOT", TOL).unwrap();
    let js = serde_json::to_value(&report).unwrap();
    assert_eq!(js["gate"], "CNOT");
    assert_eq!(js["certifier_set"], "pauli-all");
    let first = &js["entries"][0];
    for key in ["observable", "theta", "t2d", "closure_dim", "exact"] {
        assert!(first.get(key).is_some(), "missing key {key}");
    }
    assert!(js.get("t_lower").is_some());
    assert!(js.get("eta_lower").is_some());
}

#[test]
fn pauli_sum_mixture_certifier_bound_is_scale_invariant() {
    // bottleneck_report normalizes internally, so scaled operators give the
    // same bound
    let g = cnot();
    let o = pauli_sum(&[(2.0, "ZZ")]).unwrap();
    let s = CertifyingSet::new(vec![o], vec!["2ZZ".into()], "scaled").unwrap();
    let report = bottleneck_report(&g, &s, 1.0, "CNOT", TOL).unwrap();
    assert_close(report.t_lower, PI / 2.0, 1e-12);
    assert!(!report.set_certifies);
}
