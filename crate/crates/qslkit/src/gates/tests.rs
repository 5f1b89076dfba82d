use super::*;
use crate::algebra::{enumerate_pauli_words, hs_inner, pauli_basis};
use crate::geometry::{adjoint_generator, plane_decomposition};
use crate::numerics::real_rank;
use crate::qsl::optimal_generator;
use crate::DEFAULT_RANK_TOL as TOL;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn assert_close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} != {b} (tol {tol})");
}

#[test]
fn registry_contains_all_reference_gates() {
    let names = gate_names();
    for expected in [
        "X", "Hadamard", "U_H", "U_ZX", "CNOT", "CZ", "SWAP", "iSWAP", "U_4d", "U_GHZ", "U_W",
        "Toffoli", "CCZ",
    ] {
        assert!(names.contains(&expected), "missing {expected}");
    }
    assert!(standard_gate("cnot").is_ok());
    assert!(standard_gate("CCNOT").is_ok());
    assert!(matches!(standard_gate("Fredkin"), Err(QslError::NotFound(_))));
}

#[test]
fn registry_gates_reproduce_expected_speed_limits() {
    for gate in all_gates() {
        let expected = gate.expected.as_ref().unwrap();
        let spread = minimal_spread(&eigenphases(&gate.unitary).unwrap(), 1.0).unwrap();
        assert_close(spread.delta_phi_star, expected.delta_phi_star, 1e-9);
    }
}

#[test]
fn projector_generators_reproduce_each_gate() {
    for gate in all_gates() {
        let og = optimal_generator(&gate.unitary, 1.0).unwrap();
        assert_close(spectral_width(&og.h_star).unwrap(), 1.0, 1e-9);
        let u = evolve_constant(&og.h_star, og.t_star).unwrap();
        let f = u.fidelity(&gate.unitary).unwrap();
        assert!(f >= 1.0 - 1e-9, "{}: fidelity {f}", gate.name);
    }
}

#[test]
fn diagonal_generators_reproduce_frame_gates() {
    for gate in all_gates() {
        let factor = diagonal_width_factor(&gate.name).unwrap();
        let omega = 1.0;
        let h = optimal_diagonal_generator(&gate.name, omega).unwrap();
        assert_close(spectral_width(&h).unwrap(), factor * omega, 1e-9);

        let expected = gate.expected.as_ref().unwrap();
        let t_star = expected.delta_phi_star / (factor * omega);
        let u = evolve_constant(&h, t_star).unwrap();
        let frame = diagonal_frame_gate(&gate.name).unwrap();
        let f = u.fidelity(&frame).unwrap();
        assert!(f >= 1.0 - 1e-9, "{}: frame fidelity {f}", gate.name);
    }
}

#[test]
fn diagonal_generator_examples() {
    // CZ at Omega = 1: width 2, exp(-i pi/2 H) = CZ up to phase
    let h = optimal_diagonal_generator("CZ", 1.0).unwrap();
    assert_close(spectral_width(&h).unwrap(), 2.0, 1e-12);
    let u = evolve_constant(&h, PI / 2.0).unwrap();
    let cz = standard_gate("CZ").unwrap().unitary;
    assert!(u.fidelity(&cz).unwrap() >= 1.0 - 1e-12);

    let h = optimal_diagonal_generator("U_ZX", 1.0).unwrap();
    assert_close(spectral_width(&h).unwrap(), 1.0, 1e-12);

    let h = optimal_diagonal_generator("CCZ", 1.0).unwrap();
    assert_close(spectral_width(&h).unwrap(), 4.0, 1e-12);
}

#[test]
fn saturating_generator_has_unit_width() {
    for gate in all_gates() {
        let h = saturating_generator(&gate.name, 1.0).unwrap();
        assert_close(spectral_width(&h).unwrap(), 1.0, 1e-9);
    }
}

#[test]
fn lambda_closure_examples() {
    assert_eq!(lambda_closure(0.0, 0.0, 1.0).unwrap(), 2);
    assert_eq!(lambda_closure(-1.0, -1.0, 1.0).unwrap(), 3);
    assert_eq!(lambda_closure(2.0, 1.0, 0.0).unwrap(), 4);
    assert!(matches!(
        lambda_closure(0.0, 0.0, 0.0),
        Err(QslError::Degenerate(_))
    ));
}

fn brute_force_pauli_closure(a1: f64, a2: f64, a3: f64) -> usize {
    let h = DiagonalTwoQubitGenerator { a1, a2, a3 }.materialize();
    enumerate_pauli_words(2)
        .into_iter()
        .filter(|w| !w.is_diagonal())
        .map(|w| frenet_frame(&h, &w.to_operator(), TOL).unwrap().closure_dim)
        .max()
        .unwrap()
}

#[test]
fn lambda_closure_matches_frenet_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let grid = [-2.0, -1.5, -1.0, -0.5, 0.5, 1.0, 1.5, 2.0];
    let mut cases: Vec<(f64, f64, f64)> = vec![
        (0.0, 0.0, 1.0),
        (-1.0, -1.0, 1.0),
        (2.0, 1.0, 0.0),
        (1.0, 1.0, 1.0),
        (1.0, -1.0, 0.0),
        (0.5, 0.0, 0.0),
        (0.0, 0.3, -0.3),
    ];
    for _ in 0..50 {
        let pick = |rng: &mut ChaCha8Rng| {
            if rng.gen_bool(0.25) {
                0.0
            } else {
                grid[rng.gen_range(0..grid.len())]
            }
        };
        let triple = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        if triple.0 != 0.0 || triple.1 != 0.0 || triple.2 != 0.0 {
            cases.push(triple);
        }
    }
    for (a1, a2, a3) in cases {
        let fast = lambda_closure(a1, a2, a3).unwrap();
        let slow = brute_force_pauli_closure(a1, a2, a3);
        assert_eq!(fast, slow, "mismatch at ({a1}, {a2}, {a3})");
    }
}

#[test]
fn three_qubit_blocks_ghz_generator() {
    // (Omega/2) ZII with Omega = 1: every block touching qubit 1 rotates at
    // 1, the rest are frozen
    let report = three_qubit_blocks(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    assert_eq!(report.blocks.len(), 7);
    for block in &report.blocks {
        let expected = if block.support.contains(&0) { 1.0 } else { 0.0 };
        for (_, f) in &block.frequencies {
            assert_close(*f, expected, 1e-12);
        }
    }
}

#[test]
fn three_qubit_blocks_ccz_generator() {
    // H*_CCZ coefficients: one active plane per block at |4 Omega|
    let a = [-1.0, -1.0, -1.0, 1.0, 1.0, 1.0, -1.0];
    let report = three_qubit_blocks(&a);
    for block in &report.blocks {
        let mut magnitudes: Vec<f64> = block.frequencies.iter().map(|(_, f)| f.abs()).collect();
        magnitudes.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert_close(magnitudes[0], 0.0, 1e-12);
        assert_close(magnitudes[1], 0.0, 1e-12);
        assert_close(magnitudes[2], 0.0, 1e-12);
        assert_close(magnitudes[3], 4.0, 1e-12);
    }
    // the B{3} block's active plane is the (-,-) one
    let b3 = &report.blocks[2];
    let active = b3.frequencies.iter().find(|(_, f)| f.abs() > 1.0).unwrap();
    assert_eq!(active.0, (-1, -1));

    let zero = three_qubit_blocks(&[0.0; 7]);
    for f in zero.all_frequencies() {
        assert_close(f, 0.0, 0.0);
    }
}

#[test]
fn three_qubit_block_frequencies_match_plane_decomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let basis = pauli_basis(3).unwrap();
    for trial in 0..6 {
        let a: [f64; 7] = if trial == 0 {
            [-1.0, -1.0, -1.0, 1.0, 1.0, 1.0, -1.0]
        } else {
            let mut v = [0.0; 7];
            for x in &mut v {
                *x = (rng.gen_range(-4i32..=4) as f64) * 0.5;
            }
            if v.iter().all(|&x| x == 0.0) {
                v[0] = 1.0;
            }
            v
        };
        let terms: Vec<(f64, &str)> = [
            "ZII", "IZI", "IIZ", "ZZI", "ZIZ", "IZZ", "ZZZ",
        ]
        .iter()
        .enumerate()
        .map(|(i, w)| (0.5 * a[i], *w))
        .collect();
        let h = pauli_sum(&terms).unwrap();
        let mut predicted: Vec<f64> = three_qubit_blocks(&a)
            .all_frequencies()
            .into_iter()
            .map(f64::abs)
            .filter(|f| *f > 1e-9)
            .collect();
        predicted.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let dec = plane_decomposition(&adjoint_generator(&h, &basis).unwrap(), TOL).unwrap();
        let mut observed = dec.curvatures();
        observed.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert_eq!(predicted.len(), observed.len(), "plane count at {a:?}");
        for (p, o) in predicted.iter().zip(&observed) {
            assert_close(*p, *o, 1e-9);
        }
    }
}

#[test]
fn plane_certifiers_rotate_at_the_full_width() {
    for gate in all_gates() {
        let pairs = bottleneck_plane_certifiers(&gate.name).unwrap();
        let h = optimal_diagonal_generator(&gate.name, 1.0).unwrap();
        let factor = diagonal_width_factor(&gate.name).unwrap();
        for pair in &pairs {
            assert_close(hs_norm(&pair.a), 1.0, 1e-10);
            assert_close(hs_norm(&pair.b), 1.0, 1e-10);
            assert_close(hs_inner(&pair.a, &pair.b).unwrap(), 0.0, 1e-10);
            assert_close(pair.rate, factor, 1e-12);
            assert_close(pair.rate, spectral_width(&h).unwrap(), 1e-9);
            // tangent identity at 32 sample times
            let t_star = gate.expected.as_ref().unwrap().delta_phi_star / factor;
            for i in 0..32 {
                let t = (i as f64 + 0.5) / 32.0 * t_star;
                let u = evolve_constant(&h, t).unwrap();
                let image = u.ad(&pair.a).unwrap();
                let expected =
                    &pair.a.scale((pair.rate * t).cos()) + &pair.b.scale((pair.rate * t).sin());
                assert!(
                    (image.matrix() - expected.matrix()).camax() < 1e-9,
                    "{}: tangent identity failed at t={t}",
                    gate.name
                );
            }
        }
    }
}

#[test]
fn plane_certifier_endpoints() {
    // rotation angle at T* is delta_phi_star, so the endpoint is read off
    // the circle: pi -> -A, 3pi/2 -> -B, pi/2 -> +B
    let cases = [
        ("CZ", PI),
        ("U_GHZ", PI),
        ("CCZ", PI),
        ("U_4d", 1.5 * PI),
        ("U_ZX", 0.5 * PI),
    ];
    for (name, angle) in cases {
        let gate = standard_gate(name).unwrap();
        let factor = diagonal_width_factor(name).unwrap();
        let t_star = gate.expected.as_ref().unwrap().delta_phi_star / factor;
        let pair = &bottleneck_plane_certifiers(name).unwrap()[0];
        let frame = diagonal_frame_gate(name).unwrap();
        let endpoint = frame.ad(&pair.a).unwrap();
        let expected = &pair.a.scale(angle.cos()) + &pair.b.scale(angle.sin());
        assert!(
            (endpoint.matrix() - expected.matrix()).camax() < 1e-9,
            "{name}: endpoint mismatch"
        );
        assert_close(pair.rate * t_star, angle, 1e-12);
    }
}

#[test]
fn classification_matches_reference_table() {
    for gate in all_gates() {
        let c = classify_gate(&gate.name, 1.0, TOL).unwrap();
        let expected = gate.expected.as_ref().unwrap();
        assert_close(c.delta_phi_star, expected.delta_phi_star, 1e-9);
        assert_eq!(c.geometry, expected.geometry, "{}", gate.name);
    }
}

#[test]
fn classification_witnesses_are_deterministic() {
    assert_eq!(classify_gate("CNOT", 1.0, TOL).unwrap().bottleneck_certifier, "IX");
    assert_eq!(classify_gate("X", 1.0, TOL).unwrap().bottleneck_certifier, "X");
    assert_eq!(
        classify_gate("U_GHZ", 1.0, TOL).unwrap().bottleneck_certifier,
        "XII"
    );
    assert_eq!(classify_gate("U_4d", 1.0, TOL).unwrap().bottleneck_certifier, "XX");
}

#[test]
fn classify_unitary_agrees_with_named_route() {
    for name in ["CNOT", "U_ZX", "U_4d", "iSWAP"] {
        let gate = standard_gate(name).unwrap();
        let by_matrix = classify_unitary(&gate.unitary, name, 1.0, TOL).unwrap();
        let by_name = classify_gate(name, 1.0, TOL).unwrap();
        assert_eq!(by_matrix.geometry, by_name.geometry, "{name}");
        assert_close(by_matrix.t_star, by_name.t_star, 1e-9);
    }
    let id = UnitaryOperator::identity(4).unwrap();
    assert!(matches!(
        classify_unitary(&id, "I", 1.0, TOL),
        Err(QslError::DegenerateGate)
    ));
}

#[test]
fn reference_table_scales_with_omega() {
    let t1 = reference_table(1.0);
    let t2 = reference_table(2.0);
    assert_eq!(t1.len(), 5);
    for (a, b) in t1.iter().zip(&t2) {
        assert_close(a.delta_phi_star, b.delta_phi_star, 0.0);
        assert_close(a.t_star, 2.0 * b.t_star, 1e-12);
    }
}

fn operator_schmidt_rank(g: &UnitaryOperator) -> usize {
    // reshuffle G[(a,b),(c,d)] -> M[(a,c),(b,d)]; product gates have rank 1
    let m = g.matrix();
    let mut resh = DMatrix::<f64>::zeros(8, 8);
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    let z = m[(2 * a + b, 2 * c + d)];
                    resh[(2 * a + c, 2 * (2 * b + d))] = z.re;
                    resh[(2 * a + c, 2 * (2 * b + d) + 1)] = z.im;
                }
            }
        }
    }
    real_rank(&resh, 1e-9)
}

#[test]
fn local_equivalence_contrast() {
    // CNOT and U_ZX(pi/2) are both entangling (operator Schmidt rank > 1)
    // yet their speed limits differ by a factor of two
    let cnot = standard_gate("CNOT").unwrap();
    let uzx = standard_gate("U_ZX").unwrap();
    assert!(operator_schmidt_rank(&cnot.unitary) > 1);
    assert!(operator_schmidt_rank(&uzx.unitary) > 1);
    let t_cnot = minimal_spread(&eigenphases(&cnot.unitary).unwrap(), 1.0)
        .unwrap()
        .t_star;
    let t_uzx = minimal_spread(&eigenphases(&uzx.unitary).unwrap(), 1.0)
        .unwrap()
        .t_star;
    assert_close(t_cnot, PI, 1e-9);
    assert_close(t_uzx, PI / 2.0, 1e-9);
}

#[test]
fn registry_dump_serializes_with_matrices() {
    let js = serde_json::to_value(all_gates()).unwrap();
    let arr = js.as_array().unwrap();
    assert_eq!(arr.len(), all_gates().len());
    let cnot = arr.iter().find(|g| g["name"] == "CNOT").unwrap();
    assert_eq!(cnot["qubits"], 2);
    assert_eq!(cnot["unitary"]["dim"], 4);
    assert_eq!(cnot["expected"]["geometry"], "helix3");
}

#[test]
fn diagonal_two_qubit_generator_materializes() {
    let g = DiagonalTwoQubitGenerator {
        a1: -1.0,
        a2: -1.0,
        a3: 1.0,
    };
    let h = g.materialize();
    assert!(h.is_traceless());
    let direct = optimal_diagonal_generator("CZ", 1.0).unwrap();
    assert!((h.matrix() - direct.matrix()).camax() < 1e-12);
}
