//! Canonical gate constructions and their speed-limit geometry.
//!
//! Every gate discussed in the accompanying analysis is available by name,
//! together with the diagonal-frame width-saturating generator that reaches
//! it at the speed limit, the closed-form closure-dimension rules for
//! diagonal two- and three-qubit generators, and the bottleneck plane
//! certifiers that realize each gate's slowest rotation.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{
    commutator, enumerate_pauli_words, hs_norm, pauli_sum, spectral_width, HermitianOperator,
    UnitaryOperator,
};
use crate::error::{QslError, Result};
use crate::geometry::frenet_frame;
use crate::numerics::{CMatrix, CVector};
use crate::qsl::{eigenphases, evolve_constant, minimal_spread};

/// Space-curve class of a gate's bottleneck Pauli certifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryClass {
    /// Planar circular arc (closure dimension 2).
    Arc,
    /// Offset circle in three dimensions (closure dimension 3).
    Helix3,
    /// Two-frequency helix in four dimensions (closure dimension 4).
    Helix4,
}

impl GeometryClass {
    pub fn from_closure_dim(dim: usize) -> Result<Self> {
        match dim {
            2 => Ok(GeometryClass::Arc),
            3 => Ok(GeometryClass::Helix3),
            4 => Ok(GeometryClass::Helix4),
            other => Err(QslError::Range(format!(
                "no geometry class for closure dimension {other}"
            ))),
        }
    }

    pub fn closure_dim(self) -> usize {
        match self {
            GeometryClass::Arc => 2,
            GeometryClass::Helix3 => 3,
            GeometryClass::Helix4 => 4,
        }
    }
}

/// Reference values a named gate is expected to reproduce.
#[derive(Clone, Debug, Serialize)]
pub struct GateExpectation {
    pub delta_phi_star: f64,
    pub geometry: GeometryClass,
}

/// A gate in the registry.
#[derive(Clone, Debug, Serialize)]
pub struct NamedGate {
    pub name: String,
    pub qubits: usize,
    pub unitary: UnitaryOperator,
    pub expected: Option<GateExpectation>,
    /// Frame caveats, e.g. gates classified through a locally equivalent
    /// diagonal frame.
    pub notes: String,
}

fn kron_identity(q: usize) -> CMatrix {
    CMatrix::identity(1 << q, 1 << q)
}

fn exp_i(h: &HermitianOperator, theta: f64) -> UnitaryOperator {
    // exp(+i theta h) = evolve_constant(h, -theta)
    evolve_constant(h, -theta).expect("registry generators are Hermitian")
}

fn diag_unitary(phases: &[f64]) -> UnitaryOperator {
    let n = phases.len();
    let d = CVector::from_iterator(n, phases.iter().map(|&p| Complex64::from_polar(1.0, p)));
    UnitaryOperator::new(CMatrix::from_diagonal(&d)).expect("diagonal phases are unitary")
}

fn build_registry() -> Vec<NamedGate> {
    use std::f64::consts::PI;
    let s = 1.0 / 2f64.sqrt();
    let c = Complex64::new;
    let mut gates = Vec::new();

    let x = UnitaryOperator::new(CMatrix::from_row_slice(
        2,
        2,
        &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)],
    ))
    .unwrap();
    gates.push(NamedGate {
        name: "X".into(),
        qubits: 1,
        unitary: x,
        expected: Some(GateExpectation {
            delta_phi_star: PI,
            geometry: GeometryClass::Arc,
        }),
        notes: String::new(),
    });

    let hadamard = UnitaryOperator::new(CMatrix::from_row_slice(
        2,
        2,
        &[c(s, 0.), c(s, 0.), c(s, 0.), c(-s, 0.)],
    ))
    .unwrap();
    gates.push(NamedGate {
        name: "Hadamard".into(),
        qubits: 1,
        unitary: hadamard,
        expected: Some(GateExpectation {
            delta_phi_star: PI,
            geometry: GeometryClass::Arc,
        }),
        notes: String::new(),
    });

    let k_h = pauli_sum(&[(s, "X"), (s, "Z")]).unwrap();
    gates.push(NamedGate {
        name: "U_H".into(),
        qubits: 1,
        unitary: exp_i(&k_h, PI / 2.0),
        expected: Some(GateExpectation {
            delta_phi_star: PI,
            geometry: GeometryClass::Arc,
        }),
        notes: "exp[i pi/(2 sqrt2) (X+Z)] = i * Hadamard".into(),
    });

    let zx_half = pauli_sum(&[(0.5, "ZX")]).unwrap();
    gates.push(NamedGate {
        name: "U_ZX".into(),
        qubits: 2,
        unitary: evolve_constant(&zx_half, PI / 2.0).unwrap(),
        expected: Some(GateExpectation {
            delta_phi_star: PI / 2.0,
            geometry: GeometryClass::Arc,
        }),
        notes: "exp(-i Omega t ZX/2) at t = pi/(2 Omega); locally equivalent to CNOT".into(),
    });

    let o = c(0., 0.);
    let l = c(1., 0.);
    let cnot = UnitaryOperator::new(CMatrix::from_row_slice(
        4,
        4,
        &[l, o, o, o, o, l, o, o, o, o, o, l, o, o, l, o],
    ))
    .unwrap();
    gates.push(NamedGate {
        name: "CNOT".into(),
        qubits: 2,
        unitary: cnot,
        expected: Some(GateExpectation {
            delta_phi_star: PI,
            geometry: GeometryClass::Helix3,
        }),
        notes: "classified in the locally equivalent CZ diagonal frame".into(),
    });

    gates.push(NamedGate {
        name: "CZ".into(),
        qubits: 2,
        unitary: diag_unitary(&[0.0, 0.0, 0.0, PI]),
        expected: Some(GateExpectation {
            delta_phi_star: PI,
            geometry: GeometryClass::Helix3,
        }),
        notes: String::new(),
    });

    let swap = UnitaryOperator::new(CMatrix::from_row_slice(
        4,
        4,
        &[l, o, o, o, o, o, l, o, o, l, o, o, o, o, o, l],
    ))
    .unwrap();
    gates.push(NamedGate {
        name: "SWAP".into(),
        qubits: 2,
        unitary: swap,
        expected: Some(GateExpectation {
            delta_phi_star: PI,
            geometry: GeometryClass::Helix3,
        }),
        notes: "same eigenphase multiset as CZ; classified in its diagonal frame".into(),
    });

    let i1 = c(0., 1.);
    let iswap = UnitaryOperator::new(CMatrix::from_row_slice(
        4,
        4,
        &[l, o, o, o, o, o, i1, o, o, i1, o, o, o, o, o, l],
    ))
    .unwrap();
    gates.push(NamedGate {
        name: "iSWAP".into(),
        qubits: 2,
        unitary: iswap,
        expected: Some(GateExpectation {
            delta_phi_star: PI,
            geometry: GeometryClass::Helix3,
        }),
        notes: String::new(),
    });

    let u4d_gen = pauli_sum(&[(2.0, "ZI"), (1.0, "IZ")]).unwrap();
    gates.push(NamedGate {
        name: "U_4d".into(),
        qubits: 2,
        unitary: exp_i(&u4d_gen, PI / 4.0),
        expected: Some(GateExpectation {
            delta_phi_star: 1.5 * PI,
            geometry: GeometryClass::Helix4,
        }),
        notes: "exp[i pi/4 (2 ZI + IZ)]".into(),
    });

    let k_ghz = pauli_sum(&[(s, "XXX"), (s, "ZII")]).unwrap();
    gates.push(NamedGate {
        name: "U_GHZ".into(),
        qubits: 3,
        unitary: exp_i(&k_ghz, PI / 2.0),
        expected: Some(GateExpectation {
            delta_phi_star: PI,
            geometry: GeometryClass::Arc,
        }),
        notes: "exp[i pi/(2 sqrt2) (XXX + ZII)]".into(),
    });

    let t = 1.0 / 3f64.sqrt();
    let k_w = pauli_sum(&[(t, "XYZ"), (t, "YZX"), (t, "ZXY")]).unwrap();
    gates.push(NamedGate {
        name: "U_W".into(),
        qubits: 3,
        unitary: exp_i(&k_w, PI / 2.0),
        expected: Some(GateExpectation {
            delta_phi_star: PI,
            geometry: GeometryClass::Arc,
        }),
        notes: "exp[i pi/(2 sqrt3) (XYZ + YZX + ZXY)]".into(),
    });

    let mut toffoli = kron_identity(3);
    toffoli[(6, 6)] = o;
    toffoli[(7, 7)] = o;
    toffoli[(6, 7)] = l;
    toffoli[(7, 6)] = l;
    gates.push(NamedGate {
        name: "Toffoli".into(),
        qubits: 3,
        unitary: UnitaryOperator::new(toffoli).unwrap(),
        expected: Some(GateExpectation {
            delta_phi_star: PI,
            geometry: GeometryClass::Helix3,
        }),
        notes: "classified in the locally equivalent CCZ diagonal frame".into(),
    });

    gates.push(NamedGate {
        name: "CCZ".into(),
        qubits: 3,
        unitary: diag_unitary(&[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, PI]),
        expected: Some(GateExpectation {
            delta_phi_star: PI,
            geometry: GeometryClass::Helix3,
        }),
        notes: String::new(),
    });

    gates
}

fn registry() -> &'static Vec<NamedGate> {
    static REGISTRY: OnceLock<Vec<NamedGate>> = OnceLock::new();
    REGISTRY.get_or_init(build_registry)
}

/// All registry gates (immutable, built once).
pub fn all_gates() -> &'static [NamedGate] {
    registry()
}

/// Canonical gate names accepted by [`standard_gate`].
pub fn gate_names() -> Vec<&'static str> {
    registry().iter().map(|g| g.name.as_str()).collect()
}

/// Looks up a gate by name (case-insensitive; `CCNOT` aliases Toffoli).
pub fn standard_gate(name: &str) -> Result<NamedGate> {
    let wanted = match name.to_ascii_lowercase().as_str() {
        "ccnot" => "toffoli".to_string(),
        other => other.to_string(),
    };
    registry()
        .iter()
        .find(|g| g.name.to_ascii_lowercase() == wanted)
        .cloned()
        .ok_or_else(|| QslError::NotFound(format!("unknown gate \"{name}\"")))
}

/// Traceless diagonal two-qubit generator `(a1 ZI + a2 IZ + a3 ZZ)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiagonalTwoQubitGenerator {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl DiagonalTwoQubitGenerator {
    pub fn materialize(&self) -> HermitianOperator {
        pauli_sum(&[
            (0.5 * self.a1, "ZI"),
            (0.5 * self.a2, "IZ"),
            (0.5 * self.a3, "ZZ"),
        ])
        .expect("diagonal Pauli sum is Hermitian")
    }
}

/// Diagonal-frame data for a named gate: the generator shape at coefficient
/// `Omega = 1`, the width in units of `Omega`, and the diagonal gate the
/// generator reproduces at `T*`.
struct DiagonalFrame {
    terms: Vec<(f64, &'static str)>,
    width_factor: f64,
    frame_gate: UnitaryOperator,
}

fn diagonal_frame(name: &str) -> Result<DiagonalFrame> {
    use std::f64::consts::PI;
    let canonical = standard_gate(name)?.name;
    let frame = match canonical.as_str() {
        "X" | "Hadamard" => DiagonalFrame {
            terms: vec![(0.5, "Z")],
            width_factor: 1.0,
            frame_gate: diag_unitary(&[0.0, PI]),
        },
        "U_H" => DiagonalFrame {
            terms: vec![(0.5, "Z")],
            width_factor: 1.0,
            frame_gate: diag_unitary(&[PI / 2.0, -PI / 2.0]),
        },
        "U_ZX" => DiagonalFrame {
            terms: vec![(0.5, "ZZ")],
            width_factor: 1.0,
            frame_gate: diag_unitary(&[-PI / 4.0, PI / 4.0, PI / 4.0, -PI / 4.0]),
        },
        "CNOT" | "CZ" | "SWAP" => DiagonalFrame {
            terms: vec![(-0.5, "ZI"), (-0.5, "IZ"), (0.5, "ZZ")],
            width_factor: 2.0,
            frame_gate: diag_unitary(&[0.0, 0.0, 0.0, PI]),
        },
        "iSWAP" => DiagonalFrame {
            terms: vec![(-0.5, "IZ"), (0.5, "ZZ")],
            width_factor: 2.0,
            frame_gate: diag_unitary(&[0.0, 0.0, PI / 2.0, -PI / 2.0]),
        },
        "U_4d" => DiagonalFrame {
            // sign chosen so exp(-i T* H) equals the gate (not its inverse)
            terms: vec![(-1.0, "ZI"), (-0.5, "IZ")],
            width_factor: 3.0,
            frame_gate: diag_unitary(&[0.75 * PI, 0.25 * PI, -0.25 * PI, -0.75 * PI]),
        },
        "U_GHZ" | "U_W" => DiagonalFrame {
            terms: vec![(0.5, "ZII")],
            width_factor: 1.0,
            frame_gate: diag_unitary(&[
                PI / 2.0,
                PI / 2.0,
                PI / 2.0,
                PI / 2.0,
                -PI / 2.0,
                -PI / 2.0,
                -PI / 2.0,
                -PI / 2.0,
            ]),
        },
        "Toffoli" | "CCZ" => DiagonalFrame {
            terms: vec![
                (-0.5, "ZII"),
                (-0.5, "IZI"),
                (-0.5, "IIZ"),
                (0.5, "ZZI"),
                (0.5, "ZIZ"),
                (0.5, "IZZ"),
                (-0.5, "ZZZ"),
            ],
            width_factor: 4.0,
            frame_gate: diag_unitary(&[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, PI]),
        },
        other => return Err(QslError::NotFound(format!("no diagonal frame for \"{other}\""))),
    };
    Ok(frame)
}

/// Width of the diagonal generator in units of the coefficient `Omega`
/// (saturating the budget requires `width_factor * Omega = Omega_max`).
pub fn diagonal_width_factor(name: &str) -> Result<f64> {
    Ok(diagonal_frame(name)?.width_factor)
}

/// The diagonal gate that [`optimal_diagonal_generator`] reproduces at `T*`
/// (the named gate rotated to the diagonal frame of its optimal generator).
pub fn diagonal_frame_gate(name: &str) -> Result<UnitaryOperator> {
    Ok(diagonal_frame(name)?.frame_gate)
}

/// Width-saturating diagonal-frame generator for a named gate, scaled by the
/// coefficient `omega` (so its spectral width is `diagonal_width_factor *
/// omega`). `exp(-i T* H)` reproduces [`diagonal_frame_gate`] up to a global
/// phase when `Omega_max = width_factor * omega`.
pub fn optimal_diagonal_generator(name: &str, omega: f64) -> Result<HermitianOperator> {
    let frame = diagonal_frame(name)?;
    let terms: Vec<(f64, &str)> = frame
        .terms
        .iter()
        .map(|(c0, w)| (c0 * omega, *w))
        .collect();
    pauli_sum(&terms)
}

/// Pauli-certifier closure dimension for one coefficient pair of a diagonal
/// two-qubit generator. The block carrying the pair splits into planes of
/// signed rates `a_j + a_k` and `a_j - a_k`; a Pauli string overlaps both.
fn lambda_pair(aj: f64, ak: f64, scale: f64) -> Option<usize> {
    let zero = |x: f64| x.abs() <= 1e-9 * scale;
    let eq = |x: f64, y: f64| (x.abs() - y.abs()).abs() <= 1e-9 * scale;
    if zero(aj) && zero(ak) {
        return None; // inert block, no curve
    }
    if !zero(aj) && !zero(ak) {
        if eq(aj, ak) {
            Some(3)
        } else {
            Some(4)
        }
    } else {
        Some(2)
    }
}

/// Closed-form maximal Pauli-certifier closure dimension for the diagonal
/// generator `(a1 ZI + a2 IZ + a3 ZZ)/2`: the maximum of the pair rule over
/// the coefficient pairs (1,2), (1,3), (2,3). Magnitude comparisons use a
/// relative tolerance of 1e-9.
pub fn lambda_closure(a1: f64, a2: f64, a3: f64) -> Result<usize> {
    let scale = a1.abs().max(a2.abs()).max(a3.abs());
    if scale == 0.0 {
        return Err(QslError::Degenerate("all diagonal coefficients vanish".into()));
    }
    let candidates = [
        lambda_pair(a1, a2, scale),
        lambda_pair(a1, a3, scale),
        lambda_pair(a2, a3, scale),
    ];
    candidates
        .into_iter()
        .flatten()
        .max()
        .ok_or_else(|| QslError::Degenerate("all diagonal coefficients vanish".into()))
}

/// Plane frequencies of one X/Y-support block of a diagonal three-qubit
/// generator.
#[derive(Clone, Debug, Serialize)]
pub struct BlockFrequencies {
    /// Qubits (0-based) carrying X/Y in this block.
    pub support: Vec<usize>,
    pub label: String,
    /// Four signed plane frequencies, indexed by the two dressing signs.
    pub frequencies: [((i8, i8), f64); 4],
}

/// Block report for the diagonal three-qubit generator
/// `(a1 ZII + a2 IZI + a3 IIZ + a4 ZZI + a5 ZIZ + a6 IZZ + a7 ZZZ)/2`.
#[derive(Clone, Debug, Serialize)]
pub struct ThreeQubitBlocks {
    pub coefficients: [f64; 7],
    pub blocks: Vec<BlockFrequencies>,
}

impl ThreeQubitBlocks {
    /// All 28 signed frequencies flattened.
    pub fn all_frequencies(&self) -> Vec<f64> {
        self.blocks
            .iter()
            .flat_map(|b| b.frequencies.iter().map(|(_, f)| *f))
            .collect()
    }
}

/// Enumerates the seven invariant X/Y-support blocks of a diagonal
/// three-qubit generator and their four signed plane frequencies each.
///
/// For a single-qubit block such as qubit 3, the frequency at dressing signs
/// `(mu, nu)` of the other two qubits is `a3 + mu a5 + nu a6 + mu nu a7`;
/// the other blocks follow by permuting indices, and double/triple blocks
/// combine their single-qubit rates with a relative sign.
pub fn three_qubit_blocks(a: &[f64; 7]) -> ThreeQubitBlocks {
    let signs = [(1i8, 1i8), (1, -1), (-1, 1), (-1, -1)];
    let freq4 = |f: &dyn Fn(f64, f64) -> f64| -> [((i8, i8), f64); 4] {
        let mut out = [((0i8, 0i8), 0.0f64); 4];
        for (i, &(s1, s2)) in signs.iter().enumerate() {
            out[i] = ((s1, s2), f(f64::from(s1), f64::from(s2)));
        }
        out
    };
    let (a1, a2, a3, a4, a5, a6, a7) = (a[0], a[1], a[2], a[3], a[4], a[5], a[6]);
    let blocks = vec![
        BlockFrequencies {
            support: vec![0],
            label: "B{1}".into(),
            frequencies: freq4(&|mu, nu| a1 + mu * a4 + nu * a5 + mu * nu * a7),
        },
        BlockFrequencies {
            support: vec![1],
            label: "B{2}".into(),
            frequencies: freq4(&|mu, nu| a2 + mu * a4 + nu * a6 + mu * nu * a7),
        },
        BlockFrequencies {
            support: vec![2],
            label: "B{3}".into(),
            frequencies: freq4(&|mu, nu| a3 + mu * a5 + nu * a6 + mu * nu * a7),
        },
        BlockFrequencies {
            support: vec![0, 1],
            label: "B{1,2}".into(),
            frequencies: freq4(&|s, nu| (a1 + nu * a5) + s * (a2 + nu * a6)),
        },
        BlockFrequencies {
            support: vec![0, 2],
            label: "B{1,3}".into(),
            frequencies: freq4(&|s, mu| (a1 + mu * a4) + s * (a3 + mu * a6)),
        },
        BlockFrequencies {
            support: vec![1, 2],
            label: "B{2,3}".into(),
            frequencies: freq4(&|s, mu| (a2 + mu * a4) + s * (a3 + mu * a5)),
        },
        BlockFrequencies {
            support: vec![0, 1, 2],
            label: "B{1,2,3}".into(),
            frequencies: freq4(&|mu, nu| a1 + mu * a2 + nu * a3 + mu * nu * a7),
        },
    ];
    ThreeQubitBlocks {
        coefficients: *a,
        blocks,
    }
}

/// Orthonormal plane pair rotating at the generator's full spectral width.
#[derive(Clone, Debug)]
pub struct PlanePair {
    pub a: HermitianOperator,
    pub b: HermitianOperator,
    /// Rotation rate; equals the spectral width of the diagonal generator.
    pub rate: f64,
}

/// Bottleneck plane certifiers for a named gate: operators whose tangent
/// rotates uniformly at the generator's spectral width,
/// `U^dag(t) A U(t) = cos(rate t) A + sin(rate t) B`. The partner `B` is
/// derived from the generator as `i[H, A] / rate`, which fixes the rotation
/// orientation consistently with `U(t) = exp(-i t H)`.
pub fn bottleneck_plane_certifiers(name: &str) -> Result<Vec<PlanePair>> {
    let canonical = standard_gate(name)?.name;
    let s = 1.0 / 2f64.sqrt();
    let seeds: Vec<Vec<(f64, &str)>> = match canonical.as_str() {
        "X" | "Hadamard" | "U_H" => vec![vec![(1.0, "X")]],
        "U_ZX" => vec![vec![(s, "YI"), (s, "YZ")]],
        "CNOT" | "CZ" | "SWAP" => vec![vec![(s, "IX"), (-s, "ZX")]],
        "iSWAP" => vec![vec![(s, "IX"), (-s, "ZX")]],
        "U_4d" => vec![vec![(s, "XX"), (-s, "YY")]],
        "U_GHZ" | "U_W" => vec![vec![(s, "XII"), (s, "YII")]],
        "Toffoli" | "CCZ" => vec![vec![
            (0.5, "IIX"),
            (-0.5, "ZIX"),
            (-0.5, "IZX"),
            (0.5, "ZZX"),
        ]],
        other => return Err(QslError::NotFound(format!("no plane certifiers for \"{other}\""))),
    };
    let omega = 1.0;
    let h = optimal_diagonal_generator(&canonical, omega)?;
    let rate = diagonal_width_factor(&canonical)? * omega;
    let mut pairs = Vec::with_capacity(seeds.len());
    for terms in seeds {
        let a = pauli_sum(&terms)?;
        let b = commutator(&h, &a)?.scale(1.0 / rate);
        let b_norm = hs_norm(&b);
        if (b_norm - 1.0).abs() > 1e-9 {
            return Err(QslError::Numerical(format!(
                "certifier does not rotate at the full width (|B| = {b_norm})"
            )));
        }
        pairs.push(PlanePair { a, b, rate });
    }
    Ok(pairs)
}

/// Full classification record for a gate.
#[derive(Clone, Debug, Serialize)]
pub struct GateClassification {
    pub gate: String,
    pub delta_phi_star: f64,
    pub t_star: f64,
    pub omega_max: f64,
    pub geometry: GeometryClass,
    /// First Pauli word (lexicographic order) whose Frenet closure under the
    /// diagonal generator attains the class.
    pub bottleneck_certifier: String,
    /// Description of the diagonal frame used for classification.
    pub frame: String,
}

/// Maximal Frenet closure dimension over non-commuting Pauli certifiers
/// under `h`, with the first lexicographic witness attaining it.
pub fn max_pauli_closure(
    h: &HermitianOperator,
    qubits: usize,
    rank_tol: f64,
) -> Result<(usize, String)> {
    let mut best = 0usize;
    let mut witness = String::new();
    for word in enumerate_pauli_words(qubits) {
        let op = word.to_operator();
        if hs_norm(&commutator(h, &op)?) <= 1e-12 {
            continue;
        }
        let dim = frenet_frame(h, &op, rank_tol)?.closure_dim;
        if dim > best {
            best = dim;
            witness = word.to_string();
        }
    }
    if best == 0 {
        return Err(QslError::Degenerate(
            "generator commutes with every Pauli string".into(),
        ));
    }
    Ok((best, witness))
}

/// Classifies a named gate: recomputes its speed limit from the matrix and
/// its geometry class from the diagonal-frame generator.
pub fn classify_gate(name: &str, omega_max: f64, rank_tol: f64) -> Result<GateClassification> {
    let gate = standard_gate(name)?;
    let spread = minimal_spread(&eigenphases(&gate.unitary)?, omega_max)?;
    let omega = omega_max / diagonal_width_factor(&gate.name)?;
    let h = optimal_diagonal_generator(&gate.name, omega)?;
    let (closure, witness) = max_pauli_closure(&h, gate.qubits, rank_tol)?;
    Ok(GateClassification {
        gate: gate.name.clone(),
        delta_phi_star: spread.delta_phi_star,
        t_star: spread.t_star,
        omega_max,
        geometry: GeometryClass::from_closure_dim(closure)?,
        bottleneck_certifier: witness,
        frame: if gate.notes.is_empty() {
            "diagonal frame".into()
        } else {
            gate.notes.clone()
        },
    })
}

/// Classifies an arbitrary qubit-register gate through the diagonal frame
/// built from its minimal-spread-shifted eigenphases.
pub fn classify_unitary(
    g: &UnitaryOperator,
    label: &str,
    omega_max: f64,
    rank_tol: f64,
) -> Result<GateClassification> {
    let qubits = match g.dim() {
        2 => 1,
        4 => 2,
        8 => 3,
        16 => 4,
        other => {
            return Err(QslError::Range(format!(
                "Pauli classification needs a qubit register, got dim {other}"
            )))
        }
    };
    let e = eigenphases(g)?;
    let spread = minimal_spread(&e, omega_max)?;
    if spread.delta_phi_star <= 0.0 {
        return Err(QslError::DegenerateGate);
    }
    // diagonal frame: shifted phases sorted ascending on the diagonal
    let mut psi: Vec<f64> = spread.shifted_phases.clone();
    psi.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let diag: Vec<f64> = psi.iter().map(|p| -p / spread.t_star).collect();
    let h = HermitianOperator::from_real_diagonal(&diag)?;
    let (closure, witness) = max_pauli_closure(&h, qubits, rank_tol)?;
    Ok(GateClassification {
        gate: label.to_string(),
        delta_phi_star: spread.delta_phi_star,
        t_star: spread.t_star,
        omega_max,
        geometry: GeometryClass::from_closure_dim(closure)?,
        bottleneck_certifier: witness,
        frame: "diagonal frame from sorted shifted eigenphases".into(),
    })
}

/// One grouped row of the reference gate table.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub gates: Vec<String>,
    pub delta_phi_star: f64,
    pub t_star: f64,
    pub geometry: GeometryClass,
}

/// The reference table rows (grouped gates sharing a speed limit and
/// geometry class) at a given width budget.
pub fn reference_table(omega_max: f64) -> Vec<TableRow> {
    use std::f64::consts::PI;
    let row = |names: &[&str], dphi: f64, geometry: GeometryClass| TableRow {
        gates: names.iter().map(|s| s.to_string()).collect(),
        delta_phi_star: dphi,
        t_star: dphi / omega_max,
        geometry,
    };
    vec![
        row(&["U_ZX"], PI / 2.0, GeometryClass::Arc),
        row(&["U_H", "U_GHZ", "U_W"], PI, GeometryClass::Arc),
        row(&["CNOT", "CZ", "SWAP", "iSWAP"], PI, GeometryClass::Helix3),
        row(&["Toffoli"], PI, GeometryClass::Helix3),
        row(&["U_4d"], 1.5 * PI, GeometryClass::Helix4),
    ]
}

/// Diagonal generator scaled so its spectral width is exactly `omega_max`
/// (coefficient `omega_max / width_factor`).
pub fn saturating_generator(name: &str, omega_max: f64) -> Result<HermitianOperator> {
    let factor = diagonal_width_factor(name)?;
    let h = optimal_diagonal_generator(name, omega_max / factor)?;
    let width = spectral_width(&h)?;
    if (width - omega_max).abs() > 1e-9 {
        return Err(QslError::Numerical(format!(
            "saturating generator has width {width}, wanted {omega_max}"
        )));
    }
    Ok(h)
}

#[cfg(test)]
mod tests;
