//! Certifying sets and bottleneck diagnostics.
//!
//! A set of observables certifies an evolution when the Heisenberg images
//! `U^dag O U` determine U up to a global phase, which holds exactly when
//! the common commutant of the set is trivial. Every certifying set yields a
//! lower bound on the gate time: each observable must travel from O to
//! `Ad_G(O)` under the curvature cap, and all constraints share the same
//! final time, so the slowest observable binds.

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{hs_inner, hs_norm, pauli_basis, HermitianOperator, UnitaryOperator};
use crate::error::{QslError, Result};
use crate::geometry::frenet_frame;
use crate::numerics::{complex_nullity, CMatrix};
use crate::qsl::{eigenphases, minimal_spread, optimal_generator};

/// How an observable entered a certifying set; eigenbasis P/Q pairs carry
/// the phase-pair indices that make their bounds exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertifierKind {
    Generic,
    EigenP { j: usize, k: usize },
    EigenQ { j: usize, k: usize },
}

/// A labelled collection of traceless Hermitian observables of equal
/// dimension.
#[derive(Clone, Debug)]
pub struct CertifyingSet {
    operators: Vec<HermitianOperator>,
    labels: Vec<String>,
    kinds: Vec<CertifierKind>,
    label: String,
    dim: usize,
}

impl CertifyingSet {
    pub fn new(
        operators: Vec<HermitianOperator>,
        labels: Vec<String>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let kinds = vec![CertifierKind::Generic; operators.len()];
        Self::with_kinds(operators, labels, kinds, label)
    }

    fn with_kinds(
        operators: Vec<HermitianOperator>,
        labels: Vec<String>,
        kinds: Vec<CertifierKind>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if operators.is_empty() {
            return Err(QslError::Range("certifying set must be nonempty".into()));
        }
        if operators.len() != labels.len() || operators.len() != kinds.len() {
            return Err(QslError::Range("one label per operator required".into()));
        }
        let dim = operators[0].dim();
        for o in &operators {
            if o.dim() != dim {
                return Err(QslError::Dimension {
                    expected: dim,
                    got: o.dim(),
                });
            }
            let tr = o.trace().norm();
            if tr > 1e-10 * dim as f64 {
                return Err(QslError::NotTraceless { trace: tr });
            }
        }
        Ok(Self {
            operators,
            labels,
            kinds,
            label: label.into(),
            dim,
        })
    }

    pub fn operators(&self) -> &[HermitianOperator] {
        &self.operators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn kinds(&self) -> &[CertifierKind] {
        &self.kinds
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// The subset of P-type operators (the symmetric eigenbasis pairs).
    /// By itself this subset certifies only for n >= 3.
    pub fn p_subset(&self) -> Result<CertifyingSet> {
        let mut operators = Vec::new();
        let mut labels = Vec::new();
        let mut kinds = Vec::new();
        for ((o, l), k) in self.operators.iter().zip(&self.labels).zip(&self.kinds) {
            if matches!(k, CertifierKind::EigenP { .. }) {
                operators.push(o.clone());
                labels.push(l.clone());
                kinds.push(k.clone());
            }
        }
        CertifyingSet::with_kinds(operators, labels, kinds, format!("{}-p-only", self.label))
    }
}

/// Result of the common-commutant rank test.
#[derive(Clone, Debug, Serialize)]
pub struct CommutantReport {
    /// Complex dimension of `{W : [W, O_i] = 0 for all i}`; at least 1
    /// because scalars always commute.
    pub dimension: usize,
    /// True exactly when the commutant is the scalars (dimension 1).
    pub certifies: bool,
}

/// Computes the commutant dimension as the nullity of the stacked linear
/// map `W -> ([W, O_1], ..., [W, O_m])` on all n x n complex matrices
/// (singular values at or below `rel_tol` of the largest count as zero).
pub fn common_commutant_dim(s: &CertifyingSet, rel_tol: f64) -> Result<CommutantReport> {
    let n = s.dim();
    let eye = CMatrix::identity(n, n);
    let mut stacked = CMatrix::zeros(s.len() * n * n, n * n);
    for (i, o) in s.operators().iter().enumerate() {
        // vec([W, O]) = (O^T kron I - I kron O) vec(W), column-major vec
        let block = o.matrix().transpose().kronecker(&eye) - eye.kronecker(o.matrix());
        stacked
            .view_mut((i * n * n, 0), (n * n, n * n))
            .copy_from(&block);
    }
    let dimension = complex_nullity(&stacked, rel_tol);
    Ok(CommutantReport {
        dimension,
        certifies: dimension == 1,
    })
}

/// The minimal certifying pair in the standard basis:
/// `O1 = diag(1..n) - (n+1)/2 I` and `O2 = sum_k E_{k,k+1} + E_{k+1,k}`.
/// Two operators are the smallest possible certifying set.
pub fn canonical_two_op_set(n: usize) -> Result<CertifyingSet> {
    if n < 2 {
        return Err(QslError::Range(format!("dimension must be >= 2, got {n}")));
    }
    let shift = (n as f64 + 1.0) / 2.0;
    let diag: Vec<f64> = (1..=n).map(|k| k as f64 - shift).collect();
    let o1 = HermitianOperator::from_real_diagonal(&diag)?;
    let mut ladder = CMatrix::zeros(n, n);
    for k in 0..n - 1 {
        ladder[(k, k + 1)] = Complex64::new(1.0, 0.0);
        ladder[(k + 1, k)] = Complex64::new(1.0, 0.0);
    }
    let o2 = HermitianOperator::new(ladder)?;
    CertifyingSet::new(
        vec![o1, o2],
        vec!["diag".into(), "ladder".into()],
        "two-op-canonical",
    )
}

/// Eigenbasis P/Q certifiers of a gate: for every eigenvector pair `j < k`,
/// `P_jk ~ |j><k| + |k><j|` and `Q_jk ~ -i(|j><k| - |k><j|)`, scaled to unit
/// normalized Hilbert-Schmidt norm. The full family certifies any evolution;
/// the P-only subset certifies for n >= 3.
pub fn pq_certifier_set(g: &UnitaryOperator) -> Result<CertifyingSet> {
    let e = eigenphases(g)?;
    let n = g.dim();
    let scale = Complex64::new((n as f64 / 2.0).sqrt(), 0.0);
    let mut operators = Vec::with_capacity(n * (n - 1));
    let mut labels = Vec::with_capacity(n * (n - 1));
    let mut kinds = Vec::with_capacity(n * (n - 1));
    for j in 0..n {
        for k in (j + 1)..n {
            let vj = e.vectors().column(j);
            let vk = e.vectors().column(k);
            let cross = vj * vk.adjoint();
            let p = (&cross + cross.adjoint()) * scale;
            let q = (&cross - cross.adjoint()) * Complex64::new(0.0, -1.0) * scale;
            operators.push(HermitianOperator::new(p)?);
            labels.push(format!("P_{j}_{k}"));
            kinds.push(CertifierKind::EigenP { j, k });
            operators.push(HermitianOperator::new(q)?);
            labels.push(format!("Q_{j}_{k}"));
            kinds.push(CertifierKind::EigenQ { j, k });
        }
    }
    CertifyingSet::with_kinds(operators, labels, kinds, "PQ-eigenbasis")
}

/// The full Pauli basis as a certifying set ("pauli-all").
pub fn pauli_certifier_set(qubits: usize) -> Result<CertifyingSet> {
    let basis = pauli_basis(qubits)?;
    CertifyingSet::new(
        basis.elements().to_vec(),
        basis.element_labels().to_vec(),
        "pauli-all",
    )
}

/// Angle between a unit-norm observable and its adjoint image:
/// `theta = arccos(<O, G^dag O G>)`, the length of the shortest great-circle
/// arc connecting the tangent endpoints.
pub fn endpoint_angle(o: &HermitianOperator, g: &UnitaryOperator) -> Result<f64> {
    let norm = hs_norm(o);
    if (norm - 1.0).abs() > 1e-9 {
        return Err(QslError::NotUnitNorm { norm });
    }
    let image = g.ad(o)?;
    Ok(hs_inner(o, &image)?.clamp(-1.0, 1.0).acos())
}

/// One observable's entry in a bottleneck report.
#[derive(Clone, Debug, Serialize)]
pub struct BottleneckEntry {
    pub observable: String,
    /// Endpoint angle in [0, pi].
    pub theta: f64,
    /// Planar great-circle bound `theta / omega_max`.
    pub t2d: f64,
    /// The certified lower bound used for the maximum. Equals `t2d` for
    /// generic observables; for eigenbasis P/Q pairs it is the exact
    /// rotation time `|psi_j - psi_k| / omega_max` with shifted phases.
    pub t_bound: f64,
    /// Frenet closure dimension of the observable under the gate's optimal
    /// generator (1 when the gate is trivial).
    pub closure_dim: usize,
    /// Whether `t_bound` is exact rather than a planar lower bound.
    pub exact: bool,
}

/// Per-observable lower bounds and the binding (bottleneck) observables.
#[derive(Clone, Debug, Serialize)]
pub struct BottleneckReport {
    pub gate: String,
    pub certifier_set: String,
    /// Whether the set passed the commutant test (reports on non-certifying
    /// sets are still produced, with this flag cleared).
    pub set_certifies: bool,
    pub entries: Vec<BottleneckEntry>,
    /// `max` of the per-observable bounds.
    pub t_lower: f64,
    /// Exact speed limit of the gate, for reference.
    pub t_star: f64,
    /// `t_star / t_lower`; `None` when the set gives no positive bound for a
    /// nontrivial gate. 1 for trivial gates.
    pub eta_lower: Option<f64>,
    /// Labels of the observables attaining `t_lower`.
    pub bottleneck: Vec<String>,
}

/// Computes the bottleneck bound of a certifying set for a gate: every
/// observable contributes its planar bound, eigenbasis P/Q pairs contribute
/// their exact rotation times, and the maximum binds.
pub fn bottleneck_report(
    g: &UnitaryOperator,
    s: &CertifyingSet,
    omega_max: f64,
    gate_label: &str,
    rank_tol: f64,
) -> Result<BottleneckReport> {
    if g.dim() != s.dim() {
        return Err(QslError::Dimension {
            expected: s.dim(),
            got: g.dim(),
        });
    }
    let e = eigenphases(g)?;
    let spread = minimal_spread(&e, omega_max)?;
    let t_star = spread.t_star;
    let h_star = if spread.delta_phi_star > 0.0 {
        Some(optimal_generator(g, omega_max)?.h_star)
    } else {
        None
    };
    let certifies = common_commutant_dim(s, rank_tol)?.certifies;

    let mut entries = Vec::with_capacity(s.len());
    for ((o, label), kind) in s.operators().iter().zip(s.labels()).zip(s.kinds()) {
        let unit = o.scale(1.0 / hs_norm(o));
        let theta = endpoint_angle(&unit, g)?;
        let t2d = theta / omega_max;
        let (t_bound, exact) = match kind {
            CertifierKind::EigenP { j, k } | CertifierKind::EigenQ { j, k } => {
                let rotation = (spread.shifted_phases[*j] - spread.shifted_phases[*k]).abs();
                (rotation / omega_max, true)
            }
            CertifierKind::Generic => (t2d, false),
        };
        let closure_dim = match &h_star {
            Some(h) => frenet_frame(h, &unit, rank_tol)?.closure_dim,
            None => 1,
        };
        entries.push(BottleneckEntry {
            observable: label.clone(),
            theta,
            t2d,
            t_bound,
            closure_dim,
            exact,
        });
    }

    let t_lower = entries.iter().map(|e| e.t_bound).fold(0.0f64, f64::max);
    let bottleneck: Vec<String> = entries
        .iter()
        .filter(|e| (e.t_bound - t_lower).abs() <= 1e-12)
        .map(|e| e.observable.clone())
        .collect();
    let eta_lower = if t_lower > 1e-12 {
        Some(t_star / t_lower)
    } else if t_star <= 1e-12 {
        Some(1.0)
    } else {
        None
    };

    Ok(BottleneckReport {
        gate: gate_label.to_string(),
        certifier_set: s.label().to_string(),
        set_certifies: certifies,
        entries,
        t_lower,
        t_star,
        eta_lower,
        bottleneck,
    })
}

/// Planarity diagnostic built on a bottleneck report: when every bottleneck
/// observable is forced out of a single plane (closure dimension above 2),
/// the naive planar bound cannot be met and the overhead factor is
/// strictly above 1.
#[derive(Clone, Debug, Serialize)]
pub struct PlanarityDiagnostic {
    pub report: BottleneckReport,
    /// Closure dimensions of the bottleneck observables, same order as
    /// `report.bottleneck`.
    pub bottleneck_closure_dims: Vec<usize>,
    /// Largest bottleneck closure dimension.
    pub max_bottleneck_closure: usize,
    /// Set when the bottleneck cannot stay planar, so eta_lower > 1.
    pub overhead_flagged: bool,
}

/// Identifies the bottleneck observables of a certifying set and checks
/// whether they admit planar evolution under the gate's optimal generator.
pub fn planarity_diagnostic(
    g: &UnitaryOperator,
    s: &CertifyingSet,
    omega_max: f64,
    gate_label: &str,
    rank_tol: f64,
) -> Result<PlanarityDiagnostic> {
    let report = bottleneck_report(g, s, omega_max, gate_label, rank_tol)?;
    let bottleneck_closure_dims: Vec<usize> = report
        .bottleneck
        .iter()
        .map(|label| {
            report
                .entries
                .iter()
                .find(|e| &e.observable == label)
                .map(|e| e.closure_dim)
                .unwrap_or(1)
        })
        .collect();
    let max_bottleneck_closure = bottleneck_closure_dims.iter().copied().max().unwrap_or(1);
    let min_bottleneck_closure = bottleneck_closure_dims.iter().copied().min().unwrap_or(1);
    // overhead is certain only when no bottleneck observable stays planar
    let overhead_flagged = !report.bottleneck.is_empty() && min_bottleneck_closure > 2;
    Ok(PlanarityDiagnostic {
        report,
        bottleneck_closure_dims,
        max_bottleneck_closure,
        overhead_flagged,
    })
}

#[cfg(test)]
mod tests;
