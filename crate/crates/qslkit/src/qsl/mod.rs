//! Exact speed limits and width-saturating optimal generators.
//!
//! The minimal time for a gate G under the spectral-width bound
//! `w(H) <= Omega_max` is `T* = dphi* / Omega_max`, where `dphi*` is the
//! smallest spread of G's eigenphases over per-phase shifts by multiples of
//! 2*pi. The bound is saturated by the constant generator
//! `H* = -sum_k (phi_k / T*) |k><k|` built from G's spectral projectors.

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{center_hamiltonian, HermitianOperator, UnitaryOperator};
use crate::error::{QslError, Result};
use crate::numerics::{eig_hermitian, normalize_phase, unitary_eigenpairs, CMatrix, CVector};

/// Circular distance below which two eigenphases count as degenerate.
pub const PHASE_CLUSTER_TOL: f64 = 1e-8;

/// One degenerate eigenphase cluster of a unitary.
#[derive(Clone, Debug)]
pub struct PhaseCluster {
    /// Representative phase in (-pi, pi] (circular mean of the members).
    pub phase: f64,
    /// Number of eigenvectors in the cluster.
    pub rank: usize,
    /// Spectral projector onto the cluster subspace.
    pub projector: HermitianOperator,
}

/// Eigenphase decomposition of a target unitary.
#[derive(Clone, Debug)]
pub struct EigenphaseSet {
    phases: Vec<f64>,
    shifts: Vec<i32>,
    clusters: Vec<PhaseCluster>,
    cluster_of: Vec<usize>,
    vectors: CMatrix,
    dim: usize,
}

impl EigenphaseSet {
    /// Raw per-eigenvector phases in (-pi, pi], ascending within clusters.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// 2*pi branch shifts currently applied (all zero on construction).
    pub fn shifts(&self) -> &[i32] {
        &self.shifts
    }

    /// Degenerate clusters in ascending phase order.
    pub fn clusters(&self) -> &[PhaseCluster] {
        &self.clusters
    }

    /// Cluster index of each eigenvector.
    pub fn cluster_of(&self) -> &[usize] {
        &self.cluster_of
    }

    /// Orthonormal eigenvectors, one column per phase, same order.
    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Speed-limit result for one gate at a given width budget.
#[derive(Clone, Debug, Serialize)]
pub struct SpeedLimitResult {
    /// Minimal eigenphase spread (radians).
    pub delta_phi_star: f64,
    /// `delta_phi_star / omega_max`, in units of 1/Omega_max.
    pub t_star: f64,
    pub omega_max: f64,
    /// Eigenvector indices attaining (min, max) shifted phase.
    pub bottleneck_pair: (usize, usize),
    /// Chosen 2*pi multiples, one per eigenvector.
    pub shifts: Vec<i32>,
    /// Cluster-representative phases after shifting, one per eigenvector.
    pub shifted_phases: Vec<f64>,
}

/// Width-saturating constant generator for a gate.
#[derive(Clone, Debug)]
pub struct OptimalGenerator {
    pub h_star: HermitianOperator,
    pub t_star: f64,
    /// `h_star` shifted so its spectrum is symmetric about zero.
    pub centered: HermitianOperator,
}

/// Extracts eigenphases of `g` in (-pi, pi], clustered into spectral
/// projectors at `PHASE_CLUSTER_TOL` circular distance, ascending order.
pub fn eigenphases(g: &UnitaryOperator) -> Result<EigenphaseSet> {
    let n = g.dim();
    let pairs = unitary_eigenpairs(g.matrix())?;
    let raw: Vec<f64> = pairs.iter().map(|p| p.0).collect();

    // group consecutive phases, then merge across the -pi/pi seam
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for k in 0..n {
        match groups.last_mut() {
            Some(last) if raw[k] - raw[*last.last().unwrap()] <= PHASE_CLUSTER_TOL => last.push(k),
            _ => groups.push(vec![k]),
        }
    }
    if groups.len() > 1 {
        let first = raw[*groups.first().unwrap().first().unwrap()];
        let last = raw[*groups.last().unwrap().last().unwrap()];
        if first + std::f64::consts::TAU - last <= PHASE_CLUSTER_TOL {
            let tail = groups.pop().unwrap();
            groups.first_mut().unwrap().splice(0..0, tail);
        }
    }

    let mut clustered: Vec<(f64, Vec<usize>)> = groups
        .into_iter()
        .map(|members| {
            let mut sum = Complex64::new(0.0, 0.0);
            for &k in &members {
                sum += Complex64::from_polar(1.0, raw[k]);
            }
            (normalize_phase(sum.arg()), members)
        })
        .collect();
    clustered.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let mut vectors = CMatrix::zeros(n, n);
    let mut phases = Vec::with_capacity(n);
    let mut cluster_of = Vec::with_capacity(n);
    let mut clusters = Vec::with_capacity(clustered.len());
    let mut col = 0usize;
    for (ci, (repr, members)) in clustered.iter().enumerate() {
        let mut proj = CMatrix::zeros(n, n);
        for &k in members {
            let v: &CVector = &pairs[k].1;
            proj += v * v.adjoint();
            vectors.set_column(col, v);
            phases.push(raw[k]);
            cluster_of.push(ci);
            col += 1;
        }
        clusters.push(PhaseCluster {
            phase: *repr,
            rank: members.len(),
            projector: HermitianOperator::new(proj)?,
        });
    }

    Ok(EigenphaseSet {
        phases,
        shifts: vec![0; n],
        clusters,
        cluster_of,
        vectors,
        dim: n,
    })
}

/// Minimizes the eigenphase spread over 2*pi branch shifts.
///
/// Sorting the distinct phases on the circle, the minimal spread is
/// `2*pi - largest gap`, counting the wraparound gap; the chosen shifts
/// realize the spread as one contiguous arc. Ties between maximal gaps are
/// broken toward the gap whose counter-clockwise endpoint has the smallest
/// representative in (-pi, pi].
pub fn minimal_spread(e: &EigenphaseSet, omega_max: f64) -> Result<SpeedLimitResult> {
    if !omega_max.is_finite() || omega_max <= 0.0 {
        return Err(QslError::Range(format!(
            "omega_max must be > 0, got {omega_max}"
        )));
    }
    let reprs: Vec<f64> = e.clusters().iter().map(|c| c.phase).collect();
    let m = reprs.len();

    if m == 1 {
        return Ok(SpeedLimitResult {
            delta_phi_star: 0.0,
            t_star: 0.0,
            omega_max,
            bottleneck_pair: (0, 0),
            shifts: vec![0; e.dim()],
            shifted_phases: vec![reprs[0]; e.dim()],
        });
    }

    // gap g follows reprs[g] counter-clockwise; gap m-1 wraps around
    let gap_len = |g: usize| {
        if g + 1 < m {
            reprs[g + 1] - reprs[g]
        } else {
            reprs[0] + std::f64::consts::TAU - reprs[m - 1]
        }
    };
    let ccw_endpoint = |g: usize| reprs[(g + 1) % m];
    let mut best = 0usize;
    for g in 1..m {
        let diff = gap_len(g) - gap_len(best);
        if diff > 1e-12 || (diff.abs() <= 1e-12 && ccw_endpoint(g) < ccw_endpoint(best)) {
            best = g;
        }
    }
    let arc_start = ccw_endpoint(best);
    let delta_phi_star = std::f64::consts::TAU - gap_len(best);

    let cluster_shift: Vec<i32> = reprs
        .iter()
        .map(|&r| i32::from(r < arc_start - 1e-12))
        .collect();
    let shifted_repr: Vec<f64> = reprs
        .iter()
        .zip(&cluster_shift)
        .map(|(&r, &s)| r + f64::from(s) * std::f64::consts::TAU)
        .collect();

    let shifts: Vec<i32> = e.cluster_of().iter().map(|&c| cluster_shift[c]).collect();
    let shifted_phases: Vec<f64> = e.cluster_of().iter().map(|&c| shifted_repr[c]).collect();

    let argmin = shifted_phases
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let argmax = shifted_phases
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();

    Ok(SpeedLimitResult {
        delta_phi_star,
        t_star: delta_phi_star / omega_max,
        omega_max,
        bottleneck_pair: (argmin, argmax),
        shifts,
        shifted_phases,
    })
}

/// Builds the width-saturating generator `H* = -sum_c (psi_c / T*) P_c` from
/// the gate's spectral projectors and minimal-spread-shifted phases.
///
/// Fails with [`QslError::DegenerateGate`] when the gate is the identity up
/// to a global phase (T* = 0, no generator is needed).
pub fn optimal_generator(g: &UnitaryOperator, omega_max: f64) -> Result<OptimalGenerator> {
    let e = eigenphases(g)?;
    let s = minimal_spread(&e, omega_max)?;
    if s.delta_phi_star <= 0.0 {
        return Err(QslError::DegenerateGate);
    }
    let n = g.dim();
    let mut h = CMatrix::zeros(n, n);
    let mut idx = 0usize;
    for c in e.clusters() {
        let psi = s.shifted_phases[idx];
        h += c.projector.matrix() * Complex64::new(-psi / s.t_star, 0.0);
        idx += c.rank;
    }
    let h_star = HermitianOperator::new(h)?;
    let centered = center_hamiltonian(&h_star)?;
    Ok(OptimalGenerator {
        h_star,
        t_star: s.t_star,
        centered,
    })
}

/// `U(t) = exp(-i t h)` through the spectral decomposition of `h`.
pub fn evolve_constant(h: &HermitianOperator, t: f64) -> Result<UnitaryOperator> {
    let eig = eig_hermitian(h.matrix())?;
    let n = h.dim();
    let phases = CVector::from_iterator(
        n,
        eig.values.iter().map(|&e| Complex64::from_polar(1.0, -e * t)),
    );
    let u = &eig.vectors * CMatrix::from_diagonal(&phases) * eig.vectors.adjoint();
    UnitaryOperator::new(u)
}

/// Outcome of the centered-evolution matrix-element rate check.
#[derive(Clone, Debug, Serialize)]
pub struct RateCheckReport {
    /// Largest observed |d/dt U~_ab| over all elements and sample times.
    pub max_rate: f64,
    /// Spectral width of the generator.
    pub width: f64,
    /// The bound w/2 the rates are checked against.
    pub bound: f64,
    pub samples: usize,
    pub pass: bool,
}

/// Finite-difference check that every matrix element of the centered
/// evolution changes no faster than w(h)/2 (central differences, step 1e-5).
pub fn matrix_element_rate_check(h: &HermitianOperator, samples: usize) -> Result<RateCheckReport> {
    let centered = center_hamiltonian(h)?;
    let width = crate::algebra::spectral_width(h)?;
    let eig = eig_hermitian(centered.matrix())?;
    let n = h.dim();
    let evolve = |t: f64| -> CMatrix {
        let d = CVector::from_iterator(
            n,
            eig.values.iter().map(|&e| Complex64::from_polar(1.0, -e * t)),
        );
        &eig.vectors * CMatrix::from_diagonal(&d) * eig.vectors.adjoint()
    };

    let samples = samples.max(1);
    let span = if width > 1e-12 {
        std::f64::consts::TAU / width
    } else {
        1.0
    };
    let step = 1e-5;
    let mut max_rate = 0.0f64;
    for j in 0..samples {
        let t = (j as f64 + 0.5) / samples as f64 * span;
        let plus = evolve(t + step);
        let minus = evolve(t - step);
        for (p, q) in plus.iter().zip(minus.iter()) {
            let rate = (p - q).norm() / (2.0 * step);
            max_rate = max_rate.max(rate);
        }
    }
    let bound = 0.5 * width;
    Ok(RateCheckReport {
        max_rate,
        width,
        bound,
        samples,
        pass: max_rate <= bound + 1e-6,
    })
}
