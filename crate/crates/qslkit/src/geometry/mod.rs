//! Space-curve geometry of unitary evolution.
//!
//! A unit-norm traceless observable O traces a curve in operator space whose
//! tangent is the Heisenberg image `U^dag(t) O U(t)` written in an
//! orthonormal basis. The curve has unit speed, so its arc length equals the
//! evolution time, and its curvature `||[H(t), O]||` is capped by the
//! spectral width of the generator. For constant generators the frame
//! dynamics closes after finitely many Frenet vectors; the closure dimension
//! distinguishes planar arcs (2) from higher-dimensional helices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::algebra::{
    commutator, coordinates, hs_inner, hs_norm, spectral_width, HermitianOperator, OperatorBasis,
};
use crate::error::{QslError, Result};
use crate::numerics::{eig_hermitian, real_rank, CMatrix, CVector};

/// Tolerance on `| ||o|| - 1 |` for observables that seed curves.
const UNIT_NORM_TOL: f64 = 1e-9;

/// Piecewise-constant Hamiltonian schedule. Smooth drives must be
/// pre-discretized by the caller.
#[derive(Clone, Debug)]
pub struct Schedule {
    segments: Vec<(HermitianOperator, f64)>,
    dim: usize,
}

impl Schedule {
    pub fn new(segments: Vec<(HermitianOperator, f64)>) -> Result<Self> {
        if segments.is_empty() {
            return Err(QslError::Range("schedule needs at least one segment".into()));
        }
        let dim = segments[0].0.dim();
        for (h, d) in &segments {
            if h.dim() != dim {
                return Err(QslError::Dimension {
                    expected: dim,
                    got: h.dim(),
                });
            }
            if !d.is_finite() || *d <= 0.0 {
                return Err(QslError::Range(format!("segment duration must be > 0, got {d}")));
            }
        }
        Ok(Self { segments, dim })
    }

    /// Single constant segment.
    pub fn constant(h: HermitianOperator, duration: f64) -> Result<Self> {
        Self::new(vec![(h, duration)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn segments(&self) -> &[(HermitianOperator, f64)] {
        &self.segments
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|(_, d)| d).sum()
    }

    /// Generator active at time `t` (right-continuous; the final segment
    /// covers its right endpoint).
    pub fn generator_at(&self, t: f64) -> &HermitianOperator {
        let mut acc = 0.0;
        for (h, d) in &self.segments {
            acc += d;
            if t < acc {
                return h;
            }
        }
        &self.segments.last().unwrap().0
    }

    /// Largest segment spectral width.
    pub fn max_width(&self) -> Result<f64> {
        let mut w = 0.0f64;
        for (h, _) in &self.segments {
            w = w.max(spectral_width(h)?);
        }
        Ok(w)
    }
}

/// Sampled space curve: tangent and integrated base coordinates on a grid.
#[derive(Clone, Debug)]
pub struct SpaceCurve {
    times: Vec<f64>,
    /// One row per sample, one column per basis element.
    tangent: DMatrix<f64>,
    base: DMatrix<f64>,
    observable: HermitianOperator,
    basis_label: String,
    element_labels: Vec<String>,
}

impl SpaceCurve {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn tangent_samples(&self) -> &DMatrix<f64> {
        &self.tangent
    }

    pub fn base_samples(&self) -> &DMatrix<f64> {
        &self.base
    }

    pub fn observable(&self) -> &HermitianOperator {
        &self.observable
    }

    pub fn basis_label(&self) -> &str {
        &self.basis_label
    }

    pub fn element_labels(&self) -> &[String] {
        &self.element_labels
    }

    /// Dimension of the affine span of the tangent samples (rank of the
    /// sample matrix at `rel_tol`).
    pub fn tangent_rank(&self, rel_tol: f64) -> usize {
        real_rank(&self.tangent, rel_tol)
    }

    /// Sum of chord lengths of the base curve; second-order accurate
    /// estimate of the evolution time.
    pub fn arc_length(&self) -> f64 {
        let mut total = 0.0;
        for i in 1..self.base.nrows() {
            let diff = self.base.row(i) - self.base.row(i - 1);
            total += diff.norm();
        }
        total
    }

    /// Largest deviation of the tangent speed from 1.
    pub fn max_speed_error(&self) -> f64 {
        (0..self.tangent.nrows())
            .map(|i| (self.tangent.row(i).norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

fn require_curve_seed(o: &HermitianOperator) -> Result<()> {
    let norm = hs_norm(o);
    if (norm - 1.0).abs() > UNIT_NORM_TOL {
        return Err(QslError::NotUnitNorm { norm });
    }
    let tr = o.trace().norm();
    if tr > 1e-10 * o.dim() as f64 {
        return Err(QslError::NotTraceless { trace: tr });
    }
    Ok(())
}

/// Samples the space curve of `o` under a piecewise-constant schedule on a
/// uniform grid of `steps` intervals; the base curve is the cumulative
/// trapezoid integral of the tangent.
pub fn tangent_curve(
    schedule: &Schedule,
    o: &HermitianOperator,
    basis: &OperatorBasis,
    steps: usize,
) -> Result<SpaceCurve> {
    require_curve_seed(o)?;
    if o.dim() != schedule.dim() {
        return Err(QslError::Dimension {
            expected: schedule.dim(),
            got: o.dim(),
        });
    }
    if basis.dim() != o.dim() {
        return Err(QslError::Dimension {
            expected: basis.dim(),
            got: o.dim(),
        });
    }
    if steps < 2 {
        return Err(QslError::Range(format!("steps must be >= 2, got {steps}")));
    }

    let total = schedule.total_duration();
    let dt = total / steps as f64;
    let d = basis.len();
    let n = o.dim();

    // spectral factorization of each segment, so each sample is one
    // diagonal exponential away
    let factored: Vec<(crate::numerics::HermitianEigen, f64)> = schedule
        .segments()
        .iter()
        .map(|(h, dur)| Ok((eig_hermitian(h.matrix())?, *dur)))
        .collect::<Result<Vec<_>>>()?;
    let segment_exp = |k: usize, tau: f64| -> CMatrix {
        let (eig, _) = &factored[k];
        let diag = CVector::from_iterator(
            n,
            eig.values.iter().map(|&e| Complex64::from_polar(1.0, -e * tau)),
        );
        &eig.vectors * CMatrix::from_diagonal(&diag) * eig.vectors.adjoint()
    };

    let mut times = Vec::with_capacity(steps + 1);
    let mut tangent = DMatrix::<f64>::zeros(steps + 1, d);
    let mut boundaries = Vec::with_capacity(factored.len() + 1);
    boundaries.push(0.0f64);
    for (_, dur) in &factored {
        boundaries.push(boundaries.last().unwrap() + dur);
    }

    let mut seg = 0usize;
    let mut u_start = CMatrix::identity(n, n); // U at the current segment start
    for i in 0..=steps {
        let t = i as f64 * dt;
        while seg + 1 < factored.len() && t >= boundaries[seg + 1] - 1e-15 * total.max(1.0) {
            u_start = segment_exp(seg, factored[seg].1) * &u_start;
            seg += 1;
        }
        let u = segment_exp(seg, t - boundaries[seg]) * &u_start;
        let evolved = HermitianOperator::new(u.adjoint() * o.matrix() * &u)?;
        let coords = coordinates(&evolved, basis)?;
        for (j, c) in coords.coords.iter().enumerate() {
            tangent[(i, j)] = *c;
        }
        times.push(t);
    }

    let mut base = DMatrix::<f64>::zeros(steps + 1, d);
    for i in 1..=steps {
        for j in 0..d {
            base[(i, j)] = base[(i - 1, j)] + 0.5 * dt * (tangent[(i - 1, j)] + tangent[(i, j)]);
        }
    }

    let curve = SpaceCurve {
        times,
        tangent,
        base,
        observable: o.clone(),
        basis_label: basis.label().to_string(),
        element_labels: basis.element_labels().to_vec(),
    };
    let speed_err = curve.max_speed_error();
    if speed_err > 1e-9 {
        return Err(QslError::Numerical(format!(
            "unit-speed invariant violated by {speed_err:.3e}"
        )));
    }
    Ok(curve)
}

/// Curvature `||i [H(t_i), O]||` on the same uniform grid as
/// [`tangent_curve`]. Constant segments give constant values.
pub fn curvature_profile(
    schedule: &Schedule,
    o: &HermitianOperator,
    steps: usize,
) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(QslError::Range(format!("steps must be >= 2, got {steps}")));
    }
    let total = schedule.total_duration();
    let dt = total / steps as f64;
    (0..=steps)
        .map(|i| {
            let h = schedule.generator_at(i as f64 * dt);
            Ok(hs_norm(&commutator(h, o)?))
        })
        .collect()
}

/// Frenet-Serret frame of an observable under a constant generator.
#[derive(Clone, Debug)]
pub struct FrenetData {
    /// Orthonormal frame operators F_1..F_l; F_1 is the seed observable.
    pub frame: Vec<HermitianOperator>,
    /// Generalized curvatures k_1..k_{l-1}, all above the termination tolerance.
    pub curvatures: Vec<f64>,
    /// Number of frame vectors (dimension of the Krylov span).
    pub closure_dim: usize,
    /// Indices of curvatures within 10x of the termination tolerance;
    /// closure decisions near these are sensitive to the tolerance choice.
    pub borderline: Vec<usize>,
}

/// Builds the Frenet frame by the three-term recursion
/// `F~_{j+1} = i[H, F_j] + k_{j-1} F_{j-1}`, `k_j = ||F~_{j+1}||`,
/// terminating when the next curvature falls below `rank_tol * w(h)`.
/// A commuting pair yields `closure_dim = 1`.
pub fn frenet_frame(
    h: &HermitianOperator,
    o: &HermitianOperator,
    rank_tol: f64,
) -> Result<FrenetData> {
    require_curve_seed(o)?;
    if h.dim() != o.dim() {
        return Err(QslError::Dimension {
            expected: h.dim(),
            got: o.dim(),
        });
    }
    let width = spectral_width(h)?;
    if width <= 1e-14 {
        return Err(QslError::Degenerate("zero Hamiltonian has no Frenet frame".into()));
    }
    let tol = rank_tol * width;

    let mut frame = vec![o.clone()];
    let mut curvatures: Vec<f64> = Vec::new();
    let mut borderline = Vec::new();
    let max_dim = o.dim() * o.dim() - 1;

    loop {
        let j = frame.len();
        let mut next = commutator(h, &frame[j - 1])?;
        if j >= 2 {
            next = &next + &frame[j - 2].scale(curvatures[j - 2]);
        }
        // full re-orthogonalization guards the three-term recursion
        // against roundoff drift
        for f in &frame {
            let overlap = hs_inner(f, &next)?;
            next = &next - &f.scale(overlap);
        }
        let kappa = hs_norm(&next);
        if kappa <= tol {
            break;
        }
        if kappa <= 10.0 * tol {
            borderline.push(curvatures.len());
        }
        curvatures.push(kappa);
        frame.push(next.scale(1.0 / kappa));
        if frame.len() > max_dim {
            return Err(QslError::Numerical(
                "Frenet recursion exceeded the operator-space dimension".into(),
            ));
        }
    }

    Ok(FrenetData {
        closure_dim: frame.len(),
        frame,
        curvatures,
        borderline,
    })
}

/// Real antisymmetric matrix of `i ad_H` in an orthonormal basis, oriented
/// so the sampled Heisenberg tangent obeys `d r'/dt = A r'`.
#[derive(Clone, Debug)]
pub struct AdjointGenerator {
    matrix: DMatrix<f64>,
    basis_label: String,
}

impl AdjointGenerator {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn basis_label(&self) -> &str {
        &self.basis_label
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Computes `A_jl = <e_j, i[h, e_l]>`, i.e. the matrix of `i ad_h` acting on
/// coordinate vectors of Heisenberg-evolved observables.
pub fn adjoint_generator(h: &HermitianOperator, basis: &OperatorBasis) -> Result<AdjointGenerator> {
    if h.dim() != basis.dim() {
        return Err(QslError::Dimension {
            expected: basis.dim(),
            got: h.dim(),
        });
    }
    let m = basis.len();
    let mut a = DMatrix::<f64>::zeros(m, m);
    for l in 0..m {
        let image = commutator(h, &basis.elements()[l])?;
        for j in 0..m {
            a[(j, l)] = hs_inner(&basis.elements()[j], &image)?;
        }
    }
    let asym = (a.transpose() + &a).camax();
    if asym > 1e-10 {
        return Err(QslError::Numerical(format!(
            "adjoint generator is not antisymmetric (residual {asym:.3e})"
        )));
    }
    let skew = (&a - a.transpose()) * 0.5;
    Ok(AdjointGenerator {
        matrix: skew,
        basis_label: basis.label().to_string(),
    })
}

/// One invariant rotation plane of the adjoint generator.
#[derive(Clone, Debug)]
pub struct RotationPlane {
    pub curvature: f64,
    /// Orthonormal coordinate pair spanning the plane, oriented so that
    /// `A a = curvature * b` and `A b = -curvature * a`.
    pub axis_a: DVector<f64>,
    pub axis_b: DVector<f64>,
}

/// Canonical block decomposition of a real antisymmetric matrix into
/// rotation planes plus a kernel.
#[derive(Clone, Debug)]
pub struct PlaneDecomposition {
    pub planes: Vec<RotationPlane>,
    pub kernel_dim: usize,
    /// Ambient dimension n^2 - 1.
    pub dim: usize,
}

impl PlaneDecomposition {
    /// Curvatures with plane multiplicity, descending.
    pub fn curvatures(&self) -> Vec<f64> {
        self.planes.iter().map(|p| p.curvature).collect()
    }

    /// Rebuilds the antisymmetric matrix `sum_p k_p (b a^T - a b^T)`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let mut m = DMatrix::<f64>::zeros(self.dim, self.dim);
        for p in &self.planes {
            m += (&p.axis_b * p.axis_a.transpose() - &p.axis_a * p.axis_b.transpose())
                * p.curvature;
        }
        m
    }
}

/// Extracts rotation planes from an antisymmetric matrix through the
/// Hermitian eigenproblem of `i A`: each positive eigenvalue kappa gives a
/// plane spanned by the real and imaginary parts of its eigenvector.
/// Curvatures at or below `rel_tol` times the largest are part of the kernel.
pub fn plane_decomposition(a: &AdjointGenerator, rel_tol: f64) -> Result<PlaneDecomposition> {
    let d = a.dim();
    let mut k = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            k[(i, j)] = Complex64::new(0.0, a.matrix()[(i, j)]);
        }
    }
    let eig = eig_hermitian(&k)?;
    let max_abs = eig
        .values
        .iter()
        .map(|v| v.abs())
        .fold(0.0f64, f64::max);
    let threshold = rel_tol * max_abs;

    let mut planes = Vec::new();
    for (idx, &kappa) in eig.values.iter().enumerate() {
        if kappa <= threshold || max_abs == 0.0 {
            continue;
        }
        let v = eig.vectors.column(idx);
        let mut x = DVector::<f64>::from_iterator(d, v.iter().map(|z| z.re));
        let mut y = DVector::<f64>::from_iterator(d, v.iter().map(|z| z.im));
        // modified Gram-Schmidt scrub; x and y are orthogonal with equal
        // norms up to roundoff
        let xn = x.norm();
        if xn < 1e-12 {
            // rotate the eigenvector phase to make the real part nonzero
            std::mem::swap(&mut x, &mut y);
            y = -y;
        }
        x /= x.norm();
        let overlap = y.dot(&x);
        y -= &x * overlap;
        y /= y.norm();
        // K v = kappa v means A x = kappa y, A y = -kappa x
        let mut axis_a = x;
        let mut axis_b = y;
        // deterministic in-plane phase: first nonzero coordinate of a positive
        if let Some(first) = axis_a.iter().position(|c| c.abs() > 1e-9) {
            if axis_a[first] < 0.0 {
                axis_a = -axis_a;
                axis_b = -axis_b;
            }
        }
        planes.push(RotationPlane {
            curvature: kappa,
            axis_a,
            axis_b,
        });
    }
    planes.sort_by(|p, q| q.curvature.partial_cmp(&p.curvature).unwrap());
    let kernel_dim = d - 2 * planes.len();
    Ok(PlaneDecomposition {
        planes,
        kernel_dim,
        dim: d,
    })
}

/// Eigenframe certifier pair for one eigenvalue pair of a constant generator.
#[derive(Clone, Debug)]
pub struct EigenframePair {
    /// Indices (a, b) into the ascending eigenvalue list, a < b.
    pub pair: (usize, usize),
    pub x_op: HermitianOperator,
    pub y_op: HermitianOperator,
    /// `|E_a - E_b|`, the rotation rate of the (x, y) plane.
    pub gap: f64,
}

/// Unit-norm certifier pairs `X_ab, Y_ab` built in the eigenbasis of `h`,
/// one per eigenvalue pair `a < b`. Each pair seeds a Frenet frame of
/// closure dimension at most 2: commuting (gap 0) pairs close at 1, the
/// rest rotate in their own plane at rate `|E_a - E_b|`.
pub fn eigenframe_certifiers(h: &HermitianOperator) -> Result<Vec<EigenframePair>> {
    let eig = eig_hermitian(h.matrix())?;
    let n = h.dim();
    let scale = Complex64::new((n as f64 / 2.0).sqrt(), 0.0);
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n {
        for b in (a + 1)..n {
            let va = eig.vectors.column(a);
            let vb = eig.vectors.column(b);
            let cross = va * vb.adjoint();
            let x = (&cross + cross.adjoint()) * scale;
            let y = (&cross - cross.adjoint()) * Complex64::new(0.0, -1.0) * scale;
            out.push(EigenframePair {
                pair: (a, b),
                x_op: HermitianOperator::new(x)?,
                y_op: HermitianOperator::new(y)?,
                gap: (eig.values[a] - eig.values[b]).abs(),
            });
        }
    }
    Ok(out)
}

/// Analytic space curve for a constant generator: the observable splits into
/// a part commuting with `h` plus rotating plane components, so the tangent
/// is a sum of circular motions and the base curve integrates term by term.
/// Matches [`tangent_curve`] on the same grid to within discretization-free
/// roundoff.
pub fn closed_form_curve(
    h: &HermitianOperator,
    o: &HermitianOperator,
    basis: &OperatorBasis,
    t_grid: &[f64],
    rank_tol: f64,
) -> Result<SpaceCurve> {
    require_curve_seed(o)?;
    if t_grid.len() < 2 || t_grid[0] != 0.0 {
        return Err(QslError::Range("time grid must start at 0 with at least 2 points".into()));
    }
    for w in t_grid.windows(2) {
        if w[1] <= w[0] {
            return Err(QslError::Range("time grid must be strictly increasing".into()));
        }
    }
    let adjoint = adjoint_generator(h, basis)?;
    let dec = plane_decomposition(&adjoint, rank_tol)?;
    let c = coordinates(o, basis)?.as_dvector();

    // invariant component: remove all plane overlaps
    let mut c_par = c.clone();
    let mut overlaps = Vec::with_capacity(dec.planes.len());
    for p in &dec.planes {
        let alpha = c.dot(&p.axis_a);
        let beta = c.dot(&p.axis_b);
        c_par -= &p.axis_a * alpha;
        c_par -= &p.axis_b * beta;
        overlaps.push((alpha, beta));
    }

    let d = basis.len();
    let m = t_grid.len();
    let mut tangent = DMatrix::<f64>::zeros(m, d);
    let mut base = DMatrix::<f64>::zeros(m, d);
    for (i, &t) in t_grid.iter().enumerate() {
        let mut tan = c_par.clone();
        let mut pos = &c_par * t;
        for (p, &(alpha, beta)) in dec.planes.iter().zip(&overlaps) {
            if alpha == 0.0 && beta == 0.0 {
                continue;
            }
            let k = p.curvature;
            let (s, co) = (k * t).sin_cos();
            // d r'/dt = A r' rotates (alpha, beta) by angle k t
            let at = alpha * co - beta * s;
            let bt = alpha * s + beta * co;
            tan += &p.axis_a * at + &p.axis_b * bt;
            let ia = (alpha * s + beta * (co - 1.0)) / k;
            let ib = (alpha * (1.0 - co) + beta * s) / k;
            pos += &p.axis_a * ia + &p.axis_b * ib;
        }
        for j in 0..d {
            tangent[(i, j)] = tan[j];
            base[(i, j)] = pos[j];
        }
    }

    Ok(SpaceCurve {
        times: t_grid.to_vec(),
        tangent,
        base,
        observable: o.clone(),
        basis_label: basis.label().to_string(),
        element_labels: basis.element_labels().to_vec(),
    })
}

/// Independent closure-dimension oracle: rank of the Krylov matrix
/// `[o, ad_h o, ad_h^2 o, ...]` with operators vectorized entrywise. Each
/// column is normalized as it is generated; this leaves the span unchanged
/// but keeps the singular-value scale flat enough for a relative rank
/// threshold.
pub fn krylov_closure_dim(
    h: &HermitianOperator,
    o: &HermitianOperator,
    rank_tol: f64,
) -> Result<usize> {
    let n = o.dim();
    let depth = n * n - 1;
    let mut cols = DMatrix::<f64>::zeros(2 * n * n, depth);
    let mut current = o.clone();
    for j in 0..depth {
        let norm = hs_norm(&current);
        if norm <= 1e-300 {
            break;
        }
        current = current.scale(1.0 / norm);
        for (i, z) in current.matrix().iter().enumerate() {
            cols[(2 * i, j)] = z.re;
            cols[(2 * i + 1, j)] = z.im;
        }
        current = commutator(h, &current)?;
    }
    Ok(real_rank(&cols, rank_tol))
}

/// Curve serialization (CSV text and a JSON mirror with metadata).
pub mod export;

pub use export::{curve_to_csv, curve_to_json, CurveMetadata};
