//! Dense numerical kernels: Hermitian eigendecomposition, eigenpairs of
//! unitary (normal) matrices, rank estimation, and random matrix samplers
//! used by tests and benchmarks.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{QslError, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Eigendecomposition of a Hermitian matrix, sorted by ascending eigenvalue.
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, one column per eigenvalue, same order.
    pub vectors: CMatrix,
}

/// Diagonalizes a Hermitian matrix by cyclic complex Jacobi sweeps.
///
/// Jacobi is quadratically convergent and keeps residuals near machine
/// precision for the small dense matrices this crate works with (n <= 256),
/// which matters because downstream tolerances sit at 1e-9. The caller is
/// responsible for symmetry; the input is symmetrized to scrub roundoff.
pub fn eig_hermitian(m: &CMatrix) -> Result<HermitianEigen> {
    let n = m.nrows();
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let scale = 1.0 + sym.camax();

    let mut a = sym.clone();
    let mut v = CMatrix::identity(n, n);
    let mut converged = false;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= 1e-14 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[(p, q)];
                let gn = g.norm();
                if gn <= 1e-18 * scale {
                    continue;
                }
                // phase that makes the off-diagonal entry real, then a
                // standard real Jacobi rotation on the 2x2 block
                let phase = g / Complex64::new(gn, 0.0);
                let alpha = a[(p, p)].re;
                let beta = a[(q, q)].re;
                let tau = (beta - alpha) / (2.0 * gn);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let cos = 1.0 / (1.0 + t * t).sqrt();
                let sin = t * cos;
                // column rotation: J_pp = c, J_pq = s, J_qp = -s e^{-i phi}
                // (phi = arg g), J_qq = c e^{-i phi}
                let jpp = Complex64::new(cos, 0.0);
                let jpq = Complex64::new(sin, 0.0);
                let jqp = -phase.conj() * sin;
                let jqq = phase.conj() * cos;
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * jpp + aiq * jqp;
                    a[(i, q)] = aip * jpq + aiq * jqq;
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * jpp + viq * jqp;
                    v[(i, q)] = vip * jpq + viq * jqq;
                }
                for i in 0..n {
                    let api = a[(p, i)];
                    let aqi = a[(q, i)];
                    a[(p, i)] = jpp.conj() * api + jqp.conj() * aqi;
                    a[(q, i)] = jpq.conj() * api + jqq.conj() * aqi;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    if !converged {
        return Err(QslError::Numerical(
            "hermitian Jacobi iteration did not converge".into(),
        ));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &v.column(i));
    }

    // Guard against a silently broken factorization.
    let recon = &vectors
        * CMatrix::from_diagonal(&CVector::from_iterator(
            n,
            values.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
        * vectors.adjoint();
    let residual = (recon - &sym).camax();
    if residual > 1e-12 * scale {
        return Err(QslError::Numerical(format!(
            "hermitian eigendecomposition residual {residual:.3e}"
        )));
    }
    Ok(HermitianEigen { values, vectors })
}

/// Eigenpairs (phase, eigenvector) of a unitary matrix, phases in (-pi, pi].
///
/// A unitary U is normal, so it shares an eigenbasis with the commuting
/// Hermitian pair C = (U + U^dag)/2 and S = (U - U^dag)/(2i). Diagonalizing
/// the generic combination C + gamma*S resolves that common basis with a
/// single Hermitian solve; the phase is then read off the Rayleigh quotient
/// v^dag U v. A few fallback values of gamma cover unlucky collisions where
/// two distinct phases give the same combined eigenvalue.
pub fn unitary_eigenpairs(u: &CMatrix) -> Result<Vec<(f64, CVector)>> {
    let n = u.nrows();
    let c = (u + u.adjoint()) * Complex64::new(0.5, 0.0);
    let s = (u - u.adjoint()) * Complex64::new(0.0, -0.5);
    for gamma in [0.618_033_988_749_894_9, 1.754_877_666_246_692_8, 0.287_537_05] {
        let mix = &c + &s * Complex64::new(gamma, 0.0);
        let eig = eig_hermitian(&mix)?;
        let mut pairs: Vec<(f64, CVector)> = Vec::with_capacity(n);
        let mut max_residual = 0.0f64;
        for k in 0..n {
            let v = eig.vectors.column(k).into_owned();
            let uv = u * &v;
            let lambda = v.dotc(&uv);
            let phase = lambda.arg();
            let residual = (&uv - &v * lambda).norm();
            max_residual = max_residual.max(residual);
            pairs.push((normalize_phase(phase), v));
        }
        if max_residual <= 1e-10 {
            pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            return Ok(pairs);
        }
    }
    Err(QslError::Numerical(
        "unitary eigenpair extraction did not converge".into(),
    ))
}

/// Maps an angle to the branch (-pi, pi].
pub fn normalize_phase(phi: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut p = phi.rem_euclid(two_pi);
    if p > std::f64::consts::PI {
        p -= two_pi;
    }
    p
}

/// Singular values of a complex matrix via its real 2N x 2N embedding.
/// Each complex singular value appears twice in the embedded spectrum.
pub fn complex_singular_values(m: &CMatrix) -> Vec<f64> {
    let (r, c) = m.shape();
    let mut real = DMatrix::<f64>::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            let z = m[(i, j)];
            real[(i, j)] = z.re;
            real[(i, j + c)] = -z.im;
            real[(i + r, j)] = z.im;
            real[(i + r, j + c)] = z.re;
        }
    }
    let svd = real.svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    // keep one copy of each doubled value
    sv.into_iter().step_by(2).collect()
}

/// Rank of a real matrix: singular values above `rel_tol` times the largest.
pub fn real_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    let svd = m.clone().svd(false, false);
    let max = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    if max == 0.0 {
        return 0;
    }
    svd.singular_values.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Nullity of a complex matrix: number of singular values at or below
/// `rel_tol` times the largest one.
pub fn complex_nullity(m: &CMatrix, rel_tol: f64) -> usize {
    let sv = complex_singular_values(m);
    let max = sv.iter().cloned().fold(0.0f64, f64::max);
    let cols = m.ncols();
    if max == 0.0 {
        return cols;
    }
    sv.iter().filter(|&&s| s <= rel_tol * max).count() + (cols - sv.len().min(cols))
}

/// Random matrix with independent standard complex Gaussian entries.
pub fn random_complex_gaussian<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    use rand::distributions::Distribution;
    let normal = rand_distr_standard();
    CMatrix::from_fn(n, n, |_, _| {
        Complex64::new(normal.sample(rng), normal.sample(rng))
    })
}

// Box-Muller standard normal; avoids pulling in rand_distr for one sampler.
struct StdNormal;

impl rand::distributions::Distribution<f64> for StdNormal {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let u: f64 = rng.gen::<f64>();
            let v: f64 = rng.gen::<f64>();
            if u > f64::MIN_POSITIVE {
                return (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos();
            }
        }
    }
}

fn rand_distr_standard() -> StdNormal {
    StdNormal
}

/// Haar-like random unitary from the QR factorization of a complex Gaussian
/// matrix (modified Gram-Schmidt on the columns).
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let g = random_complex_gaussian(rng, n);
    let mut q = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut v: CVector = g.column(j).into_owned();
        for i in 0..j {
            let qi = q.column(i);
            let proj = qi.dotc(&v);
            v -= CVector::from_iterator(n, qi.iter().map(|z| z * proj));
        }
        let norm = v.norm();
        v /= Complex64::new(norm, 0.0);
        q.set_column(j, &v);
    }
    q
}

/// Random Hermitian matrix (G + G^dag)/2 with complex Gaussian G.
pub fn random_hermitian_matrix<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let g = random_complex_gaussian(rng, n);
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}
