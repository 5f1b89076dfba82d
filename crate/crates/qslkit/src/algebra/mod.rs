//! Dense operator arithmetic over the traceless-Hermitian operator space.
//!
//! All inner products and norms use the normalized Hilbert-Schmidt convention
//! `<A, B> = Tr(A^dag B) / n`, under which Pauli strings are unit-norm. The
//! unnormalized form is never exposed.

mod pauli;

pub use pauli::{enumerate_pauli_words, pauli_basis, pauli_sum, PauliAxis, PauliString};

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QslError, Result};
use crate::numerics::{eig_hermitian, CMatrix};

/// Relative Hermiticity tolerance for operator construction.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Absolute unitarity tolerance for operator construction.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Dense complex square matrix on an n-dimensional Hilbert space, n >= 2.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    entries: CMatrix,
}

impl DenseOperator {
    pub fn new(entries: CMatrix) -> Result<Self> {
        let (r, c) = entries.shape();
        if r != c {
            return Err(QslError::Range(format!("matrix must be square, got {r}x{c}")));
        }
        if r < 2 {
            return Err(QslError::Range(format!("dimension must be >= 2, got {r}")));
        }
        Ok(Self { dim: r, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }
}

/// Hermitian operator; inputs within tolerance are symmetrized, anything
/// further off is rejected so malformed data fails loudly.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    base: DenseOperator,
}

impl HermitianOperator {
    pub fn new(entries: CMatrix) -> Result<Self> {
        let scale = 1.0 + entries.camax();
        let residual = (&entries - entries.adjoint()).camax();
        if residual > HERMITICITY_TOL * scale {
            return Err(QslError::NotHermitian { residual });
        }
        let sym = (&entries + entries.adjoint()) * Complex64::new(0.5, 0.0);
        Ok(Self {
            base: DenseOperator::new(sym)?,
        })
    }

    /// Zero operator on an n-dimensional space.
    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(CMatrix::zeros(n, n))
    }

    /// Diagonal operator from real entries.
    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let mut m = CMatrix::zeros(n, n);
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = Complex64::new(d, 0.0);
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        self.base.matrix()
    }

    pub fn trace(&self) -> Complex64 {
        self.base.trace()
    }

    /// Real eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(eig_hermitian(self.matrix())?.values)
    }

    pub fn is_traceless(&self) -> bool {
        self.trace().norm() <= 1e-10 * self.dim() as f64
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            base: DenseOperator {
                dim: self.dim(),
                entries: self.matrix() * Complex64::new(factor, 0.0),
            },
        }
    }
}

impl std::ops::Add for &HermitianOperator {
    type Output = HermitianOperator;
    /// Panics on dimension mismatch, like nalgebra's own matrix sums.
    fn add(self, rhs: &HermitianOperator) -> HermitianOperator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in operator sum");
        HermitianOperator {
            base: DenseOperator {
                dim: self.dim(),
                entries: self.matrix() + rhs.matrix(),
            },
        }
    }
}

impl std::ops::Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: &HermitianOperator) -> HermitianOperator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in operator difference");
        HermitianOperator {
            base: DenseOperator {
                dim: self.dim(),
                entries: self.matrix() - rhs.matrix(),
            },
        }
    }
}

impl std::ops::Neg for &HermitianOperator {
    type Output = HermitianOperator;
    fn neg(self) -> HermitianOperator {
        self.scale(-1.0)
    }
}

/// Unitary operator, validated to `UNITARITY_TOL`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryOperator {
    base: DenseOperator,
}

impl UnitaryOperator {
    pub fn new(entries: CMatrix) -> Result<Self> {
        let n = entries.nrows();
        let residual = (entries.adjoint() * &entries - CMatrix::identity(n, n)).camax();
        if residual > UNITARITY_TOL {
            return Err(QslError::NotUnitary { residual });
        }
        Ok(Self {
            base: DenseOperator::new(entries)?,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(CMatrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        self.base.matrix()
    }

    /// Heisenberg-picture image `Ad_U(o) = U^dag o U`.
    pub fn ad(&self, o: &HermitianOperator) -> Result<HermitianOperator> {
        check_dims(self.dim(), o.dim())?;
        HermitianOperator::new(self.matrix().adjoint() * o.matrix() * self.matrix())
    }

    /// Phase-invariant gate fidelity `|Tr(self^dag other)| / n`.
    pub fn fidelity(&self, other: &UnitaryOperator) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        Ok((self.matrix().adjoint() * other.matrix()).trace().norm() / self.dim() as f64)
    }
}

/// Coordinates of an operator in an orthonormal basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordinateVector {
    pub coords: Vec<f64>,
    pub basis_label: String,
}

impl CoordinateVector {
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn as_dvector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.coords)
    }
}

/// Ordered orthonormal basis of the traceless-Hermitian operator space,
/// n^2 - 1 elements with per-element display labels.
#[derive(Clone, Debug)]
pub struct OperatorBasis {
    elements: Vec<HermitianOperator>,
    element_labels: Vec<String>,
    label: String,
    dim: usize,
}

impl OperatorBasis {
    /// Validates completeness in count, orthonormality (1e-10), and
    /// tracelessness (1e-10 * n) before accepting the elements.
    pub fn new(
        elements: Vec<HermitianOperator>,
        element_labels: Vec<String>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if elements.is_empty() {
            return Err(QslError::Range("basis must be nonempty".into()));
        }
        let dim = elements[0].dim();
        if elements.len() != dim * dim - 1 {
            return Err(QslError::Range(format!(
                "expected {} basis elements for dim {dim}, got {}",
                dim * dim - 1,
                elements.len()
            )));
        }
        if element_labels.len() != elements.len() {
            return Err(QslError::Range("one label per basis element required".into()));
        }
        for e in &elements {
            check_dims(dim, e.dim())?;
            if e.trace().norm() > 1e-10 * dim as f64 {
                return Err(QslError::NotTraceless {
                    trace: e.trace().norm(),
                });
            }
        }
        for i in 0..elements.len() {
            for j in i..elements.len() {
                let ip = hs_inner(&elements[i], &elements[j])?;
                let target = if i == j { 1.0 } else { 0.0 };
                if (ip - target).abs() > 1e-10 {
                    return Err(QslError::Numerical(format!(
                        "basis not orthonormal: <e{i}, e{j}> = {ip:.12}"
                    )));
                }
            }
        }
        Ok(Self {
            elements,
            element_labels,
            label: label.into(),
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn element_labels(&self) -> &[String] {
        &self.element_labels
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Reassembles an operator from coordinates: sum_k c_k * e_k.
    pub fn assemble(&self, coords: &[f64]) -> Result<HermitianOperator> {
        if coords.len() != self.len() {
            return Err(QslError::Dimension {
                expected: self.len(),
                got: coords.len(),
            });
        }
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for (c, e) in coords.iter().zip(&self.elements) {
            m += e.matrix() * Complex64::new(*c, 0.0);
        }
        HermitianOperator::new(m)
    }
}

fn check_dims(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(QslError::Dimension { expected, got });
    }
    Ok(())
}

/// Normalized Hilbert-Schmidt inner product `Re Tr(a^dag b) / n`.
pub fn hs_inner(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    let mut acc = Complex64::new(0.0, 0.0);
    // Tr(a^dag b) = sum_ij conj(a_ij) b_ij
    for (x, y) in a.matrix().iter().zip(b.matrix().iter()) {
        acc += x.conj() * y;
    }
    Ok(acc.re / a.dim() as f64)
}

/// Normalized Hilbert-Schmidt norm `sqrt(<a, a>)`. Zero iff `a` vanishes
/// (within roundoff, ~1e-12).
pub fn hs_norm(a: &HermitianOperator) -> f64 {
    let sq: f64 = a.matrix().iter().map(|z| z.norm_sqr()).sum();
    (sq / a.dim() as f64).sqrt()
}

/// Hermitian commutator `i [h, o]`; antisymmetric in its arguments up to sign.
pub fn commutator(h: &HermitianOperator, o: &HermitianOperator) -> Result<HermitianOperator> {
    check_dims(h.dim(), o.dim())?;
    let hm = h.matrix();
    let om = o.matrix();
    let c = (hm * om - om * hm) * Complex64::new(0.0, 1.0);
    HermitianOperator::new(c)
}

/// Instantaneous spectral width `E_max - E_min`; invariant under energy
/// shifts `h -> h + lambda I`.
pub fn spectral_width(h: &HermitianOperator) -> Result<f64> {
    let ev = h.eigenvalues()?;
    Ok(ev[ev.len() - 1] - ev[0])
}

/// Shifts the spectrum to be symmetric about zero: `h - (E_max + E_min)/2 I`.
pub fn center_hamiltonian(h: &HermitianOperator) -> Result<HermitianOperator> {
    let ev = h.eigenvalues()?;
    let mid = 0.5 * (ev[ev.len() - 1] + ev[0]);
    let n = h.dim();
    HermitianOperator::new(h.matrix() - CMatrix::identity(n, n) * Complex64::new(mid, 0.0))
}

/// Projects a traceless operator onto basis coordinates,
/// `c_k = <e_k, a>`. Rejects operators with `|Tr a| > 1e-10 n`.
pub fn coordinates(a: &HermitianOperator, basis: &OperatorBasis) -> Result<CoordinateVector> {
    check_dims(basis.dim(), a.dim())?;
    let tr = a.trace().norm();
    if tr > 1e-10 * a.dim() as f64 {
        return Err(QslError::NotTraceless { trace: tr });
    }
    let coords = basis
        .elements()
        .iter()
        .map(|e| hs_inner(e, a))
        .collect::<Result<Vec<f64>>>()?;
    Ok(CoordinateVector {
        coords,
        basis_label: basis.label().to_string(),
    })
}

// --- JSON wire format: {"dim": n, "re": [[..]], "im": [[..]]}, row-major ---

#[derive(Serialize, Deserialize)]
struct OperatorJson {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl OperatorJson {
    fn from_matrix(m: &CMatrix) -> Self {
        let n = m.nrows();
        let re = (0..n)
            .map(|i| (0..n).map(|j| m[(i, j)].re).collect())
            .collect();
        let im = (0..n)
            .map(|i| (0..n).map(|j| m[(i, j)].im).collect())
            .collect();
        Self { dim: n, re, im }
    }

    fn into_matrix(self) -> std::result::Result<CMatrix, String> {
        let n = self.dim;
        if self.re.len() != n || self.im.len() != n {
            return Err(format!("expected {n} rows"));
        }
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            if self.re[i].len() != n || self.im[i].len() != n {
                return Err(format!("row {i} must have {n} entries"));
            }
            for j in 0..n {
                m[(i, j)] = Complex64::new(self.re[i][j], self.im[i][j]);
            }
        }
        Ok(m)
    }
}

macro_rules! impl_operator_serde {
    ($ty:ty) => {
        impl Serialize for $ty {
            fn serialize<S: serde::Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                OperatorJson::from_matrix(self.matrix()).serialize(serializer)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: serde::Deserializer<'de>>(
                deserializer: D,
            ) -> std::result::Result<Self, D::Error> {
                let json = OperatorJson::deserialize(deserializer)?;
                let m = json.into_matrix().map_err(serde::de::Error::custom)?;
                <$ty>::new(m).map_err(serde::de::Error::custom)
            }
        }
    };
}

impl_operator_serde!(DenseOperator);
impl_operator_serde!(HermitianOperator);
impl_operator_serde!(UnitaryOperator);
