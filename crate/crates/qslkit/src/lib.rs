//! Exact spectral-width quantum speed limits and space-curve gate geometry.
//!
//! `qslkit` computes, for any target unitary `G` on up to four qubits:
//!
//! - the exact minimal gate time `T* = dphi* / Omega_max` under the
//!   spectral-width constraint `w(H) = E_max - E_min <= Omega_max`, where
//!   `dphi*` is the smallest eigenphase spread of `G` over 2*pi branch shifts;
//! - the width-saturating constant generator `H*` that reaches `G` at `T*`;
//! - the operator-space geometry of the evolution: unit-speed space curves
//!   traced by Heisenberg-evolved observables, their Frenet frames and
//!   generalized curvatures, closure dimensions, and the rotation-plane
//!   decomposition of the adjoint generator;
//! - certifying sets of observables (canonical two-operator sets, eigenbasis
//!   P/Q pairs, Pauli families), per-observable lower bounds, and the
//!   bottleneck/overhead diagnostic that explains why some gates cannot
//!   saturate the naive planar bound.
//!
//! The numerical conventions are fixed throughout: the normalized
//! Hilbert-Schmidt inner product `<A, B> = Tr(A^dag B)/n` (Pauli strings are
//! unit-norm), hbar = 1, and gate comparisons up to a global phase.

pub mod algebra;
pub mod certify;
pub mod error;
pub mod gates;
pub mod geometry;
pub mod numerics;
pub mod qsl;

pub use algebra::{
    center_hamiltonian, commutator, coordinates, hs_inner, hs_norm, pauli_basis, spectral_width,
    CoordinateVector, DenseOperator, HermitianOperator, OperatorBasis, PauliAxis, PauliString,
    UnitaryOperator,
};
pub use error::{QslError, Result};
pub use qsl::{
    eigenphases, evolve_constant, matrix_element_rate_check, minimal_spread, optimal_generator,
    EigenphaseSet, OptimalGenerator, SpeedLimitResult,
};

/// Default relative tolerance for rank and curvature-termination decisions.
/// The CLI exposes an override through the `QSLKIT_TOL` environment variable.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;
