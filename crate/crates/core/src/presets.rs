//! Bundled states and reference data used by the experiment runner and the
//! test suite.

use nalgebra::DVector;

use crate::operator::{tensor, CMatrix, C64};
use crate::state::{BipartiteState, StateError};

/// The maximally entangled two-qubit state (|00> + |11>)/sqrt(2) as a
/// density matrix.
pub fn bell_state() -> BipartiteState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v = DVector::from_vec(vec![
        C64::new(s, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(s, 0.0),
    ]);
    BipartiteState::new(&v * v.adjoint(), 2, 2).expect("Bell projector is a valid state")
}

/// The fixed correlation matrix (|1,0><0,1| + |0,1><1,0|)/10 shared by every
/// member of the [`constant_correlation_state`] family.
pub fn constant_correlation_matrix() -> CMatrix {
    let mut chi = CMatrix::zeros(4, 4);
    chi[(2, 1)] = C64::new(0.1, 0.0);
    chi[(1, 2)] = C64::new(0.1, 0.0);
    chi
}

/// S marginal of the constant-correlation family,
/// x |0><0| + (1-x) |1><1| + (|0><1| + |1><0|)/10.
pub fn constant_correlation_marginal_s(x: f64) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[
        C64::new(x, 0.0), C64::new(0.1, 0.0),
        C64::new(0.1, 0.0), C64::new(1.0 - x, 0.0),
    ])
}

/// B marginal of the constant-correlation family,
/// (1-x²) |0><0| + x² |1><1| + (|0><1| + |1><0|)/10.
pub fn constant_correlation_marginal_b(x: f64) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[
        C64::new(1.0 - x * x, 0.0), C64::new(0.1, 0.0),
        C64::new(0.1, 0.0), C64::new(x * x, 0.0),
    ])
}

/// The parameter family ρ(x) = ρ_S(x) ⊗ ρ_B(x) + χ with the fixed χ of
/// [`constant_correlation_matrix`]. Valid (positive semidefinite) for
/// x ∈ [0.27, 0.9]; validation runs on every call and reports violations.
pub fn constant_correlation_state(x: f64) -> Result<BipartiteState, StateError> {
    let product = tensor(
        &constant_correlation_marginal_s(x),
        &constant_correlation_marginal_b(x),
    );
    BipartiteState::new(product + constant_correlation_matrix(), 2, 2)
}

/// The mixed two-qubit initial state used by the bundled time-evolution
/// benchmark, written in the computational basis.
pub fn benchmark_state() -> BipartiteState {
    let e = |re: f64, im: f64| C64::new(re, im);
    // Upper triangle as printed; the lower triangle is its conjugate, so the
    // matrix is Hermitian by construction.
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = e(0.403041, 0.0);
    m[(0, 1)] = e(-0.181049, -0.038525);
    m[(0, 2)] = e(0.012466, 0.12214);
    m[(0, 3)] = e(-0.044462, 0.058024);
    m[(1, 1)] = e(0.314013, 0.0);
    m[(1, 2)] = e(0.025204, -0.101876);
    m[(1, 3)] = e(0.053753, 0.030605);
    m[(2, 2)] = e(0.065777, 0.0);
    m[(2, 3)] = e(-0.018686, 0.024092);
    m[(3, 3)] = e(0.217169, 0.0);
    for i in 0..4 {
        for j in 0..i {
            m[(i, j)] = m[(j, i)].conj();
        }
    }
    BipartiteState::new(m, 2, 2).expect("benchmark state is a valid density matrix")
}

/// Reference discrepancy intervals for the bundled benchmark: evolving
/// [`benchmark_state`] under the benchmark Hamiltonian over t ∈ [4, 8] with
/// a 4e-5 step yields these 24 maximal intervals of opposite rate signs.
/// Endpoints are quoted to three decimals.
pub fn reference_discrepancy_intervals() -> &'static [(f64, f64)] {
    &[
        (4.000, 4.008),
        (4.088, 4.093),
        (4.234, 4.238),
        (4.371, 4.432),
        (4.682, 4.702),
        (4.824, 4.829),
        (5.094, 5.097),
        (5.256, 5.275),
        (5.480, 5.484),
        (5.616, 5.628),
        (5.727, 5.732),
        (6.018, 6.019),
        (6.194, 6.198),
        (6.315, 6.325),
        (6.465, 6.476),
        (6.585, 6.587),
        (6.885, 6.887),
        (6.901, 6.931),
        (7.051, 7.056),
        (7.177, 7.218),
        (7.365, 7.374),
        (7.496, 7.497),
        (7.636, 7.643),
        (7.893, 7.895),
    ]
}
