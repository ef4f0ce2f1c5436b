//! Exact unitary dynamics of bipartite systems and the analytic rate
//! formulas for the two correlation measures.
//!
//! Evolution is computed by eigendecomposition of the total Hamiltonian, so
//! there is no step-integration error: a trajectory is exact at every grid
//! point and its cost is one diagonalization plus O(d³) work per point.
//!
//! The central quantities are the two rates
//!
//! ```text
//! d/dt I      = i Tr[[H_I, χ] log(ρ_S ⊗ ρ_B)]
//! d/dt ‖χ‖₂²  = 2i Tr[[H, χ] ρ_S ⊗ ρ_B] - 2 Tr[d(ρ_S ⊗ ρ_B)/dt · χ]
//! ```
//!
//! evaluated analytically (no finite differences), which keeps sign analyses
//! near rate zero-crossings free of step-size artifacts. The scanner
//! [`discrepancy_scan`] extracts the time intervals on which the two rates
//! disagree in sign.

use rayon::prelude::*;
use thiserror::Error;

use crate::basis::{sigma_x, sigma_y, sigma_z};
use crate::config::Tolerances;
use crate::correlation::{correlation_matrix, qmi};
use crate::operator::{
    commutator, hermitian_eig, hermiticity_deviation, identity, log_frechet_derivative,
    matrix_log_on_support, norm, partial_trace, tensor, CMatrix, HermitianEig, NormKind,
    OperatorError, Subsystem, C64,
};
use crate::state::{von_neumann_entropy, BipartiteState};

/// Largest number of grid points [`sweep`] accepts.
pub const DEFAULT_GRID_CAP: usize = 10_000_000;

/// ‖χ‖₂ below this threshold makes the norm rate ill-defined.
const ZERO_CHI_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum DynamicsError {
    /// A component of the Hamiltonian failed the Hermiticity check.
    #[error("Hamiltonian part `{part}` is not Hermitian: deviation {deviation:.3e}")]
    NonHermitianPart { part: &'static str, deviation: f64 },

    /// Mismatched operator dimensions in a Hamiltonian decomposition.
    #[error("Hamiltonian dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A reduced state has an eigenvalue inside the support threshold while
    /// strict logarithms were requested.
    #[error("singular marginal: min eigenvalue {min_eigenvalue:.3e}")]
    SingularMarginal { min_eigenvalue: f64 },

    /// The requested time grid exceeds the configured cap.
    #[error("time grid of {points} points exceeds the cap of {cap}")]
    GridTooLarge { points: usize, cap: usize },

    /// ‖χ‖₂ is numerically zero, so a normalized-χ quantity is undefined.
    #[error("correlation matrix is numerically zero")]
    ZeroChi,
}

impl From<OperatorError> for DynamicsError {
    fn from(e: OperatorError) -> Self {
        match e {
            OperatorError::NonHermitianInput { deviation } => {
                DynamicsError::NonHermitianPart { part: "input", deviation }
            }
            OperatorError::SingularLog { min_eigenvalue } => {
                DynamicsError::SingularMarginal { min_eigenvalue }
            }
            OperatorError::DimensionMismatch { expected, got } => {
                DynamicsError::DimensionMismatch { expected, got }
            }
        }
    }
}

/// A total Hamiltonian H = H_S ⊗ I + I ⊗ H_B + H_I together with its parts.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianDecomposition {
    h_s: CMatrix,
    h_b: CMatrix,
    h_i: CMatrix,
    h_total: CMatrix,
    d_s: usize,
    d_b: usize,
}

impl HamiltonianDecomposition {
    /// Assemble and validate a decomposition from its three parts.
    pub fn new(h_s: CMatrix, h_b: CMatrix, h_i: CMatrix) -> Result<Self, DynamicsError> {
        let tol = Tolerances::default();
        for (part, m) in [("H_S", &h_s), ("H_B", &h_b), ("H_I", &h_i)] {
            let deviation = hermiticity_deviation(m);
            if deviation > tol.hermiticity {
                return Err(DynamicsError::NonHermitianPart { part, deviation });
            }
        }
        let (d_s, d_b) = (h_s.nrows(), h_b.nrows());
        if h_i.nrows() != d_s * d_b {
            return Err(DynamicsError::DimensionMismatch { expected: d_s * d_b, got: h_i.nrows() });
        }
        let h_total = tensor(&h_s, &identity(d_b)) + tensor(&identity(d_s), &h_b) + &h_i;
        Ok(Self { h_s, h_b, h_i, h_total, d_s, d_b })
    }

    pub fn h_s(&self) -> &CMatrix {
        &self.h_s
    }

    pub fn h_b(&self) -> &CMatrix {
        &self.h_b
    }

    pub fn h_i(&self) -> &CMatrix {
        &self.h_i
    }

    pub fn h_total(&self) -> &CMatrix {
        &self.h_total
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d_s, self.d_b)
    }
}

/// The two-qubit benchmark system bundled with this crate: split local
/// fields H_S = σ_z, H_B = -σ_z/2 and the anisotropic exchange coupling
/// H_I = (5/2) σ_x⊗σ_x + (1/2) σ_y⊗σ_y + (9/2) σ_z⊗σ_z.
pub fn benchmark_hamiltonian() -> HamiltonianDecomposition {
    let h_i = tensor(&sigma_x(), &sigma_x()).scale(2.5)
        + tensor(&sigma_y(), &sigma_y()).scale(0.5)
        + tensor(&sigma_z(), &sigma_z()).scale(4.5);
    HamiltonianDecomposition::new(sigma_z(), sigma_z().scale(-0.5), h_i)
        .expect("benchmark parts are Hermitian by construction")
}

/// Exact propagator: the eigendecomposition of H_total, reusable across
/// arbitrarily many evaluation times.
#[derive(Debug, Clone)]
pub struct Propagator {
    eig: HermitianEig,
    d_s: usize,
    d_b: usize,
}

impl Propagator {
    pub fn new(h: &HamiltonianDecomposition) -> Self {
        let eig = hermitian_eig(h.h_total()).expect("decomposition is Hermitian by construction");
        let (d_s, d_b) = h.dims();
        Self { eig, d_s, d_b }
    }

    /// ρ(t) = U ρ(0) U† with U = e^{-i H t}.
    pub fn evolve(&self, state0: &BipartiteState, t: f64) -> BipartiteState {
        let rotated = self.eig.eigenvectors.adjoint() * state0.matrix() * &self.eig.eigenvectors;
        self.evolve_rotated(&rotated, t)
    }

    /// Move ρ(0) into the H eigenbasis once; use with [`Self::evolve_rotated`]
    /// when many times are needed for one initial state.
    fn rotate(&self, state0: &BipartiteState) -> CMatrix {
        self.eig.eigenvectors.adjoint() * state0.matrix() * &self.eig.eigenvectors
    }

    fn evolve_rotated(&self, rotated: &CMatrix, t: f64) -> BipartiteState {
        let d = rotated.nrows();
        let phases: Vec<C64> =
            self.eig.eigenvalues.iter().map(|&e| (-C64::i() * e * t).exp()).collect();
        let mut dressed = rotated.clone();
        for i in 0..d {
            for j in 0..d {
                dressed[(i, j)] *= phases[i] * phases[j].conj();
            }
        }
        let evolved = &self.eig.eigenvectors * dressed * self.eig.eigenvectors.adjoint();
        BipartiteState::trusted(evolved, self.d_s, self.d_b)
    }
}

/// Evolve a state for time `t` under the given Hamiltonian.
pub fn evolve(state0: &BipartiteState, h: &HamiltonianDecomposition, t: f64) -> BipartiteState {
    Propagator::new(h).evolve(state0, t)
}

/// d/dt of the reduced states: (Tr_B[-i[H, ρ]], Tr_S[-i[H, ρ]]).
pub fn marginal_rates(state: &BipartiteState, h: &HamiltonianDecomposition) -> (CMatrix, CMatrix) {
    let drho = commutator(h.h_total(), state.matrix()) * (-C64::i());
    let dims = state.dims();
    let ds = partial_trace(&drho, dims, Subsystem::S).expect("validated dims");
    let db = partial_trace(&drho, dims, Subsystem::B).expect("validated dims");
    (ds, db)
}

fn assert_compatible(state: &BipartiteState, h: &HamiltonianDecomposition) {
    assert_eq!(state.dims(), h.dims(), "state and Hamiltonian factorizations differ");
}

fn real_part(label: &str, z: C64) -> f64 {
    debug_assert!(
        z.im.abs() <= 1e-10 * (1.0 + z.re.abs()),
        "{label}: imaginary residue {:.3e} too large",
        z.im
    );
    z.re
}

/// Analytic rate of the mutual information,
/// i Tr[[H_I, χ] log(ρ_S ⊗ ρ_B)], in nats per unit time.
///
/// Logarithms are taken on the support of the marginals, so rank-deficient
/// instants do not fault; use [`qmi_rate_strict`] to surface them instead.
pub fn qmi_rate(state: &BipartiteState, h: &HamiltonianDecomposition) -> f64 {
    assert_compatible(state, h);
    let chi = correlation_matrix(state);
    let log_p = log_of_product(state);
    let value = (commutator(h.h_i(), chi.matrix()) * log_p).trace() * C64::i();
    real_part("qmi_rate", value)
}

/// [`qmi_rate`], but failing with [`DynamicsError::SingularMarginal`] when a
/// marginal eigenvalue falls inside the support threshold.
pub fn qmi_rate_strict(
    state: &BipartiteState,
    h: &HamiltonianDecomposition,
) -> Result<f64, DynamicsError> {
    let support = Tolerances::default().support;
    let min_eigenvalue = state
        .marginal_s()
        .eigenvalues()
        .iter()
        .chain(state.marginal_b().eigenvalues().iter())
        .fold(f64::INFINITY, |acc, &x| acc.min(x));
    if min_eigenvalue <= support {
        return Err(DynamicsError::SingularMarginal { min_eigenvalue });
    }
    Ok(qmi_rate(state, h))
}

/// The unsimplified form of the mutual-information rate,
/// i Tr[[H, χ] log(ρ_S ⊗ ρ_B)] - Tr[χ d/dt log(ρ_S ⊗ ρ_B)].
///
/// The second term vanishes identically (χ has vanishing partial traces and
/// the log of a product splits into local terms) and the local parts of H
/// drop out of the first, so this must agree with [`qmi_rate`]; it is kept
/// as an independently computed cross-check.
pub fn qmi_rate_full(state: &BipartiteState, h: &HamiltonianDecomposition) -> f64 {
    assert_compatible(state, h);
    let chi = correlation_matrix(state);
    let log_p = log_of_product(state);
    let first = (commutator(h.h_total(), chi.matrix()) * log_p).trace() * C64::i();

    let (d_rho_s, d_rho_b) = marginal_rates(state, h);
    let dlog_s = log_frechet_derivative(state.marginal_s().matrix(), &d_rho_s)
        .expect("marginal is Hermitian");
    let dlog_b = log_frechet_derivative(state.marginal_b().matrix(), &d_rho_b)
        .expect("marginal is Hermitian");
    let (d_s, d_b) = state.dims();
    let dlog_p = tensor(&dlog_s, &identity(d_b)) + tensor(&identity(d_s), &dlog_b);
    let second = (chi.matrix() * dlog_p).trace();

    real_part("qmi_rate_full", first - second)
}

/// Analytic rate of ‖χ‖₂²,
/// 2i Tr[[H, χ] ρ_S ⊗ ρ_B] - 2 Tr[d(ρ_S ⊗ ρ_B)/dt · χ].
pub fn chi_norm2_rate(state: &BipartiteState, h: &HamiltonianDecomposition) -> f64 {
    assert_compatible(state, h);
    let chi = correlation_matrix(state);
    let product = state.product_of_marginals();
    let first = (commutator(h.h_total(), chi.matrix()) * product).trace() * C64::new(0.0, 2.0);
    let second = (product_rate(state, h) * chi.matrix()).trace() * C64::new(2.0, 0.0);
    real_part("chi_norm2_rate", first - second)
}

/// Rate of ‖χ‖₂ itself, d‖χ‖₂/dt = (d‖χ‖₂²/dt) / (2 ‖χ‖₂).
///
/// Fails with [`DynamicsError::ZeroChi`] on product states, where the norm
/// rate is undefined.
pub fn chi_norm_rate(
    state: &BipartiteState,
    h: &HamiltonianDecomposition,
) -> Result<f64, DynamicsError> {
    let n = correlation_matrix(state).norm2();
    if n <= ZERO_CHI_THRESHOLD {
        return Err(DynamicsError::ZeroChi);
    }
    Ok(chi_norm2_rate(state, h) / (2.0 * n))
}

/// d(ρ_S ⊗ ρ_B)/dt by the product rule on the marginal rates.
pub(crate) fn product_rate(state: &BipartiteState, h: &HamiltonianDecomposition) -> CMatrix {
    let (d_rho_s, d_rho_b) = marginal_rates(state, h);
    tensor(&d_rho_s, state.marginal_b().matrix()) + tensor(state.marginal_s().matrix(), &d_rho_b)
}

/// log(ρ_S ⊗ ρ_B) = log ρ_S ⊗ I + I ⊗ log ρ_B, on the support.
pub(crate) fn log_of_product(state: &BipartiteState) -> CMatrix {
    let (d_s, d_b) = state.dims();
    let log_s = matrix_log_on_support(state.marginal_s().matrix()).expect("marginal is Hermitian");
    let log_b = matrix_log_on_support(state.marginal_b().matrix()).expect("marginal is Hermitian");
    tensor(&log_s, &identity(d_b)) + tensor(&identity(d_s), &log_b)
}

/// Dimensionless distance of the product of marginals from the maximally
/// mixed state: d ‖ρ_S ⊗ ρ_B - I/d‖ (operator norm), with d = d_S d_B.
///
/// Values much smaller than one put the state in the regime where the
/// mutual-information rate is approximately (d/2) times the ‖χ‖₂² rate.
pub fn proportionality_gap(state: &BipartiteState) -> f64 {
    let d = state.total_dim();
    let deviation = state.product_of_marginals() - identity(d).scale(1.0 / d as f64);
    d as f64 * norm(&deviation, NormKind::Operator)
}

/// A uniformly sampled trajectory with per-point measures and analytic
/// rates.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<BipartiteState>,
    qmi_series: Vec<f64>,
    chi_norm_series: Vec<f64>,
    qmi_rate_series: Vec<f64>,
    chi_norm2_rate_series: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Grid step.
    pub fn dt(&self) -> f64 {
        if self.times.len() > 1 {
            self.times[1] - self.times[0]
        } else {
            0.0
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[BipartiteState] {
        &self.states
    }

    /// Mutual information (nats) per grid point.
    pub fn qmi_series(&self) -> &[f64] {
        &self.qmi_series
    }

    /// ‖χ‖₂ per grid point.
    pub fn chi_norm_series(&self) -> &[f64] {
        &self.chi_norm_series
    }

    /// Analytic mutual-information rate per grid point.
    pub fn qmi_rate_series(&self) -> &[f64] {
        &self.qmi_rate_series
    }

    /// Analytic ‖χ‖₂² rate per grid point.
    pub fn chi_norm2_rate_series(&self) -> &[f64] {
        &self.chi_norm2_rate_series
    }

    /// Largest drift of the joint entropy from its initial value; unitary
    /// evolution must keep this at numerical noise.
    pub fn joint_entropy_drift(&self) -> f64 {
        let initial = von_neumann_entropy(self.states[0].density());
        self.states
            .iter()
            .map(|s| (von_neumann_entropy(s.density()) - initial).abs())
            .fold(0.0, f64::max)
    }
}

/// Evolve `state0` over the uniform grid t_min, t_min + dt, ..., t_max and
/// record both measures and both analytic rates at every point.
///
/// The Hamiltonian is diagonalized once; grid points are filled in parallel
/// and assembled in time order.
pub fn sweep(
    state0: &BipartiteState,
    h: &HamiltonianDecomposition,
    t_min: f64,
    t_max: f64,
    dt: f64,
) -> Result<Trajectory, DynamicsError> {
    assert_compatible(state0, h);
    assert!(dt > 0.0 && t_min < t_max, "need dt > 0 and t_min < t_max");
    let steps = ((t_max - t_min) / dt).round() as usize;
    let points = steps + 1;
    if points > DEFAULT_GRID_CAP {
        return Err(DynamicsError::GridTooLarge { points, cap: DEFAULT_GRID_CAP });
    }

    let propagator = Propagator::new(h);
    let rotated = propagator.rotate(state0);

    let per_point: Vec<(f64, BipartiteState, f64, f64, f64, f64)> = (0..points)
        .into_par_iter()
        .map(|k| {
            let t = t_min + k as f64 * dt;
            let state = propagator.evolve_rotated(&rotated, t);
            let measure_qmi = qmi(&state);
            let chi_norm = correlation_matrix(&state).norm2();
            let rate_qmi = qmi_rate(&state, h);
            let rate_chi2 = chi_norm2_rate(&state, h);
            (t, state, measure_qmi, chi_norm, rate_qmi, rate_chi2)
        })
        .collect();

    let mut trajectory = Trajectory {
        times: Vec::with_capacity(points),
        states: Vec::with_capacity(points),
        qmi_series: Vec::with_capacity(points),
        chi_norm_series: Vec::with_capacity(points),
        qmi_rate_series: Vec::with_capacity(points),
        chi_norm2_rate_series: Vec::with_capacity(points),
    };
    for (t, state, measure_qmi, chi_norm, rate_qmi, rate_chi2) in per_point {
        trajectory.times.push(t);
        trajectory.states.push(state);
        trajectory.qmi_series.push(measure_qmi);
        trajectory.chi_norm_series.push(chi_norm);
        trajectory.qmi_rate_series.push(rate_qmi);
        trajectory.chi_norm2_rate_series.push(rate_chi2);
    }
    Ok(trajectory)
}

/// A maximal time interval on which the two measures move in strictly
/// opposite directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscrepancyInterval {
    pub t_start: f64,
    pub t_end: f64,
}

fn sign_with_floor(x: f64, zero_eps: f64) -> i8 {
    if x.abs() < zero_eps {
        0
    } else if x > 0.0 {
        1
    } else {
        -1
    }
}

/// Extract the maximal grid-aligned intervals where
/// sign(dI/dt) · sign(d‖χ‖₂/dt) = -1.
///
/// Rates smaller than `zero_eps` in magnitude count as sign zero and break
/// intervals; a single zero-sign point therefore separates two adjacent
/// intervals rather than merging them. Runs shorter than two grid points
/// are dropped. The sign of the ‖χ‖₂ rate is read off the ‖χ‖₂² rate,
/// which shares its sign wherever ‖χ‖₂ > 0.
pub fn discrepancy_scan(trajectory: &Trajectory, zero_eps: f64) -> Vec<DiscrepancyInterval> {
    let mut intervals = Vec::new();
    let mut run_start: Option<usize> = None;
    let times = trajectory.times();
    for k in 0..=times.len() {
        let opposite = k < times.len() && {
            let s_qmi = sign_with_floor(trajectory.qmi_rate_series[k], zero_eps);
            let s_chi = sign_with_floor(trajectory.chi_norm2_rate_series[k], zero_eps);
            s_qmi * s_chi == -1
        };
        match (run_start, opposite) {
            (None, true) => run_start = Some(k),
            (Some(start), false) => {
                if k - start >= 2 {
                    intervals
                        .push(DiscrepancyInterval { t_start: times[start], t_end: times[k - 1] });
                }
                run_start = None;
            }
            _ => {}
        }
    }
    intervals
}
