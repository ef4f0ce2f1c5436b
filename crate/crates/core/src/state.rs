//! Validated density matrices, bipartite structure, entropies, and thermal
//! states.
//!
//! [`DensityMatrix`] can only be built through validation, so every value of
//! the type is Hermitian, positive semidefinite, and unit trace within the
//! configured tolerances. [`BipartiteState`] adds a declared tensor
//! factorization on top, giving access to the reduced states of the two
//! subsystems.

use nalgebra::DVector;
use thiserror::Error;

use crate::config::{LogBase, Tolerances};
use crate::operator::{
    self, hermiticity_deviation, hermitian_eig_with, partial_trace, CMatrix, OperatorError,
    Subsystem,
};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum StateError {
    #[error("matrix is not Hermitian: max |M - M^dag| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue = {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace differs from one by {deviation:.3e}")]
    TraceNotOne { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

impl From<OperatorError> for StateError {
    fn from(e: OperatorError) -> Self {
        match e {
            OperatorError::NonHermitianInput { deviation } => StateError::NotHermitian { deviation },
            OperatorError::SingularLog { min_eigenvalue } => {
                StateError::NotPositive { min_eigenvalue }
            }
            OperatorError::DimensionMismatch { expected, got } => {
                StateError::DimensionMismatch { expected, got }
            }
        }
    }
}

/// Measured deviations of a candidate density matrix, reported whether or
/// not validation succeeds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    pub hermiticity_deviation: f64,
    pub min_eigenvalue: f64,
    pub trace_deviation: f64,
}

impl ValidationReport {
    /// Measure a candidate matrix. The eigenvalue entry is meaningful only
    /// when the matrix is (close to) Hermitian.
    pub fn measure(m: &CMatrix) -> Self {
        let hermiticity_deviation = hermiticity_deviation(m);
        let min_eigenvalue = m
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |acc, &x| acc.min(x));
        let trace_deviation = (m.trace() - operator::C64::new(1.0, 0.0)).norm();
        Self { hermiticity_deviation, min_eigenvalue, trace_deviation }
    }

    /// First violated condition under the given tolerances, if any.
    pub fn check(&self, tol: &Tolerances) -> Result<(), StateError> {
        if self.hermiticity_deviation > tol.hermiticity {
            return Err(StateError::NotHermitian { deviation: self.hermiticity_deviation });
        }
        if self.min_eigenvalue < -tol.positivity {
            return Err(StateError::NotPositive { min_eigenvalue: self.min_eigenvalue });
        }
        if self.trace_deviation > tol.unit_trace {
            return Err(StateError::TraceNotOne { deviation: self.trace_deviation });
        }
        Ok(())
    }
}

/// A validated density matrix: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validate with default tolerances.
    pub fn new(matrix: CMatrix) -> Result<Self, StateError> {
        Self::with_tolerances(matrix, &Tolerances::default())
    }

    /// Validate a candidate matrix; the error carries the measured
    /// violation.
    pub fn with_tolerances(matrix: CMatrix, tol: &Tolerances) -> Result<Self, StateError> {
        if !matrix.is_square() {
            return Err(StateError::DimensionMismatch {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        ValidationReport::measure(&matrix).check(tol)?;
        Ok(Self { matrix })
    }

    /// Wrap a matrix that is valid by construction (unitary images, convex
    /// mixtures, partial traces of valid states). Debug builds re-validate.
    pub(crate) fn trusted(matrix: CMatrix) -> Self {
        debug_assert!(
            ValidationReport::measure(&matrix)
                .check(&Tolerances {
                    // Looser than user-facing validation: accumulated
                    // round-off from long evolutions is acceptable here.
                    hermiticity: 1e-9,
                    positivity: 1e-9,
                    unit_trace: 1e-9,
                    ..Tolerances::default()
                })
                .is_ok(),
            "trusted density matrix failed validation"
        );
        Self { matrix }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Spectrum in ascending order.
    pub fn eigenvalues(&self) -> DVector<f64> {
        let mut v: Vec<f64> = self.matrix.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        DVector::from_vec(v)
    }

    /// Tr[ρ²].
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}

/// A density matrix on a declared d_s ⊗ d_b tensor factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    rho: DensityMatrix,
    d_s: usize,
    d_b: usize,
}

impl BipartiteState {
    /// Validate a candidate matrix as a `d_s * d_b` bipartite state.
    pub fn new(matrix: CMatrix, d_s: usize, d_b: usize) -> Result<Self, StateError> {
        Self::with_tolerances(matrix, d_s, d_b, &Tolerances::default())
    }

    pub fn with_tolerances(
        matrix: CMatrix,
        d_s: usize,
        d_b: usize,
        tol: &Tolerances,
    ) -> Result<Self, StateError> {
        if matrix.nrows() != d_s * d_b {
            return Err(StateError::DimensionMismatch { expected: d_s * d_b, got: matrix.nrows() });
        }
        let rho = DensityMatrix::with_tolerances(matrix, tol)?;
        Ok(Self { rho, d_s, d_b })
    }

    /// Attach a factorization to an already validated density matrix.
    pub fn from_density(rho: DensityMatrix, d_s: usize, d_b: usize) -> Result<Self, StateError> {
        if rho.dim() != d_s * d_b {
            return Err(StateError::DimensionMismatch { expected: d_s * d_b, got: rho.dim() });
        }
        Ok(Self { rho, d_s, d_b })
    }

    pub(crate) fn trusted(matrix: CMatrix, d_s: usize, d_b: usize) -> Self {
        Self { rho: DensityMatrix::trusted(matrix), d_s, d_b }
    }

    pub fn density(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn matrix(&self) -> &CMatrix {
        self.rho.matrix()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d_s, self.d_b)
    }

    pub fn total_dim(&self) -> usize {
        self.d_s * self.d_b
    }

    /// Reduced state of S, Tr_B[ρ].
    pub fn marginal_s(&self) -> DensityMatrix {
        let m = partial_trace(self.matrix(), self.dims(), Subsystem::S)
            .expect("dimensions validated at construction");
        DensityMatrix::trusted(m)
    }

    /// Reduced state of B, Tr_S[ρ].
    pub fn marginal_b(&self) -> DensityMatrix {
        let m = partial_trace(self.matrix(), self.dims(), Subsystem::B)
            .expect("dimensions validated at construction");
        DensityMatrix::trusted(m)
    }

    /// The uncorrelated counterpart ρ_S ⊗ ρ_B.
    pub fn product_of_marginals(&self) -> CMatrix {
        operator::tensor(self.marginal_s().matrix(), self.marginal_b().matrix())
    }
}

/// Shannon entropy of a spectrum with the 0 log 0 = 0 convention.
fn spectrum_entropy(eigenvalues: &DVector<f64>, base: LogBase) -> f64 {
    let support = Tolerances::default().support;
    -eigenvalues
        .iter()
        .filter(|&&p| p > support)
        .map(|&p| p * base.log(p))
        .sum::<f64>()
}

/// Von Neumann entropy -Tr[ρ log ρ] in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    von_neumann_entropy_in(rho, LogBase::Natural)
}

/// Von Neumann entropy in the chosen logarithm base.
pub fn von_neumann_entropy_in(rho: &DensityMatrix, base: LogBase) -> f64 {
    spectrum_entropy(&rho.eigenvalues(), base)
}

/// Result of a relative-entropy computation. The divergent case is a
/// distinguished variant rather than a floating-point infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelativeEntropy {
    Finite(f64),
    /// The support of ρ is not contained in the support of σ.
    Infinite,
}

impl RelativeEntropy {
    pub fn is_infinite(&self) -> bool {
        matches!(self, RelativeEntropy::Infinite)
    }

    /// The finite value, if any.
    pub fn value(&self) -> Option<f64> {
        match self {
            RelativeEntropy::Finite(x) => Some(*x),
            RelativeEntropy::Infinite => None,
        }
    }

    /// The finite value, panicking on divergence. Intended for callers that
    /// have already established the support condition.
    pub fn expect_finite(&self) -> f64 {
        self.value().expect("relative entropy diverged")
    }
}

/// Relative entropy S(ρ‖σ) = Tr[ρ log ρ] - Tr[ρ log σ] in nats.
pub fn relative_entropy(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> Result<RelativeEntropy, StateError> {
    relative_entropy_in(rho, sigma, LogBase::Natural)
}

/// Relative entropy in the chosen base.
///
/// Returns [`RelativeEntropy::Infinite`] when ρ has weight outside the
/// support of σ. Otherwise the value is nonnegative up to numerical slack.
pub fn relative_entropy_in(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    base: LogBase,
) -> Result<RelativeEntropy, StateError> {
    if rho.dim() != sigma.dim() {
        return Err(StateError::DimensionMismatch { expected: rho.dim(), got: sigma.dim() });
    }
    let tol = Tolerances::default();
    let rho_eig = hermitian_eig_with(rho.matrix(), &tol)?;
    let sigma_eig = hermitian_eig_with(sigma.matrix(), &tol)?;

    // Overlap weights P_ij = |<u_i|v_j>|² between the two eigenbases.
    let overlap = rho_eig.eigenvectors.adjoint() * &sigma_eig.eigenvectors;
    let d = rho.dim();
    let mut cross = 0.0;
    let mut escaped_weight = 0.0;
    for i in 0..d {
        let p = rho_eig.eigenvalues[i];
        if p <= tol.support {
            continue;
        }
        for j in 0..d {
            let q = sigma_eig.eigenvalues[j];
            let w = overlap[(i, j)].norm_sqr();
            if q <= tol.support {
                escaped_weight += p * w;
            } else {
                cross += p * w * base.log(q);
            }
        }
    }
    if escaped_weight > 1e-10 {
        return Ok(RelativeEntropy::Infinite);
    }
    let entropy = spectrum_entropy(&rho.eigenvalues(), base);
    Ok(RelativeEntropy::Finite(-entropy - cross))
}

/// Gibbs state e^{-βH}/Tr[e^{-βH}] of a Hermitian Hamiltonian at inverse
/// temperature β ≥ 0.
pub fn thermal_state(h: &CMatrix, beta: f64) -> Result<DensityMatrix, StateError> {
    let eig = hermitian_eig_with(h, &Tolerances::default())?;
    // Shift by the ground energy so the exponentials stay bounded.
    let ground = eig.eigenvalues[0];
    let weights: Vec<f64> = eig.eigenvalues.iter().map(|&e| (-beta * (e - ground)).exp()).collect();
    let z: f64 = weights.iter().sum();
    let m = eig.apply(|e| (-beta * (e - ground)).exp() / z);
    Ok(DensityMatrix::trusted(m))
}
