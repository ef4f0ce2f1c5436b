//! The two total-correlation measures: quantum mutual information and the
//! 2-norm of the correlation matrix, plus the covariance expansion of the
//! latter.
//!
//! The correlation matrix χ = ρ - ρ_S ⊗ ρ_B carries every correlation
//! property of a bipartite state; it is kept as a full operator here because
//! downstream thermodynamics needs traces against it, not just its norm.
//! Note that χ determines neither the state nor vice versa: many states
//! share one χ, so no operation here inverts it.

use thiserror::Error;

use crate::basis::OperatorBasis;
use crate::config::{LogBase, Tolerances};
use crate::operator::{norm, partial_trace, tensor, CMatrix, NormKind, Subsystem};
use crate::state::{
    relative_entropy_in, von_neumann_entropy_in, BipartiteState, RelativeEntropy,
};

/// States whose correlation matrix has 2-norm at or below this threshold are
/// treated as product states.
pub const PRODUCT_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CorrelationError {
    /// Basis dimensions do not match the state's factorization.
    #[error("basis mismatch: state factor has dimension {expected}, basis covers {got}")]
    BasisMismatch { expected: usize, got: usize },

    /// A correlation matrix lost one of its structural invariants.
    #[error("correlation matrix invariant violated ({which}): deviation {deviation:.3e}")]
    InvariantViolated { which: &'static str, deviation: f64 },
}

/// The correlation matrix χ = ρ - ρ_S ⊗ ρ_B of a bipartite state.
///
/// By construction χ is Hermitian, traceless, and has vanishing partial
/// traces; [`CorrelationMatrix::validate`] re-measures those invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    matrix: CMatrix,
    d_s: usize,
    d_b: usize,
}

impl CorrelationMatrix {
    pub fn from_state(state: &BipartiteState) -> Self {
        let matrix = state.matrix() - state.product_of_marginals();
        let (d_s, d_b) = state.dims();
        Self { matrix, d_s, d_b }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d_s, self.d_b)
    }

    /// The 2-norm ‖χ‖₂ = sqrt(Tr[χ†χ]).
    pub fn norm2(&self) -> f64 {
        norm(&self.matrix, NormKind::Frobenius)
    }

    /// Whether the underlying state is a product state up to
    /// [`PRODUCT_THRESHOLD`].
    pub fn signals_product(&self) -> bool {
        self.norm2() <= PRODUCT_THRESHOLD
    }

    /// Re-measure the structural invariants: Hermiticity, zero trace, and
    /// vanishing partial traces. Returns the worst deviation found.
    pub fn validate(&self, tol: &Tolerances) -> Result<f64, CorrelationError> {
        let herm = crate::operator::hermiticity_deviation(&self.matrix);
        if herm > tol.hermiticity {
            return Err(CorrelationError::InvariantViolated { which: "hermiticity", deviation: herm });
        }
        let trace = self.matrix.trace().norm();
        if trace > 1e-12 {
            return Err(CorrelationError::InvariantViolated { which: "trace", deviation: trace });
        }
        let dims = self.dims();
        let tr_s = norm(
            &partial_trace(&self.matrix, dims, Subsystem::S).expect("dims fixed at construction"),
            NormKind::Frobenius,
        );
        let tr_b = norm(
            &partial_trace(&self.matrix, dims, Subsystem::B).expect("dims fixed at construction"),
            NormKind::Frobenius,
        );
        if tr_s > 1e-10 || tr_b > 1e-10 {
            return Err(CorrelationError::InvariantViolated {
                which: "partial traces",
                deviation: tr_s.max(tr_b),
            });
        }
        Ok(herm.max(trace).max(tr_s).max(tr_b))
    }
}

/// Compute χ = ρ - ρ_S ⊗ ρ_B.
pub fn correlation_matrix(state: &BipartiteState) -> CorrelationMatrix {
    CorrelationMatrix::from_state(state)
}

/// ‖χ‖₂ of a state's correlation matrix.
pub fn chi_norm2(chi: &CorrelationMatrix) -> f64 {
    chi.norm2()
}

/// Quantum mutual information S(ρ_S) + S(ρ_B) - S(ρ) in nats.
pub fn qmi(state: &BipartiteState) -> f64 {
    qmi_in(state, LogBase::Natural)
}

/// Quantum mutual information in the chosen logarithm base.
pub fn qmi_in(state: &BipartiteState, base: LogBase) -> f64 {
    von_neumann_entropy_in(&state.marginal_s(), base)
        + von_neumann_entropy_in(&state.marginal_b(), base)
        - von_neumann_entropy_in(state.density(), base)
}

/// The relative-entropy form S(ρ ‖ ρ_S ⊗ ρ_B) of the mutual information,
/// used as an independent cross-check of [`qmi`].
///
/// The support of ρ always lies inside the support of ρ_S ⊗ ρ_B, so the
/// result is finite for exact inputs.
pub fn qmi_relative_entropy_form(state: &BipartiteState) -> RelativeEntropy {
    let product = crate::state::DensityMatrix::new(state.product_of_marginals())
        .expect("product of valid marginals is a valid state");
    relative_entropy_in(state.density(), &product, LogBase::Natural)
        .expect("dimensions agree by construction")
}

/// Table of covariance coefficients c_ij = <σ_i ⊗ η_j> - <σ_i><η_j>.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceTable {
    coefficients: nalgebra::DMatrix<f64>,
}

impl CovarianceTable {
    pub fn coefficients(&self) -> &nalgebra::DMatrix<f64> {
        &self.coefficients
    }

    /// Σ_ij c_ij², which equals ‖χ‖₂² for orthonormal bases.
    pub fn sum_of_squares(&self) -> f64 {
        self.coefficients.iter().map(|c| c * c).sum()
    }

    /// Rebuild Σ_ij c_ij σ_i ⊗ η_j, which must reconstruct χ.
    pub fn reconstruct(&self, basis_s: &OperatorBasis, basis_b: &OperatorBasis) -> CMatrix {
        let d = basis_s.dim() * basis_b.dim();
        let mut out = CMatrix::zeros(d, d);
        for (i, s) in basis_s.elements().iter().enumerate() {
            for (j, e) in basis_b.elements().iter().enumerate() {
                let c = self.coefficients[(i, j)];
                if c != 0.0 {
                    out += tensor(s, e).scale(c);
                }
            }
        }
        out
    }
}

/// Expand the correlations of a state over a pair of orthonormal Hermitian
/// operator bases.
///
/// The coefficients are the two-point covariances
/// Tr[ρ (σ_i ⊗ η_j)] - Tr[ρ_S σ_i] Tr[ρ_B η_j]; rows/columns belonging to
/// normalized identities vanish because χ has vanishing partial traces.
pub fn covariance_table(
    state: &BipartiteState,
    basis_s: &OperatorBasis,
    basis_b: &OperatorBasis,
) -> Result<CovarianceTable, CorrelationError> {
    let (d_s, d_b) = state.dims();
    if basis_s.dim() != d_s {
        return Err(CorrelationError::BasisMismatch { expected: d_s, got: basis_s.dim() });
    }
    if basis_b.dim() != d_b {
        return Err(CorrelationError::BasisMismatch { expected: d_b, got: basis_b.dim() });
    }
    let rho = state.matrix();
    let rho_s = state.marginal_s();
    let rho_b = state.marginal_b();
    let mean_s: Vec<f64> =
        basis_s.elements().iter().map(|s| (rho_s.matrix() * s).trace().re).collect();
    let mean_b: Vec<f64> =
        basis_b.elements().iter().map(|e| (rho_b.matrix() * e).trace().re).collect();
    let coefficients = nalgebra::DMatrix::from_fn(basis_s.len(), basis_b.len(), |i, j| {
        let joint = (rho * tensor(&basis_s.elements()[i], &basis_b.elements()[j])).trace().re;
        joint - mean_s[i] * mean_b[j]
    });
    Ok(CovarianceTable { coefficients })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::pauli_basis;
    use crate::operator::{identity, C64};
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;

    fn bell_state() -> BipartiteState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = DVector::from_vec(vec![
            C64::new(s, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(s, 0.0),
        ]);
        BipartiteState::new(&v * v.adjoint(), 2, 2).unwrap()
    }

    fn product_state() -> BipartiteState {
        let a = CMatrix::from_row_slice(2, 2, &[
            C64::new(0.6, 0.0), C64::new(0.1, 0.2),
            C64::new(0.1, -0.2), C64::new(0.4, 0.0),
        ]);
        let b = CMatrix::from_row_slice(2, 2, &[
            C64::new(0.3, 0.0), C64::new(0.0, -0.1),
            C64::new(0.0, 0.1), C64::new(0.7, 0.0),
        ]);
        BipartiteState::new(tensor(&a, &b), 2, 2).unwrap()
    }

    #[test]
    fn product_state_has_zero_chi_and_zero_qmi() {
        let state = product_state();
        let chi = correlation_matrix(&state);
        assert!(chi.norm2() < 1e-14);
        assert!(chi.signals_product());
        assert_abs_diff_eq!(qmi(&state), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn bell_chi_norm_from_entry_sum_oracle() {
        // Oracle: Tr[chi^2] = Tr[rho^2] - 2 Tr[rho (I/4)] + Tr[I/16]
        //       = 1 - 1/2 + 1/4 = 3/4 for a maximally entangled pure state.
        let state = bell_state();
        let chi = correlation_matrix(&state);
        assert_abs_diff_eq!(chi.norm2(), 0.75f64.sqrt(), epsilon = 1e-12);
        assert!(!chi.signals_product());
        assert!(chi.validate(&Tolerances::default()).is_ok());
    }

    #[test]
    fn bell_qmi_is_two_log_two() {
        let state = bell_state();
        assert_abs_diff_eq!(qmi(&state), 2.0 * 2f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(qmi_in(&state, LogBase::Two), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn qmi_agrees_with_relative_entropy_form() {
        let state = bell_state();
        let via_rel = qmi_relative_entropy_form(&state).expect_finite();
        assert_abs_diff_eq!(qmi(&state), via_rel, epsilon = 1e-9);
    }

    #[test]
    fn bell_covariance_coefficients() {
        // Two-point oracle: <XX> = 1, <YY> = -1, <ZZ> = 1 on the Bell state,
        // single-qubit means all vanish; the 1/2 comes from the 1/sqrt(2)
        // normalization of each basis element.
        let state = bell_state();
        let basis = pauli_basis(2).unwrap();
        let table = covariance_table(&state, &basis, &basis).unwrap();
        let c = table.coefficients();
        assert_abs_diff_eq!(c[(1, 1)], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(c[(2, 2)], -0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(c[(3, 3)], 0.5, epsilon = 1e-12);
        for k in 0..4 {
            assert_abs_diff_eq!(c[(0, k)], 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(c[(k, 0)], 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn covariance_table_reconstructs_chi() {
        let state = bell_state();
        let basis = pauli_basis(2).unwrap();
        let table = covariance_table(&state, &basis, &basis).unwrap();
        let chi = correlation_matrix(&state);
        let rebuilt = table.reconstruct(&basis, &basis);
        let worst = (&rebuilt - chi.matrix()).iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        assert!(worst < 1e-10);
        assert_abs_diff_eq!(table.sum_of_squares(), chi.norm2().powi(2), epsilon = 1e-10);
    }

    #[test]
    fn covariance_table_of_product_state_vanishes() {
        let state = product_state();
        let basis = pauli_basis(2).unwrap();
        let table = covariance_table(&state, &basis, &basis).unwrap();
        assert!(table.sum_of_squares() < 1e-20);
    }

    #[test]
    fn basis_mismatch_is_reported() {
        let basis = pauli_basis(2).unwrap();
        let wrong = BipartiteState::new(identity(4).scale(0.25), 4, 1).unwrap();
        assert!(matches!(
            covariance_table(&wrong, &basis, &basis),
            Err(CorrelationError::BasisMismatch { .. })
        ));
    }
}
