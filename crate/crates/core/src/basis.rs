//! Orthonormal Hermitian operator bases.
//!
//! A basis `{σ_i}` here satisfies Tr[σ_i σ_j] = δ_ij and spans the full
//! operator space, so any Hermitian M decomposes as M = Σ Tr[M σ_i] σ_i
//! with real coefficients. Two-point expectation values of such basis
//! elements are the covariance coefficients used by the correlation module.

use nalgebra::DVector;
use thiserror::Error;

use crate::operator::{hermiticity_deviation, CMatrix, C64};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum BasisError {
    /// Operator bases are provided for qubits only.
    #[error("no operator basis available for dimension {dim}")]
    UnsupportedDimension { dim: usize },

    /// Elements are not square, differ in size, or the count is not d².
    #[error("basis elements malformed: {reason}")]
    Malformed { reason: String },

    /// Tr[σ_i σ_j] deviates from δ_ij beyond tolerance.
    #[error("basis not orthonormal: |Tr[s_{i} s_{j}] - delta| = {deviation:.3e}")]
    NotOrthonormal { i: usize, j: usize, deviation: f64 },
}

/// An orthonormal Hermitian operator basis for a d-dimensional system.
#[derive(Debug, Clone)]
pub struct OperatorBasis {
    elements: Vec<CMatrix>,
    dim: usize,
}

impl OperatorBasis {
    /// Validate and wrap a set of d² Hermitian matrices with
    /// Tr[σ_i σ_j] = δ_ij (within 1e-12).
    pub fn new(elements: Vec<CMatrix>) -> Result<Self, BasisError> {
        let dim = match elements.first() {
            Some(m) if m.is_square() => m.nrows(),
            _ => {
                return Err(BasisError::Malformed { reason: "empty or non-square elements".into() })
            }
        };
        if elements.len() != dim * dim {
            return Err(BasisError::Malformed {
                reason: format!("expected {} elements for dimension {dim}, got {}", dim * dim, elements.len()),
            });
        }
        for (k, m) in elements.iter().enumerate() {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(BasisError::Malformed { reason: format!("element {k} has a different size") });
            }
            let dev = hermiticity_deviation(m);
            if dev > 1e-12 {
                return Err(BasisError::Malformed {
                    reason: format!("element {k} is not Hermitian (deviation {dev:.3e})"),
                });
            }
        }
        for i in 0..elements.len() {
            for j in i..elements.len() {
                let overlap = (&elements[i] * &elements[j]).trace();
                let expected = if i == j { 1.0 } else { 0.0 };
                let deviation = (overlap - C64::new(expected, 0.0)).norm();
                if deviation > 1e-12 {
                    return Err(BasisError::NotOrthonormal { i, j, deviation });
                }
            }
        }
        Ok(Self { elements, dim })
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Dimension of the underlying Hilbert space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Real expansion coefficients Tr[M σ_i] of a Hermitian operator.
    pub fn coefficients(&self, m: &CMatrix) -> DVector<f64> {
        DVector::from_iterator(self.elements.len(), self.elements.iter().map(|s| (m * s).trace().re))
    }

    /// Rebuild Σ c_i σ_i from coefficients.
    pub fn reconstruct(&self, coefficients: &DVector<f64>) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (c, s) in coefficients.iter().zip(self.elements.iter()) {
            out += s.scale(*c);
        }
        out
    }
}

/// Pauli X.
pub fn sigma_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[
        C64::new(0.0, 0.0), C64::new(1.0, 0.0),
        C64::new(1.0, 0.0), C64::new(0.0, 0.0),
    ])
}

/// Pauli Y.
pub fn sigma_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[
        C64::new(0.0, 0.0), C64::new(0.0, -1.0),
        C64::new(0.0, 1.0), C64::new(0.0, 0.0),
    ])
}

/// Pauli Z.
pub fn sigma_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[
        C64::new(1.0, 0.0), C64::new(0.0, 0.0),
        C64::new(0.0, 0.0), C64::new(-1.0, 0.0),
    ])
}

/// The normalized Pauli basis {I, X, Y, Z}/√2 for a qubit.
///
/// Only d = 2 is supported; larger dimensions return
/// [`BasisError::UnsupportedDimension`].
pub fn pauli_basis(d: usize) -> Result<OperatorBasis, BasisError> {
    if d != 2 {
        return Err(BasisError::UnsupportedDimension { dim: d });
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let elements = vec![
        crate::operator::identity(2).scale(s),
        sigma_x().scale(s),
        sigma_y().scale(s),
        sigma_z().scale(s),
    ];
    OperatorBasis::new(elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pauli_basis_orthonormality() {
        let basis = pauli_basis(2).unwrap();
        let x = &basis.elements()[1];
        let y = &basis.elements()[2];
        assert_abs_diff_eq!((x * x).trace().re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!((x * y).trace().norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn rejects_unsupported_dimension() {
        assert!(matches!(pauli_basis(3), Err(BasisError::UnsupportedDimension { dim: 3 })));
    }

    #[test]
    fn completeness_on_arbitrary_hermitian() {
        let basis = pauli_basis(2).unwrap();
        let m = CMatrix::from_row_slice(2, 2, &[
            C64::new(0.7, 0.0), C64::new(0.2, -0.4),
            C64::new(0.2, 0.4), C64::new(-1.3, 0.0),
        ]);
        let rebuilt = basis.reconstruct(&basis.coefficients(&m));
        let worst = (&rebuilt - &m).iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        assert!(worst < 1e-10);
    }

    #[test]
    fn rejects_non_orthonormal_sets() {
        let double = vec![
            crate::operator::identity(2),
            sigma_x(),
            sigma_y(),
            sigma_z(),
        ];
        assert!(matches!(OperatorBasis::new(double), Err(BasisError::NotOrthonormal { .. })));
    }
}
