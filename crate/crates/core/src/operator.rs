//! Dense complex-matrix substrate: Hermitian eigendecompositions, matrix
//! functions, tensor products, partial traces, and operator norms.
//!
//! All operators handled by this crate are square complex matrices of
//! dimension at most a few tens, so everything here favours accuracy and
//! clarity over asymptotic speed. Composite indices follow the convention
//! that the first (S) factor is the slow index: the entry `(i_s, i_b)`
//! of a `d_s x d_b` system sits at flat index `i_s * d_b + i_b`.

use nalgebra::{Complex, DMatrix, DVector};
use thiserror::Error;

use crate::config::Tolerances;

/// Complex scalar used throughout the crate.
pub type C64 = Complex<f64>;
/// Dense dynamically-sized complex matrix.
pub type CMatrix = DMatrix<C64>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum OperatorError {
    /// The input was expected to be Hermitian but max |M - M†| exceeded the
    /// tolerance.
    #[error("input is not Hermitian: max |M - M^dag| = {deviation:.3e}")]
    NonHermitianInput { deviation: f64 },

    /// A logarithm was requested for a matrix with a non-positive spectrum
    /// and no support restriction.
    #[error("matrix logarithm of a singular operator: min eigenvalue = {min_eigenvalue:.3e}")]
    SingularLog { min_eigenvalue: f64 },

    /// Matrix size does not match the declared subsystem dimensions.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Tag selecting one factor of a bipartite tensor product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    S,
    B,
}

/// Which operator norm to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    /// sqrt(Tr[M†M]), the Hilbert-Schmidt / 2-norm.
    Frobenius,
    /// Sum of |eigenvalues| (Hermitian input).
    Trace,
    /// Largest |eigenvalue| (Hermitian input).
    Operator,
}

/// `d x d` identity matrix.
pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Largest entrywise deviation from Hermiticity, max |M - M†|.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let dev = (m[(i, j)] - m[(j, i)].conj()).norm();
            worst = worst.max(dev);
        }
    }
    worst
}

/// Commutator [A, B] = AB - BA.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Real part of Tr[A B]; the imaginary part must be numerical noise and is
/// asserted small in debug builds.
pub fn real_trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let t = (a * b).trace();
    debug_assert!(
        t.im.abs() <= 1e-9 * (1.0 + t.re.abs()),
        "trace product has a non-negligible imaginary part: {:.3e}",
        t.im
    );
    t.re
}

/// A Hermitian eigendecomposition with eigenvalues sorted ascending and
/// eigenvectors stored as the columns of a unitary matrix.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: CMatrix,
}

impl HermitianEig {
    /// V diag(λ) V†, which must agree with the input entrywise.
    pub fn reconstruct(&self) -> CMatrix {
        self.apply(|x| x)
    }

    /// V diag(f(λ)) V† for a real scalar function f.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        self.apply_complex(|x| C64::new(f(x), 0.0))
    }

    /// V diag(f(λ)) V† for a complex-valued scalar function f, used for
    /// phase factors such as e^{-i λ t}.
    pub fn apply_complex(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let d = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            let fk = f(self.eigenvalues[k]);
            for i in 0..d {
                col[i] *= fk;
            }
        }
        &scaled * self.eigenvectors.adjoint()
    }

    fn sorted(eigenvalues: DVector<f64>, eigenvectors: CMatrix) -> Self {
        let d = eigenvalues.len();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]));
        let values = DVector::from_iterator(d, order.iter().map(|&k| eigenvalues[k]));
        let mut vectors = CMatrix::zeros(d, d);
        for (dst, &src) in order.iter().enumerate() {
            vectors.set_column(dst, &eigenvectors.column(src));
        }
        Self { eigenvalues: values, eigenvectors: vectors }
    }
}

/// Eigendecomposition of a Hermitian matrix with default tolerances.
pub fn hermitian_eig(m: &CMatrix) -> Result<HermitianEig, OperatorError> {
    hermitian_eig_with(m, &Tolerances::default())
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is rejected if max |M - M†| exceeds `tol.hermiticity`.
/// Eigenvalues come back in ascending order.
pub fn hermitian_eig_with(m: &CMatrix, tol: &Tolerances) -> Result<HermitianEig, OperatorError> {
    let deviation = hermiticity_deviation(m);
    if deviation > tol.hermiticity {
        return Err(OperatorError::NonHermitianInput { deviation });
    }
    let eig = m.clone().symmetric_eigen();
    Ok(HermitianEig::sorted(eig.eigenvalues, eig.eigenvectors))
}

/// V f(Λ) V† for a Hermitian matrix.
pub fn matrix_function(
    m: &CMatrix,
    f: impl Fn(f64) -> f64,
) -> Result<CMatrix, OperatorError> {
    Ok(hermitian_eig(m)?.apply(f))
}

/// Matrix exponential of a Hermitian matrix.
pub fn matrix_exp(m: &CMatrix) -> Result<CMatrix, OperatorError> {
    matrix_function(m, f64::exp)
}

/// Matrix logarithm of a strictly positive Hermitian matrix.
///
/// Fails with [`OperatorError::SingularLog`] as soon as any eigenvalue falls
/// at or below the support threshold; use [`matrix_log_on_support`] to take
/// the logarithm on the support only.
pub fn matrix_log(m: &CMatrix) -> Result<CMatrix, OperatorError> {
    let tol = Tolerances::default();
    let eig = hermitian_eig_with(m, &tol)?;
    let min_eigenvalue = eig.eigenvalues[0];
    if min_eigenvalue <= tol.support {
        return Err(OperatorError::SingularLog { min_eigenvalue });
    }
    Ok(eig.apply(f64::ln))
}

/// Matrix logarithm restricted to the support of the operator.
///
/// Eigenvalues at or below `Tolerances::support` are treated as exactly zero
/// and mapped to zero instead of -inf, realizing the 0 log 0 = 0 convention
/// used by entropies of rank-deficient states.
pub fn matrix_log_on_support(m: &CMatrix) -> Result<CMatrix, OperatorError> {
    let tol = Tolerances::default();
    let eig = hermitian_eig_with(m, &tol)?;
    Ok(eig.apply(|x| if x > tol.support { x.ln() } else { 0.0 }))
}

/// Unitary e^{-i H t} for a Hermitian generator H, built by phase
/// application on the spectrum.
pub fn evolution_operator(h: &CMatrix, t: f64) -> Result<CMatrix, OperatorError> {
    let eig = hermitian_eig(h)?;
    Ok(eig.apply_complex(|x| (-C64::i() * x * t).exp()))
}

/// Directional (Fréchet) derivative of the matrix logarithm at `m` in the
/// direction `v`, via divided differences of ln on the spectrum of `m`.
///
/// Eigenvalues below the support threshold are excluded, matching
/// [`matrix_log_on_support`].
pub fn log_frechet_derivative(m: &CMatrix, v: &CMatrix) -> Result<CMatrix, OperatorError> {
    let tol = Tolerances::default();
    let eig = hermitian_eig_with(m, &tol)?;
    let d = eig.eigenvalues.len();
    let lambda = &eig.eigenvalues;
    let vt = eig.eigenvectors.adjoint() * v * &eig.eigenvectors;
    let mut scaled = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let (li, lj) = (lambda[i], lambda[j]);
            if li <= tol.support || lj <= tol.support {
                continue;
            }
            // Divided difference of ln; the diagonal limit is 1/λ.
            let weight = if (li - lj).abs() > 1e-12 * li.max(lj) {
                (li.ln() - lj.ln()) / (li - lj)
            } else {
                2.0 / (li + lj)
            };
            scaled[(i, j)] = vt[(i, j)] * weight;
        }
    }
    Ok(&eig.eigenvectors * scaled * eig.eigenvectors.adjoint())
}

/// Kronecker product A ⊗ B with the S factor as the slow index.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Partial trace of an operator on a `d_s * d_b` space, keeping the chosen
/// subsystem.
pub fn partial_trace(
    m: &CMatrix,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<CMatrix, OperatorError> {
    let (d_s, d_b) = dims;
    if m.nrows() != d_s * d_b || m.ncols() != d_s * d_b {
        return Err(OperatorError::DimensionMismatch { expected: d_s * d_b, got: m.nrows() });
    }
    let out = match keep {
        Subsystem::S => CMatrix::from_fn(d_s, d_s, |i, j| {
            (0..d_b).map(|k| m[(i * d_b + k, j * d_b + k)]).sum()
        }),
        Subsystem::B => CMatrix::from_fn(d_b, d_b, |k, l| {
            (0..d_s).map(|i| m[(i * d_b + k, i * d_b + l)]).sum()
        }),
    };
    Ok(out)
}

/// Frobenius, trace, or operator norm. The trace and operator norms read the
/// spectrum of the Hermitian part of the input; all callers in this crate
/// pass Hermitian operators.
pub fn norm(m: &CMatrix, kind: NormKind) -> f64 {
    match kind {
        NormKind::Frobenius => m.norm(),
        NormKind::Trace => m.clone().symmetric_eigen().eigenvalues.iter().map(|x| x.abs()).sum(),
        NormKind::Operator => m
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(0.0f64, |acc, x| acc.max(x.abs())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{sigma_x, sigma_y, sigma_z};
    use approx::assert_abs_diff_eq;

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
    }

    /// Interaction term of the bundled two-qubit benchmark; its spectrum is
    /// known in closed form from the Bell basis (see `bell_basis_oracle`).
    fn coupling_matrix() -> CMatrix {
        tensor(&sigma_x(), &sigma_x()).scale(2.5)
            + tensor(&sigma_y(), &sigma_y()).scale(0.5)
            + tensor(&sigma_z(), &sigma_z()).scale(4.5)
    }

    /// Hand-diagonalization oracle: the four Bell vectors diagonalize any
    /// XX + YY + ZZ combination. Returns (vectors, eigenvalues) for
    /// couplings (jx, jy, jz), eigenvalues unsorted.
    fn bell_basis_oracle(jx: f64, jy: f64, jz: f64) -> (Vec<DVector<C64>>, Vec<f64>) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let c = |x: f64| C64::new(x, 0.0);
        let phi_plus = DVector::from_vec(vec![c(s), c(0.0), c(0.0), c(s)]);
        let phi_minus = DVector::from_vec(vec![c(s), c(0.0), c(0.0), c(-s)]);
        let psi_plus = DVector::from_vec(vec![c(0.0), c(s), c(s), c(0.0)]);
        let psi_minus = DVector::from_vec(vec![c(0.0), c(s), c(-s), c(0.0)]);
        // <XX, YY, ZZ> on (phi+, phi-, psi+, psi-):
        //   phi+: (+1, -1, +1);  phi-: (-1, +1, +1)
        //   psi+: (+1, +1, -1);  psi-: (-1, -1, -1)
        let values = vec![
            jx - jy + jz,
            -jx + jy + jz,
            jx + jy - jz,
            -jx - jy - jz,
        ];
        (vec![phi_plus, phi_minus, psi_plus, psi_minus], values)
    }

    #[test]
    fn pauli_z_spectrum() {
        let eig = hermitian_eig(&sigma_z()).unwrap();
        assert_abs_diff_eq!(eig.eigenvalues[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig.eigenvalues[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn identity_spectrum() {
        let eig = hermitian_eig(&identity(2)).unwrap();
        assert_abs_diff_eq!(eig.eigenvalues[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig.eigenvalues[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn coupling_spectrum_matches_bell_oracle() {
        let h = coupling_matrix();
        let (vectors, mut values) = bell_basis_oracle(2.5, 0.5, 4.5);
        // The oracle really diagonalizes h: H v = λ v for each Bell vector.
        for (v, &lambda) in vectors.iter().zip(values.iter()) {
            let residual = &h * v - v.scale(lambda);
            assert!(residual.norm() < 1e-12);
        }
        values.sort_by(f64::total_cmp);
        assert_eq!(values, vec![-7.5, -1.5, 2.5, 6.5]);
        let eig = hermitian_eig(&h).unwrap();
        for (k, &expected) in values.iter().enumerate() {
            assert_abs_diff_eq!(eig.eigenvalues[k], expected, epsilon = 1e-10);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = sigma_x();
        m[(0, 1)] += C64::new(1e-6, 0.0);
        match hermitian_eig(&m) {
            Err(OperatorError::NonHermitianInput { deviation }) => {
                assert!(deviation > 1e-7);
            }
            other => panic!("expected NonHermitianInput, got {other:?}"),
        }
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let z = CMatrix::zeros(3, 3);
        assert!(max_abs(&(matrix_exp(&z).unwrap() - identity(3))) < 1e-14);
    }

    #[test]
    fn log_of_identity_is_zero() {
        assert!(max_abs(&matrix_log(&identity(4)).unwrap()) < 1e-14);
    }

    #[test]
    fn log_rejects_singular_without_support_restriction() {
        let m = CMatrix::from_diagonal(&DVector::from_vec(vec![
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
        ]));
        assert!(matches!(matrix_log(&m), Err(OperatorError::SingularLog { .. })));
        // On the support, log(diag(1, 0)) = 0.
        assert!(max_abs(&matrix_log_on_support(&m).unwrap()) < 1e-14);
    }

    #[test]
    fn evolution_operator_full_turn() {
        // e^{-i sigma_z pi} = diag(e^{-i pi}, e^{+i pi}) = -I.
        let u = evolution_operator(&sigma_z(), std::f64::consts::PI).unwrap();
        assert!(max_abs(&(u + identity(2))) < 1e-12);
    }

    #[test]
    fn tensor_identity_convention() {
        assert!(max_abs(&(tensor(&identity(2), &identity(2)) - identity(4))) < 1e-15);
        // S-major ordering: sigma_z on the first factor gives diag(1,1,-1,-1).
        let m = tensor(&sigma_z(), &identity(2));
        let expected = CMatrix::from_diagonal(&DVector::from_vec(vec![
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(-1.0, 0.0),
            C64::new(-1.0, 0.0),
        ]));
        assert!(max_abs(&(m - expected)) < 1e-15);
    }

    #[test]
    fn partial_trace_of_bell_projector() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = DVector::from_vec(vec![
            C64::new(s, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(s, 0.0),
        ]);
        let rho = &v * v.adjoint();
        let m = partial_trace(&rho, (2, 2), Subsystem::S).unwrap();
        assert!(max_abs(&(m - identity(2).scale(0.5))) < 1e-14);
    }

    #[test]
    fn partial_trace_dimension_check() {
        let m = identity(3);
        assert!(matches!(
            partial_trace(&m, (2, 2), Subsystem::S),
            Err(OperatorError::DimensionMismatch { expected: 4, got: 3 })
        ));
    }

    #[test]
    fn norms_of_known_operators() {
        assert_abs_diff_eq!(norm(&sigma_x(), NormKind::Operator), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(norm(&coupling_matrix(), NormKind::Operator), 7.5, epsilon = 1e-10);
        assert_abs_diff_eq!(norm(&coupling_matrix(), NormKind::Trace), 18.0, epsilon = 1e-10);
        assert_abs_diff_eq!(norm(&sigma_y(), NormKind::Frobenius), 2f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn log_frechet_matches_finite_difference() {
        // d/dt log(M + tV) at t=0 against a central difference.
        let m = CMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                C64::new(1.0 + i as f64, 0.0)
            } else {
                C64::new(0.1, if i < j { 0.05 } else { -0.05 })
            }
        });
        let v = CMatrix::from_fn(3, 3, |i, j| {
            C64::new(
                0.02 * (i as f64 - j as f64 + 1.0),
                0.03 * (i as f64 - j as f64),
            )
        });
        let v = (&v + v.adjoint()).scale(0.5);
        let h = 1e-6;
        let fd = (matrix_log(&(&m + v.scale(h))).unwrap()
            - matrix_log(&(&m - v.scale(h))).unwrap())
        .scale(1.0 / (2.0 * h));
        let an = log_frechet_derivative(&m, &v).unwrap();
        assert!(max_abs(&(fd - an)) < 1e-8);
    }
}
