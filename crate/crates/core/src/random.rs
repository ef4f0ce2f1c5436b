//! Seeded random ensembles of states, Hamiltonians, and unitaries for
//! property tests and numerical experiments.
//!
//! States are drawn either as normalized Wishart-like products G G†/Tr
//! (full rank almost surely) or as explicit rank-deficient mixtures of pure
//! states, so both the generic and the degenerate spectra get exercised.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dynamics::HamiltonianDecomposition;
use crate::operator::{CMatrix, C64};
use crate::state::{BipartiteState, DensityMatrix};

/// Square matrix with independent standard complex Gaussian entries.
pub fn ginibre(rng: &mut impl Rng, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| {
        C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    })
}

/// Random Hermitian matrix (G + G†)/2 with O(1) entries.
pub fn random_hermitian(rng: &mut impl Rng, d: usize) -> CMatrix {
    let g = ginibre(rng, d);
    (&g + g.adjoint()).scale(0.5)
}

/// Haar-like random unitary e^{i H} for a random Hermitian H, built through
/// the phase path so the result is unitary to machine precision.
pub fn random_unitary(rng: &mut impl Rng, d: usize) -> CMatrix {
    let h = random_hermitian(rng, d);
    let eig = crate::operator::hermitian_eig(&h).expect("Hermitian by construction");
    eig.apply_complex(|x| (C64::i() * x).exp())
}

/// Full-rank random density matrix G G† / Tr[G G†].
pub fn random_density_matrix(rng: &mut impl Rng, d: usize) -> DensityMatrix {
    loop {
        let g = ginibre(rng, d);
        let w = &g * g.adjoint();
        let trace = w.trace().re;
        if trace > 1e-9 {
            return DensityMatrix::new(w.scale(1.0 / trace)).expect("Wishart form is valid");
        }
    }
}

/// Random pure-state projector |ψ><ψ|.
pub fn random_pure_density(rng: &mut impl Rng, d: usize) -> DensityMatrix {
    loop {
        let v = DVector::from_fn(d, |_, _| {
            C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
        });
        let n = v.norm();
        if n > 1e-9 {
            let v = v.scale(1.0 / n);
            return DensityMatrix::new(&v * v.adjoint()).expect("projector is valid");
        }
    }
}

/// Rank-deficient mixture of `rank` random pure states (rank < d gives a
/// genuinely singular spectrum).
pub fn random_rank_deficient(rng: &mut impl Rng, d: usize, rank: usize) -> DensityMatrix {
    assert!(rank >= 1, "need at least one pure component");
    let mut m = CMatrix::zeros(d, d);
    let mut weights: Vec<f64> = (0..rank).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    for w in weights {
        m += random_pure_density(rng, d).matrix().scale(w);
    }
    DensityMatrix::new(m).expect("convex mixture of projectors is valid")
}

/// Random full-rank bipartite state on d_s ⊗ d_b.
pub fn random_bipartite(rng: &mut impl Rng, d_s: usize, d_b: usize) -> BipartiteState {
    let rho = random_density_matrix(rng, d_s * d_b);
    BipartiteState::from_density(rho, d_s, d_b).expect("dimensions agree")
}

/// Random product state ρ_S ⊗ ρ_B.
pub fn random_product_state(rng: &mut impl Rng, d_s: usize, d_b: usize) -> BipartiteState {
    let a = random_density_matrix(rng, d_s);
    let b = random_density_matrix(rng, d_b);
    BipartiteState::new(crate::operator::tensor(a.matrix(), b.matrix()), d_s, d_b)
        .expect("product of valid states is valid")
}

/// Random Hamiltonian decomposition with O(1) local parts and coupling.
pub fn random_hamiltonian(rng: &mut impl Rng, d_s: usize, d_b: usize) -> HamiltonianDecomposition {
    HamiltonianDecomposition::new(
        random_hermitian(rng, d_s),
        random_hermitian(rng, d_b),
        random_hermitian(rng, d_s * d_b),
    )
    .expect("parts are Hermitian by construction")
}
