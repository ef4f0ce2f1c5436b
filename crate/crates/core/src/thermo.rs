//! Thermodynamics of correlations: binding energy, effective Hamiltonians,
//! heat bookkeeping, the two decompositions of the binding-energy rate, and
//! the interaction-norm bound on the mutual information.
//!
//! Everything here mixes entropies with β-weighted energies, which is only
//! dimensionally consistent with natural logarithms; this module therefore
//! uses nats throughout regardless of the base configured elsewhere.

use thiserror::Error;

use crate::config::Tolerances;
use crate::correlation::{correlation_matrix, qmi};
use crate::dynamics::{
    chi_norm2_rate, log_of_product, product_rate, qmi_rate, HamiltonianDecomposition, Trajectory,
};
use crate::operator::{
    identity, matrix_log, norm, partial_trace, real_trace_product, tensor, CMatrix, NormKind,
    Subsystem,
};
use crate::state::{
    relative_entropy, thermal_state, BipartiteState, DensityMatrix, StateError,
};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ThermoError {
    /// The two algebraically equal forms of the binding energy disagreed,
    /// which signals a defective correlation matrix upstream.
    #[error("binding-energy forms disagree by {difference:.3e}")]
    FormMismatch { difference: f64 },

    /// ‖χ‖₂ is numerically zero, so normalized-χ terms are undefined.
    #[error("correlation matrix is numerically zero")]
    ZeroChi,

    /// A thermal reference state is singular on the support needed for
    /// logarithms.
    #[error("thermal reference is numerically singular (min eigenvalue {min_eigenvalue:.3e})")]
    SingularReference { min_eigenvalue: f64 },

    /// The trajectory does not start from the required thermal product
    /// state.
    #[error("initial state is not the thermal product (deviation {deviation:.3e})")]
    NotThermalInitial { deviation: f64 },

    /// Underlying state construction failed.
    #[error(transparent)]
    State(#[from] StateError),
}

/// A fixed thermal product reference ρ*_S ⊗ ρ*_B at inverse temperature β.
#[derive(Debug, Clone)]
pub struct ThermalReference {
    beta: f64,
    rho_star_s: DensityMatrix,
    rho_star_b: DensityMatrix,
}

impl ThermalReference {
    /// Thermalize the local parts of a Hamiltonian at inverse temperature β.
    pub fn new(h: &HamiltonianDecomposition, beta: f64) -> Result<Self, ThermoError> {
        let rho_star_s = thermal_state(h.h_s(), beta)?;
        let rho_star_b = thermal_state(h.h_b(), beta)?;
        Ok(Self { beta, rho_star_s, rho_star_b })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn rho_star_s(&self) -> &DensityMatrix {
        &self.rho_star_s
    }

    pub fn rho_star_b(&self) -> &DensityMatrix {
        &self.rho_star_b
    }

    /// The product ρ*_S ⊗ ρ*_B as a matrix.
    pub fn product(&self) -> CMatrix {
        tensor(self.rho_star_s.matrix(), self.rho_star_b.matrix())
    }

    /// The product as a validated bipartite state.
    pub fn product_state(&self) -> BipartiteState {
        BipartiteState::new(self.product(), self.rho_star_s.dim(), self.rho_star_b.dim())
            .expect("product of thermal states is valid")
    }

    fn min_eigenvalue(&self) -> f64 {
        self.rho_star_s.eigenvalues()[0].min(self.rho_star_b.eigenvalues()[0])
    }
}

/// Binding energy U_χ = Tr[χ H_I], the energy stored jointly in correlations
/// and interaction.
///
/// Both algebraic forms, Tr[ρ H] - Tr[ρ_S ⊗ ρ_B H] and Tr[χ H_I], are
/// computed; they differ only through Tr[χ H_S] = Tr[χ H_B] = 0, so any
/// disagreement beyond 1e-10 reports a defective χ.
pub fn binding_energy(
    state: &BipartiteState,
    h: &HamiltonianDecomposition,
) -> Result<f64, ThermoError> {
    let chi = correlation_matrix(state);
    let via_chi = real_trace_product(chi.matrix(), h.h_i());
    let via_total = real_trace_product(state.matrix(), h.h_total())
        - real_trace_product(&state.product_of_marginals(), h.h_total());
    let difference = (via_chi - via_total).abs();
    if difference > 1e-10 {
        return Err(ThermoError::FormMismatch { difference });
    }
    Ok(via_chi)
}

/// Tr[χ H_I] without the dual-form consistency check, for per-point use on
/// trusted trajectories.
fn binding_energy_unchecked(state: &BipartiteState, h: &HamiltonianDecomposition) -> f64 {
    real_trace_product(correlation_matrix(state).matrix(), h.h_i())
}

/// Instantaneous rate of the binding energy, Tr[dχ/dt H_I].
pub fn binding_energy_rate(state: &BipartiteState, h: &HamiltonianDecomposition) -> f64 {
    real_trace_product(&chi_rate(state, h), h.h_i())
}

/// dχ/dt = -i[H, ρ] - d(ρ_S ⊗ ρ_B)/dt.
fn chi_rate(state: &BipartiteState, h: &HamiltonianDecomposition) -> CMatrix {
    use crate::operator::{commutator, C64};
    let drho = commutator(h.h_total(), state.matrix()) * (-C64::i());
    drho - product_rate(state, h)
}

/// Mean-field dressed local Hamiltonian: H̃_S = H_S + Tr_B[(I ⊗ ρ_B) H_I]
/// or the symmetric statement for B.
pub fn effective_hamiltonian(
    state: &BipartiteState,
    h: &HamiltonianDecomposition,
    which: Subsystem,
) -> CMatrix {
    effective_from_partner(h, which, match which {
        Subsystem::S => state.marginal_b().matrix().clone(),
        Subsystem::B => state.marginal_s().matrix().clone(),
    })
}

fn effective_from_partner(
    h: &HamiltonianDecomposition,
    which: Subsystem,
    partner: CMatrix,
) -> CMatrix {
    let (d_s, d_b) = h.dims();
    match which {
        Subsystem::S => {
            let weighted = tensor(&identity(d_s), &partner) * h.h_i();
            h.h_s() + partial_trace(&weighted, (d_s, d_b), Subsystem::S).expect("dims agree")
        }
        Subsystem::B => {
            let weighted = tensor(&partner, &identity(d_b)) * h.h_i();
            h.h_b() + partial_trace(&weighted, (d_s, d_b), Subsystem::B).expect("dims agree")
        }
    }
}

/// One row of the per-step heat bookkeeping along a trajectory.
///
/// `dq_s`, `dq_b` are the heats Tr[dρ_a H̃_a] exchanged over one grid step
/// and `du_chi` the matching change of the binding energy; `residual` is
/// their sum, which closed-system evolution forces to zero up to
/// discretization error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatLedger {
    pub time: f64,
    pub dq_s: f64,
    pub dq_b: f64,
    pub du_chi: f64,
    pub residual: f64,
}

/// Heat bookkeeping for every grid point of a trajectory.
///
/// Interior points use symmetric differences (ρ(t+dt) - ρ(t-dt))/2 with the
/// effective Hamiltonian evaluated at the central state; the ends use
/// one-sided differences with the average of the two adjacent states. Both
/// choices keep the per-step residual at O(dt³).
pub fn heat_ledger(trajectory: &Trajectory, h: &HamiltonianDecomposition) -> Vec<HeatLedger> {
    let states = trajectory.states();
    let times = trajectory.times();
    let n = states.len();
    if n < 2 {
        return Vec::new();
    }

    let u_chi: Vec<f64> = states.iter().map(|s| binding_energy_unchecked(s, h)).collect();
    let marginals: Vec<(CMatrix, CMatrix)> = states
        .iter()
        .map(|s| (s.marginal_s().matrix().clone(), s.marginal_b().matrix().clone()))
        .collect();

    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let (d_rho_s, d_rho_b, h_s_eff, h_b_eff, du_chi) = if k == 0 || k == n - 1 {
            let (lo, hi) = if k == 0 { (0, 1) } else { (n - 2, n - 1) };
            let mid = (states[lo].matrix() + states[hi].matrix()).scale(0.5);
            let mid_s = partial_trace(&mid, h.dims(), Subsystem::S).expect("dims agree");
            let mid_b = partial_trace(&mid, h.dims(), Subsystem::B).expect("dims agree");
            (
                &marginals[hi].0 - &marginals[lo].0,
                &marginals[hi].1 - &marginals[lo].1,
                effective_from_partner(h, Subsystem::S, mid_b),
                effective_from_partner(h, Subsystem::B, mid_s),
                u_chi[hi] - u_chi[lo],
            )
        } else {
            (
                (&marginals[k + 1].0 - &marginals[k - 1].0).scale(0.5),
                (&marginals[k + 1].1 - &marginals[k - 1].1).scale(0.5),
                effective_from_partner(h, Subsystem::S, marginals[k].1.clone()),
                effective_from_partner(h, Subsystem::B, marginals[k].0.clone()),
                (u_chi[k + 1] - u_chi[k - 1]) / 2.0,
            )
        };
        let dq_s = real_trace_product(&d_rho_s, &h_s_eff);
        let dq_b = real_trace_product(&d_rho_b, &h_b_eff);
        rows.push(HeatLedger {
            time: times[k],
            dq_s,
            dq_b,
            du_chi,
            residual: dq_s + dq_b + du_chi,
        });
    }
    rows
}

/// Split of the binding-energy rate along the norm and the direction of χ:
///
/// ```text
/// dU_χ/dt = Tr[χ̂ H_I] d‖χ‖₂/dt  +  Tr[dχ̂/dt H_I] ‖χ‖₂
/// ```
///
/// with χ̂ = χ/‖χ‖₂. Returns the two right-hand terms; their sum equals
/// [`binding_energy_rate`]. Fails with [`ThermoError::ZeroChi`] when the
/// normalized direction is undefined.
pub fn du_decomposition_norm(
    state: &BipartiteState,
    h: &HamiltonianDecomposition,
) -> Result<(f64, f64), ThermoError> {
    let chi = correlation_matrix(state);
    let n = chi.norm2();
    if n <= 1e-12 {
        return Err(ThermoError::ZeroChi);
    }
    let d_norm = chi_norm2_rate(state, h) / (2.0 * n);
    let d_chi = chi_rate(state, h);
    // dχ̂/dt by the quotient rule.
    let d_chi_hat = d_chi.scale(1.0 / n) - chi.matrix().scale(d_norm / (n * n));
    let term_norm = real_trace_product(&chi.matrix().scale(1.0 / n), h.h_i()) * d_norm;
    let term_direction = real_trace_product(&d_chi_hat, h.h_i()) * n;
    Ok((term_norm, term_direction))
}

/// Split of the binding-energy rate against a thermal reference:
///
/// ```text
/// dU_χ/dt = -(1/β) dI/dt
///           -(1/β) d/dt S(ρ_S ⊗ ρ_B ‖ ρ*_S ⊗ ρ*_B)
///           - Tr[d(ρ_S ⊗ ρ_B)/dt H_I]
/// ```
///
/// Returns the three right-hand terms (nats). The relative-entropy rate uses
/// d/dt S(P(t) ‖ P*) = Tr[dP/dt (log P - log P*)], exact for full-rank
/// marginals.
pub fn du_decomposition_qmi(
    state: &BipartiteState,
    h: &HamiltonianDecomposition,
    reference: &ThermalReference,
) -> Result<(f64, f64, f64), ThermoError> {
    let beta = reference.beta();
    let min_eigenvalue = reference.min_eigenvalue();
    if min_eigenvalue <= Tolerances::default().support {
        return Err(ThermoError::SingularReference { min_eigenvalue });
    }
    let log_ref = matrix_log(&reference.product())
        .map_err(|_| ThermoError::SingularReference { min_eigenvalue })?;

    let d_product = product_rate(state, h);
    let term_qmi = -qmi_rate(state, h) / beta;
    let relent_rate = real_trace_product(&d_product, &(log_of_product(state) - log_ref));
    let term_relent = -relent_rate / beta;
    let term_local = -real_trace_product(&d_product, h.h_i());
    Ok((term_qmi, term_relent, term_local))
}

/// Largest violation of the integrated mutual-information identity along a
/// trajectory that starts from the thermal product state at inverse
/// temperature β:
///
/// ```text
/// I(t) = -β Tr[χ(t) H_I]
///        - S(ρ_S(t) ⊗ ρ_B(t) ‖ ρ_S(0) ⊗ ρ_B(0))
///        - β Tr[(ρ_S(t) ⊗ ρ_B(t) - ρ_S(0) ⊗ ρ_B(0)) H_I]
/// ```
///
/// The residual |LHS - RHS| is evaluated at the endpoint and at ten interior
/// checkpoints; the maximum is returned. Fails with
/// [`ThermoError::NotThermalInitial`] unless the first stored state matches
/// the thermal product within 1e-10 entrywise.
pub fn integrated_qmi_identity(
    trajectory: &Trajectory,
    h: &HamiltonianDecomposition,
    beta: f64,
) -> Result<f64, ThermoError> {
    let reference = ThermalReference::new(h, beta)?;
    let initial = trajectory.states().first().ok_or(ThermoError::NotThermalInitial {
        deviation: f64::INFINITY,
    })?;
    let deviation = (initial.matrix() - reference.product())
        .iter()
        .fold(0.0f64, |acc, z| acc.max(z.norm()));
    if deviation > 1e-10 {
        return Err(ThermoError::NotThermalInitial { deviation });
    }

    let product0 = DensityMatrix::new(reference.product())?;
    let n = trajectory.len();
    let checkpoints = (1..=10)
        .map(|k| k * (n - 1) / 11)
        .chain(std::iter::once(n - 1));

    let mut worst = 0.0f64;
    for k in checkpoints {
        let state = &trajectory.states()[k];
        let lhs = qmi(state);
        let product_t = DensityMatrix::new(state.product_of_marginals())?;
        let relent = relative_entropy(&product_t, &product0)
            .expect("same dimension")
            .expect_finite();
        let delta_product = state.product_of_marginals() - reference.product();
        let rhs = -beta * binding_energy_unchecked(state, h)
            - relent
            - beta * real_trace_product(&delta_product, h.h_i());
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// The interaction-norm bound 2 β ‖H_I‖ on the mutual information of any
/// trajectory that starts from a thermal product state at inverse
/// temperature β.
pub fn area_law_bound(h: &HamiltonianDecomposition, beta: f64) -> f64 {
    2.0 * beta * norm(h.h_i(), NormKind::Operator)
}
