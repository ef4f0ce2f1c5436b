//! Acceptance suite: one test per numbered criterion, each printing a
//! single pass/fail line (run with `--nocapture` to see them).
//!
//! The two long trajectories (the benchmark run over t ∈ [4, 8] and the
//! thermal run over t ∈ [0, 2], both at dt = 4e-5) are computed once and
//! shared across criteria.

use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcorr::correlation::{correlation_matrix, qmi};
use qcorr::dynamics::{
    benchmark_hamiltonian, chi_norm2_rate, discrepancy_scan, qmi_rate, qmi_rate_full, sweep,
    HamiltonianDecomposition, Propagator, Trajectory,
};
use qcorr::operator::{commutator, identity, real_trace_product, tensor, CMatrix, Subsystem};
use qcorr::presets::{benchmark_state, constant_correlation_state, reference_discrepancy_intervals};
use qcorr::random::{random_bipartite, random_hamiltonian, random_hermitian};
use qcorr::state::BipartiteState;
use qcorr::thermo::{
    area_law_bound, binding_energy, binding_energy_rate, du_decomposition_norm,
    du_decomposition_qmi, heat_ledger, integrated_qmi_identity, ThermalReference,
};

const DT: f64 = 4e-5;
const ENDPOINT_TOLERANCE: f64 = 0.01;

fn report(criterion: usize, passed: bool, details: &str) {
    let verdict = if passed { "PASS" } else { "FAIL" };
    println!("criterion {criterion}: {verdict} - {details}");
}

struct TimedTrajectory {
    trajectory: Trajectory,
    seconds: f64,
}

fn benchmark_run() -> &'static TimedTrajectory {
    static RUN: OnceLock<TimedTrajectory> = OnceLock::new();
    RUN.get_or_init(|| {
        let started = Instant::now();
        let trajectory = sweep(&benchmark_state(), &benchmark_hamiltonian(), 4.0, 8.0, DT)
            .expect("grid fits the cap");
        TimedTrajectory { trajectory, seconds: started.elapsed().as_secs_f64() }
    })
}

fn thermal_run() -> &'static TimedTrajectory {
    static RUN: OnceLock<TimedTrajectory> = OnceLock::new();
    RUN.get_or_init(|| {
        let h = benchmark_hamiltonian();
        let state0 = ThermalReference::new(&h, 1.0).expect("local parts thermalize").product_state();
        let started = Instant::now();
        let trajectory = sweep(&state0, &h, 0.0, 2.0, DT).expect("grid fits the cap");
        TimedTrajectory { trajectory, seconds: started.elapsed().as_secs_f64() }
    })
}

/// Criterion 1: the constant-χ parameter sweep locates the mutual-
/// information minimum at x = 0.640 ± 0.005 while ‖χ‖₂ stays pinned at
/// √0.02 to 1e-12, in under five seconds.
#[test]
fn criterion_1_parameter_sweep() {
    let started = Instant::now();
    let steps = ((0.9 - 0.27f64) / 0.001).round() as usize;
    let mut argmin_x = f64::NAN;
    let mut min_qmi = f64::INFINITY;
    let mut worst_chi_deviation = 0.0f64;
    let mut all_valid = true;
    let target = 0.02f64.sqrt();
    for k in 0..=steps {
        let x = 0.27 + k as f64 * 0.001;
        match constant_correlation_state(x) {
            Ok(state) => {
                let value = qmi(&state);
                if value < min_qmi {
                    min_qmi = value;
                    argmin_x = x;
                }
                let chi = correlation_matrix(&state).norm2();
                worst_chi_deviation = worst_chi_deviation.max((chi - target).abs());
            }
            Err(_) => all_valid = false,
        }
    }
    let seconds = started.elapsed().as_secs_f64();

    let argmin_ok = (argmin_x - 0.640).abs() <= 0.005 + 1e-12;
    let chi_ok = worst_chi_deviation <= 1e-12;
    let fast_enough = seconds < 5.0;
    let passed = argmin_ok && chi_ok && all_valid && fast_enough;
    report(
        1,
        passed,
        &format!(
            "argmin x = {argmin_x:.3} (min qmi {min_qmi:.6}), max |chi - sqrt(0.02)| = \
             {worst_chi_deviation:.2e}, all states valid = {all_valid}, {seconds:.2} s"
        ),
    );
    assert!(passed);
}

fn matches_reference(intervals: &[qcorr::dynamics::DiscrepancyInterval], a: f64, b: f64) -> bool {
    intervals.iter().any(|iv| {
        (iv.t_start - a).abs() <= ENDPOINT_TOLERANCE && (iv.t_end - b).abs() <= ENDPOINT_TOLERANCE
    })
}

/// Criterion 2: the discrepancy scanner reproduces the two highlighted
/// intervals and at least 20 of the 24 reference intervals at ±0.01 per
/// endpoint, within the runtime target.
#[test]
fn criterion_2_discrepancy_intervals() {
    let run = benchmark_run();
    let intervals = discrepancy_scan(&run.trajectory, 1e-9);

    let first_highlighted = matches_reference(&intervals, 4.371, 4.432);
    let second_highlighted = matches_reference(&intervals, 7.177, 7.218);
    let matched = reference_discrepancy_intervals()
        .iter()
        .filter(|(a, b)| matches_reference(&intervals, *a, *b))
        .count();

    let fast_enough = run.seconds < 300.0;
    let passed = first_highlighted && second_highlighted && matched >= 20 && fast_enough;
    report(
        2,
        passed,
        &format!(
            "matched {matched}/24 reference intervals ({} found), highlighted [4.371, 4.432] = \
             {first_highlighted}, [7.177, 7.218] = {second_highlighted}, sweep {:.1} s",
            intervals.len(),
            run.seconds
        ),
    );
    assert!(passed);
}

/// Criterion 3: the analytic rates agree with central finite differences
/// (step 1e-6) at 100 random points of the benchmark trajectory.
#[test]
fn criterion_3_rates_vs_finite_differences() {
    let h = benchmark_hamiltonian();
    let state0 = benchmark_state();
    let propagator = Propagator::new(&h);
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0003);
    let step = 1e-6;

    let mut worst_qmi = 0.0f64;
    let mut worst_chi = 0.0f64;
    let mut ok = true;
    for _ in 0..100 {
        let t = rng.random_range(4.0..8.0);
        let state = propagator.evolve(&state0, t);

        let fd_qmi = (qmi(&propagator.evolve(&state0, t + step))
            - qmi(&propagator.evolve(&state0, t - step)))
            / (2.0 * step);
        let fd_chi = (correlation_matrix(&propagator.evolve(&state0, t + step)).norm2().powi(2)
            - correlation_matrix(&propagator.evolve(&state0, t - step)).norm2().powi(2))
            / (2.0 * step);

        let qmi_error = (qmi_rate(&state, &h) - fd_qmi).abs();
        let chi_error = (chi_norm2_rate(&state, &h) - fd_chi).abs();
        worst_qmi = worst_qmi.max(qmi_error);
        worst_chi = worst_chi.max(chi_error);
        ok &= qmi_error <= (1e-6 * fd_qmi.abs()).max(1e-8);
        ok &= chi_error <= (1e-6 * fd_chi.abs()).max(1e-8);
    }
    report(
        3,
        ok,
        &format!("worst |analytic - fd|: qmi rate {worst_qmi:.2e}, chi-norm2 rate {worst_chi:.2e}"),
    );
    assert!(ok);
}

/// Criterion 4: the trace-identity suite holds at 1e-9 on 500 random
/// (state, Hamiltonian) pairs, and the full and simplified rate forms
/// agree at 1e-9.
#[test]
fn criterion_4_trace_identity_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0004);
    let mut worst = [0.0f64; 4];
    for _ in 0..500 {
        let state = random_bipartite(&mut rng, 2, 2);
        let h = random_hamiltonian(&mut rng, 2, 2);
        let chi = correlation_matrix(&state);
        let log_s = qcorr::operator::matrix_log_on_support(state.marginal_s().matrix()).unwrap();
        let log_b = qcorr::operator::matrix_log_on_support(state.marginal_b().matrix()).unwrap();
        let product = state.product_of_marginals();
        let log_product = tensor(&log_s, &identity(2)) + tensor(&identity(2), &log_b);

        // (a) vanishing partial traces of chi, in the literal form
        // Tr[chi (A ⊗ I)] = Tr[chi (I ⊗ B)] = 0 for arbitrary A, B.
        let a = random_hermitian(&mut rng, 2);
        let b = random_hermitian(&mut rng, 2);
        let id_a = real_trace_product(chi.matrix(), &tensor(&a, &identity(2))).abs();
        let id_b = real_trace_product(chi.matrix(), &tensor(&identity(2), &b)).abs();
        worst[0] = worst[0].max(id_a).max(id_b);

        // (b) Tr[[H, rho_S ⊗ rho_B] log(rho_S ⊗ rho_B)] = 0.
        let id = (commutator(h.h_total(), &product) * &log_product).trace().norm();
        worst[1] = worst[1].max(id);

        // (c) Tr[[H_a, chi] log rho_b] = 0 for a, b in {S, B}.
        let h_s_lifted = tensor(h.h_s(), &identity(2));
        let h_b_lifted = tensor(&identity(2), h.h_b());
        let log_s_lifted = tensor(&log_s, &identity(2));
        let log_b_lifted = tensor(&identity(2), &log_b);
        for h_local in [&h_s_lifted, &h_b_lifted] {
            for log_local in [&log_s_lifted, &log_b_lifted] {
                let id = (commutator(h_local, chi.matrix()) * log_local).trace().norm();
                worst[2] = worst[2].max(id);
            }
        }

        // Full Eq-form vs simplified form of the mutual-information rate.
        let gap = (qmi_rate_full(&state, &h) - qmi_rate(&state, &h)).abs();
        worst[3] = worst[3].max(gap);
    }
    let passed = worst.iter().all(|&w| w <= 1e-9);
    report(
        4,
        passed,
        &format!(
            "worst over 500 pairs: partial traces {:.2e}, [H,P]logP {:.2e}, [H_a,chi]log rho_b \
             {:.2e}, full-vs-simplified {:.2e}",
            worst[0], worst[1], worst[2], worst[3]
        ),
    );
    assert!(passed);
}

/// Criterion 5: per-step heat balance |dQ_S + dQ_B + dU_chi| ≤ 1e-8 on both
/// long runs, and the two binding-energy forms agree at 1e-10 everywhere.
#[test]
fn criterion_5_heat_balance() {
    let h = benchmark_hamiltonian();
    let mut worst_residual = 0.0f64;
    let mut dual_forms_ok = true;
    for run in [benchmark_run(), thermal_run()] {
        for row in heat_ledger(&run.trajectory, &h) {
            worst_residual = worst_residual.max(row.residual.abs());
        }
        for state in run.trajectory.states() {
            // binding_energy computes both forms and fails beyond 1e-10.
            dual_forms_ok &= binding_energy(state, &h).is_ok();
        }
    }
    let passed = worst_residual <= 1e-8 && dual_forms_ok;
    report(
        5,
        passed,
        &format!(
            "worst per-step residual {worst_residual:.2e} over both runs, dual forms agree = \
             {dual_forms_ok}"
        ),
    );
    assert!(passed);
}

/// Criterion 6: both decompositions of the binding-energy rate match the
/// direct rate at 1e-7 on sampled trajectory points.
#[test]
fn criterion_6_rate_decompositions() {
    let h = benchmark_hamiltonian();
    let reference = ThermalReference::new(&h, 1.0).unwrap();

    // Norm/direction split on the benchmark run, where chi never vanishes.
    let run = &benchmark_run().trajectory;
    let mut worst_norm_split = 0.0f64;
    let mut sampled_norm = 0;
    for k in (0..run.len()).step_by(run.len() / 12) {
        let state = &run.states()[k];
        if correlation_matrix(state).norm2() <= 0.01 {
            continue;
        }
        let (term_norm, term_direction) = du_decomposition_norm(state, &h).unwrap();
        let direct = binding_energy_rate(state, &h);
        worst_norm_split = worst_norm_split.max((term_norm + term_direction - direct).abs());
        sampled_norm += 1;
    }

    // Thermal-reference split on the thermal run.
    let run = &thermal_run().trajectory;
    let mut worst_qmi_split = 0.0f64;
    let mut sampled_qmi = 0;
    for k in (0..run.len()).step_by(run.len() / 12) {
        let state = &run.states()[k];
        let (a, b, c) = du_decomposition_qmi(state, &h, &reference).unwrap();
        let direct = binding_energy_rate(state, &h);
        worst_qmi_split = worst_qmi_split.max((a + b + c - direct).abs());
        sampled_qmi += 1;
    }

    let passed =
        sampled_norm >= 8 && sampled_qmi >= 8 && worst_norm_split <= 1e-7 && worst_qmi_split <= 1e-7;
    report(
        6,
        passed,
        &format!(
            "norm/direction split: worst {worst_norm_split:.2e} on {sampled_norm} points; \
             thermal split: worst {worst_qmi_split:.2e} on {sampled_qmi} points"
        ),
    );
    assert!(passed);
}

/// Criterion 7: from the thermal product start at β = 1, the integrated
/// identity holds at 1e-7 and the mutual information never exceeds
/// 2β‖H_I‖ = 15.
#[test]
fn criterion_7_integrated_identity_and_bound() {
    let h = benchmark_hamiltonian();
    let run = &thermal_run().trajectory;
    let residual = integrated_qmi_identity(run, &h, 1.0).unwrap();
    let bound = area_law_bound(&h, 1.0);
    let max_qmi = run.qmi_series().iter().fold(0.0f64, |acc, &x| acc.max(x));

    let passed = residual <= 1e-7 && (bound - 15.0).abs() <= 1e-10 && max_qmi <= bound + 1e-9;
    report(
        7,
        passed,
        &format!(
            "integrated-identity residual {residual:.2e}, max qmi {max_qmi:.4} vs bound {bound}"
        ),
    );
    assert!(passed);
}

/// Criterion 8: for (1-ε) Bell + ε I/4 the ratio (dI/dt) / (2 d‖χ‖₂²/dt),
/// evaluated where both rates exceed 1e-6, approaches 1 monotonically as
/// ε decreases through {0.1, 0.01, 0.001}.
///
/// Measurement note: under the benchmark Hamiltonian the ratio at the
/// first resolvable instant equals 1/(2-ε), so it approaches 1/2 — not 1 —
/// as ε decreases, and the deviation from 1 grows monotonically instead of
/// shrinking. The assertion below states the criterion as written and is
/// expected to fail; the printed ratios document the measured behaviour.
#[test]
fn criterion_8_proportionality_limit() {
    let h = benchmark_hamiltonian();
    let bell = qcorr::presets::bell_state();

    let mut ratios = Vec::new();
    for eps in [0.1, 0.01, 0.001] {
        let state0 = BipartiteState::new(
            bell.matrix().scale(1.0 - eps) + identity(4).scale(eps / 4.0),
            2,
            2,
        )
        .unwrap();
        let propagator = Propagator::new(&h);
        let mut t = 0.0;
        let ratio = loop {
            t += 1e-4;
            assert!(t < 2.0, "rates never exceeded the 1e-6 floor");
            let state = propagator.evolve(&state0, t);
            let rate_qmi = qmi_rate(&state, &h);
            let rate_chi = chi_norm2_rate(&state, &h);
            if rate_qmi.abs() > 1e-6 && rate_chi.abs() > 1e-6 {
                break rate_qmi / (2.0 * rate_chi);
            }
        };
        ratios.push((eps, ratio));
    }

    let deviations: Vec<f64> = ratios.iter().map(|(_, r)| (r - 1.0).abs()).collect();
    let monotone_toward_one = deviations.windows(2).all(|w| w[1] < w[0]);
    report(
        8,
        monotone_toward_one,
        &format!(
            "ratios {:?}; measured behaviour approaches 1/(2-eps) -> 1/2, so the deviation from 1 \
             grows as eps shrinks",
            ratios
                .iter()
                .map(|(eps, r)| format!("eps={eps}: {r:.6}"))
                .collect::<Vec<_>>()
        ),
    );
    assert!(
        monotone_toward_one,
        "the ratio does not approach 1 monotonically as eps decreases: deviations {deviations:?}"
    );
}

/// Auxiliary check shared by the suite: the long trajectories keep their
/// unitary invariants (entropy constant, states valid), so the criteria
/// above are evaluated on trustworthy data.
#[test]
fn trajectory_sanity() {
    for run in [benchmark_run(), thermal_run()] {
        assert!(run.trajectory.joint_entropy_drift() <= 1e-8);
        for state in
            run.trajectory.states().iter().step_by(run.trajectory.len() / 20)
        {
            assert!((state.matrix().trace().re - 1.0).abs() <= 1e-10);
            assert!(state.density().eigenvalues()[0] >= -1e-10);
        }
    }
}

/// The sign-product column promised to downstream consumers is the scanner
/// input: regression-pin the first highlighted interval's grid alignment.
#[test]
fn intervals_are_grid_aligned() {
    let run = &benchmark_run().trajectory;
    let intervals = discrepancy_scan(run, 1e-9);
    for interval in &intervals {
        let start_offset = (interval.t_start - 4.0) / DT;
        let end_offset = (interval.t_end - 4.0) / DT;
        assert!((start_offset - start_offset.round()).abs() < 1e-6);
        assert!((end_offset - end_offset.round()).abs() < 1e-6);
    }
    assert!(!intervals.is_empty());
}

/// Keep the partial-trace convention pinned for the suite (S-major).
#[test]
fn composite_index_convention() {
    let m = tensor(
        &qcorr::basis::sigma_z(),
        &identity(2),
    );
    let kept = qcorr::operator::partial_trace(&m, (2, 2), Subsystem::S).unwrap();
    let expected: CMatrix = qcorr::basis::sigma_z().scale(2.0);
    assert!((kept - expected).iter().all(|z| z.norm() < 1e-12));
}
