//! Total-correlation measures for small bipartite quantum systems, exact
//! unitary dynamics, and the thermodynamics of correlations.
//!
//! The crate contrasts the two standard scalar quantifiers of total
//! correlations in a bipartite state ρ:
//!
//! * the quantum mutual information I = S(ρ_S) + S(ρ_B) - S(ρ), and
//! * the 2-norm ‖χ‖₂ of the correlation matrix χ = ρ - ρ_S ⊗ ρ_B,
//!
//! which can move in opposite directions under both parameter changes and
//! closed-system dynamics. Analytic rate formulas, a discrepancy-interval
//! scanner, and the correlation-thermodynamics identities (binding energy,
//! heat balance, the 2β‖H_I‖ bound on the mutual information) are provided
//! on top of a small dense-matrix substrate.
//!
//! ```
//! use qcorr::correlation::{correlation_matrix, qmi};
//! use qcorr::presets::bell_state;
//!
//! let state = bell_state();
//! assert!((qmi(&state) - 2.0 * 2f64.ln()).abs() < 1e-12);
//! assert!((correlation_matrix(&state).norm2() - 0.75f64.sqrt()).abs() < 1e-12);
//! ```
//!
//! A complete guided tour lives in the `book/` directory of the repository;
//! its code snippets compile as doctests of this crate.

pub mod basis;
pub mod config;
pub mod correlation;
pub mod dynamics;
pub mod operator;
pub mod presets;
pub mod random;
pub mod state;
pub mod thermo;

pub use config::{LogBase, Tolerances};
pub use operator::{CMatrix, NormKind, Subsystem, C64};
pub use state::{BipartiteState, DensityMatrix};

// Keep the book's code snippets honest: every fenced Rust block in the
// guide is compiled and run by `cargo test --doc`.
#[cfg(doctest)]
mod book {
    macro_rules! book_chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    book_chapter!(introduction, "../../../book/src/introduction.md");
    book_chapter!(operators, "../../../book/src/operators.md");
    book_chapter!(states, "../../../book/src/states.md");
    book_chapter!(correlations, "../../../book/src/correlations.md");
    book_chapter!(dynamics, "../../../book/src/dynamics.md");
    book_chapter!(thermodynamics, "../../../book/src/thermodynamics.md");
    book_chapter!(runner, "../../../book/src/runner.md");
}
