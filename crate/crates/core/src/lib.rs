//! Greedy sparse approximation over finite dictionaries.
//!
//! The crate is organized bottom-up:
//!
//! * [`dictionary`]: unit-norm atom collections, cumulative coherence, builders.
//! * [`signals`]: sparse representations, quasi-norms, coefficient-level checks.
//! * [`greedy`]: pure and orthogonal greedy algorithms with step traces.
//! * [`analysis`]: convergence checks over traces, decay fits, and a
//!   brute-force best-m-term oracle.
//!
//! All arithmetic is `f64`. Every randomized builder takes an explicit seed
//! and is bit-reproducible.

pub mod analysis;
pub mod dictionary;
pub mod error;
pub mod greedy;
mod linalg;
pub mod signals;

pub use analysis::{
    best_mterm_oracle, check_energy_recursion, check_exact_recovery, check_exponential_decay,
    check_lemma35, check_pga_lemmas, check_theorem1, check_theorem2, fit_decay_exponent,
    OracleResult, RateFit, SummaryRow, TheoremKind, TheoremReport, TrajectoryLemmas,
};
pub use dictionary::{CoherenceReport, Dictionary, FrameBounds, IncoherentBuilder};
pub use error::{Error, Result};
pub use greedy::{
    project_onto_atoms, run_oga, run_pga, select_atom, Algorithm, GreedyTrace, StepRecord,
    StopReason, StopRule,
};
pub use linalg::{dot, norm};
pub use signals::{
    check_lemma2, check_lemma2_all, check_lemma3_descent, gen_power_law_signal, gen_sparse_signal,
    LemmaReport, SparseRepresentation,
};

/// Formats a real with 17 significant digits in scientific notation, which
/// round-trips every `f64` exactly.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn parse_real(s: &str, line: usize) -> Result<f64> {
    s.parse::<f64>().map_err(|e| Error::Parse {
        line,
        message: format!("bad number `{s}`: {e}"),
    })
}
