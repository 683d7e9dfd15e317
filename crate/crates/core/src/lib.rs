//! Exact computations with group topologies on the integers.
//!
//! The crate works with divisibility chains `1 = b_0 | b_1 | ...` and the
//! two topologies they induce on ℤ: the linear topology with basic
//! neighbourhoods `b_n ℤ`, and the topology of uniform convergence on
//! `S = {1/b_n + ℤ}` with basic neighbourhoods
//! `V_{S,m} = {k : k/b_n + ℤ ∈ T_m for all n}`.
//!
//! Everything is exact: rationals are reduced big-integer fractions and no
//! floating point is used.
//!
//! - [`torus`]: points of ℝ/ℤ and the arcs `T_m`.
//! - [`pivots`]: pivot chains and their validation.
//! - [`decomposition`]: balanced digit expansions `l = Σ k_i b_i`.
//! - [`neighborhoods`]: membership oracles and the discreteness witness.
//! - [`convergence`]: prefix convergence tests and block statistics.
//! - [`duality`]: rational characters and their continuity.
//! - [`regressions`]: the catalogue of known results checked by
//!   `qconvex verify-paper`.

pub mod convergence;
pub mod decomposition;
pub mod duality;
pub mod error;
pub mod neighborhoods;
pub mod pivots;
pub mod rational;
pub mod regressions;
pub mod report;
pub mod torus;

pub use convergence::{
    blocks_and_sn, eval_sequence, falsify_uniform, prefix_test, sn_sufficient_report, BlockReport,
    IntegerSequence, Outcome, SequenceFamily, Verdict, Witness,
};
pub use decomposition::{decompose, rd, recompose_and_check, CheckReport, PivotCoefficients};
pub use duality::{
    char_eval, continuity_window_check, generated_member, kernel_check, Character, KernelReport,
};
pub use error::{Error, Result};
pub use neighborhoods::{
    coeff_bound_test, discreteness_witness, member_direct, member_linear, member_partial_sums,
    BoundMode, DiscretenessWitness, Family, NeighborhoodSpec,
};
pub use pivots::{make_pivots, PivotDescriptor, PivotSequence, ValidationReport};
pub use rational::Rational;
pub use torus::{TmLevel, TorusPoint};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
