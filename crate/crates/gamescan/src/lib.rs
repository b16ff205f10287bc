//! Tests and constructive decompositions for potential games and
//! zero-sum-equivalent games.
//!
//! A game is a *potential game* when every payoff is a shared function plus a
//! term that ignores the player's own strategy, and *zero-sum equivalent*
//! when the payoffs are a zero-sum game plus such passive terms. Both
//! properties are decided here by cheap centering tests built from axis-wise
//! averaging operators, cross-checked by independent oracles:
//!
//! - [`classify::potential_test`] / [`classify::zero_sum_equiv_test`] — the
//!   integral (centering) tests on finite weighted strategy grids;
//! - [`classify::cycle_test`] — the classical closed-loop condition, kept as
//!   a brute-force oracle;
//! - [`classify::sandholm_test_2p`] — the two-player double-centering form;
//! - [`extract`] — constructive potentials, zero-sum normalizations and
//!   common-plus-passives representations, verified after construction;
//! - [`smooth`] — finite-difference derivative tests and grid sampling for
//!   games with interval strategy sets.

pub mod classify;
pub mod corpus;
mod error;
pub mod extract;
pub mod json;
pub mod model;
pub mod ops;
pub mod smooth;

pub use classify::{
    classify, cycle_test, potential_test, sandholm_test_2p, zero_sum_equiv_test,
    ClassificationReport, TestVerdict, Witness,
};
pub use error::{Error, Result};
pub use extract::{
    extract_potential, potential_representation, verify_potential, zero_sum_decomposition,
    zero_sum_normalize, zero_sum_representation, PotentialDecomposition, UiRepresentation,
    ZeroSumRepresentation,
};
pub use json::{parse_game_json, serialize_game};
pub use model::{FiniteGame, PassiveGame, WeightedStrategySpace};
pub use smooth::{
    builtin_game, contest_game, default_eval_points, derivative_potential_test,
    derivative_zero_sum_test, mixed_partial, sample_game, GridSpec, QuadratureScheme, SmoothGame,
};

/// Default tolerance for the finite (centering) tests.
pub const DEFAULT_FINITE_TOL: f64 = 1e-9;
/// Default tolerance for the sampled derivative tests.
pub const DEFAULT_DERIVATIVE_TOL: f64 = smooth::DEFAULT_DERIVATIVE_TOL;
