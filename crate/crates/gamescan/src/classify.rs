//! Membership tests for potential games and zero-sum-equivalent games.
//!
//! The cheap tests center payoff differences with the averaging operators:
//! a game is potential iff `T_i T_j (u_i - u_j) = 0` for all pairs, and
//! zero-sum equivalent iff the full product of the operators annihilates the
//! payoff sum. `cycle_test` is the quartic-cost closed-loop oracle for the
//! potential property, and `sandholm_test_2p` is the two-player
//! double-centering specialization.
//!
//! Residuals are normalized by `max(1, max |payoff|)` so the default
//! tolerance of 1e-9 is scale-free.

use std::fmt;

use ndarray::ArrayD;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{profiles, FiniteGame};
use crate::ops;

/// Location of a test's largest violation.
///
/// `players` lists the players involved in the violated equality, `profile`
/// is the strategy profile where it occurs, and `alternates` holds deviation
/// strategies (parallel to `players`) for pairwise/cycle conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub players: Vec<usize>,
    pub profile: Vec<usize>,
    pub alternates: Vec<usize>,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{players={:?}, profile={:?}, alternates={:?}}}",
            self.players, self.profile, self.alternates
        )
    }
}

/// Outcome of a single membership test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestVerdict {
    pub passed: bool,
    /// Largest normalized violation found.
    pub residual: f64,
    pub tolerance: f64,
    /// Present whenever `residual > 0`; lexicographically first maximizer.
    pub witness: Option<Witness>,
}

impl TestVerdict {
    fn new(residual: f64, tolerance: f64, witness: Option<Witness>) -> Self {
        Self {
            passed: residual <= tolerance,
            residual,
            tolerance,
            witness,
        }
    }
}

impl fmt::Display for TestVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} residual={:e} tol={:e} witness=",
            if self.passed { "PASS" } else { "FAIL" },
            self.residual,
            self.tolerance
        )?;
        match &self.witness {
            Some(w) => write!(f, "{w}"),
            None => write!(f, "none"),
        }
    }
}

/// Verdicts and summary flags for one game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub n_players: usize,
    pub sizes: Vec<usize>,
    pub potential: TestVerdict,
    pub zero_sum_equivalent: TestVerdict,
    /// Payoffs sum to zero at every profile (within tolerance).
    pub exact_zero_sum: bool,
    /// All payoff tensors are identical (within tolerance).
    pub common_interest: bool,
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

/// Scan a tensor in lexicographic profile order, keeping the first maximizer.
fn scan_max<F>(t: &ArrayD<f64>, best: &mut f64, witness: &mut Option<Witness>, make: F)
where
    F: Fn(Vec<usize>) -> Witness,
{
    for profile in profiles(t.shape()) {
        let a = t[&profile[..]].abs();
        if a > *best {
            *best = a;
            *witness = Some(make(profile));
        }
    }
}

/// Pairwise centering test for the potential property.
///
/// Residual is the largest entry of `T_i T_j (u_i - u_j)` over ordered pairs
/// `i < j`, normalized. Every 1-player game passes with residual 0.
pub fn potential_test(game: &FiniteGame, tol: f64) -> Result<TestVerdict> {
    check_tol(tol)?;
    let norm = game.payoff_scale();
    let mut best = 0.0f64;
    let mut witness = None;
    for i in 0..game.n() {
        for j in (i + 1)..game.n() {
            let diff = game.payoff_tensor(i) - game.payoff_tensor(j);
            let centered = ops::t_product(&diff, game.space(), &[i, j])?;
            scan_max(&centered, &mut best, &mut witness, |profile| Witness {
                players: vec![i, j],
                profile,
                alternates: vec![],
            });
        }
    }
    Ok(TestVerdict::new(best / norm, tol, witness))
}

/// Full-product centering test for zero-sum equivalence.
///
/// Residual is the largest entry of the full operator product applied to
/// `sum_i u_i`, normalized.
pub fn zero_sum_equiv_test(game: &FiniteGame, tol: f64) -> Result<TestVerdict> {
    check_tol(tol)?;
    let norm = game.payoff_scale();
    let total = payoff_sum(game);
    let axes: Vec<usize> = (0..game.n()).collect();
    let centered = ops::t_product(&total, game.space(), &axes)?;
    let mut best = 0.0f64;
    let mut witness = None;
    scan_max(&centered, &mut best, &mut witness, |profile| Witness {
        players: vec![],
        profile,
        alternates: vec![],
    });
    Ok(TestVerdict::new(best / norm, tol, witness))
}

pub(crate) fn payoff_sum(game: &FiniteGame) -> ArrayD<f64> {
    let mut total = game.payoff_tensor(0).clone();
    for p in 1..game.n() {
        total += game.payoff_tensor(p);
    }
    total
}

/// Brute-force closed-loop oracle for the potential property.
///
/// Evaluates the four-term cycle sum over every pair of players, every pair
/// of deviations and every profile of the remaining players. Swapping a
/// strategy with its deviation only flips the sign of the sum, so the scan
/// is restricted to ordered deviation pairs.
///
/// Cost is quartic in strategy counts per player pair; this is the
/// independent check for `potential_test`, not a fast path.
pub fn cycle_test(game: &FiniteGame, tol: f64) -> Result<TestVerdict> {
    check_tol(tol)?;
    let n = game.n();
    let sizes = game.sizes().to_vec();
    let norm = game.payoff_scale();
    let strides = row_major_strides(&sizes);
    let flats: Vec<_> = (0..n)
        .map(|p| game.payoff_tensor(p).as_standard_layout())
        .collect();
    let mut best = 0.0f64;
    let mut witness = None;

    for i in 0..n {
        for j in (i + 1)..n {
            let ui = flats[i].as_slice().expect("standard layout");
            let uj = flats[j].as_slice().expect("standard layout");
            let (ki, kj) = (sizes[i], sizes[j]);
            let (di, dj) = (strides[i], strides[j]);
            let rest_axes: Vec<usize> = (0..n).filter(|&l| l != i && l != j).collect();
            let rest_sizes: Vec<usize> = rest_axes.iter().map(|&a| sizes[a]).collect();
            for rest in profiles(&rest_sizes) {
                let base: usize = rest_axes
                    .iter()
                    .zip(&rest)
                    .map(|(&a, &s)| s * strides[a])
                    .sum();
                for si in 0..ki {
                    for ti in (si + 1)..ki {
                        let lo_i = base + si * di;
                        let hi_i = base + ti * di;
                        for sj in 0..kj {
                            for tj in (sj + 1)..kj {
                                let cycle = (ui[hi_i + sj * dj] - ui[lo_i + sj * dj])
                                    + (uj[hi_i + tj * dj] - uj[hi_i + sj * dj])
                                    + (ui[lo_i + tj * dj] - ui[hi_i + tj * dj])
                                    + (uj[lo_i + sj * dj] - uj[lo_i + tj * dj]);
                                let a = cycle.abs();
                                if a > best {
                                    best = a;
                                    let mut profile = vec![0usize; n];
                                    for (&ax, &s) in rest_axes.iter().zip(&rest) {
                                        profile[ax] = s;
                                    }
                                    profile[i] = si;
                                    profile[j] = sj;
                                    witness = Some(Witness {
                                        players: vec![i, j],
                                        profile,
                                        alternates: vec![ti, tj],
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(TestVerdict::new(best / norm, tol, witness))
}

fn row_major_strides(sizes: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; sizes.len()];
    for ax in (0..sizes.len().saturating_sub(1)).rev() {
        strides[ax] = strides[ax + 1] * sizes[ax + 1];
    }
    strides
}

/// Two-player counting-measure specialization: double-center each payoff
/// matrix separately and compare entrywise.
///
/// Produces the same residual as `potential_test` on the same game; it is
/// kept as an independently coded route.
pub fn sandholm_test_2p(game: &FiniteGame, tol: f64) -> Result<TestVerdict> {
    check_tol(tol)?;
    if game.n() != 2 {
        return Err(Error::WrongPlayerCount(format!(
            "two-player test called on {} players",
            game.n()
        )));
    }
    if !game.space().is_counting() {
        return Err(Error::NonUniformWeights(
            "two-player double-centering test requires the counting measure".into(),
        ));
    }
    let norm = game.payoff_scale();
    let dc_a = double_center(game.payoff_tensor(0));
    let dc_b = double_center(game.payoff_tensor(1));
    let mut best = 0.0f64;
    let mut witness = None;
    let d = &dc_a - &dc_b;
    scan_max(&d, &mut best, &mut witness, |profile| Witness {
        players: vec![0, 1],
        profile,
        alternates: vec![],
    });
    Ok(TestVerdict::new(best / norm, tol, witness))
}

/// `X - column means - row means + grand mean`, written out directly.
fn double_center(x: &ArrayD<f64>) -> ArrayD<f64> {
    let (k1, k2) = (x.shape()[0], x.shape()[1]);
    let mut col = vec![0.0f64; k2];
    let mut row = vec![0.0f64; k1];
    let mut grand = 0.0f64;
    for i in 0..k1 {
        for j in 0..k2 {
            let v = x[[i, j]];
            col[j] += v;
            row[i] += v;
            grand += v;
        }
    }
    for c in &mut col {
        *c /= k1 as f64;
    }
    for r in &mut row {
        *r /= k2 as f64;
    }
    grand /= (k1 * k2) as f64;
    let mut out = x.clone();
    for i in 0..k1 {
        for j in 0..k2 {
            out[[i, j]] = x[[i, j]] - col[j] - row[i] + grand;
        }
    }
    out
}

/// Run both membership tests and the exact-zero-sum / common-interest scans.
pub fn classify(game: &FiniteGame, tol: f64) -> Result<ClassificationReport> {
    check_tol(tol)?;
    let norm = game.payoff_scale();
    let potential = potential_test(game, tol)?;
    let zero_sum_equivalent = zero_sum_equiv_test(game, tol)?;
    let exact_zero_sum = ops::max_abs(&payoff_sum(game)) <= tol * norm;
    let common_interest = (1..game.n())
        .map(|p| ops::max_abs(&(game.payoff_tensor(p) - game.payoff_tensor(0))))
        .fold(0.0f64, f64::max)
        <= tol * norm;
    Ok(ClassificationReport {
        n_players: game.n(),
        sizes: game.sizes().to_vec(),
        potential,
        zero_sum_equivalent,
        exact_zero_sum,
        common_interest,
    })
}
