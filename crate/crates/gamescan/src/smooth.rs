//! Continuous-strategy games over interval boxes: finite-difference
//! derivative tests, grid sampling into finite games, and a small registry of
//! built-in game families.
//!
//! The derivative tests sample cross partials at finitely many points, so a
//! passing verdict is numerical evidence for the property, not a proof.

use std::collections::BTreeMap;
use std::fmt;

use crate::classify::{TestVerdict, Witness};
use crate::error::{Error, Result};
use crate::model::{profiles, FiniteGame};

/// Payoff callable on points of the box. Must be side-effect free and callable
/// from multiple threads.
pub type PayoffFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// An n-player game with smooth payoffs over a product of bounded intervals.
pub struct SmoothGame {
    bounds: Vec<(f64, f64)>,
    payoffs: Vec<PayoffFn>,
}

impl fmt::Debug for SmoothGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothGame")
            .field("bounds", &self.bounds)
            .field("players", &self.payoffs.len())
            .finish()
    }
}

impl SmoothGame {
    pub fn new(bounds: Vec<(f64, f64)>, payoffs: Vec<PayoffFn>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::WrongPlayerCount("need at least one player".into()));
        }
        if bounds.len() != payoffs.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} intervals but {} payoff functions",
                bounds.len(),
                payoffs.len()
            )));
        }
        for (a, (lo, hi)) in bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::ShapeMismatch(format!(
                    "axis {a}: interval ({lo}, {hi}) is not a finite box"
                )));
            }
        }
        Ok(Self { bounds, payoffs })
    }

    pub fn n(&self) -> usize {
        self.payoffs.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn eval(&self, player: usize, point: &[f64]) -> f64 {
        (self.payoffs[player])(point)
    }
}

/// Node counts and quadrature rule for sampling a box into a finite game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    pub points_per_axis: Vec<usize>,
    pub scheme: QuadratureScheme,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureScheme {
    /// k equal cells per axis, node at each cell midpoint, weight = cell width.
    UniformMidpoint,
}

impl GridSpec {
    pub fn uniform(points_per_axis: &[usize]) -> Self {
        Self {
            points_per_axis: points_per_axis.to_vec(),
            scheme: QuadratureScheme::UniformMidpoint,
        }
    }
}

/// Default step factor for derivative tests: step along axis `a` is
/// `h * (1 + |point[a]|)`.
pub const DEFAULT_STEP: f64 = 1e-4;
/// Default tolerance for derivative verdicts.
pub const DEFAULT_DERIVATIVE_TOL: f64 = 1e-6;
/// Default per-axis count for the deterministic evaluation grid.
pub const DEFAULT_EVAL_POINTS_PER_AXIS: usize = 5;

fn step_size(h: f64, coordinate: f64) -> f64 {
    h * (1.0 + coordinate.abs())
}

/// Nested central-difference mixed partial over the given distinct axes.
///
/// Uses 2^k evaluations with per-axis steps `h * (1 + |x_a|)`; error is
/// O(h^2) for smooth functions. All stencil corners must stay inside the box.
pub fn mixed_partial(
    f: &dyn Fn(&[f64]) -> f64,
    bounds: &[(f64, f64)],
    point: &[f64],
    axes: &[usize],
    h: f64,
) -> Result<f64> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidTolerance(h));
    }
    if point.len() != bounds.len() {
        return Err(Error::ShapeMismatch(format!(
            "point has {} coordinates, box has {}",
            point.len(),
            bounds.len()
        )));
    }
    let mut seen = vec![false; point.len()];
    for &a in axes {
        if a >= point.len() {
            return Err(Error::IndexOutOfRange(format!(
                "axis {a} for a {}-dimensional box",
                point.len()
            )));
        }
        if seen[a] {
            return Err(Error::DuplicateAxis(a));
        }
        seen[a] = true;
    }
    for (a, (&x, &(lo, hi))) in point.iter().zip(bounds).enumerate() {
        let margin = if seen[a] { step_size(h, x) } else { 0.0 };
        if x - margin < lo || x + margin > hi {
            return Err(Error::StencilOutOfBox(format!(
                "axis {a}: {x} +- {margin} leaves [{lo}, {hi}]"
            )));
        }
    }

    let k = axes.len();
    let steps: Vec<f64> = axes.iter().map(|&a| step_size(h, point[a])).collect();
    let mut sum = 0.0;
    let mut pt = point.to_vec();
    for mask in 0..(1u32 << k) {
        let mut sign = 1.0;
        for (m, &a) in axes.iter().enumerate() {
            if mask & (1 << m) != 0 {
                pt[a] = point[a] + steps[m];
            } else {
                pt[a] = point[a] - steps[m];
                sign = -sign;
            }
        }
        sum += sign * f(&pt);
    }
    let denom: f64 = steps.iter().map(|s| 2.0 * s).product();
    let value = sum / denom;
    if !value.is_finite() {
        return Err(Error::NonFiniteEntry(
            "finite-difference stencil produced a non-finite value".into(),
        ));
    }
    Ok(value)
}

/// Sampled max of |payoffs| at the evaluation points, floored at 1.
fn sampled_scale(game: &SmoothGame, points: &[Vec<f64>]) -> f64 {
    let mut m = 0.0f64;
    for pt in points {
        for p in 0..game.n() {
            m = m.max(game.eval(p, pt).abs());
        }
    }
    m.max(1.0)
}

/// Cross-partial equality test for the potential property, sampled at the
/// given points. Numerical evidence, not proof.
pub fn derivative_potential_test(
    game: &SmoothGame,
    points: &[Vec<f64>],
    h: f64,
    tol: f64,
) -> Result<TestVerdict> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let norm = sampled_scale(game, points);
    let mut best = 0.0f64;
    let mut witness = None;
    for i in 0..game.n() {
        for j in (i + 1)..game.n() {
            for (idx, pt) in points.iter().enumerate() {
                let di = mixed_partial(
                    &|x: &[f64]| game.eval(i, x),
                    game.bounds(),
                    pt,
                    &[i, j],
                    h,
                )?;
                let dj = mixed_partial(
                    &|x: &[f64]| game.eval(j, x),
                    game.bounds(),
                    pt,
                    &[i, j],
                    h,
                )?;
                let gap = (di - dj).abs();
                if gap > best {
                    best = gap;
                    witness = Some(Witness {
                        players: vec![i, j],
                        profile: vec![idx],
                        alternates: vec![],
                    });
                }
            }
        }
    }
    Ok(TestVerdict {
        passed: best / norm <= tol,
        residual: best / norm,
        tolerance: tol,
        witness,
    })
}

/// Summed n-th mixed partial test for zero-sum equivalence, sampled at the
/// given points. Numerical evidence, not proof.
pub fn derivative_zero_sum_test(
    game: &SmoothGame,
    points: &[Vec<f64>],
    h: f64,
    tol: f64,
) -> Result<TestVerdict> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let norm = sampled_scale(game, points);
    let axes: Vec<usize> = (0..game.n()).collect();
    let mut best = 0.0f64;
    let mut witness = None;
    for (idx, pt) in points.iter().enumerate() {
        let mut total = 0.0;
        for p in 0..game.n() {
            total += mixed_partial(
                &|x: &[f64]| game.eval(p, x),
                game.bounds(),
                pt,
                &axes,
                h,
            )?;
        }
        let gap = total.abs();
        if gap > best {
            best = gap;
            witness = Some(Witness {
                players: vec![],
                profile: vec![idx],
                alternates: vec![],
            });
        }
    }
    Ok(TestVerdict {
        passed: best / norm <= tol,
        residual: best / norm,
        tolerance: tol,
        witness,
    })
}

/// Deterministic interior evaluation grid: each axis is shrunk by a stencil
/// margin, then `per_axis` midpoint nodes are placed uniformly; the points
/// are the product grid in lexicographic order.
pub fn default_eval_points(
    bounds: &[(f64, f64)],
    h: f64,
    per_axis: usize,
) -> Result<Vec<Vec<f64>>> {
    if per_axis == 0 {
        return Err(Error::ShapeMismatch("need at least one point per axis".into()));
    }
    let mut nodes = Vec::with_capacity(bounds.len());
    for &(lo, hi) in bounds {
        let margin = 2.0 * h * (1.0 + lo.abs().max(hi.abs()));
        let (slo, shi) = (lo + margin, hi - margin);
        if slo >= shi {
            return Err(Error::StencilOutOfBox(format!(
                "interval [{lo}, {hi}] is too narrow for stencil margin {margin}"
            )));
        }
        let width = (shi - slo) / per_axis as f64;
        nodes.push(
            (0..per_axis)
                .map(|t| slo + (t as f64 + 0.5) * width)
                .collect::<Vec<f64>>(),
        );
    }
    let counts: Vec<usize> = vec![per_axis; bounds.len()];
    Ok(profiles(&counts)
        .map(|idx| idx.iter().zip(&nodes).map(|(&t, ns)| ns[t]).collect())
        .collect())
}

/// Two-player contest: each player wins a prize `v` with probability
/// `s_i^alpha / (s_1^alpha + s_2^alpha)` and pays a linear cost.
///
/// The box must lie strictly inside (0, +inf) on both axes. `alpha <= 1`
/// keeps the family inside its usual well-behaved regime; it is not enforced.
pub fn contest_game(
    alpha: f64,
    prize: f64,
    cost_coeffs: (f64, f64),
    bounds: Vec<(f64, f64)>,
) -> Result<SmoothGame> {
    if bounds.len() != 2 {
        return Err(Error::WrongPlayerCount(format!(
            "contest game is two-player, got {} intervals",
            bounds.len()
        )));
    }
    for (a, &(lo, hi)) in bounds.iter().enumerate() {
        if !(lo > 0.0 && hi.is_finite() && lo < hi) {
            return Err(Error::BoxNotPositive(format!(
                "axis {a}: interval ({lo}, {hi})"
            )));
        }
    }
    if !(alpha.is_finite() && prize.is_finite() && cost_coeffs.0.is_finite() && cost_coeffs.1.is_finite()) {
        return Err(Error::NonFiniteEntry("contest parameters".into()));
    }
    let (c1, c2) = cost_coeffs;
    let win = move |s: &[f64]| {
        let f1 = s[0].powf(alpha);
        let f2 = s[1].powf(alpha);
        f1 / (f1 + f2)
    };
    let u1: PayoffFn = Box::new(move |s: &[f64]| win(s) * prize - c1 * s[0]);
    let u2: PayoffFn = Box::new(move |s: &[f64]| (1.0 - win(s)) * prize - c2 * s[1]);
    SmoothGame::new(bounds, vec![u1, u2])
}

/// Evaluate the payoffs on a tensor-product grid; the quadrature weights
/// become the finite measures of the sampled game.
///
/// Restricting a potential (resp. zero-sum-equivalent) game to a grid keeps
/// the property, so the finite tests on the sample are necessary conditions
/// for the continuous game.
pub fn sample_game(game: &SmoothGame, spec: &GridSpec) -> Result<FiniteGame> {
    if spec.points_per_axis.len() != game.n() {
        return Err(Error::ShapeMismatch(format!(
            "{} node counts for {} axes",
            spec.points_per_axis.len(),
            game.n()
        )));
    }
    if spec.points_per_axis.iter().any(|&k| k == 0) {
        return Err(Error::ShapeMismatch("need at least one node per axis".into()));
    }
    let QuadratureScheme::UniformMidpoint = spec.scheme;
    let mut nodes = Vec::with_capacity(game.n());
    let mut weights = Vec::with_capacity(game.n());
    for (&(lo, hi), &k) in game.bounds().iter().zip(&spec.points_per_axis) {
        let width = (hi - lo) / k as f64;
        nodes.push(
            (0..k)
                .map(|t| lo + (t as f64 + 0.5) * width)
                .collect::<Vec<f64>>(),
        );
        weights.push(vec![width; k]);
    }
    let sizes = spec.points_per_axis.clone();
    let count: usize = sizes.iter().product();
    let mut payoffs = Vec::with_capacity(game.n());
    let mut point = vec![0.0f64; game.n()];
    for p in 0..game.n() {
        let mut flat = Vec::with_capacity(count);
        for idx in profiles(&sizes) {
            for (a, &t) in idx.iter().enumerate() {
                point[a] = nodes[a][t];
            }
            flat.push(game.eval(p, &point));
        }
        payoffs.push(
            ndarray::ArrayD::from_shape_vec(ndarray::IxDyn(&sizes), flat)
                .expect("node grid matches sizes"),
        );
    }
    FiniteGame::new(&sizes, payoffs, Some(weights))
}

/// Built-in smooth game registry, keyed by name, for the CLI.
///
/// Names: `contest` (alpha, v, c1, c2), `cournot` (a),
/// `bilinear-zero-sum` (scale). Unknown names and unknown parameter keys are
/// rejected.
pub fn builtin_game(
    name: &str,
    params: &BTreeMap<String, f64>,
    bounds: Vec<(f64, f64)>,
) -> Result<SmoothGame> {
    let get = |key: &str, default: f64| params.get(key).copied().unwrap_or(default);
    let allow = |keys: &[&str]| -> Result<()> {
        for k in params.keys() {
            if !keys.contains(&k.as_str()) {
                return Err(Error::SchemaViolation(format!(
                    "unknown parameter \"{k}\" for builtin \"{name}\""
                )));
            }
        }
        Ok(())
    };
    match name {
        "contest" => {
            allow(&["alpha", "v", "c1", "c2"])?;
            contest_game(
                get("alpha", 1.0),
                get("v", 1.0),
                (get("c1", 1.0), get("c2", 1.0)),
                bounds,
            )
        }
        "cournot" => {
            allow(&["a"])?;
            if bounds.len() != 2 {
                return Err(Error::WrongPlayerCount(format!(
                    "cournot is two-player, got {} intervals",
                    bounds.len()
                )));
            }
            let a = get("a", 10.0);
            let u1: PayoffFn = Box::new(move |s: &[f64]| s[0] * (a - s[0] - s[1]));
            let u2: PayoffFn = Box::new(move |s: &[f64]| s[1] * (a - s[0] - s[1]));
            SmoothGame::new(bounds, vec![u1, u2])
        }
        "bilinear-zero-sum" => {
            allow(&["scale"])?;
            if bounds.len() != 2 {
                return Err(Error::WrongPlayerCount(format!(
                    "bilinear-zero-sum is two-player, got {} intervals",
                    bounds.len()
                )));
            }
            let scale = get("scale", 1.0);
            let u1: PayoffFn = Box::new(move |s: &[f64]| scale * s[0] * s[1]);
            let u2: PayoffFn = Box::new(move |s: &[f64]| -scale * s[0] * s[1]);
            SmoothGame::new(bounds, vec![u1, u2])
        }
        other => Err(Error::SchemaViolation(format!(
            "unknown builtin game \"{other}\""
        ))),
    }
}
