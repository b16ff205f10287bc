//! Core data types: weighted strategy spaces, finite games with dense payoff
//! tensors, and passive (own-strategy-independent) games.
//!
//! Layout convention: payoff tensors are dense, row-major, with player 0's
//! strategy on the outermost axis. All players and strategies are 0-indexed.

use ndarray::{ArrayD, IxDyn};

use crate::error::{Error, Result};

/// Strategy counts together with a strictly positive weight per strategy.
///
/// The weights are the finite measures used by the averaging operators; the
/// default is the counting measure (all weights 1).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedStrategySpace {
    sizes: Vec<usize>,
    weights: Vec<Vec<f64>>,
}

impl WeightedStrategySpace {
    /// Counting measure: every strategy has weight 1.
    pub fn counting(sizes: &[usize]) -> Result<Self> {
        let weights = sizes.iter().map(|&k| vec![1.0; k]).collect();
        Self::new(sizes, weights)
    }

    pub fn new(sizes: &[usize], weights: Vec<Vec<f64>>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::WrongPlayerCount("need at least one player".into()));
        }
        if let Some(p) = sizes.iter().position(|&k| k == 0) {
            return Err(Error::ShapeMismatch(format!(
                "player {p} has an empty strategy set"
            )));
        }
        if weights.len() != sizes.len() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} weight vectors, found {}",
                sizes.len(),
                weights.len()
            )));
        }
        for (p, (w, &k)) in weights.iter().zip(sizes).enumerate() {
            if w.len() != k {
                return Err(Error::ShapeMismatch(format!(
                    "player {p} has {k} strategies but {} weights",
                    w.len()
                )));
            }
            for (s, &x) in w.iter().enumerate() {
                if !(x.is_finite() && x > 0.0) {
                    return Err(Error::NonPositiveWeight {
                        player: p,
                        strategy: s,
                        value: x,
                    });
                }
            }
        }
        Ok(Self {
            sizes: sizes.to_vec(),
            weights,
        })
    }

    pub fn n(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn weights(&self, player: usize) -> &[f64] {
        &self.weights[player]
    }

    /// Total weight of player `i`'s strategy set.
    pub fn total_weight(&self, player: usize) -> f64 {
        self.weights[player].iter().sum()
    }

    /// True when every weight is exactly 1.
    pub fn is_counting(&self) -> bool {
        self.weights.iter().flatten().all(|&w| w == 1.0)
    }
}

/// An n-player normal-form game over a weighted strategy space.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGame {
    space: WeightedStrategySpace,
    payoffs: Vec<ArrayD<f64>>,
    labels: Option<Vec<Vec<String>>>,
}

impl FiniteGame {
    /// Build a validated game. `weights = None` means counting measure.
    pub fn new(
        sizes: &[usize],
        payoffs: Vec<ArrayD<f64>>,
        weights: Option<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        let space = match weights {
            Some(w) => WeightedStrategySpace::new(sizes, w)?,
            None => WeightedStrategySpace::counting(sizes)?,
        };
        Self::from_space(space, payoffs)
    }

    pub fn from_space(space: WeightedStrategySpace, payoffs: Vec<ArrayD<f64>>) -> Result<Self> {
        if payoffs.len() != space.n() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} payoff tensors, found {}",
                space.n(),
                payoffs.len()
            )));
        }
        for (p, t) in payoffs.iter().enumerate() {
            if t.shape() != space.sizes() {
                return Err(Error::ShapeMismatch(format!(
                    "payoff tensor for player {p} has shape {:?}, expected {:?}",
                    t.shape(),
                    space.sizes()
                )));
            }
            if !t.iter().all(|x| x.is_finite()) {
                return Err(Error::NonFiniteEntry(format!(
                    "payoff tensor for player {p}"
                )));
            }
        }
        Ok(Self {
            space,
            payoffs,
            labels: None,
        })
    }

    /// Attach per-player strategy names. Purely cosmetic.
    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} label lists, found {}",
                self.n(),
                labels.len()
            )));
        }
        for (p, l) in labels.iter().enumerate() {
            if l.len() != self.sizes()[p] {
                return Err(Error::ShapeMismatch(format!(
                    "player {p} has {} strategies but {} labels",
                    self.sizes()[p],
                    l.len()
                )));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn sizes(&self) -> &[usize] {
        self.space.sizes()
    }

    pub fn space(&self) -> &WeightedStrategySpace {
        &self.space
    }

    pub fn payoffs(&self) -> &[ArrayD<f64>] {
        &self.payoffs
    }

    pub fn payoff_tensor(&self, player: usize) -> &ArrayD<f64> {
        &self.payoffs[player]
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    /// Payoff of `player` at a full strategy profile.
    pub fn payoff(&self, player: usize, profile: &[usize]) -> Result<f64> {
        if player >= self.n() {
            return Err(Error::IndexOutOfRange(format!(
                "player {player} of {}",
                self.n()
            )));
        }
        if profile.len() != self.n() {
            return Err(Error::IndexOutOfRange(format!(
                "profile has {} coordinates, expected {}",
                profile.len(),
                self.n()
            )));
        }
        for (p, (&s, &k)) in profile.iter().zip(self.sizes()).enumerate() {
            if s >= k {
                return Err(Error::IndexOutOfRange(format!(
                    "strategy {s} for player {p} of size {k}"
                )));
            }
        }
        Ok(self.payoffs[player][profile])
    }

    /// Add one passive game per player: `u_i + g_i(s_-i)`.
    ///
    /// This is a strategic-equivalence transformation; it preserves Nash
    /// equilibria and best responses.
    pub fn add_passive(&self, passives: &[PassiveGame]) -> Result<FiniteGame> {
        if passives.len() != self.n() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} passive games, found {}",
                self.n(),
                passives.len()
            )));
        }
        let mut payoffs = Vec::with_capacity(self.n());
        for (k, p) in passives.iter().enumerate() {
            if p.player() != k {
                return Err(Error::ShapeMismatch(format!(
                    "passive game at position {k} targets player {}",
                    p.player()
                )));
            }
            p.check_shape(self.sizes())?;
            payoffs.push(&self.payoffs[k] + p.table());
        }
        Ok(FiniteGame {
            space: self.space.clone(),
            payoffs,
            labels: self.labels.clone(),
        })
    }

    /// Scale used to normalize residuals: `max(1, max_i max_s |u_i(s)|)`.
    pub fn payoff_scale(&self) -> f64 {
        let m = self
            .payoffs
            .iter()
            .flat_map(|t| t.iter())
            .fold(0.0f64, |m, &x| m.max(x.abs()));
        m.max(1.0)
    }
}

/// A payoff table for one player that does not depend on her own strategy.
///
/// Stored with the player's own axis collapsed to extent 1 so it broadcasts
/// against full-shape tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct PassiveGame {
    player: usize,
    table: ArrayD<f64>,
}

impl PassiveGame {
    pub fn new(player: usize, table: ArrayD<f64>) -> Result<Self> {
        if player >= table.ndim() {
            return Err(Error::IndexOutOfRange(format!(
                "player {player} for a {}-dimensional table",
                table.ndim()
            )));
        }
        if table.shape()[player] != 1 {
            return Err(Error::ShapeMismatch(format!(
                "passive table for player {player} must have extent 1 on its own axis, got {:?}",
                table.shape()
            )));
        }
        if !table.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFiniteEntry(format!(
                "passive table for player {player}"
            )));
        }
        Ok(Self { player, table })
    }

    /// All-zero passive game for `player` over the given sizes.
    pub fn zero(player: usize, sizes: &[usize]) -> Self {
        let mut shape = sizes.to_vec();
        shape[player] = 1;
        Self {
            player,
            table: ArrayD::zeros(IxDyn(&shape)),
        }
    }

    pub fn player(&self) -> usize {
        self.player
    }

    pub fn table(&self) -> &ArrayD<f64> {
        &self.table
    }

    fn check_shape(&self, sizes: &[usize]) -> Result<()> {
        if self.table.ndim() != sizes.len() {
            return Err(Error::ShapeMismatch(format!(
                "passive table has {} axes, expected {}",
                self.table.ndim(),
                sizes.len()
            )));
        }
        for (ax, (&have, &want)) in self.table.shape().iter().zip(sizes).enumerate() {
            let want = if ax == self.player { 1 } else { want };
            if have != want {
                return Err(Error::ShapeMismatch(format!(
                    "passive table for player {} has shape {:?}, expected {:?} with axis {} collapsed",
                    self.player,
                    self.table.shape(),
                    sizes,
                    self.player
                )));
            }
        }
        Ok(())
    }

    /// Broadcast the table to the full game shape.
    pub fn to_full(&self, sizes: &[usize]) -> Result<ArrayD<f64>> {
        self.check_shape(sizes)?;
        Ok(self
            .table
            .broadcast(IxDyn(sizes))
            .expect("shape checked")
            .to_owned())
    }
}

/// Lexicographic iterator over all strategy profiles of the given sizes.
pub(crate) fn profiles(sizes: &[usize]) -> ProfileIter {
    ProfileIter {
        sizes: sizes.to_vec(),
        next: Some(vec![0; sizes.len()]),
    }
}

pub(crate) struct ProfileIter {
    sizes: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl Iterator for ProfileIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut ax = self.sizes.len();
        loop {
            if ax == 0 {
                // carried past the outermost axis: exhausted
                break;
            }
            ax -= 1;
            succ[ax] += 1;
            if succ[ax] < self.sizes[ax] {
                self.next = Some(succ);
                break;
            }
            succ[ax] = 0;
        }
        Some(current)
    }
}
