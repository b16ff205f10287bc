//! Named example games and random corpus builders for tests and benchmarks.

use ndarray::{ArrayD, IxDyn};
use rand::Rng;

use crate::model::{FiniteGame, PassiveGame, WeightedStrategySpace};
use crate::ops;

/// 2x2 matching pennies: exactly zero-sum, not a potential game.
pub fn matching_pennies() -> FiniteGame {
    let a = tensor(&[2, 2], vec![1.0, -1.0, -1.0, 1.0]);
    let b = a.mapv(|x| -x);
    FiniteGame::new(&[2, 2], vec![a, b], None).expect("static game is valid")
}

/// 2x2 battle of the sexes: a potential game that is not zero-sum equivalent.
pub fn battle_of_sexes() -> FiniteGame {
    let a = tensor(&[2, 2], vec![3.0, 0.0, 0.0, 2.0]);
    let b = tensor(&[2, 2], vec![2.0, 0.0, 0.0, 3.0]);
    FiniteGame::new(&[2, 2], vec![a, b], None).expect("static game is valid")
}

/// Every player shares the payoff tensor `v`.
pub fn common_interest(v: ArrayD<f64>) -> FiniteGame {
    let sizes = v.shape().to_vec();
    let n = sizes.len();
    FiniteGame::new(&sizes, vec![v; n], None).expect("shared tensor is valid")
}

fn tensor(shape: &[usize], data: Vec<f64>) -> ArrayD<f64> {
    ArrayD::from_shape_vec(IxDyn(shape), data).expect("literal shape")
}

/// Random sizes: `n` drawn from `n_choices`, each size uniform in 1..=k_max.
pub fn random_sizes<R: Rng + ?Sized>(rng: &mut R, n_choices: &[usize], k_max: usize) -> Vec<usize> {
    let n = n_choices[rng.random_range(0..n_choices.len())];
    (0..n).map(|_| rng.random_range(1..=k_max)).collect()
}

/// Dense tensor with entries uniform in [-1, 1].
pub fn random_tensor<R: Rng + ?Sized>(rng: &mut R, sizes: &[usize]) -> ArrayD<f64> {
    let len = sizes.iter().product();
    let data = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
    tensor(sizes, data)
}

/// Game with independent uniform [-1, 1] payoffs.
pub fn random_game<R: Rng + ?Sized>(rng: &mut R, sizes: &[usize]) -> FiniteGame {
    let payoffs = (0..sizes.len()).map(|_| random_tensor(rng, sizes)).collect();
    FiniteGame::new(sizes, payoffs, None).expect("random payoffs are finite")
}

/// One random passive game per player, entries uniform in [-1, 1].
pub fn random_passives<R: Rng + ?Sized>(rng: &mut R, sizes: &[usize]) -> Vec<PassiveGame> {
    (0..sizes.len())
        .map(|i| {
            let mut shape = sizes.to_vec();
            shape[i] = 1;
            PassiveGame::new(i, random_tensor(rng, &shape)).expect("collapsed axis")
        })
        .collect()
}

/// Potential game planted as `u_i = v + g_i(s_-i)`; returns the planted `v`.
pub fn planted_potential<R: Rng + ?Sized>(
    rng: &mut R,
    sizes: &[usize],
) -> (FiniteGame, ArrayD<f64>) {
    let v = random_tensor(rng, sizes);
    let game = common_interest(v.clone())
        .add_passive(&random_passives(rng, sizes))
        .expect("shapes match");
    (game, v)
}

/// Zero-sum-equivalent game planted as `u_i = v_i + g_i(s_-i)` with the
/// `v_i` summing to zero.
pub fn planted_zero_sum<R: Rng + ?Sized>(rng: &mut R, sizes: &[usize]) -> FiniteGame {
    let n = sizes.len();
    let mut vs: Vec<ArrayD<f64>> = (0..n.saturating_sub(1))
        .map(|_| random_tensor(rng, sizes))
        .collect();
    let mut last = ArrayD::zeros(IxDyn(sizes));
    for v in &vs {
        last -= v;
    }
    vs.push(last);
    FiniteGame::new(sizes, vs, None)
        .expect("random payoffs are finite")
        .add_passive(&random_passives(rng, sizes))
        .expect("shapes match")
}

/// Random tensor with zero weighted mean along every axis, scaled to unit
/// max-abs. Returns `None` when every axis is degenerate (the centered space
/// is trivial).
pub fn centered_tensor<R: Rng + ?Sized>(
    rng: &mut R,
    space: &WeightedStrategySpace,
) -> Option<ArrayD<f64>> {
    let axes: Vec<usize> = (0..space.n()).collect();
    let raw = random_tensor(rng, space.sizes());
    let centered = ops::t_product(&raw, space, &axes).expect("shape matches");
    let m = ops::max_abs(&centered);
    if m < 1e-12 {
        return None;
    }
    Some(centered.mapv(|x| x / m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn planted_games_have_expected_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sizes = random_sizes(&mut rng, &[2, 3], 4);
        let (g, v) = planted_potential(&mut rng, &sizes);
        assert_eq!(g.sizes(), &sizes[..]);
        assert_eq!(v.shape(), &sizes[..]);
        let z = planted_zero_sum(&mut rng, &sizes);
        assert_eq!(z.sizes(), &sizes[..]);
    }

    #[test]
    fn centered_tensor_has_zero_means() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let space = WeightedStrategySpace::counting(&[3, 2, 2]).unwrap();
        let t = centered_tensor(&mut rng, &space).unwrap();
        for ax in 0..3 {
            let centered = ops::t_op(&t, &space, ax).unwrap();
            let drift = ops::max_abs(&(&centered - &t));
            assert!(drift <= 1e-12, "axis {ax}: {drift}");
        }
        assert!((ops::max_abs(&t) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn degenerate_space_has_no_centered_tensor() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let space = WeightedStrategySpace::counting(&[1, 1]).unwrap();
        assert!(centered_tensor(&mut rng, &space).is_none());
    }
}
