//! Axis-wise averaging operators on payoff tensors.
//!
//! For a weighted strategy space, `t_op` along axis `i` subtracts the
//! weighted mean over player i's strategies:
//!
//! ```text
//! (T_i h)(s) = h(s) - sum_x w_i(x) h(s with s_i = x) / sum_x w_i(x)
//! ```
//!
//! `t_hat_op` is the complement `h - T_i h`, whose output is constant along
//! axis `i`. The operators for distinct axes commute, are idempotent, and
//! annihilate exactly the tensors constant along their axis.

use ndarray::{ArrayD, Axis, IxDyn, Zip};

use crate::error::{Error, Result};
use crate::model::WeightedStrategySpace;

fn check_input(h: &ArrayD<f64>, space: &WeightedStrategySpace, axis: usize) -> Result<()> {
    if h.shape() != space.sizes() {
        return Err(Error::ShapeMismatch(format!(
            "tensor has shape {:?}, space has sizes {:?}",
            h.shape(),
            space.sizes()
        )));
    }
    if axis >= space.n() {
        return Err(Error::IndexOutOfRange(format!(
            "axis {axis} for {} players",
            space.n()
        )));
    }
    Ok(())
}

/// Remove the weighted mean along `axis`. Output has zero weighted mean there.
pub fn t_op(h: &ArrayD<f64>, space: &WeightedStrategySpace, axis: usize) -> Result<ArrayD<f64>> {
    check_input(h, space, axis)?;
    let w = space.weights(axis);
    let total = space.total_weight(axis);
    // single pass: accumulate w*h along the axis, then divide by total weight
    let mut reduced = space.sizes().to_vec();
    reduced.remove(axis);
    let mut mean = ArrayD::<f64>::zeros(IxDyn(&reduced));
    for (k, lane) in h.axis_iter(Axis(axis)).enumerate() {
        let wk = w[k];
        Zip::from(&mut mean).and(&lane).for_each(|m, &x| *m += wk * x);
    }
    mean.mapv_inplace(|x| x / total);
    let mean = mean.insert_axis(Axis(axis));
    Ok(h - &mean)
}

/// The complementary operator `h - t_op(h)`; constant along `axis`.
pub fn t_hat_op(
    h: &ArrayD<f64>,
    space: &WeightedStrategySpace,
    axis: usize,
) -> Result<ArrayD<f64>> {
    let t = t_op(h, space, axis)?;
    Ok(h - &t)
}

/// Sequential application of `t_op` over the given distinct axes.
///
/// Axes are applied in ascending index order; commutation of the operators
/// makes the result order-independent up to rounding.
pub fn t_product(
    h: &ArrayD<f64>,
    space: &WeightedStrategySpace,
    axes: &[usize],
) -> Result<ArrayD<f64>> {
    if h.shape() != space.sizes() {
        return Err(Error::ShapeMismatch(format!(
            "tensor has shape {:?}, space has sizes {:?}",
            h.shape(),
            space.sizes()
        )));
    }
    if let Some(&ax) = axes.iter().find(|&&ax| ax >= space.n()) {
        return Err(Error::IndexOutOfRange(format!(
            "axis {ax} for {} players",
            space.n()
        )));
    }
    let mut sorted = axes.to_vec();
    sorted.sort_unstable();
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::DuplicateAxis(pair[0]));
        }
    }
    let mut out = h.clone();
    for &ax in &sorted {
        out = t_op(&out, space, ax)?;
    }
    Ok(out)
}

/// Largest absolute entry; 0 for an all-zero tensor.
pub fn max_abs(h: &ArrayD<f64>) -> f64 {
    h.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
}
