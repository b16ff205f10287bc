//! Constructive decompositions: recover a potential function, recover a
//! zero-sum normalization, and produce the common-plus-passives
//! representation forms.
//!
//! Potential extraction is path summation from the base profile (0,...,0);
//! the result is verified after construction, so a wrong build cannot pass
//! silently. The zero-sum normalization uses the telescoping factorization
//! of the full operator product: `g_0 = T̂_0 U` and
//! `g_j = T_0 ... T_{j-1} T̂_j U` for `U = sum_i u_i`.

use ndarray::{ArrayD, Axis};
use serde_json::{json, Value};

use crate::classify::{potential_test, zero_sum_equiv_test, TestVerdict, Witness};
use crate::error::{Error, Result};
use crate::json::tensor_to_value;
use crate::model::{profiles, FiniteGame, PassiveGame};
use crate::ops;

/// A potential `v` plus one passive part per player, with
/// `u_i = v + g_i(s_-i)` up to `residual`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialDecomposition {
    pub v: ArrayD<f64>,
    pub passives: Vec<PassiveGame>,
    pub residual: f64,
}

impl PotentialDecomposition {
    pub fn to_json_value(&self) -> Value {
        json!({
            "v": tensor_to_value(self.v.view()),
            "passives": passives_json(&self.passives),
            "residual": self.residual,
        })
    }
}

/// Tensors `v_i` summing to zero plus passive parts, with
/// `u_i = v_i + g_i(s_-i)` and `sum_i v_i = 0` up to `residual`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSumRepresentation {
    pub vs: Vec<ArrayD<f64>>,
    pub passives: Vec<PassiveGame>,
    pub residual: f64,
}

impl ZeroSumRepresentation {
    pub fn to_json_value(&self) -> Value {
        json!({
            "vs": self.vs.iter().map(|t| tensor_to_value(t.view())).collect::<Vec<_>>(),
            "passives": passives_json(&self.passives),
            "residual": self.residual,
        })
    }
}

fn passives_json(passives: &[PassiveGame]) -> Value {
    Value::Array(
        passives
            .iter()
            .map(|p| {
                json!({
                    "player": p.player(),
                    "table": tensor_to_value(p.table().view()),
                })
            })
            .collect(),
    )
}

/// Representation with a single common function (potential case) or one
/// function per player summing to a constant (zero-sum case), plus shared
/// passive terms entering every *other* player's payoff:
/// `u_i = w + sum_{l != i} g_l(s_-l)` resp.
/// `u_i = w_i + sum_{l != i} g_l(s_-l)` with `sum_i w_i = c`.
#[derive(Debug, Clone, PartialEq)]
pub enum UiRepresentation {
    Potential {
        w: ArrayD<f64>,
        passives: Vec<PassiveGame>,
        residual: f64,
    },
    ZeroSum {
        ws: Vec<ArrayD<f64>>,
        passives: Vec<PassiveGame>,
        constant: f64,
        residual: f64,
    },
}

/// Recover a potential function by path summation from profile (0,...,0).
///
/// The extracted `v` is normalized to `v(0,...,0) = 0`; potentials are unique
/// up to an additive constant. Fails with `NotAPotentialGame` when the
/// membership test rejects the game or the reconstruction residual exceeds
/// `tol`.
pub fn extract_potential(game: &FiniteGame, tol: f64) -> Result<PotentialDecomposition> {
    let verdict = potential_test(game, tol)?;
    if !verdict.passed {
        return Err(Error::NotAPotentialGame {
            residual: verdict.residual,
            tolerance: verdict.tolerance,
        });
    }
    let n = game.n();
    let sizes = game.sizes().to_vec();
    let mut v = ArrayD::<f64>::zeros(game.payoff_tensor(0).raw_dim());
    for profile in profiles(&sizes) {
        // telescoping path: change one coordinate at a time from the base
        // profile, paying each step with the moving player's payoff change
        let mut idx = vec![0usize; n];
        let mut acc = 0.0;
        for k in 0..n {
            let lo = game.payoff_tensor(k)[&idx[..]];
            idx[k] = profile[k];
            let hi = game.payoff_tensor(k)[&idx[..]];
            acc += hi - lo;
        }
        v[&profile[..]] = acc;
    }

    let norm = game.payoff_scale();
    let mut passives = Vec::with_capacity(n);
    let mut worst = 0.0f64;
    for i in 0..n {
        let diff = game.payoff_tensor(i) - &v;
        let table = diff.index_axis(Axis(i), 0).insert_axis(Axis(i)).to_owned();
        let g = PassiveGame::new(i, table)?;
        let recon = &diff - &g.to_full(&sizes)?;
        worst = worst.max(ops::max_abs(&recon));
        passives.push(g);
    }
    let residual = worst / norm;
    if residual > tol {
        return Err(Error::NotAPotentialGame {
            residual,
            tolerance: tol,
        });
    }
    Ok(PotentialDecomposition {
        v,
        passives,
        residual,
    })
}

/// Check a candidate potential: all unilateral payoff differences must match
/// differences of `v`. Residual is the largest violation over players,
/// profiles and deviation pairs, normalized.
pub fn verify_potential(game: &FiniteGame, v: &ArrayD<f64>, tol: f64) -> Result<TestVerdict> {
    if v.shape() != game.sizes() {
        return Err(Error::ShapeMismatch(format!(
            "candidate potential has shape {:?}, game has sizes {:?}",
            v.shape(),
            game.sizes()
        )));
    }
    let norm = game.payoff_scale();
    let sizes = game.sizes().to_vec();
    let mut best = 0.0f64;
    let mut witness = None;
    for i in 0..game.n() {
        let d = game.payoff_tensor(i) - v;
        let mut rest_sizes = sizes.clone();
        rest_sizes[i] = 1;
        for base in profiles(&rest_sizes) {
            // base[i] is always 0 since rest_sizes[i] == 1
            let mut lo = base.clone();
            let mut hi = base;
            for si in 0..sizes[i] {
                for ti in (si + 1)..sizes[i] {
                    lo[i] = si;
                    hi[i] = ti;
                    let gap = (d[&lo[..]] - d[&hi[..]]).abs();
                    if gap > best {
                        best = gap;
                        witness = Some(Witness {
                            players: vec![i],
                            profile: lo.clone(),
                            alternates: vec![ti],
                        });
                    }
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

/// Always-defined zero-sum normalization; `residual` reports how far the
/// recovered `v_i` are from summing to zero. Membership holds exactly when
/// the residual is small.
pub fn zero_sum_decomposition(game: &FiniteGame) -> Result<ZeroSumRepresentation> {
    let n = game.n();
    let sizes = game.sizes().to_vec();
    let space = game.space();
    let total = crate::classify::payoff_sum(game);
    let mut passives = Vec::with_capacity(n);
    for j in 0..n {
        // T̂_j makes the term constant along axis j; the leading T_l factors
        // preserve that exactly, so slicing at index 0 loses nothing
        let mut term = ops::t_hat_op(&total, space, j)?;
        for l in 0..j {
            term = ops::t_op(&term, space, l)?;
        }
        let table = term.index_axis(Axis(j), 0).insert_axis(Axis(j)).to_owned();
        passives.push(PassiveGame::new(j, table)?);
    }
    let mut vs = Vec::with_capacity(n);
    for (i, p) in passives.iter().enumerate() {
        vs.push(game.payoff_tensor(i) - &p.to_full(&sizes)?);
    }
    let mut sum = vs[0].clone();
    for v in &vs[1..] {
        sum += v;
    }
    let residual = ops::max_abs(&sum) / game.payoff_scale();
    Ok(ZeroSumRepresentation {
        vs,
        passives,
        residual,
    })
}

/// Zero-sum normalization gated by the membership test.
pub fn zero_sum_normalize(game: &FiniteGame, tol: f64) -> Result<ZeroSumRepresentation> {
    let verdict = zero_sum_equiv_test(game, tol)?;
    if !verdict.passed {
        return Err(Error::NotZeroSumEquivalent {
            residual: verdict.residual,
            tolerance: verdict.tolerance,
        });
    }
    let rep = zero_sum_decomposition(game)?;
    if rep.residual > tol {
        return Err(Error::NotZeroSumEquivalent {
            residual: rep.residual,
            tolerance: tol,
        });
    }
    Ok(rep)
}

/// Common-function representation `u_i = w + sum_{l != i} g_l(s_-l)`.
///
/// Built from the extracted decomposition with `w = v + sum_l g_l` and the
/// passives negated, which is what the displayed form requires.
pub fn potential_representation(game: &FiniteGame, tol: f64) -> Result<UiRepresentation> {
    let dec = extract_potential(game, tol)?;
    let sizes = game.sizes().to_vec();
    let mut w = dec.v.clone();
    for g in &dec.passives {
        w += &g.to_full(&sizes)?;
    }
    let mut passives = Vec::with_capacity(game.n());
    for g in &dec.passives {
        passives.push(PassiveGame::new(g.player(), g.table().mapv(|x| -x))?);
    }
    let residual = representation_residual(game, |i| {
        let mut expect = w.clone();
        for p in passives.iter().filter(|p| p.player() != i) {
            expect += &p.to_full(&sizes).expect("shape checked");
        }
        expect
    })?;
    if residual > tol {
        return Err(Error::NotAPotentialGame {
            residual,
            tolerance: tol,
        });
    }
    Ok(UiRepresentation::Potential {
        w,
        passives,
        residual,
    })
}

/// Per-player representation `u_i = w_i + sum_{l != i} g_l(s_-l)` with
/// `sum_i w_i = c` constant. The passives are the normalization's scaled by
/// `1/(n-1)`; `c` is reported at the base profile.
pub fn zero_sum_representation(game: &FiniteGame, tol: f64) -> Result<UiRepresentation> {
    if game.n() < 2 {
        return Err(Error::WrongPlayerCount(
            "zero-sum representation needs at least 2 players".into(),
        ));
    }
    let rep = zero_sum_normalize(game, tol)?;
    let n = game.n();
    let sizes = game.sizes().to_vec();
    let scale = 1.0 / (n as f64 - 1.0);
    let mut passives = Vec::with_capacity(n);
    for g in &rep.passives {
        passives.push(PassiveGame::new(g.player(), g.table().mapv(|x| x * scale))?);
    }
    let mut ws = Vec::with_capacity(n);
    for i in 0..n {
        let mut w = game.payoff_tensor(i).clone();
        for p in passives.iter().filter(|p| p.player() != i) {
            w -= &p.to_full(&sizes)?;
        }
        ws.push(w);
    }
    let mut w_sum = ws[0].clone();
    for w in &ws[1..] {
        w_sum += w;
    }
    let constant = w_sum[&vec![0usize; n][..]];
    let norm = game.payoff_scale();
    let mut worst = ops::max_abs(&w_sum.mapv(|x| x - constant));
    let recon = representation_residual(game, |i| {
        let mut expect = ws[i].clone();
        for p in passives.iter().filter(|p| p.player() != i) {
            expect += &p.to_full(&sizes).expect("shape checked");
        }
        expect
    })?;
    worst = worst.max(recon * norm);
    let residual = worst / norm;
    if residual > tol {
        return Err(Error::NotZeroSumEquivalent {
            residual,
            tolerance: tol,
        });
    }
    Ok(UiRepresentation::ZeroSum {
        ws,
        passives,
        constant,
        residual,
    })
}

fn representation_residual<F>(game: &FiniteGame, expected: F) -> Result<f64>
where
    F: Fn(usize) -> ArrayD<f64>,
{
    let norm = game.payoff_scale();
    let mut worst = 0.0f64;
    for i in 0..game.n() {
        let gap = game.payoff_tensor(i) - &expected(i);
        worst = worst.max(ops::max_abs(&gap));
    }
    Ok(worst / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::IxDyn;

    const TOL: f64 = 1e-9;

    fn tensor(shape: &[usize], data: Vec<f64>) -> ArrayD<f64> {
        ArrayD::from_shape_vec(IxDyn(shape), data).unwrap()
    }

    fn game2(a: Vec<f64>, b: Vec<f64>) -> FiniteGame {
        FiniteGame::new(&[2, 2], vec![tensor(&[2, 2], a), tensor(&[2, 2], b)], None).unwrap()
    }

    fn matching_pennies() -> FiniteGame {
        game2(vec![1.0, -1.0, -1.0, 1.0], vec![-1.0, 1.0, 1.0, -1.0])
    }

    fn battle_of_sexes() -> FiniteGame {
        game2(vec![3.0, 0.0, 0.0, 2.0], vec![2.0, 0.0, 0.0, 3.0])
    }

    #[test]
    fn common_interest_extraction_matches_up_to_constant() {
        let v0 = vec![0.5, -1.5, 2.0, 4.0];
        let g = game2(v0.clone(), v0.clone());
        let dec = extract_potential(&g, TOL).unwrap();
        assert_eq!(dec.residual, 0.0);
        // v is v0 shifted so that v(0,0) = 0
        let expect = tensor(&[2, 2], v0.iter().map(|x| x - 0.5).collect());
        assert_eq!(dec.v, expect);
    }

    #[test]
    fn battle_of_sexes_extraction_hand_values() {
        let dec = extract_potential(&battle_of_sexes(), TOL).unwrap();
        assert_eq!(dec.v, tensor(&[2, 2], vec![0.0, -2.0, -3.0, 0.0]));
        assert_eq!(dec.residual, 0.0);
        let verdict = verify_potential(&battle_of_sexes(), &dec.v, TOL).unwrap();
        assert!(verdict.passed);
        assert_eq!(verdict.residual, 0.0);
    }

    #[test]
    fn matching_pennies_is_rejected() {
        assert!(matches!(
            extract_potential(&matching_pennies(), TOL),
            Err(Error::NotAPotentialGame { .. })
        ));
    }

    #[test]
    fn zero_tensor_is_not_a_potential_for_battle_of_sexes() {
        let zero = ArrayD::zeros(IxDyn(&[2, 2]));
        let verdict = verify_potential(&battle_of_sexes(), &zero, TOL).unwrap();
        assert!(!verdict.passed);
        assert!(verdict.residual > 0.5);
        assert!(verdict.witness.is_some());
    }

    #[test]
    fn exact_zero_sum_normalizes_trivially() {
        let g = matching_pennies();
        let rep = zero_sum_normalize(&g, TOL).unwrap();
        assert_eq!(rep.residual, 0.0);
        for (i, p) in rep.passives.iter().enumerate() {
            assert!(p.table().iter().all(|&x| x == 0.0));
            assert_eq!(p.player(), i);
        }
        for (v, u) in rep.vs.iter().zip(g.payoffs()) {
            assert_eq!(v, u);
        }
    }

    #[test]
    fn perturbed_matching_pennies_recovers_zero_sum() {
        // u0 = A + g(s_1), u1 = -A + h(s_0), integer tables
        let g = game2(
            vec![1.0 + 5.0, -1.0 - 3.0, -1.0 + 5.0, 1.0 - 3.0],
            vec![-1.0 + 2.0, 1.0 + 2.0, 1.0 + 7.0, -1.0 + 7.0],
        );
        let rep = zero_sum_normalize(&g, TOL).unwrap();
        assert!(rep.residual <= 1e-10);
        let mut sum = rep.vs[0].clone();
        sum += &rep.vs[1];
        assert!(ops::max_abs(&sum) <= 1e-10);
        // hand values for the passive parts
        assert_eq!(rep.passives[0].table(), &tensor(&[1, 2], vec![9.5, 1.5]));
        assert_eq!(rep.passives[1].table(), &tensor(&[2, 1], vec![-2.5, 2.5]));
    }

    #[test]
    fn nonseparable_common_interest_is_rejected() {
        let v = vec![1.0, 0.0, 0.0, 0.0];
        let g = game2(v.clone(), v);
        assert!(matches!(
            zero_sum_normalize(&g, TOL),
            Err(Error::NotZeroSumEquivalent { .. })
        ));
    }

    #[test]
    fn potential_representation_holds_entrywise() {
        let g = battle_of_sexes();
        let UiRepresentation::Potential {
            w,
            passives,
            residual,
        } = potential_representation(&g, TOL).unwrap()
        else {
            panic!("wrong variant")
        };
        assert!(residual <= 1e-12);
        // check the displayed equation directly
        for i in 0..2 {
            let mut expect = w.clone();
            for p in passives.iter().filter(|p| p.player() != i) {
                expect += &p.to_full(g.sizes()).unwrap();
            }
            assert!(ops::max_abs(&(game_tensor(&g, i) - &expect)) <= 1e-12);
        }
    }

    fn game_tensor(g: &FiniteGame, i: usize) -> ArrayD<f64> {
        g.payoff_tensor(i).clone()
    }

    #[test]
    fn common_interest_representation_reduces_to_v() {
        let v0 = vec![0.5, -1.5, 2.0, 4.0];
        let g = game2(v0.clone(), v0);
        let UiRepresentation::Potential { w, passives, .. } =
            potential_representation(&g, TOL).unwrap()
        else {
            panic!("wrong variant")
        };
        // passives are constants here (v is shared), so w differs from the
        // extracted v by a constant per entry; the equation still holds
        for i in 0..2 {
            let mut expect = w.clone();
            for p in passives.iter().filter(|p| p.player() != i) {
                expect += &p.to_full(g.sizes()).unwrap();
            }
            assert!(ops::max_abs(&(game_tensor(&g, i) - &expect)) <= 1e-12);
        }
    }

    #[test]
    fn zero_sum_representation_exact_game() {
        let g = matching_pennies();
        let UiRepresentation::ZeroSum {
            ws,
            constant,
            residual,
            ..
        } = zero_sum_representation(&g, TOL).unwrap()
        else {
            panic!("wrong variant")
        };
        assert_eq!(constant, 0.0);
        assert!(residual <= 1e-12);
        for (w, u) in ws.iter().zip(g.payoffs()) {
            assert_eq!(w, u);
        }
    }

    #[test]
    fn zero_sum_representation_constant_sum() {
        let g = game2(
            vec![1.0 + 5.0, -1.0 - 3.0, -1.0 + 5.0, 1.0 - 3.0],
            vec![-1.0 + 2.0, 1.0 + 2.0, 1.0 + 7.0, -1.0 + 7.0],
        );
        let UiRepresentation::ZeroSum { ws, residual, .. } =
            zero_sum_representation(&g, TOL).unwrap()
        else {
            panic!("wrong variant")
        };
        assert!(residual <= 1e-10);
        let mut sum = ws[0].clone();
        sum += &ws[1];
        let c = sum[[0, 0]];
        assert!(ops::max_abs(&sum.mapv(|x| x - c)) <= 1e-10);
    }

    #[test]
    fn zero_sum_representation_needs_two_players() {
        let g = FiniteGame::new(&[3], vec![tensor(&[3], vec![1.0; 3])], None).unwrap();
        assert!(matches!(
            zero_sum_representation(&g, TOL),
            Err(Error::WrongPlayerCount(_))
        ));
    }

    #[test]
    fn characterization_contract() {
        // potential case: u_i - g_i is the same tensor for all players
        let g = battle_of_sexes();
        let dec = extract_potential(&g, TOL).unwrap();
        let mut stripped = Vec::new();
        for (i, p) in dec.passives.iter().enumerate() {
            stripped.push(g.payoff_tensor(i) - &p.to_full(g.sizes()).unwrap());
        }
        assert!(ops::max_abs(&(&stripped[0] - &stripped[1])) <= 1e-12);

        // zero-sum case: the stripped payoffs sum to zero
        let z = matching_pennies();
        let rep = zero_sum_normalize(&z, TOL).unwrap();
        let mut sum = ArrayD::<f64>::zeros(IxDyn(z.sizes()));
        for (i, p) in rep.passives.iter().enumerate() {
            sum += &(z.payoff_tensor(i) - &p.to_full(z.sizes()).unwrap());
        }
        assert!(ops::max_abs(&sum) <= 1e-12);
    }

    #[test]
    fn decomposition_json_shapes() {
        let dec = extract_potential(&battle_of_sexes(), TOL).unwrap();
        let v = dec.to_json_value();
        assert!(v.get("v").is_some());
        assert_eq!(v["passives"].as_array().unwrap().len(), 2);
        let rep = zero_sum_normalize(&matching_pennies(), TOL).unwrap();
        let v = rep.to_json_value();
        assert_eq!(v["vs"].as_array().unwrap().len(), 2);
        assert_eq!(v["residual"], 0.0);
    }
}
