//! Bit-exact JSON interchange for finite games.
//!
//! Schema (all fields lowercase, unknown fields rejected):
//!
//! ```json
//! {
//!   "players": 2,
//!   "sizes": [2, 2],
//!   "payoffs": [[[1.0, -1.0], [-1.0, 1.0]], [[-1.0, 1.0], [1.0, -1.0]]],
//!   "weights": [[1.0, 1.0], [1.0, 1.0]],
//!   "labels": [["h", "t"], ["h", "t"]]
//! }
//! ```
//!
//! Each payoff tensor is a nested array with player 0's strategy outermost.
//! `weights` and `labels` are optional; omitted weights mean the counting
//! measure. Numbers round-trip exactly as IEEE-754 doubles.

use ndarray::{ArrayD, ArrayViewD, Axis, IxDyn};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::FiniteGame;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGame {
    players: usize,
    sizes: Vec<usize>,
    payoffs: Vec<Value>,
    #[serde(default)]
    weights: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    labels: Option<Vec<Vec<String>>>,
}

#[derive(Serialize)]
struct RawGameOut<'a> {
    players: usize,
    sizes: &'a [usize],
    payoffs: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<&'a [Vec<String>]>,
}

/// Parse a game from JSON bytes.
pub fn parse_game_json(text: &[u8]) -> Result<FiniteGame> {
    let raw: RawGame = serde_json::from_slice(text).map_err(|e| {
        use serde_json::error::Category;
        match e.classify() {
            Category::Data => Error::SchemaViolation(e.to_string()),
            _ => Error::MalformedJson(e.to_string()),
        }
    })?;
    if raw.players != raw.sizes.len() {
        return Err(Error::SchemaViolation(format!(
            "\"players\" is {} but \"sizes\" has {} entries",
            raw.players,
            raw.sizes.len()
        )));
    }
    if raw.payoffs.len() != raw.players {
        return Err(Error::SchemaViolation(format!(
            "expected {} payoff tensors, found {}",
            raw.players,
            raw.payoffs.len()
        )));
    }
    let mut payoffs = Vec::with_capacity(raw.players);
    for (p, v) in raw.payoffs.iter().enumerate() {
        payoffs.push(value_to_tensor(v, &raw.sizes).map_err(|e| match e {
            Error::SchemaViolation(m) => {
                Error::SchemaViolation(format!("payoff tensor for player {p}: {m}"))
            }
            other => other,
        })?);
    }
    let game = FiniteGame::new(&raw.sizes, payoffs, raw.weights).map_err(|e| match e {
        Error::SchemaViolation(_) | Error::MalformedJson(_) => e,
        other => Error::SchemaViolation(other.to_string()),
    })?;
    match raw.labels {
        Some(l) => game
            .with_labels(l)
            .map_err(|e| Error::SchemaViolation(e.to_string())),
        None => Ok(game),
    }
}

/// Serialize a game to JSON bytes. `parse_game_json` inverts this exactly.
pub fn serialize_game(game: &FiniteGame) -> Vec<u8> {
    let out = RawGameOut {
        players: game.n(),
        sizes: game.sizes(),
        payoffs: game
            .payoffs()
            .iter()
            .map(|t| tensor_to_value(t.view()))
            .collect(),
        weights: if game.space().is_counting() {
            None
        } else {
            Some(
                (0..game.n())
                    .map(|p| game.space().weights(p).to_vec())
                    .collect(),
            )
        },
        labels: game.labels(),
    };
    serde_json::to_vec(&out).expect("game serialization cannot fail")
}

/// Render a tensor as nested JSON arrays, outermost axis first.
pub fn tensor_to_value(t: ArrayViewD<'_, f64>) -> Value {
    if t.ndim() == 0 {
        return Value::from(*t.iter().next().expect("0-d tensor has one entry"));
    }
    if t.ndim() == 1 {
        return Value::Array(t.iter().map(|&x| Value::from(x)).collect());
    }
    Value::Array(
        (0..t.len_of(Axis(0)))
            .map(|k| tensor_to_value(t.index_axis(Axis(0), k)))
            .collect(),
    )
}

/// Parse nested JSON arrays into a tensor of the expected shape.
pub fn value_to_tensor(v: &Value, shape: &[usize]) -> Result<ArrayD<f64>> {
    let mut flat = Vec::with_capacity(shape.iter().product());
    collect_entries(v, shape, 0, &mut flat)?;
    ArrayD::from_shape_vec(IxDyn(shape), flat)
        .map_err(|e| Error::SchemaViolation(e.to_string()))
}

fn collect_entries(v: &Value, shape: &[usize], depth: usize, out: &mut Vec<f64>) -> Result<()> {
    if depth == shape.len() {
        let x = v.as_f64().ok_or_else(|| {
            Error::SchemaViolation(format!("expected a number at depth {depth}"))
        })?;
        out.push(x);
        return Ok(());
    }
    let arr = v.as_array().ok_or_else(|| {
        Error::SchemaViolation(format!("expected a nested array at depth {depth}"))
    })?;
    if arr.len() != shape[depth] {
        return Err(Error::SchemaViolation(format!(
            "ragged tensor: expected {} entries at depth {depth}, found {}",
            shape[depth],
            arr.len()
        )));
    }
    for x in arr {
        collect_entries(x, shape, depth + 1, out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tensor(shape: &[usize], data: Vec<f64>) -> ArrayD<f64> {
        ArrayD::from_shape_vec(IxDyn(shape), data).unwrap()
    }

    fn matching_pennies() -> FiniteGame {
        let a = tensor(&[2, 2], vec![1.0, -1.0, -1.0, 1.0]);
        let b = a.mapv(|x| -x);
        FiniteGame::new(&[2, 2], vec![a, b], None).unwrap()
    }

    #[test]
    fn round_trip_is_identity() {
        let g = matching_pennies();
        let bytes = serialize_game(&g);
        let back = parse_game_json(&bytes).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn omitted_weights_mean_counting_measure() {
        let g = parse_game_json(br#"{"players":1,"sizes":[2],"payoffs":[[1,2]]}"#).unwrap();
        assert!(g.space().is_counting());
        assert_eq!(g.payoff(0, &[1]).unwrap(), 2.0);
    }

    #[test]
    fn negative_weight_is_schema_violation() {
        let err = parse_game_json(
            br#"{"players":1,"sizes":[2],"payoffs":[[1,2]],"weights":[[1,-1]]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::SchemaViolation(_)));
    }

    #[test]
    fn unknown_field_is_rejected() {
        let err =
            parse_game_json(br#"{"players":1,"sizes":[2],"payoffs":[[1,2]],"extra":0}"#)
                .unwrap_err();
        assert!(matches!(err, Error::SchemaViolation(_)));
    }

    #[test]
    fn ragged_tensor_is_rejected() {
        let err = parse_game_json(
            br#"{"players":2,"sizes":[2,2],"payoffs":[[[1,2],[3]],[[0,0],[0,0]]]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::SchemaViolation(_)));
    }

    #[test]
    fn players_sizes_mismatch_is_rejected() {
        let err = parse_game_json(br#"{"players":2,"sizes":[2],"payoffs":[[1,2]]}"#).unwrap_err();
        assert!(matches!(err, Error::SchemaViolation(_)));
    }

    #[test]
    fn syntax_error_is_malformed_json() {
        let err = parse_game_json(b"{not json").unwrap_err();
        assert!(matches!(err, Error::MalformedJson(_)));
    }

    #[test]
    fn weights_and_labels_round_trip() {
        let a = tensor(&[2, 2], vec![0.25, -0.5, 1.0 / 3.0, 7.125]);
        let g = FiniteGame::new(
            &[2, 2],
            vec![a.clone(), a],
            Some(vec![vec![0.1, 2.5], vec![1.5, 0.25]]),
        )
        .unwrap()
        .with_labels(vec![
            vec!["l".into(), "r".into()],
            vec!["u".into(), "d".into()],
        ])
        .unwrap();
        let back = parse_game_json(&serialize_game(&g)).unwrap();
        assert_eq!(g, back);
    }
}
