//! JSON wire forms.
//!
//! Matrix file:
//! `{"agents": ["A","B"], "cells": [[null,1],[0,null]]}` with `cells[r][c]`
//! the value of cell (column c, row r) and null exactly on the diagonal.
//!
//! Trace file:
//! `{"start":"C","steps":["D","C","D"],"truncated":false,"stability_pair":["C","D"]}`
//! where `steps` lists receiver labels. Loading a trace replays it against
//! the matrix, so illegal steps and inconsistent metadata are hard errors,
//! never silently accepted.

use serde::{Deserialize, Serialize};

use crate::engine::Trace;
use crate::error::{GameError, Result};
use crate::matrix::{AgentId, PreferenceMatrix};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    agents: Vec<String>,
    cells: Vec<Vec<Option<u64>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceDoc {
    start: String,
    steps: Vec<String>,
    truncated: bool,
    stability_pair: Option<Vec<String>>,
}

fn parse_error(what: &str, e: serde_json::Error) -> GameError {
    GameError::InvalidArgument(format!(
        "bad {what} JSON at line {}, column {}: {}",
        e.line(),
        e.column(),
        e
    ))
}

/// Pretty-printed matrix document; byte-stable for a given matrix.
pub fn matrix_to_json(m: &PreferenceMatrix) -> String {
    let n = m.n();
    let cells = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    if r == c {
                        None
                    } else {
                        Some(m.value(AgentId(c), AgentId(r)))
                    }
                })
                .collect()
        })
        .collect();
    let doc = MatrixDoc {
        agents: m.labels().to_vec(),
        cells,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn matrix_from_json(s: &str) -> Result<PreferenceMatrix> {
    let doc: MatrixDoc = serde_json::from_str(s).map_err(|e| parse_error("matrix", e))?;
    PreferenceMatrix::from_rows(doc.agents, &doc.cells)
}

/// Trace document for a trace of `m`; byte-stable.
pub fn trace_to_json(t: &Trace) -> String {
    let m = t.initial_matrix();
    let doc = TraceDoc {
        start: m.label(t.start()).to_string(),
        steps: t
            .steps()
            .iter()
            .map(|s| m.label(s.receiver).to_string())
            .collect(),
        truncated: t.truncated(),
        stability_pair: t
            .stability_pair()
            .map(|p| vec![m.label(p.lo()).to_string(), m.label(p.hi()).to_string()]),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

/// Parses and replays a trace document against `m`. The replay recomputes
/// the boundary structure; the document's `truncated` and `stability_pair`
/// fields must agree with it.
pub fn trace_from_json(m: &PreferenceMatrix, s: &str) -> Result<Trace> {
    let doc: TraceDoc = serde_json::from_str(s).map_err(|e| parse_error("trace", e))?;
    let start = m.agent_by_label(&doc.start)?;
    let receivers = doc
        .steps
        .iter()
        .map(|l| m.agent_by_label(l))
        .collect::<Result<Vec<AgentId>>>()?;
    let t = Trace::replay(m, start, &receivers)?;
    if t.truncated() != doc.truncated {
        return Err(GameError::InvalidArgument(format!(
            "trace file says truncated={}, replay says {}",
            doc.truncated,
            t.truncated()
        )));
    }
    let declared = match &doc.stability_pair {
        None => None,
        Some(two) if two.len() == 2 => Some(crate::matrix::Pair::new(
            m.agent_by_label(&two[0])?,
            m.agent_by_label(&two[1])?,
        )),
        Some(other) => {
            return Err(GameError::InvalidArgument(format!(
                "stability_pair must have exactly two labels, got {}",
                other.len()
            )))
        }
    };
    if t.stability_pair() != declared {
        return Err(GameError::InvalidArgument(
            "trace file stability_pair does not match the replayed trace".into(),
        ));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{fixture_figure2, fixture_figure6a};

    #[test]
    fn matrix_round_trip_is_identity() {
        for m in [
            fixture_figure2(),
            fixture_figure6a(),
            PreferenceMatrix::zeros(5).unwrap(),
        ] {
            let json = matrix_to_json(&m);
            assert_eq!(matrix_from_json(&json).unwrap(), m);
            // Stable bytes: serializing again changes nothing.
            assert_eq!(matrix_to_json(&matrix_from_json(&json).unwrap()), json);
        }
    }

    #[test]
    fn matrix_json_shape_matches_reference() {
        let json = matrix_to_json(&fixture_figure2());
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["agents"][2], "C");
        assert_eq!(v["cells"][0][0], serde_json::Value::Null);
        // cells[r][c] is the cell (column c, row r): row D, column C holds 4.
        assert_eq!(v["cells"][3][2], 4);
    }

    #[test]
    fn malformed_matrix_json_reports_position() {
        let err = matrix_from_json("{\"agents\": [\"A\",\"B\"], \"cells\": [[null,").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 1"), "{msg}");
        assert!(matrix_from_json("{\"agents\": [\"A\"], \"cells\": [[null]]}").is_err());
        // Unknown fields are rejected, not ignored.
        assert!(matrix_from_json(
            "{\"agents\": [\"A\",\"B\"], \"cells\": [[null,0],[0,null]], \"x\": 1}"
        )
        .is_err());
    }

    #[test]
    fn trace_round_trip_with_replay_validation() {
        let m = fixture_figure2();
        let receivers: Vec<AgentId> = [3usize, 2, 3].map(AgentId).to_vec();
        let t = Trace::replay(&m, AgentId(2), &receivers).unwrap();
        let json = trace_to_json(&t);
        assert_eq!(trace_from_json(&m, &json).unwrap(), t);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["start"], "C");
        assert_eq!(v["steps"][0], "D");
        assert_eq!(v["truncated"], false);
        assert_eq!(v["stability_pair"][0], "C");
    }

    #[test]
    fn inconsistent_trace_files_are_rejected() {
        let m = fixture_figure2();
        // Claims truncation but the replay stabilizes.
        let bad =
            "{\"start\":\"C\",\"steps\":[\"D\",\"C\"],\"truncated\":true,\"stability_pair\":null}";
        assert!(trace_from_json(&m, bad).is_err());
        // Claims the wrong pair.
        let bad = "{\"start\":\"C\",\"steps\":[\"D\",\"C\"],\"truncated\":false,\"stability_pair\":[\"A\",\"B\"]}";
        assert!(trace_from_json(&m, bad).is_err());
        // Illegal step: C cannot pass to A.
        let bad = "{\"start\":\"C\",\"steps\":[\"A\"],\"truncated\":true,\"stability_pair\":null}";
        assert!(matches!(
            trace_from_json(&m, bad),
            Err(GameError::IllegalStep { index: 1, .. })
        ));
    }
}
