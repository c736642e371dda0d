//! Graph interchange format.
//!
//! A graph is a JSON document `{"vertices": V, "edges": [[u, v, w], ...]}`
//! with `0 <= u < v < V`, `w` in `{-1, 1}`, and edges sorted
//! lexicographically. The parser rejects any violation with a diagnostic
//! naming the offending line or field; the emitter always produces the
//! canonical byte sequence, so emit → parse → emit round-trips exactly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::WeightedGraph;

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    vertices: usize,
    edges: Vec<(u32, u32, i8)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InterchangeError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid graph at {location}: {message}")]
    Semantic { location: String, message: String },
}

fn semantic(location: impl Into<String>, message: impl Into<String>) -> InterchangeError {
    InterchangeError::Semantic {
        location: location.into(),
        message: message.into(),
    }
}

/// Parses and validates the interchange format.
pub fn parse_graph_json(text: &str) -> Result<WeightedGraph, InterchangeError> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| InterchangeError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let mut prev: Option<(u32, u32)> = None;
    for (i, &(u, v, w)) in doc.edges.iter().enumerate() {
        let loc = format!("edges[{i}]");
        if u >= v {
            return Err(semantic(loc, format!("endpoints must satisfy u < v, got ({u}, {v})")));
        }
        if (v as usize) >= doc.vertices {
            return Err(semantic(
                loc,
                format!("vertex {v} out of range (vertices = {})", doc.vertices),
            ));
        }
        if w != 1 && w != -1 {
            return Err(semantic(loc, format!("weight must be -1 or 1, got {w}")));
        }
        if let Some(p) = prev {
            if p >= (u, v) {
                return Err(semantic(
                    loc,
                    format!(
                        "edges must be strictly sorted lexicographically, ({}, {}) precedes ({u}, {v})",
                        p.0, p.1
                    ),
                ));
            }
        }
        prev = Some((u, v));
    }

    WeightedGraph::new(doc.vertices, doc.edges)
        .map_err(|e| semantic("edges", e.to_string()))
}

/// Emits the canonical interchange JSON (compact, no trailing newline).
pub fn graph_to_json(g: &WeightedGraph) -> String {
    let doc = GraphDoc {
        vertices: g.vertex_count(),
        edges: g.edges().iter().map(|e| (e.u, e.v, e.w)).collect(),
    };
    serde_json::to_string(&doc).expect("graph serialization cannot fail")
}
