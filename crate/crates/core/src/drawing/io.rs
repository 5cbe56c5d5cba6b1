//! `.cdraw` files: UTF-8 JSON with `vertices`, `edges` and `crossings`
//! arrays, ids dense and ascending.

use serde::{Deserialize, Serialize};

use super::{Crossing, Drawing, Edge, EdgeEnd, SimpleGraph};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CdrawFile {
    vertices: Vec<VertexRecord>,
    edges: Vec<EdgeRecord>,
    crossings: Vec<CrossingRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexRecord {
    id: usize,
    rotation: Vec<EdgeEnd>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    id: usize,
    tail: usize,
    head: usize,
    route: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CrossingRecord {
    id: usize,
    a: usize,
    ai: usize,
    b: usize,
    bi: usize,
    sign: i64,
}

fn check_dense(kind: &str, ids: impl Iterator<Item = usize>) -> Result<()> {
    for (expected, id) in ids.enumerate() {
        if id != expected {
            return Err(Error::Format(format!(
                "{kind} ids must be dense and ascending from 0; found {id} at position {expected}"
            )));
        }
    }
    Ok(())
}

/// Parses a `.cdraw` document. Only the JSON shape and id density are
/// checked here; drawing invariants are left to `validate_drawing`.
pub fn parse_cdraw(text: &str) -> Result<Drawing> {
    let file: CdrawFile = serde_json::from_str(text)?;
    check_dense("vertex", file.vertices.iter().map(|v| v.id))?;
    check_dense("edge", file.edges.iter().map(|e| e.id))?;
    check_dense("crossing", file.crossings.iter().map(|c| c.id))?;
    let edges = file.edges.iter().map(|e| Edge { tail: e.tail, head: e.head }).collect();
    let graph = SimpleGraph::new_unchecked(file.vertices.len(), edges);
    let routes = file.edges.into_iter().map(|e| e.route).collect();
    let crossings = file
        .crossings
        .into_iter()
        .map(|c| Crossing {
            a: c.a,
            ai: c.ai,
            b: c.b,
            bi: c.bi,
            sign: i8::try_from(c.sign).unwrap_or(0),
        })
        .collect();
    let rotations = file.vertices.into_iter().map(|v| v.rotation).collect();
    Ok(Drawing::from_parts(graph, routes, crossings, rotations))
}

/// Serializes in canonical layout: ascending ids, routes as stored.
pub fn to_cdraw(d: &Drawing) -> String {
    let file = CdrawFile {
        vertices: d
            .rotations()
            .iter()
            .enumerate()
            .map(|(id, rot)| VertexRecord { id, rotation: rot.clone() })
            .collect(),
        edges: d
            .graph()
            .edges()
            .iter()
            .enumerate()
            .map(|(id, e)| EdgeRecord { id, tail: e.tail, head: e.head, route: d.route(id).to_vec() })
            .collect(),
        crossings: d
            .crossings()
            .iter()
            .enumerate()
            .map(|(id, c)| CrossingRecord { id, a: c.a, ai: c.ai, b: c.b, bi: c.bi, sign: c.sign as i64 })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("drawing serializes");
    out.push('\n');
    out
}
