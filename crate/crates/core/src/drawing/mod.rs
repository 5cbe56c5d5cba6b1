//! Combinatorial drawings.
//!
//! A [`Drawing`] stores a simple graph together with, for every edge, the
//! ordered list of crossings it passes through from tail to head, a table of
//! crossings, and the counter-clockwise rotation of edge-ends at every vertex.
//! Together these determine the planarization (vertices and crossings as
//! nodes, edge segments as arcs) up to homeomorphism of the sphere.
//!
//! A crossing joins two *strands*: a slot `(edge, index)` in one route and a
//! slot in another (or the same) route. Its `sign` is `+1` when, travelling
//! along strand `a` from tail to head, strand `b` passes from right to left.
//! The rotation at a crossing node is derived from that sign and never stored.

mod faces;
mod io;
mod stats;
mod validate;

pub use faces::{trace_faces, Dart, Face};
pub use io::{parse_cdraw, to_cdraw};
pub use stats::{classify_edges, stats, DrawingStats, PairCount};
pub use validate::{validate_drawing, ValidationReport, Violation, ViolationKind};

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;
pub type CrossingId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Tail,
    Head,
}

/// One end of an edge, as it appears in a vertex rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeEnd {
    pub edge: EdgeId,
    pub end: End,
}

impl EdgeEnd {
    pub fn tail(edge: EdgeId) -> Self {
        Self { edge, end: End::Tail }
    }

    pub fn head(edge: EdgeId) -> Self {
        Self { edge, end: End::Head }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
}

/// A graph without loops or parallel edges. Vertex and edge ids are dense
/// and 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl SimpleGraph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self> {
        let graph = Self { vertex_count, edges };
        if let Some(problem) = graph.problems().into_iter().next() {
            return Err(Error::Graph(problem));
        }
        Ok(graph)
    }

    /// Builds a graph without checking simplicity; [`validate_drawing`]
    /// reports any problems.
    pub(crate) fn new_unchecked(vertex_count: usize, edges: Vec<Edge>) -> Self {
        Self { vertex_count, edges }
    }

    pub(crate) fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for (id, e) in self.edges.iter().enumerate() {
            if e.tail >= self.vertex_count || e.head >= self.vertex_count {
                out.push(format!("edge {id} references an unknown vertex"));
                continue;
            }
            if e.tail == e.head {
                out.push(format!("edge {id} is a loop at vertex {}", e.tail));
                continue;
            }
            let key = (e.tail.min(e.head), e.tail.max(e.head));
            if !seen.insert(key) {
                out.push(format!("edge {id} is parallel to an earlier edge {key:?}"));
            }
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id]
    }
}

/// A crossing point between the strand at `(a, ai)` and the strand at
/// `(b, bi)`. `a == b` denotes a self-crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub a: EdgeId,
    pub ai: usize,
    pub b: EdgeId,
    pub bi: usize,
    pub sign: i8,
}

impl Crossing {
    pub fn is_self(&self) -> bool {
        self.a == self.b
    }

    /// Orientation of the other strand relative to the strand at `slot`:
    /// `+1` iff the other strand passes from right to left.
    pub fn sign_from(&self, slot: (EdgeId, usize)) -> i8 {
        if slot == (self.a, self.ai) {
            self.sign
        } else {
            -self.sign
        }
    }

    /// The slot of the strand that is not `slot`.
    pub fn other_slot(&self, slot: (EdgeId, usize)) -> (EdgeId, usize) {
        if slot == (self.a, self.ai) {
            (self.b, self.bi)
        } else {
            (self.a, self.ai)
        }
    }
}

/// Set of edges of a particular drawing, stored as a mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    mask: Vec<bool>,
}

impl EdgeSet {
    pub fn empty(edge_count: usize) -> Self {
        Self { mask: vec![false; edge_count] }
    }

    pub fn all(edge_count: usize) -> Self {
        Self { mask: vec![true; edge_count] }
    }

    pub fn from_edges<I: IntoIterator<Item = EdgeId>>(edge_count: usize, edges: I) -> Result<Self> {
        let mut set = Self::empty(edge_count);
        for e in edges {
            if e >= edge_count {
                return Err(Error::Precondition(format!("unknown edge id {e}")));
            }
            set.mask[e] = true;
        }
        Ok(set)
    }

    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.mask.get(e).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, e: EdgeId) {
        self.mask[e] = true;
    }

    pub fn remove(&mut self, e: EdgeId) {
        self.mask[e] = false;
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.mask.iter().enumerate().filter_map(|(i, &b)| b.then_some(i))
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        Self {
            mask: self.mask.iter().zip(&other.mask).map(|(a, b)| *a || *b).collect(),
        }
    }
}

/// A combinatorial drawing. May hold invalid data after parsing; use
/// [`validate_drawing`] before handing it to the surgery code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Drawing {
    graph: SimpleGraph,
    routes: Vec<Vec<CrossingId>>,
    crossings: Vec<Crossing>,
    rotations: Vec<Vec<EdgeEnd>>,
}

impl Drawing {
    /// Assembles a drawing from raw parts without any checks.
    pub fn from_parts(
        graph: SimpleGraph,
        routes: Vec<Vec<CrossingId>>,
        crossings: Vec<Crossing>,
        rotations: Vec<Vec<EdgeEnd>>,
    ) -> Self {
        Self { graph, routes, crossings, rotations }
    }

    /// A crossing-free drawing with the given vertex rotations.
    pub fn plane(graph: SimpleGraph, rotations: Vec<Vec<EdgeEnd>>) -> Self {
        let routes = vec![Vec::new(); graph.edge_count()];
        Self { graph, routes, crossings: Vec::new(), rotations }
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn route(&self, e: EdgeId) -> &[CrossingId] {
        &self.routes[e]
    }

    pub fn routes(&self) -> &[Vec<CrossingId>] {
        &self.routes
    }

    pub fn crossing(&self, c: CrossingId) -> &Crossing {
        &self.crossings[c]
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn rotation(&self, v: VertexId) -> &[EdgeEnd] {
        &self.rotations[v]
    }

    pub fn rotations(&self) -> &[Vec<EdgeEnd>] {
        &self.rotations
    }

    /// Number of crossings between `e` and `f` (self-crossings when `e == f`).
    pub fn multiplicity(&self, e: EdgeId, f: EdgeId) -> usize {
        self.crossings
            .iter()
            .filter(|c| (c.a == e && c.b == f) || (c.a == f && c.b == e))
            .count()
    }

    /// Re-derives crossing ids and slot indices in canonical order: crossings
    /// are numbered by first appearance (edges ascending, routes from tail),
    /// and the first appearance becomes strand `a`.
    pub fn canonicalize(&self) -> Result<Drawing> {
        let mut builder = RouteBuilder::with_capacity(self.edge_count(), self.crossings.len());
        for c in &self.crossings {
            builder.push_key(c.sign);
        }
        for (e, route) in self.routes.iter().enumerate() {
            for (i, &cid) in route.iter().enumerate() {
                let c = &self.crossings[cid];
                let role = if (c.a, c.ai) == (e, i) { 0 } else { 1 };
                builder.routes[e].push(Token { key: cid, role });
            }
        }
        builder.finish(self.graph.clone(), self.rotations.clone())
    }
}

impl fmt::Display for Drawing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "drawing(n={}, m={}, crossings={})",
            self.vertex_count(),
            self.edge_count(),
            self.crossing_count()
        )
    }
}

/// A route entry during reconstruction: `role` tells which strand of the
/// keyed crossing this occurrence is (0 for the strand the sign is measured
/// from, 1 for the other).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Token {
    pub key: usize,
    pub role: u8,
}

/// Rebuilds a canonical [`Drawing`] from token routes.
pub(crate) struct RouteBuilder {
    pub routes: Vec<Vec<Token>>,
    signs: Vec<i8>,
}

impl RouteBuilder {
    pub fn with_capacity(edge_count: usize, keys: usize) -> Self {
        Self { routes: vec![Vec::new(); edge_count], signs: Vec::with_capacity(keys) }
    }

    /// Registers a crossing whose sign is measured from its role-0 strand.
    pub fn push_key(&mut self, sign: i8) -> usize {
        self.signs.push(sign);
        self.signs.len() - 1
    }

    pub fn finish(self, graph: SimpleGraph, rotations: Vec<Vec<EdgeEnd>>) -> Result<Drawing> {
        self.finish_mapped(graph, rotations).map(|(d, _)| d)
    }

    /// Like `finish`, also returning the new crossing id of every key.
    pub fn finish_mapped(
        self,
        graph: SimpleGraph,
        rotations: Vec<Vec<EdgeEnd>>,
    ) -> Result<(Drawing, Vec<usize>)> {
        const UNSEEN: usize = usize::MAX;
        let mut new_id = vec![UNSEEN; self.signs.len()];
        let mut first_role = vec![0u8; self.signs.len()];
        let mut crossings: Vec<Crossing> = Vec::new();
        let mut filled = Vec::new();
        let mut routes = Vec::with_capacity(self.routes.len());
        for (e, route) in self.routes.iter().enumerate() {
            let mut out = Vec::with_capacity(route.len());
            for (i, tok) in route.iter().enumerate() {
                let id = new_id[tok.key];
                if id == UNSEEN {
                    let id = crossings.len();
                    new_id[tok.key] = id;
                    first_role[tok.key] = tok.role;
                    let sign = if tok.role == 0 { self.signs[tok.key] } else { -self.signs[tok.key] };
                    crossings.push(Crossing { a: e, ai: i, b: usize::MAX, bi: usize::MAX, sign });
                    filled.push(false);
                    out.push(id);
                } else {
                    if filled[id] || tok.role == first_role[tok.key] {
                        return Err(Error::Invariant(format!(
                            "crossing key {} occurs with a repeated strand role",
                            tok.key
                        )));
                    }
                    crossings[id].b = e;
                    crossings[id].bi = i;
                    filled[id] = true;
                    out.push(id);
                }
            }
            routes.push(out);
        }
        if let Some(id) = filled.iter().position(|f| !f) {
            return Err(Error::Invariant(format!("crossing {id} has a single strand")));
        }
        Ok((Drawing { graph, routes, crossings, rotations }, new_id))
    }
}
