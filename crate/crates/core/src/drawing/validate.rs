use std::fmt;

use serde::Serialize;

use super::faces::Planarization;
use super::{Drawing, End};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ViolationKind {
    #[serde(rename = "graph")]
    Graph,
    #[serde(rename = "shape")]
    Shape,
    #[serde(rename = "unknown crossing")]
    UnknownCrossing,
    #[serde(rename = "unused crossing")]
    UnusedCrossing,
    #[serde(rename = "dangling crossing")]
    DanglingCrossing,
    #[serde(rename = "duplicated slot")]
    DuplicatedSlot,
    #[serde(rename = "slot mismatch")]
    SlotMismatch,
    #[serde(rename = "self-crossing slot")]
    SelfSlot,
    #[serde(rename = "sign")]
    Sign,
    #[serde(rename = "rotation")]
    Rotation,
    #[serde(rename = "euler")]
    Euler,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::Graph => "graph",
            ViolationKind::Shape => "shape",
            ViolationKind::UnknownCrossing => "unknown crossing",
            ViolationKind::UnusedCrossing => "unused crossing",
            ViolationKind::DanglingCrossing => "dangling crossing",
            ViolationKind::DuplicatedSlot => "duplicated slot",
            ViolationKind::SlotMismatch => "slot mismatch",
            ViolationKind::SelfSlot => "self-crossing slot",
            ViolationKind::Sign => "sign",
            ViolationKind::Rotation => "rotation",
            ViolationKind::Euler => "euler",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

impl Violation {
    fn new(kind: ViolationKind, message: impl Into<String>) -> Self {
        Self { kind, message: message.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

/// Everything except the genus check.
pub(crate) fn structural(d: &Drawing) -> Vec<Violation> {
    use ViolationKind::*;
    let mut out = Vec::new();
    let m = d.edge_count();
    let n = d.vertex_count();

    for problem in d.graph().problems() {
        out.push(Violation::new(Graph, problem));
    }
    if d.routes().len() != m {
        out.push(Violation::new(Shape, format!("{} routes for {m} edges", d.routes().len())));
        return out;
    }
    if d.rotations().len() != n {
        out.push(Violation::new(Shape, format!("{} rotations for {n} vertices", d.rotations().len())));
        return out;
    }

    let cc = d.crossing_count();
    let mut occurrences = vec![0usize; cc];
    for (e, route) in d.routes().iter().enumerate() {
        for (i, &cid) in route.iter().enumerate() {
            if cid >= cc {
                out.push(Violation::new(
                    UnknownCrossing,
                    format!("edge {e} slot {i} references crossing {cid} of {cc}"),
                ));
            } else {
                occurrences[cid] += 1;
            }
        }
    }
    for (cid, c) in d.crossings().iter().enumerate() {
        match occurrences[cid] {
            0 => out.push(Violation::new(UnusedCrossing, format!("crossing {cid} is on no route"))),
            1 => out.push(Violation::new(
                DanglingCrossing,
                format!("crossing {cid} appears in only one route slot"),
            )),
            2 => {}
            k => out.push(Violation::new(
                DuplicatedSlot,
                format!("crossing {cid} appears in {k} route slots"),
            )),
        }
        for (edge, idx, label) in [(c.a, c.ai, "a"), (c.b, c.bi, "b")] {
            let ok = edge < m && d.routes()[edge].get(idx) == Some(&cid);
            if !ok {
                out.push(Violation::new(
                    SlotMismatch,
                    format!("crossing {cid} strand {label} points to edge {edge} slot {idx}, which does not hold it"),
                ));
            }
        }
        if c.a == c.b && c.ai == c.bi {
            out.push(Violation::new(
                SelfSlot,
                format!("crossing {cid} uses slot {} of edge {} for both strands", c.ai, c.a),
            ));
        }
        if c.sign != 1 && c.sign != -1 {
            out.push(Violation::new(Sign, format!("crossing {cid} has sign {}", c.sign)));
        }
    }

    let mut seen = vec![[false; 2]; m];
    for (v, rot) in d.rotations().iter().enumerate() {
        for end in rot {
            if end.edge >= m {
                out.push(Violation::new(Rotation, format!("vertex {v} lists unknown edge {}", end.edge)));
                continue;
            }
            let edge = d.graph().edge(end.edge);
            let (at, slot) = match end.end {
                End::Tail => (edge.tail, 0),
                End::Head => (edge.head, 1),
            };
            if at != v {
                out.push(Violation::new(
                    Rotation,
                    format!("vertex {v} lists {:?} end of edge {} which sits at vertex {at}", end.end, end.edge),
                ));
            } else if seen[end.edge][slot] {
                out.push(Violation::new(
                    Rotation,
                    format!("vertex {v} lists {:?} end of edge {} twice", end.end, end.edge),
                ));
            } else {
                seen[end.edge][slot] = true;
            }
        }
    }
    for (e, ends) in seen.iter().enumerate() {
        let edge = d.graph().edge(e);
        if edge.tail >= n || edge.head >= n {
            continue;
        }
        if !ends[0] {
            out.push(Violation::new(Rotation, format!("tail of edge {e} missing from vertex {}", edge.tail)));
        }
        if !ends[1] {
            out.push(Violation::new(Rotation, format!("head of edge {e} missing from vertex {}", edge.head)));
        }
    }
    out
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = x;
        while self.0[x] != r {
            let next = self.0[x];
            self.0[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Checks every drawing invariant, including that the rotation system traces
/// a sphere: `V - E + F = 1 + C` for the planarization.
pub fn validate_drawing(d: &Drawing) -> ValidationReport {
    let mut violations = structural(d);
    if violations.is_empty() {
        match Planarization::build(d) {
            Ok(p) => {
                if let Some(v) = euler_violation(d, &p) {
                    violations.push(v);
                }
            }
            Err(err) => violations.push(Violation::new(ViolationKind::Shape, err.to_string())),
        }
    }
    ValidationReport { ok: violations.is_empty(), violations }
}

fn euler_violation(d: &Drawing, p: &Planarization) -> Option<Violation> {
    let nodes = d.vertex_count() + d.crossing_count();
    let mut dsu = Dsu((0..nodes).collect());
    for seg in 0..p.segment_count() {
        dsu.union(p.origin(2 * seg), p.origin(2 * seg + 1));
    }
    let mut has_darts = vec![false; nodes];
    for (node, rot) in p.rotation.iter().enumerate() {
        has_darts[node] = !rot.is_empty();
    }
    let mut roots = std::collections::BTreeMap::new();
    for (node, &darts) in has_darts.iter().enumerate() {
        *roots.entry(dsu.find(node)).or_insert(false) |= darts;
    }
    let components = roots.len() as i64;
    let with_edges = roots.values().filter(|&&b| b).count() as i64;
    let faces_traced = p.orbits().len() as i64;
    // the traced outer faces of distinct components are one face of the plane
    let faces = if with_edges > 0 { faces_traced - with_edges + 1 } else { 1 };
    let v = nodes as i64;
    let e = p.segment_count() as i64;
    if v - e + faces != 1 + components {
        return Some(Violation::new(
            ViolationKind::Euler,
            format!(
                "V - E + F = {v} - {e} + {faces} = {} but 1 + C = {}; the rotation system is not planar",
                v - e + faces,
                1 + components
            ),
        ));
    }
    None
}
