use serde::Serialize;

use super::{Drawing, EdgeId, End};
use crate::error::{Error, Result};

/// A directed segment of the planarization: segment `segment` of `edge`
/// (segment 0 leaves the tail, the last one enters the head).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Dart {
    pub edge: EdgeId,
    pub segment: usize,
    pub forward: bool,
}

pub type Face = Vec<Dart>;

/// Planarization of a structurally sound drawing, with darts numbered
/// `2 * segment_index + (0 forward | 1 backward)`.
pub(crate) struct Planarization {
    seg_base: Vec<usize>,
    pub seg_edge: Vec<(EdgeId, usize)>,
    /// ccw outgoing darts per node; nodes are vertices then crossings
    pub rotation: Vec<Vec<usize>>,
    dart_pos: Vec<usize>,
    dart_origin: Vec<usize>,
}

impl Planarization {
    /// Assumes slot references are consistent (see `validate::structural`).
    pub fn build(d: &Drawing) -> Result<Self> {
        let n = d.vertex_count();
        let mut seg_base = Vec::with_capacity(d.edge_count());
        let mut seg_edge = Vec::new();
        for (e, route) in d.routes().iter().enumerate() {
            seg_base.push(seg_edge.len());
            for j in 0..=route.len() {
                seg_edge.push((e, j));
            }
        }
        let darts = 2 * seg_edge.len();
        let node_count = n + d.crossing_count();
        let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); node_count];

        for (v, rot) in d.rotations().iter().enumerate() {
            for end in rot {
                let route_len = d.route(end.edge).len();
                let dart = match end.end {
                    End::Tail => 2 * seg_base[end.edge],
                    End::Head => 2 * (seg_base[end.edge] + route_len) + 1,
                };
                rotation[v].push(dart);
            }
        }
        for (cid, c) in d.crossings().iter().enumerate() {
            let a_out = 2 * (seg_base[c.a] + c.ai + 1);
            let a_in = 2 * (seg_base[c.a] + c.ai) + 1;
            let b_out = 2 * (seg_base[c.b] + c.bi + 1);
            let b_in = 2 * (seg_base[c.b] + c.bi) + 1;
            rotation[n + cid] = if c.sign > 0 {
                vec![a_out, b_out, a_in, b_in]
            } else {
                vec![a_out, b_in, a_in, b_out]
            };
        }

        let mut dart_pos = vec![usize::MAX; darts];
        let mut dart_origin = vec![usize::MAX; darts];
        for (node, rot) in rotation.iter().enumerate() {
            for (i, &dart) in rot.iter().enumerate() {
                if dart >= darts || dart_pos[dart] != usize::MAX {
                    return Err(Error::Invariant(format!("dart {dart} placed twice in rotations")));
                }
                dart_pos[dart] = i;
                dart_origin[dart] = node;
            }
        }
        if let Some(dart) = dart_pos.iter().position(|&p| p == usize::MAX) {
            return Err(Error::Invariant(format!("dart {dart} missing from rotations")));
        }
        Ok(Self { seg_base, seg_edge, rotation, dart_pos, dart_origin })
    }

    pub fn dart_count(&self) -> usize {
        self.dart_pos.len()
    }

    pub fn segment_count(&self) -> usize {
        self.seg_edge.len()
    }

    pub fn origin(&self, dart: usize) -> usize {
        self.dart_origin[dart]
    }

    /// Next dart along the face: turn to the ccw successor of the reversed
    /// dart at its origin.
    pub fn next(&self, dart: usize) -> usize {
        let rev = dart ^ 1;
        let node = self.dart_origin[rev];
        let rot = &self.rotation[node];
        rot[(self.dart_pos[rev] + 1) % rot.len()]
    }

    pub fn dart(&self, id: usize) -> Dart {
        let (edge, segment) = self.seg_edge[id / 2];
        Dart { edge, segment, forward: id.is_multiple_of(2) }
    }

    #[allow(dead_code)]
    pub fn segment_id(&self, edge: EdgeId, segment: usize) -> usize {
        self.seg_base[edge] + segment
    }

    /// Face orbits as lists of dart ids.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.dart_count()];
        let mut faces = Vec::new();
        for start in 0..self.dart_count() {
            if seen[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                face.push(d);
                d = self.next(d);
            }
            faces.push(face);
        }
        faces
    }
}

/// Traces the faces of the planarization. Every dart lies on exactly one face.
pub fn trace_faces(d: &Drawing) -> Result<Vec<Face>> {
    let structural = super::validate::structural(d);
    if !structural.is_empty() {
        return Err(Error::InvalidDrawing(structural));
    }
    let p = Planarization::build(d)?;
    Ok(p.orbits().into_iter().map(|f| f.into_iter().map(|id| p.dart(id)).collect()).collect())
}
