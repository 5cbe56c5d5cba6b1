//! Exact conversion of a polyline drawing into a combinatorial one.
//!
//! Every pair of segments is tested with exact rational predicates. Anything
//! other than transversal crossings of segment interiors, and edges meeting
//! at a shared endpoint, is rejected.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{Coord, GeoDrawing, Point};
use crate::drawing::{Drawing, EdgeEnd, EdgeId, RouteBuilder, Token};
use crate::error::{Error, Result};

type Q = BigRational;

#[derive(Clone)]
struct Vec2 {
    x: Q,
    y: Q,
}

impl Vec2 {
    fn between(from: &Point, to: &Point) -> Self {
        Vec2 { x: &to.x.0 - &from.x.0, y: &to.y.0 - &from.y.0 }
    }

    fn cross(&self, o: &Vec2) -> Q {
        &self.x * &o.y - &self.y * &o.x
    }

    fn dot(&self, o: &Vec2) -> Q {
        &self.x * &o.x + &self.y * &o.y
    }

    fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

struct Segment<'a> {
    edge: EdgeId,
    index: usize,
    from: &'a Point,
    to: &'a Point,
    dir: Vec2,
}

enum Meet {
    None,
    Crossing { t: Q, u: Q, point: Point },
    Touch(Point),
    Overlap,
}

fn point_along(p: &Point, d: &Vec2, t: &Q) -> Point {
    Point { x: Coord(&p.x.0 + &d.x * t), y: Coord(&p.y.0 + &d.y * t) }
}

fn meet(s: &Segment, r: &Segment) -> Meet {
    let zero = Q::zero();
    let one = Q::from_integer(1.into());
    let offset = Vec2::between(s.from, r.from);
    let denom = s.dir.cross(&r.dir);
    if denom.is_zero() {
        if !offset.cross(&s.dir).is_zero() {
            return Meet::None;
        }
        // collinear: project r's endpoints onto s
        let len2 = s.dir.dot(&s.dir);
        let t0 = offset.dot(&s.dir) / &len2;
        let t1 = Vec2::between(s.from, r.to).dot(&s.dir) / &len2;
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        let lo = lo.max(zero.clone());
        let hi = hi.min(one);
        return match lo.cmp(&hi) {
            Ordering::Less => Meet::Overlap,
            Ordering::Equal => Meet::Touch(point_along(s.from, &s.dir, &lo)),
            Ordering::Greater => Meet::None,
        };
    }
    let t = offset.cross(&r.dir) / &denom;
    let u = offset.cross(&s.dir) / &denom;
    if t < zero || t > one || u < zero || u > one {
        return Meet::None;
    }
    let point = point_along(s.from, &s.dir, &t);
    if t > zero && t < one && u > zero && u < one {
        Meet::Crossing { t, u, point }
    } else {
        Meet::Touch(point)
    }
}

fn on_closed_segment(p: &Point, s: &Segment) -> bool {
    let w = Vec2::between(s.from, p);
    if !w.cross(&s.dir).is_zero() {
        return false;
    }
    let along = w.dot(&s.dir);
    !along.is_negative() && along <= s.dir.dot(&s.dir)
}

/// Counter-clockwise angular order starting at the positive x axis.
fn angle_cmp(a: &Vec2, b: &Vec2) -> Ordering {
    let half = |v: &Vec2| {
        if v.y.is_positive() || (v.y.is_zero() && v.x.is_positive()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let c = a.cross(b);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Result of ingestion: the drawing and the location of each crossing
/// (indexed by crossing id).
#[derive(Clone, Debug)]
pub struct Ingested {
    pub drawing: Drawing,
    pub points: Vec<Point>,
}

pub fn ingest(g: &GeoDrawing) -> Result<Drawing> {
    ingest_with_points(g).map(|i| i.drawing)
}

pub fn ingest_with_points(g: &GeoDrawing) -> Result<Ingested> {
    let graph = g.graph()?;
    let n = g.vertices.len();
    for a in 0..n {
        for b in a + 1..n {
            if g.vertices[a] == g.vertices[b] {
                return Err(Error::Degenerate(format!(
                    "vertices {a} and {b} share the position {}",
                    g.vertices[a]
                )));
            }
        }
    }

    let polylines: Vec<Vec<Point>> = (0..g.edges.len()).map(|e| g.polyline(e)).collect();
    let mut segments = Vec::new();
    for (e, pts) in polylines.iter().enumerate() {
        for (i, w) in pts.windows(2).enumerate() {
            let dir = Vec2::between(&w[0], &w[1]);
            if dir.is_zero() {
                return Err(Error::Degenerate(format!("edge {e} has a zero-length segment at {}", w[0])));
            }
            segments.push(Segment { edge: e, index: i, from: &w[0], to: &w[1], dir });
        }
    }

    // no curve passes through a vertex other than at its own ends
    for (v, p) in g.vertices.iter().enumerate() {
        for s in &segments {
            if !on_closed_segment(p, s) {
                continue;
            }
            let edge = &g.edges[s.edge];
            let last = polylines[s.edge].len() - 2;
            let own_end =
                (s.index == 0 && edge.tail == v && s.from == p) || (s.index == last && edge.head == v && s.to == p);
            if !own_end {
                return Err(Error::Degenerate(format!("edge {} passes through vertex {v} at {p}", s.edge)));
            }
        }
    }

    struct Found {
        a: (EdgeId, usize, Q),
        b: (EdgeId, usize, Q),
        sign: i8,
        point: Point,
    }
    let mut found: Vec<Found> = Vec::new();
    for (i, s) in segments.iter().enumerate() {
        for r in &segments[i + 1..] {
            let adjacent = s.edge == r.edge && r.index == s.index + 1;
            match meet(s, r) {
                Meet::None => {}
                Meet::Overlap => {
                    return Err(Error::Degenerate(format!(
                        "edges {} and {} overlap collinearly near {}",
                        s.edge, r.edge, s.from
                    )));
                }
                Meet::Touch(p) => {
                    if adjacent && &p == s.to {
                        continue;
                    }
                    let shared_vertex = s.edge != r.edge
                        && g.vertices.iter().enumerate().any(|(v, q)| {
                            q == &p && {
                                let (es, er) = (&g.edges[s.edge], &g.edges[r.edge]);
                                (es.tail == v || es.head == v) && (er.tail == v || er.head == v)
                            }
                        });
                    if !shared_vertex {
                        return Err(Error::Degenerate(format!(
                            "edges {} and {} touch without crossing at {p}",
                            s.edge, r.edge
                        )));
                    }
                }
                Meet::Crossing { t, u, point } => {
                    let c = s.dir.cross(&r.dir);
                    let sign = if c.is_positive() { 1 } else { -1 };
                    found.push(Found { a: (s.edge, s.index, t), b: (r.edge, r.index, u), sign, point });
                }
            }
        }
    }

    // no three strands through one point
    let mut order: Vec<usize> = (0..found.len()).collect();
    order.sort_by(|&x, &y| found[x].point.cmp(&found[y].point));
    for w in order.windows(2) {
        if found[w[0]].point == found[w[1]].point {
            let (p, q) = (&found[w[0]], &found[w[1]]);
            return Err(Error::Degenerate(format!(
                "edges {}, {} and {}, {} cross at the same point {}",
                p.a.0, p.b.0, q.a.0, q.b.0, p.point
            )));
        }
    }

    let mut builder = RouteBuilder::with_capacity(g.edges.len(), found.len());
    let mut occurrences: Vec<Vec<(usize, Q, Token)>> = vec![Vec::new(); g.edges.len()];
    for f in &found {
        let key = builder.push_key(f.sign);
        occurrences[f.a.0].push((f.a.1, f.a.2.clone(), Token { key, role: 0 }));
        occurrences[f.b.0].push((f.b.1, f.b.2.clone(), Token { key, role: 1 }));
    }
    for (e, occ) in occurrences.iter_mut().enumerate() {
        occ.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
        builder.routes[e] = occ.iter().map(|o| o.2).collect();
    }

    let mut rotations = Vec::with_capacity(n);
    for v in 0..n {
        let mut ends: Vec<(Vec2, EdgeEnd)> = Vec::new();
        for (e, edge) in g.edges.iter().enumerate() {
            let pts = &polylines[e];
            if edge.tail == v {
                ends.push((Vec2::between(&pts[0], &pts[1]), EdgeEnd::tail(e)));
            }
            if edge.head == v {
                let k = pts.len();
                ends.push((Vec2::between(&pts[k - 1], &pts[k - 2]), EdgeEnd::head(e)));
            }
        }
        ends.sort_by(|x, y| angle_cmp(&x.0, &y.0));
        rotations.push(ends.into_iter().map(|(_, end)| end).collect());
    }

    let (drawing, ids) = builder.finish_mapped(graph, rotations)?;
    let mut points = vec![Point::int(0, 0); found.len()];
    for (key, f) in found.into_iter().enumerate() {
        points[ids[key]] = f.point;
    }
    Ok(Ingested { drawing, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::validate_drawing;
    use crate::geometry::GeoEdge;

    fn geo(vertices: &[(i64, i64)], edges: &[(usize, usize, &[(i64, i64)])]) -> GeoDrawing {
        GeoDrawing {
            vertices: vertices.iter().map(|&(x, y)| Point::int(x, y)).collect(),
            edges: edges
                .iter()
                .map(|&(tail, head, via)| GeoEdge {
                    tail,
                    head,
                    via: via.iter().map(|&(x, y)| Point::int(x, y)).collect(),
                })
                .collect(),
        }
    }

    #[test]
    fn x_has_one_crossing_with_orientation_sign() {
        let g = geo(&[(0, 0), (2, 2), (0, 2), (2, 0)], &[(0, 1, &[]), (2, 3, &[])]);
        let out = ingest_with_points(&g).unwrap();
        let d = &out.drawing;
        assert_eq!(d.crossing_count(), 1);
        // (2,2) x (2,-2) < 0: edge 1 passes edge 0 from left to right
        assert_eq!(d.crossing(0).sign, -1);
        assert_eq!(out.points[0], Point::int(1, 1));
        assert!(validate_drawing(d).ok);
    }

    #[test]
    fn self_crossing_polyline() {
        // loop: (0,0) -> (4,0) -> (4,2) -> (2,-2) -> (6,-2)... crosses its first segment
        let g = geo(&[(0, 0), (6, -2)], &[(0, 1, &[(4, 0), (4, 2), (2, -2)])]);
        let d = ingest(&g).unwrap();
        assert_eq!(d.crossing_count(), 1);
        assert!(d.crossing(0).is_self());
        assert!(validate_drawing(&d).ok);
    }

    #[test]
    fn shared_endpoints_are_not_crossings() {
        let g = geo(&[(0, 0), (2, 0), (1, 2)], &[(0, 1, &[]), (1, 2, &[]), (2, 0, &[])]);
        let d = ingest(&g).unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert!(validate_drawing(&d).ok);
    }

    #[test]
    fn degeneracies_are_rejected() {
        // passes through a vertex
        let through = geo(&[(0, 0), (2, 0), (1, 0), (1, 1)], &[(0, 1, &[]), (2, 3, &[])]);
        assert!(matches!(ingest(&through), Err(Error::Degenerate(_))));
        // collinear overlap
        let overlap = geo(&[(0, 0), (3, 0), (1, 1), (4, 1)], &[(0, 1, &[]), (2, 3, &[(2, 0), (5, 0)])]);
        assert!(matches!(ingest(&overlap), Err(Error::Degenerate(_))));
        // tangential touch at a bend
        let touch = geo(&[(0, 0), (2, 0), (0, 2), (2, 2)], &[(0, 1, &[]), (2, 3, &[(1, 0)])]);
        assert!(matches!(ingest(&touch), Err(Error::Degenerate(_))));
        // three edges through one point
        let triple = geo(
            &[(0, 0), (2, 2), (0, 2), (2, 0), (1, 0), (1, 3)],
            &[(0, 1, &[]), (2, 3, &[]), (4, 5, &[])],
        );
        assert!(matches!(ingest(&triple), Err(Error::Degenerate(_))));
        // backtracking bend
        let back = geo(&[(0, 0), (1, 1)], &[(0, 1, &[(3, 0), (2, 0)])]);
        assert!(matches!(ingest(&back), Err(Error::Degenerate(_))));
    }

    #[test]
    fn rotation_is_counter_clockwise() {
        // star around vertex 0 at the origin
        let g = geo(
            &[(0, 0), (1, 0), (0, 1), (-1, 0), (0, -1)],
            &[(0, 3, &[]), (0, 1, &[]), (4, 0, &[]), (0, 2, &[])],
        );
        let d = ingest(&g).unwrap();
        assert_eq!(
            d.rotation(0),
            &[EdgeEnd::tail(1), EdgeEnd::tail(3), EdgeEnd::tail(0), EdgeEnd::head(2)]
        );
    }
}
