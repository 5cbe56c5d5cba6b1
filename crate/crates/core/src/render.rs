//! SVG output.
//!
//! Geometric drawings are drawn as given, with crossing points marked.
//! Combinatorial drawings have no coordinates, so their planarization
//! (vertices plus crossing points) is laid out with a deterministic spring
//! embedder first; the picture shows routes, not the rotation system.

use std::fmt::Write as _;

use crate::drawing::Drawing;
use crate::error::{Error, Result};
use crate::geometry::{ingest_with_points, GeoDrawing};
use crate::transforms::{Color, Coloring};

const SIZE: f64 = 800.0;
const MARGIN: f64 = 20.0;

fn edge_class(col: Option<&Coloring>, e: usize) -> &'static str {
    match col.and_then(|c| c.get(e)) {
        Some(Color::Blue) => "edge blue",
        Some(Color::Red) => "edge red",
        None => "edge empty",
    }
}

struct Frame {
    min: (f64, f64),
    scale: f64,
}

impl Frame {
    fn fit<'a>(points: impl Iterator<Item = &'a (f64, f64)>) -> Frame {
        let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
        for &(x, y) in points {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        if !lo.0.is_finite() {
            return Frame { min: (0.0, 0.0), scale: 1.0 };
        }
        let span = (hi.0 - lo.0).max(hi.1 - lo.1);
        let scale = if span > 0.0 { (SIZE - 2.0 * MARGIN) / span } else { 1.0 };
        Frame { min: lo, scale }
    }

    /// SVG y grows downwards.
    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (MARGIN + (x - self.min.0) * self.scale, SIZE - MARGIN - (y - self.min.1) * self.scale)
    }
}

fn document(body: &str) -> String {
    format!(
        concat!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n",
            "<style>\n",
            ".edge {{ fill: none; stroke-width: 1.5; }}\n",
            ".empty {{ stroke: #888888; }}\n",
            ".blue {{ stroke: #1f5fbf; }}\n",
            ".red {{ stroke: #c0392b; }}\n",
            ".vertex {{ fill: #000000; }}\n",
            ".crossing {{ fill: none; stroke: #444444; stroke-width: 0.8; }}\n",
            "</style>\n",
            "{body}",
            "</svg>\n"
        ),
        s = SIZE,
        body = body
    )
}

fn path(out: &mut String, class: &str, id: usize, pts: &[(f64, f64)]) {
    let mut d = String::new();
    for (i, (x, y)) in pts.iter().enumerate() {
        let _ = write!(d, "{}{x:.2} {y:.2}", if i == 0 { "M" } else { " L" });
    }
    let _ = writeln!(out, "<path class=\"{class}\" data-edge=\"{id}\" d=\"{d}\"/>");
}

fn dots(out: &mut String, class: &str, r: f64, pts: &[(f64, f64)]) {
    for (x, y) in pts {
        let _ = writeln!(out, "<circle class=\"{class}\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{r}\"/>");
    }
}

/// Draws the polylines verbatim and circles every crossing point.
pub fn render_geo(g: &GeoDrawing, col: Option<&Coloring>) -> Result<String> {
    let ingested = ingest_with_points(g)?;
    let vertices: Vec<(f64, f64)> = g.vertices.iter().map(|p| p.to_f64()).collect();
    let crossings: Vec<(f64, f64)> = ingested.points.iter().map(|p| p.to_f64()).collect();
    let bends: Vec<(f64, f64)> = g.edges.iter().flat_map(|e| e.via.iter()).map(|p| p.to_f64()).collect();
    let frame = Frame::fit(vertices.iter().chain(&crossings).chain(&bends));
    let mut body = String::new();
    for (e, _) in g.edges.iter().enumerate() {
        let pts: Vec<(f64, f64)> = g.polyline(e).iter().map(|p| frame.map(p.to_f64())).collect();
        path(&mut body, edge_class(col, e), e, &pts);
    }
    dots(&mut body, "crossing", 3.0, &crossings.iter().map(|&p| frame.map(p)).collect::<Vec<_>>());
    dots(&mut body, "vertex", 4.0, &vertices.iter().map(|&p| frame.map(p)).collect::<Vec<_>>());
    Ok(document(&body))
}

/// Spring layout of the planarization: nodes `0..n` are vertices, `n + c`
/// is crossing `c`.
fn layout(d: &Drawing) -> Result<Vec<(f64, f64)>> {
    let n = d.vertex_count();
    let total = n + d.crossing_count();
    let mut links: Vec<(usize, usize)> = Vec::new();
    for (e, edge) in d.graph().edges().iter().enumerate() {
        let mut prev = edge.tail;
        for &c in d.route(e) {
            links.push((prev, n + c));
            prev = n + c;
        }
        links.push((prev, edge.head));
    }
    let mut pos: Vec<(f64, f64)> = (0..total)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / total.max(1) as f64;
            let r = if i < n { 1.0 } else { 0.5 + 0.4 * ((i * 7919) % 97) as f64 / 97.0 };
            (r * a.cos(), r * a.sin())
        })
        .collect();
    if total < 2 {
        return Ok(pos);
    }
    let k = (4.0 / total as f64).sqrt();
    let iterations = 300;
    for it in 0..iterations {
        let temp = 0.1 * (1.0 - it as f64 / iterations as f64) + 1e-3;
        let mut disp = vec![(0.0f64, 0.0f64); total];
        for i in 0..total {
            for j in i + 1..total {
                let (dx, dy) = (pos[i].0 - pos[j].0, pos[i].1 - pos[j].1);
                let dist = (dx * dx + dy * dy).sqrt().max(1e-6);
                let f = k * k / dist;
                disp[i].0 += dx / dist * f;
                disp[i].1 += dy / dist * f;
                disp[j].0 -= dx / dist * f;
                disp[j].1 -= dy / dist * f;
            }
        }
        for &(u, v) in &links {
            let (dx, dy) = (pos[u].0 - pos[v].0, pos[u].1 - pos[v].1);
            let dist = (dx * dx + dy * dy).sqrt().max(1e-6);
            let f = dist * dist / k;
            disp[u].0 -= dx / dist * f;
            disp[u].1 -= dy / dist * f;
            disp[v].0 += dx / dist * f;
            disp[v].1 += dy / dist * f;
        }
        for (p, dp) in pos.iter_mut().zip(&disp) {
            let len = (dp.0 * dp.0 + dp.1 * dp.1).sqrt();
            if len > 0.0 {
                let step = len.min(temp);
                p.0 += dp.0 / len * step;
                p.1 += dp.1 / len * step;
            }
        }
    }
    if pos.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
        return Err(Error::Layout("spring layout diverged".into()));
    }
    Ok(pos)
}

/// Draws a combinatorial drawing after laying out its planarization.
pub fn render_drawing(d: &Drawing, col: Option<&Coloring>) -> Result<String> {
    if let Some(c) = col {
        if c.edge_count() != d.edge_count() {
            return Err(Error::Precondition("colouring sized for a different drawing".into()));
        }
    }
    let n = d.vertex_count();
    let pos = layout(d)?;
    let frame = Frame::fit(pos.iter());
    let mut body = String::new();
    for (e, edge) in d.graph().edges().iter().enumerate() {
        let mut pts = vec![frame.map(pos[edge.tail])];
        pts.extend(d.route(e).iter().map(|&c| frame.map(pos[n + c])));
        pts.push(frame.map(pos[edge.head]));
        path(&mut body, edge_class(col, e), e, &pts);
    }
    dots(&mut body, "crossing", 3.0, &pos[n..].iter().map(|&p| frame.map(p)).collect::<Vec<_>>());
    dots(&mut body, "vertex", 4.0, &pos[..n].iter().map(|&p| frame.map(p)).collect::<Vec<_>>());
    Ok(document(&body))
}
