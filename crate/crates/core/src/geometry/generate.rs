//! Seeded random drawings.
//!
//! All randomness comes from a `ChaCha8Rng` seeded with `seed_from_u64`, so
//! a `(family, routing, placement, seed)` tuple names one drawing on every
//! platform. Coordinates live on an integer grid of side [`GRID`]; convex
//! placements put vertices on the parabola `y = x² / GRID`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ingest, Coord, GeoDrawing, GeoEdge, Point};
use crate::error::{Error, Result};

pub const GRID: i64 = 10_000;
const MAX_ATTEMPTS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Family {
    Complete(usize),
    CompleteBipartite(usize, usize),
    /// Erdős–Rényi graph on `n` vertices with edge probability `p`.
    Random { n: usize, p: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Routing {
    Straight,
    /// Up to this many random bend points per edge.
    Detour(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Placement {
    Convex,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub family: Family,
    pub routing: Routing,
    pub placement: Placement,
    pub seed: u64,
}

impl GenParams {
    pub fn new(family: Family, routing: Routing, placement: Placement, seed: u64) -> Self {
        Self { family, routing, placement, seed }
    }
}

fn edge_list(family: Family, rng: &mut ChaCha8Rng) -> Result<(usize, Vec<(usize, usize)>)> {
    Ok(match family {
        Family::Complete(n) => {
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    edges.push((i, j));
                }
            }
            (n, edges)
        }
        Family::CompleteBipartite(a, b) => {
            let mut edges = Vec::new();
            for i in 0..a {
                for j in 0..b {
                    edges.push((i, a + j));
                }
            }
            (a + b, edges)
        }
        Family::Random { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Precondition(format!("edge probability {p} outside [0, 1]")));
            }
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((i, j));
                    }
                }
            }
            (n, edges)
        }
    })
}

fn grid_point(rng: &mut ChaCha8Rng) -> Point {
    Point::int(rng.gen_range(0..GRID), rng.gen_range(0..GRID))
}

fn place(n: usize, placement: Placement, rng: &mut ChaCha8Rng) -> Vec<Point> {
    match placement {
        Placement::Convex => {
            let mut xs: Vec<i64> = (0..GRID).collect::<Vec<_>>().choose_multiple(rng, n).copied().collect();
            xs.sort_unstable();
            // listed along the hull: left to right on the parabola
            xs.into_iter().map(|x| Point::new(Coord::from_int(x), Coord::ratio(x * x, GRID))).collect()
        }
        Placement::Random => {
            let mut pts: Vec<Point> = Vec::with_capacity(n);
            while pts.len() < n {
                let p = grid_point(rng);
                if !pts.contains(&p) {
                    pts.push(p);
                }
            }
            pts
        }
    }
}

/// Generates a drawing in general position, retrying with fresh randomness
/// from the same stream when the candidate is degenerate.
pub fn gen_random(params: &GenParams) -> Result<GeoDrawing> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let (n, edges) = edge_list(params.family, &mut rng)?;
    if n > GRID as usize {
        return Err(Error::Precondition(format!("{n} vertices do not fit the grid")));
    }
    for _ in 0..MAX_ATTEMPTS {
        let vertices = place(n, params.placement, &mut rng);
        let edges: Vec<GeoEdge> = edges
            .iter()
            .map(|&(tail, head)| {
                let via = match params.routing {
                    Routing::Straight => Vec::new(),
                    Routing::Detour(d) => {
                        let count = rng.gen_range(0..=d);
                        (0..count).map(|_| grid_point(&mut rng)).collect()
                    }
                };
                GeoEdge { tail, head, via }
            })
            .collect();
        let candidate = GeoDrawing { vertices, edges };
        match ingest(&candidate) {
            Ok(_) => return Ok(candidate),
            Err(Error::Degenerate(_)) => continue,
            Err(other) => return Err(other),
        }
    }
    Err(Error::RetriesExhausted(MAX_ATTEMPTS))
}
