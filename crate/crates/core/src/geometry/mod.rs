//! Polyline drawings with exact rational coordinates.

mod generate;
mod ingest;

pub use generate::{gen_random, Family, GenParams, Placement, Routing};
pub use ingest::{ingest, ingest_with_points, Ingested};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::drawing::{Edge, EdgeId, SimpleGraph, VertexId};
use crate::error::{Error, Result};

/// Exact rational coordinate. Written as a decimal string when the value has
/// a finite decimal expansion, otherwise as `p/q`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coord(pub BigRational);

impl Coord {
    pub fn from_int(v: i64) -> Self {
        Coord(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Coord(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl FromStr for Coord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Format(format!("not a rational number: {s:?}"));
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            return Ok(Coord(BigRational::new(p, q)));
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let mut num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
        if neg {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac_part.len());
        Ok(Coord(BigRational::new(num, den)))
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.0;
        if r.is_integer() {
            return write!(f, "{}", r.numer());
        }
        let mut den = r.denom().clone();
        let (two, five) = (BigInt::from(2), BigInt::from(5));
        let (mut twos, mut fives) = (0usize, 0usize);
        while den.is_multiple_of(&two) {
            den /= &two;
            twos += 1;
        }
        while den.is_multiple_of(&five) {
            den /= &five;
            fives += 1;
        }
        if !den.is_one() {
            return write!(f, "{}/{}", r.numer(), r.denom());
        }
        let places = twos.max(fives);
        let scaled = (r * BigRational::from_integer(num_traits::pow(BigInt::from(10), places))).to_integer();
        let sign = if scaled.is_negative() { "-" } else { "" };
        let digits = scaled.abs().to_string();
        let digits = format!("{digits:0>width$}", width = places + 1);
        let (int_part, frac_part) = digits.split_at(digits.len() - places);
        write!(f, "{sign}{int_part}.{frac_part}")
    }
}

impl Serialize for Coord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: Coord,
    pub y: Coord,
}

impl Point {
    pub fn new(x: Coord, y: Coord) -> Self {
        Self { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Self { x: Coord::from_int(x), y: Coord::from_int(y) }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeoEdge {
    pub tail: VertexId,
    pub head: VertexId,
    /// interior bend points from tail to head
    pub via: Vec<Point>,
}

/// A straight-line or polyline drawing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeoDrawing {
    pub vertices: Vec<Point>,
    pub edges: Vec<GeoEdge>,
}

impl GeoDrawing {
    pub fn graph(&self) -> Result<SimpleGraph> {
        SimpleGraph::new(
            self.vertices.len(),
            self.edges.iter().map(|e| Edge { tail: e.tail, head: e.head }).collect(),
        )
    }

    /// Full point list of an edge, endpoints included.
    pub fn polyline(&self, e: EdgeId) -> Vec<Point> {
        let edge = &self.edges[e];
        let mut pts = Vec::with_capacity(edge.via.len() + 2);
        pts.push(self.vertices[edge.tail].clone());
        pts.extend(edge.via.iter().cloned());
        pts.push(self.vertices[edge.head].clone());
        pts
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GdrawFile {
    vertices: Vec<GVertex>,
    edges: Vec<GEdge>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GVertex {
    id: usize,
    x: Coord,
    y: Coord,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GEdge {
    id: usize,
    tail: usize,
    head: usize,
    #[serde(default)]
    via: Vec<(Coord, Coord)>,
}

pub fn parse_gdraw(text: &str) -> Result<GeoDrawing> {
    let file: GdrawFile = serde_json::from_str(text)?;
    for (i, v) in file.vertices.iter().enumerate() {
        if v.id != i {
            return Err(Error::Format(format!("vertex ids must be dense; found {} at {i}", v.id)));
        }
    }
    for (i, e) in file.edges.iter().enumerate() {
        if e.id != i {
            return Err(Error::Format(format!("edge ids must be dense; found {} at {i}", e.id)));
        }
        if e.tail >= file.vertices.len() || e.head >= file.vertices.len() {
            return Err(Error::Format(format!("edge {i} references an unknown vertex")));
        }
    }
    Ok(GeoDrawing {
        vertices: file.vertices.into_iter().map(|v| Point::new(v.x, v.y)).collect(),
        edges: file
            .edges
            .into_iter()
            .map(|e| GeoEdge {
                tail: e.tail,
                head: e.head,
                via: e.via.into_iter().map(|(x, y)| Point::new(x, y)).collect(),
            })
            .collect(),
    })
}

pub fn to_gdraw(g: &GeoDrawing) -> String {
    let file = GdrawFile {
        vertices: g
            .vertices
            .iter()
            .enumerate()
            .map(|(id, p)| GVertex { id, x: p.x.clone(), y: p.y.clone() })
            .collect(),
        edges: g
            .edges
            .iter()
            .enumerate()
            .map(|(id, e)| GEdge {
                id,
                tail: e.tail,
                head: e.head,
                via: e.via.iter().map(|p| (p.x.clone(), p.y.clone())).collect(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("geometry serializes");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_parse_and_print() {
        for (text, canon) in [
            ("3", "3"),
            ("-0.25", "-0.25"),
            ("1.50", "1.5"),
            (".5", "0.5"),
            ("-.05", "-0.05"),
            ("2/6", "1/3"),
            ("10/4", "2.5"),
            ("+7", "7"),
        ] {
            let c: Coord = text.parse().unwrap();
            assert_eq!(c.to_string(), canon, "{text}");
            assert_eq!(canon.parse::<Coord>().unwrap(), c);
        }
        for bad in ["", "-", "1e3", "1/0", "x", "1.2.3"] {
            assert!(bad.parse::<Coord>().is_err(), "{bad}");
        }
    }

    #[test]
    fn gdraw_round_trip() {
        let g = GeoDrawing {
            vertices: vec![Point::int(0, 0), Point::new(Coord::ratio(1, 3), Coord::ratio(5, 2))],
            edges: vec![GeoEdge { tail: 0, head: 1, via: vec![Point::int(4, -1)] }],
        };
        let text = to_gdraw(&g);
        assert_eq!(parse_gdraw(&text).unwrap(), g);
        assert_eq!(to_gdraw(&parse_gdraw(&text).unwrap()), text);
    }
}
