//! Brute-force reference implementations, written independently of the
//! library code they check.

#![allow(dead_code)]

use std::collections::BTreeMap;

use untangle::geometry::GeoDrawing;
use untangle::separator::StringGraph;

/// Every coordinate the generator emits is a multiple of 1/SCALE.
const SCALE: i128 = 10_000;

fn scaled(text: &str) -> i128 {
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p.parse::<i128>().unwrap(), q.parse::<i128>().unwrap()),
        None => match text.split_once('.') {
            None => (text.parse::<i128>().unwrap(), 1),
            Some((int, frac)) => {
                let den = 10i128.pow(frac.len() as u32);
                let neg = int.starts_with('-');
                let whole = int.trim_start_matches('-').parse::<i128>().unwrap_or(0);
                let v = whole * den + frac.parse::<i128>().unwrap();
                (if neg { -v } else { v }, den)
            }
        },
    };
    assert_eq!((num * SCALE) % den, 0, "coordinate {text} is off the 1/{SCALE} grid");
    num * SCALE / den
}

type P = (i128, i128);

fn orient(a: P, b: P, c: P) -> i128 {
    ((b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)).signum()
}

fn proper(a: P, b: P, c: P, d: P) -> bool {
    orient(a, b, c) * orient(a, b, d) < 0 && orient(c, d, a) * orient(c, d, b) < 0
}

/// Proper segment intersections per unordered edge pair (an edge paired
/// with itself counts its self-crossings).
pub fn segment_crossings(g: &GeoDrawing) -> BTreeMap<(usize, usize), usize> {
    let mut segs: Vec<(usize, usize, P, P)> = Vec::new();
    for e in 0..g.edges.len() {
        let pts: Vec<P> = g
            .polyline(e)
            .iter()
            .map(|p| (scaled(&p.x.to_string()), scaled(&p.y.to_string())))
            .collect();
        for (i, w) in pts.windows(2).enumerate() {
            segs.push((e, i, w[0], w[1]));
        }
    }
    let mut out = BTreeMap::new();
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let (e, si, a, b) = segs[i];
            let (f, sj, c, d) = segs[j];
            if e == f && si.abs_diff(sj) == 1 {
                continue;
            }
            if proper(a, b, c, d) {
                *out.entry((e.min(f), e.max(f))).or_default() += 1;
            }
        }
    }
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Minimum separator by enumerating every assignment of vertices to
/// F0/F1/F2; ties go to the lexicographically smallest F0, then F1.
pub fn separator(h: &StringGraph) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let n = h.vertex_count();
    let limit = 2 * n / 3;
    let nbr: Vec<u32> = (0..n).map(|v| h.neighbors(v).iter().fold(0, |m, &u| m | 1 << u)).collect();
    let list = |mask: u32| -> Vec<usize> { (0..n).filter(|i| mask >> i & 1 == 1).collect() };
    let full: u32 = if n == 0 { 0 } else { ((1u64 << n) - 1) as u32 };
    for size in 0..=n {
        let mut best: Option<(Vec<usize>, Vec<usize>, u32, u32)> = None;
        for f0 in 0..=full {
            if f0.count_ones() as usize != size {
                continue;
            }
            let rest = full & !f0;
            // all submasks of rest, including empty and rest itself
            let mut f1 = rest;
            loop {
                let f2 = rest & !f1;
                let ok = f1.count_ones() as usize <= limit
                    && f2.count_ones() as usize <= limit
                    && list(f1).iter().all(|&v| nbr[v] & f2 == 0);
                if ok {
                    let key = (list(f0), list(f1));
                    if best.as_ref().is_none_or(|b| key < (b.0.clone(), b.1.clone())) {
                        best = Some((key.0, key.1, f0, f1));
                    }
                }
                if f1 == 0 {
                    break;
                }
                f1 = (f1 - 1) & rest;
            }
        }
        if let Some((_, _, f0, f1)) = best {
            let map = |m: u32| list(m).into_iter().map(|i| h.labels[i]).collect();
            return (map(f0), map(f1), map(full & !f0 & !f1));
        }
    }
    unreachable!("F0 = V always works")
}
