use std::collections::BTreeMap;

use serde::Serialize;

use super::{Drawing, EdgeId, EdgeSet};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairCount {
    pub e: EdgeId,
    pub f: EdgeId,
    pub crossings: usize,
}

/// Crossing counts of a drawing restricted to a set of active edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DrawingStats {
    /// crossing points whose two strands are both active
    pub crossing_points: usize,
    /// unordered pairs of distinct active edges that cross at least once
    pub crossing_pairs: usize,
    /// active edges that take part in at least one such crossing
    pub crossing_edges: usize,
    /// active edges in at least one crossing pair (self-crossings alone do
    /// not count)
    pub paired_edges: usize,
    pub pairs: Vec<PairCount>,
    /// (edge, number of self-crossings), only edges with at least one
    pub self_crossings: Vec<(EdgeId, usize)>,
    pub max_multiplicity: usize,
}

impl DrawingStats {
    pub fn is_simple(&self) -> bool {
        self.max_multiplicity <= 1 && self.self_crossings.is_empty()
    }
}

fn check_active(d: &Drawing, active: &EdgeSet) -> Result<()> {
    if active.universe() != d.edge_count() {
        return Err(Error::Precondition(format!(
            "edge set sized for {} edges, drawing has {}",
            active.universe(),
            d.edge_count()
        )));
    }
    Ok(())
}

pub fn stats(d: &Drawing, active: &EdgeSet) -> Result<DrawingStats> {
    check_active(d, active)?;
    let mut pairs: BTreeMap<(EdgeId, EdgeId), usize> = BTreeMap::new();
    let mut selfs: BTreeMap<EdgeId, usize> = BTreeMap::new();
    let mut involved = EdgeSet::empty(d.edge_count());
    let mut points = 0;
    for c in d.crossings() {
        if !active.contains(c.a) || !active.contains(c.b) {
            continue;
        }
        points += 1;
        involved.insert(c.a);
        involved.insert(c.b);
        if c.a == c.b {
            *selfs.entry(c.a).or_default() += 1;
        } else {
            *pairs.entry((c.a.min(c.b), c.a.max(c.b))).or_default() += 1;
        }
    }
    let max_multiplicity = pairs.values().copied().max().unwrap_or(0);
    let mut paired = EdgeSet::empty(d.edge_count());
    for &(e, f) in pairs.keys() {
        paired.insert(e);
        paired.insert(f);
    }
    Ok(DrawingStats {
        crossing_points: points,
        crossing_pairs: pairs.len(),
        crossing_edges: involved.len(),
        paired_edges: paired.len(),
        pairs: pairs.into_iter().map(|((e, f), crossings)| PairCount { e, f, crossings }).collect(),
        self_crossings: selfs.into_iter().collect(),
        max_multiplicity,
    })
}

/// Splits `active` into (empty edges, crossing edges).
pub fn classify_edges(d: &Drawing, active: &EdgeSet) -> Result<(EdgeSet, EdgeSet)> {
    check_active(d, active)?;
    let mut crossing = EdgeSet::empty(d.edge_count());
    for c in d.crossings() {
        if active.contains(c.a) && active.contains(c.b) {
            crossing.insert(c.a);
            crossing.insert(c.b);
        }
    }
    let mut empty = active.clone();
    for e in crossing.iter() {
        empty.remove(e);
    }
    Ok((empty, crossing))
}
