//! Divide and conquer untangling.
//!
//! Each level strips self-crossings of its active edges, splits the crossing
//! edges with a separator `F0 ∪ F1 ∪ F2` of their string graph, untangles
//! `F1` and then `F2` in place (all other edges inactive), colours `F1 ∪ F2`
//! blue and `F0` red, and normalizes. The report records per-level counts
//! and checks them, after the fact, against the measured separator constant
//! `ĉ` (the largest `|F0| / √k` seen at any level).

use serde::Serialize;

use crate::drawing::{classify_edges, stats, validate_drawing, Drawing, EdgeId, EdgeSet};
use crate::error::{Error, Result};
use crate::separator::{
    find_separator, side_limit, string_graph, HeuristicParams, SeparatorResult, DEFAULT_EXACT_CAP,
};
use crate::transforms::{
    normalize_checked, potential, remove_self_crossings, CheckLevel, Color, Coloring, StepKind, StepRecord,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UntangleConfig {
    /// string graphs up to this many vertices get the exact separator
    pub exact_cap: usize,
    pub heuristic: HeuristicParams,
    pub check: CheckLevel,
    /// optional target for the separator constant; missing it is reported,
    /// not treated as a failure
    pub target_c: Option<f64>,
}

impl Default for UntangleConfig {
    fn default() -> Self {
        Self {
            exact_cap: DEFAULT_EXACT_CAP,
            heuristic: HeuristicParams::default(),
            check: CheckLevel::Level,
            target_c: None,
        }
    }
}

/// One level of the recursion. Levels are listed in completion order
/// (children before their parent).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelRecord {
    pub depth: usize,
    /// crossing edges and crossing pairs among the active edges
    pub l: usize,
    pub k: usize,
    pub l0: usize,
    pub l1: usize,
    pub l2: usize,
    /// crossing pairs inside `F1` and inside `F2`, before recursing
    pub k1: usize,
    pub k2: usize,
    pub separator: SeparatorResult,
    pub recursed: bool,
    pub self_crossings_removed: usize,
    pub f1_f2_crossings: usize,
    pub bb_before: usize,
    pub steps: usize,
    pub bb_after: usize,
    pub br_rr_after: usize,
    /// crossing points among the active edges when the level finishes
    pub crossings_after: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UntangleReport {
    pub k: usize,
    pub l: usize,
    pub input_crossings: usize,
    pub final_crossings: usize,
    pub levels: Vec<LevelRecord>,
    pub c_hat: f64,
    pub bound_lemma: f64,
    pub bound_theorem: f64,
    /// `final ≤ bound_lemma`
    pub lemma_satisfied: bool,
    /// `final < bound_theorem`; only evaluated for `k ≥ 2`
    pub theorem_satisfied: Option<bool>,
    pub simple: bool,
    pub empty_edges_unchanged: bool,
    pub target_c: Option<f64>,
    pub target_met: Option<bool>,
    /// failed per-level or end-to-end checks
    pub violations: Vec<String>,
}

impl UntangleReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.simple && self.empty_edges_unchanged
    }

    pub fn bounds_hold(&self) -> bool {
        self.lemma_satisfied && self.theorem_satisfied != Some(false)
    }
}

/// A surgery step tagged with the recursion depth that performed it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoggedStep {
    pub depth: usize,
    #[serde(flatten)]
    pub record: StepRecord,
}

#[derive(Clone, Debug)]
pub struct Untangled {
    pub drawing: Drawing,
    pub report: UntangleReport,
    pub steps: Vec<LoggedStep>,
}

/// `(4ĉ·k^{3/2}·log₂ l, 8ĉ·k^{3/2}·log₂ k)`.
pub fn theorem_bound(k: usize, l: usize, c: f64) -> Result<(f64, f64)> {
    if k == 0 || l < 2 {
        return Err(Error::Precondition(format!("bound needs k ≥ 1 and l ≥ 2, got k = {k}, l = {l}")));
    }
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::Precondition(format!("separator constant {c} must be finite and non-negative")));
    }
    let kf = k as f64;
    let lemma = 4.0 * c * kf.powf(1.5) * (l as f64).log2();
    let theorem = 8.0 * c * kf.powf(1.5) * kf.log2();
    if k >= 2 && l <= 2 * k && c > 0.0 && lemma >= theorem {
        return Err(Error::Invariant(format!("lemma bound {lemma} not below theorem bound {theorem}")));
    }
    Ok((lemma, theorem))
}

fn lemma_term(k: usize, l: usize, c: f64) -> f64 {
    if k == 0 || l < 2 {
        0.0
    } else {
        4.0 * c * (k as f64).powf(1.5) * (l as f64).log2()
    }
}

/// Crossing pairs whose both edges lie in `set`.
fn pairs_within(d: &Drawing, set: &EdgeSet) -> Result<usize> {
    Ok(stats(d, set)?.crossing_pairs)
}

fn crossings_between(d: &Drawing, x: &EdgeSet, y: &EdgeSet) -> usize {
    d.crossings()
        .iter()
        .filter(|c| (x.contains(c.a) && y.contains(c.b)) || (x.contains(c.b) && y.contains(c.a)))
        .count()
}

fn set_of(m: usize, edges: &[EdgeId]) -> Result<EdgeSet> {
    EdgeSet::from_edges(m, edges.iter().copied())
}

struct Run<'a> {
    cfg: &'a UntangleConfig,
    levels: Vec<LevelRecord>,
    steps: Vec<LoggedStep>,
}

impl Run<'_> {
    fn log(&mut self, depth: usize, steps: Vec<StepRecord>) {
        for record in steps {
            let step = self.steps.len();
            self.steps.push(LoggedStep { depth, record: StepRecord { step, ..record } });
        }
    }

    /// Removes every self-crossing of an active edge.
    fn strip_self_crossings(&mut self, mut d: Drawing, active: &EdgeSet, depth: usize) -> Result<(Drawing, usize)> {
        let col = Coloring::uniform(d.edge_count(), active, Color::Blue);
        let mut removed = 0;
        let mut steps = Vec::new();
        loop {
            let next = d.crossings().iter().filter(|c| c.is_self() && active.contains(c.a)).map(|c| c.a).min();
            let Some(e) = next else { break };
            let before = potential(&d, &col);
            let out = remove_self_crossings(&d, e)?;
            removed += d.crossing_count() - out.crossing_count();
            let after = potential(&out, &col);
            if after >= before {
                return Err(Error::Invariant(format!("self-crossing removal on {e} did not decrease the potential")));
            }
            steps.push(StepRecord {
                step: 0,
                kind: StepKind::RemoveSelfCrossings,
                edges: vec![e],
                potential_before: before,
                potential_after: after,
                crossings_total: out.crossing_count(),
            });
            d = out;
        }
        self.log(depth, steps);
        Ok((d, removed))
    }

    fn level(&mut self, d: Drawing, active: &EdgeSet, depth: usize) -> Result<Drawing> {
        let m = d.edge_count();
        let (d, self_crossings_removed) = self.strip_self_crossings(d, active, depth)?;
        let (empty, crossing) = classify_edges(&d, active)?;
        let l = crossing.len();
        if l == 0 {
            return Ok(d);
        }
        let k = stats(&d, active)?.crossing_pairs;
        let h = string_graph(&d, active)?;
        let sep = find_separator(&h, self.cfg.exact_cap, &self.cfg.heuristic);
        let f0 = set_of(m, &sep.f0)?;
        let f1 = set_of(m, &sep.f1)?;
        let f2 = set_of(m, &sep.f2)?;
        let (k1, k2) = (pairs_within(&d, &f1)?, pairs_within(&d, &f2)?);

        let recursed = l > 2;
        let mut d = d;
        if recursed {
            d = self.level(d, &empty.union(&f1), depth + 1)?;
            d = self.level(d, &empty.union(&f2), depth + 1)?;
        }

        let f1_f2_crossings = crossings_between(&d, &f1, &f2);
        let mut col = Coloring::uniform(m, &f1.union(&f2), Color::Blue);
        for e in f0.iter() {
            col.set(e, Color::Red);
        }
        let bb_before = potential(&d, &col).bb;
        let out = normalize_checked(&d, &col, active, self.cfg.check)?;
        let after = potential(&out.drawing, &col);
        let steps = out.steps.len();
        self.log(depth, out.steps);
        let d = out.drawing;
        if self.cfg.check != CheckLevel::Off {
            let report = validate_drawing(&d);
            if !report.ok {
                return Err(Error::InvalidDrawing(report.violations));
            }
        }
        self.levels.push(LevelRecord {
            depth,
            l,
            k,
            l0: sep.f0.len(),
            l1: sep.f1.len(),
            l2: sep.f2.len(),
            k1,
            k2,
            separator: sep,
            recursed,
            self_crossings_removed,
            f1_f2_crossings,
            bb_before,
            steps,
            bb_after: after.bb,
            br_rr_after: after.br + after.rr,
            crossings_after: stats(&d, active)?.crossing_points,
        });
        Ok(d)
    }
}

/// Per-level checks with the run's final `ĉ`.
fn level_violations(r: &LevelRecord, c_hat: f64) -> Vec<String> {
    let mut v = Vec::new();
    let tag = format!("level depth {} (l = {}, k = {})", r.depth, r.l, r.k);
    if r.l0 + r.l1 + r.l2 != r.l {
        v.push(format!("{tag}: l0 + l1 + l2 = {} ≠ l", r.l0 + r.l1 + r.l2));
    }
    if r.k1 + r.k2 > r.k {
        v.push(format!("{tag}: k1 + k2 = {} > k", r.k1 + r.k2));
    }
    let limit = side_limit(r.l);
    if r.l1 > limit || r.l2 > limit {
        v.push(format!("{tag}: side sizes {} / {} exceed ⌊2l/3⌋ = {limit}", r.l1, r.l2));
    }
    if r.f1_f2_crossings != 0 {
        v.push(format!("{tag}: {} crossings between F1 and F2 before normalizing", r.f1_f2_crossings));
    }
    if r.br_rr_after > r.l0 * r.l {
        v.push(format!("{tag}: BR + RR = {} > l0·l = {}", r.br_rr_after, r.l0 * r.l));
    }
    if r.bb_after > r.bb_before {
        v.push(format!("{tag}: BB grew from {} to {}", r.bb_before, r.bb_after));
    }
    let (k, k1, k2) = (r.k as f64, r.k1 as f64, r.k2 as f64);
    if k1.powf(1.5) + k2.powf(1.5) > k.powf(1.5) * (1.0 + 1e-12) {
        v.push(format!("{tag}: k1^1.5 + k2^1.5 > k^1.5"));
    }
    let children = lemma_term(r.k1, r.l1, c_hat) + lemma_term(r.k2, r.l2, c_hat);
    if r.bb_after as f64 > children * (1.0 + 1e-12) {
        v.push(format!("{tag}: BB = {} exceeds the children's bound {children:.3}", r.bb_after));
    }
    let own = lemma_term(r.k, r.l, c_hat);
    if r.crossings_after as f64 > own * (1.0 + 1e-12) {
        v.push(format!("{tag}: {} crossings exceed 4ĉk^1.5·log₂ l = {own:.3}", r.crossings_after));
    }
    v
}

/// Untangles every crossing edge of `d`; edges without crossings are left
/// as they are.
pub fn untangle(d: &Drawing, cfg: &UntangleConfig) -> Result<Untangled> {
    let report = validate_drawing(d);
    if !report.ok {
        return Err(Error::InvalidDrawing(report.violations));
    }
    let m = d.edge_count();
    let all = EdgeSet::all(m);
    let input = stats(d, &all)?;
    let (empty, _) = classify_edges(d, &all)?;
    let (k, l) = (input.crossing_pairs, input.paired_edges);

    let mut run = Run { cfg, levels: Vec::new(), steps: Vec::new() };
    let out = run.level(d.clone(), &all, 0)?;
    let out_stats = stats(&out, &all)?;
    let final_crossings = out.crossing_count();

    let c_hat = run.levels.iter().map(|r| r.separator.ratio).fold(0.0, f64::max);
    let (bound_lemma, bound_theorem) = if k == 0 { (0.0, 0.0) } else { theorem_bound(k, l, c_hat)? };
    let lemma_satisfied = final_crossings as f64 <= bound_lemma * (1.0 + 1e-12);
    let theorem_satisfied = (k >= 2).then_some((final_crossings as f64) < bound_theorem);

    let mut violations: Vec<String> = run.levels.iter().flat_map(|r| level_violations(r, c_hat)).collect();
    if !lemma_satisfied {
        violations.push(format!("{final_crossings} crossings exceed the bound {bound_lemma:.3}"));
    }
    if theorem_satisfied == Some(false) {
        violations.push(format!("{final_crossings} crossings not below {bound_theorem:.3}"));
    }
    if k >= 1 && !(l <= 2 * k && 2 * k <= l * (l - 1)) {
        violations.push(format!("l = {l}, k = {k} violate l ≤ 2k ≤ l(l-1)"));
    }
    let empty_edges_unchanged = empty.iter().all(|e| out.route(e) == d.route(e) && d.route(e).is_empty());
    let target_met = cfg.target_c.map(|t| run.levels.iter().all(|r| r.separator.ratio <= t));

    Ok(Untangled {
        drawing: out,
        report: UntangleReport {
            k,
            l,
            input_crossings: d.crossing_count(),
            final_crossings,
            levels: run.levels,
            c_hat,
            bound_lemma,
            bound_theorem,
            lemma_satisfied,
            theorem_satisfied,
            simple: out_stats.is_simple(),
            empty_edges_unchanged,
            target_c: cfg.target_c,
            target_met,
            violations,
        },
        steps: run.steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::fixtures;
    use crate::geometry::{gen_random, ingest, Family, GenParams, GeoDrawing, GeoEdge, Placement, Point, Routing};

    #[test]
    fn bound_arithmetic() {
        assert_eq!(theorem_bound(1, 2, 1.0).unwrap().0, 4.0);
        let (lemma, theorem) = theorem_bound(4, 8, 1.0).unwrap();
        assert_eq!((lemma, theorem), (96.0, 128.0));
        assert!(theorem_bound(0, 2, 1.0).is_err());
        assert!(theorem_bound(1, 1, 1.0).is_err());
        assert!(theorem_bound(1, 2, f64::INFINITY).is_err());
    }

    #[test]
    fn plane_drawing_is_unchanged() {
        let d = fixtures::triangle();
        let u = untangle(&d, &UntangleConfig::default()).unwrap();
        assert_eq!(u.drawing, d);
        assert_eq!((u.report.k, u.report.bound_lemma), (0, 0.0));
        assert!(u.report.ok() && u.report.bounds_hold());
        assert!(u.report.levels.is_empty());
    }

    #[test]
    fn double_crossing_disappears() {
        let g = GeoDrawing {
            vertices: [(0, 0), (10, 0), (2, 2), (8, 2)].iter().map(|&(x, y)| Point::int(x, y)).collect(),
            edges: vec![
                GeoEdge { tail: 0, head: 1, via: vec![] },
                GeoEdge { tail: 2, head: 3, via: vec![Point::int(3, -2), Point::int(7, -2)] },
            ],
        };
        let d = ingest(&g).unwrap();
        let u = untangle(&d, &UntangleConfig::default()).unwrap();
        assert_eq!(u.drawing.crossing_count(), 0);
        assert_eq!(u.report.levels.len(), 1);
        assert!(!u.report.levels[0].recursed);
        assert!(u.report.ok() && u.report.bounds_hold(), "{:?}", u.report.violations);
    }

    #[test]
    fn single_crossing_stays() {
        let u = untangle(&fixtures::x_drawing(), &UntangleConfig::default()).unwrap();
        assert_eq!(u.drawing.crossing_count(), 1);
        assert_eq!(u.report.c_hat, 1.0);
        assert!(u.report.ok());
    }

    #[test]
    fn detour_k7_is_certified() {
        let p = GenParams::new(Family::Complete(7), Routing::Detour(2), Placement::Random, 7);
        let d = ingest(&gen_random(&p).unwrap()).unwrap();
        let cfg = UntangleConfig { check: CheckLevel::Step, ..UntangleConfig::default() };
        let u = untangle(&d, &cfg).unwrap();
        let r = &u.report;
        assert!(r.simple && r.ok(), "{:?}", r.violations);
        assert!(r.bounds_hold());
        assert!(r.levels.iter().any(|l| l.recursed));
        for w in u.steps.windows(2) {
            assert_eq!(w[1].record.step, w[0].record.step + 1);
        }
    }
}
