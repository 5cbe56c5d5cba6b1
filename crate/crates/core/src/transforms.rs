//! Crossing surgery.
//!
//! Two moves rewrite a [`Drawing`] without touching crossing-free edges:
//!
//! * [`reduce_crossings`] takes two edges `e`, `f` that cross at least twice,
//!   picks the first two `e`–`f` crossings `X`, `Y` along `e`, and redraws the
//!   cheaper-to-move piece between `X` and `Y` alongside the other one. The
//!   moved edge picks up a parallel copy of every crossing on the template
//!   piece, and loses `X` and `Y` (one crossing is put back near `Y` when the
//!   old continuation leaves on the far side of the template).
//! * [`remove_self_crossings`] cuts out the loop between the two visits of the
//!   first self-crossing of an edge.
//!
//! With edges coloured blue or red, the triple `(BB, BR, RR)` of crossing
//! counts by colour class drops lexicographically with every move;
//! [`normalize`] applies the moves until every pair of active edges crosses
//! at most once and checks that drop at runtime.

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::drawing::{classify_edges, validate_drawing, Drawing, EdgeId, EdgeSet, RouteBuilder, Token};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Blue,
    Red,
}

/// Partial map from edges to colours; uncoloured edges are inactive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<Option<Color>>,
}

impl Coloring {
    pub fn new(edge_count: usize) -> Self {
        Self { colors: vec![None; edge_count] }
    }

    /// Every edge of `edges` gets `color`.
    pub fn uniform(edge_count: usize, edges: &EdgeSet, color: Color) -> Self {
        let mut c = Self::new(edge_count);
        for e in edges.iter() {
            c.set(e, color);
        }
        c
    }

    pub fn set(&mut self, e: EdgeId, color: Color) {
        self.colors[e] = Some(color);
    }

    pub fn get(&self, e: EdgeId) -> Option<Color> {
        self.colors.get(e).copied().flatten()
    }

    pub fn edge_count(&self) -> usize {
        self.colors.len()
    }
}

/// Crossing points by colour class of their two strands. Ordered
/// lexicographically as `(bb, br, rr)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Potential {
    pub bb: usize,
    pub br: usize,
    pub rr: usize,
}

pub fn potential(d: &Drawing, col: &Coloring) -> Potential {
    let mut p = Potential::default();
    for c in d.crossings() {
        match (col.get(c.a), col.get(c.b)) {
            (Some(Color::Blue), Some(Color::Blue)) => p.bb += 1,
            (Some(Color::Red), Some(Color::Red)) => p.rr += 1,
            (Some(_), Some(_)) => p.br += 1,
            _ => {}
        }
    }
    p
}

/// A stretch of one edge's route: the slots in `interior` lie strictly
/// between the two bounding crossings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub edge: EdgeId,
    pub interior: Range<usize>,
}

impl Piece {
    /// The piece of `edge` strictly between route slots `x` and `y`.
    pub fn between(edge: EdgeId, x: usize, y: usize) -> Self {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        Self { edge, interior: lo + 1..hi.max(lo + 1) }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PieceCost {
    pub blue: usize,
    pub red: usize,
    pub uncolored: usize,
}

/// Counts the crossings inside `p` by the colour of the other strand. A
/// self-crossing with both slots inside is seen from both slots.
pub fn piece_cost(d: &Drawing, p: &Piece, col: &Coloring) -> Result<PieceCost> {
    let route = d
        .routes()
        .get(p.edge)
        .ok_or_else(|| Error::Precondition(format!("unknown edge {}", p.edge)))?;
    if p.interior.start > p.interior.end || p.interior.end > route.len() {
        return Err(Error::Precondition(format!(
            "piece {:?} outside the route of edge {} (length {})",
            p.interior,
            p.edge,
            route.len()
        )));
    }
    let mut cost = PieceCost::default();
    for j in p.interior.clone() {
        let (other, _) = d.crossing(route[j]).other_slot((p.edge, j));
        match col.get(other) {
            Some(Color::Blue) => cost.blue += 1,
            Some(Color::Red) => cost.red += 1,
            None => cost.uncolored += 1,
        }
    }
    Ok(cost)
}

/// What a [`reduce_crossings`] call did.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Reroute {
    /// the edge whose piece was redrawn
    pub moved: EdgeId,
    /// the edge it was redrawn along
    pub template: EdgeId,
    pub moved_cost: PieceCost,
    pub template_cost: PieceCost,
    /// whether one crossing with the template was put back near the far end
    pub kept_crossing: bool,
}

fn has_self_crossing(d: &Drawing, e: EdgeId) -> bool {
    d.route(e).iter().any(|&c| d.crossing(c).is_self())
}

/// Redraws one of the two pieces between the first two `e`–`f` crossings
/// along the smaller-id edge so that it runs next to the other piece.
pub fn reduce_crossings(d: &Drawing, e: EdgeId, f: EdgeId, col: &Coloring) -> Result<Drawing> {
    reduce_crossings_traced(d, e, f, col).map(|(d, _)| d)
}

pub fn reduce_crossings_traced(d: &Drawing, e: EdgeId, f: EdgeId, col: &Coloring) -> Result<(Drawing, Reroute)> {
    let m = d.edge_count();
    if e == f || e >= m || f >= m {
        return Err(Error::Precondition(format!("need two distinct edges, got {e} and {f}")));
    }
    let (e, f) = (e.min(f), e.max(f));
    if has_self_crossing(d, e) || has_self_crossing(d, f) {
        return Err(Error::Precondition(format!("edges {e} and {f} must be free of self-crossings")));
    }
    let on_e: Vec<usize> = d
        .route(e)
        .iter()
        .enumerate()
        .filter(|(_, &c)| {
            let c = d.crossing(c);
            c.a == f || c.b == f
        })
        .map(|(i, _)| i)
        .take(2)
        .collect();
    if on_e.len() < 2 {
        return Err(Error::Precondition(format!("edges {e} and {f} cross fewer than twice")));
    }
    let (ex, ey) = (on_e[0], on_e[1]);
    let x = d.route(e)[ex];
    let y = d.route(e)[ey];
    let fx = d.crossing(x).other_slot((e, ex)).1;
    let fy = d.crossing(y).other_slot((e, ey)).1;

    let e_cost = piece_cost(d, &Piece::between(e, ex, ey), col)?;
    let f_cost = piece_cost(d, &Piece::between(f, fx, fy), col)?;
    let key = |c: &PieceCost| (c.blue, c.red, c.uncolored);
    // ties go to moving f along e
    let move_f = key(&e_cost) <= key(&f_cost);

    let (out, kept) = if move_f {
        let (gp, gq) = (fx.min(fy), fx.max(fy));
        let hp = d.crossing(d.route(f)[gp]).other_slot((f, gp)).1;
        let hq = d.crossing(d.route(f)[gq]).other_slot((f, gq)).1;
        reroute_along(d, f, gp, gq, e, hp, hq)?
    } else {
        reroute_along(d, e, ex, ey, f, fx, fy)?
    };
    let info = if move_f {
        Reroute { moved: f, template: e, moved_cost: f_cost, template_cost: e_cost, kept_crossing: kept }
    } else {
        Reroute { moved: e, template: f, moved_cost: e_cost, template_cost: f_cost, kept_crossing: kept }
    };
    Ok((out, info))
}

#[derive(Default)]
struct Insertions {
    before: Vec<Token>,
    after: Vec<Token>,
}

/// Replaces the stretch of `g` from slot `gp` to slot `gq` (both crossings
/// with `h`, at `h` slots `hp` and `hq`) by a strand running beside `h`
/// on the side `g` arrives from at `gp`.
fn reroute_along(
    d: &Drawing,
    g: EdgeId,
    gp: usize,
    gq: usize,
    h: EdgeId,
    hp: usize,
    hq: usize,
) -> Result<(Drawing, bool)> {
    debug_assert!(gp < gq);
    let route_g = d.route(g);
    let route_h = d.route(h);
    let p_id = route_g[gp];
    let q_id = route_g[gq];
    debug_assert_eq!(route_h[hp], p_id);
    debug_assert_eq!(route_h[hq], q_id);

    let mut deleted = vec![false; d.crossing_count()];
    for &c in &route_g[gp..=gq] {
        deleted[c] = true;
    }

    let mut builder = RouteBuilder::with_capacity(d.edge_count(), d.crossing_count() + route_h.len() + 1);
    for c in d.crossings() {
        builder.push_key(c.sign);
    }

    // g arrives at P from the right of h iff it passes right to left there
    let from_right = d.crossing(p_id).sign_from((h, hp)) > 0;
    let forward = hp < hq;
    let template: Vec<usize> = if forward { (hp + 1..hq).collect() } else { (hq + 1..hp).rev().collect() };

    let mut copy = Vec::new();
    let mut inserts: HashMap<(EdgeId, usize), Insertions> = HashMap::new();
    for j in template {
        let z_id = route_h[j];
        if deleted[z_id] {
            continue;
        }
        let z = d.crossing(z_id);
        let (w, o) = z.other_slot((h, j));
        let w_passes_right_to_left = z.sign_from((h, j)) > 0;
        let along = if forward { 1 } else { -1 };
        let sign = along * z.sign_from((h, j));
        let key = builder.push_key(sign);
        copy.push(Token { key, role: 0 });
        let slot = inserts.entry((w, o)).or_default();
        let token = Token { key, role: 1 };
        // w meets the copy's side of h before reaching h iff ...
        if from_right == w_passes_right_to_left {
            slot.before.push(token);
        } else {
            slot.after.push(token);
        }
    }

    // the old strand leaves Q on the left of h iff it passes right to left
    let exits_right = d.crossing(q_id).sign_from((h, hq)) < 0;
    let keep = exits_right != from_right;
    let mut q_replacement = None;
    if keep {
        let key = builder.push_key(if from_right { 1 } else { -1 });
        q_replacement = Some(Token { key, role: 0 });
        copy.push(Token { key, role: 1 });
    }

    for (x, route) in d.routes().iter().enumerate() {
        let mut out = Vec::with_capacity(route.len() + 2);
        for (i, &cid) in route.iter().enumerate() {
            let ins = inserts.remove(&(x, i));
            if let Some(ins) = &ins {
                out.extend_from_slice(&ins.before);
            }
            if x == g && i == gp {
                out.extend_from_slice(&copy);
            }
            if x == h && i == hq {
                out.extend(q_replacement);
            }
            if !deleted[cid] {
                let c = d.crossing(cid);
                let role = if (c.a, c.ai) == (x, i) { 0 } else { 1 };
                out.push(Token { key: cid, role });
            }
            if let Some(ins) = &ins {
                out.extend_from_slice(&ins.after);
            }
        }
        builder.routes[x] = out;
    }
    debug_assert!(inserts.is_empty());
    let out = builder.finish(d.graph().clone(), d.rotations().to_vec())?;
    Ok((out, keep))
}

/// Removes the loop of `e` between the two visits of its first
/// self-crossing, together with every crossing on that loop.
pub fn remove_self_crossings(d: &Drawing, e: EdgeId) -> Result<Drawing> {
    if e >= d.edge_count() {
        return Err(Error::Precondition(format!("unknown edge {e}")));
    }
    let route = d.route(e);
    let (i, j) = route
        .iter()
        .enumerate()
        .find_map(|(i, &c)| {
            let c = d.crossing(c);
            c.is_self().then(|| (i, c.other_slot((e, i)).1))
        })
        .ok_or_else(|| Error::Precondition(format!("edge {e} does not cross itself")))?;
    let (i, j) = (i.min(j), i.max(j));
    let mut deleted = vec![false; d.crossing_count()];
    for &c in &route[i..=j] {
        deleted[c] = true;
    }
    let mut builder = RouteBuilder::with_capacity(d.edge_count(), d.crossing_count());
    for c in d.crossings() {
        builder.push_key(c.sign);
    }
    for (x, r) in d.routes().iter().enumerate() {
        builder.routes[x] = r
            .iter()
            .enumerate()
            .filter(|(_, &cid)| !deleted[cid])
            .map(|(k, &cid)| {
                let c = d.crossing(cid);
                Token { key: cid, role: if (c.a, c.ai) == (x, k) { 0 } else { 1 } }
            })
            .collect();
    }
    builder.finish(d.graph().clone(), d.rotations().to_vec())
}

/// How much runtime checking the surgery loops do.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckLevel {
    Off,
    /// validate once per recursion level
    #[default]
    Level,
    /// validate after every surgery step
    Step,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    ReduceCrossings,
    RemoveSelfCrossings,
}

/// One applied move, in the JSON-lines step log format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub kind: StepKind,
    pub edges: Vec<EdgeId>,
    pub potential_before: Potential,
    pub potential_after: Potential,
    pub crossings_total: usize,
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub drawing: Drawing,
    pub steps: Vec<StepRecord>,
}

fn partner_sequence(d: &Drawing, e: EdgeId) -> Vec<EdgeId> {
    d.route(e).iter().enumerate().map(|(i, &c)| d.crossing(c).other_slot((e, i)).0).collect()
}

/// Next move: the smallest active edge with a self-crossing, otherwise the
/// lexicographically smallest active pair crossing at least twice.
fn next_move(d: &Drawing, active: &EdgeSet) -> Option<(StepKind, EdgeId, EdgeId)> {
    let mut selfs: Option<EdgeId> = None;
    let mut pairs: BTreeMap<(EdgeId, EdgeId), usize> = BTreeMap::new();
    for c in d.crossings() {
        if !active.contains(c.a) || !active.contains(c.b) {
            continue;
        }
        if c.a == c.b {
            selfs = Some(selfs.map_or(c.a, |s| s.min(c.a)));
        } else {
            *pairs.entry((c.a.min(c.b), c.a.max(c.b))).or_default() += 1;
        }
    }
    if let Some(e) = selfs {
        return Some((StepKind::RemoveSelfCrossings, e, e));
    }
    pairs
        .into_iter()
        .find(|&(_, count)| count >= 2)
        .map(|((e, f), _)| (StepKind::ReduceCrossings, e, f))
}

/// Applies the two moves to active edges until every active pair crosses at
/// most once and no active edge crosses itself.
pub fn normalize(d: &Drawing, col: &Coloring, active: &EdgeSet) -> Result<Normalized> {
    normalize_checked(d, col, active, CheckLevel::Level)
}

pub fn normalize_checked(d: &Drawing, col: &Coloring, active: &EdgeSet, check: CheckLevel) -> Result<Normalized> {
    if col.edge_count() != d.edge_count() {
        return Err(Error::Precondition("colouring sized for a different drawing".into()));
    }
    let (empty, crossing) = classify_edges(d, active)?;
    if let Some(e) = crossing.iter().find(|&e| col.get(e).is_none()) {
        return Err(Error::Precondition(format!("active crossing edge {e} is not coloured")));
    }
    let frozen: Vec<(EdgeId, Vec<EdgeId>)> =
        if check == CheckLevel::Step { empty.iter().map(|e| (e, partner_sequence(d, e))).collect() } else { Vec::new() };

    let mut current = d.clone();
    let mut steps = Vec::new();
    let mut before = potential(&current, col);
    while let Some((kind, e, f)) = next_move(&current, active) {
        let next = match kind {
            StepKind::RemoveSelfCrossings => remove_self_crossings(&current, e)?,
            StepKind::ReduceCrossings => reduce_crossings(&current, e, f, col)?,
        };
        let after = potential(&next, col);
        if after >= before {
            return Err(Error::Invariant(format!(
                "{kind:?} on ({e}, {f}) did not decrease the potential: {before:?} -> {after:?}"
            )));
        }
        if check == CheckLevel::Step {
            let report = validate_drawing(&next);
            if !report.ok {
                return Err(Error::Invariant(format!(
                    "{kind:?} on ({e}, {f}) produced an invalid drawing: {}",
                    report.violations[0]
                )));
            }
            for (edge, partners) in &frozen {
                if &partner_sequence(&next, *edge) != partners {
                    return Err(Error::Invariant(format!("{kind:?} on ({e}, {f}) touched empty edge {edge}")));
                }
            }
        }
        steps.push(StepRecord {
            step: steps.len(),
            kind,
            edges: if e == f { vec![e] } else { vec![e, f] },
            potential_before: before,
            potential_after: after,
            crossings_total: next.crossing_count(),
        });
        before = after;
        current = next;
    }
    if check != CheckLevel::Off && !steps.is_empty() {
        let report = validate_drawing(&current);
        if !report.ok {
            return Err(Error::InvalidDrawing(report.violations));
        }
    }
    Ok(Normalized { drawing: current, steps })
}
