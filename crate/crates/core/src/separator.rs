//! Intersection graphs of crossing edges and balanced vertex separators.
//!
//! The string graph `H` of a drawing has one vertex per crossing edge and
//! joins two vertices when the edges cross (shared endpoints do not count).
//! A separator splits `V(H)` into `F0 ∪ F1 ∪ F2` with `|F1|, |F2| ≤ ⌊2n/3⌋`
//! and no edge between `F1` and `F2`. Its quality is reported as the ratio
//! `|F0| / √m` over the `m` edges of `H`.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::drawing::{classify_edges, Drawing, EdgeId, EdgeSet};
use crate::error::{Error, Result};

pub const DEFAULT_EXACT_CAP: usize = 14;
pub const DEFAULT_RESTARTS: usize = 8;
/// Bitmask search works on one machine word.
const EXACT_CAP_LIMIT: usize = 30;

/// Intersection graph of the crossing edges of a drawing. Vertices are
/// indexed `0..n` locally; `labels[i]` is the drawing edge of vertex `i`,
/// ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StringGraph {
    pub labels: Vec<EdgeId>,
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl StringGraph {
    /// Builds a graph on `labels` (sorted, distinct) with edges given as
    /// label pairs.
    pub fn from_edges(labels: Vec<EdgeId>, edges: &[(EdgeId, EdgeId)]) -> Result<Self> {
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition("string graph labels must be strictly ascending".into()));
        }
        let index = |e: EdgeId| {
            labels
                .binary_search(&e)
                .map_err(|_| Error::Precondition(format!("edge {e} is not a vertex of the string graph")))
        };
        let mut adjacency = vec![Vec::new(); labels.len()];
        for &(a, b) in edges {
            let (i, j) = (index(a)?, index(b)?);
            if i == j {
                continue;
            }
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        let mut edge_count = 0;
        for adj in &mut adjacency {
            adj.sort_unstable();
            adj.dedup();
            edge_count += adj.len();
        }
        Ok(Self { labels, adjacency, edge_count: edge_count / 2 })
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edge list as label pairs, each listed once with the smaller first.
    pub fn edges(&self) -> Vec<(EdgeId, EdgeId)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, adj) in self.adjacency.iter().enumerate() {
            for &v in adj.iter().filter(|&&v| v > u) {
                out.push((self.labels[u], self.labels[v]));
            }
        }
        out
    }

    fn local(&self, label: EdgeId) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }
}

/// Vertices are the active crossing edges; two are adjacent iff the edges
/// cross at least once.
pub fn string_graph(d: &Drawing, active: &EdgeSet) -> Result<StringGraph> {
    let (_, crossing) = classify_edges(d, active)?;
    let labels: Vec<EdgeId> = crossing.iter().collect();
    let pairs: Vec<(EdgeId, EdgeId)> = d
        .crossings()
        .iter()
        .filter(|c| c.a != c.b && active.contains(c.a) && active.contains(c.b))
        .map(|c| (c.a, c.b))
        .collect();
    StringGraph::from_edges(labels, &pairs)
}

fn serialize_ratio<S: Serializer>(r: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if r.is_finite() {
        s.serialize_f64(*r)
    } else {
        s.serialize_str("inf")
    }
}

/// A partition `F0 ∪ F1 ∪ F2` of a string graph, by drawing edge labels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparatorResult {
    pub f0: Vec<EdgeId>,
    pub f1: Vec<EdgeId>,
    pub f2: Vec<EdgeId>,
    /// `|F0| / √m`; 0 for an empty separator of an edgeless graph, infinite
    /// for a non-empty one
    #[serde(serialize_with = "serialize_ratio")]
    pub ratio: f64,
    /// `max(|F1|, |F2|) / n`
    pub balance: f64,
    pub method: String,
}

pub fn separator_ratio(separator_size: usize, edges: usize) -> f64 {
    if edges == 0 {
        if separator_size == 0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        separator_size as f64 / (edges as f64).sqrt()
    }
}

/// Largest side allowed for `n` vertices.
pub fn side_limit(n: usize) -> usize {
    2 * n / 3
}

fn result_from_local(h: &StringGraph, f0: &[usize], f1: &[usize], f2: &[usize], method: &str) -> SeparatorResult {
    let map = |xs: &[usize]| {
        let mut v: Vec<EdgeId> = xs.iter().map(|&i| h.labels[i]).collect();
        v.sort_unstable();
        v
    };
    let n = h.vertex_count();
    SeparatorResult {
        f0: map(f0),
        f1: map(f1),
        f2: map(f2),
        ratio: separator_ratio(f0.len(), h.edge_count()),
        balance: if n == 0 { 0.0 } else { f1.len().max(f2.len()) as f64 / n as f64 },
        method: method.to_string(),
    }
}

fn bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// Connected components of the subgraph induced by `mask`, as masks in
/// order of their smallest vertex.
fn components_mask(nbr: &[u64], mask: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut left = mask;
    while left != 0 {
        let start = left & left.wrapping_neg();
        let mut comp = start;
        let mut frontier = start;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = nbr[v] & mask & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        out.push(comp);
        left &= !comp;
    }
    out
}

fn subset_sum_feasible(sizes: &[usize], total: usize, limit: usize) -> bool {
    let mut reach = vec![false; total + 1];
    reach[0] = true;
    for &s in sizes {
        for t in (s..=total).rev() {
            if reach[t - s] {
                reach[t] = true;
            }
        }
    }
    (total.saturating_sub(limit)..=limit.min(total)).any(|t| reach[t])
}

/// Lexicographic order on ascending index lists.
fn lex_less(a: &[usize], b: &[usize]) -> bool {
    a < b
}

/// Minimum-cardinality separator by exhaustive search: candidate `F0` sets in
/// increasing size (lexicographic within a size); the rest is split by
/// packing whole components. Ties pick the lexicographically smallest `F0`,
/// then the lexicographically smallest `F1`.
pub fn exact_separator(h: &StringGraph, cap: usize) -> Result<SeparatorResult> {
    let n = h.vertex_count();
    if n > cap.min(EXACT_CAP_LIMIT) {
        return Err(Error::CapExceeded { vertices: n, cap: cap.min(EXACT_CAP_LIMIT) });
    }
    let nbr: Vec<u64> = (0..n).map(|v| h.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u)).collect();
    let full: u64 = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let limit = side_limit(n);
    for size in 0..=n {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let f0 = combo.iter().fold(0u64, |m, &v| m | 1 << v);
            let rest = full & !f0;
            let comps = components_mask(&nbr, rest);
            let sizes: Vec<usize> = comps.iter().map(|c| c.count_ones() as usize).collect();
            let total = n - size;
            if subset_sum_feasible(&sizes, total, limit) {
                let mut best: Option<Vec<usize>> = None;
                for pick in 0u64..(1u64 << comps.len()) {
                    let f1 = comps.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).fold(0u64, |m, (_, c)| m | c);
                    let s1 = f1.count_ones() as usize;
                    if s1 > limit || total - s1 > limit {
                        continue;
                    }
                    let f1v = bits(f1);
                    if best.as_ref().is_none_or(|b| lex_less(&f1v, b)) {
                        best = Some(f1v);
                    }
                }
                let f1v = best.expect("subset sum said a split exists");
                let f1 = f1v.iter().fold(0u64, |m, &v| m | 1 << v);
                return Ok(result_from_local(h, &combo, &f1v, &bits(rest & !f1), "exact"));
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }
    unreachable!("F0 = V(H) always separates")
}

/// Advances to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HeuristicParams {
    pub restarts: usize,
    pub seed: u64,
}

impl Default for HeuristicParams {
    fn default() -> Self {
        Self { restarts: DEFAULT_RESTARTS, seed: 0 }
    }
}

/// Components of `H - removed`, largest first (ties by smallest vertex).
fn components(h: &StringGraph, removed: &[bool]) -> Vec<Vec<usize>> {
    let n = h.vertex_count();
    let mut seen = removed.to_vec();
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &u in h.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                    queue.push_back(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    out
}

/// Splits components into two sides of at most `limit` vertices each:
/// first-fit by descending size, falling back to a subset-sum search.
fn pack(comps: &[Vec<usize>], limit: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let (mut a, mut b) = (Vec::new(), Vec::new());
    let mut fits = true;
    for c in comps {
        if a.len() + c.len() <= limit {
            a.extend_from_slice(c);
        } else if b.len() + c.len() <= limit {
            b.extend_from_slice(c);
        } else {
            fits = false;
            break;
        }
    }
    if fits {
        a.sort_unstable();
        b.sort_unstable();
        return Some((a, b));
    }
    let total: usize = comps.iter().map(Vec::len).sum();
    // reach[t] = index of the component that first reached sum t
    let mut reach: Vec<Option<usize>> = vec![None; total + 1];
    let mut ok = vec![false; total + 1];
    ok[0] = true;
    for (i, c) in comps.iter().enumerate() {
        for t in (c.len()..=total).rev() {
            if !ok[t] && ok[t - c.len()] {
                ok[t] = true;
                reach[t] = Some(i);
            }
        }
    }
    let target = (total.saturating_sub(limit)..=limit.min(total))
        .filter(|&t| ok[t])
        .min_by_key(|&t| t.max(total - t))?;
    let mut take = vec![false; comps.len()];
    let mut t = target;
    while t > 0 {
        let i = reach[t].expect("reachable sum has a witness");
        take[i] = true;
        t -= comps[i].len();
    }
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (i, c) in comps.iter().enumerate() {
        if take[i] {
            a.extend_from_slice(c);
        } else {
            b.extend_from_slice(c);
        }
    }
    a.sort_unstable();
    b.sort_unstable();
    Some((a, b))
}

fn bfs_order(h: &StringGraph, comp_mask: &[bool], start: usize) -> Vec<usize> {
    let mut seen = vec![false; h.vertex_count()];
    seen[start] = true;
    let mut order = vec![start];
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &u in h.neighbors(v) {
            if comp_mask[u] && !seen[u] {
                seen[u] = true;
                order.push(u);
            }
        }
    }
    order
}

/// Minimum vertex cut separating `sources` from `sinks` inside `comp_mask`,
/// by unit-capacity augmenting paths on the split-vertex network.
fn min_vertex_cut(h: &StringGraph, comp_mask: &[bool], sources: &[bool], sinks: &[bool]) -> Vec<usize> {
    const INF: i32 = i32::MAX / 2;
    let n = h.vertex_count();
    // node 2v = v_in, 2v+1 = v_out, 2n = source, 2n+1 = sink
    let (src, snk) = (2 * n, 2 * n + 1);
    let mut to: Vec<usize> = Vec::new();
    let mut cap: Vec<i32> = Vec::new();
    let mut head: Vec<Vec<usize>> = vec![Vec::new(); 2 * n + 2];
    let mut add = |u: usize, v: usize, c: i32, to: &mut Vec<usize>, cap: &mut Vec<i32>| {
        head[u].push(to.len());
        to.push(v);
        cap.push(c);
        head[v].push(to.len());
        to.push(u);
        cap.push(0);
    };
    for v in (0..n).filter(|&v| comp_mask[v]) {
        let c = if sources[v] || sinks[v] { INF } else { 1 };
        add(2 * v, 2 * v + 1, c, &mut to, &mut cap);
        for &u in h.neighbors(v) {
            if comp_mask[u] {
                add(2 * v + 1, 2 * u, INF, &mut to, &mut cap);
            }
        }
        if sources[v] {
            add(src, 2 * v, INF, &mut to, &mut cap);
        }
        if sinks[v] {
            add(2 * v + 1, snk, INF, &mut to, &mut cap);
        }
    }
    let nodes = 2 * n + 2;
    let reachable = loop {
        let mut prev: Vec<Option<usize>> = vec![None; nodes];
        let mut seen = vec![false; nodes];
        seen[src] = true;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &arc in &head[u] {
                let v = to[arc];
                if cap[arc] > 0 && !seen[v] {
                    seen[v] = true;
                    prev[v] = Some(arc);
                    queue.push_back(v);
                }
            }
        }
        if !seen[snk] {
            break seen;
        }
        let mut v = snk;
        while let Some(arc) = prev[v] {
            cap[arc] -= 1;
            cap[arc ^ 1] += 1;
            v = to[arc ^ 1];
        }
    };
    (0..n).filter(|&v| comp_mask[v] && reachable[2 * v] && !reachable[2 * v + 1]).collect()
}

/// Adds vertices of the oversized component `comp` to the separator.
fn cut_component(h: &StringGraph, comp: &[usize], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = h.vertex_count();
    let mut mask = vec![false; n];
    for &v in comp {
        mask[v] = true;
    }
    let start = comp[rng.gen_range(0..comp.len())];
    let s = *bfs_order(h, &mask, start).last().expect("non-empty component");
    let from_s = bfs_order(h, &mask, s);
    let t = *from_s.last().expect("non-empty component");
    let from_t = bfs_order(h, &mask, t);
    if s == t || h.has_edge(s, t) {
        // dense piece: drop a highest-degree vertex
        let deg = |v: usize| h.neighbors(v).iter().filter(|&&u| mask[u]).count();
        let best = comp.iter().copied().max_by_key(|&v| (deg(v), std::cmp::Reverse(v))).expect("non-empty");
        return vec![best];
    }
    // grow balls around s and t while they stay apart
    let mut q = (comp.len() / 3).max(1);
    loop {
        let mut sources = vec![false; n];
        let mut sinks = vec![false; n];
        for &v in from_s.iter().take(q) {
            sources[v] = true;
        }
        for &v in from_t.iter().take(q) {
            sinks[v] = true;
        }
        let touching = (0..n).any(|v| sources[v] && (sinks[v] || h.neighbors(v).iter().any(|&u| sinks[u])));
        if !touching || q == 1 {
            return min_vertex_cut(h, &mask, &sources, &sinks);
        }
        q = (q * 2 / 3).max(1);
    }
}

fn heuristic_once(h: &StringGraph, rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let n = h.vertex_count();
    let limit = side_limit(n);
    let mut removed = vec![false; n];
    let (mut f1, mut f2) = loop {
        let comps = components(h, &removed);
        if let Some(split) = pack(&comps, limit) {
            break split;
        }
        let biggest = &comps[0];
        for v in cut_component(h, biggest, rng) {
            removed[v] = true;
        }
    };
    // return separator vertices whose remaining neighbours sit on one side
    let mut side = vec![0u8; n];
    for &v in &f1 {
        side[v] = 1;
    }
    for &v in &f2 {
        side[v] = 2;
    }
    let mut changed = true;
    while changed {
        changed = false;
        for v in 0..n {
            if side[v] != 0 {
                continue;
            }
            let touches = |s: u8| h.neighbors(v).iter().any(|&u| side[u] == s);
            for (s, len) in [(1u8, f1.len()), (2u8, f2.len())] {
                let other = 3 - s;
                if !touches(other) && len < limit {
                    side[v] = s;
                    if s == 1 {
                        f1.push(v);
                    } else {
                        f2.push(v);
                    }
                    changed = true;
                    break;
                }
            }
        }
    }
    let f0: Vec<usize> = (0..n).filter(|&v| side[v] == 0).collect();
    f1.sort_unstable();
    f2.sort_unstable();
    (f0, f1, f2)
}

/// Min-cut based separator: best of `restarts` seeded runs by `(|F0|, F0,
/// F1)`. Always valid; its size is measured, not guaranteed.
pub fn heuristic_separator(h: &StringGraph, params: &HeuristicParams) -> SeparatorResult {
    let mut best: Option<(Vec<usize>, Vec<usize>, Vec<usize>)> = None;
    for r in 0..params.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed.wrapping_add((r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        let cand = heuristic_once(h, &mut rng);
        let better = match &best {
            None => true,
            Some(b) => (cand.0.len(), &cand.0, &cand.1) < (b.0.len(), &b.0, &b.1),
        };
        if better {
            best = Some(cand);
        }
    }
    let (f0, f1, f2) = best.expect("at least one restart");
    result_from_local(h, &f0, &f1, &f2, "heuristic:mincut")
}

/// Exact search when `H` has at most `cap` vertices, heuristic otherwise.
pub fn find_separator(h: &StringGraph, cap: usize, params: &HeuristicParams) -> SeparatorResult {
    match exact_separator(h, cap) {
        Ok(s) => s,
        Err(_) => heuristic_separator(h, params),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparatorCheck {
    pub ok: bool,
    pub violations: Vec<String>,
    #[serde(serialize_with = "serialize_ratio")]
    pub ratio: f64,
}

/// Checks that `s` partitions `V(H)`, respects the `⌊2n/3⌋` side limit and
/// has no edge between `F1` and `F2`; recomputes the ratio.
pub fn verify_separator(h: &StringGraph, s: &SeparatorResult) -> SeparatorCheck {
    let n = h.vertex_count();
    let mut violations = Vec::new();
    let mut part = vec![None; n];
    for (name, set, tag) in [("F0", &s.f0, 0u8), ("F1", &s.f1, 1), ("F2", &s.f2, 2)] {
        for &label in set {
            match h.local(label) {
                None => violations.push(format!("partition: {name} lists edge {label}, not a vertex of H")),
                Some(i) => {
                    if part[i].is_some() {
                        violations.push(format!("partition: edge {label} assigned twice"));
                    }
                    part[i] = Some(tag);
                }
            }
        }
    }
    for (i, p) in part.iter().enumerate() {
        if p.is_none() {
            violations.push(format!("partition: edge {} is in no part", h.labels[i]));
        }
    }
    let limit = side_limit(n);
    for (name, set) in [("F1", &s.f1), ("F2", &s.f2)] {
        if set.len() > limit {
            violations.push(format!("balance: |{name}| = {} exceeds ⌊2n/3⌋ = {limit}", set.len()));
        }
    }
    for (u, adj) in h.adjacency.iter().enumerate() {
        for &v in adj {
            if part[u] == Some(1) && part[v] == Some(2) {
                violations.push(format!("cross edge: {} in F1 crosses {} in F2", h.labels[u], h.labels[v]));
            }
        }
    }
    SeparatorCheck {
        ok: violations.is_empty(),
        violations,
        ratio: separator_ratio(s.f0.len(), h.edge_count()),
    }
}
