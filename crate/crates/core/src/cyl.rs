//! Disjoint edges in complete monotone cylindrical drawings.
//!
//! The solver cuts the cylinder into vertical slabs of `k` vertices. If
//! enough slabs contain an edge, one edge per slab is returned. Otherwise a
//! slab without a contained edge induces a flag once the cut line is moved
//! to its left boundary; a proper matching `e_1, ..., e_a` of that flag
//! sorts the remaining vertices into layers `V_1, ..., V_{a+1}`, and the
//! union of the layers above a split index `s` induces a drawing whose
//! edges avoid every edge induced below `s`. The two sides are solved
//! recursively.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::bounds::{paper_f, FInterval, PaperParams};
use crate::flag::{check_proper, check_structure, flag_matching, flag_matching_visit, FlagError, ProperMatching};
use crate::geometry::{crossings, recut, CrossingTable, Drawing, EdgeKey, RecutError, VertexId, Wrap};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// Heuristic thresholds that keep every correctness invariant.
    #[default]
    Practical,
    /// The asymptotic thresholds; only meaningful above `n0`.
    Paper,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("no event-free cut between x-order positions {0} and {1}")]
    NoValidCut(usize, usize),
    #[error("vertex {0} is not related to a matching edge")]
    UnrelatedVertex(VertexId),
    #[error("paper mode needs parameters")]
    ParamsRequired,
    #[error("paper mode is vacuous for n = {n} <= n0 = {n0}: f(n) <= 1")]
    PaperModeVacuous { n: usize, n0: BigUint },
    #[error("drawing is not complete")]
    NotComplete,
    #[error("consecutive vertices {0} and {1} are joined by a circular edge")]
    WrappingPair(VertexId, VertexId),
    #[error("flag step: {0}")]
    Flag(#[from] FlagError),
    #[error("recut: {0}")]
    Recut(#[from] RecutError),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("output edges {0:?} and {1:?} intersect")]
    NotDisjoint(EdgeKey, EdgeKey),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum SplitError {
    #[error("paper mode needs parameters")]
    ParamsRequired,
    #[error("no split index and no bridging edge")]
    NoSplit,
}

/// Vertical cuts `a_0 = 0 < a_1 < ...` and the vertices between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlabPartition {
    pub k: usize,
    pub cuts: Vec<Rational>,
    /// Part `t` lies between `cuts[t]` and `cuts[t+1]` (or 1), ids in x order.
    pub parts: Vec<Vec<VertexId>>,
}

fn event_xs(d: &Drawing) -> Vec<Rational> {
    let mut xs: Vec<Rational> = d.edges().iter().flat_map(|e| e.points.iter().map(|p| p.x.fract())).collect();
    xs.extend(d.vertices().iter().map(|v| v.x));
    xs.sort_unstable();
    xs.dedup();
    xs
}

/// No two edges meet the vertical line at `a`.
fn crossing_free_at(d: &Drawing, a: Rational) -> bool {
    let mut ys: Vec<Rational> = d.edges().iter().filter_map(|e| e.eval_at(a)).collect();
    ys.sort_unstable();
    ys.windows(2).all(|w| w[0] != w[1])
}

const DYADIC: [(i128, i128); 7] = [(1, 2), (1, 4), (3, 4), (1, 8), (3, 8), (5, 8), (7, 8)];

/// An event-free x strictly between two consecutive vertex x-coordinates.
fn pick_cut(d: &Drawing, events: &[Rational], lo: Rational, hi: Rational) -> Option<Rational> {
    let a = events.partition_point(|&x| x <= lo);
    let b = events.partition_point(|&x| x < hi);
    let mut stops = vec![lo];
    stops.extend_from_slice(&events[a..b]);
    stops.push(hi);
    let mut gaps: Vec<(Rational, Rational)> = stops.windows(2).map(|w| (w[0], w[1])).collect();
    // widest first, leftmost among equals
    gaps.sort_by(|p, q| (q.1 - q.0).cmp(&(p.1 - p.0)).then(p.0.cmp(&q.0)));
    for (l, r) in gaps {
        for &(num, den) in &DYADIC {
            let x = l + (r - l) * Rational::new(num, den);
            if crossing_free_at(d, x) {
                return Some(x);
            }
        }
    }
    None
}

fn parts_of(d: &Drawing, k: usize) -> Vec<Vec<VertexId>> {
    d.vertices().chunks(k).map(|c| c.iter().map(|v| v.id).collect()).collect()
}

/// An event-free cut just left of x-order position `start`.
fn cut_before(d: &Drawing, events: &[Rational], start: usize) -> Result<Rational, SolveError> {
    if start == 0 {
        return Ok(Rational::ZERO);
    }
    let vs = d.vertices();
    pick_cut(d, events, vs[start - 1].x, vs[start].x).ok_or(SolveError::NoValidCut(start - 1, start))
}

/// Cuts the drawing into `ceil(n/k)` slabs of `k` vertices each, the last
/// one possibly smaller, with every cut free of vertices, breakpoints and
/// crossings.
pub fn slab_partition(d: &Drawing, k: usize) -> Result<SlabPartition, SolveError> {
    assert!(2 <= k && k <= d.n(), "need 2 <= k <= n");
    let events = event_xs(d);
    let cuts = (0..d.n()).step_by(k).map(|start| cut_before(d, &events, start)).collect::<Result<_, _>>()?;
    Ok(SlabPartition { k, cuts, parts: parts_of(d, k) })
}

/// The lowest-index edge lying inside the part's strip. Parts are runs of
/// consecutive vertices not straddling `x = 0`, so these are exactly the
/// direct edges between two of its vertices.
pub fn contained_edge(d: &Drawing, part: &[VertexId]) -> Option<EdgeKey> {
    let mut best: Option<usize> = None;
    for (a, &u) in part.iter().enumerate() {
        for &w in &part[a + 1..] {
            if let Some(i) = d.edge_index(u, w) {
                if d.edges()[i].wrap == Wrap::Direct && best.is_none_or(|b| i < b) {
                    best = Some(i);
                }
            }
        }
    }
    best.map(|i| d.edges()[i].key())
}

/// The vertices outside a flag, sorted by the flag's matching edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerDecomposition {
    /// Vertex count of the drawing being split.
    pub n: usize,
    pub flag: Vec<VertexId>,
    /// Bottom to top at the cut line.
    pub matching: Vec<EdgeKey>,
    /// `layers[i]` is below `matching[i]` and above `matching[i-1]`.
    pub layers: Vec<Vec<VertexId>>,
}

impl LayerDecomposition {
    pub fn alpha(&self) -> usize {
        self.matching.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }
}

/// Sorts the non-flag vertices of `r` into layers. `r` must have its cut at
/// the flag's left boundary, so every other vertex lies right of the flag
/// and every matching edge passes over it.
pub fn layers(r: &Drawing, flag: &[VertexId], m: &ProperMatching) -> Result<LayerDecomposition, SolveError> {
    let in_flag: HashSet<VertexId> = flag.iter().copied().collect();
    let curves: Vec<_> = m.edges.iter().map(|&(a, b)| r.edge(a, b).expect("matching edge of r")).collect();
    let mut out = vec![Vec::new(); curves.len() + 1];
    for w in r.vertices().iter().filter(|w| !in_flag.contains(&w.id)) {
        let y_at = |i: usize| curves[i].eval_at(w.x).ok_or(SolveError::UnrelatedVertex(w.id));
        // number of matching edges below w
        let (mut lo, mut hi) = (0, curves.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            let y = y_at(mid)?;
            if y == w.y {
                return Err(SolveError::UnrelatedVertex(w.id));
            }
            if y < w.y {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        out[lo].push(w.id);
    }
    Ok(LayerDecomposition { n: r.n(), flag: flag.to_vec(), matching: m.edges.clone(), layers: out })
}

/// Split index or bridging edge, 1-based as `e_i` and `V_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanChoice {
    /// Recurse on the layers above `s` and below `s`.
    Split(usize),
    /// Keep `e_i`, recurse on the layers below `i` and above `i + 1`.
    Bridge(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitPlan {
    pub mode: Mode,
    pub choice: PlanChoice,
    pub bridge: Option<EdgeKey>,
    pub u: Vec<VertexId>,
    pub w: Vec<VertexId>,
}

fn ceil_sqrt(n: usize) -> usize {
    let r = n.sqrt();
    if r * r < n { r + 1 } else { r }
}

fn rat(n: usize) -> BigRational {
    BigRational::from_integer(n.into())
}

/// The plan decision on layer sizes alone. `n` is the vertex count of the
/// drawing being split.
pub fn plan_sizes(sizes: &[usize], n: usize, mode: Mode, params: Option<&PaperParams>) -> Result<PlanChoice, SplitError> {
    let alpha = sizes.len().saturating_sub(1);
    match mode {
        Mode::Practical => {
            let t = ceil_sqrt(n);
            if let Some(i) = (0..alpha).find(|&i| 10 * t * (sizes[i] + sizes[i + 1]) <= n) {
                return Ok(PlanChoice::Bridge(i + 1));
            }
            if alpha < 2 {
                return Err(SplitError::NoSplit);
            }
            let total: usize = sizes.iter().sum();
            let mut below = 0;
            let mut s = 1;
            while 2 * below < total {
                below += sizes[s - 1];
                s += 1;
            }
            Ok(PlanChoice::Split(s.clamp(2, alpha)))
        }
        Mode::Paper => {
            let params = params.ok_or(SplitError::ParamsRequired)?;
            let f = paper_f(params, &BigUint::from(n));
            let nn = rat(n);
            let bridge = |sz: usize| rat(10 * sz) * &f.hi <= nn;
            if let Some(i) = (0..alpha).find(|&i| bridge(sizes[i] + sizes[i + 1])) {
                return Ok(PlanChoice::Bridge(i + 1));
            }
            let mut order: Vec<usize> = (0..sizes.len()).collect();
            order.sort_by_key(|&i| (sizes[i], i));
            let cap = rat(100_000) * &f.lo;
            let member = |p: usize| {
                let sz = sizes[order[p]];
                nn <= rat(20 * sz) * &f.lo && rat(sz) <= cap
            };
            let l = (0..order.len().saturating_sub(2))
                .find(|&l| member(l) && member(l + 1) && member(l + 2) && sizes[order[l + 2]] <= 2 * sizes[order[l]])
                .ok_or(SplitError::NoSplit)?;
            let mut z = [order[l], order[l + 1], order[l + 2]];
            z.sort_unstable();
            Ok(PlanChoice::Split(z[1] + 1))
        }
    }
}

/// Chooses how to split a layer decomposition.
pub fn choose_split(l: &LayerDecomposition, mode: Mode, params: Option<&PaperParams>) -> Result<SplitPlan, SplitError> {
    let choice = plan_sizes(&l.sizes(), l.n, mode, params)?;
    let union = |r: std::ops::Range<usize>| -> Vec<VertexId> { l.layers[r].iter().flatten().copied().collect() };
    let last = l.layers.len();
    Ok(match choice {
        PlanChoice::Split(s) => SplitPlan { mode, choice, bridge: None, u: union(s..last), w: union(0..s - 1) },
        PlanChoice::Bridge(i) => SplitPlan {
            mode,
            choice,
            bridge: Some(l.matching[i - 1]),
            u: union((i + 1).min(last)..last),
            w: union(0..i - 1),
        },
    })
}

/// The edges `v_1v_2, v_3v_4, ...` of consecutive vertices in x order.
pub fn greedy_monotone(d: &Drawing) -> Result<Vec<EdgeKey>, SolveError> {
    let vs = d.vertices();
    let mut out = Vec::with_capacity(vs.len() / 2);
    for pair in vs.chunks_exact(2) {
        let e = d.edge(pair[0].id, pair[1].id).ok_or(SolveError::NotComplete)?;
        if e.is_circular() {
            return Err(SolveError::WrappingPair(pair[0].id, pair[1].id));
        }
        out.push(e.key());
    }
    Ok(out)
}

/// Edges joining x-consecutive vertices without passing any other vertex:
/// direct edges `v_i v_{i+1}` and a circular edge `v_n v_1`. Vertex-disjoint
/// ones occupy disjoint x-ranges.
fn gap_edges(d: &Drawing) -> Vec<EdgeKey> {
    let n = d.n();
    let mut used = vec![false; n];
    let mut out = Vec::new();
    let mut take = |i: usize, j: usize, want: Wrap, out: &mut Vec<EdgeKey>| {
        if let Some(e) = d.edge_at(i, j) {
            if e.wrap == want && !used[i] && !used[j] {
                used[i] = true;
                used[j] = true;
                out.push(e.key());
            }
        }
    };
    for i in 0..n.saturating_sub(1) {
        take(i, i + 1, Wrap::Direct, &mut out);
    }
    if n > 2 {
        take(0, n - 1, Wrap::Circular, &mut out);
    }
    if out.is_empty() && n >= 2 {
        out.push(d.edges()[0].key());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SolveConfig {
    pub mode: Mode,
    /// Slab size; the mode's rule when absent.
    pub k: Option<usize>,
    pub params: Option<PaperParams>,
    /// Recheck every structure, proper matching, layer order and split.
    pub verify: bool,
}

/// Counters describing one run.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SolveStats {
    pub calls: u64,
    pub max_depth: usize,
    pub slab_returns: u64,
    pub greedy_returns: u64,
    pub base_returns: u64,
    pub flags: u64,
    pub splits: u64,
    pub bridges: u64,
    pub fallbacks: u64,
    /// Practical mode: a flag matching (of the drawing or of the slab) beat
    /// the recursion.
    pub matching_returns: u64,
    /// Verify mode: structures rechecked and edge pairs examined for them.
    pub structures_checked: u64,
    pub structure_pairs: u64,
    /// Verify mode: split indices rechecked and edge pairs examined.
    pub split_indices_checked: u64,
    pub split_pairs: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    /// Pairwise disjoint edges, in the drawing's edge order.
    pub edges: Vec<EdgeKey>,
    pub stats: SolveStats,
}

struct Ctx<'a> {
    top: &'a Drawing,
    cfg: &'a SolveConfig,
    table: Option<CrossingTable>,
    stats: SolveStats,
}

fn verification(msg: String) -> SolveError {
    SolveError::Verification(msg)
}

impl Ctx<'_> {
    fn f_of(&self, n: usize) -> FInterval {
        paper_f(self.cfg.params.as_ref().expect("checked at entry"), &BigUint::from(n))
    }

    /// Slab size and slab-collection threshold (as a rational) for `n`.
    fn k_and_threshold(&self, n: usize) -> (usize, BigRational) {
        match self.cfg.mode {
            Mode::Practical => {
                let k = self.cfg.k.unwrap_or_else(|| ceil_sqrt(n).max(10));
                (k, rat(ceil_sqrt(n)))
            }
            Mode::Paper => {
                let f = self.f_of(n);
                let k = (rat(n) / (rat(10) * &f.hi)).floor().to_integer().to_usize().unwrap_or(n);
                (self.cfg.k.unwrap_or(k).clamp(2, n), f.hi)
            }
        }
    }

    fn edge_ix(&self, k: EdgeKey) -> usize {
        self.top.edge_index(k.0, k.1).expect("edge of the input drawing")
    }

    fn solve(&mut self, d: &Drawing, depth: usize) -> Result<Vec<EdgeKey>, SolveError> {
        self.stats.calls += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let n = d.n();
        if n < 2 {
            return Ok(Vec::new());
        }
        if d.is_wrap_free() {
            self.stats.greedy_returns += 1;
            return greedy_monotone(d);
        }
        if self.cfg.mode == Mode::Paper && BigUint::from(n) <= self.cfg.params.as_ref().expect("checked").n0 {
            self.stats.base_returns += 1;
            return Ok(vec![d.edges()[0].key()]);
        }
        let slabs = self.solve_slabs(d, depth)?;
        if self.cfg.mode == Mode::Practical && d.is_flag() {
            let m = flag_matching(d)?;
            if m.len() > slabs.len() {
                self.stats.matching_returns += 1;
                return Ok(m.edges);
            }
        }
        Ok(slabs)
    }

    fn solve_slabs(&mut self, d: &Drawing, depth: usize) -> Result<Vec<EdgeKey>, SolveError> {
        let n = d.n();
        let (k, threshold) = self.k_and_threshold(n);
        if n < k + 2 {
            self.stats.base_returns += 1;
            return Ok(gap_edges(d));
        }
        // only the empty slab's left cut is ever used, so the others are not placed
        let parts = parts_of(d, k);
        let collected: Vec<EdgeKey> = parts.iter().filter_map(|p| contained_edge(d, p)).collect();
        if rat(collected.len()) >= threshold {
            self.stats.slab_returns += 1;
            return Ok(collected);
        }
        let Some(t) = (0..parts.len()).find(|&t| parts[t].len() == k && contained_edge(d, &parts[t]).is_none()) else {
            self.stats.slab_returns += 1;
            return Ok(collected);
        };
        let cut = cut_before(d, &event_xs(d), t * k)?;
        let found = self.split(d, &parts[t], cut, depth)?;
        if self.cfg.mode == Mode::Practical && collected.len() >= found.len() {
            self.stats.slab_returns += 1;
            return Ok(collected);
        }
        Ok(found)
    }

    fn split(&mut self, d: &Drawing, slab: &[VertexId], cut: Rational, depth: usize) -> Result<Vec<EdgeKey>, SolveError> {
        self.stats.flags += 1;
        let r = recut(d, cut)?;
        let flag = r.induced(slab);
        debug_assert!(flag.is_flag());
        let verify = self.cfg.verify;
        let mut structures = Vec::new();
        let m = flag_matching_visit(&flag, &mut |fd, view, s| {
            if verify {
                structures.push((fd.clone(), view.to_vec(), *s));
            }
        })?;
        if verify {
            for (fd, view, s) in &structures {
                let c = check_structure(fd, view, s)?;
                self.stats.structures_checked += 1;
                self.stats.structure_pairs += c.pairs;
                if let Some(&(a, b)) = c.violations.first() {
                    return Err(verification(format!("{s}: edges {a:?} and {b:?} intersect or are unrelated")));
                }
            }
            let pc = check_proper(&flag, &m);
            if !pc.ok {
                return Err(verification(format!("matching not proper: {:?}", pc.violations[0])));
            }
        }
        let l = layers(&r, slab, &m)?;
        if verify {
            self.check_layer_order(&r, &l)?;
            self.check_all_splits(&l)?;
        }
        // matching keys follow r's orientation; report them in d's
        let norm = |k: EdgeKey| d.edge(k.0, k.1).expect("edge of d").key();
        let mut out = match choose_split(&l, self.cfg.mode, self.cfg.params.as_ref()) {
            Ok(plan) => {
                let mut out = self.solve(&d.induced(&plan.u), depth + 1)?;
                out.extend(self.solve(&d.induced(&plan.w), depth + 1)?);
                match plan.bridge {
                    Some(e) => {
                        self.stats.bridges += 1;
                        out.push(norm(e));
                    }
                    None => self.stats.splits += 1,
                }
                out
            }
            Err(SplitError::ParamsRequired) => return Err(SolveError::ParamsRequired),
            Err(SplitError::NoSplit) => {
                self.stats.fallbacks += 1;
                let big = (0..l.layers.len()).max_by_key(|&i| (l.layers[i].len(), usize::MAX - i)).unwrap_or(0);
                let mut out = self.solve(&d.induced(&l.layers[big]), depth + 1)?;
                if let Some(&e1) = l.matching.first() {
                    let e1 = norm(e1);
                    let curve = d.edge(e1.0, e1.1).expect("edge of d");
                    let clear = out.iter().all(|&k| {
                        let g = d.edge(k.0, k.1).expect("edge of d");
                        !g.shares_endpoint(curve) && matches!(crossings(curve, g), Ok(xs) if xs.is_empty())
                    });
                    if clear {
                        out.push(e1);
                    }
                }
                out
            }
        };
        if out.is_empty() {
            out.push(norm(l.matching[0]));
        }
        if self.cfg.mode == Mode::Practical && m.len() > out.len() {
            self.stats.matching_returns += 1;
            return Ok(m.edges.iter().map(|&k| norm(k)).collect());
        }
        Ok(out)
    }

    /// The matching edges keep their cut-line order over every layered vertex.
    fn check_layer_order(&self, r: &Drawing, l: &LayerDecomposition) -> Result<(), SolveError> {
        let curves: Vec<_> = l.matching.iter().map(|&(a, b)| r.edge(a, b).expect("matching edge")).collect();
        for w in l.layers.iter().flatten() {
            let x = r.vertex(*w).expect("layered vertex").x;
            let ys: Vec<Rational> =
                curves.iter().map(|c| c.eval_at(x).ok_or(SolveError::UnrelatedVertex(*w))).collect::<Result<_, _>>()?;
            if ys.windows(2).any(|p| p[0] >= p[1]) {
                return Err(verification(format!("matching edges change order over vertex {w}")));
            }
        }
        Ok(())
    }

    /// For every split index, edges induced above it avoid edges induced
    /// below it, `e_{s-1}` avoids the upper ones and `e_s` the lower ones.
    fn check_all_splits(&mut self, l: &LayerDecomposition) -> Result<(), SolveError> {
        if self.table.is_none() {
            let t = CrossingTable::build(self.top).map_err(|v| verification(format!("input drawing invalid: {}", v[0])))?;
            self.table = Some(t);
        }
        let table = self.table.as_ref().expect("built above");
        let alpha = l.alpha();
        let e: Vec<usize> = l.matching.iter().map(|&k| self.edge_ix(k)).collect();
        let mut pairs = 0u64;
        for s in 2..=alpha {
            let u: Vec<VertexId> = l.layers[s..].iter().flatten().copied().collect();
            let w: Vec<VertexId> = l.layers[..s - 1].iter().flatten().copied().collect();
            let gu = self.top.induced_edge_indices(&u);
            let gw = self.top.induced_edge_indices(&w);
            let bad = |a: usize, b: usize| {
                let (ka, kb) = (self.top.edges()[a].key(), self.top.edges()[b].key());
                verification(format!("split s={s}: edges {ka:?} and {kb:?} cross"))
            };
            for &a in &gu {
                for &b in &gw {
                    if table.crosses(a, b) {
                        return Err(bad(a, b));
                    }
                }
                if table.crosses(a, e[s - 2]) {
                    return Err(bad(a, e[s - 2]));
                }
            }
            for &b in &gw {
                if table.crosses(b, e[s - 1]) {
                    return Err(bad(b, e[s - 1]));
                }
            }
            pairs += (gu.len() * gw.len() + gu.len() + gw.len()) as u64;
            self.stats.split_indices_checked += 1;
        }
        self.stats.split_pairs += pairs;
        Ok(())
    }
}

/// A set of pairwise disjoint edges of a valid complete drawing. The result
/// is rechecked geometrically before it is returned.
pub fn solve(d: &Drawing, cfg: &SolveConfig) -> Result<Solution, SolveError> {
    if !d.is_complete() {
        return Err(SolveError::NotComplete);
    }
    if cfg.mode == Mode::Paper {
        let params = cfg.params.as_ref().ok_or(SolveError::ParamsRequired)?;
        if BigUint::from(d.n()) <= params.n0 {
            return Err(SolveError::PaperModeVacuous { n: d.n(), n0: params.n0.clone() });
        }
    }
    let mut ctx = Ctx { top: d, cfg, table: None, stats: SolveStats::default() };
    let mut edges = ctx.solve(d, 0)?;
    edges.sort_by_key(|&k| ctx.edge_ix(k));
    edges.dedup();
    check_disjoint(d, &edges)?;
    Ok(Solution { edges, stats: ctx.stats })
}

/// Fails on the first pair of edges that share an endpoint or cross.
pub fn check_disjoint(d: &Drawing, edges: &[EdgeKey]) -> Result<(), SolveError> {
    let curves: Vec<_> = edges.iter().map(|&(a, b)| d.edge(a, b).ok_or(SolveError::NotComplete)).collect::<Result<_, _>>()?;
    for (i, e) in curves.iter().enumerate() {
        for f in &curves[i + 1..] {
            let clear = !e.shares_endpoint(f) && matches!(crossings(e, f), Ok(xs) if xs.is_empty());
            if !clear {
                return Err(SolveError::NotDisjoint(e.key(), f.key()));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{from_heights, gen_flag, gen_mixed, GenConfig};
    use crate::rational::q;

    fn mixed(n: usize, seed: u64) -> Drawing {
        gen_mixed(&GenConfig::new(n, seed)).unwrap()
    }

    #[test]
    fn partition_sizes() {
        let d = mixed(10, 3);
        let p = slab_partition(&d, 5).unwrap();
        assert_eq!(p.parts.iter().map(Vec::len).collect::<Vec<_>>(), vec![5, 5]);
        let p = slab_partition(&d, 4).unwrap();
        assert_eq!(p.parts.iter().map(Vec::len).collect::<Vec<_>>(), vec![4, 4, 2]);
        assert_eq!(p.cuts.len(), 3);
        for &c in &p.cuts {
            assert!(crate::geometry::validate(&recut(&d, c).unwrap()).ok());
        }
    }

    #[test]
    fn contained_edges() {
        let wrap_free = from_heights(&[0, 3, 1, 4], &[false; 6]);
        assert!(contained_edge(&wrap_free, &[0, 1]).is_some());
        let f = gen_flag(&GenConfig::new(6, 1)).unwrap();
        assert_eq!(contained_edge(&f, &f.ids()), None);
    }

    #[test]
    fn practical_plans() {
        // (10, 1, 10): both adjacent pairs have 11 vertices, the first wins
        assert_eq!(plan_sizes(&[10, 1, 10], 20_000, Mode::Practical, None), Ok(PlanChoice::Bridge(1)));
        assert_eq!(plan_sizes(&[10, 1, 10], 100, Mode::Practical, None), Ok(PlanChoice::Split(2)));
        assert_eq!(plan_sizes(&[5, 5], 100, Mode::Practical, None), Err(SplitError::NoSplit));
        assert_eq!(plan_sizes(&[1, 1, 1, 1, 40, 1], 300, Mode::Practical, None), Ok(PlanChoice::Split(5)));
        assert_eq!(plan_sizes(&[3, 3], 100, Mode::Paper, None), Err(SplitError::ParamsRequired));
    }

    #[test]
    fn paper_plan_picks_middle_of_close_triple() {
        // f(n) = (n/10)^(1/2): n = 1000 gives f = 10, bridging needs <= 10
        let p = PaperParams::new_unchecked(q(1, 2), BigUint::from(10u32));
        let sizes = [30, 90, 6, 40, 35, 200, 60];
        // sorted sizes 6, 30, 35, 40, ...: the first triple within a factor two is
        // 30, 35, 40 at layers 1, 5, 4, so the middle layer is 4
        assert_eq!(plan_sizes(&sizes, 1000, Mode::Paper, Some(&p)), Ok(PlanChoice::Split(4)));
        assert_eq!(plan_sizes(&[30, 4, 5, 40], 1000, Mode::Paper, Some(&p)), Ok(PlanChoice::Bridge(2)));
    }

    #[test]
    fn greedy_examples() {
        let d = from_heights(&[0, 3, 1, 4, 2, 5, 7, 6], &[false; 28]);
        assert_eq!(greedy_monotone(&d).unwrap().len(), 4);
        let d = from_heights(&[0, 3, 1, 4, 2, 5, 7], &[false; 21]);
        let g = greedy_monotone(&d).unwrap();
        assert_eq!(g.len(), 3);
        check_disjoint(&d, &g).unwrap();
    }

    #[test]
    fn solves_mixed_and_flags() {
        for seed in 0..4 {
            for d in [mixed(30, seed), gen_flag(&GenConfig::new(40, seed)).unwrap()] {
                let cfg = SolveConfig { verify: true, ..Default::default() };
                let s = solve(&d, &cfg).unwrap();
                assert!(!s.edges.is_empty());
                check_disjoint(&d, &s.edges).unwrap();
            }
        }
    }

    #[test]
    fn small_instances_get_an_edge() {
        for n in 2..10 {
            let s = solve(&mixed(n, n as u64), &SolveConfig::default()).unwrap();
            assert!(!s.edges.is_empty());
        }
    }

    #[test]
    fn paper_mode_refuses_below_n0() {
        let p = PaperParams::minimal(q(2, 5)).unwrap();
        let cfg = SolveConfig { mode: Mode::Paper, params: Some(p), ..Default::default() };
        assert!(matches!(solve(&mixed(12, 0), &cfg), Err(SolveError::PaperModeVacuous { .. })));
        let cfg = SolveConfig { mode: Mode::Paper, ..Default::default() };
        assert_eq!(solve(&mixed(12, 0), &cfg), Err(SolveError::ParamsRequired));
    }
}
