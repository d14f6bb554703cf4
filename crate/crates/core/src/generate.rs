//! Random and hand-built drawings.
//!
//! Random drawings use one curve family: vertices sit at evenly spaced x
//! with integer heights, and every edge leaves its start vertex with a short
//! riser to a private flat level just off the start height, runs flat, and
//! ramps into its end vertex over the last quarter gap. Flat offsets of the
//! edges sharing a start vertex are ordered so that those edges never meet
//! again. Two edges can then only cross where one ramps through the other's
//! flat, which gives a constant-time crossing predictor used to steer the
//! sampler; every emitted drawing is still checked by [`validate`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{validate, Drawing, EdgeCurve, Point, Vertex, VertexId, Wrap};
use crate::rational::{q, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub n: usize,
    pub seed: u64,
    /// Probability that an edge is drawn around the cut.
    pub wrap_prob: Rational,
    /// Restarts allowed before giving up.
    pub max_attempts: u32,
    /// Interior breakpoints allowed per edge (the curve family uses 2).
    pub breakpoint_budget: usize,
    /// Largest denominator allowed in coordinates.
    pub coordinate_grid: u64,
}

impl GenConfig {
    pub fn new(n: usize, seed: u64) -> GenConfig {
        GenConfig { n, seed, ..GenConfig::default() }
    }

    pub fn with_wrap_prob(mut self, p: Rational) -> GenConfig {
        self.wrap_prob = p;
        self
    }
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            n: 10,
            seed: 0,
            wrap_prob: q(1, 2),
            max_attempts: 64,
            breakpoint_budget: 2,
            coordinate_grid: 1 << 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
    #[error("no valid drawing after {0} attempts")]
    GenerationFailed(u32),
}

fn check(cfg: &GenConfig) -> Result<(), GenError> {
    let bad = |m: &str| Err(GenError::InvalidConfig(m.to_string()));
    if cfg.n < 2 {
        return bad("n must be at least 2");
    }
    if cfg.max_attempts < 1 {
        return bad("max_attempts must be at least 1");
    }
    if cfg.breakpoint_budget < 2 {
        return bad("breakpoint_budget must be at least 2");
    }
    if cfg.wrap_prob < Rational::ZERO || cfg.wrap_prob > Rational::ONE {
        return bad("wrap_prob must lie in [0, 1]");
    }
    if (4 * cfg.n) as u64 > cfg.coordinate_grid {
        return bad("coordinate_grid must be at least 4n");
    }
    Ok(())
}

fn coin(rng: &mut ChaCha8Rng, p: Rational) -> bool {
    let den = p.denom() as u128;
    (rng.random_range(0..den) as i128) < p.numer()
}

/// Heights where each vertex is either above or below all earlier ones.
fn top_bottom_heights(n: usize, rng: &mut ChaCha8Rng) -> Vec<i64> {
    let (mut lo, mut hi) = (0i64, 0i64);
    let mut ys = vec![0];
    for _ in 1..n {
        let gap = rng.random_range(1..=3);
        if rng.random_bool(0.5) {
            hi += gap;
            ys.push(hi);
        } else {
            lo -= gap;
            ys.push(lo);
        }
    }
    ys
}

fn permuted_heights(n: usize, rng: &mut ChaCha8Rng) -> Vec<i64> {
    let mut ys: Vec<i64> = (0..n as i64).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        ys.swap(i, j);
    }
    ys
}

/// Combinatorial view of one edge of the curve family.
#[derive(Clone, Copy)]
struct Route {
    /// Start and end positions in x order.
    s: usize,
    t: usize,
    circular: bool,
}

impl Route {
    fn new(i: usize, j: usize, circular: bool) -> Route {
        if circular {
            Route { s: j, t: i, circular }
        } else {
            Route { s: i, t: j, circular }
        }
    }

    /// Whether the edge passes strictly over the column of vertex `p`.
    fn over(&self, p: usize) -> bool {
        if self.circular {
            p > self.s || p < self.t
        } else {
            self.s < p && p < self.t
        }
    }

    fn touches(&self, o: &Route) -> bool {
        self.s == o.s || self.s == o.t || self.t == o.s || self.t == o.t
    }
}

fn strictly_between(a: i64, lo: i64, hi: i64) -> bool {
    (lo < a && a < hi) || (hi < a && a < lo)
}

/// Predicted crossing count of two routes: a ramp into `t` crosses the flat
/// of another edge iff that flat passes over `t` at a height between the
/// ramp's start and end heights.
fn predicted_crossings(e: &Route, f: &Route, ys: &[i64]) -> u32 {
    let mut c = 0;
    if e.t != f.t && e.t != f.s && f.over(e.t) && strictly_between(ys[f.s], ys[e.s], ys[e.t]) {
        c += 1;
    }
    if f.t != e.t && f.t != e.s && e.over(f.t) && strictly_between(ys[e.s], ys[f.s], ys[f.t]) {
        c += 1;
    }
    c
}

fn conflicting(e: &Route, f: &Route, ys: &[i64]) -> bool {
    let c = predicted_crossings(e, f, ys);
    c > 1 || (c > 0 && e.touches(f))
}

/// Builds the drawing for the given heights and per-pair wrap choices.
/// `wraps[k]` belongs to the k-th pair `(i, j)`, `i < j`, in lexicographic order.
fn realise(ys: &[i64], wraps: &[bool]) -> Drawing {
    let n = ys.len();
    let den = 4 * n as i128;
    // x of position m is (4m + 2) / 4n; a quarter gap is 1 / 4n
    let x_of = |m: usize| q(4 * m as i128 + 2, den);
    let quarter = q(1, den);
    let vertices: Vec<Vertex> =
        (0..n).map(|m| Vertex { id: m as VertexId, x: x_of(m), y: Rational::from_int(ys[m] as i128) }).collect();

    let mut routes = Vec::with_capacity(wraps.len());
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            routes.push((i, j, Route::new(i, j, wraps[k])));
            k += 1;
        }
    }
    // flat offsets per start vertex, ordered by where the edge ends
    let mut offset = vec![Rational::ZERO; routes.len()];
    let mut by_start: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (r, (_, _, route)) in routes.iter().enumerate() {
        by_start[route.s].push(r);
    }
    let reach = |route: &Route| if route.circular { route.t + n } else { route.t };
    for list in &mut by_start {
        list.sort_by_key(|&r| reach(&routes[r].2));
        let (down, up): (Vec<usize>, Vec<usize>) =
            list.iter().partition(|&&r| ys[routes[r].2.t] < ys[routes[r].2.s]);
        for (rank, &r) in down.iter().enumerate() {
            offset[r] = -q((down.len() - rank) as i128, den);
        }
        for (rank, &r) in up.iter().enumerate() {
            offset[r] = q((up.len() - rank) as i128, den);
        }
    }
    let edges = routes
        .iter()
        .zip(&offset)
        .map(|(&(i, j, route), &off)| {
            let xs = x_of(route.s);
            let xt = if route.circular { x_of(route.t) + Rational::ONE } else { x_of(route.t) };
            let ys_ = Rational::from_int(ys[route.s] as i128);
            let yt = Rational::from_int(ys[route.t] as i128);
            let points = vec![
                Point::new(xs, ys_),
                Point::new(xs + quarter, ys_ + off),
                Point::new(xt - quarter, ys_ + off),
                Point::new(xt, yt),
            ];
            let wrap = if route.circular { Wrap::Circular } else { Wrap::Direct };
            EdgeCurve { u: i as VertexId, v: j as VertexId, wrap, points }
        })
        .collect();
    Drawing::new(vertices, edges).expect("generated drawing is well formed")
}

/// A random flag: every edge circular. Heights follow the above-or-below-all
/// rule, which is exactly when this curve family yields a simple flag.
pub fn gen_flag(cfg: &GenConfig) -> Result<Drawing, GenError> {
    check(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pairs = cfg.n * (cfg.n - 1) / 2;
    for _ in 0..cfg.max_attempts {
        let ys = top_bottom_heights(cfg.n, &mut rng);
        let d = realise(&ys, &vec![true; pairs]);
        if validate(&d).ok() && d.is_flag() {
            return Ok(d);
        }
    }
    Err(GenError::GenerationFailed(cfg.max_attempts))
}

/// A random drawing where each edge wraps with probability `wrap_prob`.
/// Conflicting edges have their wrap redrawn until the predictor reports no
/// conflict; the result is then validated.
pub fn gen_mixed(cfg: &GenConfig) -> Result<Drawing, GenError> {
    check(cfg)?;
    let n = cfg.n;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pair_ids = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pair_ids.push((i, j));
        }
    }
    let m = pair_ids.len();
    for _ in 0..cfg.max_attempts {
        let ys = if cfg.wrap_prob == Rational::ONE || rng.random_bool(0.5) {
            top_bottom_heights(n, &mut rng)
        } else {
            permuted_heights(n, &mut rng)
        };
        let mut wraps: Vec<bool> = (0..m).map(|_| coin(&mut rng, cfg.wrap_prob)).collect();
        let mut routes: Vec<Route> = (0..m).map(|k| Route::new(pair_ids[k].0, pair_ids[k].1, wraps[k])).collect();

        // conflict counts per edge
        let mut count = vec![0u32; m];
        for a in 0..m {
            for b in a + 1..m {
                if conflicting(&routes[a], &routes[b], &ys) {
                    count[a] += 1;
                    count[b] += 1;
                }
            }
        }
        // edges with a conflict, sampled uniformly; clean ones are dropped lazily
        let mut dirty: Vec<usize> = (0..m).filter(|&k| count[k] > 0).collect();
        let mut listed = vec![false; m];
        for &k in &dirty {
            listed[k] = true;
        }
        let budget = 40 * m + 1000;
        let mut changed: Vec<(usize, bool)> = Vec::new();
        let mut steps = 0;
        while steps < budget && !dirty.is_empty() {
            let r = rng.random_range(0..dirty.len());
            let k = dirty[r];
            if count[k] == 0 {
                dirty.swap_remove(r);
                listed[k] = false;
                continue;
            }
            steps += 1;
            let new = coin(&mut rng, cfg.wrap_prob);
            if new == wraps[k] {
                continue;
            }
            let old = routes[k];
            let cur = Route::new(pair_ids[k].0, pair_ids[k].1, new);
            // one pass: conflicts after the flip, and which pairs change
            let mut after_total = 0u32;
            changed.clear();
            for b in (0..m).filter(|&b| b != k) {
                let before = conflicting(&old, &routes[b], &ys);
                let after = conflicting(&cur, &routes[b], &ys);
                after_total += after as u32;
                if before != after {
                    changed.push((b, after));
                }
            }
            // flips that add conflicts are mostly refused
            if after_total > count[k] && !rng.random_ratio(1, 8) {
                continue;
            }
            wraps[k] = new;
            routes[k] = cur;
            for &(b, after) in &changed {
                if after {
                    count[k] += 1;
                    count[b] += 1;
                    if !listed[b] {
                        listed[b] = true;
                        dirty.push(b);
                    }
                } else {
                    count[k] -= 1;
                    count[b] -= 1;
                }
            }
        }
        if count.iter().any(|&c| c > 0) {
            continue;
        }
        let d = realise(&ys, &wraps);
        if validate(&d).ok() {
            return Ok(d);
        }
    }
    Err(GenError::GenerationFailed(cfg.max_attempts))
}

/// A flag with a prescribed above/below pattern: `pattern[m]` says whether
/// vertex `m + 1` goes above all earlier vertices.
pub fn flag_from_pattern(pattern: &[bool]) -> Drawing {
    let mut ys = vec![0i64];
    let (mut lo, mut hi) = (0, 0);
    for &up in pattern {
        if up {
            hi += 1;
            ys.push(hi);
        } else {
            lo -= 1;
            ys.push(lo);
        }
    }
    let pairs = ys.len() * (ys.len() - 1) / 2;
    realise(&ys, &vec![true; pairs])
}

/// Drawing from explicit heights and wrap choices; exposed for tests.
pub fn from_heights(ys: &[i64], wraps: &[bool]) -> Drawing {
    realise(ys, wraps)
}

pub const ARCHETYPES: [&str; 4] = ["not-related", "relation-cycle", "separating-edge", "good-upper-triplet"];

fn pts(v: &[(i128, i128, i128, i128)]) -> Vec<Point> {
    v.iter().map(|&(a, b, c, d)| Point::new(q(a, b), q(c, d))).collect()
}

fn vtx(id: VertexId, x: (i128, i128), y: i128) -> Vertex {
    Vertex { id, x: q(x.0, x.1), y: Rational::from_int(y) }
}

/// Two disjoint edges whose vertical order flips between their two common
/// arcs: a flat direct edge and a circular edge that is high on one side of
/// the cut and low on the other.
fn not_related() -> Drawing {
    let vertices = vec![vtx(1, (1, 5), 1), vtx(2, (2, 5), 0), vtx(3, (3, 5), 2), vtx(4, (4, 5), 1)];
    let edges = vec![
        EdgeCurve { u: 1, v: 4, wrap: Wrap::Direct, points: pts(&[(1, 5, 1, 1), (4, 5, 1, 1)]) },
        EdgeCurve {
            u: 2,
            v: 3,
            wrap: Wrap::Circular,
            points: pts(&[(3, 5, 2, 1), (9, 10, 2, 1), (11, 10, 0, 1), (7, 5, 0, 1)]),
        },
    ];
    Drawing::new(vertices, edges).unwrap()
}

/// Three pairwise related edges `v2v5 < v3v6 < v1v4 < v2v5` with no common
/// vertical line.
fn relation_cycle() -> Drawing {
    let vertices = vec![
        vtx(1, (1, 12), 0),
        vtx(2, (3, 12), 1),
        vtx(3, (5, 12), -1),
        vtx(4, (7, 12), 0),
        vtx(5, (9, 12), -2),
        vtx(6, (11, 12), -1),
    ];
    let edges = vec![
        EdgeCurve { u: 1, v: 4, wrap: Wrap::Direct, points: pts(&[(1, 12, 0, 1), (7, 12, 0, 1)]) },
        EdgeCurve { u: 3, v: 6, wrap: Wrap::Direct, points: pts(&[(5, 12, -1, 1), (11, 12, -1, 1)]) },
        EdgeCurve {
            u: 2,
            v: 5,
            wrap: Wrap::Circular,
            points: pts(&[(9, 12, -2, 1), (23, 24, -2, 1), (25, 24, 1, 1), (15, 12, 1, 1)]),
        },
    ];
    Drawing::new(vertices, edges).unwrap()
}

/// The named hand-built drawings.
pub fn gen_archetypes() -> Vec<(&'static str, Drawing)> {
    vec![
        ("not-related", not_related()),
        ("relation-cycle", relation_cycle()),
        // later vertices alternate above and below, so v1v2 splits them 4/4
        ("separating-edge", flag_from_pattern(&[true, false, true, false, true, false, true, false, true])),
        // every vertex below all earlier ones
        ("good-upper-triplet", flag_from_pattern(&[false; 9])),
    ]
}

pub fn archetype(name: &str) -> Option<Drawing> {
    gen_archetypes().into_iter().find(|(k, _)| *k == name).map(|(_, d)| d)
}
