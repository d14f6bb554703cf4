//! Machine checks of the structural facts the solvers depend on.
//!
//! Each suite runs on every corpus drawing it applies to and counts the
//! individual facts it checked. The first failure per suite is shrunk by
//! deleting vertices while the failure persists.

use std::collections::HashSet;

use crate::cyl::{check_disjoint, greedy_monotone, slab_partition, solve, SolveConfig};
use crate::faults::{inject, Fault};
use crate::flag::{check_proper, check_structure, find_structure, flag_bound, flag_matching, flag_matching_visit, side_sets, SideSets, Structure};
use crate::generate::{flag_from_pattern, gen_archetypes, gen_flag, gen_mixed, GenConfig};
use crate::geometry::{
    crossings, crossings_curves, point_relation, recut, relation, relation_curves, validate, validate_bruteforce,
    CrossingTable, Drawing, EdgeCurve, Point, RelationResult, VertexId,
};
use crate::io::serialize_mcd;
use crate::oracle::max_disjoint_bruteforce;
use crate::rational::{q, Rational};

use RelationResult::{Above, Below};

/// Checks performed on one drawing and the first failure among them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub checks: u64,
    pub failure: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) -> bool {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(msg());
        }
        ok
    }

    fn fail(&mut self, msg: impl Into<String>) {
        self.check(false, || msg.into());
    }

    fn failed(&self) -> bool {
        self.failure.is_some()
    }
}

pub type SuiteFn = fn(&Drawing) -> Tally;

#[derive(Clone, Copy)]
pub struct Suite {
    pub name: &'static str,
    pub applies: fn(&Drawing) -> bool,
    pub run: SuiteFn,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub label: String,
    pub drawing: Drawing,
    /// Restricts the instance to the named suites.
    pub only: Option<&'static [&'static str]>,
}

impl Instance {
    pub fn new(label: impl Into<String>, drawing: Drawing) -> Instance {
        Instance { label: label.into(), drawing, only: None }
    }

    fn wants(&self, s: &Suite) -> bool {
        self.only.is_none_or(|names| names.contains(&s.name)) && (s.applies)(&self.drawing)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub instance: String,
    pub message: String,
    /// The shrunk drawing as MCD1 text.
    pub mcd: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub instances: u64,
    pub checks: u64,
    pub failures: u64,
    pub counterexample: Option<Counterexample>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LemmaReport {
    pub suites: Vec<SuiteResult>,
}

impl LemmaReport {
    pub fn ok(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn get(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }
}

pub fn suites() -> Vec<Suite> {
    vec![
        Suite { name: "validator", applies: |d| d.n() <= 25, run: validator },
        Suite { name: "sweep-count", applies: |d| d.n() <= 25, run: sweep_count },
        Suite { name: "simplicity", applies: |d| d.n() <= 20, run: simplicity },
        Suite { name: "relation", applies: |d| d.n() <= 20, run: relation_symmetry },
        Suite { name: "fault-injection", applies: |d| d.n() <= 20, run: fault_injection },
        Suite { name: "even-crossings", applies: |d| d.n() <= 9, run: even_crossings },
        Suite { name: "disjoint-circular", applies: |d| d.n() <= 16, run: disjoint_circular },
        Suite { name: "adjacent-related", applies: |d| d.is_flag() && d.n() <= 14, run: adjacent_related },
        Suite { name: "transitivity", applies: |d| d.n() <= 12, run: transitivity },
        Suite { name: "recut-invariance", applies: |d| d.n() <= 16, run: recut_invariance },
        Suite { name: "crossing-criterion", applies: |d| d.is_flag() && d.n() <= 14, run: crossing_criterion },
        Suite { name: "fan-order", applies: |d| d.is_flag() && d.n() <= 14, run: fan_order },
        Suite { name: "side-sets", applies: |d| d.is_flag() && d.n() >= 2, run: side_set_partition },
        Suite { name: "structures", applies: |d| d.is_flag() && d.n() >= 10, run: structures },
        Suite { name: "structure-search", applies: |d| d.is_flag() && d.n() >= 10, run: structure_search },
        Suite { name: "six-vertex-walk", applies: |d| d.is_flag() && d.n() >= 6, run: six_vertex_walk },
        Suite { name: "flag-matching", applies: |d| d.is_flag() && d.n() >= 2, run: flag_matching_suite },
        Suite { name: "subflag-closure", applies: |d| d.is_flag() && d.n() >= 3, run: subflag_closure },
        Suite { name: "circular-pairs", applies: |d| d.n() <= 16, run: circular_pairs },
        Suite { name: "slab-partition", applies: |d| d.is_complete() && d.n() >= 4, run: slab_suite },
        Suite { name: "split-disjointness", applies: |d| d.is_complete() && d.n() >= 2 && d.n() <= 80, run: split_disjointness },
        Suite { name: "oracle-dominance", applies: |d| d.is_complete() && d.n() >= 2 && d.n() <= 10, run: oracle_dominance },
    ]
}

// ----- geometry -----

fn validator(d: &Drawing) -> Tally {
    let mut t = Tally::default();
    let fast = validate(d);
    t.check(fast.ok(), || format!("violations: {:?}", fast.violations.first()));
    let slow = validate_bruteforce(d);
    let kinds = |r: &crate::geometry::ValidationReport| r.violations.iter().map(|v| v.kind).collect::<HashSet<_>>();
    t.check(kinds(&fast) == kinds(&slow), || "sweep and pairwise validation disagree".into());
    t
}

fn sweep_count(d: &Drawing) -> Tally {
    let mut t = Tally::default();
    let Ok(table) = CrossingTable::build(d) else {
        t.fail("sweep rejected a valid drawing");
        return t;
    };
    let es = d.edges();
    let mut count = 0;
    for i in 0..es.len() {
        for j in i + 1..es.len() {
            let c = crossings(&es[i], &es[j]).is_ok_and(|c| !c.is_empty());
            count += c as u64;
            t.check(c == table.crosses(i, j), || format!("pair {:?} {:?}: sweep says {}", es[i].key(), es[j].key(), !c));
        }
    }
    t.check(count == table.count(), || format!("sweep counted {} crossings, pairs give {count}", table.count()));
    t
}

fn fracts(ps: &[Point]) -> Vec<(Rational, Rational)> {
    let mut v: Vec<_> = ps.iter().map(|p| (p.x.fract(), p.y)).collect();
    v.sort();
    v
}

fn simplicity(d: &Drawing) -> Tally {
    let mut t = Tally::default();
    let es = d.edges();
    for (i, e) in es.iter().enumerate() {
        for f in &es[i + 1..] {
            match (crossings(e, f), crossings(f, e)) {
                (Ok(a), Ok(b)) => {
                    let limit = if e.shares_endpoint(f) { 0 } else { 1 };
                    t.check(a.len() <= limit, || format!("{:?} and {:?} meet {} times", e.key(), f.key(), a.len()));
                    t.check(fracts(&a) == fracts(&b), || format!("crossings of {:?}, {:?} not symmetric", e.key(), f.key()));
                }
                _ => t.fail(format!("degenerate contact between {:?} and {:?}", e.key(), f.key())),
            }
        }
    }
    t
}

fn relation_symmetry(d: &Drawing) -> Tally {
    let mut t = Tally::default();
    let es = d.edges();
    for (i, e) in es.iter().enumerate() {
        for f in &es[i + 1..] {
            let (Ok(r), Ok(s), Ok(c)) = (relation(e, f), relation(f, e), crossings(e, f)) else {
                t.fail(format!("degenerate pair {:?} {:?}", e.key(), f.key()));
                continue;
            };
            t.check(r.flip() == s, || format!("relation({:?},{:?}) = {r:?} but reverse {s:?}", e.key(), f.key()));
            t.check((r == RelationResult::Crossing) == !c.is_empty(), || format!("{:?} {:?}: {r:?} vs {} crossings", e.key(), f.key(), c.len()));
        }
    }
    t
}

fn fault_injection(d: &Drawing) -> Tally {
    let mut t = Tally::default();
    for f in Fault::ALL {
        if let Some(bad) = inject(d, f) {
            let r = validate(&bad);
            t.check(r.has(f.expected()), || format!("{} not reported: {:?}", f.name(), r.violations.first()));
        }
    }
    t
}

fn shift(points: &[Point], k: i128) -> Vec<Point> {
    let k = Rational::from_int(k);
    points.iter().map(|p| Point::new(p.x + k, p.y)).collect()
}

/// The part of a lift polyline over `[a, b]`.
fn clip(points: &[Point], a: Rational, b: Rational) -> Vec<Point> {
    let at = |x| Point::new(x, crate::geometry::eval_poly(points, x).expect("inside domain"));
    let mut out = vec![at(a)];
    out.extend(points.iter().copied().filter(|p| a < p.x && p.x < b));
    out.push(at(b));
    out
}

/// An x-monotone piece of one edge with both ends on one side of another
/// edge, over part of that edge's domain, meets it an even number of
/// times; in a simple drawing it therefore stays on that side.
fn even_crossings(d: &Drawing) -> Tally {
    let mut t = Tally::default();
    let es = d.edges();
    for e in es {
        for g in es.iter().filter(|g| g.key() != e.key()) {
            for k in [-1, 0, 1] {
                let gk = shift(&g.points, k);
                let lo = e.start().x.max(gk[0].x);
                let hi = e.end().x.min(gk.last().unwrap().x);
                if lo >= hi {
                    continue;
                }
                let mut xs: Vec<Rational> = e.points.iter().chain(&gk).map(|p| p.x).filter(|&x| lo < x && x < hi).collect();
                xs.push(lo);
                xs.push(hi);
                xs.sort_unstable();
                xs.dedup();
                let samples: Vec<Rational> = xs.windows(2).map(|w| Rational::midpoint(w[0], w[1])).collect();
                let side = |x: Rational| {
                    let ye = e.eval_lift(x).unwrap();
                    let yg = crate::geometry::eval_poly(&gk, x).unwrap();
                    yg.cmp(&ye)
                };
                for (a, &x1) in samples.iter().enumerate() {
                    let s1 = side(x1);
                    if s1.is_eq() {
                        continue;
                    }
                    for &x2 in samples[a + 1..].iter().filter(|&&x2| side(x2) == s1) {
                        let gamma = clip(&gk, x1, x2);
                        let base = clip(&e.points, x1, x2);
                        let Ok(c) = crossings_curves(&gamma, &base) else {
                            t.fail(format!("degenerate pieces of {:?} and {:?}", g.key(), e.key()));
                            continue;
                        };
                        t.check(c.len() % 2 == 0, || format!("piece of {:?} meets {:?} {} times", g.key(), e.key(), c.len()));
                        let want = if s1.is_lt() { Below } else { Above };
                        let r = relation_curves(&gamma, &base);
                        t.check(r == Ok(want), || format!("piece of {:?} is {r:?} {:?}, expected {want:?}", g.key(), e.key()));
                    }
                }
            }
        }
    }
    t
}

fn side_of(p: Point, e: &EdgeCurve) -> Option<RelationResult> {
    point_relation(p, e).ok().filter(|r| r.is_related())
}

fn endpoints(d: &Drawing, e: &EdgeCurve) -> [Point; 2] {
    [d.vertex(e.u).unwrap().point(), d.vertex(e.v).unwrap().point()]
}

/// Disjoint circular edges are related unless each has its endpoints on
/// both sides of the other.
fn disjoint_circular(d: &Drawing) -> Tally {
    let mut t = Tally::default();
    let circ: Vec<&EdgeCurve> = d.edges().iter().filter(|e| e.is_circular()).collect();
    for (i, e) in circ.iter().enumerate() {
        for f in &circ[i + 1..] {
            if e.shares_endpoint(f) || !crossings(e, f).is_ok_and(|c| c.is_empty()) {
                continue;
            }
            let related = relation(e, f).is_ok_and(|r| r.is_related());
            for (a, b) in [(e, f), (f, e)] {
                let [p, q] = endpoints(d, a);
                if let (Some(x), Some(y)) = (side_of(p, b), side_of(q, b)) {
                    t.check(related || x != y, || format!("{:?} has both ends {x:?} {:?} yet they are unrelated", a.key(), b.key()));
                }
            }
        }
    }
    t
}

fn adjacent_related(d: &Drawing) -> Tally {
    let mut t = Tally::default();
    let vs = d.vertices();
    for a in vs {
        for b in vs.iter().filter(|b| b.id != a.id) {
            let ab = d.edge(a.id, b.id).unwrap();
            for c in vs.iter().filter(|c| c.id != a.id && c.id != b.id) {
                let ac = d.edge(a.id, c.id).unwrap();
                let r = relation(ac, ab);
                t.check(r.is_ok_and(|r| r.is_related()), || format!("{:?} and {:?} unrelated", ac.key(), ab.key()));
                if let (Some(side), Ok(r)) = (side_of(c.point(), ab), r) {
                    t.check(side == r, || format!("vertex {} is {side:?} {:?} but {:?} is {r:?}", c.id, ab.key(), ac.key()));
                }
            }
        }
    }
    t
}

/// Bit `g` set when the edge meets the open gap between the vertices at
/// x-order positions `g` and `g+1` (the last gap wraps through the cut).
fn gap_cover(d: &Drawing, e: &EdgeCurve) -> u64 {
    let vs = d.vertices();
    let n = vs.len();
    let mut bits = 0;
    for g in 0..n {
        let mid = if g + 1 < n { Rational::midpoint(vs[g].x, vs[g + 1].x) } else { Rational::ZERO };
        if e.eval_at(mid).is_some() && vs.iter().all(|v| v.x != mid) {
            bits |= 1 << g;
        }
    }
    bits
}

/// `below` is transitive on pairwise related edges sharing a vertical line.
fn transitivity(d: &Drawing) -> Tally {
    let mut t = Tally::default();
    let es = d.edges();
    let m = es.len();
    let cover: Vec<u64> = es.iter().map(|e| gap_cover(d, e)).collect();
    let mut below = vec![vec![false; m]; m];
    let mut related = vec![vec![false; m]; m];
    for i in 0..m {
        for j in 0..m {
            let r = relation(&es[i], &es[j]);
            below[i][j] = i != j && r == Ok(Below);
            related[i][j] = i != j && r.is_ok_and(|r| r.is_related());
        }
    }
    for a in 0..m {
        for b in (0..m).filter(|&b| below[a][b]) {
            for c in (0..m).filter(|&c| below[b][c]) {
                if related[a][c] && cover[a] & cover[b] & cover[c] != 0 {
                    t.check(below[a][c], || format!("{:?} < {:?} < {:?} but not {:?} < {:?}", es[a].key(), es[b].key(), es[c].key(), es[a].key(), es[c].key()));
                }
            }
        }
    }
    t
}

/// Three edges, pairwise below one another in a cycle.
pub fn relation_cycle(d: &Drawing) -> Option<[usize; 3]> {
    let es = d.edges();
    let m = es.len();
    let below = |i: usize, j: usize| relation(&es[i], &es[j]) == Ok(Below);
    for a in 0..m {
        for b in (0..m).filter(|&b| below(a, b)) {
            for c in (0..m).filter(|&c| below(b, c)) {
                if below(c, a) {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}

fn recut_invariance(d: &Drawing) -> Tally {
    let mut t = Tally::default();
    let Ok(table) = CrossingTable::build(d) else {
        t.fail("invalid input");
        return t;
    };
    for a in [q(1, 3), q(2, 3), q(3, 7), q(5, 11), q(7, 8)] {
        let Ok(r) = recut(d, a) else { continue };
        let rep = validate(&r);
        if !t.check(rep.ok(), || format!("recut at {a} invalid: {:?}", rep.violations.first())) {
            continue;
        }
        let rt = CrossingTable::build(&r).unwrap();
        let es = d.edges();
        for i in 0..es.len() {
            for j in i + 1..es.len() {
                let ri = r.edge_index(es[i].u, es[i].v).unwrap();
                let rj = r.edge_index(es[j].u, es[j].v).unwrap();
                t.check(table.crosses(i, j) == rt.crosses(ri, rj), || format!("recut at {a} changes {:?} {:?}", es[i].key(), es[j].key()));
            }
        }
        let back = recut(&r, Rational::ONE - a);
        t.check(back.as_ref() == Ok(d), || format!("recut at {a} does not undo"));
        if d.n() <= 10 && d.is_complete() {
            let (x, y) = (max_disjoint_bruteforce(d), max_disjoint_bruteforce(&r));
            t.check(matches!((&x, &y), (Ok(x), Ok(y)) if x.size() == y.size()), || format!("recut at {a} changes the optimum"));
        }
    }
    t
}

// ----- flags -----

/// For edges `v_{i1}v_{i2}` and `v_{i3}v_{i4}` of a flag with the later pair
/// on one side of the earlier edge, when they cross and when they do not.
fn crossing_criterion(d: &Drawing) -> Tally {
    let mut t = Tally::default();
    let vs = d.vertices();
    let n = vs.len();
    for i1 in 0..n {
        for i2 in i1 + 1..n {
            let e = d.edge_at(i1, i2).unwrap();
            let (e_neg, e_pos) = e.split_circular().unwrap();
            for i3 in i2 + 1..n {
                for i4 in i3 + 1..n {
                    let f = d.edge_at(i3, i4).unwrap();
                    let (s3, s4) = (side_of(vs[i3].point(), e), side_of(vs[i4].point(), e));
                    if s3 != s4 || s3.is_none() {
                        continue;
                    }
                    let lower = s3 == Some(Below);
                    let (f_neg, _) = f.split_circular().unwrap();
                    let cross = crossings(e, f).is_ok_and(|c| !c.is_empty());
                    let pieces = crossings_curves(&e_pos.points, &f_neg.points).is_ok_and(|c| !c.is_empty());
                    let (a1, a2) = (side_of(vs[i1].point(), f), side_of(vs[i2].point(), f));
                    let neg = relation_curves(&f_neg.points, &e_neg.points).ok();
                    let third = if lower {
                        a2 == Some(Below) && a1 == Some(Above) && neg == Some(Below)
                    } else {
                        a2 == Some(Above) && a1 == Some(Below) && neg == Some(Above)
                    };
                    let far = if lower { Above } else { Below };
                    let clear = a1 == Some(far) && a2 == Some(far);
                    let tag = || format!("edges {:?} {:?}", e.key(), f.key());
                    t.check(cross == pieces, || format!("{}: crossing {cross}, piece crossing {pieces}", tag()));
                    t.check(cross == third, || format!("{}: crossing {cross}, side condition {third}", tag()));
                    t.check(!cross == clear, || format!("{}: disjoint {} but endpoint sides {a1:?} {a2:?}", tag(), !cross));
                }
            }
        }
    }
    t
}

/// Edges from `v_p` to the later vertices on one side of `v_pv_q` are
/// stacked in x order: upwards below it, downwards above it.
fn fan_order(d: &Drawing) -> Tally {
    let mut t = Tally::default();
    let n = d.n();
    for p in 0..n {
        for q in p + 1..n {
            let Ok(s) = side_sets(d, p, q) else {
                t.fail(format!("side sets of {p},{q}"));
                continue;
            };
            let vp = d.vertices()[p].id;
            for (set, want) in [(&s.vplus, Below), (&s.vminus, Above)] {
                for (a, &x) in set.iter().enumerate() {
                    for &y in &set[a + 1..] {
                        let r = relation(d.edge(vp, x).unwrap(), d.edge(vp, y).unwrap());
                        t.check(r == Ok(want), || format!("edges {vp}-{x} and {vp}-{y}: {r:?}, expected {want:?}"));
                    }
                }
            }
        }
    }
    t
}

fn side_set_partition(d: &Drawing) -> Tally {
    let mut t = Tally::default();
    let n = d.n().min(16);
    let ids = d.ids();
    for i in 0..n {
        for j in i + 1..n {
            match side_sets(d, i, j) {
                Ok(s) => {
                    let mut all: Vec<VertexId> = s.vplus.iter().chain(&s.vminus).copied().collect();
                    all.sort_by_key(|v| d.position(*v));
                    t.check(all == ids[j + 1..], || format!("side sets of {:?} do not partition the later vertices", s.edge));
                }
                Err(e) => t.fail(e.to_string()),
            }
        }
    }
    t
}

fn pos(d: &Drawing, id: VertexId) -> usize {
    d.position(id).unwrap()
}

/// Whether `s` meets its definition on the whole flag.
fn is_structure(d: &Drawing, s: &Structure) -> bool {
    let sides = |i, j| side_sets(d, pos(d, i), pos(d, j)).ok();
    match *s {
        Structure::SeparatingEdge(i, j) => sides(i, j).is_some_and(|s| s.vplus.len() > 1 && s.vminus.len() > 1),
        Structure::GoodUpperTriplet(i, j, k) | Structure::GoodLowerTriplet(i, j, k) => {
            let upper = matches!(s, Structure::GoodUpperTriplet(..));
            let (Some(ij), Some(jk)) = (sides(i, j), sides(j, k)) else { return false };
            let ordered = pos(d, i) < pos(d, j) && pos(d, j) < pos(d, k);
            if upper {
                ordered && ij.vminus.contains(&k) && jk.vplus.len() <= 1
            } else {
                ordered && ij.vplus.contains(&k) && jk.vminus.len() <= 1
            }
        }
    }
}

/// Every structure, found by the recursion or (for small flags) anywhere,
/// keeps the promised edge sets disjoint and related.
fn structures(d: &Drawing) -> Tally {
    let mut t = Tally::default();
    let mut seen = Vec::new();
    let r = flag_matching_visit(d, &mut |d, view, s| seen.push((view.to_vec(), *s, is_structure(&d.induced(&view.iter().map(|&p| d.vertices()[p].id).collect::<Vec<_>>()), s))));
    if let Err(e) = r {
        t.fail(e.to_string());
        return t;
    }
    let all: Vec<usize> = (0..d.n()).collect();
    if d.n() <= 14 {
        let ids = d.ids();
        for (a, &i) in ids.iter().enumerate() {
            for (b, &j) in ids.iter().enumerate().skip(a + 1) {
                let s = Structure::SeparatingEdge(i, j);
                if is_structure(d, &s) {
                    seen.push((all.clone(), s, true));
                }
                for &k in &ids[b + 1..] {
                    for s in [Structure::GoodUpperTriplet(i, j, k), Structure::GoodLowerTriplet(i, j, k)] {
                        if is_structure(d, &s) {
                            seen.push((all.clone(), s, true));
                        }
                    }
                }
            }
        }
    }
    for (view, s, valid) in seen {
        t.check(valid, || format!("recursion used {s}, which does not meet its definition"));
        match check_structure(d, &view, &s) {
            Ok(c) => {
                t.checks += c.pairs;
                t.check(c.violations.is_empty(), || format!("{s}: pair {:?} breaks it", c.violations[0]));
            }
            Err(e) => t.fail(format!("{s}: {e}")),
        }
    }
    t
}

/// The explicit walk over the first six vertices: `z1 z2`, then the first
/// vertex across, then the first vertex that switched sides.
pub fn six_vertex_structure(d: &Drawing) -> Option<Structure> {
    let id = |p: usize| d.vertices()[p].id;
    let sides = |a: VertexId, b: VertexId| side_sets(d, pos(d, a), pos(d, b)).ok();
    let (z1, z2) = (id(0), id(1));
    let s12 = sides(z1, z2)?;
    if s12.vplus.len() > 1 && s12.vminus.len() > 1 {
        return Some(Structure::SeparatingEdge(z1, z2));
    }
    // mirror so that at most one later vertex is on the "upper" side
    let up = s12.vplus.len() <= 1;
    let near = |s: &SideSets| if up { s.vplus.clone() } else { s.vminus.clone() };
    let far = |s: &SideSets| if up { s.vminus.clone() } else { s.vplus.clone() };
    let upper = |i, j, k| if up { Structure::GoodUpperTriplet(i, j, k) } else { Structure::GoodLowerTriplet(i, j, k) };
    let lower = |i, j, k| if up { Structure::GoodLowerTriplet(i, j, k) } else { Structure::GoodUpperTriplet(i, j, k) };
    let z3 = *far(&s12).first()?;
    let s23 = sides(z2, z3)?;
    if near(&s23).len() <= 1 {
        return Some(upper(z1, z2, z3));
    }
    if far(&s23).len() > 1 {
        return Some(Structure::SeparatingEdge(z2, z3));
    }
    let z4 = *near(&s23).iter().find(|v| !near(&s12).contains(v))?;
    let s34 = sides(z3, z4)?;
    if far(&s34).len() <= 1 {
        return Some(lower(z2, z3, z4));
    }
    if near(&s34).len() > 1 {
        return Some(Structure::SeparatingEdge(z3, z4));
    }
    Some(upper(z1, z3, z4))
}

fn six_vertex_walk(d: &Drawing) -> Tally {
    let mut t = Tally::default();
    let ids = d.ids();
    for start in 0..=d.n() - 6 {
        let sub = d.induced(&ids[start..]);
        let first6: Vec<VertexId> = ids[start..start + 6].to_vec();
        match six_vertex_structure(&sub) {
            Some(s) => {
                let inside = match s {
                    Structure::SeparatingEdge(a, b) => [a, b, a].to_vec(),
                    Structure::GoodUpperTriplet(a, b, c) | Structure::GoodLowerTriplet(a, b, c) => vec![a, b, c],
                };
                t.check(inside.iter().all(|v| first6.contains(v)), || format!("walk left the first six: {s}"));
                t.check(is_structure(&sub, &s), || format!("walk produced {s}, which does not meet its definition"));
            }
            None => t.fail(format!("walk found nothing from vertex {}", ids[start])),
        }
        if sub.n() >= 10 {
            let r = find_structure(&sub);
            t.check(r.as_ref().is_ok_and(|s| is_structure(&sub, s)), || format!("search on suffix {start}: {r:?}"));
        }
    }
    t
}

fn structure_search(d: &Drawing) -> Tally {
    let mut t = Tally::default();
    let r = find_structure(d);
    t.check(r.as_ref().is_ok_and(|s| is_structure(d, s)), || format!("search returned {r:?}"));
    t
}

fn flag_matching_suite(d: &Drawing) -> Tally {
    let mut t = Tally::default();
    let m = match flag_matching(d) {
        Ok(m) => m,
        Err(e) => {
            t.fail(e.to_string());
            return t;
        }
    };
    t.check(m.len() >= flag_bound(d.n()), || format!("{} edges, bound {}", m.len(), flag_bound(d.n())));
    let c = check_proper(d, &m);
    t.check(c.ok, || format!("not proper: {:?}", c.violations.first()));
    t.check(check_disjoint(d, &m.edges).is_ok(), || "matching edges intersect".into());
    t.check(flag_matching(d).as_ref() == Ok(&m), || "matching not deterministic".into());
    t
}

fn subflag_closure(d: &Drawing) -> Tally {
    let mut t = Tally::default();
    let ids = d.ids();
    let n = ids.len();
    let mut subsets: Vec<Vec<VertexId>> = vec![ids.iter().step_by(2).copied().collect(), ids[n / 2..].to_vec()];
    subsets.extend((0..n.min(4)).map(|skip| ids.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect()));
    for s in subsets.into_iter().filter(|s| s.len() >= 2) {
        let sub = d.induced(&s);
        t.check(sub.is_flag() && sub.is_complete(), || format!("subdrawing on {s:?} is not a complete flag"));
        let r = validate(&sub);
        t.check(r.ok(), || format!("subdrawing on {s:?}: {:?}", r.violations.first()));
    }
    t
}

// ----- mixed drawings -----

/// Circular `v_{i1}v_{i2}`, `v_{i3}v_{i4}` with `i1 < i2 < i3 < i4` and the
/// later pair on one side of the earlier edge: disjoint ones are stacked,
/// crossing ones split the earlier endpoints in one of two ways.
fn circular_pairs(d: &Drawing) -> Tally {
    let mut t = Tally::default();
    let vs = d.vertices();
    let n = vs.len();
    let circ = |i, j| d.edge_at(i, j).filter(|e| e.is_circular());
    for i1 in 0..n {
        for i2 in i1 + 1..n {
            let Some(e) = circ(i1, i2) else { continue };
            let (e_neg, e_pos) = e.split_circular().unwrap();
            for i3 in i2 + 1..n {
                for i4 in i3 + 1..n {
                    let Some(f) = circ(i3, i4) else { continue };
                    let (s3, s4) = (side_of(vs[i3].point(), e), side_of(vs[i4].point(), e));
                    if s3 != s4 || s3.is_none() {
                        continue;
                    }
                    let near = s3.unwrap();
                    let far = near.flip();
                    let (f_neg, _) = f.split_circular().unwrap();
                    let (a1, a2) = (side_of(vs[i1].point(), f), side_of(vs[i2].point(), f));
                    let tag = || format!("edges {:?} {:?}", e.key(), f.key());
                    if crossings(e, f).is_ok_and(|c| c.is_empty()) {
                        let r = relation(f, e);
                        t.check(r == Ok(near), || format!("{}: disjoint but {r:?}", tag()));
                        t.check(a1 == Some(far) && a2 == Some(far), || format!("{}: disjoint, endpoint sides {a1:?} {a2:?}", tag()));
                    } else {
                        let one = a1 == Some(far) && a2 == Some(near) && relation_curves(&f_neg.points, &e_neg.points) == Ok(near);
                        let two = a1 == Some(near) && a2 == Some(far) && relation_curves(&f_neg.points, &e_pos.points) == Ok(near);
                        t.check(one != two, || format!("{}: crossing with endpoint sides {a1:?} {a2:?}", tag()));
                    }
                }
            }
        }
    }
    t
}

fn slab_suite(d: &Drawing) -> Tally {
    let mut t = Tally::default();
    for k in [2, 3, d.n().div_ceil(2)].into_iter().filter(|&k| k >= 2 && k <= d.n()) {
        let p = match slab_partition(d, k) {
            Ok(p) => p,
            Err(e) => {
                t.fail(format!("k = {k}: {e}"));
                continue;
            }
        };
        let short = p.parts.iter().filter(|part| part.len() != k).count();
        t.check(short <= 1, || format!("k = {k}: {short} parts of the wrong size"));
        let flat: Vec<VertexId> = p.parts.concat();
        t.check(flat == d.ids(), || format!("k = {k}: parts do not list the vertices in order"));
        for &c in &p.cuts {
            t.check(recut(d, c).is_ok(), || format!("k = {k}: event on cut {c}"));
        }
    }
    t
}

/// Solves with every intermediate step rechecked.
fn split_disjointness(d: &Drawing) -> Tally {
    let mut t = Tally::default();
    match solve(d, &SolveConfig { verify: true, ..SolveConfig::default() }) {
        Ok(s) => {
            t.checks += s.stats.split_pairs + s.stats.structure_pairs + 1;
            t.check(!s.edges.is_empty(), || "empty result".into());
            let again = solve(d, &SolveConfig::default()).map(|s| s.edges);
            t.check(again.as_ref() == Ok(&s.edges), || "result differs without verification".into());
        }
        Err(e) => t.fail(e.to_string()),
    }
    t
}

fn oracle_dominance(d: &Drawing) -> Tally {
    let mut t = Tally::default();
    let best = match max_disjoint_bruteforce(d) {
        Ok(r) => r,
        Err(e) => {
            t.fail(e.to_string());
            return t;
        }
    };
    let k = best.size();
    t.check(check_disjoint(d, &best.edges).is_ok(), || "oracle set intersects".into());
    t.check(k <= d.n() / 2, || format!("oracle {k} exceeds n/2"));
    match solve(d, &SolveConfig::default()) {
        Ok(s) => {
            t.check(s.edges.len() <= k, || format!("solver {} beats oracle {k}", s.edges.len()));
        }
        Err(e) => t.fail(e.to_string()),
    }
    if d.is_wrap_free() {
        let g = greedy_monotone(d).map(|g| g.len());
        t.check(g == Ok(d.n() / 2) && k == d.n() / 2, || format!("wrap-free: greedy {g:?}, oracle {k}"));
    }
    if d.is_flag() {
        t.check(k >= flag_bound(d.n()), || format!("flag optimum {k} below bound"));
    }
    t
}

// ----- driver -----

/// Deletes vertices one at a time while `run` still fails.
pub fn minimize(d: &Drawing, run: SuiteFn, applies: fn(&Drawing) -> bool) -> Drawing {
    let mut cur = d.clone();
    loop {
        let ids = cur.ids();
        let next = (0..ids.len()).find_map(|skip| {
            let keep: Vec<VertexId> = ids.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
            let sub = cur.induced(&keep);
            (applies(&sub) && run(&sub).failed()).then_some(sub)
        });
        match next {
            Some(sub) => cur = sub,
            None => return cur,
        }
    }
}

/// Runs every suite on every applicable instance. Instances are spread over
/// the available cores; results do not depend on the split.
pub fn run(corpus: &[Instance], suites: &[Suite]) -> LemmaReport {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(corpus.len().max(1));
    let chunk = corpus.len().div_ceil(workers).max(1);
    // per instance, per suite: (applied, tally)
    let per: Vec<Vec<Option<Tally>>> = std::thread::scope(|sc| {
        let handles: Vec<_> = corpus
            .chunks(chunk)
            .map(|part| {
                sc.spawn(move || {
                    part.iter()
                        .map(|inst| suites.iter().map(|s| inst.wants(s).then(|| (s.run)(&inst.drawing))).collect())
                        .collect::<Vec<Vec<Option<Tally>>>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("suite panicked")).collect()
    });
    let mut report = LemmaReport::default();
    for (si, s) in suites.iter().enumerate() {
        let mut r = SuiteResult { name: s.name, instances: 0, checks: 0, failures: 0, counterexample: None };
        for (inst, row) in corpus.iter().zip(&per) {
            let Some(tally) = &row[si] else { continue };
            r.instances += 1;
            r.checks += tally.checks;
            if let Some(msg) = &tally.failure {
                r.failures += 1;
                if r.counterexample.is_none() {
                    let small = minimize(&inst.drawing, s.run, s.applies);
                    let message = (s.run)(&small).failure.unwrap_or_else(|| msg.clone());
                    r.counterexample = Some(Counterexample { instance: inst.label.clone(), message, mcd: serialize_mcd(&small) });
                }
            }
        }
        report.suites.push(r);
    }
    report
}

/// Flags, mixed drawings, recut flags, wrap-free drawings and the named
/// archetypes; `scale` multiplies the random part. `bulk` more flags with
/// 10 to 20 vertices are checked by the structure search only.
pub fn default_corpus(seed: u64, scale: usize, bulk: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    let mut push = |label: String, d: Option<Drawing>| {
        if let Some(d) = d {
            out.push(Instance::new(label, d));
        }
    };
    for (name, d) in gen_archetypes() {
        push(format!("archetype:{name}"), Some(d));
    }
    push("pattern:alternate".into(), Some(flag_from_pattern(&[true, false, true, true, false, false, true, false, true, false, true])));
    for i in 0..(8 * scale) as u64 {
        let s = seed.wrapping_mul(1_000_003).wrapping_add(i);
        let n = 6 + (i as usize % 9);
        push(format!("flag n={n} seed={s}"), gen_flag(&GenConfig::new(n, s)).ok());
        let wrap = [q(0, 1), q(1, 4), q(1, 2), q(3, 4)][i as usize % 4];
        let m = 4 + (i as usize % 9);
        push(format!("mixed n={m} wrap={wrap} seed={s}"), gen_mixed(&GenConfig::new(m, s).with_wrap_prob(wrap)).ok());
    }
    for i in 0..(2 * scale) as u64 {
        let s = seed.wrapping_add(7919 * (i + 1));
        let n = 15 + (i as usize % 12);
        push(format!("flag n={n} seed={s}"), gen_flag(&GenConfig::new(n, s)).ok());
        let f = gen_flag(&GenConfig::new(24 + (i as usize % 16), s)).ok();
        let cut = f.as_ref().and_then(|f| [q(2, 7), q(3, 7), q(4, 7), q(5, 9)].iter().find_map(|&a| recut(f, a).ok()));
        push(format!("recut flag seed={s}"), cut);
    }
    const SEARCH: &[&str] = &["structure-search"];
    for i in 0..bulk as u64 {
        let s = seed.wrapping_mul(31).wrapping_add(100_000 + i);
        let n = 10 + (i as usize % 11);
        if let Ok(d) = gen_flag(&GenConfig::new(n, s)) {
            out.push(Instance { label: format!("bulk flag n={n} seed={s}"), drawing: d, only: Some(SEARCH) });
        }
    }
    out
}
