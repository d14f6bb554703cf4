//! Column sweep over the cylinder.
//!
//! Events are the cut line, every vertex x and every breakpoint x (mod 1).
//! Between consecutive events each edge is one straight segment, so two
//! edges cross inside a column exactly when their order at the left
//! boundary and at the right boundary disagree. Those pairs are enumerated
//! as inversions by a merge sort. Contacts on an event line are classified
//! from one-sided slopes.

use std::cmp::Ordering;

use num_integer::Integer;

use super::predicates::crossings;
use super::validate::{Offender, Violation, ViolationKind};
use super::{Drawing, Point};
use crate::rational::Rational;

/// Which pairs of edges of one drawing cross, by edge index.
#[derive(Clone, Debug)]
pub struct CrossingTable {
    m: usize,
    bits: Vec<u64>,
    count: u64,
}

fn tri(i: usize, j: usize) -> u64 {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    (b as u64) * (b as u64 - 1) / 2 + a as u64
}

impl CrossingTable {
    fn new(m: usize) -> CrossingTable {
        let pairs = (m as u64) * (m as u64).saturating_sub(1) / 2;
        CrossingTable { m, bits: vec![0; pairs.div_ceil(64) as usize], count: 0 }
    }

    /// Sets the bit for a pair; returns whether it was already set.
    fn mark(&mut self, i: usize, j: usize) -> bool {
        let k = tri(i, j);
        let (w, b) = ((k / 64) as usize, k % 64);
        let seen = self.bits[w] >> b & 1 == 1;
        self.bits[w] |= 1 << b;
        if !seen {
            self.count += 1;
        }
        seen
    }

    /// Builds the table for a drawing; fails with the violations found if
    /// the drawing is not simple.
    pub fn build(d: &Drawing) -> Result<CrossingTable, Vec<Violation>> {
        if let Some((table, violations, _)) = sweep(d, 16) {
            return if violations.is_empty() { Ok(table) } else { Err(violations) };
        }
        let report = super::validate_bruteforce(d);
        if !report.ok() {
            return Err(report.violations);
        }
        let es = d.edges();
        let mut table = CrossingTable::new(es.len());
        for i in 0..es.len() {
            for j in i + 1..es.len() {
                if crossings(&es[i], &es[j]).is_ok_and(|c| !c.is_empty()) {
                    table.mark(i, j);
                }
            }
        }
        Ok(table)
    }

    pub fn crosses(&self, i: usize, j: usize) -> bool {
        if i == j || i >= self.m || j >= self.m {
            return false;
        }
        let k = tri(i, j);
        self.bits[(k / 64) as usize] >> (k % 64) & 1 == 1
    }

    /// Number of crossing pairs.
    pub fn count(&self) -> u64 {
        self.count
    }
}

/// Exact value `n / d` with `d > 0`, compared by cross-multiplication.
#[derive(Clone, Copy, Debug)]
struct Frac {
    n: i128,
    d: i128,
}

impl Frac {
    fn int(n: i128) -> Frac {
        Frac { n, d: 1 }
    }

    fn to_rational(self, scale: i128) -> Rational {
        Rational::new(self.n, self.d * scale)
    }
}

impl PartialEq for Frac {
    fn eq(&self, o: &Frac) -> bool {
        self.n * o.d == o.n * self.d
    }
}

impl Eq for Frac {}

impl PartialOrd for Frac {
    fn partial_cmp(&self, o: &Frac) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Frac {
    fn cmp(&self, o: &Frac) -> Ordering {
        (self.n * o.d).cmp(&(o.n * self.d))
    }
}

// Bounds that keep every product in `Frac::cmp` inside i128.
const MAX_DEN: i128 = 1 << 31;
const MAX_Y: i128 = 1 << 40;

/// The drawing on an integer grid: x scaled by `dx`, y by `dy`.
struct Grid {
    dx: i128,
    dy: i128,
    vertices: Vec<(i128, i128)>,
    edges: Vec<Vec<(i128, i128)>>,
}

fn to_grid(d: &Drawing) -> Option<Grid> {
    let mut dx = 1i128;
    let mut dy = 1i128;
    let points = d.vertices().iter().map(|v| v.point()).chain(d.edges().iter().flat_map(|e| e.points.iter().copied()));
    for p in points {
        dx = dx.lcm(&p.x.denom());
        dy = dy.lcm(&p.y.denom());
        if dx > MAX_DEN || dy > MAX_DEN {
            return None;
        }
    }
    let sx = |x: Rational| x.numer() * (dx / x.denom());
    let sy = |y: Rational| y.numer().checked_mul(dy / y.denom()).filter(|v| v.abs() <= MAX_Y);
    let vertices = d.vertices().iter().map(|v| Some((sx(v.x), sy(v.y)?))).collect::<Option<Vec<_>>>()?;
    let edges = d
        .edges()
        .iter()
        .map(|e| e.points.iter().map(|p| Some((sx(p.x), sy(p.y)?))).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    Some(Grid { dx, dy, vertices, edges })
}

/// Value of the segment `a -> b` at lift x.
fn value(a: (i128, i128), b: (i128, i128), x: i128) -> Frac {
    let w = b.0 - a.0;
    Frac { n: a.1 * w + (b.1 - a.1) * (x - a.0), d: w }
}

fn slope(a: (i128, i128), b: (i128, i128)) -> Frac {
    Frac { n: b.1 - a.1, d: b.0 - a.0 }
}

/// One edge inside one column.
#[derive(Clone, Copy)]
struct Item {
    yl: Frac,
    yr: Frac,
    slope: Frac,
    edge: usize,
}

struct Recorder<'a> {
    d: &'a Drawing,
    ends: Vec<(u32, u32)>,
    table: CrossingTable,
    violations: Vec<Violation>,
    cap: usize,
    truncated: bool,
}

impl Recorder<'_> {
    fn push(&mut self, v: Violation) {
        if self.violations.len() < self.cap {
            self.violations.push(v);
        } else {
            self.truncated = true;
        }
    }

    fn edge_offender(&self, i: usize) -> Offender {
        let e = &self.d.edges()[i];
        Offender::Edge(e.u, e.v)
    }

    fn crossing(&mut self, i: usize, j: usize, at: impl FnOnce() -> Point) {
        let seen = self.table.mark(i, j);
        let ((a, b), (c, d)) = (self.ends[i], self.ends[j]);
        if seen || a == c || a == d || b == c || b == d {
            let offenders = vec![self.edge_offender(i), self.edge_offender(j)];
            self.push(Violation { kind: ViolationKind::DoubleCrossing, offenders, witness: Some(at()) });
        }
    }
}

/// Natural merge sort of `items` by `yr`, calling `hit(a, b)` for every
/// pair whose order strictly flips.
fn inversions(items: &mut Vec<Item>, hit: &mut impl FnMut(usize, usize)) {
    let n = items.len();
    let mut runs: Vec<usize> = vec![0];
    for i in 1..n {
        if items[i].yr < items[i - 1].yr {
            runs.push(i);
        }
    }
    runs.push(n);
    let mut buf = items.clone();
    while runs.len() > 2 {
        let mut next_runs = vec![0];
        let mut r = 0;
        while r + 1 < runs.len() {
            let lo = runs[r];
            let mid = runs[r + 1];
            let hi = if r + 2 < runs.len() { runs[r + 2] } else { mid };
            let (mut i, mut j, mut k) = (lo, mid, lo);
            while i < mid && j < hi {
                if items[j].yr < items[i].yr {
                    for l in &items[i..mid] {
                        hit(l.edge, items[j].edge);
                    }
                    buf[k] = items[j];
                    j += 1;
                } else {
                    buf[k] = items[i];
                    i += 1;
                }
                k += 1;
            }
            buf[k..k + mid - i].copy_from_slice(&items[i..mid]);
            k += mid - i;
            buf[k..k + hi - j].copy_from_slice(&items[j..hi]);
            next_runs.push(hi);
            r += 2;
        }
        std::mem::swap(items, &mut buf);
        runs = next_runs;
    }
}

/// An edge meeting an event line: its value there and one-sided slopes.
struct Contact {
    edge: usize,
    left: Option<Frac>,
    right: Option<Frac>,
}

/// Runs the sweep. Assumes the structural checks of `validate` passed.
/// Returns `None` when the coordinates do not fit the integer grid.
pub(crate) fn sweep(d: &Drawing, cap: usize) -> Option<(CrossingTable, Vec<Violation>, bool)> {
    let g = to_grid(d)?;
    let m = g.edges.len();
    let dx = g.dx;
    let ends = d.edges().iter().map(|e| (e.u, e.v)).collect();
    let mut rec = Recorder { d, ends, table: CrossingTable::new(m), violations: Vec::new(), cap, truncated: false };
    let xr = |x: i128| Rational::new(x, dx);
    let yr = |f: Frac| f.to_rational(g.dy);

    let mut ev: Vec<i128> = vec![0];
    ev.extend(g.vertices.iter().map(|v| v.0));
    for e in &g.edges {
        ev.extend(e.iter().map(|p| p.0.rem_euclid(dx)));
    }
    ev.sort_unstable();
    ev.dedup();
    let slot = |x: i128| ev.binary_search(&x.rem_euclid(dx)).unwrap();
    let mut starts: Vec<Vec<usize>> = vec![Vec::new(); ev.len()];
    for (i, e) in g.edges.iter().enumerate() {
        starts[slot(e[0].0)].push(i);
    }
    let mut vertex_at: Vec<Option<usize>> = vec![None; ev.len()];
    for (k, v) in g.vertices.iter().enumerate() {
        vertex_at[slot(v.0)] = Some(k);
    }

    // edges running through the cut line
    let mut shift = vec![0i128; m];
    let mut seg = vec![0usize; m];
    let mut cur: Vec<usize> = Vec::new();
    let mut at_cut: Vec<(Frac, usize)> = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        let end = e[e.len() - 1].0;
        if end > dx {
            let s = e.partition_point(|p| p.0 <= dx) - 1;
            shift[i] = dx;
            seg[i] = s;
            cur.push(i);
            at_cut.push((value(e[s], e[s + 1], dx), i));
        }
    }
    at_cut.sort_by_key(|a| a.0);
    let mut h = 0;
    while h < at_cut.len() {
        let mut t = h + 1;
        while t < at_cut.len() && at_cut[t].0 == at_cut[h].0 {
            t += 1;
        }
        if t - h >= 2 {
            let offenders = at_cut[h..t].iter().map(|c| rec.edge_offender(c.1)).collect();
            let witness = Some(Point::new(Rational::ZERO, yr(at_cut[h].0)));
            rec.push(Violation { kind: ViolationKind::EventAtCut, offenders, witness });
        }
        h = t;
    }

    let mut ends = vec![(Frac::int(0), Frac::int(0)); m];
    let mut prev: Vec<Item> = Vec::new();
    for k in 0..ev.len() {
        let x = ev[k];
        let next = ev.get(k + 1).copied().unwrap_or(dx);
        if k > 0 {
            cur.clear();
            for it in &prev {
                let e = &g.edges[it.edge];
                if e[e.len() - 1].0 != x + shift[it.edge] {
                    cur.push(it.edge);
                }
            }
            for &i in &starts[k] {
                shift[i] = 0;
                seg[i] = 0;
                cur.push(i);
            }
        }
        let mut items: Vec<Item> = cur
            .iter()
            .map(|&i| {
                let e = &g.edges[i];
                let (lx, rx) = (x + shift[i], next + shift[i]);
                while e[seg[i] + 1].0 <= lx {
                    seg[i] += 1;
                }
                let (a, b) = (e[seg[i]], e[seg[i] + 1]);
                Item { yl: value(a, b, lx), yr: value(a, b, rx), slope: slope(a, b), edge: i }
            })
            .collect();
        items.sort_by(|a, b| a.yl.cmp(&b.yl).then(a.yr.cmp(&b.yr)));

        if k > 0 {
            contacts(&mut rec, &g, &prev, &items, vertex_at[k], xr(x));
        }

        for it in &items {
            ends[it.edge] = (it.yl, it.yr);
        }
        inversions(&mut items, &mut |a, b| {
            rec.crossing(a, b, || {
                let (la, ra) = (yr(ends[a].0), yr(ends[a].1));
                let (lb, rb) = (yr(ends[b].0), yr(ends[b].1));
                let dl = la - lb;
                let t = dl / (dl - (ra - rb));
                Point::new(xr(x) + (xr(next) - xr(x)) * t, la + (ra - la) * t)
            })
        });
        prev = items;
    }
    let Recorder { table, violations, truncated, .. } = rec;
    Some((table, violations, truncated))
}

/// Classifies the contacts on one event line from the columns on either side.
fn contacts(rec: &mut Recorder, g: &Grid, prev: &[Item], next: &[Item], vertex: Option<usize>, x: Rational) {
    let edges = rec.d.edges();
    let w = vertex.map(|k| (&rec.d.vertices()[k], Frac::int(g.vertices[k].1)));
    let (mut i, mut j) = (0, 0);
    while i < prev.len() || j < next.len() {
        let y = match (prev.get(i), next.get(j)) {
            (Some(a), Some(b)) => a.yr.min(b.yl),
            (Some(a), None) => a.yr,
            (None, Some(b)) => b.yl,
            (None, None) => unreachable!(),
        };
        let mut group: Vec<Contact> = Vec::new();
        while i < prev.len() && prev[i].yr == y {
            group.push(Contact { edge: prev[i].edge, left: Some(prev[i].slope), right: None });
            i += 1;
        }
        while j < next.len() && next[j].yl == y {
            match group.iter_mut().find(|c| c.edge == next[j].edge) {
                Some(c) => c.right = Some(next[j].slope),
                None => group.push(Contact { edge: next[j].edge, left: None, right: Some(next[j].slope) }),
            }
            j += 1;
        }
        let at = || Point::new(x, y.to_rational(g.dy));
        if let Some((v, _)) = w.filter(|(_, vy)| *vy == y) {
            for c in group.iter().filter(|c| !edges[c.edge].has_endpoint(v.id)) {
                let offenders = vec![Offender::Vertex(v.id), rec.edge_offender(c.edge)];
                rec.push(Violation { kind: ViolationKind::VertexOnEdge, offenders, witness: Some(v.point()) });
            }
            continue;
        }
        if group.len() < 2 {
            continue;
        }
        let offenders: Vec<Offender> = group.iter().map(|c| rec.edge_offender(c.edge)).collect();
        if group.len() > 2 {
            rec.push(Violation { kind: ViolationKind::Concurrency, offenders, witness: Some(at()) });
            continue;
        }
        let (a, b) = (&group[0], &group[1]);
        let proper = match (a.left, b.left, a.right, b.right) {
            (Some(la), Some(lb), Some(ra), Some(rb)) if la != lb && ra != rb => (la < lb) == (ra < rb),
            _ => false,
        };
        if proper {
            rec.crossing(a.edge, b.edge, at);
        } else {
            rec.push(Violation { kind: ViolationKind::Tangency, offenders, witness: Some(at()) });
        }
    }
}
