//! Broken copies of valid drawings, for exercising the validator.

use crate::geometry::{crossings, recut_unchecked, Drawing, EdgeCurve, Point, ViolationKind, Wrap};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fault {
    /// A narrow spike on one edge that pokes through its neighbour and back.
    DoubleCrossing,
    /// The same spike stopping exactly on the neighbour.
    Tangency,
    /// The cut moved onto the first vertex.
    VertexAtCut,
    /// One edge replaced by a wrap-around edge from its right endpoint.
    SpanTooLong,
    /// The first two vertices pushed to the same x.
    DuplicateX,
}

impl Fault {
    pub const ALL: [Fault; 5] =
        [Fault::DoubleCrossing, Fault::Tangency, Fault::VertexAtCut, Fault::SpanTooLong, Fault::DuplicateX];

    /// The violation the validator must report for this fault.
    pub fn expected(self) -> ViolationKind {
        match self {
            Fault::DoubleCrossing => ViolationKind::DoubleCrossing,
            Fault::Tangency => ViolationKind::Tangency,
            Fault::VertexAtCut => ViolationKind::EventAtCut,
            Fault::SpanTooLong => ViolationKind::SpanTooLong,
            Fault::DuplicateX => ViolationKind::DuplicateX,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Fault::DoubleCrossing => "double-crossing",
            Fault::Tangency => "tangency",
            Fault::VertexAtCut => "vertex-at-cut",
            Fault::SpanTooLong => "span-too-long",
            Fault::DuplicateX => "duplicate-x",
        }
    }
}

/// A copy of the valid drawing `d` carrying `fault`, or `None` when `d` is
/// too small to host it (spikes need two edges over a common vertical line).
pub fn inject(d: &Drawing, fault: Fault) -> Option<Drawing> {
    match fault {
        Fault::VertexAtCut => (d.n() > 0).then(|| recut_unchecked(d, d.vertices()[0].x)),
        Fault::DuplicateX => collapse_first_gap(d),
        Fault::SpanTooLong => reverse_first_edge(d),
        Fault::DoubleCrossing => spike(d, false),
        Fault::Tangency => spike(d, true),
    }
}

fn collapse_first_gap(d: &Drawing) -> Option<Drawing> {
    let vs = d.vertices();
    if vs.len() < 2 {
        return None;
    }
    let (x0, x1) = (vs[0].x, vs[1].x);
    // monotone map of the cylinder squeezing [x0, x1] to x0
    let phi = |x: Rational| {
        let k = Rational::from_int(x.floor());
        let f = x.fract();
        k + if f <= x0 {
            f
        } else if f <= x1 {
            x0
        } else {
            f - (x1 - x0)
        }
    };
    let vertices = vs.iter().map(|v| crate::geometry::Vertex { x: phi(v.x), ..*v }).collect();
    let edges = d
        .edges()
        .iter()
        .map(|e| EdgeCurve { points: e.points.iter().map(|p| Point::new(phi(p.x), p.y)).collect(), ..e.clone() })
        .collect();
    Drawing::new(vertices, edges).ok()
}

fn reverse_first_edge(d: &Drawing) -> Option<Drawing> {
    let e = d.edges().first()?;
    let (a, b) = (d.vertex(e.u)?, d.vertex(e.v)?);
    let reversed = EdgeCurve {
        u: e.v,
        v: e.u,
        wrap: Wrap::Circular,
        points: vec![a.point(), Point::new(b.x + Rational::ONE, b.y)],
    };
    let mut edges = d.edges().to_vec();
    edges[0] = reversed;
    Drawing::new(d.vertices().to_vec(), edges).ok()
}

/// Cylinder x of every vertex, breakpoint and crossing.
fn event_xs(d: &Drawing) -> Vec<Rational> {
    let es = d.edges();
    let mut xs: Vec<Rational> = es.iter().flat_map(|e| e.points.iter().map(|p| p.x.fract())).collect();
    for (i, e) in es.iter().enumerate() {
        for f in &es[i + 1..] {
            if let Ok(ps) = crossings(e, f) {
                xs.extend(ps.iter().map(|p| p.x.fract()));
            }
        }
    }
    xs.push(Rational::ZERO);
    xs.sort_unstable();
    xs.dedup();
    xs
}

/// Adds a three-point spike to the first edge that has another edge over an
/// event-free stretch of its domain. The apex lands on the nearest such
/// edge (`touch`) or just past it.
fn spike(d: &Drawing, touch: bool) -> Option<Drawing> {
    let events = event_xs(d);
    let one = Rational::ONE;
    for (ei, e) in d.edges().iter().enumerate() {
        let (s, t) = (e.start().x, e.end().x);
        let mut cuts: Vec<Rational> =
            events.iter().flat_map(|&x| [x, x + one]).filter(|&x| s < x && x < t).collect();
        cuts.push(s);
        cuts.push(t);
        cuts.sort_unstable();
        for w in cuts.windows(2) {
            let mid = Rational::midpoint(w[0], w[1]);
            let delta = (w[1] - w[0]) / Rational::from_int(4);
            let ye = e.eval_lift(mid)?;
            let mut above: Vec<Rational> = Vec::new();
            let mut below: Vec<Rational> = Vec::new();
            for (fi, f) in d.edges().iter().enumerate() {
                if fi == ei {
                    continue;
                }
                if let Some(y) = f.eval_at(mid.fract()) {
                    if y > ye {
                        above.push(y);
                    } else if y < ye {
                        below.push(y);
                    }
                }
            }
            above.sort_unstable();
            below.sort_unstable_by(|a, b| b.cmp(a));
            let apex = match (above.first(), below.first()) {
                (Some(&y), _) => reach(y, above.get(1).copied(), one, touch),
                (None, Some(&y)) => reach(y, below.get(1).copied(), -one, touch),
                (None, None) => continue,
            };
            let (l, r) = (mid - delta, mid + delta);
            let mut points = e.points.clone();
            let at = points.partition_point(|p| p.x < l);
            let spike = [Point::new(l, e.eval_lift(l)?), Point::new(mid, apex), Point::new(r, e.eval_lift(r)?)];
            points.splice(at..at, spike);
            let mut edges = d.edges().to_vec();
            edges[ei] = EdgeCurve { points, ..e.clone() };
            return Drawing::new(d.vertices().to_vec(), edges).ok();
        }
    }
    None
}

/// The apex height: exactly `y`, or halfway to the next edge beyond it.
fn reach(y: Rational, next: Option<Rational>, dir: Rational, touch: bool) -> Rational {
    if touch {
        return y;
    }
    match next {
        Some(z) => Rational::midpoint(y, z),
        None => y + dir,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_flag, gen_mixed, GenConfig};
    use crate::geometry::validate;

    #[test]
    fn every_fault_is_reported() {
        for seed in 0..6 {
            let drawings = [gen_flag(&GenConfig::new(8, seed)).unwrap(), gen_mixed(&GenConfig::new(8, seed)).unwrap()];
            for d in &drawings {
                for f in Fault::ALL {
                    let bad = inject(d, f).unwrap();
                    let r = validate(&bad);
                    assert!(r.has(f.expected()), "{} seed {seed}: {:?}", f.name(), r.violations);
                }
            }
        }
    }
}
