//! Drawing validation: structural checks followed by the column sweep.

use std::collections::HashMap;
use std::fmt;

use super::predicates::{crossings, point_relation, DegenerateKind};
use super::{Drawing, Point, VertexId};
use crate::rational::Rational;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ViolationKind {
    /// Two edges share more than one point (two crossings, or a crossing
    /// between edges with a common endpoint).
    DoubleCrossing,
    /// Two edges touch without crossing, or overlap.
    Tangency,
    /// An edge passes through a vertex that is not its endpoint.
    VertexOnEdge,
    /// An edge spans an x-range of length at least 1.
    SpanTooLong,
    /// Two vertices share an x-coordinate.
    DuplicateX,
    /// A vertex, breakpoint or contact on the cut line `x = 0`.
    EventAtCut,
    /// Polyline x-coordinates not strictly increasing.
    NonMonotone,
    /// Three or more edges through one point.
    Concurrency,
    /// A vertex x outside `[0, 1)`.
    OutOfRange,
}

impl ViolationKind {
    pub fn name(self) -> &'static str {
        match self {
            ViolationKind::DoubleCrossing => "double-crossing",
            ViolationKind::Tangency => "tangency",
            ViolationKind::VertexOnEdge => "vertex-on-edge",
            ViolationKind::SpanTooLong => "span>=1",
            ViolationKind::DuplicateX => "duplicate-x",
            ViolationKind::EventAtCut => "event-at-cut",
            ViolationKind::NonMonotone => "non-monotone",
            ViolationKind::Concurrency => "concurrency",
            ViolationKind::OutOfRange => "out-of-range",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Offender {
    Vertex(VertexId),
    Edge(VertexId, VertexId),
}

impl fmt::Display for Offender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Offender::Vertex(v) => write!(f, "vertex {v}"),
            Offender::Edge(u, v) => write!(f, "edge {u}-{v}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    pub kind: ViolationKind,
    pub offenders: Vec<Offender>,
    pub witness: Option<Point>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.kind.name())?;
        for o in &self.offenders {
            write!(f, " {o}")?;
        }
        if let Some(p) = self.witness {
            write!(f, " at {p}")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Set when more violations existed than were recorded.
    pub truncated: bool,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

const CAP: usize = 256;

/// Checks vertices and polylines one at a time.
fn structural(d: &Drawing) -> Vec<Violation> {
    let mut out = Vec::new();
    let vs = d.vertices();
    for v in vs {
        if v.x.is_zero() {
            out.push(Violation { kind: ViolationKind::EventAtCut, offenders: vec![Offender::Vertex(v.id)], witness: Some(v.point()) });
        } else if v.x < Rational::ZERO || v.x >= Rational::ONE {
            out.push(Violation { kind: ViolationKind::OutOfRange, offenders: vec![Offender::Vertex(v.id)], witness: Some(v.point()) });
        }
    }
    for w in vs.windows(2) {
        if w[0].x == w[1].x {
            out.push(Violation {
                kind: ViolationKind::DuplicateX,
                offenders: vec![Offender::Vertex(w[0].id), Offender::Vertex(w[1].id)],
                witness: Some(w[1].point()),
            });
        }
    }
    for e in d.edges() {
        let who = vec![Offender::Edge(e.u, e.v)];
        if let Some(w) = e.points.windows(2).find(|w| w[1].x <= w[0].x) {
            out.push(Violation { kind: ViolationKind::NonMonotone, offenders: who, witness: Some(w[1]) });
            continue;
        }
        if e.span() >= Rational::ONE {
            out.push(Violation { kind: ViolationKind::SpanTooLong, offenders: who.clone(), witness: Some(e.end()) });
        }
        if let Some(p) = e.points.iter().find(|p| p.x.is_integer()) {
            out.push(Violation { kind: ViolationKind::EventAtCut, offenders: who, witness: Some(*p) });
        }
    }
    out
}

/// Full validation of a drawing.
pub fn validate(d: &Drawing) -> ValidationReport {
    let violations = structural(d);
    if !violations.is_empty() {
        return ValidationReport { violations, truncated: false };
    }
    match super::sweep::sweep(d, CAP) {
        Some((_, violations, truncated)) => ValidationReport { violations, truncated },
        None => validate_bruteforce(d),
    }
}

/// Pairwise validation through [`crossings`] and [`point_relation`].
/// Quadratic in the number of edges; used to cross-check [`validate`].
pub fn validate_bruteforce(d: &Drawing) -> ValidationReport {
    let mut violations = structural(d);
    if !violations.is_empty() {
        return ValidationReport { violations, truncated: false };
    }
    let es = d.edges();
    for w in d.vertices() {
        for e in es.iter().filter(|e| !e.has_endpoint(w.id)) {
            if point_relation(w.point(), e).is_err() {
                violations.push(Violation {
                    kind: ViolationKind::VertexOnEdge,
                    offenders: vec![Offender::Vertex(w.id), Offender::Edge(e.u, e.v)],
                    witness: Some(w.point()),
                });
            }
        }
    }
    let vertex_points: std::collections::HashSet<Point> = d.vertices().iter().map(|v| v.point()).collect();
    let mut at_point: HashMap<Point, Vec<Offender>> = HashMap::new();
    for (i, e) in es.iter().enumerate() {
        for f in &es[i + 1..] {
            let who = vec![Offender::Edge(e.u, e.v), Offender::Edge(f.u, f.v)];
            match crossings(e, f) {
                Err(deg) => {
                    if deg.kind == DegenerateKind::EndpointIncidence && vertex_points.contains(&deg.at) {
                        continue; // reported above as vertex-on-edge
                    }
                    let cyl = Point::new(deg.at.x.fract(), deg.at.y);
                    let kind = if cyl.x.is_zero() { ViolationKind::EventAtCut } else { ViolationKind::Tangency };
                    violations.push(Violation { kind, offenders: who, witness: Some(cyl) });
                }
                Ok(xs) => {
                    for p in &xs {
                        let cyl = Point::new(p.x.fract(), p.y);
                        if cyl.x.is_zero() {
                            violations.push(Violation { kind: ViolationKind::EventAtCut, offenders: who.clone(), witness: Some(cyl) });
                        }
                        let list = at_point.entry(cyl).or_default();
                        list.push(who[0]);
                        list.push(who[1]);
                    }
                    if xs.len() > 1 || (!xs.is_empty() && e.shares_endpoint(f)) {
                        violations.push(Violation { kind: ViolationKind::DoubleCrossing, offenders: who, witness: xs.last().copied() });
                    }
                }
            }
        }
    }
    let mut multi: Vec<(Point, Vec<Offender>)> = at_point
        .into_iter()
        .filter_map(|(p, mut v)| {
            v.sort();
            v.dedup();
            (v.len() > 2).then_some((p, v))
        })
        .collect();
    multi.sort_by_key(|a| (a.0.x, a.0.y));
    for (p, offenders) in multi {
        violations.push(Violation { kind: ViolationKind::Concurrency, offenders, witness: Some(p) });
    }
    ValidationReport { violations, truncated: false }
}
