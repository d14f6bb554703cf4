//! Monotone cylindrical drawings with piecewise-linear edges.
//!
//! The cylinder is `[0,1) x R`. An edge is stored as a polyline in lift
//! (universal cover) coordinates: x strictly increasing, total span below 1.
//! A direct edge runs from `u` to `v`; a circular edge runs from `v` to
//! `u + 1` and so crosses the cut line `x = 0`.

mod predicates;
mod recut;
mod sweep;
mod validate;

use std::collections::HashMap;
use std::fmt;

use crate::rational::Rational;

pub use predicates::{
    crossings, crossings_curves, point_relation, relation, relation_curves, Degenerate,
    DegenerateKind, RelationResult,
};
pub(crate) use recut::recut_unchecked;
pub use recut::{recut, RecutError};
pub use sweep::CrossingTable;
pub use validate::{validate, validate_bruteforce, Offender, ValidationReport, Violation, ViolationKind};

pub type VertexId = u32;

/// An edge named by its endpoints, left endpoint (smaller x) first.
pub type EdgeKey = (VertexId, VertexId);

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Point {
        Point { x, y }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Vertex {
    pub id: VertexId,
    pub x: Rational,
    pub y: Rational,
}

impl Vertex {
    pub fn point(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Wrap {
    Direct,
    Circular,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EdgeCurve {
    /// Endpoint with the smaller x.
    pub u: VertexId,
    /// Endpoint with the larger x.
    pub v: VertexId,
    pub wrap: Wrap,
    /// Lift-coordinate polyline.
    pub points: Vec<Point>,
}

/// A sub-polyline of a circular edge on one side of the cut.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CurvePiece {
    pub points: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SplitError {
    #[error("edge {0}-{1} is direct")]
    NotCircular(VertexId, VertexId),
}

/// Linear interpolation on a lift polyline, closed domain.
pub(crate) fn eval_poly(points: &[Point], x: Rational) -> Option<Rational> {
    let first = points.first()?;
    let last = points.last()?;
    if x < first.x || x > last.x {
        return None;
    }
    // index of the first point with px >= x
    let i = points.partition_point(|p| p.x < x);
    let b = points[i];
    if b.x == x {
        return Some(b.y);
    }
    let a = points[i - 1];
    Some(a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x))
}

impl EdgeCurve {
    pub fn key(&self) -> EdgeKey {
        (self.u, self.v)
    }

    pub fn is_circular(&self) -> bool {
        self.wrap == Wrap::Circular
    }

    pub fn start(&self) -> Point {
        self.points[0]
    }

    pub fn end(&self) -> Point {
        *self.points.last().expect("polyline has at least two points")
    }

    pub fn span(&self) -> Rational {
        self.end().x - self.start().x
    }

    pub fn shares_endpoint(&self, other: &EdgeCurve) -> bool {
        self.u == other.u || self.u == other.v || self.v == other.u || self.v == other.v
    }

    pub fn has_endpoint(&self, id: VertexId) -> bool {
        self.u == id || self.v == id
    }

    /// Lift-coordinate y at lift x, on the closed domain.
    pub fn eval_lift(&self, x: Rational) -> Option<Rational> {
        eval_poly(&self.points, x)
    }

    /// The lift x (`x` or `x+1`) at which cylinder coordinate `x` meets the
    /// edge's closed domain.
    pub fn lift_of(&self, x: Rational) -> Option<Rational> {
        let (s, e) = (self.start().x, self.end().x);
        if s <= x && x <= e {
            return Some(x);
        }
        let x1 = x + Rational::ONE;
        if s <= x1 && x1 <= e {
            return Some(x1);
        }
        None
    }

    /// The y-coordinate where the vertical line at cylinder coordinate `x`
    /// (`0 <= x < 1`) meets the edge, if it does.
    pub fn eval_at(&self, x: Rational) -> Option<Rational> {
        self.lift_of(x).and_then(|lx| self.eval_lift(lx))
    }

    /// Splits a circular edge at the cut into its negative part (lift x in
    /// `(1, x_u + 1)`) and positive part (lift x in `(x_v, 1)`). Both pieces
    /// include the cut point, whose y equals `eval_at(0)`.
    pub fn split_circular(&self) -> Result<(CurvePiece, CurvePiece), SplitError> {
        if !self.is_circular() {
            return Err(SplitError::NotCircular(self.u, self.v));
        }
        let one = Rational::ONE;
        let cut = Point::new(one, self.eval_lift(one).expect("circular edge spans the cut"));
        let mut positive: Vec<Point> = self.points.iter().copied().filter(|p| p.x < one).collect();
        positive.push(cut);
        let mut negative = vec![cut];
        negative.extend(self.points.iter().copied().filter(|p| p.x > one));
        Ok((CurvePiece { points: negative }, CurvePiece { points: positive }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DrawingError {
    #[error("vertex id {0} appears twice")]
    DuplicateVertex(VertexId),
    #[error("edge refers to unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("edge {0}-{1} appears twice")]
    DuplicateEdge(VertexId, VertexId),
    #[error("edge {0}-{0} is a loop")]
    Loop(VertexId),
    #[error("edge {0}-{1} has fewer than two polyline points")]
    TooFewPoints(VertexId, VertexId),
    #[error("edge {0}-{1}: polyline does not start and end at its endpoints")]
    EndpointMismatch(VertexId, VertexId),
}

/// A drawing: vertices sorted by x and edges sorted by endpoint positions.
///
/// Construction checks only structure (ids, endpoint placement); geometric
/// validity is the job of [`validate`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Drawing {
    vertices: Vec<Vertex>,
    edges: Vec<EdgeCurve>,
    pos: HashMap<VertexId, usize>,
    edge_ix: HashMap<EdgeKey, usize>,
}

impl Drawing {
    pub fn new(mut vertices: Vec<Vertex>, mut edges: Vec<EdgeCurve>) -> Result<Drawing, DrawingError> {
        vertices.sort_by(|a, b| a.x.cmp(&b.x).then(a.id.cmp(&b.id)));
        let mut pos = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if pos.insert(v.id, i).is_some() {
                return Err(DrawingError::DuplicateVertex(v.id));
            }
        }
        for e in &edges {
            if e.u == e.v {
                return Err(DrawingError::Loop(e.u));
            }
            let pu = *pos.get(&e.u).ok_or(DrawingError::UnknownVertex(e.u))?;
            let pv = *pos.get(&e.v).ok_or(DrawingError::UnknownVertex(e.v))?;
            if e.points.len() < 2 {
                return Err(DrawingError::TooFewPoints(e.u, e.v));
            }
            // a reversed edge is well formed here and caught by `validate`
            // (non-monotone when direct, too long when circular)
            let (a, b) = (vertices[pu], vertices[pv]);
            let (s, t) = match e.wrap {
                Wrap::Direct => (a.point(), b.point()),
                Wrap::Circular => (b.point(), Point::new(a.x + Rational::ONE, a.y)),
            };
            if e.start() != s || e.end() != t {
                return Err(DrawingError::EndpointMismatch(e.u, e.v));
            }
        }
        edges.sort_by_key(|e| (pos[&e.u], pos[&e.v]));
        let mut edge_ix = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if edge_ix.insert(e.key(), i).is_some() {
                return Err(DrawingError::DuplicateEdge(e.u, e.v));
            }
        }
        // reject {u,v} stored in both orientations
        for e in &edges {
            if edge_ix.contains_key(&(e.v, e.u)) {
                return Err(DrawingError::DuplicateEdge(e.u, e.v));
            }
        }
        Ok(Drawing { vertices, edges, pos, edge_ix })
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeCurve] {
        &self.edges
    }

    pub fn ids(&self) -> Vec<VertexId> {
        self.vertices.iter().map(|v| v.id).collect()
    }

    /// Position of a vertex in x order.
    pub fn position(&self, id: VertexId) -> Option<usize> {
        self.pos.get(&id).copied()
    }

    pub fn vertex(&self, id: VertexId) -> Option<&Vertex> {
        self.position(id).map(|p| &self.vertices[p])
    }

    /// Index into [`Drawing::edges`] of the edge joining `a` and `b`, in either order.
    pub fn edge_index(&self, a: VertexId, b: VertexId) -> Option<usize> {
        self.edge_ix.get(&(a, b)).or_else(|| self.edge_ix.get(&(b, a))).copied()
    }

    pub fn edge(&self, a: VertexId, b: VertexId) -> Option<&EdgeCurve> {
        self.edge_index(a, b).map(|i| &self.edges[i])
    }

    /// Edge between the vertices at x-order positions `i` and `j`.
    pub fn edge_at(&self, i: usize, j: usize) -> Option<&EdgeCurve> {
        self.edge(self.vertices[i].id, self.vertices[j].id)
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n();
        self.edges.len() == n * n.saturating_sub(1) / 2
    }

    /// True iff every edge is circular (the cut line meets every edge).
    pub fn is_flag(&self) -> bool {
        self.edges.iter().all(EdgeCurve::is_circular)
    }

    pub fn is_wrap_free(&self) -> bool {
        self.edges.iter().all(|e| !e.is_circular())
    }

    /// The subdrawing on the given vertex ids with every edge among them.
    /// Ids and coordinates are kept.
    pub fn induced(&self, ids: &[VertexId]) -> Drawing {
        let keep: std::collections::HashSet<VertexId> = ids.iter().copied().collect();
        let vertices = self.vertices.iter().filter(|v| keep.contains(&v.id)).copied().collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| keep.contains(&e.u) && keep.contains(&e.v))
            .cloned()
            .collect();
        Drawing::new(vertices, edges).expect("subdrawing of a well-formed drawing")
    }

    /// Every edge whose endpoints both lie in `ids`.
    pub fn induced_edge_indices(&self, ids: &[VertexId]) -> Vec<usize> {
        let mut out = Vec::new();
        for (a, &u) in ids.iter().enumerate() {
            for &w in &ids[a + 1..] {
                if let Some(i) = self.edge_index(u, w) {
                    out.push(i);
                }
            }
        }
        out.sort_unstable();
        out
    }
}
