//! Moving the cut line.

use super::{Drawing, EdgeCurve, Point, Vertex, Wrap};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecutError {
    #[error("an event lies on the requested cut line x = {0}")]
    EventAtCut(Rational),
}

/// Re-expresses `d` with the cut line moved to cylinder coordinate `a`:
/// every x becomes `(x - a) mod 1` and each edge is re-classified as
/// direct or circular with respect to the new cut. Vertex ids are kept.
pub fn recut(d: &Drawing, a: Rational) -> Result<Drawing, RecutError> {
    let a = a.fract();
    let err = || RecutError::EventAtCut(a);
    if d.vertices().iter().any(|v| v.x == a) {
        return Err(err());
    }
    let mut ys = Vec::new();
    for e in d.edges() {
        if e.points.iter().any(|p| p.x.fract() == a) {
            return Err(err());
        }
        if let Some(y) = e.eval_at(a) {
            ys.push(y);
        }
    }
    ys.sort_unstable();
    if ys.windows(2).any(|w| w[0] == w[1]) {
        return Err(err());
    }
    Ok(recut_unchecked(d, a))
}

/// The coordinate change of [`recut`] without the event check. With an
/// event on the new cut line the result is well formed but invalid.
pub(crate) fn recut_unchecked(d: &Drawing, a: Rational) -> Drawing {
    let a = a.fract();
    let vertices: Vec<Vertex> =
        d.vertices().iter().map(|v| Vertex { id: v.id, x: (v.x - a).fract(), y: v.y }).collect();
    let mut edges = Vec::with_capacity(d.edges().len());
    for e in d.edges() {
        let mut shift = -a;
        if e.start().x + shift < Rational::ZERO {
            shift = shift + Rational::ONE;
        }
        let points: Vec<Point> = e.points.iter().map(|p| Point::new(p.x + shift, p.y)).collect();
        // the polyline starts at whichever endpoint it started at before
        let (first, second) = match e.wrap {
            Wrap::Direct => (e.u, e.v),
            Wrap::Circular => (e.v, e.u),
        };
        let end = points.last().unwrap().x;
        let curve = if end < Rational::ONE {
            EdgeCurve { u: first, v: second, wrap: Wrap::Direct, points }
        } else {
            EdgeCurve { u: second, v: first, wrap: Wrap::Circular, points }
        };
        edges.push(curve);
    }
    Drawing::new(vertices, edges).expect("recut preserves structure")
}
