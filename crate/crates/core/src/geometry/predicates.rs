//! Crossing and relatedness predicates on lift polylines.
//!
//! Two curves of span below 1 can only meet under the translates
//! `t in {-1, 0, 1}` of one of them. On each overlap interval the
//! difference `d(x) = a(x) - b(x - t)` is piecewise linear with breaks at
//! the merged breakpoints, so its zeros and signs are found exactly.

use std::fmt;

use super::{eval_poly, EdgeCurve, Point};
use crate::rational::Rational;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum RelationResult {
    Below,
    Above,
    NotRelated,
    Crossing,
}

impl RelationResult {
    pub fn flip(self) -> RelationResult {
        match self {
            RelationResult::Below => RelationResult::Above,
            RelationResult::Above => RelationResult::Below,
            r => r,
        }
    }

    pub fn is_related(self) -> bool {
        matches!(self, RelationResult::Below | RelationResult::Above)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum DegenerateKind {
    /// The curves coincide on an interval.
    Overlap,
    /// The curves touch without crossing.
    Tangency,
    /// An endpoint of one curve lies in the interior of the other.
    EndpointIncidence,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, thiserror::Error)]
pub struct Degenerate {
    pub kind: DegenerateKind,
    pub at: Point,
}

impl fmt::Display for Degenerate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degenerate contact ({:?}) at {}", self.kind, self.at)
    }
}

fn first_x(c: &[Point]) -> Rational {
    c[0].x
}

fn last_x(c: &[Point]) -> Rational {
    c[c.len() - 1].x
}

/// Overlap of `a` with `b` translated by `t`, as a merged breakpoint list.
fn overlap_xs(a: &[Point], b: &[Point], t: Rational) -> Option<Vec<Rational>> {
    let lo = first_x(a).max(first_x(b) + t);
    let hi = last_x(a).min(last_x(b) + t);
    if lo > hi {
        return None;
    }
    let mut xs = vec![lo, hi];
    xs.extend(a.iter().map(|p| p.x).filter(|&x| lo < x && x < hi));
    xs.extend(b.iter().map(|p| p.x + t).filter(|&x| lo < x && x < hi));
    xs.sort_unstable();
    xs.dedup();
    Some(xs)
}

const TRANSLATES: [i128; 3] = [-1, 0, 1];

/// Proper crossings between two lift polylines, in `a`'s lift coordinates,
/// sorted by x. Contacts where both curves end at the same point are shared
/// endpoints and are skipped.
pub fn crossings_curves(a: &[Point], b: &[Point]) -> Result<Vec<Point>, Degenerate> {
    let mut out = Vec::new();
    for t in TRANSLATES.map(Rational::from_int) {
        let Some(xs) = overlap_xs(a, b, t) else { continue };
        let ds: Vec<Rational> = xs
            .iter()
            .map(|&x| eval_poly(a, x).unwrap() - eval_poly(b, x - t).unwrap())
            .collect();
        let last = xs.len() - 1;
        let at = |i: usize| Point::new(xs[i], eval_poly(a, xs[i]).unwrap());
        for i in 0..xs.len() {
            if ds[i].is_zero() {
                if i < last && ds[i + 1].is_zero() {
                    return Err(Degenerate { kind: DegenerateKind::Overlap, at: at(i) });
                }
                if i == 0 || i == last {
                    let x = xs[i];
                    let a_end = x == first_x(a) || x == last_x(a);
                    let b_end = x - t == first_x(b) || x - t == last_x(b);
                    if !(a_end && b_end) {
                        return Err(Degenerate { kind: DegenerateKind::EndpointIncidence, at: at(i) });
                    }
                    continue;
                }
                if ds[i - 1].signum() == ds[i + 1].signum() {
                    return Err(Degenerate { kind: DegenerateKind::Tangency, at: at(i) });
                }
                out.push(at(i));
            } else if i < last && !ds[i + 1].is_zero() && ds[i].signum() != ds[i + 1].signum() {
                let (x0, x1) = (xs[i], xs[i + 1]);
                let x = x0 + (x1 - x0) * ds[i] / (ds[i] - ds[i + 1]);
                out.push(Point::new(x, eval_poly(a, x).unwrap()));
            }
        }
    }
    out.sort_by_key(|p| p.x);
    Ok(out)
}

/// Proper crossings between two edges of a drawing (shared endpoints excluded).
pub fn crossings(e: &EdgeCurve, f: &EdgeCurve) -> Result<Vec<Point>, Degenerate> {
    crossings_curves(&e.points, &f.points)
}

/// Relation between two lift polylines: `Below` means `a` is strictly below
/// `b` on every vertical line meeting both relative interiors.
pub fn relation_curves(a: &[Point], b: &[Point]) -> Result<RelationResult, Degenerate> {
    if !crossings_curves(a, b)?.is_empty() {
        return Ok(RelationResult::Crossing);
    }
    let (mut below, mut above) = (false, false);
    for t in TRANSLATES.map(Rational::from_int) {
        let Some(xs) = overlap_xs(a, b, t) else { continue };
        for w in xs.windows(2) {
            let m = Rational::midpoint(w[0], w[1]);
            let d = eval_poly(a, m).unwrap() - eval_poly(b, m - t).unwrap();
            match d.signum() {
                -1 => below = true,
                1 => above = true,
                _ => {
                    let at = Point::new(m, eval_poly(a, m).unwrap());
                    return Err(Degenerate { kind: DegenerateKind::Overlap, at });
                }
            }
        }
    }
    Ok(match (below, above) {
        (true, false) => RelationResult::Below,
        (false, true) => RelationResult::Above,
        _ => RelationResult::NotRelated,
    })
}

pub fn relation(e: &EdgeCurve, f: &EdgeCurve) -> Result<RelationResult, Degenerate> {
    relation_curves(&e.points, &f.points)
}

/// Position of a point relative to an edge on the point's vertical line.
/// `p.x` is a cylinder coordinate and is reduced mod 1.
pub fn point_relation(p: Point, e: &EdgeCurve) -> Result<RelationResult, Degenerate> {
    match e.eval_at(p.x.fract()) {
        None => Ok(RelationResult::NotRelated),
        Some(y) if p.y < y => Ok(RelationResult::Below),
        Some(y) if p.y > y => Ok(RelationResult::Above),
        Some(_) => Err(Degenerate { kind: DegenerateKind::EndpointIncidence, at: p }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Wrap;
    use crate::rational::q;

    fn curve(pts: &[(Rational, Rational)]) -> Vec<Point> {
        pts.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    fn edge(u: u32, v: u32, wrap: Wrap, pts: &[(Rational, Rational)]) -> EdgeCurve {
        EdgeCurve { u, v, wrap, points: curve(pts) }
    }

    #[test]
    fn x_configuration() {
        let a = curve(&[(q(1, 5), q(0, 1)), (q(4, 5), q(1, 1))]);
        let b = curve(&[(q(1, 5), q(1, 1)), (q(4, 5), q(0, 1))]);
        let c = crossings_curves(&a, &b).unwrap();
        assert_eq!(c, vec![Point::new(q(1, 2), q(1, 2))]);
        assert_eq!(crossings_curves(&b, &a).unwrap(), c);
    }

    #[test]
    fn shared_endpoint_excluded() {
        let e = edge(0, 1, Wrap::Direct, &[(q(1, 5), q(0, 1)), (q(4, 5), q(0, 1))]);
        let f = edge(0, 2, Wrap::Direct, &[(q(1, 5), q(0, 1)), (q(1, 2), q(1, 1)), (q(9, 10), q(1, 1))]);
        assert!(crossings(&e, &f).unwrap().is_empty());
        assert_eq!(relation(&e, &f).unwrap(), RelationResult::Below);
    }

    #[test]
    fn translate_plus_one_crossing() {
        // circular edge through the cut against a direct edge near x = 0.1
        let c = edge(0, 3, Wrap::Circular, &[(q(4, 5), q(0, 1)), (q(6, 5), q(1, 1))]);
        let d = edge(1, 2, Wrap::Direct, &[(q(1, 20), q(1, 1)), (q(3, 20), q(0, 1))]);
        let xs = crossings(&c, &d).unwrap();
        assert_eq!(xs.len(), 1);
        assert!(xs[0].x > q(1, 1));
        assert_eq!(crossings(&d, &c).unwrap().len(), 1);
    }

    #[test]
    fn degenerate_contacts() {
        let a = curve(&[(q(0, 1) + q(1, 10), q(0, 1)), (q(9, 10), q(0, 1))]);
        let touch = curve(&[(q(1, 5), q(1, 1)), (q(1, 2), q(0, 1)), (q(4, 5), q(1, 1))]);
        assert_eq!(crossings_curves(&a, &touch).unwrap_err().kind, DegenerateKind::Tangency);
        let through = curve(&[(q(1, 5), q(1, 1)), (q(1, 2), q(0, 1))]);
        assert_eq!(crossings_curves(&a, &through).unwrap_err().kind, DegenerateKind::EndpointIncidence);
        let overlap = curve(&[(q(1, 5), q(1, 1)), (q(3, 10), q(0, 1)), (q(1, 2), q(0, 1)), (q(4, 5), q(1, 1))]);
        assert_eq!(crossings_curves(&a, &overlap).unwrap_err().kind, DegenerateKind::Overlap);
    }

    #[test]
    fn point_relations() {
        let e = edge(0, 1, Wrap::Direct, &[(q(1, 4), q(1, 1)), (q(3, 4), q(1, 1))]);
        assert_eq!(point_relation(Point::new(q(1, 2), q(0, 1)), &e).unwrap(), RelationResult::Below);
        assert_eq!(point_relation(Point::new(q(1, 2), q(2, 1)), &e).unwrap(), RelationResult::Above);
        assert_eq!(point_relation(Point::new(q(7, 8), q(0, 1)), &e).unwrap(), RelationResult::NotRelated);
        assert!(point_relation(Point::new(q(1, 2), q(1, 1)), &e).is_err());
    }

    #[test]
    fn not_related_when_order_flips_between_arcs() {
        // a is flat at 1 on (0.2, 0.8); b wraps: high on (0.6, 1), low on (0, 0.4)
        let a = curve(&[(q(1, 5), q(1, 1)), (q(4, 5), q(1, 1))]);
        let b = curve(&[(q(3, 5), q(2, 1)), (q(9, 10), q(2, 1)), (q(11, 10), q(0, 1)), (q(7, 5), q(0, 1))]);
        assert!(crossings_curves(&a, &b).unwrap().is_empty());
        assert_eq!(relation_curves(&a, &b).unwrap(), RelationResult::NotRelated);
    }
}
