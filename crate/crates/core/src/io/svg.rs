//! SVG pictures of the plane representation: the cylinder is cut along
//! `x = 0` and unrolled, so a circular edge shows as two pieces leaving
//! opposite sides of the strip.

use std::collections::HashSet;
use std::fmt::Write;

use crate::geometry::{Drawing, EdgeKey, Point};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderStyle {
    pub width: u32,
    pub height: u32,
    /// Edges drawn with the `hl` class.
    pub highlight: Vec<EdgeKey>,
    pub show_cut: bool,
    pub label_vertices: bool,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle { width: 800, height: 500, highlight: Vec::new(), show_cut: true, label_vertices: true }
    }
}

const MARGIN: f64 = 30.0;

/// Pieces of a lift polyline inside `[0, 1)`, the part beyond `x = 1`
/// shifted back by one.
fn pieces(points: &[Point]) -> Vec<Vec<(f64, f64)>> {
    let one = Rational::ONE;
    let f = |p: Point| (p.x.to_f64(), p.y.to_f64());
    if points.last().is_none_or(|p| p.x <= one) {
        return vec![points.iter().map(|&p| f(p)).collect()];
    }
    let i = points.partition_point(|p| p.x < one);
    let a = points[i - 1];
    let b = points[i];
    let y = a.y + (b.y - a.y) * (one - a.x) / (b.x - a.x);
    let mut left: Vec<(f64, f64)> = points[..i].iter().map(|&p| f(p)).collect();
    left.push((1.0, y.to_f64()));
    let mut right = vec![(0.0, y.to_f64())];
    right.extend(points[i..].iter().filter(|p| p.x > one).map(|&p| f(Point::new(p.x - one, p.y))));
    vec![left, right]
}

pub fn render_svg(d: &Drawing, style: &RenderStyle) -> String {
    let (w, h) = (style.width.max(1) as f64, style.height.max(1) as f64);
    let ys = d.edges().iter().flat_map(|e| e.points.iter().map(|p| p.y)).chain(d.vertices().iter().map(|v| v.y));
    let (lo, hi) = ys.fold(None, |acc: Option<(Rational, Rational)>, y| match acc {
        None => Some((y, y)),
        Some((a, b)) => Some((a.min(y), b.max(y))),
    })
    .map_or((0.0, 1.0), |(a, b)| (a.to_f64(), b.to_f64()));
    let span = if hi > lo { hi - lo } else { 1.0 };
    let sx = |x: f64| MARGIN + x * (w - 2.0 * MARGIN);
    let sy = |y: f64| h - MARGIN - (y - lo) / span * (h - 2.0 * MARGIN);

    let hl: HashSet<EdgeKey> = style.highlight.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#, style.width, style.height, style.width, style.height).unwrap();
    s.push_str("<style>path{fill:none;stroke:#777;stroke-width:1}path.hl{stroke:#c22;stroke-width:3}line.cut{stroke:#000;stroke-dasharray:6 4}circle{fill:#000}text{font:11px sans-serif}</style>\n");
    s.push_str(r#"<rect x="0" y="0" width="100%" height="100%" fill="white"/>"#);
    s.push('\n');
    if style.show_cut {
        for x in [0.0, 1.0] {
            writeln!(s, r#"<line class="cut" x1="{:.2}" y1="0" x2="{:.2}" y2="{}"/>"#, sx(x), sx(x), style.height).unwrap();
        }
    }
    for e in d.edges() {
        let mut path = String::new();
        for piece in pieces(&e.points) {
            for (i, (x, y)) in piece.iter().enumerate() {
                let cmd = if i == 0 { 'M' } else { 'L' };
                write!(path, "{}{}{:.2} {:.2}", if path.is_empty() { "" } else { " " }, cmd, sx(*x), sy(*y)).unwrap();
            }
        }
        let class = if hl.contains(&e.key()) { r#" class="hl""# } else { "" };
        writeln!(s, r#"<path{class} data-edge="{}-{}" d="{path}"/>"#, e.u, e.v).unwrap();
    }
    for v in d.vertices() {
        let (x, y) = (sx(v.x.to_f64()), sy(v.y.to_f64()));
        writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3"/>"#).unwrap();
        if style.label_vertices {
            writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 4.0, y - 4.0, v.id).unwrap();
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::archetype;

    #[test]
    fn split_pieces_for_circular_edges() {
        let d = archetype("not-related").unwrap();
        let svg = render_svg(&d, &RenderStyle::default());
        assert_eq!(svg.matches("<path").count(), 2);
        assert_eq!(svg.matches('M').count(), 3);
    }

    #[test]
    fn highlight_and_determinism() {
        let d = archetype("separating-edge").unwrap();
        let m = crate::flag::flag_matching(&d).unwrap();
        let style = RenderStyle { highlight: m.edges.clone(), ..Default::default() };
        let a = render_svg(&d, &style);
        assert_eq!(a.matches(r#"class="hl""#).count(), m.len());
        assert_eq!(a, render_svg(&d, &style));
    }
}
