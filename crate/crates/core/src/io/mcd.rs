//! The MCD1 drawing format.
//!
//! ```text
//! mcd 1
//! n 2
//! v 0 1/4 0/1
//! v 1 3/4 1/1
//! e 0 1 1 2 3/4 1/1 5/4 0/1
//! ```
//!
//! Vertex lines come before edge lines. An edge line lists its endpoints
//! (smaller x first), `1` if it crosses the cut line, the number of
//! polyline points and their lift coordinates. Every number is a reduced
//! fraction.

use std::fmt::{self, Write};

use crate::geometry::{Drawing, DrawingError, EdgeCurve, Point, Vertex, VertexId, Wrap};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based.
    pub line: usize,
    /// 1-based; the start of the offending token.
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum McdError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("malformed drawing: {0}")]
    Invariant(#[from] DrawingError),
}

/// Whitespace-separated tokens of one line with their columns.
struct Tokens<'a> {
    line: usize,
    items: Vec<(usize, &'a str)>,
    next: usize,
    end_col: usize,
}

impl<'a> Tokens<'a> {
    fn new(line: usize, text: &'a str) -> Tokens<'a> {
        let mut items = Vec::new();
        let mut start = None;
        for (i, c) in text.char_indices() {
            match (c.is_whitespace(), start) {
                (true, Some(s)) => {
                    items.push((s + 1, &text[s..i]));
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
        if let Some(s) = start {
            items.push((s + 1, &text[s..]));
        }
        Tokens { line, items, next: 0, end_col: text.len() + 1 }
    }

    fn err(&self, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col, msg: msg.into() }
    }

    fn take(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        let t = self.items.get(self.next).copied().ok_or_else(|| self.err(self.end_col, format!("missing {what}")))?;
        self.next += 1;
        Ok(t)
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        let (col, t) = self.take(word)?;
        if t != word {
            return Err(self.err(col, format!("expected `{word}`, found `{t}`")));
        }
        Ok(())
    }

    fn int<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, ParseError> {
        let (col, t) = self.take(what)?;
        if !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(self.err(col, format!("{what}: expected a non-negative integer, found `{t}`")));
        }
        t.parse().map_err(|_| self.err(col, format!("{what}: `{t}` out of range")))
    }

    fn rational(&mut self, what: &str) -> Result<Rational, ParseError> {
        let (col, t) = self.take(what)?;
        t.parse().map_err(|e| self.err(col, format!("{what}: `{t}`: {e}")))
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.items.get(self.next) {
            Some(&(col, t)) => Err(self.err(col, format!("unexpected `{t}`"))),
            None => Ok(()),
        }
    }
}

pub fn parse_mcd(text: &str) -> Result<Drawing, McdError> {
    let lines: Vec<&str> = text.lines().collect();
    let last = lines.len().max(1);
    let mut toks = lines.iter().enumerate().map(|(i, l)| Tokens::new(i + 1, l));
    let missing = |what: &str| ParseError { line: last, col: 1, msg: format!("file ends before {what}") };

    let mut head = toks.next().ok_or_else(|| missing("the header"))?;
    head.keyword("mcd")?;
    let (col, version) = head.take("version")?;
    if version != "1" {
        return Err(head.err(col, format!("unsupported version `{version}`")).into());
    }
    head.finish()?;
    let mut count = toks.next().ok_or_else(|| missing("the vertex count"))?;
    count.keyword("n")?;
    let n: usize = count.int("vertex count")?;
    count.finish()?;

    let mut vertices = Vec::with_capacity(n);
    let mut edges = Vec::new();
    for mut t in toks {
        if t.items.is_empty() {
            return Err(t.err(1, "empty line").into());
        }
        let (col, kind) = t.take("record")?;
        match kind {
            "v" => {
                if !edges.is_empty() {
                    return Err(t.err(col, "vertex line after edge lines").into());
                }
                if vertices.len() == n {
                    return Err(t.err(col, format!("more than {n} vertices")).into());
                }
                let id: VertexId = t.int("vertex id")?;
                let x = t.rational("x")?;
                let y = t.rational("y")?;
                t.finish()?;
                vertices.push(Vertex { id, x, y });
            }
            "e" => {
                if vertices.len() < n {
                    return Err(t.err(col, format!("edge line before all {n} vertices")).into());
                }
                let u: VertexId = t.int("endpoint")?;
                let v: VertexId = t.int("endpoint")?;
                let (wcol, w) = t.take("wrap flag")?;
                let wrap = match w {
                    "0" => Wrap::Direct,
                    "1" => Wrap::Circular,
                    _ => return Err(t.err(wcol, format!("wrap flag must be 0 or 1, found `{w}`")).into()),
                };
                let (kcol, _) = t.items.get(t.next).copied().unwrap_or((t.end_col, ""));
                let k: usize = t.int("point count")?;
                if k < 2 {
                    return Err(t.err(kcol, "an edge needs at least 2 points").into());
                }
                let mut points = Vec::with_capacity(k);
                for _ in 0..k {
                    let x = t.rational("point x")?;
                    let y = t.rational("point y")?;
                    points.push(Point::new(x, y));
                }
                t.finish()?;
                edges.push(EdgeCurve { u, v, wrap, points });
            }
            other => return Err(t.err(col, format!("unknown record `{other}`")).into()),
        }
    }
    if vertices.len() < n {
        return Err(missing(&format!("all {n} vertices")).into());
    }
    Ok(Drawing::new(vertices, edges)?)
}

pub fn serialize_mcd(d: &Drawing) -> String {
    let mut s = String::new();
    writeln!(s, "mcd 1").unwrap();
    writeln!(s, "n {}", d.n()).unwrap();
    for v in d.vertices() {
        writeln!(s, "v {} {} {}", v.id, v.x, v.y).unwrap();
    }
    for e in d.edges() {
        let wrap = if e.is_circular() { 1 } else { 0 };
        write!(s, "e {} {} {} {}", e.u, e.v, wrap, e.points.len()).unwrap();
        for p in &e.points {
            write!(s, " {} {}", p.x, p.y).unwrap();
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_archetypes, gen_mixed, GenConfig};

    #[test]
    fn round_trip() {
        for (_, d) in gen_archetypes() {
            assert_eq!(parse_mcd(&serialize_mcd(&d)).unwrap(), d);
        }
        let d = gen_mixed(&GenConfig::new(8, 2)).unwrap();
        let text = serialize_mcd(&d);
        assert_eq!(parse_mcd(&text).unwrap(), d);
        assert_eq!(serialize_mcd(&parse_mcd(&text).unwrap()), text);
    }

    #[test]
    fn small_file() {
        let text = "mcd 1\nn 2\nv 0 1/4 0/1\nv 1 3/4 1/1\ne 0 1 1 2 3/4 1/1 5/4 0/1\n";
        let d = parse_mcd(text).unwrap();
        assert!(d.is_flag());
        assert_eq!(serialize_mcd(&d), text);
    }

    fn parse_err(text: &str) -> ParseError {
        match parse_mcd(text) {
            Err(McdError::Parse(e)) => e,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn truncated_edge_line() {
        let e = parse_err("mcd 1\nn 2\nv 0 1/4 0/1\nv 1 3/4 1/1\ne 0 1 1 2 3/4 1/1 5/4");
        assert_eq!(e.line, 5);
        let e = parse_err("mcd 1\nn 3\nv 0 1/4 0/1\nv 1 3/4 1/1\n");
        assert_eq!(e.line, 4);
    }

    #[test]
    fn unreduced_token() {
        let e = parse_err("mcd 1\nn 1\nv 0 2/4 0/1\n");
        assert_eq!((e.line, e.col), (3, 5));
        let e = parse_err("mcd 1\nn 1\nv 0 1/2 3/0\n");
        assert_eq!((e.line, e.col), (3, 9));
        let e = parse_err("mcd 1\nn 1\nv 0 1/2 3\n");
        assert_eq!((e.line, e.col), (3, 9));
    }

    #[test]
    fn structural_errors() {
        let r = parse_mcd("mcd 1\nn 2\nv 0 1/4 0/1\nv 1 3/4 1/1\ne 0 7 0 2 1/4 0/1 3/4 1/1\n");
        assert!(matches!(r, Err(McdError::Invariant(DrawingError::UnknownVertex(7)))));
    }
}
