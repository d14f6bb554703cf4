//! Edge-set files.
//!
//! ```text
//! match <size>
//! pair <u> <v>                              one per edge
//! wit <u1> <v1> <u2> <v2> left              edge 1 lies left of edge 2
//! wit <u1> <v1> <u2> <v2> sep <gu> <gv>     edge g separates lower 1 from upper 2
//! ```
//!
//! Edges crossing the cut line come first, bottom to top at the cut; the
//! rest follow in key order.

use std::fmt::Write;

use super::mcd::ParseError;
use crate::flag::{ProperMatching, Witness};
use crate::geometry::{Drawing, EdgeKey};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WitnessLine {
    pub first: EdgeKey,
    pub second: EdgeKey,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MatchingFile {
    pub edges: Vec<EdgeKey>,
    pub witnesses: Vec<WitnessLine>,
}

/// Witness lines of a flag matching, with the left edge first for `left`
/// and the lower edge first for `sep`.
pub fn witness_lines(m: &ProperMatching) -> Vec<WitnessLine> {
    m.witnesses
        .iter()
        .map(|w| {
            let (a, b) = (m.edges[w.a], m.edges[w.b]);
            match w.witness {
                Witness::LeftOf(k) if k == b => WitnessLine { first: b, second: a, witness: w.witness },
                _ => WitnessLine { first: a, second: b, witness: w.witness },
            }
        })
        .collect()
}

/// `edges` in file order: by y on the cut line, then by key.
pub fn file_order(d: &Drawing, edges: &[EdgeKey]) -> Vec<EdgeKey> {
    let mut at_cut: Vec<(Rational, EdgeKey)> = Vec::new();
    let mut rest = Vec::new();
    for &(a, b) in edges {
        let e = d.edge(a, b);
        match e.filter(|e| e.is_circular()).and_then(|e| e.eval_at(Rational::ZERO)) {
            Some(y) => at_cut.push((y, e.unwrap().key())),
            None => rest.push(e.map_or((a, b), |e| e.key())),
        }
    }
    at_cut.sort();
    rest.sort();
    at_cut.into_iter().map(|(_, k)| k).chain(rest).collect()
}

pub fn serialize_matching(d: &Drawing, edges: &[EdgeKey], witnesses: &[WitnessLine]) -> String {
    let mut s = format!("match {}\n", edges.len());
    for (u, v) in file_order(d, edges) {
        writeln!(s, "pair {u} {v}").unwrap();
    }
    for w in witnesses {
        let ((u1, v1), (u2, v2)) = (w.first, w.second);
        match w.witness {
            Witness::LeftOf(_) => writeln!(s, "wit {u1} {v1} {u2} {v2} left"),
            Witness::Separator((gu, gv)) => writeln!(s, "wit {u1} {v1} {u2} {v2} sep {gu} {gv}"),
        }
        .unwrap();
    }
    s
}

pub fn parse_matching(text: &str) -> Result<MatchingFile, ParseError> {
    let err = |line: usize, col: usize, msg: &str| ParseError { line, col, msg: msg.to_string() };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, head) = lines.next().ok_or_else(|| err(1, 1, "expected `match <size>`"))?;
    let size: usize = head
        .strip_prefix("match ")
        .and_then(|t| t.trim().parse().ok())
        .ok_or_else(|| err(1, 1, "expected `match <size>`"))?;
    let mut out = MatchingFile::default();
    let mut last = 1;
    for (no, l) in lines {
        last = no;
        let toks: Vec<&str> = l.split_whitespace().collect();
        let id = |i: usize| -> Result<u32, ParseError> {
            let col = l.find(toks[i]).map_or(1, |c| c + 1);
            toks[i].parse().map_err(|_| err(no, col, "bad vertex id"))
        };
        match toks.first().copied() {
            Some("pair") if toks.len() == 3 => {
                if !out.witnesses.is_empty() {
                    return Err(err(no, 1, "`pair` after `wit`"));
                }
                out.edges.push((id(1)?, id(2)?));
            }
            Some("wit") if toks.len() >= 6 => {
                let (first, second) = ((id(1)?, id(2)?), (id(3)?, id(4)?));
                let witness = match (toks[5], toks.len()) {
                    ("left", 6) => Witness::LeftOf(first),
                    ("sep", 8) => Witness::Separator((id(6)?, id(7)?)),
                    _ => return Err(err(no, 1, "expected `left` or `sep <gu> <gv>`")),
                };
                out.witnesses.push(WitnessLine { first, second, witness });
            }
            _ => return Err(err(no, 1, "expected `pair <u> <v>` or `wit ...`")),
        }
    }
    if out.edges.len() != size {
        return Err(err(last, 1, "pair count differs from size"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::flag_matching;
    use crate::generate::{gen_flag, GenConfig};

    #[test]
    fn round_trip_flag() {
        let d = gen_flag(&GenConfig::new(30, 4)).unwrap();
        let m = flag_matching(&d).unwrap();
        let w = witness_lines(&m);
        let text = serialize_matching(&d, &m.edges, &w);
        let back = parse_matching(&text).unwrap();
        // matchings are stored bottom to top, which is the file order
        assert_eq!(back.edges, m.edges);
        assert_eq!(back.witnesses, w);
        assert_eq!(serialize_matching(&d, &back.edges, &back.witnesses), text);
    }

    #[test]
    fn rejects() {
        assert!(parse_matching("match 2\npair 0 1\n").is_err());
        assert!(parse_matching("match 1\npair 0 x\n").is_err());
        assert!(parse_matching("match 1\npair 0 1\nwit 0 1 2 3 sep\n").is_err());
        assert!(parse_matching("matching 1\n").is_err());
    }
}
