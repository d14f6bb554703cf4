//! Disjoint edges in flags.
//!
//! A flag is a complete simple drawing whose edges all cross the cut line.
//! Vertices are indexed by x order. For an edge `v_i v_j` the later
//! vertices split into those above it and those below it; the recursion
//! looks among the first six vertices of the current vertex set for either
//! an edge with at least two later vertices on each side (the two sides
//! then induce mutually disjoint subdrawings) or a triplet `i < j < k`
//! whose edge `v_i v_j` is disjoint from everything induced on one side of
//! `v_j v_k`.

use std::fmt;

use crate::geometry::{crossings, point_relation, relation, Drawing, EdgeKey, RelationResult, VertexId};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FlagError {
    #[error("drawing is not a flag: edge {0}-{1} does not cross the cut")]
    NotAFlag(VertexId, VertexId),
    #[error("flag has {0} vertices, at least {1} needed")]
    TooSmall(usize, usize),
    #[error("vertex position out of range or not increasing")]
    BadIndex,
    #[error("invalid drawing: {0}")]
    InvalidDrawing(String),
}

/// Later vertices above and below an edge, as ids in x order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideSets {
    pub edge: EdgeKey,
    pub vplus: Vec<VertexId>,
    pub vminus: Vec<VertexId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Structure {
    SeparatingEdge(VertexId, VertexId),
    GoodUpperTriplet(VertexId, VertexId, VertexId),
    GoodLowerTriplet(VertexId, VertexId, VertexId),
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::SeparatingEdge(i, j) => write!(f, "separating edge {i}-{j}"),
            Structure::GoodUpperTriplet(i, j, k) => write!(f, "good upper triplet {i},{j},{k}"),
            Structure::GoodLowerTriplet(i, j, k) => write!(f, "good lower triplet {i},{j},{k}"),
        }
    }
}

/// Why a pair of matching edges may sit together.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Witness {
    /// The named edge has both endpoints left of both endpoints of the other.
    LeftOf(EdgeKey),
    /// An edge with both endpoints left of all four, the lower edge's
    /// endpoints below it and the upper edge's above it.
    Separator(EdgeKey),
}

/// A witness for the pair `(edges[a], edges[b])`. For a separator `a` is
/// the lower edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PairWitness {
    pub a: usize,
    pub b: usize,
    pub witness: Witness,
}

/// Pairwise disjoint, pairwise related edges of a flag, bottom to top at
/// the cut line, with one witness per pair.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ProperMatching {
    pub edges: Vec<EdgeKey>,
    pub witnesses: Vec<PairWitness>,
}

impl ProperMatching {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Size guaranteed by [`flag_matching`] on a flag with `n` vertices.
pub fn flag_bound(n: usize) -> usize {
    match n {
        0 | 1 => 0,
        2..=9 => 1,
        10..=25 => 2,
        _ => n.div_ceil(25) + 1,
    }
}

fn check_flag(d: &Drawing) -> Result<(), FlagError> {
    match d.edges().iter().find(|e| !e.is_circular()) {
        Some(e) => Err(FlagError::NotAFlag(e.u, e.v)),
        None => Ok(()),
    }
}

fn invalid(msg: impl Into<String>) -> FlagError {
    FlagError::InvalidDrawing(msg.into())
}

/// Side of the vertex at position `r` relative to the edge at positions `(p, q)`.
fn side(d: &Drawing, p: usize, q: usize, r: usize) -> Result<RelationResult, FlagError> {
    let vs = d.vertices();
    let e = d.edge_at(p, q).ok_or_else(|| invalid(format!("missing edge {}-{}", vs[p].id, vs[q].id)))?;
    match point_relation(vs[r].point(), e) {
        Ok(rel @ (RelationResult::Below | RelationResult::Above)) => Ok(rel),
        Ok(_) => Err(invalid(format!("vertex {} not related to edge {}-{}", vs[r].id, e.u, e.v))),
        Err(deg) => Err(invalid(deg.to_string())),
    }
}

/// Positions of `view` after `q`, split into (above, below) edge `(p, q)`.
fn split_view(d: &Drawing, view: &[usize], p: usize, q: usize) -> Result<(Vec<usize>, Vec<usize>), FlagError> {
    let (mut plus, mut minus) = (Vec::new(), Vec::new());
    for &r in view.iter().filter(|&&r| r > q) {
        match side(d, p, q, r)? {
            RelationResult::Above => plus.push(r),
            _ => minus.push(r),
        }
    }
    Ok((plus, minus))
}

/// V+ and V- of the edge between x-order positions `i < j`.
pub fn side_sets(d: &Drawing, i: usize, j: usize) -> Result<SideSets, FlagError> {
    check_flag(d)?;
    if i >= j || j >= d.n() {
        return Err(FlagError::BadIndex);
    }
    let all: Vec<usize> = (0..d.n()).collect();
    let (plus, minus) = split_view(d, &all, i, j)?;
    let ids = |v: Vec<usize>| v.into_iter().map(|p| d.vertices()[p].id).collect();
    let e = d.edge_at(i, j).ok_or(FlagError::BadIndex)?;
    Ok(SideSets { edge: e.key(), vplus: ids(plus), vminus: ids(minus) })
}

/// A structure among the first six vertices of `view`, as positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Found {
    Separating(usize, usize),
    Upper(usize, usize, usize),
    Lower(usize, usize, usize),
}

fn find_in(d: &Drawing, view: &[usize]) -> Result<Found, FlagError> {
    let head = &view[..view.len().min(6)];
    let mut sides = std::collections::HashMap::new();
    for (a, &p) in head.iter().enumerate() {
        for &q in &head[a + 1..] {
            sides.insert((p, q), split_view(d, view, p, q)?);
        }
    }
    for (a, &p) in head.iter().enumerate() {
        for &q in &head[a + 1..] {
            let (plus, minus) = &sides[&(p, q)];
            if plus.len() > 1 && minus.len() > 1 {
                return Ok(Found::Separating(p, q));
            }
        }
    }
    // v_j v_k below v_i v_j exactly when v_k is below v_i v_j (adjacent
    // edges of a flag are related)
    for upper in [true, false] {
        for (a, &i) in head.iter().enumerate() {
            for (b, &j) in head.iter().enumerate().skip(a + 1) {
                for &k in &head[b + 1..] {
                    let (above_ij, _) = &sides[&(i, j)];
                    let (plus_jk, minus_jk) = &sides[&(j, k)];
                    let k_below = !above_ij.contains(&k);
                    if upper && k_below && plus_jk.len() <= 1 {
                        return Ok(Found::Upper(i, j, k));
                    }
                    if !upper && !k_below && minus_jk.len() <= 1 {
                        return Ok(Found::Lower(i, j, k));
                    }
                }
            }
        }
    }
    Err(invalid("no separating edge or good triplet among the first six vertices"))
}

fn to_structure(d: &Drawing, f: Found) -> Structure {
    let id = |p: usize| d.vertices()[p].id;
    match f {
        Found::Separating(i, j) => Structure::SeparatingEdge(id(i), id(j)),
        Found::Upper(i, j, k) => Structure::GoodUpperTriplet(id(i), id(j), id(k)),
        Found::Lower(i, j, k) => Structure::GoodLowerTriplet(id(i), id(j), id(k)),
    }
}

/// Searches the first six vertices for a separating edge, then a good upper
/// triplet, then a good lower triplet, each in lexicographic order.
pub fn find_structure(d: &Drawing) -> Result<Structure, FlagError> {
    check_flag(d)?;
    if d.n() < 10 {
        return Err(FlagError::TooSmall(d.n(), 10));
    }
    let all: Vec<usize> = (0..d.n()).collect();
    find_in(d, &all).map(|f| to_structure(d, f))
}

/// Called once per structure the recursion uses, with the vertex set
/// (positions) it was found in.
pub type StructureVisitor<'a> = dyn FnMut(&Drawing, &[usize], &Structure) + 'a;

type Partial = (Vec<EdgeKey>, Vec<(EdgeKey, EdgeKey, Witness)>);

fn key_at(d: &Drawing, p: usize, q: usize) -> EdgeKey {
    d.edge_at(p, q).expect("complete flag").key()
}

fn recurse(d: &Drawing, view: &[usize], visit: &mut StructureVisitor) -> Result<Partial, FlagError> {
    if view.len() < 2 {
        return Ok((Vec::new(), Vec::new()));
    }
    if view.len() < 10 {
        return Ok((vec![key_at(d, view[0], view[1])], Vec::new()));
    }
    let found = find_in(d, view)?;
    visit(d, view, &to_structure(d, found));
    match found {
        Found::Separating(p, q) => {
            let (plus, minus) = split_view(d, view, p, q)?;
            let g = key_at(d, p, q);
            let (up_e, up_w) = recurse(d, &plus, visit)?;
            let (lo_e, lo_w) = recurse(d, &minus, visit)?;
            let mut wits = up_w;
            wits.extend(lo_w);
            for &e in &lo_e {
                for &f in &up_e {
                    wits.push((e, f, Witness::Separator(g)));
                }
            }
            let mut edges = lo_e;
            edges.extend(up_e);
            Ok((edges, wits))
        }
        Found::Upper(i, j, k) | Found::Lower(i, j, k) => {
            let (plus, minus) = split_view(d, view, j, k)?;
            let rest = if matches!(found, Found::Upper(..)) { minus } else { plus };
            let e = key_at(d, i, j);
            let (mut edges, mut wits) = recurse(d, &rest, visit)?;
            for &f in &edges {
                wits.push((e, f, Witness::LeftOf(e)));
            }
            edges.push(e);
            Ok((edges, wits))
        }
    }
}

/// The cut-line height of an edge of a flag.
fn cut_y(d: &Drawing, k: EdgeKey) -> Rational {
    d.edge(k.0, k.1).and_then(|e| e.eval_at(Rational::ZERO)).expect("flag edge crosses the cut")
}

/// Assembles a matching ordered by cut-line height.
fn assemble(d: &Drawing, (mut edges, wits): Partial) -> ProperMatching {
    edges.sort_by_key(|&k| cut_y(d, k));
    let index = |k: EdgeKey| edges.iter().position(|&e| e == k).expect("witness names a matching edge");
    let mut witnesses: Vec<PairWitness> =
        wits.into_iter().map(|(a, b, witness)| PairWitness { a: index(a), b: index(b), witness }).collect();
    witnesses.sort_by_key(|w| (w.a.min(w.b), w.a.max(w.b)));
    ProperMatching { edges, witnesses }
}

/// A proper set of at least [`flag_bound`]`(n)` pairwise disjoint edges.
pub fn flag_matching(d: &Drawing) -> Result<ProperMatching, FlagError> {
    flag_matching_visit(d, &mut |_, _, _| {})
}

/// [`flag_matching`], reporting every structure used along the way.
pub fn flag_matching_visit(d: &Drawing, visit: &mut StructureVisitor) -> Result<ProperMatching, FlagError> {
    check_flag(d)?;
    if d.n() < 2 {
        return Err(FlagError::TooSmall(d.n(), 2));
    }
    let all: Vec<usize> = (0..d.n()).collect();
    let partial = recurse(d, &all, visit)?;
    Ok(assemble(d, partial))
}

/// Pairs examined and pairs breaking what a structure promises.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct StructureCheck {
    pub pairs: u64,
    pub violations: Vec<(EdgeKey, EdgeKey)>,
}

fn induced_keys(d: &Drawing, set: &[usize]) -> Vec<EdgeKey> {
    let mut out = Vec::new();
    for (a, &p) in set.iter().enumerate() {
        for &q in &set[a + 1..] {
            out.push(key_at(d, p, q));
        }
    }
    out
}

/// Rechecks a structure found in `view` (positions): for a separating edge
/// every edge induced above it is disjoint from and above every edge
/// induced below it; for a good triplet `i, j, k` the edge `v_i v_j` is
/// disjoint from and related to every edge induced on the far side of
/// `v_j v_k`.
pub fn check_structure(d: &Drawing, view: &[usize], s: &Structure) -> Result<StructureCheck, FlagError> {
    let pos = |id: VertexId| d.position(id).ok_or(FlagError::BadIndex);
    let edge = |k: EdgeKey| d.edge(k.0, k.1).expect("complete flag");
    let mut out = StructureCheck::default();
    let mut test = |a: EdgeKey, b: EdgeKey, want: Option<RelationResult>| {
        out.pairs += 1;
        let (e, f) = (edge(a), edge(b));
        let disjoint = matches!(crossings(e, f), Ok(xs) if xs.is_empty());
        let ok = disjoint
            && match relation(e, f) {
                Ok(r) => want.map_or(r.is_related(), |w| r == w),
                Err(_) => false,
            };
        if !ok {
            out.violations.push((a, b));
        }
    };
    match *s {
        Structure::SeparatingEdge(i, j) => {
            let (plus, minus) = split_view(d, view, pos(i)?, pos(j)?)?;
            let lower = induced_keys(d, &minus);
            for a in induced_keys(d, &plus) {
                for &b in &lower {
                    test(a, b, Some(RelationResult::Above));
                }
            }
        }
        Structure::GoodUpperTriplet(i, j, k) | Structure::GoodLowerTriplet(i, j, k) => {
            let (plus, minus) = split_view(d, view, pos(j)?, pos(k)?)?;
            let far = if matches!(s, Structure::GoodUpperTriplet(..)) { minus } else { plus };
            let g = key_at(d, pos(i)?, pos(j)?);
            for b in induced_keys(d, &far) {
                test(g, b, None);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProperViolationKind {
    /// The edge is not in the drawing.
    MissingEdge,
    /// The edges share an endpoint or cross.
    Disjointness,
    /// The edges are disjoint but not related.
    Relatedness,
    /// No left-of relation and no separating edge exists.
    Witness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProperViolation {
    pub kind: ProperViolationKind,
    pub edges: Vec<EdgeKey>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ProperCheck {
    pub ok: bool,
    pub violations: Vec<ProperViolation>,
}

/// Rechecks a matching from geometry alone. Stored witnesses are ignored;
/// separators are searched among all edges of `d`.
pub fn check_proper(d: &Drawing, m: &ProperMatching) -> ProperCheck {
    let mut violations = Vec::new();
    let mut present = Vec::new();
    for &k in &m.edges {
        match d.edge(k.0, k.1) {
            Some(e) => present.push(e),
            None => violations.push(ProperViolation { kind: ProperViolationKind::MissingEdge, edges: vec![k] }),
        }
    }
    let pos = |id: VertexId| d.position(id).expect("endpoint of an edge of d");
    for (a, e) in present.iter().enumerate() {
        for f in &present[a + 1..] {
            let pair = vec![e.key(), f.key()];
            let disjoint = !e.shares_endpoint(f) && crossings(e, f).is_ok_and(|c| c.is_empty());
            if !disjoint {
                violations.push(ProperViolation { kind: ProperViolationKind::Disjointness, edges: pair });
                continue;
            }
            let (lo, hi) = match relation(e, f) {
                Ok(RelationResult::Below) => (*e, *f),
                Ok(RelationResult::Above) => (*f, *e),
                _ => {
                    violations.push(ProperViolation { kind: ProperViolationKind::Relatedness, edges: pair });
                    continue;
                }
            };
            let (lo_p, hi_p) = ([pos(lo.u), pos(lo.v)], [pos(hi.u), pos(hi.v)]);
            let max = |p: [usize; 2]| p[0].max(p[1]);
            let min = |p: [usize; 2]| p[0].min(p[1]);
            if max(lo_p) < min(hi_p) || max(hi_p) < min(lo_p) {
                continue;
            }
            let first = min(lo_p).min(min(hi_p));
            let ends = |p: [usize; 2]| p.map(|q| d.vertices()[q].point());
            let separates = |g: &crate::geometry::EdgeCurve| {
                let below = ends(lo_p).iter().all(|&x| point_relation(x, g) == Ok(RelationResult::Below));
                below && ends(hi_p).iter().all(|&x| point_relation(x, g) == Ok(RelationResult::Above))
            };
            let found = (0..first).any(|p| (p + 1..first).any(|q| d.edge_at(p, q).is_some_and(separates)));
            if !found {
                violations.push(ProperViolation { kind: ProperViolationKind::Witness, edges: pair });
            }
        }
    }
    ProperCheck { ok: violations.is_empty(), violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{flag_from_pattern, gen_flag, GenConfig};

    #[test]
    fn bound_values() {
        assert_eq!(flag_bound(2), 1);
        assert_eq!(flag_bound(9), 1);
        assert_eq!(flag_bound(10), 2);
        assert_eq!(flag_bound(25), 2);
        assert_eq!(flag_bound(26), 3);
        assert_eq!(flag_bound(60), 4);
        assert_eq!(flag_bound(200), 9);
    }

    #[test]
    fn side_sets_last_vertex_is_empty() {
        let d = gen_flag(&GenConfig::new(6, 3)).unwrap();
        let s = side_sets(&d, 0, 5).unwrap();
        assert!(s.vplus.is_empty() && s.vminus.is_empty());
    }

    #[test]
    fn side_sets_cover_later_vertices() {
        let d = gen_flag(&GenConfig::new(12, 7)).unwrap();
        for i in 0..12 {
            for j in i + 1..12 {
                let s = side_sets(&d, i, j).unwrap();
                let mut all: Vec<VertexId> = s.vplus.iter().chain(&s.vminus).copied().collect();
                all.sort_unstable();
                let want: Vec<VertexId> = d.vertices()[j + 1..].iter().map(|v| v.id).collect();
                let mut want = want;
                want.sort_unstable();
                assert_eq!(all, want);
            }
        }
    }

    #[test]
    fn four_vertices_below() {
        // every later vertex goes below all earlier ones
        let d = flag_from_pattern(&[false, false, false]);
        let s = side_sets(&d, 0, 1).unwrap();
        assert_eq!(s.vminus, vec![2, 3]);
        assert!(s.vplus.is_empty());
    }

    #[test]
    fn alternating_flag_has_separating_first_edge() {
        let d = flag_from_pattern(&[true, false, true, false, true, false, true, false, true]);
        assert_eq!(find_structure(&d).unwrap(), Structure::SeparatingEdge(0, 1));
    }

    #[test]
    fn descending_flag_has_upper_triplet() {
        let d = flag_from_pattern(&[false; 9]);
        assert_eq!(find_structure(&d).unwrap(), Structure::GoodUpperTriplet(0, 1, 2));
    }

    #[test]
    fn small_flags() {
        let d = gen_flag(&GenConfig::new(2, 0)).unwrap();
        let m = flag_matching(&d).unwrap();
        assert_eq!(m.edges.len(), 1);
        assert_eq!(find_structure(&d), Err(FlagError::TooSmall(2, 10)));
    }

    #[test]
    fn matching_meets_bound_and_is_proper() {
        for (n, seed) in [(10, 1), (26, 2), (60, 3)] {
            let d = gen_flag(&GenConfig::new(n, seed)).unwrap();
            let m = flag_matching(&d).unwrap();
            assert!(m.len() >= flag_bound(n), "n={n}: {} edges", m.len());
            let check = check_proper(&d, &m);
            assert!(check.ok, "{:?}", check.violations);
            let k = m.len();
            assert_eq!(m.witnesses.len(), k * (k - 1) / 2);
        }
    }

    #[test]
    fn not_a_flag_is_rejected() {
        let d = crate::generate::gen_mixed(&GenConfig::new(8, 1).with_wrap_prob(crate::rational::q(0, 1))).unwrap();
        assert!(matches!(flag_matching(&d), Err(FlagError::NotAFlag(..))));
    }
}
