//! Exact maximum sets of pairwise disjoint edges for small drawings.

use crate::geometry::{CrossingTable, Drawing, EdgeKey};

/// Default limit on the vertex count accepted by [`max_disjoint_bruteforce`].
pub const DEFAULT_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{n} vertices exceeds the oracle cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("invalid drawing: {0}")]
    Invalid(String),
}

type Bits = Vec<u64>;

fn bits_new(m: usize) -> Bits {
    vec![0; m.div_ceil(64)]
}

fn set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn has(b: &Bits, i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn count(b: &Bits) -> usize {
    b.iter().map(|w| w.count_ones() as usize).sum()
}

fn first(b: &Bits) -> Option<usize> {
    b.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn iter(b: &Bits) -> impl Iterator<Item = usize> + '_ {
    b.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            (w != 0).then(|| {
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                i * 64 + t
            })
        })
    })
}

/// Edges of a drawing as nodes, joined when they share an endpoint or cross.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConflictGraph {
    /// Node `i` is edge `i` of the drawing.
    pub nodes: Vec<EdgeKey>,
    adj: Vec<Bits>,
}

impl ConflictGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        has(&self.adj[i], j)
    }

    pub fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        iter(&self.adj[i])
    }
}

pub fn conflict_graph(d: &Drawing) -> Result<ConflictGraph, OracleError> {
    let table = CrossingTable::build(d).map_err(|v| OracleError::Invalid(v[0].to_string()))?;
    let es = d.edges();
    let m = es.len();
    let mut adj = vec![bits_new(m); m];
    for i in 0..m {
        for j in i + 1..m {
            if es[i].shares_endpoint(&es[j]) || table.crosses(i, j) {
                set(&mut adj[i], j);
                set(&mut adj[j], i);
            }
        }
    }
    Ok(ConflictGraph { nodes: es.iter().map(|e| e.key()).collect(), adj })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    /// The lexicographically smallest maximum set, by edge index.
    pub edges: Vec<EdgeKey>,
    /// Search nodes visited.
    pub nodes: u64,
}

impl OracleResult {
    pub fn size(&self) -> usize {
        self.edges.len()
    }
}

struct Search<'a> {
    g: &'a ConflictGraph,
    best: Vec<usize>,
    nodes: u64,
}

impl Search<'_> {
    /// Number of cliques in a greedy cover of `p`; an independent set
    /// meets each clique at most once.
    fn clique_cover(&self, p: &Bits) -> usize {
        let mut cliques: Vec<Bits> = Vec::new();
        'next: for v in iter(p) {
            // common neighbourhood of each clique so far
            for c in cliques.iter_mut() {
                if has(c, v) {
                    for (w, a) in c.iter_mut().zip(&self.g.adj[v]) {
                        *w &= a;
                    }
                    continue 'next;
                }
            }
            cliques.push(self.g.adj[v].clone());
        }
        cliques.len()
    }

    fn run(&mut self, current: &mut Vec<usize>, p: Bits) {
        self.nodes += 1;
        let Some(v) = first(&p) else {
            if current.len() > self.best.len() {
                self.best = current.clone();
            }
            return;
        };
        if current.len() + count(&p) <= self.best.len() || current.len() + self.clique_cover(&p) <= self.best.len() {
            return;
        }
        // with v: drop v and its neighbours
        let mut with: Bits = p.iter().zip(&self.g.adj[v]).map(|(a, b)| a & !b).collect();
        with[v / 64] &= !(1 << (v % 64));
        current.push(v);
        self.run(current, with);
        current.pop();
        let mut without = p;
        without[v / 64] &= !(1 << (v % 64));
        self.run(current, without);
    }
}

/// A maximum independent set of the conflict graph. Branches include the
/// lowest-index candidate first and only strict improvements replace the
/// incumbent, so the first optimum found is the lexicographically smallest.
pub fn max_independent(g: &ConflictGraph) -> (Vec<usize>, u64) {
    let mut all = bits_new(g.len());
    for i in 0..g.len() {
        set(&mut all, i);
    }
    let mut s = Search { g, best: Vec::new(), nodes: 0 };
    s.run(&mut Vec::new(), all);
    (s.best, s.nodes)
}

/// Exact maximum disjoint edge set; refuses drawings above [`DEFAULT_CAP`].
pub fn max_disjoint_bruteforce(d: &Drawing) -> Result<OracleResult, OracleError> {
    max_disjoint_capped(d, DEFAULT_CAP)
}

/// As [`max_disjoint_bruteforce`] with an explicit cap. The search is
/// exponential in the worst case.
pub fn max_disjoint_capped(d: &Drawing, cap: usize) -> Result<OracleResult, OracleError> {
    if d.n() > cap {
        return Err(OracleError::TooLarge { n: d.n(), cap });
    }
    let g = conflict_graph(d)?;
    let (best, nodes) = max_independent(&g);
    Ok(OracleResult { edges: best.into_iter().map(|i| g.nodes[i]).collect(), nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{from_heights, gen_flag, GenConfig};

    #[test]
    fn triangle() {
        let d = from_heights(&[0, 2, 1], &[false; 3]);
        let g = conflict_graph(&d).unwrap();
        assert_eq!(g.len(), 3);
        assert!(g.adjacent(0, 1) && g.adjacent(1, 2) && g.adjacent(0, 2));
        assert_eq!(max_disjoint_bruteforce(&d).unwrap().size(), 1);
    }

    #[test]
    fn two_vertices() {
        let d = from_heights(&[0, 1], &[true]);
        assert_eq!(max_disjoint_bruteforce(&d).unwrap().size(), 1);
    }

    #[test]
    fn flag_ten_has_two() {
        let d = gen_flag(&GenConfig::new(10, 7)).unwrap();
        let r = max_disjoint_bruteforce(&d).unwrap();
        assert!(r.size() >= crate::flag::flag_matching(&d).unwrap().len());
        assert!(r.size() >= 2);
        crate::cyl::check_disjoint(&d, &r.edges).unwrap();
    }

    #[test]
    fn cap_enforced() {
        let d = gen_flag(&GenConfig::new(13, 1)).unwrap();
        assert_eq!(max_disjoint_bruteforce(&d), Err(OracleError::TooLarge { n: 13, cap: 12 }));
    }
}
