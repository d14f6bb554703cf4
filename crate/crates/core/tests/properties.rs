use cylmatch::cyl::{check_disjoint, solve, SolveConfig};
use cylmatch::faults::{inject, Fault};
use cylmatch::flag::{check_proper, flag_matching};
use cylmatch::generate::{gen_flag, gen_mixed, GenConfig};
use cylmatch::io::{parse_matching, parse_mcd, serialize_matching, serialize_mcd, witness_lines};
use cylmatch::oracle::max_disjoint_bruteforce;
use cylmatch::{crossings, q, recut, relation, validate, CrossingTable, Drawing};
use proptest::prelude::*;

fn wrap_prob() -> impl Strategy<Value = cylmatch::Rational> {
    prop_oneof![Just(q(0, 1)), Just(q(1, 4)), Just(q(1, 2)), Just(q(3, 4)), Just(q(1, 1))]
}

fn mixed() -> impl Strategy<Value = Drawing> {
    (3usize..13, any::<u64>(), wrap_prob())
        .prop_map(|(n, seed, w)| gen_mixed(&GenConfig::new(n, seed).with_wrap_prob(w)).unwrap())
}

fn flag(lo: usize, hi: usize) -> impl Strategy<Value = Drawing> {
    (lo..hi, any::<u64>()).prop_map(|(n, seed)| gen_flag(&GenConfig::new(n, seed)).unwrap())
}

/// A cut position in (0, 1) with a small denominator.
fn cut() -> impl Strategy<Value = cylmatch::Rational> {
    (2i128..40).prop_flat_map(|den| (1..den).prop_map(move |num| q(num, den)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn generated_drawings_are_valid(d in mixed()) {
        prop_assert!(validate(&d).ok());
        prop_assert!(d.is_complete());
    }

    #[test]
    fn mcd_round_trip(d in mixed()) {
        let text = serialize_mcd(&d);
        let back = parse_mcd(&text).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(serialize_mcd(&back), text);
    }

    #[test]
    fn recut_keeps_crossings(d in mixed(), a in cut()) {
        // a cut through an event is refused; any other cut must leave the
        // drawing valid with the same crossing pairs
        if let Ok(r) = recut(&d, a) {
            prop_assert!(validate(&r).ok());
            let (t0, t1) = (CrossingTable::build(&d).unwrap(), CrossingTable::build(&r).unwrap());
            prop_assert_eq!(t0.count(), t1.count());
            for (i, e) in d.edges().iter().enumerate() {
                for (j, f) in d.edges().iter().enumerate().skip(i + 1) {
                    let (ri, rj) = (r.edge_index(e.u, e.v).unwrap(), r.edge_index(f.u, f.v).unwrap());
                    prop_assert_eq!(t0.crosses(i, j), t1.crosses(ri, rj));
                }
            }
        }
    }

    #[test]
    fn crossings_and_relation_are_symmetric(d in mixed()) {
        let es = d.edges();
        for (i, e) in es.iter().enumerate() {
            for f in &es[i + 1..] {
                // each side reports points in its own lift; compare on the cylinder
                let on_cyl = |ps: Vec<cylmatch::Point>| ps.iter().map(|p| (p.x.fract(), p.y)).collect::<Vec<_>>();
                let (a, b) = (on_cyl(crossings(e, f).unwrap()), on_cyl(crossings(f, e).unwrap()));
                prop_assert_eq!(&a, &b);
                prop_assert!(a.len() <= 1);
                prop_assert_eq!(relation(e, f).map(|r| r.flip()), relation(f, e));
            }
        }
    }

    #[test]
    fn flag_matching_meets_bound(d in flag(10, 40)) {
        let m = flag_matching(&d).unwrap();
        prop_assert!(m.len() >= d.n().div_ceil(25) + 1);
        prop_assert!(check_proper(&d, &m).ok);
    }

    #[test]
    fn flag_matching_file_round_trip(d in flag(4, 24)) {
        let m = flag_matching(&d).unwrap();
        let text = serialize_matching(&d, &m.edges, &witness_lines(&m));
        let back = parse_matching(&text).unwrap();
        let (mut a, mut b) = (back.edges.clone(), m.edges.clone());
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
        prop_assert_eq!(back.witnesses, witness_lines(&m));
    }

    #[test]
    fn solve_is_disjoint_and_deterministic(d in mixed()) {
        let s = solve(&d, &SolveConfig::default()).unwrap();
        prop_assert!(!s.edges.is_empty() || d.n() < 2);
        prop_assert!(check_disjoint(&d, &s.edges).is_ok());
        let v = solve(&d, &SolveConfig { verify: true, ..SolveConfig::default() }).unwrap();
        prop_assert_eq!(v.edges, s.edges);
    }

    #[test]
    fn oracle_dominates_solver(d in (3usize..10, any::<u64>(), wrap_prob())
        .prop_map(|(n, s, w)| gen_mixed(&GenConfig::new(n, s).with_wrap_prob(w)).unwrap()))
    {
        let best = max_disjoint_bruteforce(&d).unwrap();
        let s = solve(&d, &SolveConfig::default()).unwrap();
        prop_assert!(s.edges.len() <= best.size());
        prop_assert!(best.size() <= d.n() / 2);
    }

    #[test]
    fn injected_faults_are_reported(d in mixed(), k in 0usize..5) {
        let f = Fault::ALL[k];
        if let Some(bad) = inject(&d, f) {
            prop_assert!(validate(&bad).has(f.expected()), "{} not reported", f.name());
        }
    }
}
