//! Acceptance run. Prints one PASS/FAIL line per criterion and fails if any
//! criterion fails. The lines go straight to stderr so they show without
//! `--nocapture`.

use std::io::Write;
use std::time::{Duration, Instant};

use cylmatch::bounds::{check_tangent_bound, check_split_sum, check_index_chain, paper_f, PaperParams, Verdict};
use cylmatch::cyl::{greedy_monotone, solve, SolveConfig};
use cylmatch::faults::{inject, Fault};
use cylmatch::flag::{check_proper, check_structure, find_structure, flag_matching, flag_matching_visit, FlagError};
use cylmatch::generate::{gen_archetypes, gen_flag, gen_mixed, GenConfig};
use cylmatch::io::{render_svg, serialize_matching, serialize_mcd, witness_lines, RenderStyle};
use cylmatch::lemmas::{run, suites, Instance};
use cylmatch::oracle::max_disjoint_bruteforce;
use cylmatch::{crossings, q, recut, validate, Drawing, EdgeKey, Rational};
use num_bigint::BigUint;

type Verdict_ = Result<String, String>;

fn flag(n: usize, seed: u64) -> Drawing {
    gen_flag(&GenConfig::new(n, seed)).expect("flag generation")
}

fn mixed(n: usize, seed: u64, wrap: Rational) -> Drawing {
    gen_mixed(&GenConfig::new(n, seed).with_wrap_prob(wrap)).expect("mixed generation")
}

/// A flag cut open somewhere else, so that it becomes a mixed drawing whose
/// solve goes through the layer recursion.
fn recut_flag(n: usize, seed: u64) -> Drawing {
    let f = flag(n, seed);
    [q(3, 7), q(2, 7), q(4, 7), q(5, 9)].iter().find_map(|&a| recut(&f, a).ok()).expect("some cut avoids all events")
}

/// Independent disjointness test: no shared endpoint, no crossing point.
fn disjoint(d: &Drawing, edges: &[EdgeKey]) -> bool {
    let es: Vec<_> = edges.iter().map(|&(a, b)| d.edge(a, b).expect("edge exists")).collect();
    for (i, e) in es.iter().enumerate() {
        for f in &es[i + 1..] {
            let shared = [e.u, e.v].iter().any(|x| *x == f.u || *x == f.v);
            if shared || !crossings(e, f).expect("valid pair").is_empty() {
                return false;
            }
        }
    }
    true
}

/// 500 flags with 10 to 200 vertices, most of them small; generation cost
/// grows with the number of crossings, roughly n^4.
fn flag_corpus() -> Vec<Drawing> {
    let mut out = Vec::new();
    for i in 0..400u64 {
        out.push(flag(10 + (i as usize % 51), 10_000 + i));
    }
    for i in 0..86u64 {
        out.push(flag(61 + (i as usize * 7) % 60, 20_000 + i));
    }
    for i in 0..14u64 {
        out.push(flag(121 + (i as usize * 79) / 13, 30_000 + i));
    }
    out
}

fn c1_flag_guarantee(flags: &[Drawing]) -> Verdict_ {
    let mut slowest = Duration::ZERO;
    let mut max_n = 0;
    for d in flags {
        let n = d.n();
        max_n = max_n.max(n);
        let t = Instant::now();
        let m = flag_matching(d).map_err(|e| format!("n={n}: {e}"))?;
        let dt = t.elapsed();
        slowest = slowest.max(dt);
        let bound = n.div_ceil(25) + 1;
        if m.len() < bound {
            return Err(format!("n={n}: {} edges < {bound}", m.len()));
        }
        if !disjoint(d, &m.edges) {
            return Err(format!("n={n}: edges intersect"));
        }
        if !check_proper(d, &m).ok {
            return Err(format!("n={n}: not proper"));
        }
        if dt >= Duration::from_secs(1) {
            return Err(format!("n={n}: {dt:.2?}"));
        }
    }
    Ok(format!("{} flags, n up to {max_n}, slowest {slowest:.2?}", flags.len()))
}

fn c2_structure_exists(flags: &[Drawing]) -> Verdict_ {
    let mut slowest = Duration::ZERO;
    for d in flags {
        let t = Instant::now();
        let r = find_structure(d);
        let dt = t.elapsed();
        slowest = slowest.max(dt);
        match r {
            Err(FlagError::InvalidDrawing(v)) => return Err(format!("n={}: invalid drawing {v:?}", d.n())),
            Err(e) => return Err(format!("n={}: {e}", d.n())),
            Ok(_) if dt >= Duration::from_millis(10) => return Err(format!("n={}: {dt:.2?}", d.n())),
            Ok(_) => {}
        }
    }
    Ok(format!("{} flags, slowest {slowest:.2?}", flags.len()))
}

fn suite_run(instances: &[Instance], names: &[&str]) -> Verdict_ {
    let chosen: Vec<_> = suites().into_iter().filter(|s| names.contains(&s.name)).collect();
    assert_eq!(chosen.len(), names.len(), "unknown suite name");
    let report = run(instances, &chosen);
    let mut parts = Vec::new();
    for s in &report.suites {
        if !s.passed() {
            let cex = s.counterexample.as_ref().map_or(String::new(), |c| format!("{}: {}", c.instance, c.message));
            return Err(format!("{}: {} failures; {cex}", s.name, s.failures));
        }
        if s.instances == 0 || s.checks == 0 {
            return Err(format!("{}: nothing checked", s.name));
        }
        parts.push(format!("{} {} instances/{} checks", s.name, s.instances, s.checks));
    }
    Ok(parts.join(", "))
}

fn c3_crossing_and_fan_order(flags: &[Drawing]) -> Verdict_ {
    let mut inst: Vec<Instance> =
        flags.iter().filter(|d| d.n() <= 14).map(|d| Instance::new(format!("flag n={}", d.n()), d.clone())).collect();
    for i in 0..120u64 {
        let n = 4 + (i as usize % 6);
        inst.push(Instance::new(format!("small flag n={n}"), flag(n, 40_000 + i)));
    }
    suite_run(&inst, &["crossing-criterion", "fan-order"])
}

fn c4_structures_and_splits(flags: &[Drawing]) -> Verdict_ {
    // every structure used by the flag recursion, rechecked pair by pair
    let (mut found, mut pairs) = (0u64, 0u64);
    for d in flags.iter().filter(|d| d.n() <= 32) {
        let mut seen = Vec::new();
        flag_matching_visit(d, &mut |_, view, s| seen.push((view.to_vec(), *s))).map_err(|e| e.to_string())?;
        for (view, s) in seen {
            let c = check_structure(d, &view, &s).map_err(|e| e.to_string())?;
            if !c.violations.is_empty() {
                return Err(format!("n={}: {s} broken at {:?}", d.n(), c.violations[0]));
            }
            found += 1;
            pairs += c.pairs;
        }
    }
    // solves with every split index and every structure rechecked
    let mut drawings: Vec<Drawing> = (0..80u64).map(|i| recut_flag(24 + (i as usize * 7) % 97, 50_000 + i)).collect();
    drawings.extend((0..30u64).map(|i| mixed(12 + (i as usize % 30), 51_000 + i, q(1, 2))));
    let (mut splits, mut split_pairs, mut structs) = (0u64, 0u64, 0u64);
    for d in &drawings {
        let s = solve(d, &SolveConfig { verify: true, ..SolveConfig::default() }).map_err(|e| format!("n={}: {e}", d.n()))?;
        splits += s.stats.split_indices_checked;
        split_pairs += s.stats.split_pairs;
        structs += s.stats.structures_checked;
    }
    if found == 0 || splits == 0 {
        return Err(format!("vacuous: {found} structures, {splits} split indices"));
    }
    Ok(format!(
        "{found} flag structures/{pairs} pairs; solves: {structs} structures, {splits} split indices/{split_pairs} pairs"
    ))
}

fn c5_oracle(flags: &[Drawing]) -> Verdict_ {
    let mut corpus: Vec<Drawing> = flags.iter().filter(|d| d.n() <= 12).cloned().collect();
    corpus.extend(gen_archetypes().into_iter().map(|(_, d)| d).filter(Drawing::is_complete));
    for i in 0..60u64 {
        let n = 4 + (i as usize % 9);
        corpus.push(mixed(n, 60_000 + i, [q(1, 4), q(1, 2), q(3, 4)][i as usize % 3]));
        corpus.push(mixed(n, 61_000 + i, q(0, 1)));
    }
    let (mut wrap_free, mut slowest12) = (0, Duration::ZERO);
    for d in &corpus {
        let n = d.n();
        let t = Instant::now();
        let best = max_disjoint_bruteforce(d).map_err(|e| format!("n={n}: {e}"))?;
        let dt = t.elapsed();
        if n == 12 {
            slowest12 = slowest12.max(dt);
            if dt >= Duration::from_secs(5) {
                return Err(format!("oracle took {dt:.2?} at n=12"));
            }
        }
        if !disjoint(d, &best.edges) {
            return Err(format!("n={n}: oracle set intersects"));
        }
        let s = solve(d, &SolveConfig::default()).map_err(|e| e.to_string())?;
        if s.edges.len() > best.size() {
            return Err(format!("n={n}: solver {} > oracle {}", s.edges.len(), best.size()));
        }
        if d.is_wrap_free() {
            wrap_free += 1;
            let g = greedy_monotone(d).map_err(|e| e.to_string())?;
            if g.len() != n / 2 || best.size() != n / 2 || !disjoint(d, &g) {
                return Err(format!("wrap-free n={n}: greedy {}, oracle {}", g.len(), best.size()));
            }
        }
    }
    if wrap_free == 0 || slowest12 == Duration::ZERO {
        return Err("corpus lacks wrap-free or n=12 instances".into());
    }
    Ok(format!("{} instances ({wrap_free} wrap-free), oracle at n=12 {slowest12:.2?}", corpus.len()))
}

fn c6_faults(flags: &[Drawing]) -> Verdict_ {
    let mut corpus: Vec<Drawing> = flags.iter().filter(|d| d.n() <= 20).take(100).cloned().collect();
    corpus.extend((0..60u64).map(|i| mixed(5 + (i as usize % 12), 70_000 + i, q(1, 2))));
    let mut counts = [0usize; 5];
    for d in &corpus {
        for (k, f) in Fault::ALL.into_iter().enumerate() {
            let Some(bad) = inject(d, f) else { continue };
            counts[k] += 1;
            if !validate(&bad).has(f.expected()) {
                return Err(format!("{} missed on n={}", f.name(), d.n()));
            }
        }
    }
    if let Some(k) = counts.iter().position(|&c| c < corpus.len() / 2) {
        return Err(format!("{} injected only {} times", Fault::ALL[k].name(), counts[k]));
    }
    let desc: Vec<String> = Fault::ALL.iter().zip(counts).map(|(f, c)| format!("{} {c}", f.name())).collect();
    Ok(format!("all detected: {}", desc.join(", ")))
}

fn median_solve(ds: &[Drawing]) -> Duration {
    let mut ts: Vec<Duration> = ds
        .iter()
        .map(|d| {
            // best of three damps scheduler noise on a shared core
            (0..3)
                .map(|_| {
                    let t = Instant::now();
                    solve(d, &SolveConfig::default()).expect("solve");
                    t.elapsed()
                })
                .min()
                .unwrap()
        })
        .collect();
    ts.sort();
    ts[ts.len() / 2]
}

fn c7_recursion() -> Verdict_ {
    let mut corpus = Vec::new();
    for i in 0..150u64 {
        corpus.push(mixed(20 + (i as usize % 41), 80_000 + i, [q(1, 4), q(1, 2), q(3, 4)][i as usize % 3]));
    }
    for i in 0..50u64 {
        corpus.push(recut_flag(61 + (i as usize * 13) % 90, 81_000 + i));
    }
    for (i, n) in [170, 230, 300].into_iter().enumerate() {
        corpus.push(recut_flag(n, 82_000 + i as u64));
    }
    let mut recursed = 0;
    for d in &corpus {
        let s = solve(d, &SolveConfig::default()).map_err(|e| format!("n={}: {e}", d.n()))?;
        if s.edges.is_empty() || !disjoint(d, &s.edges) {
            return Err(format!("n={}: bad output", d.n()));
        }
        recursed += usize::from(s.stats.flags > 0);
    }
    let ladder = [25usize, 50, 100, 200];
    let times: Vec<Duration> =
        ladder.iter().map(|&n| median_solve(&(0..5u64).map(|s| recut_flag(n, 83_000 + s)).collect::<Vec<_>>())).collect();
    let mut ratios = Vec::new();
    for w in times.windows(2) {
        // sub-millisecond timings are noise; floor them before dividing
        let floor = Duration::from_millis(1);
        let r = w[1].max(floor).as_secs_f64() / w[0].max(floor).as_secs_f64();
        if r >= 10.0 {
            return Err(format!("doubling ratio {r:.2} (times {times:.2?})"));
        }
        ratios.push(format!("{r:.2}"));
    }
    Ok(format!(
        "{} instances disjoint ({recursed} through the recursion); medians {times:.2?} at n={ladder:?}, ratios {}",
        corpus.len(),
        ratios.join("/")
    ))
}

fn f64_f(p: &PaperParams, n: f64) -> f64 {
    let e = 1.0 - p.epsilon.to_f64();
    (e * (n.ln() - p.n0.to_string().parse::<f64>().unwrap().ln())).exp()
}

fn c8_bookkeeping() -> Verdict_ {
    let (mut tangent, mut split, mut chain) = (0, 0, 0);
    for eps in [q(1, 4), q(1, 3), q(3, 8), q(2, 5), q(9, 20)] {
        let p = PaperParams::minimal(eps).map_err(|e| e.to_string())?;
        let n0 = p.n0.clone();
        let ns = [&n0 + 1u32, &n0 * 2u32, &n0 * 3u32 + 7u32, &n0 * &n0];
        for n in &ns {
            // f is concave and increasing: the float value must agree in
            // direction wherever it is well separated
            let fi = paper_f(&p, n);
            let approx = f64_f(&p, n.to_string().parse().unwrap());
            let (lo, hi) = (big_to_f64(&fi.lo), big_to_f64(&fi.hi));
            if !(lo <= approx * (1.0 + 1e-9) && approx <= hi * (1.0 + 1e-9)) {
                return Err(format!("eps={eps}: f enclosure [{lo}, {hi}] misses {approx}"));
            }
            for x in [BigUint::from(1u32), n / 7u32, n / 3u32, n - 1u32] {
                if x == BigUint::from(0u32) {
                    continue;
                }
                if check_tangent_bound(&p, n, &x) != Verdict::Holds {
                    return Err(format!("eps={eps}: tangent bound fails at m={n}, x={x}"));
                }
                tangent += 1;
            }
            for (a, x) in [(n / 2u32, n / 5u32), (n / 3u32, n / 3u32), (n / 4u32, BigUint::from(1u32))] {
                let b = n - &a;
                if check_split_sum(&p, &a, &b, &x) != Verdict::Holds {
                    return Err(format!("eps={eps}: split sum fails at a={a}, b={b}, x={x}"));
                }
                split += 1;
            }
            let steps = check_index_chain(&p, n);
            if steps.len() != 5 || steps.iter().any(|s| s.verdict != Verdict::Holds) {
                return Err(format!("eps={eps}: chain at n={n}: {steps:?}"));
            }
            chain += 1;
        }
        if !check_index_chain(&p, &n0).is_empty() {
            return Err(format!("eps={eps}: chain reported at n = n0"));
        }
    }
    Ok(format!("{tangent} tangent-bound and {split} split-sum instances hold, index chain holds at {chain} sizes above n0"))
}

fn big_to_f64(r: &num_rational::BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn outputs(seed: u64) -> Vec<String> {
    let mut out = Vec::new();
    for (i, d) in [flag(18, seed), mixed(16, seed, q(1, 2)), recut_flag(30, seed)].iter().enumerate() {
        out.push(serialize_mcd(d));
        let s = solve(d, &SolveConfig::default()).expect("solve");
        out.push(serialize_matching(d, &s.edges, &[]));
        if i == 0 {
            let m = flag_matching(d).expect("flag matching");
            out.push(serialize_matching(d, &m.edges, &witness_lines(&m)));
        }
        out.push(render_svg(d, &RenderStyle { highlight: s.edges, ..RenderStyle::default() }));
    }
    out
}

fn c9_determinism() -> Verdict_ {
    let mut bytes = 0;
    for seed in [1u64, 2, 3] {
        let (a, b) = (outputs(seed), outputs(seed));
        if a != b {
            return Err(format!("seed {seed}: outputs differ"));
        }
        bytes += a.iter().map(String::len).sum::<usize>();
    }
    Ok(format!("{bytes} bytes identical across two runs"))
}

fn line(s: String) {
    // the test harness captures print macros but not the raw handle
    let _ = writeln!(std::io::stderr(), "{s}");
}

#[test]
fn acceptance() {
    let t = Instant::now();
    let flags = flag_corpus();
    line(format!("corpus: {} flags generated in {:.1?}", flags.len(), t.elapsed()));
    let mut failed = Vec::new();
    let mut report = |id: &str, name: &str, check: &dyn Fn() -> Verdict_| {
        let t = Instant::now();
        let r = check();
        let dt = t.elapsed();
        match &r {
            Ok(msg) => line(format!("PASS {id} {name}: {msg} [{dt:.1?}]")),
            Err(msg) => {
                line(format!("FAIL {id} {name}: {msg} [{dt:.1?}]"));
                failed.push(id.to_string());
            }
        }
    };
    report("C1", "flag guarantee", &|| c1_flag_guarantee(&flags));
    report("C2", "structure existence", &|| c2_structure_exists(&flags));
    report("C3", "crossing criterion and fan order", &|| c3_crossing_and_fan_order(&flags));
    report("C4", "structures and split indices", &|| c4_structures_and_splits(&flags));
    report("C5", "oracle dominance", &|| c5_oracle(&flags));
    report("C6", "validator sensitivity", &|| c6_faults(&flags));
    report("C7", "solve under recursion", &|| c7_recursion());
    report("C8", "size-function bookkeeping", &|| c8_bookkeeping());
    report("C9", "determinism", &|| c9_determinism());
    line(format!("total {:.1?}", t.elapsed()));
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
