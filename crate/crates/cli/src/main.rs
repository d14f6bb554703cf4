use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use cylmatch::bounds::PaperParams;
use cylmatch::cyl::{solve, Mode, SolveConfig};
use cylmatch::flag::flag_matching;
use cylmatch::generate::{archetype, gen_flag, gen_mixed, GenConfig, ARCHETYPES};
use cylmatch::io::{parse_matching, parse_mcd, render_svg, serialize_matching, serialize_mcd, witness_lines, RenderStyle};
use cylmatch::lemmas::{default_corpus, run, suites, Instance};
use cylmatch::oracle::{max_disjoint_capped, DEFAULT_CAP};
use cylmatch::{q, recut, validate, Drawing, Rational};

#[derive(Parser)]
#[command(name = "cylmatch", version, about = "Disjoint edges in monotone cylindrical drawings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Practical,
    Paper,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a random or named drawing as MCD1.
    Generate {
        /// flag, mixed, planefree, recut or archetype:<name>
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Wrap probability for `mixed`, as a rational such as 1/2.
        #[arg(long, default_value = "1/2")]
        wrap_prob: Rational,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a drawing; exits with status 1 when it is invalid.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Find pairwise disjoint edges.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "practical")]
        mode: ModeArg,
        /// Slab size.
        #[arg(long)]
        k: Option<usize>,
        /// Paper mode: epsilon in (0, 1/2).
        #[arg(long, default_value = "1/4")]
        epsilon: Rational,
        /// Paper mode: n0; the smallest admissible value when absent.
        #[arg(long)]
        n0: Option<String>,
        /// Recheck every intermediate step.
        #[arg(long)]
        verify: bool,
        /// Use the flag matching with its witnesses (input must be a flag).
        #[arg(long)]
        flag: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact maximum disjoint edge set by branch and bound.
    Oracle {
        #[arg(long = "in")]
        input: PathBuf,
        /// Lift the vertex cap.
        #[arg(long)]
        force: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw the plane representation as SVG.
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        /// Matching file whose edges are highlighted.
        #[arg(long)]
        matching: Option<PathBuf>,
        #[arg(long, default_value_t = 800)]
        width: u32,
        #[arg(long, default_value_t = 500)]
        height: u32,
        #[arg(long)]
        labels: bool,
        #[arg(long)]
        no_cut: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every lemma suite over a corpus; exits with status 1 on any failure.
    LemmaCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Multiplier for the generated part of the corpus.
        #[arg(long, default_value_t = 4)]
        scale: usize,
        /// Extra flags checked by the structure search alone.
        #[arg(long, default_value_t = 1000)]
        bulk: usize,
        /// Add every .mcd file in this directory to the corpus.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Write shrunk counterexamples here.
        #[arg(long)]
        cex_dir: Option<PathBuf>,
    },
    /// Time practical-mode solves on generated drawings.
    Bench {
        /// Comma-separated vertex counts.
        #[arg(long, default_value = "25,50,100,200")]
        sizes: String,
        #[arg(long, default_value_t = 3)]
        reps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// flag, mixed or recut
        #[arg(long, default_value = "recut")]
        kind: String,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> Result<Drawing> {
    parse_mcd(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn require_valid(d: &Drawing) -> Result<()> {
    let r = validate(d);
    if let Some(v) = r.violations.first() {
        bail!("invalid drawing: {v}");
    }
    Ok(())
}

fn generate(kind: &str, n: usize, seed: u64, wrap_prob: Rational) -> Result<Drawing> {
    let cfg = GenConfig::new(n, seed);
    Ok(match kind {
        "flag" => gen_flag(&cfg)?,
        "mixed" => gen_mixed(&cfg.with_wrap_prob(wrap_prob))?,
        "planefree" => gen_mixed(&cfg.with_wrap_prob(q(0, 1)))?,
        // a flag cut open elsewhere: a mixed drawing that exercises the layer recursion
        "recut" => {
            let f = gen_flag(&cfg)?;
            [q(3, 7), q(2, 7), q(4, 7)]
                .iter()
                .find_map(|&a| recut(&f, a).ok())
                .ok_or_else(|| anyhow!("no clean cut found"))?
        }
        _ => {
            let name = kind.strip_prefix("archetype:").ok_or_else(|| anyhow!("unknown kind {kind}"))?;
            archetype(name).ok_or_else(|| anyhow!("unknown archetype {name}; known: {}", ARCHETYPES.join(", ")))?
        }
    })
}

fn params(epsilon: Rational, n0: Option<String>) -> Result<PaperParams> {
    Ok(match n0 {
        Some(s) => PaperParams::new(epsilon, s.parse().map_err(|_| anyhow!("bad n0 {s}"))?)?,
        None => PaperParams::minimal(epsilon)?,
    })
}

fn lemma_check(seed: u64, scale: usize, bulk: usize, corpus: Option<PathBuf>, cex_dir: Option<PathBuf>) -> Result<bool> {
    let mut instances = default_corpus(seed, scale, bulk);
    if let Some(dir) = corpus {
        let mut paths: Vec<PathBuf> = fs::read_dir(&dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "mcd"))
            .collect();
        paths.sort();
        for p in paths {
            instances.push(Instance::new(p.display().to_string(), load(&p)?));
        }
    }
    let start = Instant::now();
    let report = run(&instances, &suites());
    println!("corpus: {} drawings", instances.len());
    for s in &report.suites {
        let verdict = if s.passed() { "PASS" } else { "FAIL" };
        println!("{verdict} {:<20} instances={:<6} checks={:<10} failures={}", s.name, s.instances, s.checks, s.failures);
        if let Some(c) = &s.counterexample {
            println!("  first failure: {} ({})", c.instance, c.message);
            match &cex_dir {
                Some(dir) => {
                    fs::create_dir_all(dir)?;
                    let path = dir.join(format!("{}.mcd", s.name));
                    fs::write(&path, &c.mcd)?;
                    println!("  shrunk counterexample: {}", path.display());
                }
                None => print!("{}", c.mcd.lines().map(|l| format!("  | {l}\n")).collect::<String>()),
            }
        }
    }
    println!("elapsed: {:.2?}", start.elapsed());
    Ok(report.ok())
}

fn bench(sizes: &str, reps: u64, seed: u64, kind: &str) -> Result<()> {
    let sizes: Vec<usize> = sizes.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>()?;
    println!("{:>6} {:>6} {:>12} {:>8}", "n", "reps", "mean_ms", "size");
    let mut prev: Option<f64> = None;
    for &n in &sizes {
        let mut total = 0.0;
        let mut size = 0;
        for r in 0..reps {
            let d = generate(kind, n, seed + r, q(1, 2))?;
            let t = Instant::now();
            let s = solve(&d, &SolveConfig::default())?;
            total += t.elapsed().as_secs_f64();
            size += s.edges.len();
        }
        let mean = total / reps as f64 * 1e3;
        let ratio = prev.map_or(String::new(), |p| format!("  x{:.2}", mean / p));
        println!("{n:>6} {reps:>6} {mean:>12.3} {:>8.1}{ratio}", size as f64 / reps as f64);
        prev = Some(mean);
    }
    Ok(())
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<bool> {
    match Cli::parse().cmd {
        Cmd::Generate { kind, n, seed, wrap_prob, out } => {
            let d = generate(&kind, n, seed, wrap_prob)?;
            emit(out.as_deref(), &serialize_mcd(&d))?;
        }
        Cmd::Validate { input } => {
            let d = load(&input)?;
            let r = validate(&d);
            if r.ok() {
                println!("ok: {} vertices, {} edges", d.n(), d.edges().len());
            } else {
                for v in &r.violations {
                    println!("{v}");
                }
                if r.truncated {
                    println!("(more violations not shown)");
                }
                return Ok(false);
            }
        }
        Cmd::Solve { input, mode, k, epsilon, n0, verify, flag, out } => {
            let d = load(&input)?;
            require_valid(&d)?;
            let text = if flag {
                let m = flag_matching(&d)?;
                eprintln!("flag matching: {} edges", m.len());
                serialize_matching(&d, &m.edges, &witness_lines(&m))
            } else {
                let (mode, params) = match mode {
                    ModeArg::Practical => (Mode::Practical, None),
                    ModeArg::Paper => (Mode::Paper, Some(params(epsilon, n0)?)),
                };
                let s = solve(&d, &SolveConfig { mode, k, params, verify })?;
                eprintln!("{} edges; {:?}", s.edges.len(), s.stats);
                serialize_matching(&d, &s.edges, &[])
            };
            emit(out.as_deref(), &text)?;
        }
        Cmd::Oracle { input, force, out } => {
            let d = load(&input)?;
            require_valid(&d)?;
            let cap = if force { usize::MAX } else { DEFAULT_CAP };
            let t = Instant::now();
            let r = max_disjoint_capped(&d, cap)?;
            eprintln!("optimum {} ({} search nodes, {:.2?})", r.size(), r.nodes, t.elapsed());
            emit(out.as_deref(), &serialize_matching(&d, &r.edges, &[]))?;
        }
        Cmd::Render { input, matching, width, height, labels, no_cut, out } => {
            let d = load(&input)?;
            let highlight = match matching {
                Some(p) => parse_matching(&read(&p)?).with_context(|| format!("parsing {}", p.display()))?.edges,
                None => Vec::new(),
            };
            let style = RenderStyle { width, height, highlight, show_cut: !no_cut, label_vertices: labels };
            if width == 0 || height == 0 {
                bail!("width and height must be positive");
            }
            emit(out.as_deref(), &render_svg(&d, &style))?;
        }
        Cmd::LemmaCheck { seed, scale, bulk, corpus, cex_dir } => return lemma_check(seed, scale, bulk, corpus, cex_dir),
        Cmd::Bench { sizes, reps, seed, kind } => bench(&sizes, reps, seed, &kind)?,
    }
    Ok(true)
}
