use std::fs;
use std::io::{self, BufRead, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rayon::prelude::*;

use dihedra::analysis::{
    is_doubly_even, is_self_dual, min_distance, rank_f2, weight_enumerator, BinaryCode,
};
use dihedra::codes::{count_selfdual, count_selfdual_published, DihedralSystem};
use dihedra::cyclofactor::{derive_params, factor_cyclotomic, FactorKind};
use dihedra::fixtures::{verify_fixture, DistanceCheck, FixtureId};
use dihedra::record::{read_matrix, record_to_spec, spec_to_record, write_matrix, AnalysisRecord, SpecRecord};
use dihedra::wset::{selfrec_cardinality, wset_tower};

#[derive(Parser)]
#[command(name = "dihedra", version, about = "Self-dual binary left D_8m-codes: build, enumerate, count, verify")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "DIHEDRA_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor x^m0 - 1 and show the component structure for m.
    Factor {
        #[arg(long)]
        m: u64,
    },
    /// List W^(s) for a self-reciprocal factor (index 0 is x+1).
    Wset {
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 0)]
        i: usize,
        /// Level s (default 2^λ).
        #[arg(long)]
        s: Option<usize>,
        /// Print at most this many elements.
        #[arg(long, default_value_t = 1000)]
        limit: usize,
    },
    /// Number of self-dual codes, with the per-factor breakdown.
    Count {
        #[arg(long)]
        m: u64,
        /// Also show the product with the published pair count.
        #[arg(long)]
        published: bool,
    },
    /// Emit the self-dual codes in canonical order, one record per line.
    Enumerate {
        #[arg(long)]
        m: u64,
        /// Index window `A..B` (end exclusive).
        #[arg(long)]
        range: Option<String>,
        /// Largest count enumerated without a range.
        #[arg(long, default_value_t = 1_000_000)]
        bound: u128,
        /// Analyses to attach (comma-separated).
        #[arg(long, value_enum, value_delimiter = ',')]
        analyze: Vec<Analysis>,
        /// Attach the generator matrix rows.
        #[arg(long)]
        with_matrix: bool,
        #[arg(long, value_enum, default_value_t = Format::Jsonl)]
        format: Format,
    },
    /// Assemble the generator matrix of a record emitted by `enumerate`.
    Build {
        /// Expected m (checked against the record).
        #[arg(long)]
        m: Option<u64>,
        /// The record itself, as one JSON line.
        #[arg(long, conflicts_with = "input")]
        spec: Option<String>,
        /// File of records, one per line (`-` for stdin).
        #[arg(long)]
        input: Option<PathBuf>,
        /// Matrix file for a single record (default: stdout).
        #[arg(long, conflicts_with = "out_dir")]
        out: Option<PathBuf>,
        /// Directory receiving one matrix file per record.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Analyze a generator-matrix file.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        flags: AnalyzeFlags,
    },
    /// Check the bundled reference data.
    VerifyPaper {
        /// Fixture id, or all of them.
        #[arg(long, default_value = "all")]
        fixture: String,
        /// Exact distance for every code.
        #[arg(long, conflicts_with = "sample")]
        full_distance: bool,
        /// Exact distance for N seeded random codes, a screen for the rest.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Screen size for non-sampled codes, in rows (2^bits codewords).
        #[arg(long, default_value_t = 20)]
        screen_bits: usize,
        /// Print every record, not only failures.
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Args)]
struct AnalyzeFlags {
    #[arg(long)]
    min_dist: bool,
    #[arg(long)]
    weight_enum: bool,
    #[arg(long)]
    self_dual: bool,
    #[arg(long)]
    doubly_even: bool,
    /// Stop the distance sweep at the first codeword lighter than W.
    #[arg(long, value_name = "W")]
    early_abort: Option<u32>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Analysis {
    MinDist,
    WeightEnum,
    SelfDual,
    DoublyEven,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Jsonl,
    Text,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Returns whether every check the command ran passed.
fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Factor { m } => cmd_factor(m),
        Command::Wset { m, i, s, limit } => cmd_wset(m, i, s, limit),
        Command::Count { m, published } => cmd_count(m, published),
        Command::Enumerate { m, range, bound, analyze, with_matrix, format } => {
            cmd_enumerate(m, range.as_deref(), bound, &analyze, with_matrix, format)
        }
        Command::Build { m, spec, input, out, out_dir } => cmd_build(m, spec, input, out, out_dir),
        Command::Analyze { file, flags } => cmd_analyze(&file, &flags),
        Command::VerifyPaper { fixture, full_distance, sample, seed, screen_bits, verbose } => {
            let check = if full_distance {
                DistanceCheck::Full
            } else {
                DistanceCheck::Sample { n: sample.unwrap_or(32), seed, screen_log2: screen_bits }
            };
            cmd_verify(&fixture, check, verbose)
        }
    }
}

fn cmd_factor(m: u64) -> Result<bool> {
    let p = derive_params(m)?;
    let fs = factor_cyclotomic(p.m0)?;
    println!("m = {m} = 2^{}·{}, λ = {}, S = {}, 4m = {}", p.lambda0, p.m0, p.lambda, p.s_max(), p.fourm());
    println!("ρ = {}, ε = {}", fs.rho, fs.eps);
    for (i, f) in fs.factors.iter().enumerate() {
        let kind = match f.kind {
            FactorKind::Unit => "x+1".to_string(),
            FactorKind::SelfReciprocal => "self-reciprocal".to_string(),
            FactorKind::PairLow | FactorKind::PairHigh => format!("pair with f_{}", fs.mu(i)?),
        };
        println!("f_{i} = {}  (d = {}, {kind})", f.poly, f.degree);
    }
    Ok(true)
}

fn cmd_wset(m: u64, i: usize, s: Option<usize>, limit: usize) -> Result<bool> {
    let sys = DihedralSystem::new(m)?;
    if i >= sys.ctxs.len() {
        bail!("factor index {i} out of range (m = {m} has {} factors)", sys.ctxs.len());
    }
    if !sys.fs.is_self_reciprocal_index(i) {
        bail!("f_{i} = {} is not self-reciprocal; W-sets are defined for x+1 and self-reciprocal factors", sys.fs.poly(i));
    }
    let ctx = &sys.ctxs[i];
    let s = s.unwrap_or(sys.smax());
    if s == 0 {
        bail!("level s must be at least 1");
    }
    let tower = wset_tower(ctx, s)?;
    let w = &tower[s - 1];
    println!("# W^({s}) for f_{i} = {}: {} elements", ctx.f, w.len());
    let mut ok = true;
    if i > 0 {
        let law = selfrec_cardinality(ctx.d, s);
        ok = law == w.len() as u128;
        println!("# cardinality law (2^(d/2)+1)·2^((s-1)d/2) = {law}: {}", if ok { "holds" } else { "VIOLATED" });
    }
    for p in w.polys().take(limit) {
        println!("{}  {p}", p.to_bitstring(s * ctx.d));
    }
    if w.len() > limit {
        println!("# ... {} more", w.len() - limit);
    }
    Ok(ok)
}

fn cmd_count(m: u64, published: bool) -> Result<bool> {
    let c = count_selfdual(m)?;
    let p = &c.params;
    println!("m = {m}: 4m = 2^{}·{}, S = {}", p.lambda, p.m0, p.s_max());
    for t in &c.terms {
        println!("  i={}  d={}  {:<16} {}", t.i, t.d, t.kind, t.value);
    }
    let factors: Vec<String> = c.terms.iter().map(|t| t.value.to_string()).collect();
    println!("count = {} = {}", factors.join("·"), c.total);
    if published {
        let q = count_selfdual_published(m)?;
        let factors: Vec<String> = q.terms.iter().map(|t| t.value.to_string()).collect();
        println!("with the printed pair count: {} = {}", factors.join("·"), q.total);
    }
    Ok(true)
}

fn parse_range(s: &str) -> Result<(u128, u128)> {
    let (a, b) = s.split_once("..").ok_or_else(|| anyhow!("range must look like A..B"))?;
    let a: u128 = a.trim().parse().context("range start")?;
    let b: u128 = b.trim().parse().context("range end")?;
    if a > b {
        bail!("empty range {a}..{b}");
    }
    Ok((a, b))
}

fn analyze_code(code: &BinaryCode, what: &[Analysis]) -> Result<AnalysisRecord> {
    let mut a = AnalysisRecord { n: code.n, k: code.k(), ..Default::default() };
    if what.contains(&Analysis::SelfDual) {
        a.self_dual = Some(is_self_dual(code));
    }
    if what.contains(&Analysis::DoublyEven) {
        a.doubly_even = Some(is_doubly_even(code));
    }
    if what.contains(&Analysis::WeightEnum) {
        let we = weight_enumerator(code)?;
        a.min_distance = we.min_nonzero_weight();
        a.weight_enumerator = Some(we.terms());
    } else if what.contains(&Analysis::MinDist) {
        a.min_distance = Some(min_distance(code, None)?.weight);
    }
    Ok(a)
}

fn cmd_enumerate(
    m: u64,
    range: Option<&str>,
    bound: u128,
    analyze: &[Analysis],
    with_matrix: bool,
    format: Format,
) -> Result<bool> {
    let sys = DihedralSystem::new(m)?;
    let total = sys.count()?;
    let (start, end) = match range {
        Some(r) => {
            let (a, b) = parse_range(r)?;
            if BigUint::from(b) > total {
                bail!("range end {b} exceeds the count {total}");
            }
            (a, b)
        }
        None => {
            let t = u128::try_from(&total).ok().filter(|&t| t <= bound);
            let t = t.ok_or_else(|| {
                anyhow!("m = {m} has {total} codes, above the bound {bound}; pass --range A..B to enumerate a window")
            })?;
            (0, t)
        }
    };
    let out = io::stdout();
    let mut out = BufWriter::new(out.lock());
    let need_code = with_matrix || !analyze.is_empty();
    const CHUNK: u128 = 1024;
    let mut lo = start;
    while lo < end {
        let hi = (lo + CHUNK).min(end);
        let lines: Vec<String> = (lo..hi)
            .into_par_iter()
            .map(|i| -> Result<String> {
                let idx = BigUint::from(i);
                let spec = sys.spec_at(&idx)?;
                let mut rec = spec_to_record(&sys, &spec, Some(&idx));
                if need_code {
                    let code = sys.assemble(&spec)?;
                    if !analyze.is_empty() {
                        rec.analysis = Some(analyze_code(&code, analyze)?);
                    }
                    if with_matrix {
                        rec.matrix = Some(code.to_bitstrings());
                    }
                }
                match format {
                    Format::Jsonl => Ok(rec.to_line()?),
                    Format::Text => Ok(text_line(&rec)),
                }
            })
            .collect::<Result<_>>()?;
        for l in lines {
            if let Err(e) = writeln!(out, "{l}") {
                // A closed pipe (e.g. `| head`) just ends the stream.
                if e.kind() == io::ErrorKind::BrokenPipe {
                    return Ok(true);
                }
                return Err(e.into());
            }
        }
        lo = hi;
    }
    match out.flush() {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(true),
    }
}

fn text_line(rec: &SpecRecord) -> String {
    let mut s = format!("{:>8}", rec.index.as_deref().unwrap_or("-"));
    for c in &rec.components {
        s.push_str(&format!("  G_{}={}", c.i, c.tag));
        if let Some(k) = c.k {
            s.push_str(&format!(" k={k}"));
        }
        for (n, v) in [("a", &c.a), ("b", &c.b), ("c", &c.c)] {
            if let Some(v) = v {
                s.push_str(&format!(" {n}={v}"));
            }
        }
    }
    if let Some(a) = &rec.analysis {
        s.push_str(&format!("  [{},{}", a.n, a.k));
        if let Some(d) = a.min_distance {
            s.push_str(&format!(",{d}"));
        }
        s.push(']');
        if let Some(sd) = a.self_dual {
            s.push_str(if sd { " self-dual" } else { " NOT-self-dual" });
        }
        if let Some(de) = a.doubly_even {
            s.push_str(if de { " doubly-even" } else { " singly-even" });
        }
    }
    s
}

fn cmd_build(
    m: Option<u64>,
    spec: Option<String>,
    input: Option<PathBuf>,
    out: Option<PathBuf>,
    out_dir: Option<PathBuf>,
) -> Result<bool> {
    let lines: Vec<String> = match (spec, input) {
        (Some(s), _) => vec![s],
        (None, Some(p)) if p.as_os_str() == "-" => io::stdin().lock().lines().collect::<io::Result<_>>()?,
        (None, Some(p)) => fs::read_to_string(&p)
            .with_context(|| format!("reading {}", p.display()))?
            .lines()
            .map(String::from)
            .collect(),
        (None, None) => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s.lines().map(String::from).collect()
        }
    };
    let records: Vec<(usize, SpecRecord)> = lines
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| SpecRecord::from_line(l).map(|r| (n + 1, r)).with_context(|| format!("record on line {}", n + 1)))
        .collect::<Result<_>>()?;
    if records.is_empty() {
        bail!("no records given");
    }
    if records.len() > 1 && out_dir.is_none() {
        bail!("{} records given; pass --out-dir to write one matrix per record", records.len());
    }
    let mut all_ok = true;
    let mut systems: Vec<DihedralSystem> = Vec::new();
    for (line, rec) in &records {
        if let Some(m) = m {
            if rec.m != m {
                bail!("record on line {line} is for m={}, expected m={m}", rec.m);
            }
        }
        if !systems.iter().any(|s| s.params.m == rec.m) {
            systems.push(DihedralSystem::new(rec.m)?);
        }
        let sys = systems.iter().find(|s| s.params.m == rec.m).expect("just added");
        let spec = record_to_spec(sys, rec).with_context(|| format!("record on line {line}"))?;
        let code = sys.assemble(&spec)?;
        let rank = rank_f2(&code.rows, code.words);
        let sd = is_self_dual(&code);
        all_ok &= sd;
        let text = write_matrix(&code);
        let label = rec.index.clone().unwrap_or_else(|| format!("line{line}"));
        let summary = format!("m={} index={label}: n={} k={} rank={rank} self-dual={sd}", rec.m, code.n, code.k());
        match (&out, &out_dir) {
            (Some(p), _) => {
                fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
                println!("{summary}");
            }
            (None, Some(dir)) => {
                fs::create_dir_all(dir)?;
                let p = dir.join(format!("m{}-{label}.txt", rec.m));
                fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?;
                println!("{summary} -> {}", p.display());
            }
            (None, None) => {
                print!("{text}");
                eprintln!("{summary}");
            }
        }
    }
    Ok(all_ok)
}

fn cmd_analyze(file: &PathBuf, f: &AnalyzeFlags) -> Result<bool> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let code = read_matrix(&text)?;
    let none = !(f.min_dist || f.weight_enum || f.self_dual || f.doubly_even);
    let mut ok = true;
    let mut rec = AnalysisRecord { n: code.n, k: code.k(), ..Default::default() };
    if f.self_dual || none {
        let sd = is_self_dual(&code);
        ok &= sd || none;
        rec.self_dual = Some(sd);
    }
    if f.doubly_even {
        let de = is_doubly_even(&code);
        ok &= de;
        rec.doubly_even = Some(de);
    }
    if f.weight_enum {
        let we = weight_enumerator(&code)?;
        rec.weight_enumerator = Some(we.terms());
        rec.min_distance = we.min_nonzero_weight();
    }
    if f.min_dist || f.early_abort.is_some() {
        let md = min_distance(&code, f.early_abort)?;
        rec.min_distance = Some(md.weight);
        rec.aborted = md.aborted;
        if md.aborted {
            ok = false;
        }
    }
    if f.json {
        println!("{}", serde_json::to_string(&rec)?);
        return Ok(ok);
    }
    println!("n = {}, k = {}, rank = {}", rec.n, rec.k, rank_f2(&code.rows, code.words));
    if let Some(sd) = rec.self_dual {
        println!("self-dual: {sd}");
    }
    if let Some(de) = rec.doubly_even {
        println!("doubly-even: {de}");
    }
    if let Some(d) = rec.min_distance {
        if rec.aborted {
            println!("min distance: <= {d} (aborted below {})", f.early_abort.unwrap_or(0));
        } else {
            println!("min distance: {d}");
        }
    }
    if let Some(we) = &rec.weight_enumerator {
        let terms: Vec<String> = we.iter().map(|(w, c)| match (w, c) {
            (0, c) => c.to_string(),
            (w, 1) => format!("X^{w}"),
            (w, c) => format!("{c}X^{w}"),
        }).collect();
        println!("weight enumerator: {}", terms.join(" + "));
    }
    Ok(ok)
}

fn cmd_verify(fixture: &str, check: DistanceCheck, verbose: bool) -> Result<bool> {
    let ids: Vec<FixtureId> =
        if fixture == "all" { FixtureId::ALL.to_vec() } else { vec![fixture.parse::<FixtureId>()?] };
    let mut all_ok = true;
    for id in ids {
        let report = verify_fixture(id, check)?;
        let passed = report.results.iter().filter(|r| r.passed).count();
        for r in &report.results {
            if verbose || !r.passed {
                println!("{} {}: {}", if r.passed { "pass" } else { "FAIL" }, r.coord, r.detail);
            }
        }
        println!("{id}: {passed}/{} records pass", report.results.len());
        all_ok &= report.passed();
    }
    Ok(all_ok)
}
