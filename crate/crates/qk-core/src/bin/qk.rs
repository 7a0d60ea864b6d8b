//! Command-line front end: generate instances, verify sets, run the
//! constructions, query exact minima, scan families, and print the
//! sharpness table.
//!
//! Exit codes: 0 success / all checks pass, 1 check failure or
//! counterexample, 2 usage or input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qk_core::digraph::CompositionSpec;
use qk_core::error::Error;
use qk_core::gen;
use qk_core::io::{parse_digraph, serialize_digraph_with_comments};
use qk_core::qk::{
    is_good_quasi_kernel, kernel_exact, minimum_quasi_kernel_exact, quasi_kernel_cl,
    verify_kernel, verify_quasi_kernel, DEFAULT_KERNEL_BUDGET,
};
use qk_core::recognition::recognize_one_way_split;
use qk_core::scan::{
    reproduce_sharpness_table, run_scan, CheckKind, Family, ScanConfig, ScanMode,
};
use qk_core::small_qk::{
    small_qk_anti_claw_free, small_qk_good, small_qk_k41_free, small_qk_partitioned,
    small_qk_via_second_kernel, SmallQkResult,
};
use qk_core::split::{construct_d_k, construct_dstar, split_min_qk_exact, split_small_qk, OneWaySplitPartition};
use qk_core::{Digraph, VertexSet};

#[derive(Parser)]
#[command(name = "qk", version, about = "Quasi-kernel toolkit for digraphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a digraph and write it in edge-list format
    Gen(GenArgs),
    /// Verify a vertex set against a digraph
    Verify(VerifyArgs),
    /// Run one of the quasi-kernel constructions
    Find(FindArgs),
    /// Exact minimum quasi-kernel size
    Min(MinArgs),
    /// Check families of instances and write a JSON report
    Scan(ScanArgs),
    /// Exact minima of the pendant-tournament family against the bound
    Table(TableArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenType {
    Random,
    Tournament,
    Semicomplete,
    Circulant,
    Split,
    Dk,
    Dstar,
    Compose,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long = "type", value_enum)]
    kind: GenType,
    /// Vertex count (random, tournament, semicomplete, circulant)
    #[arg(long)]
    n: Option<usize>,
    /// Family parameter (circulant jumps, dk index)
    #[arg(long)]
    k: Option<usize>,
    /// Independent-side size (split)
    #[arg(long)]
    nx: Option<usize>,
    /// Semicomplete-side size (split)
    #[arg(long)]
    ny: Option<usize>,
    /// Arc probability
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Template digraph file (compose)
    #[arg(long)]
    template: Option<PathBuf>,
    /// Comma-separated part digraph files (compose)
    #[arg(long, value_delimiter = ',')]
    parts: Vec<PathBuf>,
    /// Output file
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyMode {
    Kernel,
    Qk,
    GoodQk,
    SmallQk,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Comma-separated vertex ids
    #[arg(long)]
    set: String,
    #[arg(long, value_enum)]
    mode: VerifyMode,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FindAlgo {
    Cl,
    AntiClaw,
    K41,
    Good,
    LemmaN2,
    Partition,
    Split,
}

#[derive(clap::Args)]
struct FindArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum)]
    algo: FindAlgo,
    /// Two-line partition file (ids per line, `-` for an empty part)
    #[arg(long)]
    partition: Option<PathBuf>,
    /// Starting set for algorithms that take one
    #[arg(long)]
    set: Option<String>,
}

#[derive(clap::Args)]
struct MinArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Size cap for the exhaustive search (defaults to the order)
    #[arg(long)]
    cap: Option<usize>,
    /// Use the polynomial one-way split oracle instead
    #[arg(long, default_value_t = false)]
    split_exact: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScanModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    All,
    #[value(name = "sink_free")]
    SinkFree,
    Tournament,
    Semicomplete,
    #[value(name = "one_way_split")]
    OneWaySplit,
    #[value(name = "indeg_le_3")]
    IndegLe3,
    #[value(name = "dag_partitioned")]
    DagPartitioned,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckArg {
    Conjecture,
    Thm1,
    Thm2,
    #[value(name = "thm3_contrapositive")]
    Thm3Contrapositive,
    Thm4,
    Thm5,
    Thm6,
    Lemma1,
    Jm,
    #[value(name = "oracle_cross")]
    OracleCross,
}

#[derive(clap::Args)]
struct ScanArgs {
    #[arg(long, value_enum)]
    mode: ScanModeArg,
    /// Order or inclusive order range, e.g. `4` or `3..5`
    #[arg(long = "n")]
    n: String,
    /// Comma-separated checks
    #[arg(long, value_delimiter = ',', required = true)]
    checks: Vec<CheckArg>,
    #[arg(long, value_enum, default_value = "all")]
    family: FamilyArg,
    /// Instances to sample (sampled mode)
    #[arg(long, default_value_t = 1000)]
    count: u64,
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// JSON report path
    #[arg(long)]
    report: PathBuf,
    #[arg(long, default_value_t = 200)]
    max_instance_records: usize,
}

#[derive(clap::Args)]
struct TableArgs {
    #[arg(long = "k-max", default_value_t = 4)]
    k_max: usize,
}

/// Errors that end the run: exit code plus message.
struct Failure(u8, String);

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure(2, msg.into())
    }
    fn check(msg: impl Into<String>) -> Self {
        Failure(1, msg.into())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            // An internal invariant violation is a finding, not a usage
            // problem.
            Error::Internal(_) => Failure(1, e.to_string()),
            _ => Failure(2, e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Gen(args) => cmd_gen(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Find(args) => cmd_find(args),
        Cmd::Min(args) => cmd_min(args),
        Cmd::Scan(args) => cmd_scan(args),
        Cmd::Table(args) => cmd_table(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("qk: {msg}");
            ExitCode::from(code)
        }
    }
}

fn load_digraph(path: &Path) -> Result<Digraph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    parse_digraph(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn parse_set(text: &str, order: usize) -> Result<VertexSet, Failure> {
    let mut set = VertexSet::new(order);
    for token in text.split([',', ' ']).filter(|t| !t.is_empty()) {
        let v: usize = token
            .parse()
            .map_err(|_| Failure::usage(format!("bad vertex id '{token}'")))?;
        if v >= order {
            return Err(Failure::usage(format!(
                "vertex {v} out of range for a digraph of order {order}"
            )));
        }
        set.insert(v);
    }
    Ok(set)
}

fn parse_partition_file(path: &Path, order: usize) -> Result<(VertexSet, VertexSet), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if lines.len() != 2 {
        return Err(Failure::usage(format!(
            "{}: expected exactly two partition lines, found {}",
            path.display(),
            lines.len()
        )));
    }
    let parse_line = |line: &str| -> Result<VertexSet, Failure> {
        if line == "-" {
            Ok(VertexSet::new(order))
        } else {
            parse_set(line, order)
        }
    };
    Ok((parse_line(lines[0])?, parse_line(lines[1])?))
}

fn require<T>(value: Option<T>, what: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::usage(format!("missing required option {what}")))
}

fn cmd_gen(args: GenArgs) -> Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let (digraph, comments): (Digraph, Vec<String>) = match args.kind {
        GenType::Random => {
            let n = require(args.n, "--n")?;
            if !(0.0..=1.0).contains(&args.p) {
                return Err(Failure::usage("--p must lie in [0, 1]"));
            }
            (gen::random_digraph(n, args.p, &mut rng), vec![])
        }
        GenType::Tournament => (gen::random_tournament(require(args.n, "--n")?, &mut rng), vec![]),
        GenType::Semicomplete => {
            (gen::random_semicomplete(require(args.n, "--n")?, &mut rng), vec![])
        }
        GenType::Circulant => {
            let n = require(args.n, "--n")?;
            let k = require(args.k, "--k")?;
            (gen::circulant(n, k)?, vec![])
        }
        GenType::Split => {
            let nx = require(args.nx, "--nx")?;
            let ny = require(args.ny, "--ny")?;
            (gen::random_split(nx, ny, args.p, &mut rng)?, vec![])
        }
        GenType::Dk => {
            let k = require(args.k, "--k")?;
            let d = construct_d_k(k)?;
            let c = format!(
                "pendant tournament family, k={k}: circulant tournament on {}, {} pendants per vertex",
                2 * k + 1,
                2 * k
            );
            (d, vec![c])
        }
        GenType::Dstar => (
            construct_dstar(),
            vec!["labels 1..6 map to vertex ids 0..5".to_string()],
        ),
        GenType::Compose => {
            let template = load_digraph(require(args.template.as_deref(), "--template")?)?;
            if args.parts.is_empty() {
                return Err(Failure::usage("--parts is required for compose"));
            }
            let mut parts = Vec::new();
            for p in &args.parts {
                parts.push(load_digraph(p)?);
            }
            let spec = CompositionSpec::new(template, parts)?;
            (spec.compose().digraph, vec![])
        }
    };
    let comment_refs: Vec<&str> = comments.iter().map(String::as_str).collect();
    let text = serialize_digraph_with_comments(&digraph, &comment_refs);
    std::fs::write(&args.out, text)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.out.display())))?;
    println!(
        "wrote digraph with {} vertices and {} arcs to {}",
        digraph.order(),
        digraph.arc_count(),
        args.out.display()
    );
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let d = load_digraph(&args.graph)?;
    let set = parse_set(&args.set, d.order())?;
    let n = d.order();
    let (ok, why) = match args.mode {
        VerifyMode::Kernel => {
            let ok = verify_kernel(&d, &set);
            (ok, if ok { String::new() } else { "not a kernel".into() })
        }
        VerifyMode::Qk => {
            let (ok, p) = verify_quasi_kernel(&d, &set);
            println!(
                "dist1={:?} dist2={:?} far={:?}",
                p.dist1, p.dist2, p.far
            );
            (ok, if ok { String::new() } else { format!("unreached: {:?}", p.far) })
        }
        VerifyMode::GoodQk => {
            let ok = is_good_quasi_kernel(&d, &set);
            (ok, if ok { String::new() } else { "not a good quasi-kernel".into() })
        }
        VerifyMode::SmallQk => {
            let (qk, p) = verify_quasi_kernel(&d, &set);
            if !qk {
                (false, format!("not a quasi-kernel (unreached: {:?})", p.far))
            } else if 2 * set.len() > n {
                (false, format!("quasi-kernel but size {} > {n}/2", set.len()))
            } else {
                (true, String::new())
            }
        }
    };
    if ok {
        println!("VERIFIED {:?} (size {})", set, set.len());
        Ok(())
    } else {
        println!("REJECTED {:?}: {why}", set);
        Err(Failure::check("verification failed"))
    }
}

fn report_set(d: &Digraph, label: &str, q: &VertexSet) {
    let (ok, _) = verify_quasi_kernel(d, q);
    println!(
        "{label}: {:?} size={} of n={} verified={}",
        q,
        q.len(),
        d.order(),
        ok
    );
}

fn cmd_find(args: FindArgs) -> Result<(), Failure> {
    let d = load_digraph(&args.graph)?;
    match args.algo {
        FindAlgo::Cl => {
            let q = quasi_kernel_cl(&d);
            report_set(&d, "quasi-kernel", &q);
        }
        FindAlgo::AntiClaw | FindAlgo::K41 => {
            let outcome = if args.algo == FindAlgo::AntiClaw {
                small_qk_anti_claw_free(&d)?
            } else {
                small_qk_k41_free(&d)?
            };
            match &outcome.result {
                SmallQkResult::QuasiKernel { q, .. } => {
                    report_set(&d, "small quasi-kernel", q);
                    println!("steps={}", outcome.steps);
                }
                SmallQkResult::Witness(w) => {
                    println!(
                        "witness: kind={:?} center={} tails={:?} extra_arc={:?}",
                        w.kind, w.center, w.tails, w.extra_arc
                    );
                }
            }
        }
        FindAlgo::Good => {
            let start = match &args.set {
                Some(text) => parse_set(text, d.order())?,
                None => kernel_exact(&d, DEFAULT_KERNEL_BUDGET)?
                    .ok_or_else(|| Failure::usage("no kernel found to start from; pass --set"))?,
            };
            let q = small_qk_good(&d, &start)?;
            report_set(&d, "small quasi-kernel", &q);
        }
        FindAlgo::LemmaN2 => {
            let start = match &args.set {
                Some(text) => parse_set(text, d.order())?,
                None => quasi_kernel_cl(&d),
            };
            let q = small_qk_via_second_kernel(&d, &start)?;
            report_set(&d, "small quasi-kernel", &q);
        }
        FindAlgo::Partition => {
            let path = require(args.partition.as_deref(), "--partition")?;
            let (v1, v2) = parse_partition_file(path, d.order())?;
            let q = small_qk_partitioned(&d, &v1, &v2)?;
            report_set(&d, "quasi-kernel", &q);
            let s = d.sinks();
            let bound = d.order() + s.len() - d.in_neighborhood(&s).len();
            println!("bound={bound}/2");
        }
        FindAlgo::Split => {
            let (x, y) = recognize_one_way_split(&d)
                .ok_or_else(|| Failure::usage("digraph is not a one-way split digraph"))?;
            let q = split_small_qk(&d, &OneWaySplitPartition::new(x, y))?;
            report_set(&d, "quasi-kernel", &q);
            println!(
                "bound={:.6}",
                qk_core::split::split_size_bound(d.order())
            );
        }
    }
    Ok(())
}

fn cmd_min(args: MinArgs) -> Result<(), Failure> {
    let d = load_digraph(&args.graph)?;
    let (size, q) = if args.split_exact {
        let (x, y) = recognize_one_way_split(&d)
            .ok_or_else(|| Failure::usage("digraph is not a one-way split digraph"))?;
        split_min_qk_exact(&d, &OneWaySplitPartition::new(x, y))?
    } else {
        minimum_quasi_kernel_exact(&d, args.cap)?
    };
    println!("minimum quasi-kernel size={size} set={q:?}");
    Ok(())
}

fn parse_order_range(text: &str) -> Result<(usize, usize), Failure> {
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Failure::usage(format!("bad order '{s}'")))
    };
    match text.split_once("..") {
        Some((lo, hi)) => Ok((parse(lo)?, parse(hi.trim_start_matches('='))?)),
        None => {
            let n = parse(text)?;
            Ok((n, n))
        }
    }
}

fn cmd_scan(args: ScanArgs) -> Result<(), Failure> {
    let (n_min, n_max) = parse_order_range(&args.n)?;
    let config = ScanConfig {
        mode: match args.mode {
            ScanModeArg::Exhaustive => ScanMode::Exhaustive,
            ScanModeArg::Sampled => ScanMode::Sampled,
        },
        n_min,
        n_max,
        sample_count: args.count,
        arc_probability: args.p,
        family: match args.family {
            FamilyArg::All => Family::All,
            FamilyArg::SinkFree => Family::SinkFree,
            FamilyArg::Tournament => Family::Tournament,
            FamilyArg::Semicomplete => Family::Semicomplete,
            FamilyArg::OneWaySplit => Family::OneWaySplit,
            FamilyArg::IndegLe3 => Family::IndegLe3,
            FamilyArg::DagPartitioned => Family::DagPartitioned,
        },
        seed: args.seed,
        workers: args.workers,
        checks: args
            .checks
            .iter()
            .map(|c| match c {
                CheckArg::Conjecture => CheckKind::Conjecture,
                CheckArg::Thm1 => CheckKind::Thm1,
                CheckArg::Thm2 => CheckKind::Thm2,
                CheckArg::Thm3Contrapositive => CheckKind::Thm3Contrapositive,
                CheckArg::Thm4 => CheckKind::Thm4,
                CheckArg::Thm5 => CheckKind::Thm5,
                CheckArg::Thm6 => CheckKind::Thm6,
                CheckArg::Lemma1 => CheckKind::Lemma1,
                CheckArg::Jm => CheckKind::Jm,
                CheckArg::OracleCross => CheckKind::OracleCross,
            })
            .collect(),
        max_instance_records: args.max_instance_records,
    };
    let report = run_scan(&config)?;
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| Failure(1, format!("serializing report: {e}")))?;
    std::fs::write(&args.report, json + "\n")
        .map_err(|e| Failure::usage(format!("{}: {e}", args.report.display())))?;
    println!(
        "instances={} checks={} failures={} skips={} wall_ms={}",
        report.aggregate.instances_run,
        report.aggregate.checks_run,
        report.aggregate.failures,
        report.aggregate.skips,
        report.aggregate.wall_ms
    );
    if report.passed() {
        println!("all checks passed");
        Ok(())
    } else {
        Err(Failure::check(format!(
            "{} counterexample(s) written to {}",
            report.counterexamples.len(),
            args.report.display()
        )))
    }
}

fn cmd_table(args: TableArgs) -> Result<(), Failure> {
    let rows = reproduce_sharpness_table(args.k_max)?;
    println!("{:>3} {:>6} {:>10} {:>12} {:>6}", "k", "n", "exact_min", "bound", "equal");
    let mut all_equal = true;
    for r in &rows {
        println!(
            "{:>3} {:>6} {:>10} {:>12.4} {:>6}",
            r.k, r.n, r.exact_min, r.bound, r.equal
        );
        all_equal &= r.equal;
    }
    if all_equal {
        Ok(())
    } else {
        Err(Failure::check("a row misses the bound"))
    }
}
