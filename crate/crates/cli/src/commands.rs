//! Subcommands and the reports they produce.

use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use critexp::construct::make_schedule_for;
use critexp::exponent::prefix_exponent_profile;
use critexp::explore::UpperCertificate;
use critexp::kappa::{
    a2n_member, fixed_point_candidates, horseshoe_certificate, kappa_bound_of_prefix, kappa_sup_truncated,
    liyorke_witnesses, measure_probe,
};
use critexp::{
    achievable_exponents, build_cr, build_near_zero, build_with_tm_prefix, counterexample_search, critical_exponent,
    critical_exponent_oracle, ew_bounds, expand, extend_word, format_rational, parse_rational, thue_morse_prefix,
    Achievability, BigRational, ConstructedPoint, ExponentValue, FiniteWord, Real, SearchConfig, Target,
};
use serde_json::{json, Value};

use crate::report::{series, Certificate, CertificateKind, Report, Status};
use crate::verify::verify_report;

/// Longest prefix any command measures.
pub const MAX_DEPTH: usize = 1 << 14;
const DEFAULT_BUDGET: &str = "50000000";

#[derive(Debug, Parser)]
#[command(name = "critexp", version, about = "Exact critical exponents, constructions and certificates")]
pub struct Cli {
    /// Leave `timing_ms` out of the report.
    #[arg(long, global = true)]
    pub no_timing: bool,
    /// Worker threads for parallel searches and probes.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Critical exponent of a word.
    Exponent {
        word: String,
        #[arg(long, default_value_t = 2)]
        base: u8,
        /// Cross-check against the exhaustive oracle (length <= 64).
        #[arg(long)]
        oracle: bool,
    },
    /// Critical exponent of a Thue-Morse prefix.
    ThueMorse {
        #[arg(long)]
        len: usize,
    },
    /// Infinite words with a prescribed critical exponent.
    Build {
        #[command(subcommand)]
        which: BuildCommand,
    },
    /// Searches over extensions of words.
    Explore {
        #[command(subcommand)]
        which: ExploreCommand,
    },
    /// Bounds and dynamics of the map kappa.
    Kappa {
        #[command(subcommand)]
        which: KappaCommand,
    },
    /// Series as CSV, straight from a command.
    Plot {
        #[command(subcommand)]
        which: PlotCommand,
    },
    /// Re-emit a saved report as JSON or as the CSV of its series.
    Report {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Report file, `-` for standard input.
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Rerun a saved report and compare the result.
    Replay {
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Recheck every machine-checked certificate of a saved report.
    Verify {
        #[arg(long, default_value = "-")]
        input: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct DepthArg {
    /// Prefix length that is measured.
    #[arg(long, default_value_t = 1024)]
    depth: usize,
}

#[derive(Debug, Subcommand)]
pub enum BuildCommand {
    /// Limit of the staged construction for 2 < alpha < inf.
    Cr {
        #[arg(long)]
        alpha: String,
        /// Stages listed in the report; the stream adds more as needed.
        #[arg(long, default_value_t = 4)]
        stages: usize,
        #[command(flatten)]
        depth: DepthArg,
    },
    /// A point starting with a Thue-Morse subword, any alpha >= 2.
    Prefix {
        #[arg(long)]
        word: String,
        #[arg(long)]
        alpha: String,
        #[command(flatten)]
        depth: DepthArg,
    },
    /// A point starting with any word, alpha >= its length.
    Extend {
        #[arg(long)]
        word: String,
        #[arg(long)]
        alpha: String,
        #[command(flatten)]
        depth: DepthArg,
    },
    /// A point below 2^-2^n whose kappa is y.
    NearZero {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        y: String,
        #[command(flatten)]
        depth: DepthArg,
    },
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Node budget; an exhausted search reports INCOMPLETE.
    #[arg(long, env = "CRITEXP_NODE_BUDGET", default_value = DEFAULT_BUDGET)]
    budget: u64,
    /// Search subtrees on all worker threads.
    #[arg(long)]
    parallel: bool,
    /// Visit every node (for checking the pruned search).
    #[arg(long)]
    no_prune: bool,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig::default().parallel(self.parallel).prune(!self.no_prune).budget(Some(self.budget))
    }

    fn record(&self, params: &mut BTreeMap<String, String>) {
        params.insert("budget".into(), self.budget.to_string());
        params.insert("parallel".into(), self.parallel.to_string());
        params.insert("no-prune".into(), self.no_prune.to_string());
    }
}

#[derive(Debug, Subcommand)]
pub enum ExploreCommand {
    /// Lower and upper bounds on the least exponent of an extension.
    Bounds {
        #[arg(long, default_value = "")]
        word: String,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Words whose every extension exceeds max(2, E(w)).
    Counterexample {
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Which target exponents an extension can have.
    Achievable {
        #[arg(long, default_value = "")]
        word: String,
        /// Ascending, comma separated, e.g. `2,5/2,3,inf`.
        #[arg(long)]
        targets: String,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum KappaCommand {
    /// 1/E of a prefix, an upper bound on kappa at every depth.
    Bound(BoundArgs),
    /// Disjoint closed cylinders forming an m-horseshoe.
    Horseshoe {
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Two orbits from I_w1 that separate by more than 1/8 and return to I_w2.
    Liyorke {
        #[arg(long)]
        w1: String,
        #[arg(long, default_value = "01")]
        w2: String,
        #[arg(long, default_value_t = 64)]
        depth: usize,
    },
    /// Candidate fixed points within eps left of x_tau.
    FixedCandidates {
        #[arg(long, default_value = "1/16")]
        eps: String,
        #[arg(long, default_value_t = 20)]
        iterations: usize,
    },
    /// Distribution of E over random words.
    Probe(ProbeArgs),
    /// Largest per-base bound up to a maximal base.
    Sup {
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 10)]
        max_base: u8,
        #[arg(long, default_value_t = 64)]
        depth: usize,
    },
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// A rational point `p/q` of [0, 1].
    #[arg(long, conflicts_with = "word", required_unless_present = "word")]
    x: Option<String>,
    /// An expansion prefix in the given base.
    #[arg(long)]
    word: Option<String>,
    #[arg(long, default_value_t = 2)]
    base: u8,
    #[arg(long, default_value_t = 64)]
    depth: usize,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 64)]
    len: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    parallel: bool,
}

#[derive(Debug, Subcommand)]
pub enum PlotCommand {
    /// `(depth, bound)` rows of `kappa bound`.
    Bound(BoundArgs),
    /// `(exponent, count)` rows of `kappa probe`.
    Histogram(ProbeArgs),
}

pub enum Output {
    Report(Report),
    Text { code: i32, text: String },
}

type Outcome = Result<Output, String>;
type Params = BTreeMap<String, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn params<const N: usize>(pairs: [(&str, String); N]) -> Params {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn binary_word(s: &str, name: &str) -> Result<FiniteWord, String> {
    s.parse().map_err(|e| format!("--{name}: {e} (a binary word is required)"))
}

fn target(s: &str) -> Result<Target, String> {
    match s.parse::<ExponentValue>().map_err(|e| format!("--alpha: {e}"))? {
        ExponentValue::Infinite => Ok(Target::Infinite),
        ExponentValue::Finite(r) => Ok(Target::rational(r)),
    }
}

fn rational(s: &str, name: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| format!("--{name}: {e}"))
}

fn check_depth(depth: usize) -> Result<(), String> {
    if (1..=MAX_DEPTH).contains(&depth) {
        Ok(())
    } else {
        Err(format!("--depth must be in 1..={MAX_DEPTH}, got {depth}"))
    }
}

/// Every length up to 256, then powers of two and the full length.
fn checkpoints(n: usize) -> Vec<usize> {
    if n <= 256 {
        return (1..=n).collect();
    }
    let mut out: Vec<usize> = (0..).map(|k| 1usize << k).take_while(|&l| l < n).collect();
    out.push(n);
    out
}

fn profile_series(profile: &[ExponentValue], column: &str) -> Value {
    let rows = checkpoints(profile.len()).into_iter().map(|l| json!([l, profile[l - 1].to_string()]));
    series(&["length", column], rows)
}

fn witness_json(w: &FiniteWord) -> (ExponentValue, Value) {
    let (value, witness) = critical_exponent(w);
    (value, json!(witness))
}

pub fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Exponent { word, base, oracle } => exponent(word, *base, *oracle),
        Command::ThueMorse { len } => thue_morse(*len),
        Command::Build { which } => build(which),
        Command::Explore { which } => explore(which),
        Command::Kappa { which } => kappa(which),
        Command::Plot { which } => plot(which),
        Command::Report { format, input } => rerender(*format, input),
        Command::Replay { input } => replay(input, cli),
        Command::Verify { input } => verify(input),
    }
}

fn exponent(word: &str, base: u8, oracle: bool) -> Outcome {
    let w = FiniteWord::parse_in_base(word, base).map_err(|e| format!("word: {e}"))?;
    let (value, witness) = witness_json(&w);
    let mut results = json!({
        "word": w,
        "base": base,
        "length": w.len(),
        "value": value,
        "witness": witness,
    });
    if oracle {
        let check = critical_exponent_oracle(&w).map_err(err)?;
        if check != value {
            return Err(format!("engine and oracle disagree on {w}: {value} vs {check}"));
        }
        results["oracle"] = json!(check);
    }
    let mut report = Report::new(
        "exponent",
        params([("word", word.to_string()), ("base", base.to_string()), ("oracle", oracle.to_string())]),
        results,
    );
    report.certificates.push(Certificate::new(
        CertificateKind::MachineChecked,
        "critical-exponent",
        format!("E({w}) = {value}"),
        json!({ "word": w, "base": base, "value": value, "witness": witness }),
    ));
    Ok(Output::Report(report))
}

fn thue_morse(len: usize) -> Outcome {
    if len > MAX_DEPTH {
        return Err(format!("--len must be at most {MAX_DEPTH}"));
    }
    let w = thue_morse_prefix(len);
    let profile = prefix_exponent_profile(&w);
    let value = critical_exponent(&w).0;
    let head = w.prefix(64);
    let mut report = Report::new(
        "thue-morse",
        params([("len", len.to_string())]),
        json!({ "length": len, "prefix_head": head, "value": value, "series": profile_series(&profile, "exponent") }),
    );
    report.certificates.push(Certificate::new(
        CertificateKind::MachineChecked,
        "thue-morse-exponent",
        format!("E(tau prefix of length {len}) = {value}"),
        json!({ "length": len, "value": value }),
    ));
    report.certificates.push(Certificate::new(
        CertificateKind::PaperBacked,
        "thue-morse-exponent",
        "E(tau) = 2",
        json!({ "word": "tau" }),
    ));
    Ok(Output::Report(report))
}

fn point_report(command: &str, params: Params, point: &ConstructedPoint, depth: usize) -> Result<Report, String> {
    let prefix = point.prefix(depth);
    let cert = point.certify(depth).map_err(err)?;
    let profile = prefix_exponent_profile(&prefix);
    let (lower, upper) = point.bracket(depth);
    let alpha = point.alpha().to_string();
    let results = json!({
        "alpha": alpha,
        "construction": point.provenance(),
        "depth": depth,
        "prefix_head": prefix.prefix(64),
        "value_lower": format_rational(&lower),
        "value_upper": format_rational(&upper),
        "measured": cert.measured,
        "never_exceeds": cert.never_exceeds,
        "strictly_below": cert.strictly_below,
        "contains_000": prefix.longest_run_of(0) >= 3,
        "series": profile_series(&profile, "exponent"),
    });
    let mut report = Report::new(command, params, results);
    report.certificates.push(Certificate::new(
        CertificateKind::PaperBacked,
        "exact-exponent",
        format!("E = {alpha} for the infinite word"),
        json!({ "alpha": alpha, "construction": point.provenance() }),
    ));
    report.certificates.push(Certificate::new(
        CertificateKind::MachineChecked,
        "prefix-exponents",
        format!("every prefix up to length {depth} measured against {alpha}"),
        json!({
            "prefix": prefix,
            "alpha": alpha,
            "measured": cert.measured,
            "never_exceeds": cert.never_exceeds,
            "strictly_below": cert.strictly_below,
        }),
    ));
    Ok(report)
}

fn membership(report: &mut Report, prefix: &FiniteWord, word: &FiniteWord, claim: String) {
    report.certificates.push(Certificate::new(
        CertificateKind::MachineChecked,
        "prefix-membership",
        claim,
        json!({ "prefix": prefix, "word": word }),
    ));
}

fn build(which: &BuildCommand) -> Outcome {
    let report = match which {
        BuildCommand::Cr { alpha, stages, depth } => {
            check_depth(depth.depth)?;
            if *stages == 0 || *stages > 64 {
                return Err("--stages must be in 1..=64".into());
            }
            let schedule = make_schedule_for(target(alpha)?, *stages).map_err(err)?;
            let point = build_cr(&schedule).map_err(err)?;
            let p = params([("alpha", alpha.clone()), ("stages", stages.to_string()), ("depth", depth.depth.to_string())]);
            let mut report = point_report("build cr", p, &point, depth.depth)?;
            report.results["schedule"] = json!(schedule.stages());
            report.results["betas"] = json!(schedule.betas().iter().map(format_rational).collect::<Vec<_>>());
            report
        }
        BuildCommand::Prefix { word, alpha, depth } => {
            check_depth(depth.depth)?;
            let w = binary_word(word, "word")?;
            let point = build_with_tm_prefix(&w, &target(alpha)?).map_err(err)?;
            let p = params([("word", word.clone()), ("alpha", alpha.clone()), ("depth", depth.depth.to_string())]);
            let mut report = point_report("build prefix", p, &point, depth.depth)?;
            membership(&mut report, &point.prefix(depth.depth.max(w.len())), &w, format!("the point starts with {w}"));
            report
        }
        BuildCommand::Extend { word, alpha, depth } => {
            check_depth(depth.depth)?;
            let w = binary_word(word, "word")?;
            let point = extend_word(&w, &target(alpha)?).map_err(err)?;
            let p = params([("word", word.clone()), ("alpha", alpha.clone()), ("depth", depth.depth.to_string())]);
            let mut report = point_report("build extend", p, &point, depth.depth)?;
            let prefix = point.prefix(depth.depth);
            let block = FiniteWord::repeat_symbol(0, w.len(), 2).map_err(err)?;
            if !w.is_empty() {
                report.results["zero_block_occurrences"] = json!(prefix.count_occurrences(&block));
            }
            membership(&mut report, &point.prefix(depth.depth.max(w.len())), &w, format!("the point starts with {w}"));
            report
        }
        BuildCommand::NearZero { n, y, depth } => {
            check_depth(depth.depth)?;
            let y_value = rational(y, "y")?;
            let point = build_near_zero(*n, &Real::rational(y_value)).map_err(err)?;
            let p = params([("n", n.to_string()), ("y", y.clone()), ("depth", depth.depth.to_string())]);
            let mut report = point_report("build near-zero", p, &point, depth.depth)?;
            let zeros = 1usize << n;
            let block = FiniteWord::repeat_symbol(0, zeros, 2).map_err(err)?;
            membership(
                &mut report,
                &point.prefix(depth.depth.max(zeros)),
                &block,
                format!("the point starts with 0^{zeros}, so it lies in [0, 2^-{zeros}]"),
            );
            report
        }
    };
    Ok(Output::Report(report))
}

fn min_certificate(word: &FiniteWord, depth: usize, value: &ExponentValue, extension: &FiniteWord) -> Certificate {
    Certificate::new(
        CertificateKind::MachineChecked,
        "min-exponent",
        format!("every extension of {word} by {depth} digits has exponent at least {value}"),
        json!({ "word": word, "depth": depth, "value": value, "extension": extension }),
    )
}

fn explore(which: &ExploreCommand) -> Outcome {
    let report = match which {
        ExploreCommand::Bounds { word, depth, search } => {
            let w = binary_word(word, "word")?;
            let bounds = ew_bounds(&w, *depth, &search.config()).map_err(err)?;
            let mut p = params([("word", word.clone()), ("depth", depth.to_string())]);
            search.record(&mut p);
            let mut report = Report::new("explore bounds", p, json!(bounds));
            if bounds.complete {
                report.certificates.push(min_certificate(&w, *depth, &bounds.lower, &bounds.minimizing_extension));
            } else {
                report.status = Status::Incomplete;
            }
            match &bounds.upper_certificate {
                UpperCertificate::ThueMorse { position } => {
                    let tau = thue_morse_prefix(position + w.len());
                    membership(&mut report, &tau.delete_prefix(*position), &w, format!("{w} occurs in tau at {position}"));
                    report.certificates.push(Certificate::new(
                        CertificateKind::PaperBacked,
                        "upper-bound",
                        format!("a suffix of tau extends {w} with exponent 2"),
                        json!({ "word": w, "position": position }),
                    ));
                }
                UpperCertificate::ExtendWord { alpha } => report.certificates.push(Certificate::new(
                    CertificateKind::PaperBacked,
                    "upper-bound",
                    format!("extend-word reaches exponent {alpha}"),
                    json!({ "word": w, "alpha": alpha }),
                )),
                UpperCertificate::None => {}
            }
            report
        }
        ExploreCommand::Counterexample { max_len, depth, search } => {
            let found = counterexample_search(*max_len, *depth, &search.config()).map_err(err)?;
            let mut p = params([("max-len", max_len.to_string()), ("depth", depth.to_string())]);
            search.record(&mut p);
            let mut report = Report::new("explore counterexample", p, json!(found));
            report.results["words"] = json!(found.records.iter().map(|r| r.word.to_string()).collect::<Vec<_>>());
            for r in &found.records {
                report.certificates.push(Certificate::new(
                    CertificateKind::MachineChecked,
                    "counterexample",
                    format!("every extension of {} by {} digits exceeds {}", r.word, r.depth, r.threshold),
                    json!({ "word": r.word, "threshold": r.threshold, "depth": r.depth, "lower": r.lower }),
                ));
            }
            report.status = if !found.complete {
                Status::Incomplete
            } else if found.records.is_empty() {
                Status::Empty
            } else {
                Status::Ok
            };
            report
        }
        ExploreCommand::Achievable { word, targets, depth, search } => {
            let w = binary_word(word, "word")?;
            let parsed = targets
                .split(',')
                .map(|t| t.parse::<ExponentValue>().map_err(|e| format!("--targets: {e}")))
                .collect::<Result<Vec<_>, _>>()?;
            let config = search.config();
            let found = achievable_exponents(&w, &parsed, *depth, &config).map_err(err)?;
            let mut p = params([("word", word.clone()), ("targets", targets.clone()), ("depth", depth.to_string())]);
            search.record(&mut p);
            let mut report = Report::new("explore achievable", p, json!(found));
            report.results["interpretation"] = json!("evidence only; no entry proves a gap");
            if !found.lower_complete {
                report.status = Status::Incomplete;
            }
            if found.entries.iter().any(|e| e.status == Achievability::ImpossibleBelowBound) && found.lower_complete {
                let min = critexp::min_exponent_search(&w, *depth, &config).map_err(err)?;
                report.certificates.push(min_certificate(&w, *depth, &min.value, &min.extension));
            }
            for e in found.entries.iter().filter(|e| e.status == Achievability::Realized) {
                report.certificates.push(Certificate::new(
                    CertificateKind::PaperBacked,
                    "realized",
                    format!("some infinite extension of {w} has exponent {}", e.target),
                    json!({ "word": w, "target": e.target, "reason": e.reason }),
                ));
            }
            report
        }
    };
    Ok(Output::Report(report))
}

fn bound_report(args: &BoundArgs) -> Result<Report, String> {
    if args.depth == 0 || args.depth > MAX_DEPTH {
        return Err(format!("--depth must be in 1..={MAX_DEPTH}"));
    }
    let mut p = params([("base", args.base.to_string()), ("depth", args.depth.to_string())]);
    let (prefix, x) = match (&args.x, &args.word) {
        (Some(x), _) => {
            p.insert("x".into(), x.clone());
            let x = rational(x, "x")?;
            (expand(&x, args.base, args.depth).map_err(err)?, Some(x))
        }
        (None, Some(w)) => {
            p.insert("word".into(), w.clone());
            let w = FiniteWord::parse_in_base(w, args.base).map_err(|e| format!("--word: {e}"))?;
            (w.prefix(args.depth), None)
        }
        (None, None) => return Err("one of --x or --word is required".into()),
    };
    let bound = kappa_bound_of_prefix(&prefix).map_err(err)?;
    let profile = prefix_exponent_profile(&prefix);
    let rows = (1..=prefix.len()).map(|d| {
        let e = &profile[d - 1];
        json!([d, e.reciprocal().map(|r| format_rational(&r)).unwrap_or_else(|| "0/1".into())])
    });
    let mut results = json!({
        "prefix": prefix,
        "bound": format_rational(&bound),
        "series": series(&["depth", "bound"], rows),
    });
    if let (Some(x), true) = (&x, args.base > 2) {
        results["a2n_membership"] = json!(a2n_member(x, args.base, args.depth).map_err(err)?);
    }
    let mut report = Report::new("kappa bound", p, results);
    report.certificates.push(Certificate::new(
        CertificateKind::MachineChecked,
        "kappa-bound",
        format!("kappa_{} is at most {} on the cylinder of the prefix", args.base, format_rational(&bound)),
        json!({ "prefix": prefix, "base": args.base, "bound": format_rational(&bound) }),
    ));
    Ok(report)
}

fn probe_report(args: &ProbeArgs) -> Result<Report, String> {
    let stats = measure_probe(args.samples, args.len, args.seed, args.parallel).map_err(err)?;
    let p = params([
        ("samples", args.samples.to_string()),
        ("len", args.len.to_string()),
        ("seed", args.seed.to_string()),
        ("parallel", args.parallel.to_string()),
    ]);
    let rows = stats.histogram.iter().map(|(e, n)| json!([e.to_string(), n]));
    let mut results = json!(stats);
    results["series"] = series(&["exponent", "count"], rows);
    let mut report = Report::new("kappa probe", p, results);
    report.seed = Some(args.seed);
    report.certificates.push(Certificate::new(
        CertificateKind::Statistical,
        "probe",
        format!(
            "fraction with E >= 3 is {}/{} against a reference of {}",
            stats.at_least_three, stats.samples, stats.reference_probability
        ),
        json!({ "estimate": stats.estimate }),
    ));
    Ok(report)
}

fn kappa(which: &KappaCommand) -> Outcome {
    let report = match which {
        KappaCommand::Bound(args) => bound_report(args)?,
        KappaCommand::Horseshoe { order } => {
            let cert = horseshoe_certificate(*order).map_err(err)?;
            let words: Vec<String> = cert.intervals.iter().map(|i| i.word.to_string()).collect();
            let mut report = Report::new("kappa horseshoe", params([("order", order.to_string())]), json!(cert));
            report.certificates.push(Certificate::new(
                CertificateKind::MachineChecked,
                "horseshoe",
                "closed cylinders are pairwise disjoint, left of x_tau, and Thue-Morse subwords",
                json!({ "order": order, "words": words }),
            ));
            report.certificates.push(Certificate::new(
                CertificateKind::PaperBacked,
                "covering",
                cert.covering_claim.clone(),
                json!({ "order": order }),
            ));
            report.certificates.push(Certificate::new(
                CertificateKind::PaperBacked,
                "entropy",
                format!("topological entropy is at least {}", cert.entropy_lower_bound),
                json!({ "order": order, "entropy_lower_bound": cert.entropy_lower_bound }),
            ));
            report
        }
        KappaCommand::Liyorke { w1, w2, depth } => {
            let a = binary_word(w1, "w1")?;
            let b = binary_word(w2, "w2")?;
            if *depth > MAX_DEPTH {
                return Err(format!("--depth must be at most {MAX_DEPTH}"));
            }
            let found = liyorke_witnesses(&a, &b, *depth).map_err(err)?;
            if !found.verified() {
                return Err("the constructed orbits failed their own checks".into());
            }
            let p = params([("w1", w1.clone()), ("w2", w2.clone()), ("depth", depth.to_string())]);
            let n = found.n;
            let mut report = Report::new("kappa liyorke", p, json!(found));
            report.certificates.push(Certificate::new(
                CertificateKind::MachineChecked,
                "liyorke-separation",
                format!("kappa^{n}(x2) - kappa^{n}(x1) > 1/8"),
                json!({ "y1_prefix": found.orbit1[n].prefix, "y2_prefix": found.orbit2[n].prefix }),
            ));
            for (name, orbit) in [("x1", &found.orbit1), ("x2", &found.orbit2)] {
                membership(&mut report, &orbit[0].prefix, &a, format!("{name} lies in I_{a}"));
            }
            report.certificates.push(Certificate::new(
                CertificateKind::PaperBacked,
                "orbit",
                format!("kappa^{}(x1) = c1 and kappa^{}(x2) = c2, both in I_{b}", n + 2, n + 2),
                json!({ "c1": found.c1, "c2": found.c2, "n": n }),
            ));
            report
        }
        KappaCommand::FixedCandidates { eps, iterations } => {
            let e = rational(eps, "eps")?;
            let found = fixed_point_candidates(&e, *iterations).map_err(err)?;
            let p = params([("eps", eps.clone()), ("iterations", iterations.to_string())]);
            let mut report = Report::new("kappa fixed-candidates", p, json!({ "candidates": found }));
            for c in &found {
                report.certificates.push(Certificate::new(
                    CertificateKind::Candidate,
                    "fixed-point",
                    format!("kappa(x) = {} with x - kappa(x) in [{}, {}]", c.kappa, c.residual_lower, c.residual_upper),
                    json!({ "prefix": c.prefix, "kappa": c.kappa }),
                ));
            }
            if found.is_empty() {
                report.status = Status::Empty;
            }
            report
        }
        KappaCommand::Probe(args) => probe_report(args)?,
        KappaCommand::Sup { x, max_base, depth } => {
            let value = rational(x, "x")?;
            if *depth == 0 || *depth > MAX_DEPTH {
                return Err(format!("--depth must be in 1..={MAX_DEPTH}"));
            }
            let (best, sup) = kappa_sup_truncated(&value, *max_base, *depth).map_err(err)?;
            let p = params([("x", x.clone()), ("max-base", max_base.to_string()), ("depth", depth.to_string())]);
            let rows = sup.per_base.iter().map(|(n, b)| json!([n, b]));
            let mut results = json!(sup);
            results["series"] = series(&["base", "bound"], rows);
            let mut report = Report::new("kappa sup", p, results);
            report.certificates.push(Certificate::new(
                CertificateKind::MachineChecked,
                "kappa-sup",
                format!("max over bases 2..={max_base} of the depth-{depth} bounds is {}", format_rational(&best)),
                json!({ "x": format_rational(&value), "max_base": max_base, "depth": depth, "value": format_rational(&best) }),
            ));
            report
        }
    };
    Ok(Output::Report(report))
}

fn plot(which: &PlotCommand) -> Outcome {
    let report = match which {
        PlotCommand::Bound(args) => bound_report(args)?,
        PlotCommand::Histogram(args) => probe_report(args)?,
    };
    Ok(Output::Text { code: 0, text: report.to_csv()? })
}

fn load(input: &str) -> Result<Report, String> {
    let text = if input == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(err)?;
        s
    } else {
        fs::read_to_string(PathBuf::from(input)).map_err(|e| format!("{input}: {e}"))?
    };
    Report::parse(&text)
}

fn rerender(format: Format, input: &str) -> Outcome {
    let report = load(input)?;
    let text = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
    };
    Ok(Output::Text { code: 0, text })
}

fn replay(input: &str, cli: &Cli) -> Outcome {
    let saved = load(input)?;
    let mut argv = saved.argv();
    if let Some(n) = cli.threads {
        argv.push("--threads".into());
        argv.push(n.to_string());
    }
    let rerun = crate::run(&argv);
    let fresh = Report::parse(&rerun.stdout).map_err(|e| format!("replay failed: {e}: {}", rerun.stderr.trim()))?;
    let identical = fresh.without_timing().to_json() == saved.without_timing().to_json();
    let text = serde_json::to_string_pretty(&json!({ "argv": argv, "identical": identical })).map_err(err)? + "\n";
    Ok(Output::Text { code: if identical { 0 } else { 1 }, text })
}

fn verify(input: &str) -> Outcome {
    let report = load(input)?;
    let checks = verify_report(&report);
    let passed = checks.iter().all(|c| c.passed);
    let text = serde_json::to_string_pretty(&json!({ "checks": checks, "passed": passed })).map_err(err)? + "\n";
    Ok(Output::Text { code: if passed { 0 } else { 1 }, text })
}
