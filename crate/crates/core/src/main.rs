use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use psbm::comparison::{
    check_boyd_wong_properties, check_matkowski_properties, ComparisonFn, ComparisonKind, DEFAULT_GRID,
    DEFAULT_ITER_BUDGET,
};
use psbm::contraction::{certify, reproduce_case_table, InterpolativeSpec, SelfMap, TripleSource};
use psbm::fixpoint::{
    cauchy_diagnostic, matkowski_envelope_check, picard_iterate, trace_to_csv, uniqueness_check, verify_fixed_point,
};
use psbm::report::{self, FixpointSummary, Rendered};
use psbm::repro::{run_repro, ReproOptions};
use psbm::spaces::{
    builtin_space, check_axioms, load_tabulated_space, to_space_file, AxiomSet, PartialSbSpace, Point, TupleSource,
};
use psbm::topology::{
    generate_topology, is_connected, open_ball, separation_report, uncovered_witness, verify_topology_axioms,
    CoverFamily, RadiusRule,
};
use psbm::{Error, Result};

#[derive(Parser)]
#[command(name = "psbm", version, about = "Check partial S_b-metric spaces, their topology and contraction fixed points")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for every sampled check.
    #[arg(long, global = true, env = "PSBM_SEED", default_value_t = 0)]
    seed: u64,
    /// Tolerance for point equality and zero tests.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Sample count (points or tuples, depending on the command).
    #[arg(long, global = true, default_value_t = 200)]
    samples: usize,
    /// Truncation of unbounded carriers when sampling.
    #[arg(long, global = true, default_value_t = 64.0)]
    bound: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct SpaceArg {
    /// `builtin:<name>` or `file:<path>`.
    #[arg(long)]
    space: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check an axiom set on every tuple (finite carriers) or on sampled quadruples.
    VerifyAxioms {
        #[command(flatten)]
        space: SpaceArg,
        /// s-metric, partial-s-metric, sb-metric or partial-sb.
        #[arg(long, default_value = "partial-sb")]
        axioms: String,
        /// Force sampling even on a finite carrier.
        #[arg(long)]
        sampled: bool,
    },
    /// Members of the open ball D(center; radius).
    Ball {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        center: String,
        #[arg(long)]
        radius: f64,
    },
    /// Topology generated by the open balls of a finite space.
    Topology {
        #[command(flatten)]
        space: SpaceArg,
    },
    /// T0, T1 and T2 verdicts with failing pairs.
    Separation {
        #[command(flatten)]
        space: SpaceArg,
    },
    /// Connectedness, with a separating pair of open sets when disconnected.
    Connected {
        #[command(flatten)]
        space: SpaceArg,
    },
    /// A point outside every ball of a finite subfamily of {D(center; scale*n + offset)}.
    CoverWitness {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        center: String,
        /// Family indices, e.g. `3..20` or `3,5,8`.
        #[arg(long, default_value = "3..20")]
        indices: String,
        /// Subfamily indices, e.g. `3,5`.
        #[arg(long)]
        subfamily: String,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, default_value_t = 0.0)]
        offset: f64,
    },
    /// Check a comparison function's defining properties on a grid.
    CheckComparison {
        /// paper_tau, half, identity or file:<path> with `[[x, y], ...]` breakpoints.
        #[arg(long)]
        function: String,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Comma-separated grid; defaults to a fixed grid spanning 1e-6..34100.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value_t = DEFAULT_ITER_BUDGET)]
        budget: usize,
    },
    /// Certify an interpolative contraction inequality.
    Certify {
        #[command(flatten)]
        space: SpaceArg,
        #[command(flatten)]
        spec: SpecArgs,
        /// Evaluate every triple over isolated points plus this many grid points.
        #[arg(long)]
        grid: Option<usize>,
        /// Evaluate every triple of a finite carrier.
        #[arg(long, conflicts_with = "grid")]
        exhaustive: bool,
    },
    /// Subcase table of the worked contraction example.
    CaseTable {
        #[command(flatten)]
        space: SpaceArg,
        #[command(flatten)]
        spec: SpecArgs,
        /// Ray points per free variable.
        #[arg(long, default_value_t = 50)]
        resolution: usize,
    },
    /// Picard iteration with fixed-point and convergence diagnostics.
    Fixpoint {
        #[command(flatten)]
        space: SpaceArg,
        /// paper_S, identity or constant:<point>.
        #[arg(long, default_value = "paper_S")]
        map: String,
        #[arg(long)]
        start: String,
        #[arg(long, default_value_t = 1000)]
        max_iter: usize,
        /// Tail window of the Cauchy diagnostic (shrunk to fit short traces).
        #[arg(long, default_value_t = 8)]
        tail: usize,
        /// Matkowski comparison function for the envelope check.
        #[arg(long)]
        envelope: Option<String>,
        /// Check that the limit is the only fixed point among sampled points.
        #[arg(long)]
        unique: bool,
        /// Also write `k,a_k,gap_k` rows to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Reproduce every worked example as a pass/fail table.
    Repro {
        /// Replace a builtin, e.g. `two_point_b=file:mutated.psb`.
        #[arg(long = "override", value_name = "NAME=SPACE")]
        overrides: Vec<String>,
    },
    /// Print a tabulated space in the space-file format.
    Export {
        #[command(flatten)]
        space: SpaceArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    BoydWong,
    Matkowski,
}

impl From<KindArg> for ComparisonKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::BoydWong => ComparisonKind::BoydWong,
            KindArg::Matkowski => ComparisonKind::Matkowski,
        }
    }
}

#[derive(Args)]
struct SpecArgs {
    /// `paper`: p=q=r=s=1/5 with paper_S and paper_tau (half under --matkowski).
    #[arg(long, default_value = "paper")]
    spec: String,
    /// Certify the Matkowski inequality instead of Boyd-Wong.
    #[arg(long)]
    matkowski: bool,
    /// Override the exponents as `p,q,r,s`.
    #[arg(long)]
    exponents: Option<String>,
    /// Override the self-map: paper_S, identity or constant:<point>.
    #[arg(long)]
    map: Option<String>,
    /// Override the comparison function: paper_tau, half, identity or file:<path>.
    #[arg(long)]
    comparison: Option<String>,
}

fn load_space(selector: &str, bound: f64) -> Result<PartialSbSpace> {
    let space = if let Some(name) = selector.strip_prefix("builtin:") {
        builtin_space(name)?
    } else if let Some(path) = selector.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {path}: {e}")))?;
        load_tabulated_space(&text)?.named(path)
    } else {
        return Err(Error::InvalidArgument(format!(
            "space must be builtin:<name> or file:<path>, got `{selector}`"
        )));
    };
    Ok(space.with_upper_bound(bound))
}

fn parse_indices(text: &str) -> Result<Vec<i64>> {
    let bad = || Error::InvalidArgument(format!("cannot parse indices `{text}`"));
    if let Some((a, b)) = text.split_once("..") {
        let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        return Ok((a..=b).collect());
    }
    text.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

fn parse_floats(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|x| x.trim().parse().map_err(|_| Error::InvalidArgument(format!("cannot parse number `{x}`"))))
        .collect()
}

fn parse_map(space: &PartialSbSpace, text: &str) -> Result<SelfMap> {
    match text {
        "paper_S" => Ok(SelfMap::PaperS),
        "identity" => Ok(SelfMap::Identity),
        other => match other.strip_prefix("constant:") {
            Some(p) => Ok(SelfMap::Constant(space.parse_point(p)?)),
            None => Err(Error::InvalidArgument(format!("unknown map `{other}`"))),
        },
    }
}

fn parse_comparison(text: &str, kind: ComparisonKind) -> Result<ComparisonFn> {
    match text.strip_prefix("file:") {
        Some(path) => {
            let json = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidArgument(format!("cannot read {path}: {e}")))?;
            ComparisonFn::from_json(kind, &json)
        }
        None => ComparisonFn::builtin(text, kind),
    }
}

fn build_spec(space: &PartialSbSpace, args: &SpecArgs) -> Result<InterpolativeSpec> {
    if args.spec != "paper" {
        return Err(Error::InvalidArgument(format!("unknown spec `{}` (only `paper` is named)", args.spec)));
    }
    let kind = if args.matkowski { ComparisonKind::Matkowski } else { ComparisonKind::BoydWong };
    let mut spec = InterpolativeSpec::paper(kind);
    if let Some(e) = &args.exponents {
        let e = parse_floats(e)?;
        let [p, q, r, s] = e[..] else {
            return Err(Error::InvalidExponents(format!("expected four exponents, got {}", e.len())));
        };
        (spec.p, spec.q, spec.r, spec.s) = (p, q, r, s);
    }
    if let Some(m) = &args.map {
        spec.map = parse_map(space, m)?;
    }
    if let Some(c) = &args.comparison {
        spec.comparison = parse_comparison(c, kind)?;
    }
    spec.validate()?;
    Ok(spec)
}

/// Candidate points for queries on possibly infinite carriers.
fn candidates(space: &PartialSbSpace, common: &Common) -> (Vec<Point>, bool) {
    if space.carrier().is_finite() {
        return (space.sample(0, 0), false);
    }
    let mut pts = space.grid(common.samples);
    pts.extend(space.sample(common.samples, common.seed));
    pts.sort();
    pts.dedup();
    (pts, true)
}

fn run(cli: Cli) -> Result<Rendered> {
    let c = &cli.common;
    match cli.command {
        Command::VerifyAxioms { space, axioms, sampled } => {
            let s = load_space(&space.space, c.bound)?;
            let set = AxiomSet::parse(&axioms)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown axiom set `{axioms}`")))?;
            let source = if s.carrier().is_finite() && !sampled {
                TupleSource::Exhaustive
            } else {
                TupleSource::Sampled { count: c.samples, seed: c.seed }
            };
            Ok(report::axioms(&s, &check_axioms(&s, set, source)?))
        }
        Command::Ball { space, center, radius } => {
            let s = load_space(&space.space, c.bound)?;
            let center = s.parse_point(&center)?;
            let (cands, sampled) = candidates(&s, c);
            Ok(report::ball(&s, &open_ball(&s, center, radius, &cands)?, sampled))
        }
        Command::Topology { space } => {
            let t = generate_topology(&load_space(&space.space, c.bound)?)?;
            Ok(report::topology(&t, verify_topology_axioms(&t)))
        }
        Command::Separation { space } => {
            let t = generate_topology(&load_space(&space.space, c.bound)?)?;
            Ok(report::separation(&t, &separation_report(&t)))
        }
        Command::Connected { space } => {
            let t = generate_topology(&load_space(&space.space, c.bound)?)?;
            Ok(report::connected(&t, &is_connected(&t)))
        }
        Command::CoverWitness { space, center, indices, subfamily, scale, offset } => {
            let s = load_space(&space.space, c.bound)?;
            let family = CoverFamily::new(s.parse_point(&center)?, RadiusRule { scale, offset }, parse_indices(&indices)?);
            let sub = parse_indices(&subfamily)?;
            let w = uncovered_witness(&s, &family, &sub, c.bound)?;
            Ok(report::cover_witness(&s, &family, &sub, w))
        }
        Command::CheckComparison { function, kind, grid, budget } => {
            let kind = ComparisonKind::from(kind);
            let f = parse_comparison(&function, kind)?;
            let grid = match grid {
                Some(g) => parse_floats(&g)?,
                None => DEFAULT_GRID.to_vec(),
            };
            let r = match kind {
                ComparisonKind::BoydWong => check_boyd_wong_properties(&f, &grid)?,
                ComparisonKind::Matkowski => check_matkowski_properties(&f, &grid, budget)?,
            };
            Ok(report::comparison(&f, &r))
        }
        Command::Certify { space, spec, grid, exhaustive } => {
            let s = load_space(&space.space, c.bound)?;
            let spec = build_spec(&s, &spec)?;
            let source = match (exhaustive, grid) {
                (true, _) => TripleSource::Exhaustive,
                (false, Some(n)) => TripleSource::Points(s.grid(n)),
                (false, None) => TripleSource::Sampled { count: c.samples, seed: c.seed },
            };
            Ok(report::certificate(&s, &spec, &certify(&s, &spec, &source)?))
        }
        Command::CaseTable { space, spec, resolution } => {
            let s = load_space(&space.space, c.bound)?;
            let spec = build_spec(&s, &spec)?;
            Ok(report::case_table(&s, &reproduce_case_table(&s, &spec, resolution)?))
        }
        Command::Fixpoint { space, map, start, max_iter, tail, envelope, unique, csv } => {
            let s = load_space(&space.space, c.bound)?;
            let map = parse_map(&s, &map)?;
            let trace = picard_iterate(&s, &map, s.parse_point(&start)?, c.tolerance, max_iter)?;
            if let Some(path) = csv {
                std::fs::write(&path, trace_to_csv(&s, &trace)?)
                    .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?;
            }
            let limit_check = trace.limit.map(|l| verify_fixed_point(&s, &map, l, c.tolerance)).transpose()?;
            let window = tail.min(trace.orbit.len().saturating_sub(2));
            let convergence = if window >= 1 { Some(cauchy_diagnostic(&s, &trace, window)?) } else { None };
            let envelope = match envelope {
                Some(name) => Some(matkowski_envelope_check(&trace, &parse_comparison(&name, ComparisonKind::Matkowski)?)?),
                None => None,
            };
            let uniqueness = match (unique, trace.limit, &limit_check) {
                (true, Some(l), Some(check)) if check.is_fixed => {
                    let (pts, _) = candidates(&s, c);
                    Some(uniqueness_check(&s, &map, &pts, l, c.tolerance)?)
                }
                _ => None,
            };
            let summary = FixpointSummary { trace: &trace, limit_check, convergence, envelope, uniqueness };
            Ok(report::fixpoint(&s, &summary))
        }
        Command::Repro { overrides } => {
            let mut map = BTreeMap::new();
            for o in overrides {
                let (name, selector) = o
                    .split_once('=')
                    .ok_or_else(|| Error::InvalidArgument(format!("override must be NAME=SPACE, got `{o}`")))?;
                builtin_space(name)?;
                map.insert(name.to_string(), load_space(selector, c.bound)?);
            }
            let r = run_repro(&ReproOptions { seed: c.seed, overrides: map });
            Ok(Rendered { json: r.to_json(), text: r.to_text(), verdict: Some(r.passed()) })
        }
        Command::Export { space } => {
            let s = load_space(&space.space, c.bound)?;
            let text = to_space_file(&s)?;
            Ok(Rendered { json: serde_json::json!({ "space_file": text }), text, verdict: None })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    let cli = Cli::parse();
    let format = cli.common.format;
    match run(cli) {
        Ok(r) => {
            match format {
                Format::Text => print!("{}", r.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&r.json).expect("json values serialize")),
            }
            if r.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
