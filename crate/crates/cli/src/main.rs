//! `orchard`: generate configurations, count lines, audit arrangements and
//! run the combinatorial experiments, writing JSON reports.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use orchard_core::arrangement::{build_dual_arrangement_with, classify_edges, edges_csv, summarize, BuildOptions};
use orchard_core::audits::group::{almost_group_recover, FiniteAbelianGroup};
use orchard_core::audits::sumset::{restricted_sumset, sumset_bound_check, Mode, Op, PairSet};
use orchard_core::audits::{ngon_chord_multiplicity, Region};
use orchard_core::configurations::codec::{self, format_scalar, FORMAT_VERSION};
use orchard_core::configurations::{generate, Configuration, Family, FamilySpec};
use orchard_core::incidence::{check_extremal_bounds, check_identities, enumerate_lines_with, BoundStatus, IncidenceSpectrum, LineTable, Strategy};
use orchard_core::scalar::SignPolicy;
use orchard_core::structure::{cover_by_cubics_with, verify_triangular_grid_with, TriangularGrid};

const EXIT_ASSERTION: u8 = 2;
const EXIT_AMBIGUOUS: u8 = 3;
const EXIT_USAGE: u8 = 1;

#[derive(Parser, Serialize, Debug)]
#[command(name = "orchard", version, about = "Exact incidence geometry experiments")]
struct Cli {
    /// Precision cap in bits for certified signs
    #[arg(long, global = true, env = "ORCHARD_PRECISION_CAP", default_value_t = 4096)]
    precision_cap: u32,
    /// Worker threads (0: one per core)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize, Debug)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Generate a configuration
    Gen(GenArgs),
    /// Spectrum, counting identities and extremal bounds
    Count(CountArgs),
    /// Dual arrangement: Euler, Melchior and bad-edge checks
    Audit(AuditArgs),
    /// Cover the points by few cubics
    Cover(InputArgs),
    /// Check the triangular-grid axioms and hexagon closure
    GridVerify(GridArgs),
    /// Chord concurrency in the regular n-gon
    Chords(ChordArgs),
    /// Restricted sumset and its lower bound
    SumsetCheck(SumsetArgs),
    /// Nearest coset triple in a finite abelian group
    AlmostGroup(GroupArgs),
    /// Run the subcommand described by a JSON manifest
    Run(RunArgs),
}

#[derive(Args, Serialize, Debug)]
struct Output {
    /// Write the report here instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize, Debug)]
struct GenArgs {
    #[arg(long)]
    family: String,
    /// Family size parameter
    #[arg(long, visible_aliases = ["m", "n"])]
    size: i64,
    #[arg(long)]
    shift: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    radius: Option<i64>,
    /// Also write a coordinate table (CSV) for plotting
    #[arg(long)]
    dump_coords: Option<PathBuf>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Serialize, Debug)]
struct InputArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[command(flatten)]
    out: Output,
}

#[derive(Clone, Copy, ValueEnum, Serialize, Debug)]
#[serde(rename_all = "lowercase")]
enum StrategyArg {
    Auto,
    Oracle,
    Geometric,
}

#[derive(Args, Serialize, Debug)]
struct CountArgs {
    #[command(flatten)]
    io: InputArgs,
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    strategy: StrategyArg,
    /// Spectrum as CSV
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Point and line tables (CSV) for plotting
    #[arg(long)]
    dump_coords: Option<PathBuf>,
    /// Treat small-n bound failures as assertion failures
    #[arg(long)]
    strict_bounds: bool,
}

#[derive(Args, Serialize, Debug)]
struct AuditArgs {
    #[command(flatten)]
    io: InputArgs,
    /// Per-edge classification as CSV
    #[arg(long)]
    edges: Option<PathBuf>,
    /// Build even past the size guard
    #[arg(long)]
    force: bool,
}

#[derive(Args, Serialize, Debug)]
struct GridArgs {
    /// Grid file: {"I":[lo,hi],"J":..,"K":..,"p":[[a,b,c],..],"q":..,"r":..}
    #[arg(short, long, conflicts_with = "cuspidal")]
    input: Option<PathBuf>,
    /// Cuspidal grid with indices −R..=R
    #[arg(long)]
    cuspidal: Option<i64>,
    /// Parameter offsets of the three cuspidal families
    #[arg(long, default_value = "1/7,2/7,-3/7")]
    offsets: String,
    #[command(flatten)]
    out: Output,
}

#[derive(Clone, Copy, ValueEnum, Serialize, Debug)]
#[serde(rename_all = "lowercase")]
enum RegionArg {
    Interior,
    Exterior,
    All,
}

#[derive(Args, Serialize, Debug)]
struct ChordArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = RegionArg::Interior)]
    region: RegionArg,
    /// Histogram as CSV
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Fail if the maximum multiplicity exceeds this
    #[arg(long)]
    assert_max: Option<usize>,
    #[command(flatten)]
    out: Output,
}

#[derive(Clone, Copy, ValueEnum, Serialize, Debug)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Additive,
    Multiplicative,
}

#[derive(Args, Serialize, Debug)]
struct SumsetArgs {
    /// Comma-separated rationals
    #[arg(long, allow_hyphen_values = true)]
    u: String,
    #[arg(long, allow_hyphen_values = true)]
    v: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Additive)]
    mode: ModeArg,
    /// Index pairs i:j removed from the full pair set
    #[arg(long, default_value = "")]
    remove: String,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Serialize, Debug)]
struct GroupArgs {
    /// Cyclic factors, e.g. "12" or "2,6"
    #[arg(long)]
    group: String,
    /// Elements: "0,3,6" (cyclic) or "1:0,0:2" (products)
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    #[arg(long)]
    c: String,
    /// Deficiency constant K (default: deficiency / |A|)
    #[arg(long)]
    k: Option<String>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Serialize, Debug)]
struct RunArgs {
    manifest: PathBuf,
}

/// Outcome of a subcommand: the report and whether its checks passed.
struct Outcome {
    report: Value,
    output: Option<PathBuf>,
    pass: bool,
}

enum Failure {
    Usage(String),
    Core(orchard_core::Error),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast::<orchard_core::Error>() {
            Ok(core) => Failure::Core(core),
            Err(e) => Failure::Other(e),
        }
    }
}

impl From<orchard_core::Error> for Failure {
    fn from(e: orchard_core::Error) -> Self {
        Failure::Core(e)
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    match run_argv(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_ASSERTION),
        Err(Failure::Usage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, orchard_core::Error::AmbiguousSign { .. }) { EXIT_AMBIGUOUS } else { EXIT_USAGE })
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn parse(args: &[String]) -> Result<Cli, Failure> {
    Cli::try_parse_from(args).map_err(|e| {
        use clap::error::ErrorKind;
        if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
            print!("{e}");
            std::process::exit(0);
        }
        Failure::Usage(e.render().to_string())
    })
}

fn run_argv(args: &[String]) -> Result<bool, Failure> {
    let cli = parse(args)?;
    if let Command::Run(r) = &cli.command {
        let argv = manifest_argv(&r.manifest)?;
        let inner = parse(&argv)?;
        if matches!(inner.command, Command::Run(_)) {
            return Err(Failure::Usage("manifests cannot nest `run`".into()));
        }
        return execute(&inner);
    }
    execute(&cli)
}

fn execute(cli: &Cli) -> Result<bool, Failure> {
    if cli.precision_cap < 64 {
        return Err(Failure::Usage("--precision-cap must be at least 64".into()));
    }
    if cli.threads > 0 {
        // ignore failure: the pool may already exist when called twice
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let policy = SignPolicy::geometric().with_cap(cli.precision_cap);
    let outcome = match &cli.command {
        Command::Gen(a) => return gen(a).map(|_| true),
        Command::Count(a) => count(a, &policy)?,
        Command::Audit(a) => audit(a, &policy)?,
        Command::Cover(a) => cover(a, &policy)?,
        Command::GridVerify(a) => grid_verify(a, &policy)?,
        Command::Chords(a) => chords(a)?,
        Command::SumsetCheck(a) => sumset(a)?,
        Command::AlmostGroup(a) => almost_group(a)?,
        Command::Run(_) => unreachable!(),
    };
    let doc = json!({
        "format_version": FORMAT_VERSION,
        "manifest": serde_json::to_value(cli).map_err(anyhow::Error::from)?,
        "pass": outcome.pass,
        "report": outcome.report,
    });
    emit(&doc, outcome.output.as_deref())?;
    Ok(outcome.pass)
}

fn emit(doc: &Value, out: Option<&Path>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(doc)? + "\n";
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Flags from a JSON manifest: {"subcommand": "count", "input": "x.json", ...}.
fn manifest_argv(path: &Path) -> Result<Vec<String>, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("manifest: {e}")))?;
    let obj = v.as_object().ok_or_else(|| Failure::Usage("manifest must be a JSON object".into()))?;
    let sub = obj.get("subcommand").and_then(Value::as_str).ok_or_else(|| Failure::Usage("manifest needs \"subcommand\"".into()))?;
    let mut argv = vec!["orchard".to_string(), sub.to_string()];
    for (k, val) in obj {
        if k == "subcommand" {
            continue;
        }
        let flag = format!("--{}", k.replace('_', "-"));
        match val {
            Value::Bool(true) => argv.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::String(s) => argv.extend([flag, s.clone()]),
            Value::Number(n) => argv.extend([flag, n.to_string()]),
            Value::Array(items) => {
                let parts: Vec<String> = items.iter().map(|i| i.as_str().map(str::to_string).unwrap_or_else(|| i.to_string())).collect();
                argv.extend([flag, parts.join(",")]);
            }
            Value::Object(_) => return Err(Failure::Usage(format!("manifest field {k} cannot be an object"))),
        }
    }
    Ok(argv)
}

fn rational(s: &str) -> anyhow::Result<BigRational> {
    s.trim().parse().map_err(|_| anyhow!("not a rational number: {s:?}"))
}

fn rationals(s: &str) -> anyhow::Result<Vec<BigRational>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(rational).collect()
}

fn gen(a: &GenArgs) -> Result<(), Failure> {
    let family: Family = a.family.parse()?;
    let mut spec = FamilySpec::new(family, a.size);
    if let Some(s) = &a.shift {
        spec = spec.shift(rational(s)?);
    }
    if let Some(s) = a.seed {
        spec = spec.seed(s);
    }
    if let Some(r) = a.radius {
        spec = spec.radius(r);
    }
    let c = generate(&spec)?;
    if let Some(p) = &a.dump_coords {
        fs::write(p, points_csv(&c)).with_context(|| format!("writing {}", p.display()))?;
    }
    let text = codec::to_json_string(&c);
    match &a.out.output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn points_csv(c: &Configuration) -> String {
    let mut s = String::from("index,x,y,z,x_approx,y_approx,z_approx\n");
    for (i, p) in c.points().iter().enumerate() {
        let exact: Vec<String> = p.coords().iter().map(|v| format!("\"{}\"", format_scalar(v))).collect();
        let approx: Vec<String> = p.coords().iter().map(|v| format!("{:.17e}", v.approx())).collect();
        s.push_str(&format!("{i},{},{}\n", exact.join(","), approx.join(",")));
    }
    s
}

fn lines_csv(t: &LineTable) -> String {
    let mut s = String::from("line,size,members\n");
    for (i, l) in t.lines().iter().enumerate() {
        let m: Vec<String> = l.iter().map(usize::to_string).collect();
        s.push_str(&format!("{i},{},{}\n", l.len(), m.join(" ")));
    }
    s
}

fn strategy(s: StrategyArg) -> Strategy {
    match s {
        StrategyArg::Auto => Strategy::Auto,
        StrategyArg::Oracle => Strategy::Oracle,
        StrategyArg::Geometric => Strategy::Geometric,
    }
}

fn load(p: &Path) -> Result<Configuration, Failure> {
    Ok(codec::load(p)?)
}

fn count(a: &CountArgs, policy: &SignPolicy) -> Result<Outcome, Failure> {
    let c = load(&a.io.input)?;
    let table = enumerate_lines_with(&c, strategy(a.strategy), policy)?;
    let s = IncidenceSpectrum::from_table(&table);
    let ids = check_identities(&s);
    let bounds = check_extremal_bounds(&s);
    if let Some(p) = &a.csv {
        fs::write(p, s.to_csv()).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(p) = &a.dump_coords {
        fs::write(p, points_csv(&c)).with_context(|| format!("writing {}", p.display()))?;
        let lp = p.with_extension("lines.csv");
        fs::write(&lp, lines_csv(&table)).with_context(|| format!("writing {}", lp.display()))?;
    }
    let pass = ids.pass && !(a.strict_bounds && bounds.status == BoundStatus::SmallNException);
    Ok(Outcome {
        report: json!({
            "family": c.family(),
            "spectrum": s.to_json(),
            "lines": s.lines(),
            "identities": ids,
            "bounds": bounds,
        }),
        output: a.io.out.output.clone(),
        pass,
    })
}

fn audit(a: &AuditArgs, policy: &SignPolicy) -> Result<Outcome, Failure> {
    let c = load(&a.io.input)?;
    let opts = BuildOptions { policy: *policy, force: a.force, ..BuildOptions::default() };
    let d = build_dual_arrangement_with(&c, &opts)?;
    let summary = summarize(&d);
    if let Some(p) = &a.edges {
        fs::write(p, edges_csv(&classify_edges(&d))).with_context(|| format!("writing {}", p.display()))?;
    }
    let pass = summary.identities_hold() && summary.bad_edge_bound_holds && summary.melchior_inequality_holds;
    Ok(Outcome { report: json!({ "family": c.family(), "summary": summary }), output: a.io.out.output.clone(), pass })
}

fn cover(a: &InputArgs, policy: &SignPolicy) -> Result<Outcome, Failure> {
    let c = load(&a.input)?;
    let opts = BuildOptions { policy: *policy, ..BuildOptions::default() };
    let cov = cover_by_cubics_with(&c, &opts)?;
    let pass = cov.is_complete();
    Ok(Outcome { report: cov.to_json(), output: a.out.output.clone(), pass })
}

fn grid_verify(a: &GridArgs, policy: &SignPolicy) -> Result<Outcome, Failure> {
    let grid = match (&a.input, a.cuspidal) {
        (Some(p), None) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("grid file: {e}")))?;
            TriangularGrid::from_json(&v)?
        }
        (None, Some(r)) => {
            if r < 0 {
                return Err(Failure::Usage("--cuspidal needs R ≥ 0".into()));
            }
            let offs = rationals(&a.offsets)?;
            let offs: [BigRational; 3] = offs.try_into().map_err(|_| Failure::Usage("--offsets needs three values".into()))?;
            TriangularGrid::cuspidal([-r..=r, -r..=r, -r..=r], offs)?
        }
        _ => return Err(Failure::Usage("grid-verify needs --input or --cuspidal".into())),
    };
    let rep = verify_triangular_grid_with(&grid, policy)?;
    let pass = rep.passes();
    Ok(Outcome { report: serde_json::to_value(rep).map_err(anyhow::Error::from)?, output: a.out.output.clone(), pass })
}

fn chords(a: &ChordArgs) -> Result<Outcome, Failure> {
    let region = match a.region {
        RegionArg::Interior => Region::Interior,
        RegionArg::Exterior => Region::Exterior,
        RegionArg::All => Region::All,
    };
    let rep = ngon_chord_multiplicity(a.n, region)?;
    if let Some(p) = &a.csv {
        fs::write(p, rep.to_csv()).with_context(|| format!("writing {}", p.display()))?;
    }
    let pass = a.assert_max.map_or(true, |m| rep.max <= m);
    Ok(Outcome { report: serde_json::to_value(rep).map_err(anyhow::Error::from)?, output: a.out.output.clone(), pass })
}

fn pairs(s: &str) -> anyhow::Result<Vec<(usize, usize)>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (i, j) = t.split_once(':').ok_or_else(|| anyhow!("pairs are written i:j, got {t:?}"))?;
            Ok((i.trim().parse()?, j.trim().parse()?))
        })
        .collect()
}

fn sumset(a: &SumsetArgs) -> Result<Outcome, Failure> {
    let (u, v) = (rationals(&a.u)?, rationals(&a.v)?);
    let mut gamma = PairSet::full(u.len(), v.len());
    for p in pairs(&a.remove)? {
        if !gamma.remove(p) {
            bail_usage(format!("pair {}:{} is not in U × V", p.0, p.1))?;
        }
    }
    let (mode, op) = match a.mode {
        ModeArg::Additive => (Mode::Additive, Op::Add),
        ModeArg::Multiplicative => (Mode::Multiplicative, Op::Multiply),
    };
    let rep = sumset_bound_check(&u, &v, &gamma, mode)?;
    let set: Vec<String> = restricted_sumset(&u, &v, &gamma, op)?.iter().map(ToString::to_string).collect();
    let pass = rep.holds;
    Ok(Outcome { report: json!({ "check": rep, "sumset": set }), output: a.out.output.clone(), pass })
}

fn bail_usage(msg: String) -> Result<(), Failure> {
    Err(Failure::Usage(msg))
}

fn almost_group(a: &GroupArgs) -> Result<Outcome, Failure> {
    let factors: Vec<u64> = a
        .group
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| anyhow!("bad cyclic factor {t:?}")))
        .collect::<anyhow::Result<_>>()?;
    let g = FiniteAbelianGroup::new(factors)?;
    let set = |s: &str| -> Result<Vec<usize>, Failure> {
        s.split(',').filter(|t| !t.trim().is_empty()).map(|t| g.parse(t).map_err(Failure::from)).collect()
    };
    let (sa, sb, sc) = (set(&a.a)?, set(&a.b)?, set(&a.c)?);
    let k = a.k.as_deref().map(rational).transpose()?;
    let rep = almost_group_recover(&g, &sa, &sb, &sc, k)?;
    let pass = rep.as_ref().map_or(true, |r| r.bound_holds);
    Ok(Outcome { report: serde_json::to_value(rep).map_err(anyhow::Error::from)?, output: a.out.output.clone(), pass })
}
