//! The `stepup` command line: argument parsing, dispatch, run manifests and
//! the exit-code contract.
//!
//! Exit codes: 0 clean or OK, 1 witness or failure found, 2 usage or input
//! error (reported as JSON on stderr), 3 search budget exhausted.
//!
//! With `--out DIR` every run writes `DIR/report.json`, `DIR/manifest.json`
//! and, when something was found, files under `DIR/witnesses/`. Reports hold
//! no timings, so the same arguments always give the same report bytes;
//! timings live in the manifest.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use crate::coloring::io::{export_coloring, import_coloring, read_coloring, TowerDescriptor};
use crate::coloring::{
    build_tower, search_base_coloring, verify_no_mono_clique, BaseColoring, BaseSearchOutcome, CliqueCheck, Coloring,
    Palette, DEFAULT_TOWER_CAP,
};
use crate::error::{Error, Result};
use crate::family::{canonical_member, canonical_separated, is_member, FamilySpec, Flavor, OrderedHypergraph};
use crate::search::{verify_stepup_avoidance, SearchLimits, Verdict};
use crate::steiner::{
    assemble_h, build_blowup, build_projective_plane, is_partial_steiner, next_prime_at_least,
    sample_ordering_and_search, SteinerCheck, SteinerSystem,
};
use crate::tree::{classify, projection, split_parts, LeafSet, Shape, TreeParams};

pub const MANIFEST_SCHEMA: &str = "ramsey-stepup/manifest/v1";
pub const ERROR_SCHEMA: &str = "ramsey-stepup/error/v1";
pub const REPORT_SCHEMA: &str = "ramsey-stepup/report/v1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FOUND: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;

/// Largest result `tower` writes out in full, in bits.
pub const TOWER_EXACT_BITS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TowerValue {
    Exact(BigUint),
    Symbolic(String),
}

impl std::fmt::Display for TowerValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TowerValue::Exact(v) => write!(f, "{v}"),
            TowerValue::Symbolic(s) => f.write_str(s),
        }
    }
}

/// `t_0(x) = x`, `t_{i+1}(x) = 2^{t_i(x)}`; symbolic once the value would
/// need more than a million bits.
pub fn tower(i: u32, x: u64) -> TowerValue {
    let mut v = BigUint::from(x);
    for _ in 0..i {
        // 2^v has v + 1 bits
        if v >= BigUint::from(TOWER_EXACT_BITS) {
            return TowerValue::Symbolic(format!("t_{i}({x})"));
        }
        let shift = u64::try_from(&v).expect("below the bit limit");
        v = BigUint::from(1u8) << shift;
    }
    TowerValue::Exact(v)
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "stepup", version, about = "Stepping-up colorings, ordered families and partial Steiner systems")]
pub struct Cli {
    /// Worker threads for searches and Monte-Carlo trials.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub workers: u64,
    /// Root seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory for manifest.json, report.json and witnesses/.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Leaf-set geometry on T(N).
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Base colorings.
    #[command(subcommand)]
    Color(ColorCmd),
    /// Avoidance checks for stepped-up colorings.
    #[command(subcommand)]
    Stepup(StepupCmd),
    /// Ordered family members.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Blow-ups, projective planes and the glued system.
    #[command(subcommand)]
    Steiner(SteinerCmd),
    /// Random-ordering experiments.
    #[command(subcommand)]
    Mc(McCmd),
    /// Numeric bounds.
    #[command(subcommand)]
    Bound(BoundCmd),
}

#[derive(Debug, Subcommand, Serialize)]
pub enum TreeCmd {
    Classify {
        #[arg(long)]
        depth: u32,
        /// Comma-separated leaves.
        #[arg(long, value_parser = parse_list_u64)]
        leaves: Vec1<u64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Builtin {
    /// 4-cycle in color 0, diagonals in color 1, on [4].
    C4,
    /// Pentagon in color 0, its complement in color 1, on [5].
    Pentagon,
    /// Constant color 0 on [N]^(r).
    Zero,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum ColorCmd {
    /// Search for a 2-coloring of [N]^(2) without a monochromatic K_t.
    BuildBase {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 1 << 20)]
        budget: u64,
        /// Where to write the coloring; stdout when absent.
        #[arg(long)]
        to: Option<PathBuf>,
    },
    VerifyClique {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        t: usize,
    },
    /// Write a coloring in canonical form.
    Export {
        #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
        file: Option<PathBuf>,
        #[arg(long)]
        builtin: Option<Builtin>,
        /// Ground size for `--builtin zero`.
        #[arg(long, default_value_t = 5)]
        n: u64,
        /// Uniformity for `--builtin zero`.
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long)]
        to: Option<PathBuf>,
    },
    /// Parse and validate a coloring file.
    Import {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct FamilyArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub n: usize,
    /// Comma-separated index set; defaults to the canonical separated set.
    #[arg(long = "I", value_parser = parse_list_usize)]
    pub index: Option<Vec1<usize>>,
}

impl FamilyArgs {
    fn spec(&self, flavor: Flavor) -> Result<FamilySpec> {
        let index = match &self.index {
            Some(v) => v.0.clone(),
            None => canonical_separated(self.n, self.k)?,
        };
        FamilySpec::new(self.k, self.n, index, flavor)
    }
}

#[derive(Debug, Subcommand, Serialize)]
pub enum StepupCmd {
    /// Search the stepped-up coloring for monochromatic F and revF copies.
    Verify {
        /// Base coloring file.
        #[arg(long, required_unless_present = "tower", conflicts_with = "tower")]
        base: Option<PathBuf>,
        /// Tower descriptor (JSON); its target_k must equal --k.
        #[arg(long)]
        tower: Option<PathBuf>,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = DEFAULT_TOWER_CAP)]
        cap: u64,
        #[arg(long)]
        node_budget: Option<u64>,
        #[arg(long)]
        time_budget_ms: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
pub enum FlavorArg {
    #[value(name = "F")]
    F,
    #[value(name = "revF")]
    RevF,
    #[value(name = "Fstar")]
    FStar,
    #[value(name = "G")]
    G,
    #[value(name = "revG")]
    RevG,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Self {
        match f {
            FlavorArg::F => Flavor::F,
            FlavorArg::RevF => Flavor::RevF,
            FlavorArg::FStar => Flavor::FStar,
            FlavorArg::G => Flavor::G,
            FlavorArg::RevG => Flavor::RevG,
        }
    }
}

#[derive(Debug, Subcommand, Serialize)]
pub enum FamilyCmd {
    /// Write the canonical member as hypergraph JSON.
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum)]
        flavor: FlavorArg,
        #[arg(long)]
        to: Option<PathBuf>,
    },
    /// Check whether a hypergraph file is a member.
    Check {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum)]
        flavor: FlavorArg,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct BlowupArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Class size; defaults to n^(k+3).
    #[arg(long)]
    pub m: Option<u64>,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum SteinerCmd {
    /// Build the blow-up R and check its invariants.
    Blowup {
        #[command(flatten)]
        blowup: BlowupArgs,
    },
    /// Build the projective plane of prime order p and check P1-P3.
    Plane {
        #[arg(long)]
        p: u64,
    },
    /// Glue copies of R onto the lines of a projective plane.
    Assemble {
        #[command(flatten)]
        blowup: BlowupArgs,
        /// Plane order; defaults to the least prime >= v(R).
        #[arg(long)]
        p: Option<u64>,
        /// Where to write the system JSON.
        #[arg(long)]
        to: Option<PathBuf>,
    },
    /// Check that every ell-set lies in at most one edge.
    Check {
        #[arg(long)]
        file: PathBuf,
        /// Defaults to k-1.
        #[arg(long)]
        ell: Option<usize>,
    },
}

#[derive(Debug, Subcommand, Serialize)]
pub enum McCmd {
    /// Random orderings of R searched for the canonical G and revG members.
    Run {
        #[command(flatten)]
        blowup: BlowupArgs,
        #[arg(long)]
        trials: u64,
    },
}

#[derive(Debug, Subcommand, Serialize)]
pub enum BoundCmd {
    /// The tower function t_i(x).
    Tower {
        #[arg(long)]
        i: u32,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        x: u64,
    },
}

/// A non-empty comma-separated list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Vec1<T>(pub Vec<T>);

fn parse_list<T: std::str::FromStr>(s: &str) -> std::result::Result<Vec1<T>, String> {
    let v: Vec<T> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("{t:?} is not a non-negative integer")))
        .collect::<std::result::Result<_, _>>()?;
    if v.is_empty() {
        return Err("empty list".into());
    }
    Ok(Vec1(v))
}

fn parse_list_u64(s: &str) -> std::result::Result<Vec1<u64>, String> {
    parse_list(s)
}

fn parse_list_usize(s: &str) -> std::result::Result<Vec1<usize>, String> {
    parse_list(s)
}

/// What a command produced: the report, its exit code, what goes to stdout,
/// and named witness files.
struct Outcome {
    report: Value,
    code: i32,
    stdout: String,
    witnesses: Vec<(String, Value)>,
    /// Wall-clock measurements; recorded in the manifest only.
    timings: Value,
}

impl Outcome {
    fn json(report: Value, code: i32) -> Self {
        let stdout = pretty(&report);
        Outcome {
            report,
            code,
            stdout,
            witnesses: Vec::new(),
            timings: Value::Null,
        }
    }

    fn with_witness(mut self, name: &str, w: Value) -> Self {
        self.witnesses.push((name.to_string(), w));
        self
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn report(command: &str, body: Value) -> Value {
    let mut r = json!({ "schema": REPORT_SCHEMA, "command": command });
    if let (Value::Object(dst), Value::Object(src)) = (&mut r, body) {
        dst.extend(src);
    }
    r
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Output goes to the given writers.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let body = json!({
                "schema": ERROR_SCHEMA,
                "kind": "usage",
                "message": e.kind().to_string(),
                "detail": e.to_string(),
            });
            let _ = stderr.write_all(pretty(&body).as_bytes());
            return EXIT_ERROR;
        }
    };
    let argv: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(&cli, &argv, stdout) {
        Ok(code) => code,
        Err(e) => {
            let body = json!({ "schema": ERROR_SCHEMA, "kind": "error", "message": e.to_string() });
            let _ = stderr.write_all(pretty(&body).as_bytes());
            EXIT_ERROR
        }
    }
}

fn execute(cli: &Cli, argv: &[String], stdout: &mut dyn Write) -> Result<i32> {
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers as usize)
        .build()
        .map_err(|e| Error::InvalidParams(e.to_string()))?;
    let outcome = pool.install(|| dispatch(cli))?;
    stdout.write_all(outcome.stdout.as_bytes())?;
    if let Some(dir) = &cli.out {
        write_outputs(dir, cli, argv, &outcome, started.elapsed())?;
    }
    Ok(outcome.code)
}

fn write_outputs(dir: &Path, cli: &Cli, argv: &[String], outcome: &Outcome, elapsed: Duration) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut outputs = vec!["report.json".to_string()];
    std::fs::write(dir.join("report.json"), pretty(&outcome.report))?;
    if !outcome.witnesses.is_empty() {
        let wdir = dir.join("witnesses");
        std::fs::create_dir_all(&wdir)?;
        for (name, w) in &outcome.witnesses {
            std::fs::write(wdir.join(name), pretty(w))?;
            outputs.push(format!("witnesses/{name}"));
        }
    }
    let manifest = json!({
        "schema": MANIFEST_SCHEMA,
        "command": command_name(&cli.command),
        "argv": argv,
        "params": cli,
        "seed": cli.seed,
        "workers": cli.workers,
        "version": env!("CARGO_PKG_VERSION"),
        "exit_code": outcome.code,
        "elapsed_ms": elapsed.as_millis() as u64,
        "timings": outcome.timings,
        "outputs": outputs,
    });
    std::fs::write(dir.join("manifest.json"), pretty(&manifest))?;
    Ok(())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Tree(TreeCmd::Classify { .. }) => "tree classify",
        Command::Color(ColorCmd::BuildBase { .. }) => "color build-base",
        Command::Color(ColorCmd::VerifyClique { .. }) => "color verify-clique",
        Command::Color(ColorCmd::Export { .. }) => "color export",
        Command::Color(ColorCmd::Import { .. }) => "color import",
        Command::Stepup(StepupCmd::Verify { .. }) => "stepup verify",
        Command::Family(FamilyCmd::Gen { .. }) => "family gen",
        Command::Family(FamilyCmd::Check { .. }) => "family check",
        Command::Steiner(SteinerCmd::Blowup { .. }) => "steiner blowup",
        Command::Steiner(SteinerCmd::Plane { .. }) => "steiner plane",
        Command::Steiner(SteinerCmd::Assemble { .. }) => "steiner assemble",
        Command::Steiner(SteinerCmd::Check { .. }) => "steiner check",
        Command::Mc(McCmd::Run { .. }) => "mc run",
        Command::Bound(BoundCmd::Tower { .. }) => "bound tower",
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let name = command_name(&cli.command);
    match &cli.command {
        Command::Tree(TreeCmd::Classify { depth, leaves }) => {
            let params = TreeParams::new(*depth)?;
            let set = LeafSet::from_unsorted(leaves.0.clone(), params)?;
            let deltas = set.consecutive_deltas();
            let shape = if set.len() >= 3 { Some(classify(&set)?) } else { None };
            let parts = if set.len() >= 2 {
                let (l, r) = split_parts(&set)?;
                Some(json!({ "left": l.elements(), "right": r.elements() }))
            } else {
                None
            };
            let proj = if set.len() >= 2 { Some(projection(&set)?) } else { None };
            let body = json!({
                "depth": depth,
                "leaves": set.elements(),
                "deltas": deltas,
                "shape": shape.map(shape_value),
                "split_parts": parts,
                "projection": proj,
            });
            Ok(Outcome::json(report(name, body), EXIT_OK))
        }
        Command::Color(cmd) => color(name, cli, cmd),
        Command::Stepup(StepupCmd::Verify {
            base,
            tower,
            family,
            cap,
            node_budget,
            time_budget_ms,
        }) => {
            let spec = family.spec(Flavor::F)?;
            if spec.k >= 4 {
                spec.require_separated()?;
            }
            let built = match (base, tower) {
                (Some(path), _) => build_tower(read_coloring(path)?, spec.k, *cap)?,
                (None, Some(path)) => {
                    let d = TowerDescriptor::parse(&std::fs::read_to_string(path)?)?;
                    if d.target_k != spec.k {
                        return Err(Error::InvalidParams(format!(
                            "tower reaches k={}, but --k is {}",
                            d.target_k, spec.k
                        )));
                    }
                    d.build(path.parent().unwrap_or(Path::new(".")))?
                }
                (None, None) => unreachable!("clap requires one of --base and --tower"),
            };
            let limits = SearchLimits {
                max_nodes: *node_budget,
                max_time: time_budget_ms.map(Duration::from_millis),
            };
            let top: Arc<dyn Coloring> = built.top().clone();
            let mut rep = verify_stepup_avoidance(top.as_ref(), &spec, limits)?;
            let elapsed = rep.elapsed_ms.take();
            let code = if !rep.reflection_agrees {
                EXIT_FOUND
            } else {
                match rep.verdict() {
                    Verdict::Clean => EXIT_OK,
                    Verdict::Witness => EXIT_FOUND,
                    Verdict::Indeterminate => EXIT_INDETERMINATE,
                }
            };
            let mut body = to_value(&rep);
            body["verdict"] = to_value(&rep.verdict());
            body["ground_sizes"] = to_value(&built.ground_sizes());
            let mut out = Outcome::json(report(name, body), code);
            for (i, w) in rep.witnesses().enumerate() {
                out = out.with_witness(&format!("copy-{}-{}-{i}.json", w.flavor, w.color), to_value(w));
            }
            out.timings = json!({ "search_ms": elapsed });
            Ok(out)
        }
        Command::Family(FamilyCmd::Gen { family, flavor, to }) => {
            let spec = family.spec((*flavor).into())?;
            let h = canonical_member(&spec)?;
            let body = json!({ "spec": spec, "v": h.v, "e": h.edges.len(), "hypergraph": h });
            match to {
                Some(path) => {
                    std::fs::write(path, h.to_json())?;
                    Ok(Outcome::json(report(name, body), EXIT_OK))
                }
                None => {
                    let mut out = Outcome::json(report(name, body), EXIT_OK);
                    out.stdout = h.to_json() + "\n";
                    Ok(out)
                }
            }
        }
        Command::Family(FamilyCmd::Check { file, family, flavor }) => {
            let spec = family.spec((*flavor).into())?;
            let h = OrderedHypergraph::from_json(&std::fs::read_to_string(file)?)?;
            let member = is_member(&h, &spec)?;
            let body = json!({ "spec": spec, "member": member });
            Ok(Outcome::json(report(name, body), if member { EXIT_OK } else { EXIT_FOUND }))
        }
        Command::Steiner(cmd) => steiner(name, cli, cmd),
        Command::Mc(McCmd::Run { blowup, trials }) => {
            let spec = blowup.family.spec(Flavor::G)?;
            let r = build_blowup(spec.n, spec.k, &spec.index, blowup.m)?;
            let mut rep = sample_ordering_and_search(&r, &spec, *trials, cli.seed)?;
            let micros = rep.trial_micros.take();
            let code = if rep.steiner_ok == rep.trials { EXIT_OK } else { EXIT_FOUND };
            let mut out = Outcome::json(report(name, to_value(&rep)), code);
            for f in &rep.failures {
                out = out.with_witness(&format!("ordering-{}-trial-{}.json", f.flavor, f.trial), to_value(f));
            }
            out.timings = json!({ "trial_micros": micros });
            Ok(out)
        }
        Command::Bound(BoundCmd::Tower { i, x }) => {
            let value = tower(*i, *x);
            let exact = matches!(value, TowerValue::Exact(_));
            let text = value.to_string();
            let body = json!({ "i": i, "x": x, "exact": exact, "value": text });
            let mut out = Outcome::json(report(name, body), EXIT_OK);
            out.stdout = format!("{text}\n");
            Ok(out)
        }
    }
}

fn shape_value(s: Shape) -> Value {
    match s {
        Shape::LeftComb => json!({ "kind": "left_comb" }),
        Shape::RightComb => json!({ "kind": "right_comb" }),
        Shape::Split { left, right } => json!({
            "kind": "split",
            "left": left,
            "right": right,
            "balanced": s.is_balanced(),
        }),
    }
}

fn color(name: &str, cli: &Cli, cmd: &ColorCmd) -> Result<Outcome> {
    match cmd {
        ColorCmd::BuildBase { n, t, budget, to } => match search_base_coloring(*n, *t, cli.seed, *budget)? {
            BaseSearchOutcome::Found { coloring, attempts } => {
                let text = export_coloring(&coloring);
                let body = json!({ "n": n, "t": t, "result": "found", "attempts": attempts, "coloring": text });
                let mut out = Outcome::json(report(name, body), EXIT_OK);
                match to {
                    Some(path) => std::fs::write(path, &text)?,
                    None => out.stdout = text,
                }
                Ok(out)
            }
            BaseSearchOutcome::NotFound { attempts, exhaustive } => {
                let body = json!({
                    "n": n, "t": t, "result": "not_found", "attempts": attempts, "exhaustive": exhaustive,
                });
                Ok(Outcome::json(report(name, body), EXIT_FOUND))
            }
        },
        ColorCmd::VerifyClique { file, t } => {
            let c = read_coloring(file)?;
            let check = verify_no_mono_clique(&c, *t)?;
            let body = json!({ "t": t, "check": check });
            Ok(match check {
                CliqueCheck::Ok => Outcome::json(report(name, body), EXIT_OK),
                CliqueCheck::Witness { .. } => {
                    Outcome::json(report(name, body), EXIT_FOUND).with_witness("clique.json", to_value(&check))
                }
            })
        }
        ColorCmd::Export { file, builtin, n, r, to } => {
            let c = match (file, builtin) {
                (Some(path), _) => read_coloring(path)?,
                (None, Some(Builtin::C4)) => BaseColoring::c4_diagonals(),
                (None, Some(Builtin::Pentagon)) => BaseColoring::pentagon(),
                (None, Some(Builtin::Zero)) => BaseColoring::constant(*r, *n, Palette::Binary, 0)?,
                (None, None) => unreachable!("clap requires --file or --builtin"),
            };
            let text = export_coloring(&c);
            let body = json!({
                "r": c.uniformity(), "N": c.ground_size(), "palette": c.palette(), "subsets": c.table().len(),
            });
            let mut out = Outcome::json(report(name, body), EXIT_OK);
            match to {
                Some(path) => std::fs::write(path, &text)?,
                None => out.stdout = text,
            }
            Ok(out)
        }
        ColorCmd::Import { file } => {
            let c = import_coloring(&std::fs::read_to_string(file)?)?;
            let mut counts = vec![0u64; c.palette().size() as usize];
            for &x in c.table() {
                counts[x as usize] += 1;
            }
            let body = json!({
                "r": c.uniformity(), "N": c.ground_size(), "palette": c.palette(),
                "subsets": c.table().len(), "color_counts": counts,
            });
            Ok(Outcome::json(report(name, body), EXIT_OK))
        }
    }
}

fn steiner(name: &str, cli: &Cli, cmd: &SteinerCmd) -> Result<Outcome> {
    match cmd {
        SteinerCmd::Blowup { blowup } => {
            let spec = blowup.family.spec(Flavor::G)?;
            let r = build_blowup(spec.n, spec.k, &spec.index, blowup.m)?;
            let check = match r.to_hypergraph() {
                Ok(h) => Some(is_partial_steiner(&h.edges, r.k - 1)?),
                Err(_) => None,
            };
            let ok = check.as_ref().is_none_or(|c| *c == SteinerCheck::Ok);
            let body = json!({
                "system": r,
                "vertices": r.vertex_count(),
                "edges": r.edge_count(),
                "class_sizes": { "V_i": r.m, "V_J": r.class_j_size() },
                "omega": r.omega(),
                "partial_steiner": check,
            });
            Ok(Outcome::json(report(name, body), if ok { EXIT_OK } else { EXIT_FOUND }))
        }
        SteinerCmd::Plane { p } => {
            let plane = build_projective_plane(*p)?;
            let check = plane.check();
            let body = json!({
                "order": p, "points": plane.point_count(), "lines": plane.lines.len(),
                "points_per_line": p + 1, "check": check,
            });
            Ok(Outcome::json(report(name, body), if check.all() { EXIT_OK } else { EXIT_FOUND }))
        }
        SteinerCmd::Assemble { blowup, p, to } => {
            let spec = blowup.family.spec(Flavor::G)?;
            let r = build_blowup(spec.n, spec.k, &spec.index, blowup.m)?;
            let p = p.unwrap_or_else(|| next_prime_at_least(r.vertex_count()));
            let plane = build_projective_plane(p)?;
            let a = assemble_h(&r, &plane, cli.seed)?;
            let check = is_partial_steiner(&a.system.edges, r.k - 1)?;
            let body = json!({
                "system": r,
                "order": p,
                "seed": cli.seed,
                "v": a.system.v,
                "edges": a.system.edges.len(),
                "copies": a.copies,
                "merged_duplicates": a.merged_duplicates,
                "partial_steiner": check,
            });
            let code = if check == SteinerCheck::Ok { EXIT_OK } else { EXIT_FOUND };
            let mut out = Outcome::json(report(name, body), code);
            match to {
                Some(path) => std::fs::write(path, a.system.to_json())?,
                None => out.witnesses.push(("system.json".into(), to_value(&a.system))),
            }
            if let SteinerCheck::Witness { .. } = check {
                out = out.with_witness("steiner.json", to_value(&check));
            }
            Ok(out)
        }
        SteinerCmd::Check { file, ell } => {
            let s = SteinerSystem::from_json(&std::fs::read_to_string(file)?)?;
            let ell = ell.unwrap_or(s.k.saturating_sub(1));
            let check = is_partial_steiner(&s.edges, ell)?;
            let body = json!({ "v": s.v, "k": s.k, "ell": ell, "edges": s.edges.len(), "check": check });
            Ok(match check {
                SteinerCheck::Ok => Outcome::json(report(name, body), EXIT_OK),
                SteinerCheck::Witness { .. } => {
                    Outcome::json(report(name, body), EXIT_FOUND).with_witness("steiner.json", to_value(&check))
                }
            })
        }
    }
}
