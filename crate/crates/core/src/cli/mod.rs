//! The `ml` command line.
//!
//! Every command prints a JSON report on stdout. Exit status is 0 on
//! success, 1 when a verification fails or the solver contradicts itself,
//! and 2 for usage and input errors. Diagnostics go to stderr.

pub mod format;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cache::{self, ResultCache};
use crate::coxeter::{
    coxeter_arrangement, near_constant_table, nonnegative_offsets, signed_offsets, standard_generators,
    symmetric_peak_certificate, verify_peak_locally, CoxeterError, CoxeterSpec, CoxeterType, PeakHypothesis,
};
use crate::dermod::{exponents, full_basis, verify_saito, ExponentResult, SolverError};
use crate::explorer::{
    centers, components, membership, scan, to_csv, to_dot, Component, ExplorerError, ScanOptions, ScanResult, Window,
};
use crate::lattice::{Multiplicity, PointClass, ScanBox};
use crate::poly::{Arrangement, Derivation};
use crate::theorems::{
    basis_for, centers_index, certify_centers, certify_support, check_ball_structure, check_basis_step_and_path,
    check_covering_steps, check_independency, check_isolated_zeros, check_saito_bases, check_scan_invariants, construct_basis_between,
    overall, reconstruct_components, true_centers_near, BasisConstruction, CandidateMap, Status, ThetaTable,
    TheoremError, Verdict,
};

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input, or violated preconditions.
    Usage(String),
    /// A verification failed or a computation contradicted itself.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => write!(f, "{m}"),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::InternalInconsistency { .. } => CliError::Failed(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<ExplorerError> for CliError {
    fn from(e: ExplorerError) -> Self {
        match e {
            ExplorerError::Solver { source, .. } => source.into(),
            ExplorerError::NotUnimodal { .. } | ExplorerError::Pool(_) => CliError::Failed(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<TheoremError> for CliError {
    fn from(e: TheoremError) -> Self {
        match e {
            TheoremError::VerificationFailed { .. } | TheoremError::Pool(_) => CliError::Failed(e.to_string()),
            TheoremError::Solver(s) => s.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<CoxeterError> for CliError {
    fn from(e: CoxeterError) -> Self {
        match e {
            CoxeterError::Solver(s) => s.into(),
            CoxeterError::Explorer(x) => x.into(),
            CoxeterError::Pool(_) => CliError::Failed(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "ml", version, about = "Exact exponents of multiarrangements of lines in the plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exponents and minimal generator at one multiplicity.
    Exponents(ExponentsArgs),
    /// A homogeneous basis at one multiplicity, checked by Saito's criterion.
    Basis(PointArgs),
    /// Tabulate exponents over a box or an L1 ball.
    Scan(ScanArgs),
    /// Connected components of the support in a saved scan.
    Components(ComponentsArgs),
    /// Run structural checks on a saved scan.
    Verify(VerifyArgs),
    /// Basis at kappa built from the generators at mu and nu.
    BasisBetween(BetweenArgs),
    /// Basis at kappa built from two certified centres of a saved scan.
    BasisFor(BasisForArgs),
    /// Exponents near constant multiplicities of a Coxeter arrangement.
    Coxeter(CoxeterArgs),
    /// Inspect or clear the result cache.
    Cache(CacheArgs),
}

#[derive(Args, Debug)]
struct CacheFlags {
    /// Cache directory (default: $ML_CACHE_DIR, else .ml-cache).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long)]
    no_cache: bool,
}

impl CacheFlags {
    fn open(&self, arr: &Arrangement) -> Result<Option<ResultCache>, CliError> {
        if self.no_cache {
            return Ok(None);
        }
        let dir = self.cache_dir.clone().unwrap_or_else(cache::default_dir);
        ResultCache::open(&dir, arr)
            .map(Some)
            .map_err(|e| CliError::Usage(format!("cannot open cache {}: {e}", dir.display())))
    }
}

#[derive(Args, Debug)]
struct PointArgs {
    /// Arrangement file.
    #[arg(short, long)]
    arrangement: PathBuf,
    /// Multiplicity, comma-separated in arrangement order.
    #[arg(short, long)]
    mu: Multiplicity,
}

#[derive(Args, Debug)]
struct ExponentsArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Also compute a full basis and its Saito verdict.
    #[arg(long)]
    basis: bool,
    #[command(flatten)]
    cache: CacheFlags,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(short, long)]
    arrangement: PathBuf,
    /// Upper corner of the box [0, b1] x ... x [0, bn].
    #[arg(long = "box", value_name = "B1,..,BN", conflicts_with_all = ["center", "radius"])]
    bounds: Option<Multiplicity>,
    /// Centre of a closed L1 ball window.
    #[arg(long, requires = "radius")]
    center: Option<Multiplicity>,
    #[arg(long, requires = "center")]
    radius: Option<u64>,
    /// Worker threads (0: one per core).
    #[arg(short, long, default_value_t = 0)]
    jobs: usize,
    /// Solve only balanced points; cone points get their bound as estimate.
    #[arg(long)]
    balanced_only: bool,
    /// Output file (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    cache: CacheFlags,
}

#[derive(Args, Debug)]
struct ComponentsArgs {
    /// Scan file written by `ml scan`.
    #[arg(short, long)]
    input: PathBuf,
    /// Write the covering graph of the support in DOT format.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Write a per-point CSV table.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    Covering,
    Ball,
    Independence,
    Saito,
    Criteria,
    All,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// Inner box for the criteria round trips (default: the scan box
    /// shrunk by 2 in every coordinate).
    #[arg(long = "criteria-box", value_name = "B1,..,BN")]
    criteria_box: Option<Multiplicity>,
    #[arg(short, long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args, Debug)]
struct BetweenArgs {
    #[arg(short, long)]
    arrangement: PathBuf,
    #[arg(long)]
    mu: Multiplicity,
    #[arg(long)]
    nu: Multiplicity,
    #[arg(long)]
    kappa: Multiplicity,
}

#[derive(Args, Debug)]
struct BasisForArgs {
    /// Scan whose certified centres are used.
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long)]
    kappa: Multiplicity,
    #[arg(short, long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args, Debug)]
struct CoxeterArgs {
    #[arg(long = "type", value_name = "A1A1|A2|B2|G2")]
    kind: CoxeterType,
    /// Base multiplicity is 2k+1 on every line.
    #[arg(long, default_value_t = 0)]
    k: u32,
    /// Signed offset added to the constant multiplicity.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', conflicts_with = "all_offsets")]
    offset: Option<Vec<i64>>,
    /// Enumerate all offsets with small total.
    #[arg(long)]
    all_offsets: bool,
    /// Largest offset total for --all-offsets (default: lines - 1).
    #[arg(long, requires = "all_offsets")]
    max_offset_sum: Option<u64>,
    /// With --all-offsets, also allow negative entries (bounded by L1 norm).
    #[arg(long, requires = "all_offsets")]
    signed: bool,
    /// Certify the constant multiplicity as a ball centre from symmetry.
    #[arg(long)]
    peak: bool,
    /// Use the printed form of the lower-witness hypothesis for --peak.
    #[arg(long)]
    printed_peak: bool,
    #[arg(short, long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args, Debug)]
struct CacheArgs {
    #[arg(value_enum)]
    action: CacheAction,
    #[arg(long)]
    dir: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CacheAction {
    Inspect,
    Clear,
}

/// Parses `args` (program name first), runs the command, and returns the
/// exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(report) => {
            emit(&report);
            0
        }
        Err(e) => {
            eprintln!("ml: {e}");
            e.exit_code()
        }
    }
}

/// Prints a report on stdout. A closed pipe is not an error.
fn emit(report: &Value) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(report).expect("json");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

/// Runs one parsed command and returns its report.
fn execute(command: Command) -> Result<Value, CliError> {
    match command {
        Command::Exponents(a) => cmd_exponents(a),
        Command::Basis(a) => cmd_basis(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Components(a) => cmd_components(a),
        Command::Verify(a) => cmd_verify(a),
        Command::BasisBetween(a) => cmd_between(a),
        Command::BasisFor(a) => cmd_basis_for(a),
        Command::Coxeter(a) => cmd_coxeter(a),
        Command::Cache(a) => cmd_cache(a),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn load_arrangement(path: &Path) -> Result<Arrangement, CliError> {
    format::parse_arrangement(&read_text(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_scan(path: &Path) -> Result<ScanResult, CliError> {
    let v: Value = serde_json::from_str(&read_text(path)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    ScanResult::from_json(&v).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn check_len(arr: &Arrangement, mu: &Multiplicity) -> Result<(), CliError> {
    if mu.len() != arr.len() {
        return Err(CliError::Usage(format!(
            "multiplicity {mu} has {} entries, the arrangement has {} lines",
            mu.len(),
            arr.len()
        )));
    }
    Ok(())
}

fn derivation_json(theta: &Derivation) -> Value {
    let mut v = theta.to_json();
    v["text"] = json!(theta.to_string());
    v
}

fn result_json(mu: &Multiplicity, r: &ExponentResult) -> Value {
    json!({
        "mu": mu.entries(),
        "d1": r.d1,
        "d2": r.d2,
        "delta": r.delta,
        "non_unique": r.non_unique,
        "theta": derivation_json(&r.theta_min),
    })
}

fn basis_json(mu: &Multiplicity, first: &Derivation, second: &Derivation, arr: &Arrangement) -> (Value, bool) {
    let verdict = verify_saito(arr, mu, first, second);
    let accepted = verdict.is_accept();
    let saito = match &verdict {
        crate::dermod::SaitoVerdict::Accept => json!({"verdict": "accept"}),
        crate::dermod::SaitoVerdict::Reject(f) => json!({"verdict": "reject", "reason": f.to_string()}),
    };
    let v = json!({
        "degrees": [first.degree(), second.degree()],
        "basis": [derivation_json(first), derivation_json(second)],
        "saito": saito,
    });
    (v, accepted)
}

fn solve_cached(arr: &Arrangement, mu: &Multiplicity, flags: &CacheFlags) -> Result<ExponentResult, CliError> {
    let mut cache = flags.open(arr)?;
    if let Some(hit) = cache.as_ref().and_then(|c| c.get(mu)).and_then(|e| e.to_result(arr)) {
        return Ok(hit);
    }
    let res = exponents(arr, mu)?;
    if let Some(c) = cache.as_mut() {
        c.insert(mu, &res);
        c.flush().map_err(|e| CliError::Usage(format!("cannot write cache: {e}")))?;
    }
    Ok(res)
}

fn cmd_exponents(a: ExponentsArgs) -> Result<Value, CliError> {
    let arr = load_arrangement(&a.point.arrangement)?;
    let mu = &a.point.mu;
    check_len(&arr, mu)?;
    let res = solve_cached(&arr, mu, &a.cache)?;
    let mut report = result_json(mu, &res);
    if a.basis {
        let (first, second) = full_basis(&arr, mu)?;
        let (b, accepted) = basis_json(mu, &first, &second, &arr);
        if !accepted {
            return Err(CliError::Failed(format!("basis at {mu} rejected: {b}")));
        }
        report["basis"] = b;
    }
    Ok(report)
}

fn cmd_basis(a: PointArgs) -> Result<Value, CliError> {
    let arr = load_arrangement(&a.arrangement)?;
    check_len(&arr, &a.mu)?;
    let (first, second) = full_basis(&arr, &a.mu)?;
    let (mut b, accepted) = basis_json(&a.mu, &first, &second, &arr);
    if !accepted {
        return Err(CliError::Failed(format!("basis at {} rejected: {b}", a.mu)));
    }
    b["mu"] = json!(a.mu.entries());
    Ok(b)
}

fn cmd_scan(a: ScanArgs) -> Result<Value, CliError> {
    let arr = load_arrangement(&a.arrangement)?;
    let window = match (a.bounds, a.center, a.radius) {
        (Some(b), None, None) => Window::Box(ScanBox::new(b.entries().to_vec())),
        (None, Some(center), Some(radius)) => Window::Ball { center, radius },
        _ => return Err(CliError::Usage("give either --box or --center with --radius".into())),
    };
    let mut cache = a.cache.open(&arr)?;
    let options = ScanOptions {
        jobs: a.jobs,
        balanced_only: a.balanced_only,
    };
    let result = scan(&arr, &window, &options, cache.as_mut())?;
    if let Some(c) = cache.as_mut() {
        c.flush().map_err(|e| CliError::Usage(format!("cannot write cache: {e}")))?;
    }
    match a.output {
        Some(path) => {
            write_text(&path, &result.to_json_string())?;
            let support = result.rows().iter().filter(|r| r.delta > 0).count();
            Ok(json!({
                "output": path.display().to_string(),
                "points": result.len(),
                "support": support,
                "window": result.window().to_string(),
            }))
        }
        None => Ok(result.to_json()),
    }
}

fn component_json(c: &Component, arr: &Arrangement) -> Value {
    json!({
        "id": c.id,
        "size": c.members.len(),
        "label": c.label(arr),
        "classification": c.classification,
        "members": c.members.iter().map(|m| m.entries().to_vec()).collect::<Vec<_>>(),
    })
}

fn cmd_components(a: ComponentsArgs) -> Result<Value, CliError> {
    let s = load_scan(&a.input)?;
    let comps = components(&s);
    if let Some(path) = &a.dot {
        write_text(path, &to_dot(&s, &comps))?;
    }
    if let Some(path) = &a.csv {
        write_text(path, &to_csv(&s, &comps))?;
    }
    let arr = s.arrangement();
    Ok(json!({
        "window": s.window().to_string(),
        "points": s.len(),
        "components": comps.iter().map(|c| component_json(c, arr)).collect::<Vec<_>>(),
        "centers": centers(&comps),
    }))
}

/// The scan box shrunk by two, so that centres of the inner window keep
/// their neighbourhoods inside the scan.
fn default_criteria_window(s: &ScanResult) -> Result<Window, CliError> {
    match s.window() {
        Window::Box(b) => Ok(Window::Box(ScanBox::new(
            b.bounds().iter().map(|&v| v.saturating_sub(2)).collect(),
        ))),
        Window::Ball { .. } => Err(CliError::Usage("the criteria suite needs --criteria-box for ball scans".into())),
    }
}

fn criteria_verdicts(s: &ScanResult, comps: &[Component], thetas: &ThetaTable, window: &Window) -> Result<Vec<Verdict>, CliError> {
    let arr = s.arrangement();
    let support: Vec<(Multiplicity, Derivation)> = window
        .points()
        .into_iter()
        .filter(|p| p.classify() == PointClass::Balanced)
        .filter_map(|p| thetas.get(&p).map(|t| (p.clone(), t.clone())))
        .collect();
    let mut out = Vec::new();
    let report = certify_support(arr, &CandidateMap::new(support), window, Some(s))?;
    out.push(report.verdict);
    match true_centers_near(s, window) {
        Some(truth) => {
            let cand = truth
                .iter()
                .map(|c| {
                    thetas
                        .get(c)
                        .map(|t| (c.clone(), t.clone()))
                        .ok_or_else(|| CliError::Failed(format!("centre {c} has no generator")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            out.push(certify_centers(arr, &CandidateMap::new(cand), window, Some(s))?.verdict);
        }
        None => out.push(Verdict::skipped(
            "certify_centers",
            "center-criterion",
            "the scan does not contain every centre near the window",
        )),
    }
    out.push(reconstruct_components(s, comps, thetas).1);
    Ok(out)
}

fn cmd_verify(a: VerifyArgs) -> Result<Value, CliError> {
    let s = load_scan(&a.input)?;
    let comps = components(&s);
    let wants = |x: Suite| a.suite == Suite::All || a.suite == x;
    let needs_thetas = wants(Suite::Independence) || wants(Suite::Saito) || wants(Suite::Criteria);
    let thetas = if needs_thetas {
        Some(ThetaTable::for_scan(&s, a.jobs)?)
    } else {
        None
    };
    let mut verdicts = Vec::new();
    if wants(Suite::Covering) {
        verdicts.push(check_covering_steps(&s));
        verdicts.push(check_scan_invariants(&s));
        verdicts.push(check_isolated_zeros(&s));
    }
    if wants(Suite::Ball) {
        verdicts.push(check_ball_structure(&s, &comps));
    }
    let thetas_ref = thetas.as_ref();
    if let (true, Some(t)) = (wants(Suite::Independence), thetas_ref) {
        verdicts.push(check_basis_step_and_path(&s, &comps, t));
        verdicts.push(check_independency(&comps, t));
    }
    if let (true, Some(t)) = (wants(Suite::Saito), thetas_ref) {
        verdicts.push(check_saito_bases(&s, &comps, t, a.jobs)?);
    }
    if let (true, Some(t)) = (wants(Suite::Criteria), thetas_ref) {
        let window = match a.criteria_box {
            Some(b) => Window::Box(ScanBox::new(b.entries().to_vec())),
            None => default_criteria_window(&s)?,
        };
        verdicts.extend(criteria_verdicts(&s, &comps, t, &window)?);
    }
    let status = overall(&verdicts);
    let label = match &status {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Skipped(_) => "skipped",
    };
    let report = json!({
        "status": label,
        "verdicts": verdicts.iter().map(Verdict::to_json).collect::<Vec<_>>(),
    });
    if status == Status::Fail {
        emit(&report);
        let failed: Vec<&str> = verdicts.iter().filter(|v| v.is_fail()).map(|v| v.check.as_str()).collect();
        return Err(CliError::Failed(format!("failed checks: {}", failed.join(", "))));
    }
    Ok(report)
}

fn construction_json(b: &BasisConstruction, mu: &Multiplicity, nu: &Multiplicity, kappa: &Multiplicity) -> Value {
    let mut v = b.to_json();
    v["mu"] = json!(mu.entries());
    v["nu"] = json!(nu.entries());
    v["kappa"] = json!(kappa.entries());
    v["degrees"] = json!([b.degrees().0, b.degrees().1]);
    v["text"] = json!([b.first.to_string(), b.second.to_string()]);
    v
}

fn support_generator(arr: &Arrangement, mu: &Multiplicity) -> Result<Derivation, CliError> {
    let r = exponents(arr, mu)?;
    if r.delta == 0 {
        return Err(CliError::Usage(format!("{mu} is not in the support (delta 0)")));
    }
    Ok(r.theta_min)
}

fn cmd_between(a: BetweenArgs) -> Result<Value, CliError> {
    let arr = load_arrangement(&a.arrangement)?;
    for m in [&a.mu, &a.nu, &a.kappa] {
        check_len(&arr, m)?;
    }
    let theta_mu = support_generator(&arr, &a.mu)?;
    let theta_nu = support_generator(&arr, &a.nu)?;
    let b = construct_basis_between(&arr, &a.mu, &a.nu, &a.kappa, &theta_mu, &theta_nu, None)?;
    Ok(construction_json(&b, &a.mu, &a.nu, &a.kappa))
}

fn cmd_basis_for(a: BasisForArgs) -> Result<Value, CliError> {
    let s = load_scan(&a.input)?;
    check_len(s.arrangement(), &a.kappa)?;
    let comps = components(&s);
    let thetas = ThetaTable::for_scan(&s, a.jobs)?;
    let index = centers_index(&comps, &thetas);
    let (b, mu, nu) = basis_for(s.arrangement(), &a.kappa, &index)?;
    let owner = membership(&comps);
    let mut v = construction_json(&b, &mu, &nu, &a.kappa);
    v["components"] = json!([owner.get(&mu), owner.get(&nu)]);
    Ok(v)
}

fn cmd_coxeter(a: CoxeterArgs) -> Result<Value, CliError> {
    let spec = CoxeterSpec::new(a.kind);
    let arr = coxeter_arrangement(&spec)?;
    let n = arr.len();
    let solver = crate::dermod::Solver::new(arr.clone());
    let offsets = if a.all_offsets {
        let max = a.max_offset_sum.unwrap_or(n as u64 - 1);
        if a.signed {
            let base = 2 * a.k as i64 + 1;
            signed_offsets(n, max)
                .into_iter()
                .filter(|o| o.iter().all(|&v| base + v >= 0))
                .collect()
        } else {
            nonnegative_offsets(n, max)
        }
    } else {
        vec![a.offset.clone().unwrap_or_else(|| vec![0; n])]
    };
    let rows = near_constant_table(&solver, a.kind, a.k, &offsets, a.jobs)?;
    let mismatches = rows.iter().filter(|r| !r.matches).count();
    let printed_mismatches = rows.iter().filter(|r| !r.printed_matches).count();
    let mut report = json!({
        "type": a.kind.to_string(),
        "field": arr.field().to_string(),
        "k": a.k,
        "cases": rows.len(),
        "mismatches": mismatches,
        "printed_formula_mismatches": printed_mismatches,
        "rows": rows.iter().map(|r| {
            let mut v = r.to_json();
            v["status"] = json!(if r.matches { "match" } else { "mismatch" });
            v
        }).collect::<Vec<_>>(),
    });
    if a.peak || a.printed_peak {
        let gens = standard_generators(&spec, &arr)?;
        let base = 2 * a.k + 1;
        let mu = Multiplicity::constant(n, base);
        let nu = Multiplicity::constant(n, base + 1);
        let kappa = Multiplicity::constant(n, base - 1);
        let form = if a.printed_peak {
            PeakHypothesis::Printed
        } else {
            PeakHypothesis::Symmetric
        };
        report["peak"] = match symmetric_peak_certificate(&solver, &gens, &mu, &nu, &kappa, form) {
            Ok(cert) => {
                let local = verify_peak_locally(&arr, &cert, a.jobs)?;
                json!({
                    "center": cert.center.entries(),
                    "radius": cert.radius,
                    "hypothesis": cert.hypothesis,
                    "certificate": cert.verdict.to_json(),
                    "local_scan": local.to_json(),
                })
            }
            Err(CoxeterError::HypothesisViolated { clause }) => json!({
                "center": mu.entries(),
                "hypothesis": form,
                "status": "hypothesis_violated",
                "clause": clause,
            }),
            Err(e) => return Err(e.into()),
        };
    }
    if mismatches > 0 {
        emit(&report);
        return Err(CliError::Failed(format!("{mismatches} offsets disagree with the distance formula")));
    }
    Ok(report)
}

fn cmd_cache(a: CacheArgs) -> Result<Value, CliError> {
    let dir = a.dir.unwrap_or_else(cache::default_dir);
    let io = |e: std::io::Error| CliError::Usage(format!("{}: {e}", dir.display()));
    match a.action {
        CacheAction::Inspect => {
            let (lines, counts) = cache::inspect(&dir).map_err(io)?;
            Ok(json!({
                "dir": dir.display().to_string(),
                "entries": lines,
                "arrangements": counts.into_iter().map(|(h, c)| json!({"hash": h, "entries": c})).collect::<Vec<_>>(),
            }))
        }
        CacheAction::Clear => {
            cache::clear(&dir).map_err(io)?;
            Ok(json!({"dir": dir.display().to_string(), "cleared": true}))
        }
    }
}
