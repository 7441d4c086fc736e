//! Command-line front end.
//!
//! Exit codes: 0 success, 1 parse error, 2 precondition or validation
//! failure, 3 property violation.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::classify::{classify_all, ClassificationReport, ContractionClass};
use crate::io::{load_map, FormatError, LoadedSpace, SpaceFile};
use crate::metric::{FiniteMetricSpace, DEFAULT_TRIANGLE_TOL};
use crate::props::run_suite;
use crate::scalar::{parse_rational, Scalar};
use crate::search::{run_search, verify_witness, Generator, GoalKind, SearchGoal, Strategy};
use crate::selfmap::SelfMap;
use crate::solver::{audit_rate_bounds, picard_solve, AuditError, RateAudit, SolveReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "contraction-lab", version, about = "Contraction classes of self-maps on finite metric spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SpaceArgs {
    /// Space file: {"labels": [...], "d": [[...], ...]}
    pub space: PathBuf,
    /// Use exact rational arithmetic; refuses non-integer JSON numbers.
    #[arg(long)]
    pub exact: bool,
    /// Additive slack for the triangle inequality in float mode.
    #[arg(long, default_value_t = DEFAULT_TRIANGLE_TOL)]
    pub tol: f64,
    /// Print JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the metric axioms.
    Validate {
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Minimal constants and membership for all six classes.
    Classify {
        #[command(flatten)]
        space: SpaceArgs,
        /// Map file: {"map": [...]}
        map: PathBuf,
    },
    /// Picard iteration from one start point.
    Solve {
        #[command(flatten)]
        space: SpaceArgs,
        /// Map file: {"map": [...]}
        map: PathBuf,
        /// Index of the start point.
        #[arg(long, default_value_t = 0)]
        start: usize,
        /// Append the rate-bound audit.
        #[arg(long)]
        audit: bool,
    },
    /// Rate-bound audit along the orbit of every start point (or one).
    Audit {
        #[command(flatten)]
        space: SpaceArgs,
        /// Map file: {"map": [...]}
        map: PathBuf,
        /// Audit only this start point.
        #[arg(long)]
        start: Option<usize>,
    },
    /// Search for witnesses; prints one JSON line per witness, then a summary.
    Search {
        /// SeparateGenCFromC, OpenProblem, TwoFixedPoints or PerimeterDiscrepancy.
        #[arg(long)]
        goal: GoalKind,
        /// Point count `n` or range `lo..hi` (inclusive).
        #[arg(long, default_value = "3", value_parser = parse_points)]
        points: RangeInclusive<usize>,
        /// Comma-separated distance grid for exhaustive search, e.g. 1,4 or 1/2,1.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<String>>,
        /// Seed for randomized search.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Randomized trials; used when no grid is given.
        #[arg(long)]
        trials: Option<u64>,
        /// Randomized instance distribution: repaired, lattice or alternating.
        #[arg(long, default_value = "alternating")]
        generator: Generator,
        /// Maximum number of (space, map) instances to evaluate.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        /// Emit one witness per relabeling and scaling class.
        #[arg(long)]
        dedupe: bool,
    },
    /// Randomized property suite.
    Props {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Exact-arithmetic instances; defaults to a tenth of the trials.
        #[arg(long)]
        exact_trials: Option<u64>,
        /// Directory for minimized reproducers of violations.
        #[arg(long, default_value = "props-reproducers")]
        out: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

fn parse_points(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected a point count like 3 or a range like 3..5, got {s:?}");
    let parts: Vec<&str> = s.split(['.', '-', '=']).filter(|p| !p.is_empty()).collect();
    let nums: Vec<usize> = parts.iter().map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    match nums[..] {
        [n] => Ok(n..=n),
        [lo, hi] => Ok(lo..=hi),
        _ => Err(bad()),
    }
}

/// A failed command with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Failure { code: EXIT_PARSE, message: message.into() }
    }

    fn precondition(message: impl Into<String>) -> Self {
        Failure { code: EXIT_PRECONDITION, message: message.into() }
    }

    fn violation(message: impl Into<String>) -> Self {
        Failure { code: EXIT_VIOLATION, message: message.into() }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::FloatInExactMode(..) => Failure::precondition(e.to_string()),
            other => Failure::parse(other.to_string()),
        }
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (program name first), runs the command, and returns the
/// exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Validate { space } => cmd_validate(&space, out),
        Command::Classify { space, map } => {
            let (s, f) = load_pair(&space, &map)?;
            match s {
                LoadedSpace::Float(s) => cmd_classify(&s, &f, space.json, out),
                LoadedSpace::Exact(s) => cmd_classify(&s, &f, space.json, out),
            }
        }
        Command::Solve { space, map, start, audit } => {
            let (s, f) = load_pair(&space, &map)?;
            match s {
                LoadedSpace::Float(s) => cmd_solve(&s, &f, start, audit, space.json, out),
                LoadedSpace::Exact(s) => cmd_solve(&s, &f, start, audit, space.json, out),
            }
        }
        Command::Audit { space, map, start } => {
            let (s, f) = load_pair(&space, &map)?;
            match s {
                LoadedSpace::Float(s) => cmd_audit(&s, &f, start, space.json, out),
                LoadedSpace::Exact(s) => cmd_audit(&s, &f, start, space.json, out),
            }
        }
        Command::Search { goal, points, grid, seed, trials, generator, budget, dedupe } => {
            let strategy = match (grid, trials) {
                (Some(values), _) => {
                    let grid = values
                        .iter()
                        .map(|v| parse_rational(v.trim()).ok_or_else(|| Failure::parse(format!("bad grid value {v:?}"))))
                        .collect::<Result<Vec<_>, _>>()?;
                    Strategy::Exhaustive { grid }
                }
                (None, Some(trials)) => Strategy::Randomized { seed, trials, generator },
                (None, None) => return Err(Failure::precondition("search needs --grid or --trials")),
            };
            cmd_search(&SearchGoal { kind: goal, n_range: points, strategy }, budget, dedupe, out)
        }
        Command::Props { trials, seed, exact_trials, out: dir, json } => {
            if trials == 0 {
                return Err(Failure::precondition("--trials must be at least 1"));
            }
            cmd_props(trials, seed, exact_trials.unwrap_or(trials / 10), &dir, json, out)
        }
    }
}

fn io_err(e: std::io::Error) -> Failure {
    Failure::parse(format!("write failed: {e}"))
}

fn load_space(args: &SpaceArgs) -> Result<LoadedSpace, Failure> {
    let file = SpaceFile::load(&args.space)?;
    file.validate(args.exact, args.tol)?
        .map_err(|e| Failure::precondition(format!("{}: {e}", e.name())))
}

fn load_pair(args: &SpaceArgs, map: &Path) -> Result<(LoadedSpace, SelfMap), Failure> {
    let space = load_space(args)?;
    let f = load_map(map)?;
    f.check_len(space.len()).map_err(|e| Failure::precondition(e.to_string()))?;
    Ok((space, f))
}

fn cmd_validate(args: &SpaceArgs, out: &mut dyn Write) -> CmdResult {
    let file = SpaceFile::load(&args.space)?;
    let result = file.validate(args.exact, args.tol)?;
    let (n, mode) = match &result {
        Ok(LoadedSpace::Float(s)) => (s.len(), "float"),
        Ok(LoadedSpace::Exact(s)) => (s.len(), "exact"),
        Err(_) => (file.entries.len(), if args.exact || file.has_rational_entries() { "exact" } else { "float" }),
    };
    match result {
        Ok(_) => {
            if args.json {
                writeln!(out, "{}", json!({ "valid": true, "n": n, "mode": mode })).map_err(io_err)?;
            } else {
                writeln!(out, "valid metric space on {n} points ({mode} arithmetic)").map_err(io_err)?;
            }
            Ok(EXIT_OK)
        }
        Err(e) => {
            if args.json {
                let v = json!({
                    "valid": false, "n": n, "mode": mode,
                    "error": e.name(), "indices": e.indices(), "message": e.to_string(),
                });
                writeln!(out, "{v}").map_err(io_err)?;
            } else {
                writeln!(out, "invalid: {}: {e}", e.name()).map_err(io_err)?;
            }
            Ok(EXIT_PRECONDITION)
        }
    }
}

fn tuple_labels<S: Scalar>(space: &FiniteMetricSpace<S>, tuple: &[usize]) -> String {
    let parts: Vec<String> = tuple.iter().map(|&i| space.label(i)).collect();
    format!("({})", parts.join(", "))
}

fn report_table<S: Scalar>(space: &FiniteMetricSpace<S>, report: &ClassificationReport<S>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<22} {:<24} {:<9} {:<6} argmax", "class", "constant", "threshold", "member");
    for v in report.verdicts() {
        let threshold = threshold_text(v.class);
        let member = if v.member { "yes" } else { "no" };
        let _ = writeln!(
            s,
            "{:<22} {:<24} {:<9} {:<6} {}",
            v.class.name(),
            v.constant.to_string(),
            threshold,
            member,
            tuple_labels(space, &v.argmax)
        );
    }
    s
}

fn classify_checked<S: Scalar>(space: &FiniteMetricSpace<S>, f: &SelfMap) -> Result<ClassificationReport<S>, Failure> {
    classify_all(space, f).map_err(|e| Failure::precondition(e.to_string()))
}

fn cmd_classify<S: Scalar>(space: &FiniteMetricSpace<S>, f: &SelfMap, json: bool, out: &mut dyn Write) -> CmdResult {
    let report = classify_checked(space, f)?;
    if json {
        writeln!(out, "{}", serde_json::to_string(&report).expect("serializable")).map_err(io_err)?;
    } else {
        write!(out, "{}", report_table(space, &report)).map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

fn orbit_text<S: Scalar>(space: &FiniteMetricSpace<S>, iterates: &[usize]) -> String {
    iterates.iter().map(|&i| space.label(i)).collect::<Vec<_>>().join(" -> ")
}

fn audit_lines<S: Scalar>(audit: &RateAudit<S>) -> String {
    let verdict = |b: bool| if b { "holds" } else { "FAILS" };
    let mut s = String::new();
    let _ = writeln!(s, "audit: alpha = {}, a = max(a_1, a_2) = {}", audit.alpha, audit.a_cap);
    for st in &audit.steps {
        let k = st.n + 2;
        let _ = writeln!(
            s,
            "  n = {}: a_{k} <= alpha * max(a_{}, a_{}) {}; a_{k} <= alpha^({k}/2 - 1) * a {}",
            st.n,
            st.n,
            st.n + 1,
            verdict(st.step_bound),
            verdict(st.power_bound)
        );
    }
    for c in &audit.cauchy {
        let _ = writeln!(s, "  cauchy n = {}, p = {}: {}", c.n, c.p, verdict(c.holds));
    }
    s
}

fn audit_note(e: &AuditError) -> String {
    format!("audit: not applicable ({e})")
}

fn solve_checked<S: Scalar>(space: &FiniteMetricSpace<S>, f: &SelfMap, start: usize) -> Result<SolveReport<S>, Failure> {
    picard_solve(space, f, start).map_err(|e| Failure::precondition(e.to_string()))
}

/// Exit code for a solve report: a violation when the hypotheses hold but
/// the theorem's conclusion or an audited bound fails.
fn solve_verdict<S: Scalar>(space: &FiniteMetricSpace<S>, r: &SolveReport<S>) -> i32 {
    if !r.hypotheses.hold() {
        return EXIT_OK;
    }
    let converged = r.fixed_point.is_some() && r.steps <= space.len();
    let audit_ok = r.bound_audit.as_ref().is_none_or(RateAudit::all_hold);
    if converged && audit_ok {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}

fn cmd_solve<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    f: &SelfMap,
    start: usize,
    audit: bool,
    json: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let r = solve_checked(space, f, start)?;
    let code = solve_verdict(space, &r);
    let audit_result = audit.then(|| audit_rate_bounds(space, &r.trace));
    if json {
        let mut v = serde_json::to_value(&r).expect("serializable");
        v["labels"] = json!((0..space.len()).map(|i| space.label(i)).collect::<Vec<_>>());
        if let Some(Err(e)) = &audit_result {
            v["audit_error"] = json!(e.to_string());
        }
        writeln!(out, "{v}").map_err(io_err)?;
        return Ok(code);
    }
    let h = &r.hypotheses;
    let mut s = String::new();
    match h.period_two_witness {
        None => {
            let _ = writeln!(s, "hypothesis (i) no point of prime period 2: holds");
        }
        Some(w) => {
            let _ = writeln!(
                s,
                "hypothesis (i) no point of prime period 2: fails ({} <-> {})",
                space.label(w),
                space.label(f.apply(w))
            );
        }
    }
    let rel = if h.generalized_chatterjea { "<" } else { ">=" };
    let _ = writeln!(
        s,
        "hypothesis (ii) generalized Chatterjea constant {} {rel} 1/3: {}",
        h.gamma,
        if h.generalized_chatterjea { "holds" } else { "fails" }
    );
    let _ = writeln!(s, "orbit: {}", orbit_text(space, &r.trace.iterates));
    match r.fixed_point {
        Some(p) => {
            let plural = if r.steps == 1 { "" } else { "s" };
            let _ = writeln!(s, "fixed point {} reached in {} step{plural}", space.label(p), r.steps);
        }
        None => {
            let _ = writeln!(s, "cycle detected after {} steps, no fixed point", r.steps);
        }
    }
    if !h.hold() {
        let _ = writeln!(s, "hypotheses fail: no convergence claim");
    }
    match audit_result {
        Some(Ok(a)) => s.push_str(&audit_lines(&a)),
        Some(Err(e)) => {
            let _ = writeln!(s, "{}", audit_note(&e));
        }
        None => {}
    }
    write!(out, "{s}").map_err(io_err)?;
    Ok(code)
}

fn cmd_audit<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    f: &SelfMap,
    start: Option<usize>,
    json: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let starts: Vec<usize> = match start {
        Some(s) => vec![s],
        None => (0..space.len()).collect(),
    };
    let mut code = EXIT_OK;
    let mut docs = Vec::new();
    let mut text = String::new();
    for st in starts {
        let r = solve_checked(space, f, st)?;
        if !r.hypotheses.hold() {
            return Err(Failure::precondition(format!(
                "hypotheses fail (no prime period 2: {}, generalized Chatterjea constant {} < 1/3: {}); nothing to audit",
                r.hypotheses.no_prime_period_two, r.hypotheses.gamma, r.hypotheses.generalized_chatterjea
            )));
        }
        code = code.max(solve_verdict(space, &r));
        let audit = audit_rate_bounds(space, &r.trace);
        let _ = writeln!(text, "start {}: orbit {}", space.label(st), orbit_text(space, &r.trace.iterates));
        match &audit {
            Ok(a) => {
                if !a.all_hold() {
                    code = EXIT_VIOLATION;
                }
                text.push_str(&audit_lines(a));
                docs.push(json!({ "start": st, "iterates": r.trace.iterates, "audit": a }));
            }
            Err(e) => {
                let _ = writeln!(text, "{}", audit_note(e));
                docs.push(json!({ "start": st, "iterates": r.trace.iterates, "audit": null, "reason": e.to_string() }));
            }
        }
    }
    if json {
        writeln!(out, "{}", serde_json::Value::Array(docs)).map_err(io_err)?;
    } else {
        write!(out, "{text}").map_err(io_err)?;
    }
    Ok(code)
}

fn cmd_search(goal: &SearchGoal, budget: u64, dedupe: bool, out: &mut dyn Write) -> CmdResult {
    let mut write_err = None;
    let mut unverified = 0u64;
    let summary = run_search(goal, budget, dedupe, |w| {
        if !verify_witness(w) {
            unverified += 1;
        }
        if write_err.is_none() {
            if let Err(e) = writeln!(out, "{}", serde_json::to_string(w).expect("serializable")) {
                write_err = Some(e);
            }
        }
    })
    .map_err(|e| Failure::precondition(e.to_string()))?;
    if let Some(e) = write_err {
        return Err(io_err(e));
    }
    writeln!(out, "{}", json!({ "summary": summary })).map_err(io_err)?;
    if unverified > 0 {
        return Err(Failure::violation(format!("{unverified} witness certificates failed to re-verify")));
    }
    Ok(EXIT_OK)
}

fn cmd_props(trials: u64, seed: u64, exact_trials: u64, dir: &Path, json: bool, out: &mut dyn Write) -> CmdResult {
    let mut summary = run_suite(seed, trials, exact_trials);
    for v in &mut summary.violations {
        v.write_reproducer(dir).map_err(|e| Failure::parse(format!("{}: {e}", dir.display())))?;
    }
    if json {
        writeln!(out, "{}", serde_json::to_string(&summary).expect("serializable")).map_err(io_err)?;
    } else {
        let mut s = String::new();
        for (name, t) in [("float", &summary.float), ("exact", &summary.exact)] {
            let _ = writeln!(
                s,
                "{name}: {} instances, {} meet both hypotheses, {} orbits audited ({} checks), {} oracle checks",
                t.instances, t.hypotheses_hold, t.orbits_audited, t.audit_checks, t.oracle_checks
            );
            let _ = writeln!(
                s,
                "  antecedents: c_C < 1/3 {}, c_P < 1/2 {}, c_K < 1 {}, asymptotically regular {}",
                t.chatterjea_antecedent, t.perimeter_antecedent, t.gen_kannan_antecedent, t.asymptotically_regular
            );
            let _ = writeln!(
                s,
                "  1/4 <= c_P < 1/2: {} instances, {} with c_G >= 1/3",
                t.perimeter_quarter_band, t.perimeter_band_not_generalized
            );
        }
        for p in crate::props::Property::ALL {
            let _ = writeln!(s, "{:<32} {} violations", p.slug(), summary.violation_count(p));
        }
        for v in &summary.violations {
            let _ = writeln!(s, "violation {} in {} instance {}: {}", v.property, v.corpus, v.index, v.detail);
            for f in &v.files {
                let _ = writeln!(s, "  reproducer {f}");
            }
        }
        write!(out, "{s}").map_err(io_err)?;
    }
    Ok(if summary.passed() { EXIT_OK } else { EXIT_VIOLATION })
}

fn threshold_text(class: ContractionClass) -> String {
    let (num, den) = class.threshold_ratio();
    if den == 1 {
        num.to_string()
    } else {
        format!("{num}/{den}")
    }
}
