//! Command-line front end. `run` returns the exit code and the JSON report so
//! tests can drive it without a subprocess.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::cohomology::{
    build_cmatrix, contiguity_matrix_by, ic_closed_form, sample_points, verify_contiguity_algebra,
    verify_engine_vs_formula, verify_fact23, verify_lambda0_determinant, verify_skew_engine, CMatrixKind, CocycleExpr,
    CohomologyError, Engine, Generator, Method, NumMatrix,
};
use crate::config::{parse_config, ConfigError, ModuliConfig};
use crate::homology::{verify_homology_suite, Homology, HomologyError, MatrixKind, SuiteOptions};
use crate::pairing::{
    default_scenario, rw_integral_with, track_branch, verify_contiguity_integral_with, PairingError, QuadOptions,
    SegmentPath,
};
use crate::report::{IdentityCheck, IdentityReport};
use crate::suite::{run_all, SuiteError, SuiteInput};
use crate::symfield::{SymError, SymMatrix};
use crate::theta::{Theta, ThetaError};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_IDENTITY_FAILURE: i32 = 2;
pub const EXIT_INVALID_INPUT: i32 = 3;
pub const EXIT_NUMERIC_BREAKDOWN: i32 = 4;

/// Default tolerance for `cohomology pair` against a closed form.
const PAIR_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "rwkit", version, about = "Twisted (co)homology toolkit for Riemann-Wirtinger integrals")]
pub struct Cli {
    /// JSON configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Tolerance override for single-value checks and quadrature.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Write the JSON report here and print a text summary instead.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Theta function and its derivatives.
    Theta {
        #[command(subcommand)]
        cmd: ThetaCmd,
    },
    /// Intersection matrices of twisted cycles.
    Homology {
        #[command(subcommand)]
        cmd: HomologyCmd,
    },
    /// Intersection numbers of twisted cocycles.
    Cohomology {
        #[command(subcommand)]
        cmd: CohomologyCmd,
    },
    /// Numerical integrals along paths between punctures.
    Pair {
        #[command(subcommand)]
        cmd: PairCmd,
    },
    /// Run identity suites.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
}

#[derive(Debug, Subcommand)]
pub enum ThetaCmd {
    /// θ₁ or a derivative at one point; with --lambda also ρ and 𝔰.
    Eval {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        u: Complex64,
        #[arg(long, default_value_t = 0)]
        deriv: u32,
        /// Modulus when no configuration is given.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        tau: Option<Complex64>,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        lambda: Option<Complex64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum HomologyCmd {
    /// Symbolic intersection matrix by name.
    Matrix {
        #[arg(long)]
        which: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Monodromy matrix for the loop around t_p and t_q.
    Monodromy {
        p: usize,
        q: usize,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Connection matrix for t_p and 0 or infinity.
    Connection {
        p: usize,
        /// `0` or `inf`.
        #[arg(long, default_value = "0")]
        at: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Exact homology identities for n punctures.
    Verify {
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CohomologyCmd {
    /// Intersection number of two generators.
    Pair {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Numeric intersection or basis-change matrix by name.
    Matrix {
        #[arg(long)]
        which: String,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = 2)]
        q: usize,
        /// `closed` or `engine`.
        #[arg(long, default_value = "closed")]
        method: String,
    },
    /// Contiguity matrix for the shift (p+, q-).
    Contiguity {
        p: usize,
        q: usize,
        #[arg(long, default_value = "closed")]
        method: String,
    },
    /// Numeric cohomology identities for the configuration.
    Verify,
}

#[derive(Debug, Subcommand)]
pub enum PairCmd {
    /// Integrate a form along a straight path between two punctures.
    Integrate {
        /// Endpoint indices `a,b`.
        #[arg(long, default_value = "1,2")]
        path: String,
        #[arg(long, default_value = "psi:1")]
        phi: String,
    },
    /// Check a contiguity relation on integrals along a path.
    VerifyContiguity {
        p: usize,
        q: usize,
        #[arg(long, default_value = "1,2")]
        path: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// All ten acceptance criteria.
    All,
}

/// A failure before any verdict: bad input or a numeric breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub name: &'static str,
    pub message: String,
    pub code: i32,
}

impl CliError {
    fn input(name: &'static str, message: impl Into<String>) -> Self {
        Self { name, message: message.into(), code: EXIT_INVALID_INPUT }
    }

    fn numeric(name: &'static str, message: impl Into<String>) -> Self {
        Self { name, message: message.into(), code: EXIT_NUMERIC_BREAKDOWN }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        let name = match e {
            ConfigError::ParseError(_) => "ParseError",
            ConfigError::InvariantViolation(_) => "InvariantViolation",
        };
        CliError::input(name, e.to_string())
    }
}

impl From<ThetaError> for CliError {
    fn from(e: ThetaError) -> Self {
        let m = e.to_string();
        match e {
            ThetaError::InvalidTau(_) => CliError::input("InvalidTau", m),
            ThetaError::InvalidPolicy(_) => CliError::input("InvalidPolicy", m),
            ThetaError::InvalidOrder(_) => CliError::input("InvalidOrder", m),
            ThetaError::NonConvergent { .. } => CliError::numeric("NonConvergent", m),
            ThetaError::PoleAtLatticePoint(_) => CliError::numeric("PoleAtLatticePoint", m),
            ThetaError::LambdaOnLattice(_) => CliError::numeric("LambdaOnLattice", m),
        }
    }
}

impl From<SymError> for CliError {
    fn from(e: SymError) -> Self {
        let m = e.to_string();
        match e {
            SymError::DivisionByZero => CliError::numeric("DivisionByZero", m),
            SymError::SingularMatrix => CliError::numeric("SingularMatrix", m),
            SymError::DenominatorVanishes => CliError::numeric("DenominatorVanishes", m),
            SymError::DimensionMismatch(_) => CliError::input("DimensionMismatch", m),
            SymError::Parse { .. } => CliError::input("ParseError", m),
        }
    }
}

impl From<HomologyError> for CliError {
    fn from(e: HomologyError) -> Self {
        let m = e.to_string();
        match e {
            HomologyError::SizeTooSmall { .. } => CliError::input("SizeTooSmall", m),
            HomologyError::IndexOutOfRange(_) => CliError::input("IndexOutOfRange", m),
            HomologyError::PairNotTabulated(_) => CliError::input("PairNotTabulated", m),
            HomologyError::Sym(s) => s.into(),
        }
    }
}

impl From<CohomologyError> for CliError {
    fn from(e: CohomologyError) -> Self {
        use CohomologyError::*;
        let m = e.to_string();
        match e {
            ResonantExponent { .. } => CliError::numeric("ResonantExponent", m),
            MixedLambda => CliError::input("MixedLambda", m),
            LambdaMismatch(_) => CliError::input("LambdaMismatch", m),
            EtaUndefined { .. } => CliError::numeric("EtaUndefined", m),
            ShiftedLambdaOnLattice { .. } => CliError::numeric("ShiftedLambdaOnLattice", m),
            PairNotTabulated(_) => CliError::input("PairNotTabulated", m),
            IndexOutOfRange(_) => CliError::input("IndexOutOfRange", m),
            RadiusTooLarge { .. } => CliError::numeric("RadiusTooLarge", m),
            BadSampling(_) => CliError::input("BadSampling", m),
            SingularMatrix => CliError::numeric("SingularMatrix", m),
            BadGenerator(_) => CliError::input("BadGenerator", m),
            Theta(t) => t.into(),
        }
    }
}

impl From<PairingError> for CliError {
    fn from(e: PairingError) -> Self {
        use PairingError::*;
        let m = e.to_string();
        match e {
            PathTooCloseToPuncture { .. } => CliError::input("PathTooCloseToPuncture", m),
            BadPath(_) => CliError::input("BadPath", m),
            RefinementLimit { .. } => CliError::numeric("RefinementLimit", m),
            DivergentEndpoint { .. } => CliError::numeric("DivergentEndpoint", m),
            QuadratureStall { .. } => CliError::numeric("QuadratureStall", m),
            ShiftBreaksConvergence { .. } => CliError::numeric("ShiftBreaksConvergence", m),
            Cohomology(c) => c.into(),
            Theta(t) => t.into(),
        }
    }
}

impl From<SuiteError> for CliError {
    fn from(e: SuiteError) -> Self {
        match e {
            SuiteError::Homology(x) => x.into(),
            SuiteError::Cohomology(x) => x.into(),
            SuiteError::Pairing(x) => x.into(),
            SuiteError::Theta(x) => x.into(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// `re,im` or a bare real number.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected re,im, got {s:?}")),
    }
}

fn cj(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn num_matrix(m: &NumMatrix) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|k| cj(m[(i, k)])).collect())).collect())
}

fn sym_matrix(m: &SymMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|e| json!(e.to_string())).collect())).collect())
}

fn config_echo(cfg: &ModuliConfig) -> Value {
    json!({
        "tau": cj(cfg.tau()),
        "n": cfg.n(),
        "t": cfg.t.iter().map(|z| cj(*z)).collect::<Vec<_>>(),
        "c0": cj(cfg.c0),
        "c": cfg.c.iter().map(|z| cj(*z)).collect::<Vec<_>>(),
        "lambda": cj(cfg.lambda),
        "c_inf": cj(cfg.c_inf),
        "warnings": cfg.warnings(),
    })
}

fn checks_json(checks: &[IdentityCheck]) -> Value {
    serde_json::to_value(checks).expect("checks serialize")
}

struct Context {
    cfg: Option<ModuliConfig>,
    tol: Option<f64>,
    seed: u64,
}

impl Context {
    fn cfg(&self) -> CliResult<&ModuliConfig> {
        self.cfg.as_ref().ok_or_else(|| CliError::input("MissingConfig", "this command needs --config"))
    }

    fn n(&self, n: Option<usize>) -> CliResult<usize> {
        n.or(self.cfg.as_ref().map(ModuliConfig::n))
            .ok_or_else(|| CliError::input("MissingSize", "pass --n or --config"))
    }
}

fn method(s: &str) -> CliResult<Method> {
    match s.to_ascii_lowercase().as_str() {
        "closed" | "closed-form" => Ok(Method::ClosedForm),
        "engine" => Ok(Method::Engine),
        _ => Err(CliError::input("BadMethod", format!("unknown method {s:?}"))),
    }
}

fn parse_path(s: &str, cfg: &ModuliConfig) -> CliResult<SegmentPath> {
    let idx: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::input("BadPath", format!("{s:?}: {e}")))?;
    match idx.as_slice() {
        [a, b] => Ok(SegmentPath::straight(*a, *b, cfg)?),
        _ => Err(CliError::input("BadPath", format!("expected a,b, got {s:?}"))),
    }
}

fn generator(s: &str) -> CliResult<Generator> {
    Ok(s.parse::<Generator>()?)
}

/// JSON body of one command and whether every check in it passed.
struct Outcome {
    body: Value,
    passed: bool,
}

impl Outcome {
    fn value(body: Value) -> Self {
        Self { body, passed: true }
    }

    fn report(mut body: Value, rep: &IdentityReport) -> Self {
        body["checks"] = checks_json(&rep.checks);
        body["passed"] = json!(rep.all_passed());
        Self { body, passed: rep.all_passed() }
    }
}

fn dispatch(cmd: &Command, ctx: &Context) -> CliResult<Outcome> {
    match cmd {
        Command::Theta { cmd: ThetaCmd::Eval { u, deriv, tau, lambda } } => {
            let tau = match (tau, &ctx.cfg) {
                (Some(t), _) => *t,
                (None, Some(cfg)) => cfg.tau(),
                (None, None) => return Err(CliError::input("MissingConfig", "pass --tau or --config")),
            };
            let th = Theta::with_tau(tau)?;
            let value = if *deriv == 0 { th.theta1(*u)? } else { th.theta1_deriv(*u, *deriv)? };
            let mut body = json!({ "tau": cj(tau), "u": cj(*u), "deriv": deriv, "value": cj(value) });
            if let Some(lam) = lambda {
                body["rho"] = cj(th.rho(*u)?);
                body["s"] = cj(th.s_func(*u, *lam)?);
                body["lambda"] = cj(*lam);
            }
            Ok(Outcome::value(body))
        }
        Command::Homology { cmd } => homology(cmd, ctx),
        Command::Cohomology { cmd } => cohomology(cmd, ctx),
        Command::Pair { cmd } => pair(cmd, ctx),
        Command::Verify { cmd: VerifyCmd::All } => {
            let input = SuiteInput { seed: ctx.seed, extra: ctx.cfg.clone() };
            let criteria = run_all(&input)?;
            let passed = criteria.iter().all(|c| c.passed);
            let body = json!({
                "seed": ctx.seed,
                "criteria": serde_json::to_value(&criteria).expect("criteria serialize"),
                "identities": criteria.iter().map(|c| c.checks.len()).sum::<usize>(),
                "passed": passed,
            });
            Ok(Outcome { body, passed })
        }
    }
}

fn homology(cmd: &HomologyCmd, ctx: &Context) -> CliResult<Outcome> {
    match cmd {
        HomologyCmd::Matrix { which, n } => {
            let h = Homology::new(ctx.n(*n)?)?;
            let kind = MatrixKind::from_name(which).ok_or_else(|| {
                let names: Vec<&str> = MatrixKind::ALL.iter().map(MatrixKind::name).collect();
                CliError::input("UnknownMatrix", format!("{which:?}; expected one of {}", names.join(", ")))
            })?;
            let m = h.build_matrix(kind)?;
            Ok(Outcome::value(json!({ "n": h.n(), "which": kind.name(), "matrix": sym_matrix(&m) })))
        }
        HomologyCmd::Monodromy { p, q, n } => {
            let h = Homology::new(ctx.n(*n)?)?;
            let m = h.monodromy_matrix(*p, *q)?;
            Ok(Outcome::value(json!({ "n": h.n(), "p": p, "q": q, "matrix": sym_matrix(&m) })))
        }
        HomologyCmd::Connection { p, at, n } => {
            let h = Homology::new(ctx.n(*n)?)?;
            let m = match at.to_ascii_lowercase().as_str() {
                "0" | "zero" => h.connection_matrix_0(*p)?,
                "inf" | "infinity" => h.connection_matrix_inf(*p)?,
                _ => return Err(CliError::input("BadConnectionPoint", format!("{at:?}; expected 0 or inf"))),
            };
            Ok(Outcome::value(json!({ "n": h.n(), "p": p, "at": at, "matrix": sym_matrix(&m) })))
        }
        HomologyCmd::Verify { n } => {
            let n = ctx.n(*n)?;
            let rep = verify_homology_suite(n, SuiteOptions { seed: ctx.seed, ..SuiteOptions::default() })?;
            Ok(Outcome::report(json!({ "n": n }), &rep))
        }
    }
}

fn cohomology(cmd: &CohomologyCmd, ctx: &Context) -> CliResult<Outcome> {
    let cfg = ctx.cfg()?;
    match cmd {
        CohomologyCmd::Pair { a, b } => {
            let (ga, gb) = (generator(a)?, generator(b)?);
            let engine = Engine::new(cfg)?;
            let value = engine.pair(&CocycleExpr::from(ga), &CocycleExpr::from(gb))?;
            let mut body = json!({ "a": ga.to_string(), "b": gb.to_string(), "value": cj(value) });
            let tol = ctx.tol.unwrap_or(PAIR_TOL);
            match ic_closed_form(ga, gb, cfg) {
                Ok(f) => {
                    let r = (value - f).norm() / f.norm().max(1.0);
                    let mut rep = IdentityReport::new();
                    rep.push(IdentityCheck::numeric("engine vs closed form", r, tol));
                    body["closed_form"] = cj(f);
                    Ok(Outcome::report(body, &rep))
                }
                Err(CohomologyError::PairNotTabulated(_)) => {
                    body["closed_form"] = Value::Null;
                    Ok(Outcome::value(body))
                }
                Err(e) => Err(e.into()),
            }
        }
        CohomologyCmd::Matrix { which, p, q, method: m } => {
            let kind = CMatrixKind::parse(which, *p, *q).ok_or_else(|| {
                CliError::input("UnknownMatrix", format!("{which:?}; expected Cpsipsi, Cphieta, Cpsieta or A"))
            })?;
            let mat = build_cmatrix(kind, cfg, method(m)?)?;
            Ok(Outcome::value(json!({ "which": which, "p": p, "q": q, "method": m, "matrix": num_matrix(&mat) })))
        }
        CohomologyCmd::Contiguity { p, q, method: m } => {
            let s = contiguity_matrix_by(*p, *q, cfg, method(m)?)?;
            Ok(Outcome::value(json!({ "p": p, "q": q, "method": m, "matrix": num_matrix(&s) })))
        }
        CohomologyCmd::Verify => {
            let mut rep = verify_engine_vs_formula(cfg)?;
            rep.push(verify_skew_engine(cfg)?);
            if crate::config::DISTINCT_TOL < cfg.tp.lattice_distance(cfg.lambda) {
                rep.extend(verify_fact23(cfg)?);
            }
            let zero = ModuliConfig::new(cfg.tau(), cfg.t.clone(), cfg.c0, cfg.c.clone(), Complex64::new(0.0, 0.0))?;
            rep.extend(verify_engine_vs_formula(&zero)?);
            rep.extend(verify_lambda0_determinant(&zero)?);
            if cfg.n() >= 3 {
                let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(ctx.seed);
                let pts = sample_points(&mut rng, cfg, 20, 0.1);
                rep.extend(verify_contiguity_algebra(2, 3, cfg, &pts)?);
            }
            Ok(Outcome::report(json!({}), &rep))
        }
    }
}

fn pair(cmd: &PairCmd, ctx: &Context) -> CliResult<Outcome> {
    let opts = QuadOptions { tol: ctx.tol.unwrap_or(QuadOptions::default().tol), ..QuadOptions::default() };
    match cmd {
        PairCmd::Integrate { path, phi } => {
            let cfg = ctx.cfg()?;
            let path = parse_path(path, cfg)?;
            let g = generator(phi)?;
            let branch = track_branch(&path, cfg)?;
            let out = rw_integral_with(&path, &g.into(), cfg, &branch, &opts)?;
            Ok(Outcome::value(json!({
                "phi": g.to_string(),
                "path": [path.start_index, path.end_index],
                "value": cj(out.value),
                "residual": out.change,
                "levels": out.levels,
            })))
        }
        PairCmd::VerifyContiguity { p, q, path } => {
            let (cfg, path) = match &ctx.cfg {
                Some(cfg) => (cfg.clone(), parse_path(path, cfg)?),
                None => default_scenario(ctx.seed),
            };
            let out = verify_contiguity_integral_with(*p, *q, &path, &cfg, &opts)?;
            let mut rep = IdentityReport::new();
            rep.push(IdentityCheck::numeric("f(p+,q-) = S f on integrals", out.residual, crate::suite::CONTIGUITY_INTEGRAL_TOL));
            rep.push(IdentityCheck::numeric("contiguity rows hold on the path", out.pointwise, 1e-11));
            let body = json!({
                "p": p,
                "q": q,
                "path": [path.start_index, path.end_index],
                "value": out.f_shifted.iter().map(|z| cj(*z)).collect::<Vec<_>>(),
                "f": out.f.iter().map(|z| cj(*z)).collect::<Vec<_>>(),
                "residual": out.residual,
                "levels": out.levels,
                "config": config_echo(&cfg),
            });
            Ok(Outcome::report(body, &rep))
        }
    }
}

/// Runs a parsed command line: exit code and the JSON document.
pub fn run(cli: &Cli) -> (i32, Value) {
    let result = (|| -> CliResult<(i32, Value)> {
        let cfg = match &cli.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::input("ParseError", format!("{}: {e}", path.display())))?;
                Some(parse_config(&text)?)
            }
            None => None,
        };
        if let Some(t) = cli.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::input("BadTolerance", format!("{t}")));
            }
        }
        let ctx = Context { cfg, tol: cli.tol, seed: cli.seed };
        let out = dispatch(&cli.command, &ctx)?;
        let mut body = out.body;
        if let (Some(cfg), Value::Object(map)) = (&ctx.cfg, &mut body) {
            map.entry("config").or_insert_with(|| config_echo(cfg));
        }
        let code = if out.passed { EXIT_PASS } else { EXIT_IDENTITY_FAILURE };
        Ok((code, body))
    })();
    match result {
        Ok(v) => v,
        Err(e) => (e.code, json!({ "error": { "name": e.name, "message": e.message } })),
    }
}

fn check_lines(checks: &Value, indent: &str) -> Vec<String> {
    let mut lines = Vec::new();
    for c in checks.as_array().into_iter().flatten() {
        let tag = if c["passed"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
        let mut line = format!("{indent}{tag} {}", c["name"].as_str().unwrap_or(""));
        if let (Some(r), Some(t)) = (c["residual"].as_f64(), c["tolerance"].as_f64()) {
            line.push_str(&format!(" (residual {r:.3e}, tol {t:.1e})"));
        }
        if let Some(d) = c.get("detail").and_then(Value::as_str) {
            line.push_str(&format!(" [{d}]"));
        }
        lines.push(line);
    }
    lines
}

/// Text lines for `--json <file>` mode.
pub fn summary(body: &Value) -> Vec<String> {
    if let Some(err) = body.get("error") {
        return vec![format!("error {}: {}", err["name"].as_str().unwrap_or(""), err["message"].as_str().unwrap_or(""))];
    }
    if let Some(criteria) = body.get("criteria").and_then(Value::as_array) {
        let mut lines = Vec::new();
        for c in criteria {
            let tag = if c["passed"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
            lines.push(format!("{tag} criterion {}: {}", c["id"], c["title"].as_str().unwrap_or("")));
            lines.extend(check_lines(&c["checks"], "  "));
        }
        lines
    } else if let Some(checks) = body.get("checks") {
        check_lines(checks, "")
    } else {
        vec![body.to_string()]
    }
}

/// Entry point for the binary.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID_INPUT } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let (code, body) = run(&cli);
    let text = serde_json::to_string_pretty(&body).expect("report serializes");
    match &cli.json {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("cannot write {}: {e}", path.display());
                return EXIT_INVALID_INPUT;
            }
            let mut out = std::io::stdout().lock();
            for line in summary(&body) {
                if writeln!(out, "{line}").is_err() {
                    break;
                }
            }
        }
        None => {
            let _ = writeln!(std::io::stdout().lock(), "{text}");
        }
    }
    if let Some(err) = body.get("error") {
        eprintln!("error: {}", err["message"].as_str().unwrap_or(""));
    }
    code
}
