//! Command-line front end. Every command produces a report that embeds the
//! effective configuration and tool version, rendered as text, JSON or CSV.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::constants::{
    optimize_family, schmincke_map, ConstantsError, InequalityFamily, SchminckeInput,
};
use crate::form::{cauchy_relax, reduce_to_form, FormError, RelaxDirection};
use crate::localization::{
    build_w0, form_bound_check, morgan_ledger, partition_functionals, rellich_constant, uniform_grid, BumpPartition,
    LocalizationError, MorganLedger, SingularPotentialW0,
};
use crate::operator::{adjoint, compose, make_operator, HalfLineOperator, OperatorFamily};
use crate::quadrature::catalog::{
    default_dimensions, profile_suite_seeded, verify_inequality, CatalogError, InequalityId, Params, Suite,
    VerificationReport,
};
use crate::quadrature::sharpness::{sharpness_sweep, DEFAULT_WIDTHS};
use crate::symbolic::{int, parse_poly, AlgebraicNumber, Bindings, ParamPolynomial, Rational, Symbol};

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "rellich", version, about = "Factorization workbench for Hardy and Rellich type inequalities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalOpts {
    /// Relative residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Write the report here (atomically) instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed of the random profile suite.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Append decimal approximations with this many digits.
    #[arg(long, global = true)]
    pub decimals: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// `--dim`: an integer, or `symbolic` to keep `n` free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Dim {
    Symbolic,
    Value(u32),
}

impl FromStr for Dim {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "symbolic" | "n" => Ok(Dim::Symbolic),
            _ => s
                .parse::<u32>()
                .ok()
                .filter(|n| *n >= 1)
                .map(Dim::Value)
                .ok_or_else(|| format!("expected a positive integer or `symbolic`, got {s:?}")),
        }
    }
}

impl std::fmt::Display for Dim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Dim::Symbolic => f.write_str("symbolic"),
            Dim::Value(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OperatorArgs {
    /// Coefficient α, a polynomial expression (default: symbolic).
    #[arg(long, default_value = "alpha")]
    pub alpha: String,
    /// Coefficient β, a polynomial expression (default: symbolic).
    #[arg(long, default_value = "beta")]
    pub beta: String,
    #[arg(long, default_value = "symbolic")]
    pub dim: Dim,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal form of T⁺T for T = −Δ + α|x|^-2 D + β|x|^-2.
    Factorize(OperatorArgs),
    /// Formal adjoint of T.
    Adjoint(OperatorArgs),
    /// Quadratic form of T⁺T and its Cauchy relaxations.
    Reduce(OperatorArgs),
    /// Best constant of an inequality family.
    Optimize {
        #[arg(long)]
        family: InequalityFamily,
        #[arg(long)]
        dim: Option<u32>,
    },
    /// The one-parameter gradient/value family, from α or s.
    Schmincke {
        #[arg(long)]
        dim: u32,
        #[arg(long, conflicts_with = "s")]
        alpha: Option<String>,
        #[arg(long)]
        s: Option<String>,
    },
    /// Residual verification of catalog inequalities on a profile suite.
    Verify {
        /// Catalog id; every entry when omitted.
        #[arg(long)]
        inequality: Option<InequalityId>,
        #[arg(long)]
        dim: Option<u32>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long)]
        s: Option<String>,
        /// Logarithm depth of the iterated-logarithm entry.
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, default_value = "default")]
        profiles: Suite,
    },
    /// Ratio sweep on power profiles of growing logarithmic width.
    Sharpness {
        #[arg(long)]
        inequality: InequalityId,
        #[arg(long)]
        dim: Option<u32>,
        /// Comma-separated increasing widths.
        #[arg(long, value_delimiter = ',')]
        widths: Option<Vec<f64>>,
    },
    /// Partition of unity on the lattice {−k, …, k}ⁿ.
    Partition {
        #[arg(long, default_value_t = 2)]
        dim: u32,
        #[arg(long, default_value_t = 2)]
        extent: u32,
        /// Grid nodes per axis.
        #[arg(long, default_value_t = 100)]
        grid: usize,
    },
    /// Constant flow (a, b, c, d, e) → (acd, ace + bc).
    Ledger {
        /// Defaults to γ/[n(n−4)/4]².
        #[arg(long)]
        a: Option<String>,
        #[arg(long, default_value = "0")]
        b: String,
        #[arg(long, default_value = "1")]
        c: String,
        #[arg(long, default_value = "1")]
        d: String,
        #[arg(long, default_value = "0")]
        e: String,
        #[arg(long, default_value = "1")]
        gamma: String,
        #[arg(long, default_value_t = 5)]
        dim: u32,
    },
    /// Single-center strongly singular potential with admissibility gate.
    W0 {
        #[arg(long, default_value_t = 5)]
        dim: u32,
        #[arg(long, default_value = "1")]
        gamma: String,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// Comma-separated evaluation point.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Option<Vec<f64>>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Factorize(_) => "factorize",
            Command::Adjoint(_) => "adjoint",
            Command::Reduce(_) => "reduce",
            Command::Optimize { .. } => "optimize",
            Command::Schmincke { .. } => "schmincke",
            Command::Verify { .. } => "verify",
            Command::Sharpness { .. } => "sharpness",
            Command::Partition { .. } => "partition",
            Command::Ledger { .. } => "ledger",
            Command::W0 { .. } => "w0",
        }
    }

    /// Effective parameter bindings, defaults included.
    fn bindings(&self) -> BTreeMap<String, String> {
        let mut b = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            b.insert(k.to_string(), v);
        };
        match self {
            Command::Factorize(o) | Command::Adjoint(o) | Command::Reduce(o) => {
                put("alpha", o.alpha.clone());
                put("beta", o.beta.clone());
                put("dim", o.dim.to_string());
            }
            Command::Optimize { family, dim } => {
                put("family", family.to_string());
                put("dim", dim.map_or("default".into(), |d| d.to_string()));
            }
            Command::Schmincke { dim, alpha, s } => {
                put("dim", dim.to_string());
                if let Some(a) = alpha {
                    put("alpha", a.clone());
                }
                put("s", s.clone().unwrap_or_else(|| if alpha.is_some() { "derived".into() } else { "0".into() }));
            }
            Command::Verify {
                inequality,
                dim,
                alpha,
                beta,
                s,
                m,
                profiles,
            } => {
                put("inequality", inequality.map_or("all".into(), |i| i.label().into()));
                put("dim", dim.map_or("default".into(), |d| d.to_string()));
                for (k, v) in [("alpha", alpha), ("beta", beta), ("s", s)] {
                    if let Some(v) = v {
                        put(k, v.clone());
                    }
                }
                if let Some(m) = m {
                    put("m", m.to_string());
                }
                put("profiles", profiles.to_string());
            }
            Command::Sharpness { inequality, dim, widths } => {
                put("inequality", inequality.label().into());
                put("dim", dim.map_or("default".into(), |d| d.to_string()));
                let w = widths.clone().unwrap_or(DEFAULT_WIDTHS.to_vec());
                put("widths", w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
            }
            Command::Partition { dim, extent, grid } => {
                put("dim", dim.to_string());
                put("extent", extent.to_string());
                put("grid", grid.to_string());
            }
            Command::Ledger { a, b: bb, c, d, e, gamma, dim } => {
                put("a", a.clone().unwrap_or_else(|| "gamma/[n(n-4)/4]^2".into()));
                put("b", bb.clone());
                put("c", c.clone());
                put("d", d.clone());
                put("e", e.clone());
                put("gamma", gamma.clone());
                put("dim", dim.to_string());
            }
            Command::W0 { dim, gamma, delta, point } => {
                put("dim", dim.to_string());
                put("gamma", gamma.clone());
                put("delta", delta.to_string());
                if let Some(p) = point {
                    put("point", p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
                }
            }
        }
        b
    }
}

/// Effective configuration recorded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub bindings: BTreeMap<String, String>,
    pub tol: f64,
    pub out: Option<String>,
    pub format: Format,
    pub seed: u64,
    pub decimals: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Constants(#[from] ConstantsError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Localization(#[from] LocalizationError),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    /// Usage, constraint and I/O errors exit with 2.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Result of one command before rendering.
struct Outcome {
    text: String,
    result: Value,
    csv: Option<String>,
    /// `false` when a verification found a genuine violation.
    pass: bool,
}

impl Outcome {
    fn ok(text: String, result: Value) -> Self {
        Outcome {
            text,
            result,
            csv: None,
            pass: true,
        }
    }
}

/// Text, exit code and diagnostics of a finished invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` and runs the command; never exits the process.
pub fn run<I, T>(argv: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Invocation { code, stdout: text, stderr: String::new() }
            } else {
                Invocation { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok((code, stdout)) => Invocation {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Invocation {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn execute(cli: &Cli) -> Result<(i32, String), CliError> {
    let g = &cli.global;
    if !(g.tol.is_finite() && g.tol >= 0.0) {
        return Err(CliError::Usage(format!("--tol must be a finite non-negative number, got {}", g.tol)));
    }
    let config = RunConfig {
        command: cli.command.name().into(),
        bindings: cli.command.bindings(),
        tol: g.tol,
        out: g.out.as_ref().map(|p| p.display().to_string()),
        format: g.format,
        seed: g.seed,
        decimals: g.decimals,
    };
    let outcome = dispatch(&cli.command, g)?;
    let rendered = match g.format {
        Format::Text => {
            let cfg = serde_json::to_string(&config).expect("serializable config");
            format!("{TOOL} {VERSION}\nconfig: {cfg}\n\n{}", outcome.text)
        }
        Format::Json => {
            let report = json!({
                "tool": TOOL,
                "version": VERSION,
                "config": config,
                "result": outcome.result,
                "pass": outcome.pass,
            });
            serde_json::to_string_pretty(&report).expect("serializable report") + "\n"
        }
        Format::Csv => outcome
            .csv
            .ok_or_else(|| CliError::Usage(format!("`{}` has no CSV output; use text or json", config.command)))?,
    };
    let code = if outcome.pass { 0 } else { 1 };
    match &g.out {
        Some(path) => {
            write_atomic(path, &rendered)?;
            Ok((code, format!("wrote {}\n", path.display())))
        }
        None => Ok((code, rendered)),
    }
}

/// Writes through a temporary file in the target directory and renames it.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn poly_arg(name: &str, src: &str) -> Result<ParamPolynomial, CliError> {
    parse_poly(src).map_err(|e| CliError::Usage(format!("--{name} {src:?}: {e}")))
}

fn rational_arg(name: &str, src: &str) -> Result<Rational, CliError> {
    let p = poly_arg(name, src)?;
    p.as_constant()
        .ok_or_else(|| CliError::Usage(format!("--{name} must be a number, got {src:?}")))
}

fn annotate(x: &AlgebraicNumber, decimals: Option<usize>) -> String {
    match decimals {
        Some(k) => format!("{x} ≈ {}", x.decimal(k)),
        None => x.to_string(),
    }
}

fn annotate_rational(r: &Rational, decimals: Option<usize>) -> String {
    annotate(&AlgebraicNumber::rational(r.clone()), decimals)
}

fn dispatch(cmd: &Command, g: &GlobalOpts) -> Result<Outcome, CliError> {
    match cmd {
        Command::Factorize(o) => factorize(o, false),
        Command::Adjoint(o) => factorize(o, true),
        Command::Reduce(o) => reduce(o),
        Command::Optimize { family, dim } => optimize(*family, *dim, g.decimals),
        Command::Schmincke { dim, alpha, s } => schmincke(*dim, alpha.as_deref(), s.as_deref(), g.decimals),
        Command::Verify {
            inequality,
            dim,
            alpha,
            beta,
            s,
            m,
            profiles,
        } => {
            let mut params = Params::new();
            for (k, v) in [("alpha", alpha), ("beta", beta), ("s", s)] {
                if let Some(v) = v {
                    params.insert(k.into(), rational_arg(k, v)?);
                }
            }
            if let Some(m) = m {
                params.insert("m".into(), int(*m as i64));
            }
            verify(*inequality, *dim, &params, *profiles, g)
        }
        Command::Sharpness { inequality, dim, widths } => sharpness(*inequality, *dim, widths.as_deref(), g.tol),
        Command::Partition { dim, extent, grid } => partition(*dim, *extent, *grid),
        Command::Ledger { a, b, c, d, e, gamma, dim } => {
            let a = match a {
                Some(a) => rational_arg("a", a)?,
                None => rational_arg("gamma", gamma)? / rellich_constant(*dim),
            };
            ledger(a, rational_arg("b", b)?, rational_arg("c", c)?, rational_arg("d", d)?, rational_arg("e", e)?, g.decimals)
        }
        Command::W0 { dim, gamma, delta, point } => w0(*dim, rational_arg("gamma", gamma)?, *delta, point.as_deref()),
    }
}

fn n_bindings(dim: Dim) -> Bindings {
    let mut b = Bindings::new();
    if let Dim::Value(n) = dim {
        b.insert(Symbol::N, int(n as i64));
    }
    b
}

fn factorize(o: &OperatorArgs, adjoint_only: bool) -> Result<Outcome, CliError> {
    let alpha = poly_arg("alpha", &o.alpha)?;
    let beta = poly_arg("beta", &o.beta)?;
    let t = make_operator(&OperatorFamily::TAlphaBeta { alpha, beta }).map_err(|e| CliError::Usage(e.to_string()))?;
    let nb = n_bindings(o.dim);
    let ta = adjoint(&t).specialize(&nb);
    let mut text = String::new();
    let mut result = json!({ "T": t.to_string(), "adjoint": ta.to_string() });
    writeln!(text, "T  = {t}").unwrap();
    writeln!(text, "T⁺ = {ta}").unwrap();
    if !adjoint_only {
        let tt = compose(&ta, &t.specialize(&nb));
        writeln!(text, "T⁺T = {tt}").unwrap();
        result["normal_form"] = json!(tt.to_string());
        if o.dim == Dim::Value(1) {
            let h = HalfLineOperator::from_expr(&tt);
            writeln!(text, "on the half-line: T⁺T = {h}").unwrap();
            result["half_line"] = json!(h.to_string());
        }
    }
    Ok(Outcome::ok(text, result))
}

fn reduce(o: &OperatorArgs) -> Result<Outcome, CliError> {
    let alpha = poly_arg("alpha", &o.alpha)?;
    let beta = poly_arg("beta", &o.beta)?;
    let t = make_operator(&OperatorFamily::TAlphaBeta { alpha, beta }).map_err(|e| CliError::Usage(e.to_string()))?;
    let nb = n_bindings(o.dim);
    let q = reduce_to_form(&compose(&adjoint(&t), &t))?.eval_subst(&nb);
    let mut text = String::new();
    writeln!(text, "form:       {q} ≥ 0").unwrap();
    writeln!(text, "inequality: {}", q.inequality_statement()).unwrap();
    let mut result = json!({ "form": q.to_string(), "inequality": q.inequality_statement() });
    let mut relaxed = Vec::new();
    for (dir, name) in [(RelaxDirection::EulToGrad, "euler_to_gradient"), (RelaxDirection::GradToEul, "gradient_to_euler")] {
        match cauchy_relax(&q, dir, 2) {
            Ok((r, cond)) => {
                writeln!(text, "relaxed ({name}): {}  provided {cond}", r.inequality_statement()).unwrap();
                relaxed.push(json!({ "direction": name, "inequality": r.inequality_statement(), "condition": cond.to_string() }));
            }
            Err(FormError::MissingBasis(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    result["relaxed"] = Value::Array(relaxed);
    if o.dim == Dim::Value(1) {
        let h = q.half_line_canonical();
        writeln!(text, "half-line:  {}", h.inequality_statement()).unwrap();
        result["half_line"] = json!(h.inequality_statement());
    }
    Ok(Outcome::ok(text, result))
}

fn optimize(family: InequalityFamily, dim: Option<u32>, decimals: Option<usize>) -> Result<Outcome, CliError> {
    let n = match (dim, family.fixed_dimension()) {
        (Some(d), Some(f)) if d as i64 != f => {
            return Err(CliError::Usage(format!("family {family} is stated for n = {f} only")))
        }
        (Some(d), _) => d as i64,
        (None, Some(f)) => f,
        (None, None) => return Err(CliError::Usage(format!("family {family} needs --dim"))),
    };
    let r = optimize_family(family, &int(n))?;
    let maximizers: Vec<String> = r.maximizers.iter().map(|m| annotate(m, decimals)).collect();
    let value = match decimals {
        Some(k) => format!("{} ≈ {}", r.max_value, r.max_value.decimal(k)),
        None => r.max_value.to_string(),
    };
    let mut text = String::new();
    writeln!(text, "family:      {family} (n = {n})").unwrap();
    writeln!(text, "objective:   {}", r.objective.to_param(Symbol::Alpha)).unwrap();
    writeln!(text, "constraint:  α ∈ {}", r.constraint).unwrap();
    writeln!(text, "maximizers:  {}", maximizers.join(", ")).unwrap();
    writeln!(text, "value:       {value}").unwrap();
    writeln!(text, "boundary:    {}", r.boundary_attained).unwrap();
    writeln!(text, "certificate: {}", r.certificate()).unwrap();
    let result = json!({
        "family": family.to_string(),
        "n": n,
        "objective": r.objective.to_param(Symbol::Alpha).to_string(),
        "constraint": r.constraint.to_string(),
        "maximizers": maximizers,
        "value": value,
        "boundary_attained": r.boundary_attained,
        "certificate": r.certificate(),
    });
    Ok(Outcome::ok(text, result))
}

fn schmincke(dim: u32, alpha: Option<&str>, s: Option<&str>, decimals: Option<usize>) -> Result<Outcome, CliError> {
    let input = match (alpha, s) {
        (Some(a), _) => SchminckeInput::Alpha(rational_arg("alpha", a)?),
        (None, Some(s)) => SchminckeInput::S(rational_arg("s", s)?),
        (None, None) => SchminckeInput::S(int(0)),
    };
    let r = schmincke_map(input, &int(dim as i64)).map_err(|e| match e {
        ConstantsError::Constraint(m) => CliError::Usage(m),
        other => other.into(),
    })?;
    let alphas: Vec<String> = r.alphas.iter().map(|a| annotate(a, decimals)).collect();
    let mut text = String::new();
    writeln!(text, "n = {dim}, s = {}", r.s).unwrap();
    writeln!(text, "α with s(α) = s: {}", alphas.join(", ")).unwrap();
    writeln!(
        text,
        "∫(Δf)² ≥ {}·∫|x|^-2|∇f|² + {}·∫|x|^-4 f²",
        annotate_rational(&r.gradient_coeff, decimals),
        annotate_rational(&r.value_coeff, decimals)
    )
    .unwrap();
    let result = json!({
        "n": dim,
        "s": r.s.to_string(),
        "alphas": alphas,
        "gradient_coeff": r.gradient_coeff.to_string(),
        "value_coeff": r.value_coeff.to_string(),
    });
    Ok(Outcome::ok(text, result))
}

fn verify(
    id: Option<InequalityId>,
    dim: Option<u32>,
    params: &Params,
    suite: Suite,
    g: &GlobalOpts,
) -> Result<Outcome, CliError> {
    let ids: Vec<InequalityId> = id.map_or(InequalityId::ALL.to_vec(), |i| vec![i]);
    let mut reports: Vec<VerificationReport> = Vec::new();
    for id in ids {
        let dims = match dim {
            Some(n) => vec![n],
            None => default_dimensions(id),
        };
        for n in dims {
            let sets = if params.is_empty() { id.default_params(n) } else { vec![params.clone()] };
            for p in sets {
                let profiles = profile_suite_seeded(suite, n, g.seed);
                reports.push(verify_inequality(id, n, &p, &profiles, g.tol)?);
            }
        }
    }
    let pass = reports.iter().all(|r| r.pass);
    let mut text = String::new();
    for r in &reports {
        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(
            text,
            "[{}] {} n={} {}  min residual {:.6e}",
            if r.pass { "PASS" } else { "FAIL" },
            r.inequality,
            r.dim,
            params.join(" "),
            r.min_residual
        )
        .unwrap();
        writeln!(text, "    {}", r.statement).unwrap();
        for row in r.rows.iter().filter(|row| !row.pass) {
            writeln!(text, "    violated by {}: residual {:.6e}", row.profile, row.residual).unwrap();
        }
    }
    writeln!(
        text,
        "{} of {} reports pass",
        reports.iter().filter(|r| r.pass).count(),
        reports.len()
    )
    .unwrap();
    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record(["inequality", "params", "profile", "lhs", "rhs", "residual", "error_bound", "verdict"])
        .expect("in-memory csv");
    for r in &reports {
        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        for row in &r.rows {
            csv.write_record([
                r.inequality.clone(),
                params.join(";"),
                row.profile.clone(),
                format!("{:.17e}", row.lhs),
                format!("{:.17e}", row.rhs),
                format!("{:.17e}", row.residual),
                format!("{:e}", row.error_bound),
                if row.pass { "pass".into() } else { "fail".into() },
            ])
            .expect("in-memory csv");
        }
    }
    let csv = String::from_utf8(csv.into_inner().expect("in-memory csv")).expect("utf-8 csv");
    Ok(Outcome {
        text,
        result: serde_json::to_value(&reports).expect("serializable reports"),
        csv: Some(csv),
        pass,
    })
}

fn sharpness(id: InequalityId, dim: Option<u32>, widths: Option<&[f64]>, tol: f64) -> Result<Outcome, CliError> {
    let n = dim.unwrap_or(match id {
        InequalityId::Rellich => 5,
        InequalityId::Hardy => 3,
        _ => 1,
    });
    let s = sharpness_sweep(id, n, widths.unwrap_or(&DEFAULT_WIDTHS))?;
    let (below, mono, gap) = (s.bounded_below(tol), s.nonincreasing(0.0), s.final_gap());
    let pass = below && mono;
    let mut text = String::new();
    writeln!(text, "{} n={} exponent {} constant {}", s.inequality, s.dim, s.exponent, s.constant).unwrap();
    for p in &s.points {
        writeln!(text, "    M={:<4} ratio {:.12} (± {:.1e})", p.width, p.ratio, p.ratio_error).unwrap();
    }
    writeln!(text, "bounded below: {below}; nonincreasing: {mono}; final relative gap {gap:.4}").unwrap();
    let mut buf = Vec::new();
    s.write_csv(&mut buf).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(Outcome {
        text,
        result: json!({ "sweep": s, "bounded_below": below, "nonincreasing": mono, "final_gap": gap }),
        csv: Some(String::from_utf8(buf).expect("utf-8 csv")),
        pass,
    })
}

fn partition(dim: u32, extent: u32, grid: usize) -> Result<Outcome, CliError> {
    let p = BumpPartition::unit_lattice(dim as usize, extent as i64)?;
    let r = &p.region();
    // grid on the region's bounding box shrunk to stay inside the inflated corners
    let half = extent as f64 + 0.5 / (dim as f64).sqrt();
    let points = uniform_grid(&vec![-half; dim as usize], &vec![half; dim as usize], grid);
    debug_assert!(points.iter().all(|x| r.contains(x)));
    let rep = partition_functionals(&p, &points);
    let mut text = String::new();
    writeln!(text, "lattice {{−{extent}, …, {extent}}}^{dim}: {} centers", p.centers().len()).unwrap();
    writeln!(text, "samples:               {} ({} in the working region)", rep.samples, rep.region_samples).unwrap();
    writeln!(text, "max |Σφ_j² − 1|:       {:.3e}", rep.max_normalization_error).unwrap();
    writeln!(text, "min Σφ(x−x_j)²:        {:.6}", rep.min_covering).unwrap();
    writeln!(text, "sup Σ|∇φ_j|²:          {:.6}", rep.sup_grad).unwrap();
    writeln!(text, "sup Σ(Δφ_j)²:          {:.6}", rep.sup_lap).unwrap();
    writeln!(text, "raw sup Σ|∇φ(·−x_j)|²: {:.6}", rep.raw_sup_grad).unwrap();
    writeln!(text, "raw sup Σ(Δφ(·−x_j))²: {:.6}", rep.raw_sup_lap).unwrap();
    writeln!(text, "verdict:               {}", if rep.pass { "pass" } else { "fail" }).unwrap();
    Ok(Outcome {
        pass: rep.pass,
        result: serde_json::to_value(&rep).expect("serializable report"),
        text,
        csv: None,
    })
}

fn ledger(a: Rational, b: Rational, c: Rational, d: Rational, e: Rational, decimals: Option<usize>) -> Result<Outcome, CliError> {
    let l = MorganLedger::new(a, b, c, d, e)?;
    let o = morgan_ledger(&l);
    let mut text = String::new();
    writeln!(text, "a = {}, b = {}, c = {}, d = {}, e = {}", l.a, l.b, l.c, l.d, l.e).unwrap();
    writeln!(text, "form bound acd      = {}", annotate_rational(&o.form_bound, decimals)).unwrap();
    writeln!(text, "offset     ace + bc = {}", annotate_rational(&o.offset, decimals)).unwrap();
    writeln!(text, "strictly below one: {}", o.strictly_below_one).unwrap();
    Ok(Outcome::ok(text, json!({ "input": l, "outcome": o })))
}

fn w0(dim: u32, gamma: Rational, delta: f64, point: Option<&[f64]>) -> Result<Outcome, CliError> {
    let potential = SingularPotentialW0 {
        dim,
        centers: vec![vec![0.0; dim as usize]],
        couplings: vec![gamma.clone()],
        bound: num_traits::Signed::abs(&gamma),
        delta,
    };
    let w = build_w0(potential.clone())?;
    let mut text = String::new();
    writeln!(text, "W₀(x) = {gamma}·|x|^-4·e^(−{delta}|x|) in n = {dim}").unwrap();
    writeln!(text, "admissible: |γ| = {} < [n(n−4)/4]² = {}", potential.bound, rellich_constant(dim)).unwrap();
    let mut result = json!({ "potential": potential, "limit": rellich_constant(dim).to_string() });
    if let Some(x) = point {
        if x.len() != dim as usize {
            return Err(CliError::Usage(format!("--point needs {dim} coordinates, got {}", x.len())));
        }
        let v = w.eval(x)?;
        writeln!(text, "W₀({x:?}) = {v:.17e}").unwrap();
        result["value"] = json!(v);
    }
    let check = form_bound_check(dim, &gamma, delta)?;
    writeln!(
        text,
        "form bound on radial profiles: ∫W₀f² ≤ {}·∫(Δf)² + {:.6e}·∫f² ({})",
        check.leading,
        check.fitted_b,
        if check.pass { "pass" } else { "fail" }
    )
    .unwrap();
    let pass = check.pass;
    result["form_bound"] = serde_json::to_value(&check).expect("serializable check");
    Ok(Outcome {
        text,
        result,
        csv: None,
        pass,
    })
}
