//! Command-line front end.
//!
//! [`run`] parses arguments, executes one subcommand and returns the process
//! exit code. Output goes to the supplied writers (or to `--out`), so the
//! whole front end can be driven from tests.
//!
//! Exit codes: `0` success, `1` verify found a property failure or a
//! mismatch, `2` cross-method disagreement under `--method all`, `3` root
//! iteration did not converge, `64` usage error, `74` output could not be
//! written.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::determinant::{det_family_poly, Basis};
use crate::error::{Error, Result};
use crate::families::{apply_operator, resolve, Builtin, FamilySpec, Iterated};
use crate::poly::QPoly;
use crate::qcore::QContext;
use crate::rat::{parse_rat, to_decimal, Rat};
use crate::roots::{find_roots, vieta_residuals, RootOptions, RootSet};
use crate::verify::{fmt4, fmt_complex, verify, DEFAULT_VERIFY_ORDER, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_METHOD_MISMATCH: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

const DEFAULT_NUMBERS_UPTO: usize = 4;

#[derive(Debug, Parser)]
#[command(
    name = "qappell",
    version,
    about = "Exact q-Appell, 2-iterated and mixed q-special polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print A_0..A_N as exact rationals and decimals.
    Numbers(Common),
    /// Print the degree-n polynomial.
    Poly(Common),
    /// Real and complex zeros of the degree-n polynomial.
    Roots(RootsArgs),
    /// Evaluate polynomials on a grid (CSV by default).
    Sample(SampleArgs),
    /// Run the property suite and audit the published tables.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct Output {
    /// Output format [default: text; csv for `sample`].
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Common {
    /// The parameter q as an exact fraction, 0 < q < 1.
    #[arg(long, default_value = "1/2", value_name = "P/R")]
    q: String,
    /// Highest index (numbers) or the degree (poly, roots, sample).
    #[arg(long = "upto", short = 'n', visible_alias = "n", value_name = "INT")]
    upto: Option<usize>,
    /// bernoulli, euler, genocchi-det or genocchi-table.
    #[arg(long, value_name = "NAME")]
    family: Option<String>,
    /// 2-iterated family: A supplies the numbers, B the polynomials.
    #[arg(long, value_name = "A,B")]
    iterate: Option<String>,
    /// Mixed family of two distinct families, same convention as --iterate.
    #[arg(long, value_name = "A,B")]
    mixed: Option<String>,
    #[arg(long, value_enum, default_value_t = Method::Series)]
    method: Method,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct RootsArgs {
    #[command(flatten)]
    common: Common,
    /// Print every double in full (shortest round-trip form).
    #[arg(long)]
    full_precision: bool,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    common: Common,
    /// Several degrees at once, e.g. 1,2,3,4 (overrides --n).
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    degrees: Vec<usize>,
    #[arg(
        long,
        default_value = "-4",
        allow_hyphen_values = true,
        value_name = "P/R"
    )]
    xmin: String,
    #[arg(
        long,
        default_value = "4",
        allow_hyphen_values = true,
        value_name = "P/R"
    )]
    xmax: String,
    /// Number of grid points, endpoints included.
    #[arg(long, default_value_t = 161)]
    steps: usize,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value = "1/2", value_name = "P/R")]
    q: String,
    /// Order of the property suite.
    #[arg(long = "upto", short = 'n', visible_alias = "n", default_value_t = DEFAULT_VERIFY_ORDER)]
    upto: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Series,
    Determinant,
    Operator,
    All,
}

impl Method {
    const ROUTES: [Method; 3] = [Method::Series, Method::Determinant, Method::Operator];

    fn name(self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::Determinant => "determinant",
            Method::Operator => "operator",
            Method::All => "all",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Which polynomial family a command is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Single(Builtin),
    /// `(numbers from, polynomials from)`.
    Pair(Builtin, Builtin),
}

impl Source {
    pub fn label(&self) -> String {
        match self {
            Source::Single(b) => b.to_string(),
            Source::Pair(a, b) => format!("{a},{b}"),
        }
    }
}

/// Validated settings shared by the family commands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub ctx: QContext,
    pub upto: Option<usize>,
    pub source: Source,
    pub method: Method,
    pub format: Format,
    pub out: Option<PathBuf>,
}

/// Failure of a command, mapped to an exit code by [`run`].
#[derive(Debug)]
enum Failure {
    Usage(String),
    MethodMismatch(String),
    NoConvergence(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence {
                sweeps,
                last_update,
                ref best,
                ref residuals,
            } => {
                let mut msg = format!(
                    "root iteration did not converge after {sweeps} sweeps (max update {last_update:e}); best estimates:"
                );
                for (z, r) in best.iter().zip(residuals) {
                    let _ = write!(msg, "\n  {z:?}  residual {r:e}");
                }
                Failure::NoConvergence(msg)
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

type CmdResult<T> = std::result::Result<T, Failure>;

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Normal output goes to `stdout` unless `--out` is given.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let (result, out) = match cli.command {
        Command::Numbers(c) => with_config(&c, Format::Text, cmd_numbers),
        Command::Poly(c) => with_config(&c, Format::Text, cmd_poly),
        Command::Roots(r) => {
            let full = r.full_precision;
            with_config(&r.common, Format::Text, |cfg| cmd_roots(cfg, full))
        }
        Command::Sample(s) => with_config(&s.common, Format::Csv, |cfg| cmd_sample(cfg, &s)),
        Command::Verify(v) => (cmd_verify(&v), v.output.out.clone()),
    };
    match result {
        Ok((text, code)) => match emit(&text, out.as_ref(), stdout) {
            Ok(()) => code,
            Err(Failure::Io(msg)) => {
                let _ = writeln!(stderr, "error: {msg}");
                EXIT_IO
            }
            Err(_) => unreachable!("emit only fails with io errors"),
        },
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (EXIT_USAGE, m),
                Failure::MethodMismatch(m) => (EXIT_METHOD_MISMATCH, m),
                Failure::NoConvergence(m) => (EXIT_NO_CONVERGENCE, m),
                Failure::Io(m) => (EXIT_IO, m),
            };
            let _ = writeln!(stderr, "error: {msg}");
            code
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>, stdout: &mut dyn Write) -> CmdResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn with_config(
    common: &Common,
    default_format: Format,
    f: impl FnOnce(&RunConfig) -> CmdResult<String>,
) -> (CmdResult<(String, i32)>, Option<PathBuf>) {
    let out = common.output.out.clone();
    let result = config(common, default_format).and_then(|cfg| f(&cfg).map(|t| (t, EXIT_OK)));
    (result, out)
}

fn parse_q(s: &str) -> CmdResult<QContext> {
    Ok(QContext::new(parse_rat(s)?)?)
}

fn parse_pair(s: &str, flag: &str) -> CmdResult<(Builtin, Builtin)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Failure::Usage(format!(
            "--{flag} expects two families separated by a comma, got {s:?}"
        )));
    }
    Ok((parts[0].parse()?, parts[1].parse()?))
}

fn config(c: &Common, default_format: Format) -> CmdResult<RunConfig> {
    let ctx = parse_q(&c.q)?;
    let given = [c.family.is_some(), c.iterate.is_some(), c.mixed.is_some()];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(Failure::Usage(
            "give exactly one of --family, --iterate or --mixed".into(),
        ));
    }
    let source = if let Some(f) = &c.family {
        Source::Single(f.parse()?)
    } else if let Some(p) = &c.iterate {
        let (a, b) = parse_pair(p, "iterate")?;
        Source::Pair(a, b)
    } else {
        let (a, b) = parse_pair(c.mixed.as_deref().expect("checked above"), "mixed")?;
        if a == b {
            return Err(Failure::Usage(format!(
                "--mixed needs two different families; use --iterate {a},{b}"
            )));
        }
        Source::Pair(a, b)
    };
    Ok(RunConfig {
        ctx,
        upto: c.upto,
        source,
        method: c.method,
        format: c.output.format.unwrap_or(default_format),
        out: c.output.out.clone(),
    })
}

fn degree(cfg: &RunConfig) -> CmdResult<usize> {
    cfg.upto
        .ok_or_else(|| Failure::Usage("missing the degree: pass --n <INT>".into()))
}

/// The degree-`n` polynomial of `source` by one construction route.
pub fn poly_by(method: Method, source: Source, ctx: &QContext, n: usize) -> Result<QPoly> {
    match (method, source) {
        (Method::Series, Source::Single(b)) => resolve(&b.into(), ctx, n)?.poly(n),
        (Method::Series, Source::Pair(a, b)) => {
            Iterated::resolve(&a.into(), &b.into(), ctx, n)?.poly(n)
        }
        (Method::Determinant, Source::Single(b)) => {
            det_family_poly(&b.into(), &Basis::Monomials, ctx, n)
        }
        (Method::Determinant, Source::Pair(a, b)) => {
            det_family_poly(&a.into(), &Basis::Family(FamilySpec::Builtin(b)), ctx, n)
        }
        (Method::Operator, Source::Single(b)) => {
            let fam = resolve(&b.into(), ctx, n)?;
            Ok(apply_operator(fam.numbers(), &QPoly::monomial(n)))
        }
        (Method::Operator, Source::Pair(a, b)) => {
            let pair = Iterated::resolve(&a.into(), &b.into(), ctx, n)?;
            Ok(apply_operator(pair.first.numbers(), &pair.second.poly(n)?))
        }
        (Method::All, _) => Err(Error::Domain("`all` is not a single route".into())),
    }
}

/// Runs the requested route(s). Under [`Method::All`] every route is built
/// and any disagreement is a [`Failure::MethodMismatch`].
fn routes(cfg: &RunConfig, n: usize) -> CmdResult<Vec<(Method, QPoly)>> {
    let methods: Vec<Method> = if cfg.method == Method::All {
        Method::ROUTES.to_vec()
    } else {
        vec![cfg.method]
    };
    let built = methods
        .into_iter()
        .map(|m| poly_by(m, cfg.source, &cfg.ctx, n).map(|p| (m, p)))
        .collect::<Result<Vec<_>>>()?;
    let (m0, p0) = &built[0];
    if let Some((m, p)) = built.iter().find(|(_, p)| p != p0) {
        return Err(Failure::MethodMismatch(format!(
            "construction routes disagree for {} n={n}:\n  {:<12} {p0}\n  {:<12} {p}",
            cfg.source.label(),
            m0.name(),
            m.name()
        )));
    }
    Ok(built)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn csv_finish(w: csv::Writer<Vec<u8>>) -> CmdResult<String> {
    let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Io(e.to_string()))
}

fn csv_err(e: csv::Error) -> Failure {
    Failure::Io(e.to_string())
}

#[derive(Serialize)]
struct NumberEntry {
    n: usize,
    exact: String,
    decimal: String,
}

#[derive(Serialize)]
struct NumbersOut<'a> {
    schema: u32,
    command: &'static str,
    q: String,
    source: String,
    method: &'a str,
    numbers: Vec<NumberEntry>,
}

/// `A_0..A_N`, each the value at zero of the polynomial built by the
/// selected route(s).
fn cmd_numbers_values(cfg: &RunConfig) -> CmdResult<Vec<Rat>> {
    let upto = cfg.upto.unwrap_or(DEFAULT_NUMBERS_UPTO);
    (0..=upto)
        .map(|n| {
            let built = routes(cfg, n)?;
            Ok(built[0].1.coeff(0))
        })
        .collect()
}

fn cmd_numbers(cfg: &RunConfig) -> CmdResult<String> {
    let values = cmd_numbers_values(cfg)?;
    let entries: Vec<NumberEntry> = values
        .iter()
        .enumerate()
        .map(|(n, v)| NumberEntry {
            n,
            exact: v.to_string(),
            decimal: to_decimal(v, 6),
        })
        .collect();
    Ok(match cfg.format {
        Format::Json => json(&NumbersOut {
            schema: SCHEMA_VERSION,
            command: "numbers",
            q: cfg.ctx.q().to_string(),
            source: cfg.source.label(),
            method: cfg.method.name(),
            numbers: entries,
        }),
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["n", "exact", "decimal"]).map_err(csv_err)?;
            for e in &entries {
                w.write_record([e.n.to_string(), e.exact.clone(), e.decimal.clone()])
                    .map_err(csv_err)?;
            }
            csv_finish(w)?
        }
        Format::Text => {
            let width = entries.iter().map(|e| e.exact.len()).max().unwrap_or(1);
            let mut s = String::new();
            for e in &entries {
                let _ = writeln!(s, "{:>3}  {:<width$}  {}", e.n, e.exact, e.decimal);
            }
            s
        }
    })
}

#[derive(Serialize)]
struct RouteOut {
    method: &'static str,
    poly: String,
}

#[derive(Serialize)]
struct PolyOut<'a> {
    schema: u32,
    command: &'static str,
    q: String,
    source: String,
    n: usize,
    method: &'a str,
    poly: String,
    /// Lowest power first.
    coeffs: Vec<String>,
    routes: Vec<RouteOut>,
}

fn cmd_poly(cfg: &RunConfig) -> CmdResult<String> {
    let n = degree(cfg)?;
    let built = routes(cfg, n)?;
    let p = &built[0].1;
    Ok(match cfg.format {
        Format::Json => json(&PolyOut {
            schema: SCHEMA_VERSION,
            command: "poly",
            q: cfg.ctx.q().to_string(),
            source: cfg.source.label(),
            n,
            method: cfg.method.name(),
            poly: p.to_string(),
            coeffs: p.coeffs().iter().map(|c| c.to_string()).collect(),
            routes: built
                .iter()
                .map(|(m, p)| RouteOut {
                    method: m.name(),
                    poly: p.to_string(),
                })
                .collect(),
        }),
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["power", "coefficient"]).map_err(csv_err)?;
            for (k, c) in p.coeffs().iter().enumerate() {
                w.write_record([k.to_string(), c.to_string()])
                    .map_err(csv_err)?;
            }
            csv_finish(w)?
        }
        Format::Text if cfg.method == Method::All => {
            let mut s = String::new();
            for (m, p) in &built {
                let _ = writeln!(s, "{:<12} {p}", m.name());
            }
            s
        }
        Format::Text => format!("{p}\n"),
    })
}

#[derive(Serialize)]
struct ComplexOut {
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct VietaOut {
    sum: f64,
    product: f64,
}

#[derive(Serialize)]
struct RootsOut {
    schema: u32,
    command: &'static str,
    q: String,
    source: String,
    n: usize,
    poly: String,
    real: Vec<f64>,
    complex: Vec<ComplexOut>,
    residuals: Vec<f64>,
    vieta: VietaOut,
}

/// Zeros of the degree-`n` polynomial of `cfg.source`.
pub fn roots_of(cfg: &RunConfig, n: usize) -> Result<(QPoly, RootSet, (f64, f64))> {
    let p = poly_by(Method::Series, cfg.source, &cfg.ctx, n)?;
    let rs = find_roots(&p, &RootOptions::default())?;
    let vieta = vieta_residuals(&p, &rs)?;
    Ok((p, rs, vieta))
}

fn cmd_roots(cfg: &RunConfig, full: bool) -> CmdResult<String> {
    let n = degree(cfg)?;
    if n == 0 {
        return Err(Failure::Usage("roots needs a degree of at least 1".into()));
    }
    if cfg.method == Method::All {
        routes(cfg, n)?;
    }
    let (p, rs, (ds, dp)) = roots_of(cfg, n)?;
    let real = |x: f64| if full { format!("{x:?}") } else { fmt4(x) };
    let cplx = |z: num_complex::Complex64| {
        if full {
            format!(
                "{:?}{}{:?}i",
                z.re,
                if z.im < 0.0 { "-" } else { "+" },
                z.im.abs()
            )
        } else {
            fmt_complex(z)
        }
    };
    Ok(match cfg.format {
        Format::Json => json(&RootsOut {
            schema: SCHEMA_VERSION,
            command: "roots",
            q: cfg.ctx.q().to_string(),
            source: cfg.source.label(),
            n,
            poly: p.to_string(),
            real: rs.real.clone(),
            complex: rs
                .complex
                .iter()
                .map(|z| ComplexOut { re: z.re, im: z.im })
                .collect(),
            residuals: rs.residuals.clone(),
            vieta: VietaOut {
                sum: ds,
                product: dp,
            },
        }),
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["kind", "re", "im", "residual"])
                .map_err(csv_err)?;
            for (z, r) in rs.roots.iter().zip(&rs.residuals) {
                let kind = if z.im == 0.0 { "real" } else { "complex" };
                w.write_record([
                    kind.to_string(),
                    format!("{:?}", z.re),
                    format!("{:?}", z.im),
                    format!("{r:e}"),
                ])
                .map_err(csv_err)?;
            }
            csv_finish(w)?
        }
        Format::Text => {
            let list = |v: Vec<String>| {
                if v.is_empty() {
                    "-".to_string()
                } else {
                    v.join(", ")
                }
            };
            let mut s = String::new();
            let _ = writeln!(s, "polynomial: {p}");
            let _ = writeln!(
                s,
                "real:       {}",
                list(rs.real.iter().map(|&x| real(x)).collect())
            );
            let _ = writeln!(
                s,
                "complex:    {}",
                list(rs.complex.iter().map(|&z| cplx(z)).collect())
            );
            let _ = writeln!(s, "vieta:      sum {ds:e}, product {dp:e}");
            s
        }
    })
}

#[derive(Serialize)]
struct SamplePoint {
    x: String,
    values: Vec<String>,
}

#[derive(Serialize)]
struct SampleOut {
    schema: u32,
    command: &'static str,
    q: String,
    source: String,
    degrees: Vec<usize>,
    points: Vec<SamplePoint>,
}

fn cmd_sample(cfg: &RunConfig, args: &SampleArgs) -> CmdResult<String> {
    let degrees = if args.degrees.is_empty() {
        vec![degree(cfg)?]
    } else {
        args.degrees.clone()
    };
    let xmin = parse_rat(&args.xmin)?;
    let xmax = parse_rat(&args.xmax)?;
    let polys = degrees
        .iter()
        .map(|&n| poly_by(Method::Series, cfg.source, &cfg.ctx, n))
        .collect::<Result<Vec<_>>>()?;
    let columns = polys
        .iter()
        .map(|p| crate::roots::sample(p, &xmin, &xmax, args.steps))
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<&Rat> = columns[0].iter().map(|(x, _)| x).collect();
    Ok(match cfg.format {
        Format::Json => json(&SampleOut {
            schema: SCHEMA_VERSION,
            command: "sample",
            q: cfg.ctx.q().to_string(),
            source: cfg.source.label(),
            degrees: degrees.clone(),
            points: xs
                .iter()
                .enumerate()
                .map(|(i, x)| SamplePoint {
                    x: x.to_string(),
                    values: columns.iter().map(|c| c[i].1.to_string()).collect(),
                })
                .collect(),
        }),
        Format::Csv | Format::Text => {
            let mut w = csv_writer();
            let mut header = vec!["x".to_string()];
            if degrees.len() == 1 {
                header.push("p(x)".into());
            } else {
                header.extend(degrees.iter().map(|n| format!("p_{n}(x)")));
            }
            w.write_record(&header).map_err(csv_err)?;
            for (i, x) in xs.iter().enumerate() {
                let mut rec = vec![to_decimal(x, 6)];
                rec.extend(columns.iter().map(|c| to_decimal(&c[i].1, 12)));
                w.write_record(&rec).map_err(csv_err)?;
            }
            csv_finish(w)?
        }
    })
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult<(String, i32)> {
    let ctx = parse_q(&args.q)?;
    let report = verify(&ctx, args.upto)?;
    let text = match args.output.format.unwrap_or(Format::Text) {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["id", "location", "expected", "computed", "status"])
                .map_err(csv_err)?;
            for c in &report.checks {
                w.write_record([
                    &c.id,
                    &c.location,
                    &c.expected,
                    &c.computed,
                    c.status.as_str(),
                ])
                .map_err(csv_err)?;
            }
            csv_finish(w)?
        }
    };
    let code = if report.exit_code() == 0 {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    };
    Ok((text, code))
}
