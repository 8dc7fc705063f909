//! `hypertoric`: batch verification and tabular output for polarized
//! arrangements and their convolution algebras.
//!
//! Exit codes: 0 all checks pass, 1 a verification failed, 2 usage error,
//! 3 the input did not validate.

mod suites;
mod svg;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use foundations::parse_rational;
use hypertoric::convolution::Coefficients;
use hypertoric::cyclic::{left_arrangement, make_cyclic, CyclicSpec, Side};
use hypertoric::{PolarizedArrangement, SignVector};

use suites::{Ctx, K0Basis, Outcome};
use table::{render, Format, Header, Table};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    /// validation failure with the arrangement error code
    Validation(u8, String),
    Failure(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Validation(..) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Validation(c, m) => write!(f, "validation error [E{c}]: {m}"),
            CliError::Failure(m) => write!(f, "error: {m}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Z,
    F2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Parser, Debug)]
#[command(name = "hypertoric", version, about = "Verification suites for hypertoric convolution algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// arrangement file (JSON with n, k, V_basis, eta, xi)
    #[arg(long, short, global = true)]
    input: Option<PathBuf>,
    /// number of hyperplanes of a cyclic arrangement
    #[arg(long, global = true)]
    n: Option<usize>,
    /// rank of a cyclic arrangement
    #[arg(long, global = true)]
    k: Option<usize>,
    #[arg(long, value_enum, global = true)]
    side: Option<SideArg>,
    /// comma separated increasing positive rationals t_1,...,t_n
    #[arg(long, global = true)]
    nodes: Option<String>,
    /// internal degree cutoff D, default 2n+4
    #[arg(long, global = true)]
    max_degree: Option<i64>,
    #[arg(long, value_enum, global = true)]
    mode: Option<Mode>,
    #[arg(long, value_enum, global = true, default_value = "tsv")]
    format: Format,
    /// worker threads
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// write to this file instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// sign vectors with their feasibility and boundedness
    Regions,
    /// the partial order on bounded feasible regions
    Order,
    /// graded dimensions of e_a B e_b
    Dims,
    /// standard modules and standard filtrations of projectives
    Standard,
    /// projective resolutions of standard modules
    Resolve,
    /// Ext between standard modules; all pairs unless both labels are given
    Ext {
        alpha: Option<String>,
        beta: Option<String>,
        /// compare with the Koszul and Hom complex computations
        #[arg(long)]
        oracle: bool,
    },
    /// sign variation and dot combinatorics of a cyclic arrangement
    Cyclic,
    /// compare with the quiver algebra B_l(n, k)
    OszVerify,
    /// homology of the strands algebra, per (S, T) block
    Strands,
    /// Ext of the left arrangements against strands homology
    ExtStrands,
    /// Grothendieck group matrices as TSV
    K0 {
        #[arg(long, value_enum, default_value = "projective")]
        basis: K0Basis,
    },
    /// SVG drawing of a k = 2 arrangement
    Svg,
    /// run verification suites and summarize
    Report {
        /// every suite that applies to the arrangement
        #[arg(long)]
        all: bool,
        #[arg(value_enum)]
        suites: Vec<Suite>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
enum Suite {
    Regions,
    Order,
    Dims,
    Standard,
    Resolve,
    Ext,
    Cyclic,
    OszVerify,
    Strands,
    ExtStrands,
    K0,
}

fn validation(e: hypertoric::ArrangementError) -> CliError {
    CliError::Validation(e.code(), e.to_string())
}

/// Reads a JSON arrangement file.
fn parse_arrangement(path: &PathBuf) -> Result<PolarizedArrangement, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    PolarizedArrangement::from_json_str(&text).map_err(validation)
}

fn side_of(s: SideArg) -> Side {
    match s {
        SideArg::Left => Side::Left,
        SideArg::Right => Side::Right,
    }
}

/// The arrangement from `--input` or from `--n/--k/--side/--nodes`.
fn arrangement(cli: &Cli) -> Result<(PolarizedArrangement, Option<Side>, bool), CliError> {
    if let Some(path) = &cli.input {
        if cli.n.is_some() || cli.k.is_some() || cli.nodes.is_some() {
            return Err(CliError::Usage("--input excludes --n, --k and --nodes".into()));
        }
        return Ok((parse_arrangement(path)?, cli.side.map(side_of), false));
    }
    let (Some(n), Some(k)) = (cli.n, cli.k) else {
        return Err(CliError::Usage("give --input FILE or --n N --k K".into()));
    };
    let side = cli.side.map(side_of).unwrap_or(Side::Left);
    if k == n && side == Side::Left && cli.nodes.is_none() {
        let a = left_arrangement(n, k).map_err(|e| CliError::Validation(3, e.to_string()))?;
        return Ok((a, Some(side), true));
    }
    let mut spec = CyclicSpec::with_default_nodes(n, k, side);
    if let Some(nodes) = &cli.nodes {
        spec.nodes = nodes
            .split(',')
            .map(|t| parse_rational(t.trim()).map_err(|e| CliError::Validation(10, format!("node {t:?}: {e}"))))
            .collect::<Result<_, _>>()?;
    }
    let a = make_cyclic(&spec).map_err(|e| CliError::Validation(3, e.to_string()))?;
    Ok((a, Some(side), side == Side::Left))
}

fn coefficients(cli: &Cli, forced_f2: bool) -> Result<Coefficients, CliError> {
    match (cli.mode, forced_f2) {
        (Some(Mode::Z), true) => Err(CliError::Usage("this subcommand works over F2 only".into())),
        (Some(Mode::F2), _) | (None, true) => Ok(Coefficients::F2),
        (Some(Mode::Z), false) | (None, false) => Ok(Coefficients::Integers),
    }
}

fn cutoff(cli: &Cli, n: usize) -> Result<i64, CliError> {
    match cli.max_degree {
        Some(d) if d < 0 => Err(CliError::Usage("--max-degree must be nonnegative".into())),
        Some(d) => Ok(d),
        None => Ok(2 * n as i64 + 4),
    }
}

fn parse_label(s: &str, arr: &PolarizedArrangement) -> Result<SignVector, CliError> {
    let g: SignVector = s.parse().map_err(|e: hypertoric::arrangement::ParseSignError| CliError::Usage(e.0))?;
    if g.len() != arr.n() {
        return Err(CliError::Usage(format!("{s} has length {}, expected {}", g.len(), arr.n())));
    }
    if !arr.in_p(&g) {
        return Err(validation(hypertoric::ArrangementError::NotBoundedFeasible(s.into())));
    }
    Ok(g)
}

fn mode_name(c: Coefficients) -> &'static str {
    match c {
        Coefficients::F2 => "F2",
        _ => "Z",
    }
}

/// Rows of the `report` summary plus all failures, prefixed by suite.
fn report(ctx: &Ctx, suites: &[Suite]) -> (Table, Vec<String>) {
    let mut t = Table::new("report", &["suite", "status", "failures"]);
    let mut failures = Vec::new();
    for &s in suites {
        let name = s.to_possible_value().unwrap().get_name().to_string();
        let r: Result<Outcome, CliError> = match s {
            Suite::Regions => suites::regions(ctx),
            Suite::Order => suites::order(ctx),
            Suite::Dims => suites::dims(ctx),
            Suite::Standard => suites::standard(ctx),
            Suite::Resolve => suites::resolve(ctx),
            Suite::Ext => suites::ext(ctx, None, true),
            Suite::Cyclic if ctx.side.is_none() => {
                t.push(vec![name, "skipped".into(), "not a cyclic arrangement".into()]);
                continue;
            }
            Suite::Cyclic => suites::cyclic(ctx),
            Suite::OszVerify if !ctx.left_cyclic => {
                t.push(vec![name, "skipped".into(), "not a left cyclic arrangement".into()]);
                continue;
            }
            Suite::OszVerify => suites::osz(ctx),
            Suite::Strands => suites::strands(ctx.arr.n(), ctx.max_deg),
            Suite::ExtStrands => suites::ext_strands(ctx.arr.n(), ctx.max_deg),
            Suite::K0 => suites::k0(ctx, K0Basis::Projective),
        };
        let fails = match r {
            Ok(o) => o.failures,
            Err(e) => vec![e.to_string()],
        };
        let status = if fails.is_empty() { "pass" } else { "fail" };
        t.push(vec![name.clone(), status.into(), fails.len().to_string()]);
        failures.extend(fails.into_iter().map(|f| format!("{name}: {f}")));
    }
    (t, failures)
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global().map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let name = match &cli.cmd {
        Cmd::Report { .. } => "report",
        Cmd::Ext { .. } => "ext",
        Cmd::K0 { .. } => "k0",
        Cmd::Svg => "svg",
        other => match other {
            Cmd::Regions => "regions",
            Cmd::Order => "order",
            Cmd::Dims => "dims",
            Cmd::Standard => "standard",
            Cmd::Resolve => "resolve",
            Cmd::Cyclic => "cyclic",
            Cmd::OszVerify => "osz-verify",
            Cmd::Strands => "strands",
            _ => "ext-strands",
        },
    };

    // strands subcommands need only n
    if let Cmd::Strands | Cmd::ExtStrands = cli.cmd {
        let n = cli.n.ok_or_else(|| CliError::Usage(format!("{name} needs --n")))?;
        let coeffs = coefficients(cli, true)?;
        let d = cutoff(cli, n)?;
        let out = if matches!(cli.cmd, Cmd::Strands) { suites::strands(n, d)? } else { suites::ext_strands(n, d)? };
        let header = Header::new(name).with("n", n).with("D", d).with("mode", mode_name(coeffs));
        return emit(cli, &header, &out.tables, &out.failures);
    }

    let (arr, side, left_cyclic) = arrangement(cli)?;
    if let Cmd::Svg = cli.cmd {
        let text = svg::emit_svg(&arr).map_err(|e| CliError::Usage(e.to_string()))?;
        write_out(cli, &text)?;
        return Ok(true);
    }
    let coeffs = coefficients(cli, false)?;
    let max_deg = cutoff(cli, arr.n())?;
    let ctx = Ctx { arr, side, left_cyclic, max_deg, coeffs };
    let header =
        Header::new(name).with("n", ctx.arr.n()).with("k", ctx.arr.k()).with("D", max_deg).with("mode", mode_name(coeffs));
    let out = match &cli.cmd {
        Cmd::Regions => suites::regions(&ctx)?,
        Cmd::Order => suites::order(&ctx)?,
        Cmd::Dims => suites::dims(&ctx)?,
        Cmd::Standard => suites::standard(&ctx)?,
        Cmd::Resolve => suites::resolve(&ctx)?,
        Cmd::Ext { alpha, beta, oracle } => {
            let pair = match (alpha, beta) {
                (Some(a), Some(b)) => Some((parse_label(a, &ctx.arr)?, parse_label(b, &ctx.arr)?)),
                (None, None) => None,
                _ => return Err(CliError::Usage("ext takes both labels or neither".into())),
            };
            suites::ext(&ctx, pair, *oracle)?
        }
        Cmd::Cyclic => suites::cyclic(&ctx)?,
        Cmd::OszVerify => suites::osz(&ctx)?,
        Cmd::K0 { basis } => suites::k0(&ctx, *basis)?,
        Cmd::Report { all, suites: chosen } => {
            let mut list: Vec<Suite> = if *all { Suite::value_variants().to_vec() } else { chosen.clone() };
            if list.is_empty() {
                return Err(CliError::Usage("report needs --all or a list of suites".into()));
            }
            list.sort();
            list.dedup();
            let (t, failures) = report(&ctx, &list);
            Outcome { tables: vec![t], failures }
        }
        Cmd::Strands | Cmd::ExtStrands | Cmd::Svg => unreachable!("handled above"),
    };
    emit(cli, &header, &out.tables, &out.failures)
}

fn write_out(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit(cli: &Cli, header: &Header, tables: &[Table], failures: &[String]) -> Result<bool, CliError> {
    write_out(cli, &render(cli.format, header, tables, failures))?;
    for f in failures {
        eprintln!("FAIL {f}");
    }
    Ok(failures.is_empty())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
