//! Command-line front end. `run_cli` is the whole program; the binary only
//! wires it to the process streams.
//!
//! Exit status: 0 success, 1 usage error, 2 parse, validation, guard or I/O
//! error, 3 when `minvehicle` certifies that no single vehicle tour exists.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{bounds_table, p_gamma};
use crate::error::Error;
use crate::fleet::{k_vehicle_greedy_with, single_repair_with, Certificate};
use crate::instance::{
    generate_feasible_opt1_instance, generate_random_instance, parse_instance, serialize_instance,
    Instance,
};
use crate::oracle::{brute_force_opt_guarded, default_guard};
use crate::ratio::{decimal_preview, format_ratio, int, parse_ratio, Ratio};
use crate::repairman::{repairman_3approx_with, SolverConfig, SolverKind, DEFAULT_EXACT_GUARD};
use crate::schedule::{original_windows, parse_runs, validate_run, Run, WindowMap};
use crate::windows::{effective_windows, expand_and_partition, set_tag, trim_half_unit};

pub const ORACLE_GUARD_ENV: &str = "UWVRP_ORACLE_GUARD";

#[derive(Debug, Parser)]
#[command(
    name = "uwvrp",
    version,
    about = "Routing with unit-length time windows"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Greedy single- or multi-vehicle profit maximization.
    Solve(SolveArgs),
    /// Cover every request with six runs (tree metrics).
    Minvehicle(MinVehicleArgs),
    /// Exact guarantee fractions of the greedy k-vehicle algorithm.
    Bounds(BoundsArgs),
    /// Trimmed and expanded window assignment per request.
    Windows(WindowsArgs),
    /// Brute-force optimum for k vehicles on a small instance.
    Oracle(OracleArgs),
    /// Generate a random instance.
    Gen(GenArgs),
    /// Validate run files against an instance.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SolverArg {
    Auto,
    Exhaustive,
    TreeDp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WindowsArg {
    Original,
    Trimmed,
    #[value(name = "expanded-E")]
    ExpandedE,
    #[value(name = "expanded-O")]
    ExpandedO,
}

#[derive(Debug, Args)]
struct SolverOpts {
    /// Trimmed-window solver.
    #[arg(long, value_enum, default_value = "auto")]
    solver: SolverArg,
    /// Request limit for the exhaustive solver.
    #[arg(long, default_value_t = DEFAULT_EXACT_GUARD)]
    guard: usize,
}

impl SolverOpts {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            kind: match self.solver {
                SolverArg::Auto => SolverKind::Auto,
                SolverArg::Exhaustive => SolverKind::Exhaustive,
                SolverArg::TreeDp => SolverKind::TreeDp,
            },
            exact_guard: self.guard,
        }
    }
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["single", "fleet"])))]
struct SolveArgs {
    instance: PathBuf,
    /// One vehicle (trim, then solve exactly).
    #[arg(long)]
    single: bool,
    /// Number of vehicles for the greedy multi-pass algorithm.
    #[arg(long, value_name = "K", value_parser = clap::value_parser!(u64).range(1..))]
    fleet: Option<u64>,
    #[command(flatten)]
    solver: SolverOpts,
    /// Write each run to `<DIR>/<label>.txt` instead of stdout.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Tab-separated report.
    #[arg(long)]
    porcelain: bool,
}

#[derive(Debug, Args)]
struct MinVehicleArgs {
    instance: PathBuf,
    #[command(flatten)]
    solver: SolverOpts,
    /// Write the six runs to `<DIR>/<label>.txt` instead of stdout.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Tab-separated output.
    #[arg(long)]
    porcelain: bool,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    /// Comma-separated vehicle counts.
    #[arg(long, value_delimiter = ',', required = true, value_parser = clap::value_parser!(u64).range(1..))]
    k: Vec<u64>,
    /// Comma-separated solver factors (rationals >= 1).
    #[arg(long, value_delimiter = ',', default_value = "1", value_parser = parse_gamma)]
    gamma: Vec<Ratio>,
    /// Tab-separated output.
    #[arg(long)]
    porcelain: bool,
}

#[derive(Debug, Args)]
struct WindowsArgs {
    instance: PathBuf,
    /// Tab-separated output.
    #[arg(long)]
    porcelain: bool,
}

#[derive(Debug, Args)]
struct OracleArgs {
    instance: PathBuf,
    /// Number of vehicles.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    /// Windows the optimum is computed under.
    #[arg(long, value_enum, default_value = "original")]
    windows: WindowsArg,
    /// Request limit; defaults to $UWVRP_ORACLE_GUARD, else 8 (k <= 2) or 6.
    #[arg(long)]
    guard: Option<usize>,
    /// Write each optimal run to `<DIR>/<label>.txt` instead of stdout.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Tab-separated output.
    #[arg(long)]
    porcelain: bool,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Number of tree nodes.
    #[arg(long)]
    nodes: usize,
    /// Number of requests.
    #[arg(long)]
    requests: usize,
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Releases fall in (0, horizon - 1).
    #[arg(long, default_value = "10", value_parser = parse_rational)]
    horizon: Ratio,
    /// Plant requests along a random walk so that one vehicle serves all.
    #[arg(long)]
    opt1: bool,
    /// Write `instance.txt` (and `witness.txt` with --opt1) into DIR.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Run file, possibly holding several runs.
    run: PathBuf,
    /// Instance file the runs refer to.
    #[arg(long)]
    instance: PathBuf,
    /// Windows the runs are checked against.
    #[arg(long, value_enum, default_value = "original")]
    windows: WindowsArg,
    /// Tab-separated output.
    #[arg(long)]
    porcelain: bool,
}

fn parse_rational(text: &str) -> Result<Ratio, String> {
    parse_ratio(text).ok_or_else(|| format!("{text:?} is not a rational literal"))
}

fn parse_gamma(text: &str) -> Result<Ratio, String> {
    let gamma = parse_rational(text)?;
    if gamma < int(1) {
        return Err("gamma must be at least 1".into());
    }
    Ok(gamma)
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Error(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CliResult = Result<u8, Failure>;

/// Parses `args` (including the program name) and runs one subcommand.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };
    let result = match cli.command {
        Command::Solve(args) => solve(args, out),
        Command::Minvehicle(args) => minvehicle(args, out),
        Command::Bounds(args) => bounds(args, out),
        Command::Windows(args) => windows(args, out),
        Command::Oracle(args) => oracle(args, out),
        Command::Gen(args) => gen(args, out),
        Command::Verify(args) => verify(args, out),
    };
    match result {
        Ok(status) => status,
        Err(Failure::Usage(message)) => {
            let _ = writeln!(err, "error: {message}");
            1
        }
        Err(Failure::Error(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
        Err(Failure::Io(message)) => {
            let _ = writeln!(err, "error: {message}");
            2
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| match e {
        Error::Syntax { .. } => {
            Failure::Error(Error::Validation(format!("{}: {e}", path.display())))
        }
        other => Failure::Error(other),
    })
}

/// Left-aligned columns separated by two spaces, or tabs in porcelain mode.
fn table(rows: &[Vec<String>], porcelain: bool) -> String {
    let mut text = String::new();
    if porcelain {
        for row in rows {
            text.push_str(&row.join("\t"));
            text.push('\n');
        }
        return text;
    }
    let columns = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..columns)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            if c + 1 < row.len() {
                line.push_str(&" ".repeat(widths[c] - cell.chars().count()));
            }
        }
        text.push_str(line.trim_end());
        text.push('\n');
    }
    text
}

fn emit_runs(
    inst: &Instance,
    runs: &[Run],
    dir: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    match dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            for run in runs {
                fs::write(dir.join(format!("{}.txt", run.label)), run.to_text(inst))?;
            }
        }
        None => {
            for run in runs {
                write!(out, "{}", run.to_text(inst))?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}

fn fraction_cells(value: &Ratio) -> [String; 2] {
    [format_ratio(value), decimal_preview(value, 4)]
}

fn solve(args: SolveArgs, out: &mut dyn Write) -> CliResult {
    let inst = load_instance(&args.instance)?;
    let config = args.solver.config();
    let (runs, guarantee) = match args.fleet {
        Some(k) => {
            let k = usize::try_from(k).map_err(|_| Failure::Usage("k is too large".into()))?;
            let fleet = k_vehicle_greedy_with(&inst, k, &config)?;
            (fleet.runs, fleet.guarantee)
        }
        None => {
            let run = repairman_3approx_with(&inst, &inst.all_requests(), &config)?;
            (vec![run], p_gamma(1, &config.guarantee().gamma)?)
        }
    };
    emit_runs(&inst, &runs, args.out.as_deref(), out)?;

    let windows = original_windows(&inst);
    let mut rows = vec![vec!["run".to_string(), "profit".into(), "cost".into()]];
    let mut total = int(0);
    for run in &runs {
        let report = validate_run(&inst, run, &windows);
        total += &report.profit;
        rows.push(vec![
            run.label.clone(),
            format_ratio(&report.profit),
            format_ratio(&report.cost),
        ]);
    }
    rows.push(vec!["total".into(), format_ratio(&total)]);
    let [exact, preview] = fraction_cells(&guarantee);
    rows.push(vec!["guarantee".into(), exact, preview]);
    write!(out, "{}", table(&rows, args.porcelain))?;
    Ok(0)
}

fn minvehicle(args: MinVehicleArgs, out: &mut dyn Write) -> CliResult {
    let inst = load_instance(&args.instance)?;
    let cover = single_repair_with(&inst, &args.solver.config())?;
    emit_runs(&inst, &cover.runs, args.out.as_deref(), out)?;

    let mut rows = vec![vec!["run".to_string(), "served".into(), "cost".into()]];
    for run in &cover.runs {
        rows.push(vec![
            run.label.clone(),
            run.served().count().to_string(),
            format_ratio(&run.cost(&inst)),
        ]);
    }
    write!(out, "{}", table(&rows, args.porcelain))?;
    if !cover.tree_metric {
        writeln!(
            out,
            "note: general metric; six-run coverage is only guaranteed on trees"
        )?;
    }
    writeln!(out, "certificate: {}", cover.certificate)?;
    let uncovered: Vec<&str> = cover
        .uncovered
        .iter()
        .map(|&i| inst.request(i).id.as_str())
        .collect();
    if uncovered.is_empty() {
        writeln!(out, "uncovered: -")?;
    } else {
        writeln!(out, "uncovered: {}", uncovered.join(" "))?;
    }
    Ok(match cover.certificate {
        Certificate::Covered => 0,
        Certificate::NoSingleVehicleTour => 3,
    })
}

fn bounds(args: BoundsArgs, out: &mut dyn Write) -> CliResult {
    let table_data = bounds_table(&args.k, &args.gamma)?;
    let rows: Vec<Vec<String>> = table_data
        .rows
        .iter()
        .map(|row| {
            vec![
                row.k.to_string(),
                format_ratio(&row.gamma),
                format_ratio(&row.value),
                row.decimal_preview.clone(),
            ]
        })
        .collect();
    write!(out, "{}", table(&rows, args.porcelain))?;
    Ok(0)
}

fn windows(args: WindowsArgs, out: &mut dyn Write) -> CliResult {
    let inst = load_instance(&args.instance)?;
    let trimmed = effective_windows(&trim_half_unit(&inst));
    let (even, odd) = expand_and_partition(&inst);
    let mut expanded = effective_windows(&even);
    expanded.extend(effective_windows(&odd));
    let mut rows = vec![vec![
        "id".to_string(),
        "node".into(),
        "original".into(),
        "trimmed".into(),
        "expanded".into(),
        "set".into(),
    ]];
    for (i, request) in inst.requests().iter().enumerate() {
        rows.push(vec![
            request.id.clone(),
            request.node.to_string(),
            request.window().to_string(),
            trimmed[&i].to_string(),
            expanded[&i].to_string(),
            set_tag(&request.release).to_string(),
        ]);
    }
    write!(out, "{}", table(&rows, args.porcelain))?;
    Ok(0)
}

fn window_map(inst: &Instance, which: WindowsArg) -> WindowMap {
    match which {
        WindowsArg::Original => original_windows(inst),
        WindowsArg::Trimmed => effective_windows(&trim_half_unit(inst)),
        WindowsArg::ExpandedE => effective_windows(&expand_and_partition(inst).0),
        WindowsArg::ExpandedO => effective_windows(&expand_and_partition(inst).1),
    }
}

fn oracle_guard(flag: Option<usize>, k: usize) -> Result<usize, Failure> {
    if let Some(guard) = flag {
        return Ok(guard);
    }
    match std::env::var(ORACLE_GUARD_ENV) {
        Ok(value) => value
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{ORACLE_GUARD_ENV}={value:?} is not a count"))),
        Err(_) => Ok(default_guard(k)),
    }
}

fn oracle(args: OracleArgs, out: &mut dyn Write) -> CliResult {
    let inst = load_instance(&args.instance)?;
    let k = usize::try_from(args.k).map_err(|_| Failure::Usage("k is too large".into()))?;
    let guard = oracle_guard(args.guard, k)?;
    let windows = window_map(&inst, args.windows);
    let result = brute_force_opt_guarded(&inst, k, &windows, guard)?;
    emit_runs(&inst, &result.runs, args.out.as_deref(), out)?;
    let mut rows = vec![vec!["run".to_string(), "profit".into()]];
    for (run, profit) in result.runs.iter().zip(&result.per_run_profit) {
        rows.push(vec![run.label.clone(), format_ratio(profit)]);
    }
    rows.push(vec!["total".into(), format_ratio(&result.profit)]);
    write!(out, "{}", table(&rows, args.porcelain))?;
    Ok(0)
}

fn gen(args: GenArgs, out: &mut dyn Write) -> CliResult {
    let (inst, witness) = if args.opt1 {
        let (inst, witness) =
            generate_feasible_opt1_instance(args.nodes, args.requests, args.seed)?;
        (inst, Some(witness))
    } else {
        (
            generate_random_instance(args.nodes, args.requests, &args.horizon, args.seed)?,
            None,
        )
    };
    match args.out {
        Some(dir) => {
            fs::create_dir_all(&dir)?;
            fs::write(dir.join("instance.txt"), serialize_instance(&inst))?;
            writeln!(out, "wrote instance.txt")?;
            if let Some(witness) = witness {
                fs::write(dir.join("witness.txt"), witness.to_text(&inst))?;
                writeln!(out, "wrote witness.txt")?;
            }
        }
        None => write!(out, "{}", serialize_instance(&inst))?,
    }
    Ok(0)
}

fn verify(args: VerifyArgs, out: &mut dyn Write) -> CliResult {
    let inst = load_instance(&args.instance)?;
    let runs = parse_runs(&read(&args.run)?, &inst)?;
    if runs.is_empty() {
        return Err(Failure::Error(Error::Validation(format!(
            "{}: no runs found",
            args.run.display()
        ))));
    }
    let windows = window_map(&inst, args.windows);
    let mut all_feasible = true;
    let mut rows = Vec::new();
    let mut details = String::new();
    for run in &runs {
        let report = validate_run(&inst, run, &windows);
        all_feasible &= report.feasible;
        rows.push(vec![
            run.label.clone(),
            if report.feasible {
                "feasible"
            } else {
                "infeasible"
            }
            .to_string(),
            format!("profit {}", format_ratio(&report.profit)),
            format!("cost {}", format_ratio(&report.cost)),
        ]);
        for v in &report.violations {
            details.push_str(&format!(
                "{}: {} at visit {}: {}\n",
                run.label, v.kind, v.index, v.detail
            ));
        }
    }
    write!(out, "{}", table(&rows, args.porcelain))?;
    write!(out, "{details}")?;
    Ok(if all_feasible { 0 } else { 2 })
}
