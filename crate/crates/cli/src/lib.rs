//! Command-line front end: argument parsing and dispatch to `lowdisp-core`.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lowdisp_core::bounds::BoundsReport;
use lowdisp_core::classify::classify_grid;
use lowdisp_core::dispersion::DEFAULT_SEARCH_BUDGET;
use lowdisp_core::{
    grid_to_long_csv, hammersley, k_of_epsilon, largest_empty_box, render_figure,
    sparse_cardinality, sparse_grid, suites, Error, FigureFormat, GridSpec, LogBase, PointSet, Rat,
    SearchConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "lowdisp",
    version,
    about = "Sparse-grid point sets, exact dispersion and size bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a point set: P(k,d), P(k(eps),d), or a Hammersley set.
    Gen(GenArgs),
    /// Print |P(k,d)|.
    Card(KdArgs),
    /// Compute the exact dispersion and a witness box.
    Disp(DispArgs),
    /// Report every size bound at one (eps, d).
    Bounds(BoundsArgs),
    /// Classify a grid of (eps, d) pairs into regions.
    Classify(GridArgs),
    /// Render the region map of a grid.
    Figure(GridArgs),
    /// Run a named verification suite (or `all`).
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct KdArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    d: u32,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, conflicts_with_all = ["eps", "hammersley"])]
    k: Option<u32>,
    /// Target dispersion, as `p/q` or a decimal literal; selects k(eps).
    #[arg(long, conflicts_with = "hammersley")]
    eps: Option<String>,
    /// Number of points of a Hammersley set instead of a sparse grid.
    #[arg(long)]
    hammersley: Option<u64>,
    #[arg(long)]
    d: u32,
    #[arg(long, value_enum, default_value_t = GenFormat::Text)]
    format: GenFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GenFormat {
    Text,
    Csv,
}

#[derive(Args, Debug)]
struct DispArgs {
    /// Point-set file in the text format.
    #[arg(long = "in", conflicts_with_all = ["k", "d"], required_unless_present_all = ["k", "d"])]
    input: Option<PathBuf>,
    #[arg(long, requires = "d")]
    k: Option<u32>,
    #[arg(long, requires = "k")]
    d: Option<u32>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Maximum number of candidate boxes to examine.
    #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
    budget: u64,
    #[arg(long, value_enum, default_value_t = DispFormat::Json)]
    format: DispFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DispFormat {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    eps: String,
    #[arg(long)]
    d: u32,
    #[arg(long, value_enum, default_value_t = BoundsFormat::Csv)]
    format: BoundsFormat,
    /// Logarithm base of the two bounds containing a bare `log`. `e` is the
    /// default; `2` is a non-default reading.
    #[arg(long = "log-base", value_enum, default_value_t = LogBaseArg::E)]
    log_base: LogBaseArg,
    /// Omit the CSV header line.
    #[arg(long)]
    no_header: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BoundsFormat {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum LogBaseArg {
    E,
    #[value(name = "2")]
    Two,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long, default_value_t = 2)]
    d_min: u32,
    #[arg(long, default_value_t = 100)]
    d_max: u32,
    /// Smallest q in eps = 1/q.
    #[arg(long, default_value_t = 4)]
    q_min: u32,
    /// Largest q in eps = 1/q.
    #[arg(long, default_value_t = 100)]
    q_max: u32,
    /// `classify`: csv (long form). `figure`: ppm, svg or csv (matrix).
    #[arg(long, value_enum)]
    format: Option<GridFormat>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum GridFormat {
    Csv,
    Ppm,
    Svg,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite name: cardinality, sparse_dispersion, one_dim, leave_one_out, admissible, crossover,
    /// oracle, majorants, regions, determinism, or all.
    #[arg(default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

enum Failure {
    Core(Error),
    Usage(String),
    ChecksFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

type CliResult = Result<(), Failure>;

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code: 0 on success, 1 for bad input or failed checks, 2
/// when a resource limit is hit.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_DOMAIN } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(Failure::ChecksFailed) => EXIT_DOMAIN,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_DOMAIN
        }
        Err(Failure::Core(Error::Io(e))) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(Failure::Core(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_resource() {
                EXIT_RESOURCE
            } else {
                EXIT_DOMAIN
            }
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> CliResult {
    match command {
        Command::Gen(a) => gen(a, stdout),
        Command::Card(a) => {
            if a.d == 0 {
                return Err(Failure::Usage("--d must be at least 1".into()));
            }
            writeln!(stdout, "{}", sparse_cardinality(a.k, a.d))?;
            Ok(())
        }
        Command::Disp(a) => disp(a, stdout),
        Command::Bounds(a) => bounds(a, stdout),
        Command::Classify(a) => grid(a, false, stdout),
        Command::Figure(a) => grid(a, true, stdout),
        Command::Verify(a) => verify(a, stdout),
    }
}

fn parse_eps(s: &str) -> Result<Rat, Failure> {
    Rat::parse_flexible(s).map_err(|e| Failure::Usage(format!("--eps {s:?}: {e}")))
}

/// Runs `body` against the `--out` file, or stdout when absent.
fn with_output(
    out: Option<&Path>,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> CliResult,
) -> CliResult {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            body(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => body(stdout),
    }
}

fn gen(a: GenArgs, stdout: &mut dyn Write) -> CliResult {
    let ps = match (a.k, a.eps.as_deref(), a.hammersley) {
        (Some(k), None, None) => sparse_grid(k, a.d)?,
        (None, Some(eps), None) => sparse_grid(k_of_epsilon(&parse_eps(eps)?)?, a.d)?,
        (None, None, Some(n)) => hammersley(n, a.d)?,
        _ => {
            return Err(Failure::Usage(
                "give exactly one of --k, --eps or --hammersley".into(),
            ))
        }
    };
    with_output(a.out.as_deref(), stdout, |w| {
        match a.format {
            GenFormat::Text => ps.write_text(w)?,
            GenFormat::Csv => ps.write_csv(w)?,
        }
        Ok(())
    })
}

fn disp(a: DispArgs, stdout: &mut dyn Write) -> CliResult {
    let ps = match (&a.input, a.k, a.d) {
        (Some(path), _, _) => PointSet::read_text(BufReader::new(File::open(path)?))?,
        (None, Some(k), Some(d)) => sparse_grid(k, d)?,
        _ => return Err(Failure::Usage("give --in, or both --k and --d".into())),
    };
    let cfg = SearchConfig {
        budget: a.budget,
        ..SearchConfig::default()
    }
    .with_threads(a.threads);
    let result = largest_empty_box(&ps, &cfg)?;
    with_output(a.out.as_deref(), stdout, |w| {
        match a.format {
            DispFormat::Json => writeln!(w, "{}", result.to_json())?,
            DispFormat::Text => {
                writeln!(
                    w,
                    "set: {} ({} points, d = {})",
                    ps.label(),
                    ps.len(),
                    ps.dim()
                )?;
                writeln!(w, "dispersion: {}", result.volume)?;
                writeln!(w, "witness: {}", result.witness)?;
                writeln!(
                    w,
                    "boxes examined: {}, pruned: {}",
                    result.boxes_examined, result.pruned
                )?;
            }
        }
        Ok(())
    })
}

fn bounds(a: BoundsArgs, stdout: &mut dyn Write) -> CliResult {
    let eps = parse_eps(&a.eps)?;
    let base = match a.log_base {
        LogBaseArg::E => LogBase::Natural,
        LogBaseArg::Two => LogBase::Two,
    };
    let report = BoundsReport::compute(&eps, a.d, base)?;
    with_output(a.out.as_deref(), stdout, |w| {
        match a.format {
            BoundsFormat::Csv => {
                if base == LogBase::Two {
                    writeln!(
                        w,
                        "# log base 2 (non-default) in the rudolf and sosnovec bounds"
                    )?;
                }
                if !a.no_header {
                    writeln!(w, "{}", BoundsReport::csv_header())?;
                }
                writeln!(w, "{}", report.csv_row())?;
            }
            BoundsFormat::Json => writeln!(w, "{}", report.to_json())?,
        }
        Ok(())
    })
}

fn grid(a: GridArgs, figure: bool, stdout: &mut dyn Write) -> CliResult {
    let format = a.format.unwrap_or(if figure {
        GridFormat::Ppm
    } else {
        GridFormat::Csv
    });
    if !figure && format != GridFormat::Csv {
        return Err(Failure::Usage(
            "classify writes csv; use the figure command for ppm or svg".into(),
        ));
    }
    if a.d_min > a.d_max || a.q_min > a.q_max {
        return Err(Failure::Usage("empty grid range".into()));
    }
    let spec = GridSpec::ranges(a.d_min, a.d_max, a.q_min, a.q_max)?;
    let matrix = match a.threads {
        Some(n) => rayon_pool(n)?.install(|| classify_grid(&spec))?,
        None => classify_grid(&spec)?,
    };
    let bytes = if figure {
        let f = match format {
            GridFormat::Csv => FigureFormat::Csv,
            GridFormat::Ppm => FigureFormat::Ppm,
            GridFormat::Svg => FigureFormat::Svg,
        };
        render_figure(&matrix, f)
    } else {
        grid_to_long_csv(&spec, &matrix).into_bytes()
    };
    with_output(a.out.as_deref(), stdout, |w| {
        w.write_all(&bytes)?;
        Ok(())
    })
}

fn rayon_pool(threads: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Failure::Usage(format!("cannot start {threads} worker threads: {e}")))
}

fn verify(a: VerifyArgs, stdout: &mut dyn Write) -> CliResult {
    let names: Vec<&str> = if a.suite == "all" {
        suites::SUITE_NAMES.to_vec()
    } else {
        vec![a.suite.as_str()]
    };
    let mut all_passed = true;
    for name in names {
        let report = suites::run_one(name, a.threads)?;
        writeln!(stdout, "{report}")?;
        all_passed &= report.passed();
    }
    if all_passed {
        Ok(())
    } else {
        Err(Failure::ChecksFailed)
    }
}
