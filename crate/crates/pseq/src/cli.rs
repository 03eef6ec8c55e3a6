//! The `pseq` command line tool.
//!
//! Exit statuses: 0 success (or an ideal verdict), 1 a negative verdict,
//! 2 invalid input, 3 search budget exceeded.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use pseq_core::analysis::correlation_spectrum_exact;
use pseq_core::gf::FieldCtx;
use pseq_core::search::{SearchError, SearchSpec};
use pseq_core::{analyze, find_primitive_poly, mseq_generate, CyclotomicInt, Sequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::format::{emit_stream, seq_emit, seq_parse};
use crate::parallel::{search_parallel, SearchHeader};
use crate::report::ReportJson;
use crate::spectrum::{
    correlation_spectrum_fft, correlation_spectrum_naive, fft_cross_check, max_deviation,
    FFT_TOLERANCE,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Set to any value to emit `"elapsed_ms": null` so search output is
/// reproducible byte for byte.
pub const NO_TIMING_ENV: &str = "PSEQ_NO_TIMING";

#[derive(Debug, Parser)]
#[command(
    name = "pseq",
    version,
    about = "Generate and analyze p-ary sequences with ideal two-level autocorrelation"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write an m-sequence of period p^m - 1.
    Generate(GenerateArgs),
    /// Report balance and autocorrelation verdicts for a sequence file.
    Analyze(AnalyzeArgs),
    /// Emit the p constant shifts of an ideal sequence.
    Family(FamilyArgs),
    /// Enumerate every ideal sequence of a given period.
    Search(SearchArgs),
    /// Time full-spectrum computations.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long = "p")]
    p: u32,
    #[arg(long = "m")]
    m: usize,
    /// Reduction polynomial c0,c1,..,cm (constant term first); must be primitive.
    #[arg(long, value_delimiter = ',')]
    poly: Option<Vec<u32>>,
    /// Move the exceptional element from 0 to this residue.
    #[arg(long = "shift-to")]
    shift_to: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    rotate: Option<i64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// Sequence file, or `-` for standard input.
    file: PathBuf,
    /// Also compare the FFT spectrum with the exact one.
    #[arg(long)]
    fft: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    file: PathBuf,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long = "p")]
    p: u32,
    #[arg(long = "N")]
    n: usize,
    #[arg(long)]
    canonical: bool,
    /// Disable balance pruning (verification mode).
    #[arg(long = "no-prune")]
    no_prune: bool,
    #[arg(long, env = "PSEQ_JOBS")]
    jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Exact,
    Naive,
    Fft,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("size").required(true).args(["m", "n"])))]
struct BenchArgs {
    #[arg(long = "p")]
    p: u32,
    /// Benchmark the m-sequence of period p^m - 1.
    #[arg(long = "m")]
    m: Option<usize>,
    /// Benchmark a seeded pseudo-random sequence of this period.
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long, value_enum)]
    method: Method,
    #[arg(long, default_value_t = 5)]
    reps: usize,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Negative(String),
    #[error("{0}")]
    Budget(SearchError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn status(&self) -> i32 {
        match self {
            CliError::Negative(_) => EXIT_NEGATIVE,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Input(_) | CliError::Io(_) => EXIT_INPUT,
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a, out, err),
        Command::Analyze(a) => cmd_analyze(a, out),
        Command::Family(a) => cmd_family(a, out),
        Command::Search(a) => cmd_search(a, out),
        Command::Bench(a) => cmd_bench(a, out, err),
    };
    match result {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.status()
        }
    }
}

fn read_sequence(path: &Path) -> Result<Sequence, CliError> {
    let mut bytes = Vec::new();
    if path == Path::new("-") {
        std::io::stdin().read_to_end(&mut bytes)?;
    } else {
        bytes = std::fs::read(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    }
    seq_parse(&bytes).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn cmd_generate(
    a: GenerateArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let ctx = match a.poly {
        Some(poly) => {
            if poly.len() != a.m + 1 {
                return Err(input(format!(
                    "--poly has {} coefficients, degree {} needs {}",
                    poly.len(),
                    a.m,
                    a.m + 1
                )));
            }
            FieldCtx::new_primitive(a.p, poly).map_err(input)?
        }
        None => find_primitive_poly(a.p, a.m).map_err(input)?,
    };
    let coeffs: Vec<String> = ctx.reduction_poly().iter().map(u32::to_string).collect();
    writeln!(
        err,
        "reduction polynomial: {ctx} (coefficients {})",
        coeffs.join(",")
    )?;

    let mut seq = mseq_generate(&ctx).map_err(input)?;
    if let Some(c) = a.shift_to {
        seq = seq.constant_shift(0, c).map_err(input)?;
    }
    if let Some(k) = a.rotate {
        seq = seq.cyclic_shift(k);
    }
    let text = seq_emit(&seq);
    match a.out {
        Some(path) => {
            std::fs::write(&path, text).map_err(|e| input(format!("{}: {e}", path.display())))?
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn cmd_analyze(a: AnalyzeArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let seq = read_sequence(&a.file)?;
    let report = analyze(&seq);
    let deviation = a.fft.then(|| fft_cross_check(&seq).1);
    let json = ReportJson::new(&report, deviation);
    match a.format {
        Format::Json => writeln!(out, "{}", json.to_json())?,
        Format::Text => write!(out, "{}", json.to_text())?,
    }
    Ok(if report.itla { EXIT_OK } else { EXIT_NEGATIVE })
}

#[derive(Serialize)]
struct FamilyHeader {
    p: u32,
    #[serde(rename = "N")]
    n: usize,
    count: usize,
    exceptional: Vec<u32>,
}

fn cmd_family(a: FamilyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let seq = read_sequence(&a.file)?;
    let report = analyze(&seq);
    if !report.itla {
        return Err(CliError::Negative(format!(
            "input does not have ideal two-level autocorrelation (fails at shift {})",
            report.first_failing_shift.unwrap_or(0)
        )));
    }
    let Some(base) = report.balance.exceptional() else {
        return Err(CliError::Negative(
            "input has no exceptional element".into(),
        ));
    };
    let mut members = Vec::with_capacity(seq.p() as usize);
    for c in 0..seq.p() {
        let member = seq.constant_shift(base, c).map_err(input)?;
        let check = analyze(&member);
        // holds for every ideal input; verified rather than assumed
        if !check.itla || check.balance.exceptional() != Some(c) {
            return Err(CliError::Negative(format!(
                "constant shift to {c} lost the property"
            )));
        }
        members.push(member);
    }
    let header = FamilyHeader {
        p: seq.p(),
        n: seq.period(),
        count: members.len(),
        exceptional: (0..seq.p()).collect(),
    };
    out.write_all(emit_stream(&header, &members).as_bytes())?;
    Ok(EXIT_OK)
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn cmd_search(a: SearchArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = SearchSpec {
        p: a.p,
        period: a.n,
        canonicalize: a.canonical,
        prune_balance: !a.no_prune,
    };
    let jobs = a.jobs.unwrap_or_else(default_jobs);
    let run = search_parallel(&spec, jobs).map_err(|e| match e {
        SearchError::BudgetExceeded { .. } => CliError::Budget(e),
        other => input(other),
    })?;
    let timing = std::env::var_os(NO_TIMING_ENV).is_none();
    let header = SearchHeader::new(&spec, &run, timing);
    out.write_all(emit_stream(&header, &run.result.sequences).as_bytes())?;
    Ok(EXIT_OK)
}

fn bench_sequence(a: &BenchArgs) -> Result<Sequence, CliError> {
    match (a.m, a.n) {
        (Some(m), _) => {
            let ctx = find_primitive_poly(a.p, m).map_err(input)?;
            mseq_generate(&ctx).map_err(input)
        }
        (None, Some(n)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let data = (0..n).map(|_| rng.gen_range(0..a.p.max(1))).collect();
            Sequence::new(a.p, data).map_err(input)
        }
        (None, None) => unreachable!("clap requires --m or --N"),
    }
}

/// Run-length summary such as `15, -1x14`, or `None` when some value is
/// not a rational integer.
fn summarize_spectrum(exact: &[CyclotomicInt]) -> Option<String> {
    let values: Option<Vec<i64>> = exact.iter().map(CyclotomicInt::as_int).collect();
    let values = values?;
    let mut runs: Vec<(i64, usize)> = Vec::new();
    for v in values {
        match runs.last_mut() {
            Some((last, count)) if *last == v => *count += 1,
            _ => runs.push((v, 1)),
        }
    }
    let parts: Vec<String> = runs
        .iter()
        .map(|&(v, c)| {
            if c == 1 {
                v.to_string()
            } else {
                format!("{v}x{c}")
            }
        })
        .collect();
    Some(if parts.len() > 8 {
        format!("{}, ... ({} runs)", parts[..8].join(", "), parts.len())
    } else {
        parts.join(", ")
    })
}

fn time_method(seq: &Sequence, method: Method) -> f64 {
    let start = Instant::now();
    match method {
        Method::Exact => drop(correlation_spectrum_exact(seq)),
        Method::Naive => drop(correlation_spectrum_naive(seq)),
        Method::Fft => drop(correlation_spectrum_fft(seq)),
    }
    start.elapsed().as_secs_f64() * 1e3
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    if a.reps == 0 {
        return Err(input("--reps must be at least 1"));
    }
    let seq = bench_sequence(&a)?;
    let n = seq.period();

    // never time a method whose answers disagree with the exact spectrum
    let exact = correlation_spectrum_exact(&seq);
    let mut deviation = max_deviation(&correlation_spectrum_fft(&seq), &exact);
    if a.method == Method::Naive {
        deviation = deviation.max(max_deviation(&correlation_spectrum_naive(&seq), &exact));
    }
    if deviation.is_nan() || deviation > FFT_TOLERANCE {
        return Err(input(format!(
            "cross-check failed: max deviation {deviation:e} exceeds {FFT_TOLERANCE:e}; no timings reported"
        )));
    }

    let mut times: Vec<f64> = (0..a.reps).map(|_| time_method(&seq, a.method)).collect();
    times.sort_by(f64::total_cmp);
    let mean = times.iter().sum::<f64>() / times.len() as f64;
    let median = times[times.len() / 2];
    let method = format!("{:?}", a.method).to_lowercase();
    let spectrum = summarize_spectrum(&exact).unwrap_or_else(|| "not rational".into());

    writeln!(
        out,
        "method\tp\tN\treps\tmin_ms\tmedian_ms\tmean_ms\tmax_dev\tspectrum"
    )?;
    writeln!(
        out,
        "{method}\t{}\t{n}\t{}\t{:.3}\t{:.3}\t{:.3}\t{deviation:.1e}\t{spectrum}",
        a.p, a.reps, times[0], median, mean
    )?;

    if n >= 4096 && a.method != Method::Exact {
        let fft = time_method(&seq, Method::Fft);
        let naive = time_method(&seq, Method::Naive);
        if fft >= naive {
            writeln!(
                err,
                "warning: fft ({fft:.3} ms) not faster than naive ({naive:.3} ms) at N={n}"
            )?;
        }
    }
    Ok(EXIT_OK)
}
