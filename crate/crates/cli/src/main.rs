//! Command-line verifier for power means of generalized quadratic Gauss sums.
//!
//! Exit codes: 0 when every case matches, 1 on any mismatch, 2 on invalid
//! input (including a violated hypothesis, which is named on stderr).

mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gauss_moments::verify::selftest::{run_selftest, Fault};
use gauss_moments::verify::table::build_table;
use gauss_moments::verify::{self, BackendChoice, Claim, GridSpec, RunOptions};

use output::Format;

#[derive(Parser)]
#[command(name = "gauss-moments", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a claim over a parameter grid, one report per case
    Verify(VerifyArgs),
    /// Tabulate the power-mean closed form beside its oracle
    Table(TableArgs),
    /// Run every invariant suite at its default grid
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// theorem1, lemma9, t-sum, quad-sum, count, inner-sum, a-sum,
    /// gauss-square, multiplicativity, zhang-p4, zhang-p6, zhang-liu, bounds
    claim: String,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct GridArgs {
    /// Modulus q (repeatable)
    #[arg(long)]
    q: Vec<u64>,
    /// Comma-separated moduli
    #[arg(long, value_delimiter = ',')]
    q_list: Vec<u64>,
    /// Moment order m (repeatable)
    #[arg(long)]
    m: Vec<u32>,
    /// Inclusive range of m, as 2..4, 2..=4 or 2-4
    #[arg(long, value_parser = parse_range)]
    m_range: Option<(u32, u32)>,
    /// Gauss-sum coefficient n, or tuple length for t-sum and count (repeatable)
    #[arg(long, allow_hyphen_values = true)]
    n: Vec<i64>,
    /// Tuple lengths 1..=N for t-sum and count
    #[arg(long)]
    n_max: Option<u32>,
    /// Odd prime p (repeatable)
    #[arg(long)]
    p: Vec<u64>,
    /// Prime-power exponent (repeatable)
    #[arg(long)]
    alpha: Vec<u32>,
    /// Legendre-factor count, binomial index or power k (repeatable)
    #[arg(long)]
    k: Vec<u32>,
    /// Residue target a (repeatable)
    #[arg(long, allow_hyphen_values = true)]
    a: Vec<i64>,
    /// Coprime modulus pair M1,M2 for multiplicativity (repeatable)
    #[arg(long, value_parser = parse_pair)]
    pair: Vec<(u64, u64)>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    backend: BackendArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Absolute float tolerance, replacing the default policy
    #[arg(long)]
    tolerance: Option<f64>,
    /// Record wall time per case (reports are then no longer reproducible)
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct TableArgs {
    /// Modulus q (repeatable)
    #[arg(long)]
    q: Vec<u64>,
    /// Comma-separated square-full moduli
    #[arg(long, value_delimiter = ',')]
    q_list: Vec<u64>,
    /// Moment order m (repeatable)
    #[arg(long)]
    m: Vec<u32>,
    /// Inclusive range of m, as 2..4, 2..=4 or 2-4
    #[arg(long, value_parser = parse_range)]
    m_range: Option<(u32, u32)>,
    /// Gauss-sum coefficient used by the oracle column
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    n: i64,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct SelftestArgs {
    /// Worker threads
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    #[arg(long, hide = true)]
    inject_fault: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
    Auto,
}

impl From<BackendArg> for BackendChoice {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Exact => BackendChoice::Exact,
            BackendArg::Float => BackendChoice::Float,
            BackendArg::Auto => BackendChoice::Auto,
        }
    }
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (lo, hi) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .or_else(|| s.split_once('-'))
        .unwrap_or((s, s));
    let lo: u32 = lo.trim().parse().map_err(|e| format!("bad range start in {s:?}: {e}"))?;
    let hi: u32 = hi.trim().parse().map_err(|e| format!("bad range end in {s:?}: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

fn parse_pair(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected M1,M2, got {s:?}"))?;
    Ok((a.trim().parse().map_err(|e| format!("{e}"))?, b.trim().parse().map_err(|e| format!("{e}"))?))
}

fn merge<T: Clone>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().chain(b).cloned().collect()
}

fn m_values(m: &[u32], range: Option<(u32, u32)>) -> Vec<u32> {
    let mut out = m.to_vec();
    if let Some((lo, hi)) = range {
        out.extend(lo..=hi);
    }
    out
}

impl RunArgs {
    fn options(&self) -> RunOptions {
        RunOptions { backend: self.backend.into(), tolerance: self.tolerance, timing: self.timing }
    }
}

const EXIT_MISMATCH: u8 = 1;
const EXIT_INVALID: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Table(args) => cmd_table(args),
        Command::Selftest(args) => cmd_selftest(args),
    }
}

fn invalid(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_INVALID)
}

fn cmd_verify(args: VerifyArgs) -> ExitCode {
    let claim: Claim = match args.claim.parse() {
        Ok(c) => c,
        Err(e) => return invalid(e),
    };
    let g = &args.grid;
    let grid = GridSpec {
        q: merge(&g.q, &g.q_list),
        m: m_values(&g.m, g.m_range),
        n: g.n.clone(),
        n_max: g.n_max,
        p: g.p.clone(),
        alpha: g.alpha.clone(),
        k: g.k.clone(),
        a: g.a.clone(),
        pairs: g.pair.clone(),
    };
    let results = match verify::verify(claim, &grid, &args.run.options(), args.run.parallel) {
        Ok(r) => r,
        Err(e) => return invalid(e),
    };

    let mut reports = Vec::new();
    let mut code = ExitCode::SUCCESS;
    let mut any_invalid = false;
    for result in results {
        match result {
            Ok(r) => reports.push(r),
            Err(e) => {
                eprintln!("error: {e}");
                any_invalid = true;
            }
        }
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if let Err(e) = output::write_reports(&mut out, &reports, args.run.format) {
        eprintln!("error: writing reports: {e}");
        return ExitCode::from(EXIT_MISMATCH);
    }
    let _ = out.flush();
    if any_invalid {
        code = ExitCode::from(EXIT_INVALID);
    } else if reports.iter().any(|r| !r.matched) {
        code = ExitCode::from(EXIT_MISMATCH);
    }
    code
}

fn cmd_table(args: TableArgs) -> ExitCode {
    let qs = merge(&args.q, &args.q_list);
    let ms = m_values(&args.m, args.m_range);
    let rows = match build_table(&qs, &ms, args.n, &args.run.options(), args.run.parallel) {
        Ok(rows) => rows,
        Err(e) => return invalid(e),
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if let Err(e) = output::write_table(&mut out, &rows, args.run.format) {
        eprintln!("error: writing table: {e}");
        return ExitCode::from(EXIT_MISMATCH);
    }
    let _ = out.flush();
    if rows.iter().any(|r| r.matched == Some(false)) {
        ExitCode::from(EXIT_MISMATCH)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_selftest(args: SelftestArgs) -> ExitCode {
    let fault = match args.inject_fault.as_deref().map(str::parse::<Fault>).transpose() {
        Ok(f) => f,
        Err(e) => return invalid(e),
    };
    let report = run_selftest(args.parallel, fault);
    print!("{}", report.render());
    let _ = io::stdout().flush();
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_MISMATCH)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..4"), Ok((2, 4)));
        assert_eq!(parse_range("2..=4"), Ok((2, 4)));
        assert_eq!(parse_range("2-4"), Ok((2, 4)));
        assert_eq!(parse_range("3"), Ok((3, 3)));
        assert!(parse_range("4..2").is_err());
        assert!(parse_range("a..2").is_err());
    }

    #[test]
    fn pairs() {
        assert_eq!(parse_pair("9,25"), Ok((9, 25)));
        assert!(parse_pair("9").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
