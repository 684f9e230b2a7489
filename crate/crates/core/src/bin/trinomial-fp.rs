use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use trinomial_fp::sweep::{parse_checks, parse_prime_range};
use trinomial_fp::{build_dp, run_sweep, FieldCtx, Format, SweepConfig};

#[derive(Parser)]
#[command(
    name = "trinomial-fp",
    version,
    about = "Trinomial coefficient and determinant checks over prime fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks over a range of primes.
    Sweep(SweepArgs),
}

#[derive(clap::Args)]
struct SweepArgs {
    /// Inclusive prime range, LO..HI.
    #[arg(long, default_value = "3..60")]
    primes: String,
    /// Comma-separated check ids, or `all`.
    #[arg(long, default_value = "all")]
    checks: String,
    #[arg(long, default_value_t = 60)]
    exhaustive_max_p: u64,
    #[arg(long, default_value_t = 8)]
    samples_per_prime: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (defaults to available parallelism).
    #[arg(long)]
    threads: Option<usize>,
    /// json or csv.
    #[arg(long, default_value = "json")]
    format: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit nonzero when any discrepancy is found.
    #[arg(long)]
    fail_on_discrepancy: bool,
    /// Print the matrix D_p(c,d) for `p,c,d` and exit.
    #[arg(long, value_name = "P,C,D")]
    dump_matrix: Option<String>,
}

fn dump_matrix(value: &str) -> anyhow::Result<String> {
    let parts: Vec<u64> = value
        .split(',')
        .map(|t| t.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("bad --dump-matrix value `{value}`"))?;
    let [p, c, d] = parts[..] else {
        bail!("--dump-matrix expects p,c,d")
    };
    let ctx = FieldCtx::new(p)?;
    Ok(build_dp(ctx.elem(c), ctx.elem(d))?.dump())
}

fn sweep(args: SweepArgs) -> anyhow::Result<i32> {
    if let Some(value) = &args.dump_matrix {
        print!("{}", dump_matrix(value)?);
        return Ok(0);
    }
    let (prime_lo, prime_hi) = parse_prime_range(&args.primes)?;
    let format: Format = args.format.parse()?;
    let threads = args
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let config = SweepConfig {
        prime_lo,
        prime_hi,
        checks: parse_checks(&args.checks)?,
        exhaustive_max_p: args.exhaustive_max_p,
        samples_per_prime: args.samples_per_prime,
        seed: args.seed,
        threads,
        format,
        fail_on_discrepancy: args.fail_on_discrepancy,
    };
    let report = run_sweep(&config)?;
    let text = report.render(format)?;
    match &args.out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    eprintln!(
        "{} instances, {} discrepancies, {} hard failures",
        report.meta.instance_count,
        report.summary.discrepancies.len(),
        report.hard_failures()
    );
    Ok(report.exit_code(config.fail_on_discrepancy))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(args) => sweep(args),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(64)
        }
    }
}
