use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use modfloor::bench::{emit_tables, run_benchmark, write_goldens, BenchmarkConfig};
use modfloor::{Error, Perturbation, Scheme};

/// Upscaling benchmark: floor vs. round vs. modulo improved-floor bilinear interpolation.
#[derive(Debug, Parser)]
#[command(name = "modfloor-bench", version)]
struct Args {
    /// Reference image (PGM or 8-bit grayscale PNG).
    #[arg(long, required_unless_present = "tables")]
    input: Option<PathBuf>,

    /// Comma-separated integer scale factors.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
    scales: Vec<u32>,

    /// Comma-separated schemes: ba_f, ba_r, ba_m, ba_m_swap.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "ba_f,ba_r,ba_m,ba_m_swap"
    )]
    schemes: Vec<String>,

    /// Perturbation added to each weight before inversion.
    #[arg(long = "L", default_value_t = 1e-9)]
    l: f64,

    /// Timed repetitions per scheme and scale.
    #[arg(long, default_value_t = 10)]
    repetitions: usize,

    /// Output directory.
    #[arg(long, default_value = "bench-out")]
    out: PathBuf,

    /// Only write the rounding tables and round-off error profiles.
    #[arg(long)]
    tables: bool,

    /// Also write timing-free golden metrics (metrics.golden.csv).
    #[arg(long)]
    seed_goldens: bool,
}

fn run(args: Args) -> Result<(), Error> {
    if args.tables {
        let files = emit_tables(&args.out)?;
        for p in [files.table1, files.table2, files.fig2, files.fig3] {
            println!("wrote {}", p.display());
        }
        return Ok(());
    }

    let l = Perturbation::new(args.l)?;
    let schemes = args
        .schemes
        .iter()
        .map(|s| Scheme::parse_with(s, l))
        .collect::<Result<Vec<_>, _>>()?;
    let input = args.input.expect("clap enforces --input without --tables");
    let cfg = BenchmarkConfig {
        scales: args.scales,
        schemes,
        l,
        repetitions: args.repetitions,
        ..BenchmarkConfig::new(input, args.out)
    };
    let outcome = run_benchmark(&cfg)?;
    println!(
        "wrote {} ({} rows)",
        outcome.metrics_csv.display(),
        outcome.metric_rows()
    );
    println!("wrote {}", outcome.timing_csv.display());
    if args.seed_goldens {
        println!("wrote {}", write_goldens(&cfg, &outcome)?.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!(
                "error: kind={} message={}",
                e.kind(),
                e.to_string().replace('\n', " ")
            );
            ExitCode::FAILURE
        }
    }
}
