use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use conehilb::{Strategy, SubdivisionConfig};
use conehilb_cli::{parse_scale, run, Goals, RunOptions};
use num_bigint::BigInt;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    None,
    Ip,
    Approx,
    IpThenApprox,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GoalArg {
    Hb,
    Series,
    All,
}

/// Hilbert basis and Hilbert series of a pointed rational cone.
///
/// Results go to the input path with `.in` replaced by `.out`.
#[derive(Parser, Debug)]
#[command(name = "conehilb", version)]
struct Args {
    /// Input file.
    input: PathBuf,

    #[arg(long, value_enum, default_value = "ip-then-approx")]
    strategy: StrategyArg,

    /// Simplices with larger determinant are subdivided.
    #[arg(long, default_value = "1000000")]
    volume_bound: BigInt,

    /// Per-simplex IP time limit is this times (log10 det)^2 seconds; `a/b` accepted.
    #[arg(long, default_value = "1", value_parser = parse_scale)]
    time_limit_scale: f64,

    /// Worker threads, 0 for one per core.
    #[arg(long, default_value_t = 0)]
    threads: usize,

    /// Also write the statistics as CSV to this path.
    #[arg(long)]
    stats_csv: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "all")]
    goal: GoalArg,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let strategy = match args.strategy {
        StrategyArg::None => Strategy::None,
        StrategyArg::Ip => Strategy::Ip,
        StrategyArg::Approx => Strategy::Approx,
        StrategyArg::IpThenApprox => Strategy::IpThenApprox,
    };
    let goals = match args.goal {
        GoalArg::Hb => Goals {
            hilbert_series: false,
            ..Goals::all()
        },
        GoalArg::Series => Goals {
            hilbert_basis: false,
            ..Goals::all()
        },
        GoalArg::All => Goals::all(),
    };
    let opts = RunOptions {
        input_path: args.input,
        goals,
        subdivision: SubdivisionConfig {
            strategy,
            volume_bound: args.volume_bound,
            time_limit_scale: args.time_limit_scale,
            ..Default::default()
        },
        threads: args.threads,
        stats_csv_path: args.stats_csv,
    };
    match run(&opts) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("conehilb: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
