use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use steercert::commands::{self, Arithmetic, Options, ScanMode};
use steercert::error::{Error, Result};
use steercert::report::RunReport;

#[derive(Parser)]
#[command(name = "steercert", version, about = "Steering certification case studies and scenario checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Args)]
struct Global {
    /// Number of matched measurement settings (2 or 3).
    #[arg(long, global = true, default_value_t = 2)]
    settings: usize,
    /// Bloch mesh size; werner-scan bisection defaults to 642.
    #[arg(long, global = true)]
    mesh: Option<usize>,
    #[arg(long, global = true, default_value_t = steercert::lp::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value = "float")]
    mode: Mode,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the scan or sweep table here.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Randomly rotate the mesh.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Singlet with matched Pauli settings.
    SingletCjwr {
        /// Use a Werner state with this visibility instead.
        #[arg(long)]
        werner_p: Option<f64>,
    },
    /// Werner visibility scan.
    WernerScan {
        /// Evaluate an evenly spaced grid of this many points instead of bisecting.
        #[arg(long, conflicts_with = "witness_only")]
        grid: Option<usize>,
        /// Only the CJWR witness, no LPs.
        #[arg(long)]
        witness_only: bool,
        /// Bisection resolution.
        #[arg(long, default_value_t = 1e-3)]
        scan_tol: f64,
    },
    /// Popescu-Rohrlich box.
    Prbox,
    /// Reid criterion for a two-mode squeezed vacuum.
    Reid {
        #[arg(long, default_value_t = 0.69, allow_hyphen_values = true)]
        r: f64,
        /// Sweep as start:stop:step.
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Run the checks requested by a scenario file.
    Check { file: PathBuf },
}

fn parse_sweep(s: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidParameter(format!("sweep {s:?}: {e}")))?;
    match parts[..] {
        [a, b, c] => Ok((a, b, c)),
        _ => Err(Error::InvalidParameter(format!("sweep {s:?} is not start:stop:step"))),
    }
}

fn run(cli: Cli) -> Result<RunReport> {
    let g = &cli.global;
    let mut opts = Options {
        tol: g.tol,
        mode: match g.mode {
            Mode::Exact => Arithmetic::Exact,
            Mode::Float => Arithmetic::Float,
        },
        seed: g.seed,
        ..Options::default()
    };
    if let Some(m) = g.mesh {
        opts.mesh = m;
    }
    match cli.command {
        Command::SingletCjwr { werner_p } => commands::cmd_singlet_cjwr(g.settings, werner_p, &opts),
        Command::WernerScan {
            grid,
            witness_only,
            scan_tol,
        } => {
            let mode = match (grid, witness_only) {
                (_, true) => ScanMode::WitnessOnly,
                (Some(points), _) => ScanMode::Grid { points },
                (None, false) => {
                    opts.mesh = g.mesh.unwrap_or(642);
                    ScanMode::Bisect
                }
            };
            opts.scan_tol = scan_tol;
            commands::cmd_werner_scan(g.settings, mode, &opts)
        }
        Command::Prbox => commands::cmd_prbox(&opts),
        Command::Reid { r, sweep } => commands::cmd_reid(r, sweep.as_deref().map(parse_sweep).transpose()?),
        Command::Check { file } => commands::cmd_check(&file, &opts),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let out = cli.global.out.clone();
    let csv = cli.global.csv.clone();
    let result = run(cli).and_then(|report| {
        if let Some(p) = &out {
            report.write(p)?;
        }
        if let Some(p) = &csv {
            match &report.table {
                Some(t) => t.write_csv(p)?,
                None => log::warn!("--csv given but {} produced no table", report.command),
            }
        }
        print!("{}", report.summary());
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 1 } else { 2 })
        }
    }
}
