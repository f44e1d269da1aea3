use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pinchsec_cli::csv_out::emit;
use pinchsec_cli::lengths::ModelChoice;
use pinchsec_cli::report::{render, McReport, OptimizeReport, SopReport};
use pinchsec_cli::sweep::run_sweep;
use pinchsec_cli::table1::{default_rows, landscape, table1, LANDSCAPE_STEP_M};
use pinchsec_cli::{load_config, Axis, CliError, LengthSpec, Mode, SweepSpec};
use pinchsec_core::coupling::max_length;
use pinchsec_core::montecarlo::{estimate_sop, estimate_sop_fixed_antenna, McSettings};
use pinchsec_core::{solve_p1, sop_closed_form, SystemConfig};

#[derive(Parser)]
#[command(name = "pinchsec", version, about = "Secrecy outage of pinching-antenna NOMA")]
struct Cli {
    /// Config file of dotted `key = value` lines; defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Monte Carlo seed.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Monte Carlo samples per evaluation.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    samples: u64,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Point {
    /// Overrides `link.rho_t_db`.
    #[arg(long, allow_hyphen_values = true)]
    rho_t_db: Option<f64>,
}

#[derive(Args, Clone)]
struct LengthArgs {
    /// flexible, equal[:eps] or proportional[:length_m].
    #[arg(long, default_value = "flexible")]
    model: String,
    #[arg(long)]
    l1: Option<f64>,
    #[arg(long)]
    l2: Option<f64>,
}

impl LengthArgs {
    fn spec(&self) -> Result<LengthSpec, CliError> {
        Ok(LengthSpec {
            model: self.model.parse::<ModelChoice>()?,
            l1: self.l1,
            l2: self.l2,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form SOP breakdown at one point.
    Sop {
        #[command(flatten)]
        point: Point,
        #[command(flatten)]
        lengths: LengthArgs,
    },
    /// CSV over one swept parameter.
    Sweep {
        /// AXIS START STOP STEP; AXIS is rho_t_db, l1, l2, cell_side_c1, cell_side_c2 or alpha2.
        #[arg(long, num_args = 4, value_names = ["AXIS", "START", "STOP", "STEP"], allow_hyphen_values = true)]
        axis: Vec<String>,
        /// Comma list of closed_form, monte_carlo, fixed_antenna_mc, optimize.
        #[arg(long, value_delimiter = ',', default_value = "closed_form")]
        modes: Vec<String>,
        #[command(flatten)]
        lengths: LengthArgs,
    },
    /// Minimum-SOP coupling lengths.
    Optimize {
        #[command(flatten)]
        point: Point,
        /// Also write SOP versus L1 at the optimal L2 to this CSV.
        #[arg(long)]
        landscape: Option<PathBuf>,
    },
    /// Optimal L1 for 17 to 23 dB, analytic and on a 1e-4 m grid.
    Table1,
    /// Monte Carlo SOP estimate.
    Mc {
        #[command(flatten)]
        point: Point,
        #[command(flatten)]
        lengths: LengthArgs,
        /// Single antenna above the origin at full power instead of two PAs.
        #[arg(long)]
        fixed_antenna: bool,
    },
    /// SOP versus L1 at 1e-5 m steps.
    Fig8 {
        #[command(flatten)]
        point: Point,
        /// Defaults to the longest admissible length.
        #[arg(long)]
        l2: Option<f64>,
    },
}

fn number(field: &'static str, s: &str) -> Result<f64, CliError> {
    s.parse().map_err(|e| CliError::Sweep {
        field,
        reason: format!("`{s}`: {e}"),
    })
}

fn at_point(config: SystemConfig, point: Point) -> Result<SystemConfig, CliError> {
    match point.rho_t_db {
        Some(db) => pinchsec_cli::config_file::check(config.with_rho_t_db(db)),
        None => Ok(config),
    }
}

fn write_text(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Write {
            path: p.clone(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = load_config(cli.config.as_deref())?;
    let mc = McSettings::new(cli.samples, cli.seed);
    let out = cli.out.as_ref();
    match cli.command {
        Command::Sop { point, lengths } => {
            let cfg = at_point(config, point)?;
            let l = lengths.spec()?.resolve(&cfg)?;
            write_text(out, &render(&SopReport::new(&cfg, &l))?)
        }
        Command::Sweep { axis, modes, lengths } => {
            if axis.is_empty() {
                return Err(CliError::Sweep {
                    field: "axis",
                    reason: "missing --axis AXIS START STOP STEP".into(),
                });
            }
            let modes = modes.iter().map(|m| m.parse::<Mode>()).collect::<Result<Vec<_>, _>>()?;
            let spec = SweepSpec::new(
                axis[0].parse::<Axis>()?,
                number("start", &axis[1])?,
                number("stop", &axis[2])?,
                number("step", &axis[3])?,
                modes,
            )?;
            let rows = run_sweep(&config, &lengths.spec()?, &spec, &mc)?;
            emit(out.map(PathBuf::as_path), &rows)
        }
        Command::Optimize { point, landscape: path } => {
            let cfg = at_point(config, point)?;
            let result = solve_p1(&cfg);
            if let Some(p) = path {
                emit(Some(&p), &landscape(&cfg, result.certified.l2(), LANDSCAPE_STEP_M)?)?;
            }
            let report = OptimizeReport {
                rho_t_db: cfg.link.rho_t_db,
                result,
            };
            write_text(out, &render(&report)?)
        }
        Command::Table1 => emit(out.map(PathBuf::as_path), &table1(&config, default_rows())?),
        Command::Mc { point, lengths, fixed_antenna } => {
            let cfg = at_point(config, point)?;
            let report = if fixed_antenna {
                McReport {
                    rho_t_db: cfg.link.rho_t_db,
                    seed: cli.seed,
                    lengths: None,
                    sop_cf: None,
                    estimate: estimate_sop_fixed_antenna(&cfg, &mc),
                }
            } else {
                let l = lengths.spec()?.resolve(&cfg)?;
                McReport {
                    rho_t_db: cfg.link.rho_t_db,
                    seed: cli.seed,
                    lengths: Some(l),
                    sop_cf: Some(sop_closed_form(&cfg, &l).sop),
                    estimate: estimate_sop(&cfg, &l, &mc),
                }
            };
            write_text(out, &render(&report)?)
        }
        Command::Fig8 { point, l2 } => {
            let cfg = at_point(config, point)?;
            let l2 = l2.unwrap_or_else(|| max_length(cfg.kappa()));
            emit(out.map(PathBuf::as_path), &landscape(&cfg, l2, LANDSCAPE_STEP_M)?)
        }
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("PINCHSEC_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| CliError::Argument {
        field: "PINCHSEC_THREADS",
        reason: format!("expected a positive integer, got `{v}`"),
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Argument {
            field: "PINCHSEC_THREADS",
            reason: e.to_string(),
        })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|()| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
