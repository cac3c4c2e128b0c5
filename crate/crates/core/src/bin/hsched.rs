//! Command-line front end.
//!
//! Exit codes: 0 solved or valid, 1 failed, infeasible or invalid, 2 budget
//! exhausted, 3 usage or input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use harmonic_sched::exact::{export_bin_model, solve_exact, ExactStatus, SearchBudget};
use harmonic_sched::feasibility::{oracle_validate_schedule, validate_schedule, Schedule};
use harmonic_sched::heuristics::{run_portfolio, Method};
use harmonic_sched::lab::experiment::{
    run_success_experiment, run_utilization_experiment, summarize_success, summarize_utilization,
    write_records, Solver,
};
use harmonic_sched::lab::generate::{
    generate_difficult, generate_modified_scheme, generate_split_scheme, DifficultGenConfig,
    SplitGenConfig,
};
use harmonic_sched::lab::io::{load_instance, load_schedule, save_instance, save_schedule};
use harmonic_sched::lab::render::{render_packing, RenderOptions};
use harmonic_sched::transform::schedule_to_packing;
use harmonic_sched::{Instance, Time};

const OK: u8 = 0;
const FAILED: u8 = 1;
const UNKNOWN: u8 = 2;
const USAGE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "hsched",
    version,
    about = "Periodic scheduling with harmonic periods"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    Split,
    Modified,
    Difficult,
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    Success,
    Utilization,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark instance.
    Generate {
        #[arg(long, value_enum)]
        scheme: Scheme,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the schedule the generator built.
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long)]
        base_period: Option<Time>,
        /// Period ratios, comma separated (split and modified schemes).
        #[arg(long, value_delimiter = ',')]
        bases: Option<Vec<Time>>,
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long)]
        save_probability: Option<f64>,
        #[arg(long)]
        divide_probability: Option<f64>,
        /// Period ratio (difficult scheme).
        #[arg(long)]
        ratio: Option<Time>,
        /// Number of periods (difficult scheme).
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Solve an instance.
    Solve {
        /// tff, sff, sbf, lpt, rgff-pes, rgff-opt, exact or portfolio.
        #[arg(long, default_value = "rgff-opt")]
        method: String,
        /// Time limit of the exact solver in seconds.
        #[arg(long, default_value_t = 180.0)]
        budget_s: f64,
        instance: PathBuf,
        #[arg(long)]
        schedule_out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Check a schedule against an instance.
    Validate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
        /// Also run the occurrence-by-occurrence simulation.
        #[arg(long)]
        oracle: bool,
    },
    /// Run an experiment over many instance files and write a CSV table.
    Experiment {
        #[arg(value_enum)]
        kind: Experiment,
        /// Glob pattern of instance files.
        #[arg(long)]
        instances: String,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "lpt,tff,sff,sbf,rgff-pes,rgff-opt"
        )]
        methods: Vec<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 180.0)]
        budget_s: f64,
    },
    /// Write the bin model of an instance as text.
    ExportModel { instance: PathBuf, out: PathBuf },
}

/// Error carrying the exit code to use.
struct Fail(u8, String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(USAGE, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> Result<u8, Fail> {
    match command {
        Command::Generate {
            scheme,
            seed,
            out,
            certificate,
            base_period,
            bases,
            iterations,
            save_probability,
            divide_probability,
            ratio,
            levels,
        } => {
            let generated = match scheme {
                Scheme::Split | Scheme::Modified => {
                    let mut config = match scheme {
                        Scheme::Split => SplitGenConfig::default(),
                        _ => SplitGenConfig::modified(),
                    };
                    config.seed = seed;
                    if let Some(v) = base_period {
                        config.base_period = v;
                    }
                    if let Some(v) = bases {
                        config.bases = v;
                    }
                    if let Some(v) = iterations {
                        config.iterations = v;
                    }
                    if let Some(v) = save_probability {
                        config.save_probability = v;
                    }
                    if let Some(v) = divide_probability {
                        config.divide_probability = v;
                    }
                    match scheme {
                        Scheme::Split => generate_split_scheme(&config)?,
                        _ => generate_modified_scheme(&config)?,
                    }
                }
                Scheme::Difficult => {
                    let mut config = DifficultGenConfig {
                        seed,
                        ..Default::default()
                    };
                    if let Some(v) = base_period {
                        config.base_period = v;
                    }
                    if let Some(v) = ratio {
                        config.ratio = v;
                    }
                    if let Some(v) = levels {
                        config.levels = v;
                    }
                    generate_difficult(&config)?
                }
            };
            save_instance(&generated.instance, &out)?;
            if let Some(path) = certificate {
                save_schedule(
                    &generated.certificate,
                    generated.instance.name.as_deref(),
                    path,
                )?;
            }
            println!("{}: {} jobs", out.display(), generated.instance.len());
            Ok(OK)
        }
        Command::Solve {
            method,
            budget_s,
            instance,
            schedule_out,
            svg,
        } => {
            let inst = load_instance(&instance)?;
            let budget = budget(budget_s)?;
            let (code, schedule) = solve(&inst, &method, budget)?;
            match &schedule {
                Some(s) => {
                    println!("solved by {method}");
                    if let Some(path) = schedule_out {
                        save_schedule(s, inst.name.as_deref(), path)?;
                    }
                    if let Some(path) = svg {
                        write_svg(&inst, s, &path)?;
                    }
                }
                None if code == UNKNOWN => println!("unknown: budget exhausted"),
                None => println!("failed"),
            }
            Ok(code)
        }
        Command::Validate {
            instance,
            schedule,
            oracle,
        } => {
            let inst = load_instance(&instance)?;
            let (sched, _) = load_schedule(&schedule)?;
            let report =
                validate_schedule(&inst, &sched).map_err(|e| Fail(FAILED, e.to_string()))?;
            let mut valid = report.ok();
            if !valid {
                print!("{report}");
            }
            if oracle {
                let agrees = oracle_validate_schedule(&inst, &sched)
                    .map_err(|e| Fail(FAILED, e.to_string()))?;
                if agrees != valid {
                    eprintln!("warning: simulation oracle disagrees with the pairwise check");
                }
                valid &= agrees;
            }
            println!("{}", if valid { "valid" } else { "invalid" });
            Ok(if valid { OK } else { FAILED })
        }
        Command::Experiment {
            kind,
            instances,
            methods,
            out,
            budget_s,
        } => {
            let budget = budget(budget_s)?;
            let solvers = methods
                .iter()
                .map(|m| Solver::parse(m, budget))
                .collect::<Result<Vec<_>, _>>()?;
            let mut paths: Vec<PathBuf> = glob::glob(&instances)?.collect::<Result<_, _>>()?;
            paths.sort();
            let insts = paths
                .iter()
                .map(|p| {
                    let inst = load_instance(p)?;
                    Ok(match inst.name {
                        Some(_) => inst,
                        None => inst.with_name(p.display().to_string()),
                    })
                })
                .collect::<Result<Vec<Instance>, Fail>>()?;
            let records = match kind {
                Experiment::Success => run_success_experiment(&insts, &solvers),
                Experiment::Utilization => run_utilization_experiment(&insts, &solvers),
            };
            write_records(fs::File::create(&out)?, &records)?;
            match kind {
                Experiment::Success => {
                    let summary = summarize_success(&records);
                    println!("{} instances", summary.instances);
                    for (name, count) in summary.methods.iter().chain(&summary.portfolios) {
                        println!("{name:>9} {count}");
                    }
                }
                Experiment::Utilization => {
                    for s in summarize_utilization(&records) {
                        println!("{:>9} {} {:.4}", s.method, s.successes, s.mean_u_final);
                    }
                }
            }
            Ok(OK)
        }
        Command::ExportModel { instance, out } => {
            let inst = load_instance(&instance)?;
            fs::write(&out, export_bin_model(&inst))?;
            Ok(OK)
        }
    }
}

fn budget(seconds: f64) -> Result<SearchBudget, Fail> {
    if !(seconds.is_finite() && seconds > 0.0) {
        return Err(Fail(
            USAGE,
            format!("budget must be a positive number of seconds, got {seconds}"),
        ));
    }
    Ok(SearchBudget::seconds(seconds))
}

fn solve(
    inst: &Instance,
    method: &str,
    budget: SearchBudget,
) -> Result<(u8, Option<Schedule>), Fail> {
    Ok(match method {
        "exact" => {
            let out = solve_exact(inst, budget);
            let code = match out.status {
                ExactStatus::Feasible => OK,
                ExactStatus::Infeasible => FAILED,
                ExactStatus::Unknown => UNKNOWN,
            };
            (code, out.schedule)
        }
        "portfolio" => {
            let out = run_portfolio(inst, &Method::ALL);
            let schedule = out.schedule().cloned();
            (if schedule.is_some() { OK } else { FAILED }, schedule)
        }
        name => {
            let out = name
                .parse::<Method>()
                .map_err(|e| Fail(USAGE, e))?
                .run(inst);
            (if out.solved() { OK } else { FAILED }, out.schedule)
        }
    })
}

fn write_svg(inst: &Instance, schedule: &Schedule, path: &Path) -> Result<(), Fail> {
    let packing = schedule_to_packing(inst, schedule).map_err(|e| Fail(FAILED, e.to_string()))?;
    let svg = render_packing(inst, &packing, &RenderOptions::default())
        .map_err(|e| Fail(FAILED, e.to_string()))?;
    fs::write(path, svg)?;
    Ok(())
}
