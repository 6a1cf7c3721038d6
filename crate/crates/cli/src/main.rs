//! `demotrend`: GDP-coupled population projections from the command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use demotrend_core::forecast::DEFAULT_FERTILITY_CAP;
use demotrend_core::report::{OutputFormat, ScopeSelection};
use demotrend_core::scenarios::ScenarioSpec;
use demotrend_core::{run, RunConfig, HORIZON_YEAR};

#[derive(Debug, Parser)]
#[command(
    name = "demotrend",
    version,
    about = "Project national populations under GDP growth scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit rate ensembles, project every country and write the report files.
    Run(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Directory holding countries.csv, rates.csv, gdp_hist.csv, gdp_baseline.csv and base_pop.csv.
    #[arg(long, env = "DEMOTREND_DATA_DIR")]
    data_dir: PathBuf,

    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,

    /// Comma-separated scenarios: baseline, m:<value>, convergence[:<target>], sweep[:<from>:<to>:<step>].
    #[arg(long, value_delimiter = ',', default_value = "baseline")]
    scenario: Vec<ScenarioSpec>,

    /// GDP per capita above which fertility is held at its value at the cap.
    #[arg(long, default_value_t = DEFAULT_FERTILITY_CAP)]
    fertility_cap: f64,

    /// Male births per female birth.
    #[arg(long, default_value_t = 1.05)]
    srb: f64,

    /// Last projected year.
    #[arg(long, default_value_t = HORIZON_YEAR)]
    horizon: i32,

    /// Comma-separated aggregation scopes: world, income, region, country.
    #[arg(long, default_value = "world,income,region", value_parser = ScopeSelection::parse_list)]
    aggregate: ScopeSelection,

    /// Also write donors.csv with the donor set of every country and scenario.
    #[arg(long)]
    dump_donors: bool,

    /// Also write ensembles.csv with every fitted member and its weight.
    #[arg(long)]
    dump_ensembles: bool,

    /// Worker threads, or "auto" for one per core.
    #[arg(long, default_value = "auto", value_parser = parse_jobs)]
    jobs: usize,

    /// csv, or csv+svg to add the line charts.
    #[arg(long, default_value = "csv+svg")]
    format: OutputFormat,
}

fn parse_jobs(s: &str) -> Result<usize, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(0);
    }
    match s.parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("'{s}' is not a positive worker count or 'auto'")),
        Ok(n) => Ok(n),
    }
}

impl From<RunArgs> for RunConfig {
    fn from(a: RunArgs) -> Self {
        RunConfig {
            data_dir: a.data_dir,
            out_dir: a.out,
            scenarios: a.scenario,
            fertility_cap: a.fertility_cap,
            srb: a.srb,
            horizon: a.horizon,
            aggregate_scopes: a.aggregate,
            dump_donors: a.dump_donors,
            dump_ensembles: a.dump_ensembles,
            jobs: a.jobs,
            format: a.format,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let Command::Run(args) = Cli::parse().command;
    let config = RunConfig::from(args);
    match run(&config) {
        Ok(summary) => {
            for f in &summary.files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
