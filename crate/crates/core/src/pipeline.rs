//! End-to-end run: load, build scenario pathways and donor sets, fit
//! ensembles, project every country, aggregate and write outputs.
//!
//! Work is split by country (and by scenario for projection) across a rayon
//! pool. Results are collected in a fixed order, so output bytes do not
//! depend on the number of workers.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::augmentation::{select_donors, DonorCandidate, DonorRule};
use crate::demography::{project_country, total_population, DemographyError, PopulationState, DEFAULT_SRB};
use crate::domain::{Iso3, BASE_YEAR, HORIZON_YEAR};
use crate::forecast::{CapPolicy, CountryEnsembles, ForecastError, DEFAULT_FERTILITY_CAP};
use crate::ingest::{load_dataset, DataError, Dataset, SeriesIndex, INPUT_FILES};
use crate::report::{
    emit_outputs, CountryTrajectory, EmitOptions, OutputFormat, ReportError, RunResults, ScenarioResult, ScopeSelection,
};
use crate::scenarios::{baseline_pathway, GdpPathway, Scenario, ScenarioError, ScenarioSpec};

#[derive(Debug, Error)]
pub enum CountryFailure {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Forecast(#[from] ForecastError),
    #[error(transparent)]
    Demography(#[from] DemographyError),
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("{iso3}{}: {source}", scenario.as_ref().map(|s| format!(" [{s}]")).unwrap_or_default())]
    Country {
        iso3: Iso3,
        scenario: Option<String>,
        #[source]
        source: CountryFailure,
    },
    #[error("no country has complete data to project")]
    NoCountries,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

impl RunError {
    /// 1 for data problems, 2 for usage problems, 3 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Data(_) | RunError::Country { .. } | RunError::NoCountries => 1,
            RunError::InvalidConfig(_) | RunError::Scenario(_) | RunError::Report(ReportError::NoScenarios) => 2,
            RunError::Report(_) | RunError::Pool(_) => 3,
        }
    }
}

/// Model settings for [`simulate`].
#[derive(Debug, Clone)]
pub struct SimulationSettings {
    pub scenarios: Vec<Scenario>,
    pub cap: CapPolicy,
    pub srb: f64,
    pub horizon: i32,
    /// Worker threads; 0 picks the number of available cores.
    pub jobs: usize,
    /// Keep fitted ensembles in the results (for `ensembles.csv`).
    pub keep_ensembles: bool,
}

impl Default for SimulationSettings {
    fn default() -> Self {
        SimulationSettings {
            scenarios: vec![Scenario::Baseline],
            cap: CapPolicy::default(),
            srb: DEFAULT_SRB,
            horizon: HORIZON_YEAR,
            jobs: 0,
            keep_ensembles: false,
        }
    }
}

/// Output of [`simulate`]: per-scenario trajectories plus the countries
/// skipped for incomplete data.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub results: RunResults,
    pub excluded: Vec<Iso3>,
}

fn first_error<T, E>(items: Vec<Result<T, E>>) -> Result<Vec<T>, E> {
    items.into_iter().collect()
}

pub fn simulate(data: &Dataset, settings: &SimulationSettings) -> Result<Simulation, RunError> {
    if !(BASE_YEAR..=HORIZON_YEAR).contains(&settings.horizon) {
        return Err(RunError::InvalidConfig(format!(
            "horizon {} outside {BASE_YEAR}..={HORIZON_YEAR}",
            settings.horizon
        )));
    }
    if settings.scenarios.is_empty() {
        return Err(RunError::Report(ReportError::NoScenarios));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.jobs)
        .build()
        .map_err(|e| RunError::Pool(e.to_string()))?;
    pool.install(|| simulate_in_pool(data, settings))
}

fn simulate_in_pool(data: &Dataset, settings: &SimulationSettings) -> Result<Simulation, RunError> {
    let index = SeriesIndex::new(data);
    let (countries, excluded): (Vec<_>, Vec<_>) = data.countries.iter().partition(|c| index.is_complete(&c.iso3));
    let excluded: Vec<Iso3> = excluded.into_iter().map(|c| c.iso3.clone()).collect();
    for iso3 in &excluded {
        log::warn!("{iso3}: incomplete data, not projected");
    }
    if countries.is_empty() {
        return Err(RunError::NoCountries);
    }

    let country_err = |iso3: &Iso3, scenario: Option<&str>| {
        let iso3 = iso3.clone();
        let scenario = scenario.map(str::to_string);
        move |e: CountryFailure| RunError::Country {
            iso3,
            scenario,
            source: e,
        }
    };

    let baselines = first_error(
        countries
            .iter()
            .map(|c| {
                baseline_pathway(&c.iso3, index.gdp_baseline(&c.iso3)).map_err(|e| country_err(&c.iso3, None)(e.into()))
            })
            .collect(),
    )?;
    let bases: Vec<PopulationState> = countries
        .iter()
        .map(|c| {
            let b = index
                .base_pop(data, &c.iso3)
                .expect("complete countries have a base population");
            PopulationState {
                iso3: c.iso3.clone(),
                year: b.year,
                cohorts: b.counts,
            }
        })
        .collect();

    let candidates: Vec<DonorCandidate<'_>> = data
        .countries
        .iter()
        .map(|c| DonorCandidate {
            iso3: &c.iso3,
            gdp: index.gdp_hist(&c.iso3),
        })
        .filter(|c| !c.gdp.is_empty())
        .collect();

    // pathways and donor sets per (scenario, country)
    struct Plan {
        pathways: Vec<GdpPathway>,
        donors: Vec<Vec<Iso3>>,
    }
    let mut plans = Vec::with_capacity(settings.scenarios.len());
    for scenario in &settings.scenarios {
        let id = scenario.id();
        let pathways = first_error(
            countries
                .iter()
                .zip(&baselines)
                .map(|(c, b)| {
                    scenario
                        .pathway(b)
                        .map_err(|e| country_err(&c.iso3, Some(&id))(e.into()))
                })
                .collect(),
        )?;
        let donors = countries
            .iter()
            .zip(&pathways)
            .map(|(c, p)| select_donors(&c.iso3, &DonorRule::for_pathway(p), &candidates))
            .collect();
        plans.push(Plan { pathways, donors });
    }

    // Ensembles depend only on (target, donor set); fit each distinct pair once.
    let mut keys: BTreeMap<(usize, Vec<Iso3>), usize> = BTreeMap::new();
    for plan in &plans {
        for (ci, donors) in plan.donors.iter().enumerate() {
            let next = keys.len();
            keys.entry((ci, donors.clone())).or_insert(next);
        }
    }
    let mut ordered: Vec<(&(usize, Vec<Iso3>), &usize)> = keys.iter().collect();
    ordered.sort_by_key(|(_, slot)| **slot);
    let fitted: Vec<Result<Arc<CountryEnsembles>, RunError>> = ordered
        .par_iter()
        .map(|((ci, donors), _)| {
            let iso3 = &countries[*ci].iso3;
            CountryEnsembles::build(iso3, donors, &index)
                .map(Arc::new)
                .map_err(|e| country_err(iso3, None)(e.into()))
        })
        .collect();
    let fitted = first_error(fitted)?;
    log::info!(
        "fitted {} distinct ensemble sets for {} countries x {} scenarios",
        fitted.len(),
        countries.len(),
        settings.scenarios.len()
    );

    let jobs: Vec<(usize, usize)> = (0..plans.len())
        .flat_map(|si| (0..countries.len()).map(move |ci| (si, ci)))
        .collect();
    let projected: Vec<Result<Vec<f64>, RunError>> = jobs
        .par_iter()
        .map(|&(si, ci)| {
            let plan = &plans[si];
            let ens = &fitted[keys[&(ci, plan.donors[ci].clone())]];
            let id = settings.scenarios[si].id();
            project_country(
                &bases[ci],
                ens,
                &plan.pathways[ci],
                &settings.cap,
                settings.horizon,
                settings.srb,
            )
            .map(|states| states.iter().map(total_population).collect())
            .map_err(|e| country_err(&countries[ci].iso3, Some(&id))(e.into()))
        })
        .collect();
    let mut projected = first_error(projected)?.into_iter();

    let mut scenarios = Vec::with_capacity(plans.len());
    for (scenario, plan) in settings.scenarios.iter().zip(plans) {
        let trajectories = countries
            .iter()
            .map(|c| CountryTrajectory {
                iso3: c.iso3.clone(),
                income_group: c.income_group,
                region: c.region,
                totals: projected.next().expect("one projection per job"),
            })
            .collect();
        let ensembles = settings.keep_ensembles.then(|| {
            plan.donors
                .iter()
                .enumerate()
                .map(|(ci, d)| Arc::clone(&fitted[keys[&(ci, d.clone())]]))
                .collect()
        });
        scenarios.push(ScenarioResult {
            scenario: *scenario,
            scenario_id: scenario.id(),
            countries: trajectories,
            donors: plan.donors,
            ensembles,
        });
    }

    Ok(Simulation {
        results: RunResults {
            start_year: BASE_YEAR,
            horizon: settings.horizon,
            scenarios,
        },
        excluded,
    })
}

/// Everything a command-line run needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub data_dir: PathBuf,
    pub out_dir: PathBuf,
    pub scenarios: Vec<ScenarioSpec>,
    pub fertility_cap: f64,
    pub srb: f64,
    pub horizon: i32,
    pub aggregate_scopes: ScopeSelection,
    pub dump_donors: bool,
    pub dump_ensembles: bool,
    /// 0 means one worker per available core.
    pub jobs: usize,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn new(data_dir: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            data_dir: data_dir.into(),
            out_dir: out_dir.into(),
            scenarios: vec![ScenarioSpec::Baseline],
            fertility_cap: DEFAULT_FERTILITY_CAP,
            srb: DEFAULT_SRB,
            horizon: HORIZON_YEAR,
            aggregate_scopes: ScopeSelection::default(),
            dump_donors: false,
            dump_ensembles: false,
            jobs: 0,
            format: OutputFormat::CsvSvg,
        }
    }

    /// Expanded scenario list, duplicates (by id) removed in first-seen order.
    pub fn expanded_scenarios(&self) -> Result<Vec<Scenario>, ScenarioError> {
        let mut out: Vec<Scenario> = Vec::new();
        for spec in &self.scenarios {
            for s in spec.expand()? {
                if !out.iter().any(|o| o.id() == s.id()) {
                    out.push(s);
                }
            }
        }
        Ok(out)
    }

    pub fn settings(&self) -> Result<SimulationSettings, RunError> {
        if !(self.srb.is_finite() && self.srb > 0.0) {
            return Err(RunError::InvalidConfig(format!(
                "sex ratio at birth {} must be positive",
                self.srb
            )));
        }
        let cap = CapPolicy::new(self.fertility_cap).map_err(|e| RunError::InvalidConfig(e.to_string()))?;
        Ok(SimulationSettings {
            scenarios: self.expanded_scenarios()?,
            cap,
            srb: self.srb,
            horizon: self.horizon,
            jobs: self.jobs,
            keep_ensembles: self.dump_ensembles,
        })
    }
}

fn file_digest(path: &Path) -> Result<String, RunError> {
    let bytes = fs::read(path).map_err(|source| DataError::Io {
        file: path.display().to_string(),
        source,
    })?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Manifest text: configuration (minus output location and worker count),
/// input digests and tool version. Identical runs give identical text.
pub fn render_manifest(config: &RunConfig, excluded: &[Iso3]) -> Result<String, RunError> {
    let mut inputs = serde_json::Map::new();
    for name in INPUT_FILES {
        inputs.insert(name.to_string(), json!(file_digest(&config.data_dir.join(name))?));
    }
    let manifest = json!({
        "tool": "demotrend",
        "version": env!("CARGO_PKG_VERSION"),
        "config": {
            "data_dir": config.data_dir.display().to_string(),
            "scenarios": config.scenarios.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "fertility_cap": config.fertility_cap,
            "srb": config.srb,
            "horizon": config.horizon,
            "aggregate": config.aggregate_scopes.tokens(),
            "dump_donors": config.dump_donors,
            "dump_ensembles": config.dump_ensembles,
            "format": match config.format { OutputFormat::Csv => "csv", OutputFormat::CsvSvg => "csv+svg" },
        },
        "inputs_sha256": inputs,
        "excluded_countries": excluded.iter().map(ToString::to_string).collect::<Vec<_>>(),
    });
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest is valid JSON");
    text.push('\n');
    Ok(text)
}

/// Outcome of a successful [`run`].
#[derive(Debug)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    pub simulation: Simulation,
}

pub fn run(config: &RunConfig) -> Result<RunSummary, RunError> {
    let settings = config.settings()?;
    if settings.scenarios.is_empty() {
        return Err(RunError::Report(ReportError::NoScenarios));
    }
    let data = load_dataset(&config.data_dir)?;
    let simulation = simulate(&data, &settings)?;
    let manifest = render_manifest(config, &simulation.excluded)?;
    let files = emit_outputs(
        &simulation.results,
        &config.out_dir,
        &EmitOptions {
            scopes: config.aggregate_scopes,
            format: config.format,
            dump_donors: config.dump_donors,
            dump_ensembles: config.dump_ensembles,
            manifest: Some(manifest),
        },
    )?;
    Ok(RunSummary { files, simulation })
}
