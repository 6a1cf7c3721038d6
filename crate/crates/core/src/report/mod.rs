//! Aggregation of country trajectories and emission of result files.

mod svg;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

use crate::domain::{AgeGroup, IncomeGroup, Iso3, Region};
use crate::forecast::CountryEnsembles;
use crate::scenarios::Scenario;

pub use svg::{chart, Line, Panel};

pub const TRAJECTORIES_FILE: &str = "trajectories.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const SENSITIVITY_FILE: &str = "sensitivity.csv";
pub const DONORS_FILE: &str = "donors.csv";
pub const ENSEMBLES_FILE: &str = "ensembles.csv";
pub const MANIFEST_FILE: &str = "run_manifest.json";
pub const FIG_WORLD: &str = "fig1_world.svg";
pub const FIG_INCOME: &str = "fig2_income.svg";
pub const FIG_REGION: &str = "fig3_region.svg";

/// Year at which scenario sensitivity is measured.
pub const SENSITIVITY_YEAR: i32 = 2050;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("scope {0} has no countries")]
    EmptyScope(String),
    #[error("baseline population is zero")]
    ZeroBaseline,
    #[error("no scenarios to report")]
    NoScenarios,
    #[error("writing {}: {source}", path.display())]
    IoFailure {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scope {
    World,
    IncomeGroup(IncomeGroup),
    Region(Region),
    Country(Iso3),
}

impl Scope {
    /// Machine label used in CSV output, e.g. `income:low`.
    pub fn label(&self) -> String {
        match self {
            Scope::World => "world".to_string(),
            Scope::IncomeGroup(g) => format!("income:{}", g.token()),
            Scope::Region(r) => format!("region:{}", r.token()),
            Scope::Country(c) => format!("country:{c}"),
        }
    }

    pub fn display_name(&self) -> String {
        match self {
            Scope::World => "World".to_string(),
            Scope::IncomeGroup(g) => g.display_name().to_string(),
            Scope::Region(r) => r.display_name().to_string(),
            Scope::Country(c) => c.to_string(),
        }
    }

    fn contains(&self, c: &CountryTrajectory) -> bool {
        match self {
            Scope::World => true,
            Scope::IncomeGroup(g) => c.income_group == *g,
            Scope::Region(r) => c.region == *r,
            Scope::Country(iso) => c.iso3 == *iso,
        }
    }
}

/// Which scope families to aggregate and report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScopeSelection {
    pub world: bool,
    pub income: bool,
    pub region: bool,
    pub country: bool,
}

impl Default for ScopeSelection {
    fn default() -> Self {
        ScopeSelection {
            world: true,
            income: true,
            region: true,
            country: false,
        }
    }
}

impl ScopeSelection {
    pub fn parse_list(s: &str) -> Result<Self, String> {
        let mut sel = ScopeSelection {
            world: false,
            income: false,
            region: false,
            country: false,
        };
        for token in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match token {
                "world" => sel.world = true,
                "income" => sel.income = true,
                "region" => sel.region = true,
                "country" => sel.country = true,
                other => return Err(format!("unknown aggregate scope '{other}'")),
            }
        }
        if sel
            == (ScopeSelection {
                world: false,
                income: false,
                region: false,
                country: false,
            })
        {
            return Err("no aggregate scopes selected".to_string());
        }
        Ok(sel)
    }

    pub fn tokens(&self) -> Vec<&'static str> {
        [
            (self.world, "world"),
            (self.income, "income"),
            (self.region, "region"),
            (self.country, "country"),
        ]
        .into_iter()
        .filter_map(|(on, t)| on.then_some(t))
        .collect()
    }

    /// Scopes in output order: world, income groups, regions, countries.
    pub fn scopes(&self, countries: &[CountryTrajectory]) -> Vec<Scope> {
        let mut out = Vec::new();
        if self.world {
            out.push(Scope::World);
        }
        if self.income {
            out.extend(IncomeGroup::ALL.into_iter().map(Scope::IncomeGroup));
        }
        if self.region {
            out.extend(Region::ALL.into_iter().map(Scope::Region));
        }
        if self.country {
            out.extend(countries.iter().map(|c| Scope::Country(c.iso3.clone())));
        }
        out
    }
}

/// Total population by year for one projected country.
#[derive(Debug, Clone, PartialEq)]
pub struct CountryTrajectory {
    pub iso3: Iso3,
    pub income_group: IncomeGroup,
    pub region: Region,
    /// Persons, one entry per year from the run's start year.
    pub totals: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub scenario: Scenario,
    pub scenario_id: String,
    /// Sorted by iso3.
    pub countries: Vec<CountryTrajectory>,
    /// Donor set per country, same order as `countries`.
    pub donors: Vec<Vec<Iso3>>,
    /// Ensembles per country when they were retained for dumping.
    pub ensembles: Option<Vec<Arc<CountryEnsembles>>>,
}

#[derive(Debug, Clone)]
pub struct RunResults {
    pub start_year: i32,
    pub horizon: i32,
    pub scenarios: Vec<ScenarioResult>,
}

impl RunResults {
    pub fn scenario(&self, id: &str) -> Option<&ScenarioResult> {
        self.scenarios.iter().find(|s| s.scenario_id == id)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateSeries {
    pub scope: Scope,
    pub scenario_id: String,
    pub start_year: i32,
    /// Persons by year.
    pub values: Vec<f64>,
}

impl AggregateSeries {
    pub fn at(&self, year: i32) -> Option<f64> {
        usize::try_from(year - self.start_year)
            .ok()
            .and_then(|i| self.values.get(i).copied())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakSummary {
    pub scope: Scope,
    pub scenario_id: String,
    pub peak_population: f64,
    pub peak_year: i32,
}

/// Pairwise summation; the result depends only on the order of `values`.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n if n <= 8 => values.iter().sum(),
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// Year-wise total over the countries in `scope`, in the given (iso3) order.
pub fn aggregate(
    countries: &[CountryTrajectory],
    scope: &Scope,
    scenario_id: &str,
    start_year: i32,
) -> Result<AggregateSeries, ReportError> {
    let members: Vec<&CountryTrajectory> = countries.iter().filter(|c| scope.contains(c)).collect();
    if members.is_empty() {
        return Err(ReportError::EmptyScope(scope.label()));
    }
    let years = members.iter().map(|c| c.totals.len()).min().unwrap_or(0);
    let mut column = Vec::with_capacity(members.len());
    let values = (0..years)
        .map(|t| {
            column.clear();
            column.extend(members.iter().map(|c| c.totals[t]));
            pairwise_sum(&column)
        })
        .collect();
    Ok(AggregateSeries {
        scope: scope.clone(),
        scenario_id: scenario_id.to_string(),
        start_year,
        values,
    })
}

/// Maximum of the series and the earliest year attaining it.
pub fn find_peak(series: &AggregateSeries) -> PeakSummary {
    let mut best = (f64::NEG_INFINITY, series.start_year);
    for (i, &v) in series.values.iter().enumerate() {
        if v > best.0 {
            best = (v, series.start_year + i as i32);
        }
    }
    PeakSummary {
        scope: series.scope.clone(),
        scenario_id: series.scenario_id.clone(),
        peak_population: best.0,
        peak_year: best.1,
    }
}

/// `|pop_m0 - pop_m2| / pop_baseline`.
pub fn sensitivity_ratio(pop_m0: f64, pop_m2: f64, pop_baseline: f64) -> Result<f64, ReportError> {
    if pop_baseline == 0.0 {
        return Err(ReportError::ZeroBaseline);
    }
    Ok((pop_m0 - pop_m2).abs() / pop_baseline)
}

/// Formats with six significant digits, fixed-point.
pub fn format_sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.5e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    let decimals = (5 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

fn millions(persons: f64) -> String {
    format_sig6(persons / 1e6)
}

/// Per-country sensitivity ratios at [`SENSITIVITY_YEAR`], when the run has
/// multiplier-0, multiplier-2 and baseline scenarios.
pub fn country_sensitivities(results: &RunResults) -> Vec<(Iso3, Option<f64>)> {
    let by_multiplier = |m: f64| {
        results
            .scenarios
            .iter()
            .find(|s| matches!(s.scenario, Scenario::Multiplier(x) if x == m))
    };
    let baseline = results
        .scenarios
        .iter()
        .find(|s| s.scenario == Scenario::Baseline)
        .or_else(|| by_multiplier(1.0));
    let (Some(m0), Some(m2), Some(base)) = (by_multiplier(0.0), by_multiplier(2.0), baseline) else {
        return Vec::new();
    };
    let Ok(t) = usize::try_from(SENSITIVITY_YEAR - results.start_year) else {
        return Vec::new();
    };
    base.countries
        .iter()
        .filter_map(|c| {
            let find = |s: &ScenarioResult| {
                s.countries
                    .iter()
                    .find(|x| x.iso3 == c.iso3)
                    .and_then(|x| x.totals.get(t).copied())
            };
            let b = c.totals.get(t).copied()?;
            let ratio = match (find(m0), find(m2)) {
                (Some(a), Some(z)) => sensitivity_ratio(a, z, b).ok(),
                _ => None,
            };
            Some((c.iso3.clone(), ratio))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    CsvSvg,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "csv+svg" => Ok(OutputFormat::CsvSvg),
            _ => Err(format!("unknown format '{s}' (expected csv or csv+svg)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EmitOptions {
    pub scopes: ScopeSelection,
    pub format: OutputFormat,
    pub dump_donors: bool,
    pub dump_ensembles: bool,
    /// Pre-rendered run manifest; written verbatim when present.
    pub manifest: Option<String>,
}

impl Default for EmitOptions {
    /// World, income and region tables as CSV, no dumps, no manifest.
    fn default() -> Self {
        EmitOptions {
            scopes: ScopeSelection::default(),
            format: OutputFormat::Csv,
            dump_donors: false,
            dump_ensembles: false,
            manifest: None,
        }
    }
}

/// All aggregate series for a scenario, in output order, skipping empty scopes.
pub fn scenario_series(
    results: &RunResults,
    scenario: &ScenarioResult,
    scopes: &ScopeSelection,
) -> Vec<AggregateSeries> {
    scopes
        .scopes(&scenario.countries)
        .iter()
        .filter_map(|scope| aggregate(&scenario.countries, scope, &scenario.scenario_id, results.start_year).ok())
        .collect()
}

fn render_trajectories(all: &[Vec<AggregateSeries>]) -> String {
    let mut out = String::from("scope,scenario_id,year,population\n");
    for series in all.iter().flatten() {
        let label = series.scope.label();
        for (i, v) in series.values.iter().enumerate() {
            let _ = writeln!(
                out,
                "{label},{},{},{}",
                series.scenario_id,
                series.start_year + i as i32,
                millions(*v)
            );
        }
    }
    out
}

fn render_summary(all: &[Vec<AggregateSeries>]) -> String {
    let mut out = String::from("scope,scenario_id,pop2015,pop2050,pop2100,peak_pop,peak_year\n");
    let cell = |s: &AggregateSeries, y: i32| s.at(y).map_or_else(|| "NA".to_string(), millions);
    for series in all.iter().flatten() {
        let peak = find_peak(series);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            series.scope.label(),
            series.scenario_id,
            cell(series, 2015),
            cell(series, 2050),
            cell(series, 2100),
            millions(peak.peak_population),
            peak.peak_year
        );
    }
    out
}

fn render_sensitivity(results: &RunResults) -> String {
    let mut out = String::from("iso3,ratio\n");
    for (iso3, ratio) in country_sensitivities(results) {
        let r = ratio.map_or_else(|| "NA".to_string(), format_sig6);
        let _ = writeln!(out, "{iso3},{r}");
    }
    out
}

fn render_donors(results: &RunResults) -> String {
    let mut out = String::from("target_iso3,scenario_id,donor_iso3\n");
    for s in &results.scenarios {
        for (c, donors) in s.countries.iter().zip(&s.donors) {
            for d in donors {
                let _ = writeln!(out, "{},{},{d}", c.iso3, s.scenario_id);
            }
        }
    }
    out
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:e}"))
}

fn render_ensembles(results: &RunResults) -> String {
    let mut out = String::from(
        "iso3,scenario_id,variable,age_group,sex,form,weight,beta1,beta2,beta3,x1,sigma,aicc,beta2_right\n",
    );
    for s in &results.scenarios {
        let Some(ensembles) = &s.ensembles else { continue };
        for ce in ensembles {
            let mut rows: Vec<(&str, AgeGroup, &str, &crate::forecast::RateEnsemble)> = Vec::new();
            for (age, ens) in AgeGroup::fertile().zip(&ce.fertility) {
                rows.push(("fertility", age, "female", ens));
            }
            for (sex_idx, sex) in ["female", "male"].iter().enumerate() {
                for (age, ens) in AgeGroup::all().zip(&ce.mortality[sex_idx]) {
                    rows.push(("mortality", age, sex, ens));
                }
            }
            for (variable, age, sex, ens) in rows {
                for (m, w) in ens.members.iter().zip(&ens.weights) {
                    let _ = writeln!(
                        out,
                        "{},{},{variable},{age},{sex},{},{w:e},{:e},{:e},{},{},{:e},{:e},{}",
                        ce.iso3,
                        s.scenario_id,
                        m.form,
                        m.beta1,
                        m.beta2,
                        opt(m.beta3),
                        opt(m.breakpoint_x1),
                        m.sigma,
                        m.aicc,
                        opt(m.slope_right)
                    );
                }
            }
        }
    }
    out
}

fn render_figure(
    results: &RunResults,
    all: &[Vec<AggregateSeries>],
    title: &str,
    scopes: &[Scope],
    columns: usize,
) -> Option<String> {
    let in_millions: Vec<Vec<Vec<f64>>> = scopes
        .iter()
        .map(|scope| {
            all.iter()
                .map(|per_scenario| {
                    per_scenario
                        .iter()
                        .find(|s| &s.scope == scope)
                        .map(|s| s.values.iter().map(|v| v / 1e6).collect())
                        .unwrap_or_default()
                })
                .collect()
        })
        .collect();
    let names: Vec<String> = scopes.iter().map(Scope::display_name).collect();
    let panels: Vec<Panel<'_>> = scopes
        .iter()
        .enumerate()
        .filter(|(i, _)| in_millions[*i].iter().any(|v| !v.is_empty()))
        .map(|(i, _)| Panel {
            title: &names[i],
            lines: results
                .scenarios
                .iter()
                .zip(&in_millions[i])
                .map(|(s, values)| Line {
                    label: &s.scenario_id,
                    multiplier: s.scenario.multiplier(),
                    values,
                })
                .collect(),
        })
        .collect();
    if panels.is_empty() {
        return None;
    }
    Some(chart(
        title,
        "Population (millions)",
        &panels,
        columns,
        results.start_year,
    ))
}

/// Writes all result files into `out_dir`. Files are staged in a
/// subdirectory and moved into place only after every file was written;
/// on failure the staging area is removed and `out_dir` is left untouched.
pub fn emit_outputs(results: &RunResults, out_dir: &Path, opts: &EmitOptions) -> Result<Vec<PathBuf>, ReportError> {
    if results.scenarios.is_empty() {
        return Err(ReportError::NoScenarios);
    }
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| ReportError::IoFailure { path, source }
    };

    let all: Vec<Vec<AggregateSeries>> = results
        .scenarios
        .iter()
        .map(|s| scenario_series(results, s, &opts.scopes))
        .collect();

    let mut files: Vec<(&str, String)> = vec![
        (TRAJECTORIES_FILE, render_trajectories(&all)),
        (SUMMARY_FILE, render_summary(&all)),
        (SENSITIVITY_FILE, render_sensitivity(results)),
    ];
    if opts.format == OutputFormat::CsvSvg {
        let figures = [
            (FIG_WORLD, "Global population by GDP scenario", vec![Scope::World], 1),
            (
                FIG_INCOME,
                "Population by income group",
                IncomeGroup::ALL.into_iter().map(Scope::IncomeGroup).collect(),
                2,
            ),
            (
                FIG_REGION,
                "Population by region",
                Region::ALL.into_iter().map(Scope::Region).collect(),
                3,
            ),
        ];
        for (name, title, scopes, cols) in figures {
            if let Some(svg) = render_figure(results, &all, title, &scopes, cols) {
                files.push((name, svg));
            }
        }
    }
    if opts.dump_donors {
        files.push((DONORS_FILE, render_donors(results)));
    }
    if opts.dump_ensembles {
        files.push((ENSEMBLES_FILE, render_ensembles(results)));
    }
    if let Some(m) = &opts.manifest {
        files.push((MANIFEST_FILE, m.clone()));
    }

    fs::create_dir_all(out_dir).map_err(io(out_dir))?;
    let staging = out_dir.join(".demotrend-staging");
    if staging.exists() {
        fs::remove_dir_all(&staging).map_err(io(&staging))?;
    }
    fs::create_dir(&staging).map_err(io(&staging))?;
    let staged = (|| {
        for (name, body) in &files {
            let p = staging.join(name);
            fs::write(&p, body).map_err(io(&p))?;
        }
        let mut written = Vec::with_capacity(files.len());
        for (name, _) in &files {
            let dest = out_dir.join(name);
            fs::rename(staging.join(name), &dest).map_err(io(&dest))?;
            written.push(dest);
        }
        Ok(written)
    })();
    let _ = fs::remove_dir_all(&staging);
    if staged.is_err() {
        for (name, _) in &files {
            let _ = fs::remove_file(out_dir.join(name));
        }
    }
    staged
}

/// One parsed row of `trajectories.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRow {
    pub scope: String,
    pub scenario_id: String,
    pub year: i32,
    /// Millions of persons.
    pub population: f64,
}

pub fn parse_trajectories(text: &str) -> Result<Vec<TrajectoryRow>, String> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        if rec.len() != 4 {
            return Err(format!("expected 4 fields, found {}", rec.len()));
        }
        out.push(TrajectoryRow {
            scope: rec[0].to_string(),
            scenario_id: rec[1].to_string(),
            year: rec[2].parse().map_err(|e| format!("year: {e}"))?,
            population: rec[3].parse().map_err(|e| format!("population: {e}"))?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn traj(iso: &str, g: IncomeGroup, r: Region, totals: Vec<f64>) -> CountryTrajectory {
        CountryTrajectory {
            iso3: Iso3::new(iso).unwrap(),
            income_group: g,
            region: r,
            totals,
        }
    }

    fn series(values: Vec<f64>) -> AggregateSeries {
        AggregateSeries {
            scope: Scope::World,
            scenario_id: "baseline".into(),
            start_year: 2015,
            values,
        }
    }

    #[test]
    fn aggregate_sums_members() {
        let cs = vec![
            traj("AAA", IncomeGroup::Low, Region::SouthAsia, vec![300.0, 310.0]),
            traj("BBB", IncomeGroup::High, Region::SouthAsia, vec![700.0, 690.0]),
        ];
        let w = aggregate(&cs, &Scope::World, "baseline", 2015).unwrap();
        assert_eq!(w.values, vec![1000.0, 1000.0]);
        let low = aggregate(&cs, &Scope::IncomeGroup(IncomeGroup::Low), "baseline", 2015).unwrap();
        assert_eq!(low.values, vec![300.0, 310.0]);
        assert!(matches!(
            aggregate(&cs, &Scope::Region(Region::NorthAmerica), "baseline", 2015),
            Err(ReportError::EmptyScope(_))
        ));
    }

    #[test]
    fn peaks() {
        let rising: Vec<f64> = (0..86).map(f64::from).collect();
        assert_eq!(find_peak(&series(rising)).peak_year, 2100);
        let hump: Vec<f64> = (0..86).map(|i| -f64::from(i - 47).powi(2)).collect();
        assert_eq!(find_peak(&series(hump)).peak_year, 2062);
        let flat = series(vec![5.0; 86]);
        let p = find_peak(&flat);
        assert_eq!((p.peak_year, p.peak_population), (2015, 5.0));
    }

    #[test]
    fn sensitivity_examples() {
        assert!((sensitivity_ratio(1300.0, 950.0, 1320.0).unwrap() - 0.2652).abs() < 1e-4);
        assert_eq!(sensitivity_ratio(5.0, 5.0, 10.0).unwrap(), 0.0);
        assert_eq!(sensitivity_ratio(200.0, 100.0, 100.0).unwrap(), 1.0);
        assert!(matches!(
            sensitivity_ratio(1.0, 2.0, 0.0),
            Err(ReportError::ZeroBaseline)
        ));
    }

    #[test]
    fn six_significant_digits() {
        assert_eq!(format_sig6(7278.123456), "7278.12");
        assert_eq!(format_sig6(0.123456789), "0.123457");
        assert_eq!(format_sig6(9.999995), "10.0000");
        assert_eq!(format_sig6(12_345_678.9), "12345679");
        assert_eq!(format_sig6(0.0), "0");
    }

    #[test]
    fn scope_selection_parsing() {
        let s = ScopeSelection::parse_list("world,country").unwrap();
        assert!(s.world && s.country && !s.income && !s.region);
        assert!(ScopeSelection::parse_list("planet").is_err());
        assert!(ScopeSelection::parse_list("").is_err());
        assert_eq!(ScopeSelection::default().tokens(), vec!["world", "income", "region"]);
    }

    #[test]
    fn pairwise_sum_matches_naive_on_small_inputs() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(pairwise_sum(&v), 5050.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }
}
