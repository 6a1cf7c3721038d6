//! Loading and validation of the five CSV inputs.
//!
//! Every file carries a header row. Any invalid row aborts the load with a
//! diagnostic naming the file and line, so nothing rejected can leak into
//! later stages.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::domain::{AgeGroup, IncomeGroup, Iso3, Region, Sex, Variable};

pub const COUNTRIES_FILE: &str = "countries.csv";
pub const RATES_FILE: &str = "rates.csv";
pub const GDP_HIST_FILE: &str = "gdp_hist.csv";
pub const GDP_BASELINE_FILE: &str = "gdp_baseline.csv";
pub const BASE_POP_FILE: &str = "base_pop.csv";

pub const INPUT_FILES: [&str; 5] = [
    COUNTRIES_FILE,
    RATES_FILE,
    GDP_HIST_FILE,
    GDP_BASELINE_FILE,
    BASE_POP_FILE,
];

#[derive(Debug, Error)]
pub enum DataError {
    #[error("missing input file {}", .0.display())]
    MissingFile(PathBuf),
    #[error("{file}:{line}: {reason}")]
    SchemaViolation { file: String, line: u64, reason: String },
    #[error("{file}:{line}: unknown country '{iso3}'")]
    UnknownCountry { file: String, line: u64, iso3: String },
    #[error("{file}:{line}: GDP per capita must be positive")]
    NonPositiveGdp { file: String, line: u64 },
    #[error("cannot read {file}: {source}")]
    Io {
        file: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountryRecord {
    pub iso3: Iso3,
    pub name: String,
    pub income_group: IncomeGroup,
    pub region: Region,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateObservation {
    pub iso3: Iso3,
    pub year: i32,
    pub variable: Variable,
    pub age_group: AgeGroup,
    pub sex: Sex,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GdpObservation {
    pub iso3: Iso3,
    pub year: i32,
    pub gdp_pc: f64,
}

/// Base-year population of one country, `counts[age][0]` female and
/// `counts[age][1]` male.
#[derive(Debug, Clone, PartialEq)]
pub struct BasePopulation {
    pub iso3: Iso3,
    pub year: i32,
    pub counts: [[f64; 2]; AgeGroup::COUNT],
}

impl BasePopulation {
    pub fn total(&self) -> f64 {
        self.counts.iter().flatten().sum()
    }
}

/// Everything loaded from a data directory. Countries are sorted by iso3;
/// the other tables keep file order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub countries: Vec<CountryRecord>,
    pub rates: Vec<RateObservation>,
    pub gdp_hist: Vec<GdpObservation>,
    pub gdp_baseline: Vec<GdpObservation>,
    pub base_pop: Vec<BasePopulation>,
}

struct CsvFile {
    name: &'static str,
    reader: csv::Reader<File>,
}

impl CsvFile {
    fn open(dir: &Path, name: &'static str, header: &[&str]) -> Result<Self, DataError> {
        let path = dir.join(name);
        if !path.is_file() {
            return Err(DataError::MissingFile(path));
        }
        let file = File::open(&path).map_err(|source| DataError::Io {
            file: name.to_string(),
            source,
        })?;
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(file);
        let found = reader.headers().map_err(|e| violation(name, 1, e.to_string()))?;
        let found: Vec<String> = found
            .iter()
            .map(|h| h.trim_start_matches('\u{feff}').to_ascii_lowercase())
            .collect();
        if found != header {
            return Err(violation(
                name,
                1,
                format!("expected header '{}', found '{}'", header.join(","), found.join(",")),
            ));
        }
        Ok(CsvFile { name, reader })
    }

    /// Reads every data row as (line, fields). Empty files are a schema violation.
    fn rows(&mut self, width: usize) -> Result<Vec<(u64, csv::StringRecord)>, DataError> {
        let mut out = Vec::new();
        for rec in self.reader.records() {
            let rec = rec.map_err(|e| {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                violation(self.name, line, e.to_string())
            })?;
            let line = rec.position().map(|p| p.line()).unwrap_or(0);
            if rec.len() != width {
                return Err(violation(
                    self.name,
                    line,
                    format!("expected {width} fields, found {}", rec.len()),
                ));
            }
            out.push((line, rec));
        }
        if out.is_empty() {
            return Err(violation(self.name, 1, "file has zero data rows".to_string()));
        }
        Ok(out)
    }
}

fn violation(file: &str, line: u64, reason: String) -> DataError {
    DataError::SchemaViolation {
        file: file.to_string(),
        line,
        reason,
    }
}

fn field<T: std::str::FromStr>(file: &str, line: u64, name: &str, raw: &str) -> Result<T, DataError>
where
    T::Err: std::fmt::Display,
{
    raw.parse::<T>()
        .map_err(|e| violation(file, line, format!("bad {name} '{raw}': {e}")))
}

fn finite(file: &str, line: u64, name: &str, raw: &str) -> Result<f64, DataError> {
    let v: f64 = field(file, line, name, raw)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(violation(file, line, format!("{name} must be finite")))
    }
}

fn known_country(known: &BTreeSet<Iso3>, file: &str, line: u64, raw: &str) -> Result<Iso3, DataError> {
    let iso3 = Iso3::new(raw).map_err(|e| violation(file, line, e))?;
    if known.contains(&iso3) {
        Ok(iso3)
    } else {
        Err(DataError::UnknownCountry {
            file: file.to_string(),
            line,
            iso3: iso3.to_string(),
        })
    }
}

pub fn load_dataset(data_dir: &Path) -> Result<Dataset, DataError> {
    // Check presence of all files up front so a missing file is reported
    // before any parse error in another one.
    for name in INPUT_FILES {
        let path = data_dir.join(name);
        if !path.is_file() {
            return Err(DataError::MissingFile(path));
        }
    }
    let countries = load_countries(data_dir)?;
    let known: BTreeSet<Iso3> = countries.iter().map(|c| c.iso3.clone()).collect();
    let rates = load_rates(data_dir, &known)?;
    let gdp_hist = load_gdp(data_dir, GDP_HIST_FILE, &known)?;
    let gdp_baseline = load_gdp(data_dir, GDP_BASELINE_FILE, &known)?;
    let base_pop = load_base_pop(data_dir, &known)?;
    Ok(Dataset {
        countries,
        rates,
        gdp_hist,
        gdp_baseline,
        base_pop,
    })
}

fn load_countries(dir: &Path) -> Result<Vec<CountryRecord>, DataError> {
    let mut csv = CsvFile::open(dir, COUNTRIES_FILE, &["iso3", "name", "income_group", "region"])?;
    let f = COUNTRIES_FILE;
    let mut by_iso = BTreeMap::new();
    for (line, rec) in csv.rows(4)? {
        let iso3 = Iso3::new(&rec[0]).map_err(|e| violation(f, line, e))?;
        let country = CountryRecord {
            iso3: iso3.clone(),
            name: rec[1].to_string(),
            income_group: field(f, line, "income_group", &rec[2])?,
            region: field(f, line, "region", &rec[3])?,
        };
        if by_iso.insert(iso3.clone(), country).is_some() {
            return Err(violation(f, line, format!("duplicate country {iso3}")));
        }
    }
    Ok(by_iso.into_values().collect())
}

fn load_rates(dir: &Path, known: &BTreeSet<Iso3>) -> Result<Vec<RateObservation>, DataError> {
    let mut csv = CsvFile::open(
        dir,
        RATES_FILE,
        &["iso3", "year", "variable", "age_group", "sex", "rate"],
    )?;
    let f = RATES_FILE;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (line, rec) in csv.rows(6)? {
        let iso3 = known_country(known, f, line, &rec[0])?;
        let year: i32 = field(f, line, "year", &rec[1])?;
        let variable: Variable = field(f, line, "variable", &rec[2])?;
        let age_group: AgeGroup = field(f, line, "age_group", &rec[3])?;
        let mut sex: Sex = field(f, line, "sex", &rec[4])?;
        let rate = finite(f, line, "rate", &rec[5])?;
        if rate < 0.0 {
            return Err(violation(f, line, format!("rate must be nonnegative, found {rate}")));
        }
        if variable == Variable::Fertility {
            if !age_group.is_fertile() {
                return Err(violation(
                    f,
                    line,
                    format!("fertility age group {age_group} outside 15-44"),
                ));
            }
            match sex {
                Sex::Male => return Err(violation(f, line, "fertility rates are per woman".to_string())),
                Sex::Both => sex = Sex::Female,
                Sex::Female => {}
            }
        }
        if !seen.insert((iso3.clone(), year, variable, age_group, sex)) {
            return Err(violation(f, line, "duplicate observation".to_string()));
        }
        out.push(RateObservation {
            iso3,
            year,
            variable,
            age_group,
            sex,
            rate,
        });
    }
    Ok(out)
}

fn load_gdp(dir: &Path, name: &'static str, known: &BTreeSet<Iso3>) -> Result<Vec<GdpObservation>, DataError> {
    let mut csv = CsvFile::open(dir, name, &["iso3", "year", "gdp_pc"])?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (line, rec) in csv.rows(3)? {
        let iso3 = known_country(known, name, line, &rec[0])?;
        let year: i32 = field(name, line, "year", &rec[1])?;
        let gdp_pc = finite(name, line, "gdp_pc", &rec[2])?;
        if gdp_pc <= 0.0 {
            return Err(DataError::NonPositiveGdp {
                file: name.to_string(),
                line,
            });
        }
        if !seen.insert((iso3.clone(), year)) {
            return Err(violation(name, line, "duplicate year".to_string()));
        }
        out.push(GdpObservation { iso3, year, gdp_pc });
    }
    Ok(out)
}

fn load_base_pop(dir: &Path, known: &BTreeSet<Iso3>) -> Result<Vec<BasePopulation>, DataError> {
    let mut csv = CsvFile::open(dir, BASE_POP_FILE, &["iso3", "year", "age_group", "sex", "count"])?;
    let f = BASE_POP_FILE;
    // iso3 -> (year, first line, counts, filled mask)
    type Partial = (i32, u64, [[f64; 2]; AgeGroup::COUNT], [[bool; 2]; AgeGroup::COUNT]);
    let mut acc: BTreeMap<Iso3, Partial> = BTreeMap::new();
    for (line, rec) in csv.rows(5)? {
        let iso3 = known_country(known, f, line, &rec[0])?;
        let year: i32 = field(f, line, "year", &rec[1])?;
        let age: AgeGroup = field(f, line, "age_group", &rec[2])?;
        let sex: Sex = field(f, line, "sex", &rec[3])?;
        let count = finite(f, line, "count", &rec[4])?;
        if count < 0.0 {
            return Err(violation(f, line, "count must be nonnegative".to_string()));
        }
        let slot = match sex {
            Sex::Female => 0,
            Sex::Male => 1,
            Sex::Both => return Err(violation(f, line, "base population must be split by sex".to_string())),
        };
        let entry = acc
            .entry(iso3)
            .or_insert((year, line, [[0.0; 2]; AgeGroup::COUNT], [[false; 2]; AgeGroup::COUNT]));
        if entry.0 != year {
            return Err(violation(f, line, format!("mixed base years {} and {year}", entry.0)));
        }
        if entry.3[age.index()][slot] {
            return Err(violation(f, line, "duplicate cohort".to_string()));
        }
        entry.2[age.index()][slot] = count;
        entry.3[age.index()][slot] = true;
    }
    let mut out = Vec::with_capacity(acc.len());
    for (iso3, (year, line, counts, filled)) in acc {
        if let Some(age) = filled.iter().position(|s| !(s[0] && s[1])) {
            return Err(violation(
                f,
                line,
                format!(
                    "{iso3}: age group {} missing for one or both sexes",
                    AgeGroup::new(age).unwrap()
                ),
            ));
        }
        out.push(BasePopulation { iso3, year, counts });
    }
    Ok(out)
}

/// Linear interpolation inside the observed range of a year-sorted series.
/// Years outside the range give `None`.
pub fn interpolate(series: &[(i32, f64)], year: i32) -> Option<f64> {
    let idx = series.partition_point(|&(y, _)| y < year);
    let &(y1, v1) = series.get(idx)?;
    if y1 == year {
        return Some(v1);
    }
    if idx == 0 {
        return None;
    }
    let (y0, v0) = series[idx - 1];
    let t = f64::from(year - y0) / f64::from(y1 - y0);
    Some(v0 + t * (v1 - v0))
}

type RateKey = (Iso3, Variable, AgeGroup, Sex);

/// Year-sorted lookups into a [`Dataset`].
#[derive(Debug, Clone, Default)]
pub struct SeriesIndex {
    gdp_hist: BTreeMap<Iso3, Vec<(i32, f64)>>,
    gdp_baseline: BTreeMap<Iso3, Vec<(i32, f64)>>,
    rates: BTreeMap<RateKey, Vec<(i32, f64)>>,
    base_pop: BTreeMap<Iso3, usize>,
}

impl SeriesIndex {
    pub fn new(data: &Dataset) -> Self {
        let mut idx = SeriesIndex::default();
        for g in &data.gdp_hist {
            idx.gdp_hist.entry(g.iso3.clone()).or_default().push((g.year, g.gdp_pc));
        }
        for g in &data.gdp_baseline {
            idx.gdp_baseline
                .entry(g.iso3.clone())
                .or_default()
                .push((g.year, g.gdp_pc));
        }
        for r in &data.rates {
            idx.rates
                .entry((r.iso3.clone(), r.variable, r.age_group, r.sex))
                .or_default()
                .push((r.year, r.rate));
        }
        for (i, b) in data.base_pop.iter().enumerate() {
            idx.base_pop.insert(b.iso3.clone(), i);
        }
        for s in idx
            .gdp_hist
            .values_mut()
            .chain(idx.gdp_baseline.values_mut())
            .chain(idx.rates.values_mut())
        {
            s.sort_by_key(|&(y, _)| y);
        }
        idx
    }

    pub fn gdp_hist(&self, iso3: &Iso3) -> &[(i32, f64)] {
        self.gdp_hist.get(iso3).map_or(&[], Vec::as_slice)
    }

    pub fn gdp_baseline(&self, iso3: &Iso3) -> &[(i32, f64)] {
        self.gdp_baseline.get(iso3).map_or(&[], Vec::as_slice)
    }

    pub fn base_pop<'a>(&self, data: &'a Dataset, iso3: &Iso3) -> Option<&'a BasePopulation> {
        self.base_pop.get(iso3).map(|&i| &data.base_pop[i])
    }

    /// Rate series for one band. Fertility is always female; mortality falls
    /// back to the "both sexes" series when no sex-specific one exists.
    pub fn rate_series(&self, iso3: &Iso3, variable: Variable, age: AgeGroup, sex: Sex) -> &[(i32, f64)] {
        let lookup = |s: Sex| self.rates.get(&(iso3.clone(), variable, age, s));
        let series = match variable {
            Variable::Fertility => lookup(Sex::Female),
            Variable::Mortality => lookup(sex).or_else(|| lookup(Sex::Both)),
        };
        series.map_or(&[], Vec::as_slice)
    }

    /// True when mortality for this band is given separately per sex.
    pub fn has_sex_specific_mortality(&self, iso3: &Iso3, age: AgeGroup) -> bool {
        [Sex::Female, Sex::Male]
            .iter()
            .all(|&s| self.rates.contains_key(&(iso3.clone(), Variable::Mortality, age, s)))
    }

    /// A country can be projected when it has GDP history, a baseline
    /// pathway, a base population, and at least one observation for every
    /// fertility band and every mortality band and sex.
    pub fn is_complete(&self, iso3: &Iso3) -> bool {
        !self.gdp_hist(iso3).is_empty()
            && !self.gdp_baseline(iso3).is_empty()
            && self.base_pop.contains_key(iso3)
            && AgeGroup::fertile().all(|a| !self.rate_series(iso3, Variable::Fertility, a, Sex::Female).is_empty())
            && AgeGroup::all().all(|a| {
                [Sex::Female, Sex::Male]
                    .iter()
                    .all(|&s| !self.rate_series(iso3, Variable::Mortality, a, s).is_empty())
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub n_countries: usize,
    /// Countries with data complete enough to project.
    pub n_complete: usize,
    /// Base-year population of complete countries over that of all countries.
    pub pop_share_of_base_year: f64,
    /// Each country's share of the total base-year population, by iso3.
    pub country_shares: Vec<(Iso3, f64)>,
}

pub fn validate_coverage(data: &Dataset) -> CoverageReport {
    let index = SeriesIndex::new(data);
    let total: f64 = data.base_pop.iter().map(BasePopulation::total).sum();
    let mut complete_pop = 0.0;
    let mut n_complete = 0;
    let mut country_shares = Vec::with_capacity(data.countries.len());
    for c in &data.countries {
        let pop = index.base_pop(data, &c.iso3).map_or(0.0, BasePopulation::total);
        if index.is_complete(&c.iso3) {
            n_complete += 1;
            complete_pop += pop;
        }
        let share = if total > 0.0 { pop / total } else { 0.0 };
        country_shares.push((c.iso3.clone(), share));
    }
    CoverageReport {
        n_countries: data.countries.len(),
        n_complete,
        pop_share_of_base_year: if total > 0.0 { complete_pop / total } else { 0.0 },
        country_shares,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_stays_inside_observed_range() {
        let s = [(1950, 10.0), (1955, 20.0), (1960, 20.0)];
        assert_eq!(interpolate(&s, 1950), Some(10.0));
        assert_eq!(interpolate(&s, 1952), Some(14.0));
        assert_eq!(interpolate(&s, 1958), Some(20.0));
        assert_eq!(interpolate(&s, 1960), Some(20.0));
        assert_eq!(interpolate(&s, 1949), None);
        assert_eq!(interpolate(&s, 1961), None);
        assert_eq!(interpolate(&[], 1961), None);
    }
}
