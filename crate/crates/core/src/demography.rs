//! Annual cohort-component projection without migration.
//!
//! Each step applies, in order: deaths (`(1 - q)` per band and sex), aging
//! (a fifth of every surviving five-year band moves up one band; the open
//! 100+ band keeps its survivors), and births. Births are computed from the
//! surviving women of each fertile band before they age, and newborns enter
//! the 0-4 band after aging.

use thiserror::Error;

use crate::domain::{AgeGroup, Iso3};
use crate::forecast::{CapPolicy, CountryEnsembles, ForecastError};
use crate::scenarios::GdpPathway;

pub const DEFAULT_SRB: f64 = 1.05;

pub const FEMALE: usize = 0;
pub const MALE: usize = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DemographyError {
    #[error("invalid rate: {0}")]
    InvalidRate(String),
    #[error("population state has a negative or non-finite cohort")]
    NegativeState,
    #[error("no GDP for year {0} on the pathway")]
    PathwayGap(i32),
    #[error("base year {base} does not match pathway start {pathway}")]
    BaseYearMismatch { base: i32, pathway: i32 },
    #[error(transparent)]
    Forecast(#[from] ForecastError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationState {
    pub iso3: Iso3,
    pub year: i32,
    /// `cohorts[age][sex]`, female then male.
    pub cohorts: [[f64; 2]; AgeGroup::COUNT],
}

impl PopulationState {
    pub fn empty(iso3: Iso3, year: i32) -> Self {
        PopulationState {
            iso3,
            year,
            cohorts: [[0.0; 2]; AgeGroup::COUNT],
        }
    }

    fn is_valid(&self) -> bool {
        self.cohorts.iter().flatten().all(|c| c.is_finite() && *c >= 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VitalRates {
    /// Births per woman per year, bands 15-19 through 40-44.
    pub asfr: [f64; AgeGroup::FERTILE_COUNT],
    /// Annual death probability, `mortality[age][sex]`.
    pub mortality: [[f64; 2]; AgeGroup::COUNT],
}

impl VitalRates {
    pub fn zero() -> Self {
        VitalRates {
            asfr: [0.0; AgeGroup::FERTILE_COUNT],
            mortality: [[0.0; 2]; AgeGroup::COUNT],
        }
    }

    fn validate(&self) -> Result<(), DemographyError> {
        if let Some(a) = self.asfr.iter().find(|a| !a.is_finite() || **a < 0.0) {
            return Err(DemographyError::InvalidRate(format!("asfr {a}")));
        }
        if let Some(q) = self.mortality.iter().flatten().find(|q| !(0.0..=1.0).contains(*q)) {
            return Err(DemographyError::InvalidRate(format!("death probability {q}")));
        }
        Ok(())
    }
}

pub fn total_population(state: &PopulationState) -> f64 {
    state.cohorts.iter().flatten().sum()
}

pub fn step_year(state: &PopulationState, rates: &VitalRates, srb: f64) -> Result<PopulationState, DemographyError> {
    if !state.is_valid() {
        return Err(DemographyError::NegativeState);
    }
    rates.validate()?;
    if !(srb.is_finite() && srb > 0.0) {
        return Err(DemographyError::InvalidRate(format!("sex ratio at birth {srb}")));
    }

    let mut surviving = [[0.0; 2]; AgeGroup::COUNT];
    for (age, row) in surviving.iter_mut().enumerate() {
        for sex in [FEMALE, MALE] {
            row[sex] = state.cohorts[age][sex] * (1.0 - rates.mortality[age][sex]);
        }
    }

    let births: f64 = rates
        .asfr
        .iter()
        .enumerate()
        .map(|(i, f)| f * surviving[AgeGroup::FERTILE_FIRST + i][FEMALE])
        .sum();

    let last = AgeGroup::COUNT - 1;
    let mut next = [[0.0; 2]; AgeGroup::COUNT];
    for sex in [FEMALE, MALE] {
        for age in 0..last {
            let moving = surviving[age][sex] * 0.2;
            next[age][sex] += surviving[age][sex] - moving;
            next[age + 1][sex] += moving;
        }
        next[last][sex] += surviving[last][sex];
    }
    next[0][MALE] += births * srb / (1.0 + srb);
    next[0][FEMALE] += births / (1.0 + srb);

    let out = PopulationState {
        iso3: state.iso3.clone(),
        year: state.year + 1,
        cohorts: next,
    };
    if !out.is_valid() {
        return Err(DemographyError::NegativeState);
    }
    Ok(out)
}

/// Projects `base` to `horizon`, evaluating rates at the pathway GDP of
/// each year before stepping. The result starts with the base state.
pub fn project_country(
    base: &PopulationState,
    ensembles: &CountryEnsembles,
    pathway: &GdpPathway,
    cap: &CapPolicy,
    horizon: i32,
    srb: f64,
) -> Result<Vec<PopulationState>, DemographyError> {
    if base.year != pathway.start_year() {
        return Err(DemographyError::BaseYearMismatch {
            base: base.year,
            pathway: pathway.start_year(),
        });
    }
    let mut trajectory = Vec::with_capacity((horizon - base.year + 1).max(1) as usize);
    trajectory.push(base.clone());
    let mut state = base.clone();
    for year in base.year..horizon {
        let gdp = pathway.gdp(year).ok_or(DemographyError::PathwayGap(year))?;
        let rates = ensembles.vital_rates(gdp, cap)?;
        state = step_year(&state, &rates, srb)?;
        trajectory.push(state.clone());
    }
    Ok(trajectory)
}
