//! Donor-country augmentation of a target's fitting data.
//!
//! A donor is a country whose whole 1990-2015 GDP record lies above the
//! target's 2015 GDP and below the highest GDP the target reaches on its
//! scenario pathway. Donor (gdp, rate) pairs from that window are appended to
//! the target's own history for fitting; model weights are still scored on
//! the target's own pairs only.

use thiserror::Error;

use crate::domain::{AgeGroup, Iso3, Sex, Variable};
use crate::ingest::{interpolate, SeriesIndex};
use crate::scenarios::GdpPathway;

pub const DONOR_WINDOW_START: i32 = 1990;
pub const DONOR_WINDOW_END: i32 = 2015;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AugmentationError {
    #[error("{iso3} has no (gdp, rate) pairs for {variable} {age_group}")]
    NoTargetData {
        iso3: Iso3,
        variable: &'static str,
        age_group: AgeGroup,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DonorRule {
    pub window_start: i32,
    pub window_end: i32,
    pub target_gdp_2015: f64,
    pub target_pathway_max: f64,
}

impl DonorRule {
    pub fn new(target_gdp_2015: f64, target_pathway_max: f64) -> Self {
        DonorRule {
            window_start: DONOR_WINDOW_START,
            window_end: DONOR_WINDOW_END,
            target_gdp_2015,
            target_pathway_max: target_pathway_max.max(target_gdp_2015),
        }
    }

    /// Rule anchored on a scenario pathway: its first value and its maximum.
    pub fn for_pathway(pathway: &GdpPathway) -> Self {
        DonorRule::new(pathway.start_value(), pathway.max_value())
    }

    fn in_window(&self, year: i32) -> bool {
        (self.window_start..=self.window_end).contains(&year)
    }
}

/// A potential donor and its GDP history.
#[derive(Debug, Clone, Copy)]
pub struct DonorCandidate<'a> {
    pub iso3: &'a Iso3,
    pub gdp: &'a [(i32, f64)],
}

/// Donors for `target`, sorted by iso3. Candidates without any GDP
/// observation inside the window are never selected.
pub fn select_donors(target: &Iso3, rule: &DonorRule, candidates: &[DonorCandidate<'_>]) -> Vec<Iso3> {
    let mut donors: Vec<Iso3> = candidates
        .iter()
        .filter(|c| c.iso3 != target)
        .filter(|c| {
            let (mut lo, mut hi, mut any) = (f64::INFINITY, f64::NEG_INFINITY, false);
            for &(year, gdp) in c.gdp {
                if rule.in_window(year) {
                    lo = lo.min(gdp);
                    hi = hi.max(gdp);
                    any = true;
                }
            }
            any && lo > rule.target_gdp_2015 && hi < rule.target_pathway_max
        })
        .map(|c| c.iso3.clone())
        .collect();
    donors.sort();
    donors.dedup();
    donors
}

#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedSeries {
    /// Target history followed by donor window pairs, as (gdp, rate).
    pub fit_points: Vec<(f64, f64)>,
    /// The target's own pairs.
    pub weight_points: Vec<(f64, f64)>,
}

/// Pairs each rate observation with GDP in the same year, interpolating GDP
/// linearly between its observed years. Rate years outside the GDP record
/// are dropped.
pub fn paired_history(
    index: &SeriesIndex,
    iso3: &Iso3,
    variable: Variable,
    age_group: AgeGroup,
    sex: Sex,
    years: Option<(i32, i32)>,
) -> Vec<(f64, f64)> {
    let gdp = index.gdp_hist(iso3);
    index
        .rate_series(iso3, variable, age_group, sex)
        .iter()
        .filter(|(y, _)| years.is_none_or(|(a, b)| (a..=b).contains(y)))
        .filter_map(|&(y, rate)| interpolate(gdp, y).map(|g| (g, rate)))
        .collect()
}

pub fn build_augmented_series(
    target: &Iso3,
    donors: &[Iso3],
    variable: Variable,
    age_group: AgeGroup,
    sex: Sex,
    index: &SeriesIndex,
) -> Result<AugmentedSeries, AugmentationError> {
    let weight_points = paired_history(index, target, variable, age_group, sex, None);
    if weight_points.is_empty() {
        return Err(AugmentationError::NoTargetData {
            iso3: target.clone(),
            variable: variable.token(),
            age_group,
        });
    }
    let mut fit_points = weight_points.clone();
    for donor in donors.iter().filter(|d| *d != target) {
        fit_points.extend(paired_history(
            index,
            donor,
            variable,
            age_group,
            sex,
            Some((DONOR_WINDOW_START, DONOR_WINDOW_END)),
        ));
    }
    Ok(AugmentedSeries {
        fit_points,
        weight_points,
    })
}
