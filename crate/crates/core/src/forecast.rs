//! Model-averaged GDP-to-rate predictors.

use thiserror::Error;

use crate::augmentation::{build_augmented_series, AugmentationError};
use crate::demography::VitalRates;
use crate::domain::{AgeGroup, Iso3, Sex, Variable};
use crate::ingest::SeriesIndex;
use crate::models::{akaike_weights, fit, predict, FitResult, ModelError, ModelForm};

pub const DEFAULT_FERTILITY_CAP: f64 = 30_000.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ForecastError {
    #[error("no target observations to score model weights")]
    NoWeightData,
    #[error("GDP must be positive, found {0}")]
    NonPositiveGdp(f64),
    #[error("fertility cap must be a positive dollar amount, found {0}")]
    InvalidCap(f64),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Augmentation(#[from] AugmentationError),
}

/// GDP above which fertility is held at its value at the cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapPolicy {
    fertility_cap_gdp: f64,
}

impl CapPolicy {
    pub fn new(fertility_cap_gdp: f64) -> Result<Self, ForecastError> {
        if fertility_cap_gdp.is_finite() && fertility_cap_gdp > 0.0 {
            Ok(CapPolicy { fertility_cap_gdp })
        } else {
            Err(ForecastError::InvalidCap(fertility_cap_gdp))
        }
    }

    pub fn fertility_cap_gdp(&self) -> f64 {
        self.fertility_cap_gdp
    }
}

impl Default for CapPolicy {
    fn default() -> Self {
        CapPolicy {
            fertility_cap_gdp: DEFAULT_FERTILITY_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateEnsemble {
    pub members: Vec<FitResult>,
    pub weights: Vec<f64>,
}

impl RateEnsemble {
    /// Weighted sum of the members' clamped predictions.
    pub fn predict(&self, gdp: f64) -> Result<f64, ForecastError> {
        if !(gdp.is_finite() && gdp > 0.0) {
            return Err(ForecastError::NonPositiveGdp(gdp));
        }
        let mut acc = 0.0;
        for (m, w) in self.members.iter().zip(&self.weights) {
            acc += w * predict(m, gdp)?;
        }
        Ok(acc)
    }
}

fn unzip(points: &[(f64, f64)]) -> (Vec<f64>, Vec<f64>) {
    points.iter().copied().unzip()
}

/// Fits every form on `fit_points`, rescores each on `weight_points`, and
/// weights them by AICc. Forms that cannot be fitted or scored are dropped;
/// if none remain, the mean of the fitting data is used with weight 1 and
/// an infinite AICc.
pub fn build_ensemble(fit_points: &[(f64, f64)], weight_points: &[(f64, f64)]) -> Result<RateEnsemble, ForecastError> {
    if weight_points.is_empty() {
        return Err(ForecastError::NoWeightData);
    }
    let (fx, fy) = unzip(fit_points);
    let (wx, wy) = unzip(weight_points);
    let mut members = Vec::new();
    for form in ModelForm::ALL {
        let Ok(fitted) = fit(form, &fx, &fy) else {
            continue;
        };
        match fitted.rescored(&wx, &wy) {
            Ok(scored) => members.push(scored),
            Err(ModelError::DenominatorZero { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    if members.is_empty() {
        let ys = if fy.is_empty() { &wy } else { &fy };
        let mean = ys.iter().sum::<f64>() / ys.len() as f64;
        let rss: f64 = ys.iter().map(|y| (y - mean) * (y - mean)).sum();
        members.push(FitResult {
            form: ModelForm::Null,
            beta1: mean,
            beta2: 0.0,
            beta3: None,
            slope_right: None,
            breakpoint_x1: None,
            ybar: Some(mean),
            sigma: (rss.max(crate::models::RSS_FLOOR) / ys.len() as f64).sqrt(),
            rss,
            n_fit: ys.len(),
            k_params: ModelForm::Null.k_params(),
            aicc: f64::INFINITY,
        });
        return Ok(RateEnsemble {
            members,
            weights: vec![1.0],
        });
    }
    let aiccs: Vec<f64> = members.iter().map(|m| m.aicc).collect();
    let weights = akaike_weights(&aiccs)?;
    Ok(RateEnsemble { members, weights })
}

/// Ensemble forecast at `gdp`. Fertility is evaluated at `min(gdp, cap)`,
/// mortality at `gdp`.
pub fn forecast_rate(
    ensemble: &RateEnsemble,
    gdp: f64,
    variable: Variable,
    cap: &CapPolicy,
) -> Result<f64, ForecastError> {
    if !(gdp.is_finite() && gdp > 0.0) {
        return Err(ForecastError::NonPositiveGdp(gdp));
    }
    match variable {
        Variable::Fertility => ensemble.predict(gdp.min(cap.fertility_cap_gdp)),
        Variable::Mortality => ensemble.predict(gdp),
    }
}

/// All ensembles needed to project one country.
#[derive(Debug, Clone, PartialEq)]
pub struct CountryEnsembles {
    pub iso3: Iso3,
    /// One per fertile band, 15-19 first.
    pub fertility: Vec<RateEnsemble>,
    /// `mortality[sex][age]`, female then male.
    pub mortality: [Vec<RateEnsemble>; 2],
}

impl CountryEnsembles {
    /// Builds every fertility and mortality ensemble for `target` from its own
    /// history plus that of `donors`. Mortality given only for both sexes is
    /// fitted once and shared.
    pub fn build(target: &Iso3, donors: &[Iso3], index: &SeriesIndex) -> Result<Self, ForecastError> {
        let one = |variable, age, sex| -> Result<RateEnsemble, ForecastError> {
            let s = build_augmented_series(target, donors, variable, age, sex, index)?;
            build_ensemble(&s.fit_points, &s.weight_points)
        };
        let fertility = AgeGroup::fertile()
            .map(|a| one(Variable::Fertility, a, Sex::Female))
            .collect::<Result<Vec<_>, _>>()?;
        let mut female = Vec::with_capacity(AgeGroup::COUNT);
        let mut male = Vec::with_capacity(AgeGroup::COUNT);
        for age in AgeGroup::all() {
            if index.has_sex_specific_mortality(target, age) {
                female.push(one(Variable::Mortality, age, Sex::Female)?);
                male.push(one(Variable::Mortality, age, Sex::Male)?);
            } else {
                let shared = one(Variable::Mortality, age, Sex::Both)?;
                female.push(shared.clone());
                male.push(shared);
            }
        }
        Ok(CountryEnsembles {
            iso3: target.clone(),
            fertility,
            mortality: [female, male],
        })
    }

    /// Rates for one year at the given GDP. Death probabilities are capped
    /// at 1.
    pub fn vital_rates(&self, gdp: f64, cap: &CapPolicy) -> Result<VitalRates, ForecastError> {
        let mut rates = VitalRates::zero();
        for (slot, ens) in rates.asfr.iter_mut().zip(&self.fertility) {
            *slot = forecast_rate(ens, gdp, Variable::Fertility, cap)?;
        }
        for (sex, ensembles) in self.mortality.iter().enumerate() {
            for (age, ens) in ensembles.iter().enumerate() {
                rates.mortality[age][sex] = forecast_rate(ens, gdp, Variable::Mortality, cap)?.min(1.0);
            }
        }
        Ok(rates)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manual(form: ModelForm, beta1: f64, beta2: f64) -> FitResult {
        FitResult {
            form,
            beta1,
            beta2,
            beta3: None,
            slope_right: None,
            breakpoint_x1: None,
            ybar: None,
            sigma: 1.0,
            rss: 1.0,
            n_fit: 10,
            k_params: form.k_params(),
            aicc: 0.0,
        }
    }

    #[test]
    fn convex_combination_example() {
        let ens = RateEnsemble {
            members: vec![manual(ModelForm::Linear, 2.0, 0.0), manual(ModelForm::Null, 3.0, 0.0)],
            weights: vec![0.6, 0.4],
        };
        let v = forecast_rate(&ens, 1234.0, Variable::Mortality, &CapPolicy::default()).unwrap();
        assert!((v - 2.4).abs() < 1e-12);
    }

    #[test]
    fn fertility_cap_applies_to_input() {
        let ens = RateEnsemble {
            members: vec![manual(ModelForm::Linear, 6.0, -0.0001)],
            weights: vec![1.0],
        };
        let cap = CapPolicy::default();
        let at_cap = forecast_rate(&ens, 30_000.0, Variable::Fertility, &cap).unwrap();
        let above = forecast_rate(&ens, 50_000.0, Variable::Fertility, &cap).unwrap();
        assert_eq!(at_cap.to_bits(), above.to_bits());
        assert_eq!(at_cap, 3.0);
        // mortality keeps following the model (here down to the clamp at 0)
        let m = forecast_rate(&ens, 50_000.0, Variable::Mortality, &cap).unwrap();
        assert_eq!(m, 1.0);
        assert_eq!(
            forecast_rate(&ens, -1.0, Variable::Mortality, &cap),
            Err(ForecastError::NonPositiveGdp(-1.0))
        );
    }

    #[test]
    fn cap_validation() {
        assert!(CapPolicy::new(20_000.0).is_ok());
        assert!(CapPolicy::new(0.0).is_err());
        assert!(CapPolicy::new(f64::NAN).is_err());
    }

    #[test]
    fn two_points_leave_only_null() {
        let pts = [(1000.0, 2.0), (2000.0, 4.0)];
        let ens = build_ensemble(&pts, &pts).unwrap();
        assert_eq!(ens.members.len(), 1);
        assert_eq!(ens.members[0].form, ModelForm::Null);
        assert_eq!(ens.weights, vec![1.0]);
        assert_eq!(ens.predict(5000.0).unwrap(), 3.0);
    }

    #[test]
    fn no_weight_data() {
        assert_eq!(build_ensemble(&[(1.0, 1.0)], &[]), Err(ForecastError::NoWeightData));
    }

    #[test]
    fn weights_sum_to_one() {
        let pts: Vec<(f64, f64)> = (1..=14)
            .map(|i| {
                let x = 500.0 * f64::from(i);
                (x, 6.0 * (-x / 3000.0).exp() + 0.05 * (f64::from(i) * 1.7).sin())
            })
            .collect();
        let ens = build_ensemble(&pts, &pts).unwrap();
        assert_eq!(ens.members.len(), 8);
        let total: f64 = ens.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert!(ens.weights.iter().all(|w| (0.0..=1.0).contains(w)));
    }
}
