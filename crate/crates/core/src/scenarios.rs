//! Annual GDP-per-capita pathways, 2015 through 2100.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::domain::{Iso3, BASE_YEAR, HORIZON_YEAR};

pub const CONVERGENCE_TARGET: f64 = 30_000.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("{iso3}: baseline GDP does not cover year {year}")]
    PathwayGap { iso3: Iso3, year: i32 },
    #[error("{iso3}: multiplier {m} drives GDP non-positive in {year}")]
    NonPositiveResult { iso3: Iso3, m: f64, year: i32 },
    #[error("invalid scenario: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GdpPathway {
    pub iso3: Iso3,
    pub scenario_id: String,
    start_year: i32,
    values: Vec<f64>,
}

impl GdpPathway {
    /// Pathway covering `start_year ..= start_year + values.len() - 1`.
    pub fn new(iso3: Iso3, scenario_id: impl Into<String>, start_year: i32, values: Vec<f64>) -> Self {
        GdpPathway {
            iso3,
            scenario_id: scenario_id.into(),
            start_year,
            values,
        }
    }

    pub fn start_year(&self) -> i32 {
        self.start_year
    }

    pub fn end_year(&self) -> i32 {
        self.start_year + self.values.len() as i32 - 1
    }

    pub fn gdp(&self, year: i32) -> Option<f64> {
        let i = usize::try_from(year - self.start_year).ok()?;
        self.values.get(i).copied()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn start_value(&self) -> f64 {
        self.values[0]
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn years(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| (self.start_year + i as i32, v))
    }
}

/// Annual pathway from anchor years by geometric interpolation (constant
/// growth rate between consecutive anchors). Anchors must bracket 2015-2100
/// and be sorted by year.
pub fn baseline_pathway(iso3: &Iso3, anchors: &[(i32, f64)]) -> Result<GdpPathway, ScenarioError> {
    let gap = |year| ScenarioError::PathwayGap {
        iso3: iso3.clone(),
        year,
    };
    let mut values = Vec::with_capacity((HORIZON_YEAR - BASE_YEAR + 1) as usize);
    for year in BASE_YEAR..=HORIZON_YEAR {
        let idx = anchors.partition_point(|&(y, _)| y < year);
        let &(y1, v1) = anchors.get(idx).ok_or_else(|| gap(year))?;
        let v = if y1 == year {
            v1
        } else {
            let &(y0, v0) = idx
                .checked_sub(1)
                .and_then(|i| anchors.get(i))
                .ok_or_else(|| gap(year))?;
            let t = f64::from(year - y0) / f64::from(y1 - y0);
            v0 * (v1 / v0).powf(t)
        };
        values.push(v);
    }
    Ok(GdpPathway::new(
        iso3.clone(),
        Scenario::Baseline.id(),
        BASE_YEAR,
        values,
    ))
}

/// Scales each year's baseline growth rate by `m`, compounding on the
/// scenario's own level: `out[t+1] = out[t] * (1 + m * r[t])`.
pub fn multiplier_pathway(base: &GdpPathway, m: f64) -> Result<GdpPathway, ScenarioError> {
    if !(m.is_finite() && m >= 0.0) {
        return Err(ScenarioError::InvalidSpec(format!("multiplier {m} must be >= 0")));
    }
    let mut values = Vec::with_capacity(base.values.len());
    values.push(base.values[0]);
    for (i, w) in base.values.windows(2).enumerate() {
        let growth = w[1] / w[0] - 1.0;
        let factor = 1.0 + m * growth;
        let year = base.start_year + i as i32 + 1;
        if factor <= 0.0 {
            return Err(ScenarioError::NonPositiveResult {
                iso3: base.iso3.clone(),
                m,
                year,
            });
        }
        values.push(values[i] * factor);
    }
    Ok(GdpPathway::new(
        base.iso3.clone(),
        Scenario::Multiplier(m).id(),
        base.start_year,
        values,
    ))
}

/// Constant growth from `gdp_2015` that reaches `target` exactly in 2100;
/// flat when already at or above the target.
pub fn convergence_pathway(iso3: &Iso3, gdp_2015: f64, target: f64) -> Result<GdpPathway, ScenarioError> {
    if !(gdp_2015.is_finite() && gdp_2015 > 0.0) {
        return Err(ScenarioError::InvalidSpec(format!(
            "2015 GDP {gdp_2015} must be positive"
        )));
    }
    let span = f64::from(HORIZON_YEAR - BASE_YEAR);
    let values = (BASE_YEAR..=HORIZON_YEAR)
        .map(|year| {
            if gdp_2015 >= target {
                gdp_2015
            } else if year == HORIZON_YEAR {
                target
            } else {
                gdp_2015 * (target / gdp_2015).powf(f64::from(year - BASE_YEAR) / span)
            }
        })
        .collect();
    Ok(GdpPathway::new(
        iso3.clone(),
        Scenario::Convergence(target).id(),
        BASE_YEAR,
        values,
    ))
}

/// Annual growth rate of the convergence pathway.
pub fn convergence_growth_rate(gdp_2015: f64, target: f64) -> f64 {
    if gdp_2015 >= target {
        0.0
    } else {
        (target / gdp_2015).powf(1.0 / f64::from(HORIZON_YEAR - BASE_YEAR)) - 1.0
    }
}

/// A single GDP scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    Baseline,
    Multiplier(f64),
    Convergence(f64),
}

impl Scenario {
    pub fn id(&self) -> String {
        match *self {
            Scenario::Baseline => "baseline".to_string(),
            Scenario::Multiplier(m) => format!("m{}", format_multiplier(m)),
            Scenario::Convergence(t) if t == CONVERGENCE_TARGET => "convergence".to_string(),
            Scenario::Convergence(t) => format!("convergence{t}"),
        }
    }

    /// This scenario's pathway for one country, derived from its baseline.
    pub fn pathway(&self, baseline: &GdpPathway) -> Result<GdpPathway, ScenarioError> {
        match *self {
            Scenario::Baseline => Ok(baseline.clone()),
            Scenario::Multiplier(m) => multiplier_pathway(baseline, m),
            Scenario::Convergence(t) => convergence_pathway(&baseline.iso3, baseline.start_value(), t),
        }
    }

    pub fn multiplier(&self) -> Option<f64> {
        match *self {
            Scenario::Baseline => Some(1.0),
            Scenario::Multiplier(m) => Some(m),
            Scenario::Convergence(_) => None,
        }
    }
}

/// One decimal place, unless that would lose precision.
fn format_multiplier(m: f64) -> String {
    let short = format!("{m:.1}");
    if short.parse::<f64>().is_ok_and(|v| (v - m).abs() < 1e-9) {
        short
    } else {
        format!("{m}")
    }
}

/// Multipliers `from, from + step, ..., to` with round-off snapped away.
pub fn sweep_multipliers(from: f64, to: f64, step: f64) -> Result<Vec<f64>, ScenarioError> {
    if !(step.is_finite() && step > 0.0) {
        return Err(ScenarioError::InvalidSpec(format!(
            "sweep step {step} must be positive"
        )));
    }
    if !(from >= 0.0 && to >= from && to.is_finite()) {
        return Err(ScenarioError::InvalidSpec(format!(
            "sweep range {from}..{to} is invalid"
        )));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| {
            let m = from + i as f64 * step;
            (m * 1e9).round() / 1e9
        })
        .collect())
}

/// Multiplier scenarios with pathways for every country, in sweep order.
pub fn sweep(
    baselines: &[GdpPathway],
    from: f64,
    to: f64,
    step: f64,
) -> Result<Vec<(String, Vec<GdpPathway>)>, ScenarioError> {
    sweep_multipliers(from, to, step)?
        .into_iter()
        .map(|m| {
            let pathways = baselines
                .iter()
                .map(|b| multiplier_pathway(b, m))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((Scenario::Multiplier(m).id(), pathways))
        })
        .collect()
}

/// Command-line scenario token: `baseline`, `m:<value>`, `convergence`
/// (optionally `convergence:<target>`), or `sweep[:<from>:<to>:<step>]`.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioSpec {
    Baseline,
    Multiplier(f64),
    Convergence(f64),
    Sweep { from: f64, to: f64, step: f64 },
}

impl ScenarioSpec {
    pub fn expand(&self) -> Result<Vec<Scenario>, ScenarioError> {
        Ok(match *self {
            ScenarioSpec::Baseline => vec![Scenario::Baseline],
            ScenarioSpec::Multiplier(m) => vec![Scenario::Multiplier(m)],
            ScenarioSpec::Convergence(t) => vec![Scenario::Convergence(t)],
            ScenarioSpec::Sweep { from, to, step } => sweep_multipliers(from, to, step)?
                .into_iter()
                .map(Scenario::Multiplier)
                .collect(),
        })
    }
}

impl fmt::Display for ScenarioSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioSpec::Baseline => write!(f, "baseline"),
            ScenarioSpec::Multiplier(m) => write!(f, "m:{m}"),
            ScenarioSpec::Convergence(t) => write!(f, "convergence:{t}"),
            ScenarioSpec::Sweep { from, to, step } => write!(f, "sweep:{from}:{to}:{step}"),
        }
    }
}

impl FromStr for ScenarioSpec {
    type Err = ScenarioError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let invalid = || {
            ScenarioError::InvalidSpec(format!(
                "'{s}' (expected baseline, m:<value>, convergence, or sweep[:<from>:<to>:<step>])"
            ))
        };
        let num = |t: &str| -> Result<f64, ScenarioError> {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(invalid)
        };
        let parts: Vec<&str> = s.trim().split(':').collect();
        let spec = match parts.as_slice() {
            ["baseline"] => ScenarioSpec::Baseline,
            ["m", v] => {
                let m = num(v)?;
                if m < 0.0 {
                    return Err(invalid());
                }
                ScenarioSpec::Multiplier(m)
            }
            ["convergence"] => ScenarioSpec::Convergence(CONVERGENCE_TARGET),
            ["convergence", t] => {
                let t = num(t)?;
                if t <= 0.0 {
                    return Err(invalid());
                }
                ScenarioSpec::Convergence(t)
            }
            ["sweep"] => ScenarioSpec::Sweep {
                from: 0.0,
                to: 2.0,
                step: 0.1,
            },
            ["sweep", a, b, c] => {
                let (from, to, step) = (num(a)?, num(b)?, num(c)?);
                sweep_multipliers(from, to, step)?;
                ScenarioSpec::Sweep { from, to, step }
            }
            _ => return Err(invalid()),
        };
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iso() -> Iso3 {
        Iso3::new("TST").unwrap()
    }

    #[test]
    fn geometric_interpolation() {
        let p = baseline_pathway(&iso(), &[(2015, 100.0), (2025, 200.0), (2100, 200.0)]).unwrap();
        assert!((p.gdp(2020).unwrap() - 100.0 * 2f64.sqrt()).abs() < 1e-9);
        assert!((p.gdp(2020).unwrap() - 141.42).abs() < 0.01);
        assert_eq!(p.gdp(2025), Some(200.0));
        assert_eq!(p.gdp(2060), Some(200.0));
        assert_eq!(p.start_year(), 2015);
        assert_eq!(p.end_year(), 2100);
    }

    #[test]
    fn baseline_gap() {
        assert!(matches!(
            baseline_pathway(&iso(), &[(2015, 100.0), (2090, 200.0)]),
            Err(ScenarioError::PathwayGap { year: 2091, .. })
        ));
        assert!(matches!(
            baseline_pathway(&iso(), &[(2020, 100.0), (2100, 200.0)]),
            Err(ScenarioError::PathwayGap { year: 2015, .. })
        ));
    }

    #[test]
    fn multiplier_compounds_on_own_level() {
        let values: Vec<f64> = (0..86).map(|i| 100.0 * 1.02f64.powi(i)).collect();
        let base = GdpPathway::new(iso(), "baseline", 2015, values);
        let p = multiplier_pathway(&base, 2.0).unwrap();
        assert!((p.gdp(2025).unwrap() - 148.024_428_5).abs() < 1e-6);
        assert_eq!(p.scenario_id, "m2.0");
        let flat = multiplier_pathway(&base, 0.0).unwrap();
        assert!(flat.values().iter().all(|&v| v == 100.0));
        assert!(multiplier_pathway(&base, -1.0).is_err());
    }

    #[test]
    fn multiplier_rejects_collapse() {
        let base = GdpPathway::new(iso(), "baseline", 2015, vec![100.0, 40.0, 40.0]);
        assert!(matches!(
            multiplier_pathway(&base, 2.0),
            Err(ScenarioError::NonPositiveResult { year: 2016, .. })
        ));
    }

    #[test]
    fn convergence_examples() {
        let flat = convergence_pathway(&iso(), 30_000.0, 30_000.0).unwrap();
        assert!(flat.values().iter().all(|&v| v == 30_000.0));
        let rich = convergence_pathway(&iso(), 60_000.0, 30_000.0).unwrap();
        assert!(rich.values().iter().all(|&v| v == 60_000.0));
        let poor = convergence_pathway(&iso(), 10_000.0, 30_000.0).unwrap();
        assert!((poor.gdp(2100).unwrap() - 30_000.0).abs() < 1e-6);
        let g = convergence_growth_rate(10_000.0, 30_000.0);
        assert!((g - 0.013_009).abs() < 1e-5);
        assert!((poor.gdp(2016).unwrap() / poor.gdp(2015).unwrap() - 1.0 - g).abs() < 1e-12);
    }

    #[test]
    fn sweep_counts_and_labels() {
        let ms = sweep_multipliers(0.0, 2.0, 0.1).unwrap();
        assert_eq!(ms.len(), 21);
        assert_eq!(ms[3], 0.3);
        assert_eq!(ms[20], 2.0);
        let ids: Vec<String> = ms.iter().map(|&m| Scenario::Multiplier(m).id()).collect();
        assert_eq!(ids[0], "m0.0");
        assert_eq!(ids[20], "m2.0");
        assert_eq!(sweep_multipliers(1.0, 1.0, 0.1).unwrap(), vec![1.0]);
        assert_eq!(sweep_multipliers(0.0, 2.0, 0.5).unwrap(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert!(sweep_multipliers(0.0, 2.0, 0.0).is_err());
        assert_eq!(Scenario::Multiplier(0.25).id(), "m0.25");
    }

    #[test]
    fn spec_tokens() {
        assert_eq!("baseline".parse::<ScenarioSpec>().unwrap(), ScenarioSpec::Baseline);
        assert_eq!("m:1.5".parse::<ScenarioSpec>().unwrap(), ScenarioSpec::Multiplier(1.5));
        assert_eq!(
            "convergence".parse::<ScenarioSpec>().unwrap(),
            ScenarioSpec::Convergence(30_000.0)
        );
        assert_eq!("sweep".parse::<ScenarioSpec>().unwrap().expand().unwrap().len(), 21);
        assert_eq!(
            "sweep:0:2:0.5".parse::<ScenarioSpec>().unwrap().expand().unwrap().len(),
            5
        );
        for bad in [
            "",
            "m:",
            "m:-1",
            "m:abc",
            "sweep:1:0:0.1",
            "sweep:0:1",
            "banana",
            "convergence:0",
        ] {
            assert!(bad.parse::<ScenarioSpec>().is_err(), "{bad}");
        }
    }
}
