//! Population projections driven by GDP per capita.
//!
//! Age-specific fertility and mortality are regressed on GDP per capita with
//! eight candidate forms, averaged by AICc weight, and fed into an annual
//! cohort-component projection from 2015 to 2100 under exogenous GDP
//! scenarios.
//!
//! Stages, in pipeline order:
//! [`ingest`] → [`scenarios`] → [`augmentation`] → [`models`] →
//! [`forecast`] → [`demography`] → [`report`], orchestrated by [`pipeline`].

pub mod augmentation;
pub mod demography;
pub mod domain;
pub mod forecast;
pub mod ingest;
pub mod models;
pub mod pipeline;
pub mod report;
pub mod scenarios;

pub use domain::{AgeGroup, IncomeGroup, Iso3, Region, Sex, Variable, BASE_YEAR, HORIZON_YEAR};
pub use pipeline::{run, simulate, RunConfig, RunError, SimulationSettings};
