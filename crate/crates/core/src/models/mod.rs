//! The eight GDP-to-rate regression forms, their least-squares fits, AICc
//! scoring and Akaike weights.
//!
//! Residuals are treated as i.i.d. Gaussian, so maximum likelihood reduces
//! to least squares and `sigma = sqrt(RSS / n)`.
//!
//! The piecewise forms are continuous at the breakpoint `x1`:
//!
//! | form          | `x < x1`            | `x >= x1`                      |
//! |---------------|---------------------|--------------------------------|
//! | LinearSpline  | `b1 + b2 x`         | `b1 + b2 x1 + b2r (x - x1)`    |
//! | RightHinge    | `b1 + b2 x`         | `ybar = b1 + b2 x1`            |
//! | LeftHinge     | `ybar = b1 + b2 x1` | `b1 + b2 x`                    |
//!
//! Some method write-ups describe "seven" monotone forms while tabulating
//! eight; all eight tabulated forms are implemented here.

mod golden;
mod lsq;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use golden::golden_section_min;
pub use lsq::least_squares;

/// Floor applied to the residual sum of squares before taking its log.
pub const RSS_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("insufficient data: {n} observations for a model with {k} parameters")]
    InsufficientData { n: usize, k: usize },
    #[error("all GDP values are identical; only the null model can be fitted")]
    DegenerateX,
    #[error("non-finite input value")]
    NonFiniteInput,
    #[error("GDP value must be positive, found {0}")]
    NonPositiveX(f64),
    #[error("x and y have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("too few distinct GDP values ({0}) to place a breakpoint")]
    NoBreakpointCandidates(usize),
    #[error("AICc undefined: n = {n} must exceed k + 1 = {}", k + 1)]
    DenominatorZero { n: usize, k: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("least-squares design is rank deficient")]
    Singular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelForm {
    Null,
    Linear,
    Division,
    NegLog,
    NegPower,
    LinearSpline,
    RightHinge,
    LeftHinge,
}

impl ModelForm {
    pub const ALL: [ModelForm; 8] = [
        ModelForm::Null,
        ModelForm::Linear,
        ModelForm::Division,
        ModelForm::NegLog,
        ModelForm::NegPower,
        ModelForm::LinearSpline,
        ModelForm::RightHinge,
        ModelForm::LeftHinge,
    ];

    /// Parameter count used by AICc, residual sigma included.
    pub fn k_params(self) -> usize {
        match self {
            ModelForm::Null => 2,
            ModelForm::Linear | ModelForm::Division | ModelForm::NegLog => 3,
            ModelForm::NegPower | ModelForm::RightHinge | ModelForm::LeftHinge => 4,
            ModelForm::LinearSpline => 5,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            ModelForm::Null => "null",
            ModelForm::Linear => "linear",
            ModelForm::Division => "division",
            ModelForm::NegLog => "neg_log",
            ModelForm::NegPower => "neg_power",
            ModelForm::LinearSpline => "linear_spline",
            ModelForm::RightHinge => "right_hinge",
            ModelForm::LeftHinge => "left_hinge",
        }
    }

    fn has_breakpoint(self) -> bool {
        matches!(
            self,
            ModelForm::LinearSpline | ModelForm::RightHinge | ModelForm::LeftHinge
        )
    }
}

impl fmt::Display for ModelForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for ModelForm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelForm::ALL
            .into_iter()
            .find(|f| f.token() == s)
            .ok_or_else(|| format!("unknown model form '{s}'"))
    }
}

/// One fitted model form.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub form: ModelForm,
    /// Intercept. For Null this equals the sample mean.
    pub beta1: f64,
    /// Slope or scale of the transformed regressor; left slope for splines.
    pub beta2: f64,
    /// Exponent of the negative power form.
    pub beta3: Option<f64>,
    /// Right-segment slope of the linear spline.
    pub slope_right: Option<f64>,
    pub breakpoint_x1: Option<f64>,
    /// Sample mean (Null) or plateau level (hinges).
    pub ybar: Option<f64>,
    pub sigma: f64,
    pub rss: f64,
    pub n_fit: usize,
    pub k_params: usize,
    pub aicc: f64,
}

impl FitResult {
    /// Unclamped model value at `x`.
    pub fn value(&self, x: f64) -> f64 {
        let (b1, b2) = (self.beta1, self.beta2);
        match self.form {
            ModelForm::Null => b1,
            ModelForm::Linear => b1 + b2 * x,
            ModelForm::Division => b1 + b2 / x,
            ModelForm::NegLog => b1 + b2 * x.ln(),
            ModelForm::NegPower => b1 + b2 * x.powf(-self.beta3.unwrap_or(1.0)),
            ModelForm::LinearSpline => {
                let x1 = self.breakpoint_x1.unwrap_or(f64::INFINITY);
                if x < x1 {
                    b1 + b2 * x
                } else {
                    b1 + b2 * x1 + self.slope_right.unwrap_or(b2) * (x - x1)
                }
            }
            ModelForm::RightHinge => {
                let x1 = self.breakpoint_x1.unwrap_or(f64::INFINITY);
                if x < x1 {
                    b1 + b2 * x
                } else {
                    self.ybar.unwrap_or(b1 + b2 * x1)
                }
            }
            ModelForm::LeftHinge => {
                let x1 = self.breakpoint_x1.unwrap_or(f64::NEG_INFINITY);
                if x < x1 {
                    self.ybar.unwrap_or(b1 + b2 * x1)
                } else {
                    b1 + b2 * x
                }
            }
        }
    }

    /// Same coefficients, with `rss`, `sigma`, `n_fit` and `aicc` recomputed
    /// from the clamped predictions on another set of points.
    pub fn rescored(&self, xs: &[f64], ys: &[f64]) -> Result<FitResult, ModelError> {
        check_inputs(xs, ys)?;
        let rss: f64 = xs
            .iter()
            .zip(ys)
            .map(|(&x, &y)| {
                let r = y - self.value(x).max(0.0);
                r * r
            })
            .sum();
        let n = xs.len();
        Ok(FitResult {
            rss,
            sigma: sigma(rss, n),
            n_fit: n,
            aicc: aicc(rss, n, self.k_params)?,
            ..self.clone()
        })
    }
}

/// Exponent search for the negative power form: best point on `grid`,
/// optionally refined by golden section between its grid neighbours.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentSearch {
    pub grid: Vec<f64>,
    pub refine: bool,
    pub rel_tol: f64,
}

impl Default for ExponentSearch {
    /// 0.05, 0.10, ..., 5.00 with refinement to 1e-6 relative.
    fn default() -> Self {
        ExponentSearch {
            grid: (1..=100).map(|i| f64::from(i) / 20.0).collect(),
            refine: true,
            rel_tol: 1e-6,
        }
    }
}

fn check_inputs(xs: &[f64], ys: &[f64]) -> Result<(), ModelError> {
    if xs.len() != ys.len() {
        return Err(ModelError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(ModelError::NonFiniteInput);
    }
    if let Some(&x) = xs.iter().find(|&&x| x <= 0.0) {
        return Err(ModelError::NonPositiveX(x));
    }
    Ok(())
}

fn sigma(rss: f64, n: usize) -> f64 {
    (rss.max(RSS_FLOOR) / n as f64).sqrt()
}

/// Small-sample corrected AIC for a Gaussian least-squares fit:
/// `n ln(rss/n) + 2k + 2k(k+1)/(n-k-1)`.
pub fn aicc(rss: f64, n: usize, k: usize) -> Result<f64, ModelError> {
    if n <= k + 1 {
        return Err(ModelError::DenominatorZero { n, k });
    }
    if !rss.is_finite() {
        return Err(ModelError::NonFiniteInput);
    }
    let (nf, kf) = (n as f64, k as f64);
    let rss = rss.max(RSS_FLOOR);
    Ok(nf * (rss / nf).ln() + 2.0 * kf + 2.0 * kf * (kf + 1.0) / (nf - kf - 1.0))
}

/// Normalized `exp(-delta/2)` weights, with deltas taken from the minimum.
pub fn akaike_weights(aiccs: &[f64]) -> Result<Vec<f64>, ModelError> {
    if aiccs.is_empty() {
        return Err(ModelError::EmptyInput);
    }
    if aiccs.iter().any(|a| !a.is_finite()) {
        return Err(ModelError::NonFiniteInput);
    }
    let min = aiccs.iter().copied().fold(f64::INFINITY, f64::min);
    let raw: Vec<f64> = aiccs.iter().map(|a| (-(a - min) / 2.0).exp()).collect();
    let total: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|r| r / total).collect())
}

/// Evaluates a fit at GDP `x`, clamping negative rates to zero.
pub fn predict(fit: &FitResult, x: f64) -> Result<f64, ModelError> {
    if !x.is_finite() {
        return Err(ModelError::NonFiniteInput);
    }
    if x <= 0.0 {
        return Err(ModelError::NonPositiveX(x));
    }
    Ok(fit.value(x).max(0.0))
}

pub fn fit(form: ModelForm, xs: &[f64], ys: &[f64]) -> Result<FitResult, ModelError> {
    match form {
        ModelForm::NegPower => fit_neg_power(xs, ys, &ExponentSearch::default()),
        _ => fit_with(form, xs, ys, &ExponentSearch::default()),
    }
}

pub fn fit_neg_power(xs: &[f64], ys: &[f64], search: &ExponentSearch) -> Result<FitResult, ModelError> {
    fit_with(ModelForm::NegPower, xs, ys, search)
}

fn fit_with(form: ModelForm, xs: &[f64], ys: &[f64], search: &ExponentSearch) -> Result<FitResult, ModelError> {
    check_inputs(xs, ys)?;
    let n = xs.len();
    let k = form.k_params();
    if n < k + 2 {
        return Err(ModelError::InsufficientData { n, k });
    }
    if form != ModelForm::Null && xs.iter().all(|&x| x == xs[0]) {
        return Err(ModelError::DegenerateX);
    }

    let mut out = FitResult {
        form,
        beta1: 0.0,
        beta2: 0.0,
        beta3: None,
        slope_right: None,
        breakpoint_x1: None,
        ybar: None,
        sigma: 0.0,
        rss: 0.0,
        n_fit: n,
        k_params: k,
        aicc: 0.0,
    };

    match form {
        ModelForm::Null => {
            let mean = ys.iter().sum::<f64>() / n as f64;
            out.beta1 = mean;
            out.ybar = Some(mean);
        }
        ModelForm::Linear => set_two(&mut out, linear_fit(xs, ys, |x| x)?),
        ModelForm::Division => set_two(&mut out, linear_fit(xs, ys, |x| 1.0 / x)?),
        ModelForm::NegLog => set_two(&mut out, linear_fit(xs, ys, f64::ln)?),
        ModelForm::NegPower => {
            let (b, coef) = search_exponent(xs, ys, search)?;
            set_two(&mut out, coef);
            out.beta3 = Some(b);
        }
        ModelForm::LinearSpline | ModelForm::RightHinge | ModelForm::LeftHinge => {
            let (x1, coef) = search_breakpoint(form, xs, ys)?;
            out.beta1 = coef[0];
            out.beta2 = coef[1];
            out.breakpoint_x1 = Some(x1);
            match form {
                ModelForm::LinearSpline => out.slope_right = Some(coef[2]),
                _ => out.ybar = Some(coef[0] + coef[1] * x1),
            }
        }
    }

    out.rss = residual_ss(&out, xs, ys);
    out.sigma = sigma(out.rss, n);
    out.aicc = aicc(out.rss, n, k)?;
    Ok(out)
}

fn set_two(out: &mut FitResult, coef: Vec<f64>) {
    out.beta1 = coef[0];
    out.beta2 = coef[1];
}

fn residual_ss(fit: &FitResult, xs: &[f64], ys: &[f64]) -> f64 {
    xs.iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - fit.value(x);
            r * r
        })
        .sum()
}

fn linear_fit(xs: &[f64], ys: &[f64], transform: impl Fn(f64) -> f64) -> Result<Vec<f64>, ModelError> {
    let design: Vec<f64> = xs.iter().flat_map(|&x| [1.0, transform(x)]).collect();
    least_squares(&design, 2, ys).ok_or(ModelError::Singular)
}

fn rss_of(design: &[f64], p: usize, ys: &[f64], coef: &[f64]) -> f64 {
    design
        .chunks_exact(p)
        .zip(ys)
        .map(|(row, &y)| {
            let r = y - row.iter().zip(coef).map(|(a, b)| a * b).sum::<f64>();
            r * r
        })
        .sum()
}

fn neg_power_rss(xs: &[f64], ys: &[f64], b: f64) -> Option<(f64, Vec<f64>)> {
    let design: Vec<f64> = xs.iter().flat_map(|&x| [1.0, x.powf(-b)]).collect();
    let coef = least_squares(&design, 2, ys)?;
    Some((rss_of(&design, 2, ys, &coef), coef))
}

fn search_exponent(xs: &[f64], ys: &[f64], search: &ExponentSearch) -> Result<(f64, Vec<f64>), ModelError> {
    let mut best: Option<(usize, f64, Vec<f64>)> = None;
    for (i, &b) in search.grid.iter().enumerate() {
        if let Some((rss, coef)) = neg_power_rss(xs, ys, b) {
            if best.as_ref().is_none_or(|(_, r, _)| rss < *r) {
                best = Some((i, rss, coef));
            }
        }
    }
    let (i, best_rss, best_coef) = best.ok_or(ModelError::Singular)?;
    let b_grid = search.grid[i];
    if !search.refine {
        return Ok((b_grid, best_coef));
    }
    let lo = if i > 0 { search.grid[i - 1] } else { b_grid };
    let hi = search.grid.get(i + 1).copied().unwrap_or(b_grid);
    if hi <= lo {
        return Ok((b_grid, best_coef));
    }
    let objective = |b: f64| neg_power_rss(xs, ys, b).map_or(f64::INFINITY, |(r, _)| r);
    let (b_ref, rss_ref) = golden_section_min(objective, lo, hi, search.rel_tol);
    match neg_power_rss(xs, ys, b_ref) {
        Some((_, coef)) if rss_ref < best_rss && b_ref > 0.0 => Ok((b_ref, coef)),
        _ => Ok((b_grid, best_coef)),
    }
}

/// Interior breakpoint candidates: distinct observed x values, excluding the
/// two smallest and two largest.
pub fn breakpoint_candidates(xs: &[f64]) -> Vec<f64> {
    let mut distinct = xs.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 5 {
        return Vec::new();
    }
    distinct[2..distinct.len() - 2].to_vec()
}

fn piecewise_design(form: ModelForm, xs: &[f64], x1: f64) -> (Vec<f64>, usize) {
    match form {
        ModelForm::LinearSpline => (
            xs.iter().flat_map(|&x| [1.0, x.min(x1), (x - x1).max(0.0)]).collect(),
            3,
        ),
        ModelForm::RightHinge => (xs.iter().flat_map(|&x| [1.0, x.min(x1)]).collect(), 2),
        ModelForm::LeftHinge => (xs.iter().flat_map(|&x| [1.0, x.max(x1)]).collect(), 2),
        _ => unreachable!("not a piecewise form"),
    }
}

fn search_breakpoint(form: ModelForm, xs: &[f64], ys: &[f64]) -> Result<(f64, Vec<f64>), ModelError> {
    debug_assert!(form.has_breakpoint());
    let candidates = breakpoint_candidates(xs);
    if candidates.is_empty() {
        let mut d = xs.to_vec();
        d.sort_by(f64::total_cmp);
        d.dedup();
        return Err(ModelError::NoBreakpointCandidates(d.len()));
    }
    let mut best: Option<(f64, f64, Vec<f64>)> = None;
    // ascending candidates + strict improvement keeps the smaller x1 on ties
    for x1 in candidates {
        let (design, p) = piecewise_design(form, xs, x1);
        let Some(coef) = least_squares(&design, p, ys) else {
            continue;
        };
        let rss = rss_of(&design, p, ys, &coef);
        if best.as_ref().is_none_or(|(_, r, _)| rss < *r) {
            best = Some((x1, rss, coef));
        }
    }
    best.map(|(x1, _, coef)| (x1, coef)).ok_or(ModelError::Singular)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_exact_line() {
        let f = fit(
            ModelForm::Linear,
            &[1.0, 2.0, 3.0, 4.0, 5.0],
            &[2.0, 4.0, 6.0, 8.0, 10.0],
        )
        .unwrap();
        assert!(f.beta1.abs() < 1e-12);
        assert!((f.beta2 - 2.0).abs() < 1e-12);
        assert!(f.rss < 1e-20);
        assert!(f.sigma > 0.0);
    }

    #[test]
    fn linear_three_points_is_insufficient_for_aicc() {
        // three points fit exactly but k = 3 needs n >= 5
        assert_eq!(
            fit(ModelForm::Linear, &[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]),
            Err(ModelError::InsufficientData { n: 3, k: 3 })
        );
    }

    #[test]
    fn null_is_sample_mean() {
        let f = fit(ModelForm::Null, &[5.0, 6.0, 7.0, 8.0], &[1.0, 2.0, 3.0, 2.0]).unwrap();
        assert_eq!(f.ybar, Some(2.0));
        assert_eq!(f.beta1, 2.0);
        assert_eq!(f.k_params, 2);
        assert!((f.rss - 2.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_x_only_allows_null() {
        let xs = [3.0; 8];
        let ys = [1.0, 2.0, 3.0, 1.0, 2.0, 3.0, 1.0, 2.0];
        assert!(fit(ModelForm::Null, &xs, &ys).is_ok());
        for form in &ModelForm::ALL[1..] {
            assert_eq!(fit(*form, &xs, &ys), Err(ModelError::DegenerateX), "{form}");
        }
    }

    #[test]
    fn input_validation() {
        assert_eq!(
            fit(ModelForm::Linear, &[1.0, f64::NAN, 3.0, 4.0, 5.0], &[1.0; 5]),
            Err(ModelError::NonFiniteInput)
        );
        assert_eq!(
            fit(ModelForm::Linear, &[1.0, -2.0, 3.0, 4.0, 5.0], &[1.0; 5]),
            Err(ModelError::NonPositiveX(-2.0))
        );
        assert_eq!(
            fit(ModelForm::Linear, &[1.0, 2.0], &[1.0]),
            Err(ModelError::LengthMismatch(2, 1))
        );
    }

    #[test]
    fn neg_power_recovers_known_coefficients() {
        let xs = [1.0, 4.0, 9.0, 16.0, 25.0, 36.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 5.0 + 3.0 * x.powf(-0.5)).collect();
        let f = fit(ModelForm::NegPower, &xs, &ys).unwrap();
        assert!((f.beta1 - 5.0).abs() < 1e-3);
        assert!((f.beta2 - 3.0).abs() < 1e-3);
        assert!((f.beta3.unwrap() - 0.5).abs() < 1e-3);
    }

    #[test]
    fn aicc_values() {
        let v = aicc(10.0, 10, 2).unwrap();
        assert!((v - (4.0 + 12.0 / 7.0)).abs() < 1e-12);
        assert!((v - 5.714_286).abs() < 1e-6);
        assert!(aicc(10.0, 10, 3).unwrap() > v);
        assert_eq!(aicc(1.0, 4, 3), Err(ModelError::DenominatorZero { n: 4, k: 3 }));
        // perfect fit is floored, not -inf
        assert!(aicc(0.0, 10, 2).unwrap().is_finite());
    }

    #[test]
    fn weights_examples() {
        assert_eq!(akaike_weights(&[42.0]).unwrap(), vec![1.0]);
        assert_eq!(akaike_weights(&[7.0, 7.0]).unwrap(), vec![0.5, 0.5]);
        let w = akaike_weights(&[100.0, 102.0]).unwrap();
        assert!((w[0] - 0.731_059).abs() < 1e-6);
        assert!((w[1] - 0.268_941).abs() < 1e-6);
        assert_eq!(akaike_weights(&[]), Err(ModelError::EmptyInput));
        assert_eq!(akaike_weights(&[1.0, f64::NAN]), Err(ModelError::NonFiniteInput));
        // no overflow for huge AICc values
        let w = akaike_weights(&[1e6, 1e6 + 2.0]).unwrap();
        assert!((w[0] - 0.731_059).abs() < 1e-6);
    }

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
    fn predict_examples() {
        assert_eq!(predict(&manual(ModelForm::Linear, 0.0, 2.0), 3.0).unwrap(), 6.0);
        let mut hinge = manual(ModelForm::RightHinge, 2.2, -0.00002);
        hinge.breakpoint_x1 = Some(20_000.0);
        hinge.ybar = Some(1.8);
        assert_eq!(predict(&hinge, 50_000.0).unwrap(), 1.8);
        let neg = manual(ModelForm::Linear, 0.5, -0.001);
        assert_eq!(neg.value(1000.0), -0.5);
        assert_eq!(predict(&neg, 1000.0).unwrap(), 0.0);
        assert_eq!(predict(&neg, 0.0), Err(ModelError::NonPositiveX(0.0)));
    }

    #[test]
    fn hinges_are_continuous() {
        let xs: Vec<f64> = (1..=12).map(|i| f64::from(i) * 1000.0).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|&x| if x < 6000.0 { 5.0 - x / 2000.0 } else { 2.0 })
            .collect();
        let f = fit(ModelForm::RightHinge, &xs, &ys).unwrap();
        assert_eq!(f.breakpoint_x1, Some(6000.0));
        assert!(f.rss < 1e-18);
        let x1 = f.breakpoint_x1.unwrap();
        assert!((f.value(x1 - 1e-9) - f.value(x1)).abs() < 1e-9);
        assert!((f.value(11_500.0) - 2.0).abs() < 1e-12);

        let ys_left: Vec<f64> = xs
            .iter()
            .map(|&x| if x < 7000.0 { 1.0 } else { 1.0 + (x - 7000.0) / 1000.0 })
            .collect();
        let f = fit(ModelForm::LeftHinge, &xs, &ys_left).unwrap();
        assert_eq!(f.breakpoint_x1, Some(7000.0));
        assert!(f.rss < 1e-18);
        assert!((f.ybar.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spline_breakpoint_and_slopes() {
        let xs: Vec<f64> = (1..=10).map(f64::from).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|&x| if x < 4.0 { 10.0 - 2.0 * x } else { 2.0 + 0.5 * (x - 4.0) })
            .collect();
        let f = fit(ModelForm::LinearSpline, &xs, &ys).unwrap();
        assert_eq!(f.breakpoint_x1, Some(4.0));
        assert!((f.beta2 + 2.0).abs() < 1e-10);
        assert!((f.slope_right.unwrap() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn breakpoint_needs_five_distinct_values() {
        assert_eq!(breakpoint_candidates(&[1.0, 2.0, 3.0, 4.0, 5.0]), vec![3.0]);
        assert!(breakpoint_candidates(&[1.0, 2.0, 2.0, 3.0, 4.0, 4.0, 4.0]).is_empty());
        let xs = [1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 4.0];
        assert_eq!(
            fit(ModelForm::RightHinge, &xs, &[1.0; 8]),
            Err(ModelError::NoBreakpointCandidates(4))
        );
    }

    #[test]
    fn model_form_tokens_round_trip() {
        for f in ModelForm::ALL {
            assert_eq!(f.token().parse::<ModelForm>().unwrap(), f);
        }
    }
}
