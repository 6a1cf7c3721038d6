//! Regression fits checked against independent least-squares oracles.
//!
//! The oracle solves each linearized problem with nalgebra's SVD and, for
//! the forms with a searched parameter, scans every candidate exhaustively.

use demotrend_core::models::{fit, fit_neg_power, ExponentSearch, ModelForm};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

/// Least squares by SVD on the given columns; returns (coefficients, rss).
fn svd_lstsq(cols: &[Vec<f64>], ys: &[f64]) -> (Vec<f64>, f64) {
    let n = ys.len();
    let x = DMatrix::from_fn(n, cols.len(), |i, j| cols[j][i]);
    let y = DVector::from_column_slice(ys);
    let beta = x.clone().svd(true, true).solve(&y, 1e-14).expect("svd solve");
    let resid = &y - &x * &beta;
    (beta.iter().copied().collect(), resid.norm_squared())
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

fn ones(n: usize) -> Vec<f64> {
    vec![1.0; n]
}

/// GDP-like x values and rate-like y values, 8 to 12 points.
fn fixture() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (8usize..=12).prop_flat_map(|n| {
        (
            prop::collection::vec(300.0f64..80_000.0, n),
            prop::collection::vec(0.0f64..6.0, n),
        )
    })
}

const SMALL: [(f64, f64); 10] = [
    (450.0, 6.1),
    (900.0, 5.6),
    (1_700.0, 4.9),
    (2_600.0, 4.1),
    (4_000.0, 3.2),
    (6_500.0, 2.6),
    (11_000.0, 2.0),
    (18_000.0, 1.8),
    (29_000.0, 1.7),
    (47_000.0, 1.75),
];

fn small() -> (Vec<f64>, Vec<f64>) {
    SMALL.iter().copied().unzip()
}

#[test]
fn closed_form_forms_match_svd_on_hand_fixture() {
    let (xs, ys) = small();
    let cases: [(ModelForm, Vec<f64>); 3] = [
        (ModelForm::Linear, xs.clone()),
        (ModelForm::Division, xs.iter().map(|x| 1.0 / x).collect()),
        (ModelForm::NegLog, xs.iter().map(|x| x.ln()).collect()),
    ];
    for (form, reg) in cases {
        let got = fit(form, &xs, &ys).unwrap();
        let (beta, rss) = svd_lstsq(&[ones(xs.len()), reg], &ys);
        assert!(
            close(got.beta1, beta[0], 1e-9),
            "{form} intercept {} vs {}",
            got.beta1,
            beta[0]
        );
        assert!(
            close(got.beta2, beta[1], 1e-9),
            "{form} slope {} vs {}",
            got.beta2,
            beta[1]
        );
        assert!(close(got.rss, rss, 1e-9), "{form} rss {} vs {rss}", got.rss);
    }
}

#[test]
fn neg_log_is_invariant_to_log_base() {
    // Fitting against log10 changes the slope by ln(10) but not the fitted values.
    let (xs, ys) = small();
    let got = fit(ModelForm::NegLog, &xs, &ys).unwrap();
    let (beta, rss) = svd_lstsq(&[ones(xs.len()), xs.iter().map(|x| x.log10()).collect()], &ys);
    assert!(close(got.rss, rss, 1e-9));
    for &x in &xs {
        assert!(close(got.value(x), beta[0] + beta[1] * x.log10(), 1e-9));
    }
}

#[test]
fn neg_power_at_exponent_one_is_division() {
    let (xs, ys) = small();
    let unit = ExponentSearch {
        grid: vec![1.0],
        refine: false,
        rel_tol: 1e-6,
    };
    let p = fit_neg_power(&xs, &ys, &unit).unwrap();
    let d = fit(ModelForm::Division, &xs, &ys).unwrap();
    assert!(close(p.rss, d.rss, 1e-12));
    assert!(close(p.beta2, d.beta2, 1e-9));
}

/// Best RSS over a fine exponent grid on the same [0.05, 5] domain.
fn neg_power_oracle(xs: &[f64], ys: &[f64]) -> f64 {
    let best_at = |lo: f64, hi: f64, steps: usize| {
        (0..=steps)
            .map(|i| lo + (hi - lo) * i as f64 / steps as f64)
            .map(|e| {
                (
                    e,
                    svd_lstsq(&[ones(xs.len()), xs.iter().map(|x| x.powf(-e)).collect()], ys).1,
                )
            })
            .fold((f64::NAN, f64::INFINITY), |acc, c| if c.1 < acc.1 { c } else { acc })
    };
    let zoom = |centre: f64, half: f64, steps| best_at((centre - half).max(0.05), (centre + half).min(5.0), steps);
    let (coarse, _) = best_at(0.05, 5.0, 990);
    let (fine, _) = zoom(coarse, 0.01, 2000);
    zoom(fine, 2e-5, 2000).1
}

#[test]
fn neg_power_matches_fine_grid_oracle() {
    let (xs, ys) = small();
    let got = fit(ModelForm::NegPower, &xs, &ys).unwrap();
    let want = neg_power_oracle(&xs, &ys);
    assert!(close(got.rss, want, 1e-6), "rss {} vs oracle {want}", got.rss);
}

fn piecewise_columns(form: ModelForm, xs: &[f64], x1: f64) -> Vec<Vec<f64>> {
    let n = xs.len();
    match form {
        ModelForm::LinearSpline => vec![
            ones(n),
            xs.iter().map(|x| x.min(x1)).collect(),
            xs.iter().map(|x| (x - x1).max(0.0)).collect(),
        ],
        ModelForm::RightHinge => vec![ones(n), xs.iter().map(|x| x.min(x1)).collect()],
        ModelForm::LeftHinge => vec![ones(n), xs.iter().map(|x| x.max(x1)).collect()],
        _ => unreachable!(),
    }
}

/// Exhaustive scan over every admissible breakpoint.
fn piecewise_oracle(form: ModelForm, xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let mut distinct = xs.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    distinct[2..distinct.len() - 2]
        .iter()
        .map(|&x1| (x1, svd_lstsq(&piecewise_columns(form, xs, x1), ys).1))
        .fold((f64::NAN, f64::INFINITY), |acc, c| if c.1 < acc.1 { c } else { acc })
}

#[test]
fn piecewise_forms_match_exhaustive_oracle_on_hand_fixture() {
    let (xs, ys) = small();
    for form in [ModelForm::LinearSpline, ModelForm::RightHinge, ModelForm::LeftHinge] {
        let got = fit(form, &xs, &ys).unwrap();
        let (x1, rss) = piecewise_oracle(form, &xs, &ys);
        assert!(close(got.rss, rss, 1e-6), "{form} rss {} vs {rss}", got.rss);
        assert_eq!(got.breakpoint_x1, Some(x1), "{form}");
    }
}

#[test]
fn right_hinge_plateau_on_transition_shaped_data() {
    // Falls linearly to 18000 then flat at 1.8.
    let xs: Vec<f64> = (1..=12).map(|i| f64::from(i) * 3_000.0).collect();
    let ys: Vec<f64> = xs
        .iter()
        .map(|&x| if x < 18_000.0 { 1.8 + (18_000.0 - x) * 1e-4 } else { 1.8 })
        .collect();
    let got = fit(ModelForm::RightHinge, &xs, &ys).unwrap();
    assert_eq!(got.breakpoint_x1, Some(18_000.0));
    assert!(got.rss < 1e-18);
    assert!((got.value(50_000.0) - 1.8).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn closed_form_forms_match_svd((xs, ys) in fixture()) {
        let cases: [(ModelForm, Vec<f64>); 3] = [
            (ModelForm::Linear, xs.clone()),
            (ModelForm::Division, xs.iter().map(|x| 1.0 / x).collect()),
            (ModelForm::NegLog, xs.iter().map(|x| x.ln()).collect()),
        ];
        for (form, reg) in cases {
            let got = fit(form, &xs, &ys).unwrap();
            let (beta, rss) = svd_lstsq(&[ones(xs.len()), reg], &ys);
            // Compare fitted values, which stay well conditioned even when
            // the coefficients individually do not.
            for &x in &xs {
                let want = match form {
                    ModelForm::Linear => beta[0] + beta[1] * x,
                    ModelForm::Division => beta[0] + beta[1] / x,
                    _ => beta[0] + beta[1] * x.ln(),
                };
                prop_assert!((got.value(x) - want).abs() <= 1e-9 * want.abs().max(1.0), "{form} at {x}: {} vs {want}", got.value(x));
            }
            prop_assert!((got.rss - rss).abs() <= 1e-9 * rss.max(1e-6), "{form} rss {} vs {rss}", got.rss);
        }
    }

    #[test]
    fn piecewise_forms_match_exhaustive_oracle((xs, ys) in fixture()) {
        for form in [ModelForm::LinearSpline, ModelForm::RightHinge, ModelForm::LeftHinge] {
            let got = fit(form, &xs, &ys).unwrap();
            let (_, rss) = piecewise_oracle(form, &xs, &ys);
            prop_assert!((got.rss - rss).abs() <= 1e-6 * rss.max(1e-9), "{form} rss {} vs {rss}", got.rss);
            let x1 = got.breakpoint_x1.unwrap();
            let (lo, hi) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
            prop_assert!(lo < x1 && x1 < hi);
        }
    }

    #[test]
    fn every_form_fits_at_least_as_well_as_the_mean((xs, ys) in fixture()) {
        let null = fit(ModelForm::Null, &xs, &ys).unwrap();
        for form in ModelForm::ALL {
            let f = fit(form, &xs, &ys).unwrap();
            prop_assert!(f.rss <= null.rss * (1.0 + 1e-9) + 1e-12, "{form}: {} > {}", f.rss, null.rss);
            prop_assert!(f.sigma > 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn neg_power_matches_fine_grid(
        b1 in 0.5f64..3.0,
        b2 in 5.0f64..200.0,
        e in 0.1f64..1.5,
        noise in prop::collection::vec(-0.05f64..0.05, 10),
    ) {
        let xs: Vec<f64> = (0..10).map(|i| 400.0 * 1.6f64.powi(i)).collect();
        let ys: Vec<f64> = xs.iter().zip(&noise).map(|(x, n)| b1 + b2 * x.powf(-e) + n).collect();
        let got = fit(ModelForm::NegPower, &xs, &ys).unwrap();
        let want = neg_power_oracle(&xs, &ys);
        prop_assert!(got.rss <= want * (1.0 + 1e-6), "rss {} worse than oracle {want}", got.rss);
        prop_assert!((got.rss - want).abs() <= 1e-6 * want, "rss {} vs oracle {want}", got.rss);
    }
}
