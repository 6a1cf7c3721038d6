//! Full pipeline on the three-country synthetic world, checked against
//! totals frozen from `fixtures/oracle/brute_force.py`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use demotrend_core::ingest::load_dataset;
use demotrend_core::scenarios::{Scenario, CONVERGENCE_TARGET};
use demotrend_core::{simulate, SimulationSettings};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn expected() -> BTreeMap<(String, String), Vec<(i32, f64)>> {
    let mut out: BTreeMap<(String, String), Vec<(i32, f64)>> = BTreeMap::new();
    let mut rdr = csv::Reader::from_path(fixtures().join("oracle/tiny_expected.csv")).unwrap();
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let scenario = match &rec[0] {
            "m:0" => "m0.0".to_string(),
            "m:0.5" => "m0.5".to_string(),
            "m:2" => "m2.0".to_string(),
            other => other.to_string(),
        };
        out.entry((scenario, rec[1].to_string()))
            .or_default()
            .push((rec[2].parse().unwrap(), rec[3].parse().unwrap()));
    }
    out
}

#[test]
fn matches_brute_force_reference() {
    let data = load_dataset(&fixtures().join("tiny")).unwrap();
    let settings = SimulationSettings {
        scenarios: vec![
            Scenario::Baseline,
            Scenario::Multiplier(0.0),
            Scenario::Multiplier(0.5),
            Scenario::Multiplier(2.0),
            Scenario::Convergence(CONVERGENCE_TARGET),
        ],
        jobs: 2,
        ..SimulationSettings::default()
    };
    let sim = simulate(&data, &settings).unwrap();
    assert!(sim.excluded.is_empty());

    let expected = expected();
    let mut checked = 0;
    for sc in &sim.results.scenarios {
        for c in &sc.countries {
            let want = &expected[&(sc.scenario_id.clone(), c.iso3.to_string())];
            assert_eq!(want.len(), c.totals.len());
            for ((year, w), got) in want.iter().zip(&c.totals) {
                let rel = (got - w).abs() / w.abs();
                assert!(
                    rel < 1e-6,
                    "{} {} {year}: got {got}, want {w} (rel {rel:e})",
                    sc.scenario_id,
                    c.iso3
                );
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 5 * 3 * 86);
}
