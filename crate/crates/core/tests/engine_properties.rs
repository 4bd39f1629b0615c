//! Whole-tree properties of the analysis engine.

use fuzzy_tft::engine::{evaluate, importance_table, sweep, AnalysisConfig};
use fuzzy_tft::{fixtures, parse_tree, MissionTime, Spread};

fn mt(t: f64) -> MissionTime {
    MissionTime::new(t).unwrap()
}

const MIXED: &str = "\
event A rate=1e-3
event B rate=2e-3
event C rate=5e-4
event D rate=3e-3
event E rate=8e-4
gate P = (A OR B) PAND C
gate Q = D POR (E AND A)
gate T = P OR Q OR (B AND E)
top = T
";

#[test]
fn clamped_results_stay_in_unit_interval_and_grow() {
    let tree = parse_tree(MIXED).unwrap();
    let cfg = AnalysisConfig {
        clamp: true,
        ..AnalysisConfig::at(&[1.0, 10.0, 100.0, 500.0, 1000.0, 3000.0, 10000.0]).unwrap()
    };
    let r = sweep(&tree, &cfg).unwrap();
    for p in &r.points {
        for x in p.te.components() {
            assert!((0.0..=1.0).contains(&x), "{}", p.te);
        }
    }
    for w in r.points.windows(2) {
        assert!(w[1].peak >= w[0].peak && w[1].defuzzified >= w[0].defuzzified);
    }
}

#[test]
fn peak_does_not_depend_on_spread() {
    let tree = parse_tree(MIXED).unwrap();
    let peaks: Vec<f64> = [Spread::P15, Spread::P25, Spread::P50]
        .into_iter()
        .map(|s| {
            let cfg = AnalysisConfig {
                spread: Some(s),
                clamp: true,
                ..AnalysisConfig::default()
            };
            evaluate(&tree, mt(700.0), &cfg).unwrap().peak()
        })
        .collect();
    assert!(peaks.windows(2).all(|w| w[0] == w[1]), "{peaks:?}");
}

#[test]
fn wider_spread_widens_static_trees() {
    let tree = parse_tree(
        "event A rate=1e-3\nevent B rate=2e-3\nevent C rate=5e-4\ngate G = (A OR B) AND C\ntop = G\n",
    )
    .unwrap();
    let at = |s| {
        let cfg = AnalysisConfig {
            spread: Some(s),
            ..AnalysisConfig::default()
        };
        evaluate(&tree, mt(900.0), &cfg).unwrap()
    };
    let (narrow, wide) = (at(Spread::P15), at(Spread::P50));
    assert!(wide.lower() < narrow.lower() && wide.upper() > narrow.upper());
}

#[test]
fn importance_is_non_negative_and_ranked() {
    let tree = parse_tree(MIXED).unwrap();
    let cfg = AnalysisConfig::default();
    let table = importance_table(&tree, mt(1000.0), &cfg).unwrap();
    assert_eq!(table.len(), 5);
    assert!(table.iter().all(|i| i.fim >= 0.0 && i.fim.is_finite()));
    assert!(table
        .windows(2)
        .all(|w| w[0].fim >= w[1].fim && w[1].rank >= w[0].rank));
    assert_eq!(table[0].rank, 1);
}

#[test]
fn reports_are_bitwise_reproducible() {
    let tree = fixtures::afds().unwrap();
    let cfg = AnalysisConfig::from_tree(&tree).with_importance(None);
    let a = fuzzy_tft::report::to_json(&sweep(&tree, &cfg).unwrap());
    let b = fuzzy_tft::report::to_json(&sweep(&tree, &cfg).unwrap());
    assert_eq!(a, b);
}
