//! The bundled fuel-distribution case study.

use fuzzy_tft::engine::{evaluate, importance_table, sweep, AnalysisConfig};
use fuzzy_tft::gates::{fuzzy_pand, rate_to_prob};
use fuzzy_tft::tree::{parse_tree, Node};
use fuzzy_tft::{fixtures, fuzzify, MissionTime, Spread, Tfn};

const RATES: [(&str, f64); 12] = [
    ("I-SCP", 5.84267e-5),
    ("I-CSP", 5.84267e-5),
    ("I-SOV", 1.65633e-3),
    ("I-SIV", 1.65633e-3),
    ("I-CSV", 1.65633e-3),
    ("I-SCV", 1.65633e-3),
    ("I-CRL", 2.21127e-6),
    ("I-HiSOF", 4.06861e-5),
    ("I-HiSIF", 4.06861e-5),
    ("I-HiSEF", 4.06861e-5),
    ("I-SIL", 1.65633e-3),
    ("I-SOL", 3.31774e-5),
];

/// Published fuzzified rates (six significant digits).
const FUZZY: [(&str, [f64; 3]); 12] = [
    ("I-SCP", [4.96627e-5, 5.84267e-5, 6.71907e-5]),
    ("I-CSP", [4.96627e-5, 5.84267e-5, 6.71907e-5]),
    ("I-SOV", [1.40788e-3, 1.65633e-3, 1.90478e-3]),
    ("I-SIV", [1.40788e-3, 1.65633e-3, 1.90478e-3]),
    ("I-CSV", [1.40788e-3, 1.65633e-3, 1.90478e-3]),
    ("I-SCV", [1.40788e-3, 1.65633e-3, 1.90478e-3]),
    ("I-CRL", [1.87958e-6, 2.21127e-6, 2.54296e-6]),
    ("I-HiSOF", [3.45832e-5, 4.06861e-5, 4.67889e-5]),
    ("I-HiSIF", [3.45832e-5, 4.06861e-5, 4.67889e-5]),
    ("I-HiSEF", [3.45832e-5, 4.06861e-5, 4.67889e-5]),
    ("I-SIL", [1.40788e-3, 1.65633e-3, 1.90478e-3]),
    ("I-SOL", [2.82008e-5, 3.31774e-5, 3.81541e-5]),
];

const PUBLISHED_SWEEP: [(f64, f64); 7] = [
    (100.0, 0.05269844),
    (500.0, 0.56162025),
    (1000.0, 0.85253225),
    (1500.0, 0.94286331),
    (2000.0, 0.97599884),
    (2500.0, 0.98951921),
    (3000.0, 0.99532702),
];

/// `x` agrees with `y` to `n` significant digits when `|x − y| / |y| < 5 · 10^−n`.
fn agrees(x: f64, y: f64, n: i32) -> bool {
    ((x - y) / y).abs() < 5.0 * 10f64.powi(-n)
}

fn mt(t: f64) -> MissionTime {
    MissionTime::new(t).unwrap()
}

#[test]
fn fixture_is_clean_and_complete() {
    let tree = fixtures::afds().unwrap();
    assert!(tree.warnings().is_empty(), "{:?}", tree.warnings());
    let mut ids: Vec<&str> = tree.events().map(|(_, e)| e.id.as_str()).collect();
    ids.sort();
    let mut want: Vec<&str> = RATES.iter().map(|r| r.0).collect();
    want.sort();
    assert_eq!(ids, want);
    assert_eq!(tree.node(tree.top()).id(), "O-SEF");
    assert_eq!(tree.directives.times.len(), 7);
}

#[test]
fn fuzzified_rates_match_the_published_table() {
    let tree = fixtures::afds().unwrap();
    for ((id, rate), (id2, want)) in RATES.iter().zip(FUZZY) {
        assert_eq!(*id, id2);
        let (_, e) = tree.event(id).unwrap();
        assert_eq!(e.rate, fuzzify(*rate, Spread::P15).unwrap());
        for (got, want) in e.rate.components().into_iter().zip(want) {
            assert!(agrees(got, want, 6), "{id}: {got} vs {want}");
        }
    }
}

#[test]
fn reference_proposed_column_is_the_published_sweep() {
    let rows = fixtures::afds_reference().unwrap();
    let got: Vec<(f64, f64)> = rows.iter().map(|r| (r.t, r.proposed)).collect();
    assert_eq!(got, PUBLISHED_SWEEP);
}

#[test]
fn stated_subtrees_match_hand_composition() {
    // O-SOS = I-SOV OR I-SOL; IE6 = I-HiSOF PAND O-SOS.
    let text: String = fixtures::AFDS
        .lines()
        .filter(|l| {
            l.starts_with("event") || l.starts_with("gate O-SOS") || l.starts_with("gate IE6")
        })
        .map(|l| format!("{l}\n"))
        .collect::<String>()
        + "top = IE6\n";
    let tree = parse_tree(&text).unwrap();
    let f = |r: f64| fuzzify(r, Spread::P15).unwrap();
    for t in [100.0, 1000.0, 3000.0] {
        let t = mt(t);
        let sov = rate_to_prob(&f(1.65633e-3), t).unwrap();
        let sol = rate_to_prob(&f(3.31774e-5), t).unwrap();
        let or = |a: f64, b: f64| 1.0 - (1.0 - a) * (1.0 - b);
        let sos = Tfn::new(
            or(sov.lower(), sol.lower()),
            or(sov.peak(), sol.peak()),
            or(sov.upper(), sol.upper()),
        )
        .unwrap();
        let to_rate = |p: f64| -(-p).ln_1p() / t.hours();
        let sos_rate = Tfn::new(
            to_rate(sos.lower()),
            to_rate(sos.peak()),
            to_rate(sos.upper()),
        )
        .unwrap();
        let want = fuzzy_pand(&[f(4.06861e-5), sos_rate], t).unwrap();
        let got = evaluate(&tree, t, &AnalysisConfig::default()).unwrap();
        for (g, w) in got.components().into_iter().zip(want.components()) {
            assert!(((g - w) / w).abs() < 1e-12, "{got} vs {want}");
        }
        // The converted O-SOS rate is the sum of its leaf rates.
        assert!(((sos_rate.peak() - (1.65633e-3 + 3.31774e-5)) / sos_rate.peak()).abs() < 1e-12);
    }
    assert!(matches!(
        tree.node(tree.lookup("IE6").unwrap()),
        Node::Gate(_)
    ));
}

#[test]
fn sweep_grows_over_the_published_grid() {
    let tree = fixtures::afds().unwrap();
    let r = sweep(&tree, &AnalysisConfig::from_tree(&tree)).unwrap();
    let ts: Vec<f64> = r.points.iter().map(|p| p.t.hours()).collect();
    assert_eq!(ts, PUBLISHED_SWEEP.map(|r| r.0));
    for w in r.points.windows(2) {
        assert!(w[1].peak > w[0].peak && w[1].defuzzified > w[0].defuzzified);
    }
}

#[test]
fn valve_and_level_sensor_of_the_same_subsystem_tie() {
    let tree = fixtures::afds().unwrap();
    let t = tree.directives.importance_time.unwrap();
    let table = importance_table(&tree, t, &AnalysisConfig::from_tree(&tree)).unwrap();
    let get = |id: &str| table.iter().find(|i| i.event == id).unwrap();
    assert_eq!(get("I-SIV").rank, get("I-SIL").rank);
    assert_eq!(table[0].event, "I-CSV");
    assert!(table.iter().all(|i| i.fim >= 0.0));
}
