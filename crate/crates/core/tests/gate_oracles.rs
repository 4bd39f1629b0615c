//! Gate formulas against independent oracles: direct quadrature of the
//! defining integrals and probability identities.

use fuzzy_tft::gates::{
    crisp_and, crisp_or, crisp_pand, crisp_por, exp_cdf, fuzzy_pand, fuzzy_por, fuzzy_por_clamped,
};
use fuzzy_tft::quad::integrate;
use fuzzy_tft::{fuzzify, Error, MissionTime, Spread, Tfn};
use proptest::prelude::*;

fn mt(t: f64) -> MissionTime {
    MissionTime::new(t).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// `∫_0^x g_n(s_n) ∫_0^{s_n} g_{n-1} ... ∫_0^{s_2} g_1` with `g_i(s) = k_i e^{-d_i s}`,
/// densities listed in occurrence order.
fn nested(g: &[(f64, f64)], x: f64) -> f64 {
    match g {
        [] => 1.0,
        [(k, d)] => k * -(-d * x).exp_m1() / d,
        [rest @ .., (k, d)] => integrate(|s| k * (-d * s).exp() * nested(rest, s), 0.0, x, 1e-12),
    }
}

fn log_uniform(u: f64, lo: f64, hi: f64) -> f64 {
    (lo.ln() + u * (hi.ln() - lo.ln())).exp()
}

fn rates_strategy(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..1.0f64, n)
        .prop_map(|us| us.into_iter().map(|u| log_uniform(u, 1e-6, 1e-2)).collect())
}

#[test]
fn crisp_pand_matches_nested_quadrature() {
    let cases: &[(&[f64], f64)] = &[
        (&[1e-3, 2e-3], 700.0),
        (&[5e-3, 1e-4], 3000.0),
        (&[2e-3, 2e-3, 2e-3], 900.0),
        (&[1e-3, 4e-3, 2.5e-4], 2500.0),
        (&[3e-3, 1e-3, 2e-3, 5e-4], 1200.0),
    ];
    for &(rates, t) in cases {
        let g: Vec<_> = rates.iter().map(|&r| (r, r)).collect();
        let want = nested(&g, t);
        let got = crisp_pand(rates, mt(t)).unwrap();
        assert!(rel(got, want) < 1e-9, "{rates:?} t={t}: {got} vs {want}");
    }
}

#[test]
fn fuzzy_pand_bounds_match_nested_quadrature() {
    for (rates, t) in [(vec![1e-3, 2e-3], 700.0), (vec![4e-3, 1e-3, 6e-4], 1500.0)] {
        for spread in [Spread::P15, Spread::P50] {
            let f: Vec<Tfn> = rates.iter().map(|&r| fuzzify(r, spread).unwrap()).collect();
            let got = fuzzy_pand(&f, mt(t)).unwrap();
            let lower: Vec<_> = f.iter().map(|x| (x.lower(), x.upper())).collect();
            let upper: Vec<_> = f.iter().map(|x| (x.upper(), x.lower())).collect();
            assert!(rel(got.lower(), nested(&lower, t)) < 1e-9);
            assert!(rel(got.upper(), nested(&upper, t)) < 1e-9);
            assert!(rel(got.peak(), crisp_pand(&rates, mt(t)).unwrap()) < 1e-12);
        }
    }
}

#[test]
fn fuzzy_por_bounds_match_quadrature() {
    for (rates, t) in [
        (vec![1e-3, 2e-3], 700.0),
        (vec![4e-3, 1e-3, 6e-4], 1500.0),
        (vec![2e-4, 3e-3, 1e-3, 1e-2], 4000.0),
    ] {
        let f: Vec<Tfn> = rates
            .iter()
            .map(|&r| fuzzify(r, Spread::P25).unwrap())
            .collect();
        let got = fuzzy_por(&f, mt(t)).unwrap();
        // Priority density bound times each competitor's survival bound.
        let bound = |k: f64, d: f64, flip: bool| {
            integrate(
                |x| {
                    k * (-d * x).exp()
                        * f[1..]
                            .iter()
                            .map(|c| {
                                let (num, den) = if flip {
                                    (c.lower(), c.upper())
                                } else {
                                    (c.upper(), c.lower())
                                };
                                1.0 - num / den + num / den * (-den * x).exp()
                            })
                            .product::<f64>()
                },
                0.0,
                t,
                1e-13,
            )
        };
        assert!(rel(got.lower(), bound(f[0].lower(), f[0].upper(), false)) < 1e-8);
        assert!(rel(got.upper(), bound(f[0].upper(), f[0].lower(), true)) < 1e-8);
    }
}

#[test]
fn crisp_por_matches_its_integrand() {
    let rates = [2e-3, 5e-4, 1e-3];
    let t = 1800.0;
    let want = integrate(
        |x| {
            rates[0]
                * (-rates[0] * x).exp()
                * rates[1..].iter().map(|r| (-r * x).exp()).product::<f64>()
        },
        0.0,
        t,
        1e-13,
    );
    assert!(rel(crisp_por(&rates, mt(t)).unwrap(), want) < 1e-10);
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn pand_orderings_partition_and(rates in rates_strategy(2..=4), t in 10.0..5000.0f64) {
        let t = mt(t);
        let sum: f64 = permutations(rates.len())
            .iter()
            .map(|p| crisp_pand(&p.iter().map(|&i| rates[i]).collect::<Vec<_>>(), t).unwrap())
            .sum();
        let and = crisp_and(&rates.iter().map(|&r| exp_cdf(r, t)).collect::<Vec<_>>()).unwrap();
        prop_assert!(rel(sum, and) < 1e-9, "{sum} vs {and}");
    }

    #[test]
    fn por_pair_partitions_or(a in 1e-6..1e-2f64, b in 1e-6..1e-2f64, t in 10.0..5000.0f64) {
        let t = mt(t);
        let sum = crisp_por(&[a, b], t).unwrap() + crisp_por(&[b, a], t).unwrap();
        let or = crisp_or(&[exp_cdf(a, t), exp_cdf(b, t)]).unwrap();
        prop_assert!(rel(sum, or) < 1e-12, "{sum} vs {or}");
    }

    #[test]
    fn pand_and_por_grow_with_time(rates in rates_strategy(2..=4), t in 10.0..4000.0f64, dt in 1.0..1000.0f64) {
        // Once a gate has plateaued the true increase is below f64 resolution.
        for f in [crisp_pand, crisp_por] {
            let p0 = f(&rates, mt(t)).unwrap();
            let p1 = f(&rates, mt(t + dt)).unwrap();
            prop_assert!(p1 >= p0 * (1.0 - 1e-12) && (0.0..=1.0).contains(&p0), "{p0} then {p1}");
        }
        let f: Vec<Tfn> = rates.iter().map(|&r| fuzzify(r, Spread::P25).unwrap()).collect();
        let g0 = fuzzy_por_clamped(&f, mt(t)).unwrap();
        let g1 = fuzzy_por_clamped(&f, mt(t + dt)).unwrap();
        for (x0, x1) in g0.components().into_iter().zip(g1.components()) {
            prop_assert!(x1 >= x0 - 1e-10 * x0.abs(), "{g0} then {g1}");
        }
        let p0 = fuzzy_pand(&f, mt(t)).unwrap();
        let p1 = fuzzy_pand(&f, mt(t + dt)).unwrap();
        for (x0, x1) in p0.components().into_iter().zip(p1.components()) {
            prop_assert!(x1 >= x0 - 1e-10 * x0.abs(), "{p0} then {p1}");
        }
    }

    #[test]
    fn fuzzy_temporal_gates_are_ordered(rates in rates_strategy(2..=4), t in 10.0..5000.0f64) {
        let f: Vec<Tfn> = rates.iter().map(|&r| fuzzify(r, Spread::P15).unwrap()).collect();
        let clamped = fuzzy_por_clamped(&f, mt(t)).unwrap();
        prop_assert!(clamped.lower() >= 0.0, "{clamped}");
        for g in [fuzzy_pand(&f, mt(t)).unwrap(), clamped] {
            prop_assert!(g.lower() <= g.peak() && g.peak() <= g.upper(), "{g}");
        }
        // Raw bounds either keep their order or are refused as a domain error.
        match fuzzy_por(&f, mt(t)) {
            Ok(g) => prop_assert!(g.lower() <= g.peak() && g.peak() <= g.upper()),
            Err(e) => prop_assert!(matches!(e, Error::Domain(_)), "{e:?}"),
        }
    }
}

#[test]
fn raw_por_lower_bound_can_cross_the_peak() {
    let f: Vec<Tfn> = [1e-6, 3.4e-3, 4.4e-3]
        .iter()
        .map(|&r| fuzzify(r, Spread::P15).unwrap())
        .collect();
    let t = mt(2043.0);
    assert!(matches!(fuzzy_por(&f, t), Err(Error::Domain(_))));
    let g = fuzzy_por_clamped(&f, t).unwrap();
    assert!(0.0 <= g.lower() && g.lower() <= g.peak());
}

#[test]
fn clamped_por_equals_raw_while_factors_stay_positive() {
    let f: Vec<Tfn> = [2e-3, 1e-4]
        .iter()
        .map(|&r| fuzzify(r, Spread::P15).unwrap())
        .collect();
    // The single competitor's lower factor vanishes near a x = ln(c / (c − a)) ≈ 1.35.
    let t = mt(1000.0);
    assert_eq!(fuzzy_por(&f, t).unwrap(), fuzzy_por_clamped(&f, t).unwrap());
}
