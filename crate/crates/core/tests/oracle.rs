use holonomy_core::arith::{q, qi, Q};
use holonomy_core::error::Error;
use holonomy_core::oracle::*;
use holonomy_core::series::FormalSeries;
use holonomy_core::special::{pure_functions, zagier_g_a_closed, zagier_series};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn one(order: usize) -> FormalSeries {
    FormalSeries::constant(Q::one(), order, "x")
}

fn log1m(order: usize) -> FormalSeries {
    FormalSeries::neg_log1m(order, "x").neg()
}

#[test]
fn jumps_of_elementary_systems() {
    let j = filtration_jumps(&[one(60), log1m(60)], 4, 60).unwrap();
    assert_eq!(j.jumps, (0..8).collect::<Vec<_>>());
    let j = filtration_jumps(&[one(40)], 3, 40).unwrap();
    assert_eq!(j.jumps, vec![0, 1, 2]);
    let cube = FormalSeries::binomial_power(&q(1, 3), 60, "x");
    let j = filtration_jumps(&[one(60), cube], 3, 60).unwrap();
    assert_eq!(j.jumps, (0..6).collect::<Vec<_>>());
}

#[test]
fn jumps_reject_bad_input() {
    let x2 = FormalSeries::var(60, "x").pow(2);
    let err = filtration_jumps(&[one(60), FormalSeries::var(60, "x"), x2], 2, 60).unwrap_err();
    assert!(matches!(err, Error::Inconclusive(_)));
    let err = filtration_jumps(&[one(60), log1m(60)], 4, 12).unwrap_err();
    assert!(matches!(err, Error::Truncation { .. }));
    let err = filtration_jumps(&[one(20)], 2, 40).unwrap_err();
    assert!(matches!(err, Error::Truncation { .. }));
}

fn small_systems(order: usize) -> Vec<Vec<FormalSeries>> {
    vec![
        vec![one(order)],
        vec![one(order), log1m(order)],
        vec![
            one(order),
            FormalSeries::binomial_power(&q(1, 3), order, "x"),
        ],
        vec![FormalSeries::geometric(order, "x"), log1m(order).pow(2)],
        vec![one(order), lacunary(order)],
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn translation_by_x_shifts_jumps(idx in 0usize..5, d in 1usize..4) {
        let sys = &small_systems(80)[idx];
        let shifted: Vec<FormalSeries> = sys.iter().map(|f| f.shift(1).truncate(80)).collect();
        let a = filtration_jumps(sys, d, 70).unwrap();
        let b = filtration_jumps(&shifted, d, 70).unwrap();
        let expect: Vec<usize> = a.jumps.iter().map(|j| j + 1).collect();
        prop_assert_eq!(b.jumps, expect);
    }
}

#[test]
fn zagier_jumps_stay_low() {
    let z = zagier_series(90).unwrap();
    for d in 1..=6 {
        let j = filtration_jumps(&[z.h_a.clone(), z.h_b.clone()], d, 90).unwrap();
        assert!(
            *j.jumps.last().unwrap() <= 2 * d + 10,
            "D={d}: {:?}",
            j.jumps
        );
    }
}

#[test]
fn cartesian_examples() {
    assert!(
        cartesian_check(&[one(40), log1m(40)], 2, 2, 40)
            .unwrap()
            .holds
    );
    assert!(cartesian_check(&[one(40)], 2, 2, 40).unwrap().holds);
    assert!(
        cartesian_check(&[one(60), lacunary(60)], 2, 2, 60)
            .unwrap()
            .holds
    );
    assert!(matches!(
        cartesian_check(&[one(40)], 2, 3, 40),
        Err(Error::Domain(_))
    ));
}

#[test]
fn pure_functions_are_independent() {
    let b = pure_functions(400).unwrap().b;
    let r = independence_rank(&b, 10, 400).unwrap();
    assert!(r.independent);
    assert_eq!(r.columns, 77);
    assert_eq!(r.rank_lower_bound, 77);
}

#[test]
fn monomials_are_dependent() {
    let fs = [
        one(40),
        FormalSeries::var(40, "x"),
        FormalSeries::var(40, "x").pow(2),
    ];
    let r = independence_rank(&fs, 2, 40).unwrap();
    assert!(!r.independent);
    assert!(r.relation.is_some());
    assert!(matches!(
        independence_rank(&fs, 2, 20),
        Err(Error::Truncation { .. })
    ));
}

#[test]
fn zagier_family_relation() {
    let g = zagier_g_a_closed(140).unwrap().with_label("y");
    let d1 = g.derivative();
    let d2 = d1.derivative();
    let d3 = d2.derivative();
    let fs: Vec<FormalSeries> = vec![
        g.integrate_family(1).unwrap(),
        g.integrate_family(2).unwrap(),
        g.clone(),
        d1,
        d2,
        d3,
        FormalSeries::constant(Q::one(), 140, "y"),
    ];
    let order = fs.iter().map(FormalSeries::order).min().unwrap();
    let r = independence_rank(&fs, 12, order).unwrap();
    assert!(!r.independent);
    let rel = r.relation.unwrap();
    assert!(rel[0].iter().any(|c| !c.is_zero()));
    // The two integrals enter in the ratio 676/9 : 2.
    for (a, b) in rel[0].iter().zip(&rel[1]) {
        assert_eq!(a * 18, b * 676);
    }
}

#[test]
fn pade_remainders_vanish_to_order() {
    let nus = [q(1, 3), q(-2, 5), q(7, 2)];
    for n in 0..=8 {
        for m in 0..=8 {
            let mut systems = vec![pade_closed_forms("exp", n, m, None).unwrap()];
            for nu in &nus {
                systems.push(pade_closed_forms("binomial", n, m, Some(nu)).unwrap());
            }
            if m == n {
                systems.push(pade_closed_forms("log", n, m, None).unwrap());
            }
            for p in systems {
                assert!(p.b.degree().unwrap_or(0) <= p.m && p.a.degree().unwrap_or(0) <= p.n);
                let r = p.remainder(p.order + 2).unwrap();
                assert_eq!(r.valuation(), Some(p.order), "{:?} n={n} m={m}", p.system);
                assert_eq!(r.coeff(p.order), &p.leading, "{:?} n={n} m={m}", p.system);
            }
        }
    }
}

#[test]
fn pade_leading_examples() {
    assert_eq!(
        pade_closed_forms("exp", 3, 2, None).unwrap().leading,
        q(1, 7200)
    );
    assert_eq!(
        pade_closed_forms("log", 3, 3, None).unwrap().leading,
        q(-1, 140)
    );
    let nu = q(1, 3);
    assert_eq!(binomial_leading(&nu, 0, 1), q(1, 9));
    assert_eq!(
        binomial_leading(&nu, 2, 2),
        binomial_leading_swapped(&nu, 2, 2)
    );
    assert_ne!(
        binomial_leading(&nu, 0, 1),
        binomial_leading_swapped(&nu, 0, 1)
    );
    assert!(pade_closed_forms("binomial", 2, 2, None).is_err());
    assert!(pade_closed_forms("binomial", 2, 2, Some(&qi(2))).is_err());
    assert!(pade_closed_forms("sin", 2, 2, None).is_err());
}

#[test]
fn thue_determinant_is_a_monomial() {
    for nu in [q(1, 3), q(2, 7), q(-5, 3)] {
        for n in 0..=8 {
            let p = pade_closed_forms("binomial", n, n, Some(&nu)).unwrap();
            let det = p.thue_det.unwrap();
            assert_eq!(det.degree(), Some(2 * n + 1));
            assert_eq!(det.lead(), thue_det_closed(&nu, n), "nu={nu} n={n}");
            assert!((0..=2 * n).all(|k| det.coeff(k).is_zero()));
        }
    }
    assert_eq!(thue_det_closed(&q(1, 3), 2), q(-7, 4374));
}

#[test]
fn discrepancy_examples() {
    for n in [1, 2, 5, 10, 64] {
        let ps = PointSet::new((0..n).map(|k| k as f64 / n as f64).collect()).unwrap();
        assert!((discrepancy(&ps) - 1.0 / n as f64).abs() < 1e-12);
        assert!((discrepancy_fast(&ps) - 1.0 / n as f64).abs() < 1e-12);
    }
    let ps = PointSet::new(vec![0.0]).unwrap();
    assert_eq!(discrepancy(&ps), 1.0);
    assert!(PointSet::new(vec![1.0]).is_err());
    assert!(PointSet::new(vec![]).is_err());
    assert!(erdos_turan_bound(&ps, 0).is_err());
}

fn random_set(rng: &mut ChaCha8Rng, n: usize) -> PointSet {
    PointSet::new((0..n).map(|_| rng.random::<f64>()).collect()).unwrap()
}

#[test]
fn discrepancy_below_erdos_turan() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for t in 0..100 {
        let ps = random_set(&mut rng, 10 + t % 90);
        let d = discrepancy(&ps);
        for k in [1, 4, 16, 64] {
            assert!(d <= erdos_turan_bound(&ps, k).unwrap() + 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fast_discrepancy_agrees(seed in any::<u64>(), n in 1usize..120) {
        let ps = random_set(&mut ChaCha8Rng::seed_from_u64(seed), n);
        prop_assert!((discrepancy(&ps) - discrepancy_fast(&ps)).abs() < 1e-12);
    }

    #[test]
    fn discrepancy_bounds(pts in prop::collection::vec(0.0f64..1.0, 1..60)) {
        let n = pts.len() as f64;
        let d = discrepancy(&PointSet::new(pts).unwrap());
        prop_assert!(d >= 1.0 / n - 1e-12 && d <= 1.0);
    }
}

#[test]
fn concentration_holds() {
    let r = concentration_mc(5000, 0.25, 2000, 11).unwrap();
    assert!((r.bound - 100.0 * (-0.25f64.powi(4) * 5000.0 / 300.0).exp()).abs() < 1e-12);
    assert!(r.holds);
    assert_eq!(r.hits, 0);
    assert!(r.mean_discrepancy < 0.05);
    assert_eq!(r, concentration_mc(5000, 0.25, 2000, 11).unwrap());
    assert!(concentration_mc(100, 0.25, 999, 1).is_err());
}
