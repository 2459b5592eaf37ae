use holonomy_core::arith::{q, qi, Q};
use holonomy_core::poly::Poly;
use holonomy_core::series::{denominator_check, DenominatorWitness, FormalSeries};
use holonomy_core::special::*;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

fn head(f: &FormalSeries, n: usize) -> Vec<Q> {
    f.coeffs()[..n].to_vec()
}

fn qs(v: &[(i64, i64)]) -> Vec<Q> {
    v.iter().map(|&(a, b)| q(a, b)).collect()
}

#[test]
fn modular_heads_and_identity() {
    let lam = modular_q_series(ModularFunction::Lambda, 31).unwrap();
    let h = modular_q_series(ModularFunction::H, 16).unwrap();
    assert_eq!(lam.convention, QConvention::HalfPeriod);
    assert_eq!(h.convention, QConvention::FullPeriod);
    assert_eq!(
        head(&lam.series, 4),
        qs(&[(0, 1), (16, 1), (-128, 1), (704, 1)])
    );
    assert_eq!(head(&h.series, 2), qs(&[(0, 1), (-256, 1)]));

    // h in q_h = q_λ² against λ²/(λ−1).
    let l = lam.series;
    let rhs = l
        .mul(&l)
        .unwrap()
        .div(&l.sub(&FormalSeries::constant(qi(1), 31, "q")).unwrap())
        .unwrap();
    let sq = FormalSeries::from_fn(31, "q", |n| if n == 2 { qi(1) } else { Q::zero() });
    let lhs = h.series.compose(&sq).unwrap();
    assert_eq!(lhs.order(), 16);
    assert_eq!(head(&lhs, 16), head(&rhs, 16));
    let h31 = modular_q_series(ModularFunction::H, 31)
        .unwrap()
        .series
        .compose(&sq)
        .unwrap();
    assert_eq!(h31, rhs);
    assert!(modular_q_series(ModularFunction::H, 1).is_err());
}

#[test]
fn hauptmodul_round_trip() {
    let (x, qx) = hauptmodul6(30).unwrap();
    assert_eq!(head(&x.series, 4), qs(&[(0, 1), (1, 1), (-4, 1), (10, 1)]));
    assert_eq!(head(&qx, 4), qs(&[(0, 1), (1, 1), (4, 1), (22, 1)]));
    let id = x.series.with_label("x").compose(&qx).unwrap();
    assert_eq!(id, FormalSeries::var(30, "x"));
}

#[test]
fn eichler_heads() {
    let (a, b, c) = eichler_series(8).unwrap();
    assert_eq!(head(&a.series, 4), qs(&[(1, 1), (3, 1), (3, 1), (3, 1)]));
    assert_eq!(
        head(&b.series, 5),
        qs(&[(0, 1), (1, 1), (-5, 4), (1, 1), (-11, 16)])
    );
    assert_eq!(b.series.coeff(5), &q(24, 25));
    assert_eq!(
        head(&c.series, 6),
        qs(&[(0, 1), (1, 1), (-1, 1), (1, 9), (1, 1), (-24, 25)])
    );
}

/// `χ₋₃(n)` as a plain function.
fn chi(n: i64) -> i64 {
    [0, 1, -1][(n % 3) as usize]
}

#[test]
fn eichler_b_forms_agree() {
    let n = 60;
    let (_, b, _) = eichler_series(n).unwrap();
    // Σ_n (Σ_{d|n} (−1)^{d−1} χ₋₃(n/d) d²) qⁿ/n²
    let divisor = FormalSeries::from_fn(n, "q", |m| {
        let m = m as i64;
        if m == 0 {
            return Q::zero();
        }
        let s: i64 = (1..=m)
            .filter(|d| m % d == 0)
            .map(|d| if d % 2 == 1 { 1 } else { -1 } * chi(m / d) * d * d)
            .sum();
        q(s, m * m)
    });
    // Σ χ(k)qᵏ/(k²(1−qᵏ)) − 2Σ χ(k)q²ᵏ/(k²(1−q²ᵏ))
    let mut lambert = vec![Q::zero(); n];
    for k in 1..n as i64 {
        for j in 1.. {
            let e = (k * j) as usize;
            if e >= n {
                break;
            }
            lambert[e] += q(chi(k), k * k);
            if 2 * e < n {
                lambert[2 * e] -= q(2 * chi(k), k * k);
            }
        }
    }
    assert_eq!(b.series, divisor);
    assert_eq!(b.series, FormalSeries::new(lambert, "q"));
}

#[test]
fn zagier_heads_closed_form_and_recurrences() {
    let z = zagier_series(101).unwrap();
    assert_eq!(head(&z.h_a, 4), qs(&[(1, 1), (3, 1), (15, 1), (93, 1)]));
    assert_eq!(
        head(&z.h_b, 5),
        qs(&[(0, 1), (1, 1), (23, 4), (145, 4), (3993, 16)])
    );
    assert_eq!(
        head(&z.h_c, 5),
        qs(&[(0, 1), (1, 1), (6, 1), (343, 9), (788, 3)])
    );
    assert_eq!(
        head(&z.g_a, 4),
        qs(&[(2, 1), (-27, 1), (1014, 1), (-49536, 1)])
    );
    for n in 0..=50 {
        assert_eq!(
            z.h_a.coeff(n),
            &Q::from_integer(zagier_a_closed(n as u64)),
            "a_{n}"
        );
    }
    // (n+1)²a_{n+1} − 10n(n+1)a_n + 9n²a_{n−1} − 3a_n
    let rec = |s: &dyn Fn(usize) -> Q, n: usize| {
        let n_q = qi(n as i64);
        let prev = if n == 0 { Q::zero() } else { s(n - 1) };
        (&n_q + qi(1)) * (&n_q + qi(1)) * s(n + 1) - qi(10) * &n_q * (&n_q + qi(1)) * s(n)
            + qi(9) * &n_q * &n_q * prev
            - qi(3) * s(n)
    };
    let seq = zagier_a_closed_upto(501);
    assert_eq!(seq[50], zagier_a_closed(50));
    let closed = |n: usize| Q::from_integer(seq[n].clone());
    for n in 0..500 {
        assert!(rec(&closed, n).is_zero(), "a recurrence at {n}");
    }
    for n in 0..100 {
        let b = |k: usize| z.h_b.coeff(k).clone();
        let c = |k: usize| z.h_c.coeff(k).clone();
        if n > 0 {
            assert!(rec(&b, n).is_zero(), "b recurrence at {n}");
        }
        assert_eq!(rec(&c, n), qi(1), "c recurrence at {n}");
    }
}

#[test]
fn zagier_denominators_and_radius() {
    let z = zagier_series(201).unwrap();
    for (name, f) in [("HB", &z.h_b), ("HC", &z.h_c)] {
        let w = denominator_check(f, &DenominatorWitness::new(vec![qi(1), qi(1)], 0, 201)).unwrap();
        assert!(w.passed(), "{name}: {:?}", w.first_violation);
    }
    // A single power of [1..n] is not enough for H_B.
    let w = denominator_check(&z.h_b, &DenominatorWitness::new(vec![qi(1)], 0, 201)).unwrap();
    assert!(!w.passed());
    let r = root_test(&Q::from_integer(zagier_a_closed(400)), 400);
    assert!((r / 9.0 - 1.0).abs() < 0.05, "{r}");
}

#[test]
fn explicit_operator_annihilates_zagier_ga() {
    let g = zagier_series(121).unwrap().g_a;
    let op = zagier_explicit_ode();
    assert_eq!(op.order(), 4);
    assert!(op.annihilates(&g).unwrap());
    assert_eq!(op.coefficients[0].coeffs()[0], qi(-54));

    let closed = zagier_g_a_closed(404).unwrap();
    assert_eq!(closed.order(), 404);
    assert_eq!(&closed.coeffs()[..g.order()], g.coeffs());
    let r = op.apply(&closed).unwrap();
    assert!(r.order() >= 400 && r.is_zero());
}

#[test]
fn pure_function_heads_and_identities() {
    let p = pure_functions(60).unwrap();
    let b = &p.b;
    assert_eq!(b.len(), 7);
    assert_eq!(
        head(&b[3], 5),
        qs(&[(0, 1), (-4, 1), (4, 9), (31, 900), (389, 88200)])
    );
    assert_eq!(head(&b[1], 4), qs(&[(0, 1), (0, 1), (1, 6), (1, 60)]));
    let y = Poly::from_ints(&[0, 1]);
    let y4 = Poly::from_ints(&[0, 4, -1]);
    let apply = |c: &Poly, f: &FormalSeries| {
        let op = OdeOperator::new("y", vec![Poly::zero(), c.clone()], None);
        op.apply(f).unwrap()
    };
    let mulp = |c: &Poly, f: &FormalSeries| {
        OdeOperator::new("y", vec![c.clone()], None)
            .apply(f)
            .unwrap()
    };
    let n = 55;
    let cut = |f: FormalSeries| f.truncate(n);
    let poly_series = |c: &Poly| FormalSeries::from_fn(n, "y", |k| c.coeff(k));
    // y(4−y)B₂′ = (2−y)B₂ + y²
    let lhs = cut(apply(&y4, &b[1]));
    let rhs = cut(mulp(&Poly::from_ints(&[2, -1]), &b[1]))
        .add(&poly_series(&y.pow(2)))
        .unwrap();
    assert_eq!(lhs, rhs);
    // y(4−y)B₃′ = −B₂ + 2y
    let lhs = cut(apply(&y4, &b[2]));
    let rhs = cut(b[1].neg())
        .add(&poly_series(&Poly::from_ints(&[0, 2])))
        .unwrap();
    assert_eq!(lhs, rhs);
    // y(4−y)B₄′ = (2−y)B₄ + (4−y)B₂ − 2y(4−y)
    let lhs = cut(apply(&y4, &b[3]));
    let rhs = cut(mulp(&Poly::from_ints(&[2, -1]), &b[3]))
        .add(&cut(mulp(&Poly::from_ints(&[4, -1]), &b[1])))
        .unwrap()
        .sub(&poly_series(&y4.scale(&qi(2))))
        .unwrap();
    assert_eq!(lhs, rhs);
    // 2y(4−y)B₅′ = (4−y)B₅ − 2B₂ + 4y
    let lhs = cut(apply(&y4.scale(&qi(2)), &b[4]));
    let rhs = cut(mulp(&Poly::from_ints(&[4, -1]), &b[4]))
        .sub(&cut(b[1].scale(&qi(2))))
        .unwrap()
        .add(&poly_series(&Poly::from_ints(&[0, 4])))
        .unwrap();
    assert_eq!(lhs, rhs);
    // B₆ = ∫B₃/y, B₇ = ∫B₄/y
    assert_eq!(
        b[5].derivative().shift(1).truncate(n),
        b[2].clone().truncate(n)
    );
    assert_eq!(
        b[6].derivative().shift(1).truncate(n),
        b[3].clone().truncate(n)
    );
}

#[test]
fn b5_at_four_is_eight_catalan() {
    let raw = b5_at_four(100_000, false);
    let corrected = b5_at_four(100_000, true);
    let g8 = 8.0 * catalan();
    assert!((corrected - g8).abs() < 1e-3, "{corrected} vs {g8}");
    assert!(raw < g8 && g8 - raw < 2e-2);
}

#[test]
fn j_satisfies_both_odes() {
    let n = 302;
    let j = j_series(n);
    assert_eq!(head(&j, 4), qs(&[(0, 1), (1, 1), (0, 1), (-1, 18)]));
    // 2x(x−1)J′ − xJ = 2(1−x)log(1−x)
    let op = OdeOperator::new(
        "x",
        vec![Poly::from_ints(&[0, -1]), Poly::from_ints(&[0, -2, 2])],
        None,
    );
    let lhs = op.apply(&j).unwrap();
    let log = FormalSeries::neg_log1m(n, "x").neg();
    let rhs = OdeOperator::new("x", vec![Poly::from_ints(&[2, -2])], None)
        .apply(&log)
        .unwrap();
    assert!(lhs.order() >= 300);
    assert_eq!(lhs.truncate(300), rhs.truncate(300));
    // 2x(1−x)²J″ + (2−x)(1−x)J′ + J = 2 − 2x
    let l = OdeOperator::new(
        "x",
        vec![
            Poly::one(),
            Poly::from_ints(&[2, -3, 1]),
            Poly::from_ints(&[0, 2, -4, 2]),
        ],
        Some(Poly::from_ints(&[2, -2])),
    );
    assert!(l.annihilates(&j).unwrap());
    // The integral form spans the same space but is a different function.
    let t = j_integral_form(40);
    assert_eq!(head(&t, 4), qs(&[(0, 1), (-1, 1), (-1, 1), (-17, 18)]));
    assert!(!l.annihilates(&t).unwrap());
}

#[test]
fn pure_function_denominator_types() {
    let p = pure_functions(201).unwrap();
    let j = j_series(201);
    let t = j_integral_form(201);
    for (name, w) in pure_function_witnesses(201) {
        let f = match name {
            "J" => &j,
            _ => &p.b[name[1..].parse::<usize>().unwrap() - 1],
        };
        let r = denominator_check(f, &w).unwrap();
        assert!(r.passed(), "{name}: {:?}", r.first_violation);
    }
    let w = DenominatorWitness::new(vec![qi(1), qi(1)], 0, 201);
    assert!(denominator_check(&t, &w).unwrap().passed());
    // The types are sharp enough to fail without the extra factor.
    let w = DenominatorWitness::new(vec![qi(2)], 0, 201);
    assert!(!denominator_check(&p.b[2], &w).unwrap().passed());
}

#[test]
fn log_product_operator_identities() {
    let (a, b) = (3i64, 5i64);
    let s = log_product_system(a, b, 304).unwrap();
    assert!(is_integral(&s.u_a) && is_integral(&s.u_b));
    assert!(lcm_clears(&s.v_a, 1) && lcm_clears(&s.v_b, 1));
    assert!(lcm_clears(&s.h_star_h, 2));
    let m = &s.ode;
    assert_eq!(m.order(), 2);
    let r = m.apply(&s.p_a).unwrap();
    assert!(r.order() >= 300 && r.is_zero());
    let poly = |c: &[i64]| FormalSeries::from_fn(r.order(), "x", |k| qi(*c.get(k).unwrap_or(&0)));
    assert_eq!(m.apply(&s.h_star_a).unwrap(), poly(&[-b, 3 * a, -3 * b, a]));
    assert_eq!(m.apply(&s.a_star_h).unwrap(), poly(&[-a, 3 * b, -3 * a, b]));
    assert_eq!(m.apply(&s.h_star_h).unwrap(), poly(&[-1, 0, 2, 0, -1]));
    assert!(log_product_system(4, 5, 10).is_err());
    assert!(log_product_system(3, -3, 10).is_err());
    assert!(log_product_system(1, 5, 10).is_err());
}

#[test]
fn beukers_h_head() {
    for a in [qi(3), q(7, 2), qi(-5)] {
        let v = beukers_h_series(&a, 6);
        let a2 = &a * &a;
        assert_eq!(
            head(&v, 4),
            vec![
                Q::zero(),
                qi(1),
                qi(3) * &a / qi(2),
                (qi(15) * &a2 - qi(4)) / qi(6)
            ]
        );
        // The head x + ax²/2 + (3a²−1)x³/6 belongs to ∫A.
        let ia = legendre_series(&a, 6).integral();
        assert_eq!(
            head(&ia, 4),
            vec![Q::zero(), qi(1), &a / qi(2), (qi(3) * &a2 - qi(1)) / qi(6)]
        );
        // H = A·∫A.
        let prod = legendre_series(&a, 6).mul(&ia.truncate(6)).unwrap();
        assert_eq!(prod, v);
    }
}

#[test]
fn singularities() {
    let (m, n) = (2_000_000f64, 2_000_001f64);
    let ys = log_singularities(2.0 * m + 1.0, 2.0 * n + 1.0);
    assert!(singularity_screen(&ys, 1e-12 / 16.0, 1e6), "{ys:?}");
    // At (3, 5) the four images are the roots of R₄.
    let ys = log_singularities(3.0, 5.0);
    let p = r4(&qi(3), &qi(5));
    for y in ys {
        let scale: f64 = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c.to_f64().unwrap().abs() * y.abs().powi(k as i32))
            .sum();
        assert!(p.eval_f64(y).abs() < 1e-9 * scale, "R4({y})");
    }
    assert!(!singularity_screen(&ys, 1e-12 / 16.0, 1e6));
}

#[test]
fn overconvergent_combinations_decay() {
    let r = overconvergence_rates(3, 5, 200, 400).unwrap();
    let close = |got: f64, want: f64| (got / want - 1.0).abs() < 0.1;
    assert!(close(r.raw, r.predicted[0]), "{r:?}");
    assert!(close(r.p_a, r.predicted[1]), "{r:?}");
    assert!(close(r.p_b, r.predicted[2]), "{r:?}");
    assert!(close(r.p_ab, r.predicted[3]), "{r:?}");
    assert!(r.p_ab < r.raw / 10.0);
}

#[test]
fn jacobi_identity() {
    let (lhs, rhs) = jacobi_sides(41).unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn annihilator_of_exponential() {
    let e = FormalSeries::from_fn(60, "y", |n| {
        Q::one() / Q::from_integer(holonomy_core::arith::factorial(n as u64))
    });
    let op = annihilator(&e, 1, 0).unwrap();
    let op = op.operator().unwrap();
    assert!(op.proportional(&OdeOperator::new(
        "y",
        vec![Poly::from_ints(&[-1]), Poly::from_ints(&[1])],
        None
    )));
    assert!(annihilator(&e, 1, 10).is_err());
    let geo = FormalSeries::geometric(60, "y");
    // No polynomial multiple of 1/(1−y) vanishes.
    assert!(matches!(
        annihilator(&geo, 0, 5).unwrap(),
        Annihilator::NoneWithin { .. }
    ));
}

#[test]
fn annihilator_recovers_zagier_operator() {
    let g = zagier_series(201).unwrap().g_a;
    assert!(g.order() >= 100);
    let found = annihilator(&g, 4, 9).unwrap();
    let op = found.operator().expect("order-4 operator");
    assert_eq!(op.order(), 4);
    assert!(op.proportional(&zagier_explicit_ode()));
}

#[test]
fn annihilator_of_log_product_ga() {
    let g = log_product_g_a(3, 5, 152).unwrap();
    let found = annihilator(&g, 4, 19).unwrap();
    let op = found.operator().expect("order-4 operator");
    assert_eq!(op.order(), 4);
    let (a, b) = (qi(3), qi(5));
    assert!(op.leading().proportional(&expected_leading(&a, &b)));
    assert!(log_derivative_identity(op, &a, &b));
    let degs: Vec<_> = op
        .coefficients
        .iter()
        .map(|c| c.degree().unwrap())
        .collect();
    assert_eq!(degs, vec![12, 16, 17, 18, 19]);
}

#[test]
fn discriminant_and_resultant_spot_checks() {
    let (a, b) = (3i64, 5i64);
    let (p4, p10) = (r4(&qi(a), &qi(b)), r10(&qi(a), &qi(b)));
    assert_eq!(p4.degree(), Some(4));
    assert_eq!(p10.degree(), Some(10));
    let d = p10.discriminant();
    let res = p4.resultant(&p10);
    assert!(!d.is_zero() && !res.is_zero());
    let divides = |x: &Q, m: i64| (x.numer() % BigInt::from(m.abs())).is_zero();
    let f1 = 1 + 4 * a * a - 4 * a * b;
    let f2 = 1 + 4 * b * b - 4 * a * b;
    let f3 = -3 + 4 * a * a - 4 * a * b + 4 * b * b;
    let f4 = 9 + 16 * a * a - 40 * a * b + 16 * b * b;
    for f in [f1, f2, f3] {
        assert!(divides(&d, f) && divides(&res, f), "{f}");
    }
    assert!(divides(&res, f4));
    assert!(!divides(&d, 1 + 4 * b * b - 2 * a * b));
    assert!(divides(&d, 1 << 12));
}

#[test]
fn named_registry() {
    for name in NAMED_SERIES {
        let s = named_series(name, 12).unwrap();
        assert!(s.order() >= 6, "{name}");
    }
    assert_eq!(named_series("GA", 8).unwrap().coeff(1), &qi(-27));
    assert!(named_series("nope", 8).is_err());
}

#[test]
fn constants() {
    assert!((catalan() - 0.915_965_594_177_219).abs() < 1e-12);
    assert!((l2_chi3() - 0.781_302_412_896_486_3).abs() < 1e-12);
    assert!((zeta2() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
    assert!((zeta3() - 1.202_056_903_159_594_3).abs() < 1e-12);
}
