use holonomy_core::arith::{q, qi};
use holonomy_core::growth::{
    bc_double_integral, convexity_data, nevanlinna_t, rearrangement_integral, GrowthKind, Patchwork,
};
use holonomy_core::maps::{preset_map, AnalyticMap, ContourPreset};
use num_rational::BigRational;
use proptest::prelude::*;
use std::f64::consts::PI;

const CATALAN: f64 = 0.915_965_594_177_219_015;
const ZETA3: f64 = 1.202_056_903_159_594_285;
/// `L(2, χ₋₃)`.
const L2_CHI3: f64 = 0.781_302_412_896_486_296;

fn li3(x: f64) -> f64 {
    (1..4000).map(|k| x.powi(k) / (k as f64).powi(3)).sum()
}

/// `φ_r(z) = rz − (rz)²`.
fn quadratic(r: BigRational) -> AnalyticMap {
    AnalyticMap::polynomial(vec![qi(0), r.clone(), -(&r * &r)]).unwrap()
}

#[test]
fn univalent_and_bivalent_bc() {
    let k = bc_double_integral(&AnalyticMap::koebe(), 2048, 1.0).unwrap();
    assert_eq!(k.kind, GrowthKind::BcDouble);
    assert!((k.value - 4f64.ln()).abs() < 5e-3, "{}", k.value);
    let b = bc_double_integral(&AnalyticMap::bivalent(), 2048, 1.0).unwrap();
    assert!(
        (b.value - (8f64.ln() + 4.0 * CATALAN / PI)).abs() < 5e-3,
        "{}",
        b.value
    );
}

#[test]
fn quadratic_closed_forms() {
    let phi = quadratic(qi(1));
    let r = rearrangement_integral(&Patchwork::single(phi.clone()), 1 << 16).unwrap();
    assert!(
        (r.value - 7.0 * ZETA3 / (2.0 * PI * PI)).abs() < 1e-3,
        "{}",
        r.value
    );
    let bc = bc_double_integral(&phi, 2048, 1.0).unwrap();
    assert!(
        (bc.value - 3.0 * 3f64.sqrt() * L2_CHI3 / (4.0 * PI)).abs() < 5e-3,
        "{}",
        bc.value
    );
    let t = nevanlinna_t(&phi, 1 << 14, &[]).unwrap();
    assert!(
        (2.0 * t.value - 3.0 * 3f64.sqrt() * L2_CHI3 / (2.0 * PI)).abs() < 1e-3,
        "{}",
        t.value
    );

    // Past the golden ratio, T(φ_r) = 2 log r and the rearrangement has a Li₃ closed form.
    let r = 2.0f64;
    let phi = quadratic(qi(2));
    let t = nevanlinna_t(&phi, 4096, &[]).unwrap();
    assert!((t.value - 2.0 * r.ln()).abs() < 1e-9, "{}", t.value);
    let re = rearrangement_integral(&Patchwork::single(phi), 1 << 16).unwrap();
    let want = 2.0 * r.ln() + (8.0 * li3(1.0 / r) - li3(1.0 / (r * r))) / (2.0 * PI * PI);
    assert!((re.value - want).abs() < 1e-4, "{} vs {want}", re.value);
}

#[test]
fn thm_a_characteristics() {
    let phi = preset_map(ContourPreset::ThmA);
    let bc = bc_double_integral(&phi, 2048, 1.0).unwrap();
    assert!((bc.value - 11.844).abs() < 0.02, "{}", bc.value);
    assert!(bc.refinement_delta < 1e-2);

    let two = convexity_data(&phi, &[(-0.5f64).exp(), 1.0], 2048, 14, true).unwrap();
    assert!((two.t_hat_values[0] - 10.57).abs() < 0.03);
    assert!((two.slopes[0] - 2.541).abs() < 0.03);
    // α₁²·(1/2)/14, before division by log|φ′(0)| − τ.
    assert!((two.saving - 0.2306).abs() < 0.01, "{}", two.saving);
    let s = two.s_star.as_ref().unwrap();
    assert!((s[0] - 0.209).abs() < 0.005, "{s:?}");
    assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-12);

    let radii = [(-1.0f64).exp(), (-0.5f64).exp(), (-0.25f64).exp(), 1.0];
    let four = convexity_data(&phi, &radii, 2048, 14, false).unwrap();
    for (got, want) in four
        .t_hat_values
        .iter()
        .zip([9.877, 10.573, 11.049, 11.844])
    {
        assert!((got - want).abs() < 0.03, "{got} vs {want}");
    }
    assert!(four.slopes.windows(2).all(|w| w[0] <= w[1]));
    assert!(four.t_hat_values.windows(2).all(|w| w[0] <= w[1]));
    assert!(*four.slopes.last().unwrap() <= 14.0);
}

#[test]
fn logs_characteristics() {
    let phi = preset_map(ContourPreset::Logs);
    let bc = bc_double_integral(&phi, 2048, 1.0).unwrap();
    assert!((bc.value - 9.963).abs() < 0.02, "{}", bc.value);
    let re = rearrangement_integral(&Patchwork::single(phi.clone()), 1 << 14).unwrap();
    assert!((re.value - 9.972).abs() < 0.02, "{}", re.value);
    let t = nevanlinna_t(&phi, 1 << 14, &[]).unwrap();
    assert!((2.0 * t.value - 14.08).abs() < 0.05, "{}", t.value);
    assert!(bc.value <= re.value && re.value <= 2.0 * t.value);
}

#[test]
fn doubling_is_stable_for_presets() {
    for p in [ContourPreset::ThmA, ContourPreset::Logs] {
        let phi = preset_map(p);
        let a = bc_double_integral(&phi, 1024, 1.0).unwrap().value;
        let b = bc_double_integral(&phi, 2048, 1.0).unwrap().value;
        assert!((a - b).abs() < 1e-2, "{p:?}: {a} {b}");
    }
}

#[test]
fn radius_validation() {
    assert!(bc_double_integral(&AnalyticMap::koebe(), 64, 0.0).is_err());
    assert!(bc_double_integral(&AnalyticMap::koebe(), 32, 1.0).is_err());
    assert!(nevanlinna_t(&AnalyticMap::koebe(), 100, &[]).is_err());
    assert!(convexity_data(&AnalyticMap::koebe(), &[0.5, 0.9], 64, 3, false).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn nazarov_chain(c in proptest::collection::vec(-30i64..=30, 2..6), lead in 1i64..=12) {
        let mut coeffs = vec![qi(0), qi(lead)];
        coeffs.extend(c.iter().map(|&x| q(x, 10)));
        let phi = AnalyticMap::polynomial(coeffs).unwrap();
        let bc = bc_double_integral(&phi, 1024, 1.0).unwrap();
        let re = rearrangement_integral(&Patchwork::single(phi.clone()), 1024).unwrap();
        let t = nevanlinna_t(&phi, 1024, &[]).unwrap();
        let slack = 3.0 * (bc.refinement_delta + re.refinement_delta + t.refinement_delta) + 1e-9;
        prop_assert!(bc.value <= re.value + slack, "{} {}", bc.value, re.value);
        prop_assert!(re.value <= 2.0 * t.value + slack, "{} {}", re.value, t.value);
    }
}
