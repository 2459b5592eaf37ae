use holonomy_core::arith::{parse_q, q, q_to_f64, qi, Q};
use holonomy_core::certs::*;
use holonomy_core::maps::{preset_map, ContourPreset};
use holonomy_core::Error;
use proptest::prelude::*;
use std::sync::OnceLock;

const CATALAN: f64 = 0.915_965_594_177_219_015;

fn thm_a_log() -> f64 {
    let size = parse_q("5448339453535586608000000000/8658833407565631122430056127").unwrap();
    256f64.ln() + size_ln(&size)
}

fn size_ln(x: &Q) -> f64 {
    q_to_f64(x).ln()
}

fn all() -> &'static Vec<Certificate> {
    static CERTS: OnceLock<Vec<Certificate>> = OnceLock::new();
    CERTS.get_or_init(|| {
        certificate_batch(&CertPreset::ALL, CertOptions::default())
            .into_iter()
            .map(|c| c.unwrap())
            .collect()
    })
}

fn cert(name: &str) -> &'static Certificate {
    all().iter().find(|c| c.name == name).unwrap()
}

#[test]
fn bc_bound_examples() {
    let b = bound_bc(11.845, thm_a_log(), &q(16603, 3920)).unwrap();
    assert!((b - 13.9938).abs() < 0.02, "{b}");
    assert_eq!(bound_bc(4f64.ln(), 4f64.ln(), &qi(0)).unwrap(), 1.0);
    let logs = 256f64.ln() + (1287f64 / 2516.0).ln();
    let b = bound_bc(10.0, logs, &q(1032659, 242760)).unwrap();
    assert!((b - 16.103).abs() < 0.01, "{b}");
    assert!(matches!(bound_bc(1.0, 1.0, &qi(1)), Err(Error::Vacuous(_))));
    assert!(matches!(bound_bc(1.0, 1.0, &qi(2)), Err(Error::Vacuous(_))));
}

#[test]
fn elementary_collapses_and_ordering() {
    let tau = q(16603, 3920);
    let l = thm_a_log();
    assert_eq!(
        bound_elementary(11.3, &[], &[l], &tau, 14).unwrap(),
        bound_bc(11.3, l, &tau).unwrap()
    );
    assert_eq!(
        bound_elementary(11.3, &[0.0], &[l - 0.5, l], &tau, 14).unwrap(),
        bound_bc(11.3, l, &tau).unwrap()
    );
    assert!(bound_elementary(11.3, &[2.9], &[l, l - 0.5], &tau, 14).is_err());
    assert!(bound_elementary(11.3, &[2.9], &[l], &tau, 14).is_err());
    // The printed rearrangement 11.316 with γ₁ = 2.926 and one half-unit log step.
    let b = bound_elementary(11.316, &[2.926], &[l - 0.5, l], &tau, 14).unwrap();
    assert!((b - 13.730).abs() < 0.03, "{b}");
}

#[test]
fn convexity_bound_arithmetic() {
    let tau = q(16603, 3920);
    let l = thm_a_log();
    let plain = bound_bc(11.844, l, &tau).unwrap();
    assert!((plain - 13.99303).abs() < 2e-3, "{plain}");
    let two = bound_convexity(11.844, 0.27243 * (l - q_to_f64(&tau)), l, &tau).unwrap();
    assert!((two - 13.7206).abs() < 2e-3);
    assert!(bound_convexity(11.844, -0.1, l, &tau).is_err());
}

#[test]
fn univalent_numerology() {
    let l4 = 4f64.ln();
    assert!((bound_univalent(l4, &q(8, 9)).unwrap() - 2.787050).abs() < 1e-6);
    assert!((bound_univalent(l4, &q(3, 4)).unwrap() - 2.1787).abs() < 1e-4);
    assert!(bound_univalent(l4, &qi(2)).is_err());
}

#[test]
fn log_three_cap_rationality() {
    let rho = 2.0 * (2.0 + 3f64.sqrt());
    assert!((rho - 7.4641).abs() < 1e-4);
    let v = cap_rationality(rho, Some((2.0 + 3f64.sqrt()) / 2.0), &[qi(1)]);
    assert!(v.conformal);
    assert_eq!(v.disc, Some(false));
    assert!(v.rational());
    // A slit at 1/2 is far too small for the same type.
    let v = cap_rationality(2.0, Some(0.5), &[qi(1)]);
    assert!(!v.rational());
}

#[test]
fn binomial_gamma_cases() {
    let (r, lam, mu) = (4.7, 10.0, -4.5);
    assert_eq!(binomial_gamma(-5.0, r, lam, mu), 0.0);
    assert_eq!(binomial_gamma(mu, r, lam, mu), 0.0);
    assert!((binomial_gamma(4f64.ln(), r, lam, mu) - 2.6429).abs() < 1e-4);
    // Past x − μ = λr the maximizer sits at t = 1.
    assert!((binomial_gamma(50.0, r, lam, mu) - (50.0 - lam - mu)).abs() < 1e-12);
    let edge = mu + lam * r;
    assert!((binomial_gamma(edge, r, lam, mu) - (edge - lam - mu)).abs() < 1e-9);
}

#[test]
fn binomial_metric_on_the_four_slit_map() {
    let phi = preset_map(ContourPreset::ThmA);
    let b =
        bound_binomial_metric(&phi, 4.0, 4.7, 10.0, -4.5, 14, &q(16603, 3920), 1 << 15).unwrap();
    assert!((b.t_val - 6.5316).abs() < 0.01, "{}", b.t_val);
    assert!((b.gamma_log_r - 2.6429).abs() < 1e-4);
    assert!((b.chi1 - 1.0522).abs() < 0.005);
    assert!((b.chi0 - 0.57035).abs() < 1e-5);
    assert!(b.unmet.is_empty(), "{:?}", b.unmet);
    assert!(b.bound < 14.0);
    let nine = bound_binomial_metric(&phi, 4.0, 4.7, 10.0, -4.5, 9, &q(314, 81), 1 << 15).unwrap();
    assert!((nine.bound - 9.5234).abs() < 0.03, "{}", nine.bound);
    // R above |φ′(0)| breaks the hypotheses and is reported.
    let bad =
        bound_binomial_metric(&phi, 200.0, 4.7, 10.0, -4.5, 14, &q(16603, 3920), 1024).unwrap();
    assert!(!bad.unmet.is_empty());
    assert!(bound_binomial_metric(&phi, 4.0, 1.0, 10.0, -4.5, 14, &q(16603, 3920), 1024).is_err());
}

#[test]
fn thm_a_presets() {
    for name in [
        "thmA_bc",
        "thmA_elementary",
        "thmA_conv2",
        "thmA_conv4",
        "thmA_fullconv",
    ] {
        let c = cert(name);
        assert_eq!(c.verdict, Verdict::Pass, "{name}");
        assert_eq!(c.matches_paper(), Some(true), "{name}: {}", c.quotient);
        assert_eq!(c.m_target, 14);
        assert_eq!(c.exact_inputs["tau"], q(16603, 3920));
        assert_eq!(
            c.exact_inputs["conformal"],
            parse_q("5448339453535586608000000000/8658833407565631122430056127").unwrap()
        );
    }
    let binom = cert("thmA_binomial");
    assert_eq!(binom.verdict, Verdict::Pass);
    assert!(
        (binom.quotient - 13.8117).abs() < 0.01,
        "{}",
        binom.quotient
    );
}

#[test]
fn refinements_improve_the_plain_bound() {
    let plain = cert("thmA_bc").quotient;
    let conv2 = cert("thmA_conv2").quotient;
    let conv4 = cert("thmA_conv4").quotient;
    let full = cert("thmA_fullconv").quotient;
    assert!(conv2 < plain && conv4 < conv2);
    assert!(full <= conv2 + 3.0 * (cert("thmA_fullconv").delta + cert("thmA_conv2").delta));
}

#[test]
fn logs_and_small_presets() {
    let c = cert("logs_bc");
    assert_eq!(c.verdict, Verdict::Pass);
    assert_eq!(c.matches_paper(), Some(true), "{}", c.quotient);
    assert!(c.numeric_inputs["bc"].value < 10.0);
    let r = cert("logs_rearrangement");
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.quotient < 17.0);
    assert!((r.numeric_inputs["rearrangement"].value - 9.972).abs() < 0.01);

    let b = cert("mixed_bivalent");
    let want = (8f64.ln() + 4.0 * CATALAN / std::f64::consts::PI) / (8f64.ln() - 69.0 / 50.0);
    assert!((b.quotient - want).abs() < 1e-9);
    assert!((b.quotient - 4.640395).abs() < 1e-4);
    assert_eq!(b.verdict, Verdict::Pass);

    let t = cert("three_elements");
    assert_eq!(t.exact_inputs["tau"], q(21, 8));
    assert_eq!(t.exact_inputs["conformal"], q(198, 505));
    assert!(t.quotient < 3.9 && t.quotient > 3.5, "{}", t.quotient);
    assert_eq!(t.verdict, Verdict::Pass);
}

#[test]
fn baselines_fail() {
    for name in ["noint_baseline", "noint_conv4", "noint_binomial"] {
        let c = cert(name);
        assert_eq!(c.verdict, Verdict::Fail, "{name}");
        assert_eq!(c.matches_paper(), Some(true), "{name}: {}", c.quotient);
        assert_eq!(c.exact_inputs["tau"], q(314, 81));
    }
    let x2 = cert("x2_baseline");
    assert_eq!(x2.verdict, Verdict::Fail);
    assert_eq!(x2.exact_inputs["tau"], q(552431, 242760));
    assert!(x2.quotient > 17.0);
}

#[test]
fn json_schema() {
    let v = cert("thmA_bc").to_json();
    for key in [
        "name",
        "m_target",
        "quotient",
        "verdict",
        "inputs",
        "paper_value",
        "tolerance",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["inputs"]["exact"]["tau"], "16603/3920");
    assert_eq!(
        v["inputs"]["exact"]["conformal"],
        "5448339453535586608000000000/8658833407565631122430056127"
    );
    let n = &v["inputs"]["numeric"][0];
    for key in ["kind", "value", "samples", "delta"] {
        assert!(n.get(key).is_some(), "{key}");
    }
    assert_eq!(n["kind"], "bc_double");
}

#[test]
fn presets_parse_and_are_reproducible() {
    for p in CertPreset::ALL {
        assert_eq!(CertPreset::parse(p.name()).unwrap(), p);
    }
    assert!(CertPreset::parse("thmB").is_err());
    let opts = CertOptions {
        samples: 256,
        line_samples: 1024,
    };
    let a = certificate(CertPreset::ThmAConv2, opts).unwrap();
    let b = certificate(CertPreset::ThmAConv2, opts).unwrap();
    assert_eq!(a.quotient.to_bits(), b.quotient.to_bits());
    assert!(certificate(
        CertPreset::ThmABc,
        CertOptions {
            samples: 64,
            line_samples: 1024
        }
    )
    .is_err());
}

#[test]
fn verdict_margins() {
    assert_eq!(verdict_for(13.99, 0.001, 14), Verdict::Pass);
    assert_eq!(verdict_for(13.99, 0.01, 14), Verdict::Inconclusive);
    assert_eq!(verdict_for(14.0, 0.0, 14), Verdict::Fail);
    assert_eq!(verdict_for(9.83, 0.01, 9), Verdict::Fail);
}

proptest! {
    #[test]
    fn quotients_increase_with_tau(num in 1.0f64..20.0, l in 3.0f64..6.0, t1 in 0u32..200, dt in 1u32..100) {
        let a = q(t1 as i64, 100);
        let b = q((t1 + dt) as i64, 100);
        prop_assume!(q_to_f64(&b) < l);
        prop_assert!(bound_bc(num, l, &a).unwrap() < bound_bc(num, l, &b).unwrap());
        prop_assert!(bound_bc(num, l, &a).unwrap() < bound_bc(num + 0.5, l, &a).unwrap());
        prop_assert!(bound_univalent(l, &a).unwrap() < bound_univalent(l, &b).unwrap());
        prop_assert!(bound_convexity(num, 0.1, l, &a).unwrap() < bound_convexity(num, 0.1, l, &b).unwrap());
    }

    #[test]
    fn gamma_is_the_legendre_transform(x in -10.0f64..60.0, r in 1.2f64..6.0, lam in 0.5f64..20.0, mu in -8.0f64..3.0) {
        let brute = (0..=20000)
            .map(|i| {
                let t = i as f64 / 20000.0;
                t * x - lam * t.powf(r) - mu * t
            })
            .fold(f64::NEG_INFINITY, f64::max);
        let g = binomial_gamma(x, r, lam, mu);
        prop_assert!(g >= brute - 1e-9);
        prop_assert!(g - brute < 1e-3 * (1.0 + x.abs() + lam + mu.abs()), "{g} {brute}");
    }
}
