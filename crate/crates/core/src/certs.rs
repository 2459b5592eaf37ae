//! Holonomy quotients assembled from conformal sizes, denominator rates and growth
//! integrals, packaged as checkable certificates.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{fmt_q, q, q_to_f64, Q};
use crate::error::{Error, Result};
use crate::growth::{
    bc_pairing, pairwise_sum, rearrangement_integral, GrowthKind, GrowthReport, Patchwork,
};
use crate::maps::{eval_on_circle, preset_map, AnalyticMap, ContourPreset};
use crate::rates::{tau_total, DenominatorScheme};

/// `bc/(conformal_log − τ)`.
pub fn bound_bc(bc_integral: f64, conformal_log: f64, tau: &Q) -> Result<f64> {
    let den = conformal_log - q_to_f64(tau);
    if den <= 0.0 || !den.is_finite() {
        return Err(Error::Vacuous(den));
    }
    Ok(bc_integral / den)
}

/// The piecewise-patched bound: `(rearrangement + (1/m) Σ γ_k² (L_k − L_{k−1}))/(L_l − τ)`,
/// where `L_k = log|φ_k′(0)|` for the maps `φ_0, …, φ_l`.
pub fn bound_elementary(
    rearrangement: f64,
    gamma: &[f64],
    conformal_logs: &[f64],
    tau: &Q,
    m: usize,
) -> Result<f64> {
    if conformal_logs.len() != gamma.len() + 1 {
        return Err(Error::Domain(
            "need one more map than division points".into(),
        ));
    }
    if conformal_logs.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Domain(
            "maps must be ordered by increasing conformal size".into(),
        ));
    }
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    let extra: f64 = gamma
        .iter()
        .enumerate()
        .map(|(k, g)| g * g * (conformal_logs[k + 1] - conformal_logs[k]))
        .sum::<f64>()
        / m as f64;
    bound_bc(
        rearrangement + extra,
        *conformal_logs.last().expect("nonempty"),
        tau,
    )
}

/// `(bc − saving)/(conformal_log − τ)` for a nonnegative convexity saving numerator.
pub fn bound_convexity(bc: f64, saving: f64, conformal_log: f64, tau: &Q) -> Result<f64> {
    if saving < 0.0 {
        return Err(Error::Domain(format!(
            "convexity saving {saving} is negative"
        )));
    }
    bound_bc(bc - saving, conformal_log, tau)
}

/// `max_{0≤t≤1} (tx − λt^r − μt)` in closed form.
pub fn binomial_gamma(x: f64, r: f64, lam: f64, mu: f64) -> f64 {
    let d = x - mu;
    if d <= 0.0 {
        0.0
    } else if d <= lam * r {
        (r - 1.0) * d.powf(r / (r - 1.0)) / (r.powf(r) * lam).powf(1.0 / (r - 1.0))
    } else {
        x - lam - mu
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinomialBound {
    pub bound: f64,
    pub gamma_log_r: f64,
    pub t_val: f64,
    pub t_delta: f64,
    pub chi0: f64,
    pub chi1: f64,
    /// Unmet hypotheses among `μ ≤ log R < log|φ′(0)|`, `χ₀ ≤ χ₁ ≤ m`, `χ₀ < 1`.
    pub unmet: Vec<String>,
}

fn binomial_t(phi: &AnalyticMap, r: f64, lam: f64, mu: f64, n: usize) -> Result<f64> {
    let vals = eval_on_circle(phi, 1.0, n)?;
    let g: Vec<f64> = vals
        .iter()
        .map(|v| binomial_gamma(v.norm().ln(), r, lam, mu))
        .collect();
    if g.iter().any(|x| !x.is_finite()) {
        return Err(Error::Evaluation {
            point: "unit circle".into(),
            reason: "non-finite Γ(log|φ|)".into(),
        });
    }
    Ok(pairwise_sum(&g) / n as f64)
}

/// The binomial-metric convexity bound. The hypotheses are reported rather than enforced.
#[allow(clippy::too_many_arguments)]
pub fn bound_binomial_metric(
    phi: &AnalyticMap,
    big_r: f64,
    r: f64,
    lam: f64,
    mu: f64,
    m: usize,
    tau: &Q,
    samples: usize,
) -> Result<BinomialBound> {
    if !(r > 1.0 && lam > 0.0 && big_r > 0.0) || m == 0 {
        return Err(Error::Domain(format!(
            "need r > 1, λ > 0, R > 0, m ≥ 1; got r={r}, λ={lam}, R={big_r}, m={m}"
        )));
    }
    if samples < 64 {
        return Err(Error::Domain("samples must be ≥ 64".into()));
    }
    let log_phi = phi.size.ln();
    let log_r = big_r.ln();
    let mut unmet = Vec::new();
    if !(mu <= log_r && log_r < log_phi) {
        unmet.push(format!(
            "μ ≤ log R < log|φ′(0)| fails: {mu}, {log_r}, {log_phi}"
        ));
    }
    let t_val = binomial_t(phi, r, lam, mu, samples)?;
    let t_delta = (t_val - binomial_t(phi, r, lam, mu, samples / 2)?).abs();
    let gamma_log_r = binomial_gamma(log_r, r, lam, mu);
    let chi0 = ((log_r - mu).max(0.0) / (lam * r))
        .powf(1.0 / (r - 1.0))
        .min(1.0);
    let chi1 = (t_val - gamma_log_r) / (log_phi - log_r);
    if !(chi0 <= chi1 && chi1 <= m as f64) {
        unmet.push(format!("χ₀ ≤ χ₁ ≤ m fails: χ₀={chi0}, χ₁={chi1}"));
    }
    if chi0 >= 1.0 {
        unmet.push("χ₀ < 1 fails".into());
    }
    let t_total = lam / (r + 1.0) + mu / 2.0 + t_val;
    let inner = 0.5 * chi1 * chi1 * (log_phi - log_r) + chi0 * gamma_log_r
        - chi0 * chi0 * (log_r - mu) * (0.5 - 1.0 / (r * (r + 1.0)));
    let bound = bound_bc(2.0 * t_total - 2.0 * inner / m as f64, log_phi, tau)?;
    Ok(BinomialBound {
        bound,
        gamma_log_r,
        t_val,
        t_delta,
        chi0,
        chi1,
        unmet,
    })
}

/// `log ρ/(log ρ − τ)`.
pub fn bound_univalent(log_rho: f64, tau: &Q) -> Result<f64> {
    bound_bc(log_rho, log_rho, tau)
}

/// Which sufficient condition for rationality of a type-`b` germ holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CapVerdict {
    /// Round disc of radius `R > exp(Σb)`; `None` when no disc radius was supplied.
    pub disc: Option<bool>,
    /// Conformal radius `ρ > exp((3/2)Σb)`.
    pub conformal: bool,
}

impl CapVerdict {
    pub fn rational(&self) -> bool {
        self.conformal || self.disc == Some(true)
    }
}

pub fn cap_rationality(conformal_radius: f64, disc_radius: Option<f64>, b: &[Q]) -> CapVerdict {
    let s = q_to_f64(&b.iter().fold(Q::zero(), |a, x| a + x));
    CapVerdict {
        disc: disc_radius.map(|r| r > s.exp()),
        conformal: conformal_radius > (1.5 * s).exp(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct Certificate {
    pub name: String,
    pub m_target: u32,
    pub quotient: f64,
    /// `|quotient_N − quotient_{N/2}|` under halving every sample count.
    pub delta: f64,
    pub exact_inputs: BTreeMap<String, Q>,
    pub numeric_inputs: BTreeMap<String, GrowthReport>,
    pub verdict: Verdict,
    pub paper_value: Option<f64>,
    pub tolerance: f64,
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn matches_paper(&self) -> Option<bool> {
        self.paper_value
            .map(|p| (self.quotient - p).abs() <= self.tolerance)
    }

    pub fn to_json(&self) -> Value {
        let exact: serde_json::Map<String, Value> = self
            .exact_inputs
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(fmt_q(v))))
            .collect();
        let numeric: Vec<Value> = self
            .numeric_inputs
            .iter()
            .map(|(k, r)| {
                json!({"label": k, "kind": r.kind, "value": r.value, "samples": r.samples, "delta": r.refinement_delta})
            })
            .collect();
        json!({
            "name": self.name,
            "m_target": self.m_target,
            "quotient": self.quotient,
            "delta": self.delta,
            "verdict": self.verdict,
            "inputs": {"exact": exact, "numeric": numeric},
            "paper_value": self.paper_value,
            "tolerance": self.tolerance,
            "notes": self.notes,
        })
    }
}

/// `pass` iff `q + 3δ < m`, `fail` iff `q − 3δ ≥ m`.
pub fn verdict_for(quotient: f64, delta: f64, m_target: u32) -> Verdict {
    let m = m_target as f64;
    if quotient + 3.0 * delta < m {
        Verdict::Pass
    } else if quotient - 3.0 * delta >= m {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CertPreset {
    ThmABc,
    ThmAElementary,
    ThmAConv2,
    ThmAConv4,
    ThmAFullconv,
    ThmABinomial,
    LogsBc,
    LogsRearrangement,
    MixedBivalent,
    ThreeElements,
    NointBaseline,
    NointConv4,
    NointBinomial,
    X2Baseline,
}

impl CertPreset {
    pub const ALL: [CertPreset; 14] = [
        CertPreset::ThmABc,
        CertPreset::ThmAElementary,
        CertPreset::ThmAConv2,
        CertPreset::ThmAConv4,
        CertPreset::ThmAFullconv,
        CertPreset::ThmABinomial,
        CertPreset::LogsBc,
        CertPreset::LogsRearrangement,
        CertPreset::MixedBivalent,
        CertPreset::ThreeElements,
        CertPreset::NointBaseline,
        CertPreset::NointConv4,
        CertPreset::NointBinomial,
        CertPreset::X2Baseline,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CertPreset::ThmABc => "thmA_bc",
            CertPreset::ThmAElementary => "thmA_elementary",
            CertPreset::ThmAConv2 => "thmA_conv2",
            CertPreset::ThmAConv4 => "thmA_conv4",
            CertPreset::ThmAFullconv => "thmA_fullconv",
            CertPreset::ThmABinomial => "thmA_binomial",
            CertPreset::LogsBc => "logs_bc",
            CertPreset::LogsRearrangement => "logs_rearrangement",
            CertPreset::MixedBivalent => "mixed_bivalent",
            CertPreset::ThreeElements => "three_elements",
            CertPreset::NointBaseline => "noint_baseline",
            CertPreset::NointConv4 => "noint_conv4",
            CertPreset::NointBinomial => "noint_binomial",
            CertPreset::X2Baseline => "x2_baseline",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown certificate preset {s:?}")))
    }

    /// `(m_target, paper_value, tolerance)`.
    pub fn target(self) -> (u32, Option<f64>, f64) {
        match self {
            CertPreset::ThmABc => (14, Some(13.9938), 0.02),
            CertPreset::ThmAElementary => (14, Some(13.730), 0.03),
            CertPreset::ThmAConv2 => (14, Some(13.7206), 0.03),
            CertPreset::ThmAConv4 => (14, Some(13.621), 0.03),
            CertPreset::ThmAFullconv => (14, Some(13.678), 0.03),
            CertPreset::ThmABinomial => (14, Some(13.8527), 0.03),
            CertPreset::LogsBc => (17, Some(16.103), 0.01),
            CertPreset::LogsRearrangement => (17, None, 0.03),
            CertPreset::MixedBivalent => (5, Some(4.640395), 1e-4),
            CertPreset::ThreeElements => (4, None, 0.03),
            CertPreset::NointBaseline => (9, Some(9.833), 0.02),
            CertPreset::NointConv4 => (9, Some(9.4203), 0.03),
            CertPreset::NointBinomial => (9, Some(9.5234), 0.03),
            CertPreset::X2Baseline => (17, Some(22.7527), 0.03),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertOptions {
    /// Grid size per circle for double integrals.
    pub samples: usize,
    /// Grid size for single circle integrals and rearrangements.
    pub line_samples: usize,
}

impl Default for CertOptions {
    fn default() -> Self {
        CertOptions {
            samples: 2048,
            line_samples: 1 << 15,
        }
    }
}

/// One evaluation of a preset at a fixed resolution.
struct Run {
    quotient: f64,
    exact: BTreeMap<String, Q>,
    /// Label, kind, value, samples, and a delta already known (rearrangements and `T`).
    numeric: Vec<(String, GrowthKind, f64, usize, Option<f64>, f64)>,
    notes: Vec<String>,
    inconclusive: bool,
}

impl Run {
    fn new() -> Self {
        Run {
            quotient: f64::NAN,
            exact: BTreeMap::new(),
            numeric: Vec::new(),
            notes: Vec::new(),
            inconclusive: false,
        }
    }

    fn exact(&mut self, k: &str, v: Q) {
        self.exact.insert(k.to_string(), v);
    }

    fn numeric(
        &mut self,
        k: &str,
        kind: GrowthKind,
        value: f64,
        samples: usize,
        delta: Option<f64>,
        radius: f64,
    ) {
        self.numeric
            .push((k.to_string(), kind, value, samples, delta, radius));
    }
}

fn scheme(name: &str) -> Result<(DenominatorScheme, Q)> {
    let s = DenominatorScheme::named(name).map_err(|e| e.in_stage("denominator-rates"))?;
    let t = tau_total(&s).map_err(|e| e.in_stage("denominator-rates"))?;
    Ok((s, t))
}

/// `log|φ′(0)|` from the exact size when there is one.
fn conformal_log(phi: &AnalyticMap) -> f64 {
    phi.size.ln()
}

fn bc(phi: &AnalyticMap, r1: f64, r2: f64, n: usize) -> Result<f64> {
    bc_pairing(phi, r1, r2, n).map_err(|e| e.in_stage("growth-integrals"))
}

fn thm_a() -> (AnalyticMap, Q) {
    let phi = preset_map(ContourPreset::ThmA);
    let size = phi.size.exact.clone().expect("exact size") / q(256, 1);
    (phi, size)
}

const NINE: &str = "noint";

fn run_bc_only(run: &mut Run, phi: &AnalyticMap, tau: &Q, n: usize) -> Result<()> {
    let v = bc(phi, 1.0, 1.0, n)?;
    run.numeric("bc", GrowthKind::BcDouble, v, n, None, 1.0);
    run.quotient = bound_bc(v, conformal_log(phi), tau)?;
    Ok(())
}

fn run_discrete_convexity(
    run: &mut Run,
    phi: &AnalyticMap,
    radii: &[f64],
    m: usize,
    tau: &Q,
    n: usize,
) -> Result<()> {
    let l = radii.len() - 1;
    let mut t_hat = Vec::with_capacity(radii.len());
    for (h, &r) in radii.iter().enumerate() {
        let v = bc(phi, r, 1.0, n)?;
        let kind = if h == l {
            GrowthKind::BcDouble
        } else {
            GrowthKind::BcCharacteristic
        };
        run.numeric(&format!("t_hat[{h}]"), kind, v, n, None, r);
        t_hat.push(v);
    }
    let mut saving = 0.0;
    for k in 1..=l {
        let d = radii[k].ln() - radii[k - 1].ln();
        let alpha = (t_hat[k] - t_hat[k - 1]) / d;
        if !(0.0..=m as f64).contains(&alpha) {
            run.notes.push(format!(
                "hypothesis unmet: slope α_{k} = {alpha} outside [0, {m}]"
            ));
            run.inconclusive = true;
        }
        saving += alpha * alpha * d;
    }
    saving /= m as f64;
    run.quotient = bound_convexity(t_hat[l], saving, conformal_log(phi), tau)?;
    Ok(())
}

fn run_fullconv(
    run: &mut Run,
    phi: &AnalyticMap,
    radii: &[f64],
    m: usize,
    tau: &Q,
    n: usize,
) -> Result<()> {
    let data = crate::growth::convexity_data(phi, radii, n, m, true)
        .map_err(|e| e.in_stage("growth-integrals"))?;
    for (h, (&r, &v)) in radii.iter().zip(&data.t_hat_values).enumerate() {
        let kind = if r == 1.0 {
            GrowthKind::BcDouble
        } else {
            GrowthKind::BcCharacteristic
        };
        run.numeric(&format!("t_hat[{h}]"), kind, v, n, None, r);
    }
    let num = data.fullconv_numerator.ok_or_else(|| {
        Error::Inconclusive(format!("equilibrium weights: {}", data.fullconv_note))
    })?;
    if let Some(s) = &data.s_star {
        run.notes.push(format!("equilibrium weights s* = {s:?}"));
    }
    run.quotient = bound_bc(num, conformal_log(phi), tau)?;
    Ok(())
}

fn run_binomial(run: &mut Run, phi: &AnalyticMap, m: usize, tau: &Q, n: usize) -> Result<()> {
    let (r, lam, mu, big_r) = (4.7, 10.0, -4.5, 4.0);
    let b = bound_binomial_metric(phi, big_r, r, lam, mu, m, tau, n)
        .map_err(|e| e.in_stage("growth-integrals"))?;
    run.numeric(
        "binomial_t",
        GrowthKind::Nevanlinna,
        b.t_val,
        n,
        Some(b.t_delta),
        1.0,
    );
    run.notes.push(format!(
        "Γ(log R) = {}, χ₀ = {}, χ₁ = {}",
        b.gamma_log_r, b.chi0, b.chi1
    ));
    for u in &b.unmet {
        run.notes.push(format!("hypothesis unmet: {u}"));
        run.inconclusive = true;
    }
    run.quotient = b.bound;
    Ok(())
}

fn evaluate(preset: CertPreset, opts: CertOptions) -> Result<Run> {
    let mut run = Run::new();
    let n = opts.samples;
    let e = |x: f64| x.exp();
    match preset {
        CertPreset::ThmABc
        | CertPreset::ThmAElementary
        | CertPreset::ThmAConv2
        | CertPreset::ThmAConv4
        | CertPreset::ThmAFullconv
        | CertPreset::ThmABinomial
        | CertPreset::NointBaseline
        | CertPreset::NointConv4
        | CertPreset::NointBinomial => {
            let (phi, size) = thm_a();
            run.exact("conformal", size);
            let nine = matches!(
                preset,
                CertPreset::NointBaseline | CertPreset::NointConv4 | CertPreset::NointBinomial
            );
            let (_, tau) = scheme(if nine { NINE } else { "thmA" })?;
            // The nine-function scheme is stated in x; its y-type doubles every entry of b.
            let tau = if nine { tau * q(2, 1) } else { tau };
            let m = if nine { 9 } else { 14 };
            run.exact("tau", tau.clone());
            let four = [e(-1.0), e(-0.5), e(-0.25), 1.0];
            match preset {
                CertPreset::ThmABc | CertPreset::NointBaseline => {
                    run_bc_only(&mut run, &phi, &tau, n)?
                }
                CertPreset::ThmAElementary => {
                    let gamma = 2.926;
                    let inner = phi.restricted(e(-0.5)).map_err(|e| e.in_stage("map-zoo"))?;
                    let logs = [conformal_log(&phi) - 0.5, conformal_log(&phi)];
                    let patch = Patchwork::new(vec![inner, phi.clone()], vec![gamma], m as f64)
                        .map_err(|e| e.in_stage("growth-integrals"))?;
                    let re = rearrangement_integral(&patch, opts.line_samples)
                        .map_err(|e| e.in_stage("growth-integrals"))?;
                    run.numeric(
                        "rearrangement",
                        GrowthKind::Rearrangement,
                        re.value,
                        re.samples,
                        Some(re.refinement_delta),
                        1.0,
                    );
                    run.notes
                        .push(format!("γ = [{gamma}], radii [e^(-1/2), 1]"));
                    run.quotient = bound_elementary(re.value, &[gamma], &logs, &tau, m)?;
                }
                CertPreset::ThmAConv2 => {
                    run_discrete_convexity(&mut run, &phi, &[e(-0.5), 1.0], m, &tau, n)?
                }
                CertPreset::ThmAConv4 | CertPreset::NointConv4 => {
                    run_discrete_convexity(&mut run, &phi, &four, m, &tau, n)?
                }
                CertPreset::ThmAFullconv => {
                    run_fullconv(&mut run, &phi, &[e(-0.5), 1.0], m, &tau, n)?
                }
                CertPreset::ThmABinomial | CertPreset::NointBinomial => {
                    run_binomial(&mut run, &phi, m, &tau, opts.line_samples)?
                }
                _ => unreachable!(),
            }
        }
        CertPreset::LogsBc | CertPreset::LogsRearrangement => {
            let phi = preset_map(ContourPreset::Logs);
            run.exact(
                "conformal",
                phi.size.exact.clone().expect("exact size") / q(256, 1),
            );
            let (_, tau) = scheme("logs")?;
            run.exact("tau", tau.clone());
            if preset == CertPreset::LogsBc {
                let v = bc(&phi, 1.0, 1.0, n)?;
                run.numeric("bc", GrowthKind::BcDouble, v, n, None, 1.0);
                // The bound is stated with the numerator rounded up to 10.
                let cap = q(10, 1);
                run.exact("numerator", cap.clone());
                if v >= q_to_f64(&cap) {
                    run.notes
                        .push(format!("BC integral {v} exceeds the rounded numerator"));
                    run.inconclusive = true;
                }
                run.quotient = bound_bc(q_to_f64(&cap), conformal_log(&phi), &tau)?;
            } else {
                let re = rearrangement_integral(&Patchwork::single(phi.clone()), opts.line_samples)
                    .map_err(|e| e.in_stage("growth-integrals"))?;
                run.numeric(
                    "rearrangement",
                    GrowthKind::Rearrangement,
                    re.value,
                    re.samples,
                    Some(re.refinement_delta),
                    1.0,
                );
                run.quotient = bound_elementary(re.value, &[], &[conformal_log(&phi)], &tau, 17)?;
            }
        }
        CertPreset::MixedBivalent => {
            let phi = AnalyticMap::bivalent();
            let (_, tau) = scheme("bivalent")?;
            run.exact("tau", tau.clone());
            run.exact("conformal", phi.size.exact.clone().expect("exact size"));
            let closed = 8f64.ln() + 4.0 * crate::special::catalan() / PI;
            let v = bc(&phi, 1.0, 1.0, n)?;
            run.numeric("bc", GrowthKind::BcDouble, v, n, None, 1.0);
            run.notes
                .push(format!("closed-form BC log 8 + 4G/π = {closed}"));
            if (v - closed).abs() > 2e-2 {
                run.notes
                    .push(format!("quadrature {v} disagrees with the closed form"));
                run.inconclusive = true;
            }
            run.quotient = bound_bc(closed, conformal_log(&phi), &tau)?;
        }
        CertPreset::ThreeElements => {
            let gob = AnalyticMap::gobble(q(1, 2), Some(q(10, 1)), Some(q(3, 1)))
                .map_err(|e| e.in_stage("map-zoo"))?;
            let phi = gob.then(AnalyticMap::modular_h());
            run.exact(
                "conformal",
                phi.size.exact.clone().expect("exact size") / q(256, 1),
            );
            let (_, tau) = scheme("three_elements")?;
            run.exact("tau", tau.clone());
            let radii = [e(-5.0), e(-0.5), 1.0];
            let gamma = [0.6, 2.0];
            let maps: Vec<AnalyticMap> = radii
                .iter()
                .map(|&r| {
                    if r == 1.0 {
                        Ok(phi.clone())
                    } else {
                        phi.restricted(r)
                    }
                })
                .collect::<Result<_>>()
                .map_err(|e| e.in_stage("map-zoo"))?;
            let logs: Vec<f64> = radii.iter().map(|r| conformal_log(&phi) + r.ln()).collect();
            let patch = Patchwork::new(maps, gamma.to_vec(), 4.0)
                .map_err(|e| e.in_stage("growth-integrals"))?;
            let re = rearrangement_integral(&patch, opts.line_samples)
                .map_err(|e| e.in_stage("growth-integrals"))?;
            run.numeric(
                "rearrangement",
                GrowthKind::Rearrangement,
                re.value,
                re.samples,
                Some(re.refinement_delta),
                1.0,
            );
            run.notes
                .push("γ = [3/5, 2], radii [e^(-5), e^(-1/2), 1]".into());
            run.quotient = bound_elementary(re.value, &gamma, &logs, &tau, 4)?;
        }
        CertPreset::X2Baseline => {
            let gob = AnalyticMap::gobble(q(92, 100), Some(q(110, 1)), Some(q(23, 1)))
                .map_err(|e| e.in_stage("map-zoo"))?;
            run.exact("conformal", gob.size.exact.clone().expect("exact size"));
            let phi = gob.then(AnalyticMap::lambda());
            let (_, tau) = scheme("x2")?;
            run.exact("tau", tau.clone());
            run_bc_only(&mut run, &phi, &tau, n)?;
        }
    }
    Ok(run)
}

/// Evaluates a preset at the requested resolution and at half of it.
pub fn certificate(preset: CertPreset, opts: CertOptions) -> Result<Certificate> {
    if opts.samples < 128 || opts.line_samples < 128 {
        return Err(Error::Domain(
            "certificates need at least 128 samples".into(),
        ));
    }
    let full = evaluate(preset, opts)?;
    let half = evaluate(
        preset,
        CertOptions {
            samples: opts.samples / 2,
            line_samples: opts.line_samples / 2,
        },
    )?;
    let delta = (full.quotient - half.quotient).abs();
    let numeric_inputs = full
        .numeric
        .iter()
        .zip(&half.numeric)
        .map(|((label, kind, v, s, d, radius), (_, _, hv, _, _, _))| {
            let report = GrowthReport {
                kind: *kind,
                value: *v,
                samples: *s,
                refinement_delta: d.unwrap_or((v - hv).abs()),
                radius: *radius,
                pole_correction: 0.0,
            };
            (label.clone(), report)
        })
        .collect();
    let (m_target, paper_value, tolerance) = preset.target();
    let mut verdict = verdict_for(full.quotient, delta, m_target);
    if full.inconclusive && verdict == Verdict::Pass {
        verdict = Verdict::Inconclusive;
    }
    Ok(Certificate {
        name: preset.name().to_string(),
        m_target,
        quotient: full.quotient,
        delta,
        exact_inputs: full.exact,
        numeric_inputs,
        verdict,
        paper_value,
        tolerance,
        notes: full.notes,
    })
}

/// Independent certificates evaluated in parallel.
pub fn certificate_batch(presets: &[CertPreset], opts: CertOptions) -> Vec<Result<Certificate>> {
    presets.par_iter().map(|&p| certificate(p, opts)).collect()
}
