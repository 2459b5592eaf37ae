//! Analytic maps of the unit disc with exact conformal sizes: Koebe, slits, lunes,
//! gobbles, Landen iterates, the modular `λ` and `h`, and their compositions.

use std::f64::consts::PI;

use num_complex::Complex64 as C;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{ln_q, q, q_to_f64, qi, Q};
use crate::error::{Error, Result};

/// `|φ′(0)|`, exact when rational.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConformalSize {
    #[serde(skip)]
    pub exact: Option<Q>,
    pub value: f64,
    pub note: String,
}

impl ConformalSize {
    pub fn exact(v: Q) -> Self {
        let value = q_to_f64(&v);
        ConformalSize {
            note: crate::arith::fmt_q(&v),
            exact: Some(v),
            value,
        }
    }

    pub fn real(value: f64, note: impl Into<String>) -> Self {
        ConformalSize {
            exact: None,
            value,
            note: note.into(),
        }
    }

    pub fn ln(&self) -> f64 {
        match &self.exact {
            Some(v) => ln_q(v),
            None => self.value.ln(),
        }
    }

    fn times(&self, o: &ConformalSize) -> ConformalSize {
        match (&self.exact, &o.exact) {
            (Some(a), Some(b)) => ConformalSize::exact(a * b),
            _ => ConformalSize::real(
                self.value * o.value,
                format!("({})·({})", self.note, o.note),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapKind {
    Identity,
    /// `4z/(1+z)²`.
    Koebe,
    /// Riemann map onto `D ∖ (−1, −r]`.
    Slit {
        r: Q,
    },
    /// Riemann map onto the lune bounded by arcs through `±1` with parameter `c`.
    Lune {
        c: Q,
    },
    /// `r·h(−h(z, f), e)`; `None` stands for an infinite parameter.
    Gobble {
        r: Q,
        e: Option<Q>,
        f: Option<Q>,
    },
    /// The `n`-th Landen layer `G(√G(√⋯G(z^{2ⁿ})))`.
    Landen {
        n: u32,
    },
    /// `8(z+z³)/(1+z)⁴`.
    Bivalent,
    /// The third Landen layer in closed form.
    Quadrivalent,
    /// Multiplication by `factor·e^{2πi·turn}`.
    Linear {
        factor: Q,
        turn: Q,
    },
    /// Multiplication by a real radius that need not be rational, such as `e^{−1/2}`.
    Dilate {
        rho: f64,
    },
    /// `−256 q ∏(1+qⁿ)²⁴`.
    ModularH,
    /// `16 q ∏((1+q²ⁿ)/(1+q²ⁿ⁻¹))⁸`.
    Lambda,
    /// A polynomial with rational coefficients and zero constant term.
    Polynomial {
        coeffs: Vec<Q>,
    },
    /// Constituents applied left to right.
    Compose(Vec<AnalyticMap>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticMap {
    pub kind: MapKind,
    pub size: ConformalSize,
    pub label: String,
}

fn lune_size(c: &Q) -> Q {
    let c2 = c * c;
    (&c2 - Q::one()) / (&c2 + Q::one())
}

/// `√a` on the branch continuous from `a_in`, a nearby interior value of the radicand.
fn sqrt_near(a: C, a_in: C) -> C {
    let s = a.sqrt();
    let si = a_in.sqrt();
    if (s - si).norm() > (s + si).norm() {
        -s
    } else {
        s
    }
}

const INWARD: f64 = 1.0 - 1e-9;

fn koebe(z: C) -> C {
    4.0 * z / ((1.0 + z) * (1.0 + z))
}

fn slit_eval(z: C, r: f64) -> C {
    let kappa = ((1.0 - r) / (1.0 + r)).powi(2);
    let zi = z * INWARD;
    let s = sqrt_near(1.0 - kappa * koebe(z), 1.0 - kappa * koebe(zi));
    ((1.0 + r).powi(2) * z + (1.0 - r).powi(2) * (2.0 * (1.0 - z) / ((1.0 + z) * (1.0 + s)) - 1.0))
        / (4.0 * r)
}

fn lune_eval(z: C, c: f64) -> C {
    let c2 = c * c;
    let k = 16.0 * c2 / ((1.0 + c2) * (1.0 + c2));
    let zi = z * INWARD;
    let s = sqrt_near(
        1.0 - k * z / ((1.0 + z) * (1.0 + z)),
        1.0 - k * zi / ((1.0 + zi) * (1.0 + zi)),
    );
    (1.0 + c2) * (z - 1.0 + (1.0 + z) * s) / (2.0 * (c2 - 1.0))
}

fn lune_opt(z: C, c: &Option<f64>) -> C {
    match c {
        Some(c) => lune_eval(z, *c),
        None => z,
    }
}

fn clog1p(w: C) -> C {
    if w.norm() < 1e-5 {
        w - w * w / 2.0 + w * w * w / 3.0
    } else {
        (1.0 + w).ln()
    }
}

fn check_q(q: C) -> Result<()> {
    if !q.re.is_finite() || !q.im.is_finite() || q.norm() >= 1.0 - 1e-12 {
        return Err(Error::Evaluation {
            point: format!("{q}"),
            reason: "nome outside the unit disc".into(),
        });
    }
    Ok(())
}

/// `h(q) = −256 q ∏(1+qⁿ)²⁴`.
pub fn modular_h(q: C) -> Result<C> {
    check_q(q)?;
    let mut acc = C::zero();
    let mut qn = q;
    while qn.norm() > 1e-18 {
        acc += clog1p(qn);
        qn *= q;
    }
    Ok(-256.0 * q * (24.0 * acc).exp())
}

/// `λ(q) = 16 q ∏((1+q²ⁿ)/(1+q²ⁿ⁻¹))⁸`.
pub fn modular_lambda(q: C) -> Result<C> {
    check_q(q)?;
    let mut acc = C::zero();
    let mut odd = q;
    let q2 = q * q;
    while odd.norm() > 1e-18 {
        acc += clog1p(odd * q) - clog1p(odd);
        odd *= q2;
    }
    Ok(16.0 * q * (8.0 * acc).exp())
}

/// Ratios `φ_n(p)/p` along a path starting at 0, continuing every square root.
fn landen_ratio(n: u32, path: &[C]) -> Vec<C> {
    if n == 0 {
        return path.iter().map(|p| 4.0 / ((1.0 + p) * (1.0 + p))).collect();
    }
    let squared: Vec<C> = path.iter().map(|p| p * p).collect();
    let inner = landen_ratio(n - 1, &squared);
    let mut prev = inner[0].sqrt();
    path.iter()
        .zip(inner)
        .map(|(p, r)| {
            let mut t = r.sqrt();
            if (t - prev).norm() > (t + prev).norm() {
                t = -t;
            }
            prev = t;
            4.0 * t / ((1.0 + p * t) * (1.0 + p * t))
        })
        .collect()
}

const LANDEN_STEPS: usize = 256;

fn landen_eval(n: u32, z: C) -> C {
    let path: Vec<C> = (0..=LANDEN_STEPS)
        .map(|k| z * (k as f64 / LANDEN_STEPS as f64))
        .collect();
    z * *landen_ratio(n, &path).last().expect("nonempty path")
}

impl AnalyticMap {
    fn new(kind: MapKind, size: ConformalSize, label: impl Into<String>) -> Self {
        AnalyticMap {
            kind,
            size,
            label: label.into(),
        }
    }

    pub fn identity() -> Self {
        Self::new(MapKind::Identity, ConformalSize::exact(Q::one()), "id")
    }

    pub fn koebe() -> Self {
        Self::new(MapKind::Koebe, ConformalSize::exact(qi(4)), "koebe")
    }

    pub fn slit(r: Q) -> Result<Self> {
        if !(r.is_positive() && r < Q::one()) {
            return Err(Error::Domain(format!("slit needs r in (0,1), got {r}")));
        }
        let one = Q::one();
        let size = qi(4) * &r / ((&one + &r) * (&one + &r));
        Ok(Self::new(
            MapKind::Slit { r: r.clone() },
            ConformalSize::exact(size),
            format!("slit({r})"),
        ))
    }

    pub fn lune(c: Q) -> Result<Self> {
        if c <= Q::one() {
            return Err(Error::Domain(format!("lune needs c > 1, got {c}")));
        }
        let size = lune_size(&c);
        Ok(Self::new(
            MapKind::Lune { c: c.clone() },
            ConformalSize::exact(size),
            format!("lune({c})"),
        ))
    }

    pub fn gobble(r: Q, e: Option<Q>, f: Option<Q>) -> Result<Self> {
        if !(r.is_positive() && r <= Q::one()) {
            return Err(Error::Domain(format!("gobble needs r in (0,1], got {r}")));
        }
        for p in [&e, &f].into_iter().flatten() {
            if *p <= Q::one() {
                return Err(Error::Domain(format!(
                    "gobble parameters must exceed 1, got {p}"
                )));
            }
        }
        let size = [&e, &f]
            .into_iter()
            .flatten()
            .fold(r.clone(), |acc, p| acc * lune_size(p));
        let show = |p: &Option<Q>| p.as_ref().map_or("∞".to_string(), |x| x.to_string());
        let label = format!("gobble({r},{},{})", show(&e), show(&f));
        Ok(Self::new(
            MapKind::Gobble { r, e, f },
            ConformalSize::exact(size),
            label,
        ))
    }

    pub fn landen(n: u32) -> Result<Self> {
        if n > 40 {
            return Err(Error::Domain(format!("landen depth {n} too large")));
        }
        let size = match n {
            0 => ConformalSize::exact(qi(4)),
            1 => ConformalSize::exact(qi(8)),
            _ => ConformalSize::real(
                16f64.powf(1.0 - 0.5f64.powi(n as i32 + 1)),
                format!("16^(1-2^-{})", n + 1),
            ),
        };
        Ok(Self::new(
            MapKind::Landen { n },
            size,
            format!("landen({n})"),
        ))
    }

    pub fn bivalent() -> Self {
        Self::new(MapKind::Bivalent, ConformalSize::exact(qi(8)), "bivalent")
    }

    pub fn quadrivalent() -> Self {
        Self::new(
            MapKind::Quadrivalent,
            ConformalSize::real(8.0 * 2f64.sqrt(), "8·√2"),
            "quadrivalent",
        )
    }

    pub fn scale(delta: Q) -> Result<Self> {
        if !(delta.is_positive() && delta <= Q::one()) {
            return Err(Error::Domain(format!(
                "scale needs δ in (0,1], got {delta}"
            )));
        }
        Ok(Self::linear(delta, Q::zero()))
    }

    pub fn rotate(turn: Q) -> Self {
        Self::linear(Q::one(), turn)
    }

    /// `z ↦ factor·e^{2πi·turn}·z`.
    pub fn linear(factor: Q, turn: Q) -> Self {
        let size = ConformalSize::exact(factor.abs());
        let label = format!("mul({factor},turn {turn})");
        Self::new(MapKind::Linear { factor, turn }, size, label)
    }

    /// `z ↦ ρz` for real `ρ ∈ (0, 1]`.
    pub fn dilate(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::Domain(format!(
                "dilation needs ρ in (0,1], got {rho}"
            )));
        }
        Ok(Self::new(
            MapKind::Dilate { rho },
            ConformalSize::real(rho, format!("{rho}")),
            format!("dilate({rho})"),
        ))
    }

    /// `z ↦ self(ρz)`.
    pub fn restricted(&self, rho: f64) -> Result<Self> {
        Ok(Self::dilate(rho)?.then(self.clone()))
    }

    pub fn modular_h() -> Self {
        Self::new(MapKind::ModularH, ConformalSize::exact(qi(256)), "h")
    }

    pub fn lambda() -> Self {
        Self::new(MapKind::Lambda, ConformalSize::exact(qi(16)), "lambda")
    }

    pub fn polynomial(coeffs: Vec<Q>) -> Result<Self> {
        if coeffs.first().is_some_and(|c| !c.is_zero()) {
            return Err(Error::Domain("polynomial map must vanish at 0".into()));
        }
        let c1 = coeffs.get(1).cloned().unwrap_or_else(Q::zero).abs();
        Ok(Self::new(
            MapKind::Polynomial { coeffs },
            ConformalSize::exact(c1),
            "poly",
        ))
    }

    /// `maps[last] ∘ ⋯ ∘ maps[0]`.
    pub fn compose(maps: Vec<AnalyticMap>) -> Self {
        let size = maps
            .iter()
            .fold(ConformalSize::exact(Q::one()), |acc, m| acc.times(&m.size));
        let label = maps
            .iter()
            .map(|m| m.label.as_str())
            .collect::<Vec<_>>()
            .join(" ▷ ");
        Self::new(MapKind::Compose(maps), size, label)
    }

    /// `self` followed by `outer`.
    pub fn then(self, outer: AnalyticMap) -> Self {
        Self::compose(vec![self, outer])
    }

    /// Constructs a map from a tag and numeric parameters.
    pub fn construct(kind: &str, params: &[Q]) -> Result<Self> {
        let p = |i: usize| {
            params
                .get(i)
                .cloned()
                .ok_or_else(|| Error::Domain(format!("{kind} needs parameter {}", i + 1)))
        };
        match kind {
            "identity" => Ok(Self::identity()),
            "koebe" => Ok(Self::koebe()),
            "slit" => Self::slit(p(0)?),
            "lune" => Self::lune(p(0)?),
            "gobble" => Self::gobble(p(0)?, Some(p(1)?), Some(p(2)?)),
            "landen" => {
                let n = p(0)?;
                if !n.is_integer() || n.is_negative() {
                    return Err(Error::Domain(
                        "landen depth must be a nonnegative integer".into(),
                    ));
                }
                Self::landen(
                    n.to_integer()
                        .try_into()
                        .map_err(|_| Error::Domain("landen depth too large".into()))?,
                )
            }
            "bivalent" => Ok(Self::bivalent()),
            "quadrivalent" => Ok(Self::quadrivalent()),
            "scale" => Self::scale(p(0)?),
            "rotate" => Ok(Self::rotate(p(0)?)),
            "h" => Ok(Self::modular_h()),
            "lambda" => Ok(Self::lambda()),
            _ => Err(Error::Domain(format!("unknown map kind {kind:?}"))),
        }
    }

    pub fn eval(&self, z: C) -> Result<C> {
        let v = match &self.kind {
            MapKind::Identity => z,
            MapKind::Koebe => koebe(z),
            MapKind::Slit { r } => slit_eval(z, q_to_f64(r)),
            MapKind::Lune { c } => lune_eval(z, q_to_f64(c)),
            MapKind::Gobble { r, e, f } => {
                let (e, f) = (e.as_ref().map(q_to_f64), f.as_ref().map(q_to_f64));
                q_to_f64(r) * lune_opt(-lune_opt(z, &f), &e)
            }
            MapKind::Landen { n } => landen_eval(*n, z),
            MapKind::Bivalent => {
                let w = (1.0 + z) * (1.0 + z);
                8.0 * (z + z * z * z) / (w * w)
            }
            MapKind::Quadrivalent => {
                let z2 = z * z;
                let s = sqrt_near(1.0 + z2 * z2, 1.0 + z2 * z2 * INWARD.powi(4));
                let d = z * 2f64.sqrt() + s;
                let d2 = d * d;
                8.0 * 2f64.sqrt() * z * (1.0 + z2) * (1.0 + z2) * s / (d2 * d2)
            }
            MapKind::Linear { factor, turn } => {
                z * C::from_polar(q_to_f64(factor), 2.0 * PI * q_to_f64(turn))
            }
            MapKind::Dilate { rho } => z * *rho,
            MapKind::ModularH => modular_h(z)?,
            MapKind::Lambda => modular_lambda(z)?,
            MapKind::Polynomial { coeffs } => coeffs
                .iter()
                .rev()
                .fold(C::zero(), |acc, c| acc * z + q_to_f64(c)),
            MapKind::Compose(ms) => {
                let mut w = z;
                for m in ms {
                    w = m.eval(w)?;
                }
                w
            }
        };
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::Evaluation {
                point: format!("{z}"),
                reason: format!("{} is not finite", self.label),
            });
        }
        Ok(v)
    }

    /// Central finite difference `|φ(h) − φ(−h)|/(2h)`.
    pub fn numeric_size(&self, h: f64) -> Result<f64> {
        let a = self.eval(C::new(h, 0.0))?;
        let b = self.eval(C::new(-h, 0.0))?;
        Ok((a - b).norm() / (2.0 * h))
    }

    /// Taylor coefficients `a_1..a_k` by a discrete Cauchy integral on radius `rho`.
    pub fn taylor_head(&self, k: usize, rho: f64, samples: usize) -> Result<Vec<C>> {
        let vals = eval_on_circle(self, rho, samples)?;
        Ok((1..=k)
            .map(|j| {
                let s: C = vals
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        v * C::from_polar(
                            1.0,
                            -2.0 * PI * j as f64 * (i as f64 + 0.5) / samples as f64,
                        )
                    })
                    .sum();
                s / (samples as f64 * rho.powi(j as i32))
            })
            .collect())
    }
}

/// Named contour presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourPreset {
    ThmA,
    Logs,
}

impl ContourPreset {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "thmA" => Ok(ContourPreset::ThmA),
            "logs" => Ok(ContourPreset::Logs),
            _ => Err(Error::Domain(format!("unknown contour preset {s:?}"))),
        }
    }
}

/// Slit radii and rotations of the four-slit contour.
pub fn thm_a_constants() -> ([Q; 4], [Q; 4], Q, Q, Q) {
    let r = [q(91, 100), q(6188, 10000), q(55515, 100000), q(772, 1000)];
    let theta = [
        q(7977, 100000),
        q(11543, 100000),
        q(3525, 100000),
        q(-783, 10000),
    ];
    (r, theta, q(77, 100), q(15, 2), q(995, 1000))
}

/// The inner map `ψ` of a preset, before the modular function.
pub fn build_certified_contour(preset: ContourPreset) -> AnalyticMap {
    match preset {
        ContourPreset::ThmA => {
            let (r, theta, big_r, c, delta) = thm_a_constants();
            let mut ms = vec![
                AnalyticMap::scale(delta).expect("valid"),
                AnalyticMap::slit(r[0].clone()).expect("valid"),
            ];
            for i in 0..3 {
                ms.push(AnalyticMap::rotate(theta[i].clone()));
                ms.push(AnalyticMap::slit(r[i + 1].clone()).expect("valid"));
            }
            ms.push(AnalyticMap::rotate(&theta[3] + q(1, 2)));
            ms.push(AnalyticMap::lune(c).expect("valid"));
            ms.push(AnalyticMap::linear(big_r, q(1, 2)));
            AnalyticMap::compose(ms)
        }
        ContourPreset::Logs => AnalyticMap::compose(vec![
            AnalyticMap::lune(q(23, 10)).expect("valid"),
            AnalyticMap::linear(q(3, 4), q(1, 2)),
        ]),
    }
}

/// The preset composed with the modular `h`.
pub fn preset_map(preset: ContourPreset) -> AnalyticMap {
    build_certified_contour(preset).then(AnalyticMap::modular_h())
}

/// `φ(ρ e^{2πi(j+½)/n})` for `j = 0..n`.
pub fn eval_on_circle(phi: &AnalyticMap, radius: f64, n: usize) -> Result<Vec<C>> {
    if n == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    eval_on_grid(phi, radius, n, 0.5)
}

/// `φ(ρ e^{2πi(j+offset)/n})` for `j = 0..n`.
pub fn eval_on_grid(phi: &AnalyticMap, radius: f64, n: usize, offset: f64) -> Result<Vec<C>> {
    (0..n)
        .into_par_iter()
        .map(|j| {
            phi.eval(C::from_polar(
                radius,
                2.0 * PI * (j as f64 + offset) / n as f64,
            ))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreimageCount {
    pub target: (f64, f64),
    pub contour_samples: usize,
    pub winding: i64,
    pub margin: f64,
}

fn winding_at(phi: &AnalyticMap, target: C, n: usize) -> Result<(f64, f64)> {
    let vals = eval_on_grid(phi, 1.0, n, 0.0)?;
    let margin = vals
        .iter()
        .map(|v| (v - target).norm())
        .fold(f64::INFINITY, f64::min);
    let mut total = 0.0;
    for j in 0..n {
        let a = vals[j] - target;
        let b = vals[(j + 1) % n] - target;
        total += (b / a).arg();
    }
    Ok((total / (2.0 * PI), margin))
}

/// Number of preimages of `target` in the disc, by the discrete argument principle
/// at `n` and `2n` samples.
pub fn preimage_count(phi: &AnalyticMap, target: C, samples: usize) -> Result<PreimageCount> {
    if samples < 8 {
        return Err(Error::Domain("need at least 8 contour samples".into()));
    }
    let (w1, margin) = winding_at(phi, target, samples)?;
    let (w2, _) = winding_at(phi, target, 2 * samples)?;
    let tol = 1e-9 * (1.0 + target.norm());
    if margin <= tol {
        return Err(Error::Inconclusive(format!(
            "target within {margin:e} of the sampled contour"
        )));
    }
    let (r1, r2) = (w1.round(), w2.round());
    if r1 != r2 || (w1 - r1).abs() > 1e-6 || (w2 - r2).abs() > 1e-6 {
        return Err(Error::Inconclusive(format!(
            "argument principle unstable ({w1:.6} at {samples} vs {w2:.6} at {}); use more samples",
            2 * samples
        )));
    }
    Ok(PreimageCount {
        target: (target.re, target.im),
        contour_samples: samples,
        winding: r1 as i64,
        margin,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridPoint {
    pub re: f64,
    pub im: f64,
    pub log_abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelGrid {
    pub radius: f64,
    pub resolution: usize,
    pub points: Vec<GridPoint>,
    /// `(level, number of horizontal or vertical grid edges crossing log|φ| = level)`.
    pub crossings: Vec<(f64, usize)>,
    /// Points with `|z| ≥ 0.1` whose value has `|φ| ≥ 10⁶`.
    pub high_region: usize,
    /// Points with `|z| ≥ 0.1` whose value has `|φ| ≤ 10⁻¹²·2⁻⁴`.
    pub low_region: usize,
}

impl LevelGrid {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("re,im,log_abs\n");
        for p in &self.points {
            s.push_str(&format!("{},{},{}\n", p.re, p.im, p.log_abs));
        }
        s
    }
}

/// `log|φ|` on a square grid over the disc of the given radius.
pub fn level_grid(
    phi: &AnalyticMap,
    radius: f64,
    resolution: usize,
    levels: &[f64],
) -> Result<LevelGrid> {
    if resolution < 16 {
        return Err(Error::Domain("resolution must be at least 16".into()));
    }
    let coord = |i: usize| radius * (2.0 * i as f64 / (resolution - 1) as f64 - 1.0);
    let cells: Vec<Option<(C, f64)>> = (0..resolution * resolution)
        .into_par_iter()
        .map(|k| {
            let z = C::new(coord(k % resolution), coord(k / resolution));
            if z.norm() > radius * (1.0 - 1e-12) {
                return Ok(None);
            }
            Ok(Some((z, phi.eval(z)?.norm().ln())))
        })
        .collect::<Result<_>>()?;
    let at = |i: usize, j: usize| cells[j * resolution + i].map(|c| c.1);
    let crossings = levels
        .iter()
        .map(|&lv| {
            let mut count = 0;
            for j in 0..resolution {
                for i in 0..resolution {
                    let Some(a) = at(i, j) else { continue };
                    for (di, dj) in [(1, 0), (0, 1)] {
                        if i + di < resolution && j + dj < resolution {
                            if let Some(b) = at(i + di, j + dj) {
                                if (a - lv) * (b - lv) < 0.0 {
                                    count += 1;
                                }
                            }
                        }
                    }
                }
            }
            (lv, count)
        })
        .collect();
    let hi = 1e6f64.ln();
    let lo = (1e-12f64 / 16.0).ln();
    let outer = cells.iter().flatten().filter(|(z, _)| z.norm() >= 0.1);
    let (high_region, low_region) = outer.fold((0, 0), |(h, l), (_, v)| {
        (h + usize::from(*v >= hi), l + usize::from(*v <= lo))
    });
    let points = cells
        .iter()
        .flatten()
        .map(|(z, v)| GridPoint {
            re: z.re,
            im: z.im,
            log_abs: *v,
        })
        .collect();
    Ok(LevelGrid {
        radius,
        resolution,
        points,
        crossings,
        high_region,
        low_region,
    })
}
