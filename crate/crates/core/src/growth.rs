//! Circle quadratures of growth characteristics: the Nevanlinna `T`, the increasing
//! rearrangement integral, the Bost–Charles double integral and characteristic `T̂(r)`,
//! and the slope data used by the convexity refinements.

use std::f64::consts::PI;

use num_complex::Complex64 as C;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{eval_on_circle, eval_on_grid, AnalyticMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthKind {
    Nevanlinna,
    Rearrangement,
    BcDouble,
    BcCharacteristic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub kind: GrowthKind,
    pub value: f64,
    pub samples: usize,
    /// `|value_N − value_{N/2}|`.
    pub refinement_delta: f64,
    pub radius: f64,
    pub pole_correction: f64,
}

/// Pairwise summation, independent of thread scheduling.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

fn check_finite(vals: &[C], label: &str) -> Result<()> {
    for (j, v) in vals.iter().enumerate() {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::Evaluation {
                point: format!("sample {j}"),
                reason: format!("{label} is {v}"),
            });
        }
    }
    Ok(())
}

fn nevanlinna_at(phi: &AnalyticMap, n: usize) -> Result<f64> {
    let vals = eval_on_circle(phi, 1.0, n)?;
    check_finite(&vals, &phi.label)?;
    let logs: Vec<f64> = vals.iter().map(|v| v.norm().ln().max(0.0)).collect();
    Ok(pairwise_sum(&logs) / n as f64)
}

/// `T(φ) = ∫ log⁺|φ| dμ + Σ mult·log(1/|ρ|)` over the supplied poles in the disc.
pub fn nevanlinna_t(phi: &AnalyticMap, samples: usize, poles: &[(C, u32)]) -> Result<GrowthReport> {
    if samples < 64 || !samples.is_power_of_two() {
        return Err(Error::Domain("samples must be a power of two ≥ 64".into()));
    }
    let pole_correction: f64 = poles
        .iter()
        .map(|(rho, mult)| *mult as f64 * (1.0 / rho.norm()).ln())
        .sum();
    let v = nevanlinna_at(phi, samples)?;
    let half = nevanlinna_at(phi, samples / 2)?;
    Ok(GrowthReport {
        kind: GrowthKind::Nevanlinna,
        value: v + pole_correction,
        samples,
        refinement_delta: (v - half).abs(),
        radius: 1.0,
        pole_correction,
    })
}

/// Maps patched on `[0, 1)` along division points `0 < γ_1 < ⋯ < γ_l < m`.
#[derive(Debug, Clone)]
pub struct Patchwork {
    pub maps: Vec<AnalyticMap>,
    pub gamma: Vec<f64>,
    pub m: f64,
}

impl Patchwork {
    pub fn single(map: AnalyticMap) -> Self {
        Patchwork {
            maps: vec![map],
            gamma: Vec::new(),
            m: 1.0,
        }
    }

    pub fn new(maps: Vec<AnalyticMap>, gamma: Vec<f64>, m: f64) -> Result<Self> {
        if maps.len() != gamma.len() + 1 {
            return Err(Error::Domain(
                "need one more map than division points".into(),
            ));
        }
        let mut bounds = vec![0.0];
        bounds.extend(gamma.iter().copied());
        bounds.push(m);
        if bounds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(
                "division points must increase strictly inside [0, m]".into(),
            ));
        }
        Ok(Patchwork { maps, gamma, m })
    }

    fn bounds(&self) -> Vec<f64> {
        let mut b = vec![0.0];
        b.extend(self.gamma.iter().copied());
        b.push(self.m);
        b
    }

    /// `g(t) = log|φ_k(e^{2πi(mt−γ_k)/(γ_{k+1}−γ_k)})|` on `[γ_k/m, γ_{k+1}/m)`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let b = self.bounds();
        let x = self.m * t;
        let k = (0..self.maps.len()).rfind(|&k| x >= b[k]).unwrap_or(0);
        let u = (x - b[k]) / (b[k + 1] - b[k]);
        Ok(self.maps[k]
            .eval(C::from_polar(1.0, 2.0 * PI * u))?
            .norm()
            .ln())
    }
}

fn rearrangement_at(g: &Patchwork, n: usize) -> Result<f64> {
    let mut vals: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|j| g.eval((j as f64 + 0.5) / n as f64))
        .collect::<Result<_>>()?;
    if vals.iter().any(|v| v.is_nan()) {
        return Err(Error::Evaluation {
            point: "rearrangement".into(),
            reason: "NaN sample".into(),
        });
    }
    vals.sort_by(f64::total_cmp);
    let terms: Vec<f64> = vals
        .iter()
        .enumerate()
        .map(|(j, v)| 2.0 * (j as f64 + 0.5) / n as f64 * v)
        .collect();
    Ok(pairwise_sum(&terms) / n as f64)
}

/// `∫_0^1 2t·g*(t) dt` for the increasing rearrangement `g*`.
pub fn rearrangement_integral(g: &Patchwork, samples: usize) -> Result<GrowthReport> {
    if samples < 64 {
        return Err(Error::Domain("samples must be ≥ 64".into()));
    }
    let v = rearrangement_at(g, samples)?;
    let half = rearrangement_at(g, samples / 2)?;
    Ok(GrowthReport {
        kind: GrowthKind::Rearrangement,
        value: v,
        samples,
        refinement_delta: (v - half).abs(),
        radius: 1.0,
        pole_correction: 0.0,
    })
}

const COINCIDENCE: f64 = 1e-30;
const JITTER: [f64; 4] = [0.0, 0.0371, 0.0713, 0.1129];

fn pairing_once(phi: &AnalyticMap, r1: f64, r2: f64, n: usize, jitter: f64) -> Result<Option<f64>> {
    let a = eval_on_grid(phi, r1, n, 0.25 + jitter)?;
    let b = eval_on_grid(phi, r2, n, 0.5 + jitter)?;
    check_finite(&a, &phi.label)?;
    check_finite(&b, &phi.label)?;
    let rows: Vec<Option<f64>> = a
        .par_iter()
        .map(|za| {
            let mut row = Vec::with_capacity(n);
            for wb in &b {
                let d = (za - wb).norm();
                if d < COINCIDENCE {
                    return None;
                }
                row.push(d.ln());
            }
            Some(pairwise_sum(&row))
        })
        .collect();
    let rows: Option<Vec<f64>> = rows.into_iter().collect();
    Ok(rows.map(|r| pairwise_sum(&r) / (n as f64 * n as f64)))
}

/// `L_{r1}·L_{r2} = ∬ log|φ(r1 z) − φ(r2 w)|`, retrying shifted grids on exact coincidences.
pub fn bc_pairing(phi: &AnalyticMap, r1: f64, r2: f64, samples: usize) -> Result<f64> {
    for &j in &JITTER {
        if let Some(v) = pairing_once(phi, r1, r2, samples, j)? {
            return Ok(v);
        }
    }
    Err(Error::Evaluation {
        point: format!("radii ({r1}, {r2})"),
        reason: "coincident values on every jittered grid".into(),
    })
}

/// The Bost–Charles integral at `radius = 1`, or the characteristic `T̂(r, φ)` otherwise.
pub fn bc_double_integral(phi: &AnalyticMap, samples: usize, radius: f64) -> Result<GrowthReport> {
    if samples < 64 {
        return Err(Error::Domain("samples must be ≥ 64".into()));
    }
    if !(radius > 0.0 && radius <= 1.0) {
        return Err(Error::Domain(format!("radius {radius} outside (0, 1]")));
    }
    let v = bc_pairing(phi, 1.0, radius, samples)?;
    let half = bc_pairing(phi, 1.0, radius, samples / 2)?;
    Ok(GrowthReport {
        kind: if radius == 1.0 {
            GrowthKind::BcDouble
        } else {
            GrowthKind::BcCharacteristic
        },
        value: v,
        samples,
        refinement_delta: (v - half).abs(),
        radius,
        pole_correction: 0.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityData {
    pub radii: Vec<f64>,
    pub t_hat_values: Vec<f64>,
    /// `α_k = (T̂(r_k) − T̂(r_{k−1}))/(log r_k − log r_{k−1})`.
    pub slopes: Vec<f64>,
    /// `(1/m) Σ α_k² (log r_k − log r_{k−1})`.
    pub saving: f64,
    pub s_star: Option<Vec<f64>>,
    /// `Σ_h s*_h L_{r_h}·L_1` when the equilibrium system has a solution in `[0,1]`.
    pub fullconv_numerator: Option<f64>,
    pub fullconv_note: String,
}

/// `T̂` at each radius, the slopes, the discrete convexity saving, and optionally the
/// equilibrium weights `s*`.
pub fn convexity_data(
    phi: &AnalyticMap,
    radii: &[f64],
    samples: usize,
    m: usize,
    fullconv: bool,
) -> Result<ConvexityData> {
    if radii.is_empty()
        || radii.windows(2).any(|w| w[0] >= w[1])
        || *radii.last().expect("nonempty") != 1.0
    {
        return Err(Error::Domain(
            "radii must increase strictly and end at 1".into(),
        ));
    }
    if radii[0] <= 0.0 || m == 0 {
        return Err(Error::Domain("radii must be positive and m ≥ 1".into()));
    }
    let l = radii.len() - 1;
    let gram_needed: Vec<(usize, usize)> = if fullconv {
        (0..=l).flat_map(|h| (h..=l).map(move |k| (h, k))).collect()
    } else {
        (0..=l).map(|h| (h, l)).collect()
    };
    let vals: Vec<f64> = gram_needed
        .iter()
        .map(|&(h, k)| bc_pairing(phi, radii[h], radii[k], samples))
        .collect::<Result<_>>()?;
    let mut gram = vec![vec![f64::NAN; l + 1]; l + 1];
    for (&(h, k), v) in gram_needed.iter().zip(vals) {
        gram[h][k] = v;
        gram[k][h] = v;
    }
    let t_hat: Vec<f64> = (0..=l).map(|h| gram[h][l]).collect();
    let dlog: Vec<f64> = (1..=l).map(|k| radii[k].ln() - radii[k - 1].ln()).collect();
    let slopes: Vec<f64> = (1..=l)
        .map(|k| (t_hat[k] - t_hat[k - 1]) / dlog[k - 1])
        .collect();
    let saving = slopes
        .iter()
        .zip(&dlog)
        .map(|(a, d)| a * a * d)
        .sum::<f64>()
        / m as f64;

    let (mut s_star, mut numerator, mut note) = (None, None, String::new());
    if fullconv {
        // Row k (1..=l): m Σ_{h<k} s_h − Σ_h s_h (G[h][k] − G[h][k−1])/Δ_k = 0; last row Σ s_h = 1.
        let mut a = vec![vec![0.0; l + 2]; l + 1];
        for k in 1..=l {
            for h in 0..=l {
                let own = if h < k { m as f64 } else { 0.0 };
                a[k - 1][h] = own - (gram[h][k] - gram[h][k - 1]) / dlog[k - 1];
            }
        }
        for h in 0..=l {
            a[l][h] = 1.0;
        }
        a[l][l + 1] = 1.0;
        match solve_dense(a) {
            Some(s) if s.iter().all(|x| (-1e-12..=1.0 + 1e-12).contains(x)) => {
                numerator = Some(s.iter().enumerate().map(|(h, sh)| sh * gram[h][l]).sum());
                s_star = Some(s);
            }
            Some(s) => {
                note = format!("equilibrium weights {s:?} leave [0, 1]");
                s_star = Some(s);
            }
            None => note = "no unique solution".into(),
        }
    }
    Ok(ConvexityData {
        radii: radii.to_vec(),
        t_hat_values: t_hat,
        slopes,
        saving,
        s_star,
        fullconv_numerator: numerator,
        fullconv_note: note,
    })
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve_dense(mut a: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        for i in 0..n {
            if i != col {
                let f = a[i][col] / a[col][col];
                for j in col..=n {
                    a[i][j] -= f * a[col][j];
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}
