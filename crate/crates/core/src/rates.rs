//! Denominator growth rates: the integration cost `I_u^v(w)`, `τ♭`, `τ♯`, their
//! sum, the one-column `τ♭♭`, and a Monte-Carlo estimate of `τ♭♭` for general
//! arrays.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{floor_q, fmt_q, harmonic, parse_q, q, q_to_f64, qi, Q};
use crate::error::{Error, Result};

/// An `m × r` denominator array `b` with the power vector `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenominatorScheme {
    pub b: Vec<Vec<Q>>,
    pub e: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct SchemeJson {
    b: Vec<Vec<serde_json::Value>>,
    e: Vec<u32>,
}

impl DenominatorScheme {
    /// Builds and validates a scheme from its rows.
    pub fn new(b: Vec<Vec<Q>>, e: Vec<u32>) -> Result<Self> {
        let s = DenominatorScheme { b, e };
        s.validate()?;
        Ok(s)
    }

    /// Builds a scheme from its columns, each given as `(zeros, value)`.
    pub fn from_columns(m: usize, columns: &[(usize, Q)], e: Vec<u32>) -> Result<Self> {
        let b = (0..m)
            .map(|i| {
                columns
                    .iter()
                    .map(|(u, v)| if i < *u { Q::zero() } else { v.clone() })
                    .collect()
            })
            .collect();
        DenominatorScheme::new(b, e)
    }

    pub fn m(&self) -> usize {
        self.b.len()
    }

    pub fn r(&self) -> usize {
        self.b.first().map_or(0, Vec::len)
    }

    fn validate(&self) -> Result<()> {
        let m = self.m();
        if m == 0 {
            return Err(Error::Domain("scheme needs at least one row".into()));
        }
        if self.e.len() != m {
            return Err(Error::Domain(format!(
                "e has {} entries for {m} rows",
                self.e.len()
            )));
        }
        let r = self.r();
        if self.b.iter().any(|row| row.len() != r) {
            return Err(Error::Domain("ragged b array".into()));
        }
        if self.b.iter().flatten().any(Signed::is_negative) {
            return Err(Error::Domain("b entries must be nonnegative".into()));
        }
        for j in 0..r {
            let (u, bj) = self.column(j);
            for (i, row) in self.b.iter().enumerate() {
                let want = if i < u { Q::zero() } else { bj.clone() };
                if row[j] != want {
                    return Err(Error::Domain(format!(
                        "column {j} is not of the form 0,…,0,b,…,b"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `(u_j, b_j)`: the number of leading zeros and the common positive value.
    pub fn column(&self, j: usize) -> (usize, Q) {
        let u = self.b.iter().take_while(|row| row[j].is_zero()).count();
        let bj = self
            .b
            .last()
            .map(|row| row[j].clone())
            .unwrap_or_else(Q::zero);
        (u, bj)
    }

    pub fn row_sums(&self) -> Vec<Q> {
        self.b
            .iter()
            .map(|row| row.iter().fold(Q::zero(), |a, x| a + x))
            .collect()
    }

    pub fn e_sum(&self) -> u64 {
        self.e.iter().map(|&x| x as u64).sum()
    }

    pub fn e_max(&self) -> u32 {
        self.e.iter().copied().max().unwrap_or(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let b = self
            .b
            .iter()
            .map(|row| row.iter().map(|x| fmt_q(x).into()).collect())
            .collect();
        serde_json::to_value(SchemeJson {
            b,
            e: self.e.clone(),
        })
        .expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let raw: SchemeJson = serde_json::from_value(v.clone())
            .map_err(|e| Error::Parse(format!("scheme JSON: {e}")))?;
        let b = raw
            .b
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| match x {
                        serde_json::Value::String(s) => parse_q(s),
                        serde_json::Value::Number(n) => parse_q(&n.to_string()),
                        _ => Err(Error::Parse(format!("bad scheme entry {x}"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        DenominatorScheme::new(b, raw.e)
    }

    /// Built-in schemes addressable by name.
    pub fn named(name: &str) -> Result<Self> {
        let two = qi(2);
        match name {
            "thmA" => Self::from_columns(
                14,
                &[(1, two.clone()), (3, two)],
                ones_at(14, &[2, 9, 10, 11, 12, 13]),
            ),
            "logs" => Self::from_columns(
                17,
                &[(1, two.clone()), (3, two)],
                ones_at(17, &[2, 9, 10, 11, 12, 13, 14, 15, 16]),
            ),
            "x2" => Self::from_columns(
                17,
                &[(2, qi(1)), (4, qi(1))],
                ones_at(17, &[1, 2, 3, 4, 5, 6, 7, 13, 14, 15, 16]),
            ),
            "log" => Self::from_columns(2, &[(1, qi(1))], vec![0, 0]),
            "log_integrated" => Self::from_columns(2, &[(1, qi(1))], vec![0, 1]),
            "univalent" => Self::from_columns(3, &[(1, qi(1))], vec![0, 0, 0]),
            "three_logs" => Self::from_columns(3, &[(2, qi(1))], vec![0, 1, 0]),
            "bivalent" => Self::from_columns(5, &[(1, qi(1)), (2, q(1, 2))], vec![0; 5]),
            "noint" => Self::from_columns(9, &[(1, qi(1)), (2, qi(1))], vec![0; 9]),
            "three_elements" => Self::from_columns(4, &[(2, qi(1)), (1, two)], vec![0; 4]),
            "three_elements_integrated" => {
                Self::from_columns(4, &[(3, qi(1)), (1, two)], vec![0, 0, 1, 0])
            }
            _ => Err(Error::Domain(format!("unknown scheme {name:?}"))),
        }
    }

    pub const NAMES: [&'static str; 11] = [
        "thmA",
        "logs",
        "x2",
        "log",
        "log_integrated",
        "univalent",
        "three_logs",
        "bivalent",
        "noint",
        "three_elements",
        "three_elements_integrated",
    ];
}

fn ones_at(m: usize, idx: &[usize]) -> Vec<u32> {
    let mut e = vec![0; m];
    for &i in idx {
        e[i] = 1;
    }
    e
}

fn pos_sq(x: Q) -> Q {
    if x.is_positive() {
        &x * &x
    } else {
        Q::zero()
    }
}

/// `I_u^v(w)` evaluated exactly by splitting every integrand at its rational breakpoints.
pub fn integration_cost(u: &Q, v: &Q, w: &Q) -> Result<Q> {
    let one = Q::one();
    let a = if *u > one { u.clone() } else { one.clone() };
    if a > *v || w > v {
        return Err(Error::Domain(format!(
            "integration cost needs max(u,1) <= v and w <= v (u={u}, v={v}, w={w})"
        )));
    }
    let mut total = Q::zero();
    // ∫_{min(u,1)}^1 (t − w)_+ dt.
    let lo = if *u < one { u.clone() } else { one.clone() };
    total += (pos_sq(&one - w) - pos_sq(&lo - w)) / qi(2);
    let big_w = if *w > one { w.clone() } else { one.clone() };
    // Cells [1 + kW, 1 + (k+1)W) carry H_k and the denominator k + 1.
    let mut k: u64 = 0;
    let mut h_k = Q::zero();
    loop {
        let cell_lo = &one + &big_w * qi(k as i64);
        if cell_lo >= *v {
            break;
        }
        let cell_hi = &cell_lo + &big_w;
        let s = if cell_lo > a {
            cell_lo.clone()
        } else {
            a.clone()
        };
        let t = if cell_hi < *v { cell_hi } else { v.clone() };
        if s < t {
            total += &h_k * (&t - &s);
            let d = qi(k as i64 + 1);
            let start = &d * w;
            total += (pos_sq(&t - &start) - pos_sq(&s - &start)) / (qi(2) * &d);
        }
        k += 1;
        h_k += q(1, k as i64);
    }
    Ok(total)
}

/// The `τ♯` objective `ξ Σe + max(e) I_ξ^m(ξ)` (without the `2/m²` factor).
fn sharp_objective(xi: &Q, m: &Q, e_sum: &Q, e_max: &Q) -> Q {
    if e_max.is_zero() {
        return xi * e_sum;
    }
    xi * e_sum + e_max * integration_cost(xi, m, xi).expect("ξ in [0, m]")
}

/// `τ♭(b) = (1/m²) Σ (2i−1) σ_i`.
pub fn tau_flat(s: &DenominatorScheme) -> Q {
    let m = s.m() as i64;
    let sum = s
        .row_sums()
        .iter()
        .enumerate()
        .fold(Q::zero(), |acc, (i, sig)| acc + sig * qi(2 * i as i64 + 1));
    sum / qi(m * m)
}

/// The equivalent column form `σ_m − (1/m²) Σ u_j² b_j`.
pub fn tau_flat_columns(s: &DenominatorScheme) -> Q {
    let m = s.m() as i64;
    let sigma_m = s.row_sums().last().cloned().unwrap_or_else(Q::zero);
    let corr = (0..s.r()).fold(Q::zero(), |acc, j| {
        let (u, bj) = s.column(j);
        acc + bj * qi((u * u) as i64)
    });
    sigma_m - corr / qi(m * m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauSharp {
    pub value: Q,
    /// Best rational `ξ` found.
    pub argmin: Q,
    /// Largest interval of minimizers containing `argmin`.
    pub minimizer: (Q, Q),
    /// Best value seen on the uniform grid, never below `value`.
    pub grid_value: Q,
}

/// Breakpoints in `ξ` where the objective changes its quadratic piece.
fn sharp_breakpoints(m: i64) -> Vec<Q> {
    let mut pts = vec![Q::zero(), Q::one(), qi(m)];
    for k in 1..=m {
        for num in [m - 1, m] {
            let x = q(num, k);
            if x >= Q::one() && x <= qi(m) {
                pts.push(x);
            }
        }
    }
    pts.sort();
    pts.dedup();
    pts
}

/// `τ♯(e) = (2/m²) min_{ξ∈[0,m]} (ξ Σe + max(e) I_ξ^m(ξ))`.
///
/// The objective is quadratic between consecutive breakpoints `1`, `(m−1)/k`, `m/k`,
/// so each cell is fitted exactly from three evaluations and minimized in closed form.
pub fn tau_sharp(s: &DenominatorScheme, grid_step: &Q) -> Result<TauSharp> {
    if !grid_step.is_positive() {
        return Err(Error::Domain("grid step must be positive".into()));
    }
    let m = s.m() as i64;
    let mq = qi(m);
    let e_sum = Q::from_integer(BigInt::from(s.e_sum()));
    let e_max = qi(s.e_max() as i64);
    let f = |x: &Q| sharp_objective(x, &mq, &e_sum, &e_max);
    let scale = qi(2) / qi(m * m);

    let pts = sharp_breakpoints(m);
    let mut best: Option<(Q, Q)> = None;
    let mut cells: Vec<(Q, Q, bool, Q)> = Vec::new();
    let consider = |x: Q, v: Q, best: &mut Option<(Q, Q)>| {
        if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
            *best = Some((x, v));
        }
    };
    for w in pts.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let mid = (a + b) / qi(2);
        let (fa, fm, fb) = (f(a), f(&mid), f(b));
        // f(a + s h) = fa + β s + α s², s ∈ [0, 1].
        let alpha = (&fa + &fb - qi(2) * &fm) * qi(2);
        let beta = &fb - &fa - &alpha;
        consider(a.clone(), fa.clone(), &mut best);
        consider(b.clone(), fb.clone(), &mut best);
        if alpha.is_positive() {
            let sv = -&beta / (qi(2) * &alpha);
            if sv.is_positive() && sv < Q::one() {
                let x = a + (b - a) * &sv;
                let v = f(&x);
                consider(x, v, &mut best);
            }
        }
        let flat = alpha.is_zero() && beta.is_zero();
        cells.push((a.clone(), b.clone(), flat, fa));
    }
    let (argmin, vmin) = best.expect("at least one cell");

    let mut lo = argmin.clone();
    let mut hi = argmin.clone();
    loop {
        let grown = cells.iter().find(|(a, b, flat, v)| {
            *flat && *v == vmin && ((*a <= lo && *b >= lo && *a < lo) || (*a <= hi && *b > hi))
        });
        match grown {
            Some((a, b, _, _)) => {
                if *a < lo {
                    lo = a.clone();
                }
                if *b > hi {
                    hi = b.clone();
                }
            }
            None => break,
        }
    }

    let steps = (qi(m) / grid_step)
        .ceil()
        .to_integer()
        .to_u64()
        .unwrap_or(0);
    let mut grid_value: Option<Q> = None;
    for j in 0..=steps {
        let x = grid_step * Q::from_integer(BigInt::from(j));
        let x = if x > mq { mq.clone() } else { x };
        let v = f(&x);
        if grid_value.as_ref().is_none_or(|g| v < *g) {
            grid_value = Some(v);
        }
    }
    Ok(TauSharp {
        value: &vmin * &scale,
        argmin,
        minimizer: (lo, hi),
        grid_value: grid_value.expect("nonempty grid") * &scale,
    })
}

/// Default grid for `τ♯`.
pub fn default_grid() -> Q {
    q(1, 120)
}

/// `τ(b; e) = τ♭(b) + τ♯(e)`.
pub fn tau_total(s: &DenominatorScheme) -> Result<Q> {
    Ok(tau_flat(s) + tau_sharp(s, &default_grid())?.value)
}

/// Exact `τ♭♭` of a single column: `2 ∫ c(t) dt` with
/// `c(t) = min_k ((K−k)/m + (1 − t/b_(k))_+)`, the Hall bound for nested admissible sets.
pub fn tau_flatflat_r1(column: &[Q]) -> Result<Q> {
    if column.iter().any(Signed::is_negative) {
        return Err(Error::Domain("column entries must be nonnegative".into()));
    }
    let m = column.len() as i64;
    if m == 0 {
        return Err(Error::Domain("empty column".into()));
    }
    let mut pos: Vec<Q> = column.iter().filter(|x| x.is_positive()).cloned().collect();
    pos.sort();
    let kk = pos.len() as i64;
    if kk == 0 {
        return Ok(Q::zero());
    }
    let bmax = pos.last().cloned().expect("nonempty");
    // Piece k: (K−k)/m + 1 − t/b_k on [0, b_k], then (K−k)/m.
    let consts: Vec<Q> = (0..=kk).map(|k| q(kk - k, m)).collect();
    let c_at = |t: &Q| -> Q {
        let mut best = consts[0].clone();
        for k in 1..=kk as usize {
            let bk = &pos[k - 1];
            let lin = Q::one() - t / bk;
            let v = &consts[k] + if lin.is_positive() { lin } else { Q::zero() };
            if v < best {
                best = v;
            }
        }
        best
    };
    let mut pts = vec![Q::zero(), bmax.clone()];
    pts.extend(pos.iter().cloned());
    // Intersections of every sloped piece with every constant level and with each other.
    for k in 1..=kk as usize {
        let bk = &pos[k - 1];
        for c in &consts {
            // consts[k] + 1 − t/b_k = c
            let t = (&consts[k] + Q::one() - c) * bk;
            pts.push(t);
        }
        for l in (k + 1)..=kk as usize {
            let bl = &pos[l - 1];
            if bk != bl {
                let t = (&consts[k] - &consts[l]) / (Q::one() / bk - Q::one() / bl);
                pts.push(t);
            }
        }
    }
    let mut pts: Vec<Q> = pts
        .into_iter()
        .filter(|t| !t.is_negative() && *t <= bmax)
        .collect();
    pts.sort();
    pts.dedup();
    let mut total = Q::zero();
    for w in pts.windows(2) {
        total += (c_at(&w[0]) + c_at(&w[1])) * (&w[1] - &w[0]) / qi(2);
    }
    Ok(qi(2) * total)
}

/// Smallest `τ♭` among column shapes dominating a single column.
pub fn dominating_column_bound(column: &[Q]) -> Q {
    let m = column.len() as i64;
    let zeros = column.iter().filter(|x| x.is_zero()).count() as i64;
    let bmax = column.iter().max().cloned().unwrap_or_else(Q::zero);
    bmax * (Q::one() - q(zeros * zeros, m * m))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauFlatFlatEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub points_per_unit: usize,
    pub samples: usize,
    pub seed: u64,
}

/// Monte-Carlo estimate of `τ♭♭` for an arbitrary nonnegative array.
///
/// Points `x_j = (j − ½)/d` are shared out among the `m` species, `d/m` each, and for a
/// random threshold `t` the best assignment maximizes `Σ_j #{h : b_{i_j,h} x_j ≥ t}`.
/// This is validation tooling only: the discretization carries an `O(1/d)` bias.
pub fn tau_flatflat_mc(
    b: &[Vec<Q>],
    d_per_species: usize,
    samples: usize,
    seed: u64,
) -> Result<TauFlatFlatEstimate> {
    let m = b.len();
    if m == 0 || d_per_species == 0 || samples < 2 {
        return Err(Error::Domain(
            "need rows, points and at least two samples".into(),
        ));
    }
    let bf: Vec<Vec<f64>> = b
        .iter()
        .map(|row| row.iter().map(q_to_f64).collect())
        .collect();
    let tmax = bf.iter().flatten().cloned().fold(0.0, f64::max);
    if tmax <= 0.0 {
        return Ok(TauFlatFlatEstimate {
            mean: 0.0,
            std_error: 0.0,
            points_per_unit: d_per_species,
            samples,
            seed,
        });
    }
    let d = m * d_per_species;
    let xs: Vec<f64> = (0..d).map(|j| (j as f64 + 0.5) / d as f64).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vals = Vec::with_capacity(samples);
    for _ in 0..samples {
        let t = rng.random::<f64>() * tmax;
        // Cost matrix rows: points; columns: species slots.
        let cost: Vec<Vec<f64>> = xs
            .iter()
            .map(|&x| {
                (0..d)
                    .map(|slot| {
                        let row = &bf[slot / d_per_species];
                        -(row.iter().filter(|&&bh| bh * x >= t).count() as f64)
                    })
                    .collect()
            })
            .collect();
        let best = -hungarian_min(&cost);
        vals.push(2.0 * tmax * best / d as f64);
    }
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(TauFlatFlatEstimate {
        mean,
        std_error: (var / n).sqrt(),
        points_per_unit: d_per_species,
        samples,
        seed,
    })
}

/// Minimum-cost perfect assignment on a square matrix (Kuhn–Munkres with potentials).
pub fn hungarian_min(cost: &[Vec<f64>]) -> f64 {
    let n = cost.len();
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=n).map(|j| cost[p[j] - 1][j - 1]).sum()
}

/// Exact harmonic-sum helper shared with the lcm calculus.
pub fn harmonic_upto(k: &Q) -> Q {
    let n = floor_q(k).to_u64().unwrap_or(0);
    harmonic(n)
}
