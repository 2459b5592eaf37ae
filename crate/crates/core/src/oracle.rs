//! Small exact oracles: vanishing filtration jumps, their Cartesian structure,
//! `ℚ(y)`-independence, explicit Hermite–Padé approximants, and discrepancy with
//! its concentration of measure.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{binomial, factorial, harmonic, qi, Q};
use crate::error::{Error, Result};
use crate::linalg::{kernel_certified, primitive_integer_vector};
use crate::poly::Poly;
use crate::series::FormalSeries;

/// Row echelon form keyed by the lowest nonzero index; every stored row is 1 at its pivot.
#[derive(Debug, Default)]
struct LowEchelon {
    rows: BTreeMap<usize, Vec<Q>>,
}

impl LowEchelon {
    /// Reduces `v` and stores it; returns its pivot, or `None` if it reduced to zero.
    fn insert(&mut self, mut v: Vec<Q>) -> Option<usize> {
        let mut start = 0;
        loop {
            let p = (start..v.len()).find(|&i| !v[i].is_zero())?;
            match self.rows.get(&p) {
                Some(row) => {
                    let c = v[p].clone();
                    for (x, r) in v.iter_mut().zip(row).skip(p) {
                        if !r.is_zero() {
                            *x -= &c * r;
                        }
                    }
                    start = p + 1;
                }
                None => {
                    let inv = Q::one() / &v[p];
                    for x in v.iter_mut().skip(p) {
                        *x *= &inv;
                    }
                    self.rows.insert(p, v);
                    return Some(p);
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiltrationJumps {
    pub functions: Vec<String>,
    #[serde(rename = "D")]
    pub d: usize,
    pub jumps: Vec<usize>,
    pub truncation_used: usize,
}

/// Jumps closer than this to the truncation are not trusted.
pub const JUMP_MARGIN: usize = 10;

/// The `mD` vanishing orders attained by `Σ_{i,k<D} c_{ik} x^k f_i`.
pub fn filtration_jumps(
    fs: &[FormalSeries],
    d: usize,
    truncation: usize,
) -> Result<FiltrationJumps> {
    if fs.is_empty() || d == 0 {
        return Err(Error::Domain("need at least one function and D ≥ 1".into()));
    }
    let have = fs.iter().map(FormalSeries::order).min().expect("nonempty");
    if truncation > have {
        return Err(Error::Truncation {
            need: truncation,
            have,
        });
    }
    let md = fs.len() * d;
    if truncation < md + JUMP_MARGIN {
        return Err(Error::Truncation {
            need: md + JUMP_MARGIN,
            have: truncation,
        });
    }
    let mut ech = LowEchelon::default();
    let mut jumps = Vec::with_capacity(md);
    for (i, f) in fs.iter().enumerate() {
        for k in 0..d {
            let v: Vec<Q> = (0..truncation)
                .map(|n| {
                    if n < k {
                        Q::zero()
                    } else {
                        f.coeff(n - k).clone()
                    }
                })
                .collect();
            match ech.insert(v) {
                Some(p) => jumps.push(p),
                None => {
                    return Err(Error::Inconclusive(format!(
                        "x^{k}·f_{i} is dependent on the earlier columns to order {truncation}: \
                         dependent inputs or truncation too small"
                    )))
                }
            }
        }
    }
    jumps.sort_unstable();
    let top = *jumps.last().expect("nonempty");
    if top + JUMP_MARGIN > truncation {
        return Err(Error::Truncation {
            need: top + JUMP_MARGIN,
            have: truncation,
        });
    }
    Ok(FiltrationJumps {
        functions: fs.iter().map(|f| f.label().to_string()).collect(),
        d,
        jumps,
        truncation_used: truncation,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CartesianReport {
    pub univariate: Vec<usize>,
    /// Leading exponents `(p, q)` of the bivariate span, sorted.
    pub bivariate: Vec<(usize, usize)>,
    pub holds: bool,
}

/// Largest number of bivariate columns accepted.
pub const CARTESIAN_CAP: usize = 64;

/// Compares the bivariate jumps of `{xᵃyᵇ f_i(x) f_j(y)}` under the graded order with the
/// Cartesian square of the univariate jumps.
pub fn cartesian_check(
    fs: &[FormalSeries],
    d: usize,
    dim: usize,
    truncation: usize,
) -> Result<CartesianReport> {
    if dim != 2 {
        return Err(Error::Domain(format!("only d = 2 is supported, got {dim}")));
    }
    let uni = filtration_jumps(fs, d, truncation)?;
    let md = uni.jumps.len();
    if md * md > CARTESIAN_CAP {
        return Err(Error::Domain(format!(
            "{} bivariate columns exceed the cap {CARTESIAN_CAP}",
            md * md
        )));
    }
    let top = *uni.jumps.last().expect("nonempty");
    // Monomials of total degree < t, ordered by degree and then by the x-exponent.
    let t = 2 * top + JUMP_MARGIN;
    if t > truncation {
        return Err(Error::Truncation {
            need: t,
            have: truncation,
        });
    }
    let mut index = Vec::new();
    for s in 0..t {
        for p in 0..=s {
            index.push((p, s - p));
        }
    }
    let cols: Vec<(usize, usize)> = (0..fs.len())
        .flat_map(|i| (0..d).map(move |k| (i, k)))
        .collect();
    let mut ech = LowEchelon::default();
    let mut bivariate = Vec::with_capacity(md * md);
    for &(i, a) in &cols {
        for &(j, b) in &cols {
            let v: Vec<Q> = index
                .iter()
                .map(|&(p, r)| {
                    if p < a || r < b {
                        Q::zero()
                    } else {
                        fs[i].coeff(p - a) * fs[j].coeff(r - b)
                    }
                })
                .collect();
            let piv = ech
                .insert(v)
                .ok_or_else(|| Error::Inconclusive("bivariate column reduced to zero".into()))?;
            bivariate.push(index[piv]);
        }
    }
    bivariate.sort_unstable();
    let mut square: Vec<(usize, usize)> = uni
        .jumps
        .iter()
        .flat_map(|&p| uni.jumps.iter().map(move |&r| (p, r)))
        .collect();
    square.sort_unstable();
    Ok(CartesianReport {
        holds: bivariate == square,
        univariate: uni.jumps,
        bivariate,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndependenceReport {
    pub independent: bool,
    pub columns: usize,
    pub rank_lower_bound: usize,
    /// One relation `Σ_i p_i(y) f_i = 0 + O(y^truncation)`, as integer polynomials `p_i`.
    pub relation: Option<Vec<Vec<BigInt>>>,
}

impl IndependenceReport {
    pub fn to_json(&self) -> serde_json::Value {
        let relation = self.relation.as_ref().map(|r| {
            r.iter()
                .map(|p| p.iter().map(ToString::to_string).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        });
        serde_json::json!({
            "independent": self.independent,
            "columns": self.columns,
            "rank_lower_bound": self.rank_lower_bound,
            "relation": relation,
        })
    }
}

/// Rank of the Taylor matrix of `{yʲ f_i : j ≤ cap}` truncated to `truncation` coefficients.
pub fn independence_rank(
    fs: &[FormalSeries],
    cap: usize,
    truncation: usize,
) -> Result<IndependenceReport> {
    if fs.is_empty() {
        return Err(Error::Domain("need at least one function".into()));
    }
    let need = fs.len() * (cap + 1) + 20;
    if truncation < need {
        return Err(Error::Truncation {
            need,
            have: truncation,
        });
    }
    let have = fs.iter().map(FormalSeries::order).min().expect("nonempty");
    if truncation > have {
        return Err(Error::Truncation {
            need: truncation,
            have,
        });
    }
    let ncols = fs.len() * (cap + 1);
    let rows: Vec<Vec<Q>> = (0..truncation)
        .map(|n| {
            let mut row = Vec::with_capacity(ncols);
            for f in fs {
                for j in 0..=cap {
                    row.push(if n < j {
                        Q::zero()
                    } else {
                        f.coeff(n - j).clone()
                    });
                }
            }
            row
        })
        .collect();
    let cert = kernel_certified(&rows)?;
    let relation = cert.kernel.first().map(|v| {
        let ints = primitive_integer_vector(v);
        ints.chunks(cap + 1).map(<[BigInt]>::to_vec).collect()
    });
    Ok(IndependenceReport {
        independent: cert.full_rank(),
        columns: ncols,
        rank_lower_bound: cert.rank_lower_bound,
        relation,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PadeSystem {
    Exp,
    /// `(1 − x)^ν`.
    Binomial {
        nu: String,
    },
    Log,
}

/// `B(x) + F(x)·A(x) = leading·x^order + O(x^{order+1})`, with `F = −eˣ`, `−(1−x)^ν` or `log(1−x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PadeApproximant {
    pub system: PadeSystem,
    pub n: usize,
    pub m: usize,
    pub b: Poly,
    pub a: Poly,
    pub order: usize,
    pub leading: Q,
    /// `A_{n,n}B_{n+1,n+1} − A_{n+1,n+1}B_{n,n}` on the binomial diagonal.
    pub thue_det: Option<Poly>,
}

/// Terminating `₂F₁(α, β; γ; s·x)` truncated after degree `deg`.
fn hyp2f1(alpha: &Q, beta: &Q, gamma: &Q, s: &Q, deg: usize) -> Poly {
    let mut c = Vec::with_capacity(deg + 1);
    let mut t = Q::one();
    for k in 0..=deg {
        c.push(t.clone());
        let kq = qi(k as i64);
        let den = (gamma + &kq) * (&kq + Q::one());
        if den.is_zero() {
            break;
        }
        t = t * (alpha + &kq) * (beta + &kq) * s / den;
    }
    Poly::new(c)
}

/// Terminating `₁F₁(α; γ; s·x)` truncated after degree `deg`.
fn hyp1f1(alpha: &Q, gamma: &Q, s: &Q, deg: usize) -> Poly {
    let mut c = Vec::with_capacity(deg + 1);
    let mut t = Q::one();
    for k in 0..=deg {
        c.push(t.clone());
        let kq = qi(k as i64);
        let den = (gamma + &kq) * (&kq + Q::one());
        if den.is_zero() {
            break;
        }
        t = t * (alpha + &kq) * s / den;
    }
    Poly::new(c)
}

/// Generalized `C(x, k)`.
fn binom_q(x: &Q, k: usize) -> Q {
    let mut r = Q::one();
    for i in 0..k {
        r = r * (x - qi(i as i64)) / qi(i as i64 + 1);
    }
    r
}

fn fact_q(n: usize) -> Q {
    Q::from_integer(factorial(n as u64))
}

fn binomial_pair(nu: &Q, n: usize, m: usize) -> (Poly, Poly) {
    let c = qi(-((m + n) as i64));
    let b = hyp2f1(&(-nu - qi(n as i64)), &qi(-(m as i64)), &c, &Q::one(), m);
    let a = hyp2f1(&(nu - qi(m as i64)), &qi(-(n as i64)), &c, &Q::one(), n);
    (b, a)
}

/// The explicit approximants. `nu` is required for the binomial system; `m` is ignored for
/// the logarithm, whose approximants are diagonal.
pub fn pade_closed_forms(
    system: &str,
    n: usize,
    m: usize,
    nu: Option<&Q>,
) -> Result<PadeApproximant> {
    if n > 12 || m > 12 {
        return Err(Error::Domain("n and m must be at most 12".into()));
    }
    match system {
        "exp" => {
            let c = qi(-((m + n) as i64));
            let b = hyp1f1(&qi(-(m as i64)), &c, &Q::one(), m);
            let a = hyp1f1(&qi(-(n as i64)), &c, &qi(-1), n);
            let sign = if (n + 1) % 2 == 0 { qi(1) } else { qi(-1) };
            let leading = sign * fact_q(m) * fact_q(n) / (fact_q(m + n) * fact_q(m + n + 1));
            Ok(PadeApproximant {
                system: PadeSystem::Exp,
                n,
                m,
                b,
                a,
                order: m + n + 1,
                leading,
                thue_det: None,
            })
        }
        "binomial" => {
            let nu = nu.ok_or_else(|| Error::Domain("the binomial system needs ν".into()))?;
            if nu.is_integer() {
                return Err(Error::Domain("ν must not be an integer".into()));
            }
            let (b, a) = binomial_pair(nu, n, m);
            let leading = binomial_leading(nu, n, m);
            let thue_det = (m == n).then(|| {
                let (b1, a1) = binomial_pair(nu, n + 1, n + 1);
                a.mul(&b1).sub(&a1.mul(&b))
            });
            let system = PadeSystem::Binomial {
                nu: crate::arith::fmt_q(nu),
            };
            Ok(PadeApproximant {
                system,
                n,
                m,
                b,
                a,
                order: m + n + 1,
                leading,
                thue_det,
            })
        }
        "log" => {
            let one_minus_x = Poly::from_ints(&[1, -1]);
            let (mut a, mut b) = (Poly::zero(), Poly::zero());
            for k in 0..=n {
                let c2 = Q::from_integer(binomial(n as i64, k as i64).pow(2));
                let pk = one_minus_x.pow(k as u32);
                a = a.add(&pk.scale(&c2));
                b = b.add(
                    &pk.scale(&(qi(2) * c2 * (harmonic((n - k) as u64) - harmonic(k as u64)))),
                );
            }
            let leading = -Q::one()
                / (qi(2 * n as i64 + 1) * Q::from_integer(binomial(2 * n as i64, n as i64)));
            Ok(PadeApproximant {
                system: PadeSystem::Log,
                n,
                m: n,
                b,
                a,
                order: 2 * n + 1,
                leading,
                thue_det: None,
            })
        }
        _ => Err(Error::Domain(format!(
            "unknown system {system:?}; expected exp, binomial or log"
        ))),
    }
}

/// Leading remainder coefficient of the binomial pair, `(−1)^m C(n+ν, m+n+1)/C(m+n, m)`.
pub fn binomial_leading(nu: &Q, n: usize, m: usize) -> Q {
    let sign = if m % 2 == 0 { qi(1) } else { qi(-1) };
    sign * binom_q(&(nu + qi(n as i64)), m + n + 1)
        / Q::from_integer(binomial((m + n) as i64, m as i64))
}

/// The same expression with the roles of `n` and `m` exchanged. It agrees with
/// [`binomial_leading`] only on the diagonal.
pub fn binomial_leading_swapped(nu: &Q, n: usize, m: usize) -> Q {
    binomial_leading(nu, m, n)
}

/// `ν ∏_{k≤n}(ν² − k²) (−1)^{n−1} (n!)² / ((2n)!(2n+1)!)`, the coefficient of `x^{2n+1}`.
pub fn thue_det_closed(nu: &Q, n: usize) -> Q {
    let mut p = nu.clone();
    for k in 1..=n {
        p *= nu * nu - qi((k * k) as i64);
    }
    let sign = if n % 2 == 1 { qi(1) } else { qi(-1) };
    sign * p * fact_q(n) * fact_q(n) / (fact_q(2 * n) * fact_q(2 * n + 1))
}

impl PadeApproximant {
    /// The series `F` paired with `A`, to the given order.
    pub fn partner(&self, order: usize) -> Result<FormalSeries> {
        Ok(match &self.system {
            PadeSystem::Exp => FormalSeries::from_fn(order, "x", |k| -Q::one() / fact_q(k)),
            PadeSystem::Binomial { nu } => {
                FormalSeries::binomial_power(&crate::arith::parse_q(nu)?, order, "x").neg()
            }
            PadeSystem::Log => FormalSeries::neg_log1m(order, "x").neg(),
        })
    }

    /// `B + F·A` expanded to the given order.
    pub fn remainder(&self, order: usize) -> Result<FormalSeries> {
        let f = self.partner(order)?;
        let a = FormalSeries::from_fn(order, "x", |k| self.a.coeff(k));
        let b = FormalSeries::from_fn(order, "x", |k| self.b.coeff(k));
        b.add(&f.mul(&a)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSet {
    points: Vec<f64>,
    sorted: Vec<f64>,
}

impl PointSet {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("point set must be nonempty".into()));
        }
        if let Some(x) = points.iter().find(|x| !(0.0..1.0).contains(*x)) {
            return Err(Error::Domain(format!("point {x} outside [0, 1)")));
        }
        let mut sorted = points.clone();
        sorted.sort_by(f64::total_cmp);
        Ok(PointSet { points, sorted })
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }
}

/// Interval discrepancy by enumerating every closed interval between sample points and every
/// gap between consecutive critical endpoints, `O(n²)`.
pub fn discrepancy(ps: &PointSet) -> f64 {
    let x = ps.sorted();
    let n = x.len();
    let nf = n as f64;
    let mut best: f64 = 0.0;
    // [x_i, x_j] holds at least j − i + 1 points.
    for i in 0..n {
        for j in i..n {
            best = best.max((j - i + 1) as f64 / nf - (x[j] - x[i]));
        }
    }
    // Open gaps between endpoints, with 0 and 1 as extra endpoints.
    let mut e = Vec::with_capacity(n + 2);
    e.push((0.0, 0usize));
    e.extend(x.iter().enumerate().map(|(k, &v)| (v, k + 1)));
    e.push((1.0, n + 1));
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            let inside = e[j].1 - e[i].1 - 1;
            best = best.max(e[j].0 - e[i].0 - inside as f64 / nf);
        }
    }
    best.min(1.0)
}

/// The same quantity in `O(n log n)` from prefix extrema of `k/n − x_k`.
pub fn discrepancy_fast(ps: &PointSet) -> f64 {
    let x = ps.sorted();
    let n = x.len();
    let nf = n as f64;
    let mut over: f64 = 0.0;
    let mut min_u = f64::INFINITY;
    for (k, &v) in x.iter().enumerate() {
        let u = (k + 1) as f64 / nf - v;
        min_u = min_u.min(u);
        over = over.max(1.0 / nf + u - min_u);
    }
    // v_k = x_k − k/n with x_0 = 0 and x_{n+1} = 1.
    let mut under: f64 = 0.0;
    let mut min_v: f64 = 0.0;
    for (k, &val) in x.iter().chain(std::iter::once(&1.0)).enumerate() {
        let v = val - (k + 1) as f64 / nf;
        under = under.max(v - min_v + 1.0 / nf);
        min_v = min_v.min(v);
    }
    over.max(under).min(1.0)
}

/// `3(1/(K+1) + Σ_{k≤K} |Σ_j e(k t_j)|/(k n))`.
pub fn erdos_turan_bound(ps: &PointSet, k_max: usize) -> Result<f64> {
    if k_max == 0 {
        return Err(Error::Domain("K must be at least 1".into()));
    }
    let n = ps.n() as f64;
    let mut s = 1.0 / (k_max as f64 + 1.0);
    for k in 1..=k_max {
        let (mut re, mut im) = (0.0, 0.0);
        for &t in ps.points() {
            let a = 2.0 * std::f64::consts::PI * k as f64 * t;
            re += a.cos();
            im += a.sin();
        }
        s += (re * re + im * im).sqrt() / (k as f64 * n);
    }
    Ok(3.0 * s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub n: usize,
    pub eps: f64,
    pub trials: usize,
    pub seed: u64,
    pub hits: usize,
    pub empirical_prob: f64,
    pub bound: f64,
    pub mean_discrepancy: f64,
    pub holds: bool,
}

/// Fraction of uniform samples in `[0,1]ⁿ` with discrepancy `≥ ε`, against `100·e^{−ε⁴n/300}`.
/// Trial `i` draws from ChaCha8 seeded with `seed` on stream `i`.
pub fn concentration_mc(
    n: usize,
    eps: f64,
    trials: usize,
    seed: u64,
) -> Result<ConcentrationReport> {
    if trials < 1000 {
        return Err(Error::Domain(format!(
            "need at least 1000 trials, got {trials}"
        )));
    }
    if n == 0 || eps.is_nan() || eps <= 0.0 {
        return Err(Error::Domain("need n ≥ 1 and ε > 0".into()));
    }
    let ds: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let pts: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            discrepancy_fast(&PointSet::new(pts).expect("uniform samples lie in [0, 1)"))
        })
        .collect();
    let hits = ds.iter().filter(|&&d| d >= eps).count();
    let empirical_prob = hits as f64 / trials as f64;
    let bound = 100.0 * (-eps.powi(4) * n as f64 / 300.0).exp();
    Ok(ConcentrationReport {
        n,
        eps,
        trials,
        seed,
        hits,
        empirical_prob,
        bound,
        mean_discrepancy: ds.iter().sum::<f64>() / trials as f64,
        holds: empirical_prob <= bound,
    })
}

/// `Σ_n x^{2ⁿ}` truncated: a lacunary series with no algebraic relations to small families.
pub fn lacunary(order: usize) -> FormalSeries {
    FormalSeries::from_fn(order, "x", |k| {
        if k > 0 && k.is_power_of_two() {
            Q::one()
        } else {
            Q::zero()
        }
    })
}
