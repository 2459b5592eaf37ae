//! Concrete q-series and holonomic series: the modular functions λ and h, the
//! level-6 hauptmodul, Eichler and Zagier series, the pure functions B₁–B₇ and J,
//! the log-product system, and annihilator fitting by exact linear algebra.

mod tables;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, factorial, fmt_q, ln_q, q, qi, Q};
use crate::error::{Error, Result};
use crate::linalg::{kernel_certified, primitive_integer_vector};
use crate::poly::Poly;
use crate::series::{DenominatorWitness, FormalSeries, Sign};

/// Which nome a q-expansion is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QConvention {
    /// `q = e^{πiτ}`.
    HalfPeriod,
    /// `q = e^{2πiτ}`.
    FullPeriod,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QExpansion {
    pub series: FormalSeries,
    pub convention: QConvention,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModularFunction {
    Lambda,
    H,
}

// Integer series used for eta products.

fn imul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().min(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().take(n).enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().take(n - i).enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn ipow(a: &[BigInt], mut k: u32) -> Vec<BigInt> {
    let mut acc = vec![BigInt::zero(); a.len()];
    if !acc.is_empty() {
        acc[0] = BigInt::one();
    }
    let mut base = a.to_vec();
    while k > 0 {
        if k & 1 == 1 {
            acc = imul(&acc, &base);
        }
        k >>= 1;
        if k > 0 {
            base = imul(&base, &base);
        }
    }
    acc
}

/// Inverse of an integer series with constant term 1.
fn iinv(a: &[BigInt]) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::with_capacity(a.len());
    for k in 0..a.len() {
        if k == 0 {
            out.push(BigInt::one());
            continue;
        }
        let mut s = BigInt::zero();
        for j in 1..=k {
            if !a[j].is_zero() {
                s += &a[j] * &out[k - j];
            }
        }
        out.push(-s);
    }
    out
}

/// `∏_{n≥1} (1 − q^{kn})` by the pentagonal number theorem.
fn euler_product(k: usize, order: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); order];
    if order == 0 {
        return out;
    }
    out[0] = BigInt::one();
    for j in 1i64.. {
        let p1 = (j * (3 * j - 1) / 2) as usize * k;
        let p2 = (j * (3 * j + 1) / 2) as usize * k;
        if p1 >= order {
            break;
        }
        let s = if j % 2 == 0 { 1 } else { -1 };
        out[p1] += s;
        if p2 < order {
            out[p2] += s;
        }
    }
    out
}

/// `q^shift ∏_k ∏_n (1 − q^{kn})^{e_k}` to `order` coefficients.
pub fn eta_quotient(factors: &[(usize, i32)], shift: usize, order: usize) -> Vec<BigInt> {
    let inner = order.saturating_sub(shift);
    let mut acc = vec![BigInt::zero(); inner];
    if inner > 0 {
        acc[0] = BigInt::one();
    }
    for &(k, e) in factors {
        let base = euler_product(k, inner);
        let p = ipow(&base, e.unsigned_abs());
        acc = imul(&acc, &if e < 0 { iinv(&p) } else { p });
    }
    let mut out = vec![BigInt::zero(); shift.min(order)];
    out.extend(acc);
    out
}

fn int_series(c: Vec<BigInt>, label: &str) -> FormalSeries {
    FormalSeries::new(c.into_iter().map(Q::from_integer).collect(), label)
}

/// Exact q-expansions: `λ = 16q∏((1+q^{2n})/(1+q^{2n−1}))⁸` in `q = e^{πiτ}` and
/// `h = −256q∏(1+qⁿ)²⁴` in `q = e^{2πiτ}`.
pub fn modular_q_series(which: ModularFunction, order: usize) -> Result<QExpansion> {
    if order < 2 {
        return Err(Error::Domain(format!("order must be >= 2, got {order}")));
    }
    match which {
        ModularFunction::Lambda => {
            // 16q E(q)⁸E(q⁴)¹⁶/E(q²)²⁴
            let c = eta_quotient(&[(1, 8), (4, 16), (2, -24)], 1, order);
            let c = c.into_iter().map(|x| x * 16).collect();
            Ok(QExpansion {
                series: int_series(c, "q"),
                convention: QConvention::HalfPeriod,
            })
        }
        ModularFunction::H => {
            // −256q (E(q²)/E(q))²⁴
            let c = eta_quotient(&[(2, 24), (1, -24)], 1, order);
            let c = c.into_iter().map(|x| x * -256).collect();
            Ok(QExpansion {
                series: int_series(c, "q"),
                convention: QConvention::FullPeriod,
            })
        }
    }
}

/// The level-6 hauptmodul `x(q) = q∏(1−qⁿ)⁴(1−q⁶ⁿ)⁸/((1−q²ⁿ)⁸(1−q³ⁿ)⁴)` and its inverse `q(x)`.
pub fn hauptmodul6(order: usize) -> Result<(QExpansion, FormalSeries)> {
    if order < 4 {
        return Err(Error::Domain(format!("order must be >= 4, got {order}")));
    }
    let c = eta_quotient(&[(1, 4), (6, 8), (2, -8), (3, -4)], 1, order);
    let x = int_series(c, "q");
    let inv = x.reverse()?.with_label("x");
    Ok((
        QExpansion {
            series: x,
            convention: QConvention::FullPeriod,
        },
        inv,
    ))
}

/// The character mod 3.
pub fn chi3(n: u64) -> i64 {
    match n % 3 {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// `Σ_{d|n} χ₋₃(d)·d²`.
fn sigma_chi(n: u64) -> i64 {
    divisors(n).iter().map(|&d| chi3(d) * (d * d) as i64).sum()
}

/// The Eichler series `A`, `B`, `C` from their divisor-sum formulas.
pub fn eichler_series(order: usize) -> Result<(QExpansion, QExpansion, QExpansion)> {
    if order < 6 {
        return Err(Error::Domain(format!("order must be >= 6, got {order}")));
    }
    let chi_sum = |n: u64| divisors(n).iter().map(|&d| chi3(d)).sum::<i64>();
    let a = FormalSeries::from_fn(order, "q", |n| {
        let n = n as u64;
        if n == 0 {
            return qi(1);
        }
        let mut s = 3 * chi_sum(n);
        if n % 2 == 0 {
            s += 3 * chi_sum(n / 2);
        }
        qi(s)
    });
    let b = FormalSeries::from_fn(order, "q", |n| {
        let n = n as u64;
        let mut s = Q::zero();
        for d in divisors(n) {
            let c = chi3(d);
            if c != 0 {
                // qᵈ/(1+qᵈ) contributes (−1)^{n/d+1} at qⁿ.
                let sign = if (n / d) % 2 == 1 { 1 } else { -1 };
                s += q(c * sign, (d * d) as i64);
            }
        }
        s
    });
    let c = FormalSeries::from_fn(order, "q", |n| {
        let n = n as u64;
        if n == 0 {
            return Q::zero();
        }
        let mut s = q(sigma_chi(n), (n * n) as i64);
        if n % 2 == 0 {
            let m = n / 2;
            s -= q(sigma_chi(m), 4 * (m * m) as i64);
        }
        s
    });
    let wrap = |series| QExpansion {
        series,
        convention: QConvention::FullPeriod,
    };
    Ok((wrap(a), wrap(b), wrap(c)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZagierSeries {
    pub h_a: FormalSeries,
    pub h_b: FormalSeries,
    pub h_c: FormalSeries,
    /// `Sym⁺ H_A` in `y = x²/(x−1)`.
    pub g_a: FormalSeries,
}

/// `H_A = A(q(x))`, `H_B = B·A`, `H_C = C·A` in the hauptmodul coordinate `x`, and `G_A`.
pub fn zagier_series(order: usize) -> Result<ZagierSeries> {
    if order < 5 {
        return Err(Error::Domain(format!("order must be >= 5, got {order}")));
    }
    let (_, qx) = hauptmodul6(order)?;
    let (a, b, c) = eichler_series(order)?;
    let h_a = a.series.compose(&qx)?.with_label("x");
    let h_b = b.series.compose(&qx)?.with_label("x").mul(&h_a)?;
    let h_c = c.series.compose(&qx)?.with_label("x").mul(&h_a)?;
    let g_a = h_a.symmetrize(Sign::Plus);
    Ok(ZagierSeries { h_a, h_b, h_c, g_a })
}

/// `Σ_k C(n,k)² C(2k,k)`.
pub fn zagier_a_closed(n: u64) -> BigInt {
    let n = n as i64;
    (0..=n)
        .map(|k| binomial(n, k).pow(2) * binomial(2 * k, k))
        .sum()
}

/// `a_0, …, a_n` of the closed form, with binomials updated incrementally.
pub fn zagier_a_closed_upto(n: u64) -> Vec<BigInt> {
    let central: Vec<BigInt> = (0..=n as i64).map(|k| binomial(2 * k, k)).collect();
    (0..=n)
        .map(|m| {
            let mut c = BigInt::one();
            let mut s = BigInt::zero();
            for k in 0..=m {
                s += &c * &c * &central[k as usize];
                c = c * BigInt::from(m - k) / BigInt::from(k + 1);
            }
            s
        })
        .collect()
}

/// `G_A` to `y`-order `y_order`, from the closed form of `H_A` rather than the modular route.
pub fn zagier_g_a_closed(y_order: usize) -> Result<FormalSeries> {
    if y_order < 2 {
        return Err(Error::Domain(format!("order must be >= 2, got {y_order}")));
    }
    let a = zagier_a_closed_upto(2 * y_order as u64 - 2);
    let h = FormalSeries::new(a.into_iter().map(Q::from_integer).collect(), "x");
    Ok(h.symmetrize(Sign::Plus))
}

/// The order-4 operator annihilating the Zagier `G_A`, with coefficients in `y`.
pub fn zagier_explicit_ode() -> OdeOperator {
    let c0 = Poly::from_ints(&[3, 126, -712, 360]).scale(&qi(-18));
    let c1 = Poly::from_ints(&[-2, -2761, 141632, -280328, 176412, -95616, 20736]).scale(&qi(2));
    let c2 =
        Poly::from_ints(&[0, -34, -6353, 690355, -1065613, 867876, -438336, 72576]).scale(&qi(2));
    let y_minus_4 = Poly::from_ints(&[-4, 1]);
    let y = Poly::monomial(qi(1), 1);
    let c3 = y_minus_4
        .mul(&y.pow(2))
        .mul(&Poly::from_ints(&[
            10, 204, -118195, 146946, -142848, 41472,
        ]))
        .scale(&qi(2));
    let c4 = y_minus_4
        .pow(2)
        .mul(&y.pow(3))
        .mul(&Poly::from_ints(&[1, 72]))
        .mul(&Poly::from_ints(&[-1, 118, -122, 144]));
    OdeOperator::new("y", vec![c0, c1, c2, c3, c4], None)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureFunctions {
    /// `B₁, …, B₇` in `y`.
    pub b: Vec<FormalSeries>,
    /// `x·₃F₂(½,1,1; 3/2,3/2; y/4)` re-expanded in `x`.
    pub j: FormalSeries,
}

fn fact_q(n: u64) -> Q {
    Q::from_integer(factorial(n))
}

/// The pure functions to `order` coefficients each.
pub fn pure_functions(order: usize) -> Result<PureFunctions> {
    if order < 5 {
        return Err(Error::Domain(format!("order must be >= 5, got {order}")));
    }
    let b1 = FormalSeries::constant(qi(1), order, "y");
    let b2 = FormalSeries::from_fn(order, "y", |n| {
        if n < 2 {
            return Q::zero();
        }
        let n = n as u64;
        qi(2) * fact_q(n - 2) * fact_q(n) / fact_q(2 * n)
    });
    let b3 = FormalSeries::from_fn(order, "y", |n| {
        if n == 0 {
            return Q::zero();
        }
        let n = n as u64;
        fact_q(n - 1).pow(2) / fact_q(2 * n)
    });
    let li2 = FormalSeries::from_fn(2 * order, "x", |n| {
        if n == 0 {
            Q::zero()
        } else {
            q(1, (n * n) as i64)
        }
    });
    let b4 = li2.symmetrize(Sign::Minus).truncate(order);
    let b5 = FormalSeries::from_fn(order, "y", |n| {
        if n == 0 {
            return Q::zero();
        }
        let n = n as u64;
        fact_q(n - 1).pow(2) / (fact_q(2 * n - 1) * qi(2 * n as i64 - 1))
    });
    let b6 = b3.integrate_family(0)?;
    let b7 = b4.integrate_family(0)?;
    Ok(PureFunctions {
        b: vec![b1, b2, b3, b4, b5, b6, b7],
        j: j_series(order),
    })
}

/// `Σ_{n≤terms} b_n 4ⁿ` for `B₅`, by the term ratio `2n(2n−1)/(2n+1)²`. With `tail`,
/// adds `√π Σ_{n>terms} n^{−3/2}(1 + 5/(8n))` from the Stirling expansion of the terms.
pub fn b5_at_four(terms: usize, tail: bool) -> f64 {
    let mut t = 4.0;
    let mut sum = 0.0;
    for n in 1..=terms {
        sum += t;
        let nf = n as f64;
        t *= 2.0 * nf * (2.0 * nf - 1.0) / ((2.0 * nf + 1.0) * (2.0 * nf + 1.0));
    }
    if tail {
        let x = terms as f64 + 0.5;
        sum += std::f64::consts::PI.sqrt() * (2.0 / x.sqrt() + 5.0 / 12.0 * x.powf(-1.5));
    }
    sum
}

/// `J(x) = x·Σ_n n!²/((2n+1)(2n+1)!)·yⁿ` with `yⁿ = (−1)ⁿx²ⁿ(1−x)^{−n}`.
pub fn j_series(order: usize) -> FormalSeries {
    let t: Vec<Q> = (0..order as u64)
        .map(|n| fact_q(n).pow(2) / (qi(2 * n as i64 + 1) * fact_q(2 * n + 1)))
        .collect();
    FormalSeries::from_fn(order, "x", |m| {
        if m == 0 {
            return Q::zero();
        }
        let m = (m - 1) as i64;
        let mut acc = Q::zero();
        for n in 0..=m / 2 {
            let k = m - 2 * n;
            let c = if n == 0 {
                BigInt::from((k == 0) as i64)
            } else {
                binomial(n + k - 1, k)
            };
            if c.is_zero() {
                continue;
            }
            let term = &t[n as usize] * Q::from_integer(c);
            if n % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    })
}

/// `(1−x)^{−½} ∫₀ˣ log(1−t)/(t√(1−t)) dt`, which spans the same space as `J` over ℚ(x).
pub fn j_integral_form(order: usize) -> FormalSeries {
    let s = FormalSeries::binomial_power(&q(-1, 2), order, "x");
    let log_over_t = FormalSeries::from_fn(order, "x", |k| -q(1, k as i64 + 1));
    let inner = log_over_t
        .mul(&s)
        .expect("same label")
        .integral()
        .truncate(order);
    s.mul(&inner).expect("same label")
}

/// Denominator types of the pure functions (indexed by `y`-degree) and of `J`.
pub fn pure_function_witnesses(checked_upto: usize) -> Vec<(&'static str, DenominatorWitness)> {
    let w =
        |b: &[i64], e| DenominatorWitness::new(b.iter().map(|&x| qi(x)).collect(), e, checked_upto);
    vec![
        ("B2", w(&[2], 0)),
        ("B3", w(&[2], 1)),
        ("B4", w(&[2, 2], 0)),
        ("B5", w(&[2, 2], 0)),
        ("B6", w(&[2], 2)),
        ("B7", w(&[2, 2], 1)),
        ("J", w(&[1, 1], 0)),
    ]
}

/// A linear differential operator `Σ cᵢ(t)·dⁱ/dtⁱ` with polynomial coefficients,
/// optionally with a polynomial right-hand side.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeOperator {
    pub variable: String,
    pub coefficients: Vec<Poly>,
    pub inhomogeneity: Option<Poly>,
}

impl OdeOperator {
    pub fn new(
        variable: impl Into<String>,
        coefficients: Vec<Poly>,
        inhomogeneity: Option<Poly>,
    ) -> Self {
        OdeOperator {
            variable: variable.into(),
            coefficients,
            inhomogeneity,
        }
    }

    pub fn order(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn leading(&self) -> &Poly {
        self.coefficients.last().expect("operator has coefficients")
    }

    /// `Σ cᵢ f⁽ⁱ⁾`, known to `f.order() − order` coefficients.
    pub fn apply(&self, f: &FormalSeries) -> Result<FormalSeries> {
        let r = self.order();
        if f.order() <= r {
            return Err(Error::Truncation {
                need: r + 1,
                have: f.order(),
            });
        }
        let n = f.order() - r;
        let mut out = vec![Q::zero(); n];
        let mut d = f.clone();
        for c in &self.coefficients {
            for (k, ck) in c.coeffs().iter().enumerate() {
                if ck.is_zero() {
                    continue;
                }
                for m in k..n {
                    let a = d.coeff(m - k);
                    if !a.is_zero() {
                        out[m] += ck * a;
                    }
                }
            }
            d = d.derivative();
        }
        Ok(FormalSeries::new(out, f.label()))
    }

    /// `L(f)` minus the right-hand side.
    pub fn residual(&self, f: &FormalSeries) -> Result<FormalSeries> {
        let mut l = self.apply(f)?;
        if let Some(p) = &self.inhomogeneity {
            let rhs = FormalSeries::from_fn(l.order(), f.label(), |k| p.coeff(k));
            l = l.sub(&rhs)?;
        }
        Ok(l)
    }

    pub fn annihilates(&self, f: &FormalSeries) -> Result<bool> {
        Ok(self.residual(f)?.is_zero())
    }

    /// True when the coefficient lists agree up to one nonzero rational factor.
    pub fn proportional(&self, other: &OdeOperator) -> bool {
        if self.coefficients.len() != other.coefficients.len() {
            return false;
        }
        let flat = |o: &OdeOperator| {
            let w = o
                .coefficients
                .iter()
                .map(|c| c.coeffs().len())
                .max()
                .unwrap_or(0);
            let mut v = Vec::new();
            for c in &o.coefficients {
                v.extend((0..w).map(|k| c.coeff(k)));
            }
            v
        };
        let (a, b) = (flat(self), flat(other));
        if a.len() != b.len() {
            return false;
        }
        let Some(i) = a.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        if b[i].is_zero() {
            return false;
        }
        let ratio = &b[i] / &a[i];
        a.iter().zip(&b).all(|(x, y)| &(x * &ratio) == y)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let poly = |p: &Poly| {
            serde_json::Value::Array(p.coeffs().iter().map(|c| fmt_q(c).into()).collect())
        };
        serde_json::json!({
            "variable": self.variable,
            "order": self.order(),
            "coefficients": self.coefficients.iter().map(poly).collect::<Vec<_>>(),
            "inhomogeneity": self.inhomogeneity.as_ref().map(poly),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Annihilator {
    Found(OdeOperator),
    /// Full rank at every order up to the cap: no operator exists within the caps.
    NoneWithin {
        order_cap: usize,
        degree_cap: usize,
    },
}

impl Annihilator {
    pub fn operator(&self) -> Option<&OdeOperator> {
        match self {
            Annihilator::Found(op) => Some(op),
            Annihilator::NoneWithin { .. } => None,
        }
    }
}

/// Safety margin of equations beyond the number of unknowns.
pub const ANNIHILATOR_MARGIN: usize = 50;

/// Searches orders `0..=order_cap` for `Σ cᵢ(t) f⁽ⁱ⁾ = 0` with `deg cᵢ ≤ degree_cap`,
/// returning the first (minimal-order) operator as a primitive integer vector.
pub fn annihilator(f: &FormalSeries, order_cap: usize, degree_cap: usize) -> Result<Annihilator> {
    let need = (order_cap + 1) * (degree_cap + 1) + ANNIHILATOR_MARGIN;
    if f.order() < need {
        return Err(Error::Truncation {
            need,
            have: f.order(),
        });
    }
    let n = f.order();
    let mut derivs = vec![f.clone()];
    for _ in 0..order_cap {
        let next = derivs.last().expect("nonempty").derivative();
        derivs.push(next);
    }
    for r in 0..=order_cap {
        let ncols = (r + 1) * (degree_cap + 1);
        let rows: Vec<Vec<Q>> = (0..n - r)
            .map(|m| {
                let mut row = Vec::with_capacity(ncols);
                for d in derivs.iter().take(r + 1) {
                    for k in 0..=degree_cap {
                        row.push(if m >= k {
                            d.coeff(m - k).clone()
                        } else {
                            Q::zero()
                        });
                    }
                }
                row
            })
            .collect();
        let cert = kernel_certified(&rows)?;
        if cert.full_rank() {
            continue;
        }
        let v = cert.kernel.first().ok_or_else(|| {
            Error::Inconclusive(format!(
                "order {r}: rank deficient but no kernel vector verified"
            ))
        })?;
        let ints = primitive_integer_vector(v);
        let coefficients = ints
            .chunks(degree_cap + 1)
            .map(|c| Poly::new(c.iter().cloned().map(Q::from_integer).collect()))
            .collect::<Vec<_>>();
        if coefficients.last().is_none_or(Poly::is_zero) {
            // Leading coefficient vanishes: the relation is of lower order, already excluded.
            return Err(Error::Inconclusive(format!(
                "order {r}: kernel vector has zero leading coefficient"
            )));
        }
        return Ok(Annihilator::Found(OdeOperator::new(
            f.label(),
            coefficients,
            None,
        )));
    }
    Ok(Annihilator::NoneWithin {
        order_cap,
        degree_cap,
    })
}

// The log-product system.

/// Legendre values `u_n(a) = P_n(a)`, the coefficients of `(1 − 2ax + x²)^{−½}`.
pub fn legendre_series(a: &Q, order: usize) -> FormalSeries {
    let mut u: Vec<Q> = Vec::with_capacity(order);
    for n in 0..order {
        let v = match n {
            0 => qi(1),
            1 => a.clone(),
            _ => {
                let m = (n - 1) as i64;
                (qi(2 * m + 1) * a * &u[n - 1] - qi(m) * &u[n - 2]) / qi(m + 1)
            }
        };
        u.push(v);
    }
    FormalSeries::new(u, "x")
}

/// `H(a,x) = A(a,x)·∫₀ˣ A(a,t)dt`, the solution of `(1−2ax+x²)y′ + (x−a)y = 1` with `y(0) = 0`.
pub fn beukers_h_series(a: &Q, order: usize) -> FormalSeries {
    let mut v: Vec<Q> = Vec::with_capacity(order);
    for n in 0..order {
        let val = match n {
            0 => Q::zero(),
            1 => qi(1),
            _ => {
                let m = (n - 1) as i64;
                (qi(2 * m + 1) * a * &v[n - 1] - qi(m) * &v[n - 2]) / qi(m + 1)
            }
        };
        v.push(val);
    }
    FormalSeries::new(v, "x")
}

/// The second-order operator annihilating `A(a)⋆A(b)`, in `x`.
pub fn product_operator(a: &Q, b: &Q) -> OdeOperator {
    let ab = a * b;
    let a2 = a * a;
    let b2 = b * b;
    let quartic = Poly::new(vec![
        qi(1),
        qi(-4) * &ab,
        qi(4) * &a2 + qi(4) * &b2 - qi(2),
        qi(-4) * &ab,
        qi(1),
    ]);
    let p2 = Poly::from_ints(&[0, -1, 0, 1]).mul(&quartic);
    let p1 = Poly::new(vec![
        qi(-1),
        qi(8) * &ab,
        qi(5) - qi(12) * &a2 - qi(12) * &b2,
        qi(16) * &ab,
        qi(4) * &a2 + qi(4) * &b2 - qi(7),
        qi(-8) * &ab,
        qi(3),
    ]);
    let p0 = Poly::new(vec![
        ab.clone(),
        qi(1) - qi(3) * &a2 - qi(3) * &b2,
        qi(8) * &ab,
        -(qi(2) + &a2 + &b2),
        -ab,
        qi(1),
    ]);
    OdeOperator::new("x", vec![p0, p1, p2], None)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogProductSystem {
    pub a: i64,
    pub b: i64,
    pub u_a: FormalSeries,
    pub u_b: FormalSeries,
    pub v_a: FormalSeries,
    pub v_b: FormalSeries,
    /// `A(a)⋆A(b)`.
    pub p_a: FormalSeries,
    /// `H(a)⋆A(b)`, `A(a)⋆H(b)`, `H(a)⋆H(b)`.
    pub h_star_a: FormalSeries,
    pub a_star_h: FormalSeries,
    pub h_star_h: FormalSeries,
    pub ode: OdeOperator,
    /// `y`-images of `(a ± √(a²−1))(b ± √(b²−1))`, in the sign order `++, +−, −+, −−`.
    pub singularities: [f64; 4],
}

fn check_log_params(a: i64, b: i64) -> Result<()> {
    if a.abs() < 3 || b.abs() < 3 || a % 2 == 0 || b % 2 == 0 || a == b || a == -b {
        return Err(Error::Domain(format!(
            "need odd |a|, |b| >= 3 with a != ±b, got ({a}, {b})"
        )));
    }
    Ok(())
}

/// The series, operator and singularities attached to the pair `(a, b)`.
pub fn log_product_system(a: i64, b: i64, order: usize) -> Result<LogProductSystem> {
    check_log_params(a, b)?;
    let (qa, qb) = (qi(a), qi(b));
    let u_a = legendre_series(&qa, order);
    let u_b = legendre_series(&qb, order);
    let v_a = beukers_h_series(&qa, order);
    let v_b = beukers_h_series(&qb, order);
    Ok(LogProductSystem {
        a,
        b,
        p_a: u_a.hadamard(&u_b)?,
        h_star_a: v_a.hadamard(&u_b)?,
        a_star_h: u_a.hadamard(&v_b)?,
        h_star_h: v_a.hadamard(&v_b)?,
        ode: product_operator(&qa, &qb),
        singularities: log_singularities(a as f64, b as f64),
        u_a,
        u_b,
        v_a,
        v_b,
    })
}

/// `Sym⁺(A(a)⋆A(b))` to `y_order` coefficients.
pub fn log_product_g_a(a: i64, b: i64, y_order: usize) -> Result<FormalSeries> {
    check_log_params(a, b)?;
    let p = legendre_series(&qi(a), 2 * y_order).hadamard(&legendre_series(&qi(b), 2 * y_order))?;
    Ok(p.symmetrize(Sign::Plus).truncate(y_order))
}

/// `y = x²/(x−1)` at the four products `(a ± √(a²−1))(b ± √(b²−1))`, avoiding cancellation.
pub fn log_singularities(a: f64, b: f64) -> [f64; 4] {
    let big = |t: f64| t + t.signum() * (t * t - 1.0).sqrt();
    let (ba, bb) = (big(a), big(b));
    let (sa, sb) = ((a * a - 1.0).sqrt(), (b * b - 1.0).sqrt());
    // ba − bb without cancellation when a, b share a sign.
    let diff = if a.signum() == b.signum() {
        (a - b) + a.signum() * (a * a - b * b) / (sa + sb)
    } else {
        ba - bb
    };
    let y = |x: f64, xm1: f64| x * x / xm1;
    let (pp, mm) = (ba * bb, 1.0 / (ba * bb));
    let pm = ba / bb;
    let mp = bb / ba;
    [
        y(pp, pp - 1.0),
        y(pm, diff / bb),
        y(mp, -diff / ba),
        y(mm, mm - 1.0),
    ]
}

/// Every singularity lies in `D(0, inner)` or outside `D(0, outer)`.
pub fn singularity_screen(ys: &[f64; 4], inner: f64, outer: f64) -> bool {
    ys.iter().all(|y| y.abs() < inner || y.abs() > outer)
}

fn specialize(terms: &[(i64, u32, u32, u32)], a: &Q, b: &Q) -> Poly {
    let deg = terms.iter().map(|t| t.3 as usize).max().unwrap_or(0);
    let mut c = vec![Q::zero(); deg + 1];
    for &(k, i, j, d) in terms {
        c[d as usize] += qi(k) * a.pow(i as i32) * b.pow(j as i32);
    }
    Poly::new(c)
}

/// The quartic factor of the leading coefficient, specialized at `(a, b)`.
pub fn r4(a: &Q, b: &Q) -> Poly {
    specialize(&tables::R4_TERMS, a, b)
}

/// The degree-10 factor of the leading coefficient, specialized at `(a, b)`.
pub fn r10(a: &Q, b: &Q) -> Poly {
    specialize(&tables::R10_TERMS, a, b)
}

/// `(y−4)²y³R₄R₁₀`.
pub fn expected_leading(a: &Q, b: &Q) -> Poly {
    Poly::from_ints(&[-4, 1])
        .pow(2)
        .mul(&Poly::monomial(qi(1), 3))
        .mul(&r4(a, b))
        .mul(&r10(a, b))
}

/// Checks `c₃/c₄ = d/dy log((y−4)³y⁵R₄³/R₁₀)` by cross-multiplication.
pub fn log_derivative_identity(op: &OdeOperator, a: &Q, b: &Q) -> bool {
    if op.order() != 4 {
        return false;
    }
    let (c3, c4) = (&op.coefficients[3], &op.coefficients[4]);
    let (p4, p10) = (r4(a, b), r10(a, b));
    let ym4 = Poly::from_ints(&[-4, 1]);
    let y = Poly::monomial(qi(1), 1);
    let base = ym4.mul(&y).mul(&p4).mul(&p10);
    let lhs = c3.mul(&base);
    let rhs = y
        .mul(&p4)
        .mul(&p10)
        .scale(&qi(3))
        .add(&ym4.mul(&p4).mul(&p10).scale(&qi(5)))
        .add(&ym4.mul(&y).mul(&p4.derivative()).mul(&p10).scale(&qi(3)))
        .sub(&ym4.mul(&y).mul(&p4).mul(&p10.derivative()));
    lhs == c4.mul(&rhs)
}

/// Exponential growth rates `|c_n|^{1/n}` at index `n` for the raw product and the
/// overconvergent combinations, with `η` approximated by `v_N/u_N`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OverconvergenceReport {
    pub n: usize,
    pub raw: f64,
    pub p_a: f64,
    pub p_b: f64,
    pub p_ab: f64,
    /// `|α₊β₊|`, `|α₋β₊|`, `|α₊β₋|` and the larger of the last two.
    pub predicted: [f64; 4],
}

pub fn overconvergence_rates(
    a: i64,
    b: i64,
    n: usize,
    n_eta: usize,
) -> Result<OverconvergenceReport> {
    check_log_params(a, b)?;
    if n_eta <= n {
        return Err(Error::Domain(
            "the η approximation index must exceed n".into(),
        ));
    }
    let len = n_eta + 1;
    let (qa, qb) = (qi(a), qi(b));
    let (ua, ub) = (legendre_series(&qa, len), legendre_series(&qb, len));
    let (va, vb) = (beukers_h_series(&qa, len), beukers_h_series(&qb, len));
    let eta_a = va.coeff(n_eta) / ua.coeff(n_eta);
    let eta_b = vb.coeff(n_eta) / ub.coeff(n_eta);
    let da = va.coeff(n) - &eta_a * ua.coeff(n);
    let db = vb.coeff(n) - &eta_b * ub.coeff(n);
    let pab = va.coeff(n) * vb.coeff(n) - &eta_a * &eta_b * ua.coeff(n) * ub.coeff(n);
    let rate = |c: &Q| (ln_q(&c.abs()) / n as f64).exp();
    let big = |t: f64| t.abs() + (t * t - 1.0).sqrt();
    let (ap, bp) = (big(a as f64), big(b as f64));
    let (am, bm) = (1.0 / ap, 1.0 / bp);
    Ok(OverconvergenceReport {
        n,
        raw: rate(&(va.coeff(n) * ub.coeff(n))),
        p_a: rate(&(&da * ub.coeff(n))),
        p_b: rate(&(ua.coeff(n) * &db)),
        p_ab: rate(&pab),
        predicted: [ap * bp, am * bp, ap * bm, (am * bp).max(ap * bm)],
    })
}

// Jacobi's identity.

/// `Σ_{n∈ℤ} q^{n²}`.
pub fn theta3(order: usize) -> FormalSeries {
    let mut c = vec![Q::zero(); order];
    for n in 0usize.. {
        if n * n >= order {
            break;
        }
        c[n * n] += qi(if n == 0 { 1 } else { 2 });
    }
    FormalSeries::new(c, "q")
}

/// Both sides of `Σ C(2n,n)²(λ/16)ⁿ = θ₃²` as q-series.
pub fn jacobi_sides(order: usize) -> Result<(FormalSeries, FormalSeries)> {
    let lam = modular_q_series(ModularFunction::Lambda, order)?.series;
    let t = lam.scale(&q(1, 16));
    let f = FormalSeries::from_fn(order, "q", |n| {
        Q::from_integer(binomial(2 * n as i64, n as i64).pow(2))
    });
    let lhs = f.compose(&t)?;
    let th = theta3(order);
    Ok((lhs, th.mul(&th)?))
}

/// Names accepted by [`named_series`].
pub const NAMED_SERIES: [&str; 8] = ["HA", "HB", "B4", "J", "GA", "lambda", "h", "x06"];

/// Looks up a series from the registry, computed to `order` coefficients.
pub fn named_series(name: &str, order: usize) -> Result<FormalSeries> {
    let order = order.max(6);
    match name {
        "HA" => Ok(zagier_series(order)?.h_a),
        "HB" => Ok(zagier_series(order)?.h_b),
        "GA" => Ok(zagier_series(2 * order)?.g_a.truncate(order)),
        "B4" => Ok(pure_functions(order)?.b.swap_remove(3)),
        "J" => Ok(j_series(order)),
        "lambda" => Ok(modular_q_series(ModularFunction::Lambda, order)?.series),
        "h" => Ok(modular_q_series(ModularFunction::H, order)?.series),
        "x06" => Ok(hauptmodul6(order)?.0.series),
        _ => Err(Error::Parse(format!(
            "unknown series {name:?}; expected one of {}",
            NAMED_SERIES.join(", ")
        ))),
    }
}

// Shared constants.

/// Hurwitz `ζ(s, a)` for integer `s ≥ 2` by Euler–Maclaurin with 20 direct terms.
pub fn hurwitz_zeta(s: u32, a: f64) -> f64 {
    const N: usize = 20;
    // B₂, B₄, …, B₁₂.
    const BERN: [f64; 6] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
    ];
    let s_f = s as f64;
    let mut sum: f64 = (0..N).map(|k| (k as f64 + a).powf(-s_f)).sum();
    let x = N as f64 + a;
    sum += x.powf(1.0 - s_f) / (s_f - 1.0) + 0.5 * x.powf(-s_f);
    let mut rising = 1.0;
    let mut fact = 1.0;
    for (j, bj) in BERN.iter().enumerate() {
        let j = j + 1;
        // s(s+1)…(s+2j−2) / (2j)!
        rising *= if j == 1 {
            s_f
        } else {
            (s_f + 2.0 * j as f64 - 3.0) * (s_f + 2.0 * j as f64 - 2.0)
        };
        fact *= if j == 1 {
            2.0
        } else {
            (2 * j - 1) as f64 * (2 * j) as f64
        };
        sum += bj * rising / fact * x.powf(-s_f - 2.0 * j as f64 + 1.0);
    }
    sum
}

/// Catalan's constant `G = L(2, χ₋₄)`.
pub fn catalan() -> f64 {
    (hurwitz_zeta(2, 0.25) - hurwitz_zeta(2, 0.75)) / 16.0
}

/// `L(2, χ₋₃)`.
pub fn l2_chi3() -> f64 {
    (hurwitz_zeta(2, 1.0 / 3.0) - hurwitz_zeta(2, 2.0 / 3.0)) / 9.0
}

pub fn zeta2() -> f64 {
    hurwitz_zeta(2, 1.0)
}

pub fn zeta3() -> f64 {
    hurwitz_zeta(3, 1.0)
}

/// `|a_n|^{1/n}` for a rational coefficient, `0` when it vanishes.
pub fn root_test(a: &Q, n: usize) -> f64 {
    if a.is_zero() || n == 0 {
        return 0.0;
    }
    (ln_q(&a.abs()) / n as f64).exp()
}

/// Integer check for every coefficient of an integer-valued series.
pub fn is_integral(f: &FormalSeries) -> bool {
    f.coeffs().iter().all(|c| c.is_integer())
}

/// Checks `[1..n]·v_n ∈ ℤ` for `n < f.order()`.
pub fn lcm_clears(f: &FormalSeries, power: u32) -> bool {
    let n = f.order();
    let table = crate::arith::lcm_table(n);
    f.coeffs().iter().enumerate().all(|(k, c)| {
        let m = num_traits::pow(table[k].clone(), power as usize);
        (c * Q::from_integer(m)).is_integer()
    })
}
