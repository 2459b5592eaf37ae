//! Truncated power series with exact rational coefficients.
//!
//! A series stores its known coefficients `a_0, …, a_{N−1}`; `N` is the
//! truncation order. Every operation returns the largest order it can prove
//! and never reads past the inputs' truncation.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{floor_q, fmt_q, lcm_table, parse_q, q, Q};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct FormalSeries {
    coeffs: Vec<Q>,
    label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComposeMode {
    Compose,
    Reverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl FormalSeries {
    pub fn new(coeffs: Vec<Q>, label: impl Into<String>) -> Self {
        FormalSeries {
            coeffs,
            label: label.into(),
        }
    }

    pub fn from_fn(order: usize, label: impl Into<String>, f: impl FnMut(usize) -> Q) -> Self {
        FormalSeries::new((0..order).map(f).collect(), label)
    }

    pub fn from_ints(ints: &[i64], label: impl Into<String>) -> Self {
        FormalSeries::new(
            ints.iter().map(|&n| Q::from_integer(n.into())).collect(),
            label,
        )
    }

    pub fn zero(order: usize, label: impl Into<String>) -> Self {
        FormalSeries::new(vec![Q::zero(); order], label)
    }

    pub fn constant(c: Q, order: usize, label: impl Into<String>) -> Self {
        let mut s = FormalSeries::zero(order, label);
        if order > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// The variable itself, `x + O(x^order)`.
    pub fn var(order: usize, label: impl Into<String>) -> Self {
        let mut s = FormalSeries::zero(order, label);
        if order > 1 {
            s.coeffs[1] = Q::one();
        }
        s
    }

    /// `Σ_{n≥0} x^n`.
    pub fn geometric(order: usize, label: impl Into<String>) -> Self {
        FormalSeries::new(vec![Q::one(); order], label)
    }

    /// `−log(1−x) = Σ_{n≥1} x^n/n`.
    pub fn neg_log1m(order: usize, label: impl Into<String>) -> Self {
        FormalSeries::from_fn(order, label, |n| {
            if n == 0 {
                Q::zero()
            } else {
                q(1, n as i64)
            }
        })
    }

    /// `(1−x)^α` for rational `α`.
    pub fn binomial_power(alpha: &Q, order: usize, label: impl Into<String>) -> Self {
        let mut c = Vec::with_capacity(order);
        let mut cur = Q::one();
        for n in 0..order {
            if n > 0 {
                cur = cur * (Q::from_integer((n as i64 - 1).into()) - alpha) / q(n as i64, 1);
            }
            c.push(cur.clone());
        }
        FormalSeries::new(c, label)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Q> {
        self.coeffs
    }

    /// Coefficient of `x^n`; `None` beyond the truncation.
    pub fn get(&self, n: usize) -> Option<&Q> {
        self.coeffs.get(n)
    }

    pub fn coeff(&self, n: usize) -> &Q {
        &self.coeffs[n]
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn truncate(mut self, order: usize) -> Self {
        self.coeffs.truncate(order);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check_label(&self, other: &Self) -> Result<()> {
        if self.label != other.label {
            return Err(Error::Domain(format!(
                "series variables differ: {} vs {}",
                self.label, other.label
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_label(other)?;
        let n = self.order().min(other.order());
        Ok(FormalSeries::from_fn(n, &self.label, |i| {
            &self.coeffs[i] + &other.coeffs[i]
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_label(other)?;
        let n = self.order().min(other.order());
        Ok(FormalSeries::from_fn(n, &self.label, |i| {
            &self.coeffs[i] - &other.coeffs[i]
        }))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_label(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// Convolution over a common denominator: integer products, one reduction per coefficient.
    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let (a, da) = integer_parts(&self.coeffs[..n]);
        let (b, db) = integer_parts(&other.coeffs[..n]);
        let mut out = vec![BigInt::zero(); n];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().take(n - i).enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        let den = da * db;
        let coeffs = out.into_iter().map(|c| Q::new(c, den.clone())).collect();
        FormalSeries::new(coeffs, self.label.clone())
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.order();
        let a0 = self
            .coeffs
            .first()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| Error::Domain("inverse of a series with zero constant term".into()))?;
        let inv0 = a0.recip();
        let mut out: Vec<Q> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for k in 1..n {
            let mut s = Q::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    s += &self.coeffs[j] * &out[k - j];
                }
            }
            out.push(-s * &inv0);
        }
        Ok(FormalSeries::new(out, self.label.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_label(other)?;
        Ok(self.mul_unchecked(&other.inverse()?))
    }

    pub fn ring(op: RingOp, f: &Self, g: &Self) -> Result<Self> {
        match op {
            RingOp::Add => f.add(g),
            RingOp::Sub => f.sub(g),
            RingOp::Mul => f.mul(g),
            RingOp::Div => f.div(g),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        FormalSeries::new(
            self.coeffs.iter().map(|a| a * c).collect(),
            self.label.clone(),
        )
    }

    pub fn neg(&self) -> Self {
        FormalSeries::new(self.coeffs.iter().map(|a| -a).collect(), self.label.clone())
    }

    /// Multiplies by `x^k`, extending the truncation by `k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut c = vec![Q::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        FormalSeries::new(c, self.label.clone())
    }

    /// Term-by-term derivative; loses one order.
    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, a)| a * Q::from_integer(BigInt::from(n)))
            .collect();
        FormalSeries::new(c, self.label.clone())
    }

    /// Antiderivative with zero constant term; gains one order.
    pub fn integral(&self) -> Self {
        let mut c = Vec::with_capacity(self.order() + 1);
        c.push(Q::zero());
        for (n, a) in self.coeffs.iter().enumerate() {
            c.push(a / Q::from_integer(BigInt::from(n + 1)));
        }
        FormalSeries::new(c, self.label.clone())
    }

    /// `θ = x d/dx`, which keeps the truncation.
    pub fn theta(&self) -> Self {
        FormalSeries::from_fn(self.order(), &self.label, |n| {
            &self.coeffs[n] * Q::from_integer(n.into())
        })
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = FormalSeries::constant(Q::one(), self.order(), &self.label);
        for _ in 0..k {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// `f(g(x))` for `g(0) = 0`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if g.coeffs.first().is_some_and(|c| !c.is_zero()) {
            return Err(Error::Domain("compose needs g(0) = 0".into()));
        }
        let n = if g.order() == 0 {
            self.order().min(1)
        } else {
            self.order().min(g.order())
        };
        let g = FormalSeries::new(
            g.coeffs.iter().take(n).cloned().collect(),
            self.label.clone(),
        );
        let mut acc = FormalSeries::zero(n, &self.label);
        for a in self.coeffs.iter().take(n).rev() {
            acc = acc.mul_unchecked(&g);
            if n > 0 {
                acc.coeffs[0] += a;
            }
        }
        Ok(acc)
    }

    /// Compositional inverse of a series with `g(0) = 0`, `g'(0) ≠ 0`, by Lagrange inversion.
    pub fn reverse(&self) -> Result<Self> {
        let n = self.order();
        if n < 2 || !self.coeffs[0].is_zero() || self.coeffs[1].is_zero() {
            return Err(Error::Domain(
                "reverse needs g(0) = 0 and g'(0) != 0".into(),
            ));
        }
        // h = g/x, then [x^k] g^{-1} = (1/k) [x^{k−1}] h^{−k}.
        let h = FormalSeries::new(self.coeffs[1..].to_vec(), self.label.clone());
        let hinv = h.inverse()?;
        let mut out = vec![Q::zero(); n];
        let mut p = FormalSeries::constant(Q::one(), n - 1, &self.label);
        for k in 1..n {
            p = p.mul_unchecked(&hinv);
            out[k] = &p.coeffs[k - 1] / Q::from_integer(BigInt::from(k));
        }
        Ok(FormalSeries::new(out, self.label.clone()))
    }

    pub fn compose_mode(f: &Self, g: &Self, mode: ComposeMode) -> Result<Self> {
        match mode {
            ComposeMode::Compose => f.compose(g),
            ComposeMode::Reverse => g.reverse(),
        }
    }

    /// Coefficientwise product `Σ a_n b_n x^n`.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.check_label(other)?;
        let n = self.order().min(other.order());
        Ok(FormalSeries::from_fn(n, &self.label, |i| {
            &self.coeffs[i] * &other.coeffs[i]
        }))
    }

    /// `∫ (f − jet_k f)/x^{k+1} dx` for `k ≥ 0`, and `∫ x·f dx` for `k = −1`.
    pub fn integrate_family(&self, k: i64) -> Result<Self> {
        if k < -1 {
            return Err(Error::Domain(format!("pole order must be >= -1, got {k}")));
        }
        let need = (k + 2) as usize;
        if self.order() < need {
            return Err(Error::Truncation {
                need,
                have: self.order(),
            });
        }
        if k == -1 {
            let mut c = vec![Q::zero(); 2];
            for (n, a) in self.coeffs.iter().enumerate() {
                c.push(a / Q::from_integer(BigInt::from(n + 2)));
            }
            return Ok(FormalSeries::new(c, self.label.clone()));
        }
        let k = k as usize;
        let order = self.order() - k;
        Ok(FormalSeries::from_fn(order, &self.label, |m| {
            if m == 0 {
                Q::zero()
            } else {
                &self.coeffs[m + k] / Q::from_integer(BigInt::from(m))
            }
        }))
    }

    /// `f(x/(x−1))`.
    pub fn w_substitute(&self) -> Self {
        let w = FormalSeries::from_fn(self.order(), &self.label, |n| {
            if n == 0 {
                Q::zero()
            } else {
                -Q::one()
            }
        });
        self.compose(&w).expect("w(0) = 0")
    }

    /// Descent to `y = x²/(x−1)`: `F⁺(y) = f(x) + f(w)` or `F⁻(y) = (x − w)(f(x) − f(w))`,
    /// with `w = x/(x−1)`.
    pub fn symmetrize(&self, sign: Sign) -> Self {
        let m = self.order();
        let ny = match sign {
            Sign::Plus => m.div_ceil(2),
            Sign::Minus => m / 2 + 1,
        };
        let kmax = match sign {
            Sign::Plus => m,
            Sign::Minus => m + 1,
        };
        let p = sym_polys(kmax, ny);
        let mut out = vec![Q::zero(); ny];
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            match sign {
                Sign::Plus => add_poly(&mut out, a, &p[k], 0),
                Sign::Minus => {
                    if k == 0 {
                        continue;
                    }
                    add_poly(&mut out, a, &p[k + 1], 0);
                    add_poly(&mut out, &-a, &p[k - 1], 1);
                }
            }
        }
        FormalSeries::new(out, "y")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.coeffs.iter().map(|c| fmt_q(c).into()).collect())
    }

    pub fn from_json(v: &serde_json::Value, label: impl Into<String>) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("series JSON must be an array".into()))?;
        let coeffs = arr
            .iter()
            .map(|x| match x {
                serde_json::Value::String(s) => parse_q(s),
                serde_json::Value::Number(n) => parse_q(&n.to_string()),
                _ => Err(Error::Parse(format!("bad coefficient {x}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FormalSeries::new(coeffs, label))
    }

    /// Partial sum at a real point, for numerical sanity checks.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + crate::arith::q_to_f64(c))
    }
}

/// Integer numerators over the least common denominator.
fn integer_parts(c: &[Q]) -> (Vec<BigInt>, BigInt) {
    use num_integer::Integer;
    let den = c.iter().fold(BigInt::one(), |acc, x| {
        if x.denom().is_one() {
            acc
        } else {
            acc.lcm(x.denom())
        }
    });
    let ints = c
        .iter()
        .map(|x| {
            if x.denom().is_one() {
                x.numer() * &den
            } else {
                x.numer() * (&den / x.denom())
            }
        })
        .collect();
    (ints, den)
}

fn add_poly(out: &mut [Q], a: &Q, poly: &[BigInt], shift: usize) {
    for (d, c) in poly.iter().enumerate() {
        let idx = d + shift;
        if idx >= out.len() {
            break;
        }
        if !c.is_zero() {
            out[idx] += a * Q::from_integer(c.clone());
        }
    }
}

/// `P_k(y) = x^k + w^k` for `k ≤ kmax`, truncated to degree `< ny`, via
/// `P_k = y P_{k−1} − y P_{k−2}`, `P_0 = 2`, `P_1 = y`.
pub fn sym_polys(kmax: usize, ny: usize) -> Vec<Vec<BigInt>> {
    let mut p: Vec<Vec<BigInt>> = Vec::with_capacity(kmax + 1);
    let width = ny.max(1);
    let mut p0 = vec![BigInt::zero(); width];
    p0[0] = BigInt::from(2);
    p.push(p0);
    if kmax >= 1 {
        let mut p1 = vec![BigInt::zero(); width];
        if width > 1 {
            p1[1] = BigInt::one();
        }
        p.push(p1);
    }
    for k in 2..=kmax {
        let mut pk = vec![BigInt::zero(); width];
        for d in 1..width {
            pk[d] = &p[k - 1][d - 1] - &p[k - 2][d - 1];
        }
        p.push(pk);
    }
    p
}

impl fmt::Debug for FormalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FormalSeries[{}; O({}^{})](",
            self.label,
            self.label,
            self.order()
        )?;
        for (i, c) in self.coeffs.iter().take(8).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        if self.order() > 8 {
            write!(f, ", …")?;
        }
        write!(f, ")")
    }
}

/// A denominator template `n^e · ∏_h [1, …, ⌊b_h n⌋ + c_h]` and the outcome of checking it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenominatorWitness {
    pub b_row: Vec<Q>,
    pub e_power: u32,
    pub shift_allowances: Vec<i64>,
    pub checked_upto: usize,
    pub first_violation: Option<usize>,
}

impl DenominatorWitness {
    pub fn new(b_row: Vec<Q>, e_power: u32, checked_upto: usize) -> Self {
        let shifts = vec![0; b_row.len()];
        DenominatorWitness {
            b_row,
            e_power,
            shift_allowances: shifts,
            checked_upto,
            first_violation: None,
        }
    }

    pub fn with_shifts(mut self, shifts: Vec<i64>) -> Self {
        assert_eq!(shifts.len(), self.b_row.len(), "one shift per b entry");
        self.shift_allowances = shifts;
        self
    }

    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }

    /// The clearing multiplier for index `n`.
    pub fn multiplier(&self, n: usize, table: &[BigInt]) -> BigInt {
        let mut m = num_traits::pow(BigInt::from(n), self.e_power as usize);
        for (b, c) in self.b_row.iter().zip(&self.shift_allowances) {
            let top = floor_q(&(b * q(n as i64, 1))) + BigInt::from(*c);
            if top.is_positive() {
                let idx = top.to_usize().expect("lcm index fits");
                m *= &table[idx];
            }
        }
        m
    }

    fn max_index(&self) -> usize {
        self.b_row
            .iter()
            .zip(&self.shift_allowances)
            .map(|(b, c)| {
                let top = floor_q(&(b * q(self.checked_upto as i64, 1))) + BigInt::from(*c);
                top.to_i64().unwrap_or(0).max(0) as usize
            })
            .max()
            .unwrap_or(0)
    }
}

/// Checks `a_n · n^e · ∏_h [1..⌊b_h n⌋ + c_h] ∈ ℤ` for `1 ≤ n < checked_upto`.
pub fn denominator_check(f: &FormalSeries, w: &DenominatorWitness) -> Result<DenominatorWitness> {
    if f.order() < w.checked_upto {
        return Err(Error::Truncation {
            need: w.checked_upto,
            have: f.order(),
        });
    }
    let table = lcm_table(w.max_index());
    let mut out = w.clone();
    out.first_violation = None;
    for n in 1..w.checked_upto {
        let a = f.coeff(n);
        if a.is_zero() {
            continue;
        }
        let m = w.multiplier(n, &table);
        if !(a * Q::from_integer(m)).is_integer() {
            out.first_violation = Some(n);
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qi;

    #[test]
    fn inverse_of_geometric() {
        let g = FormalSeries::geometric(10, "x");
        let one_minus_x = g.inverse().unwrap();
        assert_eq!(one_minus_x.coeff(0), &qi(1));
        assert_eq!(one_minus_x.coeff(1), &qi(-1));
        assert!(one_minus_x.coeffs()[2..].iter().all(Zero::is_zero));
    }

    #[test]
    fn reverse_roundtrip() {
        let g = FormalSeries::from_ints(&[0, 1, -4, 10, -20, 35, -56], "q");
        let h = g.reverse().unwrap();
        let id = g.compose(&h).unwrap();
        assert_eq!(id, FormalSeries::var(7, "q"));
    }

    #[test]
    fn integrate_family_cases() {
        let one = FormalSeries::constant(qi(1), 6, "y");
        assert!(one.integrate_family(0).unwrap().is_zero());
        let g = FormalSeries::geometric(6, "y");
        let s = g.integrate_family(1).unwrap();
        assert_eq!(s.order(), 5);
        assert_eq!(s.coeff(3), &q(1, 3));
        let t = g.integrate_family(-1).unwrap();
        assert_eq!(t.coeff(2), &q(1, 2));
        assert_eq!(t.order(), 8);
        assert!(g.integrate_family(-2).is_err());
    }

    #[test]
    fn symmetrize_constant_and_identity() {
        let one = FormalSeries::constant(qi(1), 9, "x");
        let s = one.symmetrize(Sign::Plus);
        assert_eq!(s.coeff(0), &qi(2));
        assert!(s.coeffs()[1..].iter().all(Zero::is_zero));
        let x = FormalSeries::var(9, "x");
        let m = x.symmetrize(Sign::Minus);
        assert_eq!(m.coeffs()[..3], [qi(0), qi(-4), qi(1)]);
    }

    #[test]
    fn json_roundtrip() {
        let s = FormalSeries::new(vec![q(1, 2), qi(-3), q(7, 9)], "x");
        let back = FormalSeries::from_json(&s.to_json(), "x").unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn label_mismatch_is_an_error() {
        let a = FormalSeries::geometric(4, "x");
        let b = FormalSeries::geometric(4, "y");
        assert!(a.add(&b).is_err());
    }
}
