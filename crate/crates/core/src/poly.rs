//! Dense univariate polynomials over ℚ.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{q_to_f64, Q};

/// Coefficients from the constant term upward, with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly(Vec<Q>);

impl Poly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&n| Q::from_integer(n.into())).collect())
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![Q::one()])
    }

    /// The monomial `c·y^k`.
    pub fn monomial(c: Q, k: usize) -> Self {
        let mut v = vec![Q::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    /// `y − r`.
    pub fn linear_root(r: Q) -> Self {
        Poly::new(vec![-r, Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.0.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, c: &Q) -> Poly {
        Poly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * Q::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, a| acc * x + a)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.0
            .iter()
            .rev()
            .fold(0.0, |acc, a| acc * x + q_to_f64(a))
    }

    pub fn eval_c64(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        self.0
            .iter()
            .rev()
            .fold(num_complex::Complex64::new(0.0, 0.0), |acc, a| {
                acc * z + q_to_f64(a)
            })
    }

    /// Euclidean division, returning `(quotient, remainder)`.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.0.len() - 1;
        let lc = d.lead();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quo = vec![Q::zero(); r.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = &r[k + dd] / &lc;
            if !c.is_zero() {
                for (j, b) in d.0.iter().enumerate() {
                    r[k + j] -= &c * b;
                }
            }
            quo[k] = c;
        }
        r.truncate(dd);
        (Poly::new(quo), Poly::new(r))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Exact quotient when `d` divides `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (qt, r) = self.divrem(d);
        r.is_zero().then_some(qt)
    }

    /// Resultant by the Euclidean recurrence over ℚ.
    pub fn resultant(&self, o: &Poly) -> Q {
        if self.is_zero() || o.is_zero() {
            return Q::zero();
        }
        let (da, db) = (self.0.len() - 1, o.0.len() - 1);
        if db == 0 {
            return num_traits::pow(o.lead(), da);
        }
        if da == 0 {
            return num_traits::pow(self.lead(), db);
        }
        let r = self.divrem(o).1;
        if r.is_zero() {
            return Q::zero();
        }
        let dr = r.0.len() - 1;
        let sign = if (da * db) % 2 == 1 {
            -Q::one()
        } else {
            Q::one()
        };
        sign * num_traits::pow(o.lead(), da - dr) * o.resultant(&r)
    }

    /// `(−1)^{n(n−1)/2} Res(f, f′)/lc(f)`.
    pub fn discriminant(&self) -> Q {
        let n = self.0.len().saturating_sub(1);
        let r = self.resultant(&self.derivative());
        let sign = if (n * n.saturating_sub(1) / 2) % 2 == 1 {
            -Q::one()
        } else {
            Q::one()
        };
        sign * r / self.lead()
    }

    /// Scales to a primitive integer polynomial with positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        use num_integer::Integer;
        if self.is_zero() {
            return Poly::zero();
        }
        let den = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| (c * Q::from_integer(den.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().is_some_and(|c| c < &BigInt::zero()) {
            g = -g;
        }
        Poly::new(ints.into_iter().map(|c| Q::from_integer(c / &g)).collect())
    }

    /// True when `self = c·o` for a nonzero rational `c`.
    pub fn proportional(&self, o: &Poly) -> bool {
        if self.is_zero() || o.is_zero() {
            return self.is_zero() && o.is_zero();
        }
        self.monic() == o.monic()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})y")?,
                _ => write!(f, "({c})y^{k}")?,
            }
        }
        Ok(())
    }
}
