//! Exact integer and rational helpers, prime sieve, and the lcm-of-segments calculus.

use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number used throughout the crate.
pub type Q = BigRational;

/// Builds `n/d` from machine integers.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer `n` as a rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"num/den"` or `"num"`, also accepting a plain decimal such as `"0.995"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches(['-', '+']), fp);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let v = Q::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

/// Formats as `"num/den"`, or `"num"` when the denominator is one.
pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

/// Natural logarithm of a positive big integer, accurate to double precision.
pub fn ln_bigint(n: &BigInt) -> f64 {
    assert!(n.is_positive(), "ln of nonpositive integer");
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of a positive rational.
pub fn ln_q(x: &Q) -> f64 {
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

/// Nearest double to a rational, safe for huge numerators and denominators.
pub fn q_to_f64(x: &Q) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    let a = x.abs();
    match (a.numer().to_f64(), a.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() && d > 0.0 => sign * n / d,
        _ => sign * ln_q(&a).exp(),
    }
}

/// Exact rational approximation of a finite double.
pub fn f64_to_q(x: f64) -> Q {
    Q::from_float(x).expect("finite float")
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Binomial coefficient `C(n, k)`, zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Harmonic number `H_n = Σ_{h=1}^{n} 1/h`.
pub fn harmonic(n: u64) -> Q {
    (1..=n).fold(Q::zero(), |acc, h| acc + q(1, h as i64))
}

/// `⌊x⌋` of a rational.
pub fn floor_q(x: &Q) -> BigInt {
    x.floor().to_integer()
}

static PRIMES: RwLock<(u64, Vec<u64>)> = RwLock::new((1, Vec::new()));

/// All primes `≤ n`, served from a cached sieve that grows on demand.
pub fn primes_upto(n: u64) -> Vec<u64> {
    {
        let cache = PRIMES.read().expect("prime cache poisoned");
        if cache.0 >= n {
            let end = cache.1.partition_point(|&p| p <= n);
            return cache.1[..end].to_vec();
        }
    }
    let limit = n.max(1024).next_power_of_two();
    let mut composite = vec![false; limit as usize + 1];
    let mut out = Vec::new();
    for i in 2..=limit as usize {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit as usize {
                composite[j] = true;
                j += i;
            }
        }
    }
    let mut cache = PRIMES.write().expect("prime cache poisoned");
    if cache.0 < limit {
        *cache = (limit, out);
    }
    let end = cache.1.partition_point(|&p| p <= n);
    cache.1[..end].to_vec()
}

/// An lcm of an integer range, optionally restricted to primes above `min_prime`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcmValue {
    pub value: BigUint,
    pub range: (u64, u64),
    pub min_prime: Option<u64>,
}

impl LcmValue {
    pub fn ln(&self) -> f64 {
        ln_bigint(&BigInt::from(self.value.clone()))
    }
}

/// Largest exponent `e` with `p^e` dividing some integer in `[lo, hi]`.
fn max_valuation_in(p: u64, lo: u64, hi: u64) -> u32 {
    let mut e = 0;
    let mut pe = p as u128;
    while pe <= hi as u128 {
        let pe64 = pe as u64;
        if hi / pe64 >= lo.div_ceil(pe64) {
            e += 1;
            pe *= p as u128;
        } else {
            break;
        }
    }
    e
}

fn lcm_range(lo: u64, hi: u64, min_prime: Option<u64>) -> BigUint {
    let floor = min_prime.unwrap_or(0);
    let mut acc = BigUint::one();
    for p in primes_upto(hi) {
        if p <= floor {
            continue;
        }
        let e = max_valuation_in(p, lo, hi);
        if e > 0 {
            acc *= BigUint::from(p).pow(e);
        }
    }
    acc
}

/// `[1, 2, …, n]`.
pub fn lcm_upto(n: u64) -> Result<LcmValue> {
    if n == 0 {
        return Err(Error::Domain("lcm_upto needs n >= 1".into()));
    }
    Ok(LcmValue {
        value: lcm_range(1, n, None),
        range: (1, n),
        min_prime: None,
    })
}

/// lcm of `{n−k, …, n}`, keeping only prime factors `> min_prime` when given.
pub fn lcm_segment(n: u64, k: u64, min_prime: Option<u64>) -> Result<LcmValue> {
    if n == 0 || k >= n {
        return Err(Error::Domain(format!(
            "lcm_segment needs 0 <= k < n, got n={n}, k={k}"
        )));
    }
    Ok(LcmValue {
        value: lcm_range(n - k, n, min_prime),
        range: (n - k, n),
        min_prime,
    })
}

/// Asymptotic exponent of `log lcm(n−γn..n) / n`:
/// `γ·H_{⌊1/γ⌋−1} + 1/⌊1/γ⌋`.
pub fn lcm_rate(gamma: &Q) -> Result<Q> {
    if !gamma.is_positive() || *gamma > Q::one() {
        return Err(Error::Domain(format!(
            "lcm_rate needs 0 < gamma <= 1, got {gamma}"
        )));
    }
    let k = floor_q(&gamma.recip());
    let k = k
        .to_u64()
        .ok_or_else(|| Error::Domain("gamma too small".into()))?;
    Ok(gamma * harmonic(k - 1) + Q::new(BigInt::one(), BigInt::from(k)))
}

/// Table `t[j] = [1..j]` for `j ≤ n`, with `t[0] = 1`.
pub fn lcm_table(n: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = BigInt::one();
    out.push(acc.clone());
    for j in 1..=n as u64 {
        acc = acc.lcm(&BigInt::from(j));
        out.push(acc.clone());
    }
    out
}
