//! Exact rank and kernel computations over ℚ.
//!
//! Small systems use rational Gauss–Jordan elimination. Large systems are
//! eliminated modulo word-size primes; a full modular rank certifies full
//! rational rank, and kernel vectors are lifted by CRT and rational
//! reconstruction, then checked exactly against the rational matrix.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::Q;
use crate::error::{Error, Result};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Q>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_exact(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Kernel basis from the RREF: one vector per free column, with that entry equal to one.
pub fn kernel_exact(rows: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    kernel_from_rref(&m, &pivots, ncols, |x| -x.clone(), Q::one, Q::zero)
}

fn kernel_from_rref<T: Clone>(
    m: &[Vec<T>],
    pivots: &[usize],
    ncols: usize,
    neg: impl Fn(&T) -> T,
    one: impl Fn() -> T,
    zero: impl Fn() -> T,
) -> Vec<Vec<T>> {
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![zero(); ncols];
            v[f] = one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = neg(&m[r][f]);
            }
            v
        })
        .collect()
}

/// Primes just below 2^62 used for modular elimination.
pub const PRIMES: [u64; 32] = [
    4611686018427387847,
    4611686018427387817,
    4611686018427387787,
    4611686018427387761,
    4611686018427387751,
    4611686018427387737,
    4611686018427387733,
    4611686018427387709,
    4611686018427387701,
    4611686018427387631,
    4611686018427387617,
    4611686018427387587,
    4611686018427387461,
    4611686018427387421,
    4611686018427387409,
    4611686018427387329,
    4611686018427387323,
    4611686018427387301,
    4611686018427387271,
    4611686018427387241,
    4611686018427387139,
    4611686018427387131,
    4611686018427387127,
    4611686018427387113,
    4611686018427387091,
    4611686018427387073,
    4611686018427386981,
    4611686018427386923,
    4611686018427386911,
    4611686018427386903,
    4611686018427386897,
    4611686018427386887,
];

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

/// Image of a rational modulo `p`, or `None` when `p` divides the denominator.
pub fn q_mod(x: &Q, p: u64) -> Option<u64> {
    let d = bigint_mod(x.denom(), p);
    if d == 0 {
        return None;
    }
    Some(mulmod(bigint_mod(x.numer(), p), invmod(d, p), p))
}

/// Row reduction modulo `p`; returns `(rref, pivots)`.
pub fn rref_mod(rows: &[Vec<u64>], p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut m = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(pr) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = invmod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    if y != 0 {
                        *x = (*x + p - mulmod(f, y, p)) % p;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

fn reduce_matrix(rows: &[Vec<Q>], p: u64) -> Option<Vec<Vec<u64>>> {
    rows.iter()
        .map(|row| row.iter().map(|x| q_mod(x, p)).collect())
        .collect()
}

/// Rank modulo a good prime. This is a lower bound for the rational rank, and it
/// equals the rational rank for all but finitely many primes.
pub fn rank_modular(rows: &[Vec<Q>]) -> usize {
    let mut best = 0;
    for &p in PRIMES.iter().take(2) {
        if let Some(m) = reduce_matrix(rows, p) {
            best = best.max(rref_mod(&m, p).1.len());
        }
    }
    best
}

/// Outcome of a certified modular rank computation.
#[derive(Debug, Clone)]
pub struct KernelCertificate {
    pub ncols: usize,
    /// A certified lower bound on the rank: the best modular rank seen.
    pub rank_lower_bound: usize,
    /// Exact kernel vectors, each checked against the rational matrix.
    pub kernel: Vec<Vec<Q>>,
}

impl KernelCertificate {
    /// The rank is pinned down exactly when the verified kernel fills the gap.
    pub fn is_exact(&self) -> bool {
        self.rank_lower_bound + self.kernel.len() == self.ncols
    }

    pub fn full_rank(&self) -> bool {
        self.rank_lower_bound == self.ncols
    }
}

/// Rational reconstruction of `a mod m` with numerator and denominator below `√(m/2)`.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Q> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let qt = &r0 / &r1;
        let r2 = &r0 - &qt * &r1;
        let t2 = &t0 - &qt * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Q::new(r1, t1))
}

fn crt_pair(a1: &BigInt, m1: &BigInt, a2: u64, p: u64) -> BigInt {
    let a1p = bigint_mod(a1, p);
    let m1p = bigint_mod(m1, p);
    let t = mulmod((a2 + p - a1p) % p, invmod(m1p, p), p);
    a1 + m1 * BigInt::from(t)
}

fn is_kernel_vector(rows: &[Vec<Q>], v: &[Q]) -> bool {
    rows.iter().all(|row| {
        let mut s = Q::zero();
        for (a, b) in row.iter().zip(v) {
            if !a.is_zero() && !b.is_zero() {
                s += a * b;
            }
        }
        s.is_zero()
    })
}

/// Certified rank and kernel: modular elimination over up to `PRIMES.len()` primes,
/// lifting the canonical RREF kernel basis until every vector checks exactly.
pub fn kernel_certified(rows: &[Vec<Q>]) -> Result<KernelCertificate> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut images: Vec<(u64, Vec<Vec<u64>>)> = Vec::new();
    let mut pivots_ref: Option<Vec<usize>> = None;
    let mut rank_lb = 0;
    for &p in PRIMES.iter() {
        let Some(m) = reduce_matrix(rows, p) else {
            continue;
        };
        let (red, piv) = rref_mod(&m, p);
        rank_lb = rank_lb.max(piv.len());
        if piv.len() == ncols {
            return Ok(KernelCertificate {
                ncols,
                rank_lower_bound: ncols,
                kernel: Vec::new(),
            });
        }
        match &pivots_ref {
            Some(pr) if piv.len() > pr.len() || (piv.len() == pr.len() && piv < *pr) => {
                // A larger or lexicographically earlier pivot set means earlier primes were unlucky.
                images.clear();
                pivots_ref = Some(piv.clone());
            }
            Some(pr) if *pr != piv => continue,
            None => pivots_ref = Some(piv.clone()),
            _ => {}
        }
        let basis = kernel_from_rref(&red, &piv, ncols, |x| (p - x) % p, || 1u64, || 0u64);
        images.push((p, basis));
        if let Some(kernel) = lift_kernel(&images, ncols) {
            if kernel.iter().all(|v| is_kernel_vector(rows, v)) {
                return Ok(KernelCertificate {
                    ncols,
                    rank_lower_bound: rank_lb,
                    kernel,
                });
            }
        }
    }
    Err(Error::Inconclusive(format!(
        "kernel lift did not verify after {} primes (rank >= {rank_lb} of {ncols})",
        PRIMES.len()
    )))
}

fn lift_kernel(images: &[(u64, Vec<Vec<u64>>)], ncols: usize) -> Option<Vec<Vec<Q>>> {
    let nvec = images[0].1.len();
    let mut out = Vec::with_capacity(nvec);
    for k in 0..nvec {
        let mut v = Vec::with_capacity(ncols);
        for c in 0..ncols {
            let mut a = BigInt::from(images[0].1[k][c]);
            let mut m = BigInt::from(images[0].0);
            for (p, basis) in &images[1..] {
                a = crt_pair(&a, &m, basis[k][c], *p);
                m *= BigInt::from(*p);
            }
            v.push(rational_reconstruct(&a, &m)?);
        }
        out.push(v);
    }
    Some(out)
}

/// Clears denominators of a rational vector and divides by the content.
pub fn primitive_integer_vector(v: &[Q]) -> Vec<BigInt> {
    let den = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|c| (c * Q::from_integer(den.clone())).to_integer())
        .collect();
    let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return ints;
    }
    if ints
        .iter()
        .rev()
        .find(|c| !c.is_zero())
        .is_some_and(|c| c.sign() == Sign::Minus)
    {
        g = -g;
    }
    ints.into_iter().map(|c| c / &g).collect()
}
