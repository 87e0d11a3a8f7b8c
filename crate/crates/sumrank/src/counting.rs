//! Exact counting in the sum-rank metric: Gaussian binomials, matrices of a
//! given rank, weight decompositions and sphere sizes, plus the closed-form
//! upper bound on sphere sizes.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::{Error, Result};

/// Number of b-dimensional subspaces of GF(q)^a; zero when b > a.
pub fn gaussian_binomial(a: usize, b: usize, q: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 1..=b {
        num *= q.pow((a - b + i) as u32) - 1u32;
        den *= q.pow(i as u32) - 1u32;
    }
    num / den
}

/// Number of a x b matrices over GF(q) of rank i.
pub fn num_matrices_of_rank(a: usize, b: usize, i: usize, q: u64) -> Result<BigUint> {
    if i > a.min(b) {
        return Err(Error::InvalidParams(format!("rank {i} exceeds min({a}, {b})")));
    }
    Ok(nm(a, b, i, q))
}

fn nm(a: usize, b: usize, i: usize, q: u64) -> BigUint {
    if i > a.min(b) {
        return BigUint::zero();
    }
    let qb = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for j in 0..i {
        let qj = qb.pow(j as u32);
        num *= (qb.pow(a as u32) - &qj) * (qb.pow(b as u32) - &qj);
        den *= qb.pow(i as u32) - &qj;
    }
    num / den
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Number of ordered weight decompositions: vectors in {0..mu}^ell summing
/// to t, by inclusion-exclusion.
pub fn num_decompositions(t: usize, ell: usize, mu: usize) -> BigUint {
    if ell == 0 {
        return if t == 0 { BigUint::one() } else { BigUint::zero() };
    }
    let mut acc = BigInt::zero();
    for i in 0..=ell {
        let Some(top) = (t + ell - 1).checked_sub((mu + 1) * i) else {
            break;
        };
        let term = BigInt::from(binomial(ell, i) * binomial(top, ell - 1));
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.to_biguint().expect("count is nonnegative")
}

/// Sphere sizes N(t', ell') for all t' <= t_max and ell' <= ell_max over a
/// fixed block shape (q, eta, m).
#[derive(Clone, Debug)]
pub struct SphereTable {
    pub q: u64,
    pub eta: usize,
    pub m: usize,
    pub mu: usize,
    nm: Vec<BigUint>,
    table: Vec<Vec<BigUint>>,
}

impl SphereTable {
    pub fn new(q: u64, eta: usize, m: usize, t_max: usize, ell_max: usize) -> Self {
        let mu = eta.min(m);
        let nm: Vec<BigUint> = (0..=mu).map(|i| nm(m, eta, i, q)).collect();
        let mut table = vec![vec![BigUint::zero(); t_max + 1]];
        table[0][0] = BigUint::one();
        for l in 1..=ell_max {
            let prev = &table[l - 1];
            let row: Vec<BigUint> = (0..=t_max)
                .map(|t| {
                    (0..=mu.min(t)).fold(BigUint::zero(), |acc, i| acc + &nm[i] * &prev[t - i])
                })
                .collect();
            table.push(row);
        }
        SphereTable { q, eta, m, mu, nm, table }
    }

    pub fn t_max(&self) -> usize {
        self.table[0].len() - 1
    }

    pub fn ell_max(&self) -> usize {
        self.table.len() - 1
    }

    /// Number of vectors with `ell` blocks and sum-rank weight exactly `t`.
    pub fn get(&self, t: usize, ell: usize) -> &BigUint {
        &self.table[ell][t]
    }

    /// Number of m x eta matrices of rank i (zero beyond mu).
    pub fn block_count(&self, i: usize) -> BigUint {
        self.nm.get(i).cloned().unwrap_or_default()
    }
}

/// Number of vectors in GF(q^m)^(ell*eta) of sum-rank weight exactly t.
pub fn sphere_size(t: usize, ell: usize, q: u64, eta: usize, m: usize) -> BigUint {
    SphereTable::new(q, eta, m, t, ell).get(t, ell).clone()
}

/// Rational upper bound on gamma_q = prod_{i>=1} (1 - q^-i)^-1: the first 64
/// factors times (1 + 2 q^-64), which dominates the tail.
pub fn gamma_q_upper(q: u64) -> BigRational {
    let qb = BigInt::from(q);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 1..=64u32 {
        let qi = qb.pow(i);
        den *= &qi - 1;
        num *= qi;
    }
    let q64 = qb.pow(64);
    num *= &q64 + 2;
    den *= q64;
    BigRational::new(num, den)
}

pub fn log2_gamma_q(q: u64) -> f64 {
    log2_rational(&gamma_q_upper(q))
}

pub fn log2_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 53 {
        return n.to_f64().unwrap().log2();
    }
    let shift = bits - 53;
    (n >> shift).to_f64().unwrap().log2() + shift as f64
}

pub fn log2_bigint(n: &BigInt) -> f64 {
    log2_biguint(n.magnitude())
}

/// log2 of a positive rational.
pub fn log2_rational(x: &BigRational) -> f64 {
    log2_bigint(x.numer()) - log2_bigint(x.denom())
}

/// log2 of gamma_q^ell * C(ell+t-1, ell-1) * q^(t(m + eta - t/ell)), an upper
/// bound on the sphere size. Needs ell > 1.
pub fn sphere_size_log2_upper_bound(t: usize, ell: usize, q: u64, eta: usize, m: usize) -> Result<f64> {
    if ell <= 1 {
        return Err(Error::InvalidParams("the sphere bound needs ell > 1".into()));
    }
    let (tf, lf) = (t as f64, ell as f64);
    Ok(lf * log2_gamma_q(q)
        + log2_biguint(&binomial(ell + t - 1, ell - 1))
        + tf * (m as f64 + eta as f64 - tf / lf) * (q as f64).log2())
}

/// Divisors of n in increasing order.
pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphereRow {
    pub ell: usize,
    pub exact: BigUint,
    pub log2_exact: f64,
    /// The closed-form bound, or the exact value when ell = 1.
    pub log2_bound: f64,
}

/// Exact sphere size and its bound for every ell dividing n, at fixed q, m, t.
/// Rows where t exceeds the largest possible weight have exact = 0.
pub fn sphere_curve(q: u64, m: usize, n: usize, t: usize) -> Vec<SphereRow> {
    divisors(n)
        .into_par_iter()
        .map(|ell| {
            let eta = n / ell;
            let exact = sphere_size(t, ell, q, eta, m);
            let log2_exact = log2_biguint(&exact);
            let log2_bound = sphere_size_log2_upper_bound(t, ell, q, eta, m).unwrap_or(log2_exact);
            SphereRow { ell, exact, log2_exact, log2_bound }
        })
        .collect()
}
