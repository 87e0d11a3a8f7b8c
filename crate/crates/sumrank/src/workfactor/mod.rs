//! Work-factor estimates (log2 of bit operations) for the generic decoder,
//! the naive strategies and the Hamming/rank specialisations, plus the
//! linear program for the optimal support distribution.

pub mod simplex;

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::counting::{binomial, log2_biguint, log2_gamma_q, log2_rational, num_decompositions, sphere_size};
use crate::distribution::{multiplicity, rho, sorted_decompositions, SupportDistribution};
use crate::{Error, Result};
use simplex::{maximize, LpOutcome};

/// Cost model for one decoder iteration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WIterModel {
    /// Counts iterations only.
    #[default]
    Unit,
    /// n^3 m^3 log2(q), the cost of erasure decoding.
    Cubic,
}

impl FromStr for WIterModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(WIterModel::Unit),
            "cubic" => Ok(WIterModel::Cubic),
            other => Err(Error::InvalidParams(format!("unknown iteration cost model {other:?}"))),
        }
    }
}

pub fn w_iter(model: WIterModel, q: u64, m: usize, n: usize) -> f64 {
    match model {
        WIterModel::Unit => 0.0,
        WIterModel::Cubic => ((n as f64).powi(3) * (m as f64).powi(3) * (q as f64).log2()).log2(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WorkFactorParams {
    pub q: u64,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    pub t: usize,
    pub s: usize,
    pub model: WIterModel,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewBounds {
    pub lb: f64,
    pub ub: f64,
    pub ub_simple: f64,
}

impl WorkFactorParams {
    fn eta(&self) -> Result<usize> {
        if self.ell == 0 || self.n % self.ell != 0 {
            return Err(Error::InvalidParams(format!("ell={} must divide n={}", self.ell, self.n)));
        }
        Ok(self.n / self.ell)
    }

    fn mu(&self) -> Result<usize> {
        Ok(self.eta()?.min(self.m))
    }

    fn w_iter(&self) -> f64 {
        w_iter(self.model, self.q, self.m, self.n)
    }

    /// t <= s <= min(n - k, floor(m (n - k) / eta)) and s <= ell * mu.
    pub fn check_feasible(&self) -> Result<()> {
        let eta = self.eta()?;
        if self.k > self.n {
            return Err(Error::InvalidParams(format!("k={} exceeds n={}", self.k, self.n)));
        }
        let r = self.n - self.k;
        let smax = r.min(self.m * r / eta);
        if self.t > self.s || self.s > smax {
            return Err(Error::InfeasibleTarget(format!("need t <= s <= {smax}, got t={}, s={}", self.t, self.s)));
        }
        let mu = self.mu()?;
        if self.s > self.ell * mu {
            return Err(Error::InfeasibleTarget(format!("s={} exceeds ell*mu={}", self.s, self.ell * mu)));
        }
        Ok(())
    }
}

/// Log2 of the normaliser Q for the decoder with zeta = mu = min(eta, m).
pub fn log2_q(p: &WorkFactorParams) -> Result<f64> {
    let mu = p.mu()?;
    let d = SupportDistribution::new(p.q, mu, p.t, p.ell, mu, p.s)?;
    Ok(log2_rational(d.normalizer()))
}

/// Lower bound log2(Q / |T|), upper bound W_iter * Q, and the closed-form
/// upper bound W_iter * C(ell+t-1, ell-1) gamma_q^ell q^(t(zeta - s/ell)).
pub fn w_new_bounds(p: &WorkFactorParams) -> Result<NewBounds> {
    let mu = p.mu()?;
    let lq = log2_q(p)?;
    let lt = log2_biguint(&num_decompositions(p.t, p.ell, mu));
    let (t, s, l) = (p.t as f64, p.s as f64, p.ell as f64);
    let ub_simple = p.w_iter()
        + log2_biguint(&binomial(p.ell + p.t - 1, p.ell - 1))
        + l * log2_gamma_q(p.q)
        + t * (mu as f64 - s / l) * (p.q as f64).log2();
    Ok(NewBounds { lb: lq - lt, ub: p.w_iter() + lq, ub_simple })
}

/// Brute force over all codewords: q^(mk) m^2 k n.
pub fn w_code(p: &WorkFactorParams) -> f64 {
    let (m, k, n) = (p.m as f64, p.k as f64, p.n as f64);
    m * k * (p.q as f64).log2() + (m * m * k * n).log2()
}

/// Brute force over errors using the closed-form sphere bound:
/// n (n-k) m^2 C(ell+t-1, ell-1) gamma_q^ell q^(t(m + eta - t/ell)).
pub fn w_errors(p: &WorkFactorParams) -> Result<f64> {
    let eta = p.eta()? as f64;
    let (t, l, m) = (p.t as f64, p.ell as f64, p.m as f64);
    Ok(((p.n * (p.n - p.k)) as f64 * m * m).log2()
        + log2_biguint(&binomial(p.ell + p.t - 1, p.ell - 1))
        + l * log2_gamma_q(p.q)
        + t * (m + eta - t / l) * (p.q as f64).log2())
}

/// Brute force over errors with the exact sphere size in place of the bound.
pub fn w_errors_exact(p: &WorkFactorParams) -> Result<f64> {
    let eta = p.eta()?;
    let m = p.m as f64;
    Ok(((p.n * (p.n - p.k)) as f64 * m * m).log2() + log2_biguint(&sphere_size(p.t, p.ell, p.q, eta, p.m)))
}

/// Hamming-metric information-set decoding with s-subsets (ell = n only).
pub fn w_prange(p: &WorkFactorParams) -> Result<f64> {
    if p.ell != p.n {
        return Err(Error::WrongRegime("the Hamming estimate needs ell = n".into()));
    }
    if p.t > p.s {
        return Err(Error::InfeasibleTarget(format!("t={} exceeds s={}", p.t, p.s)));
    }
    Ok(p.w_iter() + log2_biguint(&binomial(p.n, p.t)) - log2_biguint(&binomial(p.s, p.t)))
}

/// Rank-metric generic decoding (ell = 1 only).
pub fn w_grs(p: &WorkFactorParams) -> Result<f64> {
    if p.ell != 1 {
        return Err(Error::WrongRegime("the rank-metric estimate needs ell = 1".into()));
    }
    let r = p.n - p.k;
    let smax = r.min(p.m * r / p.n);
    if p.t > p.s || p.s > smax {
        return Err(Error::InfeasibleTarget(format!("need t <= s <= {smax}")));
    }
    Ok(p.w_iter() + (p.t * (p.n.min(p.m) - p.s)) as f64 * (p.q as f64).log2())
}

#[derive(Clone, Debug, PartialEq)]
pub struct WorkFactorReport {
    pub params: WorkFactorParams,
    pub new_bounds: Option<NewBounds>,
    pub w_code: f64,
    pub w_errors: Option<f64>,
    pub w_prange: Option<f64>,
    pub w_grs: Option<f64>,
    pub w_optimal: Option<f64>,
}

pub const CSV_HEADER: &str =
    "q,m,n,k,ell,t,s,w_new_lb,w_new_ub,w_new_ub_simple,w_code,w_errors,w_prange,w_grs,w_optimal";

fn cell(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.4}")).unwrap_or_default()
}

impl WorkFactorReport {
    pub fn csv_row(&self) -> String {
        let p = &self.params;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{:.4},{},{},{},{}",
            p.q,
            p.m,
            p.n,
            p.k,
            p.ell,
            p.t,
            p.s,
            cell(self.new_bounds.map(|b| b.lb)),
            cell(self.new_bounds.map(|b| b.ub)),
            cell(self.new_bounds.map(|b| b.ub_simple)),
            self.w_code,
            cell(self.w_errors),
            cell(self.w_prange),
            cell(self.w_grs),
            cell(self.w_optimal),
        )
    }
}

/// All estimates for one parameter set. Entries that do not apply (wrong
/// regime, infeasible s, LP over the size cap) are None. `lp_cap` enables
/// the optimal-distribution column.
pub fn report(p: &WorkFactorParams, lp_cap: Option<usize>) -> Result<WorkFactorReport> {
    p.eta()?;
    let feasible = p.check_feasible().is_ok();
    let new_bounds = if feasible { Some(w_new_bounds(p)?) } else { None };
    let w_optimal = match (feasible, lp_cap) {
        (true, Some(cap)) => {
            let mu = p.mu()?;
            match optimal_distribution_lp(p.q, mu, p.t, p.ell, mu, p.s, cap) {
                Ok(sol) => Some(p.w_iter() - log2_rational(&sol.xi)),
                Err(Error::TooLarge(_)) => None,
                Err(e) => return Err(e),
            }
        }
        _ => None,
    };
    let t_fits = p.t <= p.ell * p.mu()?;
    Ok(WorkFactorReport {
        params: *p,
        new_bounds,
        w_code: w_code(p),
        w_errors: if t_fits { Some(w_errors(p)?) } else { None },
        w_prange: w_prange(p).ok(),
        w_grs: w_grs(p).ok(),
        w_optimal,
    })
}

/// Parameter sets of the three comparison figures; `ell` is left at 1.
pub fn figure_params(figure: u8) -> Result<WorkFactorParams> {
    let (m, k, t, s) = match figure {
        2 => (20, 30, 9, 10),
        3 => (60, 30, 10, 30),
        4 => (25, 20, 30, 30),
        other => return Err(Error::InvalidParams(format!("no preset for figure {other}"))),
    };
    Ok(WorkFactorParams { q: 2, m, n: 60, k, ell: 1, t, s, model: WIterModel::Unit })
}

/// Reports for each ell in `ells`, in the given order.
pub fn sweep(base: &WorkFactorParams, ells: &[usize], lp_cap: Option<usize>) -> Result<Vec<WorkFactorReport>> {
    ells.par_iter().map(|&ell| report(&WorkFactorParams { ell, ..*base }, lp_cap)).collect()
}

/// The linear program choosing a distribution over support decompositions
/// that maximises the worst-case success probability xi. Symmetric
/// solutions are assumed, so variables are indexed by sorted s-vectors
/// (entries at most zeta) and constraints by sorted t-vectors.
#[derive(Clone, Debug)]
pub struct LpInstance {
    pub s_vectors: Vec<Vec<usize>>,
    pub multiplicities: Vec<BigUint>,
    pub t_vectors: Vec<Vec<usize>>,
    pub a: Vec<Vec<BigRational>>,
    pub b: Vec<BigRational>,
    pub c: Vec<BigRational>,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub xi: BigRational,
    /// Probability of each single ordered s-vector in class i.
    pub probabilities: Vec<BigRational>,
    pub instance: LpInstance,
    pub optimum: simplex::LpOptimum,
}

fn distinct_permutations(v: &[usize]) -> Vec<Vec<usize>> {
    let mut sorted = v.to_vec();
    sorted.sort_unstable();
    let mut out = vec![sorted.clone()];
    // next lexicographic permutation until exhausted
    loop {
        let Some(i) = (0..sorted.len().saturating_sub(1)).rev().find(|&i| sorted[i] < sorted[i + 1]) else {
            return out;
        };
        let j = (i + 1..sorted.len()).rev().find(|&j| sorted[j] > sorted[i]).unwrap();
        sorted.swap(i, j);
        sorted[i + 1..].reverse();
        out.push(sorted.clone());
    }
}

pub fn build_lp(q: u64, zeta: usize, t: usize, ell: usize, mu: usize, s: usize, cap: usize) -> Result<LpInstance> {
    if mu > zeta || t > ell * mu || s < t || s > ell * zeta {
        return Err(Error::InfeasibleTarget(format!("no support decompositions for t={t}, s={s}")));
    }
    let s_vectors = sorted_decompositions(s, ell, zeta);
    if s_vectors.len() > cap {
        return Err(Error::TooLarge(format!("{} LP variables exceed the cap {cap}", s_vectors.len())));
    }
    let multiplicities: Vec<BigUint> = s_vectors.iter().map(|v| multiplicity(v)).collect();
    let total_perms: BigUint = multiplicities.iter().sum();
    let t_vectors = sorted_decompositions(t, ell, mu);
    if total_perms * BigUint::from(t_vectors.len()) > BigUint::from(cap as u64 * 1000) {
        return Err(Error::TooLarge(format!("{} constraints over {} ordered s-vectors", t_vectors.len(), s_vectors.len())));
    }
    let perms: Vec<Vec<Vec<usize>>> = s_vectors.iter().map(|v| distinct_permutations(v)).collect();
    let nv = s_vectors.len();
    let mut a = Vec::with_capacity(t_vectors.len() + 2);
    for tv in &t_vectors {
        let mut row = Vec::with_capacity(nv + 1);
        for class in &perms {
            let mut acc = BigRational::zero();
            for sv in class {
                acc += rho(sv, tv, q, zeta)?;
            }
            row.push(-acc);
        }
        row.push(BigRational::one());
        a.push(row);
    }
    let mult_row: Vec<BigRational> = multiplicities
        .iter()
        .map(|m| BigRational::from_integer(BigInt::from(m.clone())))
        .chain(std::iter::once(BigRational::zero()))
        .collect();
    a.push(mult_row.clone());
    a.push(mult_row.iter().map(|x| -x).collect());
    let mut b = vec![BigRational::zero(); t_vectors.len()];
    b.push(BigRational::one());
    b.push(-BigRational::one());
    let mut c = vec![BigRational::zero(); nv];
    c.push(BigRational::one());
    Ok(LpInstance { s_vectors, multiplicities, t_vectors, a, b, c })
}

impl LpSolution {
    /// Sum of the probabilities over all ordered s-vectors; one for every
    /// returned solution.
    pub fn probability_total(&self) -> BigRational {
        self.probabilities
            .iter()
            .zip(&self.instance.multiplicities)
            .map(|(p, m)| p * BigRational::from_integer(BigInt::from(m.clone())))
            .sum()
    }
}

/// Solves the optimal-distribution LP exactly. `xi^-1` is the best
/// achievable worst-case expected number of iterations.
pub fn optimal_distribution_lp(q: u64, zeta: usize, t: usize, ell: usize, mu: usize, s: usize, cap: usize) -> Result<LpSolution> {
    let inst = build_lp(q, zeta, t, ell, mu, s, cap)?;
    match maximize(&inst.c, &inst.a, &inst.b) {
        LpOutcome::Optimal(opt) => {
            let nv = inst.s_vectors.len();
            Ok(LpSolution {
                xi: opt.x[nv].clone(),
                probabilities: opt.x[..nv].to_vec(),
                instance: inst,
                optimum: opt,
            })
        }
        other => Err(Error::InfeasibleTarget(format!("linear program ended as {other:?}"))),
    }
}
