//! The support distribution of the generic decoder: weight decompositions t
//! are drawn with probability proportional to rho_s(t)^-1, padded to a
//! support decomposition by `scomp`, and each block gets a uniform subspace.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, RngExt};

use crate::counting::{factorial, gaussian_binomial};
use crate::ffalg::Field;
use crate::sampling::{sample_uniform_subspace, uniform_below};
use crate::srspace::{SumRankSupport, SupportKind};
use crate::{Error, Result};

fn check_scomp_input(t: &[usize], s: usize, zeta: usize) -> Result<usize> {
    let total: usize = t.iter().sum();
    if t.iter().any(|&x| x > zeta) {
        return Err(Error::InfeasibleTarget(format!("an entry of {t:?} exceeds zeta={zeta}")));
    }
    if s < total || s > t.len() * zeta {
        return Err(Error::InfeasibleTarget(format!(
            "s={s} outside [{total}, {}]",
            t.len() * zeta
        )));
    }
    Ok(s - total)
}

fn scomp_by<P: FnMut(&[usize]) -> usize>(t: &[usize], s: usize, zeta: usize, mut pick: P) -> Result<Vec<usize>> {
    let extra = check_scomp_input(t, s, zeta)?;
    let mut out = t.to_vec();
    let mut cands = Vec::with_capacity(t.len());
    for _ in 0..extra {
        let open = (0..t.len()).filter(|&i| out[i] < zeta);
        let tmax = open.clone().map(|i| t[i]).max().expect("s <= ell*zeta leaves room");
        let smin = open.clone().filter(|&i| t[i] == tmax).map(|i| out[i]).min().unwrap();
        cands.clear();
        cands.extend(open.filter(|&i| t[i] == tmax && out[i] == smin));
        let h = cands[pick(&cands)];
        out[h] += 1;
    }
    Ok(out)
}

/// Completes a weight decomposition `t` to a support decomposition summing
/// to `s`, one unit at a time: among blocks below `zeta`, those with the
/// largest t_i, then the smallest current s_i, and a uniform choice among
/// the remaining ties.
pub fn scomp<R: Rng + ?Sized>(t: &[usize], s: usize, zeta: usize, rng: &mut R) -> Result<Vec<usize>> {
    scomp_by(t, s, zeta, |c| if c.len() == 1 { 0 } else { rng.random_range(0..c.len()) })
}

/// `scomp` with ties broken by the lowest index. Produces the same pairs
/// (t_i, s_i) up to order, hence the same rho.
pub fn scomp_deterministic(t: &[usize], s: usize, zeta: usize) -> Result<Vec<usize>> {
    scomp_by(t, s, zeta, |_| 0)
}

/// Cached Gaussian binomials [a, b]_q for a, b <= zeta.
#[derive(Clone, Debug)]
struct GaussTable {
    g: Vec<Vec<BigInt>>,
}

impl GaussTable {
    fn new(q: u64, zeta: usize) -> Self {
        let g = (0..=zeta)
            .map(|a| (0..=zeta).map(|b| BigInt::from(gaussian_binomial(a, b, q))).collect())
            .collect();
        GaussTable { g }
    }

    fn get(&self, a: usize, b: usize) -> &BigInt {
        &self.g[a][b]
    }
}

/// Probability that a uniform s_i-dimensional subspace per block contains a
/// fixed support with decomposition t: prod [s_i, t_i]_q / [zeta, t_i]_q.
pub fn rho(s: &[usize], t: &[usize], q: u64, zeta: usize) -> Result<BigRational> {
    if s.len() != t.len() {
        return Err(Error::DimensionMismatch(format!("{} vs {} blocks", s.len(), t.len())));
    }
    if s.iter().any(|&x| x > zeta) {
        return Err(Error::InvalidParams(format!("{s:?} has an entry above zeta={zeta}")));
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (&si, &ti) in s.iter().zip(t) {
        num *= BigInt::from(gaussian_binomial(si, ti, q));
        den *= BigInt::from(gaussian_binomial(zeta, ti, q));
    }
    Ok(BigRational::new(num, den))
}

type Key = (usize, usize, usize, usize);

/// The support-drawing distribution for fixed (q, zeta, t, ell, mu, s).
///
/// Holds the normalising constant Q = sum over ordered t of rho_s(t)^-1 and
/// memoised partial sums used to draw decompositions by inversion.
#[derive(Debug)]
pub struct SupportDistribution {
    pub q: u64,
    pub zeta: usize,
    pub t: usize,
    pub ell: usize,
    pub mu: usize,
    pub s: usize,
    gauss: GaussTable,
    memo: Mutex<HashMap<Key, BigRational>>,
    prefix_memo: Mutex<HashMap<Vec<usize>, BigRational>>,
    ell_factorial: BigRational,
    q_value: BigRational,
}

impl Clone for SupportDistribution {
    fn clone(&self) -> Self {
        SupportDistribution {
            q: self.q,
            zeta: self.zeta,
            t: self.t,
            ell: self.ell,
            mu: self.mu,
            s: self.s,
            gauss: self.gauss.clone(),
            memo: Mutex::new(self.memo.lock().unwrap().clone()),
            prefix_memo: Mutex::new(self.prefix_memo.lock().unwrap().clone()),
            ell_factorial: self.ell_factorial.clone(),
            q_value: self.q_value.clone(),
        }
    }
}

fn ratio_int(n: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl SupportDistribution {
    pub fn new(q: u64, zeta: usize, t: usize, ell: usize, mu: usize, s: usize) -> Result<Self> {
        if ell == 0 {
            return Err(Error::InvalidParams("ell must be positive".into()));
        }
        if mu > zeta {
            return Err(Error::InvalidParams(format!("mu={mu} exceeds zeta={zeta}")));
        }
        if t > ell * mu {
            return Err(Error::InvalidWeight(format!("t={t} exceeds ell*mu={}", ell * mu)));
        }
        if s < t || s > ell * zeta {
            return Err(Error::InfeasibleTarget(format!("s={s} outside [{t}, {}]", ell * zeta)));
        }
        let mut d = SupportDistribution {
            q,
            zeta,
            t,
            ell,
            mu,
            s,
            gauss: GaussTable::new(q, zeta),
            memo: Mutex::new(HashMap::new()),
            prefix_memo: Mutex::new(HashMap::new()),
            ell_factorial: ratio_int(factorial(ell)),
            q_value: BigRational::zero(),
        };
        d.q_value = &d.ell_factorial * d.m_value(t, ell, mu, s);
        Ok(d)
    }

    /// Q = sum over ordered decompositions t of rho_s(t)^-1.
    pub fn normalizer(&self) -> &BigRational {
        &self.q_value
    }

    /// rho_s(t) = rho(scomp(t, s), t).
    pub fn rho_s(&self, t: &[usize]) -> Result<BigRational> {
        let s = scomp_deterministic(t, self.s, self.zeta)?;
        rho(&s, t, self.q, self.zeta)
    }

    /// Probability of drawing the ordered decomposition `t`.
    pub fn decomposition_probability(&self, t: &[usize]) -> Result<BigRational> {
        self.check_decomposition(t)?;
        Ok(self.rho_s(t)?.recip() / &self.q_value)
    }

    fn check_decomposition(&self, t: &[usize]) -> Result<()> {
        if t.len() != self.ell || t.iter().sum::<usize>() != self.t || t.iter().any(|&x| x > self.mu) {
            return Err(Error::InvalidWeight(format!("{t:?} is not a weight decomposition of {}", self.t)));
        }
        Ok(())
    }

    /// (1/delta!) prod_i [zeta, t1] / [sigma_i, t1] for sigma =
    /// scomp([t1; delta], s1).
    fn group_factor(&self, t1: usize, delta: usize, s1: usize) -> BigRational {
        let base = s1 / delta;
        let high = s1 % delta;
        let zt = self.gauss.get(self.zeta, t1);
        let num = zt.pow(delta as u32);
        let mut den = self.gauss.get(base, t1).pow((delta - high) as u32) * BigInt::from(factorial(delta));
        if high > 0 {
            den *= self.gauss.get(base + 1, t1).pow(high as u32);
        }
        BigRational::new(num, den)
    }

    fn m_value(&self, t: usize, l: usize, mu: usize, s: usize) -> BigRational {
        if l == 0 {
            return if t == 0 && s == 0 { BigRational::one() } else { BigRational::zero() };
        }
        if t > s || t > l * mu || s > l * self.zeta {
            return BigRational::zero();
        }
        let key = (t, l, mu, s);
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            return v.clone();
        }
        let mut acc = BigRational::zero();
        for t1 in t.div_ceil(l)..=mu.min(t) {
            let lo = (t as i64 - l as i64 * (t1 as i64 - 1)).max(1) as usize;
            let hi = if t1 == 0 { l } else { l.min(t / t1) };
            for delta in lo..=hi {
                let rest_t = t - delta * t1;
                let s1 = (s - rest_t).min(delta * self.zeta);
                let rest_l = l - delta;
                let sub = if rest_l == 0 {
                    self.m_value(rest_t, 0, 0, s - s1)
                } else {
                    self.m_value(rest_t, rest_l, t1 - 1, s - s1)
                };
                if sub.is_zero() {
                    continue;
                }
                acc += self.group_factor(t1, delta, s1) * sub;
            }
        }
        self.memo.lock().unwrap().insert(key, acc.clone());
        acc
    }

    /// Sum of rho_s(t)^-1 over all ordered t whose sorted (non-increasing)
    /// form starts with `prefix`.
    pub fn prefix_sum(&self, prefix: &[usize]) -> Result<BigRational> {
        if prefix.len() > self.ell {
            return Err(Error::InvalidPrefix(format!("{prefix:?} is longer than ell={}", self.ell)));
        }
        if prefix.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPrefix(format!("{prefix:?} is not non-increasing")));
        }
        if prefix.iter().any(|&x| x > self.mu) {
            return Err(Error::InvalidPrefix(format!("{prefix:?} has an entry above mu={}", self.mu)));
        }
        if prefix.iter().sum::<usize>() > self.t {
            return Err(Error::InvalidPrefix(format!("{prefix:?} sums past t={}", self.t)));
        }
        Ok(self.prefix_sum_unchecked(prefix))
    }

    fn prefix_sum_unchecked(&self, prefix: &[usize]) -> BigRational {
        if prefix.is_empty() {
            return self.q_value.clone();
        }
        if let Some(v) = self.prefix_memo.lock().unwrap().get(prefix) {
            return v.clone();
        }
        let v = self.prefix_sum_compute(prefix);
        self.prefix_memo.lock().unwrap().insert(prefix.to_vec(), v.clone());
        v
    }

    fn prefix_sum_compute(&self, prefix: &[usize]) -> BigRational {
        let (t, s, ell, zeta) = (self.t, self.s, self.ell, self.zeta);
        let lp = prefix.len();
        let last = prefix[lp - 1];
        let delta = prefix.iter().filter(|&&x| x == last).count();
        let head = &prefix[..lp - delta];
        let head_sum: usize = head.iter().sum();
        if head_sum + delta * last > t {
            return BigRational::zero();
        }
        let s_head = (s - t + head_sum).min((lp - delta) * zeta);
        let sigma = scomp_deterministic(head, s_head, zeta).expect("head budget is feasible");
        let mut head_factor = self.ell_factorial.clone();
        for (&ti, &si) in head.iter().zip(&sigma) {
            head_factor *= BigRational::new(self.gauss.get(zeta, ti).clone(), self.gauss.get(si, ti).clone());
        }
        let mut run = 1usize;
        for i in 1..=head.len() {
            if i < head.len() && head[i] == head[i - 1] {
                run += 1;
            } else if !head.is_empty() {
                head_factor /= ratio_int(factorial(run));
                run = 1;
            }
        }

        let free = ell - lp + delta;
        let tail_t = t - head_sum;
        let lo = (tail_t as i64 - (last as i64 - 1) * free as i64).max(delta as i64) as usize;
        let hi = if last == 0 { free } else { free.min(tail_t / last) };
        let mut acc = BigRational::zero();
        for d2 in lo..=hi {
            let rest_t = tail_t - d2 * last;
            let rest_l = free - d2;
            let avail = s - s_head;
            if avail < rest_t {
                continue;
            }
            let s2 = (avail - rest_t).min(d2 * zeta);
            let rest_s = avail - s2;
            let sub = if rest_l == 0 {
                self.m_value(rest_t, 0, 0, rest_s)
            } else if last == 0 {
                BigRational::zero()
            } else {
                self.m_value(rest_t, rest_l, last - 1, rest_s)
            };
            if sub.is_zero() {
                continue;
            }
            acc += self.group_factor(last, d2, s2) * sub;
        }
        head_factor * acc
    }

    /// Scale factor making every prefix sum times it an integer.
    pub fn iota(&self) -> BigUint {
        let mut prod = BigUint::one();
        for t1 in 0..=self.mu {
            for s1 in t1..=self.zeta {
                prod *= gaussian_binomial(s1, t1, self.q);
            }
        }
        factorial(self.ell) * prod.pow(self.ell as u32)
    }

    /// Maps an integer X in [0, iota * Q) to a sorted decomposition; each
    /// sorted t receives a run of length iota * (sum of rho_s^-1 over its
    /// orderings).
    pub fn decomposition_from_index(&self, x: &BigUint, iota: &BigUint) -> Vec<usize> {
        let mut x = BigRational::new(BigInt::from(x.clone()), BigInt::from(iota.clone()));
        let mut prefix: Vec<usize> = Vec::with_capacity(self.ell);
        for _ in 0..self.ell {
            let top = prefix.last().copied().unwrap_or(self.mu).min(self.mu);
            let mut chosen = None;
            for v in 0..=top {
                prefix.push(v);
                let p = if prefix.iter().sum::<usize>() <= self.t {
                    self.prefix_sum_unchecked(&prefix)
                } else {
                    BigRational::zero()
                };
                prefix.pop();
                if x < p {
                    chosen = Some(v);
                    break;
                }
                x -= p;
            }
            prefix.push(chosen.expect("index lies below iota * Q"));
        }
        prefix.reverse();
        prefix
    }

    /// The integer iota * Q.
    pub fn scaled_normalizer(&self) -> (BigUint, BigUint) {
        let iota = self.iota();
        let scaled = &self.q_value * BigRational::from_integer(BigInt::from(iota.clone()));
        assert!(scaled.is_integer(), "iota * Q must be an integer");
        (scaled.to_integer().to_biguint().expect("positive"), iota)
    }

    /// Draws an ordered weight decomposition with probability
    /// rho_s(t)^-1 / Q.
    pub fn draw_decomposition<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let (total, iota) = self.scaled_normalizer();
        let x = uniform_below(&total, rng);
        let mut t = self.decomposition_from_index(&x, &iota);
        t.shuffle(rng);
        t
    }

    /// Draws a support: decomposition t, dimensions scomp(t, s), then a
    /// uniform subspace of F^zeta per block.
    pub fn draw_support<F: Field, R: Rng + ?Sized>(&self, kind: SupportKind, f: &F, rng: &mut R) -> Result<SumRankSupport> {
        let t = self.draw_decomposition(rng);
        let dims = scomp(&t, self.s, self.zeta, rng)?;
        let bases = dims
            .iter()
            .map(|&d| sample_uniform_subspace(d, self.zeta, f, rng))
            .collect::<Result<Vec<_>>>()?;
        Ok(SumRankSupport { kind, zeta: self.zeta, bases })
    }
}

/// Q(s, t) for the given shape.
pub fn normalizer(q: u64, zeta: usize, t: usize, ell: usize, mu: usize, s: usize) -> Result<BigRational> {
    Ok(SupportDistribution::new(q, zeta, t, ell, mu, s)?.normalizer().clone())
}

pub fn draw_decomposition<R: Rng + ?Sized>(
    q: u64,
    zeta: usize,
    t: usize,
    ell: usize,
    mu: usize,
    s: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    Ok(SupportDistribution::new(q, zeta, t, ell, mu, s)?.draw_decomposition(rng))
}

/// All vectors in {0..=mu}^ell summing to t, in lexicographic order.
pub fn ordered_decompositions(t: usize, ell: usize, mu: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, left: usize, mu: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if rest > left * mu {
            return;
        }
        for v in 0..=mu.min(rest) {
            cur.push(v);
            rec(rest - v, left - 1, mu, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(t, ell, mu, &mut Vec::with_capacity(ell), &mut out);
    out
}

/// Non-increasing vectors in {0..=mu}^ell summing to t, in lexicographic
/// order.
pub fn sorted_decompositions(t: usize, ell: usize, mu: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, left: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if rest > left * cap {
            return;
        }
        for v in (0..=cap.min(rest)).rev() {
            cur.push(v);
            rec(rest - v, left - 1, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(t, ell, mu, &mut Vec::with_capacity(ell), &mut out);
    out.reverse();
    out
}

/// Number of distinct orderings of `v`.
pub fn multiplicity(v: &[usize]) -> BigUint {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for &x in v {
        *counts.entry(x).or_default() += 1;
    }
    counts.values().fold(factorial(v.len()), |acc, &c| acc / factorial(c))
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    let (n, d) = (x.numer(), x.denom());
    let shift = n.bits().max(d.bits()).saturating_sub(900) as u32;
    let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

pub fn lcm_denominators(xs: &[BigRational]) -> BigInt {
    xs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}
