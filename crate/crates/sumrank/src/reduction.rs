//! Randomised reduction from Hamming syndrome decoding over GF(q) to
//! sum-rank syndrome decoding over GF(q^m): lift the parity-check matrix
//! by a random diagonal scaling, then ask a sum-rank decision oracle.

use rand::{Rng, RngExt};
use rayon::prelude::*;

use crate::codes::BRUTE_FORCE_LIMIT;
use crate::ffalg::{Elem, Field, FieldContext, Matrix, Solution};
use crate::sampling::{fork_rng, sample_full_rank_matrix, seeded_rng, uniform_nonzero, DetRng};
use crate::srspace::{hamming_weight, BlockVector, SumRankParams};
use crate::{Error, Result};

/// H' = H diag(beta) for beta uniform in (GF(q^m)^*)^n. Entries of H are
/// GF(q) elements, which embed unchanged into GF(q^m).
pub fn lift_instance<R: Rng + ?Sized>(h: &Matrix, ctx: &FieldContext, rng: &mut R) -> (Matrix, Vec<Elem>) {
    let beta: Vec<Elem> = (0..h.cols()).map(|_| uniform_nonzero(&ctx.ext, rng)).collect();
    (scale_columns(h, &beta, ctx), beta)
}

fn scale_columns(h: &Matrix, beta: &[Elem], ctx: &FieldContext) -> Matrix {
    let mut out = h.clone();
    for r in 0..h.rows() {
        for (c, &b) in beta.iter().enumerate() {
            out.set(r, c, ctx.ext.mul(h.get(r, c), b));
        }
    }
    out
}

/// Enumerates the solutions of h x^T = s over `f` and reports the smallest
/// `weight`, stopping early once `stop_at` is reached. All-zero columns
/// are pinned to zero since they cannot lower any weight. None when the
/// system is inconsistent.
fn min_coset_weight<F: Field, W: Fn(&[Elem]) -> usize>(
    h: &Matrix,
    s: &[Elem],
    f: &F,
    weight: W,
    stop_at: usize,
) -> Result<Option<usize>> {
    let active: Vec<usize> = (0..h.cols()).filter(|&c| (0..h.rows()).any(|r| h.get(r, c) != 0)).collect();
    let sub = h.select_cols(&active);
    let x0 = match sub.solve(s, f)? {
        Solution::NoSolution => return Ok(None),
        Solution::Unique(x) | Solution::NonUnique(x) => x,
    };
    let kernel = sub.kernel(f);
    let dim = kernel.rows() as u32;
    let order = f.order();
    let count = (order as u128).checked_pow(dim).filter(|&c| c <= BRUTE_FORCE_LIMIT as u128);
    let Some(count) = count else {
        return Err(Error::TooLarge(format!("{order}^{dim} coset elements")));
    };
    let mut best = usize::MAX;
    let mut full = vec![0; h.cols()];
    for idx in 0..count as u64 {
        let mut x = x0.clone();
        let mut rest = idx;
        for r in 0..kernel.rows() {
            let coef = rest % order;
            rest /= order;
            if coef == 0 {
                continue;
            }
            for (xi, &k) in x.iter_mut().zip(kernel.row(r)) {
                *xi = f.add(*xi, f.mul(coef, k));
            }
        }
        for (&c, &v) in active.iter().zip(&x) {
            full[c] = v;
        }
        best = best.min(weight(&full));
        if best <= stop_at {
            break;
        }
    }
    Ok(Some(best))
}

/// Minimum sum-rank weight of x with h x^T = s over GF(q^m).
pub fn min_sum_rank_coset_weight(h: &Matrix, s: &[Elem], params: &SumRankParams, ctx: &FieldContext) -> Result<Option<usize>> {
    min_coset_weight(h, s, &ctx.ext, |x| sum_rank_weight_of(x, params, ctx), 0)
}

/// Minimum Hamming weight of x in GF(q)^n with h x^T = s.
pub fn min_hamming_coset_weight(h: &Matrix, s: &[Elem], ctx: &FieldContext) -> Result<Option<usize>> {
    min_coset_weight(h, s, &ctx.base, hamming_weight, 0)
}

fn sum_rank_weight_of(x: &[Elem], params: &SumRankParams, ctx: &FieldContext) -> usize {
    BlockVector { params: *params, entries: x.to_vec() }.sum_rank_weight(ctx)
}

/// Decides whether some x over GF(q^m) with h x^T = s has sum-rank weight
/// at most t.
pub trait SumRankOracle {
    fn decide<R: Rng + ?Sized>(&self, h: &Matrix, s: &[Elem], t: usize, rng: &mut R) -> Result<bool>;
}

/// Exhaustive coset search. With `false_negative_rate > 0` a correct
/// `true` is turned into `false` with that probability, which models a
/// one-sided-error oracle.
#[derive(Clone, Debug)]
pub struct BruteForceOracle {
    pub params: SumRankParams,
    pub ctx: FieldContext,
    pub false_negative_rate: f64,
}

impl BruteForceOracle {
    pub fn new(params: SumRankParams, ctx: &FieldContext) -> Self {
        BruteForceOracle { params, ctx: ctx.clone(), false_negative_rate: 0.0 }
    }
}

impl SumRankOracle for BruteForceOracle {
    fn decide<R: Rng + ?Sized>(&self, h: &Matrix, s: &[Elem], t: usize, rng: &mut R) -> Result<bool> {
        let ctx = &self.ctx;
        let best = min_coset_weight(h, s, &ctx.ext, |x| sum_rank_weight_of(x, &self.params, ctx), t)?;
        let answer = best.is_some_and(|w| w <= t);
        if answer && self.false_negative_rate > 0.0 && rng.random::<f64>() < self.false_negative_rate {
            return Ok(false);
        }
        Ok(answer)
    }
}

/// One-sided (no false negatives) Hamming decision: lift, then ask.
pub fn corp_decide<O: SumRankOracle, R: Rng + ?Sized>(
    h: &Matrix,
    s: &[Elem],
    t: usize,
    oracle: &O,
    ctx: &FieldContext,
    rng: &mut R,
) -> Result<bool> {
    let (lifted, _) = lift_instance(h, ctx, rng);
    oracle.decide(&lifted, s, t, rng)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RpOutcome {
    pub answer: bool,
    /// A solution of Hamming weight at most t supported on `support`,
    /// present exactly when `answer` is true.
    pub witness: Option<Vec<Elem>>,
    pub support: Vec<usize>,
}

/// Hamming decision without false positives: shrink a candidate support one
/// coordinate at a time using the lifted oracle, then verify the final
/// support by linear algebra. Dropped coordinates are zeroed rather than
/// deleted, so the block structure of length n is kept.
pub fn rp_decide<O: SumRankOracle, R: Rng + ?Sized>(
    h: &Matrix,
    s: &[Elem],
    t: usize,
    oracle: &O,
    ctx: &FieldContext,
    rng: &mut R,
) -> Result<RpOutcome> {
    let n = h.cols();
    let mut keep = vec![true; n];
    for i in 0..n {
        keep[i] = false;
        let (lifted, _) = lift_instance(&mask_columns(h, &keep), ctx, rng);
        if !oracle.decide(&lifted, s, t, rng)? {
            keep[i] = true;
        }
    }
    let support: Vec<usize> = (0..n).filter(|&i| keep[i]).collect();
    let mut out = RpOutcome { answer: false, witness: None, support: support.clone() };
    if support.len() > t {
        return Ok(out);
    }
    let sub = h.select_cols(&support);
    if let Solution::Unique(x) | Solution::NonUnique(x) = sub.solve(s, &ctx.base)? {
        let mut w = vec![0; n];
        for (&c, &v) in support.iter().zip(&x) {
            w[c] = v;
        }
        out.answer = true;
        out.witness = Some(w);
    }
    Ok(out)
}

fn mask_columns(h: &Matrix, keep: &[bool]) -> Matrix {
    let mut out = h.clone();
    for (c, &k) in keep.iter().enumerate() {
        if !k {
            for r in 0..h.rows() {
                out.set(r, c, 0);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DemoConfig {
    pub q: u64,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    pub t: usize,
    pub trials: usize,
    pub seed: u64,
    /// Passed to the oracle's error injection.
    pub false_negative_rate: f64,
}

impl Default for DemoConfig {
    fn default() -> Self {
        DemoConfig { q: 2, m: 8, n: 4, k: 1, ell: 2, t: 1, trials: 100, seed: 1, false_negative_rate: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DemoReport {
    pub config: DemoConfig,
    /// Fraction of positive instances (t_H <= t) answered true by RP.
    pub rp_positive_rate: f64,
    /// RP answers of true whose witness failed verification; always zero.
    pub rp_unverified_true: usize,
    /// Fraction of negative instances (t_H > t) answered true by RP.
    pub rp_negative_true_rate: f64,
    /// Fraction of negative instances answered false by coRP.
    pub corp_negative_false_rate: f64,
    /// Fraction of positive instances answered true by coRP.
    pub corp_positive_true_rate: f64,
    /// Fraction of lifts whose minimum sum-rank coset weight equals the
    /// minimum Hamming coset weight.
    pub weight_preserved_rate: f64,
}

impl DemoReport {
    pub fn table(&self) -> String {
        let c = &self.config;
        let mut out = format!(
            "reduction demo q={} m={} n={} k={} ell={} t={} trials={} seed={} false_negative_rate={}\n",
            c.q, c.m, c.n, c.k, c.ell, c.t, c.trials, c.seed, c.false_negative_rate
        );
        let rows = [
            ("rp_positive_true_rate", self.rp_positive_rate),
            ("rp_unverified_true", self.rp_unverified_true as f64),
            ("rp_negative_true_rate", self.rp_negative_true_rate),
            ("corp_negative_false_rate", self.corp_negative_false_rate),
            ("corp_positive_true_rate", self.corp_positive_true_rate),
            ("weight_preserved_rate", self.weight_preserved_rate),
        ];
        for (name, v) in rows {
            out.push_str(&format!("{name:<26}{v:.4}\n"));
        }
        out
    }
}

/// A random full-rank (n-k) x n matrix over GF(q) with a syndrome whose
/// minimum Hamming coset weight is `tw`, plus that weight. Positive
/// instances come from a planted error of weight t.
fn planted_instance<R: Rng + ?Sized>(cfg: &DemoConfig, ctx: &FieldContext, rng: &mut R) -> Result<(Matrix, Vec<Elem>, usize)> {
    let h = sample_full_rank_matrix(cfg.n - cfg.k, cfg.n, &ctx.base, rng)?;
    let mut x = vec![0; cfg.n];
    let mut idx: Vec<usize> = (0..cfg.n).collect();
    for i in 0..cfg.t.min(cfg.n) {
        let j = rng.random_range(i..cfg.n);
        idx.swap(i, j);
        x[idx[i]] = uniform_nonzero(&ctx.base, rng);
    }
    let s = h.mul_vec(&x, &ctx.base)?;
    let tw = min_hamming_coset_weight(&h, &s, ctx)?.expect("planted syndrome is consistent");
    Ok((h, s, tw))
}

/// A random instance whose minimum Hamming coset weight exceeds t.
fn negative_instance<R: Rng + ?Sized>(cfg: &DemoConfig, ctx: &FieldContext, rng: &mut R) -> Result<Option<(Matrix, Vec<Elem>)>> {
    for _ in 0..1000 {
        let h = sample_full_rank_matrix(cfg.n - cfg.k, cfg.n, &ctx.base, rng)?;
        let s: Vec<Elem> = (0..cfg.n - cfg.k).map(|_| rng.random_range(0..ctx.q)).collect();
        if min_hamming_coset_weight(&h, &s, ctx)?.is_some_and(|w| w > cfg.t) {
            return Ok(Some((h, s)));
        }
    }
    Ok(None)
}

#[derive(Default)]
struct TrialTally {
    rp_pos: usize,
    unverified: usize,
    corp_pos: usize,
    preserved: usize,
    negative: usize,
    rp_neg: usize,
    corp_neg: usize,
}

fn demo_trial(cfg: &DemoConfig, ctx: &FieldContext, params: &SumRankParams, oracle: &BruteForceOracle, rng: &mut DetRng) -> Result<TrialTally> {
    let mut tally = TrialTally::default();
    let (h, s, tw) = planted_instance(cfg, ctx, rng)?;
    let out = rp_decide(&h, &s, cfg.t, oracle, ctx, rng)?;
    if out.answer {
        tally.rp_pos = 1;
        let ok = out
            .witness
            .as_ref()
            .is_some_and(|w| hamming_weight(w) <= cfg.t && h.mul_vec(w, &ctx.base).is_ok_and(|v| v == s));
        tally.unverified = usize::from(!ok);
    }
    tally.corp_pos = usize::from(corp_decide(&h, &s, cfg.t, oracle, ctx, rng)?);
    let (lifted, _) = lift_instance(&h, ctx, rng);
    tally.preserved = usize::from(min_sum_rank_coset_weight(&lifted, &s, params, ctx)? == Some(tw));
    if let Some((hn, sn)) = negative_instance(cfg, ctx, rng)? {
        tally.negative = 1;
        tally.rp_neg = usize::from(rp_decide(&hn, &sn, cfg.t, oracle, ctx, rng)?.answer);
        tally.corp_neg = usize::from(!corp_decide(&hn, &sn, cfg.t, oracle, ctx, rng)?);
    }
    Ok(tally)
}

/// Runs `trials` planted positive instances and as many negative ones.
/// Trial i uses stream i of the seed, so the report does not depend on the
/// thread count.
pub fn run_demo(cfg: &DemoConfig) -> Result<DemoReport> {
    let ctx = crate::ffalg::make_field(cfg.q, cfg.m)?;
    let params = SumRankParams::new(cfg.n, cfg.ell, cfg.m)?;
    if cfg.k >= cfg.n || cfg.t == 0 || cfg.trials == 0 || !(0.0..=1.0).contains(&cfg.false_negative_rate) {
        return Err(Error::InvalidParams("need k < n, t >= 1, trials >= 1 and a rate in [0, 1]".into()));
    }
    let oracle = BruteForceOracle { false_negative_rate: cfg.false_negative_rate, ..BruteForceOracle::new(params, &ctx) };
    let root = seeded_rng(cfg.seed);
    let tallies = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|trial| demo_trial(cfg, &ctx, &params, &oracle, &mut fork_rng(&root, trial)))
        .collect::<Result<Vec<_>>>()?;
    let sum = |f: fn(&TrialTally) -> usize| tallies.iter().map(f).sum::<usize>() as f64;
    let trials = cfg.trials as f64;
    let neg = sum(|t| t.negative).max(1.0);
    Ok(DemoReport {
        config: *cfg,
        rp_positive_rate: sum(|t| t.rp_pos) / trials,
        rp_unverified_true: sum(|t| t.unverified) as usize,
        rp_negative_true_rate: sum(|t| t.rp_neg) / neg,
        corp_negative_false_rate: sum(|t| t.corp_neg) / neg,
        corp_positive_true_rate: sum(|t| t.corp_pos) / trials,
        weight_preserved_rate: sum(|t| t.preserved) / trials,
    })
}
