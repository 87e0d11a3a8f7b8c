//! Randomized generic decoding: draw a support from the support
//! distribution, solve the erasure problem inside it, and accept the first
//! solution of weight at most t.

use num_bigint::BigUint;
use num_rational::BigRational;
use rand::Rng;
use rayon::prelude::*;

use crate::codes::{column_erasure_decode_syndrome, row_erasure_decode_syndrome, ErasureFailure, LinearCode};
use crate::counting::num_decompositions;
use crate::distribution::SupportDistribution;
use crate::ffalg::Elem;
use crate::sampling::{fork_rng, seeded_rng, UniformErrorSampler};
use crate::srspace::{BlockVector, SumRankParams, SupportKind};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum KindChoice {
    Row,
    Column,
    /// Row supports when eta <= m, column supports otherwise.
    #[default]
    Auto,
}

#[derive(Clone, Debug, Default)]
pub struct DecodeConfig {
    pub s: Option<usize>,
    pub max_iterations: Option<u64>,
    pub kind: KindChoice,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub error: BlockVector,
    pub iterations: u64,
    /// Iterations where no vector in the support had the right syndrome.
    pub misses: u64,
    pub nonunique: u64,
    /// Iterations that found a solution heavier than t.
    pub weight_excess: u64,
}

pub fn resolve_kind(params: &SumRankParams, choice: KindChoice) -> SupportKind {
    match choice {
        KindChoice::Row => SupportKind::Row,
        KindChoice::Column => SupportKind::Column,
        KindChoice::Auto if params.eta <= params.m => SupportKind::Row,
        KindChoice::Auto => SupportKind::Column,
    }
}

/// Largest support dimension for which erasure decoding can be unique:
/// min(n - k, floor(m (n - k) / eta)).
pub fn default_s(params: &SumRankParams, k: usize) -> usize {
    let r = params.n - k;
    r.min(params.m * r / params.eta)
}

#[derive(Debug)]
pub struct GenericDecoder {
    pub code: LinearCode,
    pub t: usize,
    pub s: usize,
    pub kind: SupportKind,
    pub max_iterations: Option<u64>,
    dist: SupportDistribution,
}

impl GenericDecoder {
    pub fn new(code: LinearCode, t: usize, cfg: &DecodeConfig) -> Result<Self> {
        let p = code.params;
        let kind = resolve_kind(&p, cfg.kind);
        let s = cfg.s.unwrap_or_else(|| default_s(&p, code.k));
        if t > s {
            return Err(Error::InfeasibleTarget(format!("t={t} exceeds the support dimension s={s}")));
        }
        let dist = SupportDistribution::new(code.ctx().q, p.zeta(kind), t, p.ell, p.mu, s)?;
        Ok(GenericDecoder { code, t, s, kind, max_iterations: cfg.max_iterations, dist })
    }

    pub fn distribution(&self) -> &SupportDistribution {
        &self.dist
    }

    /// Bounds [1/Q, |T|/Q] on the per-iteration success probability.
    pub fn success_probability_bounds(&self) -> (BigRational, BigRational) {
        let q = self.dist.normalizer();
        let count = num_decompositions(self.t, self.code.params.ell, self.code.params.mu);
        let lower = q.recip();
        let upper = BigRational::from_integer(count.into()) / q;
        (lower, upper)
    }

    pub fn decode<R: Rng + ?Sized>(&self, r: &[Elem], rng: &mut R) -> Result<DecodeOutcome> {
        let syndrome = self.code.syndrome(r)?;
        self.decode_syndrome(&syndrome, rng)
    }

    pub fn decode_syndrome<R: Rng + ?Sized>(&self, syndrome: &[Elem], rng: &mut R) -> Result<DecodeOutcome> {
        let ctx = self.code.ctx();
        let mut out = DecodeOutcome {
            error: BlockVector::zero(self.code.params),
            iterations: 0,
            misses: 0,
            nonunique: 0,
            weight_excess: 0,
        };
        loop {
            if let Some(cap) = self.max_iterations {
                if out.iterations >= cap {
                    return Err(Error::IterationCapExceeded(cap));
                }
            }
            out.iterations += 1;
            let f = self.dist.draw_support(self.kind, &ctx.base, rng)?;
            let attempt = match self.kind {
                SupportKind::Row => column_erasure_decode_syndrome(&self.code, syndrome, &f),
                SupportKind::Column => row_erasure_decode_syndrome(&self.code, syndrome, &f),
            };
            match attempt {
                Ok(e) if e.sum_rank_weight(ctx) <= self.t => {
                    out.error = e;
                    return Ok(out);
                }
                Ok(_) => out.weight_excess += 1,
                Err(ErasureFailure::NonUnique) => out.nonunique += 1,
                Err(ErasureFailure::NoSolution) => out.misses += 1,
                Err(ErasureFailure::Invalid(e)) => return Err(e),
            }
        }
    }
}

/// Decodes `r` to an error of sum-rank weight at most `t`.
pub fn generic_decode<R: Rng + ?Sized>(
    code: &LinearCode,
    r: &[Elem],
    t: usize,
    cfg: &DecodeConfig,
    rng: &mut R,
) -> Result<DecodeOutcome> {
    GenericDecoder::new(code.clone(), t, cfg)?.decode(r, rng)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialRecord {
    pub seed: u64,
    pub trial: u64,
    pub iterations: u64,
    /// Whether the returned error equals the planted one.
    pub success: bool,
    pub misses: u64,
    pub nonunique: u64,
    pub weight_excess: u64,
}

#[derive(Clone, Debug)]
pub struct ExperimentSummary {
    pub records: Vec<TrialRecord>,
    pub mean_iterations: f64,
    pub var_iterations: f64,
    pub success_rate: f64,
    /// Trials divided by total iterations.
    pub per_iteration_success: f64,
    /// Delta-method standard error of `per_iteration_success`.
    pub per_iteration_se: f64,
}

pub const CSV_HEADER: &str = "seed,trial,iterations,success,miss,nonunique,weight_excess";

impl ExperimentSummary {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.seed, r.trial, r.iterations, r.success as u8, r.misses, r.nonunique, r.weight_excess
            ));
        }
        out
    }

    fn from_records(records: Vec<TrialRecord>) -> Self {
        let n = records.len() as f64;
        let its: Vec<f64> = records.iter().map(|r| r.iterations as f64).collect();
        let mean = its.iter().sum::<f64>() / n;
        let var = if records.len() > 1 {
            its.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let success_rate = records.iter().filter(|r| r.success).count() as f64 / n;
        let p = 1.0 / mean;
        let se = (var / n).sqrt() / (mean * mean);
        ExperimentSummary { records, mean_iterations: mean, var_iterations: var, success_rate, per_iteration_success: p, per_iteration_se: se }
    }
}

/// Planted-error experiment: each trial draws a random codeword and a
/// uniform error of weight t, then decodes. Trial i uses stream i of `seed`,
/// so results do not depend on scheduling.
pub fn run_experiment(decoder: &GenericDecoder, trials: u64, seed: u64) -> Result<ExperimentSummary> {
    let code = &decoder.code;
    let sampler = UniformErrorSampler::new(decoder.t, code.params, code.ctx())?;
    let root = seeded_rng(seed);
    let records = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = fork_rng(&root, trial);
            let c = code.random_codeword(&mut rng);
            let e = sampler.sample(&mut rng);
            let r = c.add(&e, code.ctx());
            let out = decoder.decode(&r.entries, &mut rng)?;
            Ok(TrialRecord {
                seed,
                trial,
                iterations: out.iterations,
                success: out.error == e,
                misses: out.misses,
                nonunique: out.nonunique,
                weight_excess: out.weight_excess,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentSummary::from_records(records))
}

/// Upper end of the success-probability interval as a count, |T|.
pub fn decomposition_count(params: &SumRankParams, t: usize) -> BigUint {
    num_decompositions(t, params.ell, params.mu)
}
