//! Seeded randomness and exact uniform samplers: big integers, full-rank
//! matrices, subspaces and vectors of a prescribed sum-rank weight.

use num_bigint::BigUint;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::counting::SphereTable;
use crate::ffalg::{fq_rank, Elem, Field, FieldContext, Matrix};
use crate::srspace::{BlockVector, SumRankParams};
use crate::{Error, Result};

/// The generator used throughout. ChaCha output is fixed by the seed on
/// every platform.
pub type DetRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> DetRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Child generator for stream `index`, keyed off the parent's seed. Forking
/// does not advance the parent.
pub fn fork_rng(parent: &DetRng, index: u64) -> DetRng {
    let mut keyed = ChaCha8Rng::from_seed(parent.get_seed());
    keyed.set_stream(index.wrapping_add(1));
    let mut child_seed = [0u8; 32];
    keyed.fill_bytes(&mut child_seed);
    ChaCha8Rng::from_seed(child_seed)
}

/// Uniform integer in [0, n) by rejection on blocks of bits(n - 1) bits.
pub fn uniform_below<R: Rng + ?Sized>(n: &BigUint, rng: &mut R) -> BigUint {
    assert!(n.bits() > 0, "empty range");
    let bits = (n - 1u32).bits();
    let nbytes = bits.div_ceil(8) as usize;
    let excess = nbytes as u64 * 8 - bits;
    let mut buf = vec![0u8; nbytes];
    loop {
        rng.fill_bytes(&mut buf);
        if let Some(last) = buf.last_mut() {
            *last &= 0xffu8 >> excess;
        }
        let x = BigUint::from_bytes_le(&buf);
        if &x < n {
            return x;
        }
    }
}

pub fn uniform_elem<F: Field, R: Rng + ?Sized>(f: &F, rng: &mut R) -> Elem {
    rng.random_range(0..f.order())
}

pub fn uniform_nonzero<F: Field, R: Rng + ?Sized>(f: &F, rng: &mut R) -> Elem {
    rng.random_range(1..f.order())
}

pub fn uniform_matrix<F: Field, R: Rng + ?Sized>(rows: usize, cols: usize, f: &F, rng: &mut R) -> Matrix {
    let data = (0..rows * cols).map(|_| uniform_elem(f, rng)).collect();
    Matrix::from_vec(rows, cols, data).expect("shape is consistent")
}

/// Uniform rows x cols matrix of full row rank, with the number of draws
/// that were needed.
pub fn sample_full_rank_matrix_counted<F: Field, R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    f: &F,
    rng: &mut R,
) -> Result<(Matrix, u64)> {
    if rows > cols {
        return Err(Error::InvalidParams(format!("no {rows}x{cols} matrix has rank {rows}")));
    }
    let mut draws = 0;
    loop {
        draws += 1;
        let m = uniform_matrix(rows, cols, f, rng);
        if m.rank(f) == rows {
            return Ok((m, draws));
        }
    }
}

pub fn sample_full_rank_matrix<F: Field, R: Rng + ?Sized>(rows: usize, cols: usize, f: &F, rng: &mut R) -> Result<Matrix> {
    sample_full_rank_matrix_counted(rows, cols, f, rng).map(|(m, _)| m)
}

/// Uniform vector in GF(q^m)^len whose entries are GF(q)-linearly
/// independent.
pub fn sample_independent_vector<R: Rng + ?Sized>(len: usize, ctx: &FieldContext, rng: &mut R) -> Result<Vec<Elem>> {
    if len > ctx.m {
        return Err(Error::InvalidParams(format!("{len} independent elements in a degree-{} extension", ctx.m)));
    }
    loop {
        let v: Vec<Elem> = (0..len).map(|_| uniform_elem(&ctx.ext, rng)).collect();
        if fq_rank(&v, ctx) == len {
            return Ok(v);
        }
    }
}

/// Uniform `dim`-dimensional subspace of F^zeta, as an RREF basis.
pub fn sample_uniform_subspace<F: Field, R: Rng + ?Sized>(dim: usize, zeta: usize, f: &F, rng: &mut R) -> Result<Matrix> {
    Ok(sample_full_rank_matrix(dim, zeta, f, rng)?.row_space_basis(f))
}

/// Draws vectors of sum-rank weight exactly `t`, uniformly, by first picking
/// the weight decomposition with probability proportional to its number of
/// vectors.
#[derive(Clone, Debug)]
pub struct UniformErrorSampler {
    params: SumRankParams,
    ctx: FieldContext,
    t: usize,
    table: SphereTable,
}

impl UniformErrorSampler {
    pub fn new(t: usize, params: SumRankParams, ctx: &FieldContext) -> Result<Self> {
        if params.m != ctx.m {
            return Err(Error::InvalidParams("parameter m differs from the field".into()));
        }
        if t > params.ell * params.mu {
            return Err(Error::InvalidWeight(format!("t={t} exceeds ell*mu={}", params.ell * params.mu)));
        }
        let table = SphereTable::new(ctx.q, params.eta, params.m, t, params.ell);
        Ok(UniformErrorSampler { params, ctx: ctx.clone(), t, table })
    }

    pub fn sphere_size(&self) -> &BigUint {
        self.table.get(self.t, self.params.ell)
    }

    /// Weight decomposition of a uniformly drawn vector of weight t.
    pub fn sample_decomposition<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let ell = self.params.ell;
        let mut d = uniform_below(self.sphere_size(), rng);
        let mut rest = self.t;
        let mut out = Vec::with_capacity(ell);
        for j in 0..ell {
            let blocks_after = ell - j - 1;
            let mut chosen = None;
            for w in 0..=self.params.mu.min(rest) {
                let term = self.table.block_count(w) * self.table.get(rest - w, blocks_after);
                if d < term {
                    chosen = Some(w);
                    break;
                }
                d -= term;
            }
            let w = chosen.expect("index lies below the sphere size");
            // the index splits as (block matrix, rest of the vector); keep
            // the part that addresses the remaining blocks
            d %= self.table.get(rest - w, blocks_after);
            out.push(w);
            rest -= w;
        }
        out
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BlockVector {
        let ctx = &self.ctx;
        let eta = self.params.eta;
        let mut entries = Vec::with_capacity(self.params.n);
        for w in self.sample_decomposition(rng) {
            let a = sample_independent_vector(w, ctx, rng).expect("w <= m");
            let b = sample_full_rank_matrix(w, eta, &ctx.base, rng).expect("w <= eta");
            for c in 0..eta {
                let v = a
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (j, &aj)| ctx.ext.add(acc, ctx.ext.mul(aj, b.get(j, c))));
                entries.push(v);
            }
        }
        BlockVector { params: self.params, entries }
    }
}

/// One uniformly random vector of sum-rank weight `t`.
pub fn sample_uniform_error<R: Rng + ?Sized>(
    t: usize,
    params: SumRankParams,
    ctx: &FieldContext,
    rng: &mut R,
) -> Result<BlockVector> {
    Ok(UniformErrorSampler::new(t, params, ctx)?.sample(rng))
}
