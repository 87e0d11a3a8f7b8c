//! GF(q^m)-linear codes, syndromes, brute-force minimum distance, the two
//! erasure decoders, and a plain-text code file format.

use rand::Rng;
use thiserror::Error;

use crate::ffalg::{expand, Elem, Field, FieldContext, Matrix, Solution};
use crate::sampling::{sample_full_rank_matrix, uniform_elem};
use crate::srspace::{BlockVector, SumRankParams, SumRankSupport, SupportKind};
use crate::{Error, Result};

/// Largest search space the brute-force routines will walk.
pub const BRUTE_FORCE_LIMIT: u64 = 1 << 22;

#[derive(Clone, Debug)]
pub struct LinearCode {
    pub params: SumRankParams,
    pub k: usize,
    pub g: Matrix,
    pub h: Matrix,
    ctx: FieldContext,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ErasureFailure {
    #[error("the erasure system has more than one solution")]
    NonUnique,
    #[error("no error inside the support matches the syndrome")]
    NoSolution,
    #[error(transparent)]
    Invalid(#[from] Error),
}

impl LinearCode {
    pub fn from_generator(params: SumRankParams, g: Matrix, ctx: &FieldContext) -> Result<Self> {
        check_shape(&params, ctx, &g)?;
        let k = g.rows();
        if g.rank(&ctx.ext) != k {
            return Err(Error::InvalidParams("generator matrix is not of full rank".into()));
        }
        let h = g.kernel(&ctx.ext);
        Ok(LinearCode { params, k, g, h, ctx: ctx.clone() })
    }

    pub fn from_parity_check(params: SumRankParams, h: Matrix, ctx: &FieldContext) -> Result<Self> {
        check_shape(&params, ctx, &h)?;
        if h.rank(&ctx.ext) != h.rows() {
            return Err(Error::InvalidParams("parity-check matrix is not of full rank".into()));
        }
        let g = h.kernel(&ctx.ext);
        Ok(LinearCode { params, k: g.rows(), g, h, ctx: ctx.clone() })
    }

    /// Code with a uniformly random full-rank k x n generator matrix.
    pub fn random<R: Rng + ?Sized>(params: SumRankParams, k: usize, ctx: &FieldContext, rng: &mut R) -> Result<Self> {
        if k > params.n {
            return Err(Error::InvalidParams(format!("k={k} exceeds n={}", params.n)));
        }
        let g = sample_full_rank_matrix(k, params.n, &ctx.ext, rng)?;
        Self::from_generator(params, g, ctx)
    }

    pub fn ctx(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn redundancy(&self) -> usize {
        self.params.n - self.k
    }

    /// H * x^T.
    pub fn syndrome(&self, x: &[Elem]) -> Result<Vec<Elem>> {
        self.h.mul_vec(x, &self.ctx.ext)
    }

    pub fn encode(&self, u: &[Elem]) -> Result<BlockVector> {
        let c = self.g.transpose().mul_vec(u, &self.ctx.ext)?;
        BlockVector::new(self.params, c)
    }

    pub fn random_codeword<R: Rng + ?Sized>(&self, rng: &mut R) -> BlockVector {
        let u: Vec<Elem> = (0..self.k).map(|_| uniform_elem(&self.ctx.ext, rng)).collect();
        self.encode(&u).expect("message has length k")
    }

    /// Minimum sum-rank distance by enumerating messages up to scalars.
    pub fn min_distance_bruteforce(&self) -> Result<usize> {
        let order = self.ctx.ext.order();
        let space = (order as u128).checked_pow(self.k as u32);
        if space.is_none_or(|s| s > BRUTE_FORCE_LIMIT as u128) {
            return Err(Error::TooLarge(format!("{order}^{} messages", self.k)));
        }
        let mut best = self.params.n + 1;
        // messages whose first nonzero entry is 1 cover every codeword up to
        // a scalar, which does not change the weight
        for lead in 0..self.k {
            let free = self.k - lead - 1;
            for idx in 0..order.pow(free as u32) {
                let mut u = vec![0; self.k];
                u[lead] = 1;
                let mut x = idx;
                for slot in u.iter_mut().skip(lead + 1) {
                    *slot = x % order;
                    x /= order;
                }
                let w = self.encode(&u)?.sum_rank_weight(&self.ctx);
                best = best.min(w);
            }
        }
        Ok(best)
    }
}

fn check_shape(params: &SumRankParams, ctx: &FieldContext, m: &Matrix) -> Result<()> {
    if params.m != ctx.m {
        return Err(Error::InvalidParams("parameter m differs from the field".into()));
    }
    if m.cols() != params.n {
        return Err(Error::DimensionMismatch(format!("{} columns for n={}", m.cols(), params.n)));
    }
    Ok(())
}

fn check_support(code: &LinearCode, f: &SumRankSupport, kind: SupportKind) -> std::result::Result<(), ErasureFailure> {
    let p = &code.params;
    if f.kind != kind || f.bases.len() != p.ell || f.zeta != p.zeta(kind) {
        return Err(Error::DimensionMismatch(format!("support does not fit a {kind:?} support of this code")).into());
    }
    Ok(())
}

/// Finds the unique e with H e^T = H r^T inside the row support `f`, by
/// solving for the coefficients a in e = a B with B block-diagonal.
pub fn column_erasure_decode(code: &LinearCode, r: &[Elem], f: &SumRankSupport) -> std::result::Result<BlockVector, ErasureFailure> {
    let s = code.syndrome(r)?;
    column_erasure_decode_syndrome(code, &s, f)
}

pub fn column_erasure_decode_syndrome(
    code: &LinearCode,
    syndrome: &[Elem],
    f: &SumRankSupport,
) -> std::result::Result<BlockVector, ErasureFailure> {
    check_support(code, f, SupportKind::Row)?;
    let ext = &code.ctx.ext;
    let b = f.block_diagonal();
    let system = code.h.mul(&b.transpose(), ext)?;
    match system.solve(syndrome, ext)? {
        Solution::Unique(a) => {
            let e = b.transpose().mul_vec(&a, ext)?;
            Ok(BlockVector::new(code.params, e)?)
        }
        Solution::NonUnique(_) => Err(ErasureFailure::NonUnique),
        Solution::NoSolution => Err(ErasureFailure::NoSolution),
    }
}

/// Finds the unique e with H e^T = H r^T inside the column support `f`: with
/// the basis of each block lifted to a vector a_i over GF(q^m), solves for
/// the GF(q)-matrices B_i in e_i = a_i B_i after expanding the syndrome
/// equations over GF(q).
pub fn row_erasure_decode(code: &LinearCode, r: &[Elem], f: &SumRankSupport) -> std::result::Result<BlockVector, ErasureFailure> {
    let s = code.syndrome(r)?;
    row_erasure_decode_syndrome(code, &s, f)
}

pub fn row_erasure_decode_syndrome(
    code: &LinearCode,
    syndrome: &[Elem],
    f: &SumRankSupport,
) -> std::result::Result<BlockVector, ErasureFailure> {
    check_support(code, f, SupportKind::Column)?;
    let ctx = &code.ctx;
    let ext = &ctx.ext;
    let p = &code.params;
    let lifted: Vec<Vec<Elem>> = f
        .bases
        .iter()
        .map(|basis| (0..basis.rows()).map(|j| ctx.from_coords(basis.row(j))).collect())
        .collect();
    let unknowns: usize = lifted.iter().map(|a| a.len() * p.eta).sum();
    let rows = code.redundancy();
    // unknowns are ordered by (block, basis row, column)
    let mut system = Matrix::zeros(rows, unknowns);
    let mut col = 0;
    for (i, a) in lifted.iter().enumerate() {
        for &aj in a {
            for c in 0..p.eta {
                let hc = i * p.eta + c;
                for r in 0..rows {
                    system.set(r, col, ext.mul(code.h.get(r, hc), aj));
                }
                col += 1;
            }
        }
    }
    let big = expand_rows(&system, ctx);
    let rhs = expand_vector(syndrome, ctx);
    match big.solve(&rhs, &ctx.base)? {
        Solution::Unique(bhat) => {
            let mut e = Vec::with_capacity(p.n);
            let mut off = 0;
            for a in &lifted {
                for c in 0..p.eta {
                    let v = a.iter().enumerate().fold(0, |acc, (j, &aj)| {
                        ext.add(acc, ext.mul(aj, bhat[off + j * p.eta + c]))
                    });
                    e.push(v);
                }
                off += a.len() * p.eta;
            }
            Ok(BlockVector::new(code.params, e)?)
        }
        Solution::NonUnique(_) => Err(ErasureFailure::NonUnique),
        Solution::NoSolution => Err(ErasureFailure::NoSolution),
    }
}

/// Replaces every row of a GF(q^m)-matrix by the m rows of its coordinates.
fn expand_rows(a: &Matrix, ctx: &FieldContext) -> Matrix {
    let m = ctx.m;
    let mut out = Matrix::zeros(a.rows() * m, a.cols());
    for r in 0..a.rows() {
        let block = expand(a.row(r), ctx);
        for d in 0..m {
            for c in 0..a.cols() {
                out.set(r * m + d, c, block.get(d, c));
            }
        }
    }
    out
}

fn expand_vector(v: &[Elem], ctx: &FieldContext) -> Vec<Elem> {
    v.iter().flat_map(|&x| ctx.coords(x)).collect()
}

/// Text form: a header line `q m n k ell`, a blank line, then the rows of H
/// with entries as integers.
pub fn write_code(code: &LinearCode) -> String {
    let p = &code.params;
    let mut out = format!("{} {} {} {} {}\n\n", code.ctx.q, p.m, p.n, code.k, p.ell);
    out.push_str(&write_matrix(&code.h));
    out
}

pub fn write_matrix(m: &Matrix) -> String {
    let mut out = String::new();
    for r in 0..m.rows() {
        let line: Vec<String> = m.row(r).iter().map(u64::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

fn parse_ints(line: &str) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|w| w.parse::<u64>().map_err(|e| Error::Parse(format!("{w:?}: {e}"))))
        .collect()
}

pub fn read_code(text: &str) -> Result<(FieldContext, LinearCode)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.starts_with('#'));
    let header = lines.by_ref().find(|l| !l.is_empty()).ok_or_else(|| Error::Parse("empty code file".into()))?;
    let hv = parse_ints(header)?;
    let [q, m, n, k, ell] = hv[..] else {
        return Err(Error::Parse(format!("header needs `q m n k ell`, got {header:?}")));
    };
    let (m, n, k, ell) = (m as usize, n as usize, k as usize, ell as usize);
    let ctx = crate::ffalg::make_field(q, m)?;
    let params = SumRankParams::new(n, ell, m)?;
    let rows: Vec<Vec<u64>> = lines.filter(|l| !l.is_empty()).map(parse_ints).collect::<Result<_>>()?;
    if rows.len() != n - k {
        return Err(Error::Parse(format!("expected {} rows of H, found {}", n - k, rows.len())));
    }
    if rows.iter().flatten().any(|&x| x >= ctx.ext.order()) {
        return Err(Error::Parse("entry outside the field".into()));
    }
    let h = Matrix::from_rows(&rows, n)?;
    let code = LinearCode::from_parity_check(params, h, &ctx)?;
    if code.k != k {
        return Err(Error::Parse(format!("H has rank {} but k={k}", n - code.k)));
    }
    Ok((ctx, code))
}

/// One vector per line, entries as integers.
pub fn write_vectors(vs: &[Vec<Elem>]) -> String {
    vs.iter()
        .map(|v| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ") + "\n")
        .collect()
}

pub fn read_vectors(text: &str) -> Result<Vec<Vec<Elem>>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_ints)
        .collect()
}
