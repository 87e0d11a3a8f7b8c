//! Vectors in GF(q^m)^n split into `ell` blocks of length `eta = n / ell`,
//! their sum-rank weights, decompositions and supports.

use crate::ffalg::{expand, Elem, Field, FieldContext, Matrix};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SumRankParams {
    pub n: usize,
    pub ell: usize,
    pub eta: usize,
    pub m: usize,
    pub mu: usize,
}

/// Row supports live in GF(q)^eta, column supports in GF(q)^m.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SupportKind {
    Row,
    Column,
}

impl SumRankParams {
    pub fn new(n: usize, ell: usize, m: usize) -> Result<Self> {
        if ell == 0 || n == 0 || n % ell != 0 {
            return Err(Error::InvalidParams(format!("ell={ell} must divide n={n}")));
        }
        if m == 0 {
            return Err(Error::InvalidParams("m must be positive".into()));
        }
        let eta = n / ell;
        Ok(SumRankParams { n, ell, eta, m, mu: eta.min(m) })
    }

    pub fn zeta(&self, kind: SupportKind) -> usize {
        match kind {
            SupportKind::Row => self.eta,
            SupportKind::Column => self.m,
        }
    }

    pub fn block_range(&self, i: usize) -> std::ops::Range<usize> {
        i * self.eta..(i + 1) * self.eta
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockVector {
    pub params: SumRankParams,
    pub entries: Vec<Elem>,
}

/// e_i = a_i * B_i per block with a_i having GF(q)-independent entries and
/// B_i in reduced row echelon form over GF(q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorDecomposition {
    pub a: Vec<Vec<Elem>>,
    pub b: Vec<Matrix>,
}

/// One subspace per block, each given by an RREF basis (as rows).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumRankSupport {
    pub kind: SupportKind,
    pub zeta: usize,
    pub bases: Vec<Matrix>,
}

impl BlockVector {
    pub fn new(params: SumRankParams, entries: Vec<Elem>) -> Result<Self> {
        if entries.len() != params.n {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} with n={}",
                entries.len(),
                params.n
            )));
        }
        Ok(BlockVector { params, entries })
    }

    pub fn zero(params: SumRankParams) -> Self {
        BlockVector { params, entries: vec![0; params.n] }
    }

    pub fn block(&self, i: usize) -> &[Elem] {
        &self.entries[self.params.block_range(i)]
    }

    pub fn weight_decomposition(&self, ctx: &FieldContext) -> Vec<usize> {
        (0..self.params.ell)
            .map(|i| expand(self.block(i), ctx).rank(&ctx.base))
            .collect()
    }

    pub fn sum_rank_weight(&self, ctx: &FieldContext) -> usize {
        self.weight_decomposition(ctx).iter().sum()
    }

    pub fn error_decomposition(&self, ctx: &FieldContext) -> ErrorDecomposition {
        let mut a = Vec::with_capacity(self.params.ell);
        let mut b = Vec::with_capacity(self.params.ell);
        for i in 0..self.params.ell {
            let block = self.block(i);
            // row space of the expansion is the row space of B_i; the pivot
            // columns of its RREF pick out a_i directly
            let (r, pivots) = expand(block, ctx).rref(&ctx.base);
            let keep: Vec<usize> = (0..pivots.len()).collect();
            b.push(r.select_rows(&keep));
            a.push(pivots.iter().map(|&c| block[c]).collect());
        }
        ErrorDecomposition { a, b }
    }

    pub fn support(&self, kind: SupportKind, ctx: &FieldContext) -> SumRankSupport {
        let d = self.error_decomposition(ctx);
        match kind {
            SupportKind::Row => d.row_support(),
            SupportKind::Column => d.column_support(ctx),
        }
    }

    pub fn add(&self, other: &BlockVector, ctx: &FieldContext) -> BlockVector {
        let entries = self.entries.iter().zip(&other.entries).map(|(&x, &y)| ctx.ext.add(x, y)).collect();
        BlockVector { params: self.params, entries }
    }

    pub fn sub(&self, other: &BlockVector, ctx: &FieldContext) -> BlockVector {
        let entries = self.entries.iter().zip(&other.entries).map(|(&x, &y)| ctx.ext.sub(x, y)).collect();
        BlockVector { params: self.params, entries }
    }
}

impl ErrorDecomposition {
    pub fn weights(&self) -> Vec<usize> {
        self.a.iter().map(Vec::len).collect()
    }

    pub fn reassemble(&self, params: &SumRankParams, ctx: &FieldContext) -> BlockVector {
        let f = &ctx.ext;
        let mut entries = Vec::with_capacity(params.n);
        for (a, b) in self.a.iter().zip(&self.b) {
            for c in 0..params.eta {
                let v = a.iter().enumerate().fold(0, |acc, (j, &aj)| f.add(acc, f.mul(aj, b.get(j, c))));
                entries.push(v);
            }
        }
        BlockVector { params: *params, entries }
    }

    pub fn row_support(&self) -> SumRankSupport {
        let zeta = self.b.first().map_or(0, Matrix::cols);
        SumRankSupport { kind: SupportKind::Row, zeta, bases: self.b.clone() }
    }

    pub fn column_support(&self, ctx: &FieldContext) -> SumRankSupport {
        let bases = self
            .a
            .iter()
            .map(|a| expand(a, ctx).transpose().row_space_basis(&ctx.base))
            .collect();
        SumRankSupport { kind: SupportKind::Column, zeta: ctx.m, bases }
    }
}

impl SumRankSupport {
    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Matrix::rows).collect()
    }

    pub fn dimension(&self) -> usize {
        self.bases.iter().map(Matrix::rows).sum()
    }

    /// Whether every block of `inner` lies in the corresponding block of
    /// `self`.
    pub fn contains<F: Field>(&self, inner: &SumRankSupport, f: &F) -> Result<bool> {
        if self.kind != inner.kind || self.bases.len() != inner.bases.len() || self.zeta != inner.zeta {
            return Err(Error::DimensionMismatch("supports of different shape".into()));
        }
        for (outer, e) in self.bases.iter().zip(&inner.bases) {
            if outer.vstack(e)?.rank(f) != outer.rows() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Block-diagonal matrix with the per-block bases on the diagonal. For a
    /// row support this is the dim x n matrix B with every supported vector
    /// of the form a * B.
    pub fn block_diagonal(&self) -> Matrix {
        let rows = self.dimension();
        let cols = self.zeta * self.bases.len();
        let mut out = Matrix::zeros(rows, cols);
        let mut r0 = 0;
        for (i, b) in self.bases.iter().enumerate() {
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    out.set(r0 + r, i * self.zeta + c, b.get(r, c));
                }
            }
            r0 += b.rows();
        }
        out
    }
}

pub fn support_contains(outer: &SumRankSupport, inner: &SumRankSupport, ctx: &FieldContext) -> Result<bool> {
    outer.contains(inner, &ctx.base)
}

pub fn hamming_weight(x: &[Elem]) -> usize {
    x.iter().filter(|&&v| v != 0).count()
}

pub fn rank_weight(x: &[Elem], ctx: &FieldContext) -> usize {
    expand(x, ctx).rank(&ctx.base)
}
