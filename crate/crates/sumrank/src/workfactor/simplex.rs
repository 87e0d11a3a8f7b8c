//! Dense two-phase simplex over exact rationals with Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpOptimum),
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpOptimum {
    pub x: Vec<BigRational>,
    pub value: BigRational,
    /// Dual solution y >= 0 with A^T y >= c and b^T y = value.
    pub dual: Vec<BigRational>,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
    obj: Vec<BigRational>,
    obj_value: BigRational,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        self.rhs[r] *= &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (v, p) in self.rows[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (v, p) in self.obj.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
            self.obj_value -= &f * &prhs;
        }
        self.basis[r] = c;
    }

    /// Sets the objective row to reduced costs of maximising `cost`.
    fn set_objective(&mut self, cost: &[BigRational]) {
        self.obj = cost.iter().map(|c| -c).collect();
        self.obj_value = BigRational::zero();
        for r in 0..self.rows.len() {
            let cb = cost[self.basis[r]].clone();
            if cb.is_zero() {
                continue;
            }
            for (v, a) in self.obj.iter_mut().zip(&self.rows[r]) {
                *v += &cb * a;
            }
            self.obj_value += &cb * &self.rhs[r];
        }
    }

    /// Runs Bland's rule on columns `< allowed`. Returns false when unbounded.
    fn optimise(&mut self, allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, BigRational)> = None;
            for r in 0..self.rows.len() {
                if !self.rows[r][c].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / &self.rows[r][c];
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

/// Maximises c^T x subject to A x <= b and x >= 0.
pub fn maximize(c: &[BigRational], a: &[Vec<BigRational>], b: &[BigRational]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    let artificial_rows: Vec<usize> = (0..m).filter(|&i| b[i].is_negative()).collect();
    let width = n + m + artificial_rows.len();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![BigRational::zero(); width];
        let flip = b[i].is_negative();
        for j in 0..n {
            row[j] = if flip { -&a[i][j] } else { a[i][j].clone() };
        }
        row[n + i] = if flip { -BigRational::one() } else { BigRational::one() };
        if flip {
            let k = artificial_rows.iter().position(|&r| r == i).unwrap();
            row[n + m + k] = BigRational::one();
            basis.push(n + m + k);
            rhs.push(-&b[i]);
        } else {
            basis.push(n + i);
            rhs.push(b[i].clone());
        }
        rows.push(row);
    }
    let mut tab = Tableau { rows, rhs, basis, obj: vec![], obj_value: BigRational::zero() };

    if !artificial_rows.is_empty() {
        let mut cost = vec![BigRational::zero(); width];
        for v in cost.iter_mut().skip(n + m) {
            *v = -BigRational::one();
        }
        tab.set_objective(&cost);
        tab.optimise(width);
        if tab.obj_value.is_negative() {
            return LpOutcome::Infeasible;
        }
        // drive zero-level artificials out of the basis; drop redundant rows
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= n + m {
                match (0..n + m).find(|&j| !tab.rows[r][j].is_zero()) {
                    Some(j) => tab.pivot(r, j),
                    None => {
                        tab.rows.remove(r);
                        tab.rhs.remove(r);
                        tab.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    let mut cost = vec![BigRational::zero(); width];
    cost[..n].clone_from_slice(c);
    tab.set_objective(&cost);
    if !tab.optimise(n + m) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![BigRational::zero(); n];
    for (r, &bv) in tab.basis.iter().enumerate() {
        if bv < n {
            x[bv] = tab.rhs[r].clone();
        }
    }
    let dual = (0..m).map(|i| tab.obj[n + i].clone()).collect();
    LpOutcome::Optimal(LpOptimum { x, value: tab.obj_value.clone(), dual })
}

/// Checks primal feasibility, dual feasibility and equal objectives.
pub fn verify_certificate(c: &[BigRational], a: &[Vec<BigRational>], b: &[BigRational], opt: &LpOptimum) -> bool {
    let primal_ok = opt.x.iter().all(|v| !v.is_negative())
        && a.iter().zip(b).all(|(row, bi)| {
            let lhs: BigRational = row.iter().zip(&opt.x).map(|(a, x)| a * x).sum();
            lhs <= *bi
        });
    let dual_ok = opt.dual.iter().all(|v| !v.is_negative())
        && (0..c.len()).all(|j| {
            let col: BigRational = a.iter().zip(&opt.dual).map(|(row, y)| &row[j] * y).sum();
            col >= c[j]
        });
    let primal: BigRational = c.iter().zip(&opt.x).map(|(c, x)| c * x).sum();
    let dual: BigRational = b.iter().zip(&opt.dual).map(|(b, y)| b * y).sum();
    primal_ok && dual_ok && primal == opt.value && dual == opt.value
}
