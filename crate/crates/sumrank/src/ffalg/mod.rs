//! Finite fields GF(q) and GF(q^m), dense matrices, and the coordinate
//! expansion of GF(q^m)-vectors into GF(q)-matrices.

mod field;
mod matrix;
pub mod poly;

pub use field::{make_field, prime_power, BaseField, Elem, ExtField, Extension, Field, FieldContext, PrimeField};
pub use matrix::{Matrix, Solution};

/// Expands `x` in GF(q^m)^r into the m x r matrix over GF(q) whose j-th
/// column holds the coordinates of `x[j]`.
pub fn expand(x: &[Elem], ctx: &FieldContext) -> Matrix {
    let mut out = Matrix::zeros(ctx.m, x.len());
    for (j, &v) in x.iter().enumerate() {
        for (i, c) in ctx.coords(v).into_iter().enumerate() {
            out.set(i, j, c);
        }
    }
    out
}

/// Inverse of [`expand`]: reads each column as the coordinates of one
/// GF(q^m) element.
pub fn collapse(m: &Matrix, ctx: &FieldContext) -> Vec<Elem> {
    (0..m.cols()).map(|j| ctx.from_coords(&m.column(j))).collect()
}

/// GF(q)-rank of the expansion of `x`.
pub fn fq_rank(x: &[Elem], ctx: &FieldContext) -> usize {
    expand(x, ctx).rank(&ctx.base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx_strategy() -> impl Strategy<Value = FieldContext> {
        prop::sample::select(vec![(2u64, 1usize), (2, 3), (2, 8), (3, 2), (4, 2), (5, 1), (9, 2), (2, 21), (3, 14)])
            .prop_map(|(q, m)| make_field(q, m).unwrap())
    }

    proptest! {
        #[test]
        fn field_axioms(ctx in ctx_strategy(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
            let f = &ctx.ext;
            let n = f.order();
            let (a, b, c) = (a % n, b % n, c % n);
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(a, f.neg(a)), 0);
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
            prop_assert_eq!(f.mul(a, 1), a);
            if a != 0 {
                prop_assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }

        #[test]
        fn expansion_roundtrip(ctx in ctx_strategy(), xs in prop::collection::vec(any::<u64>(), 0..6)) {
            let n = ctx.ext.order();
            let xs: Vec<u64> = xs.into_iter().map(|x| x % n).collect();
            let m = expand(&xs, &ctx);
            prop_assert_eq!(m.rows(), ctx.m);
            prop_assert_eq!(collapse(&m, &ctx), xs);
        }

        #[test]
        fn expansion_is_fq_linear(ctx in ctx_strategy(), a in any::<u64>(), b in any::<u64>(), lam in any::<u64>()) {
            let (n, q) = (ctx.ext.order(), ctx.q);
            let (a, b, lam) = (a % n, b % n, lam % q);
            let lhs = ctx.coords(ctx.ext.add(ctx.ext.mul(lam, a), b));
            let ca = ctx.coords(a);
            let cb = ctx.coords(b);
            let rhs: Vec<u64> = ca.iter().zip(&cb).map(|(&x, &y)| ctx.base.add(ctx.base.mul(lam, x), y)).collect();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
