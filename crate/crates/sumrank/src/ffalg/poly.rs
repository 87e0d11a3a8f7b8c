//! Dense univariate polynomials over a `Field`, coefficients constant term
//! first. Results are trimmed of leading zeros.

use super::field::{Elem, Field};

pub fn trim(mut a: Vec<Elem>) -> Vec<Elem> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Degree, or None for the zero polynomial.
pub fn degree(a: &[Elem]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn sub<F: Field>(f: &F, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            f.sub(x, y)
        })
        .collect();
    trim(out)
}

pub fn mul<F: Field>(f: &F, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// Remainder of `a` modulo the nonzero polynomial `m`.
pub fn rem<F: Field>(f: &F, a: &[Elem], m: &[Elem]) -> Vec<Elem> {
    let dm = degree(m).expect("division by zero polynomial");
    let lead_inv = f.inv(m[dm]);
    let mut r = trim(a.to_vec());
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let c = f.mul(r[dr], lead_inv);
        let shift = dr - dm;
        for (i, &mc) in m[..=dm].iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, mc));
        }
        r = trim(r);
    }
    r
}

pub fn gcd<F: Field>(f: &F, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    if let Some(d) = degree(&a) {
        let inv = f.inv(a[d]);
        a = a.iter().map(|&c| f.mul(c, inv)).collect();
    }
    a
}

pub fn pow_mod<F: Field>(f: &F, base: &[Elem], mut e: u64, m: &[Elem]) -> Vec<Elem> {
    let mut acc = vec![1];
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(f, &mul(f, &acc, &b), m);
        }
        e >>= 1;
        if e > 0 {
            b = rem(f, &mul(f, &b, &b), m);
        }
    }
    acc
}

/// Ben-Or irreducibility test: f of degree d is irreducible iff
/// gcd(f, x^(Q^i) - x) = 1 for all i <= d/2, where Q is the field order.
pub fn is_irreducible<F: Field>(f: &F, a: &[Elem]) -> bool {
    let d = match degree(a) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if d == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut h = x.clone();
    for _ in 1..=d / 2 {
        h = pow_mod(f, &h, f.order(), a);
        let g = gcd(f, a, &sub(f, &h, &x));
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}
