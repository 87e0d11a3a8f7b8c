use std::sync::Arc;

use super::poly;
use crate::{Error, Result};

/// Field elements are encoded as integers whose base-p digits are the
/// coordinates over the prime field, least significant first.
pub type Elem = u64;

const TABLE_LIMIT: u64 = 1 << 16;

pub trait Field {
    fn order(&self) -> u64;
    fn characteristic(&self) -> u64;
    fn add(&self, a: Elem, b: Elem) -> Elem;
    fn neg(&self, a: Elem) -> Elem;
    fn mul(&self, a: Elem, b: Elem) -> Elem;

    /// Multiplicative inverse. Panics on zero.
    fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero");
        self.pow(a, self.order() - 2)
    }

    fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn add_digits(a: Elem, b: Elem, p: u64) -> Elem {
    if p == 2 {
        return a ^ b;
    }
    let (mut a, mut b) = (a, b);
    let mut out = 0u64;
    let mut place = 1u64;
    while a != 0 || b != 0 {
        let d = (a % p + b % p) % p;
        out += d * place;
        a /= p;
        b /= p;
        place = place.wrapping_mul(p);
    }
    out
}

fn neg_digits(a: Elem, p: u64) -> Elem {
    if p == 2 {
        return a;
    }
    let mut a = a;
    let mut out = 0u64;
    let mut place = 1u64;
    while a != 0 {
        let d = (p - a % p) % p;
        out += d * place;
        a /= p;
        place = place.wrapping_mul(p);
    }
    out
}

#[derive(Clone, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        PrimeField { p }
    }
}

impl Field for PrimeField {
    fn order(&self) -> u64 {
        self.p
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn add(&self, a: Elem, b: Elem) -> Elem {
        ((a as u128 + b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: Elem) -> Elem {
        (self.p - a) % self.p
    }
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }
}

#[derive(Debug)]
struct LogTables {
    exp: Vec<Elem>,
    log: Vec<u32>,
}

/// Simple extension of degree `degree` over `sub`, in the polynomial basis
/// defined by the lexicographically smallest monic irreducible modulus.
#[derive(Clone, Debug)]
pub struct Extension<F> {
    sub: F,
    degree: usize,
    sub_order: u64,
    order: u64,
    p: u64,
    modulus: Vec<Elem>,
    tables: Option<Arc<LogTables>>,
}

impl<F: Field> Extension<F> {
    pub fn new(sub: F, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidDegree);
        }
        let sub_order = sub.order();
        let order = checked_order(sub_order, degree)
            .ok_or(Error::FieldTooLarge { q: sub_order, m: degree })?;
        let modulus = smallest_irreducible(&sub, degree);
        let p = sub.characteristic();
        let mut field = Extension { sub, degree, sub_order, order, p, modulus, tables: None };
        if order <= TABLE_LIMIT {
            field.tables = Some(Arc::new(field.build_tables()));
        }
        Ok(field)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn subfield(&self) -> &F {
        &self.sub
    }

    /// Coefficients of the monic modulus, constant term first.
    pub fn modulus(&self) -> &[Elem] {
        &self.modulus
    }

    /// Coordinates over the subfield, constant term first.
    pub fn to_coords(&self, a: Elem) -> Vec<Elem> {
        let mut a = a;
        (0..self.degree)
            .map(|_| {
                let d = a % self.sub_order;
                a /= self.sub_order;
                d
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[Elem]) -> Elem {
        coords.iter().rev().fold(0u64, |acc, &c| acc * self.sub_order + c)
    }

    fn build_tables(&self) -> LogTables {
        let n = (self.order - 1) as usize;
        if n == 0 {
            return LogTables { exp: vec![], log: vec![] };
        }
        let mut exp = vec![0; 2 * n];
        for g in 1..self.order {
            let mut x = 1u64;
            let mut period = 0usize;
            for k in 0..n {
                exp[k] = x;
                x = self.mul_slow(x, g);
                period = k + 1;
                if x == 1 {
                    break;
                }
            }
            if period == n {
                break;
            }
        }
        for k in 0..n {
            exp[n + k] = exp[k];
        }
        let mut log = vec![0u32; self.order as usize];
        for (k, &x) in exp[..n].iter().enumerate() {
            log[x as usize] = k as u32;
        }
        LogTables { exp, log }
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.sub_order == 2 {
            return self.mul_binary(a, b);
        }
        let pa = self.to_coords(a);
        let pb = self.to_coords(b);
        let prod = poly::mul(&self.sub, &pa, &pb);
        let mut r = poly::rem(&self.sub, &prod, &self.modulus);
        r.resize(self.degree, 0);
        self.from_coords(&r)
    }

    fn mul_binary(&self, a: Elem, b: Elem) -> Elem {
        let mut prod: u128 = 0;
        let mut b = b as u128;
        let mut a = a as u128;
        while b != 0 {
            if b & 1 == 1 {
                prod ^= a;
            }
            a <<= 1;
            b >>= 1;
        }
        let d = self.degree;
        let modbits: u128 = self
            .modulus
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &c)| acc | ((c as u128) << i));
        for i in (d..2 * d).rev() {
            if (prod >> i) & 1 == 1 {
                prod ^= modbits << (i - d);
            }
        }
        prod as u64
    }
}

fn checked_order(q: u64, m: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..m {
        acc = acc.checked_mul(q)?;
    }
    if acc >= 1 << 63 {
        None
    } else {
        Some(acc)
    }
}

/// Monic irreducible of the given degree that is smallest when coefficients
/// are compared from the constant term upwards.
fn smallest_irreducible<F: Field>(f: &F, degree: usize) -> Vec<Elem> {
    let q = f.order();
    let mut digits = vec![0u64; degree];
    // a zero constant term means x divides the candidate
    if degree > 1 {
        digits[0] = 1;
    }
    loop {
        let mut cand: Vec<Elem> = digits.clone();
        cand.push(1);
        if poly::is_irreducible(f, &cand) {
            return cand;
        }
        // digits[0] is the most significant position
        let mut i = degree;
        loop {
            i -= 1;
            digits[i] += 1;
            if digits[i] < q {
                break;
            }
            digits[i] = 0;
            assert!(i > 0, "no irreducible polynomial found");
        }
    }
}

impl<F: Field> Field for Extension<F> {
    fn order(&self) -> u64 {
        self.order
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn add(&self, a: Elem, b: Elem) -> Elem {
        add_digits(a, b, self.p)
    }
    fn neg(&self, a: Elem) -> Elem {
        neg_digits(a, self.p)
    }
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => {
                if a == 0 || b == 0 {
                    0
                } else {
                    t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
                }
            }
            None => self.mul_slow(a, b),
        }
    }
    fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero");
        match &self.tables {
            Some(t) => {
                let n = (self.order - 1) as u32;
                t.exp[((n - t.log[a as usize]) % n) as usize]
            }
            None => self.pow(a, self.order - 2),
        }
    }
}

pub type BaseField = Extension<PrimeField>;
pub type ExtField = Extension<BaseField>;

/// GF(q) together with its degree-m extension GF(q^m).
#[derive(Clone, Debug)]
pub struct FieldContext {
    pub q: u64,
    pub m: usize,
    pub base: BaseField,
    pub ext: ExtField,
}

/// Builds GF(q) and GF(q^m). `q` must be a prime power and q^m < 2^63.
pub fn make_field(q: u64, m: usize) -> Result<FieldContext> {
    let (p, e) = prime_power(q).ok_or(Error::NotAPrimePower(q))?;
    if m == 0 {
        return Err(Error::InvalidDegree);
    }
    if checked_order(q, m).is_none() {
        return Err(Error::FieldTooLarge { q, m });
    }
    let base = Extension::new(PrimeField::new(p), e as usize)?;
    let ext = Extension::new(base.clone(), m)?;
    Ok(FieldContext { q, m, base, ext })
}

/// Returns (p, e) with q = p^e, or None when q is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q % p == 0 {
            break;
        }
        p += 1;
    }
    if q % p != 0 {
        return Some((q, 1));
    }
    let mut r = q;
    let mut e = 0;
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    if r == 1 {
        Some((p, e))
    } else {
        None
    }
}

impl FieldContext {
    /// Coordinates of a GF(q^m) element over GF(q) in the polynomial basis.
    pub fn coords(&self, a: Elem) -> Vec<Elem> {
        self.ext.to_coords(a)
    }

    pub fn from_coords(&self, coords: &[Elem]) -> Elem {
        self.ext.from_coords(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(1024), Some((2, 10)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(97), Some((97, 1)));
    }

    #[test]
    fn moduli_follow_ordering_convention() {
        let f4 = make_field(4, 1).unwrap();
        assert_eq!(f4.base.modulus(), &[1, 1, 1]);
        let f9 = make_field(9, 1).unwrap();
        assert_eq!(f9.base.modulus(), &[1, 0, 1]);
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(f2.ext.modulus(), &[0, 1]);
    }

    #[test]
    fn gf4_multiplication() {
        let f = make_field(4, 1).unwrap().base;
        // alpha = x = 2, alpha^2 = alpha + 1 = 3
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.mul(2, 3), 1);
        assert_eq!(f.inv(3), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(make_field(6, 2).unwrap_err(), Error::NotAPrimePower(6));
        assert_eq!(make_field(2, 0).unwrap_err(), Error::InvalidDegree);
        assert!(matches!(make_field(2, 64), Err(Error::FieldTooLarge { .. })));
        assert!(make_field(2, 62).is_ok());
    }

    #[test]
    fn untabled_binary_matches_generic() {
        // GF(2^20) skips the tables and uses carry-less multiplication
        let ctx = make_field(2, 20).unwrap();
        let f = &ctx.ext;
        let a = 0x9_1234;
        let b = 0x5_4321;
        let pa = f.to_coords(a);
        let pb = f.to_coords(b);
        let prod = poly::mul(f.subfield(), &pa, &pb);
        let mut r = poly::rem(f.subfield(), &prod, f.modulus());
        r.resize(20, 0);
        assert_eq!(f.mul(a, b), f.from_coords(&r));
        assert_eq!(f.mul(a, f.inv(a)), 1);
    }
}
