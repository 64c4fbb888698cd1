//! Finite fields `F_{p^k}` with table-driven arithmetic.
//!
//! Elements are stored as integers whose base-`p` digits are the coefficients
//! of the reduced polynomial representative (digit `i` is the coefficient of
//! `x^i`). The modulus is the smallest monic irreducible of degree `k` when
//! monic polynomials are ordered by that same integer encoding of their
//! lower coefficients.

use std::fmt;
use std::sync::Arc;

use super::arith::{is_prime, prime_factors};
use crate::error::{Error, Result};

/// Largest field size we build tables for.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// A field element; only meaningful together with its [`FqField`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

pub struct FqField {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
    neg: Vec<u32>,
}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k
    }
}

impl Eq for FqField {}

// Slow polynomial arithmetic over F_p on digit vectors, used to bootstrap tables.
fn digits(mut a: u32, p: u32, k: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(k as usize);
    for _ in 0..k {
        v.push(a % p);
        a /= p;
    }
    v
}

fn undigits(v: &[u32], p: u32) -> u32 {
    v.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn slow_mul(a: u32, b: u32, p: u32, modulus: &[u32]) -> u32 {
    let k = modulus.len() - 1;
    let da = digits(a, p, k as u32);
    let db = digits(b, p, k as u32);
    let mut prod = vec![0u64; 2 * k.max(1)];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + u64::from(x) * u64::from(y)) % u64::from(p);
        }
    }
    for deg in (k..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for (i, &m) in modulus[..k].iter().enumerate() {
            let idx = deg - k + i;
            prod[idx] = (prod[idx] + u64::from(p) * u64::from(p) - c * u64::from(m)) % u64::from(p);
        }
    }
    let low: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
    undigits(&low, p)
}

fn slow_pow(mut b: u32, mut e: u64, p: u32, modulus: &[u32]) -> u32 {
    let mut r = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            r = slow_mul(r, b, p, modulus);
        }
        b = slow_mul(b, b, p, modulus);
        e >>= 1;
    }
    r
}

/// `f mod g` over F_p with dense coefficient vectors (low to high).
fn fp_poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = f.iter().map(|&c| u64::from(c)).collect();
    let dg = g.len() - 1;
    let lead_inv = super::arith::pow_mod(u64::from(g[dg]), u64::from(p) - 2, u64::from(p));
    let p64 = u64::from(p);
    while r.len() > dg {
        let c = r[r.len() - 1] * lead_inv % p64;
        let shift = r.len() - 1 - dg;
        for (i, &gi) in g.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p64 * p64 - c * u64::from(gi)) % p64;
        }
        r.pop();
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

fn fp_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    if n <= 1 {
        return true;
    }
    // Trial division by every monic polynomial of degree 1..=n/2.
    for d in 1..=n / 2 {
        let count = u64::from(p).pow(d as u32);
        for low in 0..count {
            let mut g = digits(low as u32, p, d as u32);
            g.push(1);
            if fp_poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FqField {
    /// Builds `F_{p^k}`.
    pub fn new(p: u32, k: u32) -> Result<Arc<FqField>> {
        if !is_prime(u64::from(p)) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidInput("field degree must be positive".into()));
        }
        let q64 = u64::from(p)
            .checked_pow(k)
            .filter(|&q| q <= MAX_FIELD_SIZE)
            .ok_or_else(|| Error::InvalidInput(format!("field {p}^{k} is too large")))?;
        let q = q64 as u32;
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            (0..q)
                .map(|low| {
                    let mut m = digits(low, p, k);
                    m.push(1);
                    m
                })
                .find(|m| fp_irreducible(m, p))
                .expect("irreducible polynomials exist in every degree")
        };
        let order = u64::from(q - 1);
        let factors = prime_factors(order);
        let gen = (1..q)
            .find(|&g| {
                slow_pow(g, order, p, &modulus) == 1
                    && factors.iter().all(|&r| slow_pow(g, order / r, p, &modulus) != 1)
            })
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..(q - 1) {
            exp.push(x);
            log[x as usize] = i;
            x = slow_mul(x, gen, p, &modulus);
        }
        let neg: Vec<u32> = (0..q)
            .map(|a| {
                let d: Vec<u32> = digits(a, p, k).into_iter().map(|c| (p - c) % p).collect();
                undigits(&d, p)
            })
            .collect();
        let add_table = (p != 2 && q <= 256).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = digit_add(a, b, p, k);
                }
            }
            t
        });
        Ok(Arc::new(FqField { p, k, q, modulus, exp, log, add_table, neg }))
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Arc<FqField>> {
        FqField::new(p, 1)
    }

    /// `F_q` for a prime power `q`.
    pub fn of_size(q: u64) -> Result<Arc<FqField>> {
        let (p, k) = super::arith::prime_power(q)
            .ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))?;
        FqField::new(p as u32, k)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        u64::from(self.q)
    }

    /// Modulus coefficients, constant term first; monic of degree `k`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(i64::from(self.p)) as u32)
    }

    /// Checked constructor from the integer encoding.
    pub fn elem(&self, raw: u32) -> Result<Fe> {
        if raw < self.q {
            Ok(Fe(raw))
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// The class of `x` in `F_p[x]/(modulus)`; zero when `k = 1`.
    pub fn x(&self) -> Fe {
        if self.k == 1 {
            Fe(0)
        } else {
            Fe(self.p)
        }
    }

    /// The primitive element used for discrete logarithms.
    pub fn generator(&self) -> Fe {
        Fe(self.exp.get(1).copied().unwrap_or(1))
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q).map(Fe)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        match &self.add_table {
            Some(t) => Fe(t[(a.0 * self.q + b.0) as usize]),
            None => Fe(digit_add(a.0, b.0, self.p, self.k)),
        }
    }

    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.0 as usize])
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let n = self.q as usize - 1;
        let s = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        Fe(self.exp[if s >= n { s - n } else { s }])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.q as usize - 1;
        let l = self.log[a.0 as usize] as usize;
        Ok(Fe(self.exp[(n - l) % n]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        let n = u64::from(self.q) - 1;
        let l = u64::from(self.log[a.0 as usize]);
        Fe(self.exp[((l % n) * (e % n) % n) as usize])
    }

    /// Integer powers, negative exponents allowed for nonzero `a`.
    pub fn pow_i(&self, a: Fe, e: i64) -> Result<Fe> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }

    /// `a ↦ a^{p^n}`.
    pub fn frobenius(&self, a: Fe, n: u32) -> Fe {
        let n = n % self.k;
        self.pow(a, u64::from(self.p).pow(n))
    }

    /// Discrete logarithm with respect to [`FqField::generator`].
    pub fn log(&self, a: Fe) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(u64::from(self.log[a.0 as usize]))
    }

    /// The primitive `m`-th root of unity `g^{(q-1)/m}`, if `m | q-1`.
    pub fn root_of_unity(&self, m: u64) -> Option<Fe> {
        let n = u64::from(self.q) - 1;
        (m > 0 && n % m == 0).then(|| Fe(self.exp[(n / m) as usize % self.exp.len()]))
    }

    /// All `x` with `x^m = a`, sorted by integer encoding.
    pub fn nth_roots(&self, a: Fe, m: u64) -> Vec<Fe> {
        if m == 0 {
            return Vec::new();
        }
        if a.0 == 0 {
            return vec![Fe::ZERO];
        }
        let n = u64::from(self.q) - 1;
        let la = u64::from(self.log[a.0 as usize]);
        let mm = m % n;
        let mut out: Vec<Fe> = (0..n)
            .filter(|&x| (x * mm) % n == la)
            .map(|x| Fe(self.exp[x as usize]))
            .collect();
        out.sort();
        out
    }

    /// Whether `a` lies in the subfield of size `q_sub`.
    pub fn in_subfield(&self, a: Fe, q_sub: u64) -> bool {
        self.pow(a, q_sub) == a
    }

    /// Renders `a` as a polynomial in `x` (or an integer in a prime field).
    pub fn format(&self, a: Fe) -> String {
        let d = digits(a.0, self.p, self.k);
        if self.k == 1 {
            return d[0].to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    /// Embeds `self` into `big` by sending `x` to the smallest root of the
    /// modulus of `self` in `big`.
    pub fn embed_into(self: &Arc<Self>, big: &Arc<FqField>) -> Result<FieldEmbedding> {
        if self.p != big.p || !big.k.is_multiple_of(self.k) {
            return Err(Error::FieldMismatch);
        }
        let table: Vec<u32> = if self.k == 1 {
            (0..self.q).collect()
        } else {
            let root = big
                .elements()
                .find(|&r| {
                    let mut acc = Fe::ZERO;
                    for &c in self.modulus.iter().rev() {
                        acc = big.add(big.mul(acc, r), Fe(c));
                    }
                    acc.is_zero()
                })
                .ok_or(Error::FieldMismatch)?;
            let powers: Vec<Fe> =
                (0..self.k).map(|i| big.pow(root, u64::from(i))).collect();
            (0..self.q)
                .map(|a| {
                    digits(a, self.p, self.k)
                        .iter()
                        .zip(&powers)
                        .fold(Fe::ZERO, |acc, (&c, &pw)| big.add(acc, big.mul(Fe(c), pw)))
                        .0
                })
                .collect()
        };
        Ok(FieldEmbedding { src: Arc::clone(self), dst: Arc::clone(big), table })
    }
}

fn digit_add(a: u32, b: u32, p: u32, k: u32) -> u32 {
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..k {
        out += ((a % p + b % p) % p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

/// A field embedding `F_{p^a} → F_{p^b}` stored as a lookup table.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    src: Arc<FqField>,
    dst: Arc<FqField>,
    table: Vec<u32>,
}

impl FieldEmbedding {
    pub fn src(&self) -> &Arc<FqField> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<FqField> {
        &self.dst
    }

    pub fn map(&self, a: Fe) -> Fe {
        Fe(self.table[a.0 as usize])
    }

    /// Composite `other ∘ self`.
    pub fn then(&self, other: &FieldEmbedding) -> Result<FieldEmbedding> {
        if *self.dst != *other.src {
            return Err(Error::FieldMismatch);
        }
        let table = self.table.iter().map(|&a| other.table[a as usize]).collect();
        Ok(FieldEmbedding { src: Arc::clone(&self.src), dst: Arc::clone(&other.dst), table })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn f4_frobenius_sends_x_to_x_plus_one() {
        let f = FqField::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let x = f.x();
        assert_eq!(f.format(f.frobenius(x, 1)), "x+1");
    }

    #[test]
    fn f3_small_power() {
        let f = FqField::prime(3).unwrap();
        assert_eq!(f.pow(Fe(2), 2), Fe(1));
    }

    #[test]
    fn f8_modulus_is_smallest() {
        // x^3 + x + 1 precedes x^3 + x^2 + 1.
        let f = FqField::new(2, 3).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn inverse_of_zero_fails() {
        let f = FqField::prime(5).unwrap();
        assert_eq!(f.inv(Fe(0)), Err(Error::DivisionByZero));
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let small = FqField::new(3, 2).unwrap();
        let big = FqField::new(3, 4).unwrap();
        let emb = small.embed_into(&big).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(emb.map(small.mul(a, b)), big.mul(emb.map(a), emb.map(b)));
                assert_eq!(emb.map(small.add(a, b)), big.add(emb.map(a), emb.map(b)));
            }
        }
    }

    #[test]
    fn nth_roots_match_brute_force() {
        let f = FqField::new(3, 2).unwrap();
        for a in f.elements() {
            for m in 1..10u64 {
                let brute: Vec<Fe> = f.elements().filter(|&x| f.pow(x, m) == a).collect();
                assert_eq!(f.nth_roots(a, m), brute, "a={a:?} m={m}");
            }
        }
    }

    fn field_and_pair() -> impl Strategy<Value = (u32, u32, u32, u32)> {
        prop_oneof![Just((2u32, 3u32)), Just((3, 2)), Just((2, 4)), Just((5, 1)), Just((5, 2))]
            .prop_flat_map(|(p, k)| {
                let q = p.pow(k);
                (Just(p), Just(k), 0..q, 0..q)
            })
    }

    proptest! {
        #[test]
        fn frobenius_is_multiplicative((p, k, a, b) in field_and_pair()) {
            let f = FqField::new(p, k).unwrap();
            let (a, b) = (Fe(a), Fe(b));
            prop_assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
            prop_assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
        }

        #[test]
        fn frobenius_fixes_prime_field((p, k, a, _b) in field_and_pair()) {
            let f = FqField::new(p, k).unwrap();
            let c = f.from_int(i64::from(a));
            prop_assert_eq!(f.frobenius(c, 1), c);
        }

        #[test]
        fn mul_inv_is_one((p, k, a, _b) in field_and_pair()) {
            let f = FqField::new(p, k).unwrap();
            prop_assume!(a != 0);
            prop_assert_eq!(f.mul(Fe(a), f.inv(Fe(a)).unwrap()), Fe::ONE);
        }

        #[test]
        fn table_arithmetic_matches_slow_path((p, k, a, b) in field_and_pair()) {
            let f = FqField::new(p, k).unwrap();
            prop_assert_eq!(f.mul(Fe(a), Fe(b)).0, slow_mul(a, b, p, f.modulus()));
            prop_assert_eq!(f.add(Fe(a), Fe(b)).0, digit_add(a, b, p, k));
        }
    }
}
