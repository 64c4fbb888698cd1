//! Dense univariate polynomials over `F_q` and enumeration of irreducibles.

use std::fmt;
use std::sync::Arc;

use super::ff::{Fe, FqField};
use crate::error::{Error, Result};

/// A polynomial in `t` over an [`FqField`], coefficients constant term first.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyFq {
    field: Arc<FqField>,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for PolyFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl PolyFq {
    pub fn new(field: &Arc<FqField>, mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyFq { field: Arc::clone(field), coeffs }
    }

    pub fn zero(field: &Arc<FqField>) -> Self {
        PolyFq::new(field, Vec::new())
    }

    pub fn constant(field: &Arc<FqField>, c: Fe) -> Self {
        PolyFq::new(field, vec![c])
    }

    /// The monomial `t`.
    pub fn t(field: &Arc<FqField>) -> Self {
        PolyFq::new(field, vec![Fe::ZERO, Fe::ONE])
    }

    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&Fe::ONE)
    }

    fn check(&self, other: &PolyFq) -> Result<()> {
        if *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &PolyFq) -> Result<PolyFq> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| self.field.add(self.coeff(i), other.coeff(i))).collect();
        Ok(PolyFq::new(&self.field, c))
    }

    pub fn sub(&self, other: &PolyFq) -> Result<PolyFq> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| self.field.sub(self.coeff(i), other.coeff(i))).collect();
        Ok(PolyFq::new(&self.field, c))
    }

    pub fn mul(&self, other: &PolyFq) -> Result<PolyFq> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(PolyFq::zero(&self.field));
        }
        let f = &self.field;
        let mut c = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Ok(PolyFq::new(f, c))
    }

    pub fn scale(&self, c: Fe) -> PolyFq {
        let v = self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect();
        PolyFq::new(&self.field, v)
    }

    /// Euclidean division `(quotient, remainder)`.
    pub fn div_rem(&self, d: &PolyFq) -> Result<(PolyFq, PolyFq)> {
        self.check(d)?;
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let f = &self.field;
        let lead_inv = f.inv(d.coeffs[dd])?;
        let mut r = self.coeffs.clone();
        let mut q = vec![Fe::ZERO; r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let c = f.mul(r[top], lead_inv);
            let shift = top - dd;
            q[shift] = c;
            for (i, &di) in d.coeffs.iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(c, di));
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        Ok((PolyFq::new(f, q), PolyFq::new(f, r)))
    }

    pub fn rem(&self, d: &PolyFq) -> Result<PolyFq> {
        Ok(self.div_rem(d)?.1)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &PolyFq) -> Result<PolyFq> {
        self.check(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        match a.coeffs.last() {
            Some(&lead) => Ok(a.scale(self.field.inv(lead)?)),
            None => Ok(a),
        }
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &PolyFq) -> Result<PolyFq> {
        let mut base = self.rem(m)?;
        let mut acc = PolyFq::constant(&self.field, Fe::ONE).rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?.rem(m)?;
            }
            base = base.mul(&base)?.rem(m)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn eval(&self, x: Fe) -> Fe {
        self.coeffs.iter().rev().fold(Fe::ZERO, |acc, &c| self.field.add(self.field.mul(acc, x), c))
    }

    pub fn derivative(&self) -> PolyFq {
        let f = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(f.from_int(i as i64), a))
            .collect();
        PolyFq::new(f, c)
    }

    /// Rabin's test: `t^{q^d} ≡ t` and `gcd(t^{q^{d/r}} − t, f) = 1` for primes `r | d`.
    pub fn is_irreducible(&self) -> Result<bool> {
        let d = match self.degree() {
            None | Some(0) => return Ok(false),
            Some(1) => return Ok(true),
            Some(d) => d as u64,
        };
        let q = self.field.q();
        let t = PolyFq::t(&self.field);
        let frob_iter = |n: u64| -> Result<PolyFq> {
            let mut x = t.rem(self)?;
            for _ in 0..n {
                x = x.pow_mod(q, self)?;
            }
            Ok(x)
        };
        if !frob_iter(d)?.sub(&t)?.rem(self)?.is_zero() {
            return Ok(false);
        }
        for r in super::arith::prime_factors(d) {
            let g = frob_iter(d / r)?.sub(&t)?.gcd(self)?;
            if g.degree() != Some(0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All roots in the coefficient field, sorted by integer encoding.
    pub fn roots(&self) -> Vec<Fe> {
        self.field.elements().filter(|&x| self.eval(x).is_zero()).collect()
    }

    /// The same polynomial with coefficients pushed through an embedding.
    pub fn map_coeffs(&self, emb: &super::ff::FieldEmbedding) -> Result<PolyFq> {
        if **emb.src() != *self.field {
            return Err(Error::FieldMismatch);
        }
        Ok(PolyFq::new(emb.dst(), self.coeffs.iter().map(|&c| emb.map(c)).collect()))
    }
}

impl fmt::Display for PolyFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = self.field.format(c);
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            match (i, c == Fe::ONE) {
                (0, _) => write!(f, "{cs}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{cs}·t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{cs}·t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Monic irreducible polynomials of degree `d` over `field`, in lexicographic
/// order of the coefficient vector read from `t^{d-1}` down to the constant
/// term (element encodings compared as integers).
pub fn poly_irreducibles(field: &Arc<FqField>, d: usize) -> Result<Vec<PolyFq>> {
    if d == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    let q = field.q();
    let total = q
        .checked_pow(d as u32)
        .filter(|&n| n <= 1 << 24)
        .ok_or_else(|| Error::InvalidInput(format!("q^d = {q}^{d} is too large to enumerate")))?;
    let mut out = Vec::new();
    for idx in 0..total {
        let mut c = Vec::with_capacity(d + 1);
        let mut rest = idx;
        for _ in 0..d {
            c.push(Fe((rest % q) as u32));
            rest /= q;
        }
        c.push(Fe::ONE);
        let p = PolyFq::new(field, c);
        if p.is_irreducible()? {
            out.push(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::arith::necklace_count;
    use super::*;

    #[test]
    fn small_irreducibles() {
        let f2 = FqField::prime(2).unwrap();
        let d1: Vec<String> = poly_irreducibles(&f2, 1).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(d1, ["t", "t + 1"]);
        let d2: Vec<String> = poly_irreducibles(&f2, 2).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(d2, ["t^2 + t + 1"]);
        let f3 = FqField::prime(3).unwrap();
        let d1: Vec<String> = poly_irreducibles(&f3, 1).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(d1, ["t", "t + 1", "t + 2"]);
    }

    #[test]
    fn rabin_agrees_with_root_free_check_in_degree_two_and_three() {
        // For d ≤ 3, irreducible ⇔ no roots.
        let f = FqField::new(2, 2).unwrap();
        for d in 2..=3usize {
            let q = f.q();
            for idx in 0..q.pow(d as u32) {
                let mut c: Vec<Fe> = (0..d).map(|i| Fe(((idx / q.pow(i as u32)) % q) as u32)).collect();
                c.push(Fe::ONE);
                let p = PolyFq::new(&f, c);
                assert_eq!(p.is_irreducible().unwrap(), p.roots().is_empty(), "{p}");
            }
        }
    }

    #[test]
    fn necklace_counts_up_to_degree_six() {
        for q in [2u64, 3, 4] {
            let f = FqField::of_size(q).unwrap();
            for d in 1..=6usize {
                let n = poly_irreducibles(&f, d).unwrap().len() as u64;
                assert_eq!(n, necklace_count(q, d as u32), "q={q} d={d}");
            }
        }
    }

    #[test]
    fn division_identity() {
        let f = FqField::prime(5).unwrap();
        let a = PolyFq::new(&f, vec![Fe(1), Fe(2), Fe(3), Fe(4)]);
        let b = PolyFq::new(&f, vec![Fe(2), Fe(1)]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q.mul(&b).unwrap().add(&r).unwrap(), a);
        assert!(r.degree().unwrap_or(0) < 1);
    }
}
