//! Sparse Laurent series over `F_q` with exact precision bookkeeping.
//!
//! A series with precision `N` knows every coefficient of `z^m` for `m < N`
//! and nothing beyond; an exact series is a Laurent polynomial. Every
//! operation returns the tightest precision that follows from its inputs.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::ff::{Fe, FieldEmbedding, FqField};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries {
    field: Arc<FqField>,
    terms: BTreeMap<i64, Fe>,
    prec: Option<i64>,
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("z"))
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl TruncSeries {
    /// Builds a series from `(exponent, coefficient)` pairs; zero
    /// coefficients and exponents at or beyond `prec` are dropped.
    pub fn from_terms(
        field: &Arc<FqField>,
        terms: impl IntoIterator<Item = (i64, Fe)>,
        prec: Option<i64>,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if prec.is_some_and(|p| e >= p) {
                continue;
            }
            let slot = map.entry(e).or_insert(Fe::ZERO);
            *slot = field.add(*slot, c);
        }
        map.retain(|_, c| !c.is_zero());
        TruncSeries { field: Arc::clone(field), terms: map, prec }
    }

    /// Dense coefficients `c[i]` at exponent `start + i`.
    pub fn from_coeffs(field: &Arc<FqField>, start: i64, coeffs: &[Fe], prec: Option<i64>) -> Self {
        TruncSeries::from_terms(
            field,
            coeffs.iter().enumerate().map(|(i, &c)| (start + i as i64, c)),
            prec,
        )
    }

    pub fn zero(field: &Arc<FqField>) -> Self {
        TruncSeries::from_terms(field, [], None)
    }

    /// `O(z^n)`.
    pub fn big_o(field: &Arc<FqField>, n: i64) -> Self {
        TruncSeries::from_terms(field, [], Some(n))
    }

    pub fn one(field: &Arc<FqField>) -> Self {
        TruncSeries::monomial(field, Fe::ONE, 0)
    }

    pub fn constant(field: &Arc<FqField>, c: Fe) -> Self {
        TruncSeries::monomial(field, c, 0)
    }

    /// `c·z^n`, exact.
    pub fn monomial(field: &Arc<FqField>, c: Fe, n: i64) -> Self {
        TruncSeries::from_terms(field, [(n, c)], None)
    }

    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    /// `None` for exact series.
    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Fe)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `z^n`; errors if `n` lies beyond the precision.
    pub fn coeff(&self, n: i64) -> Result<Fe> {
        if self.prec.is_some_and(|p| n >= p) {
            return Err(Error::InsufficientPrecision(format!("coefficient of z^{n} unknown")));
        }
        Ok(self.terms.get(&n).copied().unwrap_or(Fe::ZERO))
    }

    /// Order of the leading term, `None` when no nonzero term is known.
    pub fn ord(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Leading `(exponent, coefficient)`.
    pub fn lead(&self) -> Option<(i64, Fe)> {
        self.terms.iter().next().map(|(&e, &c)| (e, c))
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// True when every known coefficient is zero (exactly zero or `O(z^N)`).
    pub fn is_zero_within_precision(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.prec.is_none()
    }

    /// Lower bound for the order: `ord`, or the precision for `O(z^N)`.
    fn effective_ord(&self) -> Option<i64> {
        self.ord().or(self.prec)
    }

    /// Relative precision `prec − ord`, `None` if exact or undetermined.
    pub fn rel_prec(&self) -> Option<i64> {
        Some(self.prec? - self.ord()?)
    }

    fn check(&self, other: &TruncSeries) -> Result<()> {
        if *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Lowers the precision to at most `n`.
    pub fn truncate(&self, n: i64) -> TruncSeries {
        let prec = min_opt(self.prec, Some(n));
        TruncSeries::from_terms(&self.field, self.terms(), prec)
    }

    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check(other)?;
        let prec = min_opt(self.prec, other.prec);
        Ok(TruncSeries::from_terms(&self.field, self.terms().chain(other.terms()), prec))
    }

    pub fn neg(&self) -> TruncSeries {
        let f = &self.field;
        TruncSeries::from_terms(f, self.terms().map(|(e, c)| (e, f.neg(c))), self.prec)
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fe) -> TruncSeries {
        if c.is_zero() {
            return TruncSeries::zero(&self.field);
        }
        let f = &self.field;
        TruncSeries::from_terms(f, self.terms().map(|(e, a)| (e, f.mul(a, c))), self.prec)
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> TruncSeries {
        TruncSeries::from_terms(&self.field, self.terms().map(|(e, c)| (e + k, c)), self.prec.map(|p| p + k))
    }

    pub fn mul(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check(other)?;
        if self.is_exact_zero() || other.is_exact_zero() {
            return Ok(TruncSeries::zero(&self.field));
        }
        let ea = self.effective_ord().expect("nonzero or inexact");
        let eb = other.effective_ord().expect("nonzero or inexact");
        let prec = min_opt(self.prec.map(|pa| pa + eb), other.prec.map(|pb| pb + ea));
        Ok(self.mul_capped(other, prec))
    }

    /// Product with every term at or beyond `cap` discarded.
    fn mul_capped(&self, other: &TruncSeries, cap: Option<i64>) -> TruncSeries {
        let f = &self.field;
        let (Some(oa), Some(ob)) = (self.ord(), other.ord()) else {
            return TruncSeries::from_terms(f, [], cap);
        };
        let lo = oa + ob;
        let hi_full = self.max_exponent().unwrap() + other.max_exponent().unwrap();
        let hi = match cap {
            Some(c) => hi_full.min(c - 1),
            None => hi_full,
        };
        if hi < lo {
            return TruncSeries::from_terms(f, [], cap);
        }
        let mut acc = vec![Fe::ZERO; (hi - lo + 1) as usize];
        let xor = f.p() == 2;
        let b_terms: Vec<(i64, Fe)> = other.terms().collect();
        for (i, a) in self.terms() {
            if i + ob > hi {
                break;
            }
            for &(j, b) in &b_terms {
                let e = i + j;
                if e > hi {
                    break;
                }
                let slot = &mut acc[(e - lo) as usize];
                let prod = f.mul(a, b);
                *slot = if xor { Fe(slot.0 ^ prod.0) } else { f.add(*slot, prod) };
            }
        }
        TruncSeries::from_coeffs(f, lo, &acc, cap)
    }

    /// Multiplicative inverse. Exact inputs must be monomials; truncate a
    /// Laurent polynomial first to invert it to a chosen precision.
    pub fn inv(&self) -> Result<TruncSeries> {
        let f = &self.field;
        let (m, c) = self.lead().ok_or_else(|| {
            Error::InsufficientPrecision("leading term of the operand is not determined".into())
        })?;
        let c_inv = f.inv(c)?;
        let prec = match self.prec {
            None if self.terms.len() == 1 => {
                return Ok(TruncSeries::monomial(f, c_inv, -m));
            }
            None => {
                return Err(Error::InsufficientPrecision(
                    "inverse of a non-monomial Laurent polynomial needs a target precision".into(),
                ))
            }
            Some(p) => p,
        };
        let r = (prec - m) as usize;
        // u = z^{-m} self / c, so u_0 = 1.
        let u: Vec<(usize, Fe)> =
            self.terms().skip(1).map(|(e, a)| ((e - m) as usize, f.mul(a, c_inv))).collect();
        let mut v = vec![Fe::ZERO; r];
        v[0] = Fe::ONE;
        for n in 1..r {
            let mut s = Fe::ZERO;
            for &(i, ui) in &u {
                if i > n {
                    break;
                }
                s = f.add(s, f.mul(ui, v[n - i]));
            }
            v[n] = f.neg(s);
        }
        let scaled: Vec<Fe> = v.iter().map(|&x| f.mul(x, c_inv)).collect();
        Ok(TruncSeries::from_coeffs(f, -m, &scaled, Some(-m + r as i64)))
    }

    pub fn div(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.mul(&other.inv()?)
    }

    /// Integer power; negative exponents go through [`TruncSeries::inv`].
    pub fn pow(&self, n: i64) -> Result<TruncSeries> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = TruncSeries::one(&self.field);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b)?;
            }
        }
        Ok(acc)
    }

    /// `self^{p^s}`, computed coefficientwise in characteristic `p`.
    pub fn pow_p_power(&self, s: u32) -> TruncSeries {
        let f = &self.field;
        let ps = i64::from(f.p()).pow(s);
        TruncSeries::from_terms(
            f,
            self.terms().map(|(e, c)| (e * ps, f.frobenius(c, s))),
            self.prec.map(|p| p * ps),
        )
    }

    /// Raises every coefficient to the `p^n`-th power, exponents unchanged.
    pub fn frobenius_coeffs(&self, n: u32) -> TruncSeries {
        let f = &self.field;
        TruncSeries::from_terms(f, self.terms().map(|(e, c)| (e, f.frobenius(c, n))), self.prec)
    }

    /// Substitutes `λ·z` for `z`.
    pub fn scale_variable(&self, lambda: Fe) -> Result<TruncSeries> {
        let f = &self.field;
        let terms: Result<Vec<(i64, Fe)>> =
            self.terms().map(|(e, c)| Ok((e, f.mul(c, f.pow_i(lambda, e)?)))).collect();
        Ok(TruncSeries::from_terms(f, terms?, self.prec))
    }

    pub fn map_coeffs(&self, emb: &FieldEmbedding) -> Result<TruncSeries> {
        if **emb.src() != *self.field {
            return Err(Error::FieldMismatch);
        }
        Ok(TruncSeries::from_terms(emb.dst(), self.terms().map(|(e, c)| (e, emb.map(c))), self.prec))
    }

    pub fn derivative(&self) -> TruncSeries {
        let f = &self.field;
        TruncSeries::from_terms(
            f,
            self.terms().map(|(e, c)| (e - 1, f.mul(f.from_int(e), c))),
            self.prec.map(|p| p - 1),
        )
    }

    /// `self(inner)`, where `inner` has determined order at least one.
    pub fn compose(&self, inner: &TruncSeries) -> Result<TruncSeries> {
        self.check(inner)?;
        let f = &self.field;
        let (m, lead) = inner.lead().ok_or_else(|| {
            Error::InsufficientPrecision("leading term of the inner series is not determined".into())
        })?;
        if m < 1 {
            return Err(Error::InvalidInput(format!("inner series has order {m} < 1")));
        }
        if inner.is_exact() && inner.num_terms() == 1 {
            let terms: Result<Vec<(i64, Fe)>> =
                self.terms().map(|(k, c)| Ok((k * m, f.mul(c, f.pow_i(lead, k)?)))).collect();
            return Ok(TruncSeries::from_terms(f, terms?, self.prec.map(|a| a * m)));
        }
        let kmin_nonconst = self.terms().map(|(k, _)| k).find(|&k| k != 0);
        let from_inner = match (inner.prec, kmin_nonconst) {
            (Some(b), Some(k)) => Some(k * m + b - m),
            _ => None,
        };
        let cap = min_opt(self.prec.map(|a| a * m), from_inner);
        let Some(cap) = cap else {
            // Both exact, no negative exponents (checked below): plain polynomial substitution.
            if self.ord().is_some_and(|k| k < 0) {
                return Err(Error::InsufficientPrecision(
                    "negative powers of an exact non-monomial need a target precision".into(),
                ));
            }
            return self.compose_capped(inner, None);
        };
        self.compose_capped(inner, Some(cap))
    }

    fn compose_capped(&self, inner: &TruncSeries, cap: Option<i64>) -> Result<TruncSeries> {
        let f = &self.field;
        let Some(kmin) = self.ord() else {
            return Ok(TruncSeries::from_terms(f, [], cap));
        };
        let m = inner.ord().expect("checked by caller");
        let kmax = self.max_exponent().expect("nonempty");
        let g = match cap {
            Some(c) => {
                let extra = if kmin < 0 { (kmin.unsigned_abs() as i64 + 1) * m } else { 0 };
                inner.truncate(c + extra)
            }
            None => inner.clone(),
        };
        let mut cur = if kmin < 0 { g.inv()?.pow(-kmin)? } else { g.pow(kmin)? };
        if let Some(c) = cap {
            cur = cur.truncate(c);
        }
        let mut acc = TruncSeries::from_terms(f, [], cap);
        for k in kmin..=kmax {
            if cap.is_some_and(|c| k >= 1 && k * m >= c) {
                break;
            }
            if let Some(&ck) = self.terms.get(&k) {
                acc = acc.add(&cur.scale(ck))?;
            }
            if k < kmax {
                cur = match cap {
                    Some(c) => cur.mul_capped(&g, Some(c)),
                    None => cur.mul(&g)?,
                };
            }
        }
        Ok(match cap {
            Some(c) => acc.truncate(c),
            None => acc,
        })
    }

    /// Agreement of all coefficients known in both series.
    pub fn eq_within_precision(&self, other: &TruncSeries) -> Result<bool> {
        Ok(self.sub(other)?.is_zero_within_precision())
    }

    /// Human-readable form in the variable `var`.
    pub fn render(&self, var: &str) -> String {
        let mut parts: Vec<String> = self
            .terms()
            .map(|(e, c)| {
                let cs = self.field.format(c);
                let cs = if cs.contains('+') { format!("({cs})") } else { cs };
                let mono = match e {
                    0 => String::new(),
                    1 => var.to_string(),
                    _ => format!("{var}^{e}"),
                };
                match (e, c == Fe::ONE) {
                    (0, _) => cs,
                    (_, true) => mono,
                    _ => format!("{cs}·{mono}"),
                }
            })
            .collect();
        if let Some(p) = self.prec {
            parts.push(format!("O({var}^{p})"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Solves `Σ a_i X^i = 0` in `F_q[[z]]` for the root congruent to `x0`
/// modulo `z`, to absolute precision `target`, by Newton iteration. The
/// residue root must be simple.
pub fn hensel_root(coeffs: &[TruncSeries], x0: Fe, target: i64) -> Result<TruncSeries> {
    let field = coeffs
        .first()
        .ok_or_else(|| Error::HenselFailure("empty polynomial".into()))?
        .field()
        .clone();
    let eval = |x: &TruncSeries, cs: &[TruncSeries]| -> Result<TruncSeries> {
        let mut acc = TruncSeries::zero(&field);
        for c in cs.iter().rev() {
            acc = acc.mul(x)?.add(c)?.truncate(target);
        }
        Ok(acc)
    };
    let deriv: Vec<TruncSeries> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(field.from_int(i as i64)))
        .collect();
    let mut x = TruncSeries::constant(&field, x0).truncate(target);
    let fx0 = eval(&x, coeffs)?;
    if fx0.coeff(0)? != Fe::ZERO {
        return Err(Error::HenselFailure("residue value is not a root".into()));
    }
    let dfx0 = eval(&x, &deriv)?;
    if dfx0.coeff(0)?.is_zero() {
        return Err(Error::HenselFailure("residue root is not simple".into()));
    }
    for _ in 0..=target.max(1) {
        let fx = eval(&x, coeffs)?;
        if fx.is_zero_within_precision() {
            break;
        }
        let dfx = eval(&x, &deriv)?;
        x = x.sub(&fx.mul(&dfx.inv()?)?)?.truncate(target);
    }
    if !eval(&x, coeffs)?.is_zero_within_precision() {
        return Err(Error::HenselFailure("Newton iteration did not converge".into()));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u32, k: u32) -> Arc<FqField> {
        FqField::new(p, k).unwrap()
    }

    #[test]
    fn geometric_inverse() {
        let f3 = f(3, 1);
        let one_minus_z = TruncSeries::from_coeffs(&f3, 0, &[Fe(1), f3.from_int(-1)], None).truncate(3);
        let inv = one_minus_z.inv().unwrap();
        assert_eq!(inv, TruncSeries::from_coeffs(&f3, 0, &[Fe(1), Fe(1), Fe(1)], Some(3)));
    }

    #[test]
    fn frobenius_on_coefficients() {
        let f4 = f(2, 2);
        let s = TruncSeries::monomial(&f4, f4.x(), 1);
        let t = s.frobenius_coeffs(1);
        assert_eq!(t, TruncSeries::monomial(&f4, f4.add(f4.x(), Fe::ONE), 1));
    }

    #[test]
    fn product_precision_rule() {
        let f2 = f(2, 1);
        let a = TruncSeries::monomial(&f2, Fe::ONE, 1).truncate(5);
        let b = TruncSeries::monomial(&f2, Fe::ONE, 2).truncate(4);
        let c = a.mul(&b).unwrap();
        assert_eq!(c, TruncSeries::monomial(&f2, Fe::ONE, 3).truncate(5));
    }

    #[test]
    fn exact_monomial_composition_is_exact() {
        let f3 = f(3, 1);
        let s = TruncSeries::from_coeffs(&f3, 1, &[Fe(1), Fe(2)], None);
        let pi2 = TruncSeries::monomial(&f3, Fe(1), 2);
        let c = s.compose(&pi2).unwrap();
        assert!(c.is_exact());
        assert_eq!(c, TruncSeries::from_terms(&f3, [(2, Fe(1)), (4, Fe(2))], None));
    }

    #[test]
    fn composition_precision() {
        // f = t + O(t^3), g = s^2 + s^3 + O(s^5): f∘g = s^2 + s^3 + O(s^5).
        let f5 = f(5, 1);
        let ff = TruncSeries::monomial(&f5, Fe(1), 1).truncate(3);
        let g = TruncSeries::from_coeffs(&f5, 2, &[Fe(1), Fe(1)], Some(5));
        let c = ff.compose(&g).unwrap();
        assert_eq!(c.prec(), Some(5));
        assert_eq!(c, g);
    }

    #[test]
    fn hensel_square_root() {
        // X^2 = 1 + z over F_5, root ≡ 1: 1 + z/2 - z^2/8 + ...
        let f5 = f(5, 1);
        let c0 = TruncSeries::from_coeffs(&f5, 0, &[f5.from_int(-1), f5.from_int(-1)], None);
        let zero = TruncSeries::zero(&f5);
        let one = TruncSeries::one(&f5);
        let r = hensel_root(&[c0, zero, one], Fe(1), 6).unwrap();
        let sq = r.mul(&r).unwrap();
        let target = TruncSeries::from_coeffs(&f5, 0, &[Fe(1), Fe(1)], None).truncate(6);
        assert!(sq.eq_within_precision(&target).unwrap());
        assert_eq!(r.coeff(1).unwrap(), f5.inv(f5.from_int(2)).unwrap());
    }

    fn series_strategy() -> impl Strategy<Value = (Vec<u32>, i64, i64)> {
        (prop::collection::vec(0u32..9, 1..6), -2i64..3, 3i64..8)
    }

    fn build(field: &Arc<FqField>, (c, start, rel): &(Vec<u32>, i64, i64)) -> TruncSeries {
        let coeffs: Vec<Fe> = c.iter().map(|&x| Fe(x % field.q() as u32)).collect();
        TruncSeries::from_coeffs(field, *start, &coeffs, Some(start + rel))
    }

    proptest! {
        #[test]
        fn associativity(a in series_strategy(), b in series_strategy(), c in series_strategy()) {
            let fld = f(3, 2);
            let (a, b, c) = (build(&fld, &a), build(&fld, &b), build(&fld, &c));
            let l = a.mul(&b).unwrap().mul(&c).unwrap();
            let r = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(l.prec(), r.prec());
            prop_assert!(l.eq_within_precision(&r).unwrap());
        }

        #[test]
        fn double_inverse(a in series_strategy()) {
            let fld = f(2, 3);
            let a = build(&fld, &a);
            prop_assume!(a.ord().is_some());
            let back = a.inv().unwrap().inv().unwrap();
            prop_assert_eq!(back.prec(), a.prec());
            prop_assert!(back.eq_within_precision(&a).unwrap());
        }

        #[test]
        fn inverse_times_self_is_one(a in series_strategy()) {
            let fld = f(5, 1);
            let a = build(&fld, &a);
            prop_assume!(a.ord().is_some());
            let prod = a.mul(&a.inv().unwrap()).unwrap();
            prop_assert!(prod.eq_within_precision(&TruncSeries::one(&fld)).unwrap());
            prop_assert_eq!(prod.prec(), a.rel_prec());
        }

        #[test]
        fn pth_power_matches_repeated_product(a in series_strategy()) {
            let fld = f(3, 1);
            let a = build(&fld, &a);
            prop_assume!(a.ord().is_some());
            let direct = a.pow(3).unwrap();
            let frob = a.pow_p_power(1);
            prop_assert!(direct.eq_within_precision(&frob).unwrap());
        }

        #[test]
        fn composition_is_a_ring_map(a in series_strategy(), b in series_strategy(), g in series_strategy()) {
            let fld = f(2, 2);
            let (a, b) = (build(&fld, &a), build(&fld, &b));
            let (gc, _, grel) = g;
            let g = build(&fld, &(gc, 1, grel));
            prop_assume!(g.ord() == Some(1));
            let lhs = a.mul(&b).unwrap().compose(&g).unwrap();
            let rhs = a.compose(&g).unwrap().mul(&b.compose(&g).unwrap()).unwrap();
            prop_assert!(lhs.eq_within_precision(&rhs).unwrap());
        }
    }
}
