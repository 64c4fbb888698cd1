//! Power series in an auxiliary variable with coefficients in a tower level.

use num_bigint::BigInt;

use super::tower::{LocalFieldTower, TowerElem};
use crate::algebra::rat::Rat;
use crate::error::{Error, Result};

/// `Σ c_i X^i` with `c_i` in one level of a tower; coefficients with
/// `i ≥ prec` are unknown (`prec = None` means a polynomial).
#[derive(Clone, Debug)]
pub struct ElemSeries {
    tower: LocalFieldTower,
    level: usize,
    coeffs: Vec<TowerElem>,
    prec: Option<usize>,
}

fn min_prec(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl ElemSeries {
    pub fn new(tower: &LocalFieldTower, level: usize, coeffs: &[TowerElem], prec: Option<usize>) -> Result<Self> {
        let mut cs: Vec<TowerElem> =
            coeffs.iter().map(|c| c.lift_into(tower, level)).collect::<Result<_>>()?;
        if let Some(p) = prec {
            cs.truncate(p);
            while cs.len() < p {
                cs.push(tower.zero(level));
            }
        }
        Ok(ElemSeries { tower: tower.clone(), level, coeffs: cs, prec })
    }

    pub fn constant(c: &TowerElem) -> Self {
        ElemSeries { tower: c.tower().clone(), level: c.level(), coeffs: vec![c.clone()], prec: None }
    }

    /// The variable `X`, exact.
    pub fn var(tower: &LocalFieldTower, level: usize) -> Self {
        ElemSeries { tower: tower.clone(), level, coeffs: vec![tower.zero(level), tower.one(level)], prec: None }
    }

    pub fn tower(&self) -> &LocalFieldTower {
        &self.tower
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn prec(&self) -> Option<usize> {
        self.prec
    }

    pub fn coeffs(&self) -> &[TowerElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Result<TowerElem> {
        if self.prec.is_some_and(|p| i >= p) {
            return Err(Error::InsufficientPrecision(format!("coefficient {i} of the series is unknown")));
        }
        Ok(self.coeffs.get(i).cloned().unwrap_or_else(|| self.tower.zero(self.level)))
    }

    /// Lowers the precision to at most `n` coefficients.
    pub fn truncate(&self, n: usize) -> Self {
        let prec = min_prec(self.prec, Some(n));
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(n);
        ElemSeries { prec, coeffs, ..self.clone() }
    }

    fn build(&self, coeffs: Vec<TowerElem>, prec: Option<usize>) -> Self {
        ElemSeries { tower: self.tower.clone(), level: self.level, coeffs, prec }
    }

    fn bound(&self, other: &ElemSeries) -> Option<usize> {
        min_prec(self.prec, other.prec)
    }

    fn span(&self, other: &ElemSeries, prec: Option<usize>) -> usize {
        prec.unwrap_or(self.coeffs.len().max(other.coeffs.len()))
    }

    pub fn add(&self, other: &ElemSeries) -> Result<Self> {
        let prec = self.bound(other);
        let n = self.span(other, prec);
        let cs = (0..n)
            .map(|i| self.coeff_or_zero(i).add(&other.coeff_or_zero(i)))
            .collect::<Result<_>>()?;
        Ok(self.build(cs, prec))
    }

    pub fn neg(&self) -> Self {
        self.build(self.coeffs.iter().map(TowerElem::neg).collect(), self.prec)
    }

    pub fn sub(&self, other: &ElemSeries) -> Result<Self> {
        self.add(&other.neg())
    }

    fn coeff_or_zero(&self, i: usize) -> TowerElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.tower.zero(self.level))
    }

    pub fn mul(&self, other: &ElemSeries) -> Result<Self> {
        let prec = self.bound(other);
        let full = (self.coeffs.len() + other.coeffs.len()).saturating_sub(1);
        let n = prec.unwrap_or(full);
        let mut cs = Vec::with_capacity(n);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            cs.resize(n, self.tower.zero(self.level));
            return Ok(self.build(cs, prec));
        }
        for k in 0..n {
            let mut acc = self.tower.zero(self.level);
            for i in 0..=k.min(self.coeffs.len().saturating_sub(1)) {
                let j = k - i;
                if j >= other.coeffs.len() {
                    continue;
                }
                acc = acc.add(&self.coeffs[i].mul(&other.coeffs[j])?)?;
            }
            cs.push(acc);
        }
        Ok(self.build(cs, prec))
    }

    pub fn scale(&self, c: &TowerElem) -> Result<Self> {
        let cs = self.coeffs.iter().map(|x| x.mul(c)).collect::<Result<_>>()?;
        Ok(self.build(cs, self.prec))
    }

    pub fn map(&self, f: impl Fn(&TowerElem) -> Result<TowerElem>) -> Result<Self> {
        let cs = self.coeffs.iter().map(f).collect::<Result<_>>()?;
        Ok(self.build(cs, self.prec))
    }

    /// `self(inner)` for `inner` with zero constant term, to the smaller of
    /// the two precisions.
    pub fn compose(&self, inner: &ElemSeries) -> Result<Self> {
        if !inner.coeff_or_zero(0).series().is_exact_zero() {
            return Err(Error::InvalidInput("inner series must have zero constant term".into()));
        }
        let prec = self.bound(inner);
        let cap = prec.unwrap_or_else(|| {
            (self.coeffs.len().saturating_sub(1)) * inner.coeffs.len().saturating_sub(1) + 1
        });
        let mut acc = self.build(Vec::new(), Some(cap));
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner)?.truncate(cap).add(&ElemSeries::constant(c))?.truncate(cap);
        }
        Ok(ElemSeries { prec, ..acc })
    }

    /// Compositional inverse of a series with zero constant term and
    /// invertible linear coefficient, to `n` coefficients.
    pub fn reverse(&self, n: usize) -> Result<Self> {
        if !self.coeff_or_zero(0).series().is_exact_zero() {
            return Err(Error::InvalidInput("series to invert must vanish at 0".into()));
        }
        let n = self.prec.map_or(n, |p| p.min(n));
        let h1_inv = self.coeff(1)?.inv()?;
        let w = ElemSeries::var(&self.tower, self.level).truncate(n);
        let mut r = w.scale(&h1_inv)?;
        for _ in 0..n {
            let err = w.sub(&self.compose(&r)?.truncate(n))?;
            r = r.add(&err.scale(&h1_inv)?)?.truncate(n);
        }
        Ok(r)
    }

    /// `Σ c_i x^i`. Unknown coefficients are assumed to have valuation at
    /// least `tail_bound`, which caps the precision of the result.
    pub fn eval(&self, x: &TowerElem, tail_bound: &Rat) -> Result<TowerElem> {
        let vx = x
            .valuation()
            .filter(|v| *v > Rat::from_integer(BigInt::from(0)))
            .ok_or_else(|| Error::InvalidInput("evaluation point must have positive valuation".into()))?;
        let mut acc = self.tower.zero(self.level);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x)?.add(c)?;
        }
        Ok(match self.prec {
            Some(p) => acc.truncate_valuation(&(vx * Rat::from_integer(BigInt::from(p as i64)) + tail_bound)),
            None => acc,
        })
    }

    /// Whether every coefficient known on both sides agrees within precision.
    pub fn eq_within_precision(&self, other: &ElemSeries) -> Result<bool> {
        let d = self.sub(other)?;
        Ok(d.coeffs.iter().all(TowerElem::is_zero_within_precision))
    }

    /// Index of the first coefficient not zero within precision.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero_within_precision())
    }
}
