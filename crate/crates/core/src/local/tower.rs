//! Explicit towers over `F_{q_v}((z))` and their elements.
//!
//! Every level is a complete discretely valued field `κ_i((Π_i))`. An
//! unramified level enlarges the residue field and keeps the uniformizer; an
//! Eisenstein level adjoins a root `Π_i` of an Eisenstein polynomial over the
//! previous level and stores the previous uniformizer as a series in `Π_i`.
//! Elements are series in the uniformizer of their level.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::algebra::ff::{Fe, FieldEmbedding, FqField};
use crate::algebra::rat::Rat;
use crate::algebra::series::TruncSeries;
use crate::config::TowerConfig;
use crate::error::{Error, Result};

/// Shape of one level, as reported to callers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LevelKind {
    Base,
    Unramified { f: u32 },
    Eisenstein { degree: u32 },
}

struct Level {
    kind: LevelKind,
    field: Arc<FqField>,
    e_abs: u64,
    f_abs: u32,
    /// Unramified levels: residue field of the previous level into this one.
    embed: Option<FieldEmbedding>,
    /// Eisenstein levels: defining coefficients `a_0..a_m` over the previous level.
    poly: Vec<TruncSeries>,
    /// Eisenstein levels: the previous uniformizer as a series in this one.
    down: Option<TruncSeries>,
}

/// A finite extension of `F_{q_v}((z))` built level by level.
///
/// Cloning is cheap; extending returns a new tower sharing all lower levels.
#[derive(Clone)]
pub struct LocalFieldTower {
    q_v: u64,
    levels: Arc<Vec<Arc<Level>>>,
    config: TowerConfig,
}

impl fmt::Debug for LocalFieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalFieldTower(q_v={}, levels={:?})", self.q_v, self.kinds())
    }
}

impl LocalFieldTower {
    /// The base field `F_{q_v}((z))` with `v(z) = 1`.
    pub fn new(q_v: u64, config: TowerConfig) -> Result<Self> {
        let field = FqField::of_size(q_v)?;
        let base = Level {
            kind: LevelKind::Base,
            field,
            e_abs: 1,
            f_abs: 1,
            embed: None,
            poly: Vec::new(),
            down: None,
        };
        Ok(LocalFieldTower { q_v, levels: Arc::new(vec![Arc::new(base)]), config })
    }

    pub fn q_v(&self) -> u64 {
        self.q_v
    }

    pub fn config(&self) -> TowerConfig {
        self.config
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn kinds(&self) -> Vec<LevelKind> {
        self.levels.iter().map(|l| l.kind.clone()).collect()
    }

    pub fn kind(&self, level: usize) -> &LevelKind {
        &self.levels[level].kind
    }

    /// Absolute ramification index of the top level.
    pub fn e_abs(&self) -> u64 {
        self.levels[self.top()].e_abs
    }

    /// Residue degree of the top level over `F_{q_v}`.
    pub fn f_abs(&self) -> u32 {
        self.levels[self.top()].f_abs
    }

    pub fn e_abs_at(&self, level: usize) -> u64 {
        self.levels[level].e_abs
    }

    pub fn f_abs_at(&self, level: usize) -> u32 {
        self.levels[level].f_abs
    }

    /// `[tower : F_{q_v}((z))]`.
    pub fn degree(&self) -> u64 {
        self.e_abs() * u64::from(self.f_abs())
    }

    pub fn residue_field(&self, level: usize) -> &Arc<FqField> {
        &self.levels[level].field
    }

    pub fn top_field(&self) -> &Arc<FqField> {
        self.residue_field(self.top())
    }

    /// `log_p q_v`, so that `c ↦ c^{q_v}` is `frobenius(c, k_v)`.
    pub(crate) fn k_v(&self) -> u32 {
        self.levels[0].field.k()
    }

    /// The tower consisting of levels `0..=level`.
    pub fn prefix(&self, level: usize) -> LocalFieldTower {
        LocalFieldTower {
            q_v: self.q_v,
            levels: Arc::new(self.levels[..=level].to_vec()),
            config: self.config,
        }
    }

    /// Whether `other` agrees with `self` on levels `0..=level`.
    pub fn shares_levels(&self, other: &LocalFieldTower, level: usize) -> bool {
        level < self.levels.len()
            && level < other.levels.len()
            && (0..=level).all(|i| Arc::ptr_eq(&self.levels[i], &other.levels[i]))
    }

    fn check_bound(&self, degree: u64) -> Result<()> {
        if degree > self.config.bound {
            Err(Error::TowerBound { degree, bound: self.config.bound })
        } else {
            Ok(())
        }
    }

    fn push(&self, level: Level) -> LocalFieldTower {
        let mut levels = (*self.levels).clone();
        levels.push(Arc::new(level));
        LocalFieldTower { q_v: self.q_v, levels: Arc::new(levels), config: self.config }
    }

    /// Adjoins the residue extension of degree `f`.
    pub fn extend_unramified(&self, f: u32) -> Result<LocalFieldTower> {
        if f == 0 {
            return Err(Error::InvalidInput("unramified degree must be positive".into()));
        }
        let top = &self.levels[self.top()];
        self.check_bound(self.degree() * u64::from(f))?;
        let field = FqField::new(top.field.p(), top.field.k() * f)?;
        let embed = top.field.embed_into(&field)?;
        Ok(self.push(Level {
            kind: LevelKind::Unramified { f },
            field,
            e_abs: top.e_abs,
            f_abs: top.f_abs * f,
            embed: Some(embed),
            poly: Vec::new(),
            down: None,
        }))
    }

    /// Adjoins a root of the monic Eisenstein polynomial with coefficients
    /// `a_0, …, a_m` (constant term first, `a_m = 1`). The root becomes the
    /// new uniformizer.
    pub fn extend_eisenstein(&self, poly: &[TowerElem]) -> Result<LocalFieldTower> {
        let top = self.top();
        let m = poly.len().checked_sub(1).filter(|&m| m >= 2).ok_or_else(|| {
            Error::NotEisenstein("degree must be at least 2".into())
        })?;
        let coeffs: Vec<TruncSeries> = poly
            .iter()
            .map(|c| c.lift_into(self, top).map(|e| e.series))
            .collect::<Result<_>>()?;
        let field = Arc::clone(&self.levels[top].field);
        if coeffs[m] != TruncSeries::one(&field) {
            return Err(Error::NotEisenstein("polynomial is not monic".into()));
        }
        match coeffs[0].ord() {
            Some(1) => {}
            Some(k) => {
                return Err(Error::NotEisenstein(format!("constant term has order {k}, expected 1")))
            }
            None => {
                return Err(Error::InsufficientPrecision(
                    "constant term of the Eisenstein polynomial is not determined".into(),
                ))
            }
        }
        for (i, c) in coeffs.iter().enumerate().take(m).skip(1) {
            let low = c.ord().or(c.prec()).unwrap_or(i64::MAX);
            if low < 1 {
                return Err(Error::NotEisenstein(format!("coefficient of X^{i} is not divisible by the uniformizer")));
            }
        }
        let degree = self.degree() * m as u64;
        self.check_bound(degree)?;
        let down = down_map(&coeffs, m as i64, self.config.rel_prec)?;
        let prev = &self.levels[top];
        Ok(self.push(Level {
            kind: LevelKind::Eisenstein { degree: m as u32 },
            field,
            e_abs: prev.e_abs * m as u64,
            f_abs: prev.f_abs,
            embed: None,
            poly: coeffs,
            down: Some(down),
        }))
    }

    /// The defining polynomial of an Eisenstein level, coefficients as
    /// elements of the previous level.
    pub fn eisenstein_poly(&self, level: usize) -> Option<Vec<TowerElem>> {
        if level == 0 || !matches!(self.levels[level].kind, LevelKind::Eisenstein { .. }) {
            return None;
        }
        let below = self.prefix(level - 1);
        Some(
            self.levels[level]
                .poly
                .iter()
                .map(|s| TowerElem { tower: below.clone(), level: level - 1, series: s.clone() })
                .collect(),
        )
    }

    /// The uniformizer `z` of the base, exact.
    pub fn z(&self) -> TowerElem {
        self.uniformizer(0)
    }

    /// The uniformizer of `level` as an exact element of that level.
    pub fn uniformizer(&self, level: usize) -> TowerElem {
        let f = &self.levels[level].field;
        TowerElem { tower: self.clone(), level, series: TruncSeries::monomial(f, Fe::ONE, 1) }
    }

    pub fn constant(&self, level: usize, c: Fe) -> TowerElem {
        let f = &self.levels[level].field;
        TowerElem { tower: self.clone(), level, series: TruncSeries::constant(f, c) }
    }

    pub fn one(&self, level: usize) -> TowerElem {
        self.constant(level, Fe::ONE)
    }

    pub fn zero(&self, level: usize) -> TowerElem {
        self.constant(level, Fe::ZERO)
    }

    /// Wraps a series in the uniformizer of `level`.
    pub fn elem(&self, level: usize, series: TruncSeries) -> Result<TowerElem> {
        if level > self.top() {
            return Err(Error::InvalidInput(format!("level {level} beyond the top")));
        }
        if **series.field() != *self.levels[level].field {
            return Err(Error::FieldMismatch);
        }
        Ok(TowerElem { tower: self.clone(), level, series })
    }

    fn lift_series_one(&self, level: usize, s: &TruncSeries) -> Result<TruncSeries> {
        let next = &self.levels[level + 1];
        match next.kind {
            LevelKind::Unramified { .. } => s.map_coeffs(next.embed.as_ref().expect("unramified level")),
            LevelKind::Eisenstein { .. } => s.compose(next.down.as_ref().expect("eisenstein level")),
            LevelKind::Base => unreachable!("base is level 0"),
        }
    }

    /// The uniformizer of `level` re-expanded in the top uniformizer, to
    /// absolute precision `n` (in units of the top uniformizer).
    pub fn reexpand_down(&self, level: usize, n: i64) -> Result<TowerElem> {
        let lifted = self.uniformizer(level).lift_into(self, self.top())?;
        if lifted.series.prec().is_some_and(|p| p < n) {
            return Err(Error::InsufficientPrecision(format!(
                "re-expansion known to order {}, {n} requested",
                lifted.series.prec().unwrap_or_default()
            )));
        }
        Ok(TowerElem { series: lifted.series.truncate(n), ..lifted })
    }

    /// `v(D)` of the top level over the base, as the sum over Eisenstein
    /// levels of `v(P'(Π))`.
    pub fn different_valuation(&self) -> Result<Rat> {
        let mut total = Rat::from_integer(BigInt::from(0));
        for level in 1..=self.top() {
            if let Some(d) = self.level_derivative(level)? {
                total += d.valuation().ok_or(Error::Inseparable)?;
            }
        }
        Ok(total)
    }

    /// `P'(Π)` for an Eisenstein level, `None` for other levels.
    pub fn level_derivative(&self, level: usize) -> Result<Option<TowerElem>> {
        let Some(poly) = self.eisenstein_poly(level) else {
            return Ok(None);
        };
        let pi = self.uniformizer(level);
        let deriv: Vec<TowerElem> = poly
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.lift_into(self, level).map(|c| c.scale_int(i as i64)))
            .collect::<Result<_>>()?;
        Ok(Some(eval_poly(&deriv, &pi)?))
    }
}

/// Fixed-point solution of `P(t) = 0` for the old uniformizer `s` as a
/// series in the new uniformizer `t`:
/// `s = −(t^m + Σ_{i=1}^{m−1} a_i(s) t^i) / w(s)` with `a_0 = s·w(s)`.
fn down_map(a: &[TruncSeries], m: i64, rel_prec: i64) -> Result<TruncSeries> {
    let field = a[0].field().clone();
    let w = a[0].shift(-1);
    let (_, w0) = w.lead().expect("constant term has order one");
    let inner_zero = a[1..m as usize].iter().all(|c| c.is_exact_zero());
    if inner_zero && w.is_exact() && w.num_terms() == 1 {
        return Ok(TruncSeries::monomial(&field, field.neg(field.inv(w0)?), m));
    }
    let target = m + rel_prec.max(1);
    let t_m = TruncSeries::monomial(&field, Fe::ONE, m);
    let mut s = TruncSeries::monomial(&field, field.neg(field.inv(w0)?), m).truncate(m + 1);
    for _ in 0..(target + 4) {
        let mut num = t_m.clone();
        for (i, ai) in a.iter().enumerate().take(m as usize).skip(1) {
            if ai.is_exact_zero() {
                continue;
            }
            num = num.add(&ai.compose(&s)?.shift(i as i64))?;
        }
        let next = num.mul(&w.compose(&s)?.inv()?)?.neg().truncate(target);
        let stable = next == s;
        s = next;
        if stable {
            break;
        }
    }
    let check_prec = s.prec().unwrap_or(target);
    if check_prec <= m {
        return Err(Error::NonConvergence("re-expansion gained no precision".into()));
    }
    // Residual check: P(t) with a_i evaluated at s must vanish.
    let mut resid = t_m;
    for (i, ai) in a.iter().enumerate().take(m as usize) {
        resid = resid.add(&ai.compose(&s)?.shift(i as i64))?;
    }
    if !resid.is_zero_within_precision() {
        return Err(Error::NonConvergence("re-expansion does not satisfy the defining polynomial".into()));
    }
    Ok(s)
}

/// Horner evaluation of `Σ c_i x^i`.
pub fn eval_poly(coeffs: &[TowerElem], x: &TowerElem) -> Result<TowerElem> {
    let mut acc = x.tower.zero(x.level);
    for c in coeffs.iter().rev() {
        acc = acc.mul(x)?.add(c)?;
    }
    Ok(acc)
}

/// An element of a [`LocalFieldTower`] level, stored as a series in that
/// level's uniformizer with residue-field coefficients.
#[derive(Clone)]
pub struct TowerElem {
    tower: LocalFieldTower,
    level: usize,
    series: TruncSeries,
}

impl fmt::Debug for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = if self.level == 0 { "z".to_string() } else { format!("π{}", self.level) };
        write!(f, "{}", self.series.render(&var))
    }
}

impl TowerElem {
    pub fn tower(&self) -> &LocalFieldTower {
        &self.tower
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn series(&self) -> &TruncSeries {
        &self.series
    }

    pub fn field(&self) -> &Arc<FqField> {
        self.series.field()
    }

    fn e(&self) -> u64 {
        self.tower.levels[self.level].e_abs
    }

    fn rat(&self, n: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(self.e()))
    }

    /// Exact valuation with `v(z) = 1`; `None` if no term is determined.
    pub fn valuation(&self) -> Option<Rat> {
        self.series.ord().map(|o| self.rat(o))
    }

    /// Precision as an absolute valuation; `None` for exact elements.
    pub fn precision(&self) -> Option<Rat> {
        self.series.prec().map(|p| self.rat(p))
    }

    /// Valuation, or the precision bound when nothing is determined.
    pub fn valuation_lower_bound(&self) -> Option<Rat> {
        self.valuation().or_else(|| self.precision())
    }

    /// The leading residue coefficient.
    pub fn leading_coeff(&self) -> Option<Fe> {
        self.series.lead().map(|(_, c)| c)
    }

    pub fn is_zero_within_precision(&self) -> bool {
        self.series.is_zero_within_precision()
    }

    /// Lifts to `level` of `target`, which must share levels with `self`'s tower.
    pub fn lift_into(&self, target: &LocalFieldTower, level: usize) -> Result<TowerElem> {
        if level < self.level {
            return Err(Error::LevelMismatch(self.level, level));
        }
        if !target.shares_levels(&self.tower, self.level) || level > target.top() {
            return Err(Error::InvalidInput("element does not belong to this tower".into()));
        }
        let mut s = self.series.clone();
        for l in self.level..level {
            s = target.lift_series_one(l, &s)?;
        }
        Ok(TowerElem { tower: target.clone(), level, series: s })
    }

    pub fn lift_to(&self, level: usize) -> Result<TowerElem> {
        self.lift_into(&self.tower, level)
    }

    pub fn to_top_of(&self, target: &LocalFieldTower) -> Result<TowerElem> {
        self.lift_into(target, target.top())
    }

    fn align(&self, other: &TowerElem) -> Result<(TowerElem, TowerElem)> {
        let tower = if self.tower.num_levels() >= other.tower.num_levels() { &self.tower } else { &other.tower };
        let level = self.level.max(other.level);
        Ok((self.lift_into(tower, level)?, other.lift_into(tower, level)?))
    }

    fn with_series(&self, series: TruncSeries) -> TowerElem {
        TowerElem { tower: self.tower.clone(), level: self.level, series }
    }

    pub fn add(&self, other: &TowerElem) -> Result<TowerElem> {
        let (a, b) = self.align(other)?;
        Ok(a.with_series(a.series.add(&b.series)?))
    }

    pub fn sub(&self, other: &TowerElem) -> Result<TowerElem> {
        let (a, b) = self.align(other)?;
        Ok(a.with_series(a.series.sub(&b.series)?))
    }

    pub fn mul(&self, other: &TowerElem) -> Result<TowerElem> {
        let (a, b) = self.align(other)?;
        Ok(a.with_series(a.series.mul(&b.series)?))
    }

    pub fn div(&self, other: &TowerElem) -> Result<TowerElem> {
        let (a, b) = self.align(other)?;
        Ok(a.with_series(a.series.div(&b.series)?))
    }

    pub fn neg(&self) -> TowerElem {
        self.with_series(self.series.neg())
    }

    pub fn inv(&self) -> Result<TowerElem> {
        Ok(self.with_series(self.series.inv()?))
    }

    pub fn pow(&self, n: i64) -> Result<TowerElem> {
        Ok(self.with_series(self.series.pow(n)?))
    }

    pub fn scale(&self, c: Fe) -> TowerElem {
        self.with_series(self.series.scale(c))
    }

    pub fn scale_int(&self, n: i64) -> TowerElem {
        let c = self.field().from_int(n);
        self.scale(c)
    }

    /// `x ↦ x^{q_v^n}`, the `n`-th power of the absolute `q_v`-Frobenius.
    pub fn frobenius_qv(&self, n: u32) -> TowerElem {
        self.with_series(self.series.pow_p_power(self.tower.k_v() * n))
    }

    /// Lowers the precision to absolute valuation `v` (rounded up to the
    /// uniformizer grid).
    pub fn truncate_valuation(&self, v: &Rat) -> TowerElem {
        let n = (v * Rat::from_integer(BigInt::from(self.e()))).ceil().to_integer();
        let n: i64 = n.try_into().unwrap_or(i64::MAX);
        self.with_series(self.series.truncate(n))
    }

    /// Whether every coefficient known in both agrees.
    pub fn eq_within_precision(&self, other: &TowerElem) -> Result<bool> {
        Ok(self.sub(other)?.is_zero_within_precision())
    }
}

/// Checks `(Z(y) − Z(y₀))/(y − y₀)|_{y=y₀} ≡ Z'(y₀)`, computing the left side
/// by synthetic division and the right side from the formal derivative.
pub fn derivative_congruence_check(z_of_y: &TruncSeries, y0: &TowerElem) -> Result<bool> {
    if z_of_y.ord().is_some_and(|o| o < 0) {
        return Err(Error::InvalidInput("series must be a power series".into()));
    }
    if z_of_y.prec().is_some_and(|p| p < 2) {
        return Err(Error::InsufficientPrecision("at least two terms are needed".into()));
    }
    let v0 = y0.valuation().ok_or_else(|| Error::InsufficientPrecision("y0 undetermined".into()))?;
    if v0 <= Rat::from_integer(BigInt::from(0)) {
        return Err(Error::InvalidInput("evaluation point must have positive valuation".into()));
    }
    let tower = y0.tower();
    let level = y0.level();
    let field = tower.residue_field(level);
    let emb = z_of_y.field().embed_into(field)?;
    let top_exp = z_of_y.max_exponent().unwrap_or(0);
    let coeff = |k: i64| -> Result<TowerElem> {
        Ok(tower.constant(level, emb.map(z_of_y.coeff(k)?)))
    };
    // Synthetic division of Z(y) − Z(y0) by (y − y0): q_{k−1} = c_k + y0·q_k.
    let mut qs: Vec<TowerElem> = Vec::new();
    let mut carry = tower.zero(level);
    for k in (1..=top_exp).rev() {
        carry = coeff(k)?.add(&y0.mul(&carry)?)?;
        qs.push(carry.clone());
    }
    qs.reverse();
    let quotient_at_y0 = eval_poly(&qs, y0)?;
    let deriv = z_of_y.derivative();
    let dcoeffs: Vec<TowerElem> = (0..top_exp.max(0))
        .map(|k| Ok(tower.constant(level, emb.map(deriv.coeff(k)?))))
        .collect::<Result<_>>()?;
    let deriv_at_y0 = eval_poly(&dcoeffs, y0)?;
    let mut diff = quotient_at_y0.sub(&deriv_at_y0)?;
    if let Some(p) = z_of_y.prec() {
        diff = diff.truncate_valuation(&(v0 * Rat::from_integer(BigInt::from(p - 1))));
    }
    Ok(diff.is_zero_within_precision())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;

    fn base(q: u64) -> LocalFieldTower {
        LocalFieldTower::new(q, TowerConfig::default()).unwrap()
    }

    fn kummer(t: &LocalFieldTower, e: usize, a: &TowerElem) -> LocalFieldTower {
        let lvl = t.top();
        let mut poly = vec![a.neg()];
        poly.extend((1..e).map(|_| t.zero(lvl)));
        poly.push(t.one(lvl));
        t.extend_eisenstein(&poly).unwrap()
    }

    #[test]
    fn tame_kummer_step() {
        let t = base(3);
        let t2 = kummer(&t, 2, &t.z());
        assert_eq!(t2.e_abs(), 2);
        assert_eq!(t2.uniformizer(1).valuation(), Some(rat(1, 2)));
        let z = t2.reexpand_down(0, 10).unwrap();
        assert_eq!(z.series(), &TruncSeries::monomial(t2.top_field(), Fe::ONE, 2).truncate(10));
        assert_eq!(t2.different_valuation().unwrap(), rat(1, 2));
    }

    #[test]
    fn unramified_step() {
        let t = base(2).extend_unramified(2).unwrap();
        assert_eq!(t.top_field().q(), 4);
        assert_eq!(t.e_abs(), 1);
        assert_eq!(t.different_valuation().unwrap(), rat(0, 1));
    }

    #[test]
    fn artin_schreier_shaped_step() {
        // X^2 + zX − z over F_2((z)).
        let t = base(2);
        let z = t.z();
        let t2 = t.extend_eisenstein(&[z.neg(), z.clone(), t.one(0)]).unwrap();
        assert_eq!(t2.e_abs(), 2);
        assert_eq!(t2.different_valuation().unwrap(), rat(1, 1));
        let poly = t2.eisenstein_poly(1).unwrap();
        let pi = t2.uniformizer(1);
        assert!(eval_poly(&poly, &pi).unwrap().is_zero_within_precision());
    }

    #[test]
    fn rejects_non_eisenstein() {
        let t = base(3);
        let z2 = t.z().pow(2).unwrap();
        assert!(matches!(
            t.extend_eisenstein(&[z2, t.zero(0), t.one(0)]),
            Err(Error::NotEisenstein(_))
        ));
        let one = t.one(0);
        assert!(matches!(
            t.extend_eisenstein(&[t.z(), one.clone(), one]),
            Err(Error::NotEisenstein(_))
        ));
    }

    #[test]
    fn tower_bound_is_enforced() {
        let t = LocalFieldTower::new(2, TowerConfig::default().with_bound(4)).unwrap();
        let t = t.extend_unramified(2).unwrap();
        assert!(matches!(t.extend_unramified(3), Err(Error::TowerBound { degree: 6, bound: 4 })));
    }

    #[test]
    fn frobenius_step_reexpansion_leading_term() {
        // ℓ0 = z (q = 2, θ = −ℓ0), then X^2 + θX − ℓ0: ℓ0 = ℓ1^2 + ℓ0·ℓ1.
        let t = base(2);
        let l0 = t.z();
        let theta = l0.neg();
        let t1 = t.extend_eisenstein(&[l0.neg(), theta, t.one(0)]).unwrap();
        let s = t1.reexpand_down(0, 8).unwrap();
        assert_eq!(s.series().lead(), Some((2, Fe::ONE)));
        // Round trip through the defining polynomial.
        let poly = t1.eisenstein_poly(1).unwrap();
        assert!(eval_poly(&poly, &t1.uniformizer(1)).unwrap().is_zero_within_precision());
        // Iteration oracle: s = t^2 + s·t, so s = t^2/(1 − t) = t^2 + t^3 + ...
        for k in 2..8 {
            assert_eq!(s.series().coeff(k).unwrap(), Fe::ONE);
        }
    }

    #[test]
    fn tame_differents_match_derivative_oracle() {
        for (q, es) in [(2u64, vec![3u64, 5, 7]), (3, vec![2, 4, 5, 7, 8]), (5, vec![2, 3, 4, 6, 7, 8])] {
            for e in es {
                let t = LocalFieldTower::new(q, TowerConfig::default().with_bound(512)).unwrap();
                let t2 = kummer(&t, e as usize, &t.z());
                let oracle = t2.uniformizer(1).pow(e as i64 - 1).unwrap().scale_int(e as i64);
                assert_eq!(t2.different_valuation().unwrap(), oracle.valuation().unwrap());
                assert_eq!(t2.different_valuation().unwrap(), rat(e as i64 - 1, e as i64));
            }
        }
    }

    #[test]
    fn derivative_congruence_examples() {
        let t = base(3);
        let t2 = kummer(&t, 2, &t.z());
        let pi = t2.uniformizer(1);
        let f = t.residue_field(0);
        let id = TruncSeries::monomial(f, Fe::ONE, 1);
        assert!(derivative_congruence_check(&id, &pi).unwrap());
        let sq = TruncSeries::monomial(f, Fe::ONE, 2);
        assert!(derivative_congruence_check(&sq, &pi).unwrap());
        let cube = TruncSeries::monomial(f, Fe::ONE, 3);
        assert!(derivative_congruence_check(&cube, &pi).unwrap());
        let mixed = TruncSeries::from_coeffs(f, 0, &[Fe(1), Fe(2), Fe(1), Fe(0), Fe(2)], Some(6));
        assert!(derivative_congruence_check(&mixed, &pi).unwrap());
    }

    #[test]
    fn valuation_is_additive() {
        let t = base(3);
        let t2 = kummer(&t, 2, &t.z());
        let a = t2.uniformizer(1).add(&t.z()).unwrap();
        let b = t2.one(1).add(&t2.uniformizer(1)).unwrap();
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.valuation().unwrap(), a.valuation().unwrap() + b.valuation().unwrap());
    }
}
