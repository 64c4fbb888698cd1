//! Automorphisms of towers and the `μ_L` measure on tame Galois groups.

use num_bigint::BigInt;

use super::tower::{LevelKind, LocalFieldTower, TowerElem};
use crate::algebra::arith::pow_mod;
use crate::algebra::ff::Fe;
use crate::algebra::rat::Rat;
use crate::algebra::series::TruncSeries;
use crate::error::{Error, Result};

/// The continuous automorphism of the top level `κ((Π))` acting by
/// `c ↦ c^{q_v^frob}` on residue coefficients and `Π ↦ λ·Π`.
///
/// It is an automorphism over the base exactly when it fixes `z`, which
/// [`TowerAut::fixes`] can confirm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerAut {
    pub frob: u32,
    pub scale: Fe,
}

impl TowerAut {
    pub fn identity() -> Self {
        TowerAut { frob: 0, scale: Fe::ONE }
    }

    /// Applies the automorphism to an element lifted to the top of `tower`.
    pub fn apply(&self, tower: &LocalFieldTower, x: &TowerElem) -> Result<TowerElem> {
        let x = x.to_top_of(tower)?;
        let f = tower.top_field();
        if self.scale.is_zero() {
            return Err(Error::InvalidInput("scale must be nonzero".into()));
        }
        let shift = tower.k_v() * self.frob;
        let terms: Result<Vec<(i64, Fe)>> = x
            .series()
            .terms()
            .map(|(m, c)| Ok((m, f.mul(f.frobenius(c, shift), f.pow_i(self.scale, m)?))))
            .collect();
        let s = TruncSeries::from_terms(f, terms?, x.series().prec());
        tower.elem(tower.top(), s)
    }

    /// Whether `g(x) = x` within precision.
    pub fn fixes(&self, tower: &LocalFieldTower, x: &TowerElem) -> Result<bool> {
        self.apply(tower, x)?.eq_within_precision(x)
    }
}

/// Parameters `(f, e, u)` of a tower `F_{q_v}((z)) ⊂ F_{q_v^f}((z)) ⊂
/// F_{q_v^f}((Π))` with `Π^e = u·z`, `u ∈ F_{q_v}^×` and `e | q_v^f − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TameShape {
    pub f: u32,
    pub e: u64,
    pub u: Fe,
}

/// Recognises the tame-abelian shape: base, optional unramified level,
/// optional Kummer level with a constant unit.
pub fn tame_shape(t: &LocalFieldTower) -> Result<TameShape> {
    let mut f = 1;
    let mut e = 1;
    let mut u = Fe::ONE;
    let kinds = t.kinds();
    let bad = || Error::UnsupportedTower("expected base, unramified step, Kummer step".into());
    let mut idx = 1;
    if let Some(LevelKind::Unramified { f: ff }) = kinds.get(idx) {
        f = *ff;
        idx += 1;
    }
    if let Some(LevelKind::Eisenstein { degree }) = kinds.get(idx) {
        let poly = t.eisenstein_poly(idx).expect("eisenstein level");
        let a0 = poly[0].series();
        let constant_unit = a0.is_exact() && a0.num_terms() == 1 && a0.ord() == Some(1);
        let rest_zero = poly[1..poly.len() - 1].iter().all(|c| c.series().is_exact_zero());
        if !constant_unit || !rest_zero {
            return Err(bad());
        }
        let field = t.residue_field(idx);
        u = field.neg(a0.lead().expect("nonzero").1);
        if !field.in_subfield(u, t.q_v()) {
            return Err(Error::UnsupportedTower("Kummer unit is not in the base residue field".into()));
        }
        e = u64::from(*degree);
        idx += 1;
    }
    if idx != kinds.len() {
        return Err(bad());
    }
    let q_res = t.top_field().q();
    if !(q_res - 1).is_multiple_of(e) {
        return Err(Error::UnsupportedTower(format!("{e} does not divide {}", q_res - 1)));
    }
    Ok(TameShape { f, e, u })
}

/// An element `(a, k)` of the Galois group of a tame-abelian tower: it acts
/// by `c ↦ c^{q_v^a}` on residues and `Π ↦ ω^k·Π`, where `ω` is the
/// primitive `e`-th root of unity `g^{(q̃−1)/e}` of the top residue field.
///
/// Composition: `(a, k)∘(a', k') = (a + a', k + k'·q_v^a)`, the right
/// factor acting first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TameAbelianAut {
    pub a: u32,
    pub k: u64,
}

impl TameAbelianAut {
    pub fn new(shape: &TameShape, a: u32, k: u64) -> Self {
        TameAbelianAut { a: a % shape.f, k: k % shape.e }
    }

    pub fn identity() -> Self {
        TameAbelianAut { a: 0, k: 0 }
    }

    /// All `f·e` elements, ordered by `(a, k)`.
    pub fn all(shape: &TameShape) -> Vec<TameAbelianAut> {
        (0..shape.f).flat_map(|a| (0..shape.e).map(move |k| TameAbelianAut { a, k })).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &TameAbelianAut, shape: &TameShape, q_v: u64) -> TameAbelianAut {
        let twist = pow_mod(q_v, u64::from(self.a), shape.e);
        TameAbelianAut {
            a: (self.a + other.a) % shape.f,
            k: (self.k + other.k * twist) % shape.e,
        }
    }

    pub fn inverse(&self, shape: &TameShape, q_v: u64) -> TameAbelianAut {
        *TameAbelianAut::all(shape)
            .iter()
            .find(|g| g.compose(self, shape, q_v) == TameAbelianAut::identity())
            .expect("finite group")
    }

    pub fn is_inertia(&self) -> bool {
        self.a == 0
    }

    pub fn to_tower_aut(&self, tower: &LocalFieldTower, shape: &TameShape) -> Result<TowerAut> {
        let omega = tower
            .top_field()
            .root_of_unity(shape.e)
            .ok_or_else(|| Error::UnsupportedTower("missing roots of unity".into()))?;
        Ok(TowerAut { frob: self.a, scale: tower.top_field().pow(omega, self.k) })
    }

    /// Action on the embedding `(j, k)` of `F_{q̃}((y))`, `y^e = u·z`, given by
    /// `λ ↦ λ^{q_v^j}` and `y ↦ ω^k·Π`.
    pub fn act_on_embedding(&self, j: u32, k: u64, shape: &TameShape, q_v: u64) -> (u32, u64) {
        let twist = pow_mod(q_v, u64::from(self.a), shape.e);
        ((j + self.a) % shape.f, (k * twist + self.k) % shape.e)
    }
}

/// `μ_L(g)`: zero off inertia, `v(D)` for `g = 1`, and `−v(g(Π) − Π)` for
/// the other inertia elements.
pub fn mu_l(tower: &LocalFieldTower, g: &TameAbelianAut) -> Result<Rat> {
    let shape = tame_shape(tower)?;
    if !g.is_inertia() {
        return Ok(Rat::from_integer(BigInt::from(0)));
    }
    if g.k.is_multiple_of(shape.e) {
        return tower.different_valuation();
    }
    let pi = tower.uniformizer(tower.top());
    let moved = g.to_tower_aut(tower, &shape)?.apply(tower, &pi)?;
    let diff = moved.sub(&pi)?;
    let v = diff
        .valuation()
        .ok_or_else(|| Error::InsufficientPrecision("g(Π) − Π undetermined".into()))?;
    Ok(-v)
}

/// Builds the tame tower with residue degree `f` and `Π^e = z`.
pub fn tame_tower(q_v: u64, f: u32, e: u64, config: crate::config::TowerConfig) -> Result<LocalFieldTower> {
    let mut t = LocalFieldTower::new(q_v, config)?;
    if f > 1 {
        t = t.extend_unramified(f)?;
    }
    if e > 1 {
        let lvl = t.top();
        let mut poly = vec![t.z().to_top_of(&t)?.neg()];
        poly.extend((1..e).map(|_| t.zero(lvl)));
        poly.push(t.one(lvl));
        t = t.extend_eisenstein(&poly)?;
    }
    tame_shape(&t)?;
    Ok(t)
}
