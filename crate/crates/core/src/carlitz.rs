//! The Carlitz module end to end: the ∞-adic period, the v-adic periods at
//! the finite places and the regularized product formula.

use std::fmt;

use num_traits::Zero;

use crate::algebra::ff::{Fe, FqField};
use crate::algebra::poly::{poly_irreducibles, PolyFq};
use crate::algebra::rat::Rat;
use crate::algebra::series::TruncSeries;
use crate::config::TowerConfig;
use crate::error::{Error, Result};
use crate::lfunctions::{
    regularized_sum, z_v_at_one, ClassFunctionQ, ExplicitPlace, LocalGaloisDatum, LogQValue, Regularization,
    TailCharacter,
};
use crate::local::{solve_kummer, LocalFieldTower};
use crate::shtuka::{shtuka_period, Embedding, LocalShtukaStd};

/// A place of `F_q(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    Infinity,
    Finite(PolyFq),
}

impl Place {
    /// A finite place, after checking that `p` is monic irreducible.
    pub fn finite(p: PolyFq) -> Result<Self> {
        if !p.is_monic() || p.degree().unwrap_or(0) == 0 || !p.is_irreducible()? {
            return Err(Error::InvalidInput(format!("{p} is not monic irreducible of positive degree")));
        }
        Ok(Place::Finite(p))
    }

    pub fn degree(&self) -> u32 {
        match self {
            Place::Infinity => 1,
            Place::Finite(p) => p.degree().expect("nonzero") as u32,
        }
    }

    pub fn q_v(&self, q: u64) -> u64 {
        q.pow(self.degree())
    }

    /// All finite places of degree `≤ max_degree`, by degree and then in the
    /// order of [`poly_irreducibles`].
    pub fn finite_up_to(q: u64, max_degree: u32) -> Result<Vec<Place>> {
        let f = FqField::of_size(q)?;
        let mut out = Vec::new();
        for d in 1..=max_degree as usize {
            out.extend(poly_irreducibles(&f, d)?.into_iter().map(Place::Finite));
        }
        Ok(out)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => f.write_str("∞"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// `log|∫_u ω|_∞` and the data it was read from.
#[derive(Clone, Debug)]
pub struct InfinityPeriod {
    pub q: u64,
    pub n: u32,
    /// `v_∞(β^q)`.
    pub beta_power_valuation: Rat,
    /// `∏_{i=1}^{N} (1 − ζ^{q^i − 1})` in `ζ = 1/t`.
    pub one_unit: TruncSeries,
    /// `v_∞(∫_u ω)`.
    pub valuation: Rat,
    pub log_abs: LogQValue,
}

/// `|∫_u ω|_∞` from `(β^q·∏_{i=1}^{N}(1 − ζ^{q^i−1}))^{−1}` in
/// `F_q((ζ))(β)`, `β^{q−1} = −ζ`.
pub fn carlitz_infty_log_abs(q: u64, n: u32, config: TowerConfig) -> Result<InfinityPeriod> {
    if n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    let base = LocalFieldTower::new(q, config)?;
    let (tower, beta) = solve_kummer(&base, q - 1, &base.z().neg())?;
    let beta_q = beta.pow(q as i64)?;

    let field = base.top_field().clone();
    let mut prod = TruncSeries::one(&field);
    for i in 1..=n {
        let e = (q as i64).pow(i) - 1;
        let factor = TruncSeries::from_terms(&field, [(0, Fe::ONE), (e, field.neg(Fe::ONE))], None);
        prod = prod.mul(&factor)?;
    }
    let is_one_unit = prod.coeff(0)? == Fe::ONE && prod.terms().all(|(e, c)| e > 0 || c == Fe::ONE);
    if !is_one_unit {
        return Err(Error::CrossCheck("ℓ⁻ specialization is not a 1-unit".into()));
    }
    let unit = tower.elem(0, prod.truncate(config.rel_prec))?.to_top_of(&tower)?;
    let period = beta_q.mul(&unit)?.inv()?;
    let valuation = period
        .valuation()
        .ok_or_else(|| Error::InsufficientPrecision("∞-adic period undetermined".into()))?;
    let beta_power_valuation = beta_q.valuation().expect("β^q is a monomial");
    Ok(InfinityPeriod { q, n, beta_power_valuation, one_unit: prod, log_abs: LogQValue(-valuation.clone()), valuation })
}

/// `log|⟨ω, u⟩|_v` at a finite place and the data it was read from.
#[derive(Clone, Debug)]
pub struct FinitePlacePeriod {
    pub place: Place,
    pub degree: u32,
    pub q_v: u64,
    /// `v̂` of the pairing; the Carlitz shtuka has a simple pole, so 1.
    pub hat_order: i64,
    /// `v(∫_u ω)`, normalised by `v(ζ_v) = 1`.
    pub valuation: Rat,
    /// `−v·log q_v` folded into `log q`.
    pub log_abs: LogQValue,
    /// `Z_v(𝟙, 1)` from the local factor, independently of the series.
    pub z_v_at_one: Rat,
    pub depth_used: usize,
    /// Set when the tower could not be built and the closed form
    /// `1/(q_v − 1)` was used instead.
    pub closed_form_fallback: bool,
}

impl FinitePlacePeriod {
    /// `log|∫ω|_v = −Z_v(𝟙, 1)·log q_v`.
    pub fn matches_local_factor(&self) -> bool {
        self.log_abs == LogQValue::at_place(&-self.z_v_at_one.clone(), self.degree)
    }
}

/// Builds `ℓ⁺` over `F_{q_v}((z_v))` with `ξ = ζ_v`, `q̃ = q_v` and reads
/// off the leading term of `⟨ω, u⟩_v` modulo `z_v − ζ_v`.
pub fn carlitz_v_log_abs(q: u64, place: &Place, depth: usize, config: TowerConfig) -> Result<FinitePlacePeriod> {
    if matches!(place, Place::Infinity) {
        return Err(Error::InvalidInput("expected a finite place".into()));
    }
    let degree = place.degree();
    let q_v = place.q_v(q);
    let datum = LocalGaloisDatum::tame(q_v, 1, 1, config)?;
    let z_v = z_v_at_one(&datum, &ClassFunctionQ::trivial(&datum))?;

    let shtuka = LocalShtukaStd::carlitz(q_v)?;
    let closed = Rat::new(1.into(), (q_v as i64 - 1).into());
    let (hat_order, valuation, depth_used, fallback) =
        match shtuka_period(&shtuka, &Embedding::new(0, 0, 0), depth, config) {
            Ok(p) => (p.hat_order, p.valuation, p.factors.first().map_or(0, |(_, o)| o.element.depth_used), false),
            Err(Error::TowerBound { .. }) => (1, closed, 0, true),
            Err(e) => return Err(e),
        };
    let log_abs = LogQValue::at_place(&-valuation.clone(), degree);
    Ok(FinitePlacePeriod {
        place: place.clone(),
        degree,
        q_v,
        hat_order,
        valuation,
        log_abs,
        z_v_at_one: z_v,
        depth_used,
        closed_form_fallback: fallback,
    })
}

/// The regularized product formula for the Carlitz motive.
#[derive(Clone, Debug)]
pub struct ProductFormulaReport {
    pub q: u64,
    pub max_degree: u32,
    pub infinity: InfinityPeriod,
    pub places: Vec<FinitePlacePeriod>,
    /// Convention with `a = 𝟙`, genus 0 and `μ^∞ = 0`.
    pub regularization: Regularization,
    /// `log|∫ω|_∞ + Σ_{v≠∞} log|∫ω|_v`.
    pub value: LogQValue,
}

/// Sums the ∞-term, the directly computed places of degree `≤ max_degree`
/// and the regularized tail.
pub fn carlitz_product_formula(q: u64, max_degree: u32, n: u32, config: TowerConfig) -> Result<ProductFormulaReport> {
    if max_degree == 0 {
        return Err(Error::InvalidInput("the explicit degree bound must be at least 1".into()));
    }
    let infinity = carlitz_infty_log_abs(q, n, config)?;
    let places = Place::finite_up_to(q, max_degree)?
        .iter()
        .map(|p| carlitz_v_log_abs(q, p, n as usize, config))
        .collect::<Result<Vec<_>>>()?;
    for p in &places {
        if p.hat_order != 1 {
            return Err(Error::CrossCheck(format!("v̂ = {} at {}, expected a simple pole", p.hat_order, p.place)));
        }
        if !p.matches_local_factor() {
            return Err(Error::CrossCheck(format!(
                "at {}: direct value {} but −Z_v(𝟙,1)·log q_v = {}",
                p.place,
                p.log_abs,
                LogQValue::at_place(&-p.z_v_at_one.clone(), p.degree)
            )));
        }
    }
    let explicit: Vec<ExplicitPlace> = places
        .iter()
        .map(|p| ExplicitPlace {
            label: p.place.to_string(),
            degree: p.degree,
            x_v: p.log_abs.clone(),
            z_v_at_one: p.z_v_at_one.clone(),
        })
        .collect();
    let regularization = regularized_sum(q, &TailCharacter::Trivial, 0, &explicit)?;
    let value = infinity.log_abs.clone() + regularization.total.clone();
    Ok(ProductFormulaReport { q, max_degree, infinity, places, regularization, value })
}

/// `q/(q − 1)`.
pub fn infinity_closed_form(q: u64) -> Rat {
    Rat::new((q as i64).into(), (q as i64 - 1).into())
}

/// Whether a value is exactly `0·log q`.
pub fn is_exact_zero(v: &LogQValue) -> bool {
    v.coefficient().is_zero()
}
