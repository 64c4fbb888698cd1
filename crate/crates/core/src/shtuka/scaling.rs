//! Valuations of `∫_u ω` for standard shtukas: rescaled generators, the
//! Φ-linear period valuation and its average over the Galois group.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::cm::{CMAlgebra, CMType, Embedding};
use super::period::{omega_period, shtuka_period, ShtukaPeriod};
use super::standard::LocalShtukaStd;
use crate::algebra::rat::{int, Rat};
use crate::config::TowerConfig;
use crate::error::{Error, Result};
use crate::lfunctions::{cm_characters, z_minus_mu, LocalGaloisDatum};

/// Rescalings relative to the canonical generators: `u ↦ a·u` with
/// `a = unit·∏ y_i^{n_i}` and `ω ↦ x·ω` with `x` of leading valuation
/// `x_valuation` and order `x_hat_order` in `z − ζ`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScalingData {
    pub a_powers: Vec<i64>,
    pub x_valuation: Rat,
    pub x_hat_order: i64,
}

impl ScalingData {
    /// The canonical generators.
    pub fn canonical() -> Self {
        ScalingData::default()
    }

    /// `v(ψ(a)) = n_{i(ψ)}/e_{i(ψ)}`.
    pub fn v_psi_a(&self, cm: &CMAlgebra, psi: &Embedding) -> Result<Rat> {
        let n = self.a_powers.get(psi.i).copied().unwrap_or(0);
        let e = cm.component(psi.i)?.e;
        Ok(Rat::new(n.into(), (e as i64).into()))
    }

    /// `v(ψ(a)) + v(x)`.
    pub fn shift(&self, cm: &CMAlgebra, psi: &Embedding) -> Result<Rat> {
        Ok(self.v_psi_a(cm, psi)? + self.x_valuation.clone())
    }
}

/// `∫_u ω` for a standard shtuka, up to `R^× + (z−ζ)L[[z−ζ]]`.
#[derive(Clone, Debug)]
pub struct IntegralValue {
    pub period: ShtukaPeriod,
    pub hat_order: i64,
    pub valuation: Rat,
}

/// `(a ⊗ 1)·x·∏ Ω(φ, ψ)^{d_φ}` times the unit part, through the explicit
/// series.
pub fn integral_u_omega(
    shtuka: &LocalShtukaStd,
    psi: &Embedding,
    scaling: &ScalingData,
    depth: usize,
    config: TowerConfig,
) -> Result<IntegralValue> {
    let period = shtuka_period(shtuka, psi, depth, config)?;
    let valuation = period.valuation.clone() + scaling.shift(shtuka.cm(), psi)?;
    let hat_order = period.hat_order + scaling.x_hat_order;
    Ok(IntegralValue { period, hat_order, valuation })
}

/// The tame Galois datum of component `i(ψ)`.
fn component_datum(cm: &CMAlgebra, psi: &Embedding, config: TowerConfig) -> Result<LocalGaloisDatum> {
    let c = cm.component(psi.i)?;
    if !c.tame {
        return Err(Error::WildUnsupported(psi.i));
    }
    LocalGaloisDatum::tame(cm.q_v(), c.f, c.e, config)
}

/// `Z_v(a_{ψ,Φ}, 1) − μ_Art,v(a_{ψ,Φ}) + v(ω_ψ) + v_ψ(u)`.
pub fn cm_period_valuation(
    cm: &CMAlgebra,
    phi_type: &CMType,
    psi: &Embedding,
    scaling: &ScalingData,
    config: TowerConfig,
) -> Result<Rat> {
    let d = component_datum(cm, psi, config)?;
    let (a, _) = cm_characters(&d, cm, phi_type, psi)?;
    Ok(z_minus_mu(&d, &a)? + scaling.shift(cm, psi)?)
}

/// `Σ_φ d_φ·v(Ω(φ, ψ)) + v(ω_ψ) + v_ψ(u)` from the explicit series.
pub fn cm_period_valuation_series(
    cm: &CMAlgebra,
    phi_type: &CMType,
    psi: &Embedding,
    scaling: &ScalingData,
    depth: usize,
    config: TowerConfig,
) -> Result<Rat> {
    let mut acc = scaling.shift(cm, psi)?;
    for (phi, d) in phi_type.entries() {
        if phi.i == psi.i && *d != 0 {
            acc += omega_period(cm, phi, psi, depth, config)?.element.valuation()? * int(*d);
        }
    }
    Ok(acc)
}

/// Both sides of the averaged identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AveragedValuation {
    /// `(1/#G)·Σ_η v(∫_{u_η} ω^η)` from the series.
    pub series: Rat,
    /// `Z_v(a⁰, 1) − μ_Art,v(a⁰)` plus the averaged scaling terms.
    pub via_l: Rat,
}

/// Averages over `η ∈ G = Gal(L/Q_v)` for `L` the tame tower of component
/// `i(ψ)`, where `ω^η` lives on the shtuka with CM-type `ηΦ` at `ηψ`.
///
/// `scalings` lists one entry per group element in the datum's order; an
/// empty slice means canonical generators throughout.
pub fn averaged_period_valuation(
    cm: &CMAlgebra,
    phi_type: &CMType,
    psi: &Embedding,
    scalings: &[ScalingData],
    depth: usize,
    config: TowerConfig,
) -> Result<AveragedValuation> {
    let d = component_datum(cm, psi, config)?;
    let (shape, elems) = d.tame_elements().expect("tame datum");
    let n = elems.len();
    if !scalings.is_empty() && scalings.len() != n {
        return Err(Error::InvalidInput(format!("expected {n} scalings, one per group element")));
    }
    let canonical = ScalingData::canonical();
    let scaling = |g: usize| scalings.get(g).unwrap_or(&canonical);

    let embs = cm.embeddings_of(psi.i);
    let mut omega: BTreeMap<(Embedding, Embedding), Rat> = BTreeMap::new();
    let mut series = Rat::zero();
    let mut scaling_sum = Rat::zero();
    for (g, eta) in elems.iter().enumerate() {
        let inv = eta.inverse(shape, cm.q_v());
        let eta_psi = cm.act(eta.a, eta.k, psi)?;
        scaling_sum += scaling(g).shift(cm, &eta_psi)?;
        let mut value = scaling(g).shift(cm, &eta_psi)?;
        for phi in &embs {
            // d^η_φ = d_{η⁻¹φ}.
            let dv = phi_type.d(&cm.act(inv.a, inv.k, phi)?);
            if dv == 0 {
                continue;
            }
            let v = match omega.get(&(*phi, eta_psi)) {
                Some(v) => v.clone(),
                None => {
                    let v = omega_period(cm, phi, &eta_psi, depth, config)?.element.valuation()?;
                    omega.insert((*phi, eta_psi), v.clone());
                    v
                }
            };
            value += v * int(dv);
        }
        series += value;
    }
    let order = int(n as i64);
    let (_, a0) = cm_characters(&d, cm, phi_type, psi)?;
    let via_l = z_minus_mu(&d, &a0)? + scaling_sum / order.clone();
    Ok(AveragedValuation { series: series / order, via_l })
}
