//! The periods `Ω(E_v, φ, ψ)` as explicit series in `z − ζ`, their
//! valuations, and the checks that tie them to `τ` and to Galois actions.

use num_bigint::BigInt;
use num_traits::Zero;

use super::cm::{CMAlgebra, Embedding};
use super::standard::{embedding_image, tau_invariant_unit_part, LocalShtukaStd};
use crate::algebra::arith::binom_mod_p;
use crate::algebra::ff::Fe;
use crate::algebra::rat::{int, Rat};
use crate::algebra::series::TruncSeries;
use crate::config::TowerConfig;
use crate::error::{Error, Result};
use crate::lfunctions::{a_psi_phi, z_minus_mu, LocalGaloisDatum};
use crate::local::{
    predicted_ell_valuation, solve_frobenius_recursion, tame_tower, ElemSeries, LocalFieldTower, TowerAut, TowerElem,
};

/// Default number of `ℓ_n` beyond `ℓ_0`.
pub const DEFAULT_DEPTH: usize = 3;

/// `Σ_{m ≥ v̂} c_m (z − ζ)^m` with `c_{v̂}` nonzero; coefficients past the
/// end are unknown. Defined up to `R^× + (z−ζ)L[[z−ζ]]`: only `v̂` and the
/// leading valuation are canonical.
#[derive(Clone, Debug)]
pub struct PeriodElement {
    pub hat_order: i64,
    pub coeffs: Vec<TowerElem>,
    /// The number of `ℓ_n` (`n ≥ 1`) the series was built from.
    pub depth_used: usize,
}

impl PeriodElement {
    /// `v̂ = ord_{z−ζ}`.
    pub fn hat_valuation(&self) -> i64 {
        self.hat_order
    }

    /// The valuation of the leading coefficient.
    pub fn valuation(&self) -> Result<Rat> {
        self.coeffs
            .first()
            .and_then(TowerElem::valuation)
            .ok_or_else(|| Error::InsufficientPrecision("leading coefficient undetermined".into()))
    }
}

/// `Ω(E_v, φ, ψ)` together with the data it was computed from.
#[derive(Clone, Debug)]
pub struct OmegaPeriod {
    pub phi: Embedding,
    pub psi: Embedding,
    /// The tower over which `ℓ_0, …, ℓ_N` live.
    pub tower: LocalFieldTower,
    pub ells: Vec<TowerElem>,
    /// The series in `t = y − ψ(y)`.
    pub t_series: ElemSeries,
    pub element: PeriodElement,
}

/// Optional modifications of the construction.
#[derive(Clone, Debug, Default)]
pub struct OmegaOptions {
    /// Replace `ℓ⁺` by `a·ℓ⁺` for a unit `a ∈ F_{q̃}[y]`.
    pub rescale: Option<TruncSeries>,
    /// Adjoin an unramified extension of this degree on top of the tower.
    pub extra_unramified: Option<u32>,
}

/// Everything needed to write down `Ω(φ, ψ)` in one tower.
struct Setup {
    base: LocalFieldTower,
    tower: LocalFieldTower,
    q_v: u64,
    q_tilde: u64,
    e: u64,
    /// `(j(ψ) − j(φ)) mod f`.
    r: u32,
    same_j: bool,
    same_embedding: bool,
    phi_y: TowerElem,
    psi_y: TowerElem,
    /// `ℓ_n` of the (possibly rescaled) `ℓ⁺`.
    ells: Vec<TowerElem>,
    depth: usize,
}

impl Setup {
    fn new(cm: &CMAlgebra, phi: &Embedding, psi: &Embedding, depth: usize, opts: &OmegaOptions, config: TowerConfig) -> Result<Self> {
        cm.check_embedding(phi)?;
        cm.check_embedding(psi)?;
        if phi.i != psi.i {
            return Err(Error::MixedComponent(phi.i, psi.i));
        }
        let c = cm.component(phi.i)?;
        if !c.tame {
            return Err(Error::WildUnsupported(phi.i));
        }
        let q_v = cm.q_v();
        let q_tilde = cm.q_tilde(phi.i)?;
        let base = tame_tower(q_v, c.f, c.e, config)?;
        let phi_y = embedding_image(&base, phi.k, c.e)?;
        let psi_y = embedding_image(&base, psi.k, c.e)?;
        // The largest depth whose tower fits the degree bound.
        let mut n = depth;
        let (tower, ells) = loop {
            let attempt = solve_frobenius_recursion(&base, &phi_y, q_tilde, n).and_then(|(t, ells)| match opts.extra_unramified {
                Some(d) => Ok((t.extend_unramified(d)?, ells)),
                None => Ok((t, ells)),
            });
            match attempt {
                Err(Error::TowerBound { .. }) if n > 0 => n -= 1,
                other => break other?,
            }
        };
        let mut ells: Vec<TowerElem> = ells.iter().map(|l| l.to_top_of(&tower)).collect::<Result<_>>()?;
        if let Some(a) = &opts.rescale {
            ells = rescale(&tower, &ells, a, q_tilde)?;
        }
        Ok(Setup {
            phi_y: phi_y.to_top_of(&tower)?,
            psi_y: psi_y.to_top_of(&tower)?,
            base,
            tower,
            q_v,
            q_tilde,
            e: c.e,
            r: cm.frobenius_gap(phi.i, psi.j, phi.j)?,
            same_j: phi.j == psi.j,
            same_embedding: phi == psi,
            ells,
            depth: n,
        })
    }

    fn level(&self) -> usize {
        self.tower.top()
    }

    fn v_xi(&self) -> Rat {
        Rat::new(1.into(), BigInt::from(self.e))
    }

    /// `q_v^r`.
    fn twist(&self) -> u64 {
        self.q_v.pow(self.r)
    }

    /// `σ̂^r(ℓ_n)`.
    fn w(&self) -> Vec<TowerElem> {
        self.ells.iter().map(|l| l.frobenius_qv(self.r)).collect()
    }

    /// Lower bound for `v(σ̂^r(ℓ_n))` at `n = N + 1`, the smallest over the
    /// unknown terms.
    fn w_tail(&self) -> Rat {
        predicted_ell_valuation(&self.v_xi(), self.q_tilde, self.depth as u32 + 1) * int(self.twist() as i64)
    }

    fn p(&self) -> u64 {
        u64::from(self.tower.top_field().p())
    }
}

/// `a·ℓ⁺` for `a ∈ F_{q̃}[y]` with nonzero constant term; the product still
/// solves `σ̂^f(x) = (y − ξ)·x` because `σ̂^f` fixes `a`.
fn rescale(tower: &LocalFieldTower, ells: &[TowerElem], a: &TruncSeries, q_tilde: u64) -> Result<Vec<TowerElem>> {
    if a.ord() != Some(0) {
        return Err(Error::NonUnit(format!("rescaling {} is not a unit", a.render("y"))));
    }
    let emb = a.field().embed_into(tower.top_field())?;
    let top = tower.top();
    let mut coeffs = Vec::new();
    for (m, c) in a.terms() {
        let c = emb.map(c);
        if !tower.top_field().in_subfield(c, q_tilde) {
            return Err(Error::InvalidInput("rescaling must have coefficients in F_q̃".into()));
        }
        coeffs.push((m as usize, tower.constant(top, c)));
    }
    (0..ells.len())
        .map(|n| {
            let mut acc = tower.zero(top);
            for (m, c) in &coeffs {
                if *m <= n {
                    acc = acc.add(&c.mul(&ells[n - m])?)?;
                }
            }
            Ok(acc)
        })
        .collect()
}

/// Taylor coefficients `b_m` of `W(y0 + t)` from the known `w_0, …, w_N`.
/// The unknown terms `n > N` have valuation at least `tail + (N + 1 − m)·v(y0)`.
fn shift_expand(w: &[TowerElem], y0: &TowerElem, tail: &Rat, p: u64) -> Result<Vec<TowerElem>> {
    let v0 = y0.valuation().ok_or_else(|| Error::InsufficientPrecision("ψ(y) undetermined".into()))?;
    let big_n = w.len();
    let powers: Vec<TowerElem> = (0..big_n).map(|k| y0.pow(k as i64)).collect::<Result<_>>()?;
    (0..big_n)
        .map(|m| {
            let mut acc = y0.tower().zero(y0.level());
            for n in m..big_n {
                let binom = binom_mod_p(n as u64, m as u64, p) as i64;
                if binom != 0 {
                    acc = acc.add(&w[n].mul(&powers[n - m])?.scale_int(binom))?;
                }
            }
            Ok(acc.truncate_valuation(&(tail.clone() + v0.clone() * int((big_n - m) as i64))))
        })
        .collect()
}

/// Checks that `v(w_n) + n·v(y0)` increases strictly with `n` and stays
/// below the bound for the unknown terms, so the `n = 0` term decides.
fn check_monotone(w: &[TowerElem], y0: &TowerElem, tail: &Rat) -> Result<()> {
    let v0 = y0.valuation().ok_or_else(|| Error::InsufficientPrecision("ψ(y) undetermined".into()))?;
    let mut prev: Option<Rat> = None;
    for (n, x) in w.iter().enumerate() {
        let v = x.valuation().ok_or_else(|| Error::InsufficientPrecision(format!("ℓ_{n} undetermined")))?
            + v0.clone() * int(n as i64);
        if prev.as_ref().is_some_and(|p| *p >= v) {
            return Err(Error::AmbiguousLeadingTerm);
        }
        prev = Some(v);
    }
    let tail_term = tail.clone() + v0 * int(w.len() as i64);
    if prev.is_some_and(|p| p >= tail_term) {
        return Err(Error::AmbiguousLeadingTerm);
    }
    Ok(())
}

fn t_series(s: &Setup) -> Result<ElemSeries> {
    let w = s.w();
    let tail = s.w_tail();
    check_monotone(&w, &s.psi_y, &tail)?;
    let b = shift_expand(&w, &s.psi_y, &tail, s.p())?;
    let lvl = s.level();
    let n = b.len();
    let coeffs: Vec<TowerElem> = if !s.same_j {
        b
    } else if s.same_embedding {
        std::iter::once(s.tower.zero(lvl)).chain(b).collect()
    } else {
        let c = s.psi_y.sub(&s.phi_y)?;
        (0..n)
            .map(|m| {
                let head = c.mul(&b[m])?;
                if m == 0 {
                    Ok(head)
                } else {
                    head.add(&b[m - 1])
                }
            })
            .collect::<Result<_>>()?
    };
    let len = coeffs.len();
    ElemSeries::new(&s.tower, lvl, &coeffs, Some(len))
}

/// Re-expands a series in `t = y − y0` in `Z = z − ζ`, where `z = y^e`.
fn to_z_minus_zeta(p: &ElemSeries, y0: &TowerElem, e: u64, prime: u64) -> Result<ElemSeries> {
    let tower = p.tower();
    let lvl = p.level();
    let mut h = vec![tower.zero(lvl)];
    for m in 1..=e {
        let binom = binom_mod_p(e, m, prime) as i64;
        h.push(y0.pow((e - m) as i64)?.scale_int(binom));
    }
    let h = ElemSeries::new(tower, lvl, &h, None)?;
    let n = p.prec().unwrap_or(p.coeffs().len());
    let inv = h.reverse(n)?;
    p.compose(&inv)
}

fn element_from(z: &ElemSeries, depth: usize) -> Result<PeriodElement> {
    for (m, c) in z.coeffs().iter().enumerate() {
        if c.series().is_exact_zero() {
            continue;
        }
        if c.valuation().is_none() {
            return Err(Error::InsufficientPrecision(format!("coefficient {m} of the period is undetermined")));
        }
        return Ok(PeriodElement { hat_order: m as i64, coeffs: z.coeffs()[m..].to_vec(), depth_used: depth });
    }
    Err(Error::InsufficientPrecision("period vanishes to the computed order".into()))
}

/// `Ω(E_v, φ, ψ) = (y − φ(y))^{δ}·σ̂^{r}(ℓ⁺_{y,φ(y)})` in the `ψ`-coordinate,
/// with `δ = [j(ψ) = j(φ)]` and `r = (j(ψ) − j(φ)) mod f`.
///
/// The depth is lowered until the tower fits the configured degree bound;
/// `element.depth_used` reports the value used.
pub fn omega_period(cm: &CMAlgebra, phi: &Embedding, psi: &Embedding, depth: usize, config: TowerConfig) -> Result<OmegaPeriod> {
    omega_period_with(cm, phi, psi, depth, &OmegaOptions::default(), config)
}

pub fn omega_period_with(
    cm: &CMAlgebra,
    phi: &Embedding,
    psi: &Embedding,
    depth: usize,
    opts: &OmegaOptions,
    config: TowerConfig,
) -> Result<OmegaPeriod> {
    let s = Setup::new(cm, phi, psi, depth, opts, config)?;
    let t = t_series(&s)?;
    let z = to_z_minus_zeta(&t, &s.psi_y, s.e, s.p())?;
    let element = element_from(&z, s.depth)?;
    Ok(OmegaPeriod { phi: *phi, psi: *psi, tower: s.tower, ells: s.ells, t_series: t, element })
}

/// `v(Ω(E_v, φ, ψ))` through the explicit series.
pub fn period_valuation_series(cm: &CMAlgebra, phi: &Embedding, psi: &Embedding, config: TowerConfig) -> Result<Rat> {
    omega_period(cm, phi, psi, DEFAULT_DEPTH, config)?.element.valuation()
}

/// `Z_v(a_{ψ,φ}, 1) − μ_Art,v(a_{ψ,φ})` on the Galois datum of the tame
/// tower of component `i(ψ)`.
pub fn omega_valuation_via_l(cm: &CMAlgebra, phi: &Embedding, psi: &Embedding, config: TowerConfig) -> Result<Rat> {
    if phi.i != psi.i {
        return Err(Error::MixedComponent(phi.i, psi.i));
    }
    let c = cm.component(psi.i)?;
    if !c.tame {
        return Err(Error::WildUnsupported(psi.i));
    }
    let d = LocalGaloisDatum::tame(cm.q_v(), c.f, c.e, config)?;
    z_minus_mu(&d, &a_psi_phi(&d, cm, psi, phi)?)
}

/// Outcome of re-applying `τ` and `σ̂` to the components of `ℓ⁺`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauCheck {
    pub depth_used: usize,
    pub holds: bool,
}

/// For `V_j = σ̂^{(j − j(φ)) mod f}(ℓ⁺)` checks `τ_j·V_j = σ̂(V_{j−1})` for
/// every `j`, coefficientwise in `y` up to the depth, where `τ_{j(φ)} = y − φ(y)`
/// and `τ_j = 1` otherwise.
pub fn tau_invariance_check(
    cm: &CMAlgebra,
    phi: &Embedding,
    depth: usize,
    opts: &OmegaOptions,
    config: TowerConfig,
) -> Result<TauCheck> {
    let s = Setup::new(cm, phi, phi, depth, opts, config)?;
    let f = cm.component(phi.i)?.f;
    let lvl = s.level();
    let prec = Some(s.ells.len());
    let v = |j: u32| -> Result<ElemSeries> {
        let r = (j + f - phi.j) % f;
        let cs: Vec<TowerElem> = s.ells.iter().map(|l| l.frobenius_qv(r)).collect();
        ElemSeries::new(&s.tower, lvl, &cs, prec)
    };
    let mut holds = true;
    for j in 0..f {
        let vj = v(j)?;
        let lhs = if j == phi.j {
            let tau = ElemSeries::new(&s.tower, lvl, &[s.phi_y.neg(), s.tower.one(lvl)], None)?;
            tau.mul(&vj)?
        } else {
            vj
        };
        let rhs = v((j + f - 1) % f)?.map(|c| Ok(c.frobenius_qv(1)))?;
        holds &= lhs.eq_within_precision(&rhs)?;
    }
    Ok(TauCheck { depth_used: s.depth, holds })
}

/// The period of a standard shtuka in the `ψ`-coordinate, kept as the formal
/// product `∏_φ Ω(φ, ψ)^{d_φ}` times the unit part.
#[derive(Clone, Debug)]
pub struct ShtukaPeriod {
    pub psi: Embedding,
    pub factors: Vec<(i64, OmegaPeriod)>,
    /// Constant term of `ε^{-1}·c` at `ψ` when the shtuka is étale.
    pub unit_leading: Option<Fe>,
    pub hat_order: i64,
    pub valuation: Rat,
}

pub fn shtuka_period(shtuka: &LocalShtukaStd, psi: &Embedding, depth: usize, config: TowerConfig) -> Result<ShtukaPeriod> {
    let cm = shtuka.cm();
    cm.check_embedding(psi)?;
    let mut factors = Vec::new();
    let mut hat_order = 0;
    let mut valuation = Rat::zero();
    for (phi, d) in shtuka.cm_type().entries() {
        if phi.i != psi.i || *d == 0 {
            continue;
        }
        let om = omega_period(cm, phi, psi, depth, config)?;
        hat_order += d * om.element.hat_order;
        valuation += om.element.valuation()? * int(*d);
        factors.push((*d, om));
    }
    let unit_leading = if shtuka.is_etale() {
        let u = tau_invariant_unit_part(shtuka, depth)?;
        let field = &u.field;
        let c0 = u.c[&(psi.i, psi.j)].coeff(0)?;
        let e0 = match shtuka.eps(psi.i, psi.j) {
            None => field.one(),
            Some(e) => e.field().embed_into(field)?.map(e.coeff(0)?),
        };
        let lead = field.div(c0, e0)?;
        if lead.is_zero() {
            return Err(Error::CrossCheck("unit part has zero constant term".into()));
        }
        Some(lead)
    } else {
        None
    };
    Ok(ShtukaPeriod { psi: *psi, factors, unit_leading, hat_order, valuation })
}

/// Result of the Galois check for one automorphism `g` of the tower over
/// the field generated by `φ(E_v)`.
#[derive(Clone, Debug)]
pub struct GaloisCheck {
    pub aut: TowerAut,
    /// Coefficients of `χ(g) = g(ℓ⁺)/ℓ⁺` in `y`.
    pub chi: Vec<TowerElem>,
    /// Whether every coefficient of `χ(g)` is a constant in `F_{q̃}`.
    pub chi_in_oe: bool,
    /// Whether `g(Ω) = σ̂^r(χ(g))(ψ(y) + t)·Ω` within precision.
    pub relation: bool,
}

impl GaloisCheck {
    pub fn passed(&self) -> bool {
        self.chi_in_oe && self.relation
    }

    /// The constant term of `χ(g)` as a residue element.
    pub fn chi_constant(&self) -> Option<Fe> {
        self.chi.first().and_then(|c| c.series().coeff(0).ok())
    }
}

/// The automorphisms `Π ↦ λ·Π` (composed with a residue Frobenius) of the top
/// of the tower that fix the tame base tower pointwise.
fn automorphisms_over_base(s: &Setup) -> Result<Vec<TowerAut>> {
    let tower = &s.tower;
    let field = tower.top_field();
    let base_top = s.base.top();
    let pi = s.base.uniformizer(base_top).to_top_of(tower)?;
    let gen = s.base.constant(base_top, s.base.top_field().generator()).to_top_of(tower)?;
    let mut out = Vec::new();
    for frob in 0..tower.f_abs() {
        for lambda in field.elements().filter(|x| !x.is_zero()) {
            let g = TowerAut { frob, scale: lambda };
            if g.fixes(tower, &pi)? && g.fixes(tower, &gen)? && g.fixes(tower, &s.phi_y)? {
                out.push(g);
            }
        }
    }
    Ok(out)
}

/// For every automorphism of the tower fixing the tame base (and with it
/// `φ(y)` and `ψ(y)`), extracts `χ(g) = g(ℓ⁺)/ℓ⁺`, checks that it lies in
/// `O_{E_v}^×` and that `g(Ω) = ψ(χ(g))·Ω` within precision.
pub fn galois_character_check(
    cm: &CMAlgebra,
    phi: &Embedding,
    psi: &Embedding,
    depth: usize,
    opts: &OmegaOptions,
    config: TowerConfig,
) -> Result<Vec<GaloisCheck>> {
    // Dividing by ℓ_0 loses precision with every step in y.
    let config = config.with_rel_prec(config.rel_prec.max(12 * depth as i64));
    let s = Setup::new(cm, phi, psi, depth, opts, config)?;
    let tower = &s.tower;
    let lvl = s.level();
    let omega = t_series(&s)?;
    let l0_inv = s.ells[0].inv()?;
    let mut out = Vec::new();
    for g in automorphisms_over_base(&s)? {
        let mut chi: Vec<TowerElem> = Vec::new();
        for n in 0..s.ells.len() {
            let mut acc = g.apply(tower, &s.ells[n])?;
            for (m, r) in chi.iter().enumerate() {
                acc = acc.sub(&r.mul(&s.ells[n - m])?)?;
            }
            chi.push(acc.mul(&l0_inv)?);
        }
        let field = tower.top_field();
        let chi_in_oe = chi.iter().all(|c| {
            let c0 = c.series().coeff(0).unwrap_or(Fe::ZERO);
            let rest = c.sub(&tower.constant(lvl, c0));
            field.in_subfield(c0, s.q_tilde)
                && c.precision().is_none_or(|p| p > Rat::zero())
                && rest.is_ok_and(|r| r.is_zero_within_precision())
        });
        // χ has coefficients of valuation ≥ 0.
        let twisted: Vec<TowerElem> = chi.iter().map(|c| c.frobenius_qv(s.r)).collect();
        let x = shift_expand(&twisted, &s.psi_y, &Rat::zero(), s.p())?;
        let x = ElemSeries::new(tower, lvl, &x, Some(x.len()))?;
        let lhs = omega.map(|c| g.apply(tower, c))?;
        let rhs = x.mul(&omega)?;
        let relation = lhs.eq_within_precision(&rhs)?;
        out.push(GaloisCheck { aut: g, chi, chi_in_oe, relation });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ff::FqField;
    use crate::algebra::rat::rat;
    use crate::shtuka::cm::CMType;

    fn cfg() -> TowerConfig {
        TowerConfig::default()
    }

    fn emb(j: u32, k: u64) -> Embedding {
        Embedding::new(0, j, k)
    }

    #[test]
    fn carlitz_period() {
        for q in [2u64, 3, 4] {
            let cm = CMAlgebra::tame(q, 1, 1).unwrap();
            let om = omega_period(&cm, &emb(0, 0), &emb(0, 0), 2, cfg()).unwrap();
            assert_eq!(om.element.hat_valuation(), 1);
            assert_eq!(om.element.valuation().unwrap(), rat(1, q as i64 - 1));
        }
    }

    #[test]
    fn ramified_pairs() {
        let cm = CMAlgebra::tame(3, 1, 2).unwrap();
        let same = omega_period(&cm, &emb(0, 0), &emb(0, 0), 1, cfg()).unwrap();
        assert_eq!(same.element.hat_valuation(), 1);
        assert_eq!(same.element.valuation().unwrap(), rat(-1, 4));
        let other = omega_period(&cm, &emb(0, 1), &emb(0, 0), 1, cfg()).unwrap();
        assert_eq!(other.element.hat_valuation(), 0);
        assert_eq!(other.element.valuation().unwrap(), rat(3, 4));
    }

    #[test]
    fn different_residue_embeddings() {
        let cm = CMAlgebra::tame(2, 2, 1).unwrap();
        let om = omega_period(&cm, &emb(0, 0), &emb(1, 0), 1, cfg()).unwrap();
        assert_eq!(om.element.hat_valuation(), 0);
        assert_eq!(om.element.valuation().unwrap(), rat(2, 3));
    }

    #[test]
    fn series_closed_and_l_routes_agree() {
        for (q, f, e) in [(2u64, 1u32, 1u64), (2, 2, 3), (3, 1, 2), (3, 2, 2)] {
            let cm = CMAlgebra::tame(q, f, e).unwrap();
            for phi in cm.embeddings() {
                for psi in cm.embeddings() {
                    let closed = cm.omega_valuation_closed(&phi, &psi).unwrap();
                    let series = period_valuation_series(&cm, &phi, &psi, cfg()).unwrap();
                    let via_l = omega_valuation_via_l(&cm, &phi, &psi, cfg()).unwrap();
                    assert_eq!(series, closed, "q={q} f={f} e={e} φ={phi} ψ={psi}");
                    assert_eq!(via_l, closed, "q={q} f={f} e={e} φ={phi} ψ={psi}");
                }
            }
        }
    }

    #[test]
    fn depth_is_clamped_to_the_bound() {
        let cm = CMAlgebra::tame(3, 2, 4).unwrap();
        let om = omega_period(&cm, &emb(0, 0), &emb(0, 0), 3, cfg()).unwrap();
        assert_eq!(om.element.depth_used, 0);
        assert_eq!(om.element.valuation().unwrap(), cm.omega_valuation_closed(&emb(0, 0), &emb(0, 0)).unwrap());
    }

    #[test]
    fn mixed_components_rejected() {
        let cm = CMAlgebra::new(2, vec![super::super::cm::Component::tame(1, 1); 2]).unwrap();
        let r = omega_period(&cm, &Embedding::new(0, 0, 0), &Embedding::new(1, 0, 0), 1, cfg());
        assert!(matches!(r, Err(Error::MixedComponent(0, 1))));
    }

    #[test]
    fn tau_invariance() {
        for (q, f, e) in [(2u64, 1u32, 1u64), (2, 2, 1), (3, 1, 2), (2, 2, 3)] {
            let cm = CMAlgebra::tame(q, f, e).unwrap();
            for phi in cm.embeddings() {
                let c = tau_invariance_check(&cm, &phi, 2, &OmegaOptions::default(), cfg()).unwrap();
                assert!(c.holds, "q={q} f={f} e={e} φ={phi}");
            }
        }
    }

    #[test]
    fn rescaling_keeps_valuations() {
        let cm = CMAlgebra::tame(2, 2, 1).unwrap();
        let f4 = FqField::of_size(4).unwrap();
        let a = TruncSeries::from_coeffs(&f4, 0, &[f4.generator(), f4.one(), f4.one()], None);
        let opts = OmegaOptions { rescale: Some(a), ..Default::default() };
        assert!(tau_invariance_check(&cm, &emb(1, 0), 2, &opts, cfg()).unwrap().holds);
        for psi in cm.embeddings() {
            let om = omega_period_with(&cm, &emb(1, 0), &psi, 2, &opts, cfg()).unwrap();
            let plain = omega_period(&cm, &emb(1, 0), &psi, 2, cfg()).unwrap();
            assert_eq!(om.element.valuation().unwrap(), plain.element.valuation().unwrap());
            assert_eq!(om.element.hat_order, plain.element.hat_order);
        }
        let f2 = FqField::of_size(2).unwrap();
        let bad = TruncSeries::monomial(&f2, f2.one(), 1);
        let opts = OmegaOptions { rescale: Some(bad), ..Default::default() };
        assert!(omega_period_with(&cm, &emb(0, 0), &emb(0, 0), 1, &opts, cfg()).is_err());
    }

    #[test]
    fn shtuka_period_is_additive() {
        let cm = CMAlgebra::tame(2, 2, 1).unwrap();
        let t = CMType::new(&cm, &[(emb(0, 0), 2), (emb(1, 0), 1)]).unwrap();
        let s = LocalShtukaStd::new(&cm, &t, &[]).unwrap();
        let p = shtuka_period(&s, &emb(0, 0), 1, cfg()).unwrap();
        assert_eq!(p.hat_order, 2);
        assert_eq!(p.valuation, t.closed_valuation(&cm, &emb(0, 0)).unwrap());
        let unit = LocalShtukaStd::new(&cm, &CMType::zero(&cm), &[]).unwrap();
        let p = shtuka_period(&unit, &emb(0, 0), 1, cfg()).unwrap();
        assert_eq!((p.hat_order, p.valuation), (0, Rat::zero()));
        assert!(p.unit_leading.is_some());
    }

    #[test]
    fn inertia_involution_flips_ell0() {
        let cm = CMAlgebra::tame(3, 1, 2).unwrap();
        let checks = galois_character_check(&cm, &emb(0, 0), &emb(0, 1), 2, &OmegaOptions::default(), cfg()).unwrap();
        assert!(checks.iter().all(GaloisCheck::passed));
        let minus_one = Fe(2);
        let flip = checks.iter().find(|c| c.aut.scale == minus_one && c.aut.frob == 0).expect("Π ↦ −Π");
        assert_eq!(flip.chi_constant(), Some(minus_one));
        assert!(checks.iter().any(|c| c.aut == TowerAut::identity() && c.chi_constant() == Some(Fe::ONE)));
    }

    #[test]
    fn frobenius_lift() {
        let cm = CMAlgebra::tame(3, 1, 1).unwrap();
        let opts = OmegaOptions { extra_unramified: Some(2), ..Default::default() };
        let checks = galois_character_check(&cm, &emb(0, 0), &emb(0, 0), 2, &opts, cfg()).unwrap();
        assert!(checks.iter().any(|c| c.aut.frob != 0));
        assert!(checks.iter().all(GaloisCheck::passed));
    }
}
