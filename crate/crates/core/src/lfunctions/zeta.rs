//! The local zeta operator `Z_v(a, s)`, the Artin measure `μ_Art,v`, and the
//! characters `a_{E_v,ψ,Φ}`, `a⁰_{E_v,ψ,Φ}` attached to CM-types.

use num_traits::Zero;

use super::datum::{ClassFunctionQ, LocalGaloisDatum};
use crate::algebra::rat::{int, Rat};
use crate::algebra::ratfunc::{QPoly, RatFunc};
use crate::config::TowerConfig;
use crate::error::{Error, Result};
use crate::local::{tame_tower, TameAbelianAut};
use crate::shtuka::cm::{CMAlgebra, CMType, Embedding};

/// `Z_v(a, s)` as a rational function of `x = q_v^{-s}`:
/// `(1/e_L)·Σ_{n=1}^{f_L} c_n x^n/(1 − x^{f_L})` where `c_n` sums `a` over the
/// elements with Frobenius exponent `n mod f_L`.
pub fn z_v_rational(d: &LocalGaloisDatum, a: &ClassFunctionQ) -> Result<RatFunc> {
    if a.values().len() != d.order() {
        return Err(Error::InvalidInput("class function does not match the datum".into()));
    }
    let f = d.f_l() as usize;
    let mut num = vec![Rat::zero(); f + 1];
    for g in 0..d.order() {
        let n = d.frobenius_exponent(g) as usize;
        let slot = if n == 0 { f } else { n };
        num[slot] += a.at(g);
    }
    let mut den = vec![Rat::zero(); f + 1];
    den[0] = int(1);
    den[f] = int(-1);
    Ok(RatFunc::new(QPoly::new(num), QPoly::new(den))?.scale(&Rat::new(1.into(), d.e_l().into())))
}

/// `Z_v(a, 1)`.
pub fn z_v_at_one(d: &LocalGaloisDatum, a: &ClassFunctionQ) -> Result<Rat> {
    z_v_rational(d, a)?.eval(&Rat::new(1.into(), d.q_v().into()))
}

/// `μ_Art,v(a) = Σ_g a(g)·μ_L(g)`.
pub fn mu_art_v(d: &LocalGaloisDatum, a: &ClassFunctionQ) -> Result<Rat> {
    let mu = d
        .mu()
        .ok_or_else(|| Error::InvalidInput("the Galois datum carries no μ values".into()))?;
    Ok(a.values().iter().zip(mu).map(|(x, m)| x * m).sum())
}

/// Both sides of the two identities for `a_{K,φ,ψ}` with `K` tame of shape
/// `(f_K, e_K)` inside the tame Galois extension `L` of shape `(f_L, e_L)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndLCheck {
    pub lhs_mu: Rat,
    pub rhs_mu: Rat,
    pub lhs_z: RatFunc,
    pub rhs_z: RatFunc,
    pub equal: bool,
}

/// `gφ` for an embedding `(j, k)` of `K = F_{q_v^{f_K}}((y))`, `y^{e_K} = z`,
/// into `L`, under `g = (a, k_g)` of `Gal(L/Q_v)`.
/// Uses `ω_K = ω_L^{e_L/e_K}`, so `Π_L ↦ ω_L^{k_g}·Π_L` moves `k` by `k_g`.
fn act_on_k_embedding(g: &TameAbelianAut, emb: (u32, u64), f_k: u32, e_k: u64, q_v: u64) -> (u32, u64) {
    let twist = crate::algebra::arith::pow_mod(q_v, u64::from(g.a), e_k);
    ((emb.0 + g.a) % f_k, (emb.1 * twist + g.k) % e_k)
}

/// Checks both identities of the induction lemma for `a_{K,φ,ψ}`.
///
/// The left sides are summed over `Gal(L/Q_v)` with `μ_L` from the tower of
/// `L`. On the right, the zeta side is `(1/e_K)·q_v^{r s}/(q_v^{f_K s} − 1)`
/// with `r = (j(φ) − j(ψ)) mod f_K`, the exponent that matches the action
/// `j(gφ) = j(φ) + n(g)`; for `f_K ≤ 2` it coincides with `(j(ψ) − j(φ)) mod f_K`.
pub fn lemma_indl_check(
    q_v: u64,
    (f_k, e_k): (u32, u64),
    (f_l, e_l): (u32, u64),
    phi: (u32, u64),
    psi: (u32, u64),
    config: TowerConfig,
) -> Result<IndLCheck> {
    if f_l % f_k != 0 || e_l % e_k != 0 {
        return Err(Error::InvalidInput("K must embed into L: f_K | f_L and e_K | e_L".into()));
    }
    if phi.0 >= f_k || psi.0 >= f_k || phi.1 >= e_k || psi.1 >= e_k {
        return Err(Error::InvalidInput("embedding index out of range".into()));
    }
    let d = LocalGaloisDatum::tame(q_v, f_l, e_l, config)?;
    let (_, elems) = d.tame_elements().expect("tame datum");
    let a = ClassFunctionQ::from_fn(&d, |g| {
        let moved = act_on_k_embedding(&elems[g], phi, f_k, e_k, q_v);
        if moved == psi {
            int(1)
        } else {
            int(0)
        }
    });
    let lhs_mu = mu_art_v(&d, &a)?;
    let lhs_z = z_v_rational(&d, &a)?;

    let rhs_mu = if phi.0 != psi.0 {
        Rat::zero()
    } else if phi == psi {
        tame_tower(q_v, f_k, e_k, config)?.different_valuation()?
    } else {
        // −v(ψ(π_K) − φ(π_K)) with φ(π_K) = ω_K^k·Π_L^{e_L/e_K}.
        let tower = tame_tower(q_v, f_l, e_l, config)?;
        let field = tower.top_field();
        let omega_k = field
            .root_of_unity(e_k)
            .ok_or_else(|| Error::UnsupportedTower("missing roots of unity".into()))?;
        let pi_m = tower.uniformizer(tower.top()).pow((e_l / e_k) as i64)?;
        let image = |k: u64| pi_m.scale(field.pow(omega_k, k));
        let diff = image(psi.1).sub(&image(phi.1))?;
        -diff
            .valuation()
            .ok_or_else(|| Error::InsufficientPrecision("ψ(π_K) − φ(π_K) undetermined".into()))?
    };
    let r = (phi.0 + f_k - psi.0) % f_k;
    let f = f_k as usize;
    let mut num = vec![Rat::zero(); f + 1];
    num[f - r as usize] = int(1);
    let mut den = vec![Rat::zero(); f + 1];
    den[0] = int(1);
    den[f] = int(-1);
    let rhs_z = RatFunc::new(QPoly::new(num), QPoly::new(den))?.scale(&Rat::new(1.into(), e_k.into()));
    let equal = lhs_mu == rhs_mu && lhs_z == rhs_z;
    Ok(IndLCheck { lhs_mu, rhs_mu, lhs_z, rhs_z, equal })
}

/// `a_{E_v,ψ,φ}: g ↦ [gψ = φ]` on the tame datum of component `i(ψ)`.
pub fn a_psi_phi(d: &LocalGaloisDatum, cm: &CMAlgebra, psi: &Embedding, phi: &Embedding) -> Result<ClassFunctionQ> {
    if psi.i != phi.i {
        return Err(Error::MixedComponent(phi.i, psi.i));
    }
    let elems = component_elements(d, cm, psi)?;
    let vals = elems
        .iter()
        .map(|g| Ok(if cm.act(g.a, g.k, psi)? == *phi { int(1) } else { int(0) }))
        .collect::<Result<Vec<_>>>()?;
    ClassFunctionQ::new(d, vals)
}

fn component_elements<'a>(d: &'a LocalGaloisDatum, cm: &CMAlgebra, psi: &Embedding) -> Result<&'a [TameAbelianAut]> {
    let c = cm.component(psi.i)?;
    if !c.tame {
        return Err(Error::WildUnsupported(psi.i));
    }
    let (shape, elems) = d
        .tame_elements()
        .ok_or_else(|| Error::InvalidInput("CM characters need a tame datum".into()))?;
    if shape.f != c.f || shape.e != c.e || d.q_v() != cm.q_v() {
        return Err(Error::InvalidInput(format!("datum does not match component {}", psi.i)));
    }
    Ok(elems)
}

/// `(a_{E_v,ψ,Φ}, a⁰_{E_v,ψ,Φ})` on the tame datum of component `i(ψ)`:
/// `a(g) = d_{gψ}` and `a⁰(g) = (1/|G|)·Σ_η d_{η⁻¹gηψ}`.
pub fn cm_characters(
    d: &LocalGaloisDatum,
    cm: &CMAlgebra,
    phi_type: &CMType,
    psi: &Embedding,
) -> Result<(ClassFunctionQ, ClassFunctionQ)> {
    let elems = component_elements(d, cm, psi)?;
    let value = |g: usize| -> Result<Rat> {
        let img = cm.act(elems[g].a, elems[g].k, psi)?;
        Ok(int(phi_type.d(&img)))
    };
    let a = (0..d.order()).map(value).collect::<Result<Vec<_>>>()?;
    let n = d.order();
    let mut a0 = Vec::with_capacity(n);
    for g in 0..n {
        let mut acc = Rat::zero();
        for eta in 0..n {
            let conj = d.mul(d.mul(d.inverse(eta), g), eta);
            acc += value(conj)?;
        }
        a0.push(acc / int(n as i64));
    }
    Ok((ClassFunctionQ::new(d, a)?, ClassFunctionQ::new(d, a0)?))
}

/// `Z_v(a, 1) − μ_Art,v(a)`.
pub fn z_minus_mu(d: &LocalGaloisDatum, a: &ClassFunctionQ) -> Result<Rat> {
    Ok(z_v_at_one(d, a)? - mu_art_v(d, a)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;

    fn cfg() -> TowerConfig {
        TowerConfig::default()
    }

    #[test]
    fn trivial_character_is_geometric() {
        for (q, f, e) in [(2, 1, 1), (3, 1, 2), (3, 2, 4), (2, 2, 3)] {
            let d = LocalGaloisDatum::tame(q, f, e, cfg()).unwrap();
            let one = ClassFunctionQ::trivial(&d);
            let z = z_v_rational(&d, &one).unwrap();
            let expected = RatFunc::new(QPoly::from_ints(&[0, 1]), QPoly::from_ints(&[1, -1])).unwrap();
            assert_eq!(z, expected);
            assert_eq!(z_v_at_one(&d, &one).unwrap(), rat(1, q as i64 - 1));
            assert_eq!(mu_art_v(&d, &one).unwrap(), rat(0, 1));
        }
    }

    #[test]
    fn zero_character() {
        let d = LocalGaloisDatum::tame(2, 1, 1, cfg()).unwrap();
        assert!(z_v_rational(&d, &ClassFunctionQ::zero(&d)).unwrap().is_zero());
    }

    #[test]
    fn unramified_quadratic_character() {
        // f = 2, e = 1, q_v = 2, (j(ψ), j(φ)) = 1: Z(s) = q^s/(q^{2s} − 1).
        let cm = CMAlgebra::tame(2, 2, 1).unwrap();
        let d = LocalGaloisDatum::tame(2, 2, 1, cfg()).unwrap();
        let (phi, psi) = (Embedding::new(0, 0, 0), Embedding::new(0, 1, 0));
        let a = a_psi_phi(&d, &cm, &psi, &phi).unwrap();
        let z = z_v_rational(&d, &a).unwrap();
        let expected = RatFunc::new(QPoly::from_ints(&[0, 1]), QPoly::from_ints(&[1, 0, -1])).unwrap();
        assert_eq!(z, expected);
        assert_eq!(z_v_at_one(&d, &a).unwrap(), rat(2, 3));
        assert_eq!(mu_art_v(&d, &a).unwrap(), rat(0, 1));
    }

    #[test]
    fn via_l_examples() {
        let cm = CMAlgebra::tame(3, 1, 2).unwrap();
        let d = LocalGaloisDatum::tame(3, 1, 2, cfg()).unwrap();
        let psi = Embedding::new(0, 0, 0);
        let a = a_psi_phi(&d, &cm, &psi, &psi).unwrap();
        assert_eq!(z_v_at_one(&d, &a).unwrap(), rat(1, 4));
        assert_eq!(mu_art_v(&d, &a).unwrap(), rat(1, 2));
        assert_eq!(z_minus_mu(&d, &a).unwrap(), rat(-1, 4));
    }

    #[test]
    fn induction_lemma_examples() {
        let c = lemma_indl_check(3, (1, 2), (1, 2), (0, 0), (0, 0), cfg()).unwrap();
        assert_eq!(c.lhs_mu, rat(1, 2));
        assert!(c.equal);
        let c = lemma_indl_check(2, (2, 1), (2, 1), (0, 0), (0, 0), cfg()).unwrap();
        assert_eq!(c.lhs_mu, rat(0, 1));
        assert_eq!(c.lhs_z, RatFunc::new(QPoly::from_ints(&[0, 0, 1]), QPoly::from_ints(&[1, 0, -1])).unwrap());
        assert!(c.equal);
        let c = lemma_indl_check(2, (2, 1), (2, 1), (0, 0), (1, 0), cfg()).unwrap();
        assert_eq!(c.lhs_mu, rat(0, 1));
        assert!(c.equal);
        // K strictly inside L: the left sides do not depend on L.
        let c = lemma_indl_check(3, (1, 2), (2, 4), (0, 0), (0, 1), cfg()).unwrap();
        assert_eq!(c.rhs_mu, rat(-1, 2));
        assert!(c.equal, "{c:?}");
        let c = lemma_indl_check(2, (1, 1), (2, 3), (0, 0), (0, 0), cfg()).unwrap();
        assert!(c.equal, "{c:?}");
    }

    #[test]
    fn induction_lemma_with_three_residue_embeddings() {
        let c = lemma_indl_check(2, (3, 1), (3, 1), (0, 0), (1, 0), cfg()).unwrap();
        assert!(c.equal, "{c:?}");
        // x^1/(1 − x^3): ψ is reached by g with n(g) = 1.
        assert_eq!(c.lhs_z, RatFunc::new(QPoly::from_ints(&[0, 1]), QPoly::from_ints(&[1, 0, 0, -1])).unwrap());
    }

    #[test]
    fn characters_for_carlitz_and_abelian_data() {
        let cm = CMAlgebra::tame(2, 1, 1).unwrap();
        let d = LocalGaloisDatum::tame(2, 1, 1, cfg()).unwrap();
        let id = Embedding::new(0, 0, 0);
        let phi = CMType::new(&cm, &[(id, 1)]).unwrap();
        let (a, a0) = cm_characters(&d, &cm, &phi, &id).unwrap();
        assert_eq!(a, ClassFunctionQ::trivial(&d));
        assert_eq!(a0, a);

        let cm = CMAlgebra::tame(2, 2, 1).unwrap();
        let d = LocalGaloisDatum::tame(2, 2, 1, cfg()).unwrap();
        let phi = CMType::new(&cm, &[(Embedding::new(0, 0, 0), 1)]).unwrap();
        let (a, a0) = cm_characters(&d, &cm, &phi, &Embedding::new(0, 0, 0)).unwrap();
        assert_eq!(a.values(), &[int(1), int(0)]);
        assert_eq!(a0, a);
        let (z, _) = cm_characters(&d, &cm, &CMType::zero(&cm), &Embedding::new(0, 0, 0)).unwrap();
        assert_eq!(z, ClassFunctionQ::zero(&d));
    }

    #[test]
    fn averaged_character_is_central() {
        let cm = CMAlgebra::tame(3, 2, 4).unwrap();
        let d = LocalGaloisDatum::tame(3, 2, 4, cfg()).unwrap();
        let phi = CMType::new(&cm, &[(Embedding::new(0, 0, 1), 2), (Embedding::new(0, 1, 3), -1)]).unwrap();
        let (a, a0) = cm_characters(&d, &cm, &phi, &Embedding::new(0, 0, 0)).unwrap();
        assert!(a0.is_class_function(&d));
        assert!(!a.is_class_function(&d) || a == a0);
    }
}
