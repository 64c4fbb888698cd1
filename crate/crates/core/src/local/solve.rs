//! Root solvers: Kummer roots and the `ℓ_n` recursion.

use num_bigint::BigInt;

use super::tower::{LocalFieldTower, TowerElem};
use crate::algebra::arith::{gcd, mult_order};
use crate::algebra::rat::Rat;
use crate::algebra::series::hensel_root;
use crate::error::{Error, Result};

/// Finds `x` with `x^m = a`, extending the tower when necessary.
///
/// Needed roots of unity are supplied by an unramified step. Depending on
/// `k = ord(a)` the root is the new uniformizer of `X^m − a` (`k = 1`), a
/// Hensel root of the unit part (`m | k`), or `Π'^k·u^{−t}` in the extension
/// `Π'^m = Π·u^s` with `s·k − t·m = 1` (`gcd(k, m) = 1`).
pub fn solve_kummer(t: &LocalFieldTower, m: u64, a: &TowerElem) -> Result<(LocalFieldTower, TowerElem)> {
    if m == 0 {
        return Err(Error::InvalidInput("Kummer exponent must be positive".into()));
    }
    if m == 1 {
        return Ok((t.clone(), a.to_top_of(t)?));
    }
    let p = u64::from(t.top_field().p());
    if m.is_multiple_of(p) {
        return Err(Error::UnsupportedKummer(format!("{m} is divisible by the characteristic {p}")));
    }
    let mut tower = t.clone();
    let q_res = tower.top_field().q();
    if !(q_res - 1).is_multiple_of(m) {
        tower = tower.extend_unramified(mult_order(q_res % m, m) as u32)?;
    }
    let a = a.to_top_of(&tower)?;
    let k = a
        .series()
        .ord()
        .ok_or_else(|| Error::InsufficientPrecision("valuation of the radicand is not determined".into()))?;
    let top = tower.top();
    let pi = tower.uniformizer(top);
    let mi = m as i64;
    let (tower, root) = if k == 1 {
        let poly = kummer_poly(&tower, m, &a);
        let ext = tower.extend_eisenstein(&poly)?;
        let root = ext.uniformizer(ext.top());
        (ext, root)
    } else if k.rem_euclid(mi) == 0 {
        let u = a.div(&pi.pow(k)?)?;
        let (ext, r) = unit_root(&tower, &u, m)?;
        let root = pi.pow(k / mi)?.to_top_of(&ext)?.mul(&r)?;
        (ext, root)
    } else if gcd(k.rem_euclid(mi) as u64, m) == 1 {
        let u = a.div(&pi.pow(k)?)?;
        let s = (1..mi).find(|s| (s * k).rem_euclid(mi) == 1).expect("k is invertible mod m");
        let tt = (s * k - 1) / mi;
        let c = pi.mul(&u.pow(s)?)?;
        let ext = tower.extend_eisenstein(&kummer_poly(&tower, m, &c))?;
        let new_pi = ext.uniformizer(ext.top());
        let root = new_pi.pow(k)?.mul(&u.to_top_of(&ext)?.pow(-tt)?)?;
        (ext, root)
    } else {
        return Err(Error::UnsupportedKummer(format!(
            "radicand of order {k} shares a factor with {m}"
        )));
    };
    let check = root.pow(mi)?.sub(&a)?;
    if !check.is_zero_within_precision() {
        return Err(Error::CrossCheck(format!("Kummer root does not satisfy x^{m} = a")));
    }
    Ok((tower, root))
}

fn kummer_poly(tower: &LocalFieldTower, m: u64, a: &TowerElem) -> Vec<TowerElem> {
    let lvl = tower.top();
    let mut poly = vec![a.neg()];
    poly.extend((1..m).map(|_| tower.zero(lvl)));
    poly.push(tower.one(lvl));
    poly
}

/// `m`-th root of a unit, smallest residue root first, after the unramified
/// step that makes the residue root exist.
fn unit_root(tower: &LocalFieldTower, u: &TowerElem, m: u64) -> Result<(LocalFieldTower, TowerElem)> {
    let field = tower.top_field();
    let u0 = match u.series().lead() {
        Some((0, c)) => c,
        _ => return Err(Error::NonUnit("unit part has nonzero order".into())),
    };
    let q = field.q();
    let zeta = field.pow(u0, (q - 1) / m);
    let ext = if zeta.0 == 1 {
        tower.clone()
    } else {
        let l = field.log(zeta)?;
        let order = (q - 1) / gcd(l, q - 1);
        tower.extend_unramified(order as u32)?
    };
    let u = u.to_top_of(&ext)?;
    let field = ext.top_field();
    let u0 = u.leading_coeff().expect("unit");
    let r0 = *field.nth_roots(u0, m).first().ok_or_else(|| {
        Error::UnsupportedKummer("residue root missing after unramified extension".into())
    })?;
    let level = ext.top();
    let s = u.series();
    if s.is_exact() && s.num_terms() == 1 {
        return Ok((ext.clone(), ext.constant(level, r0)));
    }
    let target = s.prec().unwrap_or(ext.config().rel_prec);
    let mut coeffs = vec![s.neg()];
    coeffs.extend((1..m).map(|_| crate::algebra::series::TruncSeries::zero(field)));
    coeffs.push(crate::algebra::series::TruncSeries::one(field));
    let root = hensel_root(&coeffs, r0, target)?;
    let elem = ext.elem(level, root)?;
    Ok((ext, elem))
}

/// Builds `ℓ_0, …, ℓ_N` with `ℓ_0^{q̃−1} = −ξ` and `ℓ_n^{q̃} + ξ·ℓ_n = ℓ_{n−1}`.
///
/// The tower grows by one Kummer step and then one Eisenstein step of
/// degree `q̃` per `n`; each `ℓ_n` (`n ≥ 1`) is the new uniformizer.
pub fn solve_frobenius_recursion(
    t: &LocalFieldTower,
    xi: &TowerElem,
    q_tilde: u64,
    depth: usize,
) -> Result<(LocalFieldTower, Vec<TowerElem>)> {
    let zero = Rat::from_integer(BigInt::from(0));
    match xi.valuation() {
        Some(v) if v > zero => {}
        Some(_) => return Err(Error::InvalidInput("ξ must have positive valuation".into())),
        None => return Err(Error::InsufficientPrecision("valuation of ξ is not determined".into())),
    }
    let q_v = t.q_v();
    let mut qq = q_v;
    while qq < q_tilde {
        qq *= q_v;
    }
    if qq != q_tilde {
        return Err(Error::InvalidInput(format!("{q_tilde} is not a power of q_v = {q_v}")));
    }
    let (mut tower, l0) = solve_kummer(t, q_tilde - 1, &xi.neg())?;
    let mut ells = vec![l0];
    for _ in 1..=depth {
        let lvl = tower.top();
        let prev = ells.last().expect("nonempty").to_top_of(&tower)?;
        let mut poly = vec![prev.neg(), xi.to_top_of(&tower)?];
        poly.extend((2..q_tilde).map(|_| tower.zero(lvl)));
        poly.push(tower.one(lvl));
        tower = tower.extend_eisenstein(&poly)?;
        ells.push(tower.uniformizer(tower.top()));
    }
    Ok((tower, ells))
}

/// Checks the defining equations of `ℓ_0, …, ℓ_N` within precision.
pub fn check_frobenius_recursion(xi: &TowerElem, q_tilde: u64, ells: &[TowerElem]) -> Result<bool> {
    let q = q_tilde as i64;
    let Some(l0) = ells.first() else {
        return Ok(true);
    };
    if !l0.pow(q - 1)?.add(xi)?.is_zero_within_precision() {
        return Ok(false);
    }
    for w in ells.windows(2) {
        let lhs = w[1].pow(q)?.add(&xi.mul(&w[1])?)?;
        if !lhs.sub(&w[0])?.is_zero_within_precision() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The predicted valuation `v(ξ)·q̃^{−n}/(q̃−1)`.
pub fn predicted_ell_valuation(v_xi: &Rat, q_tilde: u64, n: u32) -> Rat {
    let den = BigInt::from(q_tilde).pow(n) * BigInt::from(q_tilde - 1);
    v_xi / Rat::from_integer(den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;
    use crate::config::TowerConfig;

    fn base(q: u64) -> LocalFieldTower {
        LocalFieldTower::new(q, TowerConfig::default()).unwrap()
    }

    #[test]
    fn square_root_of_minus_z() {
        let t = base(3);
        let (t2, r) = solve_kummer(&t, 2, &t.z().neg()).unwrap();
        assert_eq!(r.valuation(), Some(rat(1, 2)));
        assert!(r.pow(2).unwrap().add(&t.z()).unwrap().to_top_of(&t2).unwrap().is_zero_within_precision());
    }

    #[test]
    fn trivial_exponent() {
        let t = base(5);
        let (t2, r) = solve_kummer(&t, 1, &t.z()).unwrap();
        assert_eq!(t2.num_levels(), 1);
        assert!(r.eq_within_precision(&t.z()).unwrap());
    }

    #[test]
    fn cube_root_needs_unramified_step() {
        let t = base(2);
        let (t2, r) = solve_kummer(&t, 3, &t.z()).unwrap();
        assert_eq!(t2.f_abs(), 2);
        assert_eq!(t2.e_abs(), 3);
        assert_eq!(r.valuation(), Some(rat(1, 3)));
    }

    #[test]
    fn coprime_order_and_unit_roots() {
        // x^3 = z^2 over F_7: order 2 coprime to 3.
        let t = base(7);
        let z2 = t.z().pow(2).unwrap();
        let (_, r) = solve_kummer(&t, 3, &z2).unwrap();
        assert_eq!(r.valuation(), Some(rat(2, 3)));
        // x^2 = 3·z^2·(1 + z) over F_5: unit root through an unramified step.
        let t = base(5);
        let one_plus_z = t.one(0).add(&t.z()).unwrap();
        let a = z2_times(&t, 3, &one_plus_z);
        let (t2, r) = solve_kummer(&t, 2, &a).unwrap();
        assert_eq!(t2.e_abs(), 1);
        assert_eq!(r.valuation(), Some(rat(1, 1)));
    }

    fn z2_times(t: &LocalFieldTower, c: i64, u: &TowerElem) -> TowerElem {
        t.z().pow(2).unwrap().mul(u).unwrap().scale_int(c)
    }

    #[test]
    fn unsupported_shared_factor() {
        let t = base(5);
        let z2 = t.z().pow(2).unwrap();
        assert!(matches!(solve_kummer(&t, 4, &z2), Err(Error::UnsupportedKummer(_))));
        assert!(matches!(solve_kummer(&t, 5, &t.z()), Err(Error::UnsupportedKummer(_))));
    }

    #[test]
    fn recursion_examples() {
        let t = base(2);
        let (_, ells) = solve_frobenius_recursion(&t, &t.z(), 2, 0).unwrap();
        assert!(ells[0].eq_within_precision(&t.z()).unwrap());
        assert_eq!(ells[0].valuation(), Some(rat(1, 1)));

        let t = base(3);
        let (_, ells) = solve_frobenius_recursion(&t, &t.z(), 3, 0).unwrap();
        assert_eq!(ells[0].valuation(), Some(rat(1, 2)));

        let t = base(2);
        let (_, ells) = solve_frobenius_recursion(&t, &t.z(), 2, 1).unwrap();
        assert_eq!(ells[1].valuation(), Some(rat(1, 2)));
    }

    #[test]
    fn recursion_valuation_law_and_equations() {
        for q in [2u64, 3, 4] {
            let t = base(q);
            let (tower, ells) = solve_frobenius_recursion(&t, &t.z(), q, 2).unwrap();
            let xi = t.z().to_top_of(&tower).unwrap();
            for (n, l) in ells.iter().enumerate() {
                assert_eq!(l.valuation().unwrap(), predicted_ell_valuation(&rat(1, 1), q, n as u32));
            }
            let tops: Vec<TowerElem> = ells.iter().map(|l| l.to_top_of(&tower).unwrap()).collect();
            assert!(check_frobenius_recursion(&xi, q, &tops).unwrap());
        }
    }

    #[test]
    fn recursion_respects_bound() {
        let t = LocalFieldTower::new(3, TowerConfig::default().with_bound(10)).unwrap();
        assert!(matches!(
            solve_frobenius_recursion(&t, &t.z(), 3, 2),
            Err(Error::TowerBound { .. })
        ));
    }
}
