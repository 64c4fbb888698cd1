//! A-motives over `R = κ[[π]]` with good reduction and the local shtuka they
//! induce at a finite place `v` of `F_q[t]`.

use std::fmt;
use std::sync::Arc;

use crate::algebra::arith::prime_power;
use crate::algebra::ff::{Fe, FieldEmbedding, FqField};
use crate::algebra::poly::PolyFq;
use crate::algebra::series::{hensel_root, TruncSeries};
use crate::error::{Error, Result};

/// A polynomial in `t` over `R`, lowest degree first.
pub type RPoly = Vec<TruncSeries>;

/// A good model `(M, τ_M)` of rank `r`: `τ_M` is an `r × r` matrix over
/// `R[t]` and `γ(t) = θ`.
#[derive(Clone, Debug)]
pub struct AMotiveModel {
    q: u64,
    kappa: Arc<FqField>,
    tau: Vec<Vec<RPoly>>,
    theta: TruncSeries,
    det_order: usize,
}

impl AMotiveModel {
    /// Validates the shape and that `det τ_M = unit·(t − θ)^d`.
    pub fn new(q: u64, kappa: &Arc<FqField>, tau: Vec<Vec<RPoly>>, theta: TruncSeries) -> Result<Self> {
        let (p, _) = prime_power(q).ok_or_else(|| Error::InvalidInput(format!("q = {q} is not a prime power")))?;
        if p != u64::from(kappa.p()) || !is_power_of(kappa.q(), q) {
            return Err(Error::InvalidInput(format!("F_{q} is not contained in F_{}", kappa.q())));
        }
        let rank = tau.len();
        if rank == 0 || tau.iter().any(|row| row.len() != rank) {
            return Err(Error::InvalidInput("τ_M must be a nonempty square matrix".into()));
        }
        if tau.iter().flatten().flatten().chain([&theta]).any(|c| **c.field() != **kappa) {
            return Err(Error::FieldMismatch);
        }
        let mut det = rpoly_det(&tau, kappa)?;
        let mut det_order = 0;
        loop {
            let (quot, rem) = div_t_minus(&det, &theta)?;
            if !rem.is_zero_within_precision() || quot.is_empty() {
                break;
            }
            det = quot;
            det_order += 1;
        }
        let unit = det.first().and_then(|c| c.ord()) == Some(0)
            && det.iter().skip(1).all(TruncSeries::is_zero_within_precision);
        if !unit {
            return Err(Error::NonUnit("det τ_M is not a unit times a power of (t − θ)".into()));
        }
        Ok(AMotiveModel { q, kappa: Arc::clone(kappa), tau, theta, det_order })
    }

    /// The Carlitz motive `τ = t − θ` with `θ = θ̄ + π`, where `θ̄ ∈ κ` is the
    /// root of `place` with the smallest encoding and `κ = F_v`.
    pub fn carlitz(q: u64, place: &PolyFq, prec: i64) -> Result<Self> {
        let deg = check_place(q, place)?;
        let kappa = FqField::of_size(q.pow(deg as u32))?;
        let theta_bar = residue_root(place, &kappa)?;
        let theta = TruncSeries::from_terms(&kappa, [(0, theta_bar), (1, Fe::ONE)], Some(prec));
        let t_minus_theta = vec![theta.neg(), TruncSeries::one(&kappa)];
        AMotiveModel::new(q, &kappa, vec![vec![t_minus_theta]], theta)
    }

    /// The trivial motive of rank `r`, `τ_M = 1`.
    pub fn identity(q: u64, kappa: &Arc<FqField>, rank: usize, theta: TruncSeries) -> Result<Self> {
        let tau = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| if i == j { vec![TruncSeries::one(kappa)] } else { vec![TruncSeries::zero(kappa)] })
                    .collect()
            })
            .collect();
        AMotiveModel::new(q, kappa, tau, theta)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn rank(&self) -> usize {
        self.tau.len()
    }

    pub fn residue_field(&self) -> &Arc<FqField> {
        &self.kappa
    }

    pub fn theta(&self) -> &TruncSeries {
        &self.theta
    }

    pub fn tau(&self) -> &[Vec<RPoly>] {
        &self.tau
    }

    /// `d` in `det τ_M = unit·(t − θ)^d`.
    pub fn det_order(&self) -> usize {
        self.det_order
    }
}

fn is_power_of(big: u64, small: u64) -> bool {
    let mut x = small;
    while x < big {
        x = x.saturating_mul(small);
    }
    x == big
}

fn check_place(q: u64, place: &PolyFq) -> Result<usize> {
    if place.field().q() != q {
        return Err(Error::InvalidInput(format!("place must have coefficients in F_{q}")));
    }
    if !place.is_monic() || !place.is_irreducible()? {
        return Err(Error::InvalidInput(format!("{place} is not monic irreducible")));
    }
    place.degree().ok_or_else(|| Error::InvalidInput("zero polynomial".into()))
}

fn residue_root(place: &PolyFq, kappa: &Arc<FqField>) -> Result<Fe> {
    let emb = place.field().embed_into(kappa)?;
    place
        .map_coeffs(&emb)?
        .roots()
        .into_iter()
        .min()
        .ok_or(Error::FieldMismatch)
}

fn rpoly_mul(a: &RPoly, b: &RPoly, kappa: &Arc<FqField>) -> Result<RPoly> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = vec![TruncSeries::zero(kappa); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y)?)?;
        }
    }
    Ok(out)
}

fn rpoly_add(a: &RPoly, b: &RPoly, kappa: &Arc<FqField>) -> Result<RPoly> {
    let n = a.len().max(b.len());
    let zero = TruncSeries::zero(kappa);
    (0..n).map(|i| a.get(i).unwrap_or(&zero).add(b.get(i).unwrap_or(&zero))).collect()
}

fn rpoly_neg(a: &RPoly) -> RPoly {
    a.iter().map(TruncSeries::neg).collect()
}

/// Laplace expansion along the first row.
fn rpoly_det(m: &[Vec<RPoly>], kappa: &Arc<FqField>) -> Result<RPoly> {
    let n = m.len();
    if n == 1 {
        return Ok(m[0][0].clone());
    }
    let mut acc: RPoly = Vec::new();
    for c in 0..n {
        let minor: Vec<Vec<RPoly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = rpoly_mul(&m[0][c], &rpoly_det(&minor, kappa)?, kappa)?;
        acc = rpoly_add(&acc, &if c % 2 == 0 { term } else { rpoly_neg(&term) }, kappa)?;
    }
    Ok(acc)
}

/// Synthetic division by `t − θ`: quotient and remainder.
fn div_t_minus(a: &RPoly, theta: &TruncSeries) -> Result<(RPoly, TruncSeries)> {
    let Some((top, rest)) = a.split_last() else {
        return Ok((Vec::new(), TruncSeries::zero(theta.field())));
    };
    let mut quot = vec![top.clone()];
    for c in rest.iter().rev() {
        let next = c.add(&quot.last().expect("nonempty").mul(theta)?)?;
        quot.push(next);
    }
    let rem = quot.pop().expect("nonempty");
    quot.reverse();
    Ok((quot, rem))
}

/// An element `Σ_n a_n z^n` of `R[[z]]`, truncated at `z^{len}` with each
/// `a_n ∈ κ[[π]]` carrying its own π-adic precision.
#[derive(Clone, PartialEq, Eq)]
pub struct RzSeries {
    coeffs: Vec<TruncSeries>,
}

impl RzSeries {
    fn zero(kappa: &Arc<FqField>, len: usize) -> Self {
        RzSeries { coeffs: vec![TruncSeries::zero(kappa); len] }
    }

    fn constant(c: &TruncSeries, len: usize) -> Self {
        let mut s = RzSeries::zero(c.field(), len);
        s.coeffs[0] = c.clone();
        s
    }

    /// Coefficient of `z^n`, a series in π.
    pub fn coeff(&self, n: usize) -> Option<&TruncSeries> {
        self.coeffs.get(n)
    }

    pub fn z_precision(&self) -> usize {
        self.coeffs.len()
    }

    fn add(&self, o: &RzSeries) -> Result<RzSeries> {
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Ok(RzSeries { coeffs })
    }

    fn mul(&self, o: &RzSeries) -> Result<RzSeries> {
        let n = self.coeffs.len().min(o.coeffs.len());
        let mut out = RzSeries::zero(self.coeffs[0].field(), n);
        for i in 0..n {
            if self.coeffs[i].is_exact_zero() {
                continue;
            }
            for j in 0..n - i {
                out.coeffs[i + j] = out.coeffs[i + j].add(&self.coeffs[i].mul(&o.coeffs[j])?)?;
            }
        }
        Ok(out)
    }

    /// Value at `z = x` for `x ∈ πR`; exact modulo `π^{len}`.
    pub fn eval(&self, x: &TruncSeries) -> Result<TruncSeries> {
        let mut acc = TruncSeries::zero(x.field());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x)?.add(c)?;
        }
        Ok(acc.truncate(self.coeffs.len() as i64))
    }

    /// `(f(z) − f(x))/(z − x)`, one z-coefficient shorter.
    fn divided_difference(&self, x: &TruncSeries) -> Result<RzSeries> {
        let n = self.coeffs.len();
        let kappa = x.field();
        let mut out = RzSeries::zero(kappa, n.saturating_sub(1).max(1));
        // Horner from the top: b_{k} = a_{k+1} + x·b_{k+1}.
        let mut b = TruncSeries::zero(kappa);
        for k in (0..n - 1).rev() {
            b = self.coeffs[k + 1].add(&b.mul(x)?)?;
            out.coeffs[k] = b.clone();
        }
        Ok(out)
    }

    /// Smallest `n` with `a_n(0) ≠ 0`, the Weierstrass degree.
    pub fn weierstrass_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| c.ord() == Some(0))
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_exact_zero() && c.num_terms() > 0)
            .map(|(n, c)| {
                let r = c.render("π");
                match n {
                    0 => format!("({r})"),
                    1 => format!("({r})·z"),
                    _ => format!("({r})·z^{n}"),
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Debug for RzSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// The local shtuka `τ^{d_v}` on the factor of `A_{v,R}` where `t ↦ T(z)`
/// with `T ≡ γ(t)` modulo `(z, π)`.
#[derive(Clone, Debug)]
pub struct LocalShtukaMatrix {
    pub d_v: usize,
    /// `ζ = place(θ)`.
    pub zeta: TruncSeries,
    /// `t` as an element of `F_v[[z]]`.
    pub t_of_z: TruncSeries,
    pub entries: Vec<Vec<RzSeries>>,
}

impl LocalShtukaMatrix {
    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn det(&self) -> Result<RzSeries> {
        rz_det(&self.entries)
    }

    /// `d` with `det = unit·(z − ζ)^d`, checked by exact division.
    pub fn det_hat_order(&self) -> Result<usize> {
        let det = self.det()?;
        let d = det
            .weierstrass_degree()
            .ok_or_else(|| Error::InsufficientPrecision("det vanishes modulo π to the working precision".into()))?;
        let mut cur = det;
        for _ in 0..d {
            if !cur.eval(&self.zeta)?.is_zero_within_precision() {
                return Err(Error::CrossCheck("det is not a unit times a power of (z − ζ)".into()));
            }
            cur = cur.divided_difference(&self.zeta)?;
        }
        if cur.coeff(0).and_then(TruncSeries::ord) != Some(0) {
            return Err(Error::CrossCheck("cofactor of (z − ζ)^d is not a unit".into()));
        }
        Ok(d)
    }

    /// Whether the matrix is the identity to the working precision.
    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, e)| {
                e.coeffs.iter().enumerate().all(|(n, c)| {
                    let expect_one = i == j && n == 0;
                    if expect_one {
                        c.sub(&TruncSeries::one(c.field())).is_ok_and(|d| d.is_zero_within_precision())
                    } else {
                        c.is_zero_within_precision()
                    }
                })
            })
        })
    }
}

fn rz_det(m: &[Vec<RzSeries>]) -> Result<RzSeries> {
    let n = m.len();
    if n == 1 {
        return Ok(m[0][0].clone());
    }
    let kappa = m[0][0].coeffs[0].field();
    let len = m[0][0].coeffs.len();
    let mut acc = RzSeries::zero(kappa, len);
    for c in 0..n {
        let minor: Vec<Vec<RzSeries>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
            .collect();
        let mut term = m[0][c].mul(&rz_det(&minor)?)?;
        if c % 2 == 1 {
            term.coeffs.iter_mut().for_each(|x| *x = x.neg());
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

fn mat_mul(a: &[Vec<RzSeries>], b: &[Vec<RzSeries>]) -> Result<Vec<Vec<RzSeries>>> {
    let n = a.len();
    let kappa = a[0][0].coeffs[0].field().clone();
    let len = a[0][0].coeffs.len();
    let mut out = vec![vec![RzSeries::zero(&kappa, len); n]; n];
    for i in 0..n {
        for j in 0..n {
            for (k, bk) in b.iter().enumerate() {
                out[i][j] = out[i][j].add(&a[i][k].mul(&bk[j])?)?;
            }
        }
    }
    Ok(out)
}

/// Builds the local shtuka of `m` at `place` to precision `depth` in both
/// `z` and `π`: solves `place(T) = z` by Hensel lifting, then substitutes
/// `t = T(z)` into `τ_M·σ(τ_M)⋯σ^{d_v−1}(τ_M)`.
pub fn amotive_to_local_shtuka(m: &AMotiveModel, place: &PolyFq, depth: usize) -> Result<LocalShtukaMatrix> {
    let d_v = check_place(m.q, place)?;
    let kappa = &m.kappa;
    let prec = depth.max(1) as i64;
    let emb: FieldEmbedding = place.field().embed_into(kappa)?;
    let place_k = place.map_coeffs(&emb)?;
    if !kappa.k().is_multiple_of(place.field().k() * d_v as u32) {
        return Err(Error::FieldMismatch);
    }
    let theta_bar = m.theta.coeff(0)?;
    if !place_k.eval(theta_bar).is_zero() {
        return Err(Error::HenselFailure(format!("γ(t) mod π is not a root of {place}")));
    }
    // place(T) − z = 0 over κ[[z]].
    let mut coeffs: Vec<TruncSeries> = place_k.coeffs().iter().map(|&c| TruncSeries::constant(kappa, c)).collect();
    coeffs[0] = coeffs[0].sub(&TruncSeries::monomial(kappa, Fe::ONE, 1))?;
    let t_of_z = hensel_root(&coeffs, theta_bar, prec)?;

    let theta = m.theta.truncate(prec);
    let mut zeta = TruncSeries::zero(kappa);
    for &c in place_k.coeffs().iter().rev() {
        zeta = zeta.mul(&theta)?.add(&TruncSeries::constant(kappa, c))?.truncate(prec);
    }
    if zeta.ord().is_some_and(|o| o < 1) {
        return Err(Error::FieldMismatch);
    }

    let len = depth.max(1);
    let t_rz = RzSeries {
        coeffs: (0..len)
            .map(|n| Ok(TruncSeries::constant(kappa, t_of_z.coeff(n as i64)?).truncate(prec)))
            .collect::<Result<_>>()?,
    };
    let q_exp = prime_power(m.q).expect("validated").1;
    let substitute = |poly: &RPoly, twist: u32| -> Result<RzSeries> {
        let mut acc = RzSeries::zero(kappa, len);
        for c in poly.iter().rev() {
            let c = c.pow_p_power(q_exp * twist).truncate(prec);
            acc = acc.mul(&t_rz)?.add(&RzSeries::constant(&c, len))?;
        }
        Ok(acc)
    };
    let mut entries: Option<Vec<Vec<RzSeries>>> = None;
    for i in 0..d_v as u32 {
        let factor: Vec<Vec<RzSeries>> =
            m.tau.iter().map(|row| row.iter().map(|p| substitute(p, i)).collect::<Result<_>>()).collect::<Result<_>>()?;
        entries = Some(match entries {
            None => factor,
            Some(acc) => mat_mul(&acc, &factor)?,
        });
    }
    Ok(LocalShtukaMatrix { d_v, zeta, t_of_z, entries: entries.expect("d_v ≥ 1") })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn place(q: u64, coeffs: &[u32]) -> PolyFq {
        let f = FqField::of_size(q).unwrap();
        PolyFq::new(&f, coeffs.iter().map(|&c| Fe(c)).collect())
    }

    #[test]
    fn carlitz_degree_one_is_z_minus_zeta() {
        for q in [2u64, 3, 4, 5] {
            for c in 0..q as u32 {
                let pl = place(q, &[c, 1]);
                let m = AMotiveModel::carlitz(q, &pl, 6).unwrap();
                let s = amotive_to_local_shtuka(&m, &pl, 6).unwrap();
                assert_eq!(s.d_v, 1);
                let kappa = m.residue_field();
                // ζ = place(θ) = π.
                assert_eq!(s.zeta.coeff(1).unwrap(), Fe::ONE);
                assert_eq!(s.zeta.num_terms(), 1);
                let e = &s.entries[0][0];
                assert!(e.coeff(0).unwrap().add(&s.zeta).unwrap().is_zero_within_precision());
                assert!(e.coeff(1).unwrap().sub(&TruncSeries::one(kappa)).unwrap().is_zero_within_precision());
                assert!((2..6).all(|n| e.coeff(n).unwrap().is_zero_within_precision()));
                assert_eq!(s.det_hat_order().unwrap(), 1);
            }
        }
    }

    #[test]
    fn carlitz_degree_two() {
        for (q, pl) in [(2u64, vec![1, 1, 1]), (3, vec![1, 0, 1])] {
            let pl = place(q, &pl);
            let m = AMotiveModel::carlitz(q, &pl, 5).unwrap();
            let s = amotive_to_local_shtuka(&m, &pl, 5).unwrap();
            assert_eq!(s.d_v, 2);
            assert_eq!(s.zeta.ord(), Some(1));
            assert_eq!(s.det_hat_order().unwrap(), 1);
            // The constant term is ζ times a unit: (θ̄ − θ)(θ̄ − θ^q) at z = 0.
            assert_eq!(s.entries[0][0].coeff(0).unwrap().ord(), Some(1));
        }
    }

    #[test]
    fn identity_motive_is_etale() {
        let kappa = FqField::of_size(4).unwrap();
        let pl = place(2, &[1, 1, 1]);
        let theta_bar = residue_root(&pl, &kappa).unwrap();
        let theta = TruncSeries::from_terms(&kappa, [(0, theta_bar), (1, Fe::ONE)], Some(4));
        let m = AMotiveModel::identity(2, &kappa, 2, theta).unwrap();
        let s = amotive_to_local_shtuka(&m, &pl, 4).unwrap();
        assert!(s.is_identity());
        assert_eq!(s.det_hat_order().unwrap(), 0);
    }

    #[test]
    fn rank_two_diagonal() {
        // τ_M = diag(t − θ, (t − θ)^2): det order 3 on both sides.
        let q = 3;
        let pl = place(q, &[2, 1]);
        let c = AMotiveModel::carlitz(q, &pl, 6).unwrap();
        let kappa = c.residue_field().clone();
        let lin = c.tau()[0][0].clone();
        let sq = rpoly_mul(&lin, &lin, &kappa).unwrap();
        let z = vec![TruncSeries::zero(&kappa)];
        let m = AMotiveModel::new(q, &kappa, vec![vec![lin, z.clone()], vec![z, sq]], c.theta().clone()).unwrap();
        assert_eq!(m.det_order(), 3);
        let s = amotive_to_local_shtuka(&m, &pl, 6).unwrap();
        assert_eq!(s.det_hat_order().unwrap(), 3);
    }

    #[test]
    fn rejects_bad_models() {
        let kappa = FqField::of_size(2).unwrap();
        let theta = TruncSeries::from_terms(&kappa, [(1, Fe::ONE)], Some(4));
        // det = π is not a unit times a power of (t − θ).
        let tau = vec![vec![vec![TruncSeries::monomial(&kappa, Fe::ONE, 1)]]];
        assert!(matches!(AMotiveModel::new(2, &kappa, tau, theta.clone()), Err(Error::NonUnit(_))));
        // γ(t) mod π must be a root of the place.
        let m = AMotiveModel::identity(2, &kappa, 1, theta).unwrap();
        assert!(amotive_to_local_shtuka(&m, &place(2, &[1, 1]), 4).is_err());
        assert!(amotive_to_local_shtuka(&m, &place(2, &[0, 0, 1]), 4).is_err());
    }
}
