//! Local shtukas with CM in standard form and the τ-invariants of their
//! étale unit part.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::cm::{CMAlgebra, CMType, Embedding};
use crate::algebra::ff::{FqField, MAX_FIELD_SIZE};
use crate::algebra::series::TruncSeries;
use crate::config::TowerConfig;
use crate::error::{Error, Result};
use crate::local::{tame_tower, ElemSeries, LocalFieldTower, TowerElem};

/// `M̂ = O_{E_v} ⊗ R[[z]]` split into the components `(i, j)`, each free of
/// rank one over `R[[y_i]]`, with
/// `τ_{i,j} = ε_{i,j}·∏_{(i,j)(φ) = (i,j)} (y_i − φ(y_i))^{d_φ}`.
///
/// The units `ε_{i,j}` are power series in `y_i` with coefficients in a
/// finite residue field; a missing entry means `ε = 1`.
#[derive(Clone, Debug)]
pub struct LocalShtukaStd {
    cm: CMAlgebra,
    cm_type: CMType,
    eps: BTreeMap<(usize, u32), TruncSeries>,
}

/// The factors of one `τ_{i,j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauComponent {
    pub eps: Option<TruncSeries>,
    pub roots: Vec<(Embedding, i64)>,
}

impl fmt::Display for TauComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if let Some(e) = &self.eps {
            parts.push(format!("({})", e.render("y")));
        }
        for (phi, d) in &self.roots {
            let base = format!("(y − φ{phi}(y))");
            parts.push(if *d == 1 { base } else { format!("{base}^{d}") });
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

impl LocalShtukaStd {
    pub fn new(cm: &CMAlgebra, cm_type: &CMType, eps: &[((usize, u32), TruncSeries)]) -> Result<Self> {
        for phi in cm_type.support() {
            cm.check_embedding(&phi)?;
        }
        let (p, k_v) = crate::algebra::arith::prime_power(cm.q_v()).expect("validated by CMAlgebra");
        let mut map = BTreeMap::new();
        for ((i, j), e) in eps {
            let c = cm.component(*i)?;
            if *j >= c.f {
                return Err(Error::InvalidInput(format!("ε index ({i},{j}) out of range")));
            }
            let field = e.field();
            if u64::from(field.p()) != p || field.k() % k_v != 0 {
                return Err(Error::InvalidInput(format!("ε_({i},{j}) must have coefficients over F_{}", cm.q_v())));
            }
            if e.ord() != Some(0) {
                return Err(Error::NonUnit(format!("ε_({i},{j}) = {} must have a nonzero constant term", e.render("y"))));
            }
            map.insert((*i, *j), e.clone());
        }
        Ok(LocalShtukaStd { cm: cm.clone(), cm_type: cm_type.clone(), eps: map })
    }

    /// The local Carlitz shtuka `τ = z − ζ` over `F_{q_v}((z))`.
    pub fn carlitz(q_v: u64) -> Result<Self> {
        let cm = CMAlgebra::tame(q_v, 1, 1)?;
        let t = CMType::new(&cm, &[(Embedding::new(0, 0, 0), 1)])?;
        LocalShtukaStd::new(&cm, &t, &[])
    }

    pub fn cm(&self) -> &CMAlgebra {
        &self.cm
    }

    pub fn cm_type(&self) -> &CMType {
        &self.cm_type
    }

    pub fn eps(&self, i: usize, j: u32) -> Option<&TruncSeries> {
        self.eps.get(&(i, j))
    }

    /// Whether every `d_φ` vanishes, so that `τ` is the unit `ε`.
    pub fn is_etale(&self) -> bool {
        self.cm_type.support().is_empty()
    }

    pub fn tau_component(&self, i: usize, j: u32) -> TauComponent {
        let roots = self
            .cm_type
            .entries()
            .filter(|(phi, d)| phi.i == i && phi.j == j && **d != 0)
            .map(|(phi, d)| (*phi, *d))
            .collect();
        TauComponent { eps: self.eps.get(&(i, j)).cloned(), roots }
    }

    /// Reads the CM-type back from the factors of all `τ_{i,j}`.
    pub fn read_cm_type(&self) -> Result<CMType> {
        let mut entries = Vec::new();
        for (i, c) in self.cm.components().iter().enumerate() {
            for j in 0..c.f {
                entries.extend(self.tau_component(i, j).roots);
            }
        }
        CMType::new(&self.cm, &entries)
    }

    /// `τ_{i,j}` as a polynomial in `y_i` over the tame tower of component
    /// `i`, with `φ(y_i) = ω^k·Π`. Requires `d_φ ≥ 0` and `ε` polynomial
    /// with coefficients in the residue field of that tower.
    pub fn tau_polynomial(&self, i: usize, j: u32, config: TowerConfig) -> Result<(LocalFieldTower, ElemSeries)> {
        let c = self.cm.component(i)?;
        if !c.tame {
            return Err(Error::WildUnsupported(i));
        }
        let tower = tame_tower(self.cm.q_v(), c.f, c.e, config)?;
        let top = tower.top();
        let comp = self.tau_component(i, j);
        let mut acc = match &comp.eps {
            None => ElemSeries::constant(&tower.one(top)),
            Some(e) => {
                if !e.is_exact() {
                    return Err(Error::InvalidInput("ε must be a polynomial to build τ explicitly".into()));
                }
                let emb = e.field().embed_into(tower.top_field())?;
                let n = e.max_exponent().map_or(0, |m| m as usize + 1);
                let coeffs: Vec<TowerElem> =
                    (0..n).map(|m| Ok(tower.constant(top, emb.map(e.coeff(m as i64)?)))).collect::<Result<_>>()?;
                ElemSeries::new(&tower, top, &coeffs, None)?
            }
        };
        for (phi, d) in &comp.roots {
            if *d < 0 {
                return Err(Error::InvalidInput(format!("d_{phi} = {d} is negative; τ is not a polynomial")));
            }
            let root = embedding_image(&tower, phi.k, c.e)?;
            let factor = ElemSeries::new(&tower, top, &[root.neg(), tower.one(top)], None)?;
            for _ in 0..*d {
                acc = acc.mul(&factor)?;
            }
        }
        Ok((tower, acc))
    }
}

/// `ω^k·Π` at the top of a tame tower with `Π^e = z`.
pub(crate) fn embedding_image(tower: &LocalFieldTower, k: u64, e: u64) -> Result<TowerElem> {
    let field = tower.top_field();
    let omega = field
        .root_of_unity(e)
        .ok_or_else(|| Error::UnsupportedTower(format!("no primitive {e}-th root of unity in {field:?}")))?;
    Ok(tower.uniformizer(tower.top()).scale(field.pow(omega, k)))
}

/// The τ-invariant `c = (c_{i,j})` of an étale shtuka: `c_{i,j} = ε_{i,j}·σ̂(c_{i,j−1})`,
/// each a power series in `y_i` over the finite field `field`.
#[derive(Clone, Debug)]
pub struct UnitPart {
    pub field: Arc<FqField>,
    pub c: BTreeMap<(usize, u32), TruncSeries>,
    pub depth: usize,
}

impl UnitPart {
    /// Re-applies `τ` and `σ̂` and compares coefficientwise up to the depth.
    pub fn check(&self, shtuka: &LocalShtukaStd) -> Result<bool> {
        let k_v = k_v(shtuka.cm.q_v());
        for (i, comp) in shtuka.cm.components().iter().enumerate() {
            for j in 0..comp.f {
                let prev = &self.c[&(i, (j + comp.f - 1) % comp.f)];
                let eps = eps_in(shtuka, i, j, &self.field, self.depth)?;
                let rhs = eps.mul(&prev.frobenius_coeffs(k_v))?.truncate(self.depth as i64 + 1);
                if !self.c[&(i, j)].eq_within_precision(&rhs)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn k_v(q_v: u64) -> u32 {
    crate::algebra::arith::prime_power(q_v).map_or(1, |(_, k)| k)
}

fn eps_in(shtuka: &LocalShtukaStd, i: usize, j: u32, field: &Arc<FqField>, depth: usize) -> Result<TruncSeries> {
    let prec = depth as i64 + 1;
    match shtuka.eps(i, j) {
        None => Ok(TruncSeries::one(field).truncate(prec)),
        Some(e) => Ok(e.map_coeffs(&e.field().embed_into(field)?)?.truncate(prec)),
    }
}

/// Solves for the τ-invariants of an étale standard shtuka to `y`-degree
/// `depth`.
///
/// With `b = ε_{i,0}·σ̂(ε_{i,f−1})⋯σ̂^{f−1}(ε_{i,1})` the component `c_{i,0}`
/// satisfies `c_{i,0} = b·σ̂^f(c_{i,0})`, i.e. `c_0^{q̃−1} = b_0^{−1}` and
/// `c_n − b_0·c_n^{q̃} = Σ_{l≥1} b_l·c_{n−l}^{q̃}`. All `c_{i,j,n}` lie in a
/// finite extension of the residue field; the smallest one (by degree) in
/// which every equation is solvable is used, and each root is the one with
/// the smallest encoding.
pub fn tau_invariant_unit_part(shtuka: &LocalShtukaStd, depth: usize) -> Result<UnitPart> {
    if !shtuka.is_etale() {
        return Err(Error::InvalidInput("the unit part needs all d_φ = 0".into()));
    }
    let q_v = shtuka.cm.q_v();
    let (p, kv) = crate::algebra::arith::prime_power(q_v).expect("validated by CMAlgebra");
    let base_k = shtuka.eps.values().map(|e| e.field().k()).fold(kv, num_integer::lcm);
    let mut m = 1;
    while (p as u128).pow(base_k * m) <= u128::from(MAX_FIELD_SIZE) {
        let field = FqField::new(p as u32, base_k * m)?;
        if let Some(c) = solve_in(shtuka, &field, depth)? {
            return Ok(UnitPart { field, c, depth });
        }
        m += 1;
    }
    Err(Error::NonConvergence(format!("unit part not solvable in fields of size ≤ {MAX_FIELD_SIZE}")))
}

fn solve_in(
    shtuka: &LocalShtukaStd,
    field: &Arc<FqField>,
    depth: usize,
) -> Result<Option<BTreeMap<(usize, u32), TruncSeries>>> {
    let k_v = k_v(shtuka.cm.q_v());
    let prec = depth as i64 + 1;
    let mut out = BTreeMap::new();
    for (i, comp) in shtuka.cm.components().iter().enumerate() {
        let f = comp.f;
        let kf = k_v * f;
        let mut b = eps_in(shtuka, i, 0, field, depth)?;
        for s in 1..f {
            let e = eps_in(shtuka, i, f - s, field, depth)?.frobenius_coeffs(k_v * s);
            b = b.mul(&e)?.truncate(prec);
        }
        let bc = |l: usize| b.coeff(l as i64);
        let b0 = bc(0)?;
        let q_tilde = field.p().pow(kf) as u64;
        let target = field.inv(b0)?;
        let Some(c0) = field.nth_roots(target, q_tilde - 1).into_iter().min_by_key(|x| x.0) else {
            return Ok(None);
        };
        let mut c = vec![c0];
        for n in 1..=depth {
            let mut rhs = field.zero();
            for l in 1..=n {
                rhs = field.add(rhs, field.mul(bc(l)?, field.frobenius(c[n - l], kf)));
            }
            // x − b_0·x^{q̃} = rhs, by search.
            let sol = field
                .elements()
                .find(|&x| field.sub(x, field.mul(b0, field.frobenius(x, kf))) == rhs);
            match sol {
                Some(x) => c.push(x),
                None => return Ok(None),
            }
        }
        let mut cj = TruncSeries::from_coeffs(field, 0, &c, Some(prec));
        out.insert((i, 0), cj.clone());
        for j in 1..f {
            cj = eps_in(shtuka, i, j, field, depth)?.mul(&cj.frobenius_coeffs(k_v))?.truncate(prec);
            out.insert((i, j), cj.clone());
        }
    }
    Ok(Some(out))
}
