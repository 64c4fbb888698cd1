//! CM algebras `E_v = ∏ E_{v,i}`, their embeddings and CM-types.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::algebra::arith::{pow_mod, prime_power};
use crate::algebra::rat::{int, Rat};
use crate::error::{Error, Result};

/// One factor `E_{v,i}` with residue degree `f` and ramification index `e`.
///
/// Wild (or otherwise non-Kummer) components carry user tables: the
/// valuation of the different and the matrix `v(ψ(y_i) − φ(y_i))` indexed by
/// the uniformizer labels `k` of two embeddings sharing `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub f: u32,
    pub e: u64,
    pub tame: bool,
    pub diff_valuation: Option<Rat>,
    pub pairwise: Option<Vec<Vec<Rat>>>,
}

impl Component {
    pub fn tame(f: u32, e: u64) -> Self {
        Component { f, e, tame: true, diff_valuation: None, pairwise: None }
    }
}

/// `E_v` over `Q_v = F_{q_v}((z))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMAlgebra {
    q_v: u64,
    components: Vec<Component>,
}

/// An embedding `ψ: E_v → Q_v^alg`: component `i`, residue embedding
/// `λ ↦ λ^{q_v^j}` and, for tame components, `ψ(y_i) = ω^k·Π` with `ω` the
/// fixed generator of `μ_{e_i}`. For wild components `k` is a plain label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Embedding {
    pub i: usize,
    pub j: u32,
    pub k: u64,
}

impl Embedding {
    pub fn new(i: usize, j: u32, k: u64) -> Self {
        Embedding { i, j, k }
    }
}

impl fmt::Display for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.k)
    }
}

impl FromStr for Embedding {
    type Err = Error;

    /// Parses `"(i,j,k)"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("embedding must look like \"(i,j,k)\", got {s:?}"));
        let inner = s.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        Ok(Embedding {
            i: parts[0].parse().map_err(|_| bad())?,
            j: parts[1].parse().map_err(|_| bad())?,
            k: parts[2].parse().map_err(|_| bad())?,
        })
    }
}

impl CMAlgebra {
    pub fn new(q_v: u64, components: Vec<Component>) -> Result<Self> {
        let (p, _) = prime_power(q_v).ok_or_else(|| Error::InvalidInput(format!("q_v = {q_v} is not a prime power")))?;
        if components.is_empty() {
            return Err(Error::InvalidInput("a CM algebra needs at least one component".into()));
        }
        for (i, c) in components.iter().enumerate() {
            if c.f == 0 || c.e == 0 {
                return Err(Error::InvalidInput(format!("component {i}: f and e must be positive")));
            }
            if c.tame {
                if c.e % p == 0 {
                    return Err(Error::InvalidInput(format!("component {i}: tame requires p ∤ e")));
                }
                let qf = q_v
                    .checked_pow(c.f)
                    .ok_or_else(|| Error::InvalidInput(format!("component {i}: q_v^f overflows")))?;
                if (qf - 1) % c.e != 0 {
                    return Err(Error::InvalidInput(format!("component {i}: tame requires e | q_v^f − 1")));
                }
            } else if let Some(table) = &c.pairwise {
                let n = usize::try_from(c.e).unwrap_or(usize::MAX);
                if table.len() != n || table.iter().any(|r| r.len() != n) {
                    return Err(Error::InvalidInput(format!("component {i}: pairwise table must be {n}×{n}")));
                }
            }
        }
        Ok(CMAlgebra { q_v, components })
    }

    /// A single tame component.
    pub fn tame(q_v: u64, f: u32, e: u64) -> Result<Self> {
        CMAlgebra::new(q_v, vec![Component::tame(f, e)])
    }

    pub fn q_v(&self) -> u64 {
        self.q_v
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, i: usize) -> Result<&Component> {
        self.components.get(i).ok_or_else(|| Error::InvalidInput(format!("no component {i}")))
    }

    /// `q̃_i = q_v^{f_i}`.
    pub fn q_tilde(&self, i: usize) -> Result<u64> {
        Ok(self.q_v.pow(self.component(i)?.f))
    }

    /// `dim_{Q_v} E_v = Σ f_i·e_i`.
    pub fn dimension(&self) -> u64 {
        self.components.iter().map(|c| u64::from(c.f) * c.e).sum()
    }

    /// All of `H_{E_v}`, ordered by `(i, j, k)`.
    pub fn embeddings(&self) -> Vec<Embedding> {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(i, c)| (0..c.f).flat_map(move |j| (0..c.e).map(move |k| Embedding { i, j, k })))
            .collect()
    }

    pub fn embeddings_of(&self, i: usize) -> Vec<Embedding> {
        self.embeddings().into_iter().filter(|e| e.i == i).collect()
    }

    pub fn check_embedding(&self, emb: &Embedding) -> Result<()> {
        let c = self.component(emb.i)?;
        if emb.j >= c.f || emb.k >= c.e {
            return Err(Error::InvalidInput(format!("embedding {emb} out of range")));
        }
        Ok(())
    }

    /// `v(D_{φ(E_{v,i})/Q_v})`: `(e − 1)/e` for tame components.
    pub fn different_valuation(&self, i: usize) -> Result<Rat> {
        let c = self.component(i)?;
        if c.tame {
            return Ok(Rat::new((c.e - 1).into(), c.e.into()));
        }
        c.diff_valuation
            .clone()
            .ok_or_else(|| Error::MissingWildTable { component: i, fields: "diff_valuation".into() })
    }

    /// `v(ψ(y_i) − φ(y_i))` for `φ ≠ ψ` sharing `(i, j)`.
    pub fn root_difference_valuation(&self, phi: &Embedding, psi: &Embedding) -> Result<Rat> {
        let c = self.component(phi.i)?;
        if c.tame {
            return Ok(Rat::new(1.into(), c.e.into()));
        }
        let table = c
            .pairwise
            .as_ref()
            .ok_or_else(|| Error::MissingWildTable { component: phi.i, fields: "pairwise".into() })?;
        Ok(table[psi.k as usize][phi.k as usize].clone())
    }

    /// `(j, j')`: the representative of `j − j'` in `0..f_i`.
    pub fn frobenius_gap(&self, i: usize, j: u32, j2: u32) -> Result<u32> {
        let f = self.component(i)?.f;
        Ok((j + f - j2 % f) % f)
    }

    fn same_component(&self, phi: &Embedding, psi: &Embedding) -> Result<()> {
        self.check_embedding(phi)?;
        self.check_embedding(psi)?;
        if phi.i != psi.i {
            return Err(Error::MixedComponent(phi.i, psi.i));
        }
        Ok(())
    }

    /// The three-case closed form for `v(Ω(E_v, φ, ψ))`.
    pub fn omega_valuation_closed(&self, phi: &Embedding, psi: &Embedding) -> Result<Rat> {
        self.same_component(phi, psi)?;
        let i = phi.i;
        let c = self.component(i)?;
        let base = Rat::new(1.into(), (c.e * (self.q_tilde(i)? - 1)).into());
        if phi == psi {
            Ok(base - self.different_valuation(i)?)
        } else if phi.j == psi.j {
            Ok(base + self.root_difference_valuation(phi, psi)?)
        } else {
            let r = self.frobenius_gap(i, psi.j, phi.j)?;
            Ok(base * int(self.q_v.pow(r) as i64))
        }
    }

    /// `v̂(Ω(E_v, φ, ψ))` as predicted: one on the diagonal, zero elsewhere.
    pub fn omega_hat_closed(&self, phi: &Embedding, psi: &Embedding) -> Result<i64> {
        self.same_component(phi, psi)?;
        Ok(i64::from(phi == psi))
    }

    /// Image of the tame embedding `(i, j, k)` under the Galois element
    /// `(a, k_g)` of the component's own tame tower.
    pub fn act(&self, a: u32, k_g: u64, emb: &Embedding) -> Result<Embedding> {
        let c = self.component(emb.i)?;
        if !c.tame {
            return Err(Error::WildUnsupported(emb.i));
        }
        let twist = pow_mod(self.q_v, u64::from(a), c.e);
        Ok(Embedding { i: emb.i, j: (emb.j + a) % c.f, k: (emb.k * twist + k_g) % c.e })
    }
}

/// `Φ = (d_φ)`, total on `H_{E_v}`; absent embeddings carry `d_φ = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMType {
    d: BTreeMap<Embedding, i64>,
}

impl CMType {
    pub fn new(cm: &CMAlgebra, entries: &[(Embedding, i64)]) -> Result<Self> {
        let mut d: BTreeMap<Embedding, i64> = cm.embeddings().into_iter().map(|e| (e, 0)).collect();
        for (emb, v) in entries {
            cm.check_embedding(emb)?;
            d.insert(*emb, *v);
        }
        Ok(CMType { d })
    }

    pub fn zero(cm: &CMAlgebra) -> Self {
        CMType { d: cm.embeddings().into_iter().map(|e| (e, 0)).collect() }
    }

    pub fn d(&self, emb: &Embedding) -> i64 {
        self.d.get(emb).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Embedding, &i64)> {
        self.d.iter()
    }

    /// Embeddings with `d_φ ≠ 0`.
    pub fn support(&self) -> Vec<Embedding> {
        self.d.iter().filter(|(_, v)| **v != 0).map(|(e, _)| *e).collect()
    }

    pub fn add(&self, other: &CMType) -> CMType {
        let mut d = self.d.clone();
        for (e, v) in &other.d {
            *d.entry(*e).or_insert(0) += v;
        }
        CMType { d }
    }

    /// `ηΦ` with `d'_φ = d_{η⁻¹φ}`, for a permutation `eta` of the embeddings.
    pub fn transport(&self, eta: impl Fn(&Embedding) -> Embedding) -> CMType {
        CMType { d: self.d.iter().map(|(e, v)| (eta(e), *v)).collect() }
    }

    /// Closed-form valuation of the canonical period for `ψ`:
    /// `Σ_{i(φ)=i(ψ)} d_φ·v(Ω(E_v, φ, ψ))`.
    pub fn closed_valuation(&self, cm: &CMAlgebra, psi: &Embedding) -> Result<Rat> {
        let mut acc = Rat::zero();
        for (phi, d) in &self.d {
            if phi.i != psi.i || *d == 0 {
                continue;
            }
            acc += cm.omega_valuation_closed(phi, psi)? * int(*d);
        }
        Ok(acc)
    }
}

/// `v̂` of the canonical period for `ψ` under `Φ`: `d_ψ`.
pub fn cm_hat_valuation(phi_type: &CMType, psi: &Embedding) -> i64 {
    phi_type.d(psi)
}
