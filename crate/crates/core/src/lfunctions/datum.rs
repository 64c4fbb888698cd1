//! Finite local Galois data `Gal(L/Q_v)` and rational class functions on them.

use num_traits::Zero;

use crate::algebra::arith::prime_power;
use crate::algebra::rat::Rat;
use crate::config::TowerConfig;
use crate::error::{Error, Result};
use crate::local::{mu_l, tame_shape, tame_tower, TameAbelianAut, TameShape};

/// A finite Galois group `G_L = Gal(L/Q_v)` with its inertia subgroup, the
/// Frobenius exponent `n(g) ∈ Z/f_L` of every element, and optionally the
/// values `μ_L(g)`.
///
/// Elements are indices `0..|G|`; `mul[a][b]` is the index of `a∘b` (the
/// right factor acts first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalGaloisDatum {
    q_v: u64,
    e_l: u64,
    f_l: u32,
    mul: Vec<Vec<usize>>,
    identity: usize,
    frob: Vec<u32>,
    mu: Option<Vec<Rat>>,
    tame: Option<(TameShape, Vec<TameAbelianAut>)>,
}

impl LocalGaloisDatum {
    /// The datum of the tame tower `F_{q_v^f}((z))(z^{1/e})`, with `μ_L`
    /// computed on the tower.
    pub fn tame(q_v: u64, f: u32, e: u64, config: TowerConfig) -> Result<Self> {
        let tower = tame_tower(q_v, f, e, config)?;
        let shape = tame_shape(&tower)?;
        let elems = TameAbelianAut::all(&shape);
        let index = |g: &TameAbelianAut| elems.iter().position(|h| h == g).expect("closed under composition");
        let mul = elems
            .iter()
            .map(|g| elems.iter().map(|h| index(&g.compose(h, &shape, q_v))).collect())
            .collect();
        let frob = elems.iter().map(|g| g.a).collect();
        let mu = elems.iter().map(|g| mu_l(&tower, g)).collect::<Result<Vec<_>>>()?;
        Ok(LocalGaloisDatum {
            q_v,
            e_l: e,
            f_l: f,
            mul,
            identity: index(&TameAbelianAut::identity()),
            frob,
            mu: Some(mu),
            tame: Some((shape, elems)),
        })
    }

    /// A datum from an explicit multiplication table.
    ///
    /// `inertia` lists the inertia subgroup and `frobenius_coset` a coset
    /// `F·I` whose image generates `G/I`; `mu`, when given, must vanish off
    /// inertia.
    pub fn from_table(
        q_v: u64,
        mul: Vec<Vec<usize>>,
        inertia: &[usize],
        frobenius_coset: &[usize],
        mu: Option<Vec<Rat>>,
    ) -> Result<Self> {
        prime_power(q_v).ok_or_else(|| Error::InvalidInput(format!("q_v = {q_v} is not a prime power")))?;
        let n = mul.len();
        let bad = |m: &str| Error::InvalidInput(format!("Galois table: {m}"));
        if n == 0 || mul.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(bad("table must be a square array of element indices"));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| mul[e][g] == g && mul[g][e] == g))
            .ok_or_else(|| bad("no identity element"))?;
        for a in 0..n {
            if !(0..n).any(|b| mul[a][b] == identity) {
                return Err(bad("element without inverse"));
            }
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(bad("multiplication is not associative"));
                    }
                }
            }
        }
        let mut in_i = vec![false; n];
        for &g in inertia {
            *in_i.get_mut(g).ok_or_else(|| bad("inertia index out of range"))? = true;
        }
        if !in_i[identity] || (0..n).any(|a| (0..n).any(|b| in_i[a] && in_i[b] && !in_i[mul[a][b]])) {
            return Err(bad("inertia is not a subgroup"));
        }
        let inv = |a: usize| (0..n).find(|&b| mul[a][b] == identity).expect("checked above");
        if (0..n).any(|g| (0..n).any(|h| in_i[h] && !in_i[mul[mul[g][h]][inv(g)]])) {
            return Err(bad("inertia is not normal"));
        }
        let e_l = in_i.iter().filter(|&&b| b).count();
        let f0 = *frobenius_coset.first().ok_or_else(|| bad("empty Frobenius coset"))?;
        if f0 >= n {
            return Err(bad("Frobenius index out of range"));
        }
        let mut coset: Vec<usize> = (0..n).filter(|&h| in_i[h]).map(|h| mul[f0][h]).collect();
        coset.sort_unstable();
        let mut given = frobenius_coset.to_vec();
        given.sort_unstable();
        given.dedup();
        if given != coset {
            return Err(bad("frobenius_coset is not a coset of inertia"));
        }
        // Frobenius exponent of each element: g ∈ F^m·I.
        let mut frob = vec![u32::MAX; n];
        let mut power = identity;
        let mut m = 0u32;
        loop {
            let mut fresh = false;
            for h in (0..n).filter(|&h| in_i[h]) {
                let g = mul[power][h];
                if frob[g] == u32::MAX {
                    frob[g] = m;
                    fresh = true;
                }
            }
            if !fresh {
                break;
            }
            power = mul[f0][power];
            m += 1;
        }
        if frob.contains(&u32::MAX) {
            return Err(bad("Frobenius does not generate G/I"));
        }
        let f_l = m;
        if let Some(mu) = &mu {
            if mu.len() != n {
                return Err(bad("mu must list one value per element"));
            }
            if (0..n).any(|g| !in_i[g] && !mu[g].is_zero()) {
                return Err(bad("mu must vanish off inertia"));
            }
        }
        Ok(LocalGaloisDatum { q_v, e_l: e_l as u64, f_l, mul, identity, frob, mu, tame: None })
    }

    pub fn q_v(&self) -> u64 {
        self.q_v
    }

    pub fn e_l(&self) -> u64 {
        self.e_l
    }

    pub fn f_l(&self) -> u32 {
        self.f_l
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.mul[a][b] == self.identity).expect("group")
    }

    /// `n(g)` with `g ∈ W^n_L` exactly when `n ≡ n(g) (mod f_L)`.
    pub fn frobenius_exponent(&self, g: usize) -> u32 {
        self.frob[g]
    }

    pub fn is_inertia(&self, g: usize) -> bool {
        self.frob[g] == 0
    }

    pub fn mu(&self) -> Option<&[Rat]> {
        self.mu.as_deref()
    }

    /// The tame parametrization `(a, k)` of each element, when available.
    pub fn tame_elements(&self) -> Option<(&TameShape, &[TameAbelianAut])> {
        self.tame.as_ref().map(|(s, e)| (s, e.as_slice()))
    }

    pub fn tame_element(&self, g: usize) -> Option<TameAbelianAut> {
        self.tame.as_ref().map(|(_, e)| e[g])
    }
}

/// A `Q`-valued function on the elements of a datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunctionQ {
    values: Vec<Rat>,
}

impl ClassFunctionQ {
    pub fn new(d: &LocalGaloisDatum, values: Vec<Rat>) -> Result<Self> {
        if values.len() != d.order() {
            return Err(Error::InvalidInput(format!(
                "class function has {} values for a group of order {}",
                values.len(),
                d.order()
            )));
        }
        Ok(ClassFunctionQ { values })
    }

    pub fn from_fn(d: &LocalGaloisDatum, f: impl Fn(usize) -> Rat) -> Self {
        ClassFunctionQ { values: (0..d.order()).map(f).collect() }
    }

    /// The trivial character `g ↦ 1`.
    pub fn trivial(d: &LocalGaloisDatum) -> Self {
        ClassFunctionQ::from_fn(d, |_| Rat::from_integer(1.into()))
    }

    pub fn zero(d: &LocalGaloisDatum) -> Self {
        ClassFunctionQ::from_fn(d, |_| Rat::zero())
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn at(&self, g: usize) -> &Rat {
        &self.values[g]
    }

    pub fn add(&self, other: &ClassFunctionQ) -> ClassFunctionQ {
        ClassFunctionQ { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, s: &Rat) -> ClassFunctionQ {
        ClassFunctionQ { values: self.values.iter().map(|a| a * s).collect() }
    }

    /// `a*(g) = a(g⁻¹)`.
    pub fn star(&self, d: &LocalGaloisDatum) -> ClassFunctionQ {
        ClassFunctionQ::from_fn(d, |g| self.values[d.inverse(g)].clone())
    }

    /// Whether `a(h⁻¹gh) = a(g)` for all `g, h`.
    pub fn is_class_function(&self, d: &LocalGaloisDatum) -> bool {
        (0..d.order()).all(|g| {
            (0..d.order()).all(|h| self.values[d.mul(d.mul(d.inverse(h), g), h)] == self.values[g])
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;

    #[test]
    fn tame_datum_shape() {
        let d = LocalGaloisDatum::tame(3, 2, 4, TowerConfig::default()).unwrap();
        assert_eq!(d.order(), 8);
        assert_eq!(d.e_l(), 4);
        assert_eq!(d.f_l(), 2);
        let mu = d.mu().unwrap();
        assert_eq!(mu[d.identity()], rat(3, 4));
    }

    #[test]
    fn table_datum_matches_tame() {
        let t = LocalGaloisDatum::tame(3, 1, 2, TowerConfig::default()).unwrap();
        let mul = (0..2).map(|a| (0..2).map(|b| t.mul(a, b)).collect()).collect();
        let d = LocalGaloisDatum::from_table(3, mul, &[0, 1], &[0, 1], t.mu().map(<[Rat]>::to_vec)).unwrap();
        assert_eq!(d.e_l(), 2);
        assert_eq!(d.f_l(), 1);
        // Cyclic group of order 2, trivial inertia: unramified quadratic.
        let d = LocalGaloisDatum::from_table(2, vec![vec![0, 1], vec![1, 0]], &[0], &[1], None).unwrap();
        assert_eq!((d.e_l(), d.f_l()), (1, 2));
        assert_eq!(d.frobenius_exponent(1), 1);
    }

    #[test]
    fn table_validation() {
        assert!(LocalGaloisDatum::from_table(2, vec![vec![0, 1], vec![1, 1]], &[0], &[1], None).is_err());
        assert!(LocalGaloisDatum::from_table(2, vec![vec![0, 1], vec![1, 0]], &[0], &[0], None).is_err());
        let mu = Some(vec![rat(0, 1), rat(1, 1)]);
        assert!(LocalGaloisDatum::from_table(2, vec![vec![0, 1], vec![1, 0]], &[0], &[1], mu).is_err());
    }

    #[test]
    fn star_and_class_functions() {
        // Gal of F_9((z))(z^{1/4}) over F_3((z)) is non-abelian.
        let d = LocalGaloisDatum::tame(3, 2, 4, TowerConfig::default()).unwrap();
        let a = ClassFunctionQ::from_fn(&d, |g| rat(g as i64, 1));
        assert!(!a.is_class_function(&d));
        assert_eq!(a.star(&d).star(&d), a);
        assert!(ClassFunctionQ::trivial(&d).is_class_function(&d));
    }
}
