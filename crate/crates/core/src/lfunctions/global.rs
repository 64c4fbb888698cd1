//! Global zeta functions of `F_q[t]`, the operator `Z^∞` and the
//! regularization of divergent sums over the finite places.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::algebra::arith::prime_power;
use crate::algebra::ff::FqField;
use crate::algebra::poly::poly_irreducibles;
use crate::algebra::rat::{self, int, Rat};
use crate::algebra::ratfunc::{ratfunc_logderiv_value, QPoly, RatFunc};
use crate::error::{Error, Result};

/// An exact multiple `c·log q` of `log q`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LogQValue(pub Rat);

impl LogQValue {
    pub fn zero() -> Self {
        LogQValue(Rat::zero())
    }

    /// `c·log q_v` at a place of degree `deg`, folded into `(c·deg)·log q`.
    pub fn at_place(c: &Rat, deg: u32) -> Self {
        LogQValue(c * int(i64::from(deg)))
    }

    pub fn coefficient(&self) -> &Rat {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Display for LogQValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·log q", rat::to_string(&self.0))
    }
}

impl Add for LogQValue {
    type Output = LogQValue;
    fn add(self, o: LogQValue) -> LogQValue {
        LogQValue(self.0 + o.0)
    }
}

impl Sub for LogQValue {
    type Output = LogQValue;
    fn sub(self, o: LogQValue) -> LogQValue {
        LogQValue(self.0 - o.0)
    }
}

impl Neg for LogQValue {
    type Output = LogQValue;
    fn neg(self) -> LogQValue {
        LogQValue(-self.0)
    }
}

impl std::iter::Sum for LogQValue {
    fn sum<I: Iterator<Item = LogQValue>>(it: I) -> LogQValue {
        it.fold(LogQValue::zero(), Add::add)
    }
}

/// `ζ_A` and `ζ_C` for `A = F_q[t]`, `C = P^1`, in `u = q^{-s}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalZeta {
    pub zeta_a: RatFunc,
    pub zeta_c: RatFunc,
}

pub fn zeta_closed_forms(q: u64) -> Result<GlobalZeta> {
    check_q(q)?;
    let q = int(q as i64);
    let finite = QPoly::new(vec![int(1), -q]);
    let infinite = QPoly::from_ints(&[1, -1]);
    Ok(GlobalZeta {
        zeta_a: RatFunc::new(QPoly::one(), finite.clone())?,
        zeta_c: RatFunc::new(QPoly::one(), finite.mul(&infinite))?,
    })
}

fn check_q(q: u64) -> Result<()> {
    prime_power(q)
        .map(|_| ())
        .ok_or_else(|| Error::InvalidInput(format!("q = {q} is not a prime power")))
}

/// The first `n` Taylor coefficients at `u = 0`.
pub fn power_series(r: &RatFunc, n: usize) -> Result<Vec<Rat>> {
    let d0 = r.den().coeff(0);
    if d0.is_zero() {
        return Err(Error::Pole("rational function has a pole at 0".into()));
    }
    let mut out: Vec<Rat> = Vec::with_capacity(n);
    for k in 0..n {
        let mut c = r.num().coeff(k);
        for i in 1..=k {
            c -= r.den().coeff(i) * &out[k - i];
        }
        out.push(c / &d0);
    }
    Ok(out)
}

/// `∏ (1 − u^{deg P})^{-1}` over the monic irreducible `P ∈ F_q[t]` with
/// `deg P ≤ max_degree`, modulo `u^{max_degree+1}`.
pub fn euler_partial_product(q: u64, max_degree: usize) -> Result<Vec<Rat>> {
    check_q(q)?;
    let field = FqField::of_size(q)?;
    let n = max_degree + 1;
    let mut acc = vec![Rat::zero(); n];
    acc[0] = Rat::one();
    for d in 1..=max_degree {
        for _ in poly_irreducibles(&field, d)? {
            // Multiply by 1 + u^d + u^{2d} + … in place.
            for k in d..n {
                let prev = acc[k - d].clone();
                acc[k] += prev;
            }
        }
    }
    Ok(acc)
}

/// `Z^∞(s0) = (d/ds L^∞)/L^∞` at `s = s0` for `L^∞` given in `u = q^{-s}`,
/// using `du/ds = −u·log q`.
pub fn z_infty_at(l: &RatFunc, q: u64, s0: i64) -> Result<LogQValue> {
    check_q(q)?;
    let u0 = rat::pow(&int(q as i64), -s0)?;
    if r_has_pole(l, &u0) {
        return Err(Error::Pole(format!("L^∞ has a pole at s = {s0}")));
    }
    let ld = ratfunc_logderiv_value(l, &u0).map_err(|_| Error::Pole(format!("L^∞ vanishes at s = {s0}")))?;
    Ok(LogQValue(-(u0 * ld)))
}

fn r_has_pole(r: &RatFunc, u0: &Rat) -> bool {
    r.den().eval(u0).is_zero()
}

/// The character on the places outside the explicit list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TailCharacter {
    /// `a = 0`.
    Zero,
    /// `a = 𝟙`, with `L^∞ = ζ_A` and `μ^∞_Art = 0`.
    Trivial,
    /// Any other `a`, described by `a(1)`, `μ^∞_Art(a)` and `L^∞(a*, s)` in
    /// `u = q^{-s}` when known.
    Supplied { a_at_identity: Rat, mu_infty: LogQValue, l_infty_star: Option<RatFunc> },
}

/// A finite place whose term `x_v` is given directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitPlace {
    pub label: String,
    pub degree: u32,
    pub x_v: LogQValue,
    /// `Z_v(a, 1)`, the coefficient of `log q_v`.
    pub z_v_at_one: Rat,
}

impl ExplicitPlace {
    /// `x_v + Z_v(a, 1)·log q_v`.
    pub fn defect(&self) -> LogQValue {
        self.x_v.clone() + LogQValue::at_place(&self.z_v_at_one, self.degree)
    }
}

/// The four summands of the regularized value and their total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regularization {
    /// `−Z^∞(a*, 0)`.
    pub z_infty: LogQValue,
    /// `−μ^∞_Art(a)`.
    pub mu_infty: LogQValue,
    /// `−2·genus·a(1)·log q`.
    pub genus: LogQValue,
    /// `Σ (x_v + Z_v(a,1)·log q_v)` over the explicit places.
    pub explicit: LogQValue,
    pub total: LogQValue,
}

/// Value of `Σ_{v≠∞} x_v` where `x_v = −Z_v(a,1)·log q_v` off `explicit`.
pub fn regularized_sum(q: u64, tail: &TailCharacter, genus: u64, explicit: &[ExplicitPlace]) -> Result<Regularization> {
    check_q(q)?;
    let (a1, mu, l) = match tail {
        TailCharacter::Zero => (Rat::zero(), LogQValue::zero(), RatFunc::constant(Rat::one())),
        TailCharacter::Trivial => (Rat::one(), LogQValue::zero(), zeta_closed_forms(q)?.zeta_a),
        TailCharacter::Supplied { a_at_identity, mu_infty, l_infty_star } => (
            a_at_identity.clone(),
            mu_infty.clone(),
            l_infty_star
                .clone()
                .ok_or_else(|| Error::InvalidInput("no L^∞(a*, s) representation supplied".into()))?,
        ),
    };
    let z_infty = -z_infty_at(&l, q, 0)?;
    let mu_infty = -mu;
    let genus = LogQValue(-(int(2) * int(genus as i64) * a1));
    let explicit: LogQValue = explicit.iter().map(ExplicitPlace::defect).sum();
    let total = z_infty.clone() + mu_infty.clone() + genus.clone() + explicit.clone();
    Ok(Regularization { z_infty, mu_infty, genus, explicit, total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;

    #[test]
    fn closed_forms() {
        let z = zeta_closed_forms(2).unwrap();
        assert_eq!(z.zeta_a, RatFunc::new(QPoly::one(), QPoly::from_ints(&[1, -2])).unwrap());
        let ratio = z.zeta_c.div(&z.zeta_a).unwrap();
        assert_eq!(ratio, RatFunc::new(QPoly::one(), QPoly::from_ints(&[1, -1])).unwrap());
        assert!(zeta_closed_forms(6).is_err());
    }

    #[test]
    fn euler_product_degree_two() {
        // (1−u)^{-2}(1−u²)^{-1} = 1 + 2u + 4u² + O(u³).
        assert_eq!(euler_partial_product(2, 2).unwrap(), vec![int(1), int(2), int(4)]);
    }

    #[test]
    fn euler_product_matches_zeta_a() {
        for q in [2u64, 3, 4] {
            let zeta = zeta_closed_forms(q).unwrap().zeta_a;
            assert_eq!(euler_partial_product(q, 6).unwrap(), power_series(&zeta, 7).unwrap(), "q = {q}");
        }
    }

    #[test]
    fn z_infty_values() {
        for q in [2u64, 3, 4, 5] {
            let zeta = zeta_closed_forms(q).unwrap().zeta_a;
            assert_eq!(z_infty_at(&zeta, q, 0).unwrap(), LogQValue(rat(q as i64, q as i64 - 1)));
        }
        assert_eq!(z_infty_at(&RatFunc::constant(int(3)), 2, 0).unwrap(), LogQValue::zero());
        // ζ_A has a pole at s = 1.
        let zeta = zeta_closed_forms(2).unwrap().zeta_a;
        assert!(matches!(z_infty_at(&zeta, 2, 1), Err(Error::Pole(_))));
    }

    #[test]
    fn regularization_examples() {
        let r = regularized_sum(3, &TailCharacter::Trivial, 0, &[]).unwrap();
        assert_eq!(r.total, LogQValue(rat(-3, 2)));
        let place = |x: Rat| ExplicitPlace { label: "t".into(), degree: 1, x_v: LogQValue(x), z_v_at_one: rat(1, 2) };
        let r = regularized_sum(3, &TailCharacter::Zero, 0, &[place(rat(1, 1))]).unwrap();
        assert_eq!(r.total, LogQValue(rat(3, 2)));
        // Perturbing one place by δ shifts the value by δ.
        let base = regularized_sum(3, &TailCharacter::Trivial, 0, &[place(rat(-1, 2))]).unwrap();
        let moved = regularized_sum(3, &TailCharacter::Trivial, 0, &[place(rat(-1, 2) + rat(2, 7))]).unwrap();
        assert_eq!(moved.total - base.total.clone(), LogQValue(rat(2, 7)));
        assert_eq!(base.total, LogQValue(rat(-3, 2)));
        let missing = TailCharacter::Supplied { a_at_identity: int(1), mu_infty: LogQValue::zero(), l_infty_star: None };
        assert!(regularized_sum(3, &missing, 0, &[]).is_err());
    }

    #[test]
    fn genus_term_uses_identity_value() {
        let tail = TailCharacter::Supplied {
            a_at_identity: int(2),
            mu_infty: LogQValue(int(1)),
            l_infty_star: Some(RatFunc::constant(int(1))),
        };
        let r = regularized_sum(2, &tail, 3, &[]).unwrap();
        assert_eq!(r.genus, LogQValue(int(-12)));
        assert_eq!(r.total, LogQValue(int(-13)));
    }

    #[test]
    fn display() {
        assert_eq!(LogQValue(rat(-2, 3)).to_string(), "-2/3·log q");
        assert_eq!(LogQValue::zero().to_string(), "0·log q");
    }
}
