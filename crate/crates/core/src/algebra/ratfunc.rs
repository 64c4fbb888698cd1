//! Univariate polynomials and rational functions over `Q`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::rat::{self, Rat};
use crate::error::{Error, Result};

/// Polynomial over `Q`, constant term first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoly(Vec<Rat>);

impl QPoly {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        QPoly::new(c.iter().map(|&n| rat::int(n)).collect())
    }

    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn one() -> Self {
        QPoly(vec![Rat::one()])
    }

    pub fn constant(c: Rat) -> Self {
        QPoly::new(vec![c])
    }

    /// `c·x^n`.
    pub fn monomial(c: Rat, n: usize) -> Self {
        let mut v = vec![Rat::zero(); n];
        v.push(c);
        QPoly::new(v)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.0.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Rat> {
        self.0.last()
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly::new(c)
    }

    pub fn scale(&self, s: &Rat) -> QPoly {
        QPoly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn div_rem(&self, d: &QPoly) -> Result<(QPoly, QPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead = d.0[dd].clone();
        let mut r = self.0.clone();
        let mut q = vec![Rat::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let c = &r[top] / &lead;
            let shift = top - dd;
            for (i, di) in d.0.iter().enumerate() {
                r[shift + i] -= &c * di;
            }
            q[shift] = c;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Ok((QPoly::new(q), QPoly::new(r)))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("b is nonzero").1;
            a = b;
            b = r;
        }
        match a.lead().cloned() {
            Some(l) => a.scale(&l.recip()),
            None => a,
        }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.0.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * rat::int(i as i64)).collect())
    }

    /// `self(x^k)`.
    pub fn substitute_power(&self, k: usize) -> QPoly {
        let mut c = vec![Rat::zero(); self.0.len().saturating_sub(1) * k + 1];
        for (i, a) in self.0.iter().enumerate() {
            c[i * k] = a.clone();
        }
        QPoly::new(c)
    }

    /// Renders in increasing degree in the variable `var`.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let body = if i == 0 {
                a.to_string()
            } else if a.is_one() {
                mono
            } else if a.is_integer() {
                format!("{a}{mono}")
            } else {
                format!("({a}){mono}")
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

/// A rational function `num/den` over `Q`, kept with coprime numerator and
/// denominator and a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: QPoly,
    den: QPoly,
}

impl RatFunc {
    pub fn new(num: QPoly, den: QPoly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc { num, den }.normalized())
    }

    fn normalized(self) -> RatFunc {
        if self.num.is_zero() {
            return RatFunc { num: QPoly::zero(), den: QPoly::one() };
        }
        let g = self.num.gcd(&self.den);
        let num = self.num.div_rem(&g).expect("gcd is nonzero").0;
        let den = self.den.div_rem(&g).expect("gcd is nonzero").0;
        let l = den.lead().expect("denominator is nonzero").recip();
        RatFunc { num: num.scale(&l), den: den.scale(&l) }
    }

    /// Re-runs normalization; a no-op on values built through the API.
    pub fn normalize(&self) -> RatFunc {
        self.clone().normalized()
    }

    pub fn from_poly(p: QPoly) -> RatFunc {
        RatFunc { num: p, den: QPoly::one() }.normalized()
    }

    pub fn constant(c: Rat) -> RatFunc {
        RatFunc::from_poly(QPoly::constant(c))
    }

    pub fn zero() -> RatFunc {
        RatFunc::from_poly(QPoly::zero())
    }

    /// The indeterminate itself.
    pub fn x() -> RatFunc {
        RatFunc::from_poly(QPoly::monomial(Rat::one(), 1))
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        RatFunc { num, den: self.den.mul(&o.den) }.normalized()
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.scale(&-Rat::one()), den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }.normalized()
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc { num: self.num.mul(&o.den), den: self.den.mul(&o.num) }.normalized())
    }

    pub fn scale(&self, s: &Rat) -> RatFunc {
        RatFunc { num: self.num.scale(s), den: self.den.clone() }.normalized()
    }

    /// Value at `x0`; errors on a pole.
    pub fn eval(&self, x0: &Rat) -> Result<Rat> {
        let d = self.den.eval(x0);
        if d.is_zero() {
            return Err(Error::Pole(format!("denominator vanishes at {x0}")));
        }
        Ok(self.num.eval(x0) / d)
    }

    pub fn derivative(&self) -> RatFunc {
        let num = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        RatFunc { num, den: self.den.mul(&self.den) }.normalized()
    }

    /// `f(x^k)`.
    pub fn substitute_power(&self, k: usize) -> RatFunc {
        RatFunc { num: self.num.substitute_power(k), den: self.den.substitute_power(k) }.normalized()
    }

    /// Renders with the denominator scaled to constant term one when possible,
    /// e.g. `x/(1 - x)`.
    pub fn render(&self, var: &str) -> String {
        let c0 = self.den.coeff(0);
        let (num, den) = if c0.is_zero() {
            (self.num.clone(), self.den.clone())
        } else {
            let s = c0.recip();
            (self.num.scale(&s), self.den.scale(&s))
        };
        let n = num.render(var);
        if den == QPoly::one() {
            return n;
        }
        let n = if num.0.iter().filter(|c| !c.is_zero()).count() > 1 { format!("({n})") } else { n };
        format!("{n}/({})", den.render(var))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}

/// `f'(x0)/f(x0)`.
pub fn ratfunc_logderiv_value(f: &RatFunc, x0: &Rat) -> Result<Rat> {
    let v = f.eval(x0)?;
    if v.is_zero() {
        return Err(Error::Pole(format!("function vanishes at {x0}")));
    }
    Ok(f.derivative().eval(x0)? / v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{int, rat};
    use proptest::prelude::*;

    fn geometric(c: i64) -> RatFunc {
        // 1/(1 - c·x)
        RatFunc::new(QPoly::one(), QPoly::from_ints(&[1, -c])).unwrap()
    }

    #[test]
    fn logderiv_examples() {
        // Frozen from a sympy evaluation of diff(log(1/(1-2x)), x) at x = 1.
        assert_eq!(ratfunc_logderiv_value(&geometric(2), &int(1)).unwrap(), int(-2));
        assert_eq!(ratfunc_logderiv_value(&RatFunc::constant(int(5)), &int(3)).unwrap(), int(0));
        assert_eq!(ratfunc_logderiv_value(&RatFunc::x(), &int(1)).unwrap(), int(1));
        assert!(ratfunc_logderiv_value(&RatFunc::x(), &int(0)).is_err());
        assert!(ratfunc_logderiv_value(&geometric(2), &rat(1, 2)).is_err());
    }

    #[test]
    fn normalization_cancels_and_makes_denominator_monic() {
        // (2x - 2)/(4x^2 - 4) = (1/2)/(x + 1)
        let f = RatFunc::new(QPoly::from_ints(&[-2, 2]), QPoly::from_ints(&[-4, 0, 4])).unwrap();
        assert_eq!(f.num(), &QPoly::constant(rat(1, 2)));
        assert_eq!(f.den(), &QPoly::from_ints(&[1, 1]));
    }

    #[test]
    fn render_prefers_unit_constant_term() {
        let z = RatFunc::x().mul(&geometric(1));
        assert_eq!(z.render("x"), "x/(1 - x)");
        assert_eq!(geometric(2).render("u"), "1/(1 - 2u)");
    }

    fn small_poly() -> impl Strategy<Value = QPoly> {
        prop::collection::vec(-4i64..5, 0..4).prop_map(|v| QPoly::from_ints(&v))
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(n in small_poly(), d in small_poly()) {
            prop_assume!(!d.is_zero());
            let f = RatFunc::new(n, d).unwrap();
            prop_assert_eq!(f.normalize(), f.clone());
            prop_assert_eq!(f.normalize().normalize(), f.normalize());
        }

        #[test]
        fn field_laws(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assume!(!c.is_zero());
            let fa = RatFunc::new(a, c.clone()).unwrap();
            let fb = RatFunc::new(b, c).unwrap();
            prop_assert_eq!(fa.add(&fb).sub(&fb), fa.clone());
            if !fb.is_zero() {
                prop_assert_eq!(fa.mul(&fb).div(&fb).unwrap(), fa);
            }
        }
    }
}
