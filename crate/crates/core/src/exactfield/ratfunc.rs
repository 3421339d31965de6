use std::fmt;

use super::field::{Scalar, Q};
use super::poly::Poly;
use super::FieldError;

/// Reduced fraction num/den with den monic.
#[derive(Clone, PartialEq)]
pub struct RatFunc<S: Scalar> {
    num: Poly<S>,
    den: Poly<S>,
}

impl<S: Scalar> RatFunc<S> {
    pub fn new(num: Poly<S>, den: Poly<S>) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::ZeroInput);
        }
        if num.is_zero() {
            return Ok(RatFunc { den: Poly::one(num.proto()), num });
        }
        let g = num.gcd(&den);
        let (n, d) = if g.degree() == Some(0) { (num, den) } else { (num.exact_div(&g), den.exact_div(&g)) };
        let lc = d.lc().inv()?;
        Ok(RatFunc { num: n.scale(&lc), den: d.scale(&lc) })
    }

    pub fn from_poly(p: Poly<S>) -> Self {
        let one = Poly::one(p.proto());
        RatFunc { num: p, den: one }
    }

    pub fn constant(a: S) -> Self {
        Self::from_poly(Poly::constant(a))
    }

    pub fn var(proto: &S) -> Self {
        Self::from_poly(Poly::var(proto))
    }

    pub fn num(&self) -> &Poly<S> {
        &self.num
    }

    pub fn den(&self) -> &Poly<S> {
        &self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn derivative(&self) -> Self {
        let n = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        RatFunc::new(n, self.den.mul(&self.den)).expect("nonzero denominator")
    }

    /// self(N/D) for a rational substitution t ↦ N/D.
    pub fn compose(&self, n: &Poly<S>, d: &Poly<S>) -> Result<Self, FieldError> {
        let a = homogeneous_compose(&self.num, n, d);
        let b = homogeneous_compose(&self.den, n, d);
        let da = self.num.deg0();
        let db = self.den.deg0();
        // self = A/B with A(N/D) = a / D^da, B(N/D) = b / D^db
        let (num, den) = if da >= db { (a, b.mul(&d.pow(da - db))) } else { (a.mul(&d.pow(db - da)), b) };
        RatFunc::new(num, den)
    }

    pub fn eval(&self, x: &S) -> Result<S, FieldError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(FieldError::ZeroDivisor("pole".into()));
        }
        Ok(self.num.eval(x).mul(&d.inv()?))
    }
}

/// P(N/D)·D^deg P as a polynomial.
pub fn homogeneous_compose<S: Scalar>(p: &Poly<S>, n: &Poly<S>, d: &Poly<S>) -> Poly<S> {
    let m = p.deg0();
    let mut acc = Poly::zero(p.proto());
    let mut npow = Poly::one(p.proto());
    let dpows: Vec<Poly<S>> = {
        let mut v = vec![Poly::one(p.proto())];
        for _ in 0..m {
            let last = v.last().unwrap().mul(d);
            v.push(last);
        }
        v
    };
    for i in 0..=m {
        let c = p.coeff(i);
        if !c.is_zero() {
            acc = acc.add(&npow.mul(&dpows[m - i]).scale(&c));
        }
        npow = npow.mul(n);
    }
    acc
}

impl<S: Scalar> fmt::Debug for RatFunc<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for RatFunc<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl<S: Scalar> Scalar for RatFunc<S> {
    fn zero_like(&self) -> Self {
        Self::from_poly(Poly::zero(self.num.proto()))
    }
    fn one_like(&self) -> Self {
        Self::from_poly(Poly::one(self.num.proto()))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone()).expect("nonzero");
        }
        RatFunc::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).expect("nonzero")
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero")
    }
    fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Result<Self, FieldError> {
        if self.num.is_zero() {
            return Err(FieldError::ZeroInput);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }
    fn from_q_like(&self, x: &Q) -> Self {
        Self::constant(self.num.proto().from_q_like(x))
    }
}
