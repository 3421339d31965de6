use std::fmt;

use super::field::{Scalar, Q};

/// Dense univariate polynomial, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq)]
pub struct Poly<S: Scalar> {
    c: Vec<S>,
    zero: S,
}

impl<S: Scalar> Poly<S> {
    pub fn new(mut c: Vec<S>, zero: S) -> Self {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        Poly { c, zero }
    }

    pub fn zero(proto: &S) -> Self {
        Poly { c: Vec::new(), zero: proto.zero_like() }
    }

    pub fn one(proto: &S) -> Self {
        Self::constant(proto.one_like())
    }

    pub fn constant(a: S) -> Self {
        let z = a.zero_like();
        Poly::new(vec![a], z)
    }

    /// The monomial a·t^n.
    pub fn monomial(a: S, n: usize) -> Self {
        let z = a.zero_like();
        let mut c = vec![z.clone(); n];
        c.push(a);
        Poly::new(c, z)
    }

    /// t
    pub fn var(proto: &S) -> Self {
        Self::monomial(proto.one_like(), 1)
    }

    /// t - a
    pub fn linear(a: &S) -> Self {
        Poly::new(vec![a.neg(), a.one_like()], a.zero_like())
    }

    pub fn proto(&self) -> &S {
        &self.zero
    }

    pub fn coeffs(&self) -> &[S] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.c
    }

    pub fn coeff(&self, i: usize) -> S {
        self.c.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }

    /// Coefficient vector padded or truncated to length n.
    pub fn coeff_vec(&self, n: usize) -> Vec<S> {
        (0..n).map(|i| self.coeff(i)).collect()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    /// Degree with deg 0 := 0, convenient for size bounds.
    pub fn deg0(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn lc(&self) -> S {
        self.c.last().cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn is_monic(&self) -> bool {
        self.c.last().map_or(false, |x| x.is_one())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(c, self.zero.clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Poly { c: self.c.iter().map(|a| a.neg()).collect(), zero: self.zero.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.zero);
        }
        let mut c = vec![self.zero.clone(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] = c[i + j].add(&a.mul(b));
                }
            }
        }
        Poly::new(c, self.zero.clone())
    }

    pub fn scale(&self, a: &S) -> Self {
        Poly::new(self.c.iter().map(|x| x.mul(a)).collect(), self.zero.clone())
    }

    /// Multiply by t^n.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![self.zero.clone(); n];
        c.extend(self.c.iter().cloned());
        Poly { c, zero: self.zero.clone() }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Poly::one(&self.zero);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor polynomial.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.c.len() - 1;
        if self.c.len() < d.c.len() {
            return (Poly::zero(&self.zero), self.clone());
        }
        let inv = d.lc().inv().expect("leading coefficient of a nonzero polynomial is invertible");
        let mut r = self.c.clone();
        let mut qc = vec![self.zero.clone(); self.c.len() - dd];
        for i in (0..qc.len()).rev() {
            let coef = r[i + dd].mul(&inv);
            if coef.is_zero() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                if !b.is_zero() {
                    r[i + j] = r[i + j].sub(&coef.mul(b));
                }
            }
            qc[i] = coef;
        }
        r.truncate(dd);
        (Poly::new(qc, self.zero.clone()), Poly::new(r, self.zero.clone()))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Exact quotient; panics when d does not divide self.
    pub fn exact_div(&self, d: &Self) -> Self {
        let (q, r) = self.divrem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, o: &Self) -> bool {
        o.rem(self).is_zero()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns (g, s, t) with s·self + t·o = g, g monic (or zero).
    pub fn xgcd(&self, o: &Self) -> (Self, Self, Self) {
        let z = &self.zero;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(z), Poly::zero(z));
        let (mut t0, mut t1) = (Poly::zero(z), Poly::one(z));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().inv().expect("nonzero");
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Inverse of self modulo m, if gcd(self, m) = 1.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = self.rem(m).xgcd(m);
        if g.degree() == Some(0) {
            Some(s.rem(m))
        } else {
            None
        }
    }

    pub fn derivative(&self) -> Self {
        let c = self.c.iter().enumerate().skip(1).map(|(i, a)| a.mul(&a.from_int_like(i as i64))).collect();
        Poly::new(c, self.zero.clone())
    }

    pub fn eval(&self, x: &S) -> S {
        let mut acc = self.zero.clone();
        for a in self.c.iter().rev() {
            acc = acc.mul(x).add(a);
        }
        acc
    }

    /// self(g) as a polynomial.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Poly::zero(&self.zero);
        for a in self.c.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(a.clone()));
        }
        acc
    }

    /// t^n · self(1/t) for n ≥ deg self.
    pub fn reverse(&self, n: usize) -> Self {
        let c = (0..=n).map(|i| if n - i < self.c.len() { self.c[n - i].clone() } else { self.zero.clone() }).collect();
        Poly::new(c, self.zero.clone())
    }

    /// Truncate to terms of degree < n.
    pub fn truncate(&self, n: usize) -> Self {
        Poly::new(self.c.iter().take(n).cloned().collect(), self.zero.clone())
    }

    /// Squarefree decomposition (Yun): returns (s_i, i) with self = lc · Π s_i^i, s_i monic squarefree pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.exact_div(&a0);
        let mut c = fp.exact_div(&a0);
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.exact_div(&a);
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.exact_div(&a);
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Lift coefficients along a ring map.
    pub fn map<T: Scalar>(&self, zero: T, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly::new(self.c.iter().map(f).collect(), zero)
    }
}

impl<S: Scalar + Eq> Eq for Poly<S> {}

impl<S: Scalar + fmt::Display> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(f, &self.c, "t")
    }
}

impl<S: Scalar> fmt::Debug for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.c)
    }
}

pub(crate) fn fmt_poly<S: Scalar + fmt::Display>(f: &mut fmt::Formatter<'_>, c: &[S], var: &str) -> fmt::Result {
    if c.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (i, a) in c.iter().enumerate().rev() {
        if a.is_zero() {
            continue;
        }
        let s = format!("{}", a);
        let compound = s.contains(' ');
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{}^{}", var, i),
        };
        let (neg, body) = if !compound && s.starts_with('-') { (true, s[1..].to_string()) } else { (false, s) };
        let body = if compound { format!("({})", body) } else { body };
        let term = if mono.is_empty() {
            body
        } else if body == "1" {
            mono
        } else {
            format!("{}*{}", body, mono)
        };
        if first {
            write!(f, "{}{}", if neg { "-" } else { "" }, term)?;
        } else {
            write!(f, " {} {}", if neg { "-" } else { "+" }, term)?;
        }
        first = false;
    }
    Ok(())
}

pub type QPoly = Poly<Q>;
