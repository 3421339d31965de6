use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::Poly;
use super::FieldError;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Exact scalars. Every value can manufacture its own zero and one, which is
/// how number-field elements carry their field around without a global.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self, FieldError>;
    fn from_q_like(&self, x: &Q) -> Self;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }
    fn div(&self, o: &Self) -> Result<Self, FieldError> {
        Ok(self.mul(&o.inv()?))
    }
    fn from_int_like(&self, n: i64) -> Self {
        self.from_q_like(&q(n))
    }
    fn pow(&self, e: u32) -> Self {
        let mut acc = self.one_like();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl Scalar for Q {
    fn zero_like(&self) -> Self {
        Q::zero()
    }
    fn one_like(&self) -> Self {
        Q::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self, FieldError> {
        if Zero::is_zero(self) {
            Err(FieldError::ZeroInput)
        } else {
            Ok(self.recip())
        }
    }
    fn from_q_like(&self, x: &Q) -> Self {
        x.clone()
    }
}

#[derive(Debug)]
struct FieldData {
    /// monic minimal polynomial, lowest degree first, length d+1
    minpoly: Vec<Q>,
    symbol: String,
    /// reductions of x^d, ..., x^(2d-2) in the power basis
    high_powers: Vec<Vec<Q>>,
}

/// The base field k = Q[x]/(m(x)).
#[derive(Clone, Debug)]
pub struct NumberField(Arc<FieldData>);

impl PartialEq for NumberField {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || self.0.minpoly == o.0.minpoly
    }
}

impl NumberField {
    /// Builds k from the coefficients of its minimal polynomial, lowest degree first.
    pub fn new(minpoly: Vec<Q>, symbol: &str) -> Result<Self, FieldError> {
        let mut m = minpoly;
        while m.len() > 1 && Zero::is_zero(m.last().unwrap()) {
            m.pop();
        }
        if m.len() < 2 {
            return Err(FieldError::DegreeZero);
        }
        if !One::is_one(m.last().unwrap()) {
            return Err(FieldError::NotMonic);
        }
        let p = Poly::new(m.clone(), Q::zero());
        let g = p.gcd(&p.derivative());
        if g.degree() != Some(0) {
            return Err(FieldError::NotSquarefree(format!("{}", g)));
        }
        let d = m.len() - 1;
        let mut high_powers = Vec::new();
        // x^d = -(m_0 + ... + m_{d-1} x^{d-1})
        let mut cur: Vec<Q> = m[..d].iter().map(|c| -c).collect();
        for _ in 0..d.saturating_sub(1) {
            high_powers.push(cur.clone());
            // multiply by x and reduce
            let top = cur[d - 1].clone();
            let mut next = vec![Q::zero(); d];
            for i in (1..d).rev() {
                next[i] = cur[i - 1].clone();
            }
            for i in 0..d {
                next[i] -= &top * &m[i];
            }
            cur = next;
        }
        high_powers.push(cur);
        Ok(NumberField(Arc::new(FieldData { minpoly: m, symbol: symbol.to_string(), high_powers })))
    }

    pub fn rationals() -> Self {
        Self::new(vec![Q::zero(), Q::one()], "g").expect("x is squarefree")
    }

    /// Parses "-2,0,1" (lowest degree first). An empty spec or a single entry means Q.
    pub fn parse(spec: &str) -> Result<Self, FieldError> {
        let parts: Vec<&str> = spec.split(',').map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
        let coeffs = parts
            .iter()
            .map(|s| s.parse::<Q>().map_err(|_| FieldError::Parse(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.len() <= 1 {
            return Ok(Self::rationals());
        }
        Self::new(coeffs, "g")
    }

    pub fn degree(&self) -> usize {
        self.0.minpoly.len() - 1
    }

    pub fn symbol(&self) -> &str {
        &self.0.symbol
    }

    pub fn minpoly(&self) -> &[Q] {
        &self.0.minpoly
    }

    pub fn is_rationals(&self) -> bool {
        self.degree() == 1
    }

    pub fn zero(&self) -> NfElem {
        NfElem { field: self.clone(), c: vec![Q::zero(); self.degree()] }
    }

    pub fn one(&self) -> NfElem {
        self.from_q(&Q::one())
    }

    pub fn from_q(&self, x: &Q) -> NfElem {
        let mut c = vec![Q::zero(); self.degree()];
        c[0] = x.clone();
        // in Q = Q[x]/(x - a) the generator is a, so only constants are stored
        NfElem { field: self.clone(), c }
    }

    pub fn from_int(&self, n: i64) -> NfElem {
        self.from_q(&q(n))
    }

    /// The class of x in Q[x]/(m).
    pub fn generator(&self) -> NfElem {
        let d = self.degree();
        if d == 1 {
            return self.from_q(&-&self.0.minpoly[0]);
        }
        let mut c = vec![Q::zero(); d];
        c[1] = Q::one();
        NfElem { field: self.clone(), c }
    }

    pub fn from_coeffs(&self, mut c: Vec<Q>) -> NfElem {
        let d = self.degree();
        if c.len() > d {
            return self.reduce(c);
        }
        c.resize(d, Q::zero());
        NfElem { field: self.clone(), c }
    }

    fn reduce(&self, raw: Vec<Q>) -> NfElem {
        let d = self.degree();
        let mut c: Vec<Q> = raw.iter().take(d).cloned().collect();
        c.resize(d, Q::zero());
        for (j, v) in raw.iter().enumerate().skip(d) {
            if Zero::is_zero(v) {
                continue;
            }
            let hp = &self.0.high_powers[j - d];
            for i in 0..d {
                if !Zero::is_zero(&hp[i]) {
                    c[i] += v * &hp[i];
                }
            }
        }
        NfElem { field: self.clone(), c }
    }
}

/// Element of k in the power basis of the generator.
#[derive(Clone)]
pub struct NfElem {
    field: NumberField,
    c: Vec<Q>,
}

impl PartialEq for NfElem {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}

impl Eq for NfElem {}

impl NfElem {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    /// Some(q) when the element lies in Q.
    pub fn as_rational(&self) -> Option<Q> {
        if self.c.iter().skip(1).all(Zero::is_zero) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    /// Matrix of multiplication by self on the power basis (columns are images).
    pub fn mult_matrix(&self) -> Vec<Vec<Q>> {
        let d = self.field.degree();
        let mut cols = Vec::with_capacity(d);
        let mut basis = self.field.one();
        let g = self.field.generator();
        for _ in 0..d {
            cols.push(self.mul(&basis).c);
            basis = basis.mul(&g);
        }
        (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect()
    }

    pub fn trace(&self) -> Q {
        let m = self.mult_matrix();
        (0..m.len()).map(|i| m[i][i].clone()).sum()
    }

    /// Lexicographic key used for deterministic ordering.
    pub fn sort_key(&self) -> &[Q] {
        &self.c
    }
}

impl fmt::Debug for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.c.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            let sym = self.field.symbol();
            let mono = match i {
                0 => String::new(),
                1 => sym.to_string(),
                _ => format!("{}^{}", sym, i),
            };
            let t = if mono.is_empty() {
                format!("{}", c)
            } else if One::is_one(c) {
                mono
            } else if *c == -Q::one() {
                format!("-{}", mono)
            } else if c.is_integer() {
                format!("{}*{}", c, mono)
            } else {
                format!("({})*{}", c, mono)
            };
            terms.push(t);
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut s = terms[0].clone();
        for t in &terms[1..] {
            if let Some(rest) = t.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(t);
            }
        }
        write!(f, "{}", s)
    }
}

impl Scalar for NfElem {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }
    fn add(&self, o: &Self) -> Self {
        NfElem { field: self.field.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }
    fn sub(&self, o: &Self) -> Self {
        NfElem { field: self.field.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }
    fn mul(&self, o: &Self) -> Self {
        let d = self.c.len();
        if d == 1 {
            return NfElem { field: self.field.clone(), c: vec![&self.c[0] * &o.c[0]] };
        }
        let mut raw = vec![Q::zero(); 2 * d - 1];
        for (i, a) in self.c.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !Zero::is_zero(b) {
                    raw[i + j] += a * b;
                }
            }
        }
        self.field.reduce(raw)
    }
    fn neg(&self) -> Self {
        NfElem { field: self.field.clone(), c: self.c.iter().map(|a| -a).collect() }
    }
    fn inv(&self) -> Result<Self, FieldError> {
        if Scalar::is_zero(self) {
            return Err(FieldError::ZeroInput);
        }
        if self.c.len() == 1 {
            return Ok(NfElem { field: self.field.clone(), c: vec![self.c[0].recip()] });
        }
        let a = Poly::new(self.c.clone(), Q::zero());
        let m = Poly::new(self.field.0.minpoly.clone(), Q::zero());
        let (g, s, _t) = a.xgcd(&m);
        if g.degree() != Some(0) {
            return Err(FieldError::ZeroDivisor(format!("{}", g)));
        }
        let ginv = g.coeff(0).recip();
        let s = s.scale(&ginv);
        Ok(self.field.from_coeffs(s.coeffs().to_vec()))
    }
    fn from_q_like(&self, x: &Q) -> Self {
        self.field.from_q(x)
    }
}
