//! Local computations at places: jets of functions and differentials,
//! residues, and traces along finite maps.

use crate::exactfield::{KPoly, KRatFunc, Matrix, NfElem, Poly, RatFunc, Scalar};

use super::divisor::{Place, PlaceKind};
use super::map::RationalMap;
use super::GeomError;

/// f(1/s) as a rational function of s.
pub fn s_chart(f: &KRatFunc) -> KRatFunc {
    let (a, b) = (f.num(), f.den());
    let (da, db) = (a.deg0(), b.deg0());
    let ra = a.reverse(da);
    let rb = b.reverse(db);
    // A(1/s)/B(1/s) = s^(db-da) Ã(s)/B̃(s)
    if db >= da {
        KRatFunc::new(ra.shift(db - da), rb).expect("nonzero")
    } else {
        KRatFunc::new(ra, rb.shift(da - db)).expect("nonzero")
    }
}

/// The local coordinate polynomial of a place in its chart (p itself, or s at ∞).
pub fn chart_poly(place: &Place, proto: &NfElem) -> KPoly {
    match &place.kind {
        PlaceKind::Finite(p) => p.clone(),
        PlaceKind::Infinity => KPoly::var(proto),
    }
}

/// Reduction of f modulo p^n in the chart of the place, None if f has a pole there.
pub fn jet_at(f: &KRatFunc, place: &Place, n: usize) -> Option<KPoly> {
    let proto = f.num().proto().clone();
    match &place.kind {
        PlaceKind::Finite(p) => jet_finite(f, p, n),
        PlaceKind::Infinity => jet_finite(&s_chart(f), &KPoly::var(&proto), n),
    }
}

fn jet_finite(f: &KRatFunc, p: &KPoly, n: usize) -> Option<KPoly> {
    let m = p.pow(n);
    if n == 0 {
        return Some(Poly::zero(p.proto()));
    }
    let inv = f.den().inv_mod(&m)?;
    Some(f.num().mul(&inv).rem(&m))
}

/// Coefficient function of h dt in the chart of the place (ds-coefficient at ∞).
pub fn differential_in_chart(h: &KRatFunc, place: &Place) -> KRatFunc {
    match &place.kind {
        PlaceKind::Finite(_) => h.clone(),
        PlaceKind::Infinity => {
            let hs = s_chart(h);
            let proto = h.num().proto();
            let s2 = KRatFunc::from_poly(KPoly::monomial(proto.one_like(), 2));
            hs.mul(&s2.inv().expect("nonzero")).neg()
        }
    }
}

/// Jet of the chart coefficient of h dt modulo p^n.
pub fn diff_jet_at(h: &KRatFunc, place: &Place, n: usize) -> Option<KPoly> {
    let c = differential_in_chart(h, place);
    let proto = h.num().proto().clone();
    jet_finite(&c, &chart_poly(place, &proto), n)
}

pub fn is_regular_at(f: &KRatFunc, place: &Place) -> bool {
    jet_at(f, place, 1).is_some()
}

/// Trace of the class of x in k[t]/(p) down to k.
pub fn trace_mod(x: &KPoly, p: &KPoly) -> NfElem {
    let d = p.deg0();
    let mut acc = p.proto().zero_like();
    let mut basis = KPoly::one(p.proto());
    let t = KPoly::var(p.proto());
    for i in 0..d {
        acc = acc.add(&x.mul(&basis).rem(p).coeff(i));
        basis = basis.mul(&t).rem(p);
    }
    acc
}

/// Chinese remainder: the unique polynomial of degree < Σ deg mᵢ congruent to vᵢ mod mᵢ.
pub fn crt(parts: &[(KPoly, KPoly)], proto: &NfElem) -> KPoly {
    let mut modulus = KPoly::one(proto);
    let mut acc = KPoly::zero(proto);
    for (m, v) in parts {
        // acc ≡ previous mod modulus; adjust by modulus·c so that acc ≡ v mod m
        let inv = modulus.inv_mod(m).expect("CRT moduli must be coprime");
        let c = v.sub(&acc).mul(&inv).rem(m);
        acc = acc.add(&modulus.mul(&c));
        modulus = modulus.mul(m);
    }
    acc.rem(&modulus)
}

/// Splits den = den_p · rest with den_p supported on the zeros of p and gcd(rest, p) = 1.
/// Returns (den_p, rest, m) with den_p | p^m.
fn split_at(den: &KPoly, p: &KPoly) -> (KPoly, KPoly, usize) {
    let mut rest = den.clone();
    let mut dp = KPoly::one(p.proto());
    let mut m = 0;
    loop {
        let g = rest.gcd(p);
        if g.deg0() == 0 {
            break;
        }
        rest = rest.exact_div(&g);
        dp = dp.mul(&g);
        m += 1;
    }
    (dp, rest, m)
}

/// Principal part of f at the finite place p, written as R/p^m with deg R < m·deg p.
pub fn principal_part(f: &KRatFunc, p: &KPoly) -> (KPoly, usize) {
    let (dp, rest, m) = split_at(f.den(), p);
    if m == 0 {
        return (KPoly::zero(p.proto()), 0);
    }
    // f = A/(dp·rest) = R/dp + S/rest with R = A·rest⁻¹ mod dp
    let inv = rest.inv_mod(&dp).expect("coprime");
    let r = f.num().mul(&inv).rem(&dp);
    let pm = p.pow(m);
    let scale = pm.exact_div(&dp);
    (r.mul(&scale).rem(&pm), m)
}

/// res_P(h dt), computed by pole-order reduction against exact differentials.
pub fn residue(h: &KRatFunc, place: &Place) -> Result<NfElem, GeomError> {
    let proto = h.num().proto().clone();
    match &place.kind {
        PlaceKind::Finite(p) => {
            if !p.is_squarefree() {
                return Err(GeomError::NotSquarefree(format!("{}", p)));
            }
            let (mut r, mut m) = principal_part(h, p);
            if m == 0 {
                return Ok(proto.zero_like());
            }
            let dp = p.derivative();
            let (_, a, b) = p.xgcd(&dp);
            // a·p + b·p′ = 1
            while m > 1 {
                let rb = r.mul(&b);
                let corr = rb.derivative().scale(&proto.from_int_like(m as i64 - 1).inv().expect("char 0"));
                m -= 1;
                r = r.mul(&a).add(&corr).rem(&p.pow(m));
            }
            let inv_dp = dp.inv_mod(p).expect("squarefree");
            Ok(trace_mod(&r.mul(&inv_dp).rem(p), p))
        }
        PlaceKind::Infinity => {
            let r = h.num().rem(h.den());
            if r.is_zero() || r.deg0() + 1 != h.den().deg0() {
                return Ok(proto.zero_like());
            }
            Ok(r.lc().mul(&h.den().lc().inv().expect("nonzero")).neg())
        }
    }
}

/// The finite places where h dt may have poles: factors of the denominator, and ∞.
pub fn polar_places(h: &KRatFunc, comp: usize) -> Vec<Place> {
    let mut out: Vec<Place> = h.den().squarefree_decomposition().into_iter().map(|(s, _)| Place::finite(comp, s)).collect();
    out.push(Place::infinity(comp));
    out
}

/// Σ of residues of h dt over all places of ℙ¹.
pub fn residue_sum(h: &KRatFunc) -> NfElem {
    let mut acc = h.num().proto().zero_like();
    for p in polar_places(h, 0) {
        acc = acc.add(&residue(h, &p).expect("squarefree places"));
    }
    acc
}

type KT = RatFunc<NfElem>;

/// Tr_{k(t)/k(t′)}(g) for t′ = f(t).
pub fn trace_along(f: &RationalMap, g: &KRatFunc) -> Result<KRatFunc, GeomError> {
    let proto = f.proto().clone();
    let n = f.degree();
    if n == 0 {
        return Err(GeomError::ConstantMap);
    }
    let kt_zero = KT::from_poly(KPoly::zero(&proto));
    let tprime = KT::var(&proto);
    let lift = |p: &KPoly| -> Poly<KT> { p.map(kt_zero.clone(), |c| KT::constant(c.clone())) };
    // relation N(X) - t′·D(X) over k(t′)
    let rel = lift(f.num()).sub(&lift(f.den()).scale(&tprime));
    let rel = rel.monic();
    assert_eq!(rel.deg0(), n);
    // g(X) = A(X)·B(X)^{-1} mod rel
    let a = lift(g.num()).rem(&rel);
    let b = lift(g.den()).rem(&rel);
    let binv = b.inv_mod(&rel).ok_or_else(|| GeomError::PoleOnBranchLocus(format!("{}", g.den())))?;
    let elem = a.mul(&binv).rem(&rel);
    // Tr(X^j) from the companion matrix
    let mut comp = Matrix::zeros(n, n, &kt_zero);
    for i in 1..n {
        comp.set(i, i - 1, kt_zero.one_like());
    }
    for i in 0..n {
        comp.set(i, n - 1, rel.coeff(i).neg());
    }
    let mut power = Matrix::identity(n, &kt_zero);
    let mut acc = kt_zero.clone();
    for j in 0..n {
        let cj = elem.coeff(j);
        if !cj.is_zero() {
            let tr = (0..n).fold(kt_zero.clone(), |s, i| s.add(power.get(i, i)));
            acc = acc.add(&cj.mul(&tr));
        }
        power = power.mul(&comp);
    }
    Ok(acc)
}

/// Tr(h dt) = Tr(h / f′(t)) dt′, returned as the dt′-coefficient.
pub fn push_differential(f: &RationalMap, h: &KRatFunc) -> Result<KRatFunc, GeomError> {
    let fp = f.as_ratfunc().derivative();
    let q = h.mul(&fp.inv().map_err(|_| GeomError::ConstantMap)?);
    trace_along(f, &q)
}

/// f*(h′ dt′) = h′(f(t))·f′(t) dt, returned as the dt-coefficient.
pub fn pull_differential(f: &RationalMap, h: &KRatFunc) -> KRatFunc {
    let comp = h.compose(f.num(), f.den()).expect("nonconstant map");
    comp.mul(&f.as_ratfunc().derivative())
}

/// h′∘f
pub fn pull_function(f: &RationalMap, h: &KRatFunc) -> KRatFunc {
    h.compose(f.num(), f.den()).expect("nonconstant map")
}
