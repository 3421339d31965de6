//! Multiplicative computations in the jet rings O/p^n along a modulus.

use crate::exactfield::{KPoly, KRatFunc, NfElem, Scalar};
use crate::modcoh::uv::blocks_of;
use crate::modcoh::LocalBlock;
use crate::projline::Divisor;

/// The root θ of the chart polynomial in k[t]/p^n lifting t mod p.
/// g ↦ g(θ) is the unique k-algebra section k(P) → O/p^n.
pub fn hensel_root(b: &LocalBlock) -> KPoly {
    let m = b.modulus(b.n);
    let dp = b.chart.derivative();
    let mut theta = KPoly::var(b.proto()).rem(&m);
    for _ in 0..b.n {
        let val = b.chart.compose(&theta).rem(&m);
        if val.is_zero() {
            break;
        }
        let inv = dp.compose(&theta).rem(&m).inv_mod(&m).expect("separable place");
        theta = theta.sub(&val.mul(&inv)).rem(&m);
    }
    theta
}

fn section(b: &LocalBlock, theta: &KPoly, g: &KPoly) -> KPoly {
    g.rem(&b.chart).compose(theta).rem(&b.modulus(b.n))
}

/// log of the unipotent factor of a unit jet w ∈ (O/p^n)^×.
pub fn log_unipotent(b: &LocalBlock, w: &KPoly) -> KPoly {
    let m = b.modulus(b.n);
    let theta = hensel_root(b);
    let tor = section(b, &theta, w);
    let inv = tor.inv_mod(&m).expect("unit jet");
    let y = w.mul(&inv).rem(&m).sub(&KPoly::one(b.proto()));
    let mut acc = KPoly::zero(b.proto());
    let mut pw = y.clone();
    for k in 1..b.n.max(1) {
        let c = b.proto().from_int_like(if k % 2 == 1 { 1 } else { -1 }).div(&b.proto().from_int_like(k as i64)).expect("char 0");
        acc = acc.add(&pw.scale(&c));
        pw = pw.mul(&y).rem(&m);
    }
    acc.rem(&m)
}

fn jet_pow(j: &KPoly, e: u32, m: &KPoly) -> KPoly {
    let mut acc = KPoly::one(j.proto());
    for _ in 0..e {
        acc = acc.mul(j).rem(m);
    }
    acc
}

/// Smallest m ≤ bound with (f/g)^m ≡ c mod I_D for one constant c ∈ k^×, if any.
/// `d` lives on a single component labeled 0.
pub fn equal_up_to_torsion(f: &KRatFunc, g: &KRatFunc, d: &Divisor, proto: &NfElem, bound: u32) -> Option<u32> {
    let blocks = blocks_of(d, proto);
    let r = f.div(g).ok()?;
    let jets: Vec<(KPoly, KPoly)> = blocks.iter().map(|b| b.jet(&r).map(|j| (j, b.modulus(b.n)))).collect::<Option<_>>()?;
    'outer: for e in 1..=bound {
        let mut c: Option<NfElem> = None;
        for (j, m) in &jets {
            let p = jet_pow(j, e, m);
            if p.deg0() > 0 || p.is_zero() {
                continue 'outer;
            }
            let v = p.coeff(0);
            match &c {
                None => c = Some(v),
                Some(c0) if *c0 == v => {}
                Some(_) => continue 'outer,
            }
        }
        return Some(e);
    }
    None
}
