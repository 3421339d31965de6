//! Independent computation of dim 𝐇¹ from a truncated Čech total complex.
//!
//! The complex [I_Y → I_Z⁻¹Ω] is replaced by the quasi-isomorphic
//! [O → O_Y ⊕ I_Z⁻¹Ω], f ↦ (f|_Y, df), and evaluated on the affine cover
//! U₀ = X ∖ (|Z| ∪ {w₀}), U₁ = X ∖ (|Y| ∪ {w₁}):
//!
//!   C⁰ = O(U₀) ⊕ O(U₁)
//!   C¹ = O_Y ⊕ Ω(U₀) ⊕ Ω_Z(U₁) ⊕ O(U₀₁)
//!   C² = Ω(U₀₁)
//!
//! with d⁰(f₀, f₁) = (f₀|_Y, df₀, df₁, f₁ − f₀) and d¹(y, ω₀, ω₁, g) = ω₁ − ω₀ − dg.
//! Functions may have poles of order ≤ N at removed points, differentials
//! order ≤ N + 1. Every space uses partial-fraction coordinates, so all maps
//! are sparse.

use std::collections::BTreeMap;

use crate::exactfield::sparse::{normalize_row, sparse_rank, SparseRow};
use crate::exactfield::{KPoly, KRatFunc, NfElem, Scalar};
use crate::projline::{ModulusTriple, Place};

use super::uv::{aux_point, blocks_of, mono};
use super::ModcohError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechDim {
    pub dim: usize,
    pub truncation: usize,
    pub cochains: usize,
    pub rank_d0: usize,
    pub rank_d1: usize,
}

/// A space of functions or differentials h·dt with poles bounded at a set of places.
struct Space {
    /// (global place index, bound)
    places: Vec<(usize, usize)>,
    /// Bound at ∞; polynomial part of degree ≤ inf (functions) or ≤ inf − 2 (differentials).
    inf: usize,
    diff: bool,
    offs: BTreeMap<usize, usize>,
    poly_off: usize,
    poly_len: usize,
    dim: usize,
}

impl Space {
    fn new(places: Vec<(usize, usize)>, inf: usize, diff: bool, polys: &[KPoly]) -> Self {
        let mut offs = BTreeMap::new();
        let mut k = 0;
        for &(g, m) in &places {
            offs.insert(g, k);
            k += m * polys[g].deg0();
        }
        let poly_len = if diff { inf.saturating_sub(1) } else { inf + 1 };
        Space { places, inf, diff, offs, poly_off: k, poly_len, dim: k + poly_len }
    }

    fn bound(&self, g: usize) -> usize {
        self.places.iter().find(|x| x.0 == g).map(|x| x.1).unwrap_or(0)
    }

    /// Index of t^i/p_g^j.
    fn idx(&self, g: usize, j: usize, i: usize, polys: &[KPoly]) -> usize {
        assert!(j >= 1 && j <= self.bound(g), "pole order outside the truncation");
        self.offs[&g] + (j - 1) * polys[g].deg0() + i
    }

    /// Basis elements as (g, j, i) or a polynomial monomial t^e.
    fn basis(&self, polys: &[KPoly]) -> Vec<Elem> {
        let mut out = Vec::with_capacity(self.dim);
        for &(g, m) in &self.places {
            for j in 1..=m {
                for i in 0..polys[g].deg0() {
                    out.push(Elem::Frac(g, j, i));
                }
            }
        }
        for e in 0..self.poly_len {
            out.push(Elem::Mono(e));
        }
        out
    }

    /// Row "Σ_p coefficient of t^{deg p − 1}/p = 0": h·dt has no pole at ∞.
    fn infinity_constraint(&self, polys: &[KPoly], shift: usize, proto: &NfElem) -> Option<SparseRow<NfElem>> {
        if !self.diff || self.inf > 0 {
            return None;
        }
        let row: Vec<(usize, NfElem)> = self.places.iter().map(|&(g, _)| (shift + self.idx(g, 1, polys[g].deg0() - 1, polys), proto.one_like())).collect();
        Some(normalize_row(row))
    }
}

#[derive(Clone, Copy, Debug)]
enum Elem {
    Frac(usize, usize, usize),
    Mono(usize),
}

fn elem_fn(e: Elem, polys: &[KPoly], proto: &NfElem) -> KRatFunc {
    match e {
        Elem::Frac(g, j, i) => KRatFunc::new(KPoly::monomial(proto.one_like(), i), polys[g].pow(j)).expect("nonzero"),
        Elem::Mono(d) => KRatFunc::from_poly(KPoly::monomial(proto.one_like(), d)),
    }
}

/// Image of a basis element of `src` under inclusion into `dst`.
fn embed(e: Elem, dst: &Space, shift: usize, sign: &NfElem, polys: &[KPoly]) -> SparseRow<NfElem> {
    match e {
        Elem::Frac(g, j, i) => vec![(shift + dst.idx(g, j, i, polys), sign.clone())],
        Elem::Mono(d) => {
            assert!(d < dst.poly_len, "polynomial part outside the truncation");
            vec![(shift + dst.poly_off + d, sign.clone())]
        }
    }
}

/// d of a function basis element in the differential space `dst`.
fn deriv(e: Elem, dst: &Space, shift: usize, sign: &NfElem, polys: &[KPoly], proto: &NfElem) -> SparseRow<NfElem> {
    let mut out = Vec::new();
    match e {
        Elem::Frac(g, j, i) => {
            let p = &polys[g];
            let ti = KPoly::monomial(proto.one_like(), i);
            let lead = if i == 0 { KPoly::zero(proto) } else { KPoly::monomial(proto.from_int_like(i as i64), i - 1).mul(p) };
            let num = lead.sub(&ti.mul(&p.derivative()).scale(&proto.from_int_like(j as i64)));
            let (r1, r0) = num.divrem(p);
            for (c, jj) in [(r0, j + 1), (r1, j)] {
                for (ii, v) in mono(&c, p.deg0()).into_iter().enumerate() {
                    if !v.is_zero() {
                        out.push((shift + dst.idx(g, jj, ii, polys), v.mul(sign)));
                    }
                }
            }
        }
        Elem::Mono(d) => {
            if d > 0 {
                assert!(d - 1 < dst.poly_len);
                out.push((shift + dst.poly_off + d - 1, proto.from_int_like(d as i64).mul(sign)));
            }
        }
    }
    normalize_row(out)
}

/// Dimension of 𝐇¹ of one ℙ¹ from the complex truncated at N.
fn cech_p1(t: &ModulusTriple, n: usize, proto: &NfElem) -> CechDim {
    let yb = blocks_of(&t.y, proto);
    let zb = blocks_of(&t.z, proto);
    let mut places: Vec<Place> = yb.iter().chain(&zb).map(|b| b.place.clone()).collect();
    let w0 = aux_point(&places, &[], proto);
    let w1 = aux_point(&places, &[w0.clone()], proto);
    places.push(Place::point(0, &w0));
    places.push(Place::point(0, &w1));
    let polys: Vec<KPoly> = places.iter().map(|p| p.poly().cloned().unwrap_or_else(|| KPoly::var(proto))).collect();
    let is_fin = |i: usize| !places[i].is_infinity();
    let ny = yb.len();
    let nz = zb.len();
    let (iw0, iw1) = (ny + nz, ny + nz + 1);
    let y_idx: Vec<usize> = (0..ny).filter(|&i| is_fin(i)).collect();
    let z_idx: Vec<usize> = (ny..ny + nz).filter(|&i| is_fin(i)).collect();
    let inf_y = yb.iter().any(|b| b.place.is_infinity());
    let z_inf_mult = zb.iter().find(|b| b.place.is_infinity()).map(|b| b.n);
    let inf_z = z_inf_mult.is_some();

    let with = |idx: &[usize], extra: &[usize], m: usize| -> Vec<(usize, usize)> { idx.iter().chain(extra).map(|&g| (g, m)).collect() };

    let f0 = Space::new(with(&z_idx, &[iw0], n), if inf_z { n } else { 0 }, false, &polys);
    let f1 = Space::new(with(&y_idx, &[iw1], n), if inf_y { n } else { 0 }, false, &polys);
    let all: Vec<usize> = y_idx.iter().chain(&z_idx).copied().collect();
    let f01 = Space::new(with(&all, &[iw0, iw1], n), if inf_y || inf_z { n } else { 0 }, false, &polys);
    let w0s = Space::new(with(&z_idx, &[iw0], n + 1), if inf_z { n + 1 } else { 0 }, true, &polys);
    let mut w1_places = with(&y_idx, &[iw1], n + 1);
    for (k, b) in zb.iter().enumerate() {
        if !b.place.is_infinity() {
            w1_places.push((ny + k, b.n));
        }
    }
    let w1_inf = if inf_y { n + 1 } else { z_inf_mult.unwrap_or(0) };
    let w1s = Space::new(w1_places, w1_inf, true, &polys);
    let w01 = Space::new(with(&all, &[iw0, iw1], n + 1), if inf_y || inf_z { n + 1 } else { 0 }, true, &polys);

    // C¹ layout
    let oy_dim: usize = yb.iter().map(|b| b.jet_dim()).sum();
    let off_w0 = oy_dim;
    let off_w1 = off_w0 + w0s.dim;
    let off_g = off_w1 + w1s.dim;
    let c1_dim = off_g + f01.dim;
    let one = proto.one_like();
    let mone = one.neg();

    // d⁰ images
    let mut d0: Vec<SparseRow<NfElem>> = Vec::new();
    // Jets at Y blocks are assembled from cached jets of 1/p_g^j; a fresh modular
    // inverse per basis function dominates the run time otherwise. In the chart
    // s = 1/t at ∞, t^i/p^j = s^(j·deg p − i)/p̃(s)^j with p̃ the reversed polynomial.
    let moduli: Vec<KPoly> = yb.iter().map(|b| b.modulus(b.n)).collect();
    let mut inv_pows: BTreeMap<(usize, usize), Vec<KPoly>> = BTreeMap::new();
    for e in f0.basis(&polys) {
        let mut row = Vec::new();
        let mut k = 0;
        for (bi, b) in yb.iter().enumerate() {
            let m = &moduli[bi];
            let at_inf = b.place.is_infinity();
            let jet = match e {
                Elem::Frac(g, j, i) => {
                    let pows = inv_pows.entry((bi, g)).or_insert_with(|| {
                        let base = if at_inf { KPoly::new(polys[g].coeffs().iter().rev().cloned().collect(), proto.zero_like()) } else { polys[g].clone() };
                        vec![KPoly::one(proto), base.inv_mod(m).expect("U₀-functions are regular along Y")]
                    });
                    while pows.len() <= j {
                        let next = pows.last().expect("nonempty").mul(&pows[1]).rem(m);
                        pows.push(next);
                    }
                    let shift = if at_inf {
                        let d = j * polys[g].deg0();
                        assert!(d >= i, "U₀-functions are regular along Y");
                        d - i
                    } else {
                        i
                    };
                    KPoly::monomial(proto.one_like(), shift).mul(&pows[j]).rem(m)
                }
                Elem::Mono(_) if at_inf => b.jet(&elem_fn(e, &polys, proto)).expect("U₀-functions are regular along Y"),
                Elem::Mono(d) => KPoly::monomial(proto.one_like(), d).rem(m),
            };
            for (i, v) in mono(&jet, b.jet_dim()).into_iter().enumerate() {
                if !v.is_zero() {
                    row.push((k + i, v));
                }
            }
            k += b.jet_dim();
        }
        row.extend(deriv(e, &w0s, off_w0, &one, &polys, proto));
        row.extend(embed(e, &f01, off_g, &mone, &polys));
        d0.push(normalize_row(row));
    }
    for e in f1.basis(&polys) {
        let mut row = deriv(e, &w1s, off_w1, &one, &polys, proto);
        row.extend(embed(e, &f01, off_g, &one, &polys));
        d0.push(normalize_row(row));
    }
    let rank_d0 = sparse_rank(d0);

    // d¹ as columns, then transposed into rows over C²
    let mut rows: BTreeMap<usize, Vec<(usize, NfElem)>> = BTreeMap::new();
    let mut push_col = |col: usize, img: SparseRow<NfElem>| {
        for (r, v) in img {
            rows.entry(r).or_default().push((col, v));
        }
    };
    for (k, e) in w0s.basis(&polys).into_iter().enumerate() {
        push_col(off_w0 + k, embed(e, &w01, 0, &mone, &polys));
    }
    for (k, e) in w1s.basis(&polys).into_iter().enumerate() {
        push_col(off_w1 + k, embed(e, &w01, 0, &one, &polys));
    }
    for (k, e) in f01.basis(&polys).into_iter().enumerate() {
        push_col(off_g + k, deriv(e, &w01, 0, &mone, &polys, proto));
    }
    let mut d1rows: Vec<SparseRow<NfElem>> = rows.into_values().map(normalize_row).collect();
    d1rows.extend(w0s.infinity_constraint(&polys, off_w0, proto));
    d1rows.extend(w1s.infinity_constraint(&polys, off_w1, proto));
    let rank_d1 = sparse_rank(d1rows);

    CechDim { dim: c1_dim - rank_d1 - rank_d0, truncation: n, cochains: c1_dim, rank_d0, rank_d1 }
}

/// dim 𝐇¹ from the Čech model at truncation N, re-checked at N + 5.
pub fn cech_truncated(t: &ModulusTriple, n: usize, proto: &NfElem) -> Result<CechDim, ModcohError> {
    let min = t.y.degree() + t.z.degree() + 4;
    if n < min {
        return Err(ModcohError::TruncationTooSmall { given: n, required: min });
    }
    let mut total = CechDim { dim: 0, truncation: n, cochains: 0, rank_d0: 0, rank_d1: 0 };
    for c in 0..t.comps {
        let tc = t.component(c);
        let a = cech_p1(&tc, n, proto);
        let b = cech_p1(&tc, n + 5, proto);
        if a.dim != b.dim {
            return Err(ModcohError::TruncationUnstable { n, at_n: a.dim, at_n5: b.dim });
        }
        total.dim += a.dim;
        total.cochains += a.cochains;
        total.rank_d0 += a.rank_d0;
        total.rank_d1 += a.rank_d1;
    }
    Ok(total)
}

/// Default truncation deg Y + deg Z + 4.
pub fn cech_dim(t: &ModulusTriple, proto: &NfElem) -> Result<CechDim, ModcohError> {
    cech_truncated(t, t.y.degree() + t.z.degree() + 4, proto)
}
