//! Pullback, pushforward and the residue pairing on the (η, φ) model of a
//! single ℙ¹, plus the corresponding maps on U and V.

use crate::exactfield::{KMatrix, KPoly, KRatFunc, NfElem, Scalar};
use crate::projline::local::{pull_differential, pull_function, push_differential, residue};
use crate::projline::{trace_along, RationalMap};

use super::ambient::Ambient;
use super::graded::unit;
use super::uv::{lift_jets, LocalBlock, USpace, VSpace};
use super::ModcohError;

fn internal(msg: &str) -> ModcohError {
    ModcohError::Internal(msg.to_string())
}

/// f*: amb(dst) → amb(src), (η′, φ′) ↦ (f*η′, (Φ′∘f)|_Y).
pub fn pull_ambient(f: &RationalMap, src: &Ambient, dst: &Ambient) -> Result<KMatrix, ModcohError> {
    let proto = src.proto().clone();
    let mut cols = Vec::with_capacity(dst.dim());
    for i in 0..dst.dim() {
        let e = dst.basis_vector(i);
        let h = pull_differential(f, &dst.eta_fn(&e));
        let lift = lift_jets(&dst.y, &dst.phi_jets(&e), &proto);
        let jets = src.restrict_to_y(&pull_function(f, &lift)).ok_or_else(|| internal("pulled lift has a pole along Y"))?;
        cols.push(src.encode(&h, &jets).ok_or_else(|| internal("pulled differential exceeds the pole bound"))?);
    }
    Ok(KMatrix::from_cols(&cols, src.dim(), &proto))
}

/// f_*: amb(src) → amb(dst), (η, φ) ↦ (Tr η, Tr Φ|_{Y′}).
pub fn push_ambient(f: &RationalMap, src: &Ambient, dst: &Ambient) -> Result<KMatrix, ModcohError> {
    let proto = src.proto().clone();
    let mut cols = Vec::with_capacity(src.dim());
    for i in 0..src.dim() {
        let e = src.basis_vector(i);
        let h = push_differential(f, &src.eta_fn(&e)).map_err(ModcohError::Geom)?;
        let lift = lift_jets(&src.y, &src.phi_jets(&e), &proto);
        let tr = trace_along(f, &lift).map_err(ModcohError::Geom)?;
        let jets = dst.restrict_to_y(&tr).ok_or_else(|| internal("trace of the lift has a pole along Y′"))?;
        cols.push(dst.encode(&h, &jets).ok_or_else(|| internal("trace of η exceeds the pole bound"))?);
    }
    Ok(KMatrix::from_cols(&cols, dst.dim(), &proto))
}

fn local_pairing(blocks: &[LocalBlock], jets: &[KPoly], h: &KRatFunc) -> NfElem {
    let mut acc = h.num().proto().zero_like();
    for (b, j) in blocks.iter().zip(jets) {
        if j.is_zero() {
            continue;
        }
        let r = residue(&b.jet_as_function(j).mul(h), &b.place).expect("squarefree place");
        acc = acc.add(&r);
    }
    acc
}

/// ⟨(η, φ), (η′, φ′)⟩ = Σ_Y res(φ·η′) − Σ_Z res(φ′·η), between amb(X, Y, Z) and amb(X, Z, Y).
pub fn gram_ambient(amb: &Ambient, dual: &Ambient) -> KMatrix {
    let proto = amb.proto().clone();
    let left: Vec<(KRatFunc, Vec<KPoly>)> = (0..amb.dim()).map(|i| {
        let e = amb.basis_vector(i);
        (amb.eta_fn(&e), amb.phi_jets(&e))
    }).collect();
    let right: Vec<(KRatFunc, Vec<KPoly>)> = (0..dual.dim()).map(|j| {
        let e = dual.basis_vector(j);
        (dual.eta_fn(&e), dual.phi_jets(&e))
    }).collect();
    KMatrix::from_fn(amb.dim(), dual.dim(), &proto, |i, j| {
        let (h, phi) = &left[i];
        let (h2, phi2) = &right[j];
        local_pairing(&amb.y, phi, h2).sub(&local_pairing(&dual.y, phi2, h))
    })
}

/// Jets at every block of a divisor, filling the U-jets into the non-reduced ones.
fn full_jets(all: &[LocalBlock], u: &USpace, x: &[NfElem]) -> Vec<KPoly> {
    let uj = u.jets(x);
    let mut k = 0;
    all.iter()
        .map(|b| {
            if b.n >= 2 {
                k += 1;
                uj[k - 1].clone()
            } else {
                KPoly::zero(b.proto())
            }
        })
        .collect()
}

/// f*: U(D′) → U(D) by composition and reduction.
pub fn u_pull_blocks(f: &RationalMap, u_src: &USpace, all_dst: &[LocalBlock], u_dst: &USpace) -> Result<KMatrix, ModcohError> {
    let proto = all_dst.first().map(|b| b.proto().clone()).unwrap_or_else(|| f.proto().clone());
    let mut cols = Vec::new();
    for j in 0..u_dst.dim() {
        let lift = lift_jets(all_dst, &full_jets(all_dst, u_dst, &unit(u_dst.dim(), j, &proto)), &proto);
        let pulled = pull_function(f, &lift);
        let jets: Vec<KPoly> = u_src.blocks.iter().map(|b| b.jet(&pulled)).collect::<Option<_>>().ok_or_else(|| internal("pole along D"))?;
        cols.push(u_src.coords(&jets));
    }
    Ok(KMatrix::from_cols(&cols, u_src.dim(), &proto))
}

/// f_*: U(D) → U(D′) by trace and reduction.
pub fn u_push_blocks(f: &RationalMap, all_src: &[LocalBlock], u_src: &USpace, u_dst: &USpace) -> Result<KMatrix, ModcohError> {
    let proto = f.proto().clone();
    let mut cols = Vec::new();
    for j in 0..u_src.dim() {
        let lift = lift_jets(all_src, &full_jets(all_src, u_src, &unit(u_src.dim(), j, &proto)), &proto);
        let tr = trace_along(f, &lift).map_err(ModcohError::Geom)?;
        let jets: Vec<KPoly> = u_dst.blocks.iter().map(|b| b.jet(&tr)).collect::<Option<_>>().ok_or_else(|| internal("pole along D′"))?;
        cols.push(u_dst.coords(&jets));
    }
    Ok(KMatrix::from_cols(&cols, u_dst.dim(), &proto))
}

/// f*: V(D′) → V(D), v′ ↦ principal parts of v̂′∘f.
pub fn v_pull_blocks(f: &RationalMap, v_src: &VSpace, v_dst: &VSpace) -> KMatrix {
    let proto = f.proto().clone();
    let cols: Vec<Vec<NfElem>> = (0..v_dst.dim())
        .map(|j| v_src.coords_of_func(&pull_function(f, &v_dst.func(&unit(v_dst.dim(), j, &proto)))))
        .collect();
    KMatrix::from_cols(&cols, v_src.dim(), &proto)
}

/// f_*: V(D) → V(D′), v ↦ principal parts of Tr v̂ (so that d commutes with the trace).
pub fn v_push_blocks(f: &RationalMap, v_src: &VSpace, v_dst: &VSpace) -> Result<KMatrix, ModcohError> {
    let proto = f.proto().clone();
    let mut cols = Vec::new();
    for j in 0..v_src.dim() {
        let tr = trace_along(f, &v_src.func(&unit(v_src.dim(), j, &proto))).map_err(ModcohError::Geom)?;
        cols.push(v_dst.coords_of_func(&tr));
    }
    Ok(KMatrix::from_cols(&cols, v_dst.dim(), &proto))
}
